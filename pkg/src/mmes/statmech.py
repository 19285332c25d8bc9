"""Canonical ensemble of pi_ME over Haar-random pure states.

Random streams come from Philox (counter based) generators keyed by a
``SeedSequence``. A run of S samples is cut into fixed-size chunks and chunk
i always uses child stream i, so estimates do not depend on how many
workers evaluate the chunks.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import PureState
from .entanglement import batch_potential_me

CHUNK = 16384


def make_rng(seed: int | np.random.SeedSequence) -> np.random.Generator:
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(int(seed))
    return np.random.Generator(np.random.Philox(ss))


def haar_vectors(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    """``count`` uniformly distributed unit vectors in C^dim, shape (count, dim)."""
    x = rng.standard_normal((count, 2 * dim))
    z = x[:, :dim] + 1j * x[:, dim:]
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def sample_haar(n: int, d: int, seed: int) -> PureState:
    """Normalize 2N independent standard normals read as N complex amplitudes."""
    return PureState(n, d, haar_vectors(make_rng(seed), 1, d**n)[0])


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar unitary by QR of a complex Ginibre matrix with phase fix."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


@dataclass(frozen=True)
class EnsembleConfig:
    n: int
    d: int
    beta: float = 0.0
    samples: int = 10_000
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")


@dataclass(frozen=True)
class Estimate:
    estimate: float
    stderr: float
    samples: int
    seed: int

    def as_dict(self) -> dict:
        return {"estimate": self.estimate, "stderr": self.stderr, "samples": self.samples, "seed": self.seed}

    def consistent_with(self, value: float, sigmas: float = 4.0, slack: float = 0.0) -> bool:
        return abs(self.estimate - value) <= sigmas * self.stderr + slack


def _chunk_values(n: int, d: int, ss: np.random.SeedSequence, count: int) -> np.ndarray:
    z = haar_vectors(make_rng(ss), count, d**n)
    return batch_potential_me(z, n, d)


def sample_pime(cfg: EnsembleConfig) -> np.ndarray:
    """pi_ME of ``cfg.samples`` Haar states, in stream order."""
    n_chunks = math.ceil(cfg.samples / CHUNK)
    children = np.random.SeedSequence(cfg.seed).spawn(n_chunks)
    sizes = [CHUNK] * (n_chunks - 1) + [cfg.samples - CHUNK * (n_chunks - 1)]
    args = [(cfg.n, cfg.d, ss, size) for ss, size in zip(children, sizes)]
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            parts = list(pool.map(lambda a: _chunk_values(*a), args))
    else:
        parts = [_chunk_values(*a) for a in args]
    return np.concatenate(parts)


def _mean_se(x: np.ndarray) -> tuple[float, float]:
    se = float(np.std(x, ddof=1) / math.sqrt(x.size)) if x.size > 1 else math.inf
    return float(np.mean(x)), se


def estimate_moments(cfg: EnsembleConfig, order: int) -> list[Estimate]:
    """Sample means of H, H^2, ..., H^order at beta = 0 from one set of draws."""
    if cfg.beta != 0.0:
        raise ValueError("moments are taken in the infinite-temperature ensemble (beta = 0)")
    if order < 1:
        raise ValueError("moment order must be >= 1")
    h = sample_pime(cfg)
    out = []
    for m in range(1, order + 1):
        mean, se = _mean_se(h**m)
        out.append(Estimate(mean, se, cfg.samples, cfg.seed))
    return out


def estimate_moment(cfg: EnsembleConfig, m: int) -> Estimate:
    return estimate_moments(cfg, m)[-1]


def estimate_partition_function(cfg: EnsembleConfig) -> Estimate:
    w = np.exp(-cfg.beta * sample_pime(cfg))
    mean, se = _mean_se(w)
    return Estimate(mean, se, cfg.samples, cfg.seed)


def ratio_estimate(h: np.ndarray, beta: float) -> tuple[float, float]:
    """sum H e^{-beta H} / sum e^{-beta H} with a delta-method standard error."""
    # shift by min(H) for overflow safety; cancels in the ratio
    w = np.exp(-beta * (h - h.min()))
    r = float(np.sum(h * w) / np.sum(w))
    if h.size < 2:
        return r, math.inf
    resid = w * (h - r)
    se = float(np.std(resid, ddof=1) / (np.mean(w) * math.sqrt(h.size)))
    return r, se


def estimate_average_energy(cfg: EnsembleConfig) -> Estimate:
    r, se = ratio_estimate(sample_pime(cfg), cfg.beta)
    return Estimate(r, se, cfg.samples, cfg.seed)


# --------------------------------------------------------------- Metropolis

@dataclass
class ChainResult:
    state: np.ndarray
    energy: float
    energies: np.ndarray
    acceptance: float
    step: float
    betas: list[float] = field(default_factory=list)
    stage_acceptance: list[float] = field(default_factory=list)


def metropolis(z0: np.ndarray, n: int, d: int, betas: Sequence[float], sweeps: int,
               rng: np.random.Generator, step: float = 0.1, adapt: bool = True,
               target: tuple[float, float] = (0.3, 0.5)) -> ChainResult:
    """Random walk on the unit sphere targeting exp(-beta H) dmu.

    Proposal: add a complex Gaussian of scale ``step`` to every amplitude and
    renormalize; it is symmetric under the uniform measure, so acceptance is
    min(1, exp(-beta dH)). One stage of ``sweeps`` moves runs per beta. With
    ``adapt`` the step is rescaled between stages toward ``target`` acceptance.
    """
    z = np.asarray(z0, dtype=complex)
    z = z / np.linalg.norm(z)
    h = float(batch_potential_me(z, n, d))
    energies = []
    accepted_total = 0
    stage_acc = []
    for beta in betas:
        accepted = 0
        for _ in range(sweeps):
            prop = z + step * (rng.standard_normal(z.size) + 1j * rng.standard_normal(z.size)) / math.sqrt(2)
            prop /= np.linalg.norm(prop)
            hp = float(batch_potential_me(prop, n, d))
            dh = hp - h
            if dh <= 0 or rng.random() < math.exp(-beta * dh):
                z, h = prop, hp
                accepted += 1
            energies.append(h)
        rate = accepted / sweeps
        stage_acc.append(rate)
        accepted_total += accepted
        if adapt and beta > 0:
            lo, hi = target
            if rate < lo:
                step *= 0.7
            elif rate > hi:
                step *= 1.3
    total = sweeps * len(betas)
    return ChainResult(z, h, np.array(energies), accepted_total / max(total, 1), step,
                       list(betas), stage_acc)


def metropolis_average_energy(n: int, d: int, beta: float, seed: int, burn_in_stages: int = 30,
                              sweeps: int = 2000, measure: int = 20000, beta_start: float = 1.0) -> Estimate:
    """<H>_beta from an annealed Metropolis chain: ramp beta up geometrically, then measure.

    The standard error uses batch means over 20 batches of the measurement run.
    """
    rng = make_rng(seed)
    z0 = haar_vectors(rng, 1, d**n)[0]
    ramp = list(np.geomspace(beta_start, beta, burn_in_stages)) if beta > beta_start else [beta]
    warm = metropolis(z0, n, d, ramp, sweeps, rng)
    run = metropolis(warm.state, n, d, [beta] * 20, measure // 20, rng, step=warm.step)
    batches = run.energies.reshape(20, -1).mean(axis=1)
    return Estimate(float(batches.mean()), float(batches.std(ddof=1) / math.sqrt(20)), measure, seed)


# ---------------------------------------------------------------- cumulants

@dataclass(frozen=True)
class CumulantTable:
    moments: tuple
    cumulants: tuple
    moment_errors: tuple | None = None

    @property
    def order(self) -> int:
        return len(self.moments)


def cumulants_from_moments(moments: Sequence, errors: Sequence[float] | None = None) -> CumulantTable:
    """kappa_m = <H^m> - sum_{j<m} C(m-1, j-1) kappa_j <H^{m-j}>.

    Works with floats or exact Fractions.
    """
    moments = tuple(moments)
    if not moments:
        raise ValueError("need at least the first moment")
    kappa = []
    for m in range(1, len(moments) + 1):
        k = moments[m - 1]
        for j in range(1, m):
            k = k - math.comb(m - 1, j - 1) * kappa[j - 1] * moments[m - j - 1]
        kappa.append(k)
    return CumulantTable(moments, tuple(kappa), None if errors is None else tuple(errors))


def series_average_energy(beta: float, table: CumulantTable, trust_radius: float = 1.0) -> float:
    """Truncated high-temperature series sum_m (-beta)^{m-1}/(m-1)! kappa_m."""
    if abs(beta) > trust_radius:
        raise ValueError(f"|beta|={abs(beta)} outside the trust radius {trust_radius}")
    return float(sum((-beta) ** (m - 1) / math.factorial(m - 1) * float(k)
                     for m, k in enumerate(table.cumulants, start=1)))


def exact_cumulants(n: int, d: int, order: int) -> CumulantTable:
    from .moments import exact_moment_fraction

    return cumulants_from_moments([exact_moment_fraction(n, d, m) for m in range(1, order + 1)])
