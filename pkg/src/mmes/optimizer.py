"""Minimization of pi_ME on the unit sphere and the sigma_7 reconstruction."""
from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb
from pathlib import Path

import numpy as np

from . import data
from .core import Bipartition, PureState, balanced_bipartitions
from .entanglement import _matricize, batch_potential_me
from .statmech import haar_vectors, make_rng, metropolis


@dataclass(frozen=True)
class OptimizerConfig:
    n: int
    d: int = 2
    restarts: int = 20
    max_iter: int = 4000
    ftol: float = 1e-13
    step_rule: str = "backtracking"
    step: float = 0.5
    tol: float = 1e-9
    seed: int = 0
    workers: int = 1
    # annealing schedule
    beta0: float = 1.0
    beta_max: float = 400.0
    stages: int = 40
    sweeps: int = 400

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.tol <= 0:
            raise ValueError("tolerance must be positive")
        if self.step_rule not in ("fixed", "backtracking"):
            raise ValueError(f"unknown step rule {self.step_rule!r}")


@dataclass
class RestartTrace:
    seed_index: int
    start_value: float
    final_value: float
    iterations: int
    grad_norm: float
    acceptance: float | None = None


@dataclass
class MinimizationResult:
    state: PureState
    value: float
    traces: list[RestartTrace]
    purities: list[tuple[Bipartition, float]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "n": self.state.n,
            "d": self.state.d,
            "pime": self.value,
            "restarts": [vars(t) for t in self.traces],
            "purities": [{"partition": b.label(), "purity": p} for b, p in self.purities],
            "state": self.state.to_json(),
        }


# ---------------------------------------------------------------- gradient

def pime_and_grad(z: np.ndarray, n: int, d: int) -> tuple[float, np.ndarray]:
    """pi_ME(z) and its Wirtinger gradient d pi_ME / d conj(z).

    For each balanced A with z reshaped to M (N_A x N_Abar):
    d tr(rho_A^2) / d conj(M) = 2 rho_A M.
    """
    parts = balanced_bipartitions(n, d)
    value = 0.0
    grad = np.zeros((d,) * n, dtype=complex)
    for b in parts:
        mat = _matricize(z, n, d, b.sites)
        rho = mat @ mat.conj().T
        value += float(np.sum(np.abs(rho) ** 2))
        g = (2 * rho @ mat).reshape((d,) * n)
        order = list(b.sites) + list(b.complement_sites)
        grad += np.transpose(g, np.argsort(order))
    return value / len(parts), grad.reshape(-1) / len(parts)


def grad_pime(state: PureState) -> np.ndarray:
    """Conjugate-coordinate gradient, C(n, n//2)^-1 sum_A 2 (rho_A x I) z."""
    return pime_and_grad(state.amplitudes, state.n, state.d)[1]


def tangent_gradient(z: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Project out the radial direction: g - Re<z, g> z."""
    return g - np.real(np.vdot(z, g)) * z


def descend(z0: np.ndarray, n: int, d: int, max_iter: int = 4000, tol: float = 1e-9,
            step: float = 0.5, step_rule: str = "backtracking",
            ftol: float = 1e-13, window: int = 100) -> tuple[np.ndarray, float, int, float, list[float]]:
    """Projected gradient descent, renormalizing after every step.

    Backtracking uses the Armijo condition along the tangent gradient and
    lets the step grow again after each accepted move, so accepted steps never
    increase pi_ME. Stops on a small tangent gradient or when pi_ME dropped by
    less than ``ftol`` over the last ``window`` iterations.
    """
    z = np.asarray(z0, dtype=complex)
    z = z / np.linalg.norm(z)
    value, g = pime_and_grad(z, n, d)
    history = [value]
    gn = 0.0
    it = 0
    for it in range(1, max_iter + 1):
        gt = tangent_gradient(z, g)
        gn = float(np.linalg.norm(gt))
        if gn < tol:
            break
        if step_rule == "fixed":
            z = z - step * gt
            z /= np.linalg.norm(z)
            value, g = pime_and_grad(z, n, d)
        else:
            eta = step
            while True:
                trial = z - eta * gt
                trial /= np.linalg.norm(trial)
                tv, tg = pime_and_grad(trial, n, d)
                if tv <= value - 1e-4 * eta * gn**2:
                    break
                eta *= 0.5
                if eta < 1e-12:
                    tv = None
                    break
            if tv is None:
                break
            z, value, g = trial, tv, tg
            step = min(eta * 2.0, 8.0)
        history.append(value)
        if len(history) > window and history[-window - 1] - value < ftol:
            break
    return z, value, it, gn, history


def polish(state: PureState, max_iter: int = 4000, tol: float = 1e-9) -> PureState:
    z, *_ = descend(state.amplitudes, state.n, state.d, max_iter=max_iter, tol=tol)
    return PureState(state.n, state.d, z)


def _restart(cfg: OptimizerConfig, index: int, ss: np.random.SeedSequence):
    rng = make_rng(ss)
    z0 = haar_vectors(rng, 1, cfg.d**cfg.n)[0]
    start = float(batch_potential_me(z0, cfg.n, cfg.d))
    z, value, it, gn, _ = descend(z0, cfg.n, cfg.d, cfg.max_iter, cfg.tol, cfg.step, cfg.step_rule, cfg.ftol)
    return z, RestartTrace(index, start, value, it, gn)


def _run_restarts(cfg: OptimizerConfig, fn) -> list:
    children = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)
    jobs = list(enumerate(children))
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            return list(pool.map(fn, [cfg] * len(jobs), *zip(*jobs)))
    return [fn(cfg, i, ss) for i, ss in jobs]


def _finish(cfg: OptimizerConfig, runs: list) -> MinimizationResult:
    best_z, _ = min(runs, key=lambda r: r[1].final_value)
    state = PureState(cfg.n, cfg.d, best_z)
    profile = [(b, p) for b, p in purity_entries(state)]
    value = float(np.mean([p for _, p in profile]))
    return MinimizationResult(state, value, [t for _, t in runs], profile)


def minimize_pime(cfg: OptimizerConfig) -> MinimizationResult:
    """Best of ``cfg.restarts`` projected-gradient runs from Haar-random starts."""
    return _finish(cfg, _run_restarts(cfg, _restart))


def _anneal_restart(cfg: OptimizerConfig, index: int, ss: np.random.SeedSequence):
    rng = make_rng(ss)
    z0 = haar_vectors(rng, 1, cfg.d**cfg.n)[0]
    start = float(batch_potential_me(z0, cfg.n, cfg.d))
    betas = np.geomspace(max(cfg.beta0, 1e-9), cfg.beta_max, cfg.stages) if cfg.beta0 > 0 else \
        np.concatenate([[0.0], np.geomspace(1.0, cfg.beta_max, cfg.stages - 1)])
    chain = metropolis(z0, cfg.n, cfg.d, list(betas), cfg.sweeps, rng)
    z, value, it, gn, _ = descend(chain.state, cfg.n, cfg.d, cfg.max_iter, cfg.tol, cfg.step, cfg.step_rule, cfg.ftol)
    return z, RestartTrace(index, start, value, it, gn, chain.acceptance)


def anneal(cfg: OptimizerConfig) -> MinimizationResult:
    """Metropolis walk with beta ramped geometrically from beta0 to beta_max, then polished."""
    return _finish(cfg, _run_restarts(cfg, _anneal_restart))


# ------------------------------------------------------------------ sigma_7

def sigma7_state() -> PureState:
    """sum_ij c_ij |MMES_4>_i (x) |GHZ>_j, MMES_4 on qubits 1-4, GHZ on qubits 5-7."""
    mmes4 = np.array(data.MMES4_BASIS, dtype=float) / 4
    ghz = np.zeros((8, 8))
    for j, (a, b, sign) in enumerate(data.GHZ3_BASIS):
        ghz[j, a] = 1 / math.sqrt(2)
        ghz[j, b] = sign / math.sqrt(2)
    z = np.zeros(128, dtype=complex)
    for (i, j), (re, im) in data.SIGMA7_COEFFS.items():
        z += complex(re, im) * np.kron(mmes4[i - 1], ghz[j - 1])
    return PureState(7, 2, z)


# ---------------------------------------------------------------- histogram

def purity_entries(state: PureState) -> list[tuple[Bipartition, float]]:
    parts = balanced_bipartitions(state.n, state.d)
    z = state.amplitudes
    return [(b, float(np.sum(np.abs(_gram(z, state.n, state.d, b)) ** 2))) for b in parts]


def _gram(z, n, d, b):
    mat = _matricize(z, n, d, b.sites)
    return mat @ mat.conj().T


@dataclass
class PurityHistogram:
    entries: list[tuple[Bipartition, float]]
    edges: np.ndarray
    counts: np.ndarray

    @property
    def mean(self) -> float:
        return float(np.mean([p for _, p in self.entries]))

    def bimodal(self) -> bool:
        """At least two occupied bins with an empty bin between them."""
        occupied = np.flatnonzero(self.counts)
        return bool(occupied.size >= 2 and np.any(np.diff(occupied) > 1))

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["partition", "purity"])
            for b, p in self.entries:
                w.writerow([b.label(), repr(p)])

    def to_json(self) -> dict:
        return {
            "entries": [{"partition": b.label(), "purity": p} for b, p in self.entries],
            "edges": self.edges.tolist(),
            "counts": self.counts.tolist(),
        }


def purity_histogram(state: PureState, bins: int = 20) -> PurityHistogram:
    entries = purity_entries(state)
    values = np.array([p for _, p in entries])
    lo, hi = float(values.min()), float(values.max())
    if hi - lo < 1e-12:
        lo, hi = lo - 0.5e-3, hi + 0.5e-3
    counts, edges = np.histogram(values, bins=bins, range=(lo, hi))
    return PurityHistogram(entries, edges, counts)


def lower_bound(n: int, d: int) -> float:
    return 1.0 / d ** (n // 2)


def n_balanced(n: int) -> int:
    return comb(n, n // 2)
