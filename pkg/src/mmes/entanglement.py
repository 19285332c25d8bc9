"""Purity, potential of multipartite entanglement and the coupling function.

The potential is the quartic form ``pi_ME(z) = sum Delta(k,k';l,l') z_k z_k' conj(z_l) conj(z_l')``.
Delta has two independent evaluations here: the average of Kronecker-delta
products over all bipartitions of fixed size (``coupling_delta_bruteforce``)
and the Hamming-weight closed form (``coupling_delta``).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Sequence

import numpy as np

from .core import (
    Bipartition,
    DimensionError,
    PureState,
    QuditString,
    all_strings,
    balanced_bipartitions,
    hamming_weight,
)

DEFAULT_TERM_LIMIT = 2**27


class GuardExceeded(RuntimeError):
    """A requested enumeration is larger than the configured limit."""


def _binom(a: int, b: int) -> int:
    # zero whenever either argument is negative
    if a < 0 or b < 0 or b > a:
        return 0
    return comb(a, b)


# ---------------------------------------------------------------- purities

def _matricize(amplitudes: np.ndarray, n: int, d: int, sites: Sequence[int]) -> np.ndarray:
    """Reshape z (or a batch of z) into N_A x N_Abar matrices, A = sites."""
    rest = [j for j in range(n) if j not in set(sites)]
    batch = amplitudes.shape[:-1]
    t = amplitudes.reshape(batch + (d,) * n)
    nb = len(batch)
    order = list(range(nb)) + [nb + j for j in sites] + [nb + j for j in rest]
    return t.transpose(order).reshape(batch + (d ** len(sites), d ** len(rest)))


def reduced_density(state: PureState, b: Bipartition) -> np.ndarray:
    """rho_A = tr_Abar |psi><psi|, contracted without forming the N x N projector."""
    if b.n != state.n:
        raise DimensionError(f"bipartition of {b.n} parties applied to a {state.n}-party state")
    m = _matricize(state.amplitudes, state.n, state.d, b.sites)
    return m @ m.conj().T


def purity(state: PureState, b: Bipartition) -> float:
    rho = reduced_density(state, b)
    return float(np.sum(np.abs(rho) ** 2))


def batch_purity(amplitudes: np.ndarray, n: int, d: int, sites: Sequence[int]) -> np.ndarray:
    """Purities tr(rho_A^2) for a stack of state vectors of shape (..., d**n)."""
    m = _matricize(np.asarray(amplitudes), n, d, sites)
    # use the smaller Gram matrix; tr(rho_A^2) = tr(rho_Abar^2)
    if m.shape[-2] <= m.shape[-1]:
        rho = m @ np.conj(np.swapaxes(m, -1, -2))
    else:
        rho = np.conj(np.swapaxes(m, -1, -2)) @ m
    return np.sum(np.abs(rho) ** 2, axis=(-2, -1))


def purity_profile(state: PureState) -> list[tuple[Bipartition, float]]:
    return [(b, purity(state, b)) for b in balanced_bipartitions(state.n, state.d)]


def potential_me(state: PureState) -> float:
    """Average purity over the C(n, n//2) balanced bipartitions."""
    values = [p for _, p in purity_profile(state)]
    return float(np.mean(values))


def batch_potential_me(amplitudes: np.ndarray, n: int, d: int) -> np.ndarray:
    parts = balanced_bipartitions(n, d)
    acc = np.zeros(np.asarray(amplitudes).shape[:-1])
    for b in parts:
        acc = acc + batch_purity(amplitudes, n, d, b.sites)
    return acc / len(parts)


# -------------------------------------------------------- coupling function

@dataclass(frozen=True)
class CouplingQuery:
    k: QuditString
    kp: QuditString
    l: QuditString
    lp: QuditString
    n_a: int | None = None

    def __post_init__(self):
        ref = self.k
        for s in (self.kp, self.l, self.lp):
            if s.n != ref.n or s.d != ref.d:
                raise DimensionError("all four strings of a coupling query must share n and d")
        if self.n_a is None:
            object.__setattr__(self, "n_a", ref.n // 2)
        if not 1 <= self.n_a <= ref.n - 1:
            raise ValueError(f"n_A={self.n_a} outside 1..{ref.n - 1}")

    @property
    def n(self) -> int:
        return self.k.n

    @property
    def d(self) -> int:
        return self.k.d


@lru_cache(maxsize=None)
def f_table(n: int, n_a: int) -> np.ndarray:
    """f as a function of the two Hamming weights, shape (n+1, n+1)."""
    total = comb(n, n_a)
    out = np.zeros((n + 1, n + 1))
    for a in range(n + 1):
        for b in range(n + 1 - a):
            rest = n - a - b
            out[a, b] = (_binom(rest, n_a - a) + _binom(rest, n_a - b)) / (2 * total)
    out.setflags(write=False)
    return out


def f_weight(u: QuditString, v: QuditString, n_a: int) -> float:
    wa, wb = hamming_weight(u), hamming_weight(v)
    if wa + wb > u.n:
        return 0.0
    return float(f_table(u.n, n_a)[wa, wb])


def coupling_delta(q: CouplingQuery) -> float:
    """Closed form: conservation law, disjoint supports, then f of the weights."""
    if not (q.k + q.kp - q.l - q.lp).is_zero():
        return 0.0
    a = q.k - q.l
    b = q.kp - q.l
    if not a.meet(b).is_zero():
        return 0.0
    return f_weight(a, b, q.n_a)


def coupling_delta_bruteforce(q: CouplingQuery) -> float:
    """Average over |A| = n_A of the symmetrized product of four Kronecker deltas."""
    n = q.n
    k, kp, l, lp = q.k.digits, q.kp.digits, q.l.digits, q.lp.digits
    total = 0
    for sub in combinations(range(n), q.n_a):
        inside = set(sub)
        cross = all((kp[j] == l[j] and k[j] == lp[j]) if j in inside else
                    (k[j] == l[j] and kp[j] == lp[j]) for j in range(n))
        straight = all((kp[j] == lp[j] and k[j] == l[j]) if j in inside else
                       (kp[j] == l[j] and k[j] == lp[j]) for j in range(n))
        total += int(cross) + int(straight)
    return total / (2 * comb(n, q.n_a))


def delta(k, kp, l, lp, n_a: int | None = None, *, d: int | None = None) -> float:
    """Convenience wrapper accepting QuditStrings or digit sequences."""
    def conv(s):
        return s if isinstance(s, QuditString) else QuditString(tuple(s), d)
    return coupling_delta(CouplingQuery(conv(k), conv(kp), conv(l), conv(lp), n_a))


def delta_block(n: int, d: int, k_index: int, n_a: int | None = None) -> np.ndarray:
    """Closed-form Delta(k, k'; l, l') for fixed k over all (k', l, l'), shape (N, N, N)."""
    n_a = n // 2 if n_a is None else n_a
    digits = all_strings(n, d)
    k = digits[k_index]
    kp = digits[:, None, None, :]
    l = digits[None, :, None, :]
    lp = digits[None, None, :, :]
    conserved = np.all((k + kp - l - lp) % d == 0, axis=-1)
    a = (k - l) % d
    b = (kp - l) % d
    disjoint = np.all(np.minimum(a, b) == 0, axis=-1)
    wa = np.broadcast_to(np.count_nonzero(a, axis=-1), conserved.shape)
    wb = np.broadcast_to(np.count_nonzero(b, axis=-1), conserved.shape)
    ok = conserved & disjoint
    out = np.zeros(conserved.shape)
    out[ok] = f_table(n, n_a)[wa[ok], wb[ok]]
    return out


def delta_block_bruteforce(n: int, d: int, k_index: int, n_a: int | None = None) -> np.ndarray:
    """Delta from its definition for fixed k over all (k', l, l'), shape (N, N, N)."""
    n_a = n // 2 if n_a is None else n_a
    digits = all_strings(n, d)
    k = digits[k_index]
    kp = digits[:, None, None, :]
    l = digits[None, :, None, :]
    lp = digits[None, None, :, :]
    eq_kp_l = kp == l
    eq_k_lp = k == lp
    eq_k_l = k == l
    eq_kp_lp = kp == lp
    cross = eq_kp_l & eq_k_lp
    straight = eq_k_l & eq_kp_lp
    total = np.zeros(np.broadcast_shapes(cross.shape, straight.shape)[:-1], dtype=np.int64)
    for sub in combinations(range(n), n_a):
        mask = np.zeros(n, dtype=bool)
        mask[list(sub)] = True
        term1 = np.all(np.where(mask, cross, straight), axis=-1)
        term2 = np.all(np.where(mask, straight, cross), axis=-1)
        total += term1.astype(np.int64) + term2.astype(np.int64)
    return total / (2 * comb(n, n_a))


def delta_table(n: int, d: int, n_a: int | None = None, limit: int = 2**24) -> np.ndarray:
    """Dense closed-form Delta of shape (N, N, N, N); only for small oracles."""
    size = (d**n) ** 4
    if size > limit:
        raise GuardExceeded(f"dense Delta table needs {size} entries (limit {limit})")
    return np.stack([delta_block(n, d, i, n_a) for i in range(d**n)])


def potential_me_via_delta(state: PureState, limit: int = DEFAULT_TERM_LIMIT) -> float:
    """Evaluate the quartic form, summing only over l' = k + k' - l."""
    n, d = state.n, state.d
    big_n = d**n
    if big_n**3 > limit:
        raise GuardExceeded(f"{big_n ** 3} constrained terms exceed the limit {limit}")
    z = state.amplitudes
    digits = all_strings(n, d)
    powers = d ** np.arange(n - 1, -1, -1)
    ftab = f_table(n, n // 2)
    kp = digits[:, None, :]
    l = digits[None, :, :]
    total = 0.0 + 0.0j
    for ki in range(big_n):
        k = digits[ki]
        lp_digits = (k + kp - l) % d
        lp = lp_digits @ powers
        a = (k - l) % d
        b = (kp - l) % d
        ok = np.all(np.minimum(a, b) == 0, axis=-1)
        wa = np.broadcast_to(np.count_nonzero(a, axis=-1), ok.shape)
        wb = np.count_nonzero(b, axis=-1)
        coeff = np.where(ok, ftab[wa, wb], 0.0)
        total += z[ki] * np.sum(coeff * z[:, None] * np.conj(z)[None, :] * np.conj(z[lp]))
    return float(total.real)


# --------------------------------------------------------------- symmetries

def _check_perm(p: Sequence[int], size: int, base: int, what: str) -> None:
    if sorted(p) != list(range(base, base + size)):
        raise ValueError(f"{what} {list(p)} is not a permutation of {base}..{base + size - 1}")


def act_on_digits(digits: np.ndarray, symbol_perms: Sequence[Sequence[int]], site_perm: Sequence[int]) -> np.ndarray:
    """(p_1..p_n; q)(k)_j = p_j(k_{q(j)}); site_perm is 1-based, digits rows are strings."""
    digits = np.asarray(digits)
    n = digits.shape[-1]
    cols = [np.asarray(symbol_perms[j])[digits[..., site_perm[j] - 1]] for j in range(n)]
    return np.stack(cols, axis=-1)


def act_on_string(s: QuditString, symbol_perms, site_perm) -> QuditString:
    return QuditString(tuple(int(x) for x in act_on_digits(np.array(s.digits), symbol_perms, site_perm)), s.d)


def apply_symmetry(state: PureState, symbol_perms: Sequence[Sequence[int]] | None,
                   site_perm: Sequence[int] | None) -> PureState:
    """Relabel basis strings by the induced bijection: amplitude z_k moves to g(k)."""
    n, d = state.n, state.d
    symbol_perms = [list(range(d))] * n if symbol_perms is None else [list(p) for p in symbol_perms]
    site_perm = list(range(1, n + 1)) if site_perm is None else list(site_perm)
    if len(symbol_perms) != n:
        raise ValueError(f"need {n} symbol permutations, got {len(symbol_perms)}")
    for p in symbol_perms:
        _check_perm(p, d, 0, "symbol permutation")
    _check_perm(site_perm, n, 1, "site permutation")
    digits = all_strings(n, d)
    image = act_on_digits(digits, symbol_perms, site_perm) @ (d ** np.arange(n - 1, -1, -1))
    z = np.zeros_like(state.amplitudes)
    z[image] = state.amplitudes
    return PureState(n, d, z)


def apply_local_unitaries(state: PureState, unitaries: Sequence[np.ndarray]) -> PureState:
    t = state.tensor()
    for j, u in enumerate(unitaries):
        t = np.moveaxis(np.tensordot(u, t, axes=([1], [j])), 0, j)
    return PureState(state.n, state.d, t.reshape(-1))
