"""Exact Haar moments of pi_ME from square brackets of slot permutations.

``<H^m>_0 = sum_p [p] / (N (N+1) ... (N+2m-1))`` with the bracket
``[p] = sum_k prod_j Delta(k_j, k_j'; k_p(j), k_p(j'))``.

Two bracket evaluators are provided:

``dense``
    contracts the dense closed-form Delta table with einsum, i.e. the literal
    sum over all of Z_d^{2mn}. Only feasible for tiny N.
``transfer``
    expands each Delta into its average over bipartitions. The Kronecker
    deltas then factor over qudit positions, and each position contributes
    d^(number of label cycles). A dynamic program over positions tracks how
    many positions each vertex has put on its "crossed" side. The result is
    an exact rational and costs O(n (n+1)^m 2^m), independent of d.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations

import numpy as np

from .entanglement import GuardExceeded, delta_table
from .graphs import (
    CENSUS_LIMIT,
    CensusLimitError,
    FeynmanGraph,
    SlotPermutation,
    cactus_value,
    census,
    graph_of_permutation,
)

DENSE_LIMIT = 2**26


def _as_perm(p) -> SlotPermutation:
    if isinstance(p, SlotPermutation):
        return p
    if isinstance(p, FeynmanGraph):
        return p.perm
    if isinstance(p, str):
        return SlotPermutation.parse(p)
    return SlotPermutation(tuple(p))


def _cycles(sigma: list[int]) -> int:
    seen = [False] * len(sigma)
    count = 0
    for a in range(len(sigma)):
        if not seen[a]:
            count += 1
            while not seen[a]:
                seen[a] = True
                a = sigma[a]
    return count


@lru_cache(maxsize=None)
def _column_cycles(images: tuple[int, ...]) -> tuple[int, ...]:
    """Cycle count of the label identification for every straight/crossed column.

    Bit j of the column index set means vertex j is crossed at that position:
    straight ties j ~ p(j), j' ~ p(j'); crossed ties j ~ p(j'), j' ~ p(j).
    """
    m = len(images) // 2
    out = []
    for col in range(2**m):
        sigma = list(images)
        for j in range(m):
            if col >> j & 1:
                sigma[2 * j], sigma[2 * j + 1] = images[2 * j + 1], images[2 * j]
        out.append(_cycles(sigma))
    return tuple(out)


def bracket_exact(p, n: int, d: int) -> Fraction:
    """Exact square bracket by the position-factorized transfer recursion."""
    p = _as_perm(p)
    m = p.m
    n_a, n_abar = n // 2, n - n // 2
    cycles = _column_cycles(p.images)
    col_weight = [d**c for c in cycles]
    crossed = [tuple(col >> j & 1 for j in range(m)) for col in range(2**m)]
    # state: per-vertex count of crossed positions (capped at n_abar)
    states: dict[tuple[int, ...], int] = {(0,) * m: 1}
    for _ in range(n):
        nxt: dict[tuple[int, ...], int] = {}
        for counts, value in states.items():
            for col in range(2**m):
                new = tuple(c + x for c, x in zip(counts, crossed[col]))
                if max(new) > n_abar:
                    continue
                nxt[new] = nxt.get(new, 0) + value * col_weight[col]
        states = nxt
    total = 0
    for counts, value in states.items():
        weight = 1
        for c in counts:
            weight *= int(c == n_a) + int(c == n_abar)
            if not weight:
                break
        total += weight * value
    return Fraction(total, (2 * math.comb(n, n_a)) ** m)


def square_bracket(p, n: int, d: int, method: str = "transfer", limit: int = DENSE_LIMIT) -> float:
    p = _as_perm(p)
    if method == "transfer":
        return float(bracket_exact(p, n, d))
    if method == "dense":
        return bracket_dense(p, n, d, limit=limit)
    raise ValueError(f"unknown bracket method {method!r}")


def bracket_dense(p, n: int, d: int, limit: int = DENSE_LIMIT) -> float:
    """Literal sum over all label tuples, contracting the dense Delta table."""
    p = _as_perm(p)
    big_n = d**n
    if big_n**4 > limit or big_n ** (2 * p.m) > limit * 64:
        raise GuardExceeded(f"dense bracket over N={big_n}, m={p.m} exceeds the limit")
    t = delta_table(n, d, limit=limit)
    letters = "abcdefghijklmnopqrstuvwxyz"
    operands, specs = [], []
    for j in range(p.m):
        a, ap = 2 * j, 2 * j + 1
        specs.append(letters[a] + letters[ap] + letters[p(a)] + letters[p(ap)])
        operands.append(t)
    return float(np.einsum(",".join(specs) + "->", *operands, optimize=True))


# ---------------------------------------------------------------- moments

def rising_factorial(x: int, k: int) -> int:
    return math.prod(range(x, x + k))


def _check_order(m: int) -> None:
    if m < 1:
        raise ValueError("moment order must be >= 1")
    if m > CENSUS_LIMIT:
        raise CensusLimitError(f"exact moments enumerate (2m)! permutations; m <= {CENSUS_LIMIT}")


def exact_moment_fraction(n: int, d: int, m: int) -> Fraction:
    _check_order(m)
    big_n = d**n
    total = sum(cls.degeneracy * bracket_exact(cls.representative, n, d) for cls in census(m).classes)
    return total / rising_factorial(big_n, 2 * m)


def exact_moment(n: int, d: int, m: int, grouped: bool = True, method: str = "transfer") -> float:
    """<H^m>_0 over the Haar measure.

    ``grouped`` sums one bracket per isomorphism class times its degeneracy;
    otherwise every one of the (2m)! permutations is evaluated.
    """
    _check_order(m)
    if grouped and method == "transfer":
        return float(exact_moment_fraction(n, d, m))
    big_n = d**n
    if grouped:
        total = sum(c.degeneracy * square_bracket(c.representative, n, d, method) for c in census(m).classes)
    else:
        total = math.fsum(square_bracket(SlotPermutation(q), n, d, method) for q in permutations(range(2 * m)))
    return total / rising_factorial(big_n, 2 * m)


@dataclass(frozen=True)
class MomentSplit:
    m: int
    total: float
    cactus: float
    noncactus: float

    @property
    def ratio(self) -> float:
        return self.noncactus / self.cactus


def moment_split(n: int, d: int, m: int) -> MomentSplit:
    """Cactus part from the closed form, non-cactus part from exact brackets."""
    _check_order(m)
    big_n = d**n
    dim_a, dim_abar = d ** (n // 2), d ** (n - n // 2)
    denom = rising_factorial(big_n, 2 * m)
    cactus_sum, other = [], Fraction(0)
    for cls in census(m).classes:
        if cls.cactus:
            cactus_sum.append(cls.degeneracy * cactus_value(cls.graph, big_n, dim_a, dim_abar))
        else:
            other += cls.degeneracy * bracket_exact(cls.representative, n, d)
    c = math.fsum(cactus_sum) / denom
    nc = float(other / denom)
    return MomentSplit(m, c + nc, c, nc)


def qubit_f2(n: int) -> float:
    """Closed-form f_2(N) for qubits entering the m = 2 non-cactus ratio."""
    n_a, n_abar = n // 2, n - n // 2
    s = math.fsum(
        math.comb(n_a, k) * math.comb(n_abar, k) * 2 ** (n / 2) * (4 ** (n / 4 - k) + 4 ** (-(n / 4 - k)))
        for k in range(n_a + 1)
    )
    return 2 * s / math.comb(n, n_a)


def qubit_m2_ratio(n: int) -> float:
    """<H^2>_NC / <H^2>_C = f_2(N) / ((N+4)(N_A+N_Abar)^2) for d = 2."""
    big_n = 2**n
    return qubit_f2(n) / ((big_n + 4) * (2 ** (n // 2) + 2 ** (n - n // 2)) ** 2)


def prefactor_identity(big_n: int, m: int) -> tuple[Fraction, Fraction]:
    """Both normalizations of a cactus term: N!/(N+2m-1)! and N/(N(N+1)...(N+2m-1)).

    The factorial form absorbs the factor N that each connected cactus carries.
    """
    lhs = Fraction(math.factorial(big_n), math.factorial(big_n + 2 * m - 1))
    rhs = Fraction(big_n, rising_factorial(big_n, 2 * m))
    return lhs, rhs


def all_permutations(m: int):
    for q in permutations(range(2 * m)):
        yield SlotPermutation(q)


def noncactus_bracket_bound(n: int, d: int, m: int) -> float:
    """N ((N_A + N_Abar)/2)^(m-1).

    Proposed as a per-bracket bound for non-cactus graphs, but the two-vertex
    eye already exceeds it (10 > 8 at n = d = 2), so callers should treat it
    as a reference scale only.
    """
    return d**n * ((d ** (n // 2) + d ** (n - n // 2)) / 2) ** (m - 1)


__all__ = [
    "MomentSplit",
    "all_permutations",
    "bracket_dense",
    "bracket_exact",
    "exact_moment",
    "exact_moment_fraction",
    "graph_of_permutation",
    "moment_split",
    "noncactus_bracket_bound",
    "qubit_f2",
    "qubit_m2_ratio",
    "rising_factorial",
    "square_bracket",
]
