"""Prime-field codes and the perfect-MMES states built from them."""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .core import PureState, QuditString, superposition


class CodeConditionError(ValueError):
    """A code does not satisfy the preconditions of a construction."""


def is_prime(d: int) -> bool:
    if d < 2:
        return False
    f = 2
    while f * f <= d:
        if d % f == 0:
            return False
        f += 1
    return True


def next_prime(x: int) -> int:
    while not is_prime(x):
        x += 1
    return x


@dataclass(frozen=True)
class LinearCode:
    d: int
    n: int
    codewords: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        words = tuple(tuple(int(x) for x in w) for w in self.codewords)
        object.__setattr__(self, "codewords", words)
        if not words:
            raise ValueError("a code needs at least one codeword")
        if any(len(w) != self.n for w in words):
            raise ValueError(f"all codewords must have length {self.n}")
        if any(not 0 <= x < self.d for w in words for x in w):
            raise ValueError(f"codeword symbols must lie in 0..{self.d - 1}")
        if len(set(words)) != len(words):
            raise ValueError("codewords must be distinct")

    @property
    def size(self) -> int:
        return len(self.codewords)

    @cached_property
    def distance(self) -> int:
        return min_distance(self)

    def strings(self) -> list[QuditString]:
        return [QuditString(w, self.d) for w in self.codewords]

    def to_json(self) -> dict:
        return {"d": self.d, "n": self.n, "codewords": [list(w) for w in self.codewords]}

    @classmethod
    def from_json(cls, obj: dict) -> "LinearCode":
        return cls(int(obj["d"]), int(obj["n"]), tuple(tuple(w) for w in obj["codewords"]))


def code_from_strings(words: Iterable[str | Sequence[int]], d: int) -> LinearCode:
    rows = [tuple(int(c) for c in w) for w in words]
    return LinearCode(d, len(rows[0]), tuple(rows))


def reed_solomon(n: int, d: int, k: int) -> LinearCode:
    """Evaluate every polynomial of degree < k over Z_d at the points 1..n."""
    if not is_prime(d):
        raise CodeConditionError(f"d={d} is not prime (only prime fields are supported)")
    if not 1 <= k <= n:
        raise CodeConditionError(f"need 1 <= k <= n, got k={k}, n={n}")
    if n > d - 1:
        raise CodeConditionError(f"n={n} exceeds d-1={d - 1} nonzero evaluation points")
    points = np.arange(1, n + 1)
    vander = np.stack([points**e % d for e in range(k)])  # (k, n)
    coeffs = np.array(list(product(range(d), repeat=k)), dtype=np.int64)
    words = coeffs @ vander % d
    return LinearCode(d, n, tuple(tuple(int(x) for x in w) for w in words))


def min_distance(code: LinearCode) -> int:
    if code.size < 2:
        raise ValueError("minimum distance needs at least two codewords")
    w = np.array(code.codewords)
    best = code.n
    for i in range(code.size - 1):
        dist = np.count_nonzero(w[i + 1:] != w[i], axis=1)
        best = min(best, int(dist.min()))
    return best


@dataclass(frozen=True)
class SingletonReport:
    bound: int
    size: int
    distance: int
    within_bound: bool
    is_mds: bool


def singleton_mds_check(code: LinearCode) -> SingletonReport:
    """Singleton bound M <= d^(n - delta + 1); MDS when saturated."""
    delta = code.distance
    bound = code.d ** (code.n - delta + 1)
    return SingletonReport(bound, code.size, delta, code.size <= bound, code.size == bound)


def mmes_from_code(code: LinearCode) -> PureState:
    """Uniform superposition of codewords; perfect MMES when M = d^(n//2) and delta >= n - n//2 + 1."""
    n_a = code.n // 2
    n_abar = code.n - n_a
    if code.n < 2:
        raise CodeConditionError("need n >= 2 parties")
    if code.size != code.d**n_a:
        raise CodeConditionError(f"M = d^(n//2) violated: M={code.size}, d^{n_a}={code.d ** n_a}")
    if code.distance < n_abar + 1:
        raise CodeConditionError(f"delta >= n_Abar + 1 violated: delta={code.distance}, n_Abar+1={n_abar + 1}")
    return superposition(code.strings())


def write_code(code: LinearCode, path: str | Path) -> None:
    Path(path).write_text(json.dumps(code.to_json()))


def read_code(path: str | Path) -> LinearCode:
    return LinearCode.from_json(json.loads(Path(path).read_text()))
