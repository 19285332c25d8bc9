"""Index arithmetic over Z_d^n, pure states and bipartitions.

Basis strings are big-endian: qudit 1 is the most significant digit of the
flat index, so ``|k1 k2 ... kn>`` reads left to right. Positions are 1-based
wherever a user sees them (``Bipartition.positions``, CLI flags, file
formats) and 0-based inside array code (``Bipartition.sites``).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

NORM_TOL = 1e-12


class DimensionError(ValueError):
    """Raised when objects of incompatible (n, d) are combined."""


def _check_nd(n: int, d: int) -> None:
    if int(n) < 1:
        raise ValueError(f"number of parties must be >= 1, got n={n}")
    if int(d) < 2:
        raise ValueError(f"local dimension must be >= 2, got d={d}")


@dataclass(frozen=True)
class QuditString:
    digits: tuple[int, ...]
    d: int

    def __post_init__(self):
        digits = tuple(int(x) for x in self.digits)
        object.__setattr__(self, "digits", digits)
        _check_nd(max(len(digits), 1), self.d)
        if not digits:
            raise ValueError("a qudit string needs at least one digit")
        bad = [x for x in digits if not 0 <= x < self.d]
        if bad:
            raise ValueError(f"digits {bad} out of range for d={self.d}")

    @property
    def n(self) -> int:
        return len(self.digits)

    def __len__(self) -> int:
        return len(self.digits)

    def __iter__(self):
        return iter(self.digits)

    def __getitem__(self, i):
        return self.digits[i]

    def __add__(self, other: "QuditString") -> "QuditString":
        _same_shape(self, other)
        return QuditString(tuple((a + b) % self.d for a, b in zip(self, other)), self.d)

    def __sub__(self, other: "QuditString") -> "QuditString":
        _same_shape(self, other)
        return QuditString(tuple((a - b) % self.d for a, b in zip(self, other)), self.d)

    def meet(self, other: "QuditString") -> "QuditString":
        """Digit-wise minimum over representatives in {0, ..., d-1}."""
        _same_shape(self, other)
        return QuditString(tuple(min(a, b) for a, b in zip(self, other)), self.d)

    def is_zero(self) -> bool:
        return not any(self.digits)

    def __str__(self) -> str:
        sep = "" if self.d <= 10 else ","
        return sep.join(str(x) for x in self.digits)


def _same_shape(a: QuditString, b: QuditString) -> None:
    if a.n != b.n or a.d != b.d:
        raise DimensionError(f"strings of shape (n={a.n}, d={a.d}) and (n={b.n}, d={b.d}) differ")


def qudit_string(digits: Sequence[int] | str, d: int) -> QuditString:
    # "0110" or "0,12,3" (commas needed once d > 10)
    if isinstance(digits, str):
        digits = digits.split(",") if "," in digits else list(digits.strip())
    return QuditString(tuple(digits), d)


def index_of(s: QuditString) -> int:
    idx = 0
    for x in s.digits:
        idx = idx * s.d + x
    return idx


def string_of(index: int, n: int, d: int) -> QuditString:
    _check_nd(n, d)
    if not 0 <= index < d**n:
        raise ValueError(f"index {index} outside [0, {d**n})")
    digits = []
    for _ in range(n):
        index, r = divmod(index, d)
        digits.append(r)
    return QuditString(tuple(reversed(digits)), d)


def all_strings(n: int, d: int) -> np.ndarray:
    """Digit table of shape (d**n, n); row i is ``string_of(i)``."""
    _check_nd(n, d)
    idx = np.arange(d**n)
    powers = d ** np.arange(n - 1, -1, -1)
    return (idx[:, None] // powers[None, :]) % d


def hamming_weight(s: QuditString) -> int:
    return sum(1 for x in s.digits if x != 0)


def hamming_distance(a: QuditString, b: QuditString) -> int:
    _same_shape(a, b)
    return sum(1 for x, y in zip(a.digits, b.digits) if x != y)


@dataclass(frozen=True)
class Bipartition:
    """Subset A of the parties, given as 1-based positions."""

    positions: tuple[int, ...]
    n: int
    d: int = 2

    def __post_init__(self):
        pos = tuple(sorted(int(p) for p in self.positions))
        object.__setattr__(self, "positions", pos)
        _check_nd(self.n, self.d)
        if len(set(pos)) != len(pos):
            raise ValueError(f"repeated positions in {self.positions}")
        if not pos or len(pos) >= self.n:
            raise ValueError("A must be a nonempty proper subset of {1..n}")
        if pos[0] < 1 or pos[-1] > self.n:
            raise ValueError(f"positions {pos} outside 1..{self.n}")

    @property
    def sites(self) -> tuple[int, ...]:
        return tuple(p - 1 for p in self.positions)

    @property
    def complement_sites(self) -> tuple[int, ...]:
        inside = set(self.sites)
        return tuple(j for j in range(self.n) if j not in inside)

    @property
    def n_a(self) -> int:
        return len(self.positions)

    @property
    def n_abar(self) -> int:
        return self.n - self.n_a

    @property
    def dim_a(self) -> int:
        return self.d**self.n_a

    @property
    def dim_abar(self) -> int:
        return self.d**self.n_abar

    @property
    def balanced(self) -> bool:
        return self.n_a == self.n // 2

    def complement(self) -> "Bipartition":
        return Bipartition(tuple(j + 1 for j in self.complement_sites), self.n, self.d)

    def label(self) -> str:
        return ";".join(str(p) for p in self.positions)


def balanced_bipartitions(n: int, d: int = 2) -> list[Bipartition]:
    """All C(n, n//2) subsets of size n//2, in lexicographic order.

    For even n a subset and its complement are both listed.
    """
    if n < 2:
        raise ValueError(f"balanced bipartitions need n >= 2, got n={n}")
    out = [Bipartition(tuple(j + 1 for j in c), n, d) for c in combinations(range(n), n // 2)]
    assert len(out) == comb(n, n // 2)
    return out


def subsets_of_size(n: int, k: int) -> list[tuple[int, ...]]:
    """0-based subsets of size k; used where k need not be balanced."""
    return list(combinations(range(n), k))


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized amplitude vector z over Z_d^n in flat big-endian order.

    Construction renormalizes; ``norm_deviation`` keeps | ||z|| - 1 | of the
    input so truncated coefficient tables can be audited.
    """

    n: int
    d: int
    amplitudes: np.ndarray
    norm_deviation: float = field(default=0.0)

    def __post_init__(self):
        _check_nd(self.n, self.d)
        z = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if z.size != self.d**self.n:
            raise DimensionError(f"expected {self.d ** self.n} amplitudes, got {z.size}")
        norm = float(np.linalg.norm(z))
        if norm == 0.0 or not np.isfinite(norm):
            raise ValueError("state vector has zero or non-finite norm")
        # leave already-normalized input untouched so file round trips are bit-exact
        if abs(norm - 1.0) > 8 * np.finfo(float).eps:
            z = z / norm
        z.setflags(write=False)
        object.__setattr__(self, "amplitudes", z)
        if self.norm_deviation == 0.0:
            object.__setattr__(self, "norm_deviation", abs(norm - 1.0))

    @property
    def dim(self) -> int:
        return self.d**self.n

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((self.d,) * self.n)

    def amplitude(self, s: QuditString) -> complex:
        return complex(self.amplitudes[index_of(s)])

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "amplitudes": [[float(a.real), float(a.imag)] for a in self.amplitudes],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "PureState":
        amps = np.array([complex(re, im) for re, im in obj["amplitudes"]])
        return cls(int(obj["n"]), int(obj["d"]), amps)


def basis_state(s: QuditString) -> PureState:
    z = np.zeros(s.d**s.n, dtype=complex)
    z[index_of(s)] = 1.0
    return PureState(s.n, s.d, z)


def product_zero(n: int, d: int) -> PureState:
    return basis_state(QuditString((0,) * n, d))


def superposition(strings: Iterable[QuditString], coeffs: Iterable[complex] | None = None) -> PureState:
    strings = list(strings)
    if not strings:
        raise ValueError("empty superposition")
    n, d = strings[0].n, strings[0].d
    coeffs = [1.0] * len(strings) if coeffs is None else list(coeffs)
    z = np.zeros(d**n, dtype=complex)
    for s, c in zip(strings, coeffs, strict=True):
        _same_shape(strings[0], s)
        z[index_of(s)] += c
    return PureState(n, d, z)


def ghz(n: int, d: int = 2) -> PureState:
    return superposition(QuditString((j,) * n, d) for j in range(d))


def write_state(state: PureState, path: str | Path) -> None:
    Path(path).write_text(json.dumps(state.to_json(), indent=1))


def read_state(path: str | Path) -> PureState:
    return PureState.from_json(json.loads(Path(path).read_text()))
