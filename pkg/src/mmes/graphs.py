"""Feynman graphs of slot permutations.

A permutation p of the 2m slot labels {1..m, 1'..m'} is stored 0-based:
label 2j is ``j+1`` and label 2j+1 is ``(j+1)'``; both belong to vertex j.
Vertex j receives the edges carrying k_j and k_j' and emits the edges
carrying k_p(j) and k_p(j'), so every slot a yields the directed edge
owner(a) -> owner(p(a)). The edge is named by the label it carries, p(a).
"""
from __future__ import annotations

import math
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterable, Sequence

import numpy as np

CENSUS_LIMIT = 4


class CensusLimitError(RuntimeError):
    pass


class NotCactusError(ValueError):
    pass


# ------------------------------------------------------------ slot labels

def label_name(a: int) -> str:
    return f"{a // 2 + 1}'" if a % 2 else f"{a // 2 + 1}"


def parse_label(text: str) -> int:
    text = text.strip()
    primed = text.endswith("'")
    j = int(text.rstrip("'"))
    if j < 1:
        raise ValueError(f"bad slot label {text!r}")
    return 2 * (j - 1) + int(primed)


@dataclass(frozen=True)
class SlotPermutation:
    """p as a tuple: ``images[a] = p(a)`` over 0-based slot labels."""

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(x) for x in self.images)
        object.__setattr__(self, "images", images)
        if len(images) % 2 or sorted(images) != list(range(len(images))):
            raise ValueError(f"{images} is not a permutation of an even number of slots")

    @property
    def m(self) -> int:
        return len(self.images) // 2

    def __call__(self, a: int) -> int:
        return self.images[a]

    def bracket(self) -> str:
        """Square-bracket notation, e.g. ``[1 2, 1' 2']``."""
        pairs = [f"{label_name(self.images[2 * j])} {label_name(self.images[2 * j + 1])}"
                 for j in range(self.m)]
        return "[" + ", ".join(pairs) + "]"

    @classmethod
    def parse(cls, text: str) -> "SlotPermutation":
        body = text.strip().lstrip("[").rstrip("]")
        images: list[int] = []
        for pair in body.split(","):
            parts = pair.split()
            if len(parts) != 2:
                raise ValueError(f"each vertex needs two labels, got {pair!r}")
            images.extend(parse_label(x) for x in parts)
        return cls(tuple(images))

    @classmethod
    def identity(cls, m: int) -> "SlotPermutation":
        return cls(tuple(range(2 * m)))


# ------------------------------------------------------------------ graphs

@dataclass(frozen=True)
class FeynmanGraph:
    m: int
    edges: tuple[tuple[int, int], ...]
    perm: SlotPermutation | None = field(default=None, compare=False)

    @property
    def adjacency(self) -> np.ndarray:
        adj = np.zeros((self.m, self.m), dtype=np.int64)
        for u, v in self.edges:
            adj[u, v] += 1
        return adj

    def components(self) -> list[list[int]]:
        return _components(range(self.m), self.edges)

    @property
    def connected(self) -> bool:
        return len(self.components()) == 1

    def subgraph(self, vertices: Sequence[int]) -> "FeynmanGraph":
        keep = sorted(vertices)
        pos = {v: i for i, v in enumerate(keep)}
        edges = tuple((pos[u], pos[v]) for u, v in self.edges if u in pos)
        return FeynmanGraph(len(keep), edges)

    def canonical(self) -> str:
        return canonical_form(self)

    def is_cactus(self) -> bool:
        return is_cactus(self)


def graph_of_permutation(p: SlotPermutation | Sequence[int]) -> FeynmanGraph:
    if not isinstance(p, SlotPermutation):
        p = SlotPermutation(tuple(p))
    edges = tuple((a // 2, p.images[a] // 2) for a in range(2 * p.m))
    g = FeynmanGraph(p.m, edges, p)
    assert all(x == 2 for x in g.adjacency.sum(axis=0)) and all(x == 2 for x in g.adjacency.sum(axis=1))
    return g


def _components(vertices: Iterable[int], edges: Iterable[tuple[int, int]]) -> list[list[int]]:
    vertices = list(vertices)
    parent = {v: v for v in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    groups: dict[int, list[int]] = defaultdict(list)
    for v in vertices:
        groups[find(v)].append(v)
    return sorted(groups.values())


@lru_cache(maxsize=None)
def _canonical_from_adjacency(m: int, flat: tuple[int, ...]) -> str:
    adj = np.array(flat, dtype=np.int64).reshape(m, m)
    best = None
    for order in permutations(range(m)):
        idx = np.array(order)
        key = tuple(adj[np.ix_(idx, idx)].reshape(-1))
        if best is None or key < best:
            best = key
    rows = ["".join(str(x) for x in best[i * m:(i + 1) * m]) for i in range(m)]
    return f"{m}:" + "/".join(rows)


def canonical_form(g: FeynmanGraph) -> str:
    """Minimum row-major adjacency-count encoding over all vertex orderings.

    Slot labels are discarded; edge direction is kept.
    """
    if g.m > 8:
        raise CensusLimitError(f"canonical form by exhaustive relabeling is limited to m <= 8, got {g.m}")
    return _canonical_from_adjacency(g.m, tuple(int(x) for x in g.adjacency.reshape(-1)))


# ------------------------------------------------------------------ cactus

def _component_is_cactus(vertices: list[int], edges: list[tuple[int, int]]) -> bool:
    if len(vertices) == 1:
        return True
    for v in vertices:
        incident = [i for i, (a, b) in enumerate(edges) if v in (a, b)]
        found = False
        for i, j in combinations(incident, 2):
            rest = [e for t, e in enumerate(edges) if t not in (i, j)]
            if len(_components(vertices, rest)) > 1:
                found = True
                break
        if not found:
            return False
    return True


def component_cactus_flags(g: FeynmanGraph) -> list[bool]:
    flags = []
    for comp in g.components():
        members = set(comp)
        edges = [e for e in g.edges if e[0] in members]
        flags.append(_component_is_cactus(comp, edges))
    return flags


def is_cactus(g: FeynmanGraph) -> bool:
    """True iff every connected component is a cactus.

    A component with v >= 2 is a cactus when each of its vertices has a pair
    of incident edges whose removal disconnects the component.
    """
    return all(component_cactus_flags(g))


def is_cactus_by_reduction(g: FeynmanGraph) -> bool:
    """Cactus test by repeated leaf removal, independent of ``is_cactus``.

    A component is a cactus iff removing vertices that carry a self-loop,
    splicing their remaining in- and out-edge, shrinks it to one vertex.
    """
    for comp in g.components():
        members = set(comp)
        edges = [e for e in g.edges if e[0] in members]
        alive = set(comp)
        while len(alive) > 1:
            leaf = next((v for v in alive if (v, v) in edges), None)
            if leaf is None:
                return False
            edges.remove((leaf, leaf))
            src = next(u for u, w in edges if w == leaf)
            dst = next(w for u, w in edges if u == leaf)
            edges.remove((src, leaf))
            edges.remove((leaf, dst))
            edges.append((src, dst))
            alive.remove(leaf)
    return True


def cactus_value(g: FeynmanGraph, dim: int, dim_a: int, dim_abar: int) -> float:
    """Closed-form bracket of an all-cactus graph: prod over components of N s^v."""
    if not is_cactus(g):
        raise NotCactusError("closed form applies to cactus graphs only")
    s = (dim_a + dim_abar) / 2
    return float(np.prod([dim * s ** len(c) for c in g.components()]))


# ------------------------------------------------------------------ census

@dataclass(frozen=True)
class GraphClass:
    canonical: str
    degeneracy: int
    cactus: bool
    connected: bool
    components: int
    representative: SlotPermutation

    @property
    def graph(self) -> FeynmanGraph:
        return graph_of_permutation(self.representative)


@dataclass(frozen=True)
class GraphCensus:
    m: int
    classes: tuple[GraphClass, ...]

    @property
    def total_degeneracy(self) -> int:
        return sum(c.degeneracy for c in self.classes)

    @property
    def n_cactus_classes(self) -> int:
        return sum(1 for c in self.classes if c.cactus)

    @property
    def n_noncactus_classes(self) -> int:
        return sum(1 for c in self.classes if not c.cactus)

    def by_canonical(self) -> dict[str, GraphClass]:
        return {c.canonical: c for c in self.classes}


def _census_block(m: int, first: int) -> dict[str, list]:
    """Classify permutations with p(0) = first; returns canonical -> [count, min perm]."""
    out: dict[str, list] = {}
    rest = [a for a in range(2 * m) if a != first]
    for tail in permutations(rest):
        images = (first,) + tail
        adj = np.zeros((m, m), dtype=np.int64)
        for a, b in enumerate(images):
            adj[a // 2, b // 2] += 1
        key = _canonical_from_adjacency(m, tuple(int(x) for x in adj.reshape(-1)))
        slot = out.get(key)
        if slot is None:
            out[key] = [1, images]
        else:
            slot[0] += 1
    return out


def census(m: int, workers: int = 1, limit: int = CENSUS_LIMIT) -> GraphCensus:
    """Classify all (2m)! slot permutations into isomorphism classes."""
    if m < 1:
        raise ValueError("census needs m >= 1")
    if m > limit:
        raise CensusLimitError(f"census of (2m)! = {math.factorial(2 * m)} permutations exceeds m <= {limit}")
    firsts = list(range(2 * m))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(_census_block, [m] * len(firsts), firsts))
    else:
        blocks = [_census_block(m, f) for f in firsts]
    merged: dict[str, list] = {}
    for block in blocks:
        for key, (count, rep) in block.items():
            if key in merged:
                merged[key][0] += count
                merged[key][1] = min(merged[key][1], rep)
            else:
                merged[key] = [count, rep]
    classes = []
    for key, (count, rep) in merged.items():
        perm = SlotPermutation(rep)
        g = graph_of_permutation(perm)
        classes.append(GraphClass(key, count, is_cactus(g), g.connected, len(g.components()), perm))
    classes.sort(key=lambda c: (c.components, not c.cactus, -c.degeneracy, c.canonical))
    return GraphCensus(m, tuple(classes))


def degeneracy_bound(v: int) -> int:
    return 4**v * math.factorial(v)


def degeneracy_bound_check(c: GraphCensus) -> bool:
    return all(cls.degeneracy <= degeneracy_bound(c.m) for cls in c.classes)


# ------------------------------------------------------------ loop bound

def has_loop(g: FeynmanGraph) -> bool:
    adj = g.adjacency
    return any(adj[u, v] and adj[v, u] for u in range(g.m) for v in range(g.m) if u != v)


def loop_contributions(n: int, d: int, limit: int = 2**28) -> np.ndarray:
    """Isolated loop sum for every choice of the four external labels.

    ``L[ki, kpi, kj, kpj] = sum_{ki', kj'} Delta(ki, ki'; kpi, kj') Delta(kj, kj'; kpj, ki')``
    """
    from .entanglement import GuardExceeded, delta_table

    big_n = d**n
    if big_n**6 > limit:
        raise GuardExceeded(f"loop enumeration needs {big_n ** 6} terms (limit {limit})")
    t = delta_table(n, d, limit=max(limit, big_n**4))
    return np.einsum("axcy,byex->acbe", t, t, optimize=True)


def loop_bound_check(g: FeynmanGraph, n: int, d: int) -> bool:
    """Brute-force check that an isolated loop never exceeds (N_A + N_Abar)/2."""
    if not has_loop(g):
        raise ValueError("graph has no two-vertex loop")
    bound = (d ** (n // 2) + d ** (n - n // 2)) / 2
    return bool(loop_contributions(n, d).max() <= bound + 1e-12)


# ---------------------------------------------------------------- pinching

def _edge_source(p: SlotPermutation, label: int) -> int:
    """The slot a with p(a) = label; the edge named ``label`` leaves owner(a)."""
    return p.images.index(label)


def pinch(g: FeynmanGraph, edges: Sequence[int]) -> FeynmanGraph:
    """Insert a vertex on one or two edges, named by the label they carry.

    Two edges: both are routed through the new vertex w, whose two in-slots
    receive them and whose out-slots continue to their old targets. One
    edge: leaf germination, w is inserted on the edge and closes a self-loop.
    """
    if g.perm is None:
        raise ValueError("pinching needs the graph's slot permutation")
    p = list(g.perm.images)
    m = g.m
    w, wp = 2 * m, 2 * m + 1
    if len(edges) == 2:
        b1, b2 = edges
        if b1 == b2 or not all(0 <= b < 2 * m for b in (b1, b2)):
            raise ValueError(f"invalid pinch target {edges}")
        s1, s2 = _edge_source(g.perm, b1), _edge_source(g.perm, b2)
        p[s1], p[s2] = w, wp
        p.extend([b1, b2])
    elif len(edges) == 1:
        (b1,) = edges
        if not 0 <= b1 < 2 * m:
            raise ValueError(f"invalid pinch target {edges}")
        s1 = _edge_source(g.perm, b1)
        p[s1] = w
        p.extend([b1, wp])
    else:
        raise ValueError("pinch takes one edge (leaf) or two edges")
    return graph_of_permutation(SlotPermutation(tuple(p)))


def pinch_case(g: FeynmanGraph, edges: Sequence[int]) -> str:
    """Degeneracy case of a pinch: 'a', 'b', 'c' or 'leaf'."""
    if len(edges) == 1:
        return "leaf"
    ends = []
    for b in edges:
        s = _edge_source(g.perm, b)
        ends.append((s // 2, b // 2))
    if len({v for e in ends for v in e}) == 1:
        return "b"
    if len({v for e in ends for v in e}) == 2:
        return "c" if ends[0] == ends[1] else "a"
    return "a"


def all_pinches(g: FeynmanGraph) -> list[tuple[tuple[int, ...], FeynmanGraph]]:
    labels = range(2 * g.m)
    out = [((b,), pinch(g, (b,))) for b in labels]
    out += [((b1, b2), pinch(g, (b1, b2))) for b1, b2 in combinations(labels, 2)]
    return out


def remove_leaf(g: FeynmanGraph, vertex: int) -> FeynmanGraph:
    """Delete a vertex carrying a self-loop and splice its through-edge."""
    if g.perm is None:
        raise ValueError("leaf removal needs the graph's slot permutation")
    p = list(g.perm.images)
    slots = (2 * vertex, 2 * vertex + 1)
    loop_slot = next((a for a in slots if p[a] // 2 == vertex), None)
    if loop_slot is None or g.m < 2:
        raise ValueError(f"vertex {vertex} is not a leaf")
    other_slot = slots[1 - slots.index(loop_slot)]
    through_in = next(x for x in slots if x != p[loop_slot])
    if p[other_slot] // 2 == vertex:
        raise ValueError(f"vertex {vertex} is an isolated component")
    src = p.index(through_in)
    p[src] = p[other_slot]
    keep = [a for a in range(2 * g.m) if a // 2 != vertex]
    relabel = {a: i for i, a in enumerate(keep)}
    return graph_of_permutation(SlotPermutation(tuple(relabel[p[a]] for a in keep)))
