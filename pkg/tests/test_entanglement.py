import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mmes.core import Bipartition, PureState, balanced_bipartitions, ghz, product_zero, qudit_string, superposition
from mmes.entanglement import (
    CouplingQuery,
    GuardExceeded,
    act_on_string,
    apply_local_unitaries,
    apply_symmetry,
    coupling_delta,
    coupling_delta_bruteforce,
    delta,
    delta_block,
    delta_block_bruteforce,
    f_table,
    potential_me,
    potential_me_via_delta,
    purity,
    purity_profile,
    reduced_density,
)
from mmes.statmech import random_unitary

from conftest import random_state


def partial_trace_oracle(state, b):
    """rho_A from the full projector, tracing Abar index by index."""
    n, d = state.n, state.d
    t = state.tensor()
    rho = np.tensordot(t, t.conj(), axes=0)  # 2n indices: ket then bra
    keep = list(b.sites)
    # trace out each Abar site, highest index first so positions stay valid
    remaining = list(range(n))
    for j in sorted(b.complement_sites, reverse=True):
        pos = remaining.index(j)
        rho = np.trace(rho, axis1=pos, axis2=pos + len(remaining))
        remaining.pop(pos)
    dim = d ** len(keep)
    return rho.reshape(dim, dim)


def test_reduced_density_examples():
    rho = reduced_density(product_zero(2, 2), Bipartition((1,), 2))
    assert np.allclose(rho, np.diag([1, 0]))
    bell = superposition([qudit_string("00", 2), qudit_string("11", 2)])
    assert np.allclose(reduced_density(bell, Bipartition((1,), 2)), np.eye(2) / 2, atol=1e-15)
    rho = reduced_density(ghz(3), Bipartition((1, 2), 3))
    assert np.allclose(rho, np.diag([0.5, 0, 0, 0.5]), atol=1e-15)


@pytest.mark.parametrize("n,d,seed", [(3, 2, 0), (4, 2, 1), (3, 3, 2), (5, 2, 3)])
def test_reduced_density_matches_full_projector(n, d, seed):
    s = random_state(n, d, seed)
    for k in range(1, n):
        for sub in itertools.combinations(range(1, n + 1), k):
            b = Bipartition(sub, n, d)
            rho = reduced_density(s, b)
            assert np.allclose(rho, partial_trace_oracle(s, b), atol=1e-13)
            assert np.isclose(np.trace(rho).real, 1, atol=1e-12)
            assert np.allclose(rho, rho.conj().T, atol=1e-14)
            assert np.linalg.eigvalsh(rho).min() > -1e-12


def test_ghz3_purities_exact():
    g = ghz(3)
    for b in balanced_bipartitions(3):
        assert abs(purity(g, b) - 0.5) <= 1e-12
    assert abs(potential_me(g) - 0.5) <= 1e-12


@pytest.mark.parametrize("n,d", [(2, 2), (3, 3), (4, 2), (5, 3)])
def test_product_state_is_pure(n, d):
    s = product_zero(n, d)
    assert all(abs(purity(s, b) - 1) < 1e-12 for b in balanced_bipartitions(n, d))
    assert abs(potential_me(s) - 1) < 1e-12


@pytest.mark.parametrize("n,d,seed", [(3, 2, 5), (4, 3, 6), (5, 2, 7), (6, 2, 8)])
def test_purity_bounds_and_complement(n, d, seed):
    s = random_state(n, d, seed)
    for k in range(1, n):
        for sub in itertools.combinations(range(1, n + 1), k):
            b = Bipartition(sub, n, d)
            p = purity(s, b)
            assert 1 / min(b.dim_a, b.dim_abar) - 1e-12 <= p <= 1 + 1e-12
            assert abs(p - purity(s, b.complement())) <= 1e-12
    pime = potential_me(s)
    assert 1 / d ** (n // 2) - 1e-12 <= pime <= 1 + 1e-12


def test_purity_profile_mean():
    s = random_state(5, 2, 1)
    prof = purity_profile(s)
    assert len(prof) == 10
    assert np.isclose(np.mean([p for _, p in prof]), potential_me(s), atol=1e-15)


# ------------------------------------------------------------------ Delta

def test_delta_examples():
    for s in ("00", "01", "11"):
        k = qudit_string(s, 2)
        assert coupling_delta(CouplingQuery(k, k, k, k)) == 1
        assert coupling_delta_bruteforce(CouplingQuery(k, k, k, k)) == 1
    q = CouplingQuery(*(qudit_string(s, 2) for s in ("00", "11", "01", "10")), n_a=1)
    assert coupling_delta_bruteforce(q) == 0.5
    assert coupling_delta(q) == 0.5
    q = CouplingQuery(*(qudit_string(s, 2) for s in ("00", "11", "01", "00")))
    assert coupling_delta(q) == 0 == coupling_delta_bruteforce(q)


def test_delta_wrapper_accepts_digit_sequences():
    assert delta((0, 0), (1, 1), (0, 1), (1, 0), d=2) == 0.5


def test_f_table_values():
    for n in range(2, 8):
        for n_a in range(1, n):
            assert f_table(n, n_a)[0, 0] == 1
    assert f_table(2, 1)[1, 1] == 0.5


def test_query_validation():
    with pytest.raises(ValueError):
        CouplingQuery(*(qudit_string("00", 2),) * 4, n_a=2)
    with pytest.raises(Exception):
        CouplingQuery(qudit_string("00", 2), qudit_string("000", 2), qudit_string("00", 2), qudit_string("00", 2))


@pytest.mark.parametrize("n,d", [(2, 2), (3, 2), (4, 2), (2, 3), (3, 3)])
def test_delta_closed_form_exhaustive(n, d):
    for n_a in range(1, n):
        for k in range(d**n):
            assert np.array_equal(delta_block(n, d, k, n_a), delta_block_bruteforce(n, d, k, n_a))


@pytest.mark.parametrize("n,d", [(2, 2), (2, 3), (3, 2)])
def test_delta_scalar_paths_agree_with_blocks(n, d):
    from mmes.core import string_of
    strs = [string_of(i, n, d) for i in range(d**n)]
    for k in range(d**n):
        block = delta_block(n, d, k)
        for a, b, c in itertools.product(range(d**n), repeat=3):
            q = CouplingQuery(strs[k], strs[a], strs[b], strs[c])
            v = coupling_delta(q)
            assert v == block[a, b, c] == coupling_delta_bruteforce(q)


def _perm_strategy(size):
    return st.permutations(list(range(size)))


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 4), st.integers(2, 3), st.data())
def test_delta_symmetry_invariance(n, d, data):
    words = [tuple(data.draw(st.lists(st.integers(0, d - 1), min_size=n, max_size=n))) for _ in range(4)]
    # bias toward nonzero values: set l' from the conservation law half the time
    if data.draw(st.booleans()):
        words[3] = tuple((a + b - c) % d for a, b, c in zip(*words[:3]))
    syms = [data.draw(_perm_strategy(d)) for _ in range(n)]
    site = [x + 1 for x in data.draw(_perm_strategy(n))]
    strs = [qudit_string(w, d) for w in words]
    moved = [act_on_string(s, syms, site) for s in strs]
    before = coupling_delta(CouplingQuery(*strs))
    assert coupling_delta(CouplingQuery(*moved)) == before
    assert coupling_delta_bruteforce(CouplingQuery(*moved)) == before


# ------------------------------------------------------- quartic form

@pytest.mark.parametrize("n,d,seed", [(2, 2, 0), (3, 2, 1), (4, 2, 2), (2, 3, 3), (3, 3, 4), (5, 2, 5)])
def test_potential_via_delta_matches(n, d, seed):
    s = random_state(n, d, seed)
    assert abs(potential_me_via_delta(s) - potential_me(s)) <= 1e-10


def test_potential_via_delta_examples():
    assert abs(potential_me_via_delta(ghz(3)) - 0.5) < 1e-12
    assert abs(potential_me_via_delta(product_zero(3, 3)) - 1) < 1e-12


def test_potential_via_delta_guard():
    with pytest.raises(GuardExceeded):
        potential_me_via_delta(product_zero(4, 2), limit=100)


# ------------------------------------------------------------ symmetries

def test_apply_symmetry_examples():
    s = random_state(3, 2, 9)
    same = apply_symmetry(s, None, None)
    assert np.array_equal(same.amplitudes, s.amplitudes)
    ket01 = superposition([qudit_string("01", 2)])
    swapped = apply_symmetry(ket01, None, [2, 1])
    assert swapped.amplitudes[2] == 1


def test_apply_symmetry_rejects_bad_permutations():
    s = product_zero(2, 2)
    with pytest.raises(ValueError):
        apply_symmetry(s, [[0, 0], [0, 1]], None)
    with pytest.raises(ValueError):
        apply_symmetry(s, None, [1, 1])
    with pytest.raises(ValueError):
        apply_symmetry(s, None, [0, 1])


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 5), st.integers(2, 3), st.integers(0, 2**32 - 1), st.data())
def test_pime_symmetry_invariance(n, d, seed, data):
    s = random_state(n, d, seed)
    syms = [data.draw(_perm_strategy(d)) for _ in range(n)]
    site = [x + 1 for x in data.draw(_perm_strategy(n))]
    t = apply_symmetry(s, syms, site)
    assert np.isclose(np.linalg.norm(t.amplitudes), 1, atol=1e-12)
    assert abs(potential_me(t) - potential_me(s)) <= 1e-12


@pytest.mark.parametrize("n,d,seed", [(3, 2, 0), (4, 2, 1), (3, 3, 2), (5, 2, 3)])
def test_pime_local_unitary_invariance(n, d, seed):
    s = random_state(n, d, seed)
    rng = np.random.default_rng(seed + 100)
    t = apply_local_unitaries(s, [random_unitary(d, rng) for _ in range(n)])
    assert abs(potential_me(t) - potential_me(s)) <= 1e-12


@pytest.mark.parametrize("n,d,seed", [(3, 2, 0), (4, 3, 1)])
def test_pime_gauge_invariance(n, d, seed):
    s = random_state(n, d, seed)
    t = PureState(n, d, np.exp(1j * 0.731) * s.amplitudes)
    assert abs(potential_me(t) - potential_me(s)) <= 1e-14
