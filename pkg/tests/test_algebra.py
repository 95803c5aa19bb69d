import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lrberry.algebra import (
    SU11,
    SU2,
    RepSpec,
    block_indices,
    build_boson_mode,
    build_su11_rep,
    build_su2_rep,
    compose_schwinger_su2,
    compose_two_mode_su11,
    default_guard_band,
    extract_block,
)
from lrberry.errors import InvalidBargmannIndex, InvalidDimension, InvalidSpin
from lrberry.linalg import commutator, frobenius


@pytest.mark.parametrize("two_j", range(1, 11))
def test_su2_relations_exact(two_j):
    g = build_su2_rep(two_j / 2)
    assert g.dim == two_j + 1
    assert max(g.commutator_residuals().values()) <= 1e-12


def test_su2_casimir_and_ordering():
    j = 2.5
    g = build_su2_rep(j)
    cas = g.x0 @ g.x0 + 0.5 * (g.xplus @ g.xminus + g.xminus @ g.xplus)
    assert np.allclose(cas, j * (j + 1) * np.eye(g.dim), atol=1e-12)
    assert np.array_equal(g.weights(), j - np.arange(g.dim))


@pytest.mark.parametrize("k", [0.25, 0.5, 1.0, 3.5])
@pytest.mark.parametrize("dim", [16, 64, 128])
def test_su11_guarded_relations(k, dim):
    g = build_su11_rep(k, dim)
    assert g.guard_band == math.ceil(dim / 8)
    assert max(g.commutator_residuals().values()) <= 1e-10
    assert g.weights()[0] == k


def test_su11_truncation_corrupts_only_the_top():
    g = build_su11_rep(0.5, 20, guard_band=0)
    assert g.commutator_residuals()["ladder"] > 1.0
    assert max(build_su11_rep(0.5, 20, guard_band=1).commutator_residuals().values()) < 1e-12


def test_su11_raising_element():
    g = build_su11_rep(0.75, 8)
    for n in range(7):
        assert g.xplus[n + 1, n] == pytest.approx(math.sqrt((n + 1) * (1.5 + n)))


@given(st.integers(2, 60))
def test_boson_commutator_below_top(dim):
    m = build_boson_mode(dim)
    resid = commutator(m.lower, m.raise_) - np.eye(dim)
    assert frobenius(resid[:-1, :-1]) < 1e-12
    assert np.allclose(m.raise_ @ m.lower, m.number)


def test_two_mode_su11_blocks():
    gens, n_d = compose_two_mode_su11(build_boson_mode(10), build_boson_mode(10))
    assert max(gens.commutator_residuals().values()) < 1e-10
    for d in (0, 1, -2):
        idx = block_indices(n_d, d, order_by=gens.x0)
        blk = extract_block(gens, idx)
        # each N_d block is the irrep k = (|N_d| + 1)/2
        assert blk.weights()[0] == pytest.approx((abs(d) + 1) / 2)


def test_schwinger_blocks_are_spin_irreps():
    gens, n_s = compose_schwinger_su2(build_boson_mode(6), build_boson_mode(6))
    assert max(gens.commutator_residuals().values()) < 1e-12
    for ns in range(6):
        blk = extract_block(gens, block_indices(n_s, ns, order_by=gens.x0, descending=True))
        ref = build_su2_rep(ns / 2) if ns else None
        if ref is not None:
            assert np.allclose(blk.x0, ref.x0)
            assert np.allclose(blk.xplus, ref.xplus)


@pytest.mark.parametrize("bad", [0, -0.5, 0.3, float("nan")])
def test_invalid_spin(bad):
    with pytest.raises(InvalidSpin):
        build_su2_rep(bad)


@pytest.mark.parametrize("bad", [0.0, -1.0])
def test_invalid_bargmann(bad):
    with pytest.raises(InvalidBargmannIndex):
        build_su11_rep(bad, 8)


def test_invalid_dimensions():
    with pytest.raises(InvalidDimension):
        build_boson_mode(1)
    with pytest.raises(InvalidDimension):
        build_su11_rep(0.5, 1)
    with pytest.raises(InvalidDimension):
        compose_two_mode_su11(build_boson_mode(100), build_boson_mode(100))
    with pytest.raises(InvalidSpin):
        RepSpec(SU2, 1.0, 4)
    with pytest.raises(ValueError):
        RepSpec("so3", 1.0, 3)


def test_guard_band_default():
    assert [default_guard_band(d) for d in (8, 9, 128)] == [1, 2, 16]
    assert SU11 != SU2
