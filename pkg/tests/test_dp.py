import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cqdp.dp import (
    ClassicalTuple,
    DensityTuple,
    classical_dp_check,
    classical_min_epsilon,
    cq_dp_check,
    cq_dp_report,
    min_epsilon,
)
from cqdp.errors import Infeasible, InvalidInput, ValidationError
from cqdp.frontier import extremal_tuple
from cqdp.hermitian import random_density
from cqdp.witness import canonical_witness, t_max

from conftest import LN2, random_dp_tuple


def test_identical_vectors_are_dp_for_every_eps():
    t = ClassicalTuple([[0.2, 0.8]] * 3)
    for eps in (1e-6, 0.1, 5.0):
        assert classical_dp_check(t, eps)


def test_disjoint_supports_never_dp():
    t = ClassicalTuple([[1.0, 0.0], [0.0, 1.0]])
    assert not classical_dp_check(t, 50.0)
    with pytest.raises(Infeasible):
        min_epsilon(t.to_density())
    with pytest.raises(Infeasible):
        classical_min_epsilon(t)


def test_extremal_tuple_is_exactly_dp():
    t = extremal_tuple(3, 1, LN2)
    assert classical_dp_check(t, LN2)
    assert not classical_dp_check(t, LN2 - 1e-3)
    assert cq_dp_check(t.to_density(), LN2)


def test_invalid_eps():
    t = ClassicalTuple([[0.5, 0.5]] * 2)
    with pytest.raises(InvalidInput):
        classical_dp_check(t, 0.0)
    with pytest.raises(InvalidInput):
        cq_dp_check(t.to_density(), -1.0)


def test_tuple_validation():
    with pytest.raises(ValidationError, match="probability normalization"):
        ClassicalTuple([[0.5, 0.4], [0.5, 0.5]])
    with pytest.raises(ValidationError):
        ClassicalTuple([[1.0]])
    with pytest.raises(ValidationError):
        DensityTuple([np.eye(2) / 2, np.eye(3) / 3])
    with pytest.raises(ValidationError, match="unit trace"):
        DensityTuple([np.eye(2), np.eye(2) / 2])
    with pytest.raises(ValidationError, match="positive semidefinite"):
        DensityTuple([np.diag([1.5, -0.5]), np.eye(2) / 2])


def test_witness_tight_at_t_max():
    rep = cq_dp_report(canonical_witness(LN2, 0.5), LN2)
    assert rep.is_dp and abs(rep.worst_eigenvalue) <= 1e-8
    p = t_max(LN2, 0.5)
    assert not cq_dp_check(canonical_witness(LN2, 0.5, t=1.001 * p.t_max), LN2)


def test_min_epsilon_examples(rng):
    rho = random_density(3, rng)
    assert min_epsilon(DensityTuple([rho, rho, rho])) == pytest.approx(0.0, abs=1e-12)
    t = ClassicalTuple([[2 / 3, 1 / 3], [1 / 3, 2 / 3]])
    assert min_epsilon(t.to_density()) == pytest.approx(LN2, abs=1e-12)
    assert classical_min_epsilon(t) == pytest.approx(LN2, abs=1e-12)
    for eps in (0.1, 1.0, 2.0):
        assert min_epsilon(canonical_witness(eps, 0.7)) == pytest.approx(eps, abs=1e-7)


def test_min_epsilon_brackets_cq_check(rng):
    for _ in range(20):
        states = [random_density(3, rng) for _ in range(3)]
        t = DensityTuple(states)
        eps = min_epsilon(t)
        assert cq_dp_check(t, eps + 1e-9)
        assert not cq_dp_check(t, eps - 1e-6)


def test_common_support_rank_deficient():
    p = np.array([0.5, 0.5, 0.0])
    q = np.array([0.25, 0.75, 0.0])
    t = ClassicalTuple([p, q])
    assert min_epsilon(t.to_density()) == pytest.approx(math.log(2), abs=1e-12)
    assert classical_min_epsilon(t) == pytest.approx(math.log(2), abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(
    st.integers(2, 5),
    st.integers(1, 5),
    st.floats(0.05, 3.0),
    st.floats(0.0, 2.0),
    st.integers(0, 2**32 - 1),
)
def test_classical_quantum_consistency_and_monotonicity(n, dim, eps, scale, seed):
    rng = np.random.default_rng(seed)
    # mix of DP and non-DP tuples: draw at a larger budget than the one checked
    t = random_dp_tuple(n, dim, eps * (1 + scale), rng)
    c = classical_dp_check(t, eps)
    assert c == cq_dp_check(t.to_density(), eps)
    if c:
        assert classical_dp_check(t, eps * 1.5)
    perm = rng.permutation(n)
    tp = ClassicalTuple(t.vectors[perm])
    assert classical_dp_check(tp, eps) == c
    assert classical_min_epsilon(tp) == pytest.approx(classical_min_epsilon(t), abs=1e-12)
    assert min_epsilon(t.to_density()) == pytest.approx(classical_min_epsilon(t), abs=1e-9)


def test_exact_dp_implies_equal_rank(rng):
    for _ in range(20):
        states = [random_density(3, rng, rank=int(rng.integers(1, 4))) for _ in range(2)]
        t = DensityTuple(states)
        if cq_dp_check(t, 3.0, tol=0.0):
            ranks = {int(np.sum(np.linalg.eigvalsh(s) > 1e-10)) for s in states}
            assert len(ranks) == 1
