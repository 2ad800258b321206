import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from histq.decoherence import d_form
from histq.propositions import (
    PropositionSpace,
    WrightOperator,
    chain_matrix,
    hs_inner,
    p_norm,
    probability,
    proposition,
    unit_proposition,
    wright_operator,
)
from histq.histories import chain_map
from histq.sampling import random_model, random_operator, random_projector

from helpers import P0, PLUS, qubit_state, state_for

SINGLE = PropositionSpace(support=(0.0,), dim_single=2)
DOUBLE = PropositionSpace(support=(0.0, 1.0), dim_single=2)


class TestSpace:
    def test_dimensions(self):
        assert SINGLE.op_dim == 2 and SINGLE.sector_dim == 4
        assert DOUBLE.op_dim == 4 and DOUBLE.sector_dim == 16

    def test_shape_validated(self):
        with pytest.raises(ValueError, match="does not match"):
            proposition(DOUBLE, P0)

    def test_finite_entries_required(self):
        with pytest.raises(ValueError, match="finite"):
            proposition(SINGLE, np.array([[np.inf, 0], [0, 0]]))


class TestHsInner:
    def test_unit_normalized(self):
        e = unit_proposition(SINGLE)
        assert hs_inner(e, e) == pytest.approx(1.0)
        e2 = unit_proposition(DOUBLE)
        assert hs_inner(e2, e2) == pytest.approx(1.0)

    def test_projector_values(self):
        x = proposition(SINGLE, P0)
        assert hs_inner(x, x) == pytest.approx(0.5)
        y = proposition(DOUBLE, np.kron(P0, P0))
        assert hs_inner(y, y) == pytest.approx(0.25)

    def test_sector_mismatch_rejected(self):
        with pytest.raises(ValueError, match="sector mismatch"):
            hs_inner(unit_proposition(SINGLE), unit_proposition(DOUBLE))

    def test_norm_tracks_projector_rank(self):
        # squared norm = rank / dim^n: the coarser the proposition, the larger
        rng = np.random.default_rng(21)
        norms = []
        for rank in (1, 2, 3, 4):
            x = proposition(DOUBLE, random_projector(rng, 4, rank=rank))
            value = hs_inner(x, x).real
            assert value == pytest.approx(rank / 4.0, abs=1e-12)
            norms.append(value)
        assert norms == sorted(norms)


class TestPNorm:
    def test_projector_p1(self):
        assert p_norm(proposition(SINGLE, P0), 1) == pytest.approx(0.5)

    def test_projector_p2(self):
        assert p_norm(proposition(SINGLE, P0), 2) == pytest.approx(0.70710678, abs=1e-8)

    def test_unit_for_all_p(self):
        e = unit_proposition(DOUBLE)
        for p in (1, 1.5, 2, 3, 7.5):
            assert p_norm(e, p) == pytest.approx(1.0, abs=1e-12)

    def test_p2_matches_inner_product(self):
        rng = np.random.default_rng(22)
        x = proposition(DOUBLE, random_operator(rng, 4))
        assert p_norm(x, 2) == pytest.approx(np.sqrt(hs_inner(x, x).real), abs=1e-12)

    def test_below_one_rejected(self):
        with pytest.raises(ValueError, match=">= 1"):
            p_norm(unit_proposition(SINGLE), 0.5)

    @given(st.integers(0, 2 ** 31 - 1), st.sampled_from([1.0, 1.5, 2.0, 3.0]))
    @settings(max_examples=40, deadline=None)
    def test_subadditive_and_homogeneous(self, seed, p):
        rng = np.random.default_rng(seed)
        x = proposition(DOUBLE, random_operator(rng, 4))
        y = proposition(DOUBLE, random_operator(rng, 4))
        both = proposition(DOUBLE, x.op + y.op)
        assert p_norm(both, p) <= p_norm(x, p) + p_norm(y, p) + 1e-9
        c = complex(rng.standard_normal(), rng.standard_normal())
        assert p_norm(proposition(DOUBLE, c * x.op), p) == pytest.approx(
            abs(c) * p_norm(x, p), abs=1e-9)


class TestWrightOperator:
    def test_single_time_doubles_rho_action(self):
        # n = 1: the chain map is the identity, so T b = tr(1) rho b
        ds = qubit_state(np.diag([1.0, 0.0]))
        t = wright_operator(ds, (0.0,))
        x = proposition(t.space, PLUS)
        image = t.apply(x)
        assert np.allclose(image.op, 2.0 * ds.model.rho @ PLUS)
        assert probability(t, x) == pytest.approx(0.5, abs=1e-12)

    def test_unit_expectation_on_random_scenarios(self):
        rng = np.random.default_rng(23)
        for dim, n in ((2, 1), (2, 2), (3, 1), (4, 1)):
            ds = state_for(random_model(rng, dim))
            t = wright_operator(ds, ds.grid.times[:n])
            assert probability(t, unit_proposition(t.space)) == pytest.approx(
                1.0, abs=1e-12)

    def test_quadratic_form_matches_decoherence(self):
        rng = np.random.default_rng(24)
        worst = 0.0
        for dim, n in ((2, 1), (2, 2), (3, 1)):
            ds = state_for(random_model(rng, dim))
            t = wright_operator(ds, ds.grid.times[:n])
            for _ in range(34):
                b = proposition(t.space, random_operator(rng, t.space.op_dim))
                hb = b.as_history_operator()
                worst = max(worst, abs(probability(t, b) - d_form(ds, hb, hb).real))
        assert worst <= 1e-9

    def test_sector_self_adjoint(self):
        rng = np.random.default_rng(25)
        ds = state_for(random_model(rng, 3))
        t = wright_operator(ds, (0.0, 1.0))
        worst = 0.0
        for _ in range(20):
            b1 = proposition(t.space, random_operator(rng, 9))
            b2 = proposition(t.space, random_operator(rng, 9))
            lhs = hs_inner(b1, t.apply(b2))
            rhs = hs_inner(t.apply(b1), b2)
            worst = max(worst, abs(lhs - rhs))
        assert worst <= 1e-10

    def test_nonnegative_quadratic_form(self):
        rng = np.random.default_rng(26)
        ds = state_for(random_model(rng, 2))
        t = wright_operator(ds, (0.0, 1.0))
        for _ in range(30):
            b = proposition(t.space, random_operator(rng, 4))
            assert probability(t, b) >= -1e-10

    def test_cap_enforced(self):
        rng = np.random.default_rng(27)
        ds = state_for(random_model(rng, 10))
        with pytest.raises(ValueError, match="support too large"):
            wright_operator(ds, (0.0,))

    def test_chain_matrix_vectorizes_chain_map(self):
        rng = np.random.default_rng(28)
        pmat = chain_matrix(2, 2)
        b = random_operator(rng, 4)
        assert np.allclose(pmat @ b.flatten(order="F"),
                           chain_map(b, 2).flatten(order="F"))


class TestProbability:
    def test_unit(self):
        ds = qubit_state(np.diag([0.75, 0.25]))
        t = wright_operator(ds, (0.0,))
        assert probability(t, unit_proposition(t.space)) == pytest.approx(1.0, abs=1e-12)

    def test_direct_trace_oracle(self):
        ds = qubit_state(np.diag([0.75, 0.25]))
        t = wright_operator(ds, (0.0,))
        # tr(P0 rho P0) = 0.75
        assert probability(t, proposition(t.space, P0)) == pytest.approx(0.75, abs=1e-12)

    def test_zero_vector(self):
        ds = qubit_state(np.diag([0.75, 0.25]))
        t = wright_operator(ds, (0.0,))
        zero = proposition(t.space, np.zeros((2, 2)))
        assert probability(t, zero) == 0.0

    def test_nonreal_form_rejected(self):
        skew = np.array([[0, 1j], [0, 0]], dtype=complex)
        bad = WrightOperator(space=SINGLE, matrix=np.kron(np.eye(2), skew) + np.eye(4))
        x = proposition(SINGLE, PLUS + 0.5 * np.array([[0, 1], [0, 0]]))
        with pytest.raises(ValueError, match="non-real quadratic form"):
            probability(bad, x)

    def test_sector_mismatch(self):
        ds = qubit_state(np.diag([0.75, 0.25]))
        t = wright_operator(ds, (0.0,))
        with pytest.raises(ValueError, match="sector mismatch"):
            probability(t, unit_proposition(DOUBLE))
