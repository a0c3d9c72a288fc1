"""Finite-section operator experiments."""

import numpy as np
import pytest

from pmkit import opsim
from pmkit.classify import NO, UNKNOWN, YES
from pmkit.errors import (
    NonDiagonalSpecError,
    NonPositiveEigenvalueError,
    NonPositiveSectionError,
    PreconditionNotEstablishedError,
    PreconditionViolatedError,
    RuleUndefinedError,
)
from pmkit.opsim import make_spec, section


def diag_literal(*values, kind="dense-rule", decay=False):
    n = len(values)
    rows = [[float(values[i]) if i == j else 0.0 for j in range(n)] for i in range(n)]
    return make_spec(kind, "matrix-literal", {"matrix": rows}, decay=decay)


INV_SQ = make_spec("diagonal", "inverse-square-diagonal", {"c": 1.0}, decay=True)
TRIDIAG = make_spec("banded", "tridiag", {"a": 2.0, "b": -1.0})
IDENTITY = make_spec("diagonal", "matrix-literal", {"matrix": []}, decay=True)


class TestSpec:
    def test_unknown_rule(self):
        with pytest.raises(RuleUndefinedError):
            make_spec("diagonal", "mystery", {})

    def test_missing_params(self):
        with pytest.raises(RuleUndefinedError):
            make_spec("banded", "tridiag", {"a": 1.0})

    def test_diagonal_kind_enforced(self):
        with pytest.raises(NonDiagonalSpecError):
            make_spec("diagonal", "tridiag", {"a": 2.0, "b": -1.0})

    def test_decay_check(self):
        growing = [[1.0, 0.0], [0.0, 2.0]]
        make_spec("dense-rule", "matrix-literal", {"matrix": growing})  # fine without tag
        # identity extension makes sampled diagonal grow again after 0
        with pytest.raises(ValueError):
            make_spec(
                "dense-rule",
                "matrix-literal",
                {"matrix": [[1.0, 0.0], [0.0, 0.0]]},
                decay=True,
            )

    def test_json_roundtrip(self):
        obj = opsim.spec_to_obj(INV_SQ)
        back = opsim.spec_from_obj(obj)
        assert back == INV_SQ


class TestSection:
    def test_inverse_square_readout(self):
        sec = section(INV_SQ, 3)
        np.testing.assert_allclose(sec.matrix, np.diag([1.0, 0.25, 1.0 / 9.0]))

    def test_identity_rule(self):
        np.testing.assert_allclose(section(IDENTITY, 4).matrix, np.eye(4))

    def test_tridiag_readout(self):
        np.testing.assert_allclose(
            section(TRIDIAG, 2).matrix, [[2.0, -1.0], [-1.0, 2.0]]
        )

    def test_nested_consistency(self):
        for spec in (INV_SQ, TRIDIAG, diag_literal(1.0, -1.0, 0.5)):
            big = section(spec, 12).matrix
            for m in (1, 3, 7):
                np.testing.assert_array_equal(section(spec, m).matrix, big[:m, :m])

    def test_order_caps(self):
        with pytest.raises(Exception):
            section(INV_SQ, 0)
        with pytest.raises(Exception):
            section(INV_SQ, 65)


class TestPOperatorSection:
    def test_positive_diagonal_every_order(self):
        for n in (1, 2, 4, 8, 12):
            assert opsim.is_P_operator_section(INV_SQ, n) == YES

    def test_negative_entry_breaks_at_three(self):
        spec = diag_literal(1.0, 1.0, -1.0)
        assert opsim.is_P_operator_section(spec, 2) == YES
        assert opsim.is_P_operator_section(spec, 3) == NO

    def test_tridiag_P(self):
        for n in (2, 5, 9, 12):
            assert opsim.is_P_operator_section(TRIDIAG, n) == YES


class TestEigenPositivity:
    def test_inverse_square_all_positive(self):
        rpt = opsim.eigen_positivity_check(INV_SQ, [2, 4, 8, 16, 32, 64])
        assert rpt.violations == 0
        assert all(e.all_real_positive for e in rpt.entries)

    def test_tridiag_two_by_two_closed_form(self):
        rpt = opsim.eigen_positivity_check(TRIDIAG, [2])
        np.testing.assert_allclose(sorted(rpt.entries[0].real_eigenvalues), [1.0, 3.0])

    def test_negative_entry_flagged(self):
        rpt = opsim.eigen_positivity_check(diag_literal(1.0, -1.0), [2])
        assert not rpt.entries[0].all_real_positive
        # not P, so it is a finding, not a contradiction
        assert rpt.violations == 0


class TestSqrt:
    def test_quarter_squares(self):
        # lambda = (1, 1/4, 1/9, 1/16) is the inverse-square rule at n = 4
        root = opsim.operator_sqrt(INV_SQ, 4)
        np.testing.assert_allclose(
            np.diag(root.matrix), [1.0, 0.5, 1.0 / 3.0, 0.25], atol=1e-15
        )

    def test_identity(self):
        root = opsim.operator_sqrt(IDENTITY, 3)
        np.testing.assert_allclose(root.matrix, np.eye(3))

    def test_scaled_inverse_square(self):
        spec = make_spec("diagonal", "inverse-square-diagonal", {"c": 4.0}, decay=True)
        root = opsim.operator_sqrt(spec, 6)
        np.testing.assert_allclose(np.diag(root.matrix), [2.0 / i for i in range(1, 7)])
        sec = section(spec, 6).matrix
        assert np.abs(root.matrix @ root.matrix - sec).max() <= 1e-15

    def test_residual_ladder(self):
        for n in (2, 4, 8, 16, 32, 64):
            root = opsim.operator_sqrt(INV_SQ, n)
            sec = section(INV_SQ, n).matrix
            assert np.abs(root.matrix @ root.matrix - sec).max() <= 1e-12

    def test_uniqueness_injectivity(self):
        root = opsim.operator_sqrt(INV_SQ, 4)
        good = root.matrix.copy()
        sq, dev = opsim.sqrt_candidate_deviation(INV_SQ, 4, good)
        assert sq <= 1e-15 and dev == 0.0
        bad = good + np.diag([0.05, 0.0, 0.0, 0.0])
        sq, dev = opsim.sqrt_candidate_deviation(INV_SQ, 4, bad)
        assert sq > 1e-3 * dev  # deviation forces a square residual

    def test_preconditions(self):
        with pytest.raises(NonDiagonalSpecError):
            opsim.operator_sqrt(TRIDIAG, 3)
        with pytest.raises(PreconditionViolatedError):
            opsim.operator_sqrt(diag_literal(1.0, 0.5, kind="diagonal"), 2)
        negative = make_spec(
            "diagonal", "inverse-square-diagonal", {"c": -4.0}, decay=True
        )
        with pytest.raises(NonPositiveEigenvalueError):
            opsim.operator_sqrt(negative, 2)


class TestMinMax:
    def test_all_ones(self):
        spec = make_spec("dense-rule", "matrix-literal", {"matrix": [[1.0, 1.0], [1.0, 1.0]]})
        res = opsim.minmax_rho(spec, 2, samples=32, seed=0)
        assert res.rho == pytest.approx(2.0, abs=1e-9)
        assert res.inf_sup == pytest.approx(2.0, abs=1e-6)
        assert res.sup_inf == pytest.approx(2.0, abs=1e-6)

    def test_symmetric_two_by_two(self):
        spec = make_spec("dense-rule", "matrix-literal", {"matrix": [[2.0, 1.0], [1.0, 2.0]]})
        res = opsim.minmax_rho(spec, 2, samples=64, seed=1)
        assert res.rho == pytest.approx(3.0, abs=1e-9)
        assert res.sup_inf <= res.rho + 1e-9
        assert res.inf_sup >= res.rho - 1e-9

    def test_bracketing_random_sections(self):
        rng = np.random.default_rng(7)
        for _ in range(40):
            n = int(rng.integers(2, 9))
            m = rng.uniform(0.1, 3.0, (n, n))
            spec = make_spec("dense-rule", "matrix-literal", {"matrix": m.tolist()})
            res = opsim.minmax_rho(spec, n, samples=48, seed=int(rng.integers(1 << 30)))
            assert res.sup_inf <= res.rho + 1e-9
            assert res.inf_sup >= res.rho - 1e-9
            assert abs(res.inf_sup - res.rho) <= 1e-6
            assert abs(res.sup_inf - res.rho) <= 1e-6

    def test_rejects_nonpositive_section(self):
        with pytest.raises(NonPositiveSectionError):
            opsim.minmax_rho(IDENTITY, 2)


class TestInterp:
    def test_identity_pair(self):
        rpt = opsim.diag_interp_check(IDENTITY, IDENTITY, 3, trials=20, seed=0)
        assert rpt.case1_established and rpt.case2_established
        assert not rpt.violations

    def test_scalar_hand_value(self):
        s = diag_literal(2.0)
        rpt = opsim.diag_interp_check(s, IDENTITY, 1, trials=20, seed=1)
        # section value t + 2(1-t) = 2 - t >= 1 on [0, 1]
        assert not rpt.violations
        assert rpt.min_abs_det >= 1.0 - 1e-12

    def test_rejects_unestablished(self):
        left = diag_literal(1.0, -1.0)
        with pytest.raises(PreconditionNotEstablishedError):
            opsim.diag_interp_check(left, diag_literal(-1.0, 1.0), 2, trials=5)

    def test_random_p_pairs_no_violations(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            n = 5
            s = rng.uniform(-1, 1, (n, n))
            np.fill_diagonal(s, np.abs(s).sum(axis=1) + 0.5)
            t = np.diag(rng.uniform(0.5, 2.0, n))
            spec_s = make_spec("dense-rule", "matrix-literal", {"matrix": s.tolist()})
            spec_t = make_spec("dense-rule", "matrix-literal", {"matrix": t.tolist()})
            rpt = opsim.diag_interp_check(spec_s, spec_t, n, trials=40, seed=int(rng.integers(1 << 30)))
            assert rpt.case1_established
            assert not rpt.violations


class TestKernelSearch:
    def test_diag_one_minus_one_refuted(self):
        rpt = opsim.csufficient_kernel_search(diag_literal(1.0, -1.0), 2)
        assert rpt.refuted
        assert rpt.classifier_verdict == NO
        assert rpt.consistent
        # the documented refutation: alpha = {2}, D = (1) has kernel (1)
        alphas = {r.alpha for r in rpt.refutations}
        assert (2,) in alphas

    def test_identity_consistent(self):
        rpt = opsim.csufficient_kernel_search(IDENTITY, 2)
        assert not rpt.refuted
        assert rpt.classifier_verdict == YES
        assert rpt.consistent

    def test_diag_one_zero_not_refuted(self):
        rpt = opsim.csufficient_kernel_search(diag_literal(1.0, 0.0), 2)
        assert not rpt.refuted
        assert rpt.classifier_verdict == YES
        assert rpt.consistent

    def test_nilpotent_refuted(self):
        spec = make_spec("dense-rule", "matrix-literal", {"matrix": [[0.0, 0.0], [1.0, 0.0]]})
        rpt = opsim.csufficient_kernel_search(spec, 2)
        assert rpt.refuted and rpt.classifier_verdict == NO and rpt.consistent

    def test_refutation_witness_is_reversal_witness(self):
        from pmkit import classify

        spec = diag_literal(1.0, 1.0, -0.5)
        rpt = opsim.csufficient_kernel_search(spec, 3)
        assert rpt.refuted
        mat = section(spec, 3).matrix
        for r in rpt.refutations:
            w = np.array(r.full_witness)
            assert classify.products_nonpositive_exact(mat, w, strict=True)

    def test_n4_curated_agreement(self):
        refuted_spec = diag_literal(1.0, 1.0, 1.0, -1.0)
        rpt = opsim.csufficient_kernel_search(refuted_spec, 4)
        assert rpt.refuted and rpt.classifier_verdict == NO and rpt.consistent
        ok_spec = make_spec(
            "dense-rule",
            "matrix-literal",
            {"matrix": (np.eye(4) + 0.1).tolist()},
        )
        rpt2 = opsim.csufficient_kernel_search(ok_spec, 4)
        assert not rpt2.refuted
        assert rpt2.classifier_verdict in (YES, UNKNOWN)
        assert rpt2.consistent


class TestRevMembership:
    def test_identity_not_reversing(self):
        q = opsim.rev_membership(IDENTITY, 2, [1.0, -1.0])
        assert q.products == (1.0, 1.0)
        assert not q.in_rev

    def test_worked_example_section(self):
        spec = make_spec(
            "dense-rule", "matrix-literal", {"matrix": [[-1.0, -1.0], [4.0, 3.0]]}
        )
        q = opsim.rev_membership(spec, 2, [1.0, -1.0])
        assert q.products == (0.0, -1.0)
        assert q.in_rev

    def test_zero_vector_degenerate_member(self):
        q = opsim.rev_membership(TRIDIAG, 3, [0.0, 0.0, 0.0])
        assert q.in_rev
        assert q.products == (0.0, 0.0, 0.0)


class TestEigvecRev:
    def test_identity_eigenvectors_not_in_rev(self):
        rpt = opsim.eigvec_rev_check(IDENTITY, 3)
        assert rpt.precondition == YES
        assert not rpt.skipped
        assert rpt.violations == 0
        assert len(rpt.entries) == 3

    def test_rank_deficient_diagonal(self):
        rpt = opsim.eigvec_rev_check(diag_literal(1.0, 0.0), 2)
        assert rpt.precondition == YES
        assert rpt.violations == 0
        assert [e.eigenvalue for e in rpt.entries] == [1.0]

    def test_non_csu_skipped(self):
        rpt = opsim.eigvec_rev_check(diag_literal(1.0, -1.0), 2)
        assert rpt.precondition == NO
        assert rpt.skipped

    def test_tridiag_no_violations(self):
        rpt = opsim.eigvec_rev_check(TRIDIAG, 3)
        assert rpt.violations == 0
        assert rpt.entries  # three real eigenvalues, all checked
