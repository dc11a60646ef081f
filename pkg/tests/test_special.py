import math

import pytest

from pqdurrmeyer.calculus import IntegrationPolicy
from pqdurrmeyer.core import DomainError, PqParams, pq_number
from pqdurrmeyer.identities import run_identity_suite
from pqdurrmeyer.special import (
    BetaMode,
    beta_factored,
    beta_integrand,
    log_beta,
    pq_beta,
    pq_beta_closed,
    pq_beta_commutative,
    pq_beta_integral,
    pq_gamma,
)

BETA_GRID = [PqParams(p, f * p) for p in (0.5, 0.75, 0.95, 1.0) for f in (0.5, 0.8, 0.99)]


def rel(a, b):
    return abs(a - b) / abs(b)


class TestGamma:
    def test_examples(self, params):
        assert pq_gamma(1, params) == 1.0
        assert pq_gamma(4, params) == pytest.approx(0.549, rel=1e-14)
        assert pq_gamma(3, PqParams(1.0, 0.999999)) == pytest.approx(2.0, rel=1e-5)

    @pytest.mark.parametrize("n", [0, -2, 1.5])
    def test_rejects_non_positive(self, params, n):
        with pytest.raises(DomainError):
            pq_gamma(n, params)

    def test_recurrence(self, params):
        for n in range(1, 12):
            assert pq_gamma(n + 1, params) == pytest.approx(pq_number(n, params) * pq_gamma(n, params))


class TestBeta:
    def test_closed_examples(self, params):
        assert pq_beta_closed(3, 1, params) == pytest.approx(1 / 0.61, rel=1e-14)
        assert pq_beta_closed(1, 1, params) == 1.0
        assert pq_beta_closed(2, 2, params) == pytest.approx(0.25 / 0.549, rel=1e-14)

    def test_integral_examples(self, params):
        assert pq_beta_integral(1, 1, params) == pytest.approx(1.0, abs=1e-10)
        assert pq_beta_integral(2, 1, params) == pytest.approx(1 / 0.9, abs=1e-10)
        assert pq_beta_integral(2, 2, params) == pytest.approx(0.25 / 0.549, abs=1e-9)

    def test_closed_is_positive(self, params):
        assert all(pq_beta_closed(m, n, params) > 0 for m in range(1, 15) for n in range(1, 15))

    @pytest.mark.parametrize("params", BETA_GRID, ids=str)
    def test_beta_gamma_identity(self, params):
        for m in range(1, 9):
            for n in range(1, 9):
                assert rel(pq_beta_integral(m, n, params), pq_beta_closed(m, n, params)) <= 1e-9

    def test_descent_recurrence(self, params):
        p = params.p
        for m in range(2, 7):
            for n in range(1, 7):
                rhs = pq_number(m - 1, params) / (p ** (m - 1) * pq_number(n, params)) * pq_beta_closed(m - 1, n + 1, params)
                assert rel(pq_beta_closed(m, n, params), rhs) <= 1e-10

    def test_splitting_recurrence(self, params):
        p, q = params.p, params.q
        for m in range(1, 7):
            for n in range(1, 7):
                rhs = p ** (n - 1) * pq_beta_closed(m, n, params) - q**n * pq_beta_closed(m + 1, n, params)
                assert rel(pq_beta_closed(m, n + 1, params), rhs) <= 1e-10

    def test_step_recurrence(self, params):
        p, q = params.p, params.q
        for m in range(1, 7):
            for n in range(1, 7):
                factor = p ** (n + m - 1) * (p**n - q**n) / (p ** (n + m) - q ** (n + m))
                assert rel(pq_beta_closed(m, n + 1, params), factor * pq_beta_closed(m, n, params)) <= 1e-10

    def test_non_commutative(self, params):
        assert rel(pq_beta_closed(2, 3, params), pq_beta_closed(3, 2, params)) > 1e-6

    def test_large_arguments_in_log_domain(self, params):
        value = log_beta(300, 300, params)
        assert math.isfinite(value)
        assert pq_beta(300, 300, params) >= 0.0

    def test_tight_policy_still_converges(self, params):
        policy = IntegrationPolicy(rel_tol=1e-15)
        assert rel(pq_beta_integral(3, 4, params, policy), pq_beta_closed(3, 4, params)) <= 1e-12


class TestCommutativeBeta:
    def test_examples(self, params):
        assert pq_beta_commutative(1, 1, params) == 1.0
        assert pq_beta_commutative(2, 3, params) == pq_beta_commutative(3, 2, params)
        assert pq_beta_commutative(2, 2, params) == pytest.approx(0.125 / 0.549, rel=1e-14)

    def test_matches_integral(self, params):
        for m in range(1, 7):
            for n in range(1, 7):
                numeric = pq_beta_integral(m, n, params, mode=BetaMode.COMMUTATIVE)
                assert rel(numeric, pq_beta_commutative(m, n, params)) <= 1e-9

    def test_exact_symmetry_in_log_domain(self, params):
        for m in range(1, 11):
            for n in range(1, 11):
                a = beta_factored(m, n, params, BetaMode.COMMUTATIVE)
                b = beta_factored(n, m, params, BetaMode.COMMUTATIVE)
                assert a.to_signed_log(params) == b.to_signed_log(params)

    def test_rescaling(self, params):
        for m in range(1, 6):
            for n in range(1, 6):
                expected = params.p ** (m * (m - 1) // 2) * pq_beta_closed(m, n, params)
                assert rel(pq_beta_commutative(m, n, params), expected) <= 1e-13

    def test_integrand_rejects_bad_index(self, params):
        with pytest.raises(DomainError):
            beta_integrand(0, 2, params)


class TestIdentitySuite:
    def test_all_pass(self, params):
        report = run_identity_suite(params, max_index=8)
        failing = [c["name"] for c in report["checks"] if not c["passed"]]
        assert report["all_passed"], failing
        assert all(c["max_error"] < 1e-9 for c in report["checks"] if not c["expected_fail"])

    def test_witness_is_expected_fail(self, params):
        report = run_identity_suite(params, max_index=3)
        witness = next(c for c in report["checks"] if c["name"] == "beta_noncommutativity_witness")
        assert witness["expected_fail"] and witness["passed"] and witness["applicable"]

    def test_degenerate_p_one(self):
        report = run_identity_suite(PqParams(1.0, 0.9), max_index=8)
        assert report["all_passed"]
        witness = next(c for c in report["checks"] if c["name"] == "beta_noncommutativity_witness")
        assert not witness["applicable"]

    @pytest.mark.parametrize("max_index", [0, 13])
    def test_max_index_range(self, params, max_index):
        with pytest.raises(ValueError):
            run_identity_suite(params, max_index=max_index)

    def test_deterministic(self, params):
        assert run_identity_suite(params, 4) == run_identity_suite(params, 4)
