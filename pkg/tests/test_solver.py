import numpy as np
import pytest

from detrep import (
    BivariatePolynomial,
    DegenerateSystemError,
    SolveOptions,
    accuracy_measure,
    newton_refine,
    solve_system,
)
from detrep.solver import SolveDiagnostics

from oracles import resultant_roots, smallest_singular_value_2x2
from test_polynomials import CUBIC, random_polynomial


def match_pairwise(records, reference, tol):
    """Greedy matching of computed roots against reference pairs."""
    remaining = list(reference)
    for rec in records:
        dists = [max(abs(rec.x - a), abs(rec.y - b)) for a, b in remaining]
        idx = int(np.argmin(dists))
        assert dists[idx] <= tol, f"root {(rec.x, rec.y)} unmatched (best {dists[idx]:.2e})"
        remaining.pop(idx)
    assert not remaining


class TestNewtonRefine:
    def test_exact_root_is_fixed_point(self):
        p = BivariatePolynomial.from_terms({(1, 0): 1.0, (0, 0): -1.0})
        q = BivariatePolynomial.from_terms({(0, 1): 1.0, (0, 0): -1.0})
        x, y, refined = newton_refine(p, q, 1.0, 1.0, steps=2)
        assert (x, y) == (1.0, 1.0)
        assert refined

    def test_quadratic_convergence(self):
        p = BivariatePolynomial.from_terms({(2, 0): 1.0, (0, 1): -1.0})  # x^2 - y
        q = BivariatePolynomial.from_terms({(0, 1): 1.0, (0, 0): -1.0})  # y - 1
        # direct-iteration oracle: y snaps to 1 immediately and x follows
        # the square-root recurrence x -> (x^2 + 1) / (2x)
        x, y, refined = newton_refine(p, q, 1.05, 1.02, steps=2)
        assert refined and y == pytest.approx(1.0)
        expect = 1.05
        for _ in range(2):
            expect = (expect * expect + 1.0) / (2.0 * expect)
        assert x == pytest.approx(expect, rel=1e-13)
        assert abs(x - 1.0) < abs(1.05 - 1.0) * 1e-3
        # two steps from a nearby start push the residual below 1e-8
        x, y, _ = newton_refine(p, q, 1.005, 1.002, steps=2)
        assert max(abs(p(x, y)), abs(q(x, y))) <= 1e-8

    def test_singular_jacobian_flags_unrefined(self):
        p = BivariatePolynomial.from_terms({(2, 0): 1.0})
        q = BivariatePolynomial.from_terms({(0, 2): 1.0})
        x, y, refined = newton_refine(p, q, 0.0, 0.0, steps=2)
        assert (x, y) == (0.0, 0.0)
        assert not refined


class TestAccuracyMeasure:
    def test_zero_at_exact_root(self):
        p = BivariatePolynomial.from_terms({(1, 0): 1.0, (0, 0): -1.0})
        q = BivariatePolynomial.from_terms({(0, 1): 1.0, (0, 0): -1.0})
        assert accuracy_measure(p, q, 1.0, 1.0) == 0.0

    def test_identity_jacobian_returns_residual(self):
        p = BivariatePolynomial.from_terms({(1, 0): 1.0, (0, 0): -1.0})
        q = BivariatePolynomial.from_terms({(0, 1): 1.0, (0, 0): -1.0})
        r = accuracy_measure(p, q, 1.25, 1.0)
        assert r == pytest.approx(0.25)

    def test_matches_two_by_two_svd_identity(self):
        rng = np.random.default_rng(30)
        p = random_polynomial(rng, 3)
        q = random_polynomial(rng, 3)
        from detrep import partial_derivatives

        (px, py), (qx, qy) = partial_derivatives(p), partial_derivatives(q)
        for _ in range(5):
            x, y = rng.uniform(-1, 1), rng.uniform(-1, 1)
            jac = np.array([[px(x, y), py(x, y)], [qx(x, y), qy(x, y)]])
            want = max(abs(p(x, y)), abs(q(x, y))) / smallest_singular_value_2x2(jac)
            assert accuracy_measure(p, q, x, y) == pytest.approx(want, rel=1e-10)

    def test_singular_jacobian_is_infinite(self):
        p = BivariatePolynomial.from_terms({(2, 0): 1.0})
        q = BivariatePolynomial.from_terms({(0, 2): 1.0})
        assert accuracy_measure(p, q, 0.0, 0.0) == float("inf")


class TestSolveSystem:
    def test_single_linear_root(self):
        p = BivariatePolynomial.from_terms({(1, 0): 1, (0, 1): 1, (0, 0): -1})
        q = BivariatePolynomial.from_terms({(1, 0): 1, (0, 1): -1})
        records = solve_system(p, q)
        assert len(records) == 1
        assert records[0].x == pytest.approx(0.5)
        assert records[0].y == pytest.approx(0.5)

    def test_cubic_pair_against_resultant_oracle(self):
        q = BivariatePolynomial.from_terms({(3, 0): 1, (0, 3): 1, (0, 0): -1})
        records = solve_system(CUBIC, q)
        assert len(records) == 9
        assert max(r.accuracy for r in records) <= 1e-8
        reference = resultant_roots(CUBIC.coeffs, q.coeffs)
        assert len(reference) == 9
        match_pairwise(records, reference, 1e-7)

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_bezout_count_random_dense(self, n):
        rng = np.random.default_rng(200 + n)
        p = random_polynomial(rng, n)
        q = random_polynomial(rng, n)
        records = solve_system(p, q)
        assert sum(r.multiplicity for r in records) == n * n
        assert max(r.accuracy for r in records) <= 1e-6

    def test_linearization_choices_agree(self):
        rng = np.random.default_rng(31)
        p = random_polynomial(rng, 4, complex_coeffs=True)
        q = random_polynomial(rng, 4, complex_coeffs=True)
        lin1 = solve_system(p, q, SolveOptions(linearization="lin1"))
        lin2 = solve_system(p, q, SolveOptions(linearization="lin2"))
        assert len(lin1) == len(lin2) == 16
        match_pairwise(lin1, [(r.x, r.y) for r in lin2], 1e-7)

    def test_conjugate_closure_for_real_systems(self):
        rng = np.random.default_rng(32)
        p = random_polynomial(rng, 4)
        q = random_polynomial(rng, 4)
        records = solve_system(p, q)
        pairs = [(r.x, r.y) for r in records]
        match_pairwise(records, [(np.conj(x), np.conj(y)) for x, y in pairs], 1e-7)

    def test_newton_contraction(self):
        """One step shrinks the residual at least tenfold near simple roots."""
        rng = np.random.default_rng(33)
        p = random_polynomial(rng, 3)
        q = random_polynomial(rng, 3)
        roots = solve_system(p, q)
        scale = max(p.coeff_norm(), q.coeff_norm())
        checked = 0
        for rec in roots[:5]:
            x0 = rec.x + 1e-4
            y0 = rec.y - 1e-4
            if accuracy_measure(p, q, x0, y0) > 1e-2:
                continue
            before = max(abs(p(x0, y0)), abs(q(x0, y0)))
            x1, y1, _ = newton_refine(p, q, x0, y0, steps=1)
            after = max(abs(p(x1, y1)), abs(q(x1, y1)))
            assert after <= before / 10.0 or after <= 1e2 * np.finfo(float).eps * scale
            checked += 1
        assert checked > 0

    def test_sorted_by_accuracy(self):
        rng = np.random.default_rng(34)
        p = random_polynomial(rng, 3)
        q = random_polynomial(rng, 3)
        records = solve_system(p, q)
        accs = [r.accuracy for r in records]
        assert accs == sorted(accs)

    def test_forced_variable_swap_recovers_roots(self):
        p = BivariatePolynomial.from_terms({(1, 0): 1, (0, 1): 1, (0, 0): -1})
        q = BivariatePolynomial.from_terms({(1, 0): 1, (0, 1): -1})
        records = solve_system(p, q, SolveOptions(swap_variables=True))
        assert len(records) == 1
        assert records[0].x == pytest.approx(0.5)
        assert records[0].y == pytest.approx(0.5)

    def test_non_zero_dimensional_system_rejected(self):
        p = BivariatePolynomial.from_terms({(1, 0): 1, (0, 1): 1, (0, 0): -1})
        with pytest.raises(DegenerateSystemError):
            solve_system(p, p)

    def test_zero_polynomial_rejected(self):
        p = BivariatePolynomial.from_terms({(1, 0): 1})
        with pytest.raises(ValueError):
            solve_system(p, BivariatePolynomial.zero())

    def test_diagnostics_populated(self):
        rng = np.random.default_rng(35)
        p = random_polynomial(rng, 3)
        q = random_polynomial(rng, 3)
        diag = SolveDiagnostics()
        solve_system(p, q, SolveOptions(linearization="lin1"), diag)
        assert diag.delta_size == 25
        assert diag.reduced_size == 9
        assert diag.candidates == 9
