import math

import mpmath
import pytest

from aactk import modmath, quadfield
from aactk.errors import BadDiscriminant, OutOfRange, PerfectSquare, WrongResidueClass


def brute_fundamental_unit(p, u_limit=10**6):
    """Oracle: scan u = 1, 2, ... for the first t with t^2 - p u^2 = -4 or +4.

    Minimal u gives the minimal unit (t + u sqrt(p))/2; for fixed u the
    norm -4 solution is the smaller of the two.
    """
    for u in range(1, u_limit):
        for norm in (-1, 1):
            tt = p * u * u + 4 * norm
            t = math.isqrt(tt)
            if t * t == tt:
                return t, u, norm
    raise AssertionError("oracle exhausted")


def brute_pell(D, v_limit):
    for v in range(1, v_limit + 1):
        uu = 1 + D * v * v
        u = math.isqrt(uu)
        if u * u == uu:
            return u, v
    return None


class TestContinuedFraction:
    def test_anchors(self):
        cf = quadfield.cf_sqrt(2)
        assert (cf.a0, cf.period) == (1, (2,))
        cf = quadfield.cf_sqrt(13)
        assert (cf.a0, cf.period) == (3, (1, 1, 1, 1, 6))

    def test_perfect_square_rejected(self):
        with pytest.raises(PerfectSquare):
            quadfield.cf_sqrt(4)
        with pytest.raises(OutOfRange):
            quadfield.cf_sqrt(1)

    def test_period_ends_with_2a0(self):
        for D in range(2, 500):
            if math.isqrt(D) ** 2 == D:
                continue
            cf = quadfield.cf_sqrt(D)
            assert cf.period[-1] == 2 * cf.a0, D

    def test_first_period_convergent_unit_to_1e4(self):
        # the convergent at the end of the first period solves x^2 - D y^2 = +-1
        for D in range(2, 10_001):
            if math.isqrt(D) ** 2 == D:
                continue
            h, k, ell = quadfield._first_period_convergent(D)
            assert h * h - D * k * k == (-1) ** ell, D


class TestPell:
    def test_anchors(self):
        s = quadfield.pell_min_solution(2)
        assert (s.u1, s.v1) == (3, 2)
        s = quadfield.pell_min_solution(3)
        assert (s.u1, s.v1) == (2, 1)
        s = quadfield.pell_min_solution(99)
        assert (s.u1, s.v1) == (10, 1)

    def test_satisfies_equation(self):
        for D in (2, 7, 61, 109, 1817):
            s = quadfield.pell_min_solution(D)
            assert s.u1 * s.u1 - D * s.v1 * s.v1 == 1

    def test_equals_brute_force_when_small(self):
        for D in range(2, 300):
            if math.isqrt(D) ** 2 == D:
                continue
            s = quadfield.pell_min_solution(D)
            if s.v1 <= 1000:
                assert brute_pell(D, 1000) == (s.u1, s.v1), D

    def test_classical_table_values(self):
        # the two famous hard cases from the classical tables
        s = quadfield.pell_min_solution(61)
        assert (s.u1, s.v1) == (1766319049, 226153980)
        s = quadfield.pell_min_solution(109)
        assert (s.u1, s.v1) == (158070671986249, 15140424455100)

    def test_n2m1_family(self):
        from aactk.gaac import squarefree

        for n in range(2, 301):
            if squarefree(n * n - 1):
                s = quadfield.pell_min_solution(n * n - 1)
                assert (s.u1, s.v1) == (n, 1), n

    def test_perfect_square_rejected(self):
        with pytest.raises(PerfectSquare):
            quadfield.pell_min_solution(49)


class TestFundamentalUnit:
    def test_anchors(self):
        u = quadfield.fundamental_unit(5)
        assert (u.t, u.u, u.norm_sign) == (1, 1, -1)
        u = quadfield.fundamental_unit(13)
        assert (u.t, u.u, u.norm_sign) == (3, 1, -1)
        u = quadfield.fundamental_unit(29)
        assert (u.t, u.u, u.norm_sign) == (5, 1, -1)

    def test_half_integral_and_integral_cases(self):
        # p = 61 keeps odd coordinates; p = 37 and 41 fall back to 2x, 2y
        u = quadfield.fundamental_unit(61)
        assert (u.t, u.u) == (39, 5)
        u = quadfield.fundamental_unit(37)
        assert (u.t, u.u) == (12, 2)
        u = quadfield.fundamental_unit(41)
        assert (u.t, u.u) == (64, 10)

    def test_against_brute_force_scan(self):
        for p in modmath.primes_in(5, 200):
            if p % 4 != 1:
                continue
            u = quadfield.fundamental_unit(p)
            assert (u.t, u.u, u.norm_sign) == brute_fundamental_unit(p), p

    def test_norm_minus_one_to_2000(self):
        for p in modmath.primes_in(5, 2000):
            if p % 4 != 1:
                continue
            u = quadfield.fundamental_unit(p)
            assert u.norm_sign == -1
            assert u.t * u.t - p * u.u * u.u == -4

    def test_requires_1_mod_4(self):
        with pytest.raises(WrongResidueClass):
            quadfield.fundamental_unit(7)


class TestRegulator:
    def test_anchors(self):
        u5 = quadfield.fundamental_unit(5)
        assert abs(quadfield.regulator(u5) - 0.4812118250596035) < 1e-12
        p2 = quadfield.pell_min_solution(2)
        assert abs(quadfield.regulator(p2) - 1.7627471740390861) < 1e-12

    def test_huge_unit_relative_error(self):
        D = 19231  # long continued-fraction period, ~500-bit solution
        s = quadfield.pell_min_solution(D)
        got = quadfield.regulator(s)
        with mpmath.workdps(300):
            want = float(mpmath.log(s.u1 + s.v1 * mpmath.sqrt(D)))
        assert abs(got - want) / want < 1e-12

    def test_degenerate_guard(self):
        with pytest.raises(OutOfRange):
            quadfield.regulator(quadfield.FundamentalUnit(p=5, t=1, u=0, norm_sign=-1))
        with pytest.raises(OutOfRange):
            quadfield.regulator(quadfield.PellSolution(D=2, u1=1, v1=0))


class TestClassNumbers:
    def test_dirichlet_anchors(self):
        assert quadfield.class_number_dirichlet(5) == 1
        assert quadfield.class_number_dirichlet(13) == 1
        assert quadfield.class_number_dirichlet(40) == 2

    def test_form_anchors(self):
        assert quadfield.form_class_number(20) == 1
        assert quadfield.form_class_number(40) == 2
        assert quadfield.form_class_number(5) == 1

    def test_known_class_numbers(self):
        # classical values: h(Q(sqrt(229))) = 3, h(Q(sqrt(401))) = 5, both norm -1
        assert quadfield.class_number_dirichlet(229) == 3
        assert quadfield.form_class_number(229) == 3
        assert quadfield.class_number_dirichlet(401) == 5

    def test_methods_agree_small(self):
        for d in range(5, 500):
            if quadfield.is_fundamental_discriminant(d):
                assert quadfield.class_number_dirichlet(d) == quadfield.form_class_number(d), d

    def test_genus_theory_divisibility(self):
        # the narrow class group has 2-rank (number of prime discriminant
        # factors) - 1, so 2^(omega(d)-1) divides the cycle count
        import sympy

        for d in range(5, 1000):
            if not quadfield.is_fundamental_discriminant(d):
                continue
            two_rank = len(sympy.factorint(d)) - 1
            assert quadfield.form_class_number(d) % 2**two_rank == 0, d

    def test_nonfundamental_rejected(self):
        for d in (9, 20, 45, 48):
            with pytest.raises(BadDiscriminant):
                quadfield.class_number_dirichlet(d)

    def test_bad_form_discriminants(self):
        with pytest.raises(BadDiscriminant):
            quadfield.form_class_number(7)  # 3 mod 4
        with pytest.raises(BadDiscriminant):
            quadfield.form_class_number(16)  # perfect square

    def test_reduced_forms_are_reduced_and_cycle(self):
        for disc in (5, 40, 229, 316):
            forms = quadfield.reduced_forms(disc)
            s = math.isqrt(disc)
            seen = {(f.a, f.b, f.c) for f in forms}
            assert len(seen) == len(forms)
            for f in forms:
                assert f.discriminant() == disc
                assert quadfield._is_reduced(f.a, f.b, disc)
                # rho stays inside the reduced set (it permutes it)
                g = quadfield._rho(f, disc, s)
                assert (g.a, g.b, g.c) in seen, (disc, f, g)

    def test_bound_check(self):
        assert quadfield.class_number_bound_check(5)
        assert quadfield.class_number_bound_check(13)
        assert quadfield.class_number_bound_check(9973)  # largest 1 mod 4 prime below 1e4

    def test_l_series_estimate_brackets_exact(self):
        for d in (5, 13, 40, 229):
            exact = -quadfield._lsum_float(d) / math.sqrt(d)
            approx, bound = quadfield.l_series_estimate(d)
            assert abs(approx - exact) <= bound, d

    def test_extended_precision_fallback(self, monkeypatch):
        # ruin the float sum: the mpmath retry must still land on h = 3
        monkeypatch.setattr(quadfield, "_lsum_float", lambda d: -1.0)
        assert quadfield.class_number_dirichlet(229) == 3

    def test_precision_loss_raised(self, monkeypatch):
        from aactk.errors import PrecisionLoss

        monkeypatch.setattr(quadfield, "_lsum_float", lambda d: -1.0)
        monkeypatch.setattr(quadfield, "_lsum_mpmath", lambda d, dps: -1.0)
        with pytest.raises(PrecisionLoss):
            quadfield.class_number_dirichlet(229)

    def test_mpmath_lsum_matches_float(self):
        for d in (5, 40, 229):
            assert abs(quadfield._lsum_mpmath(d, 30) - quadfield._lsum_float(d)) < 1e-9

    def test_is_fundamental_discriminant(self):
        assert quadfield.is_fundamental_discriminant(5)
        assert quadfield.is_fundamental_discriminant(8)
        assert quadfield.is_fundamental_discriminant(12)
        assert quadfield.is_fundamental_discriminant(13)
        assert not quadfield.is_fundamental_discriminant(9)
        assert not quadfield.is_fundamental_discriminant(20)
        assert not quadfield.is_fundamental_discriminant(4)
        assert not quadfield.is_fundamental_discriminant(-3)
