import random
from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given, settings, strategies as st

from ramanujan_lab.catalog import builtin_catalog, get_entry
from ramanujan_lab.errors import AccelerationFailure, DivergentSeries, PoleError
from ramanujan_lab.numerics import (
    GaussianRational,
    HPReal,
    _anchor,
    _tail_terms,
    bilateral_sum,
    bilateral_term,
    choose_method,
    default_sample_points,
    discriminant_extract,
    f_value,
    fallback_sample_points,
    gamma_hp,
    levin_u,
    r0_closed_form,
    ramanujan_constant,
    rational_reconstruct,
    solve_fourier,
    sum_unilateral,
)

EXAMPLES = {
    "T3.11": (("-14/3", "2"), ("0", "0")),
    "T3.6": (("1/3", "1/4"), ("0", "0")),
    "T5.2": (("-25/6", "8/3", "-2/3", "1/6"), ("0",) * 4),
    "T3.15": (("-79/2", "23/2"), ((0, Fraction(5, 2)), (0, Fraction(-3, 2)))),
}


def _gauss(v):
    if isinstance(v, tuple):
        return GaussianRational(Fraction(v[0]), Fraction(v[1]))
    return GaussianRational(Fraction(v))


# --- Gamma -----------------------------------------------------------------


def test_gamma_examples():
    with mp.workprec(300):
        assert abs(gamma_hp(Fraction(1, 2)).value - mp.sqrt(mp.pi)) < mp.mpf(10) ** -70
        assert gamma_hp(5).value == 24
        prod = gamma_hp(Fraction(1, 3)).value * gamma_hp(Fraction(2, 3)).value
        assert abs(prod - 2 * mp.pi / mp.sqrt(3)) < mp.mpf(10) ** -70


def test_gamma_poles():
    for x in (0, -1, -7, Fraction(-3)):
        with pytest.raises(PoleError):
            gamma_hp(x)
    with pytest.raises(PoleError):
        gamma_hp(mp.mpf(-2))


def test_gamma_reflection_and_duplication():
    rng = random.Random(7)
    with mp.workprec(300):
        for _ in range(10):
            x = Fraction(rng.randint(1, 999), 1000)
            g = lambda y: gamma_hp(y, 256).value  # noqa: E731
            refl = g(x) * g(1 - x) * mp.sinpi(mp.mpf(x.numerator) / x.denominator)
            assert abs(refl - mp.pi) < mp.mpf(2) ** -240
            dup = g(x) * g(x + Fraction(1, 2)) * 2 ** (2 * mp.mpf(x.numerator) / x.denominator - 1)
            assert abs(dup / (mp.sqrt(mp.pi) * g(2 * x)) - 1) < mp.mpf(2) ** -240


def test_gamma_error_bound_reported():
    r = gamma_hp(Fraction(7, 3), 128)
    assert r.precision_bits == 128 and 0 < r.error_bound < abs(r.value) * mp.mpf(2) ** -119


def test_hpreal_rejects_bad_fields():
    with pytest.raises(ValueError):
        HPReal(mp.mpf(1), 32)
    with pytest.raises(ValueError):
        HPReal(mp.mpf(1), 128, mp.mpf(-1))


# --- unilateral sums -------------------------------------------------------


def test_unilateral_examples():
    with mp.workdps(60):
        v = sum_unilateral(get_entry("T1.3"), 50)
        assert abs(v.value - 4 / mp.pi) < mp.mpf(10) ** -50
        v = sum_unilateral(get_entry("T3.11"), 50)
        assert abs(v.value - 384 / mp.pi**2) < mp.mpf(10) ** -48
        assert v.error_bound < mp.mpf(10) ** -45
    with pytest.raises(DivergentSeries):
        sum_unilateral(get_entry("T1.6"), 30)


@pytest.mark.parametrize("sid", ["T1.4", "T3.8", "T2.40", "T4.1", "T5.1"])
def test_unilateral_matches_closed_constant(sid):
    e = get_entry(sid)
    with mp.workdps(60):
        v = sum_unilateral(e, 50).value
        c = mp.re(ramanujan_constant(e))
        assert abs(v - c) <= mp.mpf(10) ** -45 * abs(c)


# --- Levin -----------------------------------------------------------------


def _partial_sums(terms):
    out, acc = [], mp.mpf(0)
    for t in terms:
        acc += t
        out.append(acc)
    return out


def test_levin_examples():
    with mp.workdps(40):
        grandi = levin_u(_partial_sums([(-1) ** n for n in range(12)]), 10)
        assert abs(grandi.value - mp.mpf(1) / 2) < mp.mpf(10) ** -30
        geo = levin_u(_partial_sums([mp.mpf(-2) ** n for n in range(22)], ), 20)
        assert abs(geo.value - mp.mpf(1) / 3) < mp.mpf(10) ** -25
        half = levin_u(_partial_sums([mp.mpf(2) ** -n for n in range(22)]), 20)
        assert abs(half.value - 2) < mp.mpf(2) ** -21  # better than the direct tail 2^-21
        assert half.error_bound < mp.mpf(2) ** -21


def test_levin_order_precondition():
    with pytest.raises(ValueError):
        levin_u([1, 2, 3], 5)


# --- reconstruction --------------------------------------------------------


def test_reconstruction_examples():
    with mp.workdps(50):
        assert rational_reconstruct(mp.mpf(1) / 3) == Fraction(1, 3)
        assert rational_reconstruct(mp.mpf("-4.66666666667"), digits=11) == Fraction(-14, 3)
        assert rational_reconstruct(+mp.pi, max_denominator=10) is None
        assert rational_reconstruct(+mp.pi) is None
        assert rational_reconstruct(mp.mpf(0)) == 0
        # below the 10^-25 residual level a value is indistinguishable from 0
        assert rational_reconstruct(mp.mpf(10) ** -30) == 0
        assert rational_reconstruct(mp.mpf(10) ** -10) == Fraction(1, 10**10)


@settings(max_examples=1000, deadline=None)
@given(st.integers(-10**9, 10**9), st.integers(1, 10**6))
def test_reconstruction_round_trip(num, den):
    q = Fraction(num, den)
    with mp.workdps(50):
        x = mp.mpf(q.numerator) / q.denominator
        assert rational_reconstruct(x, 10**12, digits=50) == q


def test_discriminant_extract_examples():
    with mp.workdps(50):
        assert discriminant_extract(2 * mp.sqrt(7)) == (1, 28)
        assert discriminant_extract(mp.mpf(3)) == (3, 1)
        assert discriminant_extract(mp.sqrt(3)) == (Fraction(1, 2), 12)
        assert discriminant_extract(-mp.sqrt(3)) == (Fraction(-1, 2), 12)
        assert discriminant_extract(mp.mpc(0, 3) * mp.sqrt(7)) == (3, -7)
        with pytest.raises(ValueError):
            discriminant_extract(mp.mpf(0))


def test_gaussian_rational():
    assert str(GaussianRational(Fraction(0), Fraction(5, 2))) == "5/2i"
    assert str(GaussianRational(Fraction(1), Fraction(-1))) == "1-i"
    assert GaussianRational.coerce("3/4").re == Fraction(3, 4)
    with pytest.raises(TypeError):
        GaussianRational.coerce(1 + 2j)


# --- bilateral sums --------------------------------------------------------


@pytest.mark.parametrize("entry", builtin_catalog(), ids=lambda e: e.id)
def test_recurrence_matches_direct_evaluation(entry):
    rng = random.Random(entry.id)
    with mp.workdps(50):
        for _ in range(2):
            x = mp.mpf(rng.randint(5, 95)) / 100 + mp.mpf(1) / 997
            anchor = _anchor(entry, x)
            right = _tail_terms(entry, x, anchor, 1)
            left = _tail_terms(entry, x, anchor, -1)
            for n in range(21):
                t = next(right)
                d = bilateral_term(entry, n, x)
                assert abs(t - d) <= mp.mpf(10) ** -40 * max(abs(d), 1e-300), (n, x)
            for n in range(-1, -21, -1):
                t = next(left)
                d = bilateral_term(entry, n, x)
                assert abs(t - d) <= mp.mpf(10) ** -40 * max(abs(d), 1e-300), (n, x)


def test_small_x_approaches_the_constant():
    e = get_entry("T3.6")
    with mp.workdps(40):
        c = ramanujan_constant(e)
        gaps = [abs(f_value(e, Fraction(1, k), 30).value - c) for k in (500, 1000)]
    # f(x) = C (1 + O(x^2)), so halving x divides the gap by about 4
    assert gaps[1] < gaps[0]
    assert 3.5 < gaps[0] / gaps[1] < 4.5


def test_bilateral_rejects_bad_points():
    e = get_entry("T3.6")
    for x in (0, 1, Fraction(1, 2), Fraction(3, 2)):
        with pytest.raises(ValueError):
            bilateral_sum(e, x, 20)
    with pytest.raises(ValueError):
        bilateral_sum(get_entry("T1.8"), Fraction(1, 4), 20)  # collides with s = 1/4


def test_bilateral_matches_closed_form_on_the_example():
    e = get_entry("T3.11")
    x = Fraction(3, 10)
    with mp.workdps(40):
        f = f_value(e, x, 30).value / ramanujan_constant(e)
        xv = mp.mpf(3) / 10
        k1 = -mp.mpf(14) / 3 * (mp.cospi(2 * xv) - 1)
        k2 = 2 * (mp.cospi(4 * xv) - 1)
        assert abs(f - (1 + k1 + k2)) < mp.mpf(10) ** -28


def test_non_alternating_tail_fails_loudly():
    with pytest.raises(AccelerationFailure):
        bilateral_sum(get_entry("T1.6"), Fraction(3, 10), 20)


# --- Fourier coefficients and r0 ---------------------------------------------


def test_method_choice():
    assert choose_method(get_entry("T3.11")) == "sample"
    assert choose_method(get_entry("T3.6")) == "sample"
    assert choose_method(get_entry("T3.15")) == "jet"
    for sid in ("T1.6", "T1.21", "T4.2"):
        with pytest.raises(AccelerationFailure):
            choose_method(get_entry(sid))


def test_default_points_are_admissible():
    for e in builtin_catalog():
        pts = default_sample_points(e.m)
        assert len(pts) == 2 * e.m
        for x in pts:
            assert 0 < x < 1 and x != Fraction(1, 2) and x not in e.s and 1 - x not in e.s


@pytest.mark.parametrize("sid", sorted(EXAMPLES))
def test_fourier_examples(sid):
    fc = solve_fourier(get_entry(sid), 40)
    alpha, beta = EXAMPLES[sid]
    assert fc.reconstructed
    assert fc.alpha == tuple(_gauss(a) for a in alpha)
    assert fc.beta == tuple(_gauss(b) for b in beta)


@pytest.mark.parametrize("sid", ["T3.11", "T3.6", "T5.2"])
def test_fourier_independent_of_sample_points(sid):
    e = get_entry(sid)
    default = solve_fourier(e, 40)
    fallback = solve_fourier(e, 40, sample_points=fallback_sample_points(e, 2 * e.m))
    assert default.sample_points != fallback.sample_points
    assert (default.alpha, default.beta) == (fallback.alpha, fallback.beta)


def test_fourier_argument_checks():
    e = get_entry("T3.11")
    with pytest.raises(ValueError):
        solve_fourier(e, 40, sample_points=[Fraction(1, 5)])
    with pytest.raises(ValueError):
        solve_fourier(e, 40, method="guess")
    with pytest.raises(ValueError):
        solve_fourier(e, 1000, max_precision_bits=1024)


@pytest.mark.parametrize("sid, r0, eps0, j, text", [
    ("T3.11", Fraction(93, 253), 1, 0, "93/253"),
    ("T3.15", Fraction(-30, 2401), -7, 0, "-30/2401*sqrt(-7)"),
    ("T3.6", Fraction(3, 2), -4, 1, "3/pi"),
    ("T5.2", Fraction(3), 1, 2, "3/pi^2"),
])
def test_r0_examples(sid, r0, eps0, j, text):
    e = get_entry(sid)
    alpha = [_gauss(a) for a in EXAMPLES[sid][0]]
    sc = r0_closed_form(e, alpha, 40)
    assert (sc.r0, sc.eps0, sc.j) == (r0, eps0, j)
    assert sc.closed_form() == text
    assert sc.eps0 == e.eps0
