"""High-precision numerics: series values, bilateral sums, Fourier
coefficients of the periodic factor, and closed forms for r0 / eps0.

Everything runs on mpmath.  Each public function sets its own working
precision with ``mp.workprec`` so callers never have to touch the global
context.  Exact inputs (series data, sample points) stay as Fractions as long
as possible; the only transcendental factor in a bilateral sum is the anchor
term A(0, x), every other term is that anchor times an exact rational ratio.

Divergent tails are given a value through the Levin u-transform.  This is a
numerical stand-in for analytic continuation, with a heuristic error
estimate; it works when the divergent terms alternate in sign and is refused
(``AccelerationFailure``) otherwise.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath as mp

from .catalog import HALF, SeriesEntry
from .errors import (
    AccelerationFailure,
    DivergentSeries,
    PoleError,
    ReconstructionFailure,
    SingularSystem,
)
from .exact import as_rational, fundamental_discriminant

LOG2_10 = math.log2(10)

#: rational reconstruction: accept when the next partial quotient is this big
PARTIAL_QUOTIENT_CUTOFF = 10**6
DEFAULT_MAX_DENOMINATOR = 10**12
DEFAULT_MAX_LEVIN_ORDER = 400
DEFAULT_MAX_PRECISION_BITS = 4096
FALLBACK_SEED = 20240229


def digits_to_bits(digits: int) -> int:
    return int(math.ceil(digits * LOG2_10)) + 8


def default_max_denominator(digits: int) -> int:
    return 10 ** max(digits // 5, 2)


def _mpf(q):
    q = as_rational(q)
    return mp.mpf(q.numerator) / q.denominator


# ---------------------------------------------------------------------------
# carriers


@dataclass(frozen=True)
class HPReal:
    value: mp.mpf
    precision_bits: int
    error_bound: mp.mpf = mp.mpf(0)

    def __post_init__(self):
        if self.precision_bits < 64:
            raise ValueError("precision_bits must be at least 64")
        if not mp.isfinite(self.error_bound) or self.error_bound < 0:
            raise ValueError("error_bound must be finite and nonnegative")

    def __float__(self):
        return float(self.value)

    def nstr(self, digits=20):
        return mp.nstr(self.value, digits)


@dataclass(frozen=True)
class HPComplex:
    value: mp.mpc
    precision_bits: int
    error_bound: mp.mpf = mp.mpf(0)

    def __post_init__(self):
        if self.precision_bits < 64:
            raise ValueError("precision_bits must be at least 64")
        if not mp.isfinite(self.error_bound) or self.error_bound < 0:
            raise ValueError("error_bound must be finite and nonnegative")

    @property
    def real(self) -> HPReal:
        return HPReal(mp.re(self.value), self.precision_bits, self.error_bound)

    @property
    def imag(self) -> HPReal:
        return HPReal(mp.im(self.value), self.precision_bits, self.error_bound)

    def nstr(self, digits=20):
        return mp.nstr(self.value, digits)


@dataclass(frozen=True)
class GaussianRational:
    re: Fraction
    im: Fraction = Fraction(0)

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        im = "i" if self.im == 1 else "-i" if self.im == -1 else f"{self.im}i"
        if self.re == 0:
            return im
        sign = "" if im.startswith("-") else "+"
        return f"{self.re}{sign}{im}"

    def to_mp(self):
        return mp.mpc(_mpf(self.re), _mpf(self.im))

    def to_json(self):
        return [str(self.re), str(self.im)]

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, complex):
            raise TypeError("refusing to build an exact value from a float complex")
        return cls(as_rational(value))


@dataclass(frozen=True)
class FourierCoefficients:
    """alpha_k, beta_k for k = 1..m.

    When every coefficient reconstructs, ``alpha``/``beta`` hold Gaussian
    rationals and ``reconstructed`` is True; otherwise they are None and only
    the numeric values are meaningful.
    """

    alpha: tuple | None
    beta: tuple | None
    numeric_alpha: tuple
    numeric_beta: tuple
    reconstructed: bool
    method: str
    sample_points: tuple = ()
    precision_bits: int = 0
    check_residual: mp.mpf = mp.mpf(0)

    @property
    def m(self):
        return len(self.numeric_alpha)


@dataclass(frozen=True)
class SemiTerminatingConstant:
    """prefactor = r0 * sqrt((-1)^j eps0) / pi^j  (principal square root)."""

    r0: Fraction
    eps0: int
    j: int
    prefactor: mp.mpc = field(default=mp.mpc(0), compare=False)

    def closed_form(self) -> str:
        """Readable form of the prefactor, e.g. ``3/pi`` or ``-30/2401*sqrt(-7)``."""
        rad = (-1) ** self.j * self.eps0
        root = math.isqrt(rad) if rad > 0 else 0
        if root * root == rad:
            text = str(self.r0 * root)
        else:
            text = f"{self.r0}*sqrt({rad})"
        if self.j:
            text += "/pi" + (f"^{self.j}" if self.j > 1 else "")
        return text


# ---------------------------------------------------------------------------
# Gamma


def gamma_hp(x, precision_bits: int = 256) -> HPReal:
    """Gamma function at a real argument with relative error below
    2^(8 - precision_bits)."""
    if isinstance(x, HPReal):
        x = x.value
    if isinstance(x, (int, Fraction, str)):
        q = as_rational(x)
        if q.denominator == 1 and q <= 0:
            raise PoleError(f"Gamma has a pole at {q}")
        with mp.workprec(precision_bits + 16):
            val = mp.gamma(_mpf(q))
    else:
        with mp.workprec(precision_bits + 16):
            xv = mp.mpf(x)
            if xv <= 0 and mp.isint(xv):
                raise PoleError(f"Gamma has a pole at {xv}")
            val = mp.gamma(xv)
    with mp.workprec(precision_bits):
        val = +val
        err = abs(val) * mp.mpf(2) ** (8 - precision_bits)
    return HPReal(val, precision_bits, err)


# ---------------------------------------------------------------------------
# closed values


def ramanujan_constant(entry: SeriesEntry):
    """v0 sqrt((-1)^m chi0) / pi^m, an mpc at the current precision."""
    return entry.v0 * mp.sqrt(mp.mpc((-1) ** entry.m * entry.chi0)) / mp.pi**entry.m


def is_real_valued(entry: SeriesEntry) -> bool:
    return (-1) ** entry.m * entry.chi0 > 0


# ---------------------------------------------------------------------------
# unilateral sums


def sum_unilateral(entry: SeriesEntry, digits: int) -> HPReal:
    """Sum_{n>=0} A(n, 0) for a convergent entry.

    Terms come from the exact ratio z0 * prod (s+n-1)/n; the poly factor is
    applied on top.  Once |z0| * P(n+1)/P(n) <= rho = (1+|z0|)/2 the
    remaining tail is bounded by a geometric series with ratio rho (P has
    positive coefficients, so P(n+1)/P(n) decreases to 1).
    """
    if abs(entry.z0) >= 1:
        raise DivergentSeries(f"{entry.id}: |z0| = {abs(entry.z0)} >= 1; only convergent series are summed")
    bits = digits_to_bits(digits) + 32
    rho = (1 + abs(entry.z0)) / 2
    with mp.workprec(bits):
        eps = mp.mpf(10) ** (-digits - 5)
        h = mp.mpf(1)  # prod (s)_n / n!^(2m+1) * z0^n
        total = mp.mpf(0)
        n = 0
        while True:
            if n:
                r = entry.z0
                for s in entry.s:
                    r *= (s + n - 1) / Fraction(n)
                h *= _mpf(r)
            t = h * _mpf(entry.poly(n))
            total += t
            step = abs(entry.z0) * Fraction(entry.poly(n + 1), entry.poly(n))
            if step <= rho:
                bound = abs(t) * _mpf(rho / (1 - rho))
                if bound <= eps * abs(total):
                    break
            n += 1
        err = bound + abs(total) * mp.mpf(2) ** (-bits + 8)
        return HPReal(+total, bits, err)


# ---------------------------------------------------------------------------
# Levin u-transform


def levin_u(partial_sums, order: int | None = None, beta=1):
    """Levin u-transform of a sequence of partial sums.

    Uses remainder estimates omega_n = (beta + n) a_n with a_n = s_n - s_{n-1}
    (a_0 = s_0).  ``order`` k uses s_0 .. s_k; the error estimate is the
    difference to order k-1, so at least ``order + 2`` sums are expected (the
    estimate is dropped otherwise).  Returns an HPReal or HPComplex at the
    current working precision.
    """
    s = [mp.mpmathify(v.value if isinstance(v, (HPReal, HPComplex)) else v) for v in partial_sums]
    if order is None:
        order = len(s) - 1
    if order < 0 or order >= len(s):
        raise ValueError(f"order {order} needs at least {order + 1} partial sums, got {len(s)}")
    terms = [s[0]] + [s[i] - s[i - 1] for i in range(1, len(s))]

    def transform(k):
        num = den = mp.mpf(0)
        for jj in range(k + 1):
            w = (beta + jj) * terms[jj]
            if w == 0:
                raise AccelerationFailure(f"Levin transform: term {jj} vanishes")
            c = (-1) ** jj * mp.binomial(k, jj) * mp.power(mp.mpf(beta + jj) / (beta + k), k - 1)
            num += c * s[jj] / w
            den += c / w
        if den == 0:
            raise AccelerationFailure("Levin transform: vanishing denominator")
        return num / den

    value = transform(order)
    err = abs(value - transform(order - 1)) if order >= 1 and len(s) >= order + 1 else mp.mpf(0)
    bits = max(mp.mp.prec, 64)
    if isinstance(value, mp.mpc):
        return HPComplex(value, bits, err)
    return HPReal(value, bits, err)


# ---------------------------------------------------------------------------
# bilateral sums


def _ratio(entry: SeriesEntry, x, n: int):
    """A(n, x) / A(n-1, x) without the poly factor: z0 prod (s+x+n-1)/(x+n)."""
    r = entry.z0 if isinstance(x, Fraction) else _mpf(entry.z0)
    for s in entry.s:
        r *= (s + x + n - 1) / (x + n)
    return r


def _anchor(entry: SeriesEntry, x):
    """A(0, x) without the poly factor: z0^x prod Gamma(s+x)/(Gamma(s)Gamma(1+x))."""
    xv = _mpf(x) if isinstance(x, Fraction) else x
    h = mp.power(mp.mpc(_mpf(entry.z0)), xv)
    g1 = mp.gamma(1 + xv)
    for s in entry.s:
        sv = _mpf(s)
        h *= mp.gamma(sv + xv) / (mp.gamma(sv) * g1)
    return h


def _poly_at(entry, y):
    acc = 0
    for c in reversed(entry.a):
        acc = acc * y + c
    return acc


def _tail_terms(entry: SeriesEntry, x, anchor, direction: int):
    """Yield A(n, x) for n = 0, 1, 2, ... (direction +1) or n = -1, -2, ...
    (direction -1)."""
    h = anchor
    exact = isinstance(x, Fraction)
    conv = _mpf if exact else (lambda v: v)
    if direction > 0:
        n = 0
        while True:
            if n:
                h *= conv(_ratio(entry, x, n))
            yield h * conv(_poly_at(entry, x + n))
            n += 1
    else:
        n = 0
        while True:
            r = _ratio(entry, x, n)
            if r == 0:
                raise PoleError(f"{entry.id}: term ratio vanishes at n={n}, x={x}")
            h /= conv(r)
            n -= 1
            yield h * conv(_poly_at(entry, x + n))


def _sum_direct(gen, tol, max_terms=100_000):
    total = 0
    small = 0
    for i, t in enumerate(gen):
        total += t
        if abs(t) <= tol * abs(total):
            small += 1
            if small >= 3:
                return total, abs(t)
        else:
            small = 0
        if i > max_terms:
            break
    raise AccelerationFailure("convergent tail did not settle")


def _sum_levin(gen, tol, max_order, step=10):
    """Adaptive Levin: raise the order in steps until two consecutive
    estimates agree to ``tol`` (relative).  Gives up early once the changes
    grow by a factor 10^3 over the best seen, which signals that working
    precision, not order, is the bottleneck."""
    sums = []
    total = 0
    prev = None
    best = None
    diff = None
    order = step
    for t in gen:
        total += t
        sums.append(total)
        if len(sums) == order + 1:
            est = levin_u(sums, order).value
            if prev is not None:
                diff = abs(est - prev)
                if diff <= tol * max(abs(est), 1):
                    return est, diff
                if best is not None and diff > 1000 * best:
                    break
                best = diff if best is None else min(best, diff)
            prev = est
            order += step
            if order > max_order:
                break
    raise AccelerationFailure(
        f"Levin estimates still disagree at order {order - step} "
        f"(last change {mp.nstr(diff, 3) if diff is not None else '?'}, {mp.mp.prec} bits)"
    )


def _precision_ladder(fn, bits, max_bits):
    """Run ``fn()`` at ``bits``, doubling on AccelerationFailure up to
    ``max_bits``; returns (result, bits used)."""
    bits = min(bits, max_bits)
    while True:
        try:
            with mp.workprec(bits):
                return fn(), bits
        except AccelerationFailure:
            if bits >= max_bits:
                raise
            bits = min(2 * bits, max_bits)


#: alternating divergent tails with term ratio beyond this are not sampled
#: (Levin needs far more than 4096 bits there); see choose_method
LEVIN_RATIO_LIMIT = 10**4


def bilateral_term(entry: SeriesEntry, n: int, x):
    """A(n, x) evaluated directly:

        z0^(n+x) prod Gamma(s+x+n) / (Gamma(s) Gamma(1+x+n)) * P(n+x),

    with 1/Gamma(1+x+n) read as 0 at its poles.  Independent of the ratio
    recurrence used by the tail generators (an oracle for it)."""
    xv = _mpf(x) if isinstance(x, Fraction) else mp.mpf(x)
    z = mp.power(mp.mpc(_mpf(entry.z0)), xv) * _mpf(entry.z0) ** n
    rg = mp.rgamma(1 + xv + n)
    for s in entry.s:
        sv = _mpf(s)
        if mp.isint(sv + xv + n) and sv + xv + n <= 0:
            raise PoleError(f"(s+x)_n has a pole for s={s}, x={x}, n={n}")
        z *= mp.gamma(sv + xv + n) * rg / mp.gamma(sv)
    return z * _poly_at(entry, xv + n)


def _tail_kind(z0: Fraction, direction: int) -> str:
    """'direct', 'levin' or 'none' for the right (+1) or left (-1) tail."""
    lim = z0 if direction > 0 else 1 / z0
    if abs(lim) < 1:
        return "direct"
    if lim < 0:
        return "levin"
    return "none"


def _bilateral(entry, x, digits, max_levin_order):
    tol = mp.mpf(10) ** (-digits)
    anchor = _anchor(entry, x)
    total = 0
    err = 0
    for direction in (1, -1):
        kind = _tail_kind(entry.z0, direction)
        gen = _tail_terms(entry, x, anchor, direction)
        if kind == "direct":
            v, e = _sum_direct(gen, tol)
        elif kind == "levin":
            v, e = _sum_levin(gen, tol, max_levin_order)
        else:
            side = "right" if direction > 0 else "left"
            raise AccelerationFailure(
                f"{entry.id}: {side} tail diverges without alternating signs (z0 = {entry.z0}); "
                "no summation method available"
            )
        total += v
        err += e
    return total, err


def _check_point(entry: SeriesEntry, x: Fraction):
    if not 0 < x < 1:
        raise ValueError(f"sample point {x} outside (0, 1)")
    if x == HALF:
        raise ValueError("sample point 1/2 is a zero of the prefactor")
    for s in set(entry.s):
        if x == s or x == 1 - s:
            raise ValueError(f"sample point {x} collides with parameter {s}")


def bilateral_sum(entry: SeriesEntry, x, digits: int = 50,
                  max_levin_order: int = DEFAULT_MAX_LEVIN_ORDER,
                  max_precision_bits: int = DEFAULT_MAX_PRECISION_BITS) -> HPComplex:
    """Sum over all integers n of A(n, x), x rational in (0, 1).

    The geometrically convergent tail is summed directly, the other one
    through adaptive Levin acceleration.  Work starts at twice the target
    precision and doubles while the acceleration stalls, up to
    ``max_precision_bits``.
    """
    x = as_rational(x)
    _check_point(entry, x)
    (total, err), bits = _precision_ladder(
        lambda: _bilateral(entry, x, digits + 5, max_levin_order),
        2 * digits_to_bits(digits), max_precision_bits,
    )
    return HPComplex(mp.mpc(total), bits, err)


def prefactor(entry: SeriesEntry, x):
    """e^{-i pi x} cos(pi x)^(2j+1) prod_{s != 1/2} (cos pi x - cos pi s)/(1 - cos pi s)."""
    xv = _mpf(x) if isinstance(x, Fraction) else x
    halves = sum(1 for s in entry.s if s == HALF)
    c = mp.cos(mp.pi * xv)
    out = mp.expjpi(-xv) * c**halves
    for s in entry.s:
        if s != HALF:
            cs = mp.cospi(_mpf(s))
            out *= (c - cs) / (1 - cs)
    return out


def f_value(entry: SeriesEntry, x, digits: int = 50,
            max_levin_order: int = DEFAULT_MAX_LEVIN_ORDER,
            max_precision_bits: int = DEFAULT_MAX_PRECISION_BITS) -> HPComplex:
    """The periodic function f(x) = prefactor(x) * bilateral sum."""
    x = as_rational(x)
    b = bilateral_sum(entry, x, digits, max_levin_order, max_precision_bits)
    with mp.workprec(b.precision_bits):
        p = prefactor(entry, x)
        return HPComplex(p * b.value, b.precision_bits, abs(p) * b.error_bound)


# ---------------------------------------------------------------------------
# Fourier coefficients


def default_sample_points(m: int) -> list[Fraction]:
    return [Fraction(10 * t - 3, 10 * (2 * m + 1)) for t in range(1, 2 * m + 1)]


def fallback_sample_points(entry: SeriesEntry, count: int, seed: int = FALLBACK_SEED) -> list[Fraction]:
    """Pseudo-random admissible rationals in (1/20, 9/20), fixed seed."""
    rng = random.Random(seed)
    out: list[Fraction] = []
    while len(out) < count:
        den = rng.randint(40, 400)
        x = Fraction(rng.randint(den // 20 + 1, 9 * den // 20 - 1), den)
        try:
            _check_point(entry, x)
        except ValueError:
            continue
        if x not in out:
            out.append(x)
    return out


def _admissible_points(entry, points):
    out = []
    for x in points:
        try:
            _check_point(entry, x)
            out.append(x)
        except ValueError:
            pass
    return out


def choose_method(entry: SeriesEntry) -> str:
    """Pick the evaluation strategy for solve_fourier from the tails' term
    ratios, before any evaluation.

    * "sample": every divergent tail alternates with term ratio at most
      LEVIN_RATIO_LIMIT in size; f is sampled at 2m points, the divergent
      tail summed by Levin.
    * "jet": otherwise, when |z0| < 1.  The right tail converges, and every
      left term carries 1/(1+x)_n^(2m+1) with n < 0, which is O(x^(2m+1)).
      So the Taylor coefficients of f at 0 up to order 2m come from the right
      tail alone, whatever the left tail does.
    * AccelerationFailure for the remaining cases (z0 > 1, or z0 < -10^4).
    """
    kinds = [_tail_kind(entry.z0, d) for d in (1, -1)]
    ratio = max(abs(entry.z0), abs(1 / entry.z0))
    if "none" not in kinds and ratio <= LEVIN_RATIO_LIMIT:
        return "sample"
    if abs(entry.z0) < 1:
        return "jet"
    raise AccelerationFailure(
        f"{entry.id}: z0 = {entry.z0} gives a divergent tail that is non-alternating or too steep "
        "to accelerate, and the convergent side cannot isolate the coefficients"
    )


def _basis_row(m, x):
    row = []
    for k in range(1, m + 1):
        row.append(mp.cospi(2 * k * x) - 1)
    for k in range(1, m + 1):
        row.append(mp.sinpi(2 * k * x))
    return row


def _solve(A, b):
    n = A.rows
    scale = max(abs(A[i, jj]) for i in range(n) for jj in range(n))
    if mp.det(A) == 0 or abs(mp.det(A)) < mp.mpf(2) ** (-mp.mp.prec // 2) * scale**n:
        raise SingularSystem("Fourier system is numerically singular")
    return mp.lu_solve(A, b)


def _solve_sample(entry, points, digits, max_levin_order, max_precision_bits):
    """Sample f at each point (each on its own precision ladder), then solve
    at the highest precision used."""
    m = entry.m
    samples = []
    for x in points:
        (total, _), bits = _precision_ladder(
            lambda: _bilateral(entry, x, digits + 5, max_levin_order),
            2 * digits_to_bits(digits), max_precision_bits,
        )
        with mp.workprec(bits):
            samples.append(prefactor(entry, x) * total)
    bits = max(2 * digits_to_bits(digits), 128)
    with mp.workprec(bits):
        C = ramanujan_constant(entry)
        A = mp.matrix(2 * m, 2 * m)
        b = mp.matrix(2 * m, 1)
        for r, (x, fx) in enumerate(zip(points, samples)):
            b[r] = fx / C - 1
            for col, v in enumerate(_basis_row(m, _mpf(x))):
                A[r, col] = v
        return _solve(A, b)


def _right_f(entry, x, tol):
    total, _ = _sum_direct(_tail_terms(entry, x, _anchor(entry, x), 1), tol)
    return prefactor(entry, x) * total


def _solve_jet(entry, digits):
    m = entry.m
    C = ramanujan_constant(entry)
    tol = mp.mpf(2) ** (-mp.mp.prec - 10)
    c = mp.taylor(lambda x: _right_f(entry, x, tol) / C, 0, 2 * m)
    A = mp.matrix(2 * m, 2 * m)
    b = mp.matrix(2 * m, 1)
    for r in range(1, 2 * m + 1):
        b[r - 1] = c[r]
        for k in range(1, m + 1):
            w = (2 * mp.pi * k) ** r / mp.factorial(r)
            if r % 2 == 0:
                A[r - 1, k - 1] = (-1) ** (r // 2) * w
            else:
                A[r - 1, m + k - 1] = (-1) ** ((r - 1) // 2) * w
    return _solve(A, b), abs(c[0] - 1)


def _reconstruct_gaussian(z, digits, max_denominator):
    re = rational_reconstruct(mp.re(z), max_denominator, digits=digits)
    im = rational_reconstruct(mp.im(z), max_denominator, digits=digits)
    if re is None or im is None:
        return None
    return GaussianRational(re, im)


def solve_fourier(entry: SeriesEntry, digits: int = 50, sample_points=None, method: str = "auto",
                  max_levin_order: int = DEFAULT_MAX_LEVIN_ORDER,
                  max_precision_bits: int = DEFAULT_MAX_PRECISION_BITS,
                  max_denominator: int | None = None) -> FourierCoefficients:
    """Recover alpha_k, beta_k in

        f(x) / C = 1 + sum_k alpha_k (cos 2 pi k x - 1) + beta_k sin 2 pi k x,

    C = v0 sqrt((-1)^m chi0) / pi^m, then reconstruct them as Gaussian
    rationals.  The method is chosen up front (see ``choose_method``);
    acceleration failures propagate.  A singular sample system is retried
    once with the seeded fallback points.  Reconstruction accepts
    denominators up to ``max_denominator`` (default 10^(digits/5), which
    keeps chance matches at the 10^(-digits/2) residual level unlikely).
    """
    if max_denominator is None:
        max_denominator = default_max_denominator(digits)
    if method == "auto":
        method = choose_method(entry)
    if method not in ("sample", "jet"):
        raise ValueError(f"unknown method {method!r}")
    m = entry.m
    bits = 2 * digits_to_bits(digits)
    if bits > max_precision_bits:
        raise ValueError(f"{digits} digits need {bits} working bits, above the {max_precision_bits}-bit cap")
    residual = mp.mpf(0)
    used: tuple = ()
    with mp.workprec(bits):
        if method == "jet":
            sol, residual = _solve_jet(entry, digits)
            if residual > mp.mpf(10) ** (-digits):
                raise AccelerationFailure(f"{entry.id}: jet constant term off by {mp.nstr(residual, 3)}")
        else:
            if sample_points is None:
                pts = _admissible_points(entry, default_sample_points(m))
                if len(pts) < 2 * m:
                    pts = fallback_sample_points(entry, 2 * m)
            else:
                pts = [as_rational(x) for x in sample_points]
                if len(pts) != 2 * m:
                    raise ValueError(f"need exactly {2 * m} sample points, got {len(pts)}")
                for x in pts:
                    _check_point(entry, x)
            try:
                sol = _solve_sample(entry, pts, digits, max_levin_order, max_precision_bits)
            except SingularSystem:
                if sample_points is not None:
                    raise
                pts = fallback_sample_points(entry, 2 * m)
                sol = _solve_sample(entry, pts, digits, max_levin_order, max_precision_bits)
            used = tuple(pts)
        alpha_n = tuple(mp.mpc(sol[k]) for k in range(m))
        beta_n = tuple(mp.mpc(sol[m + k]) for k in range(m))
        alpha = [_reconstruct_gaussian(v, digits, max_denominator) for v in alpha_n]
        beta = [_reconstruct_gaussian(v, digits, max_denominator) for v in beta_n]
    ok = all(v is not None for v in alpha + beta)
    return FourierCoefficients(
        tuple(alpha) if ok else None,
        tuple(beta) if ok else None,
        alpha_n,
        beta_n,
        ok,
        method,
        used,
        bits,
        residual,
    )


# ---------------------------------------------------------------------------
# r0 and eps0


def root_minus_z0(z0):
    """The factor 1 / (e^{-i pi x} z0^x) at x = -1/2, with z0^x on the
    principal branch (as in the anchor term).

    This equals sqrt(-z0) = sqrt|z0| for z0 < 0, and -i sqrt(z0) for z0 > 0,
    i.e. the non-principal root there.
    """
    z = mp.mpc(_mpf(z0))
    return 1 / (mp.expjpi(mp.mpf(1) / 2) * mp.power(z, -mp.mpf(1) / 2))


def semi_terminating_prefactor(entry: SeriesEntry, alpha, digits: int = 50):
    """The constant in front of B((p-1)/2, -p/2), as an mpc:

        v0 (1 + sum alpha_k ((-1)^k - 1)) / P(-1/2)
          * prod_{s != 1/2} Gamma(s)/Gamma(s-1/2) * (1 - cos pi s)/cos pi s
          * sqrt(-z0) sqrt((-1)^m chi0) / pi^j

    sqrt(-z0) is the branch produced by the limit, see ``root_minus_z0``.
    """
    alpha = [GaussianRational.coerce(a) for a in alpha]
    if len(alpha) != entry.m:
        raise ValueError(f"{entry.id}: expected {entry.m} alpha values, got {len(alpha)}")
    denom = entry.poly(Fraction(-1, 2))
    if denom == 0:
        raise ZeroDivisionError(f"{entry.id}: P(-1/2) = 0")
    j = (sum(1 for s in entry.s if s == HALF) - 1) // 2
    bits = digits_to_bits(digits) + 64
    with mp.workprec(bits):
        head = 1 + sum(a.to_mp() * ((-1) ** k - 1) for k, a in enumerate(alpha, start=1))
        out = entry.v0 * head / _mpf(denom)
        for s in entry.s:
            if s != HALF:
                sv = _mpf(s)
                cs = mp.cospi(sv)
                out *= mp.gamma(sv) / mp.gamma(sv - mp.mpf(1) / 2) * (1 - cs) / cs
        out *= root_minus_z0(entry.z0) * mp.sqrt(mp.mpc((-1) ** entry.m * entry.chi0)) / mp.pi**j
        return +out, j


def r0_closed_form(entry: SeriesEntry, alpha, digits: int = 50,
                   max_denominator: int | None = None) -> SemiTerminatingConstant:
    """Evaluate the prefactor and split it as r0 sqrt((-1)^j eps0) / pi^j.

    c = prefactor * pi^j satisfies (-1)^j c^2 = r0^2 eps0, so eps0 is the
    fundamental discriminant of the rational (-1)^j c^2; the sign of r0 is
    read off numerically from c / sqrt((-1)^j eps0).  The denominator bound
    for c^2 defaults to 10^(digits/5), so large series need more digits (the
    Chudnovsky-type row T2.40 has c^2 with an 18-digit denominator).
    """
    if max_denominator is None:
        max_denominator = default_max_denominator(digits)
    pref, j = semi_terminating_prefactor(entry, alpha, digits)
    with mp.workprec(digits_to_bits(digits) + 64):
        c = pref * mp.pi**j
        q = rational_reconstruct(mp.re((-1) ** j * c * c), max_denominator, digits=digits)
        if q is None or q == 0 or abs(mp.im(c * c)) > mp.mpf(10) ** (-digits // 2) * abs(c) ** 2:
            raise ReconstructionFailure(f"{entry.id}: (-1)^j c^2 is not a recognisable rational")
        eps0, r = _split_square(q)
        ratio = c / mp.sqrt(mp.mpc((-1) ** j * eps0))
        if abs(mp.im(ratio)) > mp.mpf(10) ** (-digits // 2) * abs(ratio):
            raise ReconstructionFailure(f"{entry.id}: r0 is not real")
        r0 = r if mp.re(ratio) > 0 else -r
    return SemiTerminatingConstant(r0, eps0, j, pref)


def _split_square(q: Fraction) -> tuple[int, Fraction]:
    """q = eps * r^2 with eps 1 or a fundamental discriminant, r > 0."""
    eps, c = fundamental_discriminant(q.numerator * q.denominator)
    return eps, abs(Fraction(c) / q.denominator)


def discriminant_extract(c) -> tuple[Fraction, int]:
    """Write c = r sqrt(eps) with r rational, eps 1 or a fundamental
    discriminant, and sqrt the principal branch (sqrt(eps) = i sqrt|eps| for
    eps < 0).  ``c`` may be real or complex (purely imaginary when eps < 0).
    """
    if isinstance(c, (HPReal, HPComplex)):
        prec = c.precision_bits
        c = c.value
    else:
        prec = mp.mp.prec
    with mp.workprec(prec):
        c = mp.mpmathify(c)
        if c == 0:
            raise ValueError("cannot extract a discriminant from 0")
        digits = int(prec / LOG2_10) - 2
        sq = c * c
        if abs(mp.im(sq)) > mp.mpf(10) ** (-digits // 2) * abs(sq):
            raise ReconstructionFailure("c^2 is not real")
        q = rational_reconstruct(mp.re(sq), DEFAULT_MAX_DENOMINATOR, digits=digits)
        if q is None or q == 0:
            raise ReconstructionFailure(f"c^2 = {mp.nstr(sq, 15)} has no small rational form")
        eps, r = _split_square(q)
        ref = _mpf(r) * mp.sqrt(mp.mpc(eps))
        if abs(c - ref) > abs(c + ref):
            r = -r
    return r, eps


# ---------------------------------------------------------------------------
# rational reconstruction


def rational_reconstruct(x, max_denominator: int = DEFAULT_MAX_DENOMINATOR, digits: int | None = None,
                         quotient_cutoff: int = PARTIAL_QUOTIENT_CUTOFF) -> Fraction | None:
    """Continued-fraction reconstruction of a real number.

    Walks the convergents p/q (q <= max_denominator) and accepts the first
    one whose relative residual |x - p/q| / |x| is below 10^(-digits/2) (for
    the convergent 0: |x| itself below that), or whose next
    partial quotient exceeds ``quotient_cutoff``.  ``digits`` defaults to the
    precision of the working context.  Returns None if no convergent
    qualifies; e.g. pi with max_denominator 10 gives None (22/7 is off by
    1.3e-3 and the next quotient is 15).
    """
    if isinstance(x, HPReal):
        prec = x.precision_bits
        x = x.value
    else:
        prec = mp.mp.prec
    with mp.workprec(max(prec, 64)):
        x = mp.mpf(x)
        if not mp.isfinite(x):
            return None
        if digits is None:
            digits = int(mp.mp.prec / LOG2_10)
        tol = mp.mpf(10) ** (-mp.mpf(digits) / 2)
        p0, q0, p1, q1 = 0, 1, 1, 0
        rest = x
        a = int(mp.floor(rest))
        while True:
            p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
            if q1 > max_denominator:
                return None
            cand = Fraction(p1, q1)
            frac = rest - a
            if frac == 0:
                return cand
            if cand == 0:
                if abs(x) <= tol:
                    return cand
            elif abs(x - _mpf(cand)) <= tol * abs(x):
                return cand
            rest = 1 / frac
            a = int(mp.floor(rest))
            # a huge next quotient means p/q is already very close; never
            # trust it for the zero convergent of a tiny number
            if a > quotient_cutoff and p1 != 0:
                return cand
