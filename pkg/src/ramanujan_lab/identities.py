"""Terminating hypergeometric identities behind the proved B-congruences, and
a first-order recurrence fitter used to certify them.

Each identity is a pair of finite sums in the odd parameter p.  Writing
p = 2k+1, both sides are sequences in k; they are certified equal on a
range of k by finding one first-order recurrence

    P(k) t_{k+1} = Q(k) t_k

that annihilates both sequences, and checking the initial values agree.
For these sums the recurrence carries a polynomial right-hand side,

    P(k) t_{k+1} - Q(k) t_k = E(k),

the boundary term left over by creative telescoping; no homogeneous
first-order recurrence of small degree exists for them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .errors import DegenerateInput, FitNotFound, UnknownIdentity
from .exact import factorial, pochhammer

half = Fraction(1, 2)


def _k(p):
    if p < 1 or p % 2 == 0:
        raise ValueError(f"identities are stated for positive odd p, got {p}")
    return (p - 1) // 2


def _terms(p, fn):
    return [fn(n) for n in range(_k(p) + 1)]


@dataclass(frozen=True)
class TerminatingIdentity:
    name: str
    description: str
    lhs_terms: Callable[[int], list[Fraction]]
    rhs_terms: Callable[[int], list[Fraction]]

    def lhs(self, p: int) -> Fraction:
        return sum(self.lhs_terms(p), Fraction(0))

    def rhs(self, p: int) -> Fraction:
        return sum(self.rhs_terms(p), Fraction(0))


def _b_lhs(params, poly, z):
    """Terms of sum_n prod (s - p/2)_n / (1 - p/2)_n * poly(n - p/2) * z^n."""

    def terms(p):
        x = Fraction(p, 2)

        def t(n):
            den = pochhammer(1 - x, n)
            h = Fraction(1)
            for s in params:
                h *= pochhammer(Fraction(s) - x, n) / den
            return h * sum(c * (n - x) ** i for i, c in enumerate(poly)) * Fraction(z) ** n

        return _terms(p, t)

    return terms


def _rhs_6n1(p):
    x = Fraction(p, 2)
    c = Fraction(-8 * p**3, (p + 1) ** 2)
    return _terms(p, lambda n: c * (pochhammer(half - x, n) / pochhammer(Fraction(3, 2) + x, n)) ** 2 * (-1) ** n)


def _rhs_42n5(p):
    x = Fraction(p, 2)
    c = Fraction(-128 * p**3, (p + 1) ** 3)
    return _terms(
        p, lambda n: c * (pochhammer(half - x, n) / pochhammer(Fraction(3, 2) + x, n)) ** 3 * (-1) ** n * (2 * n + 1)
    )


def _rhs_20n3(p):
    x = Fraction(p, 2)
    k = _k(p)
    closed = Fraction(2 * (-1) ** k * factorial(2 * p - 1) * factorial(k) ** 4, 2**p * factorial(p - 1) ** 4)
    c = Fraction(-32 * p**3, p + 1)

    def t(n):
        h = pochhammer(half - x, n) ** 2 * pochhammer(half - p, n)
        h /= pochhammer(Fraction(3, 2) + x, n) * pochhammer(half, n) ** 2
        return c * h * (-1) ** n * (2 * n + 1 - x) / (2 * n + 1) ** 2

    return [closed] + _terms(p, t)


def _rhs_120(p):
    x = Fraction(p, 2)
    c = Fraction(256 * p**5, (p + 1) ** 4)
    return _terms(p, lambda n: c * (pochhammer(half - x, n) / pochhammer(Fraction(3, 2) + x, n)) ** 4 * (2 * n + 1))


def _rhs_74(p):
    x = Fraction(p, 2)
    c = Fraction(64 * p**5, (p + 1) ** 3)
    return _terms(p, lambda n: c * (pochhammer(half - x, n) / pochhammer(Fraction(3, 2) + x, n)) ** 3)


def _rhs_10(p):
    x = Fraction(p, 2)
    return _terms(
        p, lambda n: p**5 * (pochhammer(half - x, n) / pochhammer(half, n)) ** 4 * (2 * n + 1 - x) / (2 * n + 1) ** 4
    )


IDENTITIES: dict[str, TerminatingIdentity] = {
    ident.name: ident
    for ident in [
        TerminatingIdentity(
            "6n+1", "(1/2)^3 series, (6n+1)/4^n = 4/pi",
            _b_lhs(["1/2"] * 3, (1, 6), Fraction(1, 4)), _rhs_6n1,
        ),
        TerminatingIdentity(
            "42n+5", "(1/2)^3 series, (42n+5)/64^n = 16/pi",
            _b_lhs(["1/2"] * 3, (5, 42), Fraction(1, 64)), _rhs_42n5,
        ),
        TerminatingIdentity(
            "20n+3", "(1/2)(1/4)(3/4) series, (20n+3)(-1/4)^n = 8/pi",
            _b_lhs(["1/2", "1/4", "3/4"], (3, 20), Fraction(-1, 4)), _rhs_20n3,
        ),
        TerminatingIdentity(
            "120n2+34n+3", "(1/2)^3(1/4)(3/4) series, (120n^2+34n+3)/16^n = 32/pi^2",
            _b_lhs(["1/2"] * 3 + ["1/4", "3/4"], (3, 34, 120), Fraction(1, 16)), _rhs_120,
        ),
        TerminatingIdentity(
            "74n2+27n+3", "(1/2)^3(1/3)(2/3) series, (74n^2+27n+3)(27/64)^n = 48/pi^2",
            _b_lhs(["1/2"] * 3 + ["1/3", "2/3"], (3, 27, 74), Fraction(27, 64)), _rhs_74,
        ),
        TerminatingIdentity(
            "10n2+6n+1", "(1/2)^5 series, (10n^2+6n+1)(-4)^n = 4/pi^2",
            _b_lhs(["1/2"] * 5, (1, 6, 10), -4), _rhs_10,
        ),
    ]
}

#: catalog rows whose B-congruences follow from the identities above
IDENTITY_SERIES = {
    "6n+1": "T1.3",
    "42n+5": "T1.4",
    "20n+3": "T1.8",
    "120n2+34n+3": "T3.8",
    "74n2+27n+3": "T3.5",
    "10n2+6n+1": "T3.2",
}


def get_identity(name: str) -> TerminatingIdentity:
    try:
        return IDENTITIES[name]
    except KeyError:
        raise UnknownIdentity(name) from None


def eval_identity(name: str, p: int) -> tuple[Fraction, Fraction, bool]:
    ident = get_identity(name)
    lhs, rhs = ident.lhs(p), ident.rhs(p)
    return lhs, rhs, lhs == rhs


# ---------------------------------------------------------------------------
# recurrence fitting


@dataclass(frozen=True)
class RecurrenceFit:
    """P(k) t_{k+1} - Q(k) t_k = E(k); coefficient lists in increasing degree.

    ``E`` is empty for a homogeneous recurrence.
    """

    P: tuple[Fraction, ...]
    Q: tuple[Fraction, ...]
    degree_bound: int
    E: tuple[Fraction, ...] = ()
    start: int = 0
    fitted: int = 0
    verified: int = 0

    @property
    def homogeneous(self) -> bool:
        return all(c == 0 for c in self.E)

    def residual(self, seq, k: int) -> Fraction:
        """Defect of the recurrence between seq[k] and seq[k+1]."""
        kk = k + self.start
        return _peval(self.P, kk) * seq[k + 1] - _peval(self.Q, kk) * seq[k] - _peval(self.E, kk)

    def annihilates(self, seq) -> bool:
        """Check the recurrence on every consecutive pair of ``seq``."""
        return all(self.residual(seq, k) == 0 for k in range(len(seq) - 1))

    def __str__(self):
        text = f"({_pstr(self.P)}) t(k+1) - ({_pstr(self.Q)}) t(k)"
        return f"{text} = {_pstr(self.E)}"


def _peval(coeffs, k):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * k + c
    return acc


def _pstr(coeffs):
    parts = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        mono = "" if i == 0 else ("k" if i == 1 else f"k^{i}")
        if i and c == 1:
            parts.append(mono)
        elif i and c == -1:
            parts.append(f"-{mono}")
        else:
            parts.append(f"{c}*{mono}" if mono else str(c))
    return " + ".join(parts) or "0"


def nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Exact nullspace basis of a rational matrix by Gauss-Jordan elimination."""
    a = [list(map(Fraction, r)) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * ncols
        v[fcol] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -a[i][fcol]
        basis.append(v)
    return basis


def _normalize(P, Q, E):
    from math import gcd, lcm

    den = lcm(*(c.denominator for c in P + Q + E)) if P + Q + E else 1
    P, Q, E = ([c * den for c in xs] for xs in (P, Q, E))
    g = gcd(*(int(c) for c in P)) or 1
    lead = next(c for c in reversed(P) if c != 0)
    if lead < 0:
        g = -g
    P, Q, E = ([c / g for c in xs] for xs in (P, Q, E))
    while len(P) > 1 and P[-1] == 0 and Q[-1] == 0:
        P.pop()
        Q.pop()
    while E and E[-1] == 0:
        E.pop()
    return tuple(P), tuple(Q), tuple(E)


VERIFY_SLACK = 5


def fit_first_order(seq, degree_bound: int, inhomogeneous: int | None = None,
                    start: int = 0) -> RecurrenceFit | None:
    """Find the lowest-degree first-order recurrence satisfied by ``seq``.

    Homogeneous by default: P(k) t_{k+1} = Q(k) t_k with deg P, Q <= d, for
    the smallest d <= ``degree_bound`` that works.  With ``inhomogeneous=e``
    a polynomial right-hand side E(k) of degree <= e is allowed.

    The last ``VERIFY_SLACK`` relations are held back from the linear system
    and only used for verification.  ``P`` is scaled to integer coefficients
    with content 1 and positive leading coefficient.  Returns None when no
    recurrence exists within the bounds.
    """
    seq = [Fraction(t) for t in seq]
    n_e = 0 if inhomogeneous is None else inhomogeneous + 1
    need = 2 * (degree_bound + 1) + 4 + n_e
    if len(seq) < need:
        raise ValueError(f"need at least {need} terms for these degree bounds, got {len(seq)}")
    if all(t == 0 for t in seq):
        raise DegenerateInput("sequence is identically zero")
    n_fit = len(seq) - 1 - VERIFY_SLACK
    for d in range(degree_bound + 1):
        rows = []
        for k in range(n_fit):
            kk = k + start
            rows.append(
                [kk**i * seq[k + 1] for i in range(d + 1)]
                + [-(kk**i) * seq[k] for i in range(d + 1)]
                + [-(kk**i) for i in range(n_e)]
            )
        basis = nullspace(rows, 2 * d + 2 + n_e)
        basis = [v for v in basis if any(v[: d + 1])]
        if not basis:
            continue
        if len(basis) > 1:
            raise DegenerateInput(f"recurrence not determined at degree {d}: nullspace dimension {len(basis)}")
        v = basis[0]
        P, Q, E = _normalize(v[: d + 1], v[d + 1 : 2 * d + 2], v[2 * d + 2 :])
        fit = RecurrenceFit(P, Q, degree_bound, E, start, n_fit, VERIFY_SLACK)
        if fit.annihilates(seq):
            return fit
    return None


def identity_sequences(name: str, p_max: int) -> tuple[list[Fraction], list[Fraction]]:
    """(l_k, r_k) for k = 0 .. (p_max-1)/2, i.e. p = 2k+1."""
    ident = get_identity(name)
    ps = range(1, p_max + 1, 2)
    return [ident.lhs(p) for p in ps], [ident.rhs(p) for p in ps]


def _has_root_in(P, k_max) -> bool:
    return any(_peval(P, k) == 0 for k in range(k_max + 1))


def _supported_degree(n_terms: int, inhomogeneous: bool) -> int:
    """Largest degree bound d for which the fitted relations (all but the
    last VERIFY_SLACK) are at least as many as the unknowns, 2d+2 plus d+1
    for E in the inhomogeneous case; negative if there is none."""
    rows = n_terms - 1 - VERIFY_SLACK
    if inhomogeneous:
        return (rows - 3) // 3
    return (rows - 2) // 2


def certify_sequences(lhs, rhs, degree_bound: int) -> tuple[bool, RecurrenceFit]:
    """Fit a recurrence to ``lhs``; True iff it also annihilates ``rhs``, the
    initial values agree and P(k) never vanishes on the range (so the
    recurrence determines each term from the previous one).

    The degree bound is capped at what the number of terms can determine,
    homogeneous fits are tried before inhomogeneous ones.
    """
    if len(lhs) != len(rhs):
        raise ValueError("lhs and rhs must have the same length")
    fit = None
    tried = {}
    for inhom in (False, True):
        d = min(degree_bound, _supported_degree(len(lhs), inhom))
        if d < 0:
            continue
        tried["inhomogeneous" if inhom else "homogeneous"] = d
        fit = fit_first_order(lhs, d, inhomogeneous=d if inhom else None)
        if fit is not None:
            break
    if not tried:
        raise ValueError(f"{len(lhs)} terms are too few to fit any recurrence")
    if fit is None:
        capped = ""
        if min(tried.values()) < degree_bound:
            caps = ", ".join(f"{d} {kind}" for kind, d in tried.items())
            capped = f" ({len(lhs)} terms determine degree <= {caps} only)"
        raise FitNotFound(f"no first-order recurrence of degree <= {degree_bound}{capped}")
    ok = fit.annihilates(rhs) and lhs[0] == rhs[0] and not _has_root_in(fit.P, len(lhs) - 2)
    return ok, fit


def certify_same_recurrence(name: str, p_max: int = 99, degree_bound: int = 8) -> bool:
    """Certify an identity on p = 1, 3, ..., p_max: l_k and r_k satisfy the
    same first-order recurrence and l_0 = r_0.

    Short ranges cap the usable degree (see ``certify_sequences``): the
    rank-3 identities need p_max >= 41, the rank-5 ones p_max >= 59.

    >>> certify_same_recurrence("6n+1", 41)
    True
    """
    if p_max < 11 or p_max % 2 == 0:
        raise ValueError("p_max must be odd and at least 11")
    lhs, rhs = identity_sequences(name, p_max)
    return certify_sequences(lhs, rhs, degree_bound)[0]
