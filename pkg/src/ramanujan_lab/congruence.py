"""Exact truncated sums and the A-/B-supercongruence checks.

``A(n, 0)`` is the n-th term of the Ramanujan-like series itself and
``B(n, -p/2)`` its half-shifted companion:

    B(n, -p/2) = prod_i (s_i - p/2)_n / (1 - p/2)_n * sum_k a_k (n - p/2)^k * z0^n

The checks are

    A:  sum_{n<p} A(n, 0)        == a0 p^m (chi0/p)                 mod p^(2m+1)
    B:  sum_{n<=(p-1)/2} B(n,-p/2) == (eps0/p) p^j B((p-1)/2, -p/2)   mod p^(2m+1)

The scanning routines accumulate the sums with integer arithmetic over an
unreduced common denominator, so each term costs a few big-integer
multiplications and no gcd.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .catalog import SeriesEntry, half_index
from .exact import (
    INF,
    factorint,
    is_fundamental_discriminant,
    is_prime,
    kronecker,
    pochhammer,
    primes_up_to,
    vp,
)

log = logging.getLogger(__name__)

KINDS = ("A", "B")


@dataclass(frozen=True)
class CongruenceReport:
    series_id: str
    kind: str
    p: int
    required: int
    lhs: Fraction | None = None
    rhs: Fraction | None = None
    valuation: float | int | None = None
    holds: bool | None = None
    excluded: str | None = None

    @property
    def checked(self) -> bool:
        return self.excluded is None

    def to_record(self, with_values=False) -> dict:
        rec = {
            "series_id": self.series_id,
            "kind": self.kind,
            "p": self.p,
            "valuation": "inf" if self.valuation == INF else self.valuation,
            "required": self.required,
            "holds": self.holds,
            "excluded_reason": self.excluded,
        }
        if with_values:
            rec["lhs"] = None if self.lhs is None else str(self.lhs)
            rec["rhs"] = None if self.rhs is None else str(self.rhs)
        return rec


@dataclass(frozen=True)
class AdmissibilityRule:
    series_id: str
    bad_primes: frozenset[int]
    reasons: dict

    def reason(self, p: int) -> str | None:
        if p == 2:
            return "p = 2 is never admissible"
        if not is_prime(p):
            return f"{p} is not prime"
        return self.reasons.get(p)


def admissibility(entry: SeriesEntry) -> AdmissibilityRule:
    reasons = {2: "p = 2 is never admissible"}
    for x in entry.s:
        for q in factorint(x.denominator):
            reasons.setdefault(q, f"p divides the denominator of s = {x}")
    if entry.z0.denominator > 1:
        for q in factorint(entry.z0.denominator):
            reasons.setdefault(q, f"p divides the denominator of z0 = {entry.z0}")
    return AdmissibilityRule(entry.id, frozenset(reasons), reasons)


# ---------------------------------------------------------------------------
# single terms (direct Pochhammer evaluation)


def a_term(entry: SeriesEntry, n: int) -> Fraction:
    """A(n, 0), evaluated directly from Pochhammer symbols."""
    if n < 0:
        raise ValueError("a_term needs n >= 0")
    h = Fraction(1)
    one_n = pochhammer(1, n)
    for s in entry.s:
        h *= pochhammer(s, n) / one_n
    return h * entry.poly(n) * entry.z0**n


def b_term(entry: SeriesEntry, n: int, p: int) -> Fraction:
    """B(n, -p/2) for odd p, evaluated directly from Pochhammer symbols."""
    if n < 0:
        raise ValueError("b_term needs n >= 0")
    if p < 1 or p % 2 == 0:
        raise ValueError(f"b_term needs a positive odd p, got {p}")
    shift = Fraction(p, 2)
    h = Fraction(1)
    den = pochhammer(1 - shift, n)  # raises ZeroDivisor on a vanishing factor
    for s in entry.s:
        h *= pochhammer(s - shift, n) / den
    return h * entry.poly(n - shift) * entry.z0**n


def a_term_shifted(entry: SeriesEntry, n: int, x: int) -> Fraction:
    """A(n, x) for a nonnegative integer shift x, via (s)_{n+x} = (s)_x (s+x)_n.

    Terms with n + x < 0 vanish because 1/(1)_{n+x} = 0 there.
    """
    if n + x < 0:
        return Fraction(0)
    h = Fraction(1)
    for s in entry.s:
        h *= pochhammer(s, x) * pochhammer(s + x, n) / (pochhammer(1, x) * pochhammer(1 + x, n))
    return h * entry.poly(n + x) * entry.z0**x * entry.z0**n


# ---------------------------------------------------------------------------
# fast sums


def _hyper_sum(count, ratio, weight, weight_den=1):
    """Return (sum_{n<count} h_n w_n, h_{count-1} w_{count-1}) exactly.

    ``h_0 = 1``, ``h_n = h_{n-1} * rn/rd`` with ``(rn, rd) = ratio(n)`` and
    ``w_n = weight(n) / weight_den``; all integers.
    """
    h_num, h_den = 1, 1
    acc = weight(0)
    last = acc
    for n in range(1, count):
        rn, rd = ratio(n)
        if rd == 0:
            raise ZeroDivisionError(f"vanishing denominator factor at n={n}")
        if rd < 0:
            rn, rd = -rn, -rd
        h_num *= rn
        h_den *= rd
        last = h_num * weight(n)
        acc = acc * rd + last
    total = Fraction(acc, h_den * weight_den)
    last_term = Fraction(last, h_den * weight_den)
    return total, last_term


def a_partial_sum(entry: SeriesEntry, count: int) -> Fraction:
    """sum_{n=0}^{count-1} A(n, 0)."""
    zn, zd = entry.z0.numerator, entry.z0.denominator
    nums = [x.numerator for x in entry.s]
    dens = [x.denominator for x in entry.s]
    dprod = 1
    for d in dens:
        dprod *= d
    r = entry.rank

    def ratio(n):
        rn = zn
        for a, d in zip(nums, dens):
            rn *= a + (n - 1) * d
        return rn, zd * dprod * n**r

    return _hyper_sum(count, ratio, entry.poly)[0]


def b_partial_sum(entry: SeriesEntry, p: int) -> tuple[Fraction, Fraction]:
    """(sum_{n=0}^{(p-1)/2} B(n, -p/2), B((p-1)/2, -p/2))."""
    if p < 1 or p % 2 == 0:
        raise ValueError(f"need a positive odd p, got {p}")
    zn, zd = entry.z0.numerator, entry.z0.denominator
    nums = [x.numerator for x in entry.s]
    dens = [x.denominator for x in entry.s]
    dprod = 1
    for d in dens:
        dprod *= d
    r, m = entry.rank, entry.m
    a = entry.a

    def ratio(n):
        rn = zn
        for u, d in zip(nums, dens):
            rn *= 2 * u + (2 * n - 2 - p) * d
        return rn, zd * dprod * (2 * n - p) ** r

    def weight(n):
        y = 2 * n - p
        return sum(c * y**k * 2 ** (m - k) for k, c in enumerate(a))

    return _hyper_sum((p + 1) // 2, ratio, weight, 2**m)


# ---------------------------------------------------------------------------
# congruence checks


def _excluded(entry, kind, p, required, reason):
    return CongruenceReport(entry.id, kind, p, required, excluded=reason)


def a_supercongruence(entry: SeriesEntry, p: int, exponent: int | None = None) -> CongruenceReport:
    required = exponent if exponent is not None else entry.rank
    reason = admissibility(entry).reason(p)
    if reason:
        return _excluded(entry, "A", p, required, reason)
    lhs = a_partial_sum(entry, p)
    rhs = Fraction(entry.a[0] * p**entry.m * kronecker(entry.chi0, p))
    val = vp(lhs - rhs, p)
    return CongruenceReport(entry.id, "A", p, required, lhs, rhs, val, val >= required)


def b_supercongruence(entry: SeriesEntry, p: int, exponent: int | None = None) -> CongruenceReport:
    required = exponent if exponent is not None else entry.rank
    reason = admissibility(entry).reason(p)
    if reason is None and entry.eps0 is None:
        reason = "eps0 unknown"
    if reason:
        return _excluded(entry, "B", p, required, reason)
    j = half_index(entry).j
    lhs, last = b_partial_sum(entry, p)
    rhs = kronecker(entry.eps0, p) * p**j * last
    val = vp(lhs - rhs, p)
    return CongruenceReport(entry.id, "B", p, required, lhs, rhs, val, val >= required)


def shift_identity_check(entry: SeriesEntry, p: int) -> bool:
    """sum_{n=-p}^{-1} A(n, p) == sum_{n=0}^{p-1} A(n, 0) and A(-p, p) == a_0."""
    left = sum((a_term_shifted(entry, n, p) for n in range(-p, 0)), Fraction(0))
    right = sum((a_term(entry, n) for n in range(p)), Fraction(0))
    return left == right and a_term_shifted(entry, -p, p) == entry.a[0]


# ---------------------------------------------------------------------------
# scans

_CHECKS = {"A": a_supercongruence, "B": b_supercongruence}


def _scan_entry(args):
    entry, kind, primes, exponent = args
    check = _CHECKS[kind]
    return [check(entry, p, exponent) for p in primes]


def scan(entries, kind: str, p_max: int, modulus_exponent_override: int | None = None,
         workers: int = 1, progress=None) -> list[CongruenceReport]:
    """Check every entry against every odd prime 3 <= p <= p_max.

    Inadmissible primes produce excluded reports.  The result is sorted by
    (series id, p) regardless of ``workers``.  ``progress`` is called as
    ``progress(done, total, series_id, elapsed)`` after each series.
    """
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}")
    if p_max < 3:
        raise ValueError("p_max must be at least 3")
    primes = [p for p in primes_up_to(p_max) if p > 2]
    entries = sorted(entries, key=lambda e: e.sort_key)
    jobs = [(e, kind, primes, modulus_exponent_override) for e in entries]
    results: dict[str, list[CongruenceReport]] = {}
    start = time.monotonic()
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for done, (job, reps) in enumerate(zip(jobs, pool.map(_scan_entry, jobs)), start=1):
                results[job[0].id] = reps
                if progress:
                    progress(done, len(jobs), job[0].id, time.monotonic() - start)
    else:
        for done, job in enumerate(jobs, start=1):
            results[job[0].id] = _scan_entry(job)
            if progress:
                progress(done, len(jobs), job[0].id, time.monotonic() - start)
    out = []
    for e in entries:
        out.extend(sorted(results[e.id], key=lambda r: r.p))
    return out


# ---------------------------------------------------------------------------
# eps0 discovery


def observed_b_signs(entry: SeriesEntry, p_max: int, p_min: int = 7) -> dict[int, int]:
    """For each admissible prime, the sign c in {-1, 0, 1} for which the
    B-congruence holds with (eps0/p) replaced by c, if exactly one does."""
    j = half_index(entry).j
    rule = admissibility(entry)
    signs = {}
    for p in primes_up_to(p_max):
        if p < p_min or rule.reason(p):
            continue
        lhs, last = b_partial_sum(entry, p)
        hits = [c for c in (-1, 0, 1) if vp(lhs - c * p**j * last, p) >= entry.rank]
        if len(hits) == 1:
            signs[p] = hits[0]
    return signs


def propose_eps0(entry: SeriesEntry, p_max: int = 101, bound: int = 2000) -> list[int]:
    """Fundamental discriminants |d| <= bound whose Kronecker characters
    match the observed B-congruence signs.  Conjectural by construction."""
    signs = observed_b_signs(entry, p_max)
    out = []
    for d in range(-bound, bound + 1):
        if d == 0 or not is_fundamental_discriminant(d):
            continue
        if all(kronecker(d, p) == c for p, c in signs.items()):
            out.append(d)
    return sorted(out, key=lambda d: (abs(d), d))


__all__ = [
    "AdmissibilityRule", "CongruenceReport", "a_partial_sum", "a_supercongruence", "a_term",
    "a_term_shifted", "admissibility", "b_partial_sum", "b_supercongruence", "b_term",
    "observed_b_signs", "propose_eps0", "scan",
    "shift_identity_check",
]
