"""Acceptance run: one PASS/FAIL line per criterion.

Run directly (``python tests/test_acceptance.py``) for the nine lines, or
under pytest, where each criterion is a test and the lines are repeated in
the terminal summary.  Tolerances are fixed here and never relaxed; a
criterion that the data cannot meet fails with the reason in its line.
"""

from __future__ import annotations

import random
import sys
import time
from fractions import Fraction

import mpmath as mp
import pytest

from ramanujan_lab import catalog, congruence, exact, identities, numerics
from ramanujan_lab.numerics import GaussianRational

#: filled in as criteria run; printed by the conftest terminal summary
RESULTS: dict[int, str] = {}

#: worked examples whose A-congruence must hold for every admissible p > 3
WORKED_EXAMPLES = ("T1.3", "T1.4", "T1.8", "T3.6", "T3.8", "T3.11", "T3.15", "T5.2")
#: primes excluded where the B-congruence is stated: p > 3 for six worked
#: examples, p != 5 for T5.2; every other failure counts
STATED_B_EXCEPTIONS = {
    "T3.11": {3}, "T3.15": {3}, "T3.6": {3}, "T3.8": {3}, "T3.5": {3}, "T3.2": {3}, "T5.2": {5},
}

FOURIER_TARGETS = {
    "T3.11": (["-14/3", "2"], None),
    "T3.6": (["1/3", "1/4"], None),
    "T5.2": (["-25/6", "8/3", "-2/3", "1/6"], None),
    "T3.15": (["-79/2", "23/2"], [GaussianRational(Fraction(0), Fraction(5, 2)),
                                   GaussianRational(Fraction(0), Fraction(-3, 2))]),
}


def _record(n, title, ok, detail, seconds, limit=None):
    over = limit is not None and seconds > limit
    status = "PASS" if ok and not over else "FAIL"
    budget = f" (limit {limit:g} s)" if limit is not None else ""
    if over:
        detail += f"; runtime {seconds:.1f} s exceeds the limit"
    RESULTS[n] = f"{status} criterion {n}: {title} -- {detail} [{seconds:.1f} s{budget}]"
    return status == "PASS"


def _timed(fn):
    t0 = time.monotonic()
    out = fn()
    return out, time.monotonic() - t0


# ---------------------------------------------------------------------------


def criterion_1():
    def work():
        entries = catalog.builtin_catalog()
        counts = [sum(1 for e in entries if e.id.startswith(f"T{t}.")) for t in range(1, 6)]
        invalid = [e.id for e in entries if catalog.validate(e)]
        t311, t240 = catalog.get_entry("T3.11"), catalog.get_entry("T2.40")
        spots = t311.a == (45, 549, 1930) and t311.v0 == 384 and t240.a[1] == 545140134
        return len(entries), counts, invalid, spots

    (n, counts, invalid, spots), secs = _timed(work)
    ok = n == 65 and counts == [21, 23, 15, 3, 3] and not invalid and spots
    detail = f"{n} entries, per table {counts}, invalid {invalid or 'none'}, spot fields {'match' if spots else 'differ'}"
    return _record(1, "catalog integrity", ok, detail, secs, 1)


def criterion_2():
    def work():
        bad = [(k, p) for k in sorted(exact.POCHHAMMER_IDENTITIES) for p in range(1, 202, 2)
               if not exact.check_pochhammer_identity(k, p)]
        primes = [p for p in exact.primes_up_to(499) if p >= 5]
        morley = [p for p in primes if not exact.morley_holds(p)]
        wolst = [p for p in primes if not exact.wolstenholme_holds(p)]
        return len(exact.POCHHAMMER_IDENTITIES), bad, morley, wolst, len(primes)

    (nid, bad, morley, wolst, nprimes), secs = _timed(work)
    ok = nid == 7 and not bad and not morley and not wolst
    detail = (f"{nid} identities x 101 odd p: {len(bad)} mismatches; Morley/Wolstenholme over {nprimes} primes: "
              f"{len(morley)}/{len(wolst)} failures")
    return _record(2, "exact Pochhammer identities and classical congruences", ok, detail, secs, 30)


def criterion_3():
    def work():
        names = list(identities.IDENTITIES)
        unequal = [(name, p) for name in names for p in range(1, 100, 2)
                   if not identities.eval_identity(name, p)[2]]
        uncertified = [name for name in names if not identities.certify_same_recurrence(name, 99, 8)]
        return names, unequal, uncertified

    (names, unequal, uncertified), secs = _timed(work)
    ok = len(names) == 6 and not unequal and not uncertified
    detail = (f"{len(names)} identities, odd p <= 99: {len(unequal)} unequal; "
              f"recurrence certificates failed: {uncertified or 'none'}")
    return _record(3, "terminating identities", ok, detail, secs, 120)


def criterion_4():
    def work():
        reports = congruence.scan(catalog.builtin_catalog(), "A", 199)
        pinned = congruence.a_supercongruence(catalog.get_entry("T1.3"), 3)
        return reports, pinned

    (reports, pinned), secs = _timed(work)
    checked = [r for r in reports if r.checked]
    failures = [r for r in checked if not r.holds]
    large = [r for r in failures if r.p > 5]
    worked = [r for r in failures if r.series_id in WORKED_EXAMPLES and r.p > 3]
    pinned_ok = pinned.valuation == 4 and pinned.holds
    ok = not large and not worked and pinned_ok
    fail_text = ", ".join(f"{r.series_id}@p={r.p} (v={r.valuation} < {r.required})" for r in failures) or "none"
    detail = (f"{len(checked)} checked over 65 series, p <= 199; failures: {fail_text}; "
              f"failures with p > 5: {len(large)}; worked-example failures with p > 3: "
              f"{', '.join(f'{r.series_id}@p={r.p}' for r in worked) or 'none'}; "
              f"T1.3@p=3 valuation {pinned.valuation}")
    return _record(4, "A-supercongruence scan", ok, detail, secs, 300)


def criterion_5():
    def work():
        known = [e for e in catalog.builtin_catalog() if e.eps0 is not None]
        reports = congruence.scan(known, "B", 199)
        pinned = congruence.b_supercongruence(catalog.get_entry("T1.3"), 3)
        return known, reports, pinned

    (known, reports, pinned), secs = _timed(work)
    checked = [r for r in reports if r.checked]
    failures = [r for r in checked if not r.holds and r.p not in STATED_B_EXCEPTIONS.get(r.series_id, ())]
    by_series: dict[str, list[int]] = {}
    for r in failures:
        by_series.setdefault(r.series_id, []).append(r.p)
    pinned_ok = pinned.lhs == pinned.rhs == -12
    ok = not failures and pinned_ok
    summary = "; ".join(
        f"{sid} at {len(ps)} prime{'s' if len(ps) > 1 else ''}"
        + (f" ({', '.join(map(str, ps))})" if len(ps) <= 3 else f" ({ps[0]}..{ps[-1]})")
        for sid, ps in by_series.items()
    ) or "none"
    beyond = sorted({r.series_id for r in failures if r.p > 5}, key=catalog.natural_key)
    detail = (f"{len(known)} series with known eps0, {len(checked)} checked (stated exceptions applied: "
              f"p > 3 for six worked examples, p != 5 for T5.2); failures: {summary}; "
              f"series failing beyond p <= 5: {', '.join(beyond) or 'none'}; "
              f"T1.3@p=3 lhs = {pinned.lhs}, rhs = {pinned.rhs}")
    return _record(5, "B-supercongruence scan", ok, detail, secs, 300)


def criterion_6():
    def work():
        rows = []
        for e in catalog.builtin_catalog():
            if abs(e.z0) >= 1 or not numerics.is_real_valued(e):
                continue
            v = numerics.sum_unilateral(e, 50)
            with mp.workprec(v.precision_bits):
                target = mp.re(numerics.ramanujan_constant(e))
                rel = abs(v.value - target) / abs(target)
                agree = float(-mp.log10(rel)) if rel else float("inf")
            rows.append((e.id, agree))
        return rows

    rows, secs = _timed(work)
    short = [(sid, d) for sid, d in rows if d < 45]
    spot = {sid: d for sid, d in rows if sid in ("T1.4", "T3.8")}
    ok = not short and len(spot) == 2
    worst = min((d for _, d in rows if d >= 45), default=float("nan"))
    detail = (f"{len(rows)} convergent real-valued series at 50 digits; "
              f"below 45 digits: {', '.join(f'{s} ({d:.1f} digits)' for s, d in short) or 'none'}; "
              f"worst passing agreement {worst:.1f} digits; T1.4/T3.8 agree to "
              f"{min(spot.get('T1.4', 0), 60):.0f}+/{min(spot.get('T3.8', 0), 60):.0f}+ digits")
    return _record(6, "numeric series values", ok, detail, secs, 120)


def criterion_7():
    def work():
        out = {}
        for sid, (alpha, beta) in FOURIER_TARGETS.items():
            fc = numerics.solve_fourier(catalog.get_entry(sid), 40)
            want_a = tuple(GaussianRational(Fraction(a)) for a in alpha)
            want_b = tuple(beta) if beta else tuple(GaussianRational(Fraction(0)) for _ in alpha)
            out[sid] = (fc.reconstructed and fc.alpha == want_a and fc.beta == want_b, fc)
        return out

    results, secs = _timed(work)
    ok = all(good for good, _ in results.values())
    parts = []
    for sid, (good, fc) in results.items():
        alpha = ", ".join(map(str, fc.alpha)) if fc.reconstructed else "unreconstructed"
        beta = ", ".join(map(str, fc.beta)) if fc.reconstructed else "-"
        parts.append(f"{sid} [{fc.method}, {fc.precision_bits} bits] alpha=({alpha}) beta=({beta})"
                     + ("" if good else " MISMATCH"))
    return _record(7, "Fourier coefficient recovery", ok, "; ".join(parts), secs)


def criterion_8():
    targets = {
        "T3.11": (["-14/3", "2"], Fraction(93, 253), 1, 0),
        "T3.15": (["-79/2", "23/2"], Fraction(-30, 2401), -7, 0),
        "T3.6": (["1/3", "1/4"], Fraction(3, 2), -4, 1),
        "T5.2": (["-25/6", "8/3", "-2/3", "1/6"], Fraction(3), 1, 2),
    }

    def work():
        out = {}
        for sid, (alpha, r0, eps0, j) in targets.items():
            e = catalog.get_entry(sid)
            sc = numerics.r0_closed_form(e, alpha, 50)
            with mp.workdps(60):
                exact_value = mp.mpf(r0.numerator) / r0.denominator * mp.sqrt(mp.mpc((-1) ** j * eps0)) / mp.pi**j
                digits = float(-mp.log10(abs(sc.prefactor - exact_value) / abs(exact_value)))
                r, eps = numerics.discriminant_extract(sc.prefactor * mp.pi**j)
            # c = r sqrt(eps) must be the same number as r0 sqrt((-1)^j eps0)
            consistent = r * r * eps == r0 * r0 * (-1) ** j * eps0
            good = (sc.r0, sc.eps0, sc.j) == (r0, eps0, j) and digits >= 40 and consistent and eps0 == e.eps0
            out[sid] = (good, sc, digits)
        return out

    results, secs = _timed(work)
    ok = all(g for g, _, _ in results.values())
    detail = "; ".join(
        f"{sid} -> {sc.closed_form()} (r0={sc.r0}, eps0={sc.eps0}, j={sc.j}, {min(d, 60):.0f}+ digits)"
        + ("" if g else " MISMATCH")
        for sid, (g, sc, d) in results.items()
    )
    return _record(8, "r0/eps0 closed forms", ok, detail, secs, 60)


def criterion_9():
    rng = random.Random(9)

    def rand_rational():
        return Fraction(rng.randint(-400, 400), rng.randint(1, 30))

    def work():
        fails = {"addition": 0, "reflection": 0, "reconstruction": 0, "recurrence": 0, "shift": 0}
        for _ in range(1000):
            s, m, n = rand_rational(), rng.randint(0, 25), rng.randint(0, 25)
            if exact.pochhammer(s, m + n) != exact.pochhammer(s, m) * exact.pochhammer(s + m, n):
                fails["addition"] += 1
        for _ in range(1000):
            s, n = rand_rational(), rng.randint(1, 25)
            right = exact.pochhammer(1 - s, n)
            if right == 0:
                try:
                    exact.pochhammer(s, -n)
                    fails["reflection"] += 1
                except ZeroDivisionError:
                    pass
            elif exact.pochhammer(s, -n) != Fraction((-1) ** n) / right:
                fails["reflection"] += 1
        with mp.workdps(50):
            for _ in range(1000):
                q = Fraction(rng.randint(-10**9, 10**9), rng.randint(1, 10**6))
                x = mp.mpf(q.numerator) / q.denominator
                if numerics.rational_reconstruct(x, 10**12, digits=50) != q:
                    fails["reconstruction"] += 1
        entries = catalog.builtin_catalog()
        for e in entries:
            prev = congruence.a_term(e, 0)
            for n in range(1, 51):
                cur = congruence.a_term(e, n)
                ratio = e.z0
                for s in e.s:
                    ratio *= (s + n - 1) / Fraction(n)
                if cur * e.poly(n - 1) != prev * ratio * e.poly(n):
                    fails["recurrence"] += 1
                prev = cur
            if congruence.a_partial_sum(e, 51) != sum((congruence.a_term(e, n) for n in range(51)), Fraction(0)):
                fails["recurrence"] += 1
            for p in exact.primes_up_to(20):
                if p > 2 and not congruence.shift_identity_check(e, p):
                    fails["shift"] += 1
        return fails

    fails, secs = _timed(work)
    ok = not any(fails.values())
    detail = ("1000 addition, 1000 reflection, 1000 reconstruction cases; recurrence n <= 50 and shift p <= 19 "
              "on all 65 series; failures: " + ", ".join(f"{k} {v}" for k, v in fails.items()))
    return _record(9, "property suites", ok, detail, secs)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


@pytest.mark.acceptance
@pytest.mark.parametrize("number", range(1, 10))
def test_acceptance_criterion(number):
    ok = CRITERIA[number - 1]()
    print(RESULTS[number])
    assert ok, RESULTS[number]


def main() -> int:
    ok = True
    for fn in CRITERIA:
        ok &= fn()
        print(RESULTS[CRITERIA.index(fn) + 1], flush=True)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
