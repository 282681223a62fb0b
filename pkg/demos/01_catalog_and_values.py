"""
A tour of the series catalog
============================

Each row of the catalog describes a Ramanujan-like series

    sum_{n>=0} prod_i (s_i)_n / (1)_n  *  P(n) z0^n  =  v0 sqrt((-1)^m chi0) / pi^m

of rank 2m+1.  This script prints a few rows, validates the whole catalog,
and sums the convergent real-valued ones to 50 digits.
"""

import mpmath as mp

from ramanujan_lab import catalog, numerics

entries = catalog.builtin_catalog()
print(f"{len(entries)} rows")
for sid in ("T1.3", "T2.40", "T3.11", "T5.2"):
    print("  ", catalog.format_entry(catalog.get_entry(sid)))

bad = [(e.id, v) for e in entries for v in catalog.validate(e)]
print(f"validation problems: {bad or 'none'}")

# The text format round-trips exactly, so a catalog can be edited by hand.
assert catalog.loads(catalog.dumps(entries)) == entries

print()
print(f"{'series':7} {'digits':>6}  value")
for e in entries:
    if abs(e.z0) >= 1 or not numerics.is_real_valued(e):
        continue
    got = numerics.sum_unilateral(e, 50)
    with mp.workdps(60):
        want = mp.re(numerics.ramanujan_constant(e))
        err = abs(got.value - want)
        agree = mp.inf if err == 0 else -mp.log10(err / abs(want))
    print(f"{e.id:7} {float(agree):6.1f}  {got.nstr(25)}")

# T3.14 stands out: its sum is 1/3 of the tabulated constant.
e = catalog.get_entry("T3.14")
with mp.workdps(50):
    ratio = numerics.sum_unilateral(e, 50).value / mp.re(numerics.ramanujan_constant(e))
print()
print(f"T3.14: sum / tabulated constant = {mp.nstr(ratio, 30)}")
