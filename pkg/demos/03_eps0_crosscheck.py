"""
Cross-checking the tabulated eps0 values
========================================

Every catalog row carries a conjectured discriminant eps0.  There are two
independent ways to recompute it:

* numerically: recover the Fourier constants alpha_k, evaluate the
  semi-terminating prefactor, and split it as r0 sqrt((-1)^j eps0) / pi^j;
* p-adically: find the Kronecker character that makes the B-congruence hold
  at many primes (``propose_eps0``).

This script runs both over the whole catalog and prints one line per row.
"""

import time

from ramanujan_lab import catalog, congruence, numerics
from ramanujan_lab.errors import AccelerationFailure, ReconstructionFailure

rows = []
start = time.monotonic()

for e in catalog.builtin_catalog():
    proposed = congruence.propose_eps0(e)
    p_adic = proposed[0] if len(proposed) == 1 else None

    # 40 digits are plenty for most rows; rows with huge z0 denominators
    # (the Chudnovsky-type T2.40, for instance) need 100 before the squared
    # prefactor becomes recognisable
    numeric, note = None, ""
    try:
        numerics.choose_method(e)
    except AccelerationFailure:
        note = "no summation method"
    else:
        for digits in (40, 100):
            try:
                fc = numerics.solve_fourier(e, digits)
            except AccelerationFailure:
                note = f"Levin stalls at {digits} digits"
                break
            if not fc.reconstructed:
                note = "alpha not reconstructed"
                continue
            try:
                sc = numerics.r0_closed_form(e, fc.alpha, digits)
            except ReconstructionFailure:
                note = "prefactor not reconstructed"
                continue
            numeric, note = sc.eps0, f"r0 = {sc.r0}, {digits} digits"
            break

    rows.append((e.id, e.eps0, numeric, p_adic, note))

print(f"{'series':7} {'table':>6} {'numeric':>8} {'p-adic':>7}  notes")
for sid, table, numeric, p_adic, note in rows:
    fmt = lambda v: "-" if v is None else str(v)  # noqa: E731
    flag = ""
    if (numeric is not None and numeric != table) or (p_adic is not None and p_adic != table):
        flag = "  <-- differs from the table"
    print(f"{sid:7} {fmt(table):>6} {fmt(numeric):>8} {fmt(p_adic):>7}  {note}{flag}")

reached = [r for r in rows if r[2] is not None]
agree = [r for r in reached if r[2] == r[1]]
print()
print(f"numeric route reached {len(reached)} of {len(rows)} rows; {len(agree)} agree with the table")
print(f"p-adic route proposes a unique value for {sum(r[3] is not None for r in rows)} rows")
print(f"elapsed {time.monotonic() - start:.0f} s")
