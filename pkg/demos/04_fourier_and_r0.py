"""
Fourier coefficients and the semi-terminating constant
======================================================

Shifting n -> n + x turns a series into a bilateral sum.  Multiplied by
the trigonometric ``numerics.prefactor`` it becomes a trigonometric
polynomial f(x) with

    f(x) / C = 1 + sum_{k=1}^m alpha_k (cos 2 pi k x - 1) + beta_k sin 2 pi k x,

C being the tabulated constant.  The alpha_k and beta_k are rational, and at
x = -1/2 the series terminates, which yields a closed form
r0 sqrt((-1)^j eps0) / pi^j.  This script recovers both for four
worked examples and shows the two summation strategies.
"""

from ramanujan_lab import catalog, numerics
from ramanujan_lab.errors import AccelerationFailure

for sid in ("T3.11", "T3.6", "T5.2", "T3.15"):
    e = catalog.get_entry(sid)
    method = numerics.choose_method(e)
    fc = numerics.solve_fourier(e, 40)
    sc = numerics.r0_closed_form(e, fc.alpha, 40)
    print(f"{sid}  z0={e.z0}  method={method}  ({fc.precision_bits} bits)")
    print(f"    alpha = {', '.join(map(str, fc.alpha))}")
    print(f"    beta  = {', '.join(map(str, fc.beta))}")
    print(f"    prefactor = {sc.closed_form()}   (r0={sc.r0}, eps0={sc.eps0}, j={sc.j})")

# T3.6 has z0 = -27: the left tail alternates and Levin's u-transform sums
# it.  T3.15 has z0 = 1/2401 > 0, so the left tail does not alternate; its
# coefficients come from the Taylor jet of f at x = 0 instead, where the
# left tail contributes nothing up to order 2m.
print()
for sid in ("T1.6", "T4.2"):
    e = catalog.get_entry(sid)
    try:
        numerics.choose_method(e)
    except AccelerationFailure as exc:
        print(f"{sid} (z0={e.z0}): {exc}")
