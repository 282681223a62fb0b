"""
Terminating identities and recurrence certificates
==================================================

At x = -p/2 with p odd, the bilateral series of six catalog rows terminate
and sum to explicit rational functions of p.  Both sides are exact
rationals, so equality can be checked directly for each p; a uniform proof
comes from finding one first-order recurrence that both sides satisfy,
with matching initial values.
"""

from ramanujan_lab import identities
from ramanujan_lab.errors import FitNotFound

for name in sorted(identities.IDENTITIES):
    lhs, rhs, ok = identities.eval_identity(name, 7)
    print(f"{name:14} ({identities.IDENTITY_SERIES[name]:5})  p=7: {lhs} == {rhs}  {ok}")

print()
for name in sorted(identities.IDENTITIES):
    lhs, rhs = identities.identity_sequences(name, 99)
    ok, fit = identities.certify_sequences(lhs, rhs, 8)
    deg = len(fit.P) - 1
    print(f"{name:14} certified={ok}  degree {deg}, fitted on {fit.fitted}, verified on {fit.verified}")
    if name == "6n+1":
        print(f"    {fit}")

# The data have to determine the recurrence: too few terms is an error,
# not a false certificate.
try:
    identities.certify_same_recurrence("10n2+6n+1", 41)
except FitNotFound as exc:
    print()
    print(f"10n2+6n+1 at p_max=41: {exc}")
