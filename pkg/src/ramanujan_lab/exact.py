"""Exact rational arithmetic helpers: Pochhammer symbols, Kronecker symbols,
p-adic valuations and a handful of classical congruences.

All rationals are :class:`fractions.Fraction`, which is always kept in lowest
terms with a positive denominator, so equality is structural.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction

from .errors import NotPIntegral, ZeroDivisor

#: Valuation of zero.
INF = math.inf


def as_rational(value) -> Fraction:
    """Coerce ints, strings like ``"-729/4096"`` and Fractions to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("refusing to build an exact rational from a float")
    return Fraction(value)


# ---------------------------------------------------------------------------
# Pochhammer symbols


def pochhammer(s, n: int) -> Fraction:
    """Rising factorial ``(s)_n`` for rational ``s`` and any integer ``n``.

    For negative ``n`` the usual extension ``(s)_{-k} = 1/((s-1)(s-2)...(s-k))``
    is used.  Raises :class:`ZeroDivisor` if one of those factors is zero.
    """
    s = as_rational(s)
    if n >= 0:
        num, den = 1, 1
        for t in range(n):
            num *= s.numerator + t * s.denominator
            den *= s.denominator
        return Fraction(num, den)
    num, den = 1, 1
    for t in range(1, -n + 1):
        f = s.numerator - t * s.denominator
        if f == 0:
            raise ZeroDivisor(f"(s)_{n} with s={s}: factor s-{t} is zero")
        num *= s.denominator
        den *= f
    return Fraction(num, den)


# ---------------------------------------------------------------------------
# primes, factorials


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24, which covers every use here."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, n + 1, i)))
    return [i for i, flag in enumerate(sieve) if flag]


def factorint(n: int) -> dict[int, int]:
    """Trial-division factorisation of a nonzero integer (sign dropped)."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out: dict[int, int] = {}
    if is_prime(n):
        return {n: 1}
    d = 2
    while d * d <= n:
        if n % d == 0:
            while n % d == 0:
                out[d] = out.get(d, 0) + 1
                n //= d
            if is_prime(n):  # a large prime cofactor ends the search early
                break
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class FactorialCache:
    """Thread-safe factorial table, grown by products up to ``max_entries``.

    Beyond the cap values are computed on demand and not stored.
    """

    def __init__(self, max_entries: int = 10_000):
        self.max_entries = max_entries
        self._table = [1]
        self._lock = threading.Lock()

    def __call__(self, n: int) -> int:
        if n < 0:
            raise ValueError("factorial of a negative integer")
        table = self._table
        if n < len(table):
            return table[n]
        if n >= self.max_entries:
            return math.factorial(n)
        with self._lock:
            table = self._table
            acc = table[-1]
            for k in range(len(table), n + 1):
                acc *= k
                table.append(acc)
            return table[n]


factorial = FactorialCache()


def binomial(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    return factorial(n) // (factorial(k) * factorial(n - k))


# ---------------------------------------------------------------------------
# Kronecker symbol


def kronecker(D: int, n: int) -> int:
    """Kronecker symbol (D/n) for arbitrary integers."""
    if n == 0:
        return 1 if abs(D) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if D < 0:
            result = -1
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if D % 2 == 0:
            return 0
        if v % 2 == 1 and D % 8 in (3, 5):
            result = -result
    # Jacobi symbol (D/n), n odd positive
    a = D % n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def squarefree_decomposition(n: int) -> tuple[int, int]:
    """Write a nonzero integer as ``d * r**2`` with ``d`` square-free (signed)."""
    if n == 0:
        raise ValueError("0 has no square-free decomposition")
    d, r = (1 if n > 0 else -1), 1
    for q, e in factorint(n).items():
        r *= q ** (e // 2)
        if e % 2:
            d *= q
    return d, r


def is_squarefree(n: int) -> bool:
    return n != 0 and all(e == 1 for e in factorint(n).values())


def is_fundamental_discriminant(d: int) -> bool:
    """True for 1 and for discriminants of quadratic fields."""
    if d == 1:
        return True
    if d == 0:
        return False
    if d % 4 == 1:
        return is_squarefree(d)
    if d % 4 == 0:
        k = d // 4
        return k % 4 in (2, 3) and is_squarefree(k)
    return False


def fundamental_discriminant(d: int) -> tuple[int, int]:
    """Return ``(eps, c)`` with ``eps`` a fundamental discriminant (or 1) and
    ``d = eps * c**2`` for a rational ``c``; ``c`` is an int or a half-integer
    Fraction."""
    sf, r = squarefree_decomposition(d)
    if sf % 4 == 1:
        return sf, r
    return 4 * sf, Fraction(r, 2)


# ---------------------------------------------------------------------------
# p-adic valuations and congruences


def vp_int(n: int, p: int) -> float | int:
    if n == 0:
        return INF
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp(q, p: int):
    """Exact p-adic valuation of a rational; ``INF`` for zero."""
    q = as_rational(q)
    if q == 0:
        return INF
    return vp_int(q.numerator, p) - vp_int(q.denominator, p)


def congruent(a, b, p: int, e: int) -> bool:
    """``a == b (mod p^e)`` for rationals, meaning ``vp(a - b) >= e``."""
    return vp(as_rational(a) - as_rational(b), p) >= e


@dataclass(frozen=True)
class PAdicResidue:
    prime: int
    exponent: int
    residue: int

    def __post_init__(self):
        if not 0 <= self.residue < self.prime**self.exponent:
            raise ValueError("residue out of range")


def reduce_mod(q, p: int, e: int) -> PAdicResidue:
    """Image of a p-integral rational in Z/p^e."""
    q = as_rational(q)
    if vp(q, p) < 0:
        raise NotPIntegral(f"{q} is not {p}-integral")
    mod = p**e
    residue = q.numerator * pow(q.denominator, -1, mod) % mod
    return PAdicResidue(p, e, residue)


# ---------------------------------------------------------------------------
# elementary identities for odd p and classical congruences


def _half(p: int) -> int:
    if p < 1 or p % 2 == 0:
        raise ValueError(f"identity needs a positive odd integer, got {p}")
    return (p - 1) // 2


def _id1(p):
    h = _half(p)
    return pochhammer(Fraction(1 - p, 2), h), Fraction((-1) ** h * factorial(h))


def _id2(p):
    h = _half(p)
    lhs = pochhammer(Fraction(1, 4) - Fraction(p, 2), h) * pochhammer(Fraction(3, 4) - Fraction(p, 2), h)
    rhs = Fraction(8, 8**p) * Fraction(factorial(2 * p - 1), factorial(p - 1))
    return lhs, rhs


def _id3(p):
    h = _half(p)
    lhs = pochhammer(Fraction(1, 3) - Fraction(p, 2), h) * pochhammer(Fraction(2, 3) - Fraction(p, 2), h)
    rhs = Fraction(4, 3 ** (3 * h) * 4**p) * Fraction(
        factorial(h) * factorial(3 * p - 2), factorial(p - 1) * factorial(3 * h)
    )
    return lhs, rhs


def _id4(p):
    h = _half(p)
    lhs = pochhammer(1 - Fraction(p, 2), h)
    rhs = (-1) ** h * Fraction(2 * factorial(p - 1), 2**p * factorial(h))
    return lhs, rhs


def _id5(p):
    h = _half(p)
    return pochhammer(Fraction(3 + p, 2), h), Fraction(factorial(p), factorial(h + 1))


def _id6(p):
    h = _half(p)
    return pochhammer(Fraction(1, 2), h), Fraction(factorial(p - 1), 2 ** (p - 1) * factorial(h))


def _id7(p):
    # the sign (-1)^h is required: at p = 3 the left side is -5/2
    h = _half(p)
    lhs = pochhammer(Fraction(1, 2) - p, h)
    rhs = (-1) ** h * Fraction(
        factorial(2 * p - 1) * factorial(h), 2 ** (p - 1) * factorial(p) * factorial(p - 1)
    )
    return lhs, rhs


POCHHAMMER_IDENTITIES = {1: _id1, 2: _id2, 3: _id3, 4: _id4, 5: _id5, 6: _id6, 7: _id7}


def pochhammer_identity_sides(k: int, p: int) -> tuple[Fraction, Fraction]:
    try:
        fn = POCHHAMMER_IDENTITIES[k]
    except KeyError:
        raise ValueError(f"no Pochhammer identity number {k}") from None
    return fn(p)


def check_pochhammer_identity(k: int, p: int) -> bool:
    lhs, rhs = pochhammer_identity_sides(k, p)
    return lhs == rhs


def morley_holds(p: int) -> bool:
    """Morley: C(p-1, (p-1)/2) == (-1)^((p-1)/2) 4^(p-1)  (mod p^3).

    Defined for any odd p; only meaningful (and only scanned) for primes p >= 5.
    """
    h = _half(p)
    mod = p**3
    return (binomial(p - 1, h) - (-1) ** h * pow(4, p - 1, mod)) % mod == 0


def wolstenholme_holds(p: int) -> bool:
    """Wolstenholme: C(2p-1, p) == 1  (mod p^3)."""
    return (binomial(2 * p - 1, p) - 1) % p**3 == 0
