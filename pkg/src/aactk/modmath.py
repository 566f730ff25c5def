"""Exact modular arithmetic over an odd prime p.

Quadratic-residue machinery, Fermat quotients, harmonic numbers mod p,
and the floor-function identities used by the congruence verifiers.

Conventions:
  * residues are always normalized to [0, m-1]; the reduced residue <x>
    of an integer x coprime to p lies in [1, p-1];
  * R and N are the canonical sets of quadratic residues / non-residues
    in [1, p-1], each of size (p-1)/2;
  * A and B are the exact integer products over R and N.  They carry
    roughly p*log(p) bits, so exact products are only built for
    p <= EXACT_PRODUCT_LIMIT; beyond that use residue_products_mod.

All functions accepting a prime take either a plain int or a
PrimeModulus; ints are validated once through a cached primality check.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

from .errors import (
    DivisibleBase,
    MismatchBug,
    NotInvertible,
    NotPrime,
    OutOfRange,
    WrongResidueClass,
)

# Witness set is deterministic for n < 3.3 * 10^24 (covers 64-bit inputs).
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_DETERMINISTIC_BOUND = 3_317_044_064_679_887_385_961_981
_MR_EXTRA_ROUNDS = 24

EXACT_PRODUCT_LIMIT = 10_000

_TABLE_CACHE_SIZE = 32


def is_prime(n: int) -> bool:
    """Miller-Rabin primality test.

    Deterministic for n below ~3.3e24 via the 12-witness set; larger
    inputs additionally run 24 pseudorandom rounds seeded by n, so the
    answer is still deterministic per input but carries the usual
    < 4^-24 error caveat.
    """
    if n < 2:
        return False
    for q in _MR_WITNESSES:
        if n == q:
            return True
        if n % q == 0:
            return False
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    witnesses = list(_MR_WITNESSES)
    if n >= _MR_DETERMINISTIC_BOUND:
        rng = random.Random(n)
        witnesses += [rng.randrange(2, n - 1) for _ in range(_MR_EXTRA_ROUNDS)]
    for a in witnesses:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeModulus:
    """A validated odd prime, tagged with its residue class mod 4."""

    p: int
    class1mod4: bool

    @classmethod
    def of(cls, p: int) -> "PrimeModulus":
        _check_odd_prime(p)
        return cls(p=p, class1mod4=(p % 4 == 1))


@lru_cache(maxsize=None)
def _check_odd_prime(p: int) -> int:
    if p < 3 or not is_prime(p):
        raise NotPrime(f"{p} is not an odd prime")
    return p


def as_prime(p) -> int:
    """Coerce an int or PrimeModulus to a validated odd prime int."""
    if isinstance(p, PrimeModulus):
        return p.p
    return _check_odd_prime(int(p))


def primes_in(lo: int, hi: int) -> list[int]:
    """All primes in [lo, hi], by sieve."""
    if hi < 2 or hi < lo:
        return []
    sieve = bytearray(b"\x01") * (hi + 1)
    sieve[0:2] = b"\x00\x00"
    for q in range(2, math.isqrt(hi) + 1):
        if sieve[q]:
            start = q * q
            sieve[start : hi + 1 : q] = b"\x00" * ((hi - start) // q + 1)
    return [n for n in range(max(lo, 2), hi + 1) if sieve[n]]


def legendre(a: int, p) -> int:
    """Legendre symbol (a/p) by Euler's criterion: 0, +1 or -1."""
    p = as_prime(p)
    a %= p
    if a == 0:
        return 0
    r = pow(a, (p - 1) // 2, p)
    return 1 if r == 1 else -1


def kronecker(d: int, n: int) -> int:
    """Kronecker symbol (d/n), the full multiplicative extension of Legendre."""
    if n == 0:
        return 1 if d in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if d < 0:
            result = -result
    while n % 2 == 0:
        n //= 2
        if d % 2 == 0:
            return 0
        if d % 8 in (3, 5):
            result = -result
    # n is odd and positive: fall through to the Jacobi recursion.
    d %= n
    while d != 0:
        while d % 2 == 0:
            d //= 2
            if n % 8 in (3, 5):
                result = -result
        d, n = n, d
        if d % 4 == 3 and n % 4 == 3:
            result = -result
        d %= n
    return result if n == 1 else 0


def mod_inverse(a: int, m: int) -> int:
    """Inverse of a mod m, in [1, m-1].  Raises NotInvertible if gcd(a,m) > 1."""
    try:
        return pow(a, -1, m)
    except ValueError:
        raise NotInvertible(f"{a} is not invertible mod {m}") from None


def fermat_quotient(a: int, p) -> tuple[int, int]:
    """Exact Fermat quotient (a^(p-1) - 1)/p and its residue mod p.

    F is additive on products: F(ab) = F(a) + F(b) mod p, and as a map to
    Z/p it depends only on a mod p^2.  The exact integer part grows like
    (p-1)*log2(a) bits; for large lifts prefer fermat_quotient_mod.
    """
    p = as_prime(p)
    if a % p == 0:
        raise DivisibleBase(f"gcd({a}, {p}) > 1")
    exact = (a ** (p - 1) - 1) // p
    return exact, exact % p


def fermat_quotient_mod(a: int, p) -> int:
    """F(a) mod p via one modular exponentiation mod p^2."""
    p = as_prime(p)
    if a % p == 0:
        raise DivisibleBase(f"gcd({a}, {p}) > 1")
    return (pow(a, p - 1, p * p) - 1) // p % p


@lru_cache(maxsize=_TABLE_CACHE_SIZE)
def inverse_table(p: int) -> tuple[int, ...]:
    """inv[k] = k^-1 mod p for k in [1, p-1], via one batched-inversion pass."""
    p = as_prime(p)
    prefix = [1] * p
    for k in range(1, p):
        prefix[k] = prefix[k - 1] * k % p
    inv = [0] * p
    acc = pow(prefix[p - 1], p - 2, p)
    for k in range(p - 1, 0, -1):
        inv[k] = acc * prefix[k - 1] % p
        acc = acc * k % p
    return tuple(inv)


@dataclass(frozen=True)
class HarmonicTable:
    """Prefix table of harmonic numbers H_k mod p, k = 0 .. p-1."""

    p: PrimeModulus
    h_mod: tuple[int, ...]


@lru_cache(maxsize=_TABLE_CACHE_SIZE)
def _harmonic_values(p: int) -> tuple[int, ...]:
    inv = inverse_table(p)
    out = [0] * p
    for k in range(1, p):
        out[k] = (out[k - 1] + inv[k]) % p
    return tuple(out)


def harmonic_table(p) -> HarmonicTable:
    p = as_prime(p)
    return HarmonicTable(p=PrimeModulus.of(p), h_mod=_harmonic_values(p))


def harmonic_mod(k: int, p) -> int:
    """H_k = sum_{j<=k} 1/j mod p, with H_0 = 0.  Needs 0 <= k <= p-1."""
    p = as_prime(p)
    if not 0 <= k <= p - 1:
        raise OutOfRange(f"harmonic index {k} outside [0, {p - 1}]")
    return _harmonic_values(p)[k]


@dataclass(frozen=True)
class ResidueSets:
    """The canonical residue/non-residue sets of p and their products.

    qr and nqr partition [1, p-1]; A = prod(qr) and B = prod(nqr) are
    exact integers satisfying A = -1 and B = 1 mod p when p = 1 mod 4.
    For p above EXACT_PRODUCT_LIMIT, A and B are None (use
    residue_products_mod instead).
    """

    p: PrimeModulus
    qr: tuple[int, ...]
    nqr: tuple[int, ...]
    A: int | None
    B: int | None


@lru_cache(maxsize=_TABLE_CACHE_SIZE)
def _qr_set(p: int) -> frozenset[int]:
    return frozenset(a * a % p for a in range(1, (p + 1) // 2))


def residue_sets(p) -> ResidueSets:
    """Quadratic residue and non-residue sets with exact products A, B."""
    p = as_prime(p)
    if p % 4 != 1:
        raise WrongResidueClass(f"p = {p} is not 1 mod 4")
    squares = _qr_set(p)
    qr = tuple(sorted(squares))
    nqr = tuple(a for a in range(1, p) if a not in squares)
    if p <= EXACT_PRODUCT_LIMIT:
        A: int | None = math.prod(qr)
        B: int | None = math.prod(nqr)
    else:
        A = B = None
    return ResidueSets(p=PrimeModulus.of(p), qr=qr, nqr=nqr, A=A, B=B)


def residue_products_mod(p, modulus: int) -> tuple[int, int]:
    """(A mod modulus, B mod modulus) without building the exact products."""
    p = as_prime(p)
    squares = _qr_set(p)
    a = b = 1
    for x in range(1, p):
        if x in squares:
            a = a * x % modulus
        else:
            b = b * x % modulus
    return a, b


def legendre_harmonic_sum(p) -> int:
    """sum_{k=1}^{p-1} k^-1 (k/p) mod p; vanishes for p = 1 mod 4."""
    p = as_prime(p)
    if p % 4 != 1:
        raise WrongResidueClass(f"p = {p} is not 1 mod 4")
    inv = inverse_table(p)
    squares = _qr_set(p)
    total = 0
    for k in range(1, p):
        total += inv[k] if k in squares else -inv[k]
    return total % p


def floor_jump_set(m: int, p) -> frozenset[int]:
    """The k in [1, p-1] where floor(mk/p) - floor(m(k-1)/p) equals 1.

    For 1 <= m <= p-1 the difference is always 0 or 1, and the jump
    positions are exactly { floor(p*l/m) + 1 : l = 1 .. m-1 }.
    """
    p = as_prime(p)
    if not 1 <= m <= p - 1:
        raise OutOfRange(f"m = {m} outside [1, {p - 1}]")
    jumps = set()
    prev = 0
    for k in range(1, p):
        cur = m * k // p
        if cur - prev == 1:
            jumps.add(k)
        prev = cur
    return frozenset(jumps)


def lifted_floor_diff(M: int, k: int, p) -> int:
    """floor(Mk/p) - floor(M(k-1)/p), checked two ways.

    Computes the plain difference and the decomposition
    floor(M/p) + floor(mk/p) - floor(m(k-1)/p) with m = M mod p
    independently; they must agree for 1 <= k <= p-1.
    """
    p = as_prime(p)
    if M <= 0 or M % p == 0:
        raise OutOfRange(f"M = {M} must be positive and coprime-reduced mod {p}")
    if not 1 <= k <= p - 1:
        raise OutOfRange(f"k = {k} outside [1, {p - 1}]")
    direct = M * k // p - M * (k - 1) // p
    m = M % p
    decomposed = M // p + m * k // p - m * (k - 1) // p
    if direct != decomposed:
        raise MismatchBug(
            f"floor-difference identity broke at M={M}, k={k}, p={p}"
        )
    return direct


def complementary_floor_identity(p, q: int, k: int) -> bool:
    """floor(pk/q) + floor(p(q-k)/q) == p - 1 for 1 <= k <= q-1, gcd(p,q)=1."""
    p = as_prime(p)
    if not 1 <= q < p:
        raise OutOfRange(f"q = {q} outside [1, {p - 1}]")
    if math.gcd(p, q) != 1:
        raise OutOfRange(f"gcd({p}, {q}) != 1")
    if not 1 <= k <= q - 1:
        raise OutOfRange(f"k = {k} outside [1, {q - 1}]")
    return p * k // q + p * (q - k) // q == p - 1


def wilson_binomial_check(p, j: int) -> bool:
    """(1/p) C(p,j) = (-1)^(j-1) / j mod p, with the binomial exact."""
    p = as_prime(p)
    if not 1 <= j <= p - 1:
        raise OutOfRange(f"j = {j} outside [1, {p - 1}]")
    binom = math.comb(p, j)
    if binom % p != 0:
        raise MismatchBug(f"p does not divide C({p},{j})")
    lhs = binom // p % p
    rhs = (-1) ** (j - 1) * mod_inverse(j, p) % p
    return lhs == rhs
