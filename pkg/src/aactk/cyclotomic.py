"""Exact arithmetic in Z[zeta_p] and the Gauss-sum machinery built on it.

A cyclotomic integer is stored on the power basis {1, zeta, ...,
zeta^(p-2)} as a length-(p-1) coefficient vector; every occurrence of
zeta^(p-1) is eliminated through 1 + zeta + ... + zeta^(p-1) = 0, so
equality is coefficientwise.  No lattice or CRT tricks: desk-scale p
keeps dense vectors fast and exact.

The group ring element G = sum_j (j/p) sigma_j acts linearly through the
Galois automorphisms sigma_a : zeta -> zeta^a.  The Gauss sum
tau = sum_k (k/p) zeta^k satisfies tau^2 = p exactly when p = 1 mod 4,
which is asserted here as an identity of integer vectors, never through
floats; the only floating-point code is the unit-identity check, which
fixes zeta = exp(2*pi*i/p) (making tau the positive square root).
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import mpmath

from . import modmath, quadfield
from .errors import (
    DivisibilityBug,
    ModulusMismatch,
    NotNonResidue,
    OutOfRange,
    ToleranceExceeded,
    WrongResidueClass,
)


@dataclass(frozen=True)
class CycInt:
    """Element of Z[zeta_p] on the power basis, reduced mod the p-th cyclotomic polynomial."""

    p: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.p - 1:
            raise OutOfRange(
                f"need {self.p - 1} coefficients, got {len(self.coeffs)}"
            )

    @classmethod
    def zero(cls, p: int) -> "CycInt":
        return cls(p=p, coeffs=(0,) * (p - 1))

    @classmethod
    def one(cls, p: int) -> "CycInt":
        return cls.from_powers(p, {0: 1})

    @classmethod
    def from_powers(cls, p: int, powers: dict[int, int]) -> "CycInt":
        """Build sum coeff * zeta^power with arbitrary exponents (folded mod p)."""
        d = [0] * p
        for e, c in powers.items():
            d[e % p] += c
        top = d[p - 1]
        return cls(p=p, coeffs=tuple(d[i] - top for i in range(p - 1)))

    def __add__(self, other: "CycInt") -> "CycInt":
        _same_p(self, other)
        return CycInt(self.p, tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "CycInt") -> "CycInt":
        _same_p(self, other)
        return CycInt(self.p, tuple(x - y for x, y in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other):
        if isinstance(other, int):
            return CycInt(self.p, tuple(other * x for x in self.coeffs))
        return cyc_mul(self, other)

    __rmul__ = __mul__


def _same_p(x: CycInt, y: CycInt) -> None:
    if x.p != y.p:
        raise ModulusMismatch(f"mixed moduli {x.p} and {y.p}")


def cyc_mul(x: CycInt, y: CycInt) -> CycInt:
    """Exact product, schoolbook convolution folded by zeta^p = 1."""
    _same_p(x, y)
    p = x.p
    n = p - 1
    d = [0] * p
    xc, yc = x.coeffs, y.coeffs
    for i, xi in enumerate(xc):
        if not xi:
            continue
        for j, yj in enumerate(yc):
            if yj:
                e = i + j
                d[e if e < p else e - p] += xi * yj
    top = d[p - 1]
    return CycInt(p=p, coeffs=tuple(d[i] - top for i in range(n)))


def cyc_pow(x: CycInt, e: int) -> CycInt:
    if e < 0:
        raise OutOfRange("negative exponent")
    result = CycInt.one(x.p)
    base = x
    while e:
        if e & 1:
            result = cyc_mul(result, base)
        base = cyc_mul(base, base)
        e >>= 1
    return result


@dataclass(frozen=True)
class GroupRingElt:
    """Integer combination sum_a weights[a] * sigma_a over a in (Z/pZ)^x."""

    p: int
    weights: tuple[int, ...]  # index a-1 holds the weight of sigma_a

    @classmethod
    def from_map(cls, p: int, wmap: dict[int, int]) -> "GroupRingElt":
        w = [0] * (p - 1)
        for a, c in wmap.items():
            a %= p
            if a == 0:
                raise OutOfRange("sigma_0 does not exist")
            w[a - 1] += c
        return cls(p=p, weights=tuple(w))

    def __neg__(self) -> "GroupRingElt":
        return GroupRingElt(p=self.p, weights=tuple(-w for w in self.weights))


def gauss_element(p) -> GroupRingElt:
    """G = sum_j (j/p) sigma_j."""
    p = modmath.as_prime(p)
    return GroupRingElt.from_map(p, {j: modmath.legendre(j, p) for j in range(1, p)})


def twisted_gauss_element(n: int, p) -> GroupRingElt:
    """sum_j (j/p) sigma_(nj), the reindexing that equals -G for non-residues n."""
    p = modmath.as_prime(p)
    elt: dict[int, int] = {}
    for j in range(1, p):
        a = n * j % p
        elt[a] = elt.get(a, 0) + modmath.legendre(j, p)
    return GroupRingElt.from_map(p, elt)


def gauss_sum(p) -> CycInt:
    """tau = sum_k (k/p) zeta^k, exactly; tau^2 = p for p = 1 mod 4."""
    p = modmath.as_prime(p)
    if p % 4 != 1:
        raise WrongResidueClass(f"p = {p} is not 1 mod 4")
    return CycInt.from_powers(p, {k: modmath.legendre(k, p) for k in range(1, p)})


def apply_G(x: CycInt, g: GroupRingElt) -> CycInt:
    """Linear group-ring action: sigma_a sends zeta^j to zeta^(aj)."""
    if x.p != g.p:
        raise ModulusMismatch(f"mixed moduli {x.p} and {g.p}")
    p = x.p
    d = [0] * p
    for a_minus_1, w in enumerate(g.weights):
        if not w:
            continue
        a = a_minus_1 + 1
        for i, ci in enumerate(x.coeffs):
            if ci:
                d[a * i % p] += w * ci
    top = d[p - 1]
    return CycInt(p=p, coeffs=tuple(d[i] - top for i in range(p - 1)))


@dataclass(frozen=True)
class FpPoly:
    """Polynomial over F_p with trailing zeros trimmed."""

    p: int
    coeffs: tuple[int, ...]

    @classmethod
    def from_list(cls, p: int, raw) -> "FpPoly":
        c = [x % p for x in raw]
        while c and c[-1] == 0:
            c.pop()
        return cls(p=p, coeffs=tuple(c))

    def degree(self) -> int:
        return len(self.coeffs) - 1


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] += ai * bj
    return out


def _poly_pow(base: list[int], e: int) -> list[int]:
    result = [1]
    while e:
        if e & 1:
            result = _poly_mul(result, base)
        base = _poly_mul(base, base)
        e >>= 1
    return result


def _require_nonresidue(n: int, p: int) -> None:
    if not 2 <= n <= p - 1:
        raise OutOfRange(f"n = {n} outside [2, {p - 1}]")
    if modmath.legendre(n, p) != -1:
        raise NotNonResidue(f"{n} is a quadratic residue mod {p}")


def f_poly(n: int, p) -> FpPoly:
    """((1 + x + ... + x^(n-1))^p - sum_k x^(kp)) / p, reduced mod p.

    The power is taken exactly over Z; divisibility of every coefficient
    by p is itself a checked invariant (DivisibilityBug on failure).
    """
    p = modmath.as_prime(p)
    _require_nonresidue(n, p)
    num = _poly_pow([1] * n, p)
    for k in range(n):
        num[k * p] -= 1
    for i, c in enumerate(num):
        if c % p:
            raise DivisibilityBug(f"coefficient of x^{i} not divisible by {p}")
    return FpPoly.from_list(p, [c // p for c in num])


def lemma7_rhs(n: int, p) -> FpPoly:
    """The double-sum expansion that must match f_poly coefficientwise.

    -sum_{k=1}^{p-1} sum_{nk+pj < pn} (1/k) x^(nk+pj)
      + sum_{k=1}^{p-1} sum_{j=0}^{n-1} ((j+1)/k) x^(k+pj)   over F_p.
    """
    p = modmath.as_prime(p)
    _require_nonresidue(n, p)
    inv = modmath.inverse_table(p)
    coeffs = [0] * (n * p)
    for k in range(1, p):
        ik = inv[k]
        for e in range(n * k, n * p, p):
            coeffs[e] -= ik
        for j in range(n):
            coeffs[k + p * j] += (j + 1) * ik
    return FpPoly.from_list(p, coeffs)


def lemma6_check(n: int, j: int, p) -> bool:
    """(gamma - n)^(p-1) = 0 mod p in Z[zeta], gamma = sum_{k<n} zeta^(jk).

    This is the integral form of the fractional valuation bound
    v_p(gamma/n - 1) >= 1/(p-1); the power is computed exactly and every
    coefficient must be divisible by p.
    """
    p = modmath.as_prime(p)
    _require_nonresidue(n, p)
    if not 1 <= j <= p - 1:
        raise OutOfRange(f"j = {j} outside [1, {p - 1}]")
    gamma = CycInt.from_powers(p, {j * k % p: 1 for k in range(n)})
    delta = gamma - n * CycInt.one(p)
    power = cyc_pow(delta, p - 1)
    return all(c % p == 0 for c in power.coeffs)


def _unit_dps(p: int) -> int:
    base = int(os.environ.get("AACTK_DPS", "50"))
    return base if p <= 50 else max(base, 120)


def unit_identity_check(p, n: int, tol: float = 1e-8) -> bool:
    """Float check of the two unit product identities at zeta = exp(2*pi*i/p).

      eps^(2h) = prod_j (1 - zeta^j)^(-(j/p))
      eps^(4h) = prod_j ((zeta^(nj) - 1) / (n (zeta^j - 1)))^((j/p))

    with eps the fundamental unit and h the class number of Q(sqrt(p)).
    Returns True when both hold within tol; raises ToleranceExceeded
    otherwise.
    """
    p = modmath.as_prime(p)
    if p % 4 != 1:
        raise WrongResidueClass(f"p = {p} is not 1 mod 4")
    _require_nonresidue(n, p)
    unit = quadfield.fundamental_unit(p)
    h = quadfield.class_number(p)
    with mpmath.workdps(_unit_dps(p)):
        eps = (unit.t + unit.u * mpmath.sqrt(p)) / 2
        zeta = [mpmath.exp(2j * mpmath.pi * j / p) for j in range(p)]
        chi = [0] + [modmath.legendre(j, p) for j in range(1, p)]

        prod8 = mpmath.mpc(1)
        prod9 = mpmath.mpc(1)
        for j in range(1, p):
            prod8 *= (1 - zeta[j]) ** (-chi[j])
            alpha = (zeta[n * j % p] - 1) / (n * (zeta[j] - 1))
            prod9 *= alpha ** chi[j]
        err8 = abs(eps ** (2 * h) - prod8)
        err9 = abs(eps ** (4 * h) - prod9)
        if err8 >= tol or err9 >= tol:
            raise ToleranceExceeded(
                f"p={p}, n={n}: deviations {float(err8):.3g}, {float(err9):.3g} "
                f"exceed {tol:.3g}"
            )
    return True
