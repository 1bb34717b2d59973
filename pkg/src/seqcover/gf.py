"""Arithmetic in GF(p^m) for prime p and m >= 1.

Elements are dense coefficient vectors in the polynomial basis
``1, x, ..., x^(m-1)``.  Every :class:`FieldSpec` also carries an exp/log
table pair so that multiplication, inversion and discrete logarithms are
table lookups.

Two integer encodings are used throughout the package:

* the *integer code* ``sum(c_i * p**i)`` (polynomial basis read as base p);
* the *order code*: 0 for the zero element and ``k + 1`` for ``primitive**k``.

The order code is the total order used for point enumeration, so the
geometry layer works in it exclusively (see :func:`order_tables`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import product

import numpy as np
from sympy import factorint, isprime

MAX_FIELD_SIZE = 2**20


class FieldError(ValueError):
    """Invalid field parameters."""


class FieldMismatchError(ValueError):
    """Element does not belong to the given field."""


@dataclass(frozen=True)
class FieldElement:
    coeffs: tuple[int, ...]

    def __repr__(self) -> str:
        return f"FieldElement({list(self.coeffs)})"


@dataclass(frozen=True, eq=False)
class FieldSpec:
    """GF(p^m) defined by a monic primitive polynomial.

    ``modulus`` lists coefficients from the leading term down to the
    constant term, so ``(1, 1, 1)`` is ``x^2 + x + 1``.
    """

    p: int
    m: int
    modulus: tuple[int, ...]
    primitive: FieldElement
    _exp: np.ndarray = field(repr=False)
    _log: np.ndarray = field(repr=False)

    @property
    def q(self) -> int:
        return self.p**self.m

    def __eq__(self, other):
        if not isinstance(other, FieldSpec):
            return NotImplemented
        return (self.p, self.m, self.modulus) == (other.p, other.m, other.modulus)

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    def zero(self) -> FieldElement:
        return FieldElement((0,) * self.m)

    def one(self) -> FieldElement:
        return FieldElement((1,) + (0,) * (self.m - 1))

    def element(self, coeffs) -> FieldElement:
        return _check(FieldElement(tuple(int(c) for c in coeffs)), self)

    def elements(self) -> list[FieldElement]:
        """All elements, zero first, then ``primitive**k`` for increasing k."""
        return [self.from_order(k) for k in range(self.q)]

    # encodings

    def to_int(self, a: FieldElement) -> int:
        _check(a, self)
        return sum(c * self.p**i for i, c in enumerate(a.coeffs))

    def from_int(self, code: int) -> FieldElement:
        if not 0 <= code < self.q:
            raise FieldMismatchError(f"integer code {code} outside GF({self.q})")
        coeffs = []
        for _ in range(self.m):
            code, c = divmod(code, self.p)
            coeffs.append(c)
        return FieldElement(tuple(coeffs))

    def to_order(self, a: FieldElement) -> int:
        code = self.to_int(a)
        return 0 if code == 0 else int(self._log[code]) + 1

    def from_order(self, k: int) -> FieldElement:
        if not 0 <= k < self.q:
            raise FieldMismatchError(f"order code {k} outside GF({self.q})")
        return self.from_int(0 if k == 0 else int(self._exp[k - 1]))

    @cached_property
    def order_tables(self) -> "OrderTables":
        return _build_order_tables(self)


@dataclass(frozen=True)
class OrderTables:
    """Full operation tables over order codes, for vectorized kernels."""

    q: int
    add: np.ndarray
    mul: np.ndarray
    neg: np.ndarray
    inv: np.ndarray  # inv[0] is unused and set to 0


def _check(a: FieldElement, f: FieldSpec) -> FieldElement:
    if len(a.coeffs) != f.m or any(not 0 <= c < f.p for c in a.coeffs):
        raise FieldMismatchError(f"{a!r} is not an element of GF({f.p}^{f.m})")
    return a


# polynomial helpers over GF(p); lists are low degree first


def _polymulmod(a, b, mod_low, p):
    """Multiply two residues modulo the monic polynomial ``mod_low``."""
    m = len(mod_low) - 1
    prod_ = [0] * (2 * m - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod_[i + j] = (prod_[i + j] + ai * bj) % p
    for d in range(len(prod_) - 1, m - 1, -1):
        c = prod_[d]
        if c:
            for k in range(m + 1):
                prod_[d - m + k] = (prod_[d - m + k] - c * mod_low[k]) % p
    return prod_[:m]


def _polypowmod(a, e, mod_low, p):
    m = len(mod_low) - 1
    result = [1] + [0] * (m - 1)
    base = list(a)
    while e:
        if e & 1:
            result = _polymulmod(result, base, mod_low, p)
        base = _polymulmod(base, base, mod_low, p)
        e >>= 1
    return result


def _x_is_primitive(mod_low, p, m) -> bool:
    n = p**m - 1
    x = [0, 1] + [0] * (m - 2)
    one = [1] + [0] * (m - 1)
    if _polypowmod(x, n, mod_low, p) != one:
        return False
    return all(_polypowmod(x, n // ell, mod_low, p) != one for ell in factorint(n))


def primitive_root(p: int) -> int:
    """Least primitive root modulo the prime p."""
    if p == 2:
        return 1
    factors = list(factorint(p - 1))
    for g in range(2, p):
        if all(pow(g, (p - 1) // ell, p) != 1 for ell in factors):
            return g
    raise FieldError(f"no primitive root mod {p}")  # unreachable for primes


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, m) with q = p^m, or raise FieldError."""
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    f = factorint(q)
    if len(f) != 1:
        raise FieldError(f"{q} is not a prime power")
    ((p, m),) = f.items()
    return p, m


def is_prime_power(q: int) -> bool:
    try:
        prime_power(q)
    except FieldError:
        return False
    return True


@lru_cache(maxsize=None)
def gf_build(p: int, m: int = 1) -> FieldSpec:
    """Build GF(p^m) from the lexicographically least monic primitive polynomial.

    Candidates ``x^m + c_{m-1} x^{m-1} + ... + c_0`` are compared on
    ``(c_{m-1}, ..., c_0)``.  For m > 1 the primitive element is the class of
    x; for m = 1 it is the least primitive root and the modulus is ``x - g``.
    """
    if not isinstance(p, int) or not isprime(p):
        raise FieldError(f"characteristic {p!r} is not prime")
    if not isinstance(m, int) or m < 1:
        raise FieldError(f"extension degree {m!r} must be >= 1")
    q = p**m
    if q > MAX_FIELD_SIZE:
        raise FieldError(f"GF({p}^{m}) exceeds the size guard {MAX_FIELD_SIZE}")

    if m == 1:
        g = primitive_root(p)
        modulus = (1, (-g) % p)
        gen = [g]
    else:
        for tail in product(range(p), repeat=m):
            if tail[-1] == 0:
                continue
            mod_low = list(reversed(tail)) + [1]
            if _x_is_primitive(mod_low, p, m):
                modulus = (1,) + tail
                break
        else:  # pragma: no cover - primitive polynomials always exist
            raise FieldError(f"no primitive polynomial of degree {m} over GF({p})")
        gen = [0, 1] + [0] * (m - 2)

    mod_low = list(reversed(modulus))
    exp = np.empty(q - 1, dtype=np.int64)
    log = np.full(q, -1, dtype=np.int64)
    cur = [1] + [0] * (m - 1)
    weights = [p**i for i in range(m)]
    for k in range(q - 1):
        code = sum(c * w for c, w in zip(cur, weights))
        exp[k] = code
        log[code] = k
        cur = _polymulmod(cur, gen, mod_low, p)
    return FieldSpec(p, m, modulus, FieldElement(tuple(gen)), exp, log)


def gf_field(q: int) -> FieldSpec:
    """The canonical GF(q) for a prime power q."""
    return gf_build(*prime_power(q))


def gf_add(a: FieldElement, b: FieldElement, f: FieldSpec) -> FieldElement:
    _check(a, f)
    _check(b, f)
    return FieldElement(tuple((x + y) % f.p for x, y in zip(a.coeffs, b.coeffs)))


def gf_neg(a: FieldElement, f: FieldSpec) -> FieldElement:
    _check(a, f)
    return FieldElement(tuple((-x) % f.p for x in a.coeffs))


def gf_sub(a: FieldElement, b: FieldElement, f: FieldSpec) -> FieldElement:
    return gf_add(a, gf_neg(b, f), f)


def gf_mul(a: FieldElement, b: FieldElement, f: FieldSpec) -> FieldElement:
    ca, cb = f.to_int(a), f.to_int(b)
    if ca == 0 or cb == 0:
        return f.zero()
    k = (int(f._log[ca]) + int(f._log[cb])) % (f.q - 1)
    return f.from_int(int(f._exp[k]))


def gf_inv(a: FieldElement, f: FieldSpec) -> FieldElement:
    code = f.to_int(a)
    if code == 0:
        raise ZeroDivisionError("zero has no multiplicative inverse")
    return f.from_int(int(f._exp[(-int(f._log[code])) % (f.q - 1)]))


def gf_pow(a: FieldElement, e: int, f: FieldSpec) -> FieldElement:
    code = f.to_int(a)
    if code == 0:
        if e == 0:
            return f.one()
        if e < 0:
            raise ZeroDivisionError("negative power of zero")
        return f.zero()
    return f.from_int(int(f._exp[(int(f._log[code]) * e) % (f.q - 1)]))


def gf_discrete_log(a: FieldElement, f: FieldSpec) -> int:
    code = f.to_int(a)
    if code == 0:
        raise ZeroDivisionError("discrete log of zero is undefined")
    return int(f._log[code])


def _build_order_tables(f: FieldSpec) -> OrderTables:
    q = f.q
    if q > 4096:
        raise FieldError(f"operation tables for GF({q}) would need {q * q} entries")
    # integer code of each order code
    codes = np.concatenate([[0], f._exp]).astype(np.int64)
    # order code of each integer code
    order_of = np.empty(q, dtype=np.int64)
    order_of[codes] = np.arange(q)

    digits = np.array([[(c // f.p**i) % f.p for i in range(f.m)] for c in codes], dtype=np.int64)
    weights = f.p ** np.arange(f.m, dtype=np.int64)
    sum_digits = (digits[:, None, :] + digits[None, :, :]) % f.p
    add = order_of[(sum_digits * weights).sum(axis=2)]
    neg = order_of[((-digits) % f.p * weights).sum(axis=1)]

    k = np.arange(q)
    mul = np.zeros((q, q), dtype=np.int64)
    mul[1:, 1:] = (k[1:, None] - 1 + k[None, 1:] - 1) % (q - 1) + 1
    inv = np.zeros(q, dtype=np.int64)
    inv[1:] = (-(k[1:] - 1)) % (q - 1) + 1
    return OrderTables(q, add, mul, neg, inv)
