"""Small finite fields and projective-space primitives.

Field elements are stored as plain ints in ``range(q)``: the base-p digits of
the int, least significant first, are the coefficients of a polynomial over
GF(p) reduced modulo a fixed irreducible modulus.  All arithmetic is table
driven, which is comfortable because every supported field has order at most
sixteen.  :class:`FieldElement` wraps an int together with its field for
ergonomic use in tests and scripts; the geometry modules call the int-level
methods on :class:`GF` directly.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

__all__ = [
    "GF",
    "FieldElement",
    "DEFAULT_MODULI",
    "normalize_point",
    "pg_points",
    "pg_line",
    "dot",
]

MAX_ORDER = 16

# Modulus polynomials for the extension fields we support, written with the
# constant coefficient first.  (2, 2) maps to x^2 + x + 1 and so on.
DEFAULT_MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (3, 2): (1, 0, 1),
}


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, int(n**0.5) + 1):
        if n % d == 0:
            return False
    return True


def _poly_trim(poly: Sequence[int]) -> tuple[int, ...]:
    out = list(poly)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _poly_mod(poly: Sequence[int], modulus: Sequence[int], p: int) -> tuple[int, ...]:
    """Remainder of ``poly`` modulo ``modulus``, coefficients in GF(p)."""
    rem = [c % p for c in poly]
    deg_m = len(_poly_trim(modulus)) - 1
    lead_inv = pow(modulus[deg_m], p - 2, p) if p > 2 else 1
    while True:
        rem = list(_poly_trim(rem))
        if len(rem) - 1 < deg_m:
            break
        shift = len(rem) - 1 - deg_m
        factor = (rem[-1] * lead_inv) % p
        for i, c in enumerate(modulus[: deg_m + 1]):
            rem[shift + i] = (rem[shift + i] - factor * c) % p
    return tuple(rem)


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        for j, cb in enumerate(b):
            out[i + j] = (out[i + j] + ca * cb) % p
    return out


def _is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree up to deg/2."""
    mod = _poly_trim(modulus)
    deg = len(mod) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            trial = list(tail) + [1]
            if len(_poly_mod(mod, trial, p)) == 0:
                return False
    return True


class GF:
    """A finite field of order ``p ** k`` with ``p ** k <= 16``.

    Elements are the ints ``0 .. q-1``.  The digit expansion of an element in
    base ``p`` (least significant digit first) gives the coefficients of its
    polynomial representative.
    """

    def __init__(self, p: int, k: int = 1, modulus: Sequence[int] | None = None):
        if not _is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if k < 1:
            raise ValueError("extension degree must be positive")
        q = p**k
        if q > MAX_ORDER:
            raise ValueError(f"field order {q} exceeds the supported maximum {MAX_ORDER}")
        if k == 1:
            mod: tuple[int, ...] = (0, 1)
        else:
            if modulus is None:
                modulus = DEFAULT_MODULI.get((p, k))
                if modulus is None:
                    raise ValueError(f"no default modulus for GF({p}^{k}); pass one")
            mod = tuple(c % p for c in modulus)
            if len(_poly_trim(mod)) - 1 != k:
                raise ValueError(f"modulus degree must be {k}")
            if not _is_irreducible(mod, p):
                raise ValueError(f"modulus {mod} is reducible over GF({p})")
        self.p = p
        self.k = k
        self.q = q
        self.modulus = mod
        self._build_tables()

    @classmethod
    def of_order(cls, q: int, modulus: Sequence[int] | None = None) -> "GF":
        """Build the field with ``q`` elements, factoring ``q`` as a prime power."""
        if q < 2:
            raise ValueError(f"no field of order {q}")
        for p in range(2, q + 1):
            if not _is_prime(p):
                continue
            k = 0
            n = q
            while n % p == 0:
                n //= p
                k += 1
            if n == 1:
                return cls(p, k, modulus)
            if k > 0:
                break
        raise ValueError(f"{q} is not a prime power")

    def _build_tables(self) -> None:
        p, k, q = self.p, self.k, self.q
        digits = [self.coeffs(a) for a in range(q)]

        def pack(poly: Sequence[int]) -> int:
            val = 0
            for i, c in enumerate(poly):
                val += (c % p) * p**i
            return val

        self._add = [
            [pack([(x + y) % p for x, y in zip(digits[a], digits[b])]) for b in range(q)]
            for a in range(q)
        ]
        self._neg = [pack([(-x) % p for x in digits[a]]) for a in range(q)]
        self._mul = [
            [pack(_poly_mod(_poly_mul(digits[a], digits[b], p), self.modulus, p)) for b in range(q)]
            for a in range(q)
        ]
        self._inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if self._mul[a][b] == 1:
                    self._inv[a] = b
                    break
        if k % 2 == 0:
            e = p ** (k // 2)
            self._conj = [self._pow_int(a, e) for a in range(q)]
        else:
            self._conj = None

    def _pow_int(self, a: int, e: int) -> int:
        out = 1
        base = a
        while e:
            if e & 1:
                out = self._mul[out][base]
            base = self._mul[base][base]
            e >>= 1
        return out

    # -- int-level arithmetic ------------------------------------------------

    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def sub(self, a: int, b: int) -> int:
        return self._add[a][self._neg[b]]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self._inv[a]

    def div(self, a: int, b: int) -> int:
        return self._mul[a][self.inv(b)]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self._pow_int(self.inv(a), -e)
        return self._pow_int(a, e)

    def conj(self, a: int) -> int:
        """The involutory automorphism x -> x**sqrt(q); needs even degree."""
        if self._conj is None:
            raise ValueError(f"GF({self.q}) has no quadratic subfield")
        return self._conj[a]

    def coeffs(self, a: int) -> tuple[int, ...]:
        """Base-p digits of ``a``, least significant first, padded to length k."""
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return tuple(out)

    # -- element sugar -------------------------------------------------------

    def __call__(self, val: int) -> "FieldElement":
        return FieldElement(self, val % self.p if self.k == 1 else val % self.q)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def elements(self) -> list["FieldElement"]:
        return [FieldElement(self, a) for a in range(self.q)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GF):
            return NotImplemented
        return (self.p, self.k, self.modulus) == (other.p, other.k, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.k, self.modulus))

    def __repr__(self) -> str:
        if self.k == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.k})"


class FieldElement:
    """An element of a :class:`GF`, supporting the usual operators.

    Plain ints mix in through the prime subfield, so ``x + 1`` works in any
    characteristic.  Elements of distinct fields never mix.
    """

    __slots__ = ("field", "val")

    def __init__(self, field: GF, val: int):
        if not 0 <= val < field.q:
            raise ValueError(f"{val} is not an element of {field!r}")
        self.field = field
        self.val = val

    def _coerce(self, other: object) -> int | None:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("elements of different fields cannot mix")
            return other.val
        if isinstance(other, int):
            return other % self.field.p
        return None

    def __add__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return FieldElement(self.field, self.field.add(self.val, v))

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(self.val, v))

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(v, self.val))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.val))

    def __mul__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return FieldElement(self.field, self.field.mul(self.val, v))

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return FieldElement(self.field, self.field.div(self.val, v))

    def __rtruediv__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return FieldElement(self.field, self.field.div(v, self.val))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.val, e))

    def inv(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.val))

    def conj(self) -> "FieldElement":
        return FieldElement(self.field, self.field.conj(self.val))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FieldElement):
            return self.field == other.field and self.val == other.val
        if isinstance(other, int):
            return self.val == other % self.field.p if other >= 0 or self.field.k == 1 else False
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field, self.val))

    def __bool__(self) -> bool:
        return self.val != 0

    def __repr__(self) -> str:
        return f"{self.field!r}:{self.val}"


# -- projective space primitives ---------------------------------------------


def normalize_point(field: GF, vec: Iterable[int]) -> tuple[int, ...]:
    """Scale a nonzero coordinate vector so its first nonzero entry is 1."""
    v = tuple(vec)
    for c in v:
        if c != 0:
            if c == 1:
                return v
            s = field.inv(c)
            return tuple(field.mul(s, x) for x in v)
    raise ValueError("the zero vector is not a projective point")


def pg_points(field: GF, n: int) -> list[tuple[int, ...]]:
    """All points of PG(n, q) as normalized tuples, in ascending lex order."""
    if n < 0:
        raise ValueError("projective dimension must be nonnegative")
    points = []
    for pivot in range(n, -1, -1):
        head = (0,) * pivot + (1,)
        for tail in itertools.product(range(field.q), repeat=n - pivot):
            points.append(head + tail)
    return points


def pg_line(field: GF, a: tuple[int, ...], b: tuple[int, ...]) -> frozenset[tuple[int, ...]]:
    """The q+1 points of the projective line through two distinct points."""
    a = normalize_point(field, a)
    b = normalize_point(field, b)
    if a == b:
        raise ValueError("a line needs two distinct points")
    pts = {a}
    for t in range(field.q):
        pts.add(normalize_point(field, tuple(field.add(field.mul(t, x), y) for x, y in zip(a, b))))
    return frozenset(pts)


def dot(field: GF, u: Sequence[int], v: Sequence[int]) -> int:
    """Ordinary bilinear dot product of two coordinate vectors."""
    acc = 0
    for x, y in zip(u, v):
        acc = field.add(acc, field.mul(x, y))
    return acc
