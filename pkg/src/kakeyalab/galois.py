"""Exact arithmetic in GF(p^t) through full lookup tables.

Elements are plain integers in ``range(q)``.  The integer ``sum(c_i * p**i)``
encodes the polynomial ``sum(c_i * x**i)`` reduced modulo the field's
defining polynomial, so 0 and 1 are the additive and multiplicative
identities in every field.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Split ``q = p**t``; raise ValueError if q is not a prime power."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    t, r = 0, q
    while r % p == 0:
        r //= p
        t += 1
    if r != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, t


# polynomials over GF(p) are coefficient lists, lowest degree first

def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _poly_trim([c % p for c in a])
    inv_lead = pow(m[-1], -1, p)
    while len(a) >= len(m):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(m)
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        _poly_trim(a)
    return a


def _monic_polys(p: int, degree: int):
    """Monic polynomials of a fixed degree, ordered by their base-p integer code."""
    for low in itertools.product(range(p), repeat=degree):
        yield list(reversed(low)) + [1]


def is_irreducible(poly: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    deg = len(poly) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for divisor in _monic_polys(p, d):
            if not _poly_mod(list(poly), divisor, p):
                return False
    return True


def smallest_irreducible(p: int, t: int) -> list[int]:
    """Lexicographically smallest monic irreducible of degree t over GF(p).

    Candidates are compared by their base-p integer code, i.e. coefficient
    by coefficient from the top degree down.
    """
    for poly in _monic_polys(p, t):
        if is_irreducible(poly, p):
            return poly
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class FieldElement:
    """Convenience wrapper so interactive code can write ``a * b + c``.

    Library code works on raw integer indices and the table methods of
    :class:`Field`; this class exists for readability and for catching
    operands that come from different fields.
    """

    __slots__ = ("field", "index")

    def __init__(self, field: "Field", index: int):
        if not 0 <= index < field.q:
            raise ValueError(f"index {index} out of range for GF({field.q})")
        self.field = field
        self.index = int(index)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise TypeError(f"cannot combine elements of {self.field} and {other.field}")
            return other.index
        if isinstance(other, (int, np.integer)):
            return self.field.embed_int(int(other))
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.add(self.index, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.sub(self.index, b))

    def __rsub__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.sub(b, self.index))

    def __mul__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.mul(self.index, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.div(self.index, b))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.index))

    def __pow__(self, k: int):
        return FieldElement(self.field, self.field.pow(self.index, k))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.index))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.index == other.index
        if isinstance(other, (int, np.integer)):
            return self.index == self.field.embed_int(int(other))
        return NotImplemented

    def __hash__(self):
        return hash((self.field.q, self.index))

    def __int__(self):
        return self.index

    def __repr__(self):
        return f"GF({self.field.q})({self.index})"


class Field:
    """GF(p^t) with precomputed add/mul/neg/inv tables.

    Instances are immutable after construction and safe to share.
    Use :func:`make_field` to get a cached instance.
    """

    def __init__(self, p: int, t: int = 1):
        if not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
            raise ValueError(f"characteristic {p!r} is not prime")
        if t < 1:
            raise ValueError("extension degree must be at least 1")
        self.p = int(p)
        self.t = int(t)
        self.q = self.p ** self.t
        if self.q > 1 << 16:
            raise ValueError(f"GF({self.q}) is too large for full lookup tables")
        self.modulus = smallest_irreducible(self.p, self.t) if t > 1 else [0, 1]

        q, p = self.q, self.p
        digits = np.array([[(a // p**i) % p for i in range(self.t)] for a in range(q)], dtype=np.int64)
        weights = p ** np.arange(self.t, dtype=np.int64)
        add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
        neg = ((-digits) % p) @ weights

        mul = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(a, q):
                prod = np.convolve(digits[a], digits[b]).tolist()
                r = _poly_mod(prod, self.modulus, p) if self.t > 1 else [prod[0] % p]
                code = sum(c * p**i for i, c in enumerate(r))
                mul[a, b] = mul[b, a] = code

        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = int(np.flatnonzero(mul[a] == 1)[0])

        for arr in (add, neg, mul, inv):
            arr.setflags(write=False)
        self.add_table, self.neg_table, self.mul_table, self.inv_table = add, neg, mul, inv
        self._add = add.tolist()
        self._mul = mul.tolist()
        self._neg = neg.tolist()
        self._inv = inv.tolist()

    # identity is (p, t): the modulus is a deterministic function of them
    def __eq__(self, other):
        return isinstance(other, Field) and (self.p, self.t) == (other.p, other.t)

    def __hash__(self):
        return hash((self.p, self.t))

    def __repr__(self):
        return f"Field(p={self.p}, t={self.t})"

    def __call__(self, index: int) -> FieldElement:
        return FieldElement(self, index)

    @property
    def is_prime_field(self) -> bool:
        return self.t == 1

    def elements(self) -> list[int]:
        return list(range(self.q))

    def nonzero(self) -> list[int]:
        return list(range(1, self.q))

    def embed_int(self, n: int) -> int:
        """Image of the integer n under Z -> GF(q)."""
        return n % self.p

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
            raise ZeroDivisionError(f"0 has no inverse in GF({self.q})")
        return self._inv[a]

    def div(self, a: int, b: int) -> int:
        return self._mul[a][self.inv(b)]

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        result = 1
        while k:
            if k & 1:
                result = self._mul[result][a]
            a = self._mul[a][a]
            k >>= 1
        return result

    def prod(self, values) -> int:
        result = 1
        for v in values:
            result = self._mul[result][v]
        return result

    def total(self, values) -> int:
        result = 0
        for v in values:
            result = self._add[result][v]
        return result

    def order(self, a: int) -> int:
        """Multiplicative order of a nonzero element."""
        if a == 0:
            raise ZeroDivisionError("0 has no multiplicative order")
        k, x = 1, a
        while x != 1:
            x = self._mul[x][a]
            k += 1
        return k

    def primitive_element(self) -> int:
        return next(a for a in range(1, self.q) if self.order(a) == self.q - 1)

    def is_square(self, a: int) -> bool:
        return a == 0 or any(self._mul[x][x] == a for x in range(1, self.q))

    def to_csv(self, table: str = "mul") -> str:
        grid = {"add": self._add, "mul": self._mul}[table]
        header = ",".join(["op"] + [str(b) for b in range(self.q)])
        rows = [",".join([str(a)] + [str(v) for v in row]) for a, row in enumerate(grid)]
        return "\n".join([header] + rows) + "\n"


@lru_cache(maxsize=None)
def make_field(p: int, t: int = 1) -> Field:
    return Field(p, t)


def field_of_order(q: int) -> Field:
    p, t = prime_power(q)
    return make_field(p, t)


# small dense linear algebra over an arbitrary Field (used for frames and conics)

def rref(F: Field, rows: list[list[int]]) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [list(r) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        s = F.inv(m[r][c])
        m[r] = [F.mul(s, x) for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def nullspace(F: Field, rows: list[list[int]], ncols: int) -> list[list[int]]:
    """Basis of {x : rows @ x = 0}."""
    if not rows:
        return [[1 if j == i else 0 for j in range(ncols)] for i in range(ncols)]
    red, pivots = rref(F, rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for i, pc in enumerate(pivots):
            v[pc] = F.neg(red[i][f])
        basis.append(v)
    return basis


def mat_inverse(F: Field, a: list[list[int]]) -> list[list[int]]:
    n = len(a)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(a)]
    red, pivots = rref(F, aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in red[:n]]


def mat_vec(F: Field, a: list[list[int]], v) -> tuple[int, ...]:
    return tuple(F.total(F.mul(x, y) for x, y in zip(row, v)) for row in a)


def mat_mul(F: Field, a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    cols = list(zip(*b))
    return [[F.total(F.mul(x, y) for x, y in zip(row, col)) for col in cols] for row in a]


def determinant(F: Field, a: list[list[int]]) -> int:
    m = [list(r) for r in a]
    n = len(m)
    det = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = F.neg(det)
        det = F.mul(det, m[c][c])
        s = F.inv(m[c][c])
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = F.mul(m[i][c], s)
                m[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(m[i], m[c])]
    return det
