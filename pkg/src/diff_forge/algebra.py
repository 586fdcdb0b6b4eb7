"""Finite fields, cyclotomic classes and finite abelian groups.

Field elements are plain integers ("codes") in ``range(q)``.  For a prime
field the code is the residue itself; for ``GF(p^f)`` the code of
``c_0 + c_1 x + ... + c_{f-1} x^{f-1}`` is ``sum(c_i * p**i)``.  The
canonical element order used everywhere (searches, witnesses, enumeration)
is the integer order of codes.
"""
from __future__ import annotations

import functools
import itertools
import os
from typing import Iterable, Sequence

import numpy as np

DEFAULT_DLOG_THRESHOLD = 1 << 20


def dlog_threshold() -> int:
    """Field size up to which full discrete-log tables are built."""
    value = os.environ.get("DIFF_FORGE_DLOG_THRESHOLD")
    return int(value) if value else DEFAULT_DLOG_THRESHOLD


class FieldError(ValueError):
    pass


# ---------------------------------------------------------------- integers

_MR_BASES = (2, 3, 5, 7, 11, 13, 17)  # deterministic below 3.4e14


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for sp in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % sp == 0:
            return n == sp
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` by trial division."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, f)`` with ``q == p**f`` or None if q is not a prime power."""
    if q < 2:
        return None
    fs = prime_factors(q)
    if len(fs) != 1:
        return None
    p = fs[0]
    f = 0
    while q > 1:
        q //= p
        f += 1
    return p, f


def is_prime_power(q: int) -> bool:
    return prime_power(q) is not None


# ------------------------------------------------------------------ fields

def _poly_mulmod(a: list[int], b: list[int], mod: Sequence[int], p: int) -> list[int]:
    f = len(mod) - 1
    prod = [0] * (2 * f - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    for deg in range(len(prod) - 1, f - 1, -1):
        c = prod[deg]
        if c:
            for i in range(f + 1):
                prod[deg - f + i] = (prod[deg - f + i] - c * mod[i]) % p
    return prod[:f]


class FiniteField:
    """The field ``GF(p^f)`` with a fixed primitive element ``omega``.

    Construct through :func:`field_new`, which caches instances.
    """

    def __init__(self, p: int, f: int, modulus: Sequence[int] | None, threshold: int):
        self.p = p
        self.f = f
        self.q = p ** f
        self.modulus = tuple(modulus) if modulus is not None else None
        self._pows = np.array([p ** i for i in range(f)], dtype=np.int64)
        if f == 1:
            self.omega = _least_primitive_root(p)
        else:
            self.omega = p  # residue class of x
            if not self._x_is_primitive():
                raise FieldError(f"modulus {list(self.modulus)} is not primitive over F_{p}")
        self._exp = self._log = None
        if self.q <= threshold:
            self._build_tables()

    def __repr__(self):
        if self.f == 1:
            return f"GF({self.q})"
        return f"GF({self.p}^{self.f}, modulus={list(self.modulus)})"

    def __reduce__(self):
        return field_new, (self.p, self.f, self.modulus)

    @property
    def has_tables(self) -> bool:
        return self._log is not None

    # -- encoding
    def coeffs(self, a: int) -> list[int]:
        return [(a // self.p ** i) % self.p for i in range(self.f)]

    def from_coeffs(self, cs: Iterable[int]) -> int:
        cs = list(cs)
        if len(cs) > self.f:
            raise FieldError(f"too many coefficients for {self!r}")
        return sum((c % self.p) * self.p ** i for i, c in enumerate(cs))

    def encode(self, a: int):
        return int(a) if self.f == 1 else self.coeffs(a)

    def decode(self, obj) -> int:
        if isinstance(obj, (list, tuple)):
            return self.from_coeffs(obj)
        a = int(obj)
        if not 0 <= a < self.q:
            raise FieldError(f"element code {a} out of range for {self!r}")
        return a

    def descriptor(self) -> dict:
        d = {"p": self.p, "f": self.f}
        if self.modulus is not None:
            d["modulus"] = list(self.modulus)
        return d

    def elements(self) -> range:
        return range(self.q)

    # -- scalar arithmetic
    def add(self, a: int, b: int) -> int:
        if self.f == 1:
            return (a + b) % self.p
        p, out, pw = self.p, 0, 1
        for _ in range(self.f):
            out += ((a % p + b % p) % p) * pw
            a //= p
            b //= p
            pw *= p
        return out

    def neg(self, a: int) -> int:
        if self.f == 1:
            return -a % self.p
        p, out, pw = self.p, 0, 1
        for _ in range(self.f):
            out += (-(a % p) % p) * pw
            a //= p
            pw *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.f == 1:
            return a * b % self.p
        if self._log is not None:
            return int(self._exp[(self._log[a] + self._log[b]) % (self.q - 1)])
        return self.from_coeffs(_poly_mulmod(self.coeffs(a), self.coeffs(b), self.modulus, self.p))

    def pow(self, a: int, n: int) -> int:
        if a == 0:
            if n == 0:
                return 1
            if n < 0:
                raise ZeroDivisionError("0 has no inverse")
            return 0
        n %= self.q - 1
        if self.f == 1:
            return pow(a, n, self.p)
        if self._log is not None:
            return int(self._exp[self._log[a] * n % (self.q - 1)])
        result, base = 1, a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.pow(a, -1)

    def omega_pow(self, i: int) -> int:
        if self._exp is not None:
            return int(self._exp[i % (self.q - 1)])
        return self.pow(self.omega, i)

    def log(self, a: int) -> int:
        """Discrete logarithm to base omega (requires tables)."""
        if a == 0:
            raise FieldError("log of 0")
        if self._log is None:
            raise FieldError(f"no discrete-log table for {self!r} (q above threshold)")
        return int(self._log[a])

    # -- vectorised arithmetic on code arrays
    def vadd(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.f == 1:
            return (a + b) % self.p
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for pw in self._pows:
            out += ((a // pw + b // pw) % self.p) * pw
        return out

    def vneg(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.f == 1:
            return -a % self.p
        out = np.zeros(a.shape, dtype=np.int64)
        for pw in self._pows:
            out += (-(a // pw) % self.p) * pw
        return out

    def vsub(self, a, b):
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.f == 1:
            return a * b % self.p
        self._need_tables()
        la, lb = self._log[a], self._log[b]
        out = self._exp[(la + lb) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def vpow(self, a, n: int):
        """Elementwise ``a**n`` for ``n >= 1``."""
        a = np.asarray(a, dtype=np.int64)
        result = np.ones(a.shape, dtype=np.int64)
        base = a.copy()
        while n:
            if n & 1:
                result = self.vmul(result, base)
            base = self.vmul(base, base)
            n >>= 1
        return result

    def _need_tables(self):
        if self._log is None:
            raise FieldError(f"operation needs discrete-log tables for {self!r}")

    # -- cyclotomy
    def cyclo_index(self, e: int, x: int) -> int:
        """Class label ``i`` with ``x`` in ``C_i^{e,q}``."""
        if (self.q - 1) % e:
            raise FieldError(f"e={e} does not divide q-1={self.q - 1}")
        if x == 0:
            raise FieldError("0 lies in no cyclotomic class")
        if self._log is not None:
            return int(self._log[x]) % e
        return self.cyclo_index_power(e, x)

    def cyclo_index_power(self, e: int, x: int) -> int:
        """Power-residue route: match ``x^((q-1)/e)`` against the e-th roots of unity."""
        if (self.q - 1) % e:
            raise FieldError(f"e={e} does not divide q-1={self.q - 1}")
        if x == 0:
            raise FieldError("0 lies in no cyclotomic class")
        return self._root_lookup(e)[self.pow(x, (self.q - 1) // e)]

    @functools.lru_cache(maxsize=64)
    def _root_lookup(self, e: int) -> dict[int, int]:
        zeta = self.pow(self.omega, (self.q - 1) // e)
        out, cur = {}, 1
        for j in range(e):
            out[cur] = j
            cur = self.mul(cur, zeta)
        return out

    @functools.lru_cache(maxsize=64)
    def class_table(self, e: int) -> np.ndarray:
        """Array ``t`` of length q with ``t[x]`` the class of x (index e), ``t[0] == -1``."""
        if (self.q - 1) % e:
            raise FieldError(f"e={e} does not divide q-1={self.q - 1}")
        if self._log is not None:
            t = self._log % e
        else:
            if self.f != 1:
                self._need_tables()
            xs = np.arange(self.q, dtype=np.int64)
            powered = self.vpow(xs, (self.q - 1) // e)
            lookup = self._root_lookup(e)
            t = np.array([lookup.get(int(v), -1) for v in powered], dtype=np.int64)
        t = t.astype(np.int64)
        t[0] = -1
        t.setflags(write=False)
        return t

    # -- construction helpers
    def _x_is_primitive(self) -> bool:
        mod = self.modulus
        if mod[0] % self.p == 0:
            return False
        x = [0] * self.f
        x[1 % self.f] = 1
        if self.f == 1:
            return False

        def ppow(n):
            result, base = [1] + [0] * (self.f - 1), x
            while n:
                if n & 1:
                    result = _poly_mulmod(result, base, mod, self.p)
                base = _poly_mulmod(base, base, mod, self.p)
                n >>= 1
            return result

        one = [1] + [0] * (self.f - 1)
        n = self.q - 1
        if ppow(n) != one:
            return False
        return all(ppow(n // r) != one for r in prime_factors(n))

    def _build_tables(self):
        q = self.q
        n = q - 1
        exp = np.empty(n, dtype=np.int64)
        if self.f == 1:
            exp[0] = 1
            filled = 1
            while filled < n:
                step = min(filled, n - filled)
                mult = pow(self.omega, filled, q)
                exp[filled:filled + step] = exp[:step] * mult % q
                filled += step
        else:
            p, f = self.p, self.f
            top_pw = p ** (f - 1)
            # code of -c * (low part of modulus), i.e. the reduction of c*x^f
            reduce_code = [self.from_coeffs([-c * m for m in self.modulus[:f]]) for c in range(p)]
            cur = 1
            for i in range(n):
                exp[i] = cur
                top, rest = divmod(cur, top_pw)
                cur = self.add(rest * p, reduce_code[top])
        log = np.zeros(q, dtype=np.int64)
        log[exp] = np.arange(n, dtype=np.int64)
        exp.setflags(write=False)
        log.setflags(write=False)
        self._exp, self._log = exp, log


def _least_primitive_root(p: int) -> int:
    if p == 2:
        return 1
    fs = prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // r, p) != 1 for r in fs):
            return g
    raise FieldError(f"no primitive root mod {p}")


def _least_primitive_modulus(p: int, f: int, threshold: int) -> tuple[int, ...]:
    # constant term compared first: iterate tuples (c0, ..., c_{f-1}) lexicographically
    for low in itertools.product(range(p), repeat=f):
        if low[0] == 0:
            continue
        try:
            FiniteField(p, f, low + (1,), threshold=0)
        except FieldError:
            continue
        return low + (1,)
    raise FieldError(f"no primitive polynomial of degree {f} over F_{p}")


@functools.lru_cache(maxsize=256)
def _field_cached(p: int, f: int, modulus: tuple[int, ...] | None, threshold: int) -> FiniteField:
    if f > 1 and modulus is None:
        modulus = _least_primitive_modulus(p, f, threshold)
    return FiniteField(p, f, modulus, threshold)


def field_new(p: int, f: int = 1, modulus: Sequence[int] | None = None,
              threshold: int | None = None) -> FiniteField:
    """Build ``GF(p^f)``.

    ``modulus`` is a monic coefficient list, constant term first, of degree
    ``f``; it must be primitive.  Without it the lexicographically least
    primitive polynomial (constant term compared first) is used.  For f = 1
    omega is the least primitive root mod p.
    """
    if not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if f < 1:
        raise FieldError("extension degree must be >= 1")
    if modulus is not None:
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != f + 1 or modulus[-1] != 1:
            raise FieldError(f"modulus must be monic of degree {f}, constant term first")
        if f == 1:
            modulus = None  # prime fields ignore the modulus
    if threshold is None:
        threshold = dlog_threshold()
    return _field_cached(p, f, modulus, threshold)


def field_of_order(q: int, threshold: int | None = None) -> FiniteField:
    pf = prime_power(q)
    if pf is None:
        raise FieldError(f"{q} is not a prime power")
    return field_new(pf[0], pf[1], threshold=threshold)


def field_from_descriptor(desc: dict) -> FiniteField:
    return field_new(int(desc["p"]), int(desc.get("f", 1)), desc.get("modulus"))


def cyclo_index(field: FiniteField, e: int, x: int) -> int:
    return field.cyclo_index(e, x)


def representative_system(field: FiniteField, e: int, d: int) -> list[int]:
    """Coset representatives of ``C_0^e`` inside ``C_0^d``: ``omega^(d j)``, ``0 <= j < e/d``."""
    if (field.q - 1) % e or e % d:
        raise FieldError(f"need d | e | q-1, got d={d}, e={e}, q={field.q}")
    return [field.omega_pow(d * j) for j in range(e // d)]


def primitive_fourth_root(field: FiniteField) -> int:
    if (field.q - 1) % 4:
        raise FieldError(f"4 does not divide q-1 = {field.q - 1}")
    return field.omega_pow((field.q - 1) // 4)


# ------------------------------------------------------------------ groups

class AbelianGroup:
    """Finite abelian group with elements numbered ``0..order-1``.

    Subclasses provide the element encoding; the ``v*`` methods work on
    numpy arrays of element indices and are what the verifiers use.
    """

    kind = "abstract"
    order: int

    def index(self, a) -> int:
        raise NotImplementedError

    def element(self, i: int):
        raise NotImplementedError

    def vadd(self, i, j):
        raise NotImplementedError

    def vneg(self, i):
        raise NotImplementedError

    def vsub(self, i, j):
        return self.vadd(i, self.vneg(j))

    def add(self, a, b):
        return self.element(int(self.vadd(self.index(a), self.index(b))))

    def neg(self, a):
        return self.element(int(self.vneg(self.index(a))))

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    @property
    def zero(self):
        return self.element(0)

    def elements(self):
        return [self.element(i) for i in range(self.order)]

    def indices(self, elems) -> np.ndarray:
        return np.array([self.index(a) for a in elems], dtype=np.int64)

    def __eq__(self, other):
        return isinstance(other, AbelianGroup) and self.descriptor() == other.descriptor()

    def __hash__(self):
        return hash(repr(self.descriptor()))


class CyclicGroup(AbelianGroup):
    kind = "cyclic"

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("cyclic group order must be >= 1")
        self.n = self.order = n

    def __repr__(self):
        return f"Z_{self.n}"

    def index(self, a) -> int:
        a = int(a)
        return a % self.n

    def element(self, i):
        return int(i)

    def vadd(self, i, j):
        return (np.asarray(i, dtype=np.int64) + np.asarray(j, dtype=np.int64)) % self.n

    def vneg(self, i):
        return -np.asarray(i, dtype=np.int64) % self.n

    def descriptor(self):
        return {"kind": "cyclic", "n": self.n}

    def to_json(self, a):
        return int(a)

    def from_json(self, obj):
        return self.index(obj)


class FieldAdditiveGroup(AbelianGroup):
    kind = "field"

    def __init__(self, field: FiniteField):
        self.field = field
        self.order = field.q

    def __repr__(self):
        return f"({self.field!r}, +)"

    def index(self, a) -> int:
        a = int(a)
        if not 0 <= a < self.order:
            raise ValueError(f"{a} is not an element of {self.field!r}")
        return a

    def element(self, i):
        return int(i)

    def vadd(self, i, j):
        return self.field.vadd(i, j)

    def vneg(self, i):
        return self.field.vneg(i)

    def descriptor(self):
        return {"kind": "field", "field": self.field.descriptor()}

    def to_json(self, a):
        return self.field.encode(a)

    def from_json(self, obj):
        return self.field.decode(obj)


class ProductGroup(AbelianGroup):
    kind = "product"

    def __init__(self, left: AbelianGroup, right: AbelianGroup):
        self.left, self.right = left, right
        self.order = left.order * right.order

    def __repr__(self):
        return f"{self.left!r} x {self.right!r}"

    def index(self, a) -> int:
        x, y = a
        return self.left.index(x) * self.right.order + self.right.index(y)

    def element(self, i):
        x, y = divmod(int(i), self.right.order)
        return (self.left.element(x), self.right.element(y))

    def split(self, i):
        i = np.asarray(i, dtype=np.int64)
        return i // self.right.order, i % self.right.order

    def join(self, x, y):
        return np.asarray(x, dtype=np.int64) * self.right.order + np.asarray(y, dtype=np.int64)

    def vadd(self, i, j):
        (xi, yi), (xj, yj) = self.split(i), self.split(j)
        return self.join(self.left.vadd(xi, xj), self.right.vadd(yi, yj))

    def vneg(self, i):
        x, y = self.split(i)
        return self.join(self.left.vneg(x), self.right.vneg(y))

    def descriptor(self):
        return {"kind": "product", "left": self.left.descriptor(), "right": self.right.descriptor()}

    def to_json(self, a):
        return [self.left.to_json(a[0]), self.right.to_json(a[1])]

    def from_json(self, obj):
        return (self.left.element(self.left.from_json(obj[0])),
                self.right.element(self.right.from_json(obj[1])))


def make_cyclic(n: int) -> CyclicGroup:
    return CyclicGroup(n)


def make_field_additive(field: FiniteField) -> FieldAdditiveGroup:
    return FieldAdditiveGroup(field)


def make_product(left: AbelianGroup, right: AbelianGroup) -> ProductGroup:
    return ProductGroup(left, right)


def group_from_descriptor(desc: dict) -> AbelianGroup:
    kind = desc["kind"]
    if kind == "cyclic":
        return CyclicGroup(int(desc["n"]))
    if kind == "field":
        return FieldAdditiveGroup(field_from_descriptor(desc["field"]))
    if kind == "product":
        return ProductGroup(group_from_descriptor(desc["left"]), group_from_descriptor(desc["right"]))
    raise ValueError(f"unknown group kind {kind!r}")


class Subgroup:
    """Subgroup ``N`` of ``G`` given by a descriptor, with vectorised membership.

    kinds: ``trivial`` ({0}), ``left`` (``H x {0}`` inside a product ``H x K``),
    ``elements`` (explicit list of element indices).
    """

    def __init__(self, group: AbelianGroup, kind: str = "trivial", elements: Sequence[int] | None = None):
        self.group, self.kind = group, kind
        if kind == "trivial":
            self.order = 1
        elif kind == "left":
            if not isinstance(group, ProductGroup):
                raise ValueError("'left' subgroup needs a product group")
            self.order = group.left.order
        elif kind == "elements":
            self._members = np.unique(np.asarray(elements, dtype=np.int64))
            self.order = len(self._members)
            if self.order == 0 or 0 not in self._members:
                raise ValueError("subgroup must contain the identity")
        else:
            raise ValueError(f"unknown subgroup kind {kind!r}")

    def contains(self, idx) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        if self.kind == "trivial":
            return idx == 0
        if self.kind == "left":
            return idx % self.group.right.order == 0
        return np.isin(idx, self._members)

    def element_indices(self) -> np.ndarray:
        """Members in canonical (index) order."""
        if self.kind == "trivial":
            return np.zeros(1, dtype=np.int64)
        if self.kind == "left":
            return np.arange(self.order, dtype=np.int64) * self.group.right.order
        return self._members.copy()

    def descriptor(self) -> dict:
        if self.kind == "elements":
            return {"kind": "elements",
                    "elements": [self.group.to_json(self.group.element(i)) for i in self._members]}
        return {"kind": self.kind}

    @classmethod
    def from_descriptor(cls, group: AbelianGroup, desc: dict) -> "Subgroup":
        kind = desc.get("kind", "trivial")
        if kind == "elements":
            elems = [group.index(group.from_json(e)) for e in desc["elements"]]
            return cls(group, "elements", elems)
        return cls(group, kind)
