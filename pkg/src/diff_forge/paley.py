"""Paley difference multisets, the cyclotomic existence bound Q(d, m), and
symbolic difference tables for the Paley lifting schemes.

Symbolic expressions are linear forms in the symbols ``y`` (index 0) and
``y1, y2, ...`` with coefficients in ``Z[xi]``, ``xi**2 == -1``.  A form is
a tuple ``((symbol, (a, b)), ...)`` sorted by decreasing symbol index, where
``(a, b)`` stands for ``a + b*xi``.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from decimal import Decimal, localcontext

from .algebra import (FieldAdditiveGroup, FiniteField, field_of_order, is_prime_power)
from .families import StrongDifferenceFamily

QUARTER, HALF_FIRST, HALF_SECOND = "quarter", "half-first", "half-second"
VARIANTS = (QUARTER, HALF_FIRST, HALF_SECOND)


class SchemeError(ValueError):
    pass


# ----------------------------------------------------------- Paley multisets

def squares(field: FiniteField) -> list[int]:
    return sorted({field.mul(x, x) for x in range(1, field.q)})


def paley_sdf(p: int, type: str = "first") -> StrongDifferenceFamily:
    """First type: ``{0} + 2*squares`` (k=p, mu=p-1).  Second type: ``2*({0} + squares)``
    (k=p+1, mu=p+1, needs p = 3 mod 4)."""
    if p % 2 == 0 or not is_prime_power(p):
        raise ValueError(f"p={p} must be an odd prime power")
    F = field_of_order(p)
    sq = squares(F)
    if type == "first":
        block = [0] + [x for s in sq for x in (s, s)]
        return StrongDifferenceFamily(FieldAdditiveGroup(F), [block], p, p - 1)
    if type == "second":
        if p % 4 != 3:
            raise ValueError(f"second-type Paley multiset needs p = 3 mod 4, got {p}")
        block = [0, 0] + [x for s in sq for x in (s, s)]
        return StrongDifferenceFamily(FieldAdditiveGroup(F), [block], p + 1, p + 1)
    raise ValueError(f"unknown Paley type {type!r}")


# --------------------------------------------------------------- the bound

@dataclass(frozen=True)
class BoundQuery:
    d: int
    m: int
    U: int
    K: int  # d^(m-1) * m

    @property
    def Q(self) -> Decimal:
        with localcontext() as ctx:
            ctx.prec = 80
            root = Decimal(self.U * self.U + 4 * self.K).sqrt()
            return (Decimal(self.U) + root) ** 2 / 4

    @property
    def floor(self) -> int:
        # Q = (2U^2 + 4K + 2U*sqrt(U^2+4K)) / 4 and floor(2U*sqrt(D)) = isqrt(4U^2 D)
        s = math.isqrt(4 * self.U * self.U * (self.U * self.U + 4 * self.K))
        return (2 * self.U * self.U + 4 * self.K + s) // 4

    @property
    def threshold(self) -> int:
        """Least integer strictly greater than Q."""
        return self.floor + 1

    def decimal(self, digits: int = 6) -> str:
        return format(self.Q, f".{digits}g")

    def to_json(self) -> dict:
        rendered = self.decimal()
        value = Decimal(rendered)
        q = int(value) if value == value.to_integral_value() and value < 10 ** 15 else float(value)
        return {"d": self.d, "m": self.m, "U": self.U, "Q": q, "Q_decimal": rendered,
                "q_threshold": self.threshold}


def q_bound(d: int, m: int) -> BoundQuery:
    if d < 1 or m < 1:
        raise ValueError("d and m must be positive")
    U = sum(math.comb(m, h) * (d - 1) ** h * (h - 1) for h in range(1, m + 1))
    return BoundQuery(d, m, U, d ** (m - 1) * m)


# ------------------------------------------------------------ symbolic forms

QUARTER_UNITS = ((1, 0), (-1, 0), (0, 1), (0, -1))
HALF_UNITS = ((1, 0), (-1, 0))


def _gmul(u, v):
    return (u[0] * v[0] - u[1] * v[1], u[0] * v[1] + u[1] * v[0])


def _scale(form, u):
    return tuple((s, _gmul(u, c)) for s, c in form)


def _linear(terms) -> tuple:
    acc: dict[int, tuple[int, int]] = {}
    for s, (a, b) in terms:
        x, y = acc.get(s, (0, 0))
        acc[s] = (x + a, y + b)
    return tuple((s, c) for s, c in sorted(acc.items(), reverse=True) if c != (0, 0))


def _top_ok(c) -> bool:
    # one associate per orbit: angle of the leading coefficient in (-90, 0] degrees
    return c[0] > 0 and c[1] <= 0


def normal_form(form, units=QUARTER_UNITS):
    for u in units:
        g = _scale(form, u)
        if _top_ok(g[0][1]):
            return g
    raise SchemeError(f"no normal form for {form!r}")


def symbol_name(s: int) -> str:
    return "y" if s == 0 else f"y{s}"


def _render_term(s, c) -> str:
    name = symbol_name(s)
    fixed = {(1, 0): name, (-1, 0): "-" + name, (0, 1): name + "*xi", (0, -1): "-" + name + "*xi",
             (2, 0): "2*" + name, (1, -1): name + "*(1-xi)"}
    if c in fixed:
        return fixed[c]
    a, b = c
    return f"{name}*({a}{b:+d}*xi)" if b else f"{a}*{name}"


def render(form) -> str:
    out = ""
    for s, c in form:
        t = _render_term(s, c)
        out += t if (not out or t.startswith("-")) else "+" + t
    return out


def form_type(form) -> str:
    """Structural class of a normalised form.

    ``double`` 2*y_i; ``single`` y_i; ``one_minus_xi`` y_i*(1-xi);
    ``pm`` y_i +- y_j (i > j >= 1); ``pm_y`` y_i +- y; ``xi`` y_i +- y_j*xi.
    """
    if len(form) == 1:
        c = form[0][1]
        return {(2, 0): "double", (1, 0): "single", (1, -1): "one_minus_xi"}.get(c, "other")
    if len(form) == 2 and form[0][1] == (1, 0):
        (_, c2) = form[1]
        if c2 in ((1, 0), (-1, 0)):
            return "pm_y" if form[1][0] == 0 else "pm"
        if c2 in ((0, 1), (0, -1)):
            return "xi"
    return "other"


def form_symbols(form) -> list[int]:
    return [s for s, _ in form]


# ----------------------------------------------------------------- schemes

@dataclass(frozen=True)
class PaleyScheme:
    """Ordered Paley block ``f`` over F_p and its symbolic companion template.

    ``template[j]`` is ``None`` (the constant 0) or ``(symbol, coefficient)``.
    """

    p: int
    variant: str
    field: FiniteField
    delta: int
    f: tuple
    template: tuple
    symbols: tuple

    @property
    def type(self) -> str:
        return "second" if self.variant == HALF_SECOND else "first"

    @property
    def k(self) -> int:
        return len(self.f)

    @property
    def units(self):
        return QUARTER_UNITS if self.variant == QUARTER else HALF_UNITS

    @property
    def unit_count(self) -> int:
        return len(self.units)

    @property
    def mu(self) -> int:
        return self.p + 1 if self.variant == HALF_SECOND else self.p - 1

    @property
    def dh_size(self) -> int:
        return self.mu // self.unit_count

    def d_for(self, lam: int) -> int:
        if self.dh_size % lam:
            raise SchemeError(f"lambda={lam} must divide {self.dh_size}")
        return self.dh_size // lam

    def admissible(self, q: int, lam: int) -> bool:
        """Congruence condition on q for this scheme and lambda."""
        return q % 2 == 1 and (lam * (q - 1)) % self.mu == 0 and (q - 1) % self.unit_count == 0

    def template_strings(self) -> list[str]:
        return ["0" if t is None else render(((t[0], t[1]),)) for t in self.template]


def build_scheme(p: int, variant: str) -> PaleyScheme:
    if p % 2 == 0 or not is_prime_power(p):
        raise SchemeError(f"p={p} must be an odd prime power")
    if variant == QUARTER and p % 4 != 1:
        raise SchemeError(f"quarter scheme needs p = 1 mod 4, got {p}")
    if variant == HALF_SECOND and p % 4 != 3:
        raise SchemeError(f"half-second scheme needs p = 3 mod 4, got {p}")
    if variant not in VARIANTS:
        raise SchemeError(f"unknown variant {variant!r}")
    F = field_of_order(p)
    delta = F.mul(F.omega, F.omega)
    f, tpl = [], []
    if variant == QUARTER:
        m = (p - 1) // 4
        f.append(0)
        tpl.append(None)
        for i in range(1, m + 1):
            di = F.pow(delta, i)
            f += [di, di, F.neg(di), F.neg(di)]
            tpl += [(i, (1, 0)), (i, (-1, 0)), (i, (0, 1)), (i, (0, -1))]
        symbols = tuple(range(1, m + 1))
    else:
        m = (p - 1) // 2
        if variant == HALF_FIRST:
            f.append(0)
            tpl.append(None)
            symbols = tuple(range(1, m + 1))
        else:
            f += [0, 0]
            tpl += [(0, (1, 0)), (0, (-1, 0))]
            symbols = tuple(range(0, m + 1))
        for i in range(1, m + 1):
            di = F.pow(delta, i)
            f += [di, di]
            tpl += [(i, (1, 0)), (i, (-1, 0))]
    return PaleyScheme(p, variant, F, delta, tuple(f), tuple(tpl), symbols)


def _template_diff(ta, tb):
    terms = []
    if ta is not None:
        terms.append(ta)
    if tb is not None:
        terms.append((tb[0], (-tb[1][0], -tb[1][1])))
    return _linear(terms)


def positional_differences(scheme: PaleyScheme) -> dict[int, list]:
    """``T_h``: symbolic differences ``phi_a - phi_b`` over positions with ``f_a - f_b = h``."""
    F = scheme.field
    out: dict[int, list] = {h: [] for h in range(F.q)}
    for a, (fa, ta) in enumerate(zip(scheme.f, scheme.template)):
        for b, (fb, tb) in enumerate(zip(scheme.f, scheme.template)):
            if a != b:
                out[F.sub(fa, fb)].append(_template_diff(ta, tb))
    return out


@dataclass
class SymbolicDhTable:
    scheme: PaleyScheme
    full: dict  # every h in F_p -> sorted tuple of normal forms

    def key(self, h: int) -> int:
        return min(h, self.scheme.field.neg(h))

    @property
    def keys(self) -> list[int]:
        return sorted({self.key(h) for h in self.full})

    def __getitem__(self, h: int):
        return self.full[h]

    def rendered(self, h: int) -> list[str]:
        return [render(x) for x in self.full[h]]

    def to_json(self) -> dict:
        return {str(h): self.rendered(h) for h in self.keys}


def factor_units(forms, units) -> tuple:
    """Split a multiset of forms into unit orbits; return the normal forms (with multiplicity)."""
    groups: dict[tuple, Counter] = {}
    for x in forms:
        groups.setdefault(normal_form(x, units), Counter())[x] += 1
    out = []
    for n, members in groups.items():
        counts = {_scale(n, u): members.get(_scale(n, u), 0) for u in units}
        c = set(counts.values())
        if len(c) != 1 or sum(members.values()) != sum(counts.values()):
            raise SchemeError(f"differences are not a union of unit orbits at {render(n)}")
        out += [n] * c.pop()
    return tuple(sorted(out))


def symbolic_dh(scheme: PaleyScheme) -> SymbolicDhTable:
    T = positional_differences(scheme)
    full = {h: factor_units(forms, scheme.units) for h, forms in T.items()}
    F = scheme.field
    for h, dh in full.items():
        if dh != full[F.neg(h)]:
            raise SchemeError(f"D_h differs from D_-h at h={h}")
        if len(dh) != scheme.dh_size:
            raise SchemeError(f"|D_{h}| = {len(dh)}, expected {scheme.dh_size}")
    return SymbolicDhTable(scheme, full)


# --------------------------------------------------------------- evaluation

def coefficient_value(field: FiniteField, c, xi: int | None) -> int:
    a, b = c
    val = field.from_coeffs([a % field.p])
    if b:
        if xi is None:
            raise SchemeError("xi needed to evaluate a Gaussian coefficient")
        bb = field.from_coeffs([b % field.p])
        val = field.add(val, field.mul(bb, xi))
    return val


def evaluate_form(field: FiniteField, form, assignment, xi: int | None) -> int:
    total = 0
    for s, c in form:
        total = field.add(total, field.mul(coefficient_value(field, c, xi), assignment[s]))
    return total


def evaluate_dh(table: SymbolicDhTable, assignment, xi: int | None, field: FiniteField) -> dict[int, list[int]]:
    """Numeric D_h multisets (keyed like ``table.keys``) for a symbol assignment.

    ``assignment`` maps symbol index to a nonzero element of ``field``.
    """
    for s in table.scheme.symbols:
        if assignment[s] == 0:
            raise SchemeError(f"symbol {symbol_name(s)} assigned 0")
    if table.scheme.variant == QUARTER:
        if xi is None or field.mul(xi, xi) != field.neg(1):
            raise SchemeError("xi must be a primitive 4th root of unity")
    out = {}
    for h in table.keys:
        vals = [evaluate_form(field, x, assignment, xi) for x in table.full[h]]
        if 0 in vals:
            raise SchemeError(f"D_{h} has an entry evaluating to 0")
        out[h] = vals
    return out


def transversal_check(values, field: FiniteField, d: int, lam: int) -> bool:
    """True iff every class ``C_l^{d,q}`` holds exactly ``lam`` of the values."""
    values = list(values)
    if len(values) != d * lam or any(v == 0 for v in values):
        return False
    counts = Counter(field.cyclo_index(d, v) for v in values)
    return all(counts.get(l, 0) == lam for l in range(d))


def assemble_phi(scheme: PaleyScheme, assignment, xi: int | None, field: FiniteField) -> list[int]:
    """Evaluate the companion template to field elements."""
    out = []
    for t in scheme.template:
        out.append(0 if t is None else evaluate_form(field, (t,), assignment, xi))
    return out
