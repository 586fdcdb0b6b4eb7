"""Lifting an ordered SDF over G with companion field sequences to a relative
difference family over ``G x F_q`` relative to ``G x {0}``, and the explicit
constructions shipped as catalog data.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .algebra import (AbelianGroup, CyclicGroup, FieldAdditiveGroup, FiniteField, ProductGroup,
                      Subgroup, field_new, representative_system)
from .families import RelativeDifferenceFamily, StrongDifferenceFamily
from .paley import transversal_check


class LiftError(ValueError):
    pass


@dataclass
class LiftInput:
    """Ordered SDF blocks ``F_i`` paired positionally with field sequences ``Phi_i``."""

    group: AbelianGroup
    field: FiniteField
    e: int
    d: int
    lam: int
    F_blocks: list[tuple]
    Phi_blocks: list[tuple]

    def __post_init__(self):
        q = self.field.q
        if (q - 1) % self.e or self.e % self.d:
            raise LiftError(f"need d | e | q-1 (d={self.d}, e={self.e}, q={q})")
        if len(self.F_blocks) != len(self.Phi_blocks):
            raise LiftError("F and Phi block counts differ")
        for fb, pb in zip(self.F_blocks, self.Phi_blocks):
            if len(fb) != len(pb):
                raise LiftError("F_i and Phi_i lengths differ")
        self.F_blocks = [tuple(b) for b in self.F_blocks]
        self.Phi_blocks = [tuple(int(x) for x in b) for b in self.Phi_blocks]

    @property
    def k(self) -> int:
        return len(self.F_blocks[0])

    @property
    def mu(self) -> int:
        """The SDF index the lift needs: ``lambda * d * (q-1) / e``."""
        return self.lam * self.d * (self.field.q - 1) // self.e

    def sdf(self) -> StrongDifferenceFamily:
        return StrongDifferenceFamily(self.group, self.F_blocks, self.k, self.mu)


@dataclass
class DhFactorization:
    T: dict[int, list[int]]  # group index -> positional field differences
    D: dict[int, list[int]]  # group index -> orbit representatives
    orbit_size: int


def positional_T(inp: LiftInput) -> dict[int, list[int]]:
    G, F = inp.group, inp.field
    T: dict[int, list[int]] = {h: [] for h in range(G.order)}
    for fb, pb in zip(inp.F_blocks, inp.Phi_blocks):
        fi = G.indices(fb)
        ph = np.array(pb, dtype=np.int64)
        hd = G.vsub(fi[:, None], fi[None, :])
        vd = F.vsub(ph[:, None], ph[None, :])
        off = ~np.eye(len(fi), dtype=bool)
        for h, v in zip(hd[off].tolist(), vd[off].tolist()):
            T[h].append(v)
    return T


def compute_dh(inp: LiftInput) -> DhFactorization:
    """Factor each ``T_h`` as ``C_0^{e,q} * D_h``.

    Orbits of ``C_0^e`` are identified by ``log(x) mod e``; each orbit must
    occur with uniform multiplicity.  ``D_h`` holds the least element of each
    orbit, repeated by multiplicity.
    """
    F = inp.field
    e = inp.e
    size = (F.q - 1) // e
    T = positional_T(inp)
    D = {}
    for h, vals in T.items():
        if not vals:
            D[h] = []
            continue
        if 0 in vals:
            raise LiftError(f"zero field difference at h={inp.group.to_json(inp.group.element(h))}")
        by_orbit: dict[int, Counter] = {}
        for v in vals:
            by_orbit.setdefault(F.cyclo_index(e, v), Counter())[v] += 1
        reps = []
        for members in by_orbit.values():
            mult = set(members.values())
            if len(members) != size or len(mult) != 1:
                raise LiftError(f"T_h at h={inp.group.to_json(inp.group.element(h))} "
                                f"is not a union of C_0^{{{e}}} orbits")
            reps += [min(members)] * mult.pop()
        D[h] = sorted(reps)
    return DhFactorization(T, D, size)


def check_transversals(inp: LiftInput, fac: DhFactorization) -> None:
    F = inp.field
    for h, dh in fac.D.items():
        if not transversal_check(dh, F, inp.d, inp.lam):
            counts = Counter(F.cyclo_index(inp.d, v) for v in dh if v)
            raise LiftError(f"D_h at h={inp.group.to_json(inp.group.element(h))} is not a "
                            f"{inp.lam}-transversal of index {inp.d}: class counts {dict(counts)}")


def lift(inp: LiftInput, check: bool = True) -> RelativeDifferenceFamily:
    """``[B_i * (1, s) : i, s in S]`` with ``S`` the canonical representative system."""
    if check:
        check_transversals(inp, compute_dh(inp))
    G, F = inp.group, inp.field
    P = ProductGroup(G, FieldAdditiveGroup(F))
    S = representative_system(F, inp.e, inp.d)
    blocks = []
    for fb, pb in zip(inp.F_blocks, inp.Phi_blocks):
        base = list(zip(fb, pb))
        if len({P.index(x) for x in base}) != len(base):
            raise LiftError(f"lifted block repeats an element: {base}")
        for s in S:
            blocks.append(tuple((x, F.mul(y, s)) for x, y in base))
    return RelativeDifferenceFamily(P, Subgroup(P, "left"), blocks, inp.k, inp.lam)


# ------------------------------------------------------------------ catalog

@dataclass
class CatalogEntry:
    name: str
    tag: str  # lemma tag used by the CLI
    lift_input: LiftInput
    params: tuple[int, int, int, int]  # (|G|, |N|, k, lambda) of the lifted DF
    notes: str = ""

    def lift(self) -> RelativeDifferenceFamily:
        return lift(self.lift_input)


@dataclass
class SdfEntry:
    name: str
    tag: str
    group: AbelianGroup
    blocks: list
    k: int
    mu: int

    def sdf(self) -> StrongDifferenceFamily:
        return StrongDifferenceFamily(self.group, self.blocks, self.k, self.mu)


Z63 = [[0, 4, 15, 23, 37, 58, 58], [0, 1, 3, 7, 13, 25, 39], [0, 1, 3, 11, 18, 34, 47]]
Z27 = [[0, 3, 3, 8, 8, 17, 17, 23, 23], [0, 1, 2, 3, 19, 4, 5, 8, 12], [0, 1, 2, 3, 19, 6, 11, 13, 17]]
Z45 = [[0, 2, 2, 15, 15, 23, 23, 33, 33]] + [[0, 1, 4, 5, 6, 7, 13, 22, 33]] * 2 \
    + [[0, 2, 5, 11, 21, 25, 28, 36, 40]] * 2
Z63_8 = [[20, 20, -20, -20, 29, 29, -29, -29]] + [[0, 1, 3, 7, 19, 34, 42, 53]] * 4 \
    + [[0, 1, 4, 6, 26, 36, 43, 51]] * 4
Z81_9 = [[0, 4, 4, -4, -4, 37, 37, -37, -37]] + [[0, 1, 4, 6, 17, 18, 38, 63, 72]] * 4 \
    + [[0, 2, 7, 27, 30, 38, 53, 59, 69]] * 4


def _mod(blocks, n):
    return [[x % n for x in b] for b in blocks]


def sdf_catalog() -> list[SdfEntry]:
    return [
        SdfEntry("z63-k7", "2.2", CyclicGroup(63), _mod(Z63, 63), 7, 2),
        SdfEntry("z27-k9", "2.6", CyclicGroup(27), _mod(Z27, 27), 9, 8),
        SdfEntry("z45-k9", "2.10", CyclicGroup(45), _mod(Z45, 45), 9, 8),
        SdfEntry("z63-k8", "2.15-p63", CyclicGroup(63), _mod(Z63_8, 63), 8, 8),
        SdfEntry("z81-k9", "2.15-p81", CyclicGroup(81), _mod(Z81_9, 81), 9, 8),
    ]


def _derived(phis, F: FiniteField, rules):
    """Apply multiplier rules ``(source_index, multiplier)`` to build further Phi blocks."""
    return [tuple(F.mul(x, m) for x in phis[src]) for src, m in rules]


def _entry_63_11() -> CatalogEntry:
    F = field_new(11)
    phis = [(0, 3, 5, 6, 8, 1, 10), (0, 2, 4, 6, 1, 10, 8), (0, 4, 7, 9, 2, 3, 5)]
    inp = LiftInput(CyclicGroup(63), F, 10, 2, 1, _mod(Z63, 63), phis)
    return CatalogEntry("z63xf11", "2.3", inp, (693, 63, 7, 1))


def _entry_27(q: int) -> CatalogEntry:
    F = field_new(q)
    if q == 17:
        phis = [(0, 1, 16, 2, 15, 3, 14, 5, 12), (0, 1, 2, 7, 11, 10, 5, 14, 16),
                (0, 16, 15, 10, 6, 3, 2, 12, 13)]
    else:
        phis = [(0, 1, 28, 2, 27, 3, 26, 4, 25), (0, 1, 2, 4, 11, 15, 5, 13, 21),
                (0, 28, 27, 25, 18, 11, 19, 10, 22)]
    inp = LiftInput(CyclicGroup(27), F, q - 1, 2, 4, _mod(Z27, 27), phis)
    return CatalogEntry(f"z27xf{q}", f"2.7-q{q}", inp, (27 * q, 27, 9, 4))


def _entry_45(q: int) -> CatalogEntry:
    F = field_new(q)
    if q == 17:
        b1 = (0, 1, -1, 2, -2, 3, -3, 5, -5)
        b2 = (0, 1, 2, 3, 6, 9, 4, 11, 15)
        b4 = (0, 3, 8, 6, 12, 7, 9, 2, 13)
        e, d, lam = 8, 2, 2
    else:
        b1 = (0, 1, -1, 2, -2, 3, -3, 6, -6)
        b2 = (0, 1, 7, 21, 12, 15, 24, 4, 34)
        b4 = (0, 3, 31, 32, 15, 9, 40, 25, 35)
        e, d, lam = 20, 4, 1
    base = [tuple(x % q for x in b) for b in (b1, b2, b4)]
    minus = q - 1
    b3, b5 = _derived(base, F, [(1, minus), (2, minus)])
    phis = [base[0], base[1], b3, base[2], b5]
    inp = LiftInput(CyclicGroup(45), F, e, d, lam, _mod(Z45, 45), phis)
    return CatalogEntry(f"z45xf{q}", "2.11" if q == 17 else "2.12", inp, (45 * q, 45, 9, lam))


# Elements of GF(25) below are omega-exponents; None stands for 0.
_W63 = [[0, 12, 6, 18, 1, 13, 7, 19],
        [None, 0, 1, 2, 3, 4, 7, 10],
        [None, 1, 4, 20, 14, 12, 15, 17]]
_W81 = [[None, 0, 12, 6, 18, 1, 13, 7, 19],
        [None, 0, 1, 2, 3, 4, 5, 7, 8],
        [None, 0, 4, 17, 2, 18, 8, 10, 14]]


def gf25() -> FiniteField:
    return field_new(5, 2, [3, 2, 1])  # x^2 + 2x + 3


def _entry_25(n: int) -> CatalogEntry:
    F = gf25()
    table = _W63 if n == 63 else _W81
    base = [tuple(0 if t is None else F.omega_pow(t) for t in row) for row in table]
    minus, xi, mxi = F.omega_pow(12), F.omega_pow(6), F.omega_pow(18)
    phis = [base[0], base[1]] + _derived(base, F, [(1, minus), (1, xi), (1, mxi)]) \
        + [base[2]] + _derived(base, F, [(2, minus), (2, xi), (2, mxi)])
    blocks = _mod(Z63_8 if n == 63 else Z81_9, n)
    k = len(blocks[0])
    inp = LiftInput(CyclicGroup(n), F, 6, 2, 1, blocks, phis)
    return CatalogEntry(f"z{n}xf25", f"2.16-p{n}", inp, (25 * n, n, k, 1))


def catalog() -> list[CatalogEntry]:
    return [_entry_63_11(), _entry_27(17), _entry_27(29), _entry_45(17), _entry_45(41),
            _entry_25(63), _entry_25(81)]


def catalog_entry(key: str) -> CatalogEntry:
    """Look up by name (``z63xf11``) or lemma tag (``2.3``, ``lemma-2.3``)."""
    key = key.removeprefix("lemma-")
    matches = [c for c in catalog() if key in (c.name, c.tag) or c.tag.startswith(key + "-")]
    if not matches:
        raise KeyError(f"no catalog entry {key!r}")
    return matches[0]
