"""Strong difference families, relative difference families and 2-designs.

Each object tier has its own verifier, computed from raw differences or raw
pair counts and independent of however the object was constructed.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .algebra import (AbelianGroup, FiniteField, ProductGroup, Subgroup)


@dataclass
class Verdict:
    ok: bool
    observed: int | None = None
    first_violation: dict | None = None
    conditions: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        out = {"ok": self.ok}
        if self.observed is not None:
            out["observed"] = self.observed
        if self.first_violation is not None:
            out["first_violation"] = self.first_violation
        if self.conditions:
            out["conditions"] = self.conditions
        return out


def _block_indices(group: AbelianGroup, blocks) -> list[np.ndarray]:
    return [group.indices(b) for b in blocks]


def _tally(group: AbelianGroup, index_blocks: Sequence[np.ndarray]) -> np.ndarray:
    counts = np.zeros(group.order, dtype=np.int64)
    by_size: dict[int, list[np.ndarray]] = {}
    for b in index_blocks:
        by_size.setdefault(len(b), []).append(b)
    for k, bs in by_size.items():
        if k < 2:
            continue
        arr = np.stack(bs)
        diffs = group.vsub(arr[:, :, None], arr[:, None, :])
        off = ~np.eye(k, dtype=bool)
        counts += np.bincount(diffs[:, off].ravel(), minlength=group.order)
    return counts


def difference_multiset(blocks, group: AbelianGroup) -> Counter:
    """Tally of all ordered differences ``x - y`` between distinct positions.

    Blocks are multisets: two positions holding the same value contribute
    the difference 0.
    """
    if not blocks:
        raise ValueError("need at least one block")
    counts = _tally(group, _block_indices(group, blocks))
    return Counter({group.element(i): int(c) for i, c in enumerate(counts) if c})


@dataclass
class StrongDifferenceFamily:
    group: AbelianGroup
    blocks: list[tuple]
    k: int
    mu: int

    def __post_init__(self):
        self.blocks = [tuple(b) for b in self.blocks]
        for b in self.blocks:
            if len(b) != self.k:
                raise ValueError(f"base block {b} has {len(b)} entries, expected k={self.k}")
            for x in b:
                self.group.index(x)

    def index_blocks(self):
        return _block_indices(self.group, self.blocks)


@dataclass
class RelativeDifferenceFamily:
    group: AbelianGroup
    subgroup: Subgroup
    blocks: list[tuple]
    k: int
    lam: int

    def __post_init__(self):
        self.blocks = [tuple(b) for b in self.blocks]
        for b in self.blocks:
            if len(b) != self.k:
                raise ValueError(f"base block has {len(b)} elements, expected k={self.k}")
            if len({self.group.index(x) for x in b}) != self.k:
                raise ValueError(f"base block {b} repeats an element")

    @property
    def params(self) -> tuple[int, int, int, int]:
        return (self.group.order, self.subgroup.order, self.k, self.lam)

    def index_blocks(self):
        return _block_indices(self.group, self.blocks)


@dataclass
class Design:
    """A block design on points ``0..v-1``; ``blocks`` is a ``(b, k)`` int array."""

    v: int
    k: int
    lam: int
    blocks: np.ndarray

    def __post_init__(self):
        self.blocks = np.asarray(self.blocks, dtype=np.int64).reshape(-1, self.k)

    @property
    def params(self) -> tuple[int, int, int]:
        return (self.v, self.k, self.lam)

    @property
    def expected_blocks(self) -> int:
        return self.lam * self.v * (self.v - 1) // (self.k * (self.k - 1))


def sdf_necessary_conditions(order: int, k: int, mu: int) -> dict:
    return {"mu_even": mu % 2 == 0, "mu_g_divisible": (mu * order) % (k * (k - 1)) == 0}


def verify_sdf(sdf: StrongDifferenceFamily) -> Verdict:
    G = sdf.group
    counts = _tally(G, sdf.index_blocks())
    conditions = sdf_necessary_conditions(G.order, sdf.k, sdf.mu)
    bad = np.flatnonzero(counts != sdf.mu)
    observed = int(counts[0]) if np.all(counts == counts[0]) else None
    if len(bad) == 0:
        return Verdict(True, observed, None, conditions)
    i = int(bad[0])
    return Verdict(False, observed,
                   {"element": G.to_json(G.element(i)), "observed": int(counts[i]), "expected": sdf.mu},
                   conditions)


def df_tally(df: RelativeDifferenceFamily) -> np.ndarray:
    return _tally(df.group, df.index_blocks())


def verify_df(df: RelativeDifferenceFamily) -> Verdict:
    G = df.group
    counts = df_tally(df)
    in_n = df.subgroup.contains(np.arange(G.order))
    expected = np.where(in_n, 0, df.lam)
    bad = np.flatnonzero(counts != expected)
    r_expected = df.lam * (G.order - df.subgroup.order)
    conditions = {"block_count": len(df.blocks),
                  "block_count_ok": r_expected % (df.k * (df.k - 1)) == 0
                  and len(df.blocks) == r_expected // (df.k * (df.k - 1))}
    if len(bad) == 0:
        return Verdict(True, df.lam, None, conditions)
    i = int(bad[0])
    return Verdict(False, None,
                   {"element": G.to_json(G.element(i)), "observed": int(counts[i]),
                    "expected": int(expected[i])},
                   conditions)


def pair_counts(v: int, blocks: np.ndarray) -> np.ndarray:
    """Coverage count of every unordered pair, as a flat ``v*v`` array indexed ``a*v+b`` with a<b."""
    blocks = np.asarray(blocks, dtype=np.int64)
    k = blocks.shape[1]
    iu, ju = np.triu_indices(k, 1)
    a, b = blocks[:, iu], blocks[:, ju]
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    return np.bincount((lo * v + hi).ravel(), minlength=v * v)


def verify_design(design: Design) -> Verdict:
    v, k, lam = design.params
    B = design.blocks
    if B.size and (B.min() < 0 or B.max() >= v):
        return Verdict(False, None, {"reason": "point out of range"})
    srt = np.sort(B, axis=1)
    rep = np.flatnonzero((srt[:, 1:] == srt[:, :-1]).any(axis=1))
    if len(rep):
        return Verdict(False, None, {"reason": "repeated point in block", "block": int(rep[0])})
    counts = pair_counts(v, B).reshape(v, v)
    iu = np.triu_indices(v, 1)
    cov = counts[iu]
    bad = np.flatnonzero(cov != lam)
    conditions = {"blocks": len(B), "expected_blocks": design.expected_blocks}
    if len(bad) == 0:
        return Verdict(True, lam, None, conditions)
    j = int(bad[0])
    return Verdict(False, None,
                   {"pair": [int(iu[0][j]), int(iu[1][j])], "observed": int(cov[j]), "expected": lam},
                   conditions)


def develop_df(df: RelativeDifferenceFamily) -> np.ndarray:
    """All translates ``B + g`` (as group-index arrays), one row per translate."""
    G = df.group
    g = np.arange(G.order, dtype=np.int64)
    rows = [G.vadd(b[None, :], g[:, None]) for b in df.index_blocks()]
    return np.concatenate(rows) if rows else np.zeros((0, df.k), dtype=np.int64)


def coset_transversal(subgroup: Subgroup) -> np.ndarray:
    """Canonical coset representatives of ``G/N``: first uncovered element in index order."""
    G = subgroup.group
    members = subgroup.element_indices()
    covered = np.zeros(G.order, dtype=bool)
    reps = []
    for t in range(G.order):
        if covered[t]:
            continue
        reps.append(t)
        covered[G.vadd(members, t)] = True
    return np.array(reps, dtype=np.int64)


def compose_design(df: RelativeDifferenceFamily, ingredient: Design, variant: int = 1) -> Design:
    """Fill the cosets of N with copies of ``ingredient``.

    variant 1: ingredient on |N| points, result is a 2-(|G|, k, lambda) design.
    variant 2: ingredient on |N|+1 points, the extra point becomes a common
    point at infinity (index |G|), result is a 2-(|G|+1, k, lambda) design.
    """
    n = df.subgroup.order
    if ingredient.k != df.k or ingredient.lam != df.lam:
        raise ValueError(f"ingredient (k, lambda)=({ingredient.k}, {ingredient.lam}) "
                         f"does not match DF ({df.k}, {df.lam})")
    if variant == 1:
        if ingredient.v != n:
            raise ValueError(f"variant 1 needs a design on |N|={n} points, got v={ingredient.v}")
        v = df.group.order
    elif variant == 2:
        if ingredient.v != n + 1:
            raise ValueError(f"variant 2 needs a design on |N|+1={n + 1} points, got v={ingredient.v}")
        v = df.group.order + 1
    else:
        raise ValueError("variant must be 1 or 2")
    G = df.group
    members = df.subgroup.element_indices()
    parts = [develop_df(df)]
    for t in coset_transversal(df.subgroup):
        coset = G.vadd(members, t)
        if variant == 2:
            coset = np.append(coset, G.order)
        parts.append(coset[ingredient.blocks])
    return Design(v, df.k, df.lam, np.concatenate(parts))


def trivial_design(n: int, lam: int = 1) -> Design:
    return Design(n, n, lam, np.tile(np.arange(n), (lam, 1)))


def affine_plane(field: FiniteField) -> Design:
    """Lines of AG(2, q); point ``(x, y)`` is numbered ``x*q + y``."""
    q = field.q
    xs = np.arange(q, dtype=np.int64)
    blocks = [c * q + xs for c in range(q)]  # vertical lines x = c
    for m in range(q):
        mx = field.vmul(m, xs)
        for c in range(q):
            blocks.append(xs * q + field.vadd(mx, c))
    return Design(q * q, q, 1, np.stack(blocks))


def double(df: RelativeDifferenceFamily, times: int = 2) -> RelativeDifferenceFamily:
    """The family taken ``times`` times: a (G, N, k, times*lambda)-DF."""
    return RelativeDifferenceFamily(df.group, df.subgroup, list(df.blocks) * times, df.k, df.lam * times)


def product_df_group(left: AbelianGroup, right: AbelianGroup) -> tuple[ProductGroup, Subgroup]:
    G = ProductGroup(left, right)
    return G, Subgroup(G, "left")
