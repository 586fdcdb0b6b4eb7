"""Searching symbol assignments that turn every D_h of a Paley scheme into a
lambda-transversal, plus the constrained-element finder and range scans.

The constraint system is homogeneous: multiplying every symbol by the same
nonzero c multiplies every D_h entry by c and shifts all class labels by the
same amount.  Fixing the first symbol to 1 therefore loses no solutions, and
since 1 is the least nonzero element it also preserves the lexicographically
least witness.  ``normalize=True`` (the default) uses this.
"""
from __future__ import annotations

import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .algebra import (FieldAdditiveGroup, FiniteField, field_of_order,
                      field_from_descriptor, is_prime, prime_power, primitive_fourth_root)
from .families import verify_df
from .lifting import LiftInput, lift
from .paley import (QUARTER, PaleyScheme, SymbolicDhTable, assemble_phi, build_scheme,
                    coefficient_value, evaluate_dh, symbol_name, symbolic_dh, transversal_check)

FOUND, EXHAUSTED, BUDGET = "found", "exhausted", "budget-exceeded"
UNSATISFIABLE = "unsatisfiable"


@dataclass
class SearchProblem:
    scheme: PaleyScheme
    field: FiniteField
    d: int
    lam: int
    table: SymbolicDhTable
    xi: int | None
    normalize: bool = True

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def e(self) -> int:
        return (self.q - 1) // self.scheme.unit_count

    @property
    def order(self) -> tuple:
        return self.scheme.symbols

    def to_json(self) -> dict:
        return {"p": self.scheme.p, "variant": self.scheme.variant, "q": self.q,
                "field": self.field.descriptor(), "d": self.d, "lambda": self.lam}


def make_problem(p: int, variant: str, q: int | None = None, *, lam: int | None = None,
                 d: int | None = None, field: FiniteField | None = None,
                 normalize: bool = True) -> SearchProblem:
    scheme = build_scheme(p, variant)
    if field is None:
        field = field_of_order(q)
    q = field.q
    if lam is None and d is None:
        raise ValueError("give lambda or d")
    if lam is None:
        if scheme.dh_size % d:
            raise ValueError(f"d={d} must divide |D_h|={scheme.dh_size}")
        lam = scheme.dh_size // d
    if d is None:
        d = scheme.d_for(lam)
    if d * lam != scheme.dh_size:
        raise ValueError(f"d*lambda must equal |D_h|={scheme.dh_size}")
    if not scheme.admissible(q, lam) or (q - 1) % d:
        raise ValueError(f"q={q} is not admissible for p={p} {variant} with lambda={lam}")
    xi = primitive_fourth_root(field) if variant == QUARTER else None
    return SearchProblem(scheme, field, d, lam, symbolic_dh(scheme), xi, normalize)


def problem_from_json(obj: dict) -> SearchProblem:
    fld = field_from_descriptor(obj["field"]) if "field" in obj else field_of_order(int(obj["q"]))
    return make_problem(int(obj["p"]), obj.get("variant", QUARTER), field=fld,
                        lam=obj.get("lambda"), d=obj.get("d"))


@dataclass
class SearchResult:
    status: str
    assignment: dict | None = None  # symbol index -> field element
    nodes: int = 0
    seconds: float = 0.0
    problem: SearchProblem | None = field(default=None, repr=False)
    note: str = ""

    @property
    def found(self) -> bool:
        return self.status == FOUND

    def witness(self) -> dict | None:
        if self.assignment is None:
            return None
        F = self.problem.field
        return {symbol_name(s): F.encode(v) for s, v in sorted(self.assignment.items())}

    def to_json(self) -> dict:
        out = {"status": self.status, "witness": self.witness(), "nodes": self.nodes,
               "seconds": round(self.seconds, 6)}
        if self.problem is not None:
            out.update(q=self.problem.q, p=self.problem.scheme.p, variant=self.problem.scheme.variant,
                       d=self.problem.d, **{"lambda": self.problem.lam})
        if self.note:
            out["note"] = self.note
        return out


class _BudgetExceeded(Exception):
    pass


def _compile(problem: SearchProblem):
    F = problem.field
    pos = {s: i for i, s in enumerate(problem.order)}
    keys = problem.table.keys
    levels: list[list] = [[] for _ in problem.order]
    for slot, h in enumerate(keys):
        for form in problem.table.full[h]:
            terms = [(pos[s], coefficient_value(F, c, problem.xi)) for s, c in form]
            last = max(t[0] for t in terms)
            levels[last].append((slot, terms))
    return len(keys), levels


def search(problem: SearchProblem, budget: int | None = None, certify: bool = True) -> SearchResult:
    """Depth-first search over symbols in scheme order.

    After fixing symbol j, every D_h entry whose symbols are now all assigned
    is evaluated and added to per-class counters; a branch dies as soon as a
    class holds more than lambda entries or an entry is 0.  Candidates are
    tried in canonical order, so the first witness is lexicographically least.
    ``budget`` bounds the number of candidate values examined.
    """
    F, d, lam = problem.field, problem.d, problem.lam
    ctab = F.class_table(d)
    n_slots, levels = _compile(problem)
    nsym = len(problem.order)
    everything = np.arange(1, F.q, dtype=np.int64)
    counts = np.zeros((n_slots, d), dtype=np.int64)
    vals = [0] * nsym
    nodes = 0
    t0 = time.perf_counter()

    def descend(j: int) -> bool:
        nonlocal nodes
        if j == nsym:
            return True
        cand = np.ones(1, dtype=np.int64) if (j == 0 and problem.normalize) else everything
        nodes += len(cand)
        if budget is not None and nodes > budget:
            raise _BudgetExceeded
        entries = levels[j]
        ok = np.ones(len(cand), dtype=bool)
        classes = []
        for slot, terms in entries:
            const, coef = 0, 0
            for pi, cv in terms:
                if pi < j:
                    const = F.add(const, F.mul(cv, vals[pi]))
                else:
                    coef = F.add(coef, cv)
            cls = ctab[F.vadd(const, F.vmul(coef, cand))]
            ok &= cls >= 0
            classes.append(cls)
        by_slot: dict[int, list[int]] = {}
        for n, (slot, _) in enumerate(entries):
            by_slot.setdefault(slot, []).append(n)
        for slot, members in by_slot.items():
            for l in range(d):
                room = lam - counts[slot, l]
                hit = sum((classes[n] == l).astype(np.int64) for n in members)
                ok &= hit <= room
        for i in np.flatnonzero(ok):
            vals[j] = int(cand[i])
            for n, (slot, _) in enumerate(entries):
                counts[slot, classes[n][i]] += 1
            if descend(j + 1):
                return True
            for n, (slot, _) in enumerate(entries):
                counts[slot, classes[n][i]] -= 1
        return False

    try:
        hit = descend(0)
    except _BudgetExceeded:
        return SearchResult(BUDGET, None, nodes, time.perf_counter() - t0, problem)
    elapsed = time.perf_counter() - t0
    if not hit:
        return SearchResult(EXHAUSTED, None, nodes, elapsed, problem)
    assignment = {s: vals[i] for i, s in enumerate(problem.order)}
    result = SearchResult(FOUND, assignment, nodes, elapsed, problem)
    if certify:
        certify_witness(problem, assignment)
    return result


def lift_input_for(problem: SearchProblem, assignment: dict) -> LiftInput:
    s = problem.scheme
    phi = assemble_phi(s, assignment, problem.xi, problem.field)
    return LiftInput(FieldAdditiveGroup(s.field), problem.field, problem.e, problem.d, problem.lam,
                     [s.f], [phi])


def certify_witness(problem: SearchProblem, assignment: dict):
    """Both oracles: transversality of every evaluated D_h, then verify_df on the lift."""
    evaluated = evaluate_dh(problem.table, assignment, problem.xi, problem.field)
    for h, vals in evaluated.items():
        if not transversal_check(vals, problem.field, problem.d, problem.lam):
            raise AssertionError(f"witness fails transversality at h={h}")
    df = lift(lift_input_for(problem, assignment))
    verdict = verify_df(df)
    if not verdict.ok:
        raise AssertionError(f"lifted witness is not a DF: {verdict.first_violation}")
    return df


# ------------------------------------------------------ constrained elements

def find_constrained_element(field: FiniteField, d: int, constraints: Sequence[tuple[int, int]],
                             exclude=()) -> int | None:
    """Least x with ``x - b`` in ``C_beta^{d,q}`` for every ``(b, beta)``, x not excluded."""
    if (field.q - 1) % d:
        raise ValueError(f"d={d} does not divide q-1={field.q - 1}")
    ctab = field.class_table(d)
    xs = np.arange(field.q, dtype=np.int64)
    mask = np.ones(field.q, dtype=bool)
    for b, beta in constraints:
        mask &= ctab[field.vsub(xs, b)] == beta % d
    for x in exclude:
        mask[x] = False
    hits = np.flatnonzero(mask)
    return int(hits[0]) if len(hits) else None


# Cyclotomic condition tables: rows (expression, class required for each class
# of 1 - xi).  Tables are a sufficient greedy strategy, not a characterisation.
CONDITION_TABLES = {
    (13, 3): """
        y1 0 0 0 | y2 1 1 1 | y2-y1 0 0 0 | y2+y1 1 1 1 | y2-y1*xi 0 0 1 | y2+y1*xi 2 1 2
        y3 2 2 2 | y3-y1 1 0 0 | y3+y1 2 2 1 | y3-y2 1 1 1 | y3+y2 2 2 2
        y3-y1*xi 0 0 0 | y3+y1*xi 2 2 2 | y3-y2*xi 0 1 0 | y3+y2*xi 1 2 2
    """,
    (17, 4): """
        y1 0 0 0 1 | y2 1 1 1 0 | y2-y1 0 0 2 1 | y2+y1 3 2 3 3 | y2-y1*xi 0 0 0 0
        y2+y1*xi 1 1 1 1 | y3 2 2 2 3 | y3-y1 0 0 0 0 | y3+y1 1 1 1 1 | y3-y2 0 1 0 0
        y3+y2 1 3 3 2 | y3-y1*xi 0 0 0 0 | y3+y1*xi 1 1 1 1 | y3-y2*xi 2 2 2 2
        y3+y2*xi 3 3 3 3 | y4 3 3 3 2 | y4-y1 2 2 2 2 | y4+y1 3 3 3 3 | y4-y2 0 0 0 0
        y4+y2 1 1 1 1 | y4-y3 1 0 0 1 | y4+y3 2 2 1 3 | y4-y1*xi 2 1 1 0 | y4+y1*xi 3 3 2 2
        y4-y2*xi 2 2 2 2 | y4+y2*xi 3 3 3 3 | y4-y3*xi 2 2 2 2 | y4+y3*xi 3 3 3 3
    """,
}

_EXPR = re.compile(r"^y(\d+)(?:([+-])y(\d+)(\*xi)?)?$")


def parse_condition_table(text: str) -> dict[int, list[tuple]]:
    """``symbol -> [(sign, other_symbol, times_xi, classes_by_column)]``."""
    rows: dict[int, list[tuple]] = {}
    for chunk in re.split(r"[|\n]", text):
        parts = chunk.split()
        if not parts:
            continue
        m = _EXPR.match(parts[0])
        if not m:
            raise ValueError(f"bad condition expression {parts[0]!r}")
        j = int(m.group(1))
        other = int(m.group(3)) if m.group(3) else None
        rows.setdefault(j, []).append((m.group(2), other, bool(m.group(4)), [int(c) for c in parts[1:]]))
    return rows


def greedy_lift_search(problem: SearchProblem, table: dict | None = None,
                       certify: bool = True) -> SearchResult:
    """Fix y1, y2, ... one at a time as the least element meeting the table's
    conditions for the current class of ``1 - xi``.  Incomplete by design."""
    t0 = time.perf_counter()
    F, d = problem.field, problem.d
    if table is None:
        text = CONDITION_TABLES.get((problem.scheme.p, d))
        if text is None or problem.lam != 1:
            raise ValueError(f"no condition table for p={problem.scheme.p}, d={d}, lambda={problem.lam}")
        table = parse_condition_table(text)
    xi = problem.xi
    column = F.cyclo_index(d, F.sub(1, xi)) if xi is not None else 0
    vals: dict[int, int] = {}
    nodes = 0
    for s in problem.order:
        constraints = []
        for sign, other, times_xi, classes in table.get(s, []):
            if other is None:
                b = 0
            else:
                y = vals[other]
                if times_xi:
                    y = F.mul(y, xi)
                # y_s - c  ->  b = c ;  y_s + c  ->  b = -c
                b = y if sign == "-" else F.neg(y)
            constraints.append((b, classes[column]))
        nodes += F.q
        x = find_constrained_element(F, d, constraints, exclude=(0,))
        if x is None:
            return SearchResult(UNSATISFIABLE, None, nodes, time.perf_counter() - t0, problem,
                                note=f"no element for {symbol_name(s)}")
        vals[s] = x
    result = SearchResult(FOUND, vals, nodes, time.perf_counter() - t0, problem)
    try:
        evaluated = evaluate_dh(problem.table, vals, xi, F)
        good = all(transversal_check(v, F, d, problem.lam) for v in evaluated.values())
    except ValueError:
        good = False
    if not good:
        return SearchResult(UNSATISFIABLE, None, nodes, time.perf_counter() - t0, problem,
                            note="table choice does not give transversals")
    if certify:
        certify_witness(problem, vals)
    return result


# -------------------------------------------------------------------- scans

def admissible_qs(p: int, variant: str, lam: int, q_from: int, q_to: int,
                  prime_powers: bool = False) -> list[int]:
    scheme = build_scheme(p, variant)
    d = scheme.d_for(lam)
    out = []
    for q in range(max(q_from, 3), q_to + 1):
        if not (is_prime(q) or (prime_powers and prime_power(q) is not None)):
            continue
        if scheme.admissible(q, lam) and (q - 1) % d == 0:
            out.append(q)
    return out


def _scan_one(args):
    p, variant, q, lam, budget = args
    problem = make_problem(p, variant, q, lam=lam)
    return search(problem, budget=budget).to_json()


def scan_range(p: int, variant: str, lam: int, q_from: int, q_to: int,
               budget: int | None = None, prime_powers: bool = False, jobs: int = 1) -> list[dict]:
    """One search record per admissible q in ``[q_from, q_to]``, in increasing q."""
    qs = admissible_qs(p, variant, lam, q_from, q_to, prime_powers)
    work = [(p, variant, q, lam, budget) for q in qs]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(_scan_one, work))
    return [_scan_one(w) for w in work]
