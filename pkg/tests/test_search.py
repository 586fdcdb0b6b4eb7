import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from diff_forge.algebra import field_of_order, is_prime
from diff_forge.paley import HALF_FIRST, HALF_SECOND, QUARTER, SchemeError, form_type, symbolic_dh, build_scheme
from diff_forge.search import (BUDGET, EXHAUSTED, FOUND, UNSATISFIABLE, CONDITION_TABLES, admissible_qs,
                               certify_witness, find_constrained_element, greedy_lift_search, make_problem,
                               parse_condition_table, problem_from_json, scan_range, search)

E13 = [37, 61, 73, 97, 109, 181, 313, 337, 349, 373, 409, 421, 541, 577, 829, 853, 1129, 1741, 2473]


# -- naive oracle: raw ordered block, every assignment, class counts of raw differences

def _prim_root(n):
    for g in range(2, n):
        if all(pow(g, (n - 1) // r, n) != 1 for r in {r for r in range(2, n) if (n - 1) % r == 0 and is_prime(r)}):
            return g
    return 1


def _raw_block(p, variant):
    """Positions f and phi templates (symbol, unit name) from the defining formulas."""
    delta = pow(_prim_root(p), 2, p)
    f, tpl = [], []
    if variant == QUARTER:
        f.append(0), tpl.append(None)
        for i in range(1, (p - 1) // 4 + 1):
            di = pow(delta, i, p)
            f += [di, di, -di % p, -di % p]
            tpl += [(i, "1"), (i, "-1"), (i, "xi"), (i, "-xi")]
    else:
        if variant == HALF_FIRST:
            f.append(0), tpl.append(None)
        else:
            f += [0, 0]
            tpl += [(0, "1"), (0, "-1")]
        for i in range(1, (p - 1) // 2 + 1):
            di = pow(delta, i, p)
            f += [di, di]
            tpl += [(i, "1"), (i, "-1")]
    return f, tpl


def naive_first_witness(p, variant, q, lam):
    """Lexicographically least assignment (or None) by enumerating all of (F_q^*)^n."""
    f, tpl = _raw_block(p, variant)
    g = _prim_root(q)
    log = np.full(q, -1, dtype=np.int64)
    x = 1
    for i in range(q - 1):
        log[x] = i
        x = x * g % q
    units = 4 if variant == QUARTER else 2
    mu = (p + 1) if variant == HALF_SECOND else (p - 1)
    d = mu // units // lam
    xi = pow(g, (q - 1) // 4, q) if variant == QUARTER else None
    unit = {"1": 1, "-1": q - 1, "xi": xi, "-xi": (q - xi) % q if xi else None}
    symbols = sorted({t[0] for t in tpl if t})
    pairs = {}
    for a in range(len(f)):
        for b in range(len(f)):
            if a != b:
                pairs.setdefault((f[a] - f[b]) % p, []).append((a, b))
    vals = np.arange(1, q, dtype=np.int64)
    rest = symbols[1:]
    for first in range(1, q):
        grids = np.meshgrid(*([vals] * len(rest)), indexing="ij") if rest else []
        N = grids[0].size if rest else 1
        Y = {symbols[0]: np.full(N, first, dtype=np.int64)}
        Y.update({s: gr.ravel() for s, gr in zip(rest, grids)})
        phi = [np.zeros(N, dtype=np.int64) if t is None else unit[t[1]] * Y[t[0]] % q for t in tpl]
        alive = np.arange(N)
        for h, plist in pairs.items():
            cls = np.stack([log[(phi[a][alive] - phi[b][alive]) % q] for a, b in plist])
            ok = (cls >= 0).all(axis=0)
            cls = cls % d
            for l in range(d):
                ok &= (cls == l).sum(axis=0) == units * lam
            alive = alive[ok]  # drop dead assignments early; order is preserved
        if len(alive):
            i = alive[0]
            return {s: int(Y[s][i]) for s in symbols}
    return None


ORACLE_CASES = (
    [(13, QUARTER, q, 1) for q in admissible_qs(13, QUARTER, 1, 13, 200)]
    + [(5, QUARTER, q, 1) for q in admissible_qs(5, QUARTER, 1, 5, 200)]
    + [(17, QUARTER, q, 2) for q in (17, 41)]
    + [(7, HALF_FIRST, q, 1) for q in admissible_qs(7, HALF_FIRST, 1, 7, 100)]
    + [(7, HALF_SECOND, q, 1) for q in (17, 41)]
    + [(7, HALF_SECOND, q, 2) for q in admissible_qs(7, HALF_SECOND, 2, 5, 60)]
    + [(11, HALF_FIRST, q, 5) for q in (11, 31)]
)


@pytest.mark.parametrize("p,variant,q,lam", ORACLE_CASES)
def test_search_agrees_with_naive_enumeration(p, variant, q, lam):
    naive = naive_first_witness(p, variant, q, lam)
    pr = make_problem(p, variant, q, lam=lam)
    res = search(pr)
    assert res.status == (FOUND if naive else EXHAUSTED)
    if naive:
        assert res.assignment == naive


@pytest.mark.parametrize("p,variant,q,lam", [c for c in ORACLE_CASES if c[2] <= 110])
def test_normalisation_preserves_outcome(p, variant, q, lam):
    a = search(make_problem(p, variant, q, lam=lam))
    b = search(make_problem(p, variant, q, lam=lam, normalize=False))
    assert a.status == b.status
    assert a.assignment == b.assignment


def test_spec_examples():
    r = search(make_problem(13, QUARTER, 13, lam=1))
    assert r.status == FOUND
    certify_witness(r.problem, r.assignment)
    for q in (37, 61):
        assert search(make_problem(13, QUARTER, q, lam=1)).status == EXHAUSTED
    r = search(make_problem(17, QUARTER, 17, lam=2))
    assert r.status == FOUND and r.problem.d == 2
    r = search(make_problem(5, QUARTER, 5, lam=1))
    assert r.status == FOUND and r.assignment == {1: 1} and r.problem.d == 1


def test_ninth_power_field_scheme():
    # p = 9: the symbol field is GF(9); search must still certify its witnesses
    for q in (17, 41, 73):
        r = search(make_problem(9, QUARTER, q, lam=1))
        assert r.status in (FOUND, EXHAUSTED)
        if r.found:
            certify_witness(r.problem, r.assignment)


def test_extension_target_field():
    for p, q in [(13, 25), (5, 81), (13, 169)]:
        r = search(make_problem(p, QUARTER, q, lam=1))
        assert r.status in (FOUND, EXHAUSTED)
        if r.found:
            certify_witness(r.problem, r.assignment)


def test_budget():
    r = search(make_problem(13, QUARTER, 577, lam=1), budget=50)
    assert r.status == BUDGET and r.witness() is None


def test_problem_validation():
    with pytest.raises(ValueError):
        make_problem(13, QUARTER, 41, lam=1)  # 41 - 1 not divisible by 12
    with pytest.raises(SchemeError):
        make_problem(13, QUARTER, 13, lam=2)
    with pytest.raises(ValueError):
        make_problem(13, QUARTER, 13)


def test_json_round_trip():
    pr = make_problem(13, QUARTER, 157, lam=1)
    back = problem_from_json(pr.to_json())
    assert back.to_json() == pr.to_json()
    out = search(back).to_json()
    assert set(out) >= {"status", "witness", "nodes", "seconds"}
    assert out["witness"] == {"y1": 1, "y2": out["witness"]["y2"], "y3": out["witness"]["y3"]}


# -- constrained elements

def test_constrained_examples():
    F13 = field_of_order(13)
    assert find_constrained_element(F13, 2, [(0, 0)]) == 1
    brute = [x for x in range(13) if x and F13.cyclo_index(3, x) == 0
             and x != 1 and F13.cyclo_index(3, F13.sub(x, 1)) == 1]
    assert find_constrained_element(F13, 3, [(0, 0), (1, 1)]) == brute[0]
    F5 = field_of_order(5)
    got = find_constrained_element(F5, 4, [(0, 0), (1, 1), (2, 2), (3, 3)])
    assert got is None  # only x = 1 is in C_0 and 1 - 1 = 0 is in no class
    with pytest.raises(ValueError):
        find_constrained_element(F13, 5, [])


def test_constrained_empty_and_exclude():
    F = field_of_order(31)
    assert find_constrained_element(F, 3, [], exclude={0}) == 1
    assert find_constrained_element(F, 3, [], exclude={0, 1, 2}) == 3


PRIMES = [q for q in range(3, 10_000) if is_prime(q)]


@settings(max_examples=120, deadline=None)
@given(st.sampled_from(PRIMES), st.data())
def test_constrained_against_power_residue_scan(q, data):
    divisors = [d for d in range(1, min(q, 13)) if (q - 1) % d == 0]
    d = data.draw(st.sampled_from(divisors))
    cons = data.draw(st.lists(st.tuples(st.integers(0, q - 1), st.integers(0, d - 1)), max_size=3))
    excl = data.draw(st.sets(st.integers(0, q - 1), max_size=3))
    F = field_of_order(q)
    g, e = F.omega, (q - 1) // d

    def in_class(y, beta):
        # y in omega^beta * C_0 iff (y / omega^beta)^((q-1)/d) == 1
        return y % q != 0 and pow(y * pow(g, -beta, q) % q, e, q) == 1

    want = next((x for x in range(q) if x not in excl and all(in_class(x - b, be) for b, be in cons)), None)
    assert find_constrained_element(F, d, cons, exclude=excl) == want


# -- greedy, condition tables

def _table_classes(text, d, column):
    rows = parse_condition_table(text)
    out = {}
    for j, entries in rows.items():
        for sign, other, times_xi, classes in entries:
            key = f"y{j}" if other is None else f"y{j}{sign}y{other}" + ("*xi" if times_xi else "")
            out[key] = classes[column] % d
    return out


@pytest.mark.parametrize("p,d", [(13, 3), (17, 4)])
def test_condition_tables_force_transversals(p, d):
    """Reading every D_h entry's class off the table gives a transversal in each column."""
    table = symbolic_dh(build_scheme(p, QUARTER))
    for column in range(d):
        cls = _table_classes(CONDITION_TABLES[(p, d)], d, column)
        for h in table.keys:
            got = []
            for form, text in zip(table[h], table.rendered(h)):
                kind = form_type(form)
                if kind == "double":
                    got.append(cls[f"y{form[0][0]}"])  # a common shift by class(2)
                elif kind == "one_minus_xi":
                    got.append((cls[f"y{form[0][0]}"] + column) % d)
                else:
                    got.append(cls[text])
            assert sorted(got) == list(range(d)), (p, column, h, got)


def test_greedy_large_q():
    q = next(q for q in range(323434, 324000) if is_prime(q) and q % 12 == 1)
    pr = make_problem(13, QUARTER, q, lam=1)
    r = greedy_lift_search(pr)  # certifies the witness, lift included
    assert r.status == FOUND


def test_greedy_incomplete_at_small_q():
    pr = make_problem(13, QUARTER, 13, lam=1)
    assert greedy_lift_search(pr).status == UNSATISFIABLE
    assert search(pr).status == FOUND


def test_greedy_empty_table():
    r = greedy_lift_search(make_problem(5, QUARTER, 29, lam=1), table={})
    assert r.status == FOUND and r.assignment == {1: 1}


def test_greedy_needs_table():
    with pytest.raises(ValueError):
        greedy_lift_search(make_problem(17, QUARTER, 17, lam=2))  # no printed table for d = 2


# -- scans

def test_scan_reproduces_exception_set():
    recs = scan_range(13, QUARTER, 1, 13, 625)
    assert [r["q"] for r in recs] == admissible_qs(13, QUARTER, 1, 13, 625)
    assert [r["q"] for r in recs if r["status"] == EXHAUSTED] == [q for q in E13 if q <= 625]
    assert all(r["status"] == FOUND for r in recs if r["q"] not in E13)


def test_scan_lambda_two_p17():
    recs = scan_range(17, QUARTER, 2, 17, 1000)
    assert [r["q"] for r in recs] == [q for q in range(17, 1001) if is_prime(q) and q % 8 == 1]
    assert {r["status"] for r in recs} == {FOUND}


def test_scan_lambda_one_p17_matches_printed_found_set():
    recs = scan_range(17, QUARTER, 1, 17, 1000)
    assert [r["q"] for r in recs if r["status"] == FOUND] == [17, 881]


def test_scan_empty_and_parallel():
    assert scan_range(13, QUARTER, 1, 14, 30) == []
    serial = scan_range(13, QUARTER, 1, 13, 200)
    par = scan_range(13, QUARTER, 1, 13, 200, jobs=2)
    strip = lambda rs: [{k: v for k, v in r.items() if k != "seconds"} for r in rs]
    assert strip(serial) == strip(par)


def test_scan_to_2500():
    recs = scan_range(13, QUARTER, 1, 13, 2500, jobs=2)
    assert [r["q"] for r in recs if r["status"] == EXHAUSTED] == E13


S17 = [17, 881, 1297, 1601, 1873, 2017, 2129, 2657, 2753, 2801, 2897, 3089, 3121, 3217, 3313, 3361, 3617,
       3697, 3761, 3793, 3889, 4001, 4049, 4129, 4241, 4273, 4289, 4481, 4561, 4657, 4721, 4801, 4817, 4993,
       5009, 5233, 5281, 5297, 5393, 5441, 5521, 5569, 5857, 5953, 6113, 6257, 6337, 6449, 6529]


@pytest.mark.slow
def test_scan_p17_found_set_to_6672():
    # roughly 7 minutes on 4 cores
    recs = scan_range(17, QUARTER, 1, 17, 6672, jobs=4)
    assert [r["q"] for r in recs if r["status"] == FOUND] == S17


@pytest.mark.slow
def test_scan_p17_all_found_6673_to_9857():
    recs = scan_range(17, QUARTER, 1, 6673, 9857, jobs=4)
    assert len(recs) == 44 and {r["status"] for r in recs} == {FOUND}
