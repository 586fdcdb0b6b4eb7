"""Shared independent oracles.  Nothing here calls into the library's own
arithmetic, so tests comparing against these are genuine cross-checks."""
from __future__ import annotations

import pytest


def poly_mul(a, b, modulus, p):
    """Schoolbook product of coefficient lists (constant first) reduced mod a monic modulus."""
    f = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    for deg in range(len(prod) - 1, f - 1, -1):
        c = prod[deg]
        if c:
            for t in range(f + 1):
                prod[deg - f + t] = (prod[deg - f + t] - c * modulus[t]) % p
    out = (prod + [0] * f)[:f]
    return out


def to_code(cs, p):
    return sum(c * p ** i for i, c in enumerate(cs))


def from_code(a, p, f):
    return [(a // p ** i) % p for i in range(f)]


def naive_classes(F, e):
    """Map x -> i with x in omega^i * C_0^e, by walking powers of omega."""
    out, x = {}, 1
    for i in range(F.q - 1):
        out[x] = i % e
        x = F.mul(x, F.omega)
    return out


def brute_pairs(v, blocks):
    cover = {}
    for b in blocks:
        b = [int(x) for x in b]
        for i in range(len(b)):
            for j in range(i + 1, len(b)):
                key = (min(b[i], b[j]), max(b[i], b[j]))
                cover[key] = cover.get(key, 0) + 1
    return cover


@pytest.fixture
def ag33():
    """Planes of AG(3, 3): an externally supplied 2-(27, 9, 4) design.

    Built here with plain integer arithmetic mod 3, independent of the
    library, to stand in for an ingredient file.
    """
    import itertools

    pts = list(itertools.product(range(3), repeat=3))
    index = {p: i for i, p in enumerate(pts)}
    planes = set()
    for n in pts:
        if n == (0, 0, 0) or next(c for c in n if c) != 1:
            continue
        for c in range(3):
            plane = tuple(sorted(index[p] for p in pts
                                 if (n[0] * p[0] + n[1] * p[1] + n[2] * p[2]) % 3 == c))
            planes.add(plane)
    return {"v": 27, "k": 9, "lambda": 4, "blocks": [list(p) for p in sorted(planes)]}


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", help="run multi-minute exhaustive scans")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)
