import itertools
import random

import pytest

from wittdr.errors import NoSolution
from wittdr.linalg import in_span, nullspace, rank, solve


def random_columns(rng, p, ncols, rows):
    return [{r: rng.randrange(p) for r in rows if rng.random() < 0.6} for _ in range(ncols)]


def combine(columns, lam, p):
    out = {}
    for i, c in lam.items():
        for k, x in columns[i].items():
            out[k] = (out.get(k, 0) + c * x) % p
    return {k: x for k, x in out.items() if x}


def brute_kernel_size(columns, p):
    n = len(columns)
    count = 0
    for lam in itertools.product(range(p), repeat=n):
        if not combine(columns, dict(enumerate(lam)), p):
            count += 1
    return count


@pytest.mark.parametrize("p", [2, 3, 5])
def test_nullspace_against_enumeration(p):
    rng = random.Random(p)
    for _ in range(20):
        cols = random_columns(rng, p, 4, ["a", "b", "c"])
        null = nullspace(cols, p)
        for v in null:
            assert not combine(cols, v, p)
        assert p ** len(null) == brute_kernel_size(cols, p)
        assert rank(cols, p) + len(null) == len(cols)


@pytest.mark.parametrize("p", [2, 3, 7])
def test_solve_random(p):
    rng = random.Random(100 + p)
    for _ in range(50):
        cols = random_columns(rng, p, 5, range(6))
        lam = {i: rng.randrange(p) for i in range(5)}
        rhs = combine(cols, lam, p)
        part, null = solve(cols, rhs, p)
        assert combine(cols, part, p) == rhs
        assert len(null) == len(cols) - rank(cols, p)


def test_no_solution():
    cols = [{"a": 1}, {"a": 2}]
    with pytest.raises(NoSolution):
        solve(cols, {"b": 1}, 3)
    assert not in_span(cols, {"b": 1}, 3)
    assert in_span(cols, {"a": 2}, 3)


def test_empty_inputs():
    assert nullspace([], 2) == []
    assert nullspace([{}], 2) == [{0: 1}]
    assert solve([], {}, 5) == ({}, [])
