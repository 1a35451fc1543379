import random
import subprocess
import sys

import pytest

from argmc import _backend, _pykernels as P

C = pytest.importorskip("argmc._ckernels", reason="compiled kernels not built")


def _random_graph(rnd, n, p):
    atk, ate = [0] * n, [0] * n
    for a in range(n):
        for b in range(n):
            if rnd.random() < p and (a != b or rnd.random() < 0.2):
                ate[a] |= 1 << b
                atk[b] |= 1 << a
    return atk, ate


def _graphs(count=150, seed=3):
    rnd = random.Random(seed)
    for _ in range(count):
        # the wide graphs span several 64-bit words
        n = rnd.choice([rnd.randint(1, 12), rnd.randint(60, 140)])
        p = rnd.random() * (0.3 if n < 20 else 0.03)
        yield rnd, n, *_random_graph(rnd, n, p)


def test_complete_search_parity():
    for rnd, n, atk, ate in _graphs():
        for mode in (P.COMPLETE, P.STABLE, P.PREFERRED):
            fixed_in = 1 << rnd.randrange(n) if rnd.random() < 0.3 else 0
            fixed_out = 1 << rnd.randrange(n) if rnd.random() < 0.2 else 0
            args = (n, atk, ate, mode, 20_000, fixed_in, fixed_out, rnd.choice([0, 0, 1, 3]))
            assert P.complete_search(*args) == C.complete_search(*args)


def test_grounded_and_maxcf_parity():
    for rnd, n, atk, ate in _graphs(seed=5):
        assert P.grounded(n, atk, ate) == C.grounded(n, atk, ate)
        cand = rnd.getrandbits(n) if rnd.random() < 0.3 else -1
        blockers = rnd.getrandbits(n) if cand != -1 else 0
        args = (n, atk, ate, 20_000, cand, blockers, rnd.choice([0, 2]))
        assert P.maximal_conflict_free(*args) == C.maximal_conflict_free(*args)


@pytest.mark.parametrize("width", [8, 64, 65, 200])
def test_disjoint_rows_parity(width):
    rnd = random.Random(width)
    akeys = [rnd.getrandbits(width) for _ in range(40)]
    bkeys = [rnd.getrandbits(width) for _ in range(9)]
    assert P.disjoint_rows(akeys, bkeys) == C.disjoint_rows(akeys, bkeys)


def test_budget_accounting_matches():
    rnd = random.Random(11)
    atk, ate = _random_graph(rnd, 40, 0.05)
    for budget in (1, 10, 100):
        assert P.complete_search(40, atk, ate, P.COMPLETE, budget) == C.complete_search(40, atk, ate, P.COMPLETE, budget)


def test_backend_selection():
    assert _backend.BACKEND == "cython"
    code = "from argmc import BACKEND; print(BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], env={"ARGMC_PURE_PYTHON": "1", "PATH": ""},
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
