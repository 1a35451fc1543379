"""The nine acceptance criteria, each under its wall-clock limit.

Every test records one PASS/FAIL line; ``conftest.py`` prints them in the
terminal summary.  Run this file directly for the same lines on stdout.
"""

import random
import time
from contextlib import contextmanager

import pytest

from argmc.af import (
    ALL_SEMANTICS, AbstractAF, Semantics, check_stable_semi_stable, extensions, load_af,
    unstable_maximal_conflict_free,
)
from argmc.argcore import enumerate_arguments
from argmc.attacks import ALL_RELATIONS, Relation, check_conflict_dependent, check_valid
from argmc.kb import GeneratorConfig, SweepConfig, random_kb
from argmc.mcext import Instance, base_consistency_audit, check_bijection, skeptical_infer
from conftest import kb
from oracles import brute_arguments, brute_semantics, models, small_kbs, to_sets

RESULTS: list[str] = []

FOUR_NODE_AF = "arg(a). arg(b). arg(c). arg(d). att(b,c). att(c,b). att(b,d). att(c,d)."
MULTI = (Semantics.STABLE, Semantics.SEMI_STABLE, Semantics.PREFERRED)
SPREAD = MULTI + (Semantics.COMPLETE,)


@contextmanager
def criterion(number: int, title: str, limit: float):
    t0 = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - t0
        within = elapsed < limit
        status = "PASS" if ok and within else "FAIL"
        RESULTS.append(f"criterion {number} {status}: {title} ({elapsed:.2f}s, limit {limit:g}s)")
    assert within, f"criterion {number} took {elapsed:.2f}s, limit {limit}s"


def _sets(af, family):
    return sorted(sorted(af.names(e)) for e in family)


def test_criterion_1_four_node_framework():
    with criterion(1, "four-node framework families", 0.1):
        af = load_af(FOUR_NODE_AF)
        for sem in MULTI:
            assert _sets(af, extensions(af, sem)) == [["a", "b"], ["a", "c"]]
        assert _sets(af, extensions(af, "complete")) == [["a"], ["a", "b"], ["a", "c"]]
        assert _sets(af, extensions(af, "grounded")) == [["a"]]
        assert _sets(af, extensions(af, "ideal")) == [["a"]]


def test_criterion_2_rebut_split():
    with criterion(2, "defeating rebut on {p&q, p&!q} is violated under stable", 1):
        rep = check_bijection(kb("p & q", "p & !q"), "dr", "stable")
        assert rep.verdict == "violated"
        assert "Arg({p & !q}) is not a stable extension" in rep.describe()


def test_criterion_3_sweep():
    with criterion(3, "du, dd, ba x stable, semi-stable, preferred on 200 KBs", 120):
        sweep = SweepConfig()
        runs = 0
        kinds = set()
        for seed, k in sweep.kbs():
            inst = Instance(k)
            kinds.add(len(inst.mc) > 1)
            for rel in (Relation.DU, Relation.DD, Relation.BA):
                for sem in MULTI:
                    rep = check_bijection(inst, rel, sem)
                    assert rep.satisfied, (seed, rel, sem, rep.describe())
                    runs += 1
        assert runs == 1800
        assert kinds == {True, False}  # both consistent and inconsistent KBs


def test_criterion_4_conflict_complete_and_rebut_witnesses():
    with criterion(4, "d, u, cu, c, rdu and r, dr violated for s, ss, p, c", 10):
        triangle = Instance(kb("p", "p -> q", "!q"))
        rebut = Instance(kb("p & q", "p & !q"))
        for rel in ("d", "u", "cu", "c", "rdu"):
            for sem in SPREAD:
                assert check_bijection(triangle, rel, sem).verdict == "violated", (rel, sem)
            rows = base_consistency_audit(triangle, rel, "stable")
            assert any(not row.consistent for row in rows), rel
        for rel in ("r", "dr"):
            for sem in SPREAD:
                assert check_bijection(rebut, rel, sem).verdict == "violated", (rel, sem)


def test_criterion_5_complete_grounded_ideal():
    with criterion(5, "{p, !p, q}: third complete extension and single-extension failures", 5):
        inst = Instance(kb("p", "!p", "q"))
        q_only = inst.image(0b100)
        for rel in ("du", "dd", "ba"):
            rep = check_bijection(inst, rel, "complete")
            assert rep.verdict == "violated"
            assert q_only in inst.extensions(Relation.parse(rel), Semantics.COMPLETE)
            assert any(w.arguments == q_only for w in rep.witnesses)
        assert len(inst.mc) == 2
        for rel in ALL_RELATIONS:
            for sem in ("grounded", "ideal"):
                rep = check_bijection(inst, rel, sem)
                assert rep.verdict == "violated" and len(rep.extensions) == 1


def test_criterion_6_validity():
    with criterion(6, "conflict-dependent relations are not valid on {p, !q, p -> q}", 5):
        k = kb("p", "!q", "p -> q")
        certified = 0
        for rel in ALL_RELATIONS:
            if check_conflict_dependent(rel, k).holds:
                certified += 1
                v = check_valid(rel, k)
                assert v.verdict == "violated"
                assert sorted(w["support"] for w in v.witness) == [[0], [1], [2]]
        assert certified == len(ALL_RELATIONS)


def test_criterion_7_property_suites():
    with criterion(7, "stable = semi-stable when nonempty; r, dr, c maximal conflict-free sets are stable", 120):
        nonempty = 0
        for seed, k in SweepConfig().kbs():
            inst = Instance(k)
            for rel in ALL_RELATIONS:
                af = inst.framework(rel).af
                res = check_stable_semi_stable(af)
                assert res.holds, (seed, rel, res.detail)
                nonempty += res.stable_nonempty
                if rel in (Relation.R, Relation.DR, Relation.C):
                    assert unstable_maximal_conflict_free(af) is None, (seed, rel)
        assert nonempty > 0


def _random_af(rng):
    n = rng.randint(1, 12)
    density = rng.choice([0.08, 0.15, 0.25, 0.4])
    edges = {(a, b) for a in range(n) for b in range(n) if rng.random() < density and (a != b or rng.random() < 0.3)}
    # copy a node's neighbourhood now and then so the quotient has work to do
    if n > 2 and rng.random() < 0.5:
        src, twin = rng.sample(range(n), 2)
        edges = {e for e in edges if twin not in e}
        edges |= {(a, twin) for a, b in edges if b == src and a != twin}
        edges |= {(twin, b) for a, b in edges if a == src and b != twin}
    return n, edges


def test_criterion_8_oracle_equivalence():
    with criterion(8, "six semantics, argument core and quotient match brute force", 60):
        rng = random.Random(2024)
        for _ in range(200):
            n, edges = _random_af(rng)
            af = AbstractAF.from_edges(n, edges)
            expected = brute_semantics(n, edges)
            for sem in ALL_SEMANTICS:
                direct = extensions(af, sem, reduce=False)
                assert to_sets(direct) == expected[sem.value], (n, sorted(edges), sem)
                assert extensions(af, sem, reduce=True) == direct
        checked = 0
        for atoms in (("p",), ("p", "q")):
            for k in small_kbs(atoms, 3):
                sets = [models(f, k.universe.atoms) for f in k.formulas]
                got = {(frozenset(k.indices(a.support)),
                        frozenset(v for v in range(k.universe.size) if a.conclusion >> v & 1))
                       for a in enumerate_arguments(k)}
                assert got == brute_arguments(sets, k.universe.size)
                checked += 1
        assert checked == (1 + 4 + 16 + 64) + (1 + 16 + 256 + 4096)


def test_criterion_9_inference_modes():
    with criterion(9, "skeptical inference: direct mode equals argumentation mode", 60):
        rng = random.Random(99)
        kbs = [k for _, k in SweepConfig().kbs()]
        qcfg = GeneratorConfig(atoms=3, formulas=1, max_depth=2)
        pairs = 0
        entailed = 0
        while pairs < 500:
            k = kbs[pairs % len(kbs)]
            f = random_kb(qcfg, rng.randrange(10 ** 9)).formulas[0]
            inst = Instance(k)
            try:
                direct = skeptical_infer(inst, f, "direct")
            except ValueError:
                continue  # the query uses an atom outside this KB
            assert direct == skeptical_infer(inst, f, "argumentation"), (list(k.texts), f)
            entailed += direct
            pairs += 1
        assert 0 < entailed < 500


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-p", "no:cacheprovider", "-W", "ignore::pytest.PytestAssertRewriteWarning"]))
