import random

import pytest
from hypothesis import given

from argmc.af import ALL_SEMANTICS, Semantics, extensions
from argmc.attacks import ALL_RELATIONS, MULTI, Relation, relation_info
from argmc.formula import atoms_of, parse_formula
from argmc.kb import GeneratorConfig, SweepConfig, random_kb
from argmc.mcext import (
    EXTRA_EXTENSIONS, Instance, base_consistency_audit, check_bijection, coverage, default_claims,
    parse_claims, skeptical_infer, verify_claim, verify_claims,
)
from conftest import kb, knowledge_bases
from oracles import brute_mc, models

SPLIT_CONJUNCTIONS = ("p & q", "p & !q")
CONFLICT_TRIANGLE = ("p", "p -> q", "!q")
TWO_PLUS_ONE = ("p", "!p", "q")


def _family_oracle(inst, rel, sem):
    """Bijection verdict from the full extension family and the MC images."""
    family = set(extensions(inst.framework(rel).af, sem))
    images = {inst.image(s) for s in inst.mc}
    return family == images and len(images) == len(inst.mc)


def test_defeating_rebut_witness():
    rep = check_bijection(kb(*SPLIT_CONJUNCTIONS), "dr", "stable")
    assert rep.verdict == "violated"
    assert "Arg({p & !q}) is not a stable extension" in rep.describe()


@pytest.mark.parametrize("rel", ["d", "u", "cu", "c", "rdu"])
@pytest.mark.parametrize("sem", ["stable", "semi-stable", "preferred", "complete"])
def test_conflict_triangle_violations(rel, sem):
    assert check_bijection(kb(*CONFLICT_TRIANGLE), rel, sem).verdict == "violated"


@pytest.mark.parametrize("rel", ["r", "dr"])
@pytest.mark.parametrize("sem", ["stable", "semi-stable", "preferred", "complete"])
def test_rebut_violations(rel, sem):
    assert check_bijection(kb(*SPLIT_CONJUNCTIONS), rel, sem).verdict == "violated"


@pytest.mark.parametrize("rel", ["d", "u", "cu", "c", "rdu"])
def test_audit_finds_inconsistent_stable_base(rel):
    rows = base_consistency_audit(kb(*CONFLICT_TRIANGLE), rel, "stable")
    assert any(not row.consistent for row in rows)
    if rel == "rdu":
        return
    # conflict-complete relations: the union of the singleton argument sets is stable
    inst = Instance(kb(*CONFLICT_TRIANGLE))
    assert any(row.base == 0b111 and row.extension == inst.image(0b001) | inst.image(0b010) | inst.image(0b100)
               for row in rows)


@pytest.mark.parametrize("rel", ["du", "dd", "ba"])
def test_third_complete_extension(rel):
    inst = Instance(kb(*TWO_PLUS_ONE))
    rep = check_bijection(inst, rel, "complete")
    assert rep.verdict == "violated"
    q_only = inst.image(0b100)
    assert q_only in inst.extensions(Relation.parse(rel), Semantics.COMPLETE)
    assert any(w.arguments == q_only and w.kind == "extension-without-mc-set" for w in rep.witnesses)
    assert len(inst.mc) == 2


@pytest.mark.parametrize("rel", list(ALL_RELATIONS))
def test_single_extension_semantics_fail(rel):
    inst = Instance(kb(*TWO_PLUS_ONE))
    for sem in ("grounded", "ideal"):
        rep = check_bijection(inst, rel, sem)
        assert rep.verdict == "violated"
        assert len(rep.mc) == 2 and len(rep.extensions) == 1


@pytest.mark.parametrize("rel", ["du", "dd", "ba"])
def test_good_relations_satisfy_on_witness_kbs(rel):
    for lines in (SPLIT_CONJUNCTIONS, CONFLICT_TRIANGLE, TWO_PLUS_ONE):
        for sem in MULTI:
            rep = check_bijection(kb(*lines), rel, sem)
            assert rep.satisfied, (lines, sem, rep.describe())


def test_consistent_kb_is_satisfied_everywhere():
    inst = Instance(kb("p", "p -> q"))
    for rel in ALL_RELATIONS:
        for sem in ALL_SEMANTICS:
            assert check_bijection(inst, rel, sem).satisfied


@given(knowledge_bases(atoms=("p", "q"), max_formulas=3))
def test_verdict_matches_full_family(k):
    inst = Instance(k)
    for rel in ALL_RELATIONS:
        for sem in (Semantics.STABLE, Semantics.PREFERRED, Semantics.GROUNDED):
            assert check_bijection(inst, rel, sem).satisfied == _family_oracle(inst, rel, sem)


def test_lazy_listing_marks_inexact_counts():
    # many stable extensions under c, far more than |MC| + EXTRA_EXTENSIONS
    inst = Instance(kb("p", "!p", "q", "!q"))
    rep = check_bijection(inst, "c", "complete")
    js = rep.to_json()
    assert js["verdict"] == "violated"
    assert not js["extension_count_exact"]
    assert js["extension_count"] == len(inst.mc) + EXTRA_EXTENSIONS


def test_report_json_shape():
    rep = check_bijection(kb(*SPLIT_CONJUNCTIONS), "dr", "stable")
    js = rep.to_json()
    assert js["relation"] == "dr" and js["semantics"] == "stable" and js["mc_count"] == 2
    assert js["mc_subsets"] == [["p & q"], ["p & !q"]]
    for w in js["witnesses"]:
        assert set(w) == {"kind", "base", "base_formulas", "base_consistent", "arguments"}


@given(knowledge_bases(max_formulas=4))
def test_satisfied_instances_meet_audit_invariants(k):
    inst = Instance(k)
    for rel in (Relation.DU, Relation.DD, Relation.BA):
        rows = base_consistency_audit(inst, rel, Semantics.STABLE)
        assert len(rows) == len(inst.mc)
        assert all(row.consistent and row.arg_of_base_equal for row in rows)
        images = {inst.image(s): s for s in inst.mc}
        assert {row.extension for row in rows} == set(images)
        assert all(row.base & ~images[row.extension] == 0 for row in rows)


@given(knowledge_bases(max_formulas=4))
def test_mc_matches_brute(k):
    ms = [models(f, k.universe.atoms) for f in k.formulas]
    expected = brute_mc(ms, 1 << k.n)
    assert {frozenset(k.indices(s)) for s in Instance(k).mc} == expected


def _random_queries(count, seed=21):
    rng = random.Random(seed)
    sweep = list(SweepConfig(count=100).kbs())
    qcfg = GeneratorConfig(atoms=3, formulas=1, max_depth=2)
    for i in range(count):
        _, k = sweep[i % len(sweep)]
        q = random_kb(qcfg, rng.randrange(10 ** 6)).formulas[0]
        yield k, q


def test_skeptical_modes_agree_with_brute():
    for k, f in _random_queries(120):
        ms = [models(g, k.universe.atoms) for g in k.formulas]
        size = 1 << k.n
        target = models(f, k.universe.atoms) if set(k.universe.atoms) >= atoms_of(f) else None
        if target is None:
            continue
        expected = all(
            all(v in target for v in range(size) if all(v in ms[i] for i in s))
            for s in brute_mc(ms, size)
        )
        inst = Instance(k)
        assert skeptical_infer(inst, f, "direct") == expected
        assert skeptical_infer(inst, f, "argumentation") == expected


def test_skeptical_examples():
    k = kb(*TWO_PLUS_ONE)
    assert skeptical_infer(k, "q")
    assert not skeptical_infer(k, "p")
    assert skeptical_infer(k, "p | !p", mode="argumentation")
    with pytest.raises(ValueError, match="mode"):
        skeptical_infer(k, "q", mode="credulous")


def test_claim_table_covers_every_pair_once():
    cov = coverage(default_claims())
    assert all(len(ids) == 1 for ids in cov.values()), {k: v for k, v in cov.items() if len(v) != 1}


def test_claim_expectations_follow_catalog():
    for c in default_claims():
        if c.kind != "bijection":
            continue
        for r in c.relations:
            for s in c.semantics:
                assert relation_info(r).expected(s) == c.expect, (c.id, r, s)


def test_witness_claims_pass():
    for c in default_claims():
        if not c.uses_sweep:
            res = verify_claim(c)
            assert res.passed, (c.id, res.evidence)


def test_sweep_claims_pass_on_small_sweep():
    claims = [c for c in default_claims() if c.uses_sweep]
    rep = verify_claims(claims, SweepConfig(count=25))
    assert rep.passed, [(r.claim.id, r.evidence) for r in rep.results if not r.passed]


def test_failing_claim_reports_evidence():
    (claim,) = parse_claims('id=wrong kind=bijection relations=du semantics=stable expect=falsifies kb="p; !p"')
    res = verify_claim(claim)
    assert not res.passed and res.runs == 1 and res.evidence


@pytest.mark.parametrize("line, message", [
    ("id=x kind=nonsense sweep", "unknown claim kind"),
    ("id=x kind=symmetric", "exactly one"),
    ('id=x kind=symmetric sweep kb="p"', "exactly one"),
    ("id=x kind=symmetric relations=zz sweep", "unknown attack relation"),
    ("id=x kind=symmetric semantics=naive sweep", "unknown semantics"),
    ("kind=symmetric sweep", "id"),
    ("id=x kind=symmetric sweep junk", "key=value"),
])
def test_claim_parse_errors(line, message):
    with pytest.raises(ValueError, match=message):
        parse_claims(line)


def test_claim_parse_duplicates_and_comments():
    text = "# comment\n\nid=a kind=symmetric sweep\n"
    assert len(parse_claims(text)) == 1
    with pytest.raises(ValueError, match="duplicate"):
        parse_claims(text + "id=a kind=no-self-attack sweep\n")


def test_formula_objects_accepted():
    assert skeptical_infer(kb(*TWO_PLUS_ONE), parse_formula("q | p"))


def test_foreign_atoms_rejected():
    # q is outside the universe of {p}, so neither mode can answer
    with pytest.raises(ValueError, match="universe"):
        skeptical_infer(kb("p"), "p | q")
    assert skeptical_infer(kb("p", "q | !q"), "p | q")


def test_direct_undercut_audit_bases():
    k = kb(*TWO_PLUS_ONE)
    rows = base_consistency_audit(k, "du", "stable")
    assert sorted(k.describe(r.base) for r in rows) == [["!p", "q"], ["p", "q"]]
    assert all(r.consistent and r.arg_of_base_equal for r in rows)
