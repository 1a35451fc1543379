"""Deciding whether extensions coincide with the images of maximal consistent subsets.

For a KB, an attack relation and a semantics, the question is whether
``S -> Arg(S)`` maps the maximal consistent subsets onto the extension family
exactly.  :func:`check_bijection` decides it on one instance; :func:`verify_claims`
replays a table of expected verdicts over witness KBs and seeded sweeps.
"""

from __future__ import annotations

import shlex
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable

from .af import (
    ALL_SEMANTICS, Semantics, check_stable_semi_stable, extensions, find_extensions, is_extension,
    unstable_maximal_conflict_free,
)
from .argcore import ArgumentSet, args_mask_of_subset, base_of, enumerate_arguments
from .attacks import (
    ALL_RELATIONS,
    Framework,
    Relation,
    build_framework,
    conflict_completeness_violations,
    conflict_dependence_violations,
    find_invalidity_witness,
    symmetry_violations,
)
from .formula import Formula, UniverseError
from .kb import KnowledgeBase, SweepConfig, load_kb, mc_subsets
from .limits import DEFAULT_LIMITS, Limits

SATISFIED = "satisfied-on-instance"
VIOLATED = "violated"

# extensions listed beyond |MC| before a family is declared "larger"
EXTRA_EXTENSIONS = 4


@dataclass
class Witness:
    kind: str  # mc-set-not-extension | extension-without-mc-set | base-inconsistent
    arguments: int  # bitset of argument ids
    base: int  # bitset of KB formula indices
    consistent: bool

    def to_json(self, args: ArgumentSet) -> dict:
        kb = args.kb
        return {
            "kind": self.kind,
            "base": kb.indices(self.base),
            "base_formulas": kb.describe(self.base),
            "base_consistent": self.consistent,
            "arguments": args.ids_of(self.arguments),
        }


@dataclass
class BijectionReport:
    kb_digest: str
    relation: Relation
    semantics: Semantics
    mc: list[int]
    extensions: list[int]  # every extension when ``exhaustive``, else a prefix of the family
    witnesses: list[Witness]
    args: ArgumentSet = field(repr=False)
    exhaustive: bool = True

    @property
    def verdict(self) -> str:
        return VIOLATED if self.witnesses else SATISFIED

    @property
    def satisfied(self) -> bool:
        return not self.witnesses

    def to_json(self) -> dict:
        kb = self.args.kb
        return {
            "kb_digest": self.kb_digest,
            "relation": self.relation.value,
            "semantics": self.semantics.value,
            "verdict": self.verdict,
            "mc_count": len(self.mc),
            "extension_count": len(self.extensions),
            "extension_count_exact": self.exhaustive,
            "mc_subsets": [kb.describe(s) for s in self.mc],
            "witnesses": [w.to_json(self.args) for w in self.witnesses],
        }

    def describe(self) -> list[str]:
        kb = self.args.kb
        lines = []
        for w in self.witnesses:
            names = "{" + ", ".join(kb.describe(w.base)) + "}"
            if w.kind == "mc-set-not-extension":
                lines.append(f"Arg({names}) is not a {self.semantics.value} extension")
            else:
                state = "consistent" if w.consistent else "inconsistent"
                ids = ", ".join(map(str, self.args.ids_of(w.arguments)))
                lines.append(f"{self.semantics.value} extension [{ids}] with {state} base {names} "
                             f"is not Arg of a maximal consistent subset")
        return lines


@dataclass
class Instance:
    """One KB with its argument core, built frameworks and solved families, memoised."""

    kb: KnowledgeBase
    limits: Limits = DEFAULT_LIMITS
    _args: ArgumentSet | None = None
    _fws: dict = field(default_factory=dict)
    _exts: dict = field(default_factory=dict)
    _mc: list[int] | None = None

    @property
    def args(self) -> ArgumentSet:
        if self._args is None:
            self._args = enumerate_arguments(self.kb, self.limits)
        return self._args

    @property
    def mc(self) -> list[int]:
        if self._mc is None:
            self._mc = mc_subsets(self.kb)
        return self._mc

    def framework(self, rel: Relation) -> Framework:
        if rel not in self._fws:
            self._fws[rel] = build_framework(self.kb, rel, self.limits, self.args)
        return self._fws[rel]

    def extensions(self, rel: Relation, sem: Semantics) -> list[int]:
        key = (rel, sem)
        if key not in self._exts:
            self._exts[key] = extensions(self.framework(rel).af, sem, self.limits)
        return self._exts[key]

    def bounded(self, rel: Relation, sem: Semantics, limit: int) -> tuple[list[int], bool]:
        """At most ``limit`` extensions, reusing a full family when known."""
        key = (rel, sem)
        if key in self._exts:
            return self._exts[key], True
        bkey = (rel, sem, limit)
        if bkey not in self._exts:
            family, exhaustive = find_extensions(self.framework(rel).af, sem, self.limits, limit)
            if exhaustive:
                self._exts[key] = family
            self._exts[bkey] = (family, exhaustive)
        return self._exts[bkey]

    def is_extension(self, rel: Relation, sem: Semantics, e: int) -> bool:
        if (rel, sem) in self._exts:
            return e in self._exts[(rel, sem)]
        return is_extension(self.framework(rel).af, e, sem, self.limits)

    def image(self, subset: int) -> int:
        return args_mask_of_subset(self.args, subset)

    def base(self, ext: int) -> int:
        return base_of(self.args, self.args.ids_of(ext))


def _parse(rel, sem) -> tuple[Relation, Semantics]:
    rel = Relation.parse(rel) if isinstance(rel, str) else rel
    sem = Semantics.parse(sem) if isinstance(sem, str) else sem
    return rel, sem


def check_bijection(kb: KnowledgeBase | Instance, rel: Relation | str, sem: Semantics | str,
                    limits: Limits = DEFAULT_LIMITS) -> BijectionReport:
    """Compare the extension family with the images of the maximal consistent subsets.

    The family is listed only up to a few members past ``|MC|``: more
    extensions than images already settles the verdict, and some frameworks
    have exponentially many.
    """
    rel, sem = _parse(rel, sem)
    inst = kb if isinstance(kb, Instance) else Instance(kb, limits)
    exts, exhaustive = inst.bounded(rel, sem, len(inst.mc) + EXTRA_EXTENSIONS)
    images = {inst.image(s): s for s in inst.mc}
    ext_set = set(exts)
    witnesses = []
    for image, s in images.items():
        member = image in ext_set if exhaustive else inst.is_extension(rel, sem, image)
        if not member:
            witnesses.append(Witness("mc-set-not-extension", image, s, True))
    for e in exts:
        if e not in images:
            base = inst.base(e)
            witnesses.append(Witness("extension-without-mc-set", e, base, inst.kb.consistent(base)))
    return BijectionReport(inst.kb.digest(), rel, sem, list(inst.mc), list(exts), witnesses, inst.args,
                           exhaustive)


@dataclass
class AuditRow:
    extension: int
    base: int
    consistent: bool
    conclusions_consistent: bool
    arg_of_base_equal: bool  # Arg(Base(E)) == E


def base_consistency_audit(kb: KnowledgeBase | Instance, rel: Relation | str, sem: Semantics | str,
                           limits: Limits = DEFAULT_LIMITS) -> list[AuditRow]:
    """Base and consistency of every extension.

    When the bijection holds on the instance, each extension must also be
    exactly the arguments of its base; an ``AssertionError`` flags otherwise.
    """
    rel, sem = _parse(rel, sem)
    inst = kb if isinstance(kb, Instance) else Instance(kb, limits)
    rows = []
    for e in inst.extensions(rel, sem):
        base = inst.base(e)
        core = inst.kb.conj(base)
        concl = core if core else inst.kb.full
        for i in inst.args.ids_of(e):
            concl &= inst.args[i].conclusion
        rows.append(AuditRow(e, base, core != 0, concl != 0, inst.image(base) == e))
    if check_bijection(inst, rel, sem).satisfied:
        for row in rows:
            assert row.arg_of_base_equal and row.consistent and row.conclusions_consistent, row
        # Base(Arg(S)) can be smaller than S: tautologies support no argument
        for s in inst.mc:
            image = inst.image(s)
            assert inst.base(image) & ~s == 0 and inst.image(inst.base(image)) == image
    return rows


def skeptical_infer(kb: KnowledgeBase | Instance, f: Formula | str, mode: str = "direct",
                    limits: Limits = DEFAULT_LIMITS) -> bool:
    """Does ``f`` follow from every maximal consistent subset?

    ``argumentation`` mode answers the same question by requiring every stable
    extension under direct undercut to hold an argument whose conclusion is
    equivalent to ``f``.
    """
    inst = kb if isinstance(kb, Instance) else Instance(kb, limits)
    target = inst.kb.query(f).bits
    if mode == "direct":
        return all(inst.kb.conj(s) & ~target == 0 for s in inst.mc)
    if mode != "argumentation":
        raise ValueError(f"unknown inference mode {mode!r}")
    holders = inst.args.mask_of(inst.args.by_conclusion.get(target, []))
    return all(e & holders for e in inst.extensions(Relation.DU, Semantics.STABLE))


# ---------------------------------------------------------------- claim table

CLAIM_KINDS = (
    "bijection",  # expected bijection verdict per relation x semantics
    "stable-base-inconsistent",  # some stable extension has an inconsistent base
    "extension-of-subset",  # Arg(subset) is an extension
    "conflict-dependent",
    "not-valid",
    "conflict-complete",
    "not-conflict-complete",
    "symmetric",
    "stable-is-semi-stable",  # nonempty stable family equals semi-stable family
    "maxcf-is-stable",  # every maximal conflict-free set is stable
    "sufficient-condition",  # MC images are extensions + consistent bases => bijection
    "inconsistent-stable-base-spreads",  # inconsistent stable base => violated for s, ss, p, c
    "no-self-attack",
    "single-extension-fails",  # |MC| >= 2 => violated for grounded and ideal
)


@dataclass(frozen=True)
class Claim:
    id: str
    kind: str
    relations: tuple[Relation, ...]
    semantics: tuple[Semantics, ...]
    expect: str
    kb_text: str | None  # inline witness KB, or None for the sweep
    source: str
    subset: tuple[str, ...] = ()

    @property
    def uses_sweep(self) -> bool:
        return self.kb_text is None


def _split(value: str) -> list[str]:
    return [v.strip() for v in value.split(",") if v.strip()]


def parse_claims(text: str) -> list[Claim]:
    """Read the claim table.

    One claim per line as ``key=value`` fields (shell quoting for spaces):
    ``id``, ``kind``, ``relations`` (comma list or ``all``), ``semantics``
    (comma list or ``all``), ``expect``, ``kb`` (formulas separated by ``;``)
    or ``sweep``, ``source``; ``subset`` for extension-of-subset claims.
    """
    claims = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = {}
        for tok in shlex.split(line):
            key, sep, value = tok.partition("=")
            if not sep:
                if tok == "sweep":
                    fields["sweep"] = "1"
                    continue
                raise ValueError(f"claims line {lineno}: expected key=value, got {tok!r}")
            fields[key] = value
        try:
            kind = fields["kind"]
            if kind not in CLAIM_KINDS:
                raise ValueError(f"unknown claim kind {kind!r}")
            rels = fields.get("relations", "all")
            sems = fields.get("semantics", "all")
            relations = ALL_RELATIONS if rels == "all" else tuple(Relation.parse(r) for r in _split(rels))
            semantics = ALL_SEMANTICS if sems == "all" else tuple(Semantics.parse(s) for s in _split(sems))
            kb_text = fields.get("kb")
            if (kb_text is None) == ("sweep" not in fields):
                raise ValueError("exactly one of kb=... or sweep is required")
            claims.append(Claim(
                id=fields["id"], kind=kind, relations=relations, semantics=semantics,
                expect=fields.get("expect", "holds"),
                kb_text=None if kb_text is None else "\n".join(f.strip() for f in kb_text.split(";")),
                source=fields.get("source", ""),
                subset=tuple(_split(fields.get("subset", "").replace(";", ","))),
            ))
        except (KeyError, ValueError) as e:
            raise ValueError(f"claims line {lineno}: {e}") from e
    ids = [c.id for c in claims]
    if len(ids) != len(set(ids)):
        raise ValueError("duplicate claim ids")
    return claims


def default_claims_text() -> str:
    return resources.files("argmc").joinpath("claims.tbl").read_text()


def default_claims() -> list[Claim]:
    return parse_claims(default_claims_text())


def coverage(claims: Iterable[Claim]) -> dict[tuple[Relation, Semantics], list[str]]:
    """Which bijection claims cover each relation x semantics pair."""
    out: dict[tuple[Relation, Semantics], list[str]] = {(r, s): [] for r in ALL_RELATIONS for s in ALL_SEMANTICS}
    for c in claims:
        if c.kind == "bijection":
            for r in c.relations:
                for s in c.semantics:
                    out[(r, s)].append(c.id)
    return out


@dataclass
class ClaimResult:
    claim: Claim
    passed: bool
    runs: int
    evidence: list[str]

    def to_json(self) -> dict:
        return {"id": self.claim.id, "kind": self.claim.kind, "passed": self.passed, "runs": self.runs,
                "expect": self.claim.expect, "source": self.claim.source, "evidence": self.evidence[:10]}


@dataclass
class ClaimReport:
    results: list[ClaimResult]
    sweep: SweepConfig

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)


def _instances(claim: Claim, sweep: SweepConfig, limits: Limits, cache: dict) -> list[tuple[str, Instance]]:
    if claim.kb_text is not None:
        key = ("kb", claim.kb_text)
        if key not in cache:
            cache[key] = [("witness", Instance(load_kb(claim.kb_text), limits))]
        return cache[key]
    key = ("sweep", sweep)
    if key not in cache:
        cache[key] = [(f"seed {seed}", Instance(kb, limits)) for seed, kb in sweep.kbs()]
    return cache[key]


def _check_instance(claim: Claim, inst: Instance) -> tuple[int, list[str]]:
    """Returns (runs, failures) for one claim on one instance."""
    runs, fails = 0, []
    kb = inst.kb
    for rel in claim.relations:
        k = claim.kind
        if k == "bijection":
            for sem in claim.semantics:
                runs += 1
                rep = check_bijection(inst, rel, sem)
                want_sat = claim.expect == "satisfies"
                if rep.satisfied != want_sat:
                    fails.append(f"{rel.value}/{sem.value}: {rep.verdict} on {list(kb.texts)}")
        elif k == "stable-base-inconsistent":
            runs += 1
            if not any(not inst.kb.consistent(inst.base(e)) for e in inst.extensions(rel, Semantics.STABLE)):
                fails.append(f"{rel.value}: every stable extension has a consistent base")
        elif k == "extension-of-subset":
            subset = 0
            for f in claim.subset:
                subset |= 1 << kb.texts.index(f)
            image = inst.image(subset)
            for sem in claim.semantics:
                runs += 1
                if not inst.is_extension(rel, sem, image):
                    fails.append(f"{rel.value}/{sem.value}: Arg({set(claim.subset)}) is not an extension")
        elif k == "conflict-dependent":
            runs += 1
            bad = conflict_dependence_violations(inst.framework(rel))
            if bad:
                fails.append(f"{rel.value}: {len(bad)} attacks between jointly consistent supports")
        elif k == "not-valid":
            runs += 1
            if find_invalidity_witness(inst.framework(rel), 3) is None:
                fails.append(f"{rel.value}: no conflict-free set with inconsistent base found")
        elif k in ("conflict-complete", "not-conflict-complete"):
            runs += 1
            bad = conflict_completeness_violations(inst.framework(rel))
            if (k == "conflict-complete") == bool(bad):
                fails.append(f"{rel.value}: {len(bad)} conflict-completeness violations")
        elif k == "symmetric":
            runs += 1
            if symmetry_violations(inst.framework(rel)):
                fails.append(f"{rel.value}: one-way attack found")
        elif k == "no-self-attack":
            runs += 1
            af = inst.framework(rel).af
            if af.has_self_attack():
                fails.append(f"{rel.value}: self-attacking argument")
        elif k == "stable-is-semi-stable":
            runs += 1
            res = check_stable_semi_stable(inst.framework(rel).af, inst.limits)
            if not res.holds:
                fails.append(f"{rel.value}: stable family differs from semi-stable family ({res.detail})")
        elif k == "maxcf-is-stable":
            runs += 1
            found = unstable_maximal_conflict_free(inst.framework(rel).af, inst.limits)
            if found is not None:
                fails.append(f"{rel.value}: maximal conflict-free set {found[0]:#x} leaves node {found[1]} unattacked")
        elif k == "sufficient-condition":
            for sem in (Semantics.STABLE, Semantics.PREFERRED):
                runs += 1
                exts = inst.extensions(rel, sem)
                images_ok = all(inst.is_extension(rel, sem, inst.image(s)) for s in inst.mc)
                bases_ok = all(kb.consistent(inst.base(e)) for e in exts)
                if images_ok and bases_ok and not check_bijection(inst, rel, sem).satisfied:
                    fails.append(f"{rel.value}/{sem.value}: sufficient condition met but bijection fails")
        elif k == "inconsistent-stable-base-spreads":
            runs += 1
            if any(not kb.consistent(inst.base(e)) for e in inst.extensions(rel, Semantics.STABLE)):
                for sem in (Semantics.STABLE, Semantics.SEMI_STABLE, Semantics.PREFERRED, Semantics.COMPLETE):
                    if check_bijection(inst, rel, sem).satisfied:
                        fails.append(f"{rel.value}/{sem.value}: satisfied despite an inconsistent stable base")
        elif k == "single-extension-fails":
            if len(inst.mc) >= 2:
                for sem in (Semantics.GROUNDED, Semantics.IDEAL):
                    runs += 1
                    if check_bijection(inst, rel, sem).satisfied:
                        fails.append(f"{rel.value}/{sem.value}: satisfied with {len(inst.mc)} MC subsets")
    return runs, fails


def verify_claim(claim: Claim, sweep: SweepConfig = SweepConfig(), limits: Limits = DEFAULT_LIMITS,
                 cache: dict | None = None) -> ClaimResult:
    cache = {} if cache is None else cache
    runs, evidence = 0, []
    for label, inst in _instances(claim, sweep, limits, cache):
        r, fails = _check_instance(claim, inst)
        runs += r
        evidence.extend(f"{label}: {f}" for f in fails)
    return ClaimResult(claim, not evidence, runs, evidence)


def verify_claims(claims: Iterable[Claim] | None = None, sweep: SweepConfig = SweepConfig(),
                  limits: Limits = DEFAULT_LIMITS) -> ClaimReport:
    claims = default_claims() if claims is None else list(claims)
    cache: dict = {}
    results = [verify_claim(c, sweep, limits, cache) for c in claims]
    return ClaimReport(results, sweep)


__all__ = [
    "BijectionReport", "Claim", "ClaimReport", "ClaimResult", "Instance", "SATISFIED", "VIOLATED",
    "base_consistency_audit", "check_bijection", "coverage", "default_claims", "parse_claims",
    "skeptical_infer", "verify_claims", "UniverseError",
]
