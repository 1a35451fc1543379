"""The ten logic-based attack relations and bounded checks of their properties."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Callable

from . import _backend as kernels
from .af import ALL_SEMANTICS, AbstractAF, Semantics
from .argcore import Argument, ArgumentSet, enumerate_arguments
from .kb import KnowledgeBase, min_inconsistent_subsets
from .limits import DEFAULT_LIMITS, Limits


class Relation(str, Enum):
    D = "d"  # defeat
    DD = "dd"  # direct defeat
    U = "u"  # undercut
    DU = "du"  # direct undercut
    CU = "cu"  # canonical undercut
    R = "r"  # rebut
    DR = "dr"  # defeating rebut
    C = "c"  # conflicting attack
    RDU = "rdu"  # rebut or direct undercut
    BA = "ba"  # big argument attack

    @classmethod
    def parse(cls, name: str) -> "Relation":
        try:
            return cls(name)
        except ValueError:
            raise ValueError(f"unknown attack relation {name!r}; expected one of {[r.value for r in cls]}") from None


ALL_RELATIONS = tuple(Relation)


def _members(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def _nonempty_submasks(mask: int):
    sub = mask
    while sub:
        yield sub
        sub = (sub - 1) & mask


def attack_holds(rel: Relation | str, a: Argument, b: Argument, kb: KnowledgeBase) -> bool:
    """Evaluate one attack predicate directly on two arguments of ``kb``."""
    rel = Relation.parse(rel) if isinstance(rel, str) else rel
    for x in (a, b):
        if x.support & ~kb.all_mask or x.conclusion & ~kb.full:
            raise ValueError(f"argument {x} does not belong to {kb!r}")
    full = kb.full
    ca, cb = a.conclusion, b.conclusion
    if rel is Relation.D:
        return ca & kb.conj(b.support) == 0
    if rel is Relation.DD:
        return any(ca & kb.models[i] == 0 for i in _members(b.support))
    if rel is Relation.U:
        return any(ca == full ^ kb.conj(s) for s in _nonempty_submasks(b.support))
    if rel is Relation.DU:
        return any(ca == full ^ kb.models[i] for i in _members(b.support))
    if rel is Relation.CU:
        return ca == full ^ kb.conj(b.support)
    if rel is Relation.R:
        return ca == full ^ cb
    if rel is Relation.DR:
        return ca & cb == 0
    if rel is Relation.C:
        return kb.conj(a.support | b.support) == 0
    if rel is Relation.RDU:
        return attack_holds(Relation.R, a, b, kb) or attack_holds(Relation.DU, a, b, kb)
    sa = kb.conj(a.support)
    return any(sa & kb.models[i] == 0 for i in _members(b.support))


@dataclass(eq=False)
class Framework:
    """The attack graph of one relation over a KB's argument core."""

    args: ArgumentSet
    relation: Relation
    af: AbstractAF

    @property
    def kb(self) -> KnowledgeBase:
        return self.args.kb

    def attacks(self, a: int, b: int) -> bool:
        return self.af.attacks(a, b)

    def edge_count(self) -> int:
        return self.af.edge_count


# Each relation is a predicate between an attacker key and an attackee key:
# the conclusion or the support of either side.  Arguments sharing a key
# share their attack behaviour, so the predicate is evaluated per key pair.


def _groups(args: ArgumentSet, key: Callable[[Argument], int]) -> tuple[list[int], list[int], list[int]]:
    index: dict[int, int] = {}
    keys: list[int] = []
    masks: list[int] = []
    of_arg = []
    for a in args:
        k = key(a)
        j = index.get(k)
        if j is None:
            j = index[k] = len(keys)
            keys.append(k)
            masks.append(0)
        masks[j] |= 1 << a.id
        of_arg.append(j)
    return keys, masks, of_arg


def _conc(a: Argument) -> int:
    return a.conclusion


def _supp(a: Argument) -> int:
    return a.support


def _rows(rel: Relation, kb: KnowledgeBase, akeys: list[int], bkeys: list[int]) -> list[int]:
    """For each attackee key, the bitmask of attacker-key indices attacking it."""
    full = kb.full
    if rel in (Relation.DU, Relation.CU, Relation.U, Relation.R):
        where = {k: i for i, k in enumerate(akeys)}
        rows = []
        for kb_ in bkeys:
            if rel is Relation.R:
                targets = {full ^ kb_}
            elif rel is Relation.DU:
                targets = {full ^ kb.models[i] for i in _members(kb_)}
            elif rel is Relation.CU:
                targets = {full ^ kb.conj(kb_)}
            else:
                targets = {full ^ kb.conj(s) for s in _nonempty_submasks(kb_)}
            row = 0
            for t in targets:
                j = where.get(t)
                if j is not None:
                    row |= 1 << j
            rows.append(row)
        return rows
    if rel is Relation.DR:
        return kernels.disjoint_rows(akeys, bkeys)
    if rel is Relation.D:
        return kernels.disjoint_rows(akeys, [kb.conj(s) for s in bkeys])
    if rel is Relation.C:
        sa = [kb.conj(s) for s in akeys]
        return kernels.disjoint_rows(sa, [kb.conj(s) for s in bkeys])
    # DD and BA: disjoint from some single support formula
    sa = akeys if rel is Relation.DD else [kb.conj(s) for s in akeys]
    per_formula = kernels.disjoint_rows(sa, list(kb.models))
    rows = []
    for s in bkeys:
        row = 0
        for i in _members(s):
            row |= per_formula[i]
        rows.append(row)
    return rows


_ATTACKER_KEY = {Relation.C: _supp, Relation.BA: _supp}
_ATTACKEE_KEY = {Relation.R: _conc, Relation.DR: _conc}


def _adjacency(args: ArgumentSet, rel: Relation) -> tuple[list[int], list[int]]:
    n = len(args)
    if rel is Relation.RDU:
        r_in, r_out = _adjacency(args, Relation.R)
        u_in, u_out = _adjacency(args, Relation.DU)
        return [x | y for x, y in zip(r_in, u_in)], [x | y for x, y in zip(r_out, u_out)]
    akeys, amasks, a_of = _groups(args, _ATTACKER_KEY.get(rel, _conc))
    bkeys, bmasks, b_of = _groups(args, _ATTACKEE_KEY.get(rel, _supp))
    rows = _rows(rel, args.kb, akeys, bkeys)
    in_by_key = []
    out_by_key = [0] * len(akeys)
    for j, row in enumerate(rows):
        acc = 0
        for i in _members(row):
            acc |= amasks[i]
            out_by_key[i] |= bmasks[j]
        in_by_key.append(acc)
    attackers = [in_by_key[b_of[x]] for x in range(n)]
    attackees = [out_by_key[a_of[x]] for x in range(n)]
    return attackers, attackees


def build_framework(kb: KnowledgeBase, rel: Relation | str, limits: Limits = DEFAULT_LIMITS,
                    args: ArgumentSet | None = None) -> Framework:
    rel = Relation.parse(rel) if isinstance(rel, str) else rel
    if args is None:
        args = enumerate_arguments(kb, limits)
    attackers, attackees = _adjacency(args, rel)
    af = AbstractAF(len(args), attackers, attackees, [str(a.id) for a in args])
    return Framework(args, rel, af)


# ---------------------------------------------------------------- property checks


@dataclass
class PropertyVerdict:
    name: str
    relation: Relation
    holds: bool
    witness: list = field(default_factory=list)
    bound: str = ""

    @property
    def verdict(self) -> str:
        return "holds-within-bound" if self.holds else "violated"

    def to_json(self) -> dict:
        return {"property": self.name, "relation": self.relation.value, "verdict": self.verdict,
                "witness": self.witness, "bound": self.bound}


def _arg_json(args: ArgumentSet, i: int) -> dict:
    a = args[i]
    return {"id": i, "support": args.kb.indices(a.support), "text": args.format(a)}


def _framework(kb: KnowledgeBase, rel, limits: Limits, fw: Framework | None) -> Framework:
    return fw if fw is not None else build_framework(kb, rel, limits)


def conflict_dependence_violations(fw: Framework) -> list[tuple[int, int]]:
    kb = fw.kb
    bad = []
    for b in range(fw.af.n):
        sb = fw.args[b].support
        for a in _members(fw.af.attackers[b]):
            if kb.conj(fw.args[a].support | sb):
                bad.append((a, b))
    return bad


def check_conflict_dependent(rel: Relation | str, kb: KnowledgeBase, limits: Limits = DEFAULT_LIMITS,
                             fw: Framework | None = None) -> PropertyVerdict:
    fw = _framework(kb, rel, limits, fw)
    bad = conflict_dependence_violations(fw)
    witness = [{"attacker": _arg_json(fw.args, a), "attacked": _arg_json(fw.args, b)} for a, b in bad[:5]]
    return PropertyVerdict("conflict-dependent", fw.relation, not bad, witness,
                           f"all {fw.edge_count()} attacks of the argument core of this KB")


def find_invalidity_witness(fw: Framework, max_size: int = 3) -> list[int] | None:
    """A conflict-free set of at most ``max_size`` arguments with an inconsistent base."""
    kb, args, af = fw.kb, fw.args, fw.af
    selfatk = {x for x in range(af.n) if af.attacks(x, x)}
    supports = sorted(s for s in args.by_support if s)
    # prefer the argument concluding its own support's conjunction
    cands = {
        s: sorted((x for x in args.by_support[s] if x not in selfatk),
                  key=lambda x: (args[x].conclusion != kb.conj(s), x))
        for s in supports
    }

    def compatible(x: int, chosen: list[int]) -> bool:
        return all(not af.attacks(x, y) and not af.attacks(y, x) for y in chosen)

    def pick(tuple_: tuple[int, ...], chosen: list[int]) -> list[int] | None:
        if len(chosen) == len(tuple_):
            return chosen
        for x in cands[tuple_[len(chosen)]]:
            if compatible(x, chosen):
                got = pick(tuple_, chosen + [x])
                if got is not None:
                    return got
        return None

    for tuple_ in _tuples_by_support_size(supports, max_size):
        union = 0
        for s in tuple_:
            union |= s
        if kb.conj(union):
            continue
        # a smaller inconsistent sub-tuple comes earlier in the order
        if any(kb.conj(_union_except(tuple_, k)) == 0 for k in range(len(tuple_))):
            continue
        got = pick(tuple_, [])
        if got is not None:
            return got
    return None


def _tuples_by_support_size(supports: list[int], max_size: int):
    """Support tuples ordered by their largest support, then by length.

    Singleton supports are tried first, so the plainest witness is reported.
    """
    sizes = {s: bin(s).count("1") for s in supports}
    for level in sorted(set(sizes.values())):
        pool = [s for s in supports if sizes[s] <= level]
        for size in range(2, max_size + 1):
            for t in combinations(pool, size):
                if any(sizes[s] == level for s in t):
                    yield t


def _union_except(supports: tuple[int, ...], k: int) -> int:
    u = 0
    for i, s in enumerate(supports):
        if i != k:
            u |= s
    return u


def check_valid(rel: Relation | str, kb: KnowledgeBase, max_set_size: int = 3, limits: Limits = DEFAULT_LIMITS,
                fw: Framework | None = None) -> PropertyVerdict:
    if max_set_size < 2:
        raise ValueError("max_set_size must be at least 2")
    fw = _framework(kb, rel, limits, fw)
    got = find_invalidity_witness(fw, max_set_size)
    witness = [_arg_json(fw.args, x) for x in got] if got else []
    return PropertyVerdict("valid", fw.relation, got is None, witness,
                           f"conflict-free sets of at most {max_set_size} arguments of this KB's core")


def conflict_completeness_violations(fw: Framework) -> list[tuple[int, int, int]]:
    """``(C1, C2, a1)`` triples with no attacker of ``a1`` supported exactly by ``C2``.

    ``C1, C2`` range over the splits of each minimal conflict into two
    nonempty disjoint halves.
    """
    kb, args, af = fw.kb, fw.args, fw.af
    out = []
    for c in min_inconsistent_subsets(kb):
        for c1 in _nonempty_submasks(c):
            c2 = c & ~c1
            if c2 == 0:
                continue
            sources = args.mask_of(args.by_support.get(c2, []))
            for a1 in args.by_support.get(c1, []):
                if af.attackers[a1] & sources == 0:
                    out.append((c1, c2, a1))
    return out


def check_conflict_complete(rel: Relation | str, kb: KnowledgeBase, limits: Limits = DEFAULT_LIMITS,
                            fw: Framework | None = None) -> PropertyVerdict:
    fw = _framework(kb, rel, limits, fw)
    bad = conflict_completeness_violations(fw)
    witness = [{"c1": kb.describe(c1), "c2": kb.describe(c2), "argument": _arg_json(fw.args, a)}
               for c1, c2, a in bad[:5]]
    return PropertyVerdict("conflict-complete", fw.relation, not bad, witness,
                           "minimal conflicts of this KB only, not of the whole language")


def symmetry_violations(fw: Framework) -> list[tuple[int, int]]:
    af = fw.af
    out = []
    for x in range(af.n):
        for y in _members(af.attackees[x] & ~af.attackers[x]):
            out.append((x, y))
    return out


def check_symmetric(rel: Relation | str, kb: KnowledgeBase, limits: Limits = DEFAULT_LIMITS,
                    fw: Framework | None = None) -> PropertyVerdict:
    fw = _framework(kb, rel, limits, fw)
    bad = symmetry_violations(fw)
    witness = [{"attacker": _arg_json(fw.args, a), "attacked": _arg_json(fw.args, b)} for a, b in bad[:5]]
    return PropertyVerdict("symmetric", fw.relation, not bad, witness, "all argument pairs of this KB's core")


def check_all_properties(rel: Relation | str, kb: KnowledgeBase, limits: Limits = DEFAULT_LIMITS,
                         max_set_size: int = 3) -> list[PropertyVerdict]:
    fw = build_framework(kb, rel, limits)
    return [
        check_conflict_dependent(rel, kb, limits, fw),
        check_valid(rel, kb, max_set_size, limits, fw),
        check_conflict_complete(rel, kb, limits, fw),
        check_symmetric(rel, kb, limits, fw),
    ]


# ---------------------------------------------------------------- catalog

MULTI = frozenset({Semantics.STABLE, Semantics.SEMI_STABLE, Semantics.PREFERRED})


@dataclass(frozen=True)
class RelationInfo:
    relation: Relation
    name: str
    definition: str
    symmetric: bool
    conflict_complete: bool
    satisfies: frozenset  # semantics under which the MC/extension bijection holds

    def expected(self, sem: Semantics) -> str:
        return "satisfies" if sem in self.satisfies else "falsifies"


_CATALOG = (
    RelationInfo(Relation.D, "defeat", "Conc(a) |- !/\\Supp(b)", False, True, frozenset()),
    RelationInfo(Relation.DD, "direct defeat", "Conc(a) |- !phi for some phi in Supp(b)", False, False, MULTI),
    RelationInfo(Relation.U, "undercut", "Conc(a) == !/\\Phi for some nonempty Phi within Supp(b)", False, True, frozenset()),
    RelationInfo(Relation.DU, "direct undercut", "Conc(a) == !phi for some phi in Supp(b)", False, False, MULTI),
    RelationInfo(Relation.CU, "canonical undercut", "Conc(a) == !/\\Supp(b)", False, True, frozenset()),
    RelationInfo(Relation.R, "rebut", "Conc(a) == !Conc(b)", True, False, frozenset()),
    RelationInfo(Relation.DR, "defeating rebut", "Conc(a) |- !Conc(b)", True, False, frozenset()),
    RelationInfo(Relation.C, "conflicting attack", "Supp(a) u Supp(b) |- F", True, True, frozenset()),
    RelationInfo(Relation.RDU, "rebut + direct undercut", "rebut or direct undercut", False, False, frozenset()),
    RelationInfo(Relation.BA, "big argument attack", "Supp(a) |- !phi for some phi in Supp(b)", False, False, MULTI),
)


def relation_catalog() -> list[RelationInfo]:
    return list(_CATALOG)


def relation_info(rel: Relation | str) -> RelationInfo:
    rel = Relation.parse(rel) if isinstance(rel, str) else rel
    return next(i for i in _CATALOG if i.relation is rel)


# edge-set inclusions that hold on every framework
INCLUSIONS = (
    (Relation.CU, Relation.U), (Relation.U, Relation.D), (Relation.D, Relation.C),
    (Relation.DU, Relation.U), (Relation.DU, Relation.DD), (Relation.DD, Relation.D),
    (Relation.R, Relation.DR), (Relation.R, Relation.RDU), (Relation.DU, Relation.RDU),
)

__all__ = [
    "ALL_RELATIONS", "ALL_SEMANTICS", "Framework", "PropertyVerdict", "Relation", "RelationInfo",
    "attack_holds", "build_framework", "check_all_properties", "check_conflict_complete",
    "check_conflict_dependent", "check_symmetric", "check_valid", "relation_catalog", "relation_info",
]
