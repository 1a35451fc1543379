"""Exact extension enumeration for finite abstract argumentation frameworks."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from . import _backend as kernels
from .limits import DEFAULT_LIMITS, CapExceeded, Limits


class Semantics(str, Enum):
    COMPLETE = "complete"
    PREFERRED = "preferred"
    STABLE = "stable"
    SEMI_STABLE = "semi-stable"
    GROUNDED = "grounded"
    IDEAL = "ideal"

    @classmethod
    def parse(cls, name: str) -> "Semantics":
        aliases = {"c": "complete", "p": "preferred", "s": "stable", "ss": "semi-stable",
                   "g": "grounded", "i": "ideal", "semistable": "semi-stable"}
        try:
            return cls(aliases.get(name, name))
        except ValueError:
            raise ValueError(f"unknown semantics {name!r}") from None


ALL_SEMANTICS = tuple(Semantics)


class AFSyntaxError(ValueError):
    pass


@dataclass(eq=False)
class AbstractAF:
    """Attack graph on nodes ``0..n-1``; adjacency is kept both ways as bitsets."""

    n: int
    attackers: list[int]
    attackees: list[int]
    labels: list[str] | None = field(default=None)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], labels: Sequence[str] | None = None) -> "AbstractAF":
        attackers = [0] * n
        attackees = [0] * n
        for a, b in edges:
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"edge ({a}, {b}) outside {n} nodes")
            attackees[a] |= 1 << b
            attackers[b] |= 1 << a
        return cls(n, attackers, attackees, list(labels) if labels is not None else None)

    def edges(self) -> list[tuple[int, int]]:
        return [(a, b) for a in range(self.n) for b in range(self.n) if self.attackees[a] >> b & 1]

    @property
    def edge_count(self) -> int:
        return sum(x.bit_count() for x in self.attackees)

    def attacks(self, a: int, b: int) -> bool:
        return bool(self.attackees[a] >> b & 1)

    def has_self_attack(self) -> bool:
        return any(self.attackers[x] >> x & 1 for x in range(self.n))

    def attacked_by(self, e: int) -> int:
        acc = 0
        x = e
        while x:
            low = x & -x
            acc |= self.attackees[low.bit_length() - 1]
            x ^= low
        return acc

    def mask(self, nodes: Iterable[int | str]) -> int:
        bits = 0
        for x in nodes:
            if isinstance(x, str):
                if self.labels is None:
                    raise ValueError("framework has no labels")
                x = self.labels.index(x)
            bits |= 1 << x
        return bits

    def names(self, e: int) -> list[str]:
        return [self.label(x) for x in range(self.n) if e >> x & 1]

    def label(self, x: int) -> str:
        return self.labels[x] if self.labels is not None else str(x)


def is_conflict_free(af: AbstractAF, e: int) -> bool:
    return af.attacked_by(e) & e == 0


def defends(af: AbstractAF, e: int, x: int) -> bool:
    return af.attackers[x] & ~af.attacked_by(e) == 0


def is_admissible(af: AbstractAF, e: int) -> bool:
    if not is_conflict_free(af, e):
        return False
    hit = af.attacked_by(e)
    return all(af.attackers[x] & ~hit == 0 for x in range(af.n) if e >> x & 1)


def is_complete(af: AbstractAF, e: int) -> bool:
    if not is_conflict_free(af, e):
        return False
    hit = af.attacked_by(e)
    return all((af.attackers[x] & ~hit == 0) == bool(e >> x & 1) for x in range(af.n))


def is_stable(af: AbstractAF, e: int) -> bool:
    return is_conflict_free(af, e) and (e | af.attacked_by(e)) == (1 << af.n) - 1


def _maximal(family: list[int], key=lambda e: e) -> list[int]:
    keys = [key(e) for e in family]
    out = []
    for i, e in enumerate(family):
        k = keys[i]
        if not any(k2 != k and k & ~k2 == 0 for k2 in keys):
            out.append(e)
    return out


def _check_cap(af: AbstractAF, sem: Semantics, limits: Limits) -> None:
    light = sem in (Semantics.GROUNDED, Semantics.STABLE)
    cap = limits.max_nodes_light if light else limits.max_nodes_enum
    if af.n > cap:
        raise CapExceeded(f"{af.n} nodes exceed the {sem.value} node cap of {cap}")


def _budget_error(limits: Limits) -> CapExceeded:
    return CapExceeded(f"search budget of {limits.search_budget} nodes exhausted")


def _search(af: AbstractAF, mode: int, limits: Limits, fixed_in: int = 0, fixed_out: int = 0,
            limit: int = 0) -> list[int]:
    found, used = kernels.complete_search(af.n, af.attackers, af.attackees, mode, limits.search_budget,
                                          fixed_in, fixed_out, limit)
    if used > limits.search_budget:
        raise _budget_error(limits)
    return found


def _range(af: AbstractAF, e: int) -> int:
    return e | af.attacked_by(e)


def _solve(af: AbstractAF, sem: Semantics, limits: Limits, limit: int = 0) -> tuple[list[int], bool]:
    """Up to ``limit`` extensions (all when 0) and whether the list is complete."""
    probe = limit + 1 if limit else 0
    if sem is Semantics.GROUNDED:
        return [kernels.grounded(af.n, af.attackers, af.attackees)], True
    if sem is Semantics.IDEAL:
        return [ideal_extension(af, limits)], True
    if sem is Semantics.SEMI_STABLE:
        if _search(af, kernels.STABLE, limits, limit=1):
            found = _search(af, kernels.STABLE, limits, limit=probe)
        else:
            complete = _search(af, kernels.COMPLETE, limits)
            found = _maximal(complete, key=lambda e: _range(af, e))
    else:
        mode = {Semantics.STABLE: kernels.STABLE, Semantics.COMPLETE: kernels.COMPLETE,
                Semantics.PREFERRED: kernels.PREFERRED}[sem]
        found = _search(af, mode, limits, limit=probe)
    if limit and len(found) > limit:
        return found[:limit], False
    return found, True


def credulously_accepted(af: AbstractAF, limits: Limits = DEFAULT_LIMITS) -> int:
    """Nodes belonging to at least one admissible set."""
    accepted = 0
    rejected = 0
    for x in range(af.n):
        if (accepted | rejected) >> x & 1:
            continue
        found = _search(af, kernels.COMPLETE, limits, fixed_in=1 << x, limit=1)
        if found:
            accepted |= found[0]
        else:
            rejected |= 1 << x
    return accepted


def ideal_extension(af: AbstractAF, limits: Limits = DEFAULT_LIMITS) -> int:
    """Largest admissible set inside every preferred extension.

    An admissible set lies in every preferred extension exactly when no
    admissible set attacks it, so the answer is the largest self-defending
    subset of the accepted nodes that no accepted node attacks.  Such nodes
    are pairwise conflict-free, and pruning undefended ones reaches it.
    """
    ca = credulously_accepted(af, limits)
    s = 0
    for x in range(af.n):
        if ca >> x & 1 and af.attackers[x] & ca == 0:
            s |= 1 << x
    return _prune_undefended(af, s)


def _prune_undefended(af: AbstractAF, s: int) -> int:
    while True:
        hit = af.attacked_by(s)
        keep = s
        for x in range(af.n):
            if s >> x & 1 and af.attackers[x] & ~hit:
                keep &= ~(1 << x)
        if keep == s:
            return s
        s = keep


def ideal_from_preferred(af: AbstractAF, preferred: list[int]) -> int:
    """Largest admissible subset of the intersection of the preferred extensions."""
    s = (1 << af.n) - 1
    for e in preferred:
        s &= e
    return _prune_undefended(af, s)


class _Reduced:
    """A framework together with its twin quotient, when that helps."""

    def __init__(self, af: AbstractAF, reduce: bool):
        self.af = af
        self.q = af
        self.members: list[int] | None = None
        self.mapping: list[int] | None = None
        if reduce:
            q, mapping, merged = quotient_af(af)
            if merged and q.n < af.n:
                self.q, self.mapping = q, mapping
                self.members = [0] * q.n
                for x, c in enumerate(mapping):
                    self.members[c] |= 1 << x

    def lift(self, e: int) -> int:
        if self.members is None:
            return e
        bits = 0
        for c in range(self.q.n):
            if e >> c & 1:
                bits |= self.members[c]
        return bits

    def project(self, e: int) -> int | None:
        """Quotient image of ``e``, or ``None`` if it splits a twin class."""
        if self.members is None:
            return e
        out = 0
        for c, m in enumerate(self.members):
            part = e & m
            if part == m:
                out |= 1 << c
            elif part:
                return None
        return out


def _coerce(sem: Semantics | str) -> Semantics:
    return Semantics.parse(sem) if isinstance(sem, str) else sem


def extensions(af: AbstractAF, sem: Semantics | str, limits: Limits = DEFAULT_LIMITS, reduce: bool = True) -> list[int]:
    """The exact extension family of ``af`` under ``sem``, ascending as bitsets.

    With ``reduce`` the framework is first collapsed by :func:`quotient_af`
    and the answers are mapped back.
    """
    family, _ = find_extensions(af, sem, limits, 0, reduce)
    return family


def find_extensions(af: AbstractAF, sem: Semantics | str, limits: Limits = DEFAULT_LIMITS, limit: int = 0,
                    reduce: bool = True) -> tuple[list[int], bool]:
    """At most ``limit`` extensions (0 means all) plus an exhaustiveness flag.

    Families of real frameworks can be astronomically large; a bounded call
    still decides whether the family has more than ``limit`` members.
    """
    sem = _coerce(sem)
    _check_cap(af, sem, limits)
    red = _Reduced(af, reduce)
    found, exhaustive = _solve(red.q, sem, limits, limit)
    return sorted(red.lift(e) for e in found), exhaustive


def is_preferred(af: AbstractAF, e: int, limits: Limits = DEFAULT_LIMITS) -> bool:
    if not is_complete(af, e):
        return False
    return len(_search(af, kernels.COMPLETE, limits, fixed_in=e, limit=2)) == 1


def is_semi_stable(af: AbstractAF, e: int, limits: Limits = DEFAULT_LIMITS) -> bool:
    if not is_complete(af, e):
        return False
    if _search(af, kernels.STABLE, limits, limit=1):
        return is_stable(af, e)
    r = _range(af, e)
    return not any(r & ~(k := _range(af, f)) == 0 and k != r for f in _search(af, kernels.COMPLETE, limits))


def is_extension(af: AbstractAF, e: int, sem: Semantics | str, limits: Limits = DEFAULT_LIMITS,
                 reduce: bool = True) -> bool:
    """Membership test that never lists the whole family when avoidable."""
    sem = _coerce(sem)
    if sem is Semantics.STABLE:
        return is_stable(af, e)
    if not is_complete(af, e):
        return False
    if sem is Semantics.COMPLETE:
        return True
    if sem is Semantics.GROUNDED:
        return e == kernels.grounded(af.n, af.attackers, af.attackees)
    red = _Reduced(af, reduce)
    qe = red.project(e)
    if qe is None:
        return False
    if sem is Semantics.PREFERRED:
        return is_preferred(red.q, qe, limits)
    if sem is Semantics.SEMI_STABLE:
        return is_semi_stable(red.q, qe, limits)
    return qe == ideal_extension(red.q, limits)


def maximal_conflict_free_sets(af: AbstractAF, limits: Limits = DEFAULT_LIMITS, reduce: bool = True) -> list[int]:
    red = _Reduced(af, reduce)
    q = red.q
    found, used = kernels.maximal_conflict_free(q.n, q.attackers, q.attackees, limits.search_budget)
    if used > limits.search_budget:
        raise _budget_error(limits)
    return sorted(red.lift(e) for e in found)


def unstable_maximal_conflict_free(af: AbstractAF, limits: Limits = DEFAULT_LIMITS) -> tuple[int, int] | None:
    """A maximal conflict-free set that is not stable, with an unattacked outsider.

    Returns ``(set, node)`` or ``None``.  The search runs once per node ``x``
    over sets avoiding ``x`` and its attackers that stay maximal, so it never
    lists the (often exponential) family itself.
    """
    seen: set[tuple[int, int]] = set()
    for x in range(af.n):
        key = (af.attackers[x], af.attackees[x])
        if key in seen:
            continue
        seen.add(key)
        banned = af.attackers[x] | 1 << x
        found, used = kernels.maximal_conflict_free(af.n, af.attackers, af.attackees, limits.search_budget,
                                                    ~banned & ((1 << af.n) - 1), banned, 1)
        if used > limits.search_budget:
            raise _budget_error(limits)
        if found:
            return found[0], x
    return None


def components(af: AbstractAF) -> list[int]:
    """Weakly connected components as node bitsets, ordered by lowest node."""
    left = (1 << af.n) - 1
    out = []
    while left:
        comp = left & -left
        frontier = comp
        while frontier:
            near = 0
            x = frontier
            while x:
                low = x & -x
                i = low.bit_length() - 1
                near |= af.attackers[i] | af.attackees[i]
                x ^= low
            frontier = near & ~comp
            comp |= near
        out.append(comp)
        left &= ~comp
    return out


def restrict(af: AbstractAF, nodes: int) -> AbstractAF:
    """The sub-framework induced by ``nodes``, renumbered in ascending order."""
    idx = [x for x in range(af.n) if nodes >> x & 1]
    pos = {x: i for i, x in enumerate(idx)}
    edges = [(pos[a], pos[b]) for a in idx for b in idx if af.attackees[a] >> b & 1]
    labels = [af.label(x) for x in idx] if af.labels is not None else None
    return AbstractAF.from_edges(len(idx), edges, labels)


@dataclass
class StableSemiStableCheck:
    holds: bool
    stable_nonempty: bool
    enumerated: int  # components compared family against family
    certified: int  # components settled by a full-range complete extension
    detail: str = ""


def check_stable_semi_stable(af: AbstractAF, limits: Limits = DEFAULT_LIMITS,
                             component_budget: int = 5_000) -> StableSemiStableCheck:
    """Does a nonempty stable family coincide with the semi-stable family?

    Both families factor over weakly connected components, so the comparison
    runs per component of the twin quotient.  Semi-stable is computed here
    from scratch as the range-maximal complete extensions.  A component whose
    complete family outgrows ``component_budget`` is settled instead by a
    stable extension re-verified as complete with full range: any such set
    caps every range, which forces range-maximal means full range.
    """
    q = _Reduced(af, True).q
    parts = [restrict(q, c) for c in components(q)]
    for part in parts:
        if not _search(part, kernels.STABLE, limits, limit=1):
            return StableSemiStableCheck(True, False, 0, 0)
    small = Limits(limits.max_atoms, limits.max_arguments, limits.max_nodes_light, limits.max_nodes_enum,
                   component_budget)
    enumerated = certified = 0
    for k, part in enumerate(parts):
        try:
            complete = _search(part, kernels.COMPLETE, small)
        except CapExceeded:
            e = _search(part, kernels.STABLE, limits, limit=1)[0]
            if not (is_complete(part, e) and _range(part, e) == (1 << part.n) - 1):
                return StableSemiStableCheck(False, True, enumerated, certified,
                                             f"component {k}: stable witness fails re-verification")
            certified += 1
            continue
        stable = sorted(_search(part, kernels.STABLE, limits))
        semi = sorted(_maximal(complete, key=lambda e: _range(part, e)))
        if stable != semi:
            return StableSemiStableCheck(False, True, enumerated, certified,
                                         f"component {k}: {len(stable)} stable vs {len(semi)} semi-stable")
        enumerated += 1
    return StableSemiStableCheck(True, True, enumerated, certified)


def quotient_af(af: AbstractAF) -> tuple[AbstractAF, list[int], bool]:
    """Merge nodes that have the same attackers and the same attackees.

    Returns ``(quotient, mapping, reduced)`` where ``mapping[x]`` is the class
    of node ``x``.  Frameworks with self-attacks are returned unchanged with
    ``reduced=False``.
    """
    if af.has_self_attack():
        return af, list(range(af.n)), False
    classes: dict[tuple[int, int], int] = {}
    mapping = []
    reps = []
    for x in range(af.n):
        key = (af.attackers[x], af.attackees[x])
        if key not in classes:
            classes[key] = len(reps)
            reps.append(x)
        mapping.append(classes[key])
    k = len(reps)
    edges = [(i, j) for i in range(k) for j in range(k) if af.attackees[reps[i]] >> reps[j] & 1]
    labels = [af.label(r) for r in reps] if af.labels is not None else None
    return AbstractAF.from_edges(k, edges, labels), mapping, True


_STMT_RE = re.compile(r"\s*(arg|att)\s*\(\s*([^(),.\s]+)\s*(?:,\s*([^(),.\s]+)\s*)?\)\s*\.")


def load_af(text: str) -> AbstractAF:
    """Parse ``arg(a).`` / ``att(a,b).`` statements; ``%`` starts a comment."""
    text = "\n".join(line.split("%", 1)[0] for line in text.splitlines())
    names: list[str] = []
    index: dict[str, int] = {}
    edges = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _STMT_RE.match(text, pos)
        if m is None:
            snippet = text[pos:].strip().splitlines()[0][:30]
            raise AFSyntaxError(f"cannot parse statement near {snippet!r}")
        kind, a, b = m.groups()
        if kind == "arg":
            if b is not None:
                raise AFSyntaxError(f"arg/1 takes one name, got arg({a},{b})")
            if a in index:
                raise AFSyntaxError(f"duplicate argument {a!r}")
            index[a] = len(names)
            names.append(a)
        else:
            if b is None:
                raise AFSyntaxError(f"att/2 needs two names, got att({a})")
            for name in (a, b):
                if name not in index:
                    raise AFSyntaxError(f"att({a},{b}) mentions undeclared argument {name!r}")
            edges.append((index[a], index[b]))
        pos = m.end()
    return AbstractAF.from_edges(len(names), edges, names)


def dump_af(af: AbstractAF) -> str:
    lines = [f"arg({af.label(x)})." for x in range(af.n)]
    lines += [f"att({af.label(a)},{af.label(b)})." for a, b in af.edges()]
    return "\n".join(lines) + "\n"
