"""The finite argument core of a knowledge base.

Arguments built from a KB form an infinite set once every formula of the
language may serve as a conclusion.  Attack conditions only look at
conclusions up to logical equivalence, so the core keeps one argument per
(minimal consistent support, conclusion class over the KB's atoms).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .formula import ModelSet, dnf_text
from .kb import KnowledgeBase
from .limits import DEFAULT_LIMITS, CapExceeded, Limits


@dataclass(frozen=True, order=True)
class Argument:
    support: int  # bitmask over KB formula indices
    conclusion: int  # model bits of the conclusion class
    id: int = field(default=-1, compare=False)

    def conclusion_set(self, n: int) -> ModelSet:
        return ModelSet(self.conclusion, n)


@dataclass(eq=False)
class ArgumentSet:
    kb: KnowledgeBase
    args: list[Argument]
    by_support: dict[int, list[int]] = field(default_factory=dict, repr=False)
    by_conclusion: dict[int, list[int]] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.by_support:
            for a in self.args:
                self.by_support.setdefault(a.support, []).append(a.id)
                self.by_conclusion.setdefault(a.conclusion, []).append(a.id)

    def __len__(self) -> int:
        return len(self.args)

    def __iter__(self):
        return iter(self.args)

    def __getitem__(self, i: int) -> Argument:
        return self.args[i]

    def find(self, support: int, conclusion: int) -> Argument | None:
        for i in self.by_support.get(support, ()):
            if self.args[i].conclusion == conclusion:
                return self.args[i]
        return None

    def format(self, a: Argument | int) -> str:
        if isinstance(a, int):
            a = self.args[a]
        supp = ", ".join(self.kb.describe(a.support))
        return f"(<{supp}> |- <{dnf_text(a.conclusion, self.kb.universe)}>)"

    def mask_of(self, ids: Iterable[int]) -> int:
        bits = 0
        for i in ids:
            bits |= 1 << i
        return bits

    def ids_of(self, bits: int) -> list[int]:
        return [i for i in range(len(self.args)) if bits >> i & 1]


def _submasks(mask: int):
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def support_classes(kb: KnowledgeBase, support: int) -> list[int]:
    """Conclusion classes making ``support`` a minimal consistent support."""
    core = kb.conj(support)
    if core == 0:
        return []
    weaker = [kb.conj(support & ~(1 << i)) for i in kb.indices(support)]
    if any(w == core for w in weaker):
        return []
    free = kb.full & ~core
    out = []
    for extra in _submasks(free):
        c = core | extra
        # c must not be entailed by any co-singleton of the support
        if all(w & ~c for w in weaker):
            out.append(c)
    return out


def enumerate_arguments(kb: KnowledgeBase, limits: Limits = DEFAULT_LIMITS) -> ArgumentSet:
    """Every canonical argument of ``kb``, in ascending (support, conclusion) order."""
    if kb.n > limits.max_atoms:
        raise CapExceeded(f"{kb.n} atoms exceed the argument-core cap of {limits.max_atoms}")
    pairs: list[tuple[int, int]] = []
    for support in range(1 << kb.m):
        if kb.conj(support) == 0:
            continue
        classes = support_classes(kb, support)
        if len(pairs) + len(classes) > limits.max_arguments:
            projected = 1 << (kb.universe.size - kb.conj(support).bit_count())
            raise CapExceeded(
                f"argument cap {limits.max_arguments} exceeded at support "
                f"{{{', '.join(kb.describe(support))}}} (up to {projected} classes)"
            )
        pairs.extend((support, c) for c in classes)
    pairs.sort()
    args = [Argument(s, c, i) for i, (s, c) in enumerate(pairs)]
    return ArgumentSet(kb, args)


def args_of_subset(all_args: ArgumentSet, subset: int) -> set[int]:
    """Ids of the arguments whose support lies inside ``subset``."""
    out: set[int] = set()
    for support, ids in all_args.by_support.items():
        if support & ~subset == 0:
            out.update(ids)
    return out


def args_mask_of_subset(all_args: ArgumentSet, subset: int) -> int:
    bits = 0
    for support, ids in all_args.by_support.items():
        if support & ~subset == 0:
            for i in ids:
                bits |= 1 << i
    return bits


def base_of(all_args: ArgumentSet, ids: Iterable[int]) -> int:
    base = 0
    for i in ids:
        base |= all_args.args[i].support
    return base
