"""Knowledge bases and subset analytics (maximal consistent / minimal inconsistent)."""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .formula import (
    And,
    Atom,
    AtomUniverse,
    Formula,
    FormulaSyntaxError,
    Iff,
    Implies,
    ModelSet,
    Not,
    Or,
    atoms_of,
    model_set,
    parse_formula,
    to_text,
)
from .limits import CapExceeded

MAX_ATOMS = 10
MAX_FORMULAS = 12


class KBError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class KnowledgeBase:
    formulas: tuple[Formula, ...]
    texts: tuple[str, ...]
    universe: AtomUniverse
    models: tuple[int, ...] = field(repr=False)

    @classmethod
    def from_formulas(
        cls,
        formulas: Sequence[Formula],
        texts: Sequence[str] | None = None,
        max_atoms: int = MAX_ATOMS,
        max_formulas: int = MAX_FORMULAS,
    ) -> "KnowledgeBase":
        formulas = tuple(formulas)
        texts = tuple(texts) if texts is not None else tuple(to_text(f) for f in formulas)
        if len(formulas) > max_formulas:
            raise CapExceeded(f"{len(formulas)} formulas exceed the cap of {max_formulas}")
        seen: dict[Formula, int] = {}
        for i, f in enumerate(formulas):
            if f in seen:
                raise KBError(f"duplicate formula {texts[i]!r} (lines {seen[f]} and {i})")
            seen[f] = i
        names: set[str] = set()
        for f in formulas:
            names |= atoms_of(f)
        if len(names) > max_atoms:
            raise CapExceeded(f"{len(names)} atoms exceed the cap of {max_atoms}")
        u = AtomUniverse.of(names)
        models = tuple(model_set(f, u).bits for f in formulas)
        return cls(formulas, texts, u, models)

    @property
    def m(self) -> int:
        return len(self.formulas)

    @property
    def n(self) -> int:
        return self.universe.n

    @property
    def full(self) -> int:
        return self.universe.full

    @property
    def all_mask(self) -> int:
        return (1 << self.m) - 1

    def model_set(self, i: int) -> ModelSet:
        return ModelSet(self.models[i], self.n)

    def conj(self, mask: int) -> int:
        """Model bits of the conjunction of the formulas selected by ``mask``."""
        bits = self.full
        i = 0
        while mask:
            if mask & 1:
                bits &= self.models[i]
            mask >>= 1
            i += 1
        return bits

    def consistent(self, mask: int) -> bool:
        return self.conj(mask) != 0

    def query(self, text_or_formula: str | Formula) -> ModelSet:
        """Model set of a query formula; it may only use atoms of this KB."""
        f = parse_formula(text_or_formula) if isinstance(text_or_formula, str) else text_or_formula
        return model_set(f, self.universe)

    def indices(self, mask: int) -> list[int]:
        return [i for i in range(self.m) if mask >> i & 1]

    def describe(self, mask: int) -> list[str]:
        return [self.texts[i] for i in self.indices(mask)]

    def digest(self) -> str:
        h = hashlib.sha256("\n".join(self.texts).encode()).hexdigest()
        return h[:16]

    def to_text(self) -> str:
        return "".join(t + "\n" for t in self.texts)

    def __repr__(self) -> str:
        return f"KnowledgeBase({list(self.texts)!r})"


def load_kb(text: str, max_atoms: int = MAX_ATOMS, max_formulas: int = MAX_FORMULAS) -> KnowledgeBase:
    """Read a KB: one formula per line; blank lines and ``#`` lines are skipped."""
    formulas, texts = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            formulas.append(parse_formula(line))
        except FormulaSyntaxError as e:
            raise KBError(f"line {lineno}: {e}") from e
        texts.append(line)
    return KnowledgeBase.from_formulas(formulas, texts, max_atoms, max_formulas)


def _conj_table(kb: KnowledgeBase) -> list[int]:
    """Conjunction model bits for every subset mask."""
    table = [kb.full] * (1 << kb.m)
    for s in range(1, 1 << kb.m):
        low = s & -s
        table[s] = table[s ^ low] & kb.models[low.bit_length() - 1]
    return table


def mc_subsets(kb: KnowledgeBase) -> list[int]:
    """The maximal consistent subsets of ``kb`` as ascending bitmasks."""
    table = _conj_table(kb)
    out = []
    # A consistent subset is maximal iff no one-element extension is consistent,
    # since consistency is inherited by subsets.
    for s in range(1 << kb.m):
        if not table[s]:
            continue
        free = kb.all_mask & ~s
        maximal = True
        while free:
            low = free & -free
            free ^= low
            if table[s | low]:
                maximal = False
                break
        if maximal:
            out.append(s)
    return out


def min_inconsistent_subsets(kb: KnowledgeBase) -> list[int]:
    table = _conj_table(kb)
    out = []
    for s in range(1 << kb.m):
        if table[s]:
            continue
        rest = s
        minimal = True
        while rest:
            low = rest & -rest
            rest ^= low
            if not table[s ^ low]:
                minimal = False
                break
        if minimal:
            out.append(s)
    return out


def free_formulas(kb: KnowledgeBase) -> int:
    """Mask of formulas belonging to no minimal inconsistent subset."""
    used = 0
    for c in min_inconsistent_subsets(kb):
        used |= c
    return kb.all_mask & ~used


# ---------------------------------------------------------------- generator

ATOM_NAMES = ("p", "q", "r", "s", "t", "u", "v", "w")


@dataclass(frozen=True)
class GeneratorConfig:
    atoms: int = 3
    formulas: int = 4
    max_depth: int = 2
    # relative weights of atom / ! / & / | / -> / <-> at inner positions
    weights: tuple[float, ...] = (3.0, 2.0, 2.0, 2.0, 1.0, 0.5)
    require_inconsistent: bool = False
    max_retries: int = 1000

    def validate(self, max_atoms: int = MAX_ATOMS, max_formulas: int = MAX_FORMULAS) -> None:
        if not 0 <= self.atoms <= min(max_atoms, len(ATOM_NAMES)):
            raise CapExceeded(f"generator atom count {self.atoms} outside [0, {min(max_atoms, len(ATOM_NAMES))}]")
        if not 0 <= self.formulas <= max_formulas:
            raise CapExceeded(f"generator formula count {self.formulas} outside [0, {max_formulas}]")
        if self.max_depth < 0 or len(self.weights) != 6 or min(self.weights) < 0:
            raise ValueError("bad generator depth or weights")
        if self.formulas and self.atoms == 0:
            raise ValueError("formulas need at least one atom")


def _random_formula(rng: random.Random, names: Sequence[str], depth: int, weights) -> Formula:
    if depth == 0:
        return Atom(rng.choice(names))
    kind = rng.choices(range(6), weights=weights)[0]
    if kind == 0:
        return Atom(rng.choice(names))
    if kind == 1:
        return Not(_random_formula(rng, names, depth - 1, weights))
    cls = (And, Or, Implies, Iff)[kind - 2]
    return cls(
        _random_formula(rng, names, depth - 1, weights),
        _random_formula(rng, names, depth - 1, weights),
    )


def random_kb(cfg: GeneratorConfig, seed: int) -> KnowledgeBase:
    """Deterministic random KB for ``(cfg, seed)``.

    Duplicate formulas are redrawn; with ``require_inconsistent`` whole KBs are
    redrawn until inconsistent.  Raises ``CapExceeded`` once ``cfg.max_retries``
    draws are spent.
    """
    cfg.validate()
    rng = random.Random(seed)
    names = ATOM_NAMES[: cfg.atoms]
    draws = 0
    while True:
        formulas: list[Formula] = []
        while len(formulas) < cfg.formulas:
            draws += 1
            if draws > cfg.max_retries:
                raise CapExceeded(f"random_kb gave up after {cfg.max_retries} draws for {cfg}")
            f = _random_formula(rng, names, cfg.max_depth, cfg.weights)
            if f not in formulas:
                formulas.append(f)
        kb = KnowledgeBase.from_formulas(formulas)
        if not cfg.require_inconsistent or not kb.consistent(kb.all_mask):
            return kb


@dataclass(frozen=True)
class SweepConfig:
    """Seeded family of random KBs; odd seeds are forced inconsistent."""

    count: int = 200
    first_seed: int = 1
    atoms: int = 3
    max_formulas: int = 4
    max_depth: int = 2

    def configs(self) -> Iterator[tuple[int, GeneratorConfig]]:
        for seed in range(self.first_seed, self.first_seed + self.count):
            yield seed, GeneratorConfig(
                atoms=self.atoms,
                formulas=min(self.max_formulas, 2 + (seed // 2) % 3),
                max_depth=self.max_depth,
                require_inconsistent=seed % 2 == 1,
            )

    def kbs(self) -> Iterator[tuple[int, KnowledgeBase]]:
        for seed, cfg in self.configs():
            yield seed, random_kb(cfg, seed)
