"""Propositional formulas and their exact truth-table semantics.

A formula is evaluated against an ordered atom universe.  Valuation ``v`` in
``range(2 ** n)`` gives atom ``j`` the value of bit ``j`` of ``v``; a set of
valuations is stored as a Python int whose bit ``v`` marks membership.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence, Union

ATOM_RE = re.compile(r"[a-z][a-zA-Z0-9_]*")


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        where = "end of input" if pos >= len(text) else f"line {line}, column {col}"
        super().__init__(f"{message} at {where}")
        self.line = line
        self.column = col
        self.pos = pos


class UniverseError(ValueError):
    """Raised when model sets or formulas do not share an atom universe."""


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Not:
    child: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


Formula = Union[Atom, Not, And, Or, Implies, Iff]

# ---------------------------------------------------------------- parsing

_TOKEN_RE = re.compile(r"\s*(?:(<->)|(->)|([!&|()])|([a-z][a-zA-Z0-9_]*))")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while True:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            rest = text[pos:]
            if rest.strip() == "":
                break
            bad = pos + (len(rest) - len(rest.lstrip()))
            raise FormulaSyntaxError(f"unexpected character {text[bad]!r}", text, bad)
        tok = m.group(m.lastindex)
        tokens.append((tok, m.start(m.lastindex)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def pos(self) -> int:
        return self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.text)

    def take(self) -> str:
        tok = self.tokens[self.i][0]
        self.i += 1
        return tok

    def expect(self, tok: str) -> None:
        if self.peek() != tok:
            found = self.peek()
            what = "end of input" if found is None else repr(found)
            raise FormulaSyntaxError(f"expected {tok!r}, found {what}", self.text, self.pos())
        self.i += 1

    def formula(self) -> Formula:
        node = self.imp()
        while self.peek() == "<->":
            self.take()
            node = Iff(node, self.imp())
        return node

    def imp(self) -> Formula:
        node = self.disj()
        if self.peek() == "->":
            self.take()
            return Implies(node, self.imp())
        return node

    def disj(self) -> Formula:
        node = self.conj()
        while self.peek() == "|":
            self.take()
            node = Or(node, self.conj())
        return node

    def conj(self) -> Formula:
        node = self.unary()
        while self.peek() == "&":
            self.take()
            node = And(node, self.unary())
        return node

    def unary(self) -> Formula:
        tok = self.peek()
        if tok == "!":
            self.take()
            return Not(self.unary())
        if tok == "(":
            self.take()
            node = self.formula()
            self.expect(")")
            return node
        if tok is not None and ATOM_RE.fullmatch(tok):
            self.take()
            return Atom(tok)
        what = "end of input" if tok is None else repr(tok)
        raise FormulaSyntaxError(f"expected formula, found {what}", self.text, self.pos())


def parse_formula(text: str) -> Formula:
    """Parse ``text`` into a formula AST.

    Precedence from tightest: ``!``, ``&``, ``|``, ``->`` (right
    associative), ``<->``.  ``&``, ``|`` and ``<->`` associate to the left.
    """
    if not text or not text.strip():
        raise FormulaSyntaxError("empty formula", text, 0)
    p = _Parser(text)
    node = p.formula()
    if p.peek() is not None:
        raise FormulaSyntaxError(f"unexpected {p.peek()!r}", text, p.pos())
    return node


# ---------------------------------------------------------------- printing

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4, Not: 5, Atom: 6}
_SYM = {Iff: "<->", Implies: "->", Or: "|", And: "&"}


def to_text(f: Formula) -> str:
    """Print ``f`` with the fewest parentheses that parse back to ``f``."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Not):
        inner = to_text(f.child)
        return "!" + (inner if _PREC[type(f.child)] >= _PREC[Not] else f"({inner})")
    prec = _PREC[type(f)]
    left, right = to_text(f.left), to_text(f.right)
    lp, rp = _PREC[type(f.left)], _PREC[type(f.right)]
    if isinstance(f, Implies):
        # right associative
        if lp <= prec:
            left = f"({left})"
        if rp < prec:
            right = f"({right})"
    else:
        if lp < prec:
            left = f"({left})"
        if rp <= prec:
            right = f"({right})"
    return f"{left} {_SYM[type(f)]} {right}"


def atoms_of(f: Formula) -> set[str]:
    out: set[str] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Atom):
            out.add(g.name)
        elif isinstance(g, Not):
            stack.append(g.child)
        else:
            stack.append(g.left)
            stack.append(g.right)
    return out


def depth(f: Formula) -> int:
    if isinstance(f, Atom):
        return 0
    if isinstance(f, Not):
        return 1 + depth(f.child)
    return 1 + max(depth(f.left), depth(f.right))


# ---------------------------------------------------------------- semantics


@dataclass(frozen=True)
class AtomUniverse:
    atoms: tuple[str, ...]

    def __post_init__(self):
        if list(self.atoms) != sorted(set(self.atoms)):
            raise ValueError("atom universe must be sorted and duplicate-free")

    @classmethod
    def of(cls, names: Iterable[str]) -> "AtomUniverse":
        return cls(tuple(sorted(set(names))))

    @property
    def n(self) -> int:
        return len(self.atoms)

    @property
    def size(self) -> int:
        """Number of valuations."""
        return 1 << len(self.atoms)

    @property
    def full(self) -> int:
        return (1 << (1 << len(self.atoms))) - 1

    def index(self, name: str) -> int:
        try:
            return self.atoms.index(name)
        except ValueError:
            raise UniverseError(f"atom {name!r} is not in the universe {list(self.atoms)}") from None


@lru_cache(maxsize=None)
def atom_bits(j: int, n: int) -> int:
    """Valuations of an ``n``-atom universe in which atom ``j`` is true."""
    bits = 0
    for v in range(1 << n):
        if v >> j & 1:
            bits |= 1 << v
    return bits


def _eval(f: Formula, u: AtomUniverse) -> int:
    full = u.full
    if isinstance(f, Atom):
        return atom_bits(u.index(f.name), u.n)
    if isinstance(f, Not):
        return full ^ _eval(f.child, u)
    a, b = _eval(f.left, u), _eval(f.right, u)
    if isinstance(f, And):
        return a & b
    if isinstance(f, Or):
        return a | b
    if isinstance(f, Implies):
        return (full ^ a) | b
    return full ^ (a ^ b)


@dataclass(frozen=True)
class ModelSet:
    """A set of valuations over an ``n``-atom universe, as a bitset."""

    bits: int
    n: int

    @classmethod
    def full_set(cls, n: int) -> "ModelSet":
        return cls((1 << (1 << n)) - 1, n)

    @classmethod
    def from_indices(cls, indices: Iterable[int], n: int) -> "ModelSet":
        bits = 0
        for v in indices:
            if not 0 <= v < 1 << n:
                raise ValueError(f"valuation {v} out of range for n={n}")
            bits |= 1 << v
        return cls(bits, n)

    def indices(self) -> list[int]:
        return [v for v in range(1 << self.n) if self.bits >> v & 1]

    def is_empty(self) -> bool:
        return self.bits == 0

    def __len__(self) -> int:
        return self.bits.bit_count()


def model_set(f: Formula, u: AtomUniverse) -> ModelSet:
    """Exactly the valuations of ``u`` that satisfy ``f``."""
    missing = atoms_of(f) - set(u.atoms)
    if missing:
        raise UniverseError(f"atoms {sorted(missing)} are not in the universe {list(u.atoms)}")
    return ModelSet(_eval(f, u), u.n)


def _same_universe(sets: Sequence[ModelSet]) -> None:
    if len({s.n for s in sets}) > 1:
        raise UniverseError("model sets are over different universes")


def entails(premises: ModelSet, conclusion: ModelSet) -> bool:
    _same_universe([premises, conclusion])
    return premises.bits & ~conclusion.bits == 0


def equivalent(a: ModelSet, b: ModelSet) -> bool:
    _same_universe([a, b])
    return a.bits == b.bits


def negate_class(c: ModelSet) -> ModelSet:
    return ModelSet(c.bits ^ ((1 << (1 << c.n)) - 1), c.n)


def conjoin(sets: Sequence[ModelSet], n: int | None = None) -> ModelSet:
    """Intersection of ``sets``; the empty conjunction is the full set.

    ``n`` is needed only when ``sets`` is empty.
    """
    if not sets:
        if n is None:
            raise UniverseError("empty conjunction needs the universe size")
        return ModelSet.full_set(n)
    _same_universe(sets)
    if n is not None and sets[0].n != n:
        raise UniverseError("model sets are over a different universe")
    bits = sets[0].bits
    for s in sets[1:]:
        bits &= s.bits
    return ModelSet(bits, sets[0].n)


def dnf_text(bits: int, u: AtomUniverse) -> str:
    """Full DNF over ``u`` for a class, ``T``/``F`` for the extremes."""
    if bits == 0:
        return "F"
    if bits == u.full:
        return "T"
    terms = []
    for v in range(u.size):
        if bits >> v & 1:
            lits = [a if v >> j & 1 else "!" + a for j, a in enumerate(u.atoms)]
            terms.append(" & ".join(lits))
    if len(terms) == 1:
        return terms[0]
    return " | ".join(t if " " not in t else f"({t})" for t in terms)
