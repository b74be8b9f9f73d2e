"""Formulas, sequents and derivation trees.

Negation is primitive on atoms only (``PerpAtom``); the negation of a
compound formula is always computed with :func:`dual`.  All values are
immutable and hashable.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Optional, Tuple, Union

ATOM_RE = re.compile(r"[A-Z][A-Za-z0-9]*\Z")


class Op(enum.Enum):
    """Binary connectives, valued by their ASCII token."""

    WITH = "&"
    OR = "v"
    TIMES = "*"
    PAR = "%"
    ENT = "@"
    DUAL_ENT = "$"

    @property
    def is_right(self) -> bool:
        # formation acts on the right of the turnstile
        return self in (Op.WITH, Op.PAR, Op.ENT)


# symmetric partner of each connective
DUAL_OP = {
    Op.WITH: Op.OR,
    Op.OR: Op.WITH,
    Op.TIMES: Op.PAR,
    Op.PAR: Op.TIMES,
    Op.ENT: Op.DUAL_ENT,
    Op.DUAL_ENT: Op.ENT,
}


def _check_name(name: str) -> None:
    if not isinstance(name, str) or not ATOM_RE.match(name):
        raise ValueError(f"invalid atom identifier: {name!r}")


@dataclass(frozen=True)
class Atom:
    name: str

    def __post_init__(self):
        _check_name(self.name)

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class PerpAtom:
    name: str

    def __post_init__(self):
        _check_name(self.name)

    def __str__(self):
        return self.name + "^"


@dataclass(frozen=True)
class Bin:
    op: Op
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return f"({self.left} {self.op.value} {self.right})"


Formula = Union[Atom, PerpAtom, Bin]


@dataclass(frozen=True)
class Sequent:
    """``antecedent |- succedent``; both sides are ordered and may be empty."""

    antecedent: Tuple[Formula, ...] = ()
    succedent: Tuple[Formula, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "antecedent", tuple(self.antecedent))
        object.__setattr__(self, "succedent", tuple(self.succedent))

    def __str__(self):
        left = ", ".join(map(str, self.antecedent))
        right = ", ".join(map(str, self.succedent))
        return " ".join(part for part in (left, "|-", right) if part)


@dataclass(frozen=True)
class Derivation:
    """Conclusion-first proof tree.

    ``rule`` is kept as a plain string so that unknown rule names survive
    parsing and are reported by the kernel.  ``label`` is an optional
    display tag (e.g. the name a rule carries in a textbook figure).
    """

    rule: str
    conclusion: Sequent
    premises: Tuple["Derivation", ...] = ()
    label: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "rule", str(getattr(self.rule, "value", self.rule)))
        object.__setattr__(self, "premises", tuple(self.premises))

    def walk(self, path: Tuple[int, ...] = ()) -> Iterator[Tuple[Tuple[int, ...], "Derivation"]]:
        """Pre-order traversal yielding ``(path, node)`` pairs."""
        yield path, self
        for i, sub in enumerate(self.premises):
            yield from sub.walk(path + (i,))

    def size(self) -> int:
        return sum(1 for _ in self.walk())

    def height(self, skip=("EXCH_L", "EXCH_R")) -> int:
        """Longest root-to-leaf count of nodes, ignoring exchange nodes."""
        below = max((p.height(skip) for p in self.premises), default=0)
        return below + (0 if self.rule in skip else 1)


class QubitPattern(NamedTuple):
    atom: str


class BellShape(enum.Enum):
    PHI_LIKE = "PhiLike"
    PSI_LIKE = "PsiLike"


def dual(f: Formula) -> Formula:
    """De Morgan dual.

    Atoms swap with their primitive negations, ``&``/``v`` and ``*``/``%``
    swap with dualized operands.  ``@`` and ``$`` swap with their operands
    left untouched, so that the dual of ``Q_A @ Q_B`` is ``Q_A $ Q_B``.
    """
    if isinstance(f, Atom):
        return PerpAtom(f.name)
    if isinstance(f, PerpAtom):
        return Atom(f.name)
    if f.op in (Op.ENT, Op.DUAL_ENT):
        return Bin(DUAL_OP[f.op], f.left, f.right)
    return Bin(DUAL_OP[f.op], dual(f.left), dual(f.right))


def mk_qubit(atom: str) -> Bin:
    """``X & X^``, the formula of a qubit over atom ``X``."""
    return Bin(Op.WITH, Atom(atom), PerpAtom(atom))


def match_qubit_pattern(f: Formula) -> Optional[QubitPattern]:
    if (
        isinstance(f, Bin)
        and f.op is Op.WITH
        and isinstance(f.left, Atom)
        and isinstance(f.right, PerpAtom)
        and f.left.name == f.right.name
    ):
        return QubitPattern(f.left.name)
    return None


def qubit_pair(f: Formula, op: Op = Op.ENT) -> Optional[Tuple[str, str]]:
    """Atom names ``(a, b)`` when ``f`` is ``Q_a op Q_b``, else None."""
    if isinstance(f, Bin) and f.op is op:
        qa, qb = match_qubit_pattern(f.left), match_qubit_pattern(f.right)
        if qa and qb:
            return qa.atom, qb.atom
    return None


def entangle(a: str, b: str) -> Bin:
    return Bin(Op.ENT, mk_qubit(a), mk_qubit(b))


def bell_formula(kind: Union[BellShape, str]) -> Bin:
    kind = BellShape(kind)
    a, b = Atom("A"), Atom("B")
    na, nb = PerpAtom("A"), PerpAtom("B")
    if kind is BellShape.PHI_LIKE:
        return Bin(Op.WITH, Bin(Op.PAR, a, b), Bin(Op.PAR, na, nb))
    return Bin(Op.WITH, Bin(Op.PAR, a, nb), Bin(Op.PAR, na, b))


def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    if isinstance(f, Bin):
        yield from subformulas(f.left)
        yield from subformulas(f.right)


def is_well_formed(f: object) -> bool:
    """Structural walker: every node is an atom, a negated atom or a binary
    node over a known connective."""
    if isinstance(f, (Atom, PerpAtom)):
        return True
    return (
        isinstance(f, Bin)
        and isinstance(f.op, Op)
        and is_well_formed(f.left)
        and is_well_formed(f.right)
    )
