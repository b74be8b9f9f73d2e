"""Trusted checker for Basic logic with entanglement, over the cube of logics.

Every rule is checked node by node against its schema.  Context handling
follows one convention throughout:

* the side that holds the active formula(s) is the *active side*; the other
  side is passive and may hold any list Γ (or Δ);
* on the active side, extra formulas keep their position around the active
  ones (``pre + active + post``).  They are only legal when the variant has
  the matching context flag (L for the left side, R for the right side);
* in two-premise multiplicative rules the passive sides are concatenated
  (first premise first) and the active-side contexts are concatenated on
  each side of the principal formula;
* CUT is composition: the cut formula may sit anywhere in either premise
  and the other premise's side is spliced in its place, in every variant.

The @/$ rules fire only on qubit operands ``X & X^`` (``ENT_ATOM_REFL`` and
``EPR`` also on the post-measurement form ``A @ Q_B``).  They are disabled
in structural variants; ``EPR`` is enabled in B alone.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .formulas import (
    Atom,
    Bin,
    Derivation,
    Formula,
    Op,
    PerpAtom,
    Sequent,
    entangle,
    match_qubit_pattern,
    mk_qubit,
    qubit_pair,
)


@dataclass(frozen=True)
class LogicVariant:
    """A vertex of the cube: structural rules (S), left context (L), right context (R)."""

    structural: bool = False
    left_context: bool = False
    right_context: bool = False

    @property
    def name(self) -> str:
        return (
            "B"
            + ("S" if self.structural else "")
            + ("R" if self.right_context else "")
            + ("L" if self.left_context else "")
        )

    def __str__(self):
        return self.name

    @classmethod
    def from_name(cls, name: str) -> "LogicVariant":
        try:
            return VARIANTS[name]
        except KeyError:
            raise ValueError(f"unknown variant {name!r}; expected one of {', '.join(VARIANTS)}") from None


VARIANTS: Dict[str, LogicVariant] = {}
for _s in (False, True):
    for _r in (False, True):
        for _l in (False, True):
            _v = LogicVariant(_s, _l, _r)
            VARIANTS[_v.name] = _v
B = VARIANTS["B"]

# conventional reading of the cube's vertices
VARIANT_NAMES = {
    "B": "Basic logic",
    "BL": "Basic logic + context on the left",
    "BR": "Basic logic + context on the right",
    "BRL": "linear logic",
    "BS": "quantum logic",
    "BSL": "intuitionistic logic",
    "BSR": "paraconsistent logic",
    "BSRL": "classical logic",
}


class RuleName(str, enum.Enum):
    ID = "ID"
    CUT = "CUT"
    EXCH_L = "EXCH_L"
    EXCH_R = "EXCH_R"
    WITH_FORM = "WITH_FORM"
    WITH_REFL_IMPL_1 = "WITH_REFL_IMPL_1"
    WITH_REFL_IMPL_2 = "WITH_REFL_IMPL_2"
    WITH_REFL_EXPL_1 = "WITH_REFL_EXPL_1"
    WITH_REFL_EXPL_2 = "WITH_REFL_EXPL_2"
    OR_FORM = "OR_FORM"
    OR_REFL_EXPL = "OR_REFL_EXPL"
    PAR_FORM = "PAR_FORM"
    PAR_REFL_EXPL = "PAR_REFL_EXPL"
    TIMES_FORM = "TIMES_FORM"
    TIMES_REFL_EXPL = "TIMES_REFL_EXPL"
    ENT_FORM = "ENT_FORM"
    ENT_REFL_IMPL_1 = "ENT_REFL_IMPL_1"
    ENT_REFL_IMPL_2 = "ENT_REFL_IMPL_2"
    ENT_REFL_EXPL_1 = "ENT_REFL_EXPL_1"
    ENT_REFL_EXPL_2 = "ENT_REFL_EXPL_2"
    ENT_ATOM_REFL = "ENT_ATOM_REFL"
    DENT_FORM = "DENT_FORM"
    DENT_REFL_IMPL_1 = "DENT_REFL_IMPL_1"
    DENT_REFL_IMPL_2 = "DENT_REFL_IMPL_2"
    DENT_REFL_EXPL_1 = "DENT_REFL_EXPL_1"
    DENT_REFL_EXPL_2 = "DENT_REFL_EXPL_2"
    EPR = "EPR"
    CONTR_L = "CONTR_L"
    CONTR_R = "CONTR_R"
    WEAK_L = "WEAK_L"
    WEAK_R = "WEAK_R"

    def __str__(self):
        return self.value


STRUCTURAL_RULES = frozenset(
    {RuleName.CONTR_L, RuleName.CONTR_R, RuleName.WEAK_L, RuleName.WEAK_R}
)
ENT_RULES = frozenset(r for r in RuleName if r.name.startswith(("ENT_", "DENT_")))


def rule_enabled(rule: RuleName, v: LogicVariant) -> bool:
    if rule in STRUCTURAL_RULES:
        return v.structural
    if rule in ENT_RULES:
        return not v.structural
    if rule is RuleName.EPR:
        return v == B
    return True


class ErrorKind(enum.Enum):
    UNKNOWN_RULE = "UnknownRule"
    ARITY_MISMATCH = "ArityMismatch"
    SCHEMA_MISMATCH = "SchemaMismatch"
    CONTEXT_NOT_ALLOWED = "ContextNotAllowed"
    RULE_DISABLED = "RuleDisabled"


class StepError(Exception):
    def __init__(self, kind: ErrorKind, detail: str, variant: Optional[LogicVariant] = None):
        self.kind = kind
        self.detail = detail
        self.variant = variant
        where = f"({variant})" if variant is not None and kind in (
            ErrorKind.CONTEXT_NOT_ALLOWED,
            ErrorKind.RULE_DISABLED,
        ) else ""
        super().__init__(f"{kind.value}{where}: {detail}")


# -- schema matching ---------------------------------------------------------
#
# A matcher yields one (left_ctx, right_ctx) pair per way the step fits the
# schema, telling whether the fit needs a context on that active side.

Side = Tuple[Formula, ...]
Match = Tuple[bool, bool]
Alternatives = Callable[[Formula], List[List[List[Formula]]]]


def _places(side: Side) -> Iterator[Tuple[Side, Formula, Side]]:
    for k, f in enumerate(side):
        yield side[:k], f, side[k + 1 :]


def _sides(s: Sequent, active_right: bool) -> Tuple[Side, Side]:
    return (s.succedent, s.antecedent) if active_right else (s.antecedent, s.succedent)


def _orient(ctx: bool, active_right: bool) -> Match:
    return (False, ctx) if active_right else (ctx, False)


def _replace(
    outer: Sequent, inner: Sequence[Sequent], active_right: bool, alternatives: Alternatives
) -> Iterator[Match]:
    """``outer`` has a principal formula P at some position; each ``inner``
    sequent has P's components (per premise) in that same position."""
    o_act, o_pas = _sides(outer, active_right)
    inner_sides = [_sides(s, active_right) for s in inner]
    for pre, principal, post in _places(o_act):
        for alt in alternatives(principal):
            if len(alt) != len(inner_sides):
                continue
            if all(
                pas == o_pas and act == pre + tuple(comps) + post
                for comps, (act, pas) in zip(alt, inner_sides)
            ):
                yield _orient(bool(pre or post), active_right)


def _multiplicative(
    concl: Sequent,
    prems: Sequence[Sequent],
    active_right: bool,
    split: Callable[[Formula], Optional[Tuple[Formula, Formula]]],
) -> Iterator[Match]:
    c_act, c_pas = _sides(concl, active_right)
    (p1_act, p1_pas), (p2_act, p2_pas) = (_sides(p, active_right) for p in prems)
    if c_pas != p1_pas + p2_pas:
        return
    for pre, principal, post in _places(c_act):
        parts = split(principal)
        if parts is None:
            continue
        x, y = parts
        for pre1, x1, post1 in _places(p1_act):
            if x1 != x:
                continue
            for pre2, y2, post2 in _places(p2_act):
                if y2 == y and pre1 + pre2 == pre and post1 + post2 == post:
                    yield _orient(bool(pre or post), active_right)


# component tables for the logical rules


def _op(op):
    def parts(f):
        if isinstance(f, Bin) and f.op is op:
            return f.left, f.right
        return None

    return parts


def _qubits(op, perp=False):
    def parts(f):
        pair = qubit_pair(f, op)
        if pair is None:
            return None
        a, b = pair
        return (PerpAtom(a), PerpAtom(b)) if perp else (Atom(a), Atom(b))

    return parts


def _one(parts_fn, pick):
    """Alternatives with a single premise holding one component."""

    def alts(f):
        parts = parts_fn(f)
        return [] if parts is None else [[[parts[pick]]]]

    return alts


def _both_in_one(parts_fn):
    def alts(f):
        parts = parts_fn(f)
        return [] if parts is None else [[list(parts)]]

    return alts


def _additive_pair(parts_fn):
    def alts(f):
        parts = parts_fn(f)
        return [] if parts is None else [[[parts[0]], [parts[1]]]]

    return alts


def _either(parts_fn):
    def alts(f):
        parts = parts_fn(f)
        return [] if parts is None else [[[parts[0]]], [[parts[1]]]]

    return alts


def _ent_form_alts(op):
    pos, neg = _qubits(op), _qubits(op, perp=True)

    def alts(f):
        p, n = pos(f), neg(f)
        return [] if p is None else [[list(p), list(n)]]

    return alts


def _atom_refl_alts(perp_atoms: bool):
    def alts(f):
        if not (isinstance(f, Bin) and f.op is Op.ENT):
            return []
        qb = match_qubit_pattern(f.right)
        if qb is None:
            return []
        if isinstance(f.left, Atom):
            return [[[f.left, Atom(qb.atom)]]]
        if perp_atoms and isinstance(f.left, PerpAtom):
            return [[[f.left, PerpAtom(qb.atom)]]]
        return []

    return alts


def _match_cut(c: Sequent, prems: Sequence[Sequent]) -> Iterator[Match]:
    p1, p2 = prems
    for pre1, a, post1 in _places(p1.succedent):
        for pre2, a2, post2 in _places(p2.antecedent):
            if a2 == a and c.antecedent == pre2 + p1.antecedent + post2 and c.succedent == (
                pre1 + p2.succedent + post1
            ):
                yield (False, False)


def _adjacent_swap(a: Side, b: Side) -> bool:
    if len(a) != len(b):
        return False
    diff = [k for k in range(len(a)) if a[k] != b[k]]
    if not diff:
        # swapping two equal neighbours
        return any(a[k] == a[k + 1] for k in range(len(a) - 1))
    return (
        len(diff) == 2
        and diff[1] == diff[0] + 1
        and a[diff[0]] == b[diff[1]]
        and a[diff[1]] == b[diff[0]]
    )


def _one_removed(longer: Side, shorter: Side, adjacent_copy: bool) -> bool:
    if len(longer) != len(shorter) + 1:
        return False
    for k in range(len(longer)):
        if longer[:k] + longer[k + 1 :] == shorter:
            if not adjacent_copy:
                return True
            if (k > 0 and longer[k - 1] == longer[k]) or (
                k + 1 < len(longer) and longer[k + 1] == longer[k]
            ):
                return True
    return False


def _match_structural(rule: RuleName, c: Sequent, prems: Sequence[Sequent]) -> Iterator[Match]:
    (p,) = prems
    on_left = rule.name.endswith("_L")
    c_act, c_pas = (c.antecedent, c.succedent) if on_left else (c.succedent, c.antecedent)
    p_act, p_pas = (p.antecedent, p.succedent) if on_left else (p.succedent, p.antecedent)
    if c_pas != p_pas:
        return
    if rule in (RuleName.EXCH_L, RuleName.EXCH_R):
        ok = _adjacent_swap(p_act, c_act)
    elif rule in (RuleName.CONTR_L, RuleName.CONTR_R):
        ok = _one_removed(p_act, c_act, adjacent_copy=True)
    else:
        ok = _one_removed(c_act, p_act, adjacent_copy=False)
    if ok:
        yield (False, False)


def _match_epr(c: Sequent, prems: Sequence[Sequent], perp_atoms: bool) -> Iterator[Match]:
    p1, p2 = prems
    outcomes = (Atom, PerpAtom) if perp_atoms else (Atom,)
    for ent in p1.succedent:
        pair = qubit_pair(ent)
        if pair is None:
            continue
        a, b = pair
        qa = mk_qubit(a)
        for cls in outcomes:
            measured = cls(a)
            target = Bin(Op.ENT, measured, mk_qubit(b))
            if (
                p1.succedent == (ent,)
                and p2 == Sequent((qa,), (measured,))
                and c == Sequent(p1.antecedent, (target,))
            ):
                yield (False, False)
                return
            if qa in p2.antecedent and measured in p2.succedent and target in c.succedent:
                # the contexted form: same ingredients, extra formulas around
                yield (True, True)


# (arity, matcher(conclusion, premises, perp_atoms))
_RULES: Dict[RuleName, Tuple[int, Callable[..., Iterable[Match]]]] = {}


def _simple(name, arity, active_right, alternatives, implicit=False):
    """Register a rule that replaces one principal formula in place.
    Implicit reflections run the schema upside down: the principal formula
    sits in the premise and its components in the conclusion."""

    def fn(c, prems, perp_atoms):
        if implicit:
            return _replace(prems[0], [c], active_right, alternatives)
        return _replace(c, prems, active_right, alternatives)

    _RULES[name] = (arity, fn)


RIGHT, LEFT = True, False

_simple(RuleName.WITH_FORM, 2, RIGHT, _additive_pair(_op(Op.WITH)))
_simple(RuleName.WITH_REFL_IMPL_1, 1, RIGHT, _one(_op(Op.WITH), 0), implicit=True)
_simple(RuleName.WITH_REFL_IMPL_2, 1, RIGHT, _one(_op(Op.WITH), 1), implicit=True)
_simple(RuleName.WITH_REFL_EXPL_1, 1, LEFT, _one(_op(Op.WITH), 0))
_simple(RuleName.WITH_REFL_EXPL_2, 1, LEFT, _one(_op(Op.WITH), 1))
_simple(RuleName.OR_FORM, 2, LEFT, _additive_pair(_op(Op.OR)))
_simple(RuleName.OR_REFL_EXPL, 1, RIGHT, _either(_op(Op.OR)))
_simple(RuleName.PAR_FORM, 1, RIGHT, _both_in_one(_op(Op.PAR)))
_simple(RuleName.TIMES_FORM, 1, LEFT, _both_in_one(_op(Op.TIMES)))
_simple(RuleName.ENT_FORM, 2, RIGHT, _ent_form_alts(Op.ENT))
_simple(RuleName.ENT_REFL_IMPL_1, 1, RIGHT, _both_in_one(_qubits(Op.ENT)), implicit=True)
_simple(RuleName.ENT_REFL_IMPL_2, 1, RIGHT, _both_in_one(_qubits(Op.ENT, perp=True)), implicit=True)
_simple(RuleName.DENT_FORM, 2, LEFT, _ent_form_alts(Op.DUAL_ENT))
_simple(RuleName.DENT_REFL_IMPL_1, 1, LEFT, _both_in_one(_qubits(Op.DUAL_ENT)), implicit=True)
_simple(RuleName.DENT_REFL_IMPL_2, 1, LEFT, _both_in_one(_qubits(Op.DUAL_ENT, perp=True)), implicit=True)


def _ent_atom_refl(c, prems, perp_atoms):
    return _replace(prems[0], [c], RIGHT, _atom_refl_alts(perp_atoms))


_RULES[RuleName.ENT_ATOM_REFL] = (1, _ent_atom_refl)


def _mult(name, active_right, split):
    _RULES[name] = (2, lambda c, prems, perp_atoms: _multiplicative(c, prems, active_right, split))


_mult(RuleName.PAR_REFL_EXPL, LEFT, _op(Op.PAR))
_mult(RuleName.TIMES_REFL_EXPL, RIGHT, _op(Op.TIMES))
_mult(RuleName.ENT_REFL_EXPL_1, LEFT, _qubits(Op.ENT))
_mult(RuleName.ENT_REFL_EXPL_2, LEFT, _qubits(Op.ENT, perp=True))
_mult(RuleName.DENT_REFL_EXPL_1, RIGHT, _qubits(Op.DUAL_ENT))
_mult(RuleName.DENT_REFL_EXPL_2, RIGHT, _qubits(Op.DUAL_ENT, perp=True))

_RULES[RuleName.CUT] = (2, lambda c, prems, perp_atoms: _match_cut(c, prems))
_RULES[RuleName.EPR] = (2, _match_epr)
for _r in (
    RuleName.EXCH_L,
    RuleName.EXCH_R,
    RuleName.CONTR_L,
    RuleName.CONTR_R,
    RuleName.WEAK_L,
    RuleName.WEAK_R,
):
    _RULES[_r] = (1, lambda c, prems, perp_atoms, _r=_r: _match_structural(_r, c, prems))


def _match_id(c, prems, perp_atoms):
    if len(c.antecedent) == 1 and c.antecedent == c.succedent:
        yield (False, False)


_RULES[RuleName.ID] = (0, _match_id)

assert set(_RULES) == set(RuleName)


def arity(rule: RuleName) -> int:
    return _RULES[rule][0]


def resolve_rule(rule) -> RuleName:
    try:
        return RuleName(str(getattr(rule, "value", rule)))
    except ValueError:
        raise StepError(ErrorKind.UNKNOWN_RULE, f"no rule named {rule!r}") from None


def check_step(
    rule,
    conclusion: Sequent,
    premises: Sequence[Sequent],
    v: LogicVariant = B,
    *,
    perp_atoms: bool = False,
) -> None:
    """Check one inference; return None on success, raise :class:`StepError` otherwise.

    ``perp_atoms`` admits the negated-outcome forms of ``ENT_ATOM_REFL``
    and ``EPR`` (``A^ @ Q_B``), which are off by default.
    """
    name = resolve_rule(rule)
    if not rule_enabled(name, v):
        raise StepError(ErrorKind.RULE_DISABLED, f"{name} is not a rule of {v}", v)
    n, matcher = _RULES[name]
    if len(premises) != n:
        raise StepError(
            ErrorKind.ARITY_MISMATCH, f"{name} takes {n} premise(s), got {len(premises)}"
        )
    found = False
    for left_ctx, right_ctx in matcher(conclusion, tuple(premises), perp_atoms):
        found = True
        if (not left_ctx or v.left_context) and (not right_ctx or v.right_context):
            return
    shape = f"{' ; '.join(map(str, premises)) or '(no premises)'} => {conclusion}"
    if found:
        detail = f"{name} with a context on its active side, which {v} does not allow: {shape}"
        raise StepError(ErrorKind.CONTEXT_NOT_ALLOWED, detail, v)
    raise StepError(ErrorKind.SCHEMA_MISMATCH, f"not an instance of {name}: {shape}")


@dataclass(frozen=True)
class Failure:
    path: Tuple[int, ...]
    rule: str
    label: Optional[str]
    kind: ErrorKind
    reason: str

    @property
    def where(self) -> str:
        return format_path(self.path)


def format_path(path: Tuple[int, ...]) -> str:
    return "root" if not path else "root." + ".".join(map(str, path))


@dataclass
class CheckReport:
    variant: LogicVariant
    nodes: List[Tuple[Tuple[int, ...], Derivation]] = field(default_factory=list)
    failures: List[Failure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def failed_paths(self) -> List[Tuple[int, ...]]:
        return [f.path for f in self.failures]


def check_derivation(d: Derivation, v: LogicVariant = B, *, perp_atoms: bool = False) -> CheckReport:
    report = CheckReport(v)
    for path, node in d.walk():
        report.nodes.append((path, node))
        try:
            check_step(
                node.rule,
                node.conclusion,
                [p.conclusion for p in node.premises],
                v,
                perp_atoms=perp_atoms,
            )
        except StepError as e:
            report.failures.append(Failure(path, node.rule, node.label, e.kind, str(e)))
    return report


class AxiomKind(enum.Enum):
    WITH_AXIOMS = "WithAxioms"
    ENT_AXIOMS = "EntAxioms"


def axiom_instances(kind, atoms: Sequence[str]) -> List[Derivation]:
    """The &- or @-axioms as derivations, obtained by trivializing the
    implicit reflection rules: the hypothesis Γ is the principal formula
    itself, closed by an identity leaf."""
    kind = AxiomKind(kind)
    if kind is AxiomKind.WITH_AXIOMS:
        (a, *_) = atoms
        q = mk_qubit(a)
        ident = Derivation(RuleName.ID, Sequent((q,), (q,)))
        return [
            Derivation(RuleName.WITH_REFL_IMPL_1, Sequent((q,), (Atom(a),)), (ident,)),
            Derivation(RuleName.WITH_REFL_IMPL_2, Sequent((q,), (PerpAtom(a),)), (ident,)),
        ]
    a, b = atoms
    if a == b:
        raise ValueError("entanglement axioms need two distinct atoms")
    e = entangle(a, b)
    ident = Derivation(RuleName.ID, Sequent((e,), (e,)))
    return [
        Derivation(RuleName.ENT_REFL_IMPL_1, Sequent((e,), (Atom(a), Atom(b))), (ident,)),
        Derivation(RuleName.ENT_REFL_IMPL_2, Sequent((e,), (PerpAtom(a), PerpAtom(b))), (ident,)),
    ]
