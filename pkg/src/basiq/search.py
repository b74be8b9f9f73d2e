"""Bounded backward proof search over the kernel's rule schemas.

Goals are handled as pairs of multisets.  A proof is first found on that
level and then realized as an ordered derivation: whenever a rule instance
needs its formulas in another order than the goal has them, a chain of
adjacent ``EXCH_L``/``EXCH_R`` steps is inserted.  Every returned proof is
re-checked by the kernel before it leaves this module.

Search is iterative deepening up to ``max_depth``; depth counts rule nodes
on a branch (identity leaves included, exchanges not).  A branch is cut
when its goal repeats along the path.  Rules are tried in a fixed order:

1. identity;
2. one-premise rules, principal positions left to right (antecedent first):
   explicit reflections and formations, then weakening, then the implicit
   reflections (which guess a larger formula from a small candidate set);
3. two-premise rules: additive formations, then the multiplicative
   reflections (every split of the contexts), then EPR, then cut if enabled;
4. contraction.

``Exhausted`` means *no proof within these bounds*, never underivability.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple, Union

from .formulas import (
    Atom,
    Bin,
    Derivation,
    Formula,
    Op,
    PerpAtom,
    Sequent,
    match_qubit_pattern,
    mk_qubit,
    qubit_pair,
    subformulas,
)
from .kernel import B, LogicVariant, RuleName, check_derivation, rule_enabled

R = RuleName
Multiset = Tuple[Formula, ...]


@dataclass(frozen=True)
class SearchConfig:
    max_depth: int = 8
    max_nodes: int = 1_000_000
    use_cut: bool = False

    def __post_init__(self):
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")


@dataclass(frozen=True)
class Proved:
    derivation: Derivation
    depth: int
    nodes_explored: int


@dataclass(frozen=True)
class Exhausted:
    """No proof found. ``limit_hit`` is set when ``max_nodes`` stopped the search
    before every branch up to ``depth`` was explored."""

    depth: int
    nodes_explored: int
    limit_hit: bool = False


SearchResult = Union[Proved, Exhausted]


class SoundnessError(RuntimeError):
    """The search produced a tree the kernel rejects (a bug, never expected)."""


# Hooks called with (goal, variant, result) after every successful search.
proof_observers: List[Callable[[Sequent, LogicVariant, Proved], None]] = []


@lru_cache(maxsize=None)
def _key(f: Formula) -> str:
    return str(f)


def _ms(side: Sequence[Formula]) -> Multiset:
    return tuple(sorted(side, key=_key))


def _without(side: Multiset, k: int) -> Multiset:
    return side[:k] + side[k + 1 :]


def _splits(side: Multiset) -> Iterator[Tuple[Multiset, Multiset]]:
    """Distinct ways to divide a multiset in two ordered parts."""
    seen = set()
    for mask in itertools.product((0, 1), repeat=len(side)):
        a = tuple(f for f, m in zip(side, mask) if m == 0)
        b = tuple(f for f, m in zip(side, mask) if m == 1)
        if (a, b) not in seen:
            seen.add((a, b))
            yield a, b


def _distinct_positions(side: Multiset) -> Iterator[Tuple[int, Formula]]:
    last = None
    for k, f in enumerate(side):
        if f != last:
            yield k, f
        last = f


@dataclass
class _Step:
    """A rule instance whose premises were proved up to reordering."""

    rule: RuleName
    conclusion: Sequent
    premises: Tuple[Sequent, ...]
    children: List["_Step"] = field(default_factory=list)


class _Budget(Exception):
    pass


# A candidate is (rule, instance conclusion, premises); premises are ordered
# sequents whose multiset forms become subgoals.
Candidate = Tuple[RuleName, Sequent, Tuple[Sequent, ...]]


class _Searcher:
    def __init__(self, goal: Sequent, v: LogicVariant, cfg: SearchConfig):
        self.v = v
        self.cfg = cfg
        self.nodes = 0
        self.with_pool = sorted(
            {
                g
                for f in goal.antecedent + goal.succedent
                for g in subformulas(f)
                if isinstance(g, Bin) and g.op is Op.WITH
            },
            key=_key,
        )
        self.cut_pool = sorted(
            {g for f in goal.antecedent + goal.succedent for g in subformulas(f)}, key=_key
        )

    def on(self, rule: RuleName) -> bool:
        return rule_enabled(rule, self.v)

    # -- candidate generation ----------------------------------------------

    def _right_ok(self, rest: Multiset) -> bool:
        return not rest or self.v.right_context

    def _left_ok(self, rest: Multiset) -> bool:
        return not rest or self.v.left_context

    def unary(self, left: Multiset, right: Multiset) -> Iterator[Candidate]:
        for k, f in _distinct_positions(left):
            rest = _without(left, k)
            if not isinstance(f, Bin) or not self._left_ok(rest):
                continue
            concl = Sequent(rest + (f,), right)
            if f.op is Op.WITH:
                yield R.WITH_REFL_EXPL_1, concl, (Sequent(rest + (f.left,), right),)
                yield R.WITH_REFL_EXPL_2, concl, (Sequent(rest + (f.right,), right),)
            elif f.op is Op.TIMES:
                yield R.TIMES_FORM, concl, (Sequent(rest + (f.left, f.right), right),)
        for k, f in _distinct_positions(right):
            rest = _without(right, k)
            if not isinstance(f, Bin) or not self._right_ok(rest):
                continue
            concl = Sequent(left, rest + (f,))
            if f.op is Op.PAR:
                yield R.PAR_FORM, concl, (Sequent(left, rest + (f.left, f.right)),)
            elif f.op is Op.OR:
                yield R.OR_REFL_EXPL, concl, (Sequent(left, rest + (f.left,)),)
                yield R.OR_REFL_EXPL, concl, (Sequent(left, rest + (f.right,)),)

    def weakening(self, left: Multiset, right: Multiset) -> Iterator[Candidate]:
        if not self.v.structural:
            return
        for k, f in _distinct_positions(left):
            rest = _without(left, k)
            yield R.WEAK_L, Sequent(rest + (f,), right), (Sequent(rest, right),)
        for k, f in _distinct_positions(right):
            rest = _without(right, k)
            yield R.WEAK_R, Sequent(left, rest + (f,)), (Sequent(left, rest),)

    def implicit(self, left: Multiset, right: Multiset) -> Iterator[Candidate]:
        # &: guess the formula X & Y whose component is on the right
        for k, f in _distinct_positions(right):
            rest = _without(right, k)
            if not self._right_ok(rest):
                continue
            concl = Sequent(left, rest + (f,))
            guesses = [g for g in self.with_pool if f in (g.left, g.right)]
            if isinstance(f, (Atom, PerpAtom)) and mk_qubit(f.name) not in guesses:
                guesses.append(mk_qubit(f.name))
            for g in guesses:
                if g.left == f:
                    yield R.WITH_REFL_IMPL_1, concl, (Sequent(left, rest + (g,)),)
                if g.right == f:
                    yield R.WITH_REFL_IMPL_2, concl, (Sequent(left, rest + (g,)),)
        if self.v.structural:
            return
        # @ and $: a pair of (negated) atoms determines the principal formula
        for side_is_right, side in ((True, right), (False, left)):
            done = set()
            for i, j in itertools.permutations(range(len(side)), 2):
                x, y = side[i], side[j]
                if (x, y) in done:
                    continue
                done.add((x, y))
                rest = tuple(f for k, f in enumerate(side) if k not in (i, j))
                if not (self._right_ok(rest) if side_is_right else self._left_ok(rest)):
                    continue
                for rule_pos, rule_neg, op in (
                    (R.ENT_REFL_IMPL_1, R.ENT_REFL_IMPL_2, Op.ENT),
                    (R.DENT_REFL_IMPL_1, R.DENT_REFL_IMPL_2, Op.DUAL_ENT),
                ):
                    if (op is Op.ENT) != side_is_right:
                        continue
                    if isinstance(x, Atom) and isinstance(y, Atom):
                        rule = rule_pos
                    elif isinstance(x, PerpAtom) and isinstance(y, PerpAtom):
                        rule = rule_neg
                    else:
                        continue
                    principal = Bin(op, mk_qubit(x.name), mk_qubit(y.name))
                    if side_is_right:
                        yield rule, Sequent(left, rest + (x, y)), (Sequent(left, rest + (principal,)),)
                    else:
                        yield rule, Sequent(rest + (x, y), right), (Sequent(rest + (principal,), right),)
                if side_is_right and isinstance(x, Atom) and isinstance(y, Atom):
                    principal = Bin(Op.ENT, x, mk_qubit(y.name))
                    yield R.ENT_ATOM_REFL, Sequent(left, rest + (x, y)), (
                        Sequent(left, rest + (principal,)),
                    )

    def binary(self, left: Multiset, right: Multiset) -> Iterator[Candidate]:
        ent = not self.v.structural
        # additive formations share the passive side
        for k, f in _distinct_positions(right):
            rest = _without(right, k)
            if not isinstance(f, Bin) or not self._right_ok(rest):
                continue
            concl = Sequent(left, rest + (f,))
            if f.op is Op.WITH:
                yield R.WITH_FORM, concl, (
                    Sequent(left, rest + (f.left,)),
                    Sequent(left, rest + (f.right,)),
                )
            pair = qubit_pair(f) if ent else None
            if pair:
                a, b = pair
                yield R.ENT_FORM, concl, (
                    Sequent(left, rest + (Atom(a), Atom(b))),
                    Sequent(left, rest + (PerpAtom(a), PerpAtom(b))),
                )
        for k, f in _distinct_positions(left):
            rest = _without(left, k)
            if not isinstance(f, Bin) or not self._left_ok(rest):
                continue
            concl = Sequent(rest + (f,), right)
            if f.op is Op.OR:
                yield R.OR_FORM, concl, (
                    Sequent(rest + (f.left,), right),
                    Sequent(rest + (f.right,), right),
                )
            pair = qubit_pair(f, Op.DUAL_ENT) if ent else None
            if pair:
                a, b = pair
                yield R.DENT_FORM, concl, (
                    Sequent(rest + (Atom(a), Atom(b)), right),
                    Sequent(rest + (PerpAtom(a), PerpAtom(b)), right),
                )
        # multiplicative reflections split both contexts
        yield from self._multiplicative(left, right, active_right=False)
        yield from self._multiplicative(left, right, active_right=True)
        if self.on(R.EPR) and len(right) == 1:
            (f,) = right
            if isinstance(f, Bin) and f.op is Op.ENT and isinstance(f.left, Atom):
                qb = match_qubit_pattern(f.right)
                if qb:
                    a = f.left.name
                    yield R.EPR, Sequent(left, right), (
                        Sequent(left, (Bin(Op.ENT, mk_qubit(a), f.right),)),
                        Sequent((mk_qubit(a),), (f.left,)),
                    )
        if self.cfg.use_cut:
            for c in self.cut_pool:
                yield R.CUT, Sequent(left, right), (Sequent(left, (c,)), Sequent((c,), right))

    def _multiplicative(self, left, right, active_right):
        act, pas = (right, left) if active_right else (left, right)
        ent = not self.v.structural
        for k, f in _distinct_positions(act):
            if not isinstance(f, Bin):
                continue
            rest = _without(act, k)
            ctx_ok = self._right_ok(rest) if active_right else self._left_ok(rest)
            if not ctx_ok:
                continue
            options = []
            if active_right:
                if f.op is Op.TIMES:
                    options.append((R.TIMES_REFL_EXPL, f.left, f.right))
                pair = qubit_pair(f, Op.DUAL_ENT) if ent else None
            else:
                if f.op is Op.PAR:
                    options.append((R.PAR_REFL_EXPL, f.left, f.right))
                pair = qubit_pair(f, Op.ENT) if ent else None
            if pair:
                a, b = pair
                pos_rule = R.DENT_REFL_EXPL_1 if active_right else R.ENT_REFL_EXPL_1
                neg_rule = R.DENT_REFL_EXPL_2 if active_right else R.ENT_REFL_EXPL_2
                options.append((pos_rule, Atom(a), Atom(b)))
                options.append((neg_rule, PerpAtom(a), PerpAtom(b)))
            for rule, x, y in options:
                for p1, p2 in _splits(pas):
                    for c1, c2 in _splits(rest):
                        if active_right:
                            yield rule, Sequent(p1 + p2, c1 + c2 + (f,)), (
                                Sequent(p1, c1 + (x,)),
                                Sequent(p2, c2 + (y,)),
                            )
                        else:
                            yield rule, Sequent(c1 + c2 + (f,), p1 + p2), (
                                Sequent(c1 + (x,), p1),
                                Sequent(c2 + (y,), p2),
                            )

    def contraction(self, left: Multiset, right: Multiset) -> Iterator[Candidate]:
        if not self.v.structural:
            return
        for k, f in _distinct_positions(left):
            rest = _without(left, k)
            yield R.CONTR_L, Sequent(rest + (f,), right), (Sequent(rest + (f, f), right),)
        for k, f in _distinct_positions(right):
            rest = _without(right, k)
            yield R.CONTR_R, Sequent(left, rest + (f,)), (Sequent(left, rest + (f, f)),)

    def candidates(self, left: Multiset, right: Multiset) -> Iterator[Candidate]:
        yield from self.unary(left, right)
        yield from self.weakening(left, right)
        yield from self.implicit(left, right)
        yield from self.binary(left, right)
        yield from self.contraction(left, right)

    # -- depth-first search --------------------------------------------------

    def prove(self, left: Multiset, right: Multiset, budget: int, path: set) -> Optional[_Step]:
        if budget < 1:
            return None
        self.nodes += 1
        if self.nodes > self.cfg.max_nodes:
            raise _Budget
        if len(left) == 1 and left == right:
            return _Step(R.ID, Sequent(left, right), ())
        if budget == 1:
            return None
        key = (left, right)
        if key in path:
            return None
        path.add(key)
        try:
            for rule, concl, premises in self.candidates(left, right):
                children = []
                for p in premises:
                    sub = self.prove(_ms(p.antecedent), _ms(p.succedent), budget - 1, path)
                    if sub is None:
                        break
                    children.append(sub)
                else:
                    return _Step(rule, concl, premises, children)
            return None
        finally:
            path.discard(key)


def _swap_chain(start: Sequence[Formula], target: Sequence[Formula]) -> List[Tuple[Formula, ...]]:
    """Orderings from ``start`` to ``target`` by adjacent transpositions."""
    cur = list(start)
    out = [tuple(cur)]
    for i, want in enumerate(target):
        j = cur.index(want, i)
        while j > i:
            cur[j - 1], cur[j] = cur[j], cur[j - 1]
            j -= 1
            out.append(tuple(cur))
    return out


def _with_exchanges(target: Sequent, d: Derivation) -> Derivation:
    """Prefix ``d`` with exchange steps so that the result concludes ``target``."""
    if target == d.conclusion:
        return d
    lefts = _swap_chain(target.antecedent, d.conclusion.antecedent)
    rights = _swap_chain(target.succedent, d.conclusion.succedent)
    chain = [(R.EXCH_L, Sequent(l, target.succedent)) for l in lefts[:-1]]
    chain += [(R.EXCH_R, Sequent(lefts[-1], r)) for r in rights[:-1]]
    node = d
    for rule, seq in reversed(chain):
        node = Derivation(rule, seq, (node,))
    return node


def _realize(target: Sequent, step: _Step) -> Derivation:
    kids = tuple(_realize(p, c) for p, c in zip(step.premises, step.children))
    return _with_exchanges(target, Derivation(step.rule, step.conclusion, kids))


def prove(goal: Sequent, v: LogicVariant = B, cfg: SearchConfig = SearchConfig()) -> SearchResult:
    """Search for a derivation of ``goal`` in variant ``v``."""
    s = _Searcher(goal, v, cfg)
    left, right = _ms(goal.antecedent), _ms(goal.succedent)
    depth = 0
    try:
        for depth in range(1, cfg.max_depth + 1):
            step = s.prove(left, right, depth, set())
            if step is not None:
                break
        else:
            return Exhausted(cfg.max_depth, s.nodes)
    except _Budget:
        return Exhausted(depth, cfg.max_nodes, limit_hit=True)
    d = _realize(goal, step)
    report = check_derivation(d, v)
    if not report.ok:
        raise SoundnessError(f"kernel rejected a search result for {goal}: {report.failures}")
    result = Proved(d, depth, s.nodes)
    for hook in proof_observers:
        hook(goal, v, result)
    return result


@dataclass(frozen=True)
class Equiv:
    left_to_right: Proved
    right_to_left: Proved


@dataclass(frozen=True)
class Unresolved:
    left_to_right: SearchResult
    right_to_left: SearchResult

    @property
    def nodes_explored(self) -> int:
        return self.left_to_right.nodes_explored + self.right_to_left.nodes_explored


def equivalent(
    f: Formula, g: Formula, v: LogicVariant = B, cfg: SearchConfig = SearchConfig()
) -> Union[Equiv, Unresolved]:
    """Mutual derivability of ``f`` and ``g`` within the search bounds."""
    lr = prove(Sequent((f,), (g,)), v, cfg)
    rl = prove(Sequent((g,), (f,)), v, cfg)
    if isinstance(lr, Proved) and isinstance(rl, Proved):
        return Equiv(lr, rl)
    return Unresolved(lr, rl)


@dataclass(frozen=True)
class RefutationCertificate:
    goal: Sequent
    variant: LogicVariant
    depth: int
    nodes_explored: int
    limit_hit: bool

    @property
    def statement(self) -> str:
        scope = "partial search, node limit reached" if self.limit_hit else "all branches explored"
        return (
            f"no proof of {self.goal} in {self.variant} up to depth {self.depth} "
            f"({self.nodes_explored} nodes, {scope})"
        )


def refutation_certificate(
    goal: Sequent, v: LogicVariant = B, depth: int = 8, max_nodes: int = 1_000_000
) -> Optional[RefutationCertificate]:
    """Bounded non-derivability evidence for ``goal``; None when a proof exists."""
    result = prove(goal, v, SearchConfig(max_depth=depth, max_nodes=max_nodes))
    if isinstance(result, Proved):
        return None
    return RefutationCertificate(goal, v, result.depth, result.nodes_explored, result.limit_hit)
