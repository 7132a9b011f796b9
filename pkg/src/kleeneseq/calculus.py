"""Inference rules of the logics kl and kl+, proof trees, checking, and search.

Both logics share the ordered-antecedent sequent judgment; kl+ swaps the
axiom closing `|- F?` for a weaker unary rule and replaces the two
query-on-the-left rules with variants that keep a copy of the iterated
formula.  Backward search is a demand-driven least fixpoint over the finite
space of sequents reachable through the rule schemas, so it decides
derivability exactly and returns cut-free, independently checkable trees.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Mapping

from .syntax import (
    Formula,
    Fuse,
    One,
    Or,
    Query,
    Sequent,
    Zero,
    parse_sequent,
    print_sequent,
    subformulas,
)


class LogicId(Enum):
    KL = "kl"
    KL_PLUS = "kl+"


class RuleId(Enum):
    AX = "Ax"
    CUT = "Cut"
    OR_L = "OrL"
    OR_R1 = "OrR1"
    OR_R2 = "OrR2"
    FUSE_R = "FuseR"
    FUSE_L = "FuseL"
    DIST = "Dist"
    AX_Q = "AxQ"
    Q_INTRO_R1 = "QIntroR1"
    Q_INTRO_R2 = "QIntroR2"
    Q_INTRO_L1 = "QIntroL1"
    Q_INTRO_L2 = "QIntroL2"
    ONE_L = "OneL"
    ONE_R = "OneR"
    ZERO_L = "ZeroL"
    PLUS_Q = "PlusQ"
    PLUS_Q_L1 = "PlusQL1"
    PLUS_Q_L2 = "PlusQL2"


# Rules legal in each logic (Cut is handled separately: check-only).
_SHARED = (
    RuleId.AX,
    RuleId.ONE_R,
    RuleId.ZERO_L,
    RuleId.OR_R1,
    RuleId.OR_R2,
    RuleId.DIST,
    RuleId.ONE_L,
    RuleId.FUSE_L,
    RuleId.OR_L,
    RuleId.FUSE_R,
    RuleId.Q_INTRO_R1,
    RuleId.Q_INTRO_R2,
)

RULES_OF = {
    LogicId.KL: frozenset(_SHARED)
    | {RuleId.AX_Q, RuleId.Q_INTRO_L1, RuleId.Q_INTRO_L2},
    LogicId.KL_PLUS: frozenset(_SHARED)
    | {RuleId.PLUS_Q, RuleId.PLUS_Q_L1, RuleId.PLUS_Q_L2},
}

# Backward-search order: closure rules, unary right rules, left rules,
# splitting rules.  Order affects only the shape of the found proof.
_SEARCH_ORDER = {
    LogicId.KL: (
        RuleId.AX,
        RuleId.AX_Q,
        RuleId.ONE_R,
        RuleId.ZERO_L,
        RuleId.OR_R1,
        RuleId.OR_R2,
        RuleId.DIST,
        RuleId.ONE_L,
        RuleId.FUSE_L,
        RuleId.OR_L,
        RuleId.Q_INTRO_L1,
        RuleId.Q_INTRO_L2,
        RuleId.FUSE_R,
        RuleId.Q_INTRO_R1,
        RuleId.Q_INTRO_R2,
    ),
    LogicId.KL_PLUS: (
        RuleId.AX,
        RuleId.ONE_R,
        RuleId.ZERO_L,
        RuleId.OR_R1,
        RuleId.OR_R2,
        RuleId.DIST,
        RuleId.PLUS_Q,
        RuleId.ONE_L,
        RuleId.FUSE_L,
        RuleId.OR_L,
        RuleId.PLUS_Q_L1,
        RuleId.PLUS_Q_L2,
        RuleId.FUSE_R,
        RuleId.Q_INTRO_R1,
        RuleId.Q_INTRO_R2,
    ),
}


@dataclass(frozen=True, eq=False)
class RuleApp:
    """One backward instantiation of a rule at a goal sequent."""

    rule: RuleId
    premises: tuple[Sequent, ...]
    instantiation: Mapping[str, object]


def _schema_expand(rule: RuleId, inst: Mapping[str, object]) -> tuple[Sequent, tuple[Sequent, ...]]:
    """Conclusion and premises determined by a rule's metavariable bindings.

    Sequence bindings (Gamma, Delta, Theta) are tuples of formulas; the
    lowercase keys bind single formulas.
    """
    g = inst.get("Gamma", ())
    d = inst.get("Delta", ())
    t = inst.get("Theta", ())
    a = inst.get("alpha")
    b = inst.get("beta")
    c = inst.get("gamma")
    R = RuleId
    if rule is R.AX:
        return Sequent((a,), a), ()
    if rule is R.CUT:
        return (
            Sequent(g + t + d, b),
            (Sequent(g + (a,) + d, b), Sequent(t, a)),
        )
    if rule is R.OR_L:
        return (
            Sequent(g + (Or(a, b),) + d, c),
            (Sequent(g + (a,) + d, c), Sequent(g + (b,) + d, c)),
        )
    if rule is R.OR_R1:
        return Sequent(g, Or(a, b)), (Sequent(g, a),)
    if rule is R.OR_R2:
        return Sequent(g, Or(a, b)), (Sequent(g, b),)
    if rule is R.FUSE_R:
        return Sequent(g + d, Fuse(a, b)), (Sequent(g, a), Sequent(d, b))
    if rule is R.FUSE_L:
        return (
            Sequent(g + (Fuse(a, b),) + d, c),
            (Sequent(g + (a, b) + d, c),),
        )
    if rule is R.DIST:
        return (
            Sequent(g, Or(Fuse(a, b), Fuse(a, c))),
            (Sequent(g, Fuse(a, Or(b, c))),),
        )
    if rule is R.AX_Q:
        return Sequent((), Query(a)), ()
    if rule is R.Q_INTRO_R1:
        return Sequent(d + g, Query(a)), (Sequent(d, a), Sequent(g, Query(a)))
    if rule is R.Q_INTRO_R2:
        return Sequent(g + d, Query(a)), (Sequent(d, a), Sequent(g, Query(a)))
    if rule is R.Q_INTRO_L1:
        return (
            Sequent((Query(a),) + g, b),
            (Sequent((a, b), b), Sequent(g, b)),
        )
    if rule is R.Q_INTRO_L2:
        return (
            Sequent(g + (Query(a),), b),
            (Sequent((b, a), b), Sequent(g, b)),
        )
    if rule is R.ONE_L:
        return Sequent(g + (One(),) + d, a), (Sequent(g + d, a),)
    if rule is R.ONE_R:
        return Sequent((), One()), ()
    if rule is R.ZERO_L:
        return Sequent(g + (Zero(),) + d, a), ()
    if rule is R.PLUS_Q:
        return Sequent(g, Query(a)), (Sequent(g, a),)
    if rule is R.PLUS_Q_L1:
        return (
            Sequent((Query(a),) + g, b),
            (Sequent((a, b), b), Sequent((a,) + g, b)),
        )
    if rule is R.PLUS_Q_L2:
        return (
            Sequent(g + (Query(a),), b),
            (Sequent((b, a), b), Sequent(g + (a,), b)),
        )
    raise ValueError(f"unknown rule {rule!r}")


def _rule_instances(rule: RuleId, goal: Sequent, for_search: bool) -> list[RuleApp]:
    """Every instantiation of `rule` whose conclusion is `goal`.

    With for_search the query-introduction-on-the-right splits skip the
    empty Delta (that instance repeats the goal as its own premise and adds
    nothing to backward search); the checker accepts it.
    """
    ante, succ = goal.antecedent, goal.succedent
    out: list[RuleApp] = []

    def emit(**inst: object) -> None:
        _, premises = _schema_expand(rule, inst)
        out.append(RuleApp(rule, premises, inst))

    R = RuleId
    if rule is R.AX:
        if len(ante) == 1 and ante[0] == succ:
            emit(alpha=succ)
    elif rule is R.AX_Q:
        if not ante and isinstance(succ, Query):
            emit(alpha=succ.body)
    elif rule is R.ONE_R:
        if not ante and isinstance(succ, One):
            emit()
    elif rule is R.ZERO_L:
        for k, f in enumerate(ante):
            if isinstance(f, Zero):
                emit(Gamma=ante[:k], Delta=ante[k + 1 :], alpha=succ)
    elif rule is R.OR_R1:
        if isinstance(succ, Or):
            emit(Gamma=ante, alpha=succ.left, beta=succ.right)
    elif rule is R.OR_R2:
        if isinstance(succ, Or):
            emit(Gamma=ante, alpha=succ.left, beta=succ.right)
    elif rule is R.DIST:
        if (
            isinstance(succ, Or)
            and isinstance(succ.left, Fuse)
            and isinstance(succ.right, Fuse)
            and succ.left.left == succ.right.left
        ):
            emit(
                Gamma=ante,
                alpha=succ.left.left,
                beta=succ.left.right,
                gamma=succ.right.right,
            )
    elif rule is R.PLUS_Q:
        if isinstance(succ, Query):
            emit(Gamma=ante, alpha=succ.body)
    elif rule is R.ONE_L:
        for k, f in enumerate(ante):
            if isinstance(f, One):
                emit(Gamma=ante[:k], Delta=ante[k + 1 :], alpha=succ)
    elif rule is R.FUSE_L:
        for k, f in enumerate(ante):
            if isinstance(f, Fuse):
                emit(
                    Gamma=ante[:k],
                    Delta=ante[k + 1 :],
                    alpha=f.left,
                    beta=f.right,
                    gamma=succ,
                )
    elif rule is R.OR_L:
        for k, f in enumerate(ante):
            if isinstance(f, Or):
                emit(
                    Gamma=ante[:k],
                    Delta=ante[k + 1 :],
                    alpha=f.left,
                    beta=f.right,
                    gamma=succ,
                )
    elif rule is R.Q_INTRO_L1:
        if ante and isinstance(ante[0], Query):
            emit(alpha=ante[0].body, Gamma=ante[1:], beta=succ)
    elif rule is R.Q_INTRO_L2:
        if ante and isinstance(ante[-1], Query):
            emit(alpha=ante[-1].body, Gamma=ante[:-1], beta=succ)
    elif rule is R.PLUS_Q_L1:
        if ante and isinstance(ante[0], Query):
            emit(alpha=ante[0].body, Gamma=ante[1:], beta=succ)
    elif rule is R.PLUS_Q_L2:
        if ante and isinstance(ante[-1], Query):
            emit(alpha=ante[-1].body, Gamma=ante[:-1], beta=succ)
    elif rule is R.FUSE_R:
        if isinstance(succ, Fuse):
            for k in range(len(ante) + 1):
                emit(Gamma=ante[:k], Delta=ante[k:], alpha=succ.left, beta=succ.right)
    elif rule is R.Q_INTRO_R1:
        if isinstance(succ, Query):
            lo = 1 if for_search else 0
            for k in range(lo, len(ante) + 1):
                emit(Delta=ante[:k], Gamma=ante[k:], alpha=succ.body)
    elif rule is R.Q_INTRO_R2:
        if isinstance(succ, Query):
            hi = len(ante) if for_search else len(ante) + 1
            for k in range(hi):
                emit(Gamma=ante[:k], Delta=ante[k:], alpha=succ.body)
    elif rule is R.CUT:
        raise ValueError("Cut has no backward instances; it is check-only")
    else:
        raise ValueError(f"unknown rule {rule!r}")
    return out


def applicable_rules(logic: LogicId, goal: Sequent) -> list[RuleApp]:
    """All backward instantiations of the logic's non-Cut rules at `goal`,
    in search order.  Closure rules carry empty premise tuples."""
    out: list[RuleApp] = []
    for rule in _SEARCH_ORDER[logic]:
        out.extend(_rule_instances(rule, goal, for_search=True))
    return out


# --- proof trees -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ProofTree:
    """A rule-labelled derivation tree.

    `instantiation` records the metavariable bindings the rule was applied
    with; trees loaded from JSON carry None and the checker infers the
    bindings by schema matching.
    """

    conclusion: Sequent
    rule: RuleId
    premises: tuple[ProofTree, ...] = ()
    instantiation: Mapping[str, object] | None = None


def tree_to_json_dict(tree: ProofTree) -> dict:
    return {
        "rule": tree.rule.value,
        "conclusion": print_sequent(tree.conclusion),
        "premises": [tree_to_json_dict(p) for p in tree.premises],
    }


def tree_to_json(tree: ProofTree) -> str:
    return json.dumps(tree_to_json_dict(tree))


_RULE_BY_NAME = {r.value: r for r in RuleId}


def tree_from_json_dict(obj: object) -> ProofTree:
    if not isinstance(obj, dict):
        raise ValueError("proof tree JSON must be an object")
    try:
        rule_name = obj["rule"]
        conclusion_text = obj["conclusion"]
        premises = obj["premises"]
    except KeyError as e:
        raise ValueError(f"proof tree JSON lacks key {e.args[0]!r}") from None
    if rule_name not in _RULE_BY_NAME:
        raise ValueError(f"unknown rule name {rule_name!r}")
    if not isinstance(premises, list):
        raise ValueError("premises must be a list")
    return ProofTree(
        parse_sequent(conclusion_text),
        _RULE_BY_NAME[rule_name],
        tuple(tree_from_json_dict(p) for p in premises),
    )


def tree_from_json(text: str) -> ProofTree:
    return tree_from_json_dict(json.loads(text))


def render_tree(tree: ProofTree, indent: str = "  ") -> str:
    """Indented one-node-per-line rendering, premises below conclusions."""
    lines: list[str] = []

    def walk(node: ProofTree, depth: int) -> None:
        lines.append(f"{indent * depth}{print_sequent(node.conclusion)}   [{node.rule.value}]")
        for p in node.premises:
            walk(p, depth + 1)

    walk(tree, 0)
    return "\n".join(lines)


# --- proof checking ----------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    """Why a proof tree is not a derivation: the node (as a path of premise
    indices from the root), the rule it claims, and the mismatch."""

    path: tuple[int, ...]
    rule: RuleId
    reason: str

    def __str__(self) -> str:
        where = "root" if not self.path else "node " + ".".join(map(str, self.path))
        return f"{where}: rule {self.rule.value}: {self.reason}"


def check_proof(logic: LogicId, tree: ProofTree, allow_cut: bool = False) -> Violation | None:
    """None if every node is a correct instance of a rule of `logic`
    (Cut nodes accepted only under allow_cut); else the first violation."""

    def check_node(node: ProofTree, path: tuple[int, ...]) -> Violation | None:
        rule = node.rule
        if rule is RuleId.CUT:
            if not allow_cut:
                return Violation(path, rule, "Cut is not allowed here")
        elif rule not in RULES_OF[logic]:
            return Violation(path, rule, f"rule is not part of {logic.value}")
        children = tuple(p.conclusion for p in node.premises)
        if node.instantiation is not None:
            try:
                conclusion, premises = _schema_expand(rule, node.instantiation)
            except (TypeError, ValueError):
                return Violation(path, rule, "malformed instantiation")
            if conclusion != node.conclusion:
                return Violation(
                    path, rule, "conclusion does not match the stored bindings"
                )
            if premises != children:
                return Violation(
                    path, rule, "premises do not match the stored bindings"
                )
        elif not _matches_some_instance(rule, node.conclusion, children):
            return Violation(
                path, rule, "no instantiation of the rule fits conclusion and premises"
            )
        for i, p in enumerate(node.premises):
            v = check_node(p, path + (i,))
            if v is not None:
                return v
        return None

    return check_node(tree, ())


def _matches_some_instance(
    rule: RuleId, conclusion: Sequent, children: tuple[Sequent, ...]
) -> bool:
    if rule is RuleId.CUT:
        if len(children) != 2:
            return False
        main, side = children
        alpha = side.succedent
        theta = side.antecedent
        if main.succedent != conclusion.succedent:
            return False
        for k, f in enumerate(main.antecedent):
            if f == alpha:
                gamma, delta = main.antecedent[:k], main.antecedent[k + 1 :]
                if conclusion.antecedent == gamma + theta + delta:
                    return True
        return False
    for app in _rule_instances(rule, conclusion, for_search=False):
        if app.premises == children:
            return True
    return False


# --- backward proof search ---------------------------------------------------

_REFUTED = -1


class Prover:
    """Decides derivability and produces cut-free proof trees.

    Results are tabled across calls: the reachable sequent space of a goal
    is closed under backward rule application and saturated bottom-up, so
    every sequent touched gets a final verdict.  A Prover instance is
    single-threaded; use separate instances for concurrent work.
    """

    def __init__(self, logic: LogicId):
        self.logic = logic
        # sequent -> _REFUTED, or the positive tick at which it was proven
        self._status: dict[Sequent, int] = {}
        self._clock = 0

    def derivable(self, goal: Sequent) -> bool:
        status = self._status.get(goal)
        if status is None:
            self._solve(goal)
            status = self._status[goal]
        return status != _REFUTED

    def prove(self, goal: Sequent) -> ProofTree | None:
        if not self.derivable(goal):
            return None
        return self._build(goal)

    def _solve(self, goal: Sequent) -> None:
        status = self._status
        # close the new region under backward rule application
        apps: dict[Sequent, list[RuleApp]] = {}
        stack = [goal]
        while stack:
            s = stack.pop()
            if s in apps or s in status:
                continue
            instances = applicable_rules(self.logic, s)
            apps[s] = instances
            for app in instances:
                for p in app.premises:
                    if p not in apps and p not in status:
                        stack.append(p)
        # saturate: fire every rule instance whose premises are all proven
        dependents: dict[Sequent, list[list]] = {}
        seeds: list[Sequent] = []
        for s, instances in apps.items():
            for app in instances:
                need = 0
                dead = False
                pending: list[Sequent] = []
                for p in app.premises:
                    st = status.get(p)
                    if st == _REFUTED:
                        dead = True
                        break
                    if st is None:
                        need += 1
                        pending.append(p)
                if dead:
                    continue
                if need == 0:
                    seeds.append(s)
                else:
                    record = [s, need]
                    for p in pending:
                        dependents.setdefault(p, []).append(record)
        queue: deque[Sequent] = deque()

        def mark(s: Sequent) -> None:
            if status.get(s) is None:
                self._clock += 1
                status[s] = self._clock
                queue.append(s)

        for s in seeds:
            mark(s)
        while queue:
            p = queue.popleft()
            for record in dependents.get(p, ()):
                record[1] -= 1
                if record[1] == 0:
                    mark(record[0])
        for s in apps:
            if status.get(s) is None:
                status[s] = _REFUTED

    def _build(self, s: Sequent) -> ProofTree:
        # any instance whose premises were all proven strictly earlier is a
        # valid justification; take the first in search order
        tick = self._status[s]
        for app in applicable_rules(self.logic, s):
            usable = True
            for p in app.premises:
                st = self._status.get(p)
                if st is None or st == _REFUTED or st >= tick:
                    usable = False
                    break
            if usable:
                return ProofTree(
                    s,
                    app.rule,
                    tuple(self._build(p) for p in app.premises),
                    app.instantiation,
                )
        raise AssertionError(f"no justification recorded for {print_sequent(s)}")


_default_provers: dict[LogicId, Prover] = {}


def _default_prover(logic: LogicId) -> Prover:
    prover = _default_provers.get(logic)
    if prover is None:
        prover = _default_provers[logic] = Prover(logic)
    return prover


def derivable(logic: LogicId, goal: Sequent) -> bool:
    """Shared-table convenience wrapper around Prover.derivable."""
    return _default_prover(logic).derivable(goal)


def prove(logic: LogicId, goal: Sequent) -> ProofTree | None:
    """Cut-free proof of `goal` in `logic`, or None when there is none.
    Results check cleanly: check_proof(logic, tree, allow_cut=False) is ok."""
    return _default_prover(logic).prove(goal)


def flatten_antecedent(s: Sequent) -> Sequent:
    """Fuse the antecedent into a single formula (empty antecedent becomes
    `1`); derivability-equivalent to the input in both logics."""
    if not s.antecedent:
        return Sequent((One(),), s.succedent)
    f = s.antecedent[0]
    for g in s.antecedent[1:]:
        f = Fuse(f, g)
    return Sequent((f,), s.succedent)


def goal_subformulas(goal: Sequent) -> frozenset[Formula]:
    """Subformula closure of a sequent; every sequent backward search can
    reach from `goal` draws its formulas from this set."""
    acc: set[Formula] = set()
    for f in goal.antecedent:
        acc.update(subformulas(f))
    acc.update(subformulas(goal.succedent))
    return frozenset(acc)
