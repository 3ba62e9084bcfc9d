"""Composing systems: sums, products, independence, binary reduction, identities."""

from __future__ import annotations

import sys
from collections import Counter
from dataclasses import dataclass

from .core import (
    Alphabet,
    MultiwaySystem,
    Rule,
    StatesGraph,
    evolve,
    intern_token,
    render_glyphs,
)

SEED_TOKEN = "@seed"
BACKTRACK_NODE_LIMIT = 10_000


def seed_symbol() -> str:
    """The reserved fresh symbol used as the initial state of every sum."""
    return intern_token(SEED_TOKEN)


def zero_system() -> MultiwaySystem:
    """The rule-less system sitting on the fresh seed symbol (sum identity)."""
    seed = seed_symbol()
    return MultiwaySystem(Alphabet((seed,)), (), seed)


def one_system() -> MultiwaySystem:
    """The empty-string system with no rules at all (product identity)."""
    return MultiwaySystem(Alphabet(()), (), "")


@dataclass(frozen=True)
class IndependenceVerdict:
    """Outcome of a rule-independence check.

    ``independent`` is decided structurally (disjoint alphabets);
    ``independent_up_to_horizon`` is the best a simulation can certify;
    ``dependent`` carries a witness layer when one is identifiable.
    """

    status: str  # "independent" | "independent_up_to_horizon" | "dependent"
    witness_layer: int | None = None

    @property
    def independent(self) -> bool:
        return self.status != "dependent"


@dataclass(frozen=True)
class CombinedSystem:
    """A composed system plus the provenance the combination law depends on."""

    system: MultiwaySystem
    kind: str  # "sum" | "product" | "reduced"
    operands: tuple[MultiwaySystem, ...]
    growth_law: str  # "exact" | "lower_bound"
    independence: IndependenceVerdict | None = None
    fresh_symbol: str | None = None
    translation: dict[str, str] | None = None


def _check_operand(m: MultiwaySystem, seed: str) -> None:
    """Reject reserved symbols unless the operand is itself a well-formed sum.

    Sums of sums must be allowed (associativity!), so the seed may appear —
    but only in the shape the sum constructor emits: as the whole initial
    string and as the whole left-hand side of its expansion rules, never
    inside a right-hand side or a longer pattern.
    """
    for sym in m.alphabet:
        name = render_glyphs(sym)
        if not name.startswith("[@"):
            continue
        if sym != seed:
            raise ValueError(f"operand uses reserved symbol {name}")
        if m.init != seed:
            raise ValueError(f"operand embeds {name} outside the sum shape")
        for lhs, rhs in m.rules:
            if seed in rhs or (seed in lhs and lhs != seed):
                raise ValueError(f"operand embeds {name} outside the sum shape")


def second_layer(system: MultiwaySystem) -> set[str]:
    """States at distance 1: what the seed of a sum must expand to."""
    return set(evolve(system, 1).layer_strings(1))


def sum_systems(
    m1: MultiwaySystem, m2: MultiwaySystem, independence_horizon: int = 4
) -> CombinedSystem:
    """Combine two systems so layer counts add (distances >= 1).

    The result starts from a reserved fresh symbol whose expansion rules
    reproduce the distance-1 states of both operands; from there the two
    evolutions run side by side without interacting.  When the operands are
    not rule independent the construction still goes through but the
    addition law is only a lower bound, which ``growth_law`` records.
    """
    seed = seed_symbol()
    _check_operand(m1, seed)
    _check_operand(m2, seed)
    targets = sorted(second_layer(m1) | second_layer(m2))
    alphabet = Alphabet((seed,)).union(m1.alphabet).union(m2.alphabet)
    rules = m1.rules + m2.rules + tuple(Rule(seed, t) for t in targets)
    system = MultiwaySystem(alphabet, rules, seed)
    verdict = check_rule_independence(m1, m2, independence_horizon)
    return CombinedSystem(
        system,
        "sum",
        (m1, m2),
        "exact" if verdict.independent else "lower_bound",
        independence=verdict,
        fresh_symbol=render_glyphs(seed),
    )


def product_systems(
    m1: MultiwaySystem, m2: MultiwaySystem, independence_horizon: int = 4
) -> CombinedSystem:
    """Combine two systems so layer counts convolve.

    Initial state is the concatenation of the operands' initial states; the
    rule sets are merged.  Each state decomposes into an m1-part and an
    m2-part, so the states graph is the box product of the operand graphs.
    Same growth-law caveat as for sums.
    """
    seed = seed_symbol()
    _check_operand(m1, seed)
    _check_operand(m2, seed)
    system = MultiwaySystem(
        m1.alphabet.union(m2.alphabet), m1.rules + m2.rules, m1.init + m2.init
    )
    verdict = check_rule_independence(m1, m2, independence_horizon)
    return CombinedSystem(
        system,
        "product",
        (m1, m2),
        "exact" if verdict.independent else "lower_bound",
        independence=verdict,
    )


def check_rule_independence(
    m1: MultiwaySystem, m2: MultiwaySystem, horizon: int = 4
) -> IndependenceVerdict:
    """Do the two rule sets leave each other's evolutions untouched?

    Disjoint alphabets decide the question outright.  Otherwise each operand
    is evolved next to a merged-rules variant of itself and the layered
    graphs are compared; simulation can only ever certify independence up to
    the horizon.
    """
    if horizon < 2:
        raise ValueError("independence horizon must be >= 2")
    if m1.alphabet.isdisjoint(m2.alphabet):
        return IndependenceVerdict("independent")
    for own, other in ((m1, m2), (m2, m1)):
        merged = MultiwaySystem(
            own.alphabet.union(other.alphabet), own.rules + other.rules, own.init
        )
        ga, gm = evolve(own, horizon), evolve(merged, horizon)
        ok, _ = layered_isomorphic(ga, gm)
        if not ok:
            witness = horizon
            for d in range(horizon + 1):
                ok_d, _ = layered_isomorphic(_graph_prefix(ga, d), _graph_prefix(gm, d))
                if not ok_d:
                    witness = d
                    break
            return IndependenceVerdict("dependent", witness)
    return IndependenceVerdict("independent_up_to_horizon")


def _graph_prefix(graph: StatesGraph, depth: int) -> StatesGraph:
    """Restrict a states graph to layers 0..depth (ids are layer-contiguous)."""
    keep = sum(len(layer) for layer in graph.layers[: depth + 1])
    return StatesGraph(
        graph.system,
        graph.states[:keep],
        graph.layers[: depth + 1],
        [e for e in graph.edges if e.src < keep and e.dst < keep],
        graph.truncated,
        graph.truncation_reason,
    )


# ---------------------------------------------------------------------------
# Binary reduction


def _codeword(index: int) -> str:
    # "ab" occurs only at codeword starts and "aa" only at boundaries, so a
    # translated pattern can never match except on whole codewords
    return "a" + "b" * index + "a"


def reduce_to_binary(m: MultiwaySystem) -> CombinedSystem:
    """Rewrite a system over the two-symbol alphabet {a, b}.

    The i-th alphabet symbol (1-indexed) becomes the codeword a·bⁱ·a; the
    initial string and every rule are translated symbol-wise.  Layer counts
    are preserved exactly and the states graphs are isomorphic through the
    translation.
    """
    code = {sym: _codeword(i) for i, sym in enumerate(m.alphabet, start=1)}

    def translate(s: str) -> str:
        return "".join(code[c] for c in s)

    system = MultiwaySystem(
        Alphabet(("a", "b")),
        tuple(Rule(translate(lhs), translate(rhs)) for lhs, rhs in m.rules),
        translate(m.init),
    )
    return CombinedSystem(
        system,
        "reduced",
        (m,),
        "exact",
        translation={render_glyphs(sym): cw for sym, cw in code.items()},
    )


# ---------------------------------------------------------------------------
# Layered graph isomorphism


def _simple_adjacency(graph: StatesGraph) -> tuple[list[set[int]], list[set[int]]]:
    fwd: list[set[int]] = [set() for _ in graph.states]
    back: list[set[int]] = [set() for _ in graph.states]
    for e in graph.edges:
        fwd[e.src].add(e.dst)
        back[e.dst].add(e.src)
    return fwd, back


def layered_isomorphic(g1: StatesGraph, g2: StatesGraph) -> tuple[bool, int | None]:
    """Isomorphism of layered states graphs, as simple directed graphs.

    Parallel rewrites between the same pair of states collapse to one edge —
    the comparison is about which states lead to which.  Colors start
    from the layer index and are refined jointly by in/out neighborhood
    multisets; graphs up to ``BACKTRACK_NODE_LIMIT`` nodes then get an exact
    backtracking search over the color classes.  Returns (verdict, witness)
    where witness is a layer exhibiting a mismatch, when identifiable.
    """
    if len(g1.layers) != len(g2.layers):
        raise ValueError("graphs must be evolved to the same horizon")
    for d in range(len(g1.layers)):
        if len(g1.layers[d]) != len(g2.layers[d]):
            return False, d
    n = len(g1.states)
    if n != len(g2.states):  # unreachable given equal layers, kept as a guard
        return False, None
    if n == 0:
        return True, None

    fwd1, back1 = _simple_adjacency(g1)
    fwd2, back2 = _simple_adjacency(g2)
    dist1 = g1.state_distances()
    dist2 = g2.state_distances()
    colors1 = list(dist1)
    colors2 = list(dist2)

    def refine(colors, fwd, back, table):
        out = []
        for v in range(len(colors)):
            sig = (
                colors[v],
                tuple(sorted(Counter(colors[u] for u in fwd[v]).items())),
                tuple(sorted(Counter(colors[u] for u in back[v]).items())),
            )
            out.append(table.setdefault(sig, len(table)))
        return out

    for _ in range(n):
        table: dict = {}
        new1 = refine(colors1, fwd1, back1, table)
        new2 = refine(colors2, fwd2, back2, table)
        stable = len(set(new1)) == len(set(colors1)) and new1 == colors1
        colors1, colors2 = new1, new2
        if stable:
            break

    by_layer1 = [Counter(colors1[v] for v in layer) for layer in g1.layers]
    by_layer2 = [Counter(colors2[v] for v in layer) for layer in g2.layers]
    for d, (c1, c2) in enumerate(zip(by_layer1, by_layer2)):
        if c1 != c2:
            return False, d

    if n > BACKTRACK_NODE_LIMIT:
        # refinement found no obstruction; exact search is out of budget
        return True, None

    candidates: dict[int, list[int]] = {}
    for w in range(n):
        candidates.setdefault(colors2[w], []).append(w)
    mapping = [-1] * n  # g1 node -> g2 node
    inverse = [-1] * n  # g2 node -> g1 node

    def consistent(v: int, w: int) -> bool:
        # mapped pairs must agree on adjacency in both directions
        for u in fwd1[v]:
            if mapping[u] != -1 and mapping[u] not in fwd2[w]:
                return False
        for u in back1[v]:
            if mapping[u] != -1 and mapping[u] not in back2[w]:
                return False
        for x in fwd2[w]:
            if inverse[x] != -1 and inverse[x] not in fwd1[v]:
                return False
        for x in back2[w]:
            if inverse[x] != -1 and inverse[x] not in back1[v]:
                return False
        return True

    order = sorted(range(n), key=lambda v: (dist1[v], len(candidates.get(colors1[v], ())), v))

    def extend(k: int) -> bool:
        if k == n:
            return True
        v = order[k]
        for w in candidates.get(colors1[v], ()):
            if inverse[w] != -1 or not consistent(v, w):
                continue
            mapping[v], inverse[w] = w, v
            if extend(k + 1):
                return True
            mapping[v], inverse[w] = -1, -1
        return False

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, n + 200))
    try:
        found = extend(0)
    finally:
        sys.setrecursionlimit(limit)
    return (True, None) if found else (False, None)


# ---------------------------------------------------------------------------
# Semiring identities

SEMIRING_IDENTITIES = (
    "sum-comm",
    "sum-assoc",
    "sum-neutral",
    "prod-comm",
    "prod-assoc",
    "prod-neutral",
    "distributivity",
    "annihilation",
)

_IDENTITY_ARITY = {
    "sum-comm": 2,
    "sum-assoc": 3,
    "sum-neutral": 1,
    "prod-comm": 2,
    "prod-assoc": 3,
    "prod-neutral": 1,
    "distributivity": 3,
    "annihilation": 1,
}


@dataclass(frozen=True)
class IdentityReport:
    """Verdict for one algebraic identity, checked up to a finite horizon."""

    identity: str
    holds: bool
    mode: str  # "signature" | "isomorphism"
    horizon: int
    counterexample_layer: int | None = None


def _signature(m: MultiwaySystem):
    return frozenset(m.rules), m.init, frozenset(m.alphabet.symbols)


def verify_semiring_identity(
    identity: str,
    m1: MultiwaySystem,
    m2: MultiwaySystem | None = None,
    m3: MultiwaySystem | None = None,
    horizon: int = 5,
) -> IdentityReport:
    """Check one of the sum/product algebra identities on concrete operands.

    Both sides are built, then compared: syntactically equal presentations
    (same rule set, initial state, and alphabet) certify the identity
    outright; otherwise the two evolutions are compared for layered graph
    isomorphism up to ``horizon``.  Distributivity and annihilation are
    expected to fail — the neutral sum element is not absorbing under the
    product, and a product against a sum duplicates the shared factor's
    first expansion.
    """
    if identity not in _IDENTITY_ARITY:
        raise ValueError(f"unknown identity {identity!r}")
    got = 1 + (m2 is not None) + (m3 is not None)
    if got != _IDENTITY_ARITY[identity]:
        raise ValueError(
            f"{identity} takes {_IDENTITY_ARITY[identity]} operand(s), got {got}"
        )

    def s(a: MultiwaySystem, b: MultiwaySystem) -> MultiwaySystem:
        return sum_systems(a, b).system

    def p(a: MultiwaySystem, b: MultiwaySystem) -> MultiwaySystem:
        return product_systems(a, b).system

    if identity == "sum-comm":
        lhs, rhs = s(m1, m2), s(m2, m1)
    elif identity == "sum-assoc":
        lhs, rhs = s(s(m1, m2), m3), s(m1, s(m2, m3))
    elif identity == "sum-neutral":
        lhs, rhs = s(m1, zero_system()), m1
    elif identity == "prod-comm":
        lhs, rhs = p(m1, m2), p(m2, m1)
    elif identity == "prod-assoc":
        lhs, rhs = p(p(m1, m2), m3), p(m1, p(m2, m3))
    elif identity == "prod-neutral":
        lhs, rhs = p(m1, one_system()), m1
    elif identity == "distributivity":
        lhs, rhs = p(m1, s(m2, m3)), s(p(m1, m2), p(m1, m3))
    else:  # annihilation
        lhs, rhs = p(zero_system(), m1), zero_system()

    if _signature(lhs) == _signature(rhs):
        return IdentityReport(identity, True, "signature", horizon)
    ok, witness = layered_isomorphic(evolve(lhs, horizon), evolve(rhs, horizon))
    return IdentityReport(identity, ok, "isomorphism", horizon, witness)
