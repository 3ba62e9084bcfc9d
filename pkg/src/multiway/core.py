"""Core string rewriting engine: systems, breadth-first evolution, growth counts."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

logger = logging.getLogger(__name__)

# ---------------------------------------------------------------------------
# Symbols and glyph strings
#
# A symbol is written either as one printable character ("A") or as a
# bracketed token ("[fwd]").  Internally every symbol is exactly one
# character: bracketed tokens are interned to private-use codepoints, so
# states stay ordinary Python strings and substring search stays cheap.

Symbol = str  # exactly one interned character
StateId = int

_PUA_BASE = 0xE000
_PUA_LIMIT = 0xF8FF

_token_to_char: dict[str, str] = {}
_char_to_token: dict[str, str] = {}

_TOKEN_NAME_CHARS = frozenset(
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789@_+.-"
)


class GlyphError(ValueError):
    """Malformed glyph text, or a symbol used outside its alphabet."""


def intern_token(name: str) -> Symbol:
    """Return the one-character symbol for a bracketed token name like "fwd"."""
    ch = _token_to_char.get(name)
    if ch is not None:
        return ch
    if not name or not set(name) <= _TOKEN_NAME_CHARS:
        raise GlyphError(f"bad token name {name!r}")
    code = _PUA_BASE + len(_token_to_char)
    if code > _PUA_LIMIT:
        raise GlyphError("token table exhausted")
    ch = chr(code)
    _token_to_char[name] = ch
    _char_to_token[ch] = name
    return ch


def parse_glyphs(text: str) -> str:
    """Parse glyph text like ``"AB[fwd]C"`` into its interned one-char-per-symbol form."""
    out: list[str] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "[":
            j = text.find("]", i + 1)
            if j < 0:
                raise GlyphError(f"unterminated token starting at column {i} in {text!r}")
            out.append(intern_token(text[i + 1 : j]))
            i = j + 1
            continue
        if ch == "]":
            raise GlyphError(f"stray ']' at column {i} in {text!r}")
        if ch == "#" or ch.isspace() or not ch.isprintable():
            raise GlyphError(f"{ch!r} cannot be a symbol (column {i} in {text!r})")
        if _PUA_BASE <= ord(ch) <= _PUA_LIMIT:
            raise GlyphError("private-use characters are reserved for interned tokens")
        out.append(ch)
        i += 1
    return "".join(out)


def render_glyphs(encoded: str) -> str:
    """Inverse of :func:`parse_glyphs`: interned tokens come back as ``[name]``."""
    parts = []
    for c in encoded:
        name = _char_to_token.get(c)
        parts.append(c if name is None else f"[{name}]")
    return "".join(parts)


# ---------------------------------------------------------------------------
# Systems


@dataclass(frozen=True)
class Alphabet:
    """Ordered set of symbols (interned characters)."""

    symbols: tuple[Symbol, ...]

    def __post_init__(self) -> None:
        seen = set()
        for s in self.symbols:
            if len(s) != 1:
                raise GlyphError(f"alphabet entries must be single symbols, got {s!r}")
            if s in seen:
                raise GlyphError(f"duplicate alphabet symbol {render_glyphs(s)!r}")
            seen.add(s)

    @classmethod
    def parse(cls, text: str) -> Alphabet:
        return cls(tuple(parse_glyphs(text)))

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self) -> Iterator[Symbol]:
        return iter(self.symbols)

    def __contains__(self, sym: object) -> bool:
        return sym in self.symbols

    @property
    def glyphs(self) -> tuple[str, ...]:
        return tuple(render_glyphs(s) for s in self.symbols)

    def encode(self, text: str) -> str:
        """Parse glyph text and check every symbol belongs to this alphabet."""
        encoded = parse_glyphs(text)
        self.check(encoded)
        return encoded

    def check(self, encoded: str) -> None:
        symset = set(self.symbols)
        for c in encoded:
            if c not in symset:
                raise GlyphError(f"symbol {render_glyphs(c)!r} not in alphabet")

    def union(self, other: Alphabet) -> Alphabet:
        extra = tuple(s for s in other.symbols if s not in self.symbols)
        return Alphabet(self.symbols + extra)

    def isdisjoint(self, other: Alphabet) -> bool:
        return set(self.symbols).isdisjoint(other.symbols)


class Rule(NamedTuple):
    lhs: str
    rhs: str


@dataclass(frozen=True)
class MultiwaySystem:
    """A finite rule set over an alphabet, plus an initial string.

    ``rules`` and ``init`` hold interned strings; build instances through
    :func:`make_system` (or the rule-file parser) when starting from glyph
    text.  Duplicate rules are dropped, keeping first occurrence.
    """

    alphabet: Alphabet
    rules: tuple[Rule, ...]
    init: str

    def __post_init__(self) -> None:
        deduped: list[Rule] = []
        seen: set[Rule] = set()
        for r in self.rules:
            rule = Rule(*r)
            if not rule.lhs:
                raise GlyphError("rule with empty left-hand side")
            self.alphabet.check(rule.lhs)
            self.alphabet.check(rule.rhs)
            if rule not in seen:
                seen.add(rule)
                deduped.append(rule)
        object.__setattr__(self, "rules", tuple(deduped))
        self.alphabet.check(self.init)


def make_system(
    rules: Iterable[tuple[str, str]],
    init: str,
    alphabet: str | Alphabet | None = None,
) -> MultiwaySystem:
    """Build a system from rendered glyph strings.

    Args:
        rules: (lhs, rhs) pairs of glyph text, e.g. ``[("AB", "BA")]``.
        init: initial string as glyph text.
        alphabet: glyph text or an :class:`Alphabet`; inferred from the
            init and rules (first-appearance order) when omitted.
    """
    parsed = [Rule(parse_glyphs(l), parse_glyphs(r)) for l, r in rules]
    parsed_init = parse_glyphs(init)
    if alphabet is None:
        order: dict[Symbol, None] = {}
        for c in parsed_init:
            order.setdefault(c)
        for rule in parsed:
            for c in rule.lhs + rule.rhs:
                order.setdefault(c)
        alpha = Alphabet(tuple(order))
    elif isinstance(alphabet, Alphabet):
        alpha = alphabet
    else:
        alpha = Alphabet.parse(alphabet)
    return MultiwaySystem(alpha, tuple(parsed), parsed_init)


# ---------------------------------------------------------------------------
# Evolution


class Edge(NamedTuple):
    src: StateId
    dst: StateId
    rule: int
    pos: int


@dataclass
class StatesGraph:
    """Layered derivation graph produced by :func:`evolve`.

    ``layers[d]`` lists the ids of states first reached at distance ``d``
    from the initial string; ``edges`` records every single-step rewrite
    discovered from a frontier state, including rewrites that land on
    already-known states.
    """

    system: MultiwaySystem
    states: list[str]
    layers: list[list[StateId]]
    edges: list[Edge]
    truncated: bool = False
    truncation_reason: str | None = None

    @property
    def horizon(self) -> int:
        return len(self.layers) - 1

    def layer_strings(self, d: int) -> list[str]:
        return [self.states[i] for i in self.layers[d]]

    def state_distances(self) -> list[int]:
        """Distance (layer index) of every state, indexed by StateId."""
        dist = [0] * len(self.states)
        for d, layer in enumerate(self.layers):
            for sid in layer:
                dist[sid] = d
        return dist


def successors(system: MultiwaySystem, state: str) -> list[tuple[str, int, int]]:
    """All single-step rewrites of ``state`` as (result, rule index, position).

    Every occurrence of every left-hand side rewrites independently;
    occurrences may overlap.  Order is deterministic: rule index ascending,
    then match position left to right.
    """
    out: list[tuple[str, int, int]] = []
    for ri, (lhs, rhs) in enumerate(system.rules):
        start = 0
        while (p := state.find(lhs, start)) >= 0:
            out.append((state[:p] + rhs + state[p + len(lhs) :], ri, p))
            start = p + 1
    return out


def evolve(
    system: MultiwaySystem,
    horizon: int,
    *,
    max_states: int = 1_000_000,
    max_cells: int = 100_000_000,
    record_edges: bool = True,
) -> StatesGraph:
    """Breadth-first evolution with global deduplication.

    Explores all single-step rewrites layer by layer.  A string that was
    reached at any earlier distance is never re-added (rewrites onto it are
    still recorded as edges).  Once the frontier dies out, the remaining
    layers up to ``horizon`` are present but empty.

    Args:
        system: the rewriting system.
        horizon: largest distance to explore; the result has ``horizon + 1``
            layers (layer 0 is the initial string).
        max_states: stop before the total number of stored states exceeds
            this.  The partially built layer is dropped and the graph is
            flagged truncated rather than raising.
        max_cells: same, for the total number of stored characters.
        record_edges: skip edge bookkeeping when False (cheaper for long
            runs where only counts matter).

    Returns:
        A :class:`StatesGraph`.
    """
    if horizon < 0:
        raise ValueError("horizon must be >= 0")
    states: list[str] = [system.init]
    index: dict[str, StateId] = {system.init: 0}
    layers: list[list[StateId]] = [[0]]
    edges: list[Edge] = []
    cells = len(system.init)
    truncated = False
    reason: str | None = None

    frontier: list[StateId] = [0]
    for d in range(1, horizon + 1):
        if not frontier:
            layers.append([])
            continue
        fresh: dict[str, None] = {}
        events: list[tuple[StateId, str, int, int]] = []
        for u in frontier:
            s = states[u]
            for t, ri, pos in successors(system, s):
                if t not in index and t not in fresh:
                    fresh[t] = None
                if record_edges:
                    events.append((u, t, ri, pos))
        new_strings = sorted(fresh)
        new_cells = sum(len(t) for t in new_strings)
        if len(states) + len(new_strings) > max_states:
            truncated = True
            reason = f"more than {max_states} states while building layer {d}"
            break
        if cells + new_cells > max_cells:
            truncated = True
            reason = f"more than {max_cells} stored cells while building layer {d}"
            break
        layer: list[StateId] = []
        for t in new_strings:
            index[t] = len(states)
            states.append(t)
            layer.append(index[t])
        cells += new_cells
        layers.append(layer)
        if record_edges:
            for u, t, ri, pos in events:
                edges.append(Edge(u, index[t], ri, pos))
        frontier = layer

    if truncated:
        logger.warning("evolution truncated: %s", reason)
    return StatesGraph(system, states, layers, edges, truncated, reason)


# ---------------------------------------------------------------------------
# Growth series


@dataclass
class GrowthSeries:
    """Per-distance state counts and longest-string lengths."""

    counts: list[int]
    max_len: list[int]


@dataclass(frozen=True)
class CeilingViolation:
    """A layer holding more states than |alphabet| ** (longest string there).

    That bound only counts the strings of maximal length, so rule sets that
    fan out to many *shorter* strings can exceed it.  Violations are
    recorded here rather than raised.
    """

    init: str
    distance: int
    count: int
    alphabet_size: int
    max_len: int


CEILING_VIOLATIONS: list[CeilingViolation] = []


def _within_ceiling(count: int, base: int, exponent: int) -> bool:
    if count <= 1:
        return True
    if base <= 1:
        return False  # count >= 2 but base**exponent <= 1
    if exponent * math.log2(base) >= 64:
        return True  # the state budget keeps counts far below 2**64
    return count <= base**exponent


def growth_series(graph: StatesGraph, check_ceiling: bool = True) -> GrowthSeries:
    """Counts and max string length per layer of an evolved graph.

    ``counts[0]`` is always 1 (the initial string).  Empty layers report
    ``max_len`` 0.  With ``check_ceiling`` every layer is tested against the
    combinatorial bound |alphabet| ** max_len; failures are appended to
    :data:`CEILING_VIOLATIONS` and logged, never raised.
    """
    counts: list[int] = []
    max_len: list[int] = []
    base = len(graph.system.alphabet)
    for d, layer in enumerate(graph.layers):
        counts.append(len(layer))
        longest = max((len(graph.states[i]) for i in layer), default=0)
        max_len.append(longest)
        if check_ceiling and not _within_ceiling(len(layer), base, longest):
            v = CeilingViolation(
                init=render_glyphs(graph.system.init),
                distance=d,
                count=len(layer),
                alphabet_size=base,
                max_len=longest,
            )
            CEILING_VIOLATIONS.append(v)
            logger.warning(
                "count ceiling exceeded at distance %d: %d states > %d**%d",
                d, len(layer), base, longest,
            )
    return GrowthSeries(counts, max_len)


# ---------------------------------------------------------------------------
# Export


def export_dot(graph: StatesGraph, name: str = "multiway") -> str:
    """Graphviz DOT text for a states graph, with stable node and edge order."""

    def quoted(s: str) -> str:
        return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'

    lines = [f"digraph {name} {{"]
    for d, layer in enumerate(graph.layers):
        for sid in layer:
            label = quoted(render_glyphs(graph.states[sid]))
            lines.append(f"  n{sid} [label={label}, layer={d}];")
    for e in graph.edges:
        lines.append(f"  n{e.src} -> n{e.dst} [rule={e.rule}, pos={e.pos}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
