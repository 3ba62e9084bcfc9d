"""Shared test helpers: a deliberately naive reference implementation.

The reference expander below scans every position with startswith instead of
str.find, keeps layers as plain sets, and knows nothing about budgets or
edges.  Engine results are checked against it on small systems.
"""

from __future__ import annotations


def naive_rewrites(rules: list[tuple[str, str]], s: str) -> set[str]:
    out = set()
    for lhs, rhs in rules:
        for p in range(len(s) - len(lhs) + 1):
            if s.startswith(lhs, p):
                out.add(s[:p] + rhs + s[p + len(lhs) :])
    return out


def naive_layers(rules: list[tuple[str, str]], init: str, horizon: int) -> list[set[str]]:
    seen = {init}
    layers = [{init}]
    frontier = {init}
    for _ in range(horizon):
        derived: set[str] = set()
        for s in frontier:
            derived |= naive_rewrites(rules, s)
        fresh = derived - seen
        seen |= fresh
        layers.append(fresh)
        frontier = fresh
    return layers
