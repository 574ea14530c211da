"""Two-terminal series-parallel spring networks.

A network is an immutable tree whose leaves are 1-based spring indices and
whose inner nodes compose their children in series or in parallel.  Trees are
kept in normal form: a Series child of a Series node (and likewise for
Parallel) is spliced into its parent on construction.

Topology expressions use the grammar ``T := INT | s(T,T[,T...]) | p(T,T[,T...])``
with whitespace ignored, e.g. ``s(1,p(s(2,3),4))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

import numpy as np

__all__ = [
    "Leaf",
    "Series",
    "Parallel",
    "SPTree",
    "TopologyError",
    "TopologySyntaxError",
    "CASE_IDS",
    "canonical_case",
    "case_resistance_formula",
    "leaves",
    "spring_count",
    "validate",
    "parse_topology",
    "print_topology",
    "random_topology",
]


class TopologyError(ValueError):
    """Invalid tree: bad spring indices or malformed composition."""


class TopologySyntaxError(TopologyError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


@dataclass(frozen=True)
class Leaf:
    index: int

    def __post_init__(self):
        if isinstance(self.index, bool) or not isinstance(self.index, int) or self.index < 1:
            raise TopologyError(f"spring index must be a positive integer, got {self.index!r}")


@dataclass(frozen=True)
class _Composite:
    children: tuple

    def __init__(self, *children):
        if len(children) == 1 and isinstance(children[0], (list, tuple)):
            children = tuple(children[0])
        flat = []
        for child in children:
            if isinstance(child, int) and not isinstance(child, bool):
                child = Leaf(child)
            if not isinstance(child, (Leaf, Series, Parallel)):
                raise TopologyError(f"not a tree node: {child!r}")
            # associativity: splice same-kind children into this node
            if type(child) is type(self):
                flat.extend(child.children)
            else:
                flat.append(child)
        if len(flat) < 2:
            raise TopologyError(f"{type(self).__name__} needs at least 2 children")
        object.__setattr__(self, "children", tuple(flat))

    def __repr__(self):
        return f"{type(self).__name__}({', '.join(map(repr, self.children))})"


class Series(_Composite):
    """Springs sharing the same force; elongations add."""


class Parallel(_Composite):
    """Springs sharing the same elongation; forces add."""


SPTree = Union[Leaf, Series, Parallel]


def leaves(tree: SPTree) -> Iterator[int]:
    """Yield spring indices in left-to-right order."""
    if isinstance(tree, Leaf):
        yield tree.index
    else:
        for child in tree.children:
            yield from leaves(child)


def spring_count(tree: SPTree) -> int:
    return sum(1 for _ in leaves(tree))


def validate(tree: SPTree) -> SPTree:
    """Check that the spring indices are exactly {1, ..., m} without repeats."""
    indices = list(leaves(tree))
    seen = set()
    for i in indices:
        if i in seen:
            raise TopologyError(f"duplicate spring index {i}")
        seen.add(i)
    missing = set(range(1, len(indices) + 1)) - seen
    if missing:
        raise TopologyError(
            f"spring indices must be 1..{len(indices)}; missing {sorted(missing)}"
        )
    return tree


def normalize(tree: SPTree) -> SPTree:
    """Rebuild ``tree`` in normal form (a no-op for trees built via the constructors)."""
    if isinstance(tree, Leaf):
        return tree
    return type(tree)(*(normalize(child) for child in tree.children))


_CATALOGUE = {
    1: Series(1, Parallel(2, 3), 4),
    2: Series(1, 2, 3, 4),
    3: Parallel(Series(1, 2), Series(3, 4)),
    4: Parallel(Series(1, 2, 3), 4),
    5: Parallel(Series(1, 2), 3, 4),
    6: Series(1, Parallel(2, 3, 4)),
    7: Series(Parallel(1, 3), Parallel(2, 4)),
    8: Parallel(1, 2, 3, 4),
    9: Series(1, Parallel(Series(2, 3), 4)),
    10: Parallel(Series(1, Parallel(2, 3)), 4),
}

# closed forms in the elastic limits, written the way they are usually displayed
_FORMULAS = {
    1: "1/c1 + 1/(c2 + c3) + 1/c4",
    2: "1/c1 + 1/c2 + 1/c3 + 1/c4",
    3: "1/(1/(1/c1 + 1/c2) + 1/(1/c3 + 1/c4))",
    4: "1/(1/(1/c1 + 1/c2 + 1/c3) + c4)",
    5: "1/(1/(1/c1 + 1/c2) + c3 + c4)",
    6: "1/c1 + 1/(c2 + c3 + c4)",
    7: "1/(c1 + c3) + 1/(c2 + c4)",
    8: "1/(c1 + c2 + c3 + c4)",
    9: "1/c1 + 1/(c4 + 1/(1/c2 + 1/c3))",
    10: "1/(c4 + 1/(1/c1 + 1/(c2 + c3)))",
}

CASE_IDS = tuple(sorted(_CATALOGUE))


def _check_case_id(case_id) -> int:
    if isinstance(case_id, bool) or not isinstance(case_id, int) or case_id not in _CATALOGUE:
        raise ValueError(f"case id must be an integer in 1..10, got {case_id!r}")
    return case_id


def canonical_case(case_id: int) -> SPTree:
    """Return the four-spring topology of Case ``case_id`` (1..10)."""
    return _CATALOGUE[_check_case_id(case_id)]


def case_resistance_formula(case_id: int) -> str:
    """Closed-form resistance of Case ``case_id`` in the elastic limits, e.g. ``1/(c1 + c2 + c3 + c4)``."""
    return _FORMULAS[_check_case_id(case_id)]


def print_topology(tree: SPTree) -> str:
    if isinstance(tree, Leaf):
        return str(tree.index)
    tag = "s" if isinstance(tree, Series) else "p"
    return f"{tag}({','.join(print_topology(child) for child in tree.children)})"


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, char: str):
        if self.peek() != char:
            found = repr(self.peek()) if self.peek() else "end of input"
            raise TopologySyntaxError(f"expected {char!r}, found {found}", self._offset())
        self.pos += 1

    def _offset(self) -> int:
        # byte offset, not character offset
        return len(self.text[: self.pos].encode("utf-8"))

    def term(self) -> SPTree:
        char = self.peek()
        if char.isdigit():
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            value = int(self.text[start : self.pos])
            if value < 1:
                self.pos = start
                raise TopologySyntaxError("spring index must be >= 1", self._offset())
            return Leaf(value)
        if char in ("s", "p"):
            self.pos += 1
            self.expect("(")
            children = [self.term()]
            while self.peek() == ",":
                self.pos += 1
                children.append(self.term())
            if len(children) < 2:
                raise TopologySyntaxError(
                    f"{char}(...) needs at least 2 children", self._offset()
                )
            self.expect(")")
            return Series(*children) if char == "s" else Parallel(*children)
        found = repr(char) if char else "end of input"
        raise TopologySyntaxError(f"expected spring index, 's(' or 'p(', found {found}", self._offset())


def parse_topology(expr: str) -> SPTree:
    """Parse a topology expression such as ``"p(s(1,2),3)"`` into a normal-form tree.

    Raises TopologySyntaxError (carrying the byte offset) on malformed input and
    TopologyError when the indices are duplicated or not exactly 1..m.
    """
    parser = _Parser(expr)
    tree = parser.term()
    if parser.peek():
        raise TopologySyntaxError(f"unexpected trailing input {parser.peek()!r}", parser._offset())
    return validate(tree)


def random_topology(m: int, rng) -> SPTree:
    """Draw a random series-parallel tree over springs 1..m.

    ``rng`` is a :class:`numpy.random.Generator`.  The indices are shuffled and
    split recursively into groups composed alternately in series and in
    parallel, so every tree shape with ``m`` leaves can occur.
    """
    if m < 1:
        raise TopologyError("m must be >= 1")
    order = [int(i) + 1 for i in rng.permutation(m)]

    def build(items, series_first):
        if len(items) == 1:
            return Leaf(items[0])
        n_groups = int(rng.integers(2, len(items) + 1))
        cuts = sorted(rng.choice(np.arange(1, len(items)), size=n_groups - 1, replace=False))
        groups = [items[a:b] for a, b in zip([0, *cuts], [*cuts, len(items)])]
        kids = [build(g, not series_first) for g in groups]
        return Series(*kids) if series_first else Parallel(*kids)

    return validate(build(order, bool(rng.integers(2))))
