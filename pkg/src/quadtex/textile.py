"""Layered edge graphs from commuting matrices, specifications and tiles.

A pair of commuting nonnegative integer matrices A, B over a common vertex
set defines two directed multigraphs on those vertices.  A *specification*
pairs every composable edge path alpha.b (an A-edge followed by a B-edge)
with a composable path a.beta (B-edge then A-edge) having the same outer
endpoints.  Each pairing kappa(alpha, b) = (a, beta) is drawn as a unit
square

        . --alpha--> .
        |            |
        a            b
        v            v
        . --beta-->  .

and those squares are the tile alphabet of everything downstream: the quad
module basis, the graded word spaces, and the two-dimensional subshift.

All orderings are fixed here (edges by (source, target, multiplicity),
tiles by (top, right), corner pairs by (alpha, a)) so every derived matrix
is bit-reproducible.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

from .errors import (
    BlockViolation,
    ExchangeUnavailable,
    InvalidMatrix,
    NonCommuting,
    NotABijection,
)

LAYER_A = "A"
LAYER_B = "B"


@dataclass(frozen=True)
class IntMatrix:
    """Square matrix of nonnegative integers; rows are immutable tuples."""

    rows: tuple[tuple[int, ...], ...]

    @staticmethod
    def from_rows(rows) -> "IntMatrix":
        n = len(rows)
        if n == 0:
            raise InvalidMatrix("matrix must have positive size")
        for row in rows:
            if len(row) != n:
                raise InvalidMatrix(f"matrix is not square: {n} rows, row of length {len(row)}")
            for entry in row:
                if int(entry) != entry or entry < 0:
                    raise InvalidMatrix(f"entry {entry!r} is not a nonnegative integer")
        return IntMatrix(tuple(tuple(int(x) for x in row) for row in rows))

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def mul(self, other: "IntMatrix") -> "IntMatrix":
        n = self.n
        return IntMatrix(
            tuple(
                tuple(sum(self.rows[i][k] * other.rows[k][j] for k in range(n)) for j in range(n))
                for i in range(n)
            )
        )


@dataclass(frozen=True, order=True)
class Edge:
    """Directed edge in one layer; vertices are 1-based.

    Field order gives the canonical sort: (layer, source, target, mult_index).
    """

    layer: str
    source: int
    target: int
    mult_index: int

    @property
    def id(self) -> str:
        return f"{self.layer}:{self.source}->{self.target}#{self.mult_index}"

    def __repr__(self):
        return f"Edge({self.id})"


@dataclass(frozen=True)
class Tile:
    """Unit square (top, right, left, bottom) with kappa(top, right) = (left, bottom)."""

    top: Edge
    right: Edge
    left: Edge
    bottom: Edge

    @property
    def vertex(self) -> int:
        """Bottom-right corner vertex: r(right) = r(bottom)."""
        return self.right.target

    def sort_key(self):
        return (self.top, self.right)

    def __repr__(self):
        return f"Tile({self.top.id},{self.right.id},{self.left.id},{self.bottom.id})"


@dataclass(frozen=True)
class OmegaPair:
    """Top-left corner pair (alpha, a) realized by at least one tile."""

    alpha: Edge
    a: Edge


@dataclass(frozen=True)
class Kappa:
    """Bijection between composable AB pairs and BA pairs, stored as pairs.

    ``pairs`` holds ((alpha, b), (a, beta)) entries sorted by the domain
    pair; ``forward`` and ``inverse`` are the derived lookup maps.
    """

    pairs: tuple[tuple[tuple[Edge, Edge], tuple[Edge, Edge]], ...]

    @cached_property
    def forward(self) -> dict[tuple[Edge, Edge], tuple[Edge, Edge]]:
        return dict(self.pairs)

    @cached_property
    def inverse(self) -> dict[tuple[Edge, Edge], tuple[Edge, Edge]]:
        return {image: preimage for preimage, image in self.pairs}


@dataclass(frozen=True)
class TextileSystem:
    """Two commuting matrices, their edge lists and a validated specification."""

    matrix_a: IntMatrix
    matrix_b: IntMatrix
    edges_a: tuple[Edge, ...]
    edges_b: tuple[Edge, ...]
    kappa: Kappa

    @property
    def n_vertices(self) -> int:
        return self.matrix_a.n

    def edges(self, layer: str) -> tuple[Edge, ...]:
        return self.edges_a if layer == LAYER_A else self.edges_b

    @cached_property
    def tiles(self) -> tuple[Tile, ...]:
        built = [
            Tile(top=alpha, right=b, left=a, bottom=beta)
            for (alpha, b), (a, beta) in self.kappa.pairs
        ]
        built.sort(key=Tile.sort_key)
        return tuple(built)

    @cached_property
    def tile_index(self) -> dict[Tile, int]:
        return {tile: i for i, tile in enumerate(self.tiles)}

    @cached_property
    def tile_by_top_right(self) -> dict[tuple[Edge, Edge], Tile]:
        return {(t.top, t.right): t for t in self.tiles}

    @cached_property
    def omega(self) -> tuple[OmegaPair, ...]:
        seen = sorted({(t.top, t.left) for t in self.tiles})
        return tuple(OmegaPair(alpha=alpha, a=a) for alpha, a in seen)


def edges_from_matrix(matrix: IntMatrix, layer: str) -> tuple[Edge, ...]:
    """M(i,j) parallel edges i -> j, ordered by (source, target, multiplicity)."""
    if layer not in (LAYER_A, LAYER_B):
        raise ValueError(f"layer must be {LAYER_A!r} or {LAYER_B!r}, got {layer!r}")
    out = []
    n = matrix.n
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for k in range(1, matrix[i - 1, j - 1] + 1):
                out.append(Edge(layer=layer, source=i, target=j, mult_index=k))
    return tuple(out)


def check_commuting(matrix_a: IntMatrix, matrix_b: IntMatrix) -> None:
    """Raise NonCommuting at the first entry where A*B != B*A."""
    if matrix_a.n != matrix_b.n:
        raise InvalidMatrix(f"size mismatch: {matrix_a.n} vs {matrix_b.n}")
    ab = matrix_a.mul(matrix_b)
    ba = matrix_b.mul(matrix_a)
    for i in range(matrix_a.n):
        for j in range(matrix_a.n):
            if ab[i, j] != ba[i, j]:
                raise NonCommuting((i + 1, j + 1), ab[i, j], ba[i, j])


def sigma_blocks(
    matrix_a: IntMatrix, matrix_b: IntMatrix
) -> dict[tuple[int, int], tuple[tuple[tuple[Edge, Edge], ...], tuple[tuple[Edge, Edge], ...]]]:
    """Composable pair sets per (start, end) vertex block.

    Block (i, j) collects the AB pairs (alpha, b) with s(alpha)=i, r(b)=j and
    the BA pairs (a, beta) with s(a)=i, r(beta)=j; both lists have (A*B)(i,j)
    elements and are sorted by edge order.
    """
    check_commuting(matrix_a, matrix_b)
    edges_a = edges_from_matrix(matrix_a, LAYER_A)
    edges_b = edges_from_matrix(matrix_b, LAYER_B)
    blocks: dict[tuple[int, int], tuple[list, list]] = {
        (i, j): ([], [])
        for i in range(1, matrix_a.n + 1)
        for j in range(1, matrix_a.n + 1)
    }
    for alpha in edges_a:
        for b in edges_b:
            if alpha.target == b.source:
                blocks[(alpha.source, b.target)][0].append((alpha, b))
    for a in edges_b:
        for beta in edges_a:
            if a.target == beta.source:
                blocks[(a.source, beta.target)][1].append((a, beta))
    return {
        key: (tuple(sorted(ab)), tuple(sorted(ba)))
        for key, (ab, ba) in blocks.items()
    }


def _validate_kappa(
    matrix_a: IntMatrix, matrix_b: IntMatrix, pairs: list
) -> Kappa:
    blocks = sigma_blocks(matrix_a, matrix_b)
    domain = {p for ab, _ in blocks.values() for p in ab}
    codomain = {p for _, ba in blocks.values() for p in ba}
    seen_domain = set()
    seen_codomain = set()
    for (alpha, b), (a, beta) in pairs:
        if (alpha, b) not in domain:
            raise BlockViolation(((alpha.id, b.id), (a.id, beta.id)), "domain pair not composable")
        if (a, beta) not in codomain:
            raise BlockViolation(((alpha.id, b.id), (a.id, beta.id)), "image pair not composable")
        if alpha.source != a.source:
            raise BlockViolation(((alpha.id, b.id), (a.id, beta.id)), "sources differ")
        if b.target != beta.target:
            raise BlockViolation(((alpha.id, b.id), (a.id, beta.id)), "ranges differ")
        seen_domain.add((alpha, b))
        seen_codomain.add((a, beta))
    if seen_domain != domain or seen_codomain != codomain or len(pairs) != len(domain):
        raise NotABijection(
            f"pairing covers {len(seen_domain)}/{len(domain)} domain pairs and "
            f"{len(seen_codomain)}/{len(codomain)} image pairs"
        )
    return Kappa(pairs=tuple(sorted(pairs)))


def build_kappa(matrix_a: IntMatrix, matrix_b: IntMatrix, strategy="lex") -> Kappa:
    """Build a specification.

    ``lex`` pairs the k-th AB pair with the k-th BA pair inside each block.
    ``exchange`` maps (alpha, b) to (b, alpha); it needs a single vertex,
    where every edge pair is composable both ways.  An explicit list of
    ((alpha_id, b_id), (a_id, beta_id)) entries is accepted as-is and fully
    validated.
    """
    blocks = sigma_blocks(matrix_a, matrix_b)
    if strategy == "lex":
        pairs = []
        for key in sorted(blocks):
            ab, ba = blocks[key]
            pairs.extend(zip(ab, ba))
        return _validate_kappa(matrix_a, matrix_b, pairs)
    if strategy == "exchange":
        if matrix_a.n != 1:
            raise ExchangeUnavailable(
                f"exchange pairing needs a single vertex, system has {matrix_a.n}"
            )
        pairs = [((alpha, b), (b, alpha)) for ab, _ in blocks.values() for alpha, b in ab]
        return _validate_kappa(matrix_a, matrix_b, pairs)
    if isinstance(strategy, (list, tuple)):
        by_id = {
            e.id: e
            for e in edges_from_matrix(matrix_a, LAYER_A) + edges_from_matrix(matrix_b, LAYER_B)
        }
        try:
            pairs = [
                ((by_id[alpha], by_id[b]), (by_id[a], by_id[beta]))
                for (alpha, b), (a, beta) in strategy
            ]
        except KeyError as exc:
            raise NotABijection(f"unknown edge id {exc.args[0]!r} in explicit pairing") from exc
        return _validate_kappa(matrix_a, matrix_b, pairs)
    raise ValueError(f"unknown strategy {strategy!r}")


def count_specifications(matrix_a: IntMatrix, matrix_b: IntMatrix) -> int:
    """Number of specifications: the product of (A*B)(i,j)! over all blocks."""
    ab = matrix_a.mul(matrix_b)
    total = 1
    for i in range(matrix_a.n):
        for j in range(matrix_a.n):
            total *= math.factorial(ab[i, j])
    return total


def enumerate_kappas(
    matrix_a: IntMatrix, matrix_b: IntMatrix, limit: int | None = None
) -> Iterator[Kappa]:
    """Yield every specification in a fixed order.

    Within each block the BA side runs through its permutations in
    lexicographic order; blocks combine by (i, j) order with the last block
    varying fastest.  The first yield is therefore the ``lex`` pairing.
    """
    blocks = sigma_blocks(matrix_a, matrix_b)
    keys = sorted(key for key in blocks if blocks[key][0])
    per_block = [
        [list(zip(blocks[key][0], perm)) for perm in itertools.permutations(blocks[key][1])]
        for key in keys
    ]
    count = 0
    for combo in itertools.product(*per_block):
        if limit is not None and count >= limit:
            return
        pairs = [pair for block_pairs in combo for pair in block_pairs]
        yield _validate_kappa(matrix_a, matrix_b, pairs)
        count += 1


def build_system(a_rows, b_rows, kappa="lex") -> TextileSystem:
    """Validate matrices, build edges and a specification, return the system."""
    matrix_a = IntMatrix.from_rows(a_rows)
    matrix_b = IntMatrix.from_rows(b_rows)
    check_commuting(matrix_a, matrix_b)
    spec = kappa if isinstance(kappa, Kappa) else build_kappa(matrix_a, matrix_b, kappa)
    return TextileSystem(
        matrix_a=matrix_a,
        matrix_b=matrix_b,
        edges_a=edges_from_matrix(matrix_a, LAYER_A),
        edges_b=edges_from_matrix(matrix_b, LAYER_B),
        kappa=spec,
    )


def tiles(ts: TextileSystem) -> tuple[Tile, ...]:
    """The tile alphabet, one square per kappa pairing, ordered by (top, right)."""
    return ts.tiles


def omega_set(ts: TextileSystem) -> tuple[OmegaPair, ...]:
    """Distinct (top, left) corner pairs of the tiles, ordered by (alpha, a)."""
    return ts.omega


def kappa_indicators(ts: TextileSystem):
    """0/1 existence tables for tiles with two fixed edges.

    Returns (left_table, bottom_table): ``left_table[(a, alpha, b)] = 1``
    when some tile has top alpha, right b and left a, and
    ``bottom_table[(alpha, a, beta)] = 1`` when some tile has top alpha,
    left a and bottom beta.  Missing keys mean 0.
    """
    left_table: dict[tuple[Edge, Edge, Edge], int] = {}
    bottom_table: dict[tuple[Edge, Edge, Edge], int] = {}
    for tile in ts.tiles:
        left_table[(tile.left, tile.top, tile.right)] = 1
        bottom_table[(tile.top, tile.left, tile.bottom)] = 1
    return left_table, bottom_table
