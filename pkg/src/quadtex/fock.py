"""Graded word spaces of glued tiles, creation operators, identity checks.

The graded space has the two edge algebras at level 0 (one basis word per
B-edge, then one per A-edge), the tiles at level 1, and at level n the
length-n tile words glued by a separator sequence: an ``eta`` separator
demands left(next) == right(previous), a ``rho`` separator demands
top(next) == bottom(previous).  Everything is truncated at a chosen top
level L.

Operators are exact integer sparse matrices over that basis.  The two
creation families prepend a tile (raising the level by one), diagonal
operators read an edge of the first tile, and adjoints are transposes:
every primitive operator here maps basis words to basis words with the
same terminal vertex, which makes the transpose the adjoint for the
vertex-valued pairing.

Truncation semantics: a product of operators computed on the truncated
basis agrees with the untruncated product on any column whose intermediate
images never leave the basis.  Each verified identity therefore carries a
margin m and is compared only on the block of rows and columns at levels
<= L - m (identity suite) or on interior levels [2, L - m] (relation
suite), where the level-0/1 corrections are provably absent.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import DiagElem, EdgeElem, embed, pullback_along_kappa
from .errors import (
    BasisTooLarge,
    LayerMismatch,
    TruncationTooShallow,
    UnknownEdge,
)
from .ktheory import build_quad_matrices
from .quadmod import QuadVector, inner_eta, inner_rho, left_basis_vector, top_basis_vector
from .textile import LAYER_A, LAYER_B, Edge, TextileSystem, Tile, kappa_indicators

SEP_ETA = "eta"
SEP_RHO = "rho"
DEFAULT_BASIS_CAP = 10**6


@dataclass(frozen=True)
class FockWord:
    """One basis word: a glued tile sequence, or a level-0 edge marker.

    Level-0 words carry ``base_kind`` 'q' (B-edge summand) or 'p' (A-edge
    summand) and an edge; higher words carry n tiles and n-1 separators.
    """

    tiles: tuple[Tile, ...] = ()
    seps: tuple[str, ...] = ()
    base_kind: str | None = None
    base: Edge | None = None

    @property
    def level(self) -> int:
        return len(self.tiles)

    @property
    def vertex(self) -> int:
        """Terminal vertex: corner of the last tile, or range of the base edge."""
        if self.tiles:
            return self.tiles[-1].vertex
        return self.base.target

    def label(self) -> str:
        if not self.tiles:
            return f"{self.base_kind}[{self.base.id}]"
        parts = [f"({self.tiles[0].top.id},{self.tiles[0].right.id})"]
        for sep, tile in zip(self.seps, self.tiles[1:]):
            parts.append("-h-" if sep == SEP_ETA else "-v-")
            parts.append(f"({tile.top.id},{tile.right.id})")
        return "".join(parts)


def glued(previous: Tile, sep: str, following: Tile) -> bool:
    if sep == SEP_ETA:
        return previous.right == following.left
    return previous.bottom == following.top


@dataclass(frozen=True, eq=False)
class TruncatedFock:
    """Basis of all glued words up to a top level, with index maps."""

    ts: TextileSystem
    max_level: int
    words: tuple[FockWord, ...]
    index: dict[FockWord, int] = field(repr=False)
    levels: tuple[int, ...] = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.words)

    def level_indices(self, level: int) -> list[int]:
        return [i for i, lv in enumerate(self.levels) if lv == level]

    def count_at(self, level: int) -> int:
        return sum(1 for lv in self.levels if lv == level)


def fock_basis(ts: TextileSystem, max_level: int, cap: int = DEFAULT_BASIS_CAP) -> TruncatedFock:
    """Enumerate the graded basis up to ``max_level``.

    Words at each level are generated in order: level 0 lists the B-edge
    markers then the A-edge markers; level n+1 extends each level-n word in
    order by (separator, tile), eta before rho.  Raises BasisTooLarge when
    a level would exceed ``cap`` words.
    """
    if max_level < 1:
        raise ValueError("max_level must be at least 1")
    words: list[FockWord] = []
    words.extend(FockWord(base_kind="q", base=a) for a in ts.edges_b)
    words.extend(FockWord(base_kind="p", base=alpha) for alpha in ts.edges_a)

    level = [FockWord(tiles=(t,), seps=()) for t in ts.tiles]
    words.extend(level)
    for _ in range(2, max_level + 1):
        nxt: list[FockWord] = []
        for word in level:
            last = word.tiles[-1]
            for sep in (SEP_ETA, SEP_RHO):
                for tile in ts.tiles:
                    if glued(last, sep, tile):
                        nxt.append(
                            FockWord(tiles=word.tiles + (tile,), seps=word.seps + (sep,))
                        )
        if len(nxt) > cap:
            raise BasisTooLarge(
                f"level {len(level[0].tiles) + 1 if level else 0} would hold {len(nxt)} words (cap {cap})"
            )
        words.extend(nxt)
        level = nxt
    return TruncatedFock(
        ts=ts,
        max_level=max_level,
        words=tuple(words),
        index={w: i for i, w in enumerate(words)},
        levels=tuple(w.level for w in words),
    )


class SparseOp:
    """Exact sparse matrix over a truncated word basis (column-major dict)."""

    __slots__ = ("tf", "cols")

    def __init__(self, tf: TruncatedFock, cols: dict[int, dict[int, object]] | None = None):
        self.tf = tf
        self.cols = {}
        if cols:
            for c, col in cols.items():
                cleaned = {r: v for r, v in col.items() if v != 0}
                if cleaned:
                    self.cols[c] = cleaned

    @staticmethod
    def zero(tf: TruncatedFock) -> "SparseOp":
        return SparseOp(tf)

    @staticmethod
    def identity(tf: TruncatedFock) -> "SparseOp":
        return SparseOp(tf, {i: {i: 1} for i in range(tf.dim)})

    @staticmethod
    def diagonal(tf: TruncatedFock, values) -> "SparseOp":
        """Diagonal operator from a callable word -> value."""
        cols = {}
        for i, word in enumerate(tf.words):
            v = values(word)
            if v != 0:
                cols[i] = {i: v}
        return SparseOp(tf, cols)

    def entry(self, row: int, col: int):
        return self.cols.get(col, {}).get(row, 0)

    def entries(self):
        for c, col in self.cols.items():
            for r, v in col.items():
                yield r, c, v

    def __add__(self, other: "SparseOp") -> "SparseOp":
        cols = {c: dict(col) for c, col in self.cols.items()}
        for c, col in other.cols.items():
            target = cols.setdefault(c, {})
            for r, v in col.items():
                target[r] = target.get(r, 0) + v
        return SparseOp(self.tf, cols)

    def __sub__(self, other: "SparseOp") -> "SparseOp":
        return self + other.scale(-1)

    def scale(self, c) -> "SparseOp":
        if c == 0:
            return SparseOp(self.tf)
        return SparseOp(
            self.tf, {j: {r: c * v for r, v in col.items()} for j, col in self.cols.items()}
        )

    def __matmul__(self, other: "SparseOp") -> "SparseOp":
        cols: dict[int, dict[int, object]] = {}
        for c, col in other.cols.items():
            acc: dict[int, object] = {}
            for k, bv in col.items():
                left_col = self.cols.get(k)
                if not left_col:
                    continue
                for r, av in left_col.items():
                    acc[r] = acc.get(r, 0) + av * bv
            if acc:
                cols[c] = acc
        return SparseOp(self.tf, cols)

    def transpose(self) -> "SparseOp":
        cols: dict[int, dict[int, object]] = {}
        for r, c, v in self.entries():
            cols.setdefault(r, {})[c] = v
        return SparseOp(self.tf, cols)

    def restrict(self, low_level: int, high_level: int) -> "SparseOp":
        """Cut rows and columns to words with level in [low_level, high_level]."""
        levels = self.tf.levels
        cols = {}
        for c, col in self.cols.items():
            if not low_level <= levels[c] <= high_level:
                continue
            kept = {r: v for r, v in col.items() if low_level <= levels[r] <= high_level}
            if kept:
                cols[c] = kept
        return SparseOp(self.tf, cols)

    def apply(self, vec):
        """Matrix-vector product; vec is indexable by basis position."""
        out = [Fraction(0)] * self.tf.dim
        for c, col in self.cols.items():
            x = vec[c]
            if x == 0:
                continue
            for r, v in col.items():
                out[r] += v * x
        return out

    def is_zero(self) -> bool:
        return not self.cols

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseOp):
            return NotImplemented
        return self.cols == other.cols

    def __hash__(self):
        raise TypeError("SparseOp is unhashable")

    def level_shift(self) -> int | None:
        """The uniform level shift of all entries, or None if mixed/empty."""
        shifts = {self.tf.levels[r] - self.tf.levels[c] for r, c, _ in self.entries()}
        if len(shifts) == 1:
            return shifts.pop()
        return None

    def nnz(self) -> int:
        return sum(len(col) for col in self.cols.values())

    @property
    def unsafe_top_level(self) -> int:
        """Columns at this level may already have truncated images."""
        return self.tf.max_level


def adjoint(op: SparseOp) -> SparseOp:
    """Transpose; coincides with the adjoint for the vertex-valued pairing
    because every operator built here preserves terminal vertices."""
    return op.transpose()


def creation_from_vector(tf: TruncatedFock, kind: str, xi: QuadVector) -> SparseOp:
    """Creation operator of an arbitrary tile vector.

    ``s`` prepends with an eta separator and consumes the level-0 B-edge
    summand; ``t`` prepends with a rho separator and consumes the A-edge
    summand.  Words pushed past the top level are dropped (truncation).
    """
    ts = tf.ts
    sep = SEP_ETA if kind == "s" else SEP_RHO
    cols: dict[int, dict[int, object]] = {}
    support = [(tile, c) for tile, c in zip(ts.tiles, xi.coeffs) if c != 0]
    for i, word in enumerate(tf.words):
        if word.level == 0:
            wanted = "q" if kind == "s" else "p"
            if word.base_kind != wanted:
                continue
            col = {}
            for tile, c in support:
                matches = (
                    tile.right == word.base if kind == "s" else tile.bottom == word.base
                )
                if matches:
                    j = tf.index[FockWord(tiles=(tile,), seps=())]
                    col[j] = col.get(j, 0) + c
            if col:
                cols[i] = col
            continue
        if word.level >= tf.max_level:
            continue
        first = word.tiles[0]
        col = {}
        for tile, c in support:
            if glued(tile, sep, first):
                extended = FockWord(tiles=(tile,) + word.tiles, seps=(sep,) + word.seps)
                j = tf.index[extended]
                col[j] = col.get(j, 0) + c
        if col:
            cols[i] = col
    return SparseOp(tf, cols)


def creation(tf: TruncatedFock, kind: str, edge: Edge) -> SparseOp:
    """s_alpha (kind 's', A-edge) or t_a (kind 't', B-edge)."""
    ts = tf.ts
    if kind == "s":
        if edge not in ts.edges_a:
            raise (LayerMismatch if edge in ts.edges_b else UnknownEdge)(
                f"{edge.id} is not an A-layer edge"
            )
        xi = QuadVector(coeffs=tuple(Fraction(1 if t.top == edge else 0) for t in ts.tiles))
    elif kind == "t":
        if edge not in ts.edges_b:
            raise (LayerMismatch if edge in ts.edges_a else UnknownEdge)(
                f"{edge.id} is not a B-layer edge"
            )
        xi = QuadVector(coeffs=tuple(Fraction(1 if t.left == edge else 0) for t in ts.tiles))
    else:
        raise ValueError(f"kind must be 's' or 't', got {kind!r}")
    return creation_from_vector(tf, kind, xi)


def left_action_op(tf: TruncatedFock, kind: str, elem: EdgeElem) -> SparseOp:
    """Diagonal left action of an edge vector.

    rho reads the first tile's top edge (level 0: scales A-edge markers);
    eta reads the first tile's left edge (level 0: scales B-edge markers).
    """
    ts = tf.ts
    if kind == "rho":
        if elem.layer != LAYER_A:
            raise LayerMismatch("rho action takes an A-layer vector")
        lookup = {e: c for e, c in zip(ts.edges_a, elem.coeffs)}

        def value(word: FockWord):
            if word.tiles:
                return lookup[word.tiles[0].top]
            return lookup[word.base] if word.base_kind == "p" else 0

    elif kind == "eta":
        if elem.layer != LAYER_B:
            raise LayerMismatch("eta action takes a B-layer vector")
        lookup = {e: c for e, c in zip(ts.edges_b, elem.coeffs)}

        def value(word: FockWord):
            if word.tiles:
                return lookup[word.tiles[0].left]
            return lookup[word.base] if word.base_kind == "q" else 0

    else:
        raise ValueError(f"kind must be 'rho' or 'eta', got {kind!r}")
    return SparseOp.diagonal(tf, value)


def vertex_action_op(tf: TruncatedFock, y: DiagElem) -> SparseOp:
    """Diagonal action of a vertex vector through the first tile's source.

    On words it scales by y at the source of the first tile's top edge (equal
    to the source of its left edge); level-0 markers are scaled by y at their
    edge's source on each summand.  Only used inside identities whose other
    factors vanish on level 0, where the two level-0 conventions cannot
    disagree.
    """

    def value(word: FockWord):
        if word.tiles:
            return y[word.tiles[0].top.source]
        return y[word.base.source]

    return SparseOp.diagonal(tf, value)


def graded_projection(tf: TruncatedFock, which, n: int | None = None) -> SparseOp:
    """P_n ('level', n), or the first-separator projections 'rho' / 'eta'.

    'rho' keeps the words of level >= 2 whose first separator is eta (the
    range of the s-family above level 1); 'eta' keeps first separator rho.
    """
    if which == "level":
        return SparseOp.diagonal(tf, lambda w: 1 if w.level == n else 0)
    if which == "rho":
        return SparseOp.diagonal(
            tf, lambda w: 1 if w.level >= 2 and w.seps[0] == SEP_ETA else 0
        )
    if which == "eta":
        return SparseOp.diagonal(
            tf, lambda w: 1 if w.level >= 2 and w.seps[0] == SEP_RHO else 0
        )
    raise ValueError(f"which must be 'level', 'rho' or 'eta', got {which!r}")


def rank_one(tf: TruncatedFock, xi, zeta) -> SparseOp:
    """theta_{xi,zeta}: gamma -> xi scaled by the vertex pairing <zeta|gamma>.

    ``xi`` and ``zeta`` are vectors over the truncated basis (any indexable).
    Sends basis word W to sum_W' xi(W') zeta(W) [vertex(W') == vertex(W)] W'.
    """
    xi_support = [
        (i, v, tf.words[i].vertex) for i, v in enumerate(xi) if v != 0
    ]
    cols: dict[int, dict[int, object]] = {}
    for j, z in enumerate(zeta):
        if z == 0:
            continue
        vertex = tf.words[j].vertex
        col = {i: v * z for i, v, vx in xi_support if vx == vertex}
        if col:
            cols[j] = col
    return SparseOp(tf, cols)


def basis_vector(tf: TruncatedFock, word: FockWord):
    vec = [Fraction(0)] * tf.dim
    vec[tf.index[word]] = Fraction(1)
    return vec


# ---------------------------------------------------------------------------
# identity verification
# ---------------------------------------------------------------------------


@dataclass
class IdentityCheck:
    identity_id: str
    formula: str
    margin: int
    levels_checked: tuple[int, int] | None
    status: str  # 'pass' | 'fail' | 'skipped'
    notice: str | None = None
    witness: dict | None = None

    def to_jsonable(self) -> dict:
        out = {
            "identity_id": self.identity_id,
            "formula": self.formula,
            "levels_checked": list(self.levels_checked) if self.levels_checked else None,
            "status": self.status,
        }
        if self.notice:
            out["notice"] = self.notice
        if self.witness:
            out["witness"] = self.witness
        return out


@dataclass
class Report:
    title: str
    max_level: int
    checks: list[IdentityCheck]

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    @property
    def skipped(self) -> list[str]:
        return [c.identity_id for c in self.checks if c.status == "skipped"]

    def to_jsonable(self) -> dict:
        return {
            "title": self.title,
            "max_level": self.max_level,
            "passed": self.passed,
            "identities": [c.to_jsonable() for c in self.checks],
        }


def _compare(tf: TruncatedFock, pairs, low: int, high: int) -> dict | None:
    """First difference between restricted sides, or None when all equal."""
    for label, lhs, rhs in pairs:
        diff = lhs.restrict(low, high) - rhs.restrict(low, high)
        if diff.is_zero():
            continue
        row, col, _ = min(diff.entries(), key=lambda e: (e[1], e[0]))
        return {
            "case": label,
            "row": tf.words[row].label(),
            "col": tf.words[col].label(),
            "lhs": str(lhs.entry(row, col)),
            "rhs": str(rhs.entry(row, col)),
        }
    return None


def _run_identity(tf, identity_id, formula, margin, pairs_builder, low_level=0) -> IdentityCheck:
    high = tf.max_level - margin
    check = IdentityCheck(
        identity_id=identity_id,
        formula=formula,
        margin=margin,
        levels_checked=(low_level, high),
        status="pass",
    )
    witness = _compare(tf, pairs_builder(), low_level, high)
    if witness is not None:
        check.status = "fail"
        check.witness = witness
    return check


class _Bank:
    """Caches the primitive operators of one truncated basis."""

    def __init__(self, tf: TruncatedFock):
        ts = tf.ts
        self.tf = tf
        self.ts = ts
        self.s = {alpha: creation(tf, "s", alpha) for alpha in ts.edges_a}
        self.t = {a: creation(tf, "t", a) for a in ts.edges_b}
        self.s_adj = {alpha: adjoint(op) for alpha, op in self.s.items()}
        self.t_adj = {a: adjoint(op) for a, op in self.t.items()}
        self.p = {
            alpha: left_action_op(tf, "rho", EdgeElem.basis(ts, alpha))
            for alpha in ts.edges_a
        }
        self.q = {a: left_action_op(tf, "eta", EdgeElem.basis(ts, a)) for a in ts.edges_b}
        self.ss = {alpha: self.s[alpha] @ self.s_adj[alpha] for alpha in ts.edges_a}
        self.tt = {a: self.t[a] @ self.t_adj[a] for a in ts.edges_b}
        self.units = {
            v: DiagElem.basis(ts.n_vertices, v) for v in range(1, ts.n_vertices + 1)
        }
        self.identity = SparseOp.identity(tf)
        self.p0 = graded_projection(tf, "level", 0)
        self.p1 = graded_projection(tf, "level", 1)
        self.p_rho = graded_projection(tf, "rho")
        self.p_eta = graded_projection(tf, "eta")

    def sum_ss(self) -> SparseOp:
        total = SparseOp.zero(self.tf)
        for op in self.ss.values():
            total = total + op
        return total

    def sum_tt(self) -> SparseOp:
        total = SparseOp.zero(self.tf)
        for op in self.tt.values():
            total = total + op
        return total

    def phi_rho_diag(self, y: DiagElem) -> SparseOp:
        return left_action_op(self.tf, "rho", embed(self.ts, LAYER_A, y))

    def phi_eta_diag(self, y: DiagElem) -> SparseOp:
        return left_action_op(self.tf, "eta", embed(self.ts, LAYER_B, y))


def _fock_identity_registry(bank: _Bank, rng_vectors):
    """(id, formula, margin, pairs builder) for the word-space identity suite."""
    tf, ts = bank.tf, bank.ts

    def creation_ranges():
        return [
            ("s-family", bank.sum_ss(), bank.p1 + bank.p_rho),
            ("t-family", bank.sum_tt(), bank.p1 + bank.p_eta),
        ]

    def range_partition():
        lhs = bank.sum_ss() + bank.sum_tt() + bank.p0
        return [("", lhs, bank.identity + bank.p1)]

    def co_isometry():
        pairs = []
        for alpha, beta in itertools.product(ts.edges_a, repeat=2):
            pairing = inner_eta(ts, top_basis_vector(ts, beta), top_basis_vector(ts, alpha))
            pairs.append(
                (
                    f"s*[{beta.id}]s[{alpha.id}]",
                    bank.s_adj[beta] @ bank.s[alpha],
                    left_action_op(tf, "eta", pairing),
                )
            )
        for a, b in itertools.product(ts.edges_b, repeat=2):
            pairing = inner_rho(ts, left_basis_vector(ts, b), left_basis_vector(ts, a))
            pairs.append(
                (
                    f"t*[{b.id}]t[{a.id}]",
                    bank.t_adj[b] @ bank.t[a],
                    left_action_op(tf, "rho", pairing),
                )
            )
        return pairs

    def vertex_sandwich():
        pairs = []
        for alpha in ts.edges_a:
            for v, y in bank.units.items():
                shifted = DiagElem.basis(ts.n_vertices, alpha.target) if v == alpha.source else None
                rhs = bank.phi_eta_diag(shifted) if shifted else SparseOp.zero(tf)
                pairs.append(
                    (
                        f"s*[{alpha.id}] E{v} s",
                        bank.s_adj[alpha] @ vertex_action_op(tf, y) @ bank.s[alpha],
                        rhs,
                    )
                )
        for a in ts.edges_b:
            for v, y in bank.units.items():
                shifted = DiagElem.basis(ts.n_vertices, a.target) if v == a.source else None
                rhs = bank.phi_rho_diag(shifted) if shifted else SparseOp.zero(tf)
                pairs.append(
                    (
                        f"t*[{a.id}] E{v} t",
                        bank.t_adj[a] @ vertex_action_op(tf, y) @ bank.t[a],
                        rhs,
                    )
                )
        return pairs

    def vertex_commutation():
        pairs = []
        for alpha in ts.edges_a:
            for v, y in bank.units.items():
                phi = vertex_action_op(tf, y)
                pairs.append(
                    (
                        f"[ss*[{alpha.id}], E{v}]",
                        bank.ss[alpha] @ bank.phi_eta_diag(y),
                        phi @ bank.ss[alpha],
                    )
                )
        for a in ts.edges_b:
            for v, y in bank.units.items():
                phi = vertex_action_op(tf, y)
                pairs.append(
                    (
                        f"[tt*[{a.id}], E{v}]",
                        bank.tt[a] @ bank.phi_rho_diag(y),
                        phi @ bank.tt[a],
                    )
                )
        return pairs

    def tile_word_commutation():
        pairs = []
        for tile in ts.tiles:
            word_op = (
                bank.t[tile.left]
                @ bank.s[tile.bottom]
                @ bank.t_adj[tile.right]
                @ bank.s_adj[tile.top]
            )
            for v, y in bank.units.items():
                phi = vertex_action_op(tf, y)
                pairs.append(
                    (f"tile {tile!r}, E{v}", word_op @ phi, phi @ word_op)
                )
        return pairs

    def compressed_range():
        # the compressed element of a vertex mass at v through an edge is
        # nonzero only at v = r(edge); both branches are exercised
        pairs = []
        for alpha in ts.edges_a:
            for v, y in bank.units.items():
                lhs = (
                    bank.p[alpha] @ bank.p_rho if v == alpha.target else SparseOp.zero(tf)
                )
                rhs = bank.s[alpha] @ bank.phi_rho_diag(y) @ bank.s_adj[alpha]
                pairs.append((f"p[{alpha.id}] from E{v}", lhs, rhs))
        for a in ts.edges_b:
            for v, y in bank.units.items():
                lhs = bank.q[a] @ bank.p_eta if v == a.target else SparseOp.zero(tf)
                rhs = bank.t[a] @ bank.phi_eta_diag(y) @ bank.t_adj[a]
                pairs.append((f"q[{a.id}] from E{v}", lhs, rhs))
        return pairs

    def diagonal_commutation():
        pairs = []
        diag_ops = [(f"p[{d.id}]", bank.p[d]) for d in ts.edges_a] + [
            (f"q[{d.id}]", bank.q[d]) for d in ts.edges_b
        ]
        for alpha in ts.edges_a:
            for name, op in diag_ops:
                pairs.append(
                    (f"[ss*[{alpha.id}], {name}]", bank.ss[alpha] @ op, op @ bank.ss[alpha])
                )
        for a in ts.edges_b:
            for name, op in diag_ops:
                pairs.append((f"[tt*[{a.id}], {name}]", bank.tt[a] @ op, op @ bank.tt[a]))
        return pairs

    def twisted_sandwich():
        pairs = []
        for alpha in ts.edges_a:
            for delta in ts.edges_a:
                lhs = bank.s_adj[alpha] @ bank.p[delta] @ bank.s[alpha]
                rhs = (
                    bank.phi_eta_diag(bank.units[alpha.target])
                    if delta == alpha
                    else SparseOp.zero(tf)
                )
                pairs.append((f"s*[{alpha.id}] p[{delta.id}] s", lhs, rhs))
            for d in ts.edges_b:
                lhs = bank.s_adj[alpha] @ bank.q[d] @ bank.s[alpha]
                twisted = pullback_along_kappa(ts, alpha, EdgeElem.basis(ts, d))
                pairs.append(
                    (
                        f"s*[{alpha.id}] q[{d.id}] s",
                        lhs,
                        left_action_op(tf, "eta", twisted),
                    )
                )
        for a in ts.edges_b:
            for d in ts.edges_b:
                lhs = bank.t_adj[a] @ bank.q[d] @ bank.t[a]
                rhs = (
                    bank.phi_rho_diag(bank.units[a.target]) if d == a else SparseOp.zero(tf)
                )
                pairs.append((f"t*[{a.id}] q[{d.id}] t", lhs, rhs))
            for delta in ts.edges_a:
                lhs = bank.t_adj[a] @ bank.p[delta] @ bank.t[a]
                twisted = pullback_along_kappa(ts, a, EdgeElem.basis(ts, delta))
                pairs.append(
                    (
                        f"t*[{a.id}] p[{delta.id}] t",
                        lhs,
                        left_action_op(tf, "rho", twisted),
                    )
                )
        return pairs

    def diagonal_reconstruction():
        # only the matching creation term survives: compressing p_gamma
        # through s_alpha gives the range mass when alpha == gamma, else 0
        pairs = []
        for gamma in ts.edges_a:
            middle = bank.phi_eta_diag(bank.units[gamma.target])
            rhs = (
                bank.s[gamma] @ middle @ bank.s_adj[gamma]
                + bank.p_eta @ bank.p[gamma] @ bank.p_eta
                + bank.p0 @ bank.p[gamma] @ bank.p0
            )
            pairs.append((f"p[{gamma.id}]", bank.p[gamma], rhs))
        for g in ts.edges_b:
            middle = bank.phi_rho_diag(bank.units[g.target])
            rhs = (
                bank.t[g] @ middle @ bank.t_adj[g]
                + bank.p_rho @ bank.q[g] @ bank.p_rho
                + bank.p0 @ bank.q[g] @ bank.p0
            )
            pairs.append((f"q[{g.id}]", bank.q[g], rhs))
        return pairs

    def base_rank_one_partition():
        total = SparseOp.zero(tf)
        for a in ts.edges_b:
            marker = basis_vector(tf, FockWord(base_kind="q", base=a))
            total = total + rank_one(tf, marker, marker)
        for alpha in ts.edges_a:
            marker = basis_vector(tf, FockWord(base_kind="p", base=alpha))
            total = total + rank_one(tf, marker, marker)
        return [("", total, bank.p0)]

    def tile_rank_one_partition():
        total = SparseOp.zero(tf)
        for tile in ts.tiles:
            vec = basis_vector(tf, FockWord(tiles=(tile,), seps=()))
            total = total + rank_one(tf, vec, vec)
        return [("", total, bank.p1)]

    def creation_expansion():
        pairs = []
        for tag, xi in rng_vectors:
            expanded_s = SparseOp.zero(tf)
            for alpha in ts.edges_a:
                u = top_basis_vector(ts, alpha)
                expanded_s = expanded_s + bank.s[alpha] @ left_action_op(
                    tf, "eta", inner_eta(ts, u, xi)
                )
            pairs.append((f"s[{tag}]", creation_from_vector(tf, "s", xi), expanded_s))
            expanded_t = SparseOp.zero(tf)
            for a in ts.edges_b:
                v = left_basis_vector(ts, a)
                expanded_t = expanded_t + bank.t[a] @ left_action_op(
                    tf, "rho", inner_rho(ts, v, xi)
                )
            pairs.append((f"t[{tag}]", creation_from_vector(tf, "t", xi), expanded_t))
        return pairs

    return [
        ("creation_range", "sum_a s_a s_a* = P1 + Prho ; sum_b t_b t_b* = P1 + Peta", 1, creation_ranges),
        ("range_partition", "sum ss* + sum tt* + P0 = 1 + P1", 1, range_partition),
        ("co_isometry", "s_z* s_x = act_eta(<z|x>_eta) ; t_z* t_x = act_rho(<z|x>_rho)", 1, co_isometry),
        ("vertex_sandwich", "s_a* phi(y) s_a = act_eta(edge_map_a(y))", 2, vertex_sandwich),
        ("vertex_commutation", "s_a s_a* phi(y) = phi(y) s_a s_a*", 1, vertex_commutation),
        ("tile_word_commutation", "t_a s_beta t_b* s_alpha* phi(y) = phi(y) (same word)", 4, tile_word_commutation),
        ("compressed_range", "act_rho(p_a) Prho = s_a act_rho(E_{r(a)}) s_a*", 2, compressed_range),
        ("diagonal_commutation", "s_a s_a* D = D s_a s_a* for diagonal D", 1, diagonal_commutation),
        ("twisted_sandwich", "s_a* D s_a = act(pullback of D along kappa)", 2, twisted_sandwich),
        ("diagonal_reconstruction", "act_rho(w) = sum_a s_a act_eta(w_a) s_a* + Peta.. + P0..", 2, diagonal_reconstruction),
        ("base_rank_one_partition", "sum theta(edge markers) = P0", 0, base_rank_one_partition),
        ("tile_rank_one_partition", "sum theta(tile words) = P1", 0, tile_rank_one_partition),
        ("creation_expansion", "s_x = sum_a s_a act_eta(<u_a|x>_eta)", 1, creation_expansion),
    ]


def _seeded_tile_vectors(ts: TextileSystem, count=2, seed=20240311):
    import random

    rng = random.Random(seed)
    out = []
    for k in range(count):
        values = [Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in ts.tiles]
        out.append((f"rand{k}", QuadVector.from_values(ts, values)))
    return out


def verify_fock_identities(
    tf: TruncatedFock, identities: list[str] | None = None, headroom: int = 1
) -> Report:
    """Check the word-space operator identities on their safe blocks.

    Each identity carries a margin m and is compared on rows and columns of
    level <= L - m.  Identities with L - m < headroom are skipped with a
    named notice when running the full default suite; explicitly requesting
    such an identity raises TruncationTooShallow.
    """
    if tf.max_level < 3:
        raise TruncationTooShallow("the identity suite needs max_level >= 3")
    bank = _Bank(tf)
    registry = _fock_identity_registry(bank, _seeded_tile_vectors(tf.ts))
    known = {identity_id for identity_id, *_ in registry}
    if identities is not None:
        unknown = set(identities) - known
        if unknown:
            raise ValueError(f"unknown identity ids: {sorted(unknown)}")
    checks = []
    for identity_id, formula, margin, builder in registry:
        if identities is not None and identity_id not in identities:
            continue
        if tf.max_level - margin < headroom:
            if identities is not None:
                raise TruncationTooShallow(
                    f"identity {identity_id!r} needs max_level >= {margin + headroom}, "
                    f"basis has {tf.max_level}"
                )
            checks.append(
                IdentityCheck(
                    identity_id=identity_id,
                    formula=formula,
                    margin=margin,
                    levels_checked=None,
                    status="skipped",
                    notice=f"needs max_level >= {margin + headroom}, basis has {tf.max_level}",
                )
            )
            continue
        checks.append(_run_identity(tf, identity_id, formula, margin, builder))
    return Report(title="word-space identities", max_level=tf.max_level, checks=checks)


def _relation_registry(bank: _Bank):
    tf, ts = bank.tf, bank.ts
    left_table, bottom_table = kappa_indicators(ts)
    composable_ab = {(alpha, b) for (alpha, b) in ts.kappa.forward}
    composable_ba = {(a, beta) for (a, beta) in ts.kappa.inverse}
    omega = ts.omega
    e_ops = {
        (pair.alpha, pair.a): bank.p[pair.alpha] @ bank.q[pair.a] for pair in omega
    }
    a_kappa, b_kappa, _ = build_quad_matrices(ts)
    omega_pos = {(pair.alpha, pair.a): i for i, pair in enumerate(omega)}

    def m1_interior():
        return [("", bank.sum_ss() + bank.sum_tt(), bank.identity)]

    def m1_uncut():
        return [("", bank.sum_ss() + bank.sum_tt() + bank.p0, bank.identity + bank.p1)]

    def m2_m3():
        pairs = []
        diag = [(f"p[{d.id}]", bank.p[d]) for d in ts.edges_a] + [
            (f"q[{d.id}]", bank.q[d]) for d in ts.edges_b
        ]
        for alpha in ts.edges_a:
            for name, op in diag:
                pairs.append((f"[ss*[{alpha.id}], {name}]", bank.ss[alpha] @ op, op @ bank.ss[alpha]))
        for a in ts.edges_b:
            for name, op in diag:
                pairs.append((f"[tt*[{a.id}], {name}]", bank.tt[a] @ op, op @ bank.tt[a]))
        return pairs

    def m4():
        pairs = []
        for alpha in ts.edges_a:
            for delta in ts.edges_a:
                lhs = bank.s_adj[alpha] @ bank.p[delta] @ bank.s[alpha]
                rhs = (
                    bank.phi_eta_diag(bank.units[alpha.target])
                    if delta == alpha
                    else SparseOp.zero(tf)
                )
                pairs.append((f"compress p[{delta.id}] through s[{alpha.id}]", lhs, rhs))
        for a in ts.edges_b:
            for d in ts.edges_b:
                lhs = bank.t_adj[a] @ bank.q[d] @ bank.t[a]
                rhs = bank.phi_rho_diag(bank.units[a.target]) if d == a else SparseOp.zero(tf)
                pairs.append((f"compress q[{d.id}] through t[{a.id}]", lhs, rhs))
        return pairs

    def m5():
        pairs = []
        for alpha in ts.edges_a:
            for d in ts.edges_b:
                lhs = bank.s_adj[alpha] @ bank.q[d] @ bank.s[alpha]
                rhs = left_action_op(
                    tf, "eta", pullback_along_kappa(ts, alpha, EdgeElem.basis(ts, d))
                )
                pairs.append((f"pullback q[{d.id}] through s[{alpha.id}]", lhs, rhs))
        for a in ts.edges_b:
            for delta in ts.edges_a:
                lhs = bank.t_adj[a] @ bank.p[delta] @ bank.t[a]
                rhs = left_action_op(
                    tf, "rho", pullback_along_kappa(ts, a, EdgeElem.basis(ts, delta))
                )
                pairs.append((f"pullback p[{delta.id}] through t[{a.id}]", lhs, rhs))
        return pairs

    def m6():
        return [
            (f"E{v}", bank.phi_rho_diag(y), bank.phi_eta_diag(y))
            for v, y in bank.units.items()
        ]

    def p1():
        sum_p = SparseOp.zero(tf)
        for op in bank.p.values():
            sum_p = sum_p + op
        sum_q = SparseOp.zero(tf)
        for op in bank.q.values():
            sum_q = sum_q + op
        return [
            ("sum p", sum_p, bank.identity),
            ("sum q", sum_q, bank.identity),
            ("sum ss* + tt*", bank.sum_ss() + bank.sum_tt(), bank.identity),
        ]

    def p2():
        pairs = []
        for alpha in ts.edges_a:
            pairs.append(
                (f"ss*[{alpha.id}] p", bank.ss[alpha] @ bank.p[alpha], bank.ss[alpha])
            )
        for a in ts.edges_b:
            pairs.append((f"tt*[{a.id}] q", bank.tt[a] @ bank.q[a], bank.tt[a]))
        return pairs

    def p3():
        pairs = []
        for alpha in ts.edges_a:
            for a in ts.edges_b:
                pairs.append(
                    (
                        f"[ss*[{alpha.id}], q[{a.id}]]",
                        bank.ss[alpha] @ bank.q[a],
                        bank.q[a] @ bank.ss[alpha],
                    )
                )
                pairs.append(
                    (
                        f"[tt*[{a.id}], p[{alpha.id}]]",
                        bank.tt[a] @ bank.p[alpha],
                        bank.p[alpha] @ bank.tt[a],
                    )
                )
        return pairs

    def p4():
        pairs = []
        for alpha in ts.edges_a:
            rhs = SparseOp.zero(tf)
            for beta in ts.edges_a:
                if alpha.target == beta.source:
                    rhs = rhs + bank.p[beta]
            pairs.append((f"s*s[{alpha.id}]", bank.s_adj[alpha] @ bank.s[alpha], rhs))
        for a in ts.edges_b:
            rhs = SparseOp.zero(tf)
            for b in ts.edges_b:
                if a.target == b.source:
                    rhs = rhs + bank.q[b]
            pairs.append((f"t*t[{a.id}]", bank.t_adj[a] @ bank.t[a], rhs))
        return pairs

    def p5():
        pairs = []
        for alpha in ts.edges_a:
            for a in ts.edges_b:
                rhs = SparseOp.zero(tf)
                for b in ts.edges_b:
                    if left_table.get((a, alpha, b)):
                        rhs = rhs + bank.q[b]
                pairs.append(
                    (
                        f"s*[{alpha.id}] q[{a.id}] s",
                        bank.s_adj[alpha] @ bank.q[a] @ bank.s[alpha],
                        rhs,
                    )
                )
                rhs = SparseOp.zero(tf)
                for beta in ts.edges_a:
                    if bottom_table.get((alpha, a, beta)):
                        rhs = rhs + bank.p[beta]
                pairs.append(
                    (
                        f"t*[{a.id}] p[{alpha.id}] t",
                        bank.t_adj[a] @ bank.p[alpha] @ bank.t[a],
                        rhs,
                    )
                )
        return pairs

    def corner_commutation():
        pairs = []
        for alpha in ts.edges_a:
            for a in ts.edges_b:
                pairs.append(
                    (
                        f"[p[{alpha.id}], q[{a.id}]]",
                        bank.p[alpha] @ bank.q[a],
                        bank.q[a] @ bank.p[alpha],
                    )
                )
        return pairs

    def composability_support():
        pairs = []
        for alpha in ts.edges_a:
            rhs = SparseOp.zero(tf)
            for b in ts.edges_b:
                if (alpha, b) in composable_ab:
                    rhs = rhs + bank.q[b]
            pairs.append((f"s*s[{alpha.id}]", bank.s_adj[alpha] @ bank.s[alpha], rhs))
        for a in ts.edges_b:
            rhs = SparseOp.zero(tf)
            for beta in ts.edges_a:
                if (a, beta) in composable_ba:
                    rhs = rhs + bank.p[beta]
            pairs.append((f"t*t[{a.id}]", bank.t_adj[a] @ bank.t[a], rhs))
        return pairs

    def shared_range_supports():
        pairs = []
        for alpha in ts.edges_a:
            for a in ts.edges_b:
                if alpha.target == a.target:
                    pairs.append(
                        (
                            f"s*s[{alpha.id}] = t*t[{a.id}]",
                            bank.s_adj[alpha] @ bank.s[alpha],
                            bank.t_adj[a] @ bank.t[a],
                        )
                    )
        return pairs

    def p1_prime():
        total = SparseOp.zero(tf)
        for op in e_ops.values():
            total = total + op
        return [("sum e", total, bank.identity)]

    def p2_p3_prime():
        pairs = []
        for alpha in ts.edges_a:
            left_sum = SparseOp.zero(tf)
            right_sum = SparseOp.zero(tf)
            for pair in omega:
                if pair.alpha == alpha:
                    e = e_ops[(pair.alpha, pair.a)]
                    left_sum = left_sum + bank.ss[alpha] @ e
                    right_sum = right_sum + e @ bank.ss[alpha]
            pairs.append((f"ss*[{alpha.id}] via e (right)", bank.ss[alpha], left_sum))
            pairs.append((f"ss*[{alpha.id}] via e (left)", bank.ss[alpha], right_sum))
        for a in ts.edges_b:
            left_sum = SparseOp.zero(tf)
            right_sum = SparseOp.zero(tf)
            for pair in omega:
                if pair.a == a:
                    e = e_ops[(pair.alpha, pair.a)]
                    left_sum = left_sum + bank.tt[a] @ e
                    right_sum = right_sum + e @ bank.tt[a]
            pairs.append((f"tt*[{a.id}] via e (right)", bank.tt[a], left_sum))
            pairs.append((f"tt*[{a.id}] via e (left)", bank.tt[a], right_sum))
        return pairs

    def p4_p5_prime():
        pairs = []
        for pair in omega:
            alpha, a = pair.alpha, pair.a
            i = omega_pos[(alpha, a)]
            lhs = bank.s_adj[alpha] @ e_ops[(alpha, a)] @ bank.s[alpha]
            rhs = SparseOp.zero(tf)
            for other in omega:
                j = omega_pos[(other.alpha, other.a)]
                if a_kappa[i][j]:
                    rhs = rhs + e_ops[(other.alpha, other.a)]
            pairs.append((f"s*[{alpha.id}] e s (row {i})", lhs, rhs))
            lhs = bank.t_adj[a] @ e_ops[(alpha, a)] @ bank.t[a]
            rhs = SparseOp.zero(tf)
            for other in omega:
                j = omega_pos[(other.alpha, other.a)]
                if b_kappa[i][j]:
                    rhs = rhs + e_ops[(other.alpha, other.a)]
            pairs.append((f"t*[{a.id}] e t (row {i})", lhs, rhs))
        return pairs

    def vertex_diag_commutation():
        pairs = []
        for v, y in bank.units.items():
            phi = bank.phi_eta_diag(y)
            for alpha in ts.edges_a:
                pairs.append(
                    (f"[ss*[{alpha.id}], E{v}]", bank.ss[alpha] @ phi, phi @ bank.ss[alpha])
                )
            for a in ts.edges_b:
                pairs.append((f"[tt*[{a.id}], E{v}]", bank.tt[a] @ phi, phi @ bank.tt[a]))
        return pairs

    def vertex_diag_sandwich():
        pairs = []
        for v, y in bank.units.items():
            phi = bank.phi_eta_diag(y)
            for alpha in ts.edges_a:
                moved = (
                    DiagElem.basis(ts.n_vertices, alpha.target)
                    if v == alpha.source
                    else None
                )
                rhs = bank.phi_eta_diag(moved) if moved else SparseOp.zero(tf)
                pairs.append((f"s*[{alpha.id}] E{v} s", bank.s_adj[alpha] @ phi @ bank.s[alpha], rhs))
            for a in ts.edges_b:
                moved = DiagElem.basis(ts.n_vertices, a.target) if v == a.source else None
                rhs = bank.phi_eta_diag(moved) if moved else SparseOp.zero(tf)
                pairs.append((f"t*[{a.id}] E{v} t", bank.t_adj[a] @ phi @ bank.t[a], rhs))
        return pairs

    return [
        ("unit_partition_interior", "sum uu* + sum vv* = 1", 1, 2, m1_interior),
        ("unit_partition_uncut", "sum ss* + sum tt* + P0 = 1 + P1", 1, 0, m1_uncut),
        ("range_proj_diag_commutation", "uu* w = w uu*, vv* w = w vv* (w, z diagonal)", 1, 2, m2_m3),
        ("same_layer_compression", "u* w u = compress(w), v* z v = compress(z)", 2, 2, m4),
        ("cross_layer_pullback", "u* z u = pullback(z), v* w v = pullback(w)", 2, 2, m5),
        ("embedding_agreement", "source embedding acts equally through both layers", 0, 2, m6),
        ("edge_partitions", "sum p = sum q = sum uu* + vv* = 1", 1, 2, p1),
        ("range_proj_support", "uu* p_u = uu*, vv* q_v = vv*", 1, 2, p2),
        ("cross_proj_commutation", "[uu*, q] = 0, [vv*, p] = 0", 1, 2, p3),
        ("initial_projections", "u*u = sum of p over following edges (and v*v dually)", 1, 2, p4),
        ("corner_selection", "u* q u and v* p v select tiles with the fixed corner", 2, 2, p5),
        ("corner_projection_commutation", "p and q commute", 0, 2, corner_commutation),
        ("initial_support_by_composability", "u*u = sum of q over composable edges", 1, 2, composability_support),
        ("shared_range_initials", "r(alpha) = r(a) forces u*u = v*v", 1, 2, shared_range_supports),
        ("corner_partition", "sum over corner pairs of e = 1", 1, 2, p1_prime),
        ("range_proj_corner_refinement", "uu* = sum_a uu* e = sum_a e uu*", 1, 2, p2_p3_prime),
        ("corner_transition", "u* e u = row of the horizontal matrix over e (vertical dual)", 2, 2, p4_p5_prime),
        ("vertex_commutation_quotient", "[uu*, y] = [vv*, y] = 0 for vertex y", 1, 2, vertex_diag_commutation),
        ("vertex_compression_quotient", "u* y u and v* y v move vertex masses along edges", 2, 2, vertex_diag_sandwich),
    ]


def verify_relations_hk(tf: TruncatedFock) -> Report:
    """Check the universal-algebra relations in the truncated representation.

    The creation families stand in for the generating partial isometries
    and the diagonal edge actions for the coefficient algebras.  Each
    relation is compared on interior levels [2, L - m] where the level-0/1
    corrections of the range partition vanish; the one genuinely uncut
    identity is also checked from level 0.
    """
    if tf.max_level < 4:
        raise TruncationTooShallow("the relation suite needs max_level >= 4")
    bank = _Bank(tf)
    checks = []
    for identity_id, formula, margin, low, builder in _relation_registry(bank):
        high = tf.max_level - margin
        check = IdentityCheck(
            identity_id=identity_id,
            formula=formula,
            margin=margin,
            levels_checked=(low, high),
            status="pass",
        )
        witness = _compare(tf, builder(), low, high)
        if witness is not None:
            check.status = "fail"
            check.witness = witness
        checks.append(check)
    return Report(title="universal relations", max_level=tf.max_level, checks=checks)


def ck_generators(tf: TruncatedFock):
    """Corner-cut generators and their Cuntz-Krieger relation report.

    Builds S = e u and T = e v for every corner pair, then verifies the
    partition of unity, both transition relations against the block
    matrices, and the corner decomposition e = SS* + TT*, all on interior
    levels [2, L-2].  Returns ({pair: S}, {pair: T}, report).
    """
    if tf.max_level < 4:
        raise TruncationTooShallow("the generator suite needs max_level >= 4")
    ts = tf.ts
    bank = _Bank(tf)
    omega = ts.omega
    a_kappa, b_kappa, _ = build_quad_matrices(ts)
    s_ops = {}
    t_ops = {}
    for pair in omega:
        e = bank.p[pair.alpha] @ bank.q[pair.a]
        s_ops[pair] = e @ bank.s[pair.alpha]
        t_ops[pair] = e @ bank.t[pair.a]

    low, high = 2, tf.max_level - 2
    checks = []

    def run(identity_id, formula, pairs):
        check = IdentityCheck(
            identity_id=identity_id,
            formula=formula,
            margin=2,
            levels_checked=(low, high),
            status="pass",
        )
        witness = _compare(tf, pairs, low, high)
        if witness is not None:
            check.status = "fail"
            check.witness = witness
        checks.append(check)

    def ss_plus_tt(pair):
        s = s_ops[pair]
        t = t_ops[pair]
        return s @ adjoint(s) + t @ adjoint(t)

    total = SparseOp.zero(tf)
    for pair in omega:
        total = total + ss_plus_tt(pair)
    run("generator_partition", "sum SS* + sum TT* = 1", [("", total, bank.identity)])

    pairs_h = []
    pairs_v = []
    for i, pair in enumerate(omega):
        s = s_ops[pair]
        rhs = SparseOp.zero(tf)
        for j, other in enumerate(omega):
            if a_kappa[i][j]:
                rhs = rhs + ss_plus_tt(other)
        pairs_h.append((f"row {i}", adjoint(s) @ s, rhs))
        t = t_ops[pair]
        rhs = SparseOp.zero(tf)
        for j, other in enumerate(omega):
            if b_kappa[i][j]:
                rhs = rhs + ss_plus_tt(other)
        pairs_v.append((f"row {i}", adjoint(t) @ t, rhs))
    run("horizontal_transition", "S*S = sum A[(row),(col)] (SS* + TT*)", pairs_h)
    run("vertical_transition", "T*T = sum B[(row),(col)] (SS* + TT*)", pairs_v)

    corner_pairs = [
        (
            f"({pair.alpha.id},{pair.a.id})",
            bank.p[pair.alpha] @ bank.q[pair.a],
            ss_plus_tt(pair),
        )
        for pair in omega
    ]
    run("corner_decomposition", "e = SS* + TT*", corner_pairs)

    report = Report(title="corner generators", max_level=tf.max_level, checks=checks)
    return s_ops, t_ops, report
