"""Transition matrices on corner pairs, Smith normal form, K-groups.

The corner pairs (top edge, left edge) of the tiles index two 0/1
transition matrices: the horizontal one allows (alpha, a) -> (delta, b)
when a tile has top alpha, left a and right b; the vertical one allows
(alpha, a) -> (beta, d) when a tile has top alpha, left a and bottom beta.
Stacking them into the 2x2 block matrix [[A, A], [B, B]] gives the
defining matrix of the associated Cuntz-Krieger algebra, whose K-groups
are presented by the integer matrix A + B - I through its Smith normal
form.  All arithmetic is arbitrary-precision integer.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass

from .errors import CrossCheckFailure
from .textile import IntMatrix, TextileSystem, build_system, check_commuting, kappa_indicators

Matrix = list[list[int]]


def identity_matrix(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    out = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        ai = a[i]
        for k in range(inner):
            x = ai[k]
            if x == 0:
                continue
            bk = b[k]
            oi = out[i]
            for j in range(cols):
                oi[j] += x * bk[j]
    return out


def mat_add(a: Matrix, b: Matrix, scale_b: int = 1) -> Matrix:
    return [
        [x + scale_b * y for x, y in zip(row_a, row_b)] for row_a, row_b in zip(a, b)
    ]


def int_det(matrix: Matrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(matrix)
    if n == 0:
        return 1
    m = [row[:] for row in matrix]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            pivot_row = next((r for r in range(k + 1, n) if m[r][k] != 0), None)
            if pivot_row is None:
                return 0
            m[k], m[pivot_row] = m[pivot_row], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[-1][-1]


@dataclass
class SNFResult:
    """U * M * V = D with U, V unimodular and D diagonal with a divisor chain."""

    d: Matrix
    u: Matrix
    v: Matrix
    invariant_factors: list[int]
    rank: int


def smith_normal_form(matrix: Matrix) -> SNFResult:
    """Diagonalize an integer matrix by unimodular row and column operations.

    Pivots are chosen with minimal nonzero absolute value to limit
    coefficient growth; Python integers keep everything exact regardless.
    """
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    d = [list(map(int, row)) for row in matrix]
    u = identity_matrix(rows)
    v = identity_matrix(cols)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, factor):
        d[dst] = [x + factor * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + factor * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, factor):
        for row in d:
            row[dst] += factor * row[src]
        for row in v:
            row[dst] += factor * row[src]

    def negate_row(i):
        d[i] = [-x for x in d[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    size = min(rows, cols)
    while t < size:
        pivot = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                val = abs(d[i][j])
                if val and (best is None or val < best):
                    best = val
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            # clear the pivot column, restarting when a remainder survives
            dirty = False
            for i in range(t + 1, rows):
                if d[i][t] == 0:
                    continue
                quotient = d[i][t] // d[t][t]
                add_row(t, i, -quotient)
                if d[i][t]:
                    swap_rows(t, i)
                    dirty = True
            if dirty:
                continue
            for j in range(t + 1, cols):
                if d[t][j] == 0:
                    continue
                quotient = d[t][j] // d[t][t]
                add_col(t, j, -quotient)
                if d[t][j]:
                    swap_cols(t, j)
                    dirty = True
                    break
            if dirty:
                continue
            # enforce that the pivot divides the rest of the submatrix
            offender = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if d[i][j] % d[t][t]:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            add_row(offender, t, 1)
        if d[t][t] < 0:
            negate_row(t)
        t += 1

    factors = [d[i][i] for i in range(size) if d[i][i] != 0]
    return SNFResult(d=d, u=u, v=v, invariant_factors=factors, rank=len(factors))


@dataclass
class KGroups:
    """Torsion and free ranks of the two K-groups."""

    k0_torsion: list[int]
    k0_free_rank: int
    k1_free_rank: int

    def describe(self) -> tuple[str, str]:
        parts = [f"Z/{f}Z" for f in self.k0_torsion]
        if self.k0_free_rank == 1:
            parts.append("Z")
        elif self.k0_free_rank > 1:
            parts.append(f"Z^{self.k0_free_rank}")
        k0 = " + ".join(parts) if parts else "0"
        if self.k1_free_rank == 0:
            k1 = "0"
        elif self.k1_free_rank == 1:
            k1 = "Z"
        else:
            k1 = f"Z^{self.k1_free_rank}"
        return k0, k1


def build_quad_matrices(ts: TextileSystem) -> tuple[Matrix, Matrix, Matrix]:
    """Horizontal and vertical 0/1 transition matrices on the corner pairs,
    plus their 2x2 block stack [[A, A], [B, B]]."""
    left_table, bottom_table = kappa_indicators(ts)
    omega = ts.omega
    n = len(omega)
    a_kappa = [[0] * n for _ in range(n)]
    b_kappa = [[0] * n for _ in range(n)]
    for i, src in enumerate(omega):
        for j, dst in enumerate(omega):
            if left_table.get((src.a, src.alpha, dst.a)):
                a_kappa[i][j] = 1
            if bottom_table.get((src.alpha, src.a, dst.alpha)):
                b_kappa[i][j] = 1
    h_kappa = [[0] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        for j in range(n):
            h_kappa[i][j] = h_kappa[i][n + j] = a_kappa[i][j]
            h_kappa[n + i][j] = h_kappa[n + i][n + j] = b_kappa[i][j]
    return a_kappa, b_kappa, h_kappa


def _groups_from_presentation(matrix: Matrix) -> KGroups:
    n = len(matrix)
    snf = smith_normal_form(matrix)
    return KGroups(
        k0_torsion=[f for f in snf.invariant_factors if f > 1],
        k0_free_rank=n - snf.rank,
        k1_free_rank=n - snf.rank,
    )


def k_theory(ts: TextileSystem) -> KGroups:
    """K-groups presented by A + B - I over the corner pairs.

    Recomputes the same groups from the 2x2 block stack minus the identity
    and raises CrossCheckFailure if the torsion lists or free ranks differ
    (they agree for every system; a mismatch means a bug).
    """
    a_kappa, b_kappa, h_kappa = build_quad_matrices(ts)
    n = len(a_kappa)
    small = mat_add(mat_add(a_kappa, b_kappa), identity_matrix(n), scale_b=-1)
    big = mat_add(h_kappa, identity_matrix(2 * n), scale_b=-1)
    from_small = _groups_from_presentation(small)
    from_big = _groups_from_presentation(big)
    same = (
        from_small.k0_torsion == from_big.k0_torsion
        and from_small.k0_free_rank == from_big.k0_free_rank
    )
    if not same:
        raise CrossCheckFailure(
            "K-group presentations disagree between A+B-I and the block stack",
            details={
                "small": from_small.__dict__,
                "big": from_big.__dict__,
            },
        )
    return from_small


def _digraph(matrix: Matrix) -> dict[int, list[int]]:
    return {
        i: [j for j, v in enumerate(row) if v] for i, row in enumerate(matrix)
    }


def _strongly_connected(adj: dict[int, list[int]]) -> bool:
    n = len(adj)
    if n == 0:
        return False

    def reachable(start, edges):
        seen = {start}
        stack = [start]
        while stack:
            node = stack.pop()
            for nxt in edges[node]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return seen

    if len(reachable(0, adj)) != n:
        return False
    reverse = {i: [] for i in adj}
    for i, outs in adj.items():
        for j in outs:
            reverse[j].append(i)
    return len(reachable(0, reverse)) == n


def _vertices_on_cycles(adj: dict[int, list[int]]) -> set[int]:
    on_cycle = set()
    for start in adj:
        seen = set()
        stack = list(adj[start])
        while stack:
            node = stack.pop()
            if node == start:
                on_cycle.add(start)
                break
            if node in seen:
                continue
            seen.add(node)
            stack.extend(adj[node])
    return on_cycle


def structure_checks(h_matrix: Matrix) -> dict:
    """Graph-level diagnostics of a 0/1 matrix.

    irreducible: the directed graph is strongly connected.  condition_I:
    every vertex reaches a cycle and no cycle runs entirely through
    vertices of out-degree one (every cycle has an exit).  has_zero_row:
    some row is identically zero.
    """
    adj = _digraph(h_matrix)
    cyclic = _vertices_on_cycles(adj)

    def reaches_cycle(start):
        seen = set()
        stack = [start]
        while stack:
            node = stack.pop()
            if node in cyclic:
                return True
            if node in seen:
                continue
            seen.add(node)
            stack.extend(adj[node])
        return False

    every_vertex_reaches = all(reaches_cycle(v) for v in adj)

    # a cycle with no exit lives entirely inside the out-degree-one vertices
    single = {v for v in adj if len(adj[v]) == 1}
    no_exit_cycle = False
    for start in single:
        node = start
        seen = set()
        while node in single and node not in seen:
            seen.add(node)
            node = adj[node][0]
        if node in seen:
            no_exit_cycle = True
            break

    return {
        "irreducible": _strongly_connected(adj),
        "condition_I": every_vertex_reaches and not no_exit_cycle,
        "has_zero_row": any(not outs for outs in adj.values()),
    }


def minor_gcd(matrix: Matrix, k: int) -> int:
    """Gcd of all k x k minors; the determinant-divisor oracle."""
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    g = 0
    for row_idx in itertools.combinations(range(rows), k):
        for col_idx in itertools.combinations(range(cols), k):
            sub = [[matrix[i][j] for j in col_idx] for i in row_idx]
            g = math.gcd(g, int_det(sub))
            if g == 1:
                return 1
    return g


def random_commuting_pair(
    rng: random.Random, size: int = 3, max_entry: int = 2, total_cap: int = 60
) -> tuple[IntMatrix, IntMatrix]:
    """A commuting pair built as two polynomials in one random matrix.

    Entries of the base matrix and the polynomial coefficients are bounded
    by ``max_entry``; samples whose product has more than ``total_cap``
    composable pairs are rejected so the corner-pair matrices stay small.
    """
    while True:
        n = rng.randint(1, size)
        base = [[rng.randint(0, max_entry) for _ in range(n)] for _ in range(n)]

        def poly_of_base():
            coeffs = [rng.randint(0, max_entry) for _ in range(3)]
            if all(c == 0 for c in coeffs):
                coeffs[rng.randrange(3)] = 1
            acc = [[coeffs[0] if i == j else 0 for j in range(n)] for i in range(n)]
            power = identity_matrix(n)
            for c in coeffs[1:]:
                power = mat_mul(power, base)
                acc = mat_add(acc, power, scale_b=c)
            return acc

        a_rows = poly_of_base()
        b_rows = poly_of_base()
        product = mat_mul(a_rows, b_rows)
        total = sum(sum(row) for row in product)
        if total == 0 or total > total_cap:
            continue
        matrix_a = IntMatrix.from_rows(a_rows)
        matrix_b = IntMatrix.from_rows(b_rows)
        check_commuting(matrix_a, matrix_b)
        return matrix_a, matrix_b


def analyze_system(ts: TextileSystem) -> dict:
    """Full invariant report: matrices, K-groups, structure and warnings."""
    from .algebra import is_essential
    from .quadmod import empty_basis_edges

    a_kappa, b_kappa, h_kappa = build_quad_matrices(ts)
    groups = k_theory(ts)
    k0, k1 = groups.describe()
    warnings = []
    for layer in ("A", "B"):
        if not is_essential(ts, layer):
            warnings.append(
                f"layer {layer} is not essential (some vertex has no incoming edge)"
            )
    empty = empty_basis_edges(ts)
    if empty:
        warnings.append(
            "edges without a tile over them: " + ", ".join(e.id for e in empty)
        )
    return {
        "n": len(ts.omega),
        "omega": [[pair.alpha.id, pair.a.id] for pair in ts.omega],
        "A_kappa": a_kappa,
        "B_kappa": b_kappa,
        "H_kappa": h_kappa,
        "K0": {"torsion": groups.k0_torsion, "free_rank": groups.k0_free_rank},
        "K1": {"free_rank": groups.k1_free_rank},
        "K0_text": k0,
        "K1_text": k1,
        "cross_check": "ok",
        "structure": structure_checks(h_kappa),
        "warnings": warnings,
    }


def presentation_cross_check_pairs(seed: int = 7, count: int = 20):
    """Deterministic commuting pairs for the presentation cross-check."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        matrix_a, matrix_b = random_commuting_pair(rng)
        out.append(build_system(matrix_a.rows, matrix_b.rows, "lex"))
    return out
