"""Determinants, adjugates and coefficient gradients of polynomial matrices.

A PolyMatrix is an n x n matrix over Z_p[y] whose entries may carry links to
substitution variables (entry = base + sum of sign * sigma(x) * y**e terms).
Every quantity here is obtained by evaluating the matrix at distinct points
y = 1, 2, ... and Lagrange-interpolating: a determinant of an n x n matrix
with entry degrees <= deg_bound has degree <= n * deg_bound, so
n * deg_bound + 1 points recover it exactly.  This is an identity, not an
approximation; the only randomness in the package lives in the variable
substitutions chosen upstream.

Gradients of determinant coefficients with respect to the linked variables
come in two interchangeable backends:

* "adjugate": d det/d entry(r, c) = adj(c, r), chained through the links and
  combined across evaluation points with the same Lagrange weights.
* "tape": the per-point determinant evaluation is recorded as a straight-line
  program and differentiated by one reverse sweep.

Points where the evaluated matrix is singular are fine for determinant
interpolation (the value is simply 0) but useless for the per-point inverse,
so gradient and adjugate work draws replacement points from further along
the 1, 2, ... sequence.  A nonzero determinant polynomial has at most
n * deg_bound roots, which bounds the scan deterministically.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from typing import Iterable, Optional, Sequence

from .field_poly import PrimeField
from .slp_autodiff import Tape, reverse_sweep


class InsufficientField(ValueError):
    """The field has fewer elements than the required evaluation points."""


class SingularEverywhere(ArithmeticError):
    """det(M) is identically zero; the adjugate path is out of contract."""


# -- matrix type --------------------------------------------------------------


@dataclass
class PolyMatrix:
    """n x n matrix of dense polynomials plus variable links.

    base[r][c] is the variable-free part of entry (r, c).  var_links maps a
    variable id to the list of (row, col, sign, exponent) placements saying
    that entry (row, col) contains sign * x * y**exponent; var_values holds
    the substituted value of each variable.  entries is the fully
    substituted polynomial matrix, derived once at construction.
    """

    field: PrimeField
    n: int
    base: list[list[list[int]]]
    deg_bound: int
    var_links: dict[int, list[tuple[int, int, int, int]]] = dataclass_field(default_factory=dict)
    var_values: dict[int, int] = dataclass_field(default_factory=dict)
    entries: list[list[list[int]]] = dataclass_field(default_factory=list)

    def __post_init__(self):
        if not self.entries:
            self.entries = self._build_entries()
        for row in self.entries:
            for q in row:
                d = self.field.degree(q)
                if d is not None and d > self.deg_bound:
                    raise ValueError("entry degree exceeds declared bound")

    def _build_entries(self) -> list[list[list[int]]]:
        fld = self.field
        out = [[list(self.base[r][c]) for c in range(self.n)] for r in range(self.n)]
        for var, links in self.var_links.items():
            val = self.var_values[var]
            for r, c, sign, exp in links:
                term = [0] * exp + [val % fld.p if sign > 0 else (-val) % fld.p]
                out[r][c] = fld.poly_add(out[r][c], term)
        return out

    def value_at(self, y0: int) -> list[list[int]]:
        """Numeric matrix M(y0)."""
        ev = self.field.poly_eval
        return [[ev(q, y0) for q in row] for row in self.entries]

    def with_identity(self, exponent: int = 0) -> "PolyMatrix":
        """New matrix with y**exponent added to every diagonal entry."""
        base = [[list(q) for q in row] for row in self.base]
        bump = [0] * exponent + [1]
        for i in range(self.n):
            base[i][i] = self.field.poly_add(base[i][i], bump)
        return PolyMatrix(
            field=self.field,
            n=self.n,
            base=base,
            deg_bound=max(self.deg_bound, exponent),
            var_links={v: list(l) for v, l in self.var_links.items()},
            var_values=dict(self.var_values),
        )

    def shifted(self, k: int) -> "PolyMatrix":
        """New matrix with every entry multiplied by y**k."""
        if k == 0:
            return self
        base = [[([0] * k + list(q)) if q else [] for q in row] for row in self.base]
        links = {v: [(r, c, s, e + k) for r, c, s, e in l] for v, l in self.var_links.items()}
        return PolyMatrix(
            field=self.field,
            n=self.n,
            base=base,
            deg_bound=self.deg_bound + k,
            var_links=links,
            var_values=dict(self.var_values),
        )

    def entry_links(self) -> dict[tuple[int, int], list[tuple[int, int, int]]]:
        """Reverse index: (row, col) -> [(var, sign, exponent)]."""
        out: dict[tuple[int, int], list[tuple[int, int, int]]] = {}
        for var, links in self.var_links.items():
            for r, c, sign, exp in links:
                out.setdefault((r, c), []).append((var, sign, exp))
        return out


@dataclass
class DegreeReport:
    """Exact determinant polynomial and its lowest nonzero degree."""

    deg_star: Optional[int]
    coeffs: list[int]


@dataclass
class Verdict:
    """Outcome of a randomized zero test.

    A nonzero value is conclusive.  A zero value is reported together with
    the probability bound d/p that a nonzero polynomial of degree d slipped
    through the random substitution.
    """

    nonzero: bool
    false_zero_bound: float


def symbolic_nonzero(f_value: int, degree_bound: int, fld: PrimeField) -> Verdict:
    if f_value % fld.p != 0:
        return Verdict(nonzero=True, false_zero_bound=0.0)
    return Verdict(nonzero=False, false_zero_bound=min(1.0, degree_bound / fld.p))


# -- numeric kernels ----------------------------------------------------------


def det_mod(matrix: list[list[int]], p: int) -> int:
    """Determinant of a numeric matrix mod p; destroys its argument."""
    n = len(matrix)
    sign = 1
    det = 1
    for col in range(n):
        pivot_row = None
        for r in range(col, n):
            if matrix[r][col] % p:
                pivot_row = r
                break
        if pivot_row is None:
            return 0
        if pivot_row != col:
            matrix[col], matrix[pivot_row] = matrix[pivot_row], matrix[col]
            sign = -sign
        prow = matrix[col]
        pivot = prow[col] % p
        det = det * pivot % p
        inv_pivot = pow(pivot, p - 2, p)
        for r in range(col + 1, n):
            row = matrix[r]
            f = row[col] * inv_pivot % p
            if f == 0:
                continue
            for c in range(col + 1, n):
                row[c] = (row[c] - f * prow[c]) % p
    return det % p if sign > 0 else (-det) % p


def inverse_mod(matrix: list[list[int]], p: int) -> Optional[list[list[int]]]:
    """Inverse of a numeric matrix mod p, or None if singular; destructive."""
    n = len(matrix)
    aug = [matrix[r] + [1 if c == r else 0 for c in range(n)] for r in range(n)]
    for col in range(n):
        pivot_row = None
        for r in range(col, n):
            if aug[r][col] % p:
                pivot_row = r
                break
        if pivot_row is None:
            return None
        aug[col], aug[pivot_row] = aug[pivot_row], aug[col]
        prow = aug[col]
        inv_pivot = pow(prow[col], p - 2, p)
        for c in range(col, 2 * n):
            prow[c] = prow[c] * inv_pivot % p
        for r in range(n):
            if r == col:
                continue
            row = aug[r]
            f = row[col]
            if f == 0:
                continue
            for c in range(col, 2 * n):
                row[c] = (row[c] - f * prow[c]) % p
    return [row[n:] for row in aug]


def det_tape(fld: PrimeField, values: Sequence[Sequence[int]]) -> tuple[Tape, int, list[list[int]]]:
    """Record Gaussian elimination of a numeric matrix on a fresh tape.

    Every matrix entry becomes an input node.  Returns the tape, the index
    of the determinant node, and the matrix of input node indices.
    """
    tape = Tape(fld)
    nodes = [[tape.input(v) for v in row] for row in values]
    inputs = [list(row) for row in nodes]
    det_node = record_det(tape, nodes)
    return tape, det_node, inputs


def record_det(tape: Tape, nodes: list[list[int]]) -> int:
    """Elimination over existing tape nodes; returns the determinant node.

    Pivots are chosen by first nonzero value (a branch of the traced
    execution).  Nothing is skipped besides pivot search, so derivative
    flow through incidentally-zero intermediates is preserved.
    """
    n = len(nodes)
    sign = 1
    pivot_nodes: list[int] = []
    for col in range(n):
        pivot_row = None
        for r in range(col, n):
            if tape.values[nodes[r][col]] != 0:
                pivot_row = r
                break
        if pivot_row is None:
            return tape.const(0)
        if pivot_row != col:
            nodes[col], nodes[pivot_row] = nodes[pivot_row], nodes[col]
            sign = -sign
        pivot = nodes[col][col]
        pivot_nodes.append(pivot)
        for r in range(col + 1, n):
            f = tape.div(nodes[r][col], pivot)
            for c in range(col + 1, n):
                nodes[r][c] = tape.sub(nodes[r][c], tape.mul(f, nodes[col][c]))
    det = pivot_nodes[0]
    for node in pivot_nodes[1:]:
        det = tape.mul(det, node)
    if sign < 0:
        det = tape.neg(det)
    return det


# -- shared per-matrix workspace ----------------------------------------------


class MatrixAnalysis:
    """Caches evaluation points, determinants, inverses and Lagrange data
    for one PolyMatrix so that several queries share the heavy work."""

    def __init__(self, M: PolyMatrix):
        self.M = M
        self.fld = M.field
        self.D = M.n * M.deg_bound + 1
        if self.D > self.fld.p:
            raise InsufficientField(
                f"need {self.D} evaluation points but field has {self.fld.p} elements")
        self._det_cache: dict[int, int] = {}
        self._good_points: Optional[list[int]] = None
        self._adjugates: Optional[list[list[list[int]]]] = None
        self._basis: Optional[list[list[int]]] = None
        self._prefix_basis: Optional[list[list[int]]] = None
        self._pow_tables: Optional[list[list[int]]] = None
        self._det_report: Optional[DegreeReport] = None

    def det_at(self, y: int) -> int:
        got = self._det_cache.get(y)
        if got is None:
            got = det_mod(self.M.value_at(y), self.fld.p)
            self._det_cache[y] = got
        return got

    def det_report(self) -> DegreeReport:
        if self._det_report is None:
            fld = self.fld
            xs = list(range(1, self.D + 1))
            ys = [self.det_at(x) for x in xs]
            coeffs = fld.interpolate(xs, ys)
            self._det_report = DegreeReport(deg_star=fld.min_degree(coeffs), coeffs=coeffs)
        return self._det_report

    def good_points(self) -> list[int]:
        """D points with nonzero determinant value, or SingularEverywhere."""
        if self._good_points is None:
            limit = 2 * self.D + self.M.n * self.M.deg_bound
            pts = []
            y = 1
            while len(pts) < self.D:
                if y > limit or y >= self.fld.p:
                    raise SingularEverywhere(
                        "determinant is identically zero under this substitution")
                if self.det_at(y) != 0:
                    pts.append(y)
                y += 1
            self._good_points = pts
        return self._good_points

    def adjugates(self) -> list[list[list[int]]]:
        """adj(M(y)) = det * inverse at every good point."""
        if self._adjugates is None:
            p = self.fld.p
            out = []
            for y in self.good_points():
                inv = inverse_mod(self.M.value_at(y), p)
                if inv is None:  # cannot happen on good points
                    raise SingularEverywhere("inverse failed at a nonzero-det point")
                d = self.det_at(y)
                out.append([[v * d % p for v in row] for row in inv])
            self._adjugates = out
        return self._adjugates

    def basis(self) -> list[list[int]]:
        if self._basis is None:
            self._basis = self.fld.lagrange_basis(self.good_points())
        return self._basis

    def weights(self, d: int, prefix: bool) -> list[int]:
        """Per-point weights turning point values into the coefficient of
        y**d (or the sum of coefficients up to d when prefix is set)."""
        if not 0 <= d < self.D:
            raise ValueError(f"coefficient degree {d} outside [0, {self.D - 1}]")
        if not prefix:
            return [bk[d] for bk in self.basis()]
        if self._prefix_basis is None:
            p = self.fld.p
            pref = []
            for bk in self.basis():
                acc = 0
                row = []
                for c in bk:
                    acc = (acc + c) % p
                    row.append(acc)
                pref.append(row)
            self._prefix_basis = pref
        return [pk[d] for pk in self._prefix_basis]

    def pow_tables(self) -> list[list[int]]:
        if self._pow_tables is None:
            p = self.fld.p
            tables = []
            for y in self.good_points():
                row = [1] * (self.M.deg_bound + 1)
                for e in range(1, self.M.deg_bound + 1):
                    row[e] = row[e - 1] * y % p
                tables.append(row)
            self._pow_tables = tables
        return self._pow_tables

    # -- adjugate degrees ---------------------------------------------------

    def adjugate_degrees(self, pairs: Optional[Iterable[tuple[int, int]]] = None
                         ) -> dict[tuple[int, int], Optional[int]]:
        """deg* of the requested adjugate entries (None when the entry is 0).

        Entry polynomials have degree <= (n-1) * deg_bound < D, so they are
        determined exactly by the good points; the per-degree scan stops at
        the first nonzero coefficient.
        """
        n = self.M.n
        if n == 1:
            wanted = list(pairs) if pairs is not None else [(0, 0)]
            return {pair: 0 for pair in wanted}  # adj of a 1x1 matrix is [[1]]
        adjs = self.adjugates()
        basis = self.basis()
        p = self.fld.p
        wanted = list(pairs) if pairs is not None else [
            (i, j) for i in range(n) for j in range(n)]
        out: dict[tuple[int, int], Optional[int]] = {}
        max_deg = (n - 1) * self.M.deg_bound
        cols = list(range(len(adjs)))
        for (i, j) in wanted:
            vals = [adjs[k][i][j] for k in cols]
            if not any(vals):
                out[(i, j)] = None
                continue
            deg = None
            for d in range(max_deg + 1):
                acc = 0
                for k in cols:
                    v = vals[k]
                    if v:
                        acc += basis[k][d] * v
                if acc % p:
                    deg = d
                    break
            out[(i, j)] = deg
        return out

    # -- coefficient gradients ----------------------------------------------

    def coeff_gradient(self, d: int, prefix: bool = False, backend: str = "adjugate",
                       variables: Optional[Iterable[int]] = None) -> dict[int, int]:
        """d/dx of the determinant coefficient of y**d, per linked variable.

        With prefix=True the target is the sum of all coefficients up to d,
        i.e. the "does any term of degree <= d survive" functional.
        """
        M = self.M
        if variables is None:
            variables = list(M.var_links)
        else:
            variables = list(variables)
        if backend == "adjugate":
            per_point = self._per_point_grads_adjugate(variables)
        elif backend == "tape":
            per_point = self._per_point_grads_tape(variables)
        else:
            raise ValueError(f"unknown backend {backend!r}")
        w = self.weights(d, prefix)
        p = self.fld.p
        out = {}
        for var in variables:
            g = per_point[var]
            out[var] = sum(wk * gk for wk, gk in zip(w, g) if gk) % p
        return out

    def _per_point_grads_adjugate(self, variables: list[int]) -> dict[int, list[int]]:
        adjs = self.adjugates()
        pows = self.pow_tables()
        p = self.fld.p
        out: dict[int, list[int]] = {}
        for var in variables:
            links = self.M.var_links[var]
            vals = []
            for k in range(len(adjs)):
                adj = adjs[k]
                pw = pows[k]
                acc = 0
                for r, c, sign, exp in links:
                    t = pw[exp] * adj[c][r]
                    acc = acc + t if sign > 0 else acc - t
                vals.append(acc % p)
            out[var] = vals
        return out

    def _per_point_grads_tape(self, variables: list[int]) -> dict[int, list[int]]:
        M = self.M
        fld = self.fld
        p = fld.p
        entry_links = M.entry_links()
        ordered_vars = sorted(M.var_links)
        out: dict[int, list[int]] = {var: [] for var in variables}
        for y in self.good_points():
            tape = Tape(fld)
            var_nodes = {var: tape.input(M.var_values[var]) for var in ordered_vars}
            nodes = []
            for r in range(M.n):
                row = []
                for c in range(M.n):
                    node = None
                    base_val = fld.poly_eval(M.base[r][c], y)
                    if base_val:
                        node = tape.const(base_val)
                    for var, sign, exp in entry_links.get((r, c), ()):
                        coef = pow(y, exp, p) if sign > 0 else (-pow(y, exp, p)) % p
                        term = tape.mul(var_nodes[var], tape.const(coef))
                        node = term if node is None else tape.add(node, term)
                    row.append(node if node is not None else tape.const(0))
                nodes.append(row)
            grad = reverse_sweep(tape, record_det(tape, nodes))
            for var in variables:
                out[var].append(grad.partials[var_nodes[var]])
        return out


# -- module-level operation surface --------------------------------------------


def det_poly(M: PolyMatrix) -> DegreeReport:
    """Exact determinant polynomial of M over its field."""
    return MatrixAnalysis(M).det_report()


def adjugate_degree_matrix(M: PolyMatrix) -> list[list[Optional[int]]]:
    """Matrix of deg* over the adjugate entries; None marks a zero entry."""
    degs = MatrixAnalysis(M).adjugate_degrees()
    return [[degs[(i, j)] for j in range(M.n)] for i in range(M.n)]


def coeff_gradient(M: PolyMatrix, d: int, prefix: bool = False,
                   backend: str = "adjugate",
                   variables: Optional[Iterable[int]] = None) -> dict[int, int]:
    return MatrixAnalysis(M).coeff_gradient(d, prefix=prefix, backend=backend,
                                            variables=variables)
