"""Exact chain/cochain algebra over Z and Z/2.

Boundary matrices, Smith normal form with unimodular transforms,
sparse integer and GF(2) system solvers that always return either a
witness (re-verified by multiplication) or a replayable infeasibility
certificate, and (co)homology group descriptors.

All integer arithmetic is arbitrary precision.  The GF(2) path stores
rows as Python int bitmasks (XOR row operations); the integer path is a
sparse Markowitz-pivot elimination preferring unit pivots.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .complexes import Complex, Simplex
from .errors import ParameterError, VerificationError

RING_Z = "Z"
RING_Z2 = "Z2"
RINGS = (RING_Z, RING_Z2)


def check_ring(ring: str) -> str:
    if ring not in RINGS:
        raise ParameterError(f"ring must be one of {RINGS}, got {ring!r}")
    return ring


# ---------------------------------------------------------------------------
# sparse integer matrices
# ---------------------------------------------------------------------------

class SparseIntMatrix:
    """Sparse integer matrix; no zero entries are ever stored."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int,
                 entries: Mapping[tuple[int, int], int] | None = None):
        self.rows = rows
        self.cols = cols
        self.entries: dict[tuple[int, int], int] = {}
        if entries:
            for (r, c), v in entries.items():
                self.set(r, c, v)

    def set(self, r: int, c: int, v: int) -> None:
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise ParameterError(f"index ({r},{c}) out of range")
        if v:
            self.entries[(r, c)] = v
        else:
            self.entries.pop((r, c), None)

    def get(self, r: int, c: int) -> int:
        return self.entries.get((r, c), 0)

    def add_at(self, r: int, c: int, v: int) -> None:
        self.set(r, c, self.get(r, c) + v)

    def nnz(self) -> int:
        return len(self.entries)

    def transpose(self) -> "SparseIntMatrix":
        return SparseIntMatrix(self.cols, self.rows,
                               {(c, r): v for (r, c), v in self.entries.items()})

    def mod2(self) -> "SparseIntMatrix":
        return SparseIntMatrix(self.rows, self.cols,
                               {k: v % 2 for k, v in self.entries.items() if v % 2})

    def matmul(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        if self.cols != other.rows:
            raise ParameterError("shape mismatch in matmul")
        by_row: dict[int, list[tuple[int, int]]] = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, []).append((c, v))
        out: dict[tuple[int, int], int] = {}
        for (r, k), v in self.entries.items():
            for c, w in by_row.get(k, ()):
                key = (r, c)
                out[key] = out.get(key, 0) + v * w
        return SparseIntMatrix(self.rows, other.cols,
                               {k: v for k, v in out.items() if v})

    def mat_vec(self, vec: Mapping[int, int]) -> dict[int, int]:
        out: dict[int, int] = {}
        for (r, c), v in self.entries.items():
            w = vec.get(c)
            if w:
                out[r] = out.get(r, 0) + v * w
        return {r: v for r, v in out.items() if v}

    def vec_mat(self, vec: Mapping[int, "int | Fraction"]) -> dict[int, "int | Fraction"]:
        out: dict[int, int | Fraction] = {}
        for (r, c), v in self.entries.items():
            w = vec.get(r)
            if w:
                out[c] = out.get(c, 0) + w * v
        return {c: v for c, v in out.items() if v}

    def to_dense(self) -> list[list[int]]:
        dense = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            dense[r][c] = v
        return dense

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[int]]) -> "SparseIntMatrix":
        rows = len(dense)
        cols = len(dense[0]) if rows else 0
        out = cls(rows, cols)
        for r, row in enumerate(dense):
            for c, v in enumerate(row):
                out.set(r, c, v)
        return out

    def copy(self) -> "SparseIntMatrix":
        return SparseIntMatrix(self.rows, self.cols, dict(self.entries))

    def __eq__(self, other) -> bool:
        return (isinstance(other, SparseIntMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __repr__(self) -> str:
        return f"SparseIntMatrix({self.rows}x{self.cols}, nnz={self.nnz()})"


def identity_matrix(n: int) -> SparseIntMatrix:
    return SparseIntMatrix(n, n, {(i, i): 1 for i in range(n)})


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

@dataclass
class SNFResult:
    """U @ m @ V == diag(diagonal), with U, V unimodular."""

    diagonal: list[int]
    row_transform: SparseIntMatrix
    col_transform: SparseIntMatrix

    def reconstructs(self, m: SparseIntMatrix) -> bool:
        d = self.row_transform.matmul(m).matmul(self.col_transform)
        expect = SparseIntMatrix(m.rows, m.cols,
                                 {(i, i): v for i, v in enumerate(self.diagonal) if v})
        return d == expect


class _Elimination:
    """Shared sparse elimination engine for SNF and integer solving.

    Maintains the working matrix as row dicts plus a column index, an
    optional U (accumulated row transform), an optional V (accumulated
    column transform), an optional right-hand side that follows the row
    operations, and a log of column operations for solution recovery.
    """

    def __init__(self, matrix: SparseIntMatrix, rhs: Mapping[int, int] | None = None,
                 track_u: bool = True, track_v: bool = False):
        self.nrows, self.ncols = matrix.rows, matrix.cols
        self.row: dict[int, dict[int, int]] = {}
        self.colindex: dict[int, set[int]] = {}
        for (r, c), v in matrix.entries.items():
            self.row.setdefault(r, {})[c] = v
            self.colindex.setdefault(c, set()).add(r)
        self.rhs = dict(rhs) if rhs is not None else None
        self.urow: dict[int, dict[int, int]] | None = (
            {r: {r: 1} for r in range(self.nrows)} if track_u else None)
        self.vcol: dict[int, dict[int, int]] | None = (
            {c: {c: 1} for c in range(self.ncols)} if track_v else None)
        self.col_ops: list[tuple] = []
        self.pivots: list[tuple[int, int, int]] = []  # (row, col, value)
        self.retired_rows: set[int] = set()
        self.retired_cols: set[int] = set()

    # -- primitive operations ------------------------------------------

    def _row_axpy(self, dst: int, src: int, q: int) -> None:
        """row_dst -= q * row_src (matrix, rhs, U)."""
        if q == 0:
            return
        drow = self.row.setdefault(dst, {})
        for c, v in self.row.get(src, {}).items():
            nv = drow.get(c, 0) - q * v
            if nv:
                drow[c] = nv
                self.colindex.setdefault(c, set()).add(dst)
            else:
                drow.pop(c, None)
                self.colindex[c].discard(dst)
        if not drow:
            self.row.pop(dst, None)
        if self.rhs is not None:
            nv = self.rhs.get(dst, 0) - q * self.rhs.get(src, 0)
            if nv:
                self.rhs[dst] = nv
            else:
                self.rhs.pop(dst, None)
        if self.urow is not None:
            udst = self.urow[dst]
            for k, v in self.urow[src].items():
                nv = udst.get(k, 0) - q * v
                if nv:
                    udst[k] = nv
                else:
                    udst.pop(k, None)

    def _row_negate(self, r: int) -> None:
        for c, v in self.row.get(r, {}).items():
            self.row[r][c] = -v
        if self.rhs is not None and r in self.rhs:
            self.rhs[r] = -self.rhs[r]
        if self.urow is not None:
            self.urow[r] = {k: -v for k, v in self.urow[r].items()}

    def _col_axpy(self, dst: int, src: int, q: int) -> None:
        """col_dst -= q * col_src (matrix, V, op log)."""
        if q == 0:
            return
        for r in list(self.colindex.get(src, ())):
            rrow = self.row[r]
            nv = rrow.get(dst, 0) - q * rrow[src]
            if nv:
                rrow[dst] = nv
                self.colindex.setdefault(dst, set()).add(r)
            else:
                rrow.pop(dst, None)
                self.colindex.get(dst, set()).discard(r)
        if self.vcol is not None:
            vdst = self.vcol[dst]
            for k, v in self.vcol[src].items():
                nv = vdst.get(k, 0) - q * v
                if nv:
                    vdst[k] = nv
                else:
                    vdst.pop(k, None)
        self.col_ops.append(("axpy", dst, src, q))

    def _col_negate(self, c: int) -> None:
        for r in self.colindex.get(c, ()):
            self.row[r][c] = -self.row[r][c]
        if self.vcol is not None:
            self.vcol[c] = {k: -v for k, v in self.vcol[c].items()}
        self.col_ops.append(("neg", c))

    # -- pivot selection -------------------------------------------------

    def _choose_pivot(self):
        """Greedy minimal-pivot: smallest |value|, then Markowitz fill."""
        best = None
        for r, entries in self.row.items():
            if r in self.retired_rows:
                continue
            rlen = len(entries)
            for c, v in entries.items():
                if c in self.retired_cols:
                    continue
                a = abs(v)
                clen = len(self.colindex[c])
                key = (a, (rlen - 1) * (clen - 1), r, c)
                if best is None or key < best[0]:
                    best = (key, r, c)
                    if a == 1 and key[1] == 0:
                        return (r, c)
        return (best[1], best[2]) if best else None

    # -- main loop --------------------------------------------------------

    def run(self) -> None:
        while True:
            pick = self._choose_pivot()
            if pick is None:
                break
            r, c = pick
            if self.row[r][c] < 0:
                self._row_negate(r)
            while True:
                # clean the pivot column with row operations
                col_clean = False
                while not col_clean:
                    col_clean = True
                    v = self.row[r][c]
                    for r2 in sorted(self.colindex[c]):
                        if r2 == r or r2 in self.retired_rows:
                            continue
                        v2 = self.row.get(r2, {}).get(c, 0)
                        if not v2:
                            continue
                        q = v2 // v
                        self._row_axpy(r2, r, q)
                        rem = self.row.get(r2, {}).get(c, 0)
                        if rem:
                            r = r2  # 0 < rem < v: pivot shrinks
                            col_clean = False
                            break
                # clean the pivot row with column operations
                v = self.row[r][c]
                moved = False
                for c2 in sorted(self.row[r]):
                    if c2 == c or c2 in self.retired_cols:
                        continue
                    q = self.row[r][c2] // v
                    self._col_axpy(c2, c, q)
                    rem = self.row[r].get(c2, 0)
                    if rem:
                        c = c2  # pivot moves column, value shrinks
                        moved = True
                        break
                live = [c2 for c2 in self.row[r] if c2 not in self.retired_cols]
                if not moved and live == [c]:
                    break
            self.pivots.append((r, c, self.row[r][c]))
            self.retired_rows.add(r)
            self.retired_cols.add(c)

    # -- recovery ----------------------------------------------------------

    def apply_col_ops_to_solution(self, y: dict[int, int]) -> dict[int, int]:
        """Recover x with M_original x = rhs from y with M_final y = rhs."""
        x = dict(y)
        for op in reversed(self.col_ops):
            if op[0] == "axpy":
                _, dst, src, q = op
                if x.get(dst):
                    x[src] = x.get(src, 0) - q * x[dst]
                    if not x[src]:
                        x.pop(src)
            else:
                _, c = op
                if x.get(c):
                    x[c] = -x[c]
        return x


def smith_normal_form(m: SparseIntMatrix) -> SNFResult:
    """SNF with unimodular transforms and the divisibility chain."""
    eng = _Elimination(m.copy(), track_u=True, track_v=True)
    eng.run()

    diag = [abs(v) for _, _, v in eng.pivots]
    # normalize pivot signs into U
    for r, c, v in eng.pivots:
        if v < 0:
            eng._row_negate(r)

    # enforce d1 | d2 | ... by pairwise gcd/lcm fixes
    pivot_rows = [r for r, _, _ in eng.pivots]
    pivot_cols = [c for _, c, _ in eng.pivots]

    def pair_fix(i: int, j: int) -> None:
        a, b = diag[i], diag[j]
        if b % a == 0:
            return
        g = math.gcd(a, b)
        lcm = a * b // g
        s, t = _bezout(a, b)
        ri, rj = pivot_rows[i], pivot_rows[j]
        ci, cj = pivot_cols[i], pivot_cols[j]
        # col_i += col_j; then rows (ri,rj) <- L (ri,rj); then col_j -= (t*b/g) col_i
        eng._col_axpy(ci, cj, -1)
        _rows_mix(eng, ri, rj, s, t, -(b // g), a // g)
        eng._col_axpy(cj, ci, t * b // g)
        diag[i], diag[j] = g, lcm

    changed = True
    while changed:
        changed = False
        for i in range(len(diag)):
            for j in range(i + 1, len(diag)):
                if diag[i] and diag[j] % diag[i] != 0:
                    pair_fix(i, j)
                    changed = True

    # assemble permuted transforms so pivots land on the diagonal
    rank = len(eng.pivots)
    u = SparseIntMatrix(m.rows, m.rows)
    row_order = pivot_rows + [r for r in range(m.rows) if r not in set(pivot_rows)]
    for new_r, old_r in enumerate(row_order):
        for k, v in (eng.urow or {}).get(old_r, {}).items():
            u.set(new_r, k, v)
    v_m = SparseIntMatrix(m.cols, m.cols)
    col_order = pivot_cols + [c for c in range(m.cols) if c not in set(pivot_cols)]
    for new_c, old_c in enumerate(col_order):
        for k, w in (eng.vcol or {}).get(old_c, {}).items():
            v_m.set(k, new_c, w)
    res = SNFResult(diag[:rank], u, v_m)
    if not res.reconstructs(m):
        raise VerificationError("SNF transforms failed to reconstruct the input")
    return res


def _bezout(a: int, b: int) -> tuple[int, int]:
    """s, t with s*a + t*b == gcd(a, b)."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_s, old_t


def _rows_mix(eng: _Elimination, ri: int, rj: int, a: int, b: int, c: int, d: int) -> None:
    """(row_ri, row_rj) <- (a*row_ri + b*row_rj, c*row_ri + d*row_rj), det +-1."""
    def grab(r):
        return dict(eng.row.get(r, {})), (eng.rhs or {}).get(r, 0), dict((eng.urow or {}).get(r, {}))

    rowi, rhsi, ui = grab(ri)
    rowj, rhsj, uj = grab(rj)

    def put(r, combo_row, combo_rhs, combo_u):
        for col in set(eng.row.get(r, {})):
            eng.colindex[col].discard(r)
        eng.row.pop(r, None)
        newrow = {}
        for col in set(combo_row[0]) | set(combo_row[2]):
            val = combo_row[1] * combo_row[0].get(col, 0) + combo_row[3] * combo_row[2].get(col, 0)
            if val:
                newrow[col] = val
                eng.colindex.setdefault(col, set()).add(r)
        if newrow:
            eng.row[r] = newrow
        if eng.rhs is not None:
            val = combo_rhs[1] * combo_rhs[0] + combo_rhs[3] * combo_rhs[2]
            if val:
                eng.rhs[r] = val
            else:
                eng.rhs.pop(r, None)
        if eng.urow is not None:
            newu = {}
            for k in set(combo_u[0]) | set(combo_u[2]):
                val = combo_u[1] * combo_u[0].get(k, 0) + combo_u[3] * combo_u[2].get(k, 0)
                if val:
                    newu[k] = val
            eng.urow[r] = newu

    put(ri, (rowi, a, rowj, b), (rhsi, a, rhsj, b), (ui, a, uj, b))
    put(rj, (rowi, c, rowj, d), (rhsi, c, rhsj, d), (ui, c, uj, d))


# ---------------------------------------------------------------------------
# linear system solvers with certificates
# ---------------------------------------------------------------------------

@dataclass
class SolveResult:
    """Outcome of solving M x = rhs over Z or Z/2.

    Exactly one of witness / functional is set.  The witness satisfies
    M x = rhs (re-verified by exact multiplication before return).  The
    functional y certifies infeasibility: over Z, y.M is integral while
    y.rhs is not an integer; over Z/2, y.M = 0 while y.rhs = 1.
    """

    solvable: bool
    ring: str
    witness: dict[int, int] | None = None
    functional: dict[int, Fraction] | None = None


def solve_integer_system(matrix: SparseIntMatrix, rhs: Mapping[int, int]) -> SolveResult:
    """Decide M x = rhs over the integers with witness or certificate."""
    eng = _Elimination(matrix.copy(), rhs=rhs, track_u=True, track_v=False)
    eng.run()
    final_rhs = eng.rhs or {}
    # zero rows must have zero rhs; scale by 2*rhs so the pairing is 1/2,
    # putting rank failures in the same certificate shape as divisibility
    # failures (y.M integral, y.rhs not an integer)
    for r in range(matrix.rows):
        if r not in eng.retired_rows and final_rhs.get(r, 0) != 0:
            denom = 2 * final_rhs[r]
            func = {k: Fraction(v, denom) for k, v in eng.urow[r].items()}
            return SolveResult(False, RING_Z, functional=func)
    y: dict[int, int] = {}
    for r, c, v in eng.pivots:
        num = final_rhs.get(r, 0)
        if num % v != 0:
            func = {k: Fraction(w, v) for k, w in eng.urow[r].items()}
            return SolveResult(False, RING_Z, functional=func)
        if num:
            y[c] = num // v
    x = eng.apply_col_ops_to_solution(y)
    if matrix.mat_vec(x) != {r: v for r, v in rhs.items() if v}:
        raise VerificationError("integer solver produced a bad witness")
    return SolveResult(True, RING_Z, witness=x)


def solve_gf2_system(matrix: SparseIntMatrix, rhs: Mapping[int, int]) -> SolveResult:
    """Decide M x = rhs over GF(2); rows are int bitmasks over columns."""
    nrows, ncols = matrix.rows, matrix.cols
    masks = [0] * nrows
    for (r, c), v in matrix.entries.items():
        if v % 2:
            masks[r] ^= 1 << c
    rbits = [0] * nrows
    for r, v in rhs.items():
        if v % 2:
            rbits[r] = 1

    pivots: dict[int, int] = {}      # column -> index in reduced
    reduced: list[tuple[int, int, int]] = []  # (mask, rhs bit, history mask)
    for i in range(nrows):
        m, b, h = masks[i], rbits[i], 1 << i
        while m:
            c = (m & -m).bit_length() - 1
            if c in pivots:
                pm, pb, ph = reduced[pivots[c]]
                m ^= pm
                b ^= pb
                h ^= ph
            else:
                pivots[c] = len(reduced)
                reduced.append((m, b, h))
                break
        else:
            if b:
                func = {k: Fraction(1) for k in range(nrows) if (h >> k) & 1}
                return SolveResult(False, RING_Z2, functional=func)

    # back-substitute a particular solution over the pivot columns
    x_mask = 0
    for c in sorted(pivots, reverse=True):
        m, b, _ = reduced[pivots[c]]
        val = b ^ ((m & x_mask).bit_count() & 1)
        if val:
            x_mask |= 1 << c
    witness = {c: 1 for c in range(ncols) if (x_mask >> c) & 1}
    check = {r: v % 2 for r, v in matrix.mat_vec(witness).items() if v % 2}
    want = {r: 1 for r, v in rhs.items() if v % 2}
    if check != want:
        raise VerificationError("GF(2) solver produced a bad witness")
    return SolveResult(True, RING_Z2, witness=witness)


def solve_system(matrix: SparseIntMatrix, rhs: Mapping[int, int], ring: str) -> SolveResult:
    check_ring(ring)
    if ring == RING_Z:
        return solve_integer_system(matrix, rhs)
    return solve_gf2_system(matrix, rhs)


def verify_functional(matrix: SparseIntMatrix, rhs: Mapping[int, int],
                      functional: Mapping[int, Fraction], ring: str) -> bool:
    """Replay an infeasibility certificate.

    Over Z: y.M integral and y.rhs not an integer.  Over Z/2: y has 0/1
    entries, y.M even in every column and y.rhs odd.
    """
    check_ring(ring)
    prod = matrix.vec_mat(functional)
    pairing = sum(functional.get(r, 0) * v for r, v in rhs.items())
    if ring == RING_Z:
        if any(Fraction(v).denominator != 1 for v in prod.values()):
            return False
        return Fraction(pairing).denominator != 1
    if any(Fraction(v).denominator != 1 or int(v) % 2 == 0 for v in functional.values()):
        return False
    if any(int(v) % 2 for v in prod.values()):
        return False
    return int(pairing) % 2 == 1


# ---------------------------------------------------------------------------
# cochains
# ---------------------------------------------------------------------------

@dataclass
class Cochain:
    """Finitely supported cell -> coefficient map over Z or Z/2."""

    ring: str
    degree: int
    support: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        check_ring(self.ring)
        cleaned = {}
        for cell, v in self.support.items():
            v = v % 2 if self.ring == RING_Z2 else v
            if v:
                cleaned[cell] = v
        self.support = cleaned

    def scale(self, k: int) -> "Cochain":
        return Cochain(self.ring, self.degree,
                       {cell: k * v for cell, v in self.support.items()})

    def __eq__(self, other) -> bool:
        return (isinstance(other, Cochain) and self.ring == other.ring
                and self.degree == other.degree and self.support == other.support)

    def to_json_obj(self) -> dict:
        return {"ring": self.ring, "degree": self.degree,
                "support": {cell: v for cell, v in sorted(self.support.items())}}

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "Cochain":
        return cls(str(obj["ring"]), int(obj["degree"]),
                   {str(k): int(v) for k, v in obj["support"].items()})

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, separators=(",", ":"))


@dataclass(frozen=True)
class GroupDescriptor:
    """Finitely generated abelian group: Z^free + sum Z/t_i, t_i | t_{i+1}."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if any(t < 2 for t in self.torsion):
            raise ParameterError("torsion coefficients must be >= 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a != 0:
                raise ParameterError("torsion chain must be divisibility-sorted")

    def __str__(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# boundary matrices and homology
# ---------------------------------------------------------------------------

def simplex_cell_id(s: Simplex) -> str:
    return ",".join(s)


def parse_simplex_cell_id(cid: str) -> Simplex:
    return tuple(cid.split(","))


def boundary_matrix(x, dim: int, ring: str = RING_Z) -> SparseIntMatrix:
    """Matrix of the boundary operator in degree dim, canonical cell order.

    Accepts a Complex or any object exposing its own
    ``boundary_matrix(dim, ring)`` (the deleted-product cell complexes).
    """
    check_ring(ring)
    if not isinstance(x, Complex):
        return x.boundary_matrix(dim, ring=ring)
    if not 0 <= dim <= x.dim:
        raise ParameterError(f"dim {dim} out of range for a {x.dim}-complex")
    rows = x.simplices_of_dim(dim - 1)
    cols = x.simplices_of_dim(dim)
    row_index = {s: i for i, s in enumerate(rows)}
    m = SparseIntMatrix(len(rows), len(cols))
    for j, s in enumerate(cols):
        for i in range(len(s)):
            face = s[:i] + s[i + 1:]
            if face:
                sign = (-1) ** i
                if ring == RING_Z2:
                    sign = 1
                m.add_at(row_index[face], j, sign)
    return m


def _rank(matrix: SparseIntMatrix, ring: str) -> int:
    if ring == RING_Z2:
        rows = [0] * matrix.rows
        for (r, c), v in matrix.entries.items():
            if v % 2:
                rows[r] ^= 1 << c
        pivots: dict[int, int] = {}
        rank = 0
        for m in rows:
            while m:
                c = (m & -m).bit_length() - 1
                if c in pivots:
                    m ^= pivots[c]
                else:
                    pivots[c] = m
                    rank += 1
                    break
        return rank
    return len(smith_normal_form(matrix).diagonal)


def _invariant_factors(matrix: SparseIntMatrix) -> list[int]:
    return smith_normal_form(matrix).diagonal


def homology_groups(x, dim: int, ring: str = RING_Z,
                    direction: str = "homology", reduced: bool = False) -> GroupDescriptor:
    """H_dim or H^dim of a complex over Z or Z/2."""
    check_ring(ring)
    if direction not in ("homology", "cohomology"):
        raise ParameterError("direction must be 'homology' or 'cohomology'")
    top = x.dim
    if not 0 <= dim <= top:
        raise ParameterError(f"dim {dim} out of range")
    n_cells = len(x.simplices_of_dim(dim)) if isinstance(x, Complex) else x.n_cells(dim)

    d_down = boundary_matrix(x, dim, ring) if dim >= 1 else SparseIntMatrix(0, n_cells)
    d_up = (boundary_matrix(x, dim + 1, ring) if dim + 1 <= top
            else SparseIntMatrix(n_cells, 0))

    if direction == "homology":
        rank_out = _rank(d_down, ring)
        if ring == RING_Z:
            factors = _invariant_factors(d_up)
            rank_in = len(factors)
            torsion = tuple(t for t in factors if t > 1)
        else:
            rank_in = _rank(d_up, ring)
            torsion = ()
    else:
        rank_out = _rank(d_up.transpose(), ring)  # delta^dim
        if ring == RING_Z:
            factors = _invariant_factors(d_down.transpose())  # delta^{dim-1}
            rank_in = len(factors)
            torsion = tuple(t for t in factors if t > 1)
        else:
            rank_in = _rank(d_down.transpose(), ring)
            torsion = ()

    free = n_cells - rank_out - rank_in
    if reduced and dim == 0:
        free -= 1
    return GroupDescriptor(free, torsion)


# ---------------------------------------------------------------------------
# coboundary solving on simplicial complexes
# ---------------------------------------------------------------------------

@dataclass
class CoboundaryResult:
    """Witness b with delta b = c, or an infeasibility transcript."""

    solvable: bool
    ring: str
    witness: Cochain | None = None
    functional: dict[str, Fraction] | None = None

    def to_json_obj(self) -> dict:
        if self.solvable:
            return {"kind": "witness", "ring": self.ring,
                    "witness": self.witness.to_json_obj()}
        return {"kind": "infeasibility", "ring": self.ring,
                "functional": {cell: str(v) for cell, v in sorted(self.functional.items())}}


def delta_matrix(x: Complex, degree: int, ring: str) -> tuple[SparseIntMatrix, list[str], list[str]]:
    """delta: C^{degree-1} -> C^{degree}; returns (matrix, row ids, col ids)."""
    m = boundary_matrix(x, degree, ring).transpose()
    rows = [simplex_cell_id(s) for s in x.simplices_of_dim(degree)]
    cols = [simplex_cell_id(s) for s in x.simplices_of_dim(degree - 1)]
    return m, rows, cols


def apply_delta(x: Complex, b: Cochain) -> Cochain:
    """delta b computed by exact multiplication."""
    m, rows, cols = delta_matrix(x, b.degree + 1, b.ring)
    col_index = {cid: i for i, cid in enumerate(cols)}
    vec = {col_index[cell]: v for cell, v in b.support.items()}
    out = m.mat_vec(vec)
    return Cochain(b.ring, b.degree + 1,
                   {rows[r]: v for r, v in out.items()})


def coboundary_solve(x: Complex, c: Cochain) -> CoboundaryResult:
    """Find b with delta b = c on a simplicial complex, or certify failure."""
    if c.degree < 1 or c.degree > x.dim:
        raise ParameterError(f"degree {c.degree} out of range")
    if c.degree < x.dim:
        dc = apply_delta(x, c)
        if dc.support:
            raise ParameterError("c is not a cocycle (delta c != 0)")
    m, rows, cols = delta_matrix(x, c.degree, c.ring)
    row_index = {cid: i for i, cid in enumerate(rows)}
    for cell in c.support:
        if cell not in row_index:
            raise ParameterError(f"cochain cell {cell!r} has the wrong degree")
    rhs = {row_index[cell]: v for cell, v in c.support.items()}
    res = solve_system(m, rhs, c.ring)
    if res.solvable:
        b = Cochain(c.ring, c.degree - 1,
                    {cols[j]: v for j, v in res.witness.items()})
        if apply_delta(x, b) != c:
            raise VerificationError("coboundary witness failed re-verification")
        return CoboundaryResult(True, c.ring, witness=b)
    func = {rows[r]: v for r, v in res.functional.items()}
    if not verify_functional(m, rhs, res.functional, c.ring):
        raise VerificationError("infeasibility certificate failed replay")
    return CoboundaryResult(False, c.ring, functional=func)


def facet_dual_cochain(x: Complex, facet: Sequence[str], ring: str = RING_Z) -> Cochain:
    """The cochain assigning 1 to one top-dimensional simplex."""
    s = tuple(sorted(facet))
    if not x.has_simplex(s):
        raise ParameterError(f"{s} is not a simplex of {x.name}")
    return Cochain(ring, len(s) - 1, {simplex_cell_id(s): 1})
