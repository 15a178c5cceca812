"""Simplicial deleted products and their swap-involution quotients.

The deleted product of a complex X is the cell complex of ordered pairs
(sigma, tau) of vertex-disjoint simplices, graded by dim sigma + dim tau,
with the signed product incidence

    d(sigma x tau) = d(sigma) x tau + (-1)^{dim sigma} sigma x d(tau).

The swap t(sigma, tau) = (tau, sigma) is free (disjointness forbids
sigma = tau).  The orbit complex keeps one canonical representative per
orbit; mapping the other element onto the representative multiplies
coefficients by a transport sign: (-1)^{dim sigma . dim tau} in
"product_sign" mode (the plain quotient CW complex with constant integer
coefficients), +1 in "untwisted" mode (valid over Z/2 only).
"""

from __future__ import annotations

from typing import Iterable, Iterator

from .chains import RING_Z2, SparseIntMatrix, check_ring
from .complexes import Complex, Simplex
from .errors import ParameterError

Cell = tuple[Simplex, Simplex]

SIGN_MODES = ("untwisted", "product_sign")


def cell_id(cell: Cell) -> str:
    return ",".join(cell[0]) + "|" + ",".join(cell[1])


def parse_cell_id(cid: str) -> Cell:
    left, _, right = cid.partition("|")
    return (tuple(left.split(",")), tuple(right.split(",")))


def swap(cell: Cell) -> Cell:
    return (cell[1], cell[0])


def cell_dim(cell: Cell) -> int:
    return len(cell[0]) + len(cell[1]) - 2


def orbit_rep(cell: Cell) -> Cell:
    return min(cell, swap(cell))


def transport_sign(cell: Cell, sign_mode: str) -> int:
    """Sign picked up when a cochain value is carried across the swap."""
    if sign_mode == "untwisted":
        return 1
    return -1 if (len(cell[0]) - 1) * (len(cell[1]) - 1) % 2 else 1


def _cell_key(cell: Cell):
    return (len(cell[0]), len(cell[1]), cell[0], cell[1])


class DeletedCellComplex:
    """Ordered disjoint simplex pairs of a base complex, built lazily by grade."""

    def __init__(self, base: Complex):
        self.base = base
        self._vindex = {v: i for i, v in enumerate(base.vertices)}
        self._masks: dict[Simplex, int] = {}
        for s in base.simplices:
            m = 0
            for v in s:
                m |= 1 << self._vindex[v]
            self._masks[s] = m
        self._grade_cache: dict[int, tuple[Cell, ...]] = {}

    @property
    def dim(self) -> int:
        return 2 * self.base.dim

    def mask(self, s: Simplex) -> int:
        return self._masks[s]

    def iter_cells_of_grade(self, grade: int) -> Iterator[Cell]:
        """Yield grade-g cells in canonical order without caching."""
        if grade < 0 or grade > self.dim:
            return
        for a in range(0, grade + 1):
            b = grade - a
            left = self.base.simplices_of_dim(a)
            right = self.base.simplices_of_dim(b)
            if not left or not right:
                continue
            rmasks = [(t, self._masks[t]) for t in right]
            for s in left:
                ms = self._masks[s]
                for t, mt in rmasks:
                    if ms & mt == 0:
                        yield (s, t)

    def cells_of_grade(self, grade: int) -> tuple[Cell, ...]:
        if grade not in self._grade_cache:
            self._grade_cache[grade] = tuple(self.iter_cells_of_grade(grade))
        return self._grade_cache[grade]

    def n_cells(self, grade: int) -> int:
        if grade in self._grade_cache:
            return len(self._grade_cache[grade])
        return sum(1 for _ in self.iter_cells_of_grade(grade))

    @property
    def cells(self) -> list[Cell]:
        """All cells, graded order.  Materializes every grade."""
        out: list[Cell] = []
        for g in range(self.dim + 1):
            out.extend(self.cells_of_grade(g))
        return out

    def census(self, grade: int) -> dict[tuple[int, int], int]:
        """Cell counts of one grade keyed by (dim sigma, dim tau)."""
        out: dict[tuple[int, int], int] = {}
        for s, t in self.iter_cells_of_grade(grade):
            key = (len(s) - 1, len(t) - 1)
            out[key] = out.get(key, 0) + 1
        return out

    def euler_characteristic(self) -> int:
        return sum((-1) ** g * self.n_cells(g) for g in range(self.dim + 1))

    def has_cell(self, cell: Cell) -> bool:
        s, t = cell
        return (s in self._masks and t in self._masks
                and self._masks[s] & self._masks[t] == 0)

    def boundary_entries(self, cell: Cell) -> list[tuple[Cell, int]]:
        """Faces of a product cell with their incidence signs."""
        s, t = cell
        out: list[tuple[Cell, int]] = []
        if len(s) > 1:
            for i in range(len(s)):
                out.append(((s[:i] + s[i + 1:], t), (-1) ** i))
        if len(t) > 1:
            base_sign = (-1) ** (len(s) - 1)
            for j in range(len(t)):
                out.append(((s, t[:j] + t[j + 1:]), base_sign * (-1) ** j))
        return out

    def cofacet_count(self, cell: Cell) -> int:
        """Number of (grade+1)-cells having this cell in their boundary."""
        g = cell_dim(cell)
        count = 0
        for top in self.iter_cells_of_grade(g + 1):
            if any(f == cell for f, _ in self.boundary_entries(top)):
                count += 1
        return count

    def boundary_matrix(self, grade: int, ring: str = "Z") -> SparseIntMatrix:
        """Boundary operator grade -> grade-1 on the ordered complex."""
        check_ring(ring)
        if not 0 <= grade <= self.dim:
            raise ParameterError(f"grade {grade} out of range")
        rows = self.cells_of_grade(grade - 1) if grade >= 1 else ()
        cols = self.cells_of_grade(grade)
        rindex = {c: i for i, c in enumerate(rows)}
        m = SparseIntMatrix(len(rows), len(cols))
        for j, cell in enumerate(cols):
            for face, sign in self.boundary_entries(cell):
                if ring == RING_Z2:
                    sign = sign % 2
                m.add_at(rindex[face], j, sign)
        return m

    def simplices_of_dim(self, grade: int) -> tuple[Cell, ...]:
        # chains.homology_groups duck-type hook
        return self.cells_of_grade(grade)


def deleted_product(x: Complex) -> DeletedCellComplex:
    """The finite cellular model of the deleted square of |x|."""
    return DeletedCellComplex(x)


class OrbitComplex:
    """Quotient of a deleted product by the swap, one representative per orbit."""

    def __init__(self, deleted: DeletedCellComplex, sign_mode: str = "product_sign"):
        if sign_mode not in SIGN_MODES:
            raise ParameterError(f"sign_mode must be one of {SIGN_MODES}")
        self.deleted = deleted
        self.sign_mode = sign_mode
        self._rep_cache: dict[int, tuple[Cell, ...]] = {}

    @property
    def dim(self) -> int:
        return self.deleted.dim

    def iter_reps_of_grade(self, grade: int) -> Iterator[Cell]:
        for cell in self.deleted.iter_cells_of_grade(grade):
            if cell <= swap(cell):
                yield cell

    def reps_of_grade(self, grade: int) -> tuple[Cell, ...]:
        if grade not in self._rep_cache:
            self._rep_cache[grade] = tuple(self.iter_reps_of_grade(grade))
        return self._rep_cache[grade]

    def n_cells(self, grade: int) -> int:
        if grade in self._rep_cache:
            return len(self._rep_cache[grade])
        return sum(1 for _ in self.iter_reps_of_grade(grade))

    def euler_characteristic(self) -> int:
        return sum((-1) ** g * self.n_cells(g) for g in range(self.dim + 1))

    def fold(self, cell: Cell) -> tuple[Cell, int]:
        """Map a cell to (representative, transport sign)."""
        rep = orbit_rep(cell)
        if rep == cell:
            return rep, 1
        return rep, transport_sign(cell, self.sign_mode)

    def boundary_matrix(self, grade: int, ring: str = "Z") -> SparseIntMatrix:
        """Boundary grade -> grade-1 on orbit chains under the transport rule."""
        check_ring(ring)
        rows = self.reps_of_grade(grade - 1) if grade >= 1 else ()
        cols = self.reps_of_grade(grade)
        rindex = {c: i for i, c in enumerate(rows)}
        m = SparseIntMatrix(len(rows), len(cols))
        for j, cell in enumerate(cols):
            for face, sign in self.deleted.boundary_entries(cell):
                rep, t = self.fold(face)
                v = sign * t
                if ring == RING_Z2:
                    v = v % 2
                m.add_at(rindex[rep], j, v)
        return m

    def delta_matrix(self, grade: int, ring: str = "Z") -> SparseIntMatrix:
        """Coboundary C^{grade-1} -> C^{grade}: rows grade-reps, cols (grade-1)-reps."""
        return self.boundary_matrix(grade, ring).transpose()

    def simplices_of_dim(self, grade: int) -> tuple[Cell, ...]:
        return self.reps_of_grade(grade)


def quotient(d: DeletedCellComplex, sign_mode: str = "product_sign") -> OrbitComplex:
    """Orbit complex of the free swap involution."""
    return OrbitComplex(d, sign_mode)
