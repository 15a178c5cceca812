"""Generic linear maps with exact coordinates and obstruction verdicts.

A PLMap assigns exact rational coordinates to vertices; the simplexwise
linear extension is generic when complementary-dimension disjoint
simplex pairs cross transversally in single interior points and
lower-dimensional disjoint pairs miss each other.  Moment-curve
coordinates satisfy this by construction (Vandermonde), but every
verdict still runs the predicates.

The intersection-number cocycle lives on the deleted product in the
target degree; the verdict is whether it is a coboundary on the orbit
complex, decided exactly with a witness or an infeasibility functional.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import deleted as deleted_mod
from .budget import Budget
from .chains import (RING_Z, RING_Z2, Cochain, SolveResult, SparseIntMatrix,
                     check_ring, solve_system, verify_functional)
from .complexes import Complex, Simplex
from .deleted import (Cell, DeletedCellComplex, OrbitComplex, cell_id,
                      deleted_product, quotient, swap, transport_sign)
from .errors import GenericityError, ParameterError, VerificationError
from .ratlin import rational_det, solve_affine_system

Point = tuple[Fraction, ...]


@dataclass
class PLMap:
    """Exact rational vertex coordinates defining a simplexwise-linear map."""

    source: Complex
    ambient_dim: int
    coords: dict[str, Point]

    def __post_init__(self):
        for v in self.source.vertices:
            if v not in self.coords:
                raise ParameterError(f"no coordinates for vertex {v!r}")
            pt = tuple(Fraction(x) for x in self.coords[v])
            if len(pt) != self.ambient_dim:
                raise ParameterError(f"vertex {v!r} has wrong coordinate length")
            self.coords[v] = pt

    def point(self, v: str) -> Point:
        return self.coords[v]

    def eval_barycentric(self, simplex: Sequence[str], weights: Sequence[Fraction]) -> Point:
        pts = [self.coords[v] for v in simplex]
        return tuple(sum(w * p[k] for w, p in zip(weights, pts))
                     for k in range(self.ambient_dim))

    def fingerprint(self) -> str:
        payload = json.dumps(
            {"m": self.ambient_dim,
             "coords": {v: [str(x) for x in self.coords[v]]
                        for v in sorted(self.coords)}},
            sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


def moment_map(x: Complex, m: int, seed: int = 0) -> PLMap:
    """Vertices on the moment curve t -> (t, t^2, ..., t^m).

    Parameters are distinct integers drawn deterministically from the
    seed; any m+1 of the images are affinely independent (Vandermonde),
    which makes the map generic for every complex.
    """
    if m < 1:
        raise ParameterError("ambient dimension must be >= 1")
    n = len(x.vertices)
    rng = random.Random(seed)
    ts = rng.sample(range(1, 4 * n + 2), n)
    coords = {v: tuple(Fraction(t) ** k for k in range(1, m + 1))
              for v, t in zip(x.vertices, ts)}
    return PLMap(x, m, coords)


# ---------------------------------------------------------------------------
# exact predicates
# ---------------------------------------------------------------------------

def _pair_system(f: PLMap, sigma: Simplex, tau: Simplex):
    """Equations for aff(f sigma) meeting aff(f tau): block [lambda | -mu]."""
    m = f.ambient_dim
    cols = len(sigma) + len(tau)
    a = [[Fraction(0)] * cols for _ in range(m + 2)]
    for i, v in enumerate(sigma):
        p = f.coords[v]
        for k in range(m):
            a[k][i] = p[k]
        a[m][i] = Fraction(1)
    for j, v in enumerate(tau):
        p = f.coords[v]
        for k in range(m):
            a[k][len(sigma) + j] = -p[k]
        a[m + 1][len(sigma) + j] = Fraction(1)
    b = [Fraction(0)] * m + [Fraction(1), Fraction(1)]
    return a, b


def _orientation_det(f: PLMap, sigma: Simplex, tau: Simplex) -> Fraction:
    """Determinant of the combined edge bases in canonical vertex order."""
    cols = []
    for group in (sigma, tau):
        base = f.coords[group[0]]
        for v in group[1:]:
            p = f.coords[v]
            cols.append([p[k] - base[k] for k in range(f.ambient_dim)])
    matrix = [[cols[c][r] for c in range(len(cols))] for r in range(f.ambient_dim)]
    return rational_det(matrix)


def intersection_number(f: PLMap, cell: Cell) -> int:
    """Signed crossing count of the open images of a complementary pair.

    Returns +-1 for a transverse interior crossing, 0 for a miss, and
    raises GenericityError on any exact degeneracy (overlapping hulls or
    a crossing on a proper face).
    """
    sigma, tau = cell
    if set(sigma) & set(tau):
        raise ParameterError("cell components must be disjoint")
    if (len(sigma) - 1) + (len(tau) - 1) != f.ambient_dim:
        raise ParameterError("pair is not of complementary dimension")
    a, b = _pair_system(f, sigma, tau)
    kind, sol, basis = solve_affine_system(a, b)
    if kind == "inconsistent":
        return 0
    if kind == "affine":
        raise GenericityError(
            f"affine hulls of {sigma} and {tau} overlap degenerately")
    if any(w == 0 for w in sol):
        raise GenericityError(
            f"images of {sigma} and {tau} meet on a proper face")
    if any(w < 0 for w in sol):
        return 0
    det = _orientation_det(f, sigma, tau)
    if det == 0:
        raise GenericityError(f"degenerate orientation for {sigma} x {tau}")
    return 1 if det > 0 else -1


def _closed_images_meet(f: PLMap, sigma: Simplex, tau: Simplex) -> bool:
    """Exact test whether the closed images intersect (lower-dim pairs)."""
    from .ratlin import fm_feasible

    a, b = _pair_system(f, sigma, tau)
    kind, sol, basis = solve_affine_system(a, b)
    if kind == "inconsistent":
        return False
    if kind == "unique":
        return all(w >= 0 for w in sol)
    nvars = len(basis)
    constraints = []
    for i in range(len(sol)):
        constraints.append(([vec[i] for vec in basis], sol[i]))
    return fm_feasible(constraints, nvars, strict=False)


def genericity_check(f: PLMap, max_total_dim: int | None = None) -> list[str]:
    """Diagnostics for the general-position predicate; empty iff generic.

    Checks every vertex-disjoint pair with dim sigma + dim tau = m for a
    transverse single interior crossing of affine hulls, and every pair
    with smaller total dimension for image disjointness.
    """
    m = f.ambient_dim
    diags: list[str] = []
    pts = sorted(f.coords.items())
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if pts[i][1] == pts[j][1]:
                diags.append(f"duplicate coordinates for {pts[i][0]} and {pts[j][0]}")
    if diags:
        return diags
    d = deleted_product(f.source)
    top = min(m, d.dim) if max_total_dim is None else min(max_total_dim, d.dim, m)
    for grade in range(top + 1):
        for cell in d.iter_cells_of_grade(grade):
            if cell > swap(cell):
                continue
            sigma, tau = cell
            if grade == m:
                try:
                    intersection_number(f, cell)
                except GenericityError as e:
                    diags.append(str(e))
            else:
                if _closed_images_meet(f, sigma, tau):
                    diags.append(
                        f"images of low-dimensional pair {sigma} x {tau} intersect")
    return diags


# ---------------------------------------------------------------------------
# the obstruction cocycle
# ---------------------------------------------------------------------------

def vk_cocycle(x: Complex, f: PLMap, check_genericity: bool = True) -> Cochain:
    """Intersection-number cochain on the deleted product in degree m.

    Values are computed on orbit representatives and mirrored through
    the swap sign, so the support covers ordered cells.
    """
    m = f.ambient_dim
    if check_genericity:
        diags = genericity_check(f)
        if diags:
            raise GenericityError("; ".join(diags[:5]))
    d = deleted_product(x)
    support: dict[str, int] = {}
    for cell in d.iter_cells_of_grade(m):
        if cell > swap(cell):
            continue
        val = intersection_number(f, cell)
        if val:
            support[cell_id(cell)] = val
            mirrored = val * transport_sign(cell, "product_sign")
            support[cell_id(swap(cell))] = mirrored
    return Cochain(RING_Z, m, support)


def fold_to_orbit(c: Cochain, orbit: OrbitComplex) -> dict[Cell, int]:
    """Restrict an equivariant ordered-cell cochain to orbit representatives."""
    out: dict[Cell, int] = {}
    for cid, v in c.support.items():
        cell = deleted_mod.parse_cell_id(cid)
        if cell == deleted_mod.orbit_rep(cell):
            out[cell] = v
    return out


# ---------------------------------------------------------------------------
# verdicts
# ---------------------------------------------------------------------------

@dataclass
class ObstructionReport:
    """Verdict plus a machine-checkable certificate.

    verdict "zero" carries a witness cochain b on the orbit complex with
    delta b = c; verdict "nonzero" carries a rational functional y with
    y.delta integral (zero mod 2 for the Z/2 ring) and y.c not an
    integer (odd).  Both re-verify without re-solving.
    """

    complex_name: str
    m: int
    ring: str
    sign_mode: str
    seed: int
    verdict: str
    cocycle: dict[str, int]
    witness: dict[str, int] | None
    functional: dict[str, str] | None
    map_fingerprint: str

    def to_json_obj(self) -> dict:
        return {
            "complex": self.complex_name,
            "m": self.m,
            "ring": self.ring,
            "sign_mode": self.sign_mode,
            "seed": self.seed,
            "verdict": self.verdict,
            "cocycle": dict(sorted(self.cocycle.items())),
            "witness": dict(sorted(self.witness.items())) if self.witness is not None else None,
            "functional": (dict(sorted(self.functional.items()))
                           if self.functional is not None else None),
            "map_fingerprint": self.map_fingerprint,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "ObstructionReport":
        return cls(complex_name=obj["complex"], m=int(obj["m"]), ring=obj["ring"],
                   sign_mode=obj["sign_mode"], seed=int(obj["seed"]),
                   verdict=obj["verdict"],
                   cocycle={str(k): int(v) for k, v in obj["cocycle"].items()},
                   witness=(None if obj.get("witness") is None else
                            {str(k): int(v) for k, v in obj["witness"].items()}),
                   functional=(None if obj.get("functional") is None else
                               {str(k): str(v) for k, v in obj["functional"].items()}),
                   map_fingerprint=obj["map_fingerprint"])


def default_sign_mode(ring: str) -> str:
    # product_sign is the quotient CW complex with constant Z coefficients;
    # over Z/2 both modes coincide.
    return "product_sign" if ring == RING_Z else "untwisted"


def _orbit_system(x: Complex, m: int, ring: str, sign_mode: str):
    orbit = quotient(deleted_product(x), sign_mode)
    matrix = orbit.delta_matrix(m, ring)
    rows = orbit.reps_of_grade(m)
    cols = orbit.reps_of_grade(m - 1)
    return orbit, matrix, rows, cols


def vk_obstruction(x: Complex, m: int, ring: str = RING_Z2, seed: int = 0,
                   sign_mode: str | None = None,
                   budget: Budget | None = None) -> ObstructionReport:
    """Full obstruction verdict with a re-verified certificate."""
    check_ring(ring)
    if x.dim < 1:
        raise ParameterError("complex must have dimension >= 1")
    if ring == RING_Z and m != 2 * x.dim:
        raise ParameterError(
            f"integral verdicts require m = 2 dim = {2 * x.dim}, got {m}")
    if ring == RING_Z2 and not 1 <= m <= 2 * x.dim:
        raise ParameterError(f"need 1 <= m <= {2 * x.dim}, got {m}")
    if sign_mode is None:
        sign_mode = default_sign_mode(ring)

    f = moment_map(x, m, seed)
    diags = genericity_check(f)
    if diags:
        raise GenericityError("; ".join(diags[:5]))

    orbit, matrix, rows, cols = _orbit_system(x, m, ring, sign_mode)
    if budget is not None:
        budget.charge(len(rows) + len(cols), "orbit cells")

    rhs: dict[int, int] = {}
    cocycle: dict[str, int] = {}
    for i, cell in enumerate(rows):
        val = intersection_number(f, cell)
        if budget is not None:
            budget.charge(1, "cocycle cells")
        if ring == RING_Z2:
            val %= 2
        if val:
            rhs[i] = val
            cocycle[cell_id(cell)] = val

    res = solve_system(matrix, rhs, ring)
    report = _report_from_solve(x, m, ring, sign_mode, seed, f, res,
                                cocycle, rows, cols, matrix, rhs)
    if not verify_report(report, x):
        raise VerificationError("obstruction certificate failed re-verification")
    return report


def _report_from_solve(x, m, ring, sign_mode, seed, f, res: SolveResult,
                       cocycle, rows, cols, matrix, rhs) -> ObstructionReport:
    if res.solvable:
        witness = {cell_id(cols[j]): v for j, v in res.witness.items()}
        return ObstructionReport(x.name, m, ring, sign_mode, seed, "zero",
                                 cocycle, witness, None, f.fingerprint())
    functional = {cell_id(rows[i]): str(v) for i, v in res.functional.items()}
    return ObstructionReport(x.name, m, ring, sign_mode, seed, "nonzero",
                             cocycle, None, functional, f.fingerprint())


def verify_report(report: ObstructionReport, x: Complex) -> bool:
    """Replay a certificate: witness multiplication or functional pairing.

    Rebuilds the (deterministic) orbit coboundary matrix and checks the
    stored certificate against the stored cocycle; never re-solves.
    """
    orbit, matrix, rows, cols = _orbit_system(x, report.m, report.ring,
                                              report.sign_mode)
    row_index = {cell_id(c): i for i, c in enumerate(rows)}
    col_index = {cell_id(c): j for j, c in enumerate(cols)}
    if set(report.cocycle) - set(row_index):
        return False
    rhs = {row_index[k]: v for k, v in report.cocycle.items()}
    if report.verdict == "zero":
        if report.witness is None or set(report.witness) - set(col_index):
            return False
        vec = {col_index[k]: v for k, v in report.witness.items()}
        prod = matrix.mat_vec(vec)
        if report.ring == RING_Z2:
            prod = {r: v % 2 for r, v in prod.items() if v % 2}
        return prod == {r: v for r, v in rhs.items() if v}
    if report.functional is None or set(report.functional) - set(row_index):
        return False
    func = {row_index[k]: Fraction(v) for k, v in report.functional.items()}
    return verify_functional(matrix, rhs, func, report.ring)
