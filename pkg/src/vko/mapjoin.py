"""Constructive join of generic maps with exact double-point control.

Given generic maps f and g at twice the source dimension and sign
labelings of their double points, builds the join map into the skew
frame (f-image at last-coordinate +1, g-image at -1) extended by the
linear function combining the labeling extensions, and verifies exactly
that its double points are the sign-matching quadruples at join level
one half.

Double points of f are made vertices by stellar subdivision before
joining, so every image coincidence of the subdivided map sits at a
vertex pair.  This pins down the complete list of simplex pairs of the
join that can carry coincidences (an exact argument, audited at session
start, not a genericity assumption):

  * the level coordinate forces equal join parameters on both sides;
  * at interior levels the first factor-block forces either equal
    source points (same carrier simplex) or a double-point vertex pair,
    and likewise for the second factor;

giving four candidate families: double-point vertex against
double-point vertex (the predicted points), same-simplex against a
double-point pair on one side (the "cylinder" families the last
coordinate must kill), and the pure top/bottom vertex pairs.  Every
candidate system is solved exactly; singular systems are decided by
strict Fourier-Motzkin feasibility on the solution space.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .complexes import Complex, Simplex, join, stellar_subdivide
from .errors import (GenericityError, ParameterError, SubdivisionConflictError,
                     VerificationError)
from .obstruction import PLMap, genericity_check, moment_map
from .deleted import deleted_product, swap as cell_swap
from .ratlin import fm_feasible, solve_affine_system

Bary = tuple[Fraction, ...]
PointKey = tuple[Simplex, Bary]


# ---------------------------------------------------------------------------
# double points
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DoublePoint:
    """Ordered pair of interior points with exactly equal images."""

    simplex_a: Simplex
    bary_a: Bary
    simplex_b: Simplex
    bary_b: Bary

    def key(self) -> tuple:
        return (self.simplex_a, self.bary_a, self.simplex_b, self.bary_b)

    def swapped(self) -> "DoublePoint":
        return DoublePoint(self.simplex_b, self.bary_b, self.simplex_a, self.bary_a)

    def is_rep(self) -> bool:
        return self.key() <= self.swapped().key()

    def first_point(self) -> PointKey:
        return (self.simplex_a, self.bary_a)

    def second_point(self) -> PointKey:
        return (self.simplex_b, self.bary_b)


@dataclass
class DoublePointSet:
    """All transverse double points of a generic map, swap-closed."""

    plmap: PLMap
    pairs: tuple[DoublePoint, ...]

    def orbits(self) -> list[DoublePoint]:
        return [dp for dp in self.pairs if dp.is_rep()]

    def __len__(self) -> int:
        return len(self.pairs)


def double_points(f: PLMap, check_genericity: bool = True) -> DoublePointSet:
    """Enumerate the double points of a generic map exactly.

    Requires the ambient dimension to be twice the source dimension;
    genericity confines coincidences to vertex-disjoint pairs of
    top-dimensional simplices, which are scanned exhaustively.
    """
    x = f.source
    if f.ambient_dim != 2 * x.dim:
        raise ParameterError("double_points needs ambient dim = 2 * source dim")
    if check_genericity:
        diags = genericity_check(f)
        if diags:
            raise GenericityError("; ".join(diags[:5]))
    d = deleted_product(x)
    found: list[DoublePoint] = []
    for cell in d.iter_cells_of_grade(f.ambient_dim):
        if cell > cell_swap(cell):
            continue
        sigma, tau = cell
        a, b = _coincidence_system(f, sigma, f, tau)
        kind, sol, basis = solve_affine_system(a, b)
        if kind == "inconsistent":
            continue
        if kind == "affine":
            raise GenericityError(f"degenerate pair {sigma} x {tau}")
        if any(w == 0 for w in sol):
            raise GenericityError(f"face crossing at {sigma} x {tau}")
        if any(w < 0 for w in sol):
            continue
        la = tuple(sol[:len(sigma)])
        mb = tuple(sol[len(sigma):])
        dp = DoublePoint(sigma, la, tau, mb)
        found.append(dp)
        found.append(dp.swapped())
        # exact image equality re-check
        if f.eval_barycentric(sigma, la) != f.eval_barycentric(tau, mb):
            raise VerificationError("double point images differ")
    found.sort(key=lambda dp: dp.key())
    return DoublePointSet(f, tuple(found))


def _coincidence_system(f: PLMap, sigma: Sequence[str], g: PLMap, tau: Sequence[str]):
    """Equations for f|sigma meeting g|tau (maps into the same ambient)."""
    m = f.ambient_dim
    cols = len(sigma) + len(tau)
    a = [[Fraction(0)] * cols for _ in range(m + 2)]
    for i, v in enumerate(sigma):
        p = f.coords[v]
        for k in range(m):
            a[k][i] = p[k]
        a[m][i] = Fraction(1)
    for j, v in enumerate(tau):
        p = g.coords[v]
        for k in range(m):
            a[k][len(sigma) + j] = -p[k]
        a[m + 1][len(sigma) + j] = Fraction(1)
    b = [Fraction(0)] * m + [Fraction(1), Fraction(1)]
    return a, b


# ---------------------------------------------------------------------------
# sign labelings
# ---------------------------------------------------------------------------

@dataclass
class SignLabeling:
    """Equivariant +-1 labeling of double-point orbits.

    Stored on orbit representatives; the induced value on the swapped
    ordered pair is negated.
    """

    values: dict[tuple, int]

    def __post_init__(self):
        for k, v in self.values.items():
            if v not in (1, -1):
                raise ParameterError("labeling values must be +1 or -1")

    def on(self, dp: DoublePoint) -> int:
        if dp.is_rep():
            return self.values[dp.key()]
        return -self.values[dp.swapped().key()]

    def to_json_obj(self) -> dict:
        out = {}
        for key, v in sorted(self.values.items()):
            sa, ba, sb, bb = key
            cid = ",".join(sa) + ";" + ",".join(str(x) for x in ba) + "|" \
                + ",".join(sb) + ";" + ",".join(str(x) for x in bb)
            out[cid] = v
        return out


def constant_labeling(dps: DoublePointSet, value: int = 1) -> SignLabeling:
    return SignLabeling({dp.key(): value for dp in dps.orbits()})


def enumerate_labelings(dps: DoublePointSet) -> list[SignLabeling]:
    """All 2^orbits equivariant labelings, deterministic order."""
    orbits = [dp.key() for dp in dps.orbits()]
    out = []
    for bits in itertools.product((1, -1), repeat=len(orbits)):
        out.append(SignLabeling(dict(zip(orbits, bits))))
    return out


# ---------------------------------------------------------------------------
# subdivision at double points and labeling extension
# ---------------------------------------------------------------------------

@dataclass
class Subdivision:
    """Source subdivided so every double-point projection is a vertex."""

    complex: Complex
    plmap: PLMap
    vertex_of_point: dict[PointKey, str]


def subdivide_at_double_points(f: PLMap, dps: DoublePointSet,
                               prefix: str = "dp") -> Subdivision:
    points: dict[PointKey, None] = {}
    for dp in dps.pairs:
        points.setdefault(dp.first_point())
    by_carrier: dict[Simplex, list[PointKey]] = {}
    for pt in points:
        by_carrier.setdefault(pt[0], []).append(pt)

    cx = f.source
    coords = dict(f.coords)
    vertex_of_point: dict[PointKey, str] = {}
    counter = 0
    for carrier in sorted(by_carrier):
        # vertices of the evolving subdivision carry barycentric
        # coordinates w.r.t. the original carrier for exact location
        local_bary: dict[str, Bary] = {
            v: tuple(Fraction(1 if i == j else 0) for j in range(len(carrier)))
            for i, v in enumerate(carrier)}
        local = Complex.from_facets([carrier], name="local")
        for pt in sorted(by_carrier[carrier], key=lambda p: p[1]):
            target = None
            for facet in local.simplices_of_dim(len(carrier) - 1):
                a = [[local_bary[v][k] for v in facet] for k in range(len(carrier))]
                a.append([Fraction(1)] * len(facet))
                b = list(pt[1]) + [Fraction(1)]
                kind, sol, basis = solve_affine_system(a, b)
                if kind != "unique":
                    continue
                if all(w > 0 for w in sol):
                    target = facet
                    break
                if all(w >= 0 for w in sol) and any(w == 0 for w in sol):
                    raise SubdivisionConflictError(
                        f"subdivision point lands on a face of {facet}; reseed")
            if target is None:
                raise SubdivisionConflictError(
                    f"could not locate point {pt} in its carrier; reseed")
            name = f"{prefix}{counter}"
            counter += 1
            local = stellar_subdivide(local, target, name)
            local_bary[name] = pt[1]
            vertex_of_point[pt] = name
            coords[name] = f.eval_barycentric(carrier, pt[1])
        simplices = [s for s in cx.simplices if s != carrier]
        simplices.extend(local.simplices_of_dim(len(carrier) - 1))
        cx = Complex.from_simplices(simplices, name=cx.name)
    plmap = PLMap(cx, f.ambient_dim, {v: coords[v] for v in cx.vertices})
    return Subdivision(cx, plmap, vertex_of_point)


@dataclass
class ExtendedLabeling:
    """Vertexwise extension of a labeling on a subdivided source.

    values vanish at original vertices and equal the labeling value at
    each new double-point vertex, selected through the first or second
    projection branch.
    """

    complex: Complex
    plmap: PLMap
    values: dict[str, int]
    dp_vertices: tuple[tuple[str, str], ...]
    labeling: SignLabeling
    projection: int
    source_map: PLMap = None
    double_point_set: DoublePointSet = None


def extend_labeling(f: PLMap, dps: DoublePointSet, labeling: SignLabeling,
                    projection: int = 1, prefix: str = "dp") -> ExtendedLabeling:
    """Extend a labeling to a vertexwise function on a subdivision.

    projection=1 reads the value at the first component of each ordered
    double point (the paper's P-side convention); projection=2 at the
    second (the Q-side convention).
    """
    if projection not in (1, 2):
        raise ParameterError("projection must be 1 or 2")
    seen: dict[PointKey, tuple] = {}
    for dp in dps.pairs:
        pt = dp.first_point() if projection == 1 else dp.second_point()
        if pt in seen and seen[pt] != dp.key():
            raise SubdivisionConflictError(
                "two double points share a projection image; regenerate the map")
        seen[pt] = dp.key()
    sub = subdivide_at_double_points(f, dps, prefix=prefix)
    values = {v: 0 for v in sub.complex.vertices}
    dp_vertices = []
    for dp in dps.pairs:
        va = sub.vertex_of_point[dp.first_point()]
        vb = sub.vertex_of_point[dp.second_point()]
        dp_vertices.append((va, vb))
        pt_vertex = va if projection == 1 else vb
        values[pt_vertex] = labeling.on(dp)
    return ExtendedLabeling(sub.complex, sub.plmap, values,
                            tuple(dp_vertices), labeling, projection,
                            source_map=f, double_point_set=dps)


# ---------------------------------------------------------------------------
# the join map
# ---------------------------------------------------------------------------

@dataclass
class JoinMap:
    """Simplexwise-linear map on join(P', Q') into the skew frame.

    Coordinates: the f-image block, the g-image block, the level
    coordinate (+1 on P, -1 on Q), and the labeling coordinate.
    """

    plmap: PLMap
    p_part: ExtendedLabeling
    q_part: ExtendedLabeling

    @property
    def level_index(self) -> int:
        return self.p_part.plmap.ambient_dim + self.q_part.plmap.ambient_dim


def build_h(p_ext: ExtendedLabeling, q_ext: ExtendedLabeling) -> JoinMap:
    """Assemble (f*g) x Xi on the join of the subdivided sources."""
    mp = p_ext.plmap.ambient_dim
    nq = q_ext.plmap.ambient_dim
    jc = join(p_ext.complex, q_ext.complex,
              name=f"({p_ext.complex.name})*({q_ext.complex.name})")
    zero_p = (Fraction(0),) * mp
    zero_q = (Fraction(0),) * nq
    coords: dict[str, tuple] = {}
    for u in p_ext.complex.vertices:
        coords["L." + u] = (p_ext.plmap.coords[u] + zero_q
                            + (Fraction(1), Fraction(p_ext.values[u])))
    for w in q_ext.complex.vertices:
        coords["R." + w] = (zero_p + q_ext.plmap.coords[w]
                            + (Fraction(-1), Fraction(q_ext.values[w])))
    plmap = PLMap(jc, mp + nq + 2, coords)
    return JoinMap(plmap, p_ext, q_ext)


# ---------------------------------------------------------------------------
# exact double-point verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FoundPoint:
    carrier_u: Simplex
    bary_u: Bary
    carrier_v: Simplex
    bary_v: Bary

    def key(self) -> tuple:
        return (self.carrier_u, self.bary_u, self.carrier_v, self.bary_v)


@dataclass
class MapJoinReport:
    """Outcome of the exact enumeration of the join map's double points."""

    ok: bool
    predicted_count: int
    found_count: int
    all_at_half_level: bool
    all_transverse: bool
    cylinder_families_empty: bool
    swap_closed: bool
    mismatches: list[str] = field(default_factory=list)

    def to_json_obj(self) -> dict:
        return {"ok": self.ok, "predicted": self.predicted_count,
                "found": self.found_count,
                "all_at_half_level": self.all_at_half_level,
                "all_transverse": self.all_transverse,
                "cylinder_families_empty": self.cylinder_families_empty,
                "swap_closed": self.swap_closed,
                "mismatches": self.mismatches}


class _CachedSystem:
    """Labeling-independent part of a candidate coincidence system."""

    __slots__ = ("cell_u", "cell_v", "kind", "base", "basis",
                 "base_strict", "space_strict", "family")

    def __init__(self, cell_u, cell_v, kind, base, basis, family):
        self.cell_u = cell_u
        self.cell_v = cell_v
        self.kind = kind
        self.base = base
        self.basis = basis
        self.family = family
        self.base_strict = (kind != "inconsistent"
                            and all(w > 0 for w in (base or [])))
        if kind == "affine":
            cons = [([vec[i] for vec in basis], base[i]) for i in range(len(base))]
            self.space_strict = fm_feasible(cons, len(basis), strict=True)
        else:
            self.space_strict = False


class MapJoinSession:
    """Caches subdivisions and candidate systems across labeling choices.

    The heavy exact solves (frame systems and transversality cofaces)
    do not depend on the labelings; verifying one labeling pair then
    costs only the last-coordinate updates.
    """

    def __init__(self, f: PLMap, dps_f: DoublePointSet,
                 g: PLMap, dps_g: DoublePointSet):
        self.dps_f, self.dps_g = dps_f, dps_g
        self.sub_p = subdivide_at_double_points(f, dps_f, prefix="dp")
        self.sub_q = subdivide_at_double_points(g, dps_g, prefix="dq")
        self.mp = f.ambient_dim
        self.nq = g.ambient_dim
        self._audit_vertex_coincidences()
        self._frame_coords = self._build_frame_coords()
        self._xi_slots = self._build_xi_slots()
        self._systems = self._build_candidate_systems()
        self._transversality = self._build_transversality_cache()

    # -- frame without the labeling coordinate --------------------------

    def _build_frame_coords(self) -> dict[str, tuple]:
        zero_p = (Fraction(0),) * self.mp
        zero_q = (Fraction(0),) * self.nq
        out = {}
        for u in self.sub_p.complex.vertices:
            out["L." + u] = self.sub_p.plmap.coords[u] + zero_q + (Fraction(1),)
        for w in self.sub_q.complex.vertices:
            out["R." + w] = zero_p + self.sub_q.plmap.coords[w] + (Fraction(-1),)
        return out

    def _build_xi_slots(self):
        """vertex -> (side, ordered dp index) for labeling evaluation."""
        slots: dict[str, tuple[str, int]] = {}
        for i, dp in enumerate(self.dps_f.pairs):
            v = self.sub_p.vertex_of_point[dp.first_point()]
            slots["L." + v] = ("f", i)
        for j, dp in enumerate(self.dps_g.pairs):
            w = self.sub_q.vertex_of_point[dp.second_point()]
            slots["R." + w] = ("g", j)
        return slots

    def xi_value(self, vertex: str, phi: SignLabeling, psi: SignLabeling) -> Fraction:
        slot = self._xi_slots.get(vertex)
        if slot is None:
            return Fraction(0)
        side, idx = slot
        if side == "f":
            return Fraction(phi.on(self.dps_f.pairs[idx]))
        return Fraction(psi.on(self.dps_g.pairs[idx]))

    # -- audit: coincidences of the subdivided maps sit at vertices -----

    def _audit_vertex_coincidences(self) -> None:
        """Check that the subdivided maps cross only at double-point vertices.

        Sub-simplices of one subdivided simplex are collinear, so their
        pair systems can be consistent yet underdetermined; those are
        decided by strict feasibility instead of being rejected.
        """
        for sub in (self.sub_p, self.sub_q):
            cx, pm = sub.complex, sub.plmap
            d = deleted_product(cx)
            for cell in d.iter_cells_of_grade(2 * cx.dim):
                if cell > cell_swap(cell):
                    continue
                sigma, tau = cell
                a, b = _coincidence_system(pm, sigma, pm, tau)
                kind, sol, basis = solve_affine_system(a, b)
                if kind == "inconsistent":
                    continue
                if kind == "unique":
                    if all(w > 0 for w in sol):
                        raise GenericityError(
                            "subdivided map still has an interior crossing "
                            f"at {sigma} x {tau}; reseed")
                    continue
                cons = [([vec[i] for vec in basis], sol[i])
                        for i in range(len(sol))]
                if fm_feasible(cons, len(basis), strict=True):
                    raise GenericityError(
                        f"overlapping images on the subdivided pair "
                        f"{sigma} x {tau}; reseed")

    # -- candidate systems ------------------------------------------------

    def _solve_frame_pair(self, cell_u: Simplex, cell_v: Simplex, family: str):
        m = self.mp + self.nq + 1
        cols = len(cell_u) + len(cell_v)
        a = [[Fraction(0)] * cols for _ in range(m + 2)]
        for i, v in enumerate(cell_u):
            p = self._frame_coords[v]
            for k in range(m):
                a[k][i] = p[k]
            a[m][i] = Fraction(1)
        for j, v in enumerate(cell_v):
            p = self._frame_coords[v]
            for k in range(m):
                a[k][len(cell_u) + j] = -p[k]
            a[m + 1][len(cell_u) + j] = Fraction(1)
        b = [Fraction(0)] * m + [Fraction(1), Fraction(1)]
        kind, base, basis = solve_affine_system(a, b)
        return _CachedSystem(cell_u, cell_v, kind, base, basis, family)

    def _build_candidate_systems(self) -> list[_CachedSystem]:
        systems: list[_CachedSystem] = []
        p_simps: list[Simplex] = [()] + list(self.sub_p.complex.simplices)
        q_simps: list[Simplex] = [()] + list(self.sub_q.complex.simplices)
        fdpv = [( "L." + a, "L." + b) for a, b in self._dp_vertex_pairs("f")]
        gdpv = [( "R." + c, "R." + d) for c, d in self._dp_vertex_pairs("g")]

        # (A) double point against double point
        for (la, lb) in fdpv:
            for (rc, rd) in gdpv:
                cell_u = tuple(sorted((la, rc)))
                cell_v = tuple(sorted((lb, rd)))
                systems.append(self._solve_frame_pair(cell_u, cell_v, "A"))
        # (B) shared P-simplex, double point on the Q side
        for sigma in p_simps:
            ls = tuple("L." + v for v in sigma)
            for (rc, rd) in gdpv:
                cell_u = tuple(sorted(ls + (rc,)))
                cell_v = tuple(sorted(ls + (rd,)))
                systems.append(self._solve_frame_pair(cell_u, cell_v, "B"))
        # (C) shared Q-simplex, double point on the P side
        for tau in q_simps:
            rs = tuple("R." + v for v in tau)
            for (la, lb) in fdpv:
                cell_u = tuple(sorted((la,) + rs))
                cell_v = tuple(sorted((lb,) + rs))
                systems.append(self._solve_frame_pair(cell_u, cell_v, "C"))
        # (D) pure top/bottom vertex pairs
        for (la, lb) in fdpv:
            systems.append(self._solve_frame_pair((la,), (lb,), "D"))
        for (rc, rd) in gdpv:
            systems.append(self._solve_frame_pair((rc,), (rd,), "D"))
        return systems

    def _dp_vertex_pairs(self, side: str) -> list[tuple[str, str]]:
        dps = self.dps_f if side == "f" else self.dps_g
        sub = self.sub_p if side == "f" else self.sub_q
        out = []
        for dp in dps.pairs:
            out.append((sub.vertex_of_point[dp.first_point()],
                        sub.vertex_of_point[dp.second_point()]))
        return out

    # -- transversality ----------------------------------------------------

    def _facet_cofaces(self, side_complex: Complex, vertex: str) -> list[Simplex]:
        return [f for f in side_complex.facets() if vertex in f]

    def _build_transversality_cache(self):
        """For each (A) candidate: coface-pair systems' solution lines."""
        cache: dict[tuple, list] = {}
        p_facets = {v: self._facet_cofaces(self.sub_p.complex, v)
                    for pair in self._dp_vertex_pairs("f") for v in pair}
        q_facets = {w: self._facet_cofaces(self.sub_q.complex, w)
                    for pair in self._dp_vertex_pairs("g") for w in pair}
        for (a, b) in self._dp_vertex_pairs("f"):
            for (c, d) in self._dp_vertex_pairs("g"):
                entries = []
                for fu in p_facets[a]:
                    for gu in q_facets[c]:
                        cof_u = tuple(sorted(tuple("L." + v for v in fu)
                                             + tuple("R." + w for w in gu)))
                        for fv in p_facets[b]:
                            for gv in q_facets[d]:
                                cof_v = tuple(sorted(tuple("L." + v for v in fv)
                                                     + tuple("R." + w for w in gv)))
                                sysr = self._solve_frame_pair(cof_u, cof_v, "T")
                                entries.append(sysr)
                cache[(("L." + a, "L." + b), ("R." + c, "R." + d))] = entries
        return cache

    # -- per-labeling verification -----------------------------------------

    def _xi_row(self, cell_u: Simplex, cell_v: Simplex,
                phi: SignLabeling, psi: SignLabeling) -> list[Fraction]:
        row = [self.xi_value(v, phi, psi) for v in cell_u]
        row += [-self.xi_value(v, phi, psi) for v in cell_v]
        return row

    def _impose_xi(self, sysr: _CachedSystem, phi, psi):
        """Strict-interior solutions of the full system; None if infinite."""
        if sysr.kind == "inconsistent":
            return []
        xi = self._xi_row(sysr.cell_u, sysr.cell_v, phi, psi)
        if sysr.kind == "unique":
            val = sum(c * w for c, w in zip(xi, sysr.base))
            if val != 0:
                return []
            return [tuple(sysr.base)] if sysr.base_strict else []
        # affine space: base + sum s_j basis_j; xi gives c0 + sum a_j s_j = 0
        c0 = sum(c * w for c, w in zip(xi, sysr.base))
        coeffs = [sum(c * w for c, w in zip(xi, vec)) for vec in sysr.basis]
        if all(a == 0 for a in coeffs):
            if c0 != 0:
                return []
            return None if sysr.space_strict else []
        k = next(i for i, a in enumerate(coeffs) if a != 0)
        # substitute s_k = -(c0 + sum_{j!=k} a_j s_j) / a_k
        others = [j for j in range(len(coeffs)) if j != k]
        new_base = [b - sysr.basis[k][i] * c0 / coeffs[k]
                    for i, b in enumerate(sysr.base)]
        new_basis = []
        for j in others:
            vec = sysr.basis[j]
            new_basis.append([vec[i] - sysr.basis[k][i] * coeffs[j] / coeffs[k]
                              for i in range(len(sysr.base))])
        if not new_basis:
            pt = tuple(new_base)
            return [pt] if all(w > 0 for w in pt) else []
        cons = [([vec[i] for vec in new_basis], new_base[i])
                for i in range(len(new_base))]
        if fm_feasible(cons, len(new_basis), strict=True):
            return None
        return []

    def predicted_points(self, phi: SignLabeling, psi: SignLabeling) -> set:
        """Sign-matching quadruples at join level one half."""
        out = set()
        half = Fraction(1, 2)
        for i, dpf in enumerate(self.dps_f.pairs):
            for j, dpg in enumerate(self.dps_g.pairs):
                if phi.on(dpf) != psi.on(dpg):
                    continue
                a, b = self._dp_vertex_pairs("f")[i]
                c, d = self._dp_vertex_pairs("g")[j]
                cu = tuple(sorted(("L." + a, "R." + c)))
                cv = tuple(sorted(("L." + b, "R." + d)))
                bu = (half, half)
                bv = (half, half)
                out.add((cu, bu, cv, bv))
        return out

    def verify(self, phi: SignLabeling, psi: SignLabeling) -> MapJoinReport:
        mismatches: list[str] = []
        found: set = set()
        cylinders_empty = True
        for sysr in self._systems:
            pts = self._impose_xi(sysr, phi, psi)
            if pts is None:
                mismatches.append(
                    f"infinite coincidence family on {sysr.cell_u} x {sysr.cell_v}")
                cylinders_empty = False
                continue
            for sol in pts:
                nu = len(sysr.cell_u)
                fp = FoundPoint(sysr.cell_u, tuple(sol[:nu]),
                                sysr.cell_v, tuple(sol[nu:]))
                found.add(fp.key())
                if sysr.family in ("B", "C", "D"):
                    cylinders_empty = False
                    mismatches.append(
                        f"family {sysr.family} point on {sysr.cell_u} x {sysr.cell_v}")

        predicted = self.predicted_points(phi, psi)
        if found != predicted:
            mismatches.append(
                f"found {len(found)} points, predicted {len(predicted)}")

        # every found point sits at level 0 = join parameter 1/2
        level = self.mp + self.nq
        all_half = True
        for cu, bu, cv, bv in found:
            for cell, bary in ((cu, bu), (cv, bv)):
                lv = sum(w * self._frame_coords[v][level]
                         for v, w in zip(cell, bary))
                if lv != 0:
                    all_half = False
                    mismatches.append(f"double point not at level 1/2 on {cell}")

        swap_closed = all((cv, bv, cu, bu) in found for cu, bu, cv, bv in found)
        if not swap_closed:
            mismatches.append("found set is not swap-closed")

        all_transverse = True
        for cu, bu, cv, bv in found:
            # transversality data is keyed by the (A)-family vertex pairs
            lu = [v for v in cu if v.startswith("L.")]
            ru = [v for v in cu if v.startswith("R.")]
            lv = [v for v in cv if v.startswith("L.")]
            rv = [v for v in cv if v.startswith("R.")]
            entries = None
            if len(lu) == len(ru) == len(lv) == len(rv) == 1:
                entries = self._transversality.get(
                    ((lu[0], lv[0]), (ru[0], rv[0])))
            if entries is None:
                all_transverse = False
                mismatches.append(f"no transversality data for {cu} x {cv}")
                continue
            for sysr in entries:
                if sysr.kind == "unique":
                    continue
                if sysr.kind == "inconsistent" or len(sysr.basis) != 1:
                    all_transverse = False
                    mismatches.append(
                        f"coface pair {sysr.cell_u} x {sysr.cell_v} degenerate")
                    continue
                xi = self._xi_row(sysr.cell_u, sysr.cell_v, phi, psi)
                slope = sum(c * w for c, w in zip(xi, sysr.basis[0]))
                if slope == 0:
                    all_transverse = False
                    mismatches.append(
                        f"non-transverse crossing at {sysr.cell_u} x {sysr.cell_v}")

        ok = (found == predicted and all_half and swap_closed
              and cylinders_empty is True and all_transverse)
        return MapJoinReport(ok, len(predicted), len(found), all_half,
                             all_transverse, cylinders_empty, swap_closed,
                             mismatches)


def verify_double_points(h: JoinMap, session: MapJoinSession | None = None) -> MapJoinReport:
    """Exact enumeration of the join map's double points vs the prediction.

    Builds a fresh session from the map's parts; pass a MapJoinSession
    when sweeping many labelings to reuse the cached exact systems.
    """
    p_ext, q_ext = h.p_part, h.q_part
    if p_ext.source_map is None or q_ext.source_map is None:
        raise ParameterError("join map parts lack their source records")
    if session is None:
        session = MapJoinSession(p_ext.source_map, p_ext.double_point_set,
                                 q_ext.source_map, q_ext.double_point_set)
    return session.verify(p_ext.labeling, q_ext.labeling)
