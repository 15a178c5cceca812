"""Degree-2 regluing of a disk inside a 2-simplex.

The chosen facet is subdivided in two stellar stages so that the star
of the first barycenter is a hexagonal disk D with its boundary in the
facet's interior (the original boundary edges survive).  The open star
is removed and a fresh disk with a 12-gon boundary is glued back along
the cyclic double cover of the hexagon.  The new disk is a 12-gon ring
plus an annular collar plus a coned inner 12-gon, which keeps the
quotient simplicial: identified boundary vertices are never adjacent.

Euler characteristic is preserved, and on a closed surface the seam
edges acquire exactly three cofacets (two sheets of the new disk plus
one exterior facet).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .complexes import Complex, Simplex, SimplicialMap, cycle, stellar_subdivide
from .errors import ConstructionError, ParameterError


def double_cover_cycle(length: int) -> SimplicialMap:
    """Simplicial double cover of the (length/2)-cycle by the length-cycle."""
    if length % 2 != 0:
        raise ParameterError(f"cycle length must be even, got {length}")
    if length < 6:
        raise ParameterError(f"cycle length must be >= 6, got {length}")
    half = length // 2
    src = cycle(length)
    dst = cycle(half)
    assignment = {f"v{i}": f"v{i % half}" for i in range(length)}
    return SimplicialMap(src, dst, assignment)


@dataclass
class SurgeryResult:
    """Reglued complex with the disk/exterior split and marked simplexes.

    marked maps 'p' to a facet of the subdivided original facet outside
    the disk, 'q' to a facet vertex-disjoint from the surgered one, and
    'r' to a facet in the interior of the reglued disk.
    """

    complex: Complex
    reglued_disk: tuple[Simplex, ...]
    exterior: tuple[Simplex, ...]
    marked: dict[str, Simplex]
    seam: tuple[str, ...]              # hexagon vertex cycle downstairs
    seam_cover: SimplicialMap          # 12-gon -> hexagon, degree 2

    def seam_edges(self) -> list[Simplex]:
        n = len(self.seam)
        return [tuple(sorted((self.seam[i], self.seam[(i + 1) % n])))
                for i in range(n)]


def _fresh(prefix: str, taken: set[str]) -> str:
    name = prefix
    while name in taken:
        name = "_" + name
    return name


def _hexagon_cycle(link_edges: list[Simplex], start_hint: str) -> list[str]:
    """Order the link-of-barycenter edges into a deterministic 6-cycle."""
    adj: dict[str, list[str]] = {}
    for a, b in link_edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    if sorted(len(v) for v in adj.values()) != [2] * 6:
        raise ConstructionError("barycenter link is not a hexagon")
    start = min(adj)
    walk = [start, min(adj[start])]
    while len(walk) < 6:
        prev, cur = walk[-2], walk[-1]
        nxt = [v for v in adj[cur] if v != prev]
        walk.append(nxt[0])
    return walk


def reglue_degree2(k: Complex, facet: Sequence[str]) -> SurgeryResult:
    """Remove a hexagonal disk inside the facet; reglue along a double cover."""
    f = tuple(sorted(facet))
    if k.dim != 2:
        raise ParameterError(f"input must be a 2-complex, got dim {k.dim}")
    if len(f) != 3 or not k.has_simplex(f):
        raise ParameterError(f"{f} is not a 2-simplex of {k.name}")
    fset = set(f)
    q_candidates = [s for s in k.simplices_of_dim(2) if not set(s) & fset]
    if not q_candidates:
        raise ConstructionError(
            "no facet vertex-disjoint from the chosen one (needed for the mark q)")
    q_mark = q_candidates[0]

    taken = set(k.vertices)
    b_names = [_fresh(f"srg.b{i}", taken) for i in range(4)]
    for n in b_names:
        taken.add(n)
    w_names = [_fresh(f"srg.w{i:02d}", taken) for i in range(12)]
    for n in w_names:
        taken.add(n)
    apex = _fresh("srg.apex", taken)

    # two-stage subdivision: star the facet, then each of the three pieces
    sub = stellar_subdivide(k, f, b_names[0])
    stage1 = sorted(s for s in sub.simplices_of_dim(2) if b_names[0] in s)
    if len(stage1) != 3:
        raise ConstructionError("stage-1 subdivision did not yield 3 triangles")
    for tri, name in zip(stage1, b_names[1:]):
        sub = stellar_subdivide(sub, tri, name)

    # hexagonal disk D = closed star of b0; its boundary is link(b0)
    b0 = b_names[0]
    star = [s for s in sub.simplices_of_dim(2) if b0 in s]
    if len(star) != 6:
        raise ConstructionError("barycenter star is not hexagonal")
    link_edges = [tuple(v for v in s if v != b0) for s in star]
    hexagon = _hexagon_cycle(link_edges, b0)

    # remove the open star of b0
    remaining = [s for s in sub.simplices if b0 not in s]

    # new disk: outer ring onto the hexagon (the 2:1 identification),
    # annular collar, and a coned inner 12-gon
    def h(i: int) -> str:
        return hexagon[i % 6]

    new_facets: list[Simplex] = []
    for i in range(12):
        w_i, w_n = w_names[i], w_names[(i + 1) % 12]
        new_facets.append(tuple(sorted((h(i), h(i + 1), w_i))))
        new_facets.append(tuple(sorted((w_i, w_n, h(i + 1)))))
    for i in range(12):
        new_facets.append(tuple(sorted((w_names[i], w_names[(i + 1) % 12], apex))))

    disk_set = set(new_facets)
    if len(disk_set) != 36:
        raise ConstructionError("seam identification produced duplicate simplices")

    result = Complex.from_simplices(
        remaining + list(new_facets), name=f"reglue({k.name})")

    exterior = tuple(s for s in result.simplices_of_dim(2) if s not in disk_set)
    p_candidates = sorted(s for s in exterior
                          if set(s) & {b_names[1], b_names[2], b_names[3]})
    p_mark = p_candidates[0]
    r_mark = tuple(sorted((w_names[0], w_names[1], apex)))

    # the seam double cover as a simplicial map, 12-gon onto the hexagon
    cover = double_cover_cycle(12)
    hex_complex = Complex.from_facets(
        [tuple(sorted((h(i), h(i + 1)))) for i in range(6)], name="seam")
    twelve = cycle(12)
    seam_cover = SimplicialMap(twelve, hex_complex,
                               {f"v{i}": h(i) for i in range(12)})

    return SurgeryResult(
        complex=result,
        reglued_disk=tuple(sorted(disk_set)),
        exterior=exterior,
        marked={"p": p_mark, "q": q_mark, "r": r_mark},
        seam=tuple(hexagon),
        seam_cover=seam_cover,
    )
