"""Finite abstract simplicial complexes with canonical vertex ordering.

Vertices are opaque strings ordered lexicographically.  A simplex is a
strictly sorted tuple of vertex ids; a complex stores its full face
lattice (downward closed).  All builders are deterministic: the same
call produces byte-identical serializations across runs.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import ParameterError

Simplex = tuple[str, ...]


def _close_downward(simplices: Iterable[Simplex]) -> frozenset[Simplex]:
    closed: set[Simplex] = set()
    stack = [tuple(s) for s in simplices]
    while stack:
        s = stack.pop()
        if s in closed or not s:
            continue
        closed.add(s)
        if len(s) > 1:
            for i in range(len(s)):
                f = s[:i] + s[i + 1:]
                if f not in closed:
                    stack.append(f)
    return frozenset(closed)


def simplex_key(s: Simplex) -> tuple[int, Simplex]:
    return (len(s), s)


class Complex:
    """Immutable abstract simplicial complex.

    Instances are canonical: vertices sorted, each simplex strictly
    sorted, the simplex set downward closed.  Use ``from_simplices`` /
    ``from_facets`` to build with closure, or ``raw`` to bypass checks
    (for feeding ``validate`` with broken data).
    """

    __slots__ = ("name", "vertices", "simplices", "_by_dim", "_members")

    def __init__(self, name: str, vertices: Sequence[str], simplices: Iterable[Simplex],
                 _unchecked: bool = False):
        simps = tuple(sorted((tuple(s) for s in simplices), key=simplex_key))
        self.name = name
        self.vertices = tuple(vertices)
        self.simplices = simps
        self._members = frozenset(simps)
        by_dim: dict[int, list[Simplex]] = {}
        for s in simps:
            by_dim.setdefault(len(s) - 1, []).append(s)
        self._by_dim = {d: tuple(v) for d, v in by_dim.items()}

    # -- construction ------------------------------------------------

    @classmethod
    def from_simplices(cls, simplices: Iterable[Sequence[str]], name: str = "") -> "Complex":
        sorted_simps = [tuple(sorted(set(s))) for s in simplices]
        closed = _close_downward(sorted_simps)
        vertices = sorted({v for s in closed for v in s})
        return cls(name, vertices, closed)

    @classmethod
    def from_facets(cls, facets: Iterable[Sequence[str]], name: str = "") -> "Complex":
        return cls.from_simplices(facets, name=name)

    @classmethod
    def raw(cls, name: str, vertices: Sequence[str], simplices: Iterable[Simplex]) -> "Complex":
        """Build without canonicalization; only for validate() tests."""
        obj = cls.__new__(cls)
        simps = tuple(tuple(s) for s in simplices)
        obj.name = name
        obj.vertices = tuple(vertices)
        obj.simplices = simps
        obj._members = frozenset(simps)
        by_dim: dict[int, list[Simplex]] = {}
        for s in simps:
            by_dim.setdefault(len(s) - 1, []).append(s)
        obj._by_dim = {d: tuple(v) for d, v in by_dim.items()}
        return obj

    # -- queries -----------------------------------------------------

    @property
    def dim(self) -> int:
        return max(self._by_dim) if self._by_dim else -1

    def simplices_of_dim(self, d: int) -> tuple[Simplex, ...]:
        return self._by_dim.get(d, ())

    def facets(self) -> tuple[Simplex, ...]:
        """Inclusion-maximal simplices."""
        nonmax: set[Simplex] = set()
        for d in range(1, self.dim + 1):
            for s in self.simplices_of_dim(d):
                for i in range(len(s)):
                    nonmax.add(s[:i] + s[i + 1:])
        return tuple(s for s in self.simplices if s not in nonmax)

    def top_facets(self) -> tuple[Simplex, ...]:
        """Simplices of maximal dimension (pure part)."""
        return self.simplices_of_dim(self.dim)

    def has_simplex(self, s: Sequence[str]) -> bool:
        return tuple(sorted(s)) in self._members

    def cofacets(self, s: Simplex) -> list[Simplex]:
        """Simplices of dimension dim(s)+1 containing s."""
        sset = set(s)
        return [t for t in self.simplices_of_dim(len(s)) if sset.issubset(t)]

    def link(self, v: str) -> list[Simplex]:
        return [tuple(x for x in s if x != v)
                for s in self.simplices if v in s and len(s) > 1]

    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(self.simplices_of_dim(d)) for d in range(self.dim + 1))

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * n for d, n in enumerate(self.f_vector()))

    def reduced_euler(self) -> int:
        return self.euler_characteristic() - 1

    def rename(self, prefix: str) -> "Complex":
        return Complex(self.name,
                       [prefix + v for v in self.vertices],
                       [tuple(sorted(prefix + x for x in s)) for s in self.simplices])

    def with_name(self, name: str) -> "Complex":
        return Complex(name, self.vertices, self.simplices)

    def canonical_signature(self) -> tuple:
        """Isomorphism-invariant-under-order-relabeling signature.

        Relabels vertices by their canonical order index and returns the
        sorted simplex set; equal signatures mean the complexes agree up
        to the canonical order-preserving renaming.
        """
        idx = {v: i for i, v in enumerate(sorted(self.vertices))}
        return tuple(sorted(tuple(sorted(idx[v] for v in s)) for s in self.simplices))

    def __eq__(self, other) -> bool:
        return isinstance(other, Complex) and self.simplices == other.simplices

    def __hash__(self) -> int:
        return hash(self.simplices)

    def __repr__(self) -> str:
        return f"Complex({self.name or '?'}, f={self.f_vector()})"

    # -- serialization ----------------------------------------------

    def to_json_obj(self) -> dict:
        return {"name": self.name,
                "vertices": list(self.vertices),
                "facets": [list(s) for s in self.facets()]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "Complex":
        if not isinstance(obj, Mapping) or "facets" not in obj:
            raise ParameterError("complex JSON needs a 'facets' field")
        c = cls.from_facets(obj["facets"], name=str(obj.get("name", "")))
        extra = set(obj.get("vertices", [])) - set(c.vertices)
        if extra:
            # isolated vertices are legal simplices
            c = cls.from_simplices(list(c.simplices) + [(v,) for v in sorted(extra)],
                                   name=c.name)
        return c

    @classmethod
    def from_json(cls, text: str) -> "Complex":
        return cls.from_json_obj(json.loads(text))


@dataclass(frozen=True)
class SimplicialMap:
    """Vertex map inducing a simplexwise map of complexes."""

    source: Complex
    target: Complex
    vertex_assignment: Mapping[str, str]

    def __post_init__(self):
        missing = [v for v in self.source.vertices if v not in self.vertex_assignment]
        if missing:
            raise ParameterError(f"vertex assignment missing {missing[:3]}")
        for s in self.source.simplices:
            img = tuple(sorted({self.vertex_assignment[v] for v in s}))
            if not self.target.has_simplex(img):
                raise ParameterError(
                    f"image {img} of simplex {s} is not a simplex of the target")

    def image_simplex(self, s: Simplex) -> Simplex:
        return tuple(sorted({self.vertex_assignment[v] for v in s}))

    def preimage_count(self, t: Simplex) -> int:
        t = tuple(sorted(t))
        return sum(1 for s in self.source.simplices_of_dim(len(t) - 1)
                   if self.image_simplex(s) == t)


# -- validation -------------------------------------------------------

def validate(x: Complex) -> list[str]:
    """Return one diagnostic per invariant violation (empty iff valid)."""
    diags: list[str] = []
    seen: set[Simplex] = set()
    for s in x.simplices:
        if list(s) != sorted(set(s)):
            diags.append(f"simplex {s} is not strictly sorted")
            continue
        if s in seen:
            diags.append(f"duplicate simplex {s}")
        seen.add(s)
        for v in s:
            if v not in x.vertices:
                diags.append(f"simplex {s} uses unknown vertex {v!r}")
        if len(s) > 1:
            for i in range(len(s)):
                f = s[:i] + s[i + 1:]
                if f not in x._members:
                    diags.append(f"closure violation: face {f} of {s} is missing")
    dims = [len(s) - 1 for s in x.simplices]
    if dims and max(dims) != x.dim:
        diags.append(f"dim mismatch: stored {x.dim}, actual {max(dims)}")
    return diags


# -- constructions -----------------------------------------------------

def join(a: Complex, b: Complex, name: str = "") -> Complex:
    """Simplicial join; factors are renamed with 'L.'/'R.' prefixes."""
    left, right = a.rename("L."), b.rename("R.")
    simplices: list[Simplex] = []
    left_parts = list(left.simplices) + [()]
    right_parts = list(right.simplices) + [()]
    for s in left_parts:
        for t in right_parts:
            if s or t:
                simplices.append(tuple(sorted(s + t)))
    return Complex.from_simplices(simplices,
                                  name=name or f"({a.name})*({b.name})")


def product_vertex(u: str, v: str) -> str:
    return f"L.{u}*R.{v}"


def product(a: Complex, b: Complex, name: str = "") -> Complex:
    """Staircase (shuffle) triangulation of |a| x |b|.

    Facets come from facet pairs: for each pair the monotone staircase
    paths through the grid of canonically ordered vertices, giving
    C(p+q, p) maximal simplices per (p, q) facet pair.
    """
    facets: list[Simplex] = []
    for s in a.facets():
        for t in b.facets():
            p, q = len(s) - 1, len(t) - 1
            for pattern in itertools.combinations(range(p + q), p):
                i = j = 0
                path = [product_vertex(s[0], t[0])]
                for step in range(p + q):
                    if step in pattern:
                        i += 1
                    else:
                        j += 1
                    path.append(product_vertex(s[i], t[j]))
                facets.append(tuple(sorted(path)))
    return Complex.from_facets(facets, name=name or f"({a.name})x({b.name})")


def cone_suspend(x: Complex, mode: str, k: int = 1) -> Complex:
    """Iterated cone (join with a point) or suspension (join with S^0)."""
    if k < 1:
        raise ParameterError("k must be >= 1")
    if mode not in ("cone", "suspension"):
        raise ParameterError(f"mode must be 'cone' or 'suspension', got {mode!r}")
    out = x
    for i in range(k):
        if mode == "cone":
            attach = Complex.from_simplices([("pt",)], name="pt")
        else:
            attach = Complex.from_simplices([("s0",), ("s1",)], name="S0")
        out = join(out, attach,
                   name=f"{mode}^{i + 1}({x.name})")
    return out


# -- named families ----------------------------------------------------

def _vnames(n: int, prefix: str = "v") -> list[str]:
    return [f"{prefix}{i}" for i in range(n)]


def skeleton_of_simplex(d: int, k: int) -> Complex:
    """k-skeleton of the d-simplex on vertices v0..vd."""
    if not 0 <= k <= d:
        raise ParameterError(f"need 0 <= k <= d, got k={k}, d={d}")
    verts = _vnames(d + 1)
    facets = itertools.combinations(verts, k + 1)
    return Complex.from_facets(facets, name=f"skel({d},{k})")


def three_point_join(r: int) -> Complex:
    """Join of r copies of the 3-point set."""
    if r < 1:
        raise ParameterError("need r >= 1")
    out = Complex.from_simplices([(f"a{i}",) for i in range(3)], name="3pt")
    for j in range(1, r):
        nxt = Complex.from_simplices([(f"a{i}",) for i in range(3)], name="3pt")
        out = join(out, nxt)
    return out.with_name(f"T{r}")


def flores_join(ks: Sequence[int]) -> Complex:
    """Join of the k_i-skeleta of (2k_i+2)-simplexes."""
    if not ks or any(k < 0 for k in ks):
        raise ParameterError("need a nonempty list of k_i >= 0")
    out = skeleton_of_simplex(2 * ks[0] + 2, ks[0])
    for k in ks[1:]:
        out = join(out, skeleton_of_simplex(2 * k + 2, k))
    return out.with_name(f"flores({','.join(map(str, ks))})")


def triod() -> Complex:
    return Complex.from_facets([("c", "l0"), ("c", "l1"), ("c", "l2")], name="triod")


def complete_graph(n: int) -> Complex:
    if n < 1:
        raise ParameterError("need n >= 1")
    return Complex.from_facets(itertools.combinations(_vnames(n), 2) if n > 1
                               else [("v0",)], name=f"K{n}")


def cycle(n: int) -> Complex:
    if n < 3:
        raise ParameterError("need n >= 3")
    verts = _vnames(n)
    edges = [tuple(sorted((verts[i], verts[(i + 1) % n]))) for i in range(n)]
    return Complex.from_facets(edges, name=f"C{n}")


def boundary_sphere(d: int) -> Complex:
    """Boundary of the d-simplex, a PL (d-1)-sphere."""
    if d < 1:
        raise ParameterError("need d >= 1")
    return skeleton_of_simplex(d, d - 1).with_name(f"bdry(D{d})")


RP2_SIX_VERTEX_FACETS = [
    ("v0", "v1", "v4"), ("v0", "v1", "v5"), ("v0", "v2", "v3"),
    ("v0", "v2", "v4"), ("v0", "v3", "v5"), ("v1", "v2", "v3"),
    ("v1", "v2", "v5"), ("v1", "v3", "v4"), ("v2", "v4", "v5"),
    ("v3", "v4", "v5"),
]


def rp2_six_vertex() -> Complex:
    """The 6-vertex triangulation of the projective plane."""
    return Complex.from_facets(RP2_SIX_VERTEX_FACETS, name="RP2_6")


_FAMILIES = {
    "skeleton_of_simplex": (skeleton_of_simplex, 2),
    "three_point_join": (three_point_join, 1),
    "flores_join": (None, None),  # variadic
    "triod": (triod, 0),
    "complete_graph": (complete_graph, 1),
    "cycle": (cycle, 1),
    "boundary_sphere": (boundary_sphere, 1),
    "rp2_six_vertex": (rp2_six_vertex, 0),
}


def build_named(family: str, params: Sequence[int] = ()) -> Complex:
    """Dispatch to a named family builder with arity checking."""
    if family not in _FAMILIES:
        raise ParameterError(
            f"unknown family {family!r}; choose from {sorted(_FAMILIES)}")
    if family == "flores_join":
        return flores_join(list(params))
    fn, arity = _FAMILIES[family]
    if len(params) != arity:
        raise ParameterError(f"{family} takes {arity} parameter(s), got {len(params)}")
    return fn(*params)


# -- subdivision --------------------------------------------------------

def stellar_subdivide(x: Complex, simplex: Sequence[str], new_vertex: str) -> Complex:
    """Star the given simplex at a new interior vertex."""
    s = tuple(sorted(simplex))
    if not x.has_simplex(s):
        raise ParameterError(f"{s} is not a simplex of {x.name}")
    if new_vertex in x.vertices:
        raise ParameterError(f"vertex name {new_vertex!r} already in use")
    sset = set(s)
    keep = [t for t in x.simplices if not sset.issubset(t)]
    added: list[Simplex] = [(new_vertex,)]
    for t in x.simplices:
        if sset.issubset(t):
            rest = tuple(v for v in t if v not in sset)
            for i in range(len(s)):
                face = s[:i] + s[i + 1:]
                added.append(tuple(sorted(face + rest + (new_vertex,))))
    return Complex.from_simplices(keep + added, name=x.name)


def barycentric_subdivision(x: Complex, name: str = "") -> Complex:
    """Full barycentric subdivision; barycenter of s is '+'.join(s)."""
    bary = {s: "+".join(s) for s in x.simplices}
    facets: list[Simplex] = []

    def chains(s: Simplex, chain: list[str]):
        chain = chain + [bary[s]]
        if len(s) == 1:
            facets.append(tuple(sorted(chain)))
            return
        for i in range(len(s)):
            chains(s[:i] + s[i + 1:], chain)

    for f in x.facets():
        chains(f, [])
    return Complex.from_facets(facets, name=name or f"sd({x.name})")
