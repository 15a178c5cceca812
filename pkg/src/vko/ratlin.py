"""Small dense exact linear algebra over the rationals.

Everything here is Fraction-exact; no floating point.  Used by the
geometric predicates (simplex intersection systems) and by the map-join
double-point verifier (solution-space parametrization plus strict
feasibility of barycentric positivity).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Row = list[Fraction]


def _as_fraction_matrix(a: Sequence[Sequence]) -> list[Row]:
    return [[Fraction(x) for x in row] for row in a]


def rational_det(a: Sequence[Sequence]) -> Fraction:
    """Determinant by fraction Gaussian elimination with partial pivoting."""
    m = _as_fraction_matrix(a)
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = Fraction(1) / m[col][col]
        for r in range(col + 1, n):
            if m[r][col] != 0:
                factor = m[r][col] * inv
                m[r] = [x - factor * y for x, y in zip(m[r], m[col])]
    return det


def solve_affine_system(a: Sequence[Sequence], b: Sequence):
    """Solve A x = b exactly.

    Returns a tuple (kind, particular, null_basis):
      kind == "unique":       particular is the solution, null_basis == []
      kind == "affine":       solutions are particular + span(null_basis)
      kind == "inconsistent": particular is None
    """
    m = _as_fraction_matrix(a)
    rhs = [Fraction(x) for x in b]
    nrows, ncols = len(m), len(m[0]) if m else 0
    aug = [m[r] + [rhs[r]] for r in range(nrows)]

    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        piv = next((r for r in range(row, nrows) if aug[r][col] != 0), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = Fraction(1) / aug[row][col]
        aug[row] = [x * inv for x in aug[row]]
        for r in range(nrows):
            if r != row and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[row])]
        pivots.append(col)
        row += 1
        if row == nrows:
            break
    for r in range(row, nrows):
        if aug[r][ncols] != 0:
            return ("inconsistent", None, [])

    particular = [Fraction(0)] * ncols
    for r, col in enumerate(pivots):
        particular[col] = aug[r][ncols]
    free = [c for c in range(ncols) if c not in pivots]
    basis: list[Row] = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for r, col in enumerate(pivots):
            vec[col] = -aug[r][fc]
        basis.append(vec)
    kind = "unique" if not free else "affine"
    return (kind, particular, basis)


def fm_feasible(constraints: list[tuple[Row, Fraction]], nvars: int,
                strict: bool = True) -> bool:
    """Fourier-Motzkin feasibility of {s : a.s + c > 0 for all (a, c)}.

    With strict=False the inequalities are a.s + c >= 0.  Exact; intended
    for the tiny systems (nvars <= 3 or so) arising from coincidence
    solution spaces.
    """
    cons = [([Fraction(x) for x in a], Fraction(c)) for a, c in constraints]
    for var in range(nvars):
        pos, neg, rest = [], [], []
        for a, c in cons:
            if a[var] > 0:
                pos.append((a, c))
            elif a[var] < 0:
                neg.append((a, c))
            else:
                rest.append((a, c))
        new = rest
        for ap, cp in pos:
            for an, cn in neg:
                # eliminate s_var between ap.s + cp > 0 and an.s + cn > 0
                coef_p, coef_n = ap[var], -an[var]
                a = [coef_n * x + coef_p * y for x, y in zip(ap, an)]
                a[var] = Fraction(0)
                new.append((a, coef_n * cp + coef_p * cn))
        cons = new
    cmp = (lambda v: v > 0) if strict else (lambda v: v >= 0)
    return all(cmp(c) for _, c in cons)
