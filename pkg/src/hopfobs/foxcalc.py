"""Fox free differential calculus and Alexander polynomials.

The abelianized Fox matrix of a Wirtinger presentation presents the
relative Alexander module of the presentation 2-complex.  The link
polynomial convention used throughout: delete a generator column, take the
gcd of the maximal minors, and divide by (ab(g) - 1).  Under this
convention the polynomial is exactly the determinant of the square boundary
matrix of the collapsed relative complex, which is what the cover-order
identity in `hopfobs.homology` requires.  For knots there is no division.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd as int_gcd

from .algebra import LaurentPoly, laurent_divexact
from .errors import BoundExceeded, DegenerateDiagram, Inconsistent
from .linkdiagram import GroupPresentation, MeridianMap, PDCode, components, wirtinger

MINOR_DIMENSION_CAP = 30


def fox_derivative(word, gen: int, ab: MeridianMap) -> LaurentPoly:
    """Abelianized free derivative of a word with respect to a generator.

    Product rule: d(uv) = du + ab(u) dv, with d(g)/dg = 1 and
    d(g^-1)/dg = -ab(g)^-1.
    """
    nvars = ab.nvars
    result: dict = {}
    prefix = [0] * nvars  # exponent vector of ab(prefix)

    def bump(expvec, coeff):
        key = tuple(expvec)
        result[key] = result.get(key, 0) + coeff
        if not result[key]:
            del result[key]

    for g, e in word:
        exps = ab.exponents(g)
        if e == 1:
            if g == gen:
                bump(prefix, 1)
            for i, x in enumerate(exps):
                prefix[i] += x
        elif e == -1:
            for i, x in enumerate(exps):
                prefix[i] -= x
            if g == gen:
                bump(prefix, -1)
        else:
            raise ValueError("words must be sequences of (generator, +-1)")
    return LaurentPoly(nvars, result)


def word_abelianization(word, ab: MeridianMap) -> tuple:
    total = [0] * ab.nvars
    for g, e in word:
        for i, x in enumerate(ab.exponents(g)):
            total[i] += e * x
    return tuple(total)


@dataclass(frozen=True)
class FoxMatrix:
    """Relations x generators matrix of abelianized Fox derivatives."""

    entries: tuple  # tuple of tuples of LaurentPoly
    nvars: int

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def ncols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def row_identity_defect(self, ab: MeridianMap) -> list:
        """For each relation, sum_j (dr/dg_j)(ab(g_j) - 1); all must vanish."""
        out = []
        for row in self.entries:
            acc = LaurentPoly.zero(self.nvars)
            for j, entry in enumerate(row):
                xj = LaurentPoly.monomial(self.nvars, ab.exponents(j))
                acc = acc + entry * (xj - LaurentPoly.one(self.nvars))
            out.append(acc)
        return out


def alexander_matrix(pres: GroupPresentation, ab: MeridianMap) -> FoxMatrix:
    rows = []
    for rel in pres.relations:
        rows.append(tuple(fox_derivative(rel, g, ab)
                          for g in range(pres.generator_count)))
    return FoxMatrix(entries=tuple(rows), nvars=ab.nvars)


# ---------------------------------------------------------------------------
# Exact linear algebra over the Laurent ring
# ---------------------------------------------------------------------------

def laurent_det(mat) -> LaurentPoly:
    """Determinant of a square matrix of LaurentPoly via fraction-free
    Bareiss elimination (all divisions exact)."""
    n = len(mat)
    if n == 0:
        raise ValueError("empty matrix has no determinant here")
    nvars = mat[0][0].nvars
    a = [list(row) for row in mat]
    sign = 1
    prev = LaurentPoly.one(nvars)
    for k in range(n - 1):
        if a[k][k].is_zero:
            pivot_row = next((i for i in range(k + 1, n) if not a[i][k].is_zero), None)
            if pivot_row is None:
                return LaurentPoly.zero(nvars)
            a[k], a[pivot_row] = a[pivot_row], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[k][k] * a[i][j] - a[i][k] * a[k][j]
                a[i][j] = laurent_divexact(num, prev)
            a[i][k] = LaurentPoly.zero(nvars)
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return det if sign > 0 else -det


def _content_int(p: LaurentPoly) -> int:
    c = 0
    for v in p.terms.values():
        c = int_gcd(c, abs(v))
    return c


def _deg(p: LaurentPoly, var: int) -> int:
    return -1 if p.is_zero else p.degree_in(var)


def _coeff_in(p: LaurentPoly, var: int, d: int) -> LaurentPoly:
    """Coefficient of var^d, kept in the same variable count with the var
    exponent zeroed."""
    terms = {}
    for exps, c in p.terms.items():
        if exps[var] == d:
            e = list(exps)
            e[var] = 0
            terms[tuple(e)] = c
    return LaurentPoly(p.nvars, terms)


def _shift_nonneg(p: LaurentPoly) -> LaurentPoly:
    shifts = tuple(-min(p.min_exponent_in(v), 0) for v in range(p.nvars))
    if not any(shifts):
        return p
    return p * LaurentPoly.monomial(p.nvars, shifts)


def _mul_var_pow(p: LaurentPoly, var: int, d: int) -> LaurentPoly:
    e = [0] * p.nvars
    e[var] = d
    return p * LaurentPoly.monomial(p.nvars, tuple(e))


def _content_in(p: LaurentPoly, var: int):
    """(content, primitive part) of p viewed as a polynomial in var."""
    degs = sorted({e[var] for e in p.terms})
    coeffs = [(d, _coeff_in(p, var, d)) for d in degs]
    cont = LaurentPoly.zero(p.nvars)
    for _, c in coeffs:
        cont = _poly_gcd(cont, c)
        if cont.normalized() == LaurentPoly.one(p.nvars):
            break
    if cont.is_zero:
        return cont, p
    prim = laurent_divexact(p, cont)
    return cont, prim


def _pseudo_rem(f: LaurentPoly, g: LaurentPoly, var: int) -> LaurentPoly:
    """Pseudo-remainder of f by g in the variable var."""
    df, dg = _deg(f, var), _deg(g, var)
    lc_g = _coeff_in(g, var, dg)
    r = f
    while not r.is_zero and _deg(r, var) >= dg:
        dr = _deg(r, var)
        lc_r = _coeff_in(r, var, dr)
        r = lc_g * r - _mul_var_pow(lc_r * g, var, dr - dg)
    return r


def _poly_gcd(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """Gcd in Z[x1..xn] of Laurent polynomials (defined up to units)."""
    if p.is_zero:
        return q
    if q.is_zero:
        return p
    p = _shift_nonneg(p)
    q = _shift_nonneg(q)
    nvars = p.nvars
    # constants
    if all(_deg(p, v) == 0 for v in range(nvars)) and \
       all(_deg(q, v) == 0 for v in range(nvars)):
        return LaurentPoly.constant(nvars, int_gcd(_content_int(p), _content_int(q)))
    # main variable: smallest positive degree among variables present
    cand = [(max(_deg(p, v), _deg(q, v)), v) for v in range(nvars)
            if _deg(p, v) > 0 or _deg(q, v) > 0]
    _, var = min(cand)
    cont_p, prim_p = _content_in(p, var)
    cont_q, prim_q = _content_in(q, var)
    cont = _poly_gcd(cont_p, cont_q)
    a, b = prim_p, prim_q
    if _deg(a, var) < _deg(b, var):
        a, b = b, a
    while not b.is_zero:
        r = _pseudo_rem(a, b, var)
        if r.is_zero:
            a, b = b, r
            break
        _, r = _content_in(r, var)
        a, b = b, r
    _, a = _content_in(a, var)
    return (cont * a).normalized()


def laurent_gcd(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """Gcd up to units, returned in canonical normal form."""
    return _poly_gcd(p, q).normalized()


# ---------------------------------------------------------------------------
# Alexander polynomials
# ---------------------------------------------------------------------------

def _minor_gcd(fox: FoxMatrix, delete_col: int) -> LaurentPoly:
    n = fox.nrows
    if n - 1 > MINOR_DIMENSION_CAP:
        raise BoundExceeded(
            f"minor dimension {n - 1} exceeds cap {MINOR_DIMENSION_CAP}")
    cols = [j for j in range(fox.ncols) if j != delete_col]
    g = LaurentPoly.zero(fox.nvars)
    one = LaurentPoly.one(fox.nvars)
    for skip_row in range(n):
        sub = [[fox.entries[i][j] for j in cols]
               for i in range(n) if i != skip_row]
        if not sub:
            g = laurent_gcd(g, one)
        else:
            g = laurent_gcd(g, laurent_det(sub))
        if g == one:
            break
    return g


def multivariable_alexander(pd: PDCode, delete_col: int | None = None) -> LaurentPoly:
    """Two-variable Alexander polynomial of a 2-component diagram, in
    canonical normal form.  Returns the zero polynomial for degenerate
    (split-type) diagrams."""
    _, ncomp = components(pd)
    if ncomp != 2:
        raise ValueError(f"need a 2-component diagram, got {ncomp} components")
    pres, ab = wirtinger(pd)
    fox = alexander_matrix(pres, ab)
    j = 0 if delete_col is None else delete_col
    g = _minor_gcd(fox, j)
    if g.is_zero:
        return g
    xj = LaurentPoly.monomial(2, ab.exponents(j))
    try:
        delta = laurent_divexact(g, xj - LaurentPoly.one(2))
    except ValueError:
        raise Inconsistent("minor gcd not divisible by (ab(g) - 1); "
                           "this falsifies the collapsed-complex identity")
    return delta.normalized()


def knot_alexander(pd: PDCode, delete_col: int | None = None) -> LaurentPoly:
    """One-variable Alexander polynomial of a knot diagram (canonical form,
    with |Delta(1)| = 1 verified)."""
    _, ncomp = components(pd)
    if ncomp != 1:
        raise ValueError(f"need a 1-component diagram, got {ncomp} components")
    pres, ab = wirtinger(pd)
    if pres.generator_count == 1 and not pres.relations:
        return LaurentPoly.one(1)
    fox = alexander_matrix(pres, ab)
    j = 0 if delete_col is None else delete_col
    g = _minor_gcd(fox, j)
    if g.is_zero:
        raise DegenerateDiagram("all maximal minors vanish for a knot diagram")
    delta = g.normalized()
    if abs(delta.augmentation()) != 1:
        raise Inconsistent(f"knot polynomial has |Delta(1)| = "
                           f"{abs(delta.augmentation())} != 1")
    return delta
