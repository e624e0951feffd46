"""Levine-Tristram signatures and torus-averaged signatures.

Sign convention: sigma(K, omega) is the signature of
(1 - omega) V + (1 - conj(omega)) V^T for a Seifert matrix V.  The corpus
trefoil matrix [[1,-1],[0,1]] gives +2 at the primitive third roots of
unity under this convention; the mirror matrix gives -2.

The torus average sigma(P) of a Hermitian matrix P over the complex group
ring of Z^r is integrated on a plain uniform product grid.  Grid points
where |det| falls below the singularity tolerance are skipped and counted,
never silently perturbed.
"""

from __future__ import annotations

import cmath
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import HermitianViolation, InvalidSeifertMatrix, SingularAtOmega

SINGULARITY_TOL = 1e-9
MIN_RESOLUTION = 64
TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class SeifertMatrix:
    """Square integer matrix V with det(V - V^T) = +-1.

    Zero matrices of any size are accepted as unknot padding (their
    rows/columns are dropped before signatures are computed).
    """

    entries: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.entries)
        object.__setattr__(self, "entries", rows)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise InvalidSeifertMatrix("Seifert matrix must be square")
        if n and any(any(row) for row in rows):
            d = _int_det([[rows[i][j] - rows[j][i] for j in range(n)]
                          for i in range(n)])
            if abs(d) != 1:
                raise InvalidSeifertMatrix(
                    f"det(V - V^T) = {d}, expected +-1")

    @property
    def size(self) -> int:
        return len(self.entries)

    def reduced(self) -> np.ndarray:
        """Matrix with zero-padding rows and columns removed."""
        n = self.size
        keep = [i for i in range(n)
                if any(self.entries[i][j] or self.entries[j][i] for j in range(n))]
        return np.array([[self.entries[i][j] for j in keep] for i in keep],
                        dtype=float)

    def mirror(self) -> "SeifertMatrix":
        n = self.size
        return SeifertMatrix(tuple(tuple(-self.entries[j][i] for j in range(n))
                                   for i in range(n)))

    def direct_sum(self, other: "SeifertMatrix") -> "SeifertMatrix":
        n, m = self.size, other.size
        rows = []
        for i in range(n):
            rows.append(tuple(self.entries[i]) + (0,) * m)
        for i in range(m):
            rows.append((0,) * n + tuple(other.entries[i]))
        return SeifertMatrix(tuple(rows))


def _int_det(mat) -> int:
    n = len(mat)
    if n == 0:
        return 1
    a = [list(row) for row in mat]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if a[i][k]), None)
            if piv is None:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def levine_tristram(V: SeifertMatrix, omega: complex, *,
                    tol: float = SINGULARITY_TOL) -> int:
    """Signature of (1-omega) V + (1-conj omega) V^T at |omega| = 1.

    By convention sigma = 0 at omega = 1.  Raises SingularAtOmega (carrying
    the signature with near-zero eigenvalues discarded) when an eigenvalue
    lies within ``tol`` of zero.
    """
    omega = complex(omega)
    if abs(abs(omega) - 1.0) > 1e-9:
        raise ValueError(f"omega must lie on the unit circle, |omega| = {abs(omega)}")
    if abs(omega - 1.0) < 1e-12:
        return 0
    v = V.reduced()
    if v.size == 0:
        return 0
    m = (1 - omega) * v + (1 - omega.conjugate()) * v.T
    eigs = np.linalg.eigvalsh(m)
    flagged = int(np.sum(eigs > tol) - np.sum(eigs < -tol))
    if np.any(np.abs(eigs) < tol):
        raise SingularAtOmega(
            f"eigenvalue within {tol} of zero at omega = {omega}",
            flagged_value=flagged)
    return flagged


def levine_tristram_at_angle(V: SeifertMatrix, turn: Fraction, **kw) -> int:
    """Levine-Tristram signature at omega = exp(2*pi*i*turn)."""
    turn = Fraction(turn) % 1
    if turn == 0:
        return 0
    return levine_tristram(V, cmath.exp(2j * cmath.pi * float(turn)), **kw)


def integral_signature(V: SeifertMatrix, resolution: int) -> float:
    """Average of sigma(K, omega) over a uniform grid on the circle,
    skipping flagged singular points."""
    if resolution < MIN_RESOLUTION:
        raise ValueError(f"resolution must be >= {MIN_RESOLUTION}")
    total = 0
    used = 0
    for j in range(resolution):
        omega = cmath.exp(2j * cmath.pi * j / resolution)
        try:
            total += levine_tristram(V, omega)
            used += 1
        except SingularAtOmega:
            continue
    return total / used if used else 0.0


# ---------------------------------------------------------------------------
# Hermitian matrices over the group ring of Z^r
# ---------------------------------------------------------------------------

class HermitianLaurentMatrix:
    """Square matrix over complex-coefficient Laurent polynomials in r
    variables, Hermitian with respect to conjugate-transpose combined with
    variable inversion."""

    __slots__ = ("size", "nvars", "entries")

    def __init__(self, nvars: int, entries, *, tol: float = 1e-9):
        n = len(entries)
        rows = []
        for row in entries:
            if len(row) != n:
                raise HermitianViolation("matrix must be square")
            rows.append(tuple(_clean_terms(e, nvars) for e in row))
        self.size = n
        self.nvars = nvars
        self.entries = tuple(rows)
        for i in range(n):
            for j in range(n):
                if not _terms_close(_involute(self.entries[j][i]),
                                    self.entries[i][j], tol):
                    raise HermitianViolation(
                        f"entry ({i},{j}) is not the bar-transpose of ({j},{i})")

    # -- constructors --------------------------------------------------------

    @classmethod
    def constant(cls, mat, nvars: int = 0) -> "HermitianLaurentMatrix":
        entries = [[{(0,) * nvars: complex(x)} for x in row] for row in mat]
        return cls(nvars, entries)

    @classmethod
    def hyperbolic_pair(cls, nvars: int = 0) -> "HermitianLaurentMatrix":
        return cls.constant([[0, 1], [1, 0]], nvars=nvars)

    @classmethod
    def from_json(cls, doc) -> "HermitianLaurentMatrix":
        nvars = int(doc["nvars"])
        entries = []
        for row in doc["entries"]:
            out_row = []
            for terms in row:
                d = {}
                for term in terms:
                    exps = tuple(int(e) for e in term["exponents"])
                    c = complex(float(term.get("coeff_re", 0.0)),
                                float(term.get("coeff_im", 0.0)))
                    d[exps] = d.get(exps, 0) + c
                out_row.append(d)
            entries.append(out_row)
        return cls(nvars, entries)

    def to_json(self) -> dict:
        return {"nvars": self.nvars,
                "entries": [[[{"coeff_re": c.real, "coeff_im": c.imag,
                               "exponents": list(e)} for e, c in sorted(entry.items())]
                             for entry in row] for row in self.entries]}

    # -- operations ------------------------------------------------------------

    def direct_sum(self, other: "HermitianLaurentMatrix") -> "HermitianLaurentMatrix":
        if other.nvars != self.nvars:
            raise HermitianViolation("variable counts differ")
        n, m = self.size, other.size
        zero: dict = {}
        entries = []
        for i in range(n):
            entries.append(list(self.entries[i]) + [zero] * m)
        for i in range(m):
            entries.append([zero] * n + list(other.entries[i]))
        return HermitianLaurentMatrix(self.nvars, entries)

    def congruent_by(self, U) -> "HermitianLaurentMatrix":
        """U P U^dagger for a square matrix U of Laurent term-dicts."""
        n = self.size
        up = [[_poly_sum(_poly_mul(U[i][k], self.entries[k][j], self.nvars)
                         for k in range(n)) for j in range(n)] for i in range(n)]
        udag = [[_involute(U[j][i]) for j in range(n)] for i in range(n)]
        out = [[_poly_sum(_poly_mul(up[i][k], udag[k][j], self.nvars)
                          for k in range(n)) for j in range(n)] for i in range(n)]
        return HermitianLaurentMatrix(self.nvars, out)

    def evaluate_grid(self, grid: int) -> np.ndarray:
        """All values eta(P) on the uniform grid, shape (grid^r, n, n)."""
        r, n = self.nvars, self.size
        npoints = grid ** r if r else 1
        thetas = TWO_PI * np.arange(grid) / grid
        # angle coordinate per grid point and variable, shape (npoints, r)
        coords = np.stack(np.meshgrid(*([thetas] * r), indexing="ij"),
                          axis=-1).reshape(npoints, r) if r else np.zeros((1, 0))
        vals = np.zeros((npoints, n, n), dtype=complex)
        for i in range(n):
            for j in range(n):
                acc = np.zeros(npoints, dtype=complex)
                for exps, c in self.entries[i][j].items():
                    phase = coords @ np.array(exps, dtype=float) if r else 0.0
                    acc += c * np.exp(1j * phase)
                vals[:, i, j] = acc
        # exact Hermitianization kills float round-off asymmetry
        return (vals + np.conjugate(np.transpose(vals, (0, 2, 1)))) / 2.0


def _clean_terms(entry, nvars: int) -> dict:
    out = {}
    for exps, c in dict(entry).items():
        exps = tuple(int(e) for e in exps)
        if len(exps) != nvars:
            raise HermitianViolation(f"exponent tuple {exps} in {nvars}-variable matrix")
        c = complex(c)
        if c != 0:
            out[exps] = out.get(exps, 0) + c
    return out


def _involute(terms: dict) -> dict:
    return {tuple(-e for e in exps): c.conjugate() for exps, c in terms.items()}


def _terms_close(a: dict, b: dict, tol: float) -> bool:
    keys = set(a) | set(b)
    return all(abs(a.get(k, 0) - b.get(k, 0)) <= tol for k in keys)


def _poly_mul(a: dict, b: dict, nvars: int) -> dict:
    out: dict = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return out


def _poly_sum(dicts) -> dict:
    out: dict = {}
    for d in dicts:
        for e, c in d.items():
            out[e] = out.get(e, 0) + c
    return out


@dataclass(frozen=True)
class SigmaResult:
    value: float
    grid: int
    total_points: int
    skipped: int

    def __float__(self):
        return self.value


def sigma_integral(P: HermitianLaurentMatrix, grid: int, *,
                   tol: float = SINGULARITY_TOL, jobs: int = 1,
                   chunk: int = 1 << 15) -> SigmaResult:
    """Average of sign(eta(P)) over the uniform grid on the r-torus.

    Points with |det eta(P)| < tol are skipped and counted.  r <= 4 keeps
    the grid tractable; raise ``grid`` for accuracy, not the tolerance.
    """
    if P.nvars > 4:
        raise ValueError("sigma integration supports at most 4 variables")
    if grid < 8:
        raise ValueError("grid must be >= 8")
    vals = P.evaluate_grid(grid)
    npoints = vals.shape[0]

    def process(block: np.ndarray):
        eigs = np.linalg.eigvalsh(block)
        dets = np.abs(np.prod(eigs, axis=1))
        ok = dets >= tol
        signs = np.sum(eigs > 0, axis=1) - np.sum(eigs < 0, axis=1)
        return int(np.sum(signs[ok])), int(np.sum(~ok))

    blocks = [vals[i:i + chunk] for i in range(0, npoints, chunk)]
    if jobs > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(process, blocks))
    else:
        results = [process(b) for b in blocks]
    total = sum(r[0] for r in results)
    skipped = sum(r[1] for r in results)
    used = npoints - skipped
    value = total / used if used else 0.0
    return SigmaResult(value=value, grid=grid, total_points=npoints,
                       skipped=skipped)


@dataclass(frozen=True)
class WittCheck:
    equal: bool
    sigma_left: float
    sigma_right: float
    tolerance: float


def witt_congruent_sigma_check(P: HermitianLaurentMatrix,
                               Q: HermitianLaurentMatrix,
                               n: int, n_prime: int, grid: int,
                               tol: float | None = None,
                               jobs: int = 1) -> WittCheck:
    """Compare sigma(P + n*B) with sigma(Q + n'*B), B the hyperbolic pair.

    A property check for the well-definedness of sigma on Witt classes, not
    a decision procedure: agreement within the grid tolerance.
    """
    if tol is None:
        tol = 2.0 / grid + 0.02
    B = HermitianLaurentMatrix.hyperbolic_pair(nvars=P.nvars)
    left = P
    for _ in range(n):
        left = left.direct_sum(B)
    right = Q
    for _ in range(n_prime):
        right = right.direct_sum(B)
    sl = sigma_integral(left, grid, jobs=jobs).value
    sr = sigma_integral(right, grid, jobs=jobs).value
    return WittCheck(equal=abs(sl - sr) <= tol, sigma_left=sl,
                     sigma_right=sr, tolerance=tol)
