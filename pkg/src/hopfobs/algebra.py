"""Exact arithmetic underpinning the cover computations.

Multivariate Laurent polynomials over Z, finite abelian groups with their
characters, the regular representation by permutation matrices, and the
evaluation of Laurent polynomials at characters of a finite quotient.

Element enumeration convention
------------------------------
Elements of a finite abelian group ``Z_{d1} + ... + Z_{dr}`` are enumerated
with the *first* coordinate varying fastest, so for Z_2 + Z_2 the order is
(0,0), (1,0), (0,1), (1,1).  Every deterministic ordering in the package
(characters, deck translates, permutation matrices) derives from this one.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm, prod

from .errors import BoundExceeded, VariableMismatch

DEFAULT_GROUP_BOUND = 2**16

TWO_PI = 2.0 * 3.141592653589793


class LaurentPoly:
    """Laurent polynomial in ``nvars`` variables with integer coefficients.

    Terms are stored as a map from exponent tuples to nonzero coefficients.
    Instances are treated as immutable; all operations return new objects.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        clean = {}
        if terms:
            for exps, coeff in dict(terms).items():
                exps = tuple(int(e) for e in exps)
                if len(exps) != nvars:
                    raise VariableMismatch(
                        f"exponent tuple {exps} in a {nvars}-variable polynomial")
                coeff = int(coeff)
                if coeff:
                    clean[exps] = clean.get(exps, 0) + coeff
                    if not clean[exps]:
                        del clean[exps]
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *args):
        raise AttributeError("LaurentPoly is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "LaurentPoly":
        return cls(nvars)

    @classmethod
    def one(cls, nvars: int) -> "LaurentPoly":
        return cls(nvars, {(0,) * nvars: 1})

    @classmethod
    def constant(cls, nvars: int, c: int) -> "LaurentPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def monomial(cls, nvars: int, exps, coeff: int = 1) -> "LaurentPoly":
        return cls(nvars, {tuple(exps): coeff})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "LaurentPoly":
        exps = [0] * nvars
        exps[i] = 1
        return cls(nvars, {tuple(exps): 1})

    # -- structure --------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    @property
    def is_unit(self) -> bool:
        """True for +-(monomial)."""
        if len(self.terms) != 1:
            return False
        return abs(next(iter(self.terms.values()))) == 1

    def augmentation(self) -> int:
        """Sum of coefficients, i.e. the value at all variables = 1."""
        return sum(self.terms.values())

    def degree_in(self, var: int) -> int:
        """Max exponent of ``var`` (0 for the zero polynomial)."""
        if not self.terms:
            return 0
        return max(e[var] for e in self.terms)

    def min_exponent_in(self, var: int) -> int:
        if not self.terms:
            return 0
        return min(e[var] for e in self.terms)

    # -- ring operations ---------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            if other.nvars != self.nvars:
                raise VariableMismatch(
                    f"{self.nvars}-variable vs {other.nvars}-variable polynomial")
            return other
        if isinstance(other, int):
            return LaurentPoly.constant(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return LaurentPoly(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return LaurentPoly(self.nvars, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if not self.is_unit:
                raise ValueError("negative powers only for unit monomials")
            (e, c), = self.terms.items()
            inv = LaurentPoly(self.nvars, {tuple(-x for x in e): c})
            return inv ** (-n)
        result = LaurentPoly.one(self.nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(self.nvars, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- normal form --------------------------------------------------------

    def normalized(self) -> "LaurentPoly":
        """Canonical unit multiple: shift so the minimal exponent of each
        variable is 0, then fix the sign so the lexicographically leading
        coefficient is positive."""
        if not self.terms:
            return self
        shifts = tuple(-self.min_exponent_in(v) for v in range(self.nvars))
        terms = {tuple(e + s for e, s in zip(exps, shifts)): c
                 for exps, c in self.terms.items()}
        lead = max(terms)
        if terms[lead] < 0:
            terms = {e: -c for e, c in terms.items()}
        return LaurentPoly(self.nvars, terms)

    # -- evaluation ----------------------------------------------------------

    def evaluate(self, values) -> complex:
        """Evaluate at the given complex values (nonzero if any exponent is
        negative)."""
        values = list(values)
        if len(values) != self.nvars:
            raise VariableMismatch("wrong number of values")
        total = 0j
        for exps, c in self.terms.items():
            term = complex(c)
            for v, e in zip(values, exps):
                term *= v ** e
            total += term
        return total

    def evaluate_at_angles(self, angles) -> complex:
        """Evaluate with variable ``i`` set to ``exp(2*pi*i*angles[i])``.

        Angles are exact rationals, so each term contributes a unit complex
        number computed from one exact angle; this keeps products over whole
        character groups accurate enough to round to integers.
        """
        angles = [Fraction(a) for a in angles]
        if len(angles) != self.nvars:
            raise VariableMismatch("wrong number of angles")
        total = 0j
        for exps, c in self.terms.items():
            frac = sum((a * e for a, e in zip(angles, exps)), Fraction(0))
            frac %= 1  # keep the float argument small
            total += c * cmath.exp(1j * TWO_PI * float(frac))
        return total

    # -- printing -------------------------------------------------------------

    def format(self, names) -> str:
        """Human-readable form with the given variable names."""
        if not self.terms:
            return "0"
        names = list(names)
        parts = []
        for exps in sorted(self.terms, reverse=True):
            c = self.terms[exps]
            factors = []
            for name, e in zip(names, exps):
                if e == 1:
                    factors.append(name)
                elif e != 0:
                    factors.append(f"{name}^{e}")
            body = "*".join(factors)
            if not body:
                term = str(abs(c))
            elif abs(c) == 1:
                term = body
            else:
                term = f"{abs(c)}*{body}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, term))
        first_sign, first_term = parts[0]
        out = ("-" if first_sign == "-" else "") + first_term
        for sign, term in parts[1:]:
            out += f" {sign} {term}"
        return out

    def __repr__(self):
        default = ["s", "t"] if self.nvars == 2 else [f"x{i}" for i in range(self.nvars)]
        if self.nvars == 1:
            default = ["t"]
        return f"LaurentPoly({self.format(default)})"


def laurent_add(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p + q


def laurent_mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p * q


def laurent_normalize(p: LaurentPoly) -> LaurentPoly:
    return p.normalized()


def laurent_divexact(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """Exact division in the Laurent ring; raises ValueError if q does not
    divide p."""
    if q.is_zero:
        raise ValueError("division by zero polynomial")
    if p.is_zero:
        return p
    if p.nvars != q.nvars:
        raise VariableMismatch("variable counts differ")
    # Work with ordinary polynomials: shift exponents to be nonnegative.
    sp = tuple(-min(p.min_exponent_in(v), 0) for v in range(p.nvars))
    sq = tuple(-min(q.min_exponent_in(v), 0) for v in range(q.nvars))
    pw = {tuple(e + s for e, s in zip(exps, sp)): c for exps, c in p.terms.items()}
    qw = {tuple(e + s for e, s in zip(exps, sq)): c for exps, c in q.terms.items()}
    quot: dict = {}
    lead_q = max(qw)
    cq = qw[lead_q]
    while pw:
        lead_p = max(pw)
        cp = pw[lead_p]
        exps = tuple(a - b for a, b in zip(lead_p, lead_q))
        if cp % cq != 0:
            raise ValueError("not divisible (coefficient)")
        c = cp // cq
        quot[exps] = quot.get(exps, 0) + c
        for eq, cqq in qw.items():
            e = tuple(a + b for a, b in zip(exps, eq))
            pw[e] = pw.get(e, 0) - c * cqq
            if not pw[e]:
                del pw[e]
    # Undo the exponent shifts: quotient picked up shift sp - sq.
    back = tuple(b - a for a, b in zip(sp, sq))
    return LaurentPoly(p.nvars, {tuple(e + s for e, s in zip(exps, back)): c
                                 for exps, c in quot.items()})


# ---------------------------------------------------------------------------
# Laurent polynomial parsing
# ---------------------------------------------------------------------------

def parse_laurent(text: str, names=("s", "t")) -> LaurentPoly:
    """Parse an integer-coefficient expression in the named variables.

    Supports +, -, *, ^ with integer (possibly negative, on monomials)
    exponents, and parentheses, e.g. ``(t*s+1-s)*(t*s+1-t)``.
    """
    names = list(names)
    nvars = len(names)
    tokens = _tokenize(text, names)
    pos = [0]

    def peek():
        return tokens[pos[0]] if pos[0] < len(tokens) else None

    def take():
        tok = peek()
        pos[0] += 1
        return tok

    def parse_expr():
        tok = peek()
        node = parse_term()
        while peek() in ("+", "-"):
            op = take()
            rhs = parse_term()
            node = node + rhs if op == "+" else node - rhs
        return node

    def parse_term():
        node = parse_factor()
        while True:
            tok = peek()
            if tok == "*":
                take()
                node = node * parse_factor()
            elif isinstance(tok, tuple) or tok == "(" :
                # implicit multiplication: "2s", "s(t+1)"
                node = node * parse_factor()
            else:
                return node

    def parse_factor():
        tok = peek()
        if tok == "-":
            take()
            return -parse_factor()
        if tok == "+":
            take()
            return parse_factor()
        node = parse_atom()
        while peek() == "^":
            take()
            sign = 1
            if peek() == "-":
                take()
                sign = -1
            exp_tok = take()
            if not (isinstance(exp_tok, tuple) and exp_tok[0] == "int"):
                raise ValueError("expected integer exponent after '^'")
            node = node ** (sign * exp_tok[1])
        return node

    def parse_atom():
        tok = take()
        if tok == "(":
            node = parse_expr()
            if take() != ")":
                raise ValueError("unbalanced parentheses")
            return node
        if isinstance(tok, tuple):
            kind, value = tok
            if kind == "int":
                return LaurentPoly.constant(nvars, value)
            if kind == "var":
                return LaurentPoly.variable(nvars, value)
        raise ValueError(f"unexpected token {tok!r}")

    result = parse_expr()
    if pos[0] != len(tokens):
        raise ValueError(f"trailing input at token {tokens[pos[0]]!r}")
    return result


def _tokenize(text: str, names):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-*^()":
            tokens.append(ch)
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(("int", int(text[i:j])))
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            if word not in names:
                raise ValueError(f"unknown variable {word!r} (expected {names})")
            tokens.append(("var", names.index(word)))
            i = j
            continue
        raise ValueError(f"bad character {ch!r} in polynomial")
    return tokens


# ---------------------------------------------------------------------------
# Finite abelian groups, characters, admissible maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FinAbGroup:
    """Z_{d1} + ... + Z_{dr} with each d_i >= 1; elements are exponent
    tuples reduced mod the orders."""

    orders: tuple

    def __post_init__(self):
        orders = tuple(int(d) for d in self.orders)
        if any(d < 1 for d in orders):
            raise ValueError("cyclic orders must be >= 1")
        object.__setattr__(self, "orders", orders)

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def order(self) -> int:
        return prod(self.orders) if self.orders else 1

    def reduce(self, a) -> tuple:
        return tuple(x % d for x, d in zip(a, self.orders))

    def add(self, a, b) -> tuple:
        return tuple((x + y) % d for x, y, d in zip(a, b, self.orders))

    def neg(self, a) -> tuple:
        return tuple((-x) % d for x, d in zip(a, self.orders))

    def sub(self, a, b) -> tuple:
        return tuple((x - y) % d for x, y, d in zip(a, b, self.orders))

    def zero(self) -> tuple:
        return (0,) * len(self.orders)

    def elements(self) -> list:
        """All elements in the canonical order (first coordinate fastest)."""
        return [self.element_at(idx) for idx in range(self.order)]

    def element_at(self, idx: int) -> tuple:
        out = []
        for d in self.orders:
            out.append(idx % d)
            idx //= d
        return tuple(out)

    def index(self, a) -> int:
        a = self.reduce(a)
        idx = 0
        for x, d in zip(reversed(a), reversed(self.orders)):
            idx = idx * d + x
        return idx

    def element_order(self, a) -> int:
        a = self.reduce(a)
        return lcm(*(d // gcd(x, d) for x, d in zip(a, self.orders))) if a else 1

    def __str__(self):
        if not self.orders or self.order == 1:
            return "0"
        return " + ".join("Z" + str(d) for d in self.orders if d > 1) or "0"


@dataclass(frozen=True)
class Character:
    """Character of a finite abelian group into S^1, stored exactly as
    numerators: the i-th generator maps to exp(2*pi*i*n_i/d_i)."""

    group: FinAbGroup
    numerators: tuple

    def __post_init__(self):
        nums = tuple(n % d for n, d in zip(self.numerators, self.group.orders))
        if len(nums) != self.group.rank:
            raise ValueError("numerator tuple has wrong length")
        object.__setattr__(self, "numerators", nums)

    def angle(self, a) -> Fraction:
        """Exact argument/(2 pi) of the character value, reduced mod 1."""
        total = sum((Fraction(n * x, d) for n, x, d in
                     zip(self.numerators, a, self.group.orders)), Fraction(0))
        return total % 1

    def __call__(self, a) -> complex:
        frac = self.angle(a)
        return cmath.exp(1j * TWO_PI * float(frac))

    @property
    def order(self) -> int:
        return lcm(*(d // gcd(n, d) for n, d in
                     zip(self.numerators, self.group.orders))) if self.numerators else 1

    @property
    def is_trivial(self) -> bool:
        return all(n == 0 for n in self.numerators)


def enumerate_characters(group: FinAbGroup, bound: int = DEFAULT_GROUP_BOUND) -> list:
    """All |A| characters of A, ordered by numerator tuple in the canonical
    element order."""
    if group.order >= bound:
        raise BoundExceeded(f"group order {group.order} >= bound {bound}")
    return [Character(group, nums) for nums in group.elements()]


@dataclass(frozen=True)
class AdmissibleMap:
    """Componentwise projection Z^m -> Z_{d1} + ... + Z_{dm}.

    The admissible maps of the obstruction theory are exactly these; trivial
    factors (d_i = 1) kill the corresponding coordinate.
    """

    target: FinAbGroup

    @property
    def source_rank(self) -> int:
        return self.target.rank

    def apply(self, exps) -> tuple:
        if len(exps) != self.target.rank:
            raise VariableMismatch("exponent tuple has wrong length for the map")
        return self.target.reduce(exps)

    def push_poly(self, p: LaurentPoly) -> dict:
        """Image of a Laurent polynomial in the group ring Z[A], as a map
        element -> coefficient."""
        if p.nvars != self.target.rank:
            raise VariableMismatch("polynomial variables do not match the map")
        acc: dict = {}
        for exps, c in p.terms.items():
            g = self.apply(exps)
            acc[g] = acc.get(g, 0) + c
            if not acc[g]:
                del acc[g]
        return acc


def regular_representation(group: FinAbGroup, a, bound: int = DEFAULT_GROUP_BOUND) -> list:
    """Permutation matrix of addition by ``a`` on Z[A] in the canonical
    element order: column j carries a 1 in row index(a + e_j)."""
    if group.order >= bound:
        raise BoundExceeded(f"group order {group.order} >= bound {bound}")
    k = group.order
    a = group.reduce(a)
    mat = [[0] * k for _ in range(k)]
    for j in range(k):
        u = group.index(group.add(a, group.element_at(j)))
        mat[u][j] = 1
    return mat


def eval_at_character(p: LaurentPoly, phi: AdmissibleMap, eta: Character) -> complex:
    """Value of p after substituting eta(phi(e_i)) for the i-th variable."""
    angles = [eta.angle(phi.apply(tuple(1 if j == i else 0 for j in range(p.nvars))))
              for i in range(p.nvars)]
    return p.evaluate_at_angles(angles)


def apply_rep_to_matrix(mat, phi: AdmissibleMap, bound: int = DEFAULT_GROUP_BOUND) -> list:
    """Replace each Laurent entry by its k x k regular-representation block.

    A term c*x^e of entry (i, j) contributes c to block position (u, v)
    whenever phi(e) + elem_v = elem_u.  The result is a (k*rows) x (k*cols)
    integer matrix, and the assignment is a ring homomorphism on matrices.
    """
    A = phi.target
    k = A.order
    if k >= bound:
        raise BoundExceeded(f"group order {k} >= bound {bound}")
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    elems = A.elements()
    out = [[0] * (k * cols) for _ in range(k * rows)]
    for i in range(rows):
        for j in range(cols):
            entry = mat[i][j]
            if entry.is_zero:
                continue
            image = phi.push_poly(entry)
            for g, c in image.items():
                for v in range(k):
                    u = A.index(A.add(g, elems[v]))
                    out[i * k + u][j * k + v] += c
    return out
