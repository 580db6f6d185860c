"""Exact integer/rational lattice arithmetic.

Everything here is immutable and pure: integer matrices, Smith normal form,
subgroups of (Q/Z)^n cut out by integer matrices, coinvariants, and affine
solving of (M-1)x = c over Q/Z.  This is the substrate for every lattice
quotient in the package.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .errors import InvalidAction


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class Mat:
    """Immutable exact matrix (int or Fraction entries)."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows):
        self.rows = tuple(tuple(r) for r in rows)
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        for r in self.rows:
            if len(r) != self.ncols:
                raise ValueError("ragged matrix")

    @staticmethod
    def identity(n: int) -> "Mat":
        return Mat([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @staticmethod
    def zero(n: int, m: int) -> "Mat":
        return Mat([[0] * m for _ in range(n)])

    def __eq__(self, other):
        return isinstance(other, Mat) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"Mat({list(map(list, self.rows))})"

    def __add__(self, other: "Mat") -> "Mat":
        return Mat([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "Mat") -> "Mat":
        return Mat([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self) -> "Mat":
        return Mat([[-a for a in r] for r in self.rows])

    def __mul__(self, other):
        if isinstance(other, Mat):
            if self.ncols != other.nrows:
                raise ValueError("shape mismatch")
            cols = list(zip(*other.rows))
            return Mat([[sum(a * b for a, b in zip(row, col)) for col in cols]
                        for row in self.rows])
        return Mat([[a * other for a in r] for r in self.rows])

    def __rmul__(self, scalar):
        return Mat([[scalar * a for a in r] for r in self.rows])

    def __pow__(self, k: int) -> "Mat":
        if self.nrows != self.ncols:
            raise ValueError("square matrices only")
        if k < 0:
            return self.inverse() ** (-k)
        out = Mat.identity(self.nrows)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def transpose(self) -> "Mat":
        return Mat(list(zip(*self.rows))) if self.rows else Mat([])

    def apply(self, vec):
        """Matrix times column vector (sequence), returned as a tuple."""
        if len(vec) != self.ncols:
            raise ValueError("shape mismatch")
        return tuple(sum(a * v for a, v in zip(row, vec)) for row in self.rows)

    def is_integral(self) -> bool:
        return all(_frac(a).denominator == 1 for r in self.rows for a in r)

    def to_int(self) -> "Mat":
        return Mat([[int(a) for a in r] for r in self.rows])

    def det(self):
        """Exact determinant via fraction-free elimination."""
        n = self.nrows
        if n != self.ncols:
            raise ValueError("square matrices only")
        a = [[_frac(x) for x in row] for row in self.rows]
        det = Fraction(1)
        for col in range(n):
            piv = next((i for i in range(col, n) if a[i][col] != 0), None)
            if piv is None:
                return Fraction(0) if any(isinstance(x, Fraction) for r in self.rows for x in r) else 0
            if piv != col:
                a[col], a[piv] = a[piv], a[col]
                det = -det
            det *= a[col][col]
            inv = 1 / a[col][col]
            for i in range(col + 1, n):
                f = a[i][col] * inv
                if f:
                    a[i] = [x - f * y for x, y in zip(a[i], a[col])]
        if det.denominator == 1 and self.is_integral():
            return int(det)
        return det

    def inverse(self) -> "Mat":
        """Exact inverse (entries become Fractions unless they happen integral)."""
        n = self.nrows
        if n != self.ncols:
            raise ValueError("square matrices only")
        a = [[_frac(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
             for i, row in enumerate(self.rows)]
        for col in range(n):
            piv = next((i for i in range(col, n) if a[i][col] != 0), None)
            if piv is None:
                raise ValueError("singular matrix")
            a[col], a[piv] = a[piv], a[col]
            inv = 1 / a[col][col]
            a[col] = [x * inv for x in a[col]]
            for i in range(n):
                if i != col and a[i][col]:
                    f = a[i][col]
                    a[i] = [x - f * y for x, y in zip(a[i], a[col])]
        out = [[a[i][n + j] for j in range(n)] for i in range(n)]
        if all(x.denominator == 1 for r in out for x in r):
            out = [[int(x) for x in r] for r in out]
        return Mat(out)

    def rank(self) -> int:
        a = [[_frac(x) for x in row] for row in self.rows]
        rank, col = 0, 0
        while rank < self.nrows and col < self.ncols:
            piv = next((i for i in range(rank, self.nrows) if a[i][col] != 0), None)
            if piv is None:
                col += 1
                continue
            a[rank], a[piv] = a[piv], a[rank]
            inv = 1 / a[rank][col]
            a[rank] = [x * inv for x in a[rank]]
            for i in range(self.nrows):
                if i != rank and a[i][col]:
                    f = a[i][col]
                    a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
            rank += 1
            col += 1
        return rank

    def stack(self, other: "Mat") -> "Mat":
        if self.ncols != other.ncols:
            raise ValueError("shape mismatch")
        return Mat(self.rows + other.rows)


def smith_normal_form(m: Mat):
    """Return (U, D, V) with U*m*V = D diagonal, U and V unimodular.

    Pivot strategy: minimal absolute value, ties broken by lowest row then
    lowest column, so the output is deterministic for a fixed input.
    """
    if not m.is_integral():
        raise ValueError("SNF needs an integer matrix")
    nr, nc = m.nrows, m.ncols
    a = [[int(x) for x in row] for row in m.rows]
    u = [[int(i == j) for j in range(nr)] for i in range(nr)]
    v = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def addmul_row(dst, src, q):
        a[dst] = [x - q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x - q * y for x, y in zip(u[dst], u[src])]

    def addmul_col(dst, src, q):
        for row in a:
            row[dst] -= q * row[src]
        for row in v:
            row[dst] -= q * row[src]

    t = 0
    while t < min(nr, nc):
        pivot = None
        for i in range(t, nr):
            for j in range(t, nc):
                x = a[i][j]
                if x and (pivot is None or abs(x) < abs(a[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        if pivot != (t, t):
            if pivot[0] != t:
                swap_rows(t, pivot[0])
            if pivot[1] != t:
                swap_cols(t, pivot[1])
        while True:
            # clear the pivot column
            moved = False
            for i in range(t + 1, nr):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    addmul_row(i, t, q)
                    if a[i][t]:
                        swap_rows(t, i)
                        moved = True
            if moved:
                continue
            # clear the pivot row
            for j in range(t + 1, nc):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    addmul_col(j, t, q)
                    if a[t][j]:
                        swap_cols(t, j)
                        moved = True
            if moved:
                continue
            # divisibility fix-up for the remaining block
            bad = None
            d = a[t][t]
            for i in range(t + 1, nr):
                for j in range(t + 1, nc):
                    if a[i][j] % d:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            addmul_row(t, bad, -1)
        t += 1
    for i in range(min(nr, nc)):
        if a[i][i] < 0:
            a[i] = [-x for x in a[i]]
            u[i] = [-x for x in u[i]]
    return Mat(u), Mat(a), Mat(v)


class QV:
    """Vector over Q/Z: exact rationals, each reduced to [0, 1)."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        self.coords = tuple(_frac(c) % 1 for c in coords)

    @staticmethod
    def zero(n: int) -> "QV":
        return QV([0] * n)

    @property
    def rank(self) -> int:
        return len(self.coords)

    def __eq__(self, other):
        return isinstance(other, QV) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return "QV(%s)" % (", ".join(str(c) for c in self.coords))

    def __add__(self, other: "QV") -> "QV":
        return QV([a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other: "QV") -> "QV":
        return QV([a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self) -> "QV":
        return QV([-a for a in self.coords])

    def __rmul__(self, k) -> "QV":
        return QV([k * a for a in self.coords])

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def order(self) -> int:
        out = 1
        for c in self.coords:
            d = c.denominator
            out = out * d // _gcd(out, d)
        return out

    def act(self, m: Mat) -> "QV":
        return QV(m.apply(self.coords))


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


class FinAb:
    """Finite abelian group with a concrete realization in (Q/Z)^n.

    ``factors`` is a cyclic decomposition (each >= 2); SNF-produced groups
    carry the divisibility chain d_1 | d_2 | ... and ``invariant_factors``
    recovers that normal form in general.  ``gens[i]`` is a QV of exact
    order ``factors[i]`` and the group is the internal direct sum of the
    cyclic subgroups they generate.  Elements are coordinate tuples
    (a_i mod d_i); ``project`` maps an ambient QV back to coordinates and
    raises if the vector is not in the group.
    """

    __slots__ = ("factors", "gens", "ambient", "_vinv", "_dfull")

    def __init__(self, factors, gens, vinv=None, dfull=None, ambient=None):
        self.factors = tuple(int(d) for d in factors)
        self.gens = tuple(gens)
        if ambient is None:
            ambient = self.gens[0].rank if self.gens else 0
        self.ambient = ambient
        self._vinv = vinv      # Mat mapping ambient coords to SNF coords
        self._dfull = dfull    # full diagonal, aligned with vinv rows
        for d in self.factors:
            if d < 2:
                raise ValueError("cyclic factors must be >= 2")

    @staticmethod
    def abstract(factors) -> "FinAb":
        """The standard copy of ⊕ Z/d_i inside (Q/Z)^k."""
        factors = [int(d) for d in factors if int(d) > 1]
        k = len(factors)
        gens = [QV([Fraction(1, d) if i == j else 0 for i in range(k)])
                for j, d in enumerate(factors)]
        vinv = Mat.identity(k)
        return FinAb(factors, gens, vinv, list(factors))

    @property
    def order(self) -> int:
        out = 1
        for d in self.factors:
            out *= d
        return out

    @property
    def exponent(self) -> int:
        out = 1
        for d in self.factors:
            out = out * d // _gcd(out, d)
        return out

    @property
    def invariant_factors(self):
        """The divisibility-chain normal form of the cyclic decomposition."""
        if not self.factors:
            return ()
        rel = Mat([[self.factors[i] if i == j else 0
                    for i in range(len(self.factors))]
                   for j in range(len(self.factors))])
        _, d, _ = smith_normal_form(rel)
        out = [int(d.rows[i][i]) for i in range(len(self.factors))
               if int(d.rows[i][i]) > 1]
        return tuple(out)

    def __repr__(self):
        if not self.factors:
            return "FinAb(trivial)"
        return "FinAb(%s)" % " x ".join(f"Z/{d}" for d in self.factors)

    @property
    def zero(self):
        return (0,) * len(self.factors)

    def add(self, x, y):
        return tuple((a + b) % d for a, b, d in zip(x, y, self.factors))

    def neg(self, x):
        return tuple((-a) % d for a, d in zip(x, self.factors))

    def smul(self, k, x):
        return tuple((k * a) % d for a, d in zip(x, self.factors))

    def elements(self):
        return itertools.product(*(range(d) for d in self.factors))

    def element_order(self, x) -> int:
        out = 1
        for a, d in zip(x, self.factors):
            o = d // _gcd(a, d)
            out = out * o // _gcd(out, o)
        return out

    def lift(self, coords) -> QV:
        v = QV.zero(self.ambient)
        for a, g in zip(coords, self.gens):
            v = v + (a * g)
        return v

    def project(self, vec: QV):
        """Normal-form coordinates of an ambient vector lying in the group."""
        if self._vinv is None:
            raise ValueError("group carries no projection data")
        y = self._vinv.apply(vec.coords)
        coords = []
        k = 0
        for d, yi in zip(self._dfull, y):
            val = _frac(yi) * d
            if val.denominator != 1:
                raise ValueError("vector is not in the group")
            if d > 1:
                coords.append(int(val) % d)
                k += 1
        # columns beyond len(_dfull) (free directions) must be absent here
        if len(coords) != len(self.factors):
            raise ValueError("projection data inconsistent")
        return tuple(coords)

    def contains(self, vec: QV) -> bool:
        try:
            self.project(vec)
            return True
        except ValueError:
            return False

    def characters(self):
        """All characters as coordinate tuples x; pair with char_value."""
        return self.elements()

    def char_value(self, x, a) -> Fraction:
        """Value in Q/Z of the character indexed by x at the element a."""
        return sum((Fraction(xi * ai, d) for xi, ai, d in zip(x, a, self.factors)),
                   Fraction(0)) % 1

    def hom_matrix_ok(self, m: Mat) -> bool:
        """Does the integer matrix define an endomorphism in coordinates?"""
        k = len(self.factors)
        if m.nrows != k or m.ncols != k:
            return False
        for j, dj in enumerate(self.factors):
            for i, di in enumerate(self.factors):
                if (dj * m.rows[i][j]) % di:
                    return False
        return True

    def is_automorphism(self, m: Mat) -> bool:
        """Endomorphism test plus exact surjectivity via SNF."""
        if not self.hom_matrix_ok(m):
            return False
        k = len(self.factors)
        rel = Mat([list(m.transpose().rows[j]) for j in range(k)] +
                  [[self.factors[i] if i == j else 0 for i in range(k)] for j in range(k)])
        _, d, _ = smith_normal_form(rel)
        prod = 1
        for i in range(min(d.nrows, d.ncols)):
            prod *= d.rows[i][i]
        return abs(prod) == 1

    def apply_matrix(self, m: Mat, x):
        return tuple(int(c) % d for c, d in zip(m.apply(x), self.factors))


class RankReport:
    """Degenerate kernel: positive-dimensional fixed locus.

    ``free_rank`` counts independent (Q/Z)-divisible directions; ``torsion``
    is the finite complement in the chosen SNF splitting.
    """

    __slots__ = ("free_rank", "torsion")

    def __init__(self, free_rank: int, torsion: FinAb):
        self.free_rank = free_rank
        self.torsion = torsion

    def __repr__(self):
        return f"RankReport(free_rank={self.free_rank}, torsion={self.torsion})"


def qz_kernel(m: Mat):
    """Subgroup {v in (Q/Z)^n : m·v ≡ 0 mod Z} for an integer matrix m.

    Returns a FinAb when the kernel is finite, else a RankReport.
    """
    u, d, v = smith_normal_form(m)
    n = m.ncols
    vinv = v.inverse()
    diag = [int(d.rows[i][i]) if i < d.nrows else 0 for i in range(n)]
    gens, factors = [], []
    free = 0
    for j, dj in enumerate(diag):
        if dj == 0:
            free += 1
        elif dj > 1:
            col = [Fraction(v.rows[i][j], dj) for i in range(n)]
            gens.append(QV(col))
            factors.append(dj)
    grp = FinAb(factors, gens, vinv, diag, ambient=n)
    if free:
        return RankReport(free, grp)
    return grp


def twisted_fixed_points(f: Mat):
    """Fixed points of the endomorphism f on (Q/Z)^n, i.e. ker(f - 1)."""
    return qz_kernel(f - Mat.identity(f.nrows))


def simultaneous_fixed_points(mats):
    """ker of all (m - 1) at once, via the stacked matrix."""
    mats = list(mats)
    n = mats[0].nrows
    stacked = mats[0] - Mat.identity(n)
    for m in mats[1:]:
        stacked = stacked.stack(m - Mat.identity(n))
    return qz_kernel(stacked)


class Quotient:
    """A quotient of a FinAb by listed elements, with coordinate projection."""

    __slots__ = ("group", "_v", "_diag", "_nsrc")

    def __init__(self, group: FinAb, v: Mat, diag, nsrc: int):
        self.group = group
        self._v = v
        self._diag = diag
        self._nsrc = nsrc

    def project(self, coords):
        """Map source-group coordinates to quotient coordinates."""
        if len(coords) != self._nsrc:
            raise ValueError("bad coordinate length")
        row = [int(c) for c in coords]
        y = [sum(row[i] * self._v.rows[i][j] for i in range(self._nsrc))
             for j in range(self._nsrc)]
        out = []
        for dj, yj in zip(self._diag, y):
            if dj > 1:
                out.append(yj % dj)
        return tuple(out)


def quotient_by(group: FinAb, elements) -> Quotient:
    """Quotient of ``group`` by the subgroup generated by coordinate tuples."""
    k = len(group.factors)
    rel_rows = [[group.factors[i] if i == j else 0 for j in range(k)] for i in range(k)]
    for e in elements:
        rel_rows.append([int(c) for c in e])
    if k == 0:
        return Quotient(FinAb.abstract([]), Mat.identity(0), [], 0)
    _, d, v = smith_normal_form(Mat(rel_rows))
    diag = [int(d.rows[i][i]) if i < min(d.nrows, d.ncols) else 0 for i in range(k)]
    factors = [dj for dj in diag if dj > 1]
    return Quotient(FinAb.abstract(factors), v, diag, k)


def coinvariants(group: FinAb, actions):
    """Quotient of ``group`` by all (sigma - 1)·a, sigma in ``actions``.

    Each action is an integer matrix in normal-form coordinates and must be
    an automorphism of the group.
    """
    k = len(group.factors)
    elems = []
    for m in actions:
        if not group.is_automorphism(m):
            raise InvalidAction(f"matrix {m!r} is not an automorphism of {group!r}")
        delta = m - Mat.identity(k)
        for j in range(k):
            img = delta.apply(tuple(1 if i == j else 0 for i in range(k)))
            elems.append(tuple(int(c) % d for c, d in zip(img, group.factors)))
    return quotient_by(group, elems)


class AffineSolutions:
    """Solution set of a linear equation over Q/Z: particular + kernel."""

    __slots__ = ("particular", "kernel")

    def __init__(self, particular: QV, kernel):
        self.particular = particular
        self.kernel = kernel

    def all(self):
        """Every solution (finite kernel only)."""
        if isinstance(self.kernel, RankReport):
            raise ValueError("infinitely many solutions")
        return [self.particular + self.kernel.lift(c) for c in self.kernel.elements()]


def solve_linear_qz(m: Mat, c: QV):
    """All x in (Q/Z)^ncols with m·x ≡ c mod Z, or None if unsolvable."""
    u, d, v = smith_normal_form(m)
    rhs = [_frac(t) for t in u.apply(c.coords)]
    n = m.ncols
    y = [Fraction(0)] * n
    for i in range(m.nrows):
        di = int(d.rows[i][i]) if i < min(m.nrows, n) else 0
        ri = rhs[i] % 1
        if i >= n or di == 0:
            if ri != 0:
                return None
        else:
            y[i] = ri / di
    x0 = QV(v.apply(y))
    return AffineSolutions(x0, qz_kernel(m))


def solve_affine(m: Mat, c: QV):
    """Solutions of (m - 1)x = c over Q/Z; None when the orbit is empty."""
    return solve_linear_qz(m - Mat.identity(m.nrows), c)


def abelian_basis(elements, mul, identity):
    """Invariant-factor style basis of a small abelian group given by ``mul``.

    Returns (factors, basis_elements, coords) where coords maps each element
    to its exponent tuple.  Deterministic: candidates are scanned in the
    iteration order of ``elements`` after sorting by decreasing order.
    """
    elems = list(elements)
    n = len(elems)

    def order_of(x):
        k, y = 1, x
        while y != identity:
            y = mul(y, x)
            k += 1
        return k

    orders = {x: order_of(x) for x in elems}
    if n == 1:
        return [], [], {identity: ()}
    ranked = sorted(elems, key=lambda x: (-orders[x], repr(x)))

    def span(basis):
        table = {(): identity}
        out = {}
        for exps in itertools.product(*(range(orders[b]) for b in basis)):
            cur = identity
            for e, b in zip(exps, basis):
                for _ in range(e):
                    cur = mul(cur, b)
            out[exps] = cur
        return out

    for size in range(1, len(ranked) + 1):
        for combo in itertools.combinations(ranked, size):
            prod = 1
            for b in combo:
                prod *= orders[b]
            if prod != n:
                continue
            table = span(combo)
            vals = list(table.values())
            if len(set(vals)) == n:
                coords = {v: k for k, v in table.items()}
                return [orders[b] for b in combo], list(combo), coords
    raise ValueError("group is not abelian")
