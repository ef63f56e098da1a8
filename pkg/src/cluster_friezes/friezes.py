"""Integer function families on [1,r] x Z and the generic frieze patterns.

Three recursions are supported, all driven by a symmetrizable generalized
Cartan matrix A = (a_ij):

  additive           v(i,m) + v(i,m+1) = S(i,m)
  cluster-additive   v(i,m) + v(i,m+1) = S_+(i,m)
  tropical-frieze    v(i,m) + v(i,m+1) = [S(i,m)]_+

where S(i,m) = sum_{j>i} (-a_ji) v(j,m) + sum_{j<i} (-a_ji) v(j,m+1) and
S_+ applies [.]_+ to each v before summing.  Values extend forward and
backward from a seed slice; each relation is linear in its extreme unknown.
"""

from __future__ import annotations

import threading
from fractions import Fraction

from .errors import DimensionMismatch, NotAdmissible
from .laurent import check_trop
from .mutation import (
    as_matrix,
    canonical_address,
    mat_neg,
    pp,
    seed_pattern,
    transpose,
)
from .tropical import TropPoint, check_admissible_A, check_admissible_Y

KINDS = ("additive", "cluster-additive", "tropical-frieze")


def find_symmetrizer(a):
    """Positive integer diagonal d with diag(d)*A symmetric, or None."""
    r = len(a)
    for i in range(r):
        for j in range(r):
            if (a[i][j] == 0) != (a[j][i] == 0):
                return None
    d = [None] * r
    for start in range(r):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(r):
                if i != j and a[i][j] != 0 and d[j] is None:
                    d[j] = d[i] * Fraction(a[i][j], a[j][i])
                    stack.append(j)
    lcm = 1
    for x in d:
        lcm = lcm * x.denominator // _gcd(lcm, x.denominator)
    dints = tuple(int(x * lcm) for x in d)
    g = 0
    for x in dints:
        g = _gcd(g, x)
    dints = tuple(x // g for x in dints)
    if any(x <= 0 for x in dints):
        return None
    for i in range(r):
        for j in range(r):
            if dints[i] * a[i][j] != dints[j] * a[j][i]:
                return None
    return dints


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


class CartanMatrix:
    """Symmetrizable generalized Cartan matrix."""

    __slots__ = ("entries", "symmetrizer")

    def __init__(self, rows):
        self.entries = as_matrix(rows)
        r = len(self.entries)
        if any(len(row) != r for row in self.entries):
            raise DimensionMismatch("Cartan matrix must be square")
        for i in range(r):
            if self.entries[i][i] != 2:
                raise ValueError("diagonal entries must equal 2")
            for j in range(r):
                if i != j and self.entries[i][j] > 0:
                    raise ValueError("off-diagonal entries must be nonpositive")
        d = find_symmetrizer(self.entries)
        if d is None:
            raise ValueError("matrix is not symmetrizable")
        self.symmetrizer = d

    @property
    def rank(self):
        return len(self.entries)

    def transpose(self):
        return CartanMatrix(transpose(self.entries))

    def b_matrix(self):
        """The acyclic exchange matrix attached to A: strictly upper part is
        a_ij, strictly lower part is -a_ij."""
        a = self.entries
        r = self.rank
        return tuple(
            tuple(0 if i == j else (a[i][j] if i < j else -a[i][j]) for j in range(r))
            for i in range(r)
        )

    def upper_part(self):
        a = self.entries
        r = self.rank
        return tuple(
            tuple(a[i][j] if i < j else 0 for j in range(r)) for i in range(r)
        )

    def lower_part(self):
        a = self.entries
        r = self.rank
        return tuple(
            tuple(a[i][j] if i > j else 0 for j in range(r)) for i in range(r)
        )

    def __eq__(self, other):
        return isinstance(other, CartanMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"CartanMatrix({list(map(list, self.entries))})"


class FriezeFunction:
    """Memoized Z-valued function on [1,r] x Z of one of the three kinds.

    Backed either by the defining recursion from a seed slice or by an
    arbitrary value provider (tropical readback, admissible elements); both
    expose the same interface and can be compared on windows.
    """

    def __init__(self, kind, cartan, value_fn):
        if kind not in KINDS:
            raise ValueError(f"unknown kind {kind!r}")
        self.kind = kind
        self.cartan = cartan
        self._value_fn = value_fn
        self._memo = {}
        self._lock = threading.RLock()

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_slice(cls, kind, cartan, values, m0=0):
        values = tuple(int(v) for v in values)
        if len(values) != cartan.rank:
            raise DimensionMismatch("slice length must equal the rank")
        self = cls(kind, cartan, None)
        self._columns = {m0: values}
        self._lo = self._hi = m0
        self._value_fn = self._recursive_value
        return self

    @classmethod
    def from_values(cls, kind, cartan, value_fn):
        return cls(kind, cartan, value_fn)

    # -- recursion ---------------------------------------------------------

    def _bracket(self, v):
        return pp(v) if self.kind == "cluster-additive" else v

    def _pair_sum(self, col_m, col_m1, i):
        a = self.cartan.entries
        r = self.cartan.rank
        s = sum(-a[j][i] * self._bracket(col_m[j]) for j in range(i + 1, r))
        s += sum(-a[j][i] * self._bracket(col_m1[j]) for j in range(i))
        return pp(s) if self.kind == "tropical-frieze" else s

    def _column(self, m):
        cols = self._columns
        r = self.cartan.rank
        while self._hi < m:
            prev = cols[self._hi]
            cur = [0] * r
            for i in range(r):
                # relation at (i, hi); the unknown cur[i] enters linearly
                cur[i] = check_trop(self._pair_sum(prev, cur, i) - prev[i])
            self._hi += 1
            cols[self._hi] = tuple(cur)
        while self._lo > m:
            nxt = cols[self._lo]
            cur = [0] * r
            for i in range(r - 1, -1, -1):
                cur[i] = check_trop(self._pair_sum(cur, nxt, i) - nxt[i])
            self._lo -= 1
            cols[self._lo] = tuple(cur)
        return cols[m]

    def _recursive_value(self, i, m):
        return self._column(m)[i - 1]

    # -- interface -----------------------------------------------------------

    def value(self, i, m):
        if not 1 <= i <= self.cartan.rank:
            raise DimensionMismatch(f"index {i} out of range")
        with self._lock:
            key = (i, m)
            if key not in self._memo:
                self._memo[key] = int(self._value_fn(i, m))
            return self._memo[key]

    def slice_at(self, m):
        return tuple(self.value(i, m) for i in range(1, self.cartan.rank + 1))

    def table(self, m_lo, m_hi):
        return {
            (i, m): self.value(i, m)
            for m in range(m_lo, m_hi + 1)
            for i in range(1, self.cartan.rank + 1)
        }

    def satisfies_recursion(self, m_lo, m_hi):
        """Exact check of the defining relation on all (i,m) with both columns
        inside [m_lo, m_hi+1]."""
        for m in range(m_lo, m_hi + 1):
            col_m = self.slice_at(m)
            col_m1 = self.slice_at(m + 1)
            for i in range(self.cartan.rank):
                if col_m[i] + col_m1[i] != self._pair_sum(col_m, col_m1, i):
                    return False
        return True

    def agrees_with(self, other, m_lo, m_hi):
        return self.table(m_lo, m_hi) == other.table(m_lo, m_hi)

    def __add__(self, other):
        if self.cartan != other.cartan:
            raise DimensionMismatch("mismatched Cartan matrices")
        return FriezeFunction.from_values(
            self.kind, self.cartan, lambda i, m: self.value(i, m) + other.value(i, m)
        )

    def scale(self, c):
        return FriezeFunction.from_values(
            self.kind, self.cartan, lambda i, m: c * self.value(i, m)
        )


def extend(f: FriezeFunction, i, m) -> int:
    """Value f(i, m), extending by the defining recursion as needed."""
    return f.value(i, m)


def additive_extend(cartan, values, m0=0) -> FriezeFunction:
    return FriezeFunction.from_slice("additive", cartan, values, m0)


# -- generic frieze patterns ---------------------------------------------------


class Belts:
    """The four generic frieze patterns attached to a Cartan matrix, read off
    the seeds along the acyclic belt of the respective pattern."""

    def __init__(self, cartan: CartanMatrix):
        self.cartan = cartan
        self.b = cartan.b_matrix()
        self.bt = transpose(self.b)

    def _belt_variable(self, kind, root, i, m):
        addr = canonical_address(i, m, self.cartan.rank)
        return seed_pattern(kind, root).seed_at(addr).cluster[i - 1]

    def x_sv(self, i, m):
        """Cluster variable x~(i,m) of the A-space of B^T."""
        return self._belt_variable("A", self.bt, i, m)

    def y(self, i, m):
        """Y-variable y(i,m) of the Y-space of B."""
        return self._belt_variable("Y", self.b, i, m)

    def x(self, i, m):
        """Cluster variable x(i,m) of the A-space of -B."""
        return self._belt_variable("A", mat_neg(self.b), i, m)

    def y_sv(self, i, m):
        """Y-variable of the Y-space of -B^T."""
        return self._belt_variable("Y", mat_neg(self.bt), i, m)

    def rho_im(self, i, m) -> TropPoint:
        """g-vector of x_sv(i,m): the point of the Y-space of B with
        coordinates -e^i at the belt vertex t(i,m)."""
        r = self.cartan.rank
        coords = tuple(-1 if j == i - 1 else 0 for j in range(r))
        return TropPoint("Y", self.b, coords, canonical_address(i, m, r))

    def delta_sv_im(self, i, m) -> TropPoint:
        """g-vector of y(i,m): the point of the A-space of B^T with
        coordinates -e^i at t(i,m)."""
        r = self.cartan.rank
        coords = tuple(-1 if j == i - 1 else 0 for j in range(r))
        return TropPoint("A", self.bt, coords, canonical_address(i, m, r))


_belts = {}
_belts_lock = threading.Lock()


def belts(cartan: CartanMatrix) -> Belts:
    with _belts_lock:
        if cartan.entries not in _belts:
            _belts[cartan.entries] = Belts(cartan)
        return _belts[cartan.entries]


def generic_A_frieze(cartan, i, m) -> RationalFunction:
    return belts(cartan).x_sv(i, m)


def generic_Y_frieze(cartan, i, m) -> RationalFunction:
    return belts(cartan).y(i, m)


# -- realizations via tropical points ----------------------------------------


def f_from_trop_point(delta_sv: TropPoint, cartan: CartanMatrix) -> FriezeFunction:
    """Tropical frieze for A^T read off the coordinates of an A-space point of
    B^T along the belt."""
    b = belts(cartan)
    if delta_sv.space != "A" or delta_sv.b0 != b.bt:
        raise ValueError("expected a point of the A-space of B^T")
    r = cartan.rank

    def value(i, m):
        return delta_sv.coords_at(canonical_address(i, m, r))[i - 1]

    return FriezeFunction.from_values("tropical-frieze", cartan.transpose(), value)


def k_from_trop_point(rho: TropPoint, cartan: CartanMatrix) -> FriezeFunction:
    """Cluster-additive function for A read off a Y-space point of B."""
    b = belts(cartan)
    if rho.space != "Y" or rho.b0 != b.b:
        raise ValueError("expected a point of the Y-space of B")
    r = cartan.rank

    def value(i, m):
        return rho.coords_at(canonical_address(i, m, r))[i - 1]

    return FriezeFunction.from_values("cluster-additive", cartan, value)


def f_from_trop_point_neg(delta: TropPoint, cartan: CartanMatrix) -> FriezeFunction:
    """Tropical frieze for A itself, from an A-space point of -B (the pattern
    whose belt realizes the untransposed knitting relation)."""
    b = belts(cartan)
    if delta.space != "A" or delta.b0 != mat_neg(b.b):
        raise ValueError("expected a point of the A-space of -B")
    r = cartan.rank

    def value(i, m):
        return delta.coords_at(canonical_address(i, m, r))[i - 1]

    return FriezeFunction.from_values("tropical-frieze", cartan, value)


# -- piecewise-linear slice maps -----------------------------------------------


class PLMap:
    """The bijection E_A^{+/-} of Z^r: d |-> d^T + [d]_+^T U (resp. L)."""

    def __init__(self, cartan: CartanMatrix, sign):
        if sign not in ("+", "-"):
            raise ValueError("sign must be '+' or '-'")
        self.cartan = cartan
        self.sign = sign
        self.matrix = cartan.upper_part() if sign == "+" else cartan.lower_part()

    def apply(self, d):
        """Column vector in, row vector out."""
        a = self.matrix
        r = self.cartan.rank
        return tuple(
            d[i] + sum(pp(d[j]) * a[j][i] for j in range(r)) for i in range(r)
        )

    def invert(self, v):
        """Row vector in, column vector out, by forward substitution; the
        strict triangularity of the matrix makes each step explicit."""
        a = self.matrix
        r = self.cartan.rank
        d = [0] * r
        order = range(r) if self.sign == "+" else range(r - 1, -1, -1)
        for i in order:
            d[i] = v[i] - sum(pp(d[j]) * a[j][i] for j in range(r))
        return tuple(d)


def EA_apply(plmap: PLMap, d):
    return plmap.apply(d)


def EA_invert(plmap: PLMap, v):
    return plmap.invert(v)


def slice_step(cartan, values):
    """Next slice of a cluster-additive function: (E^+)^{-1}(-E^-(current))."""
    eplus = PLMap(cartan, "+")
    eminus = PLMap(cartan, "-")
    return eplus.invert(tuple(-x for x in eminus.apply(tuple(values))))


# -- hammocks, admissible elements, shifts -------------------------------------


def hammock(cartan, i, m) -> FriezeFunction:
    """The cluster-additive function whose m-th slice is -e_i."""
    r = cartan.rank
    values = tuple(-1 if j == i - 1 else 0 for j in range(r))
    return FriezeFunction.from_slice("cluster-additive", cartan, values, m0=m)


def f_from_admissible_y(y, cartan, depth=16, check=True) -> FriezeFunction:
    """Tropical frieze (for A^T) of an admissible element of the Y-space of B,
    by tropical evaluation at the g-vectors of the belt variables."""
    b = belts(cartan)
    if check:
        candidate = TropPoint("A", b.bt, _dvec_at_root(y))
        verdict = check_admissible_Y(y, candidate, depth)
        if verdict is not True:
            raise NotAdmissible(f"element failed the Y-side check: {verdict}")

    def value(i, m):
        return y.trop_eval(b.rho_im(i, m).at_root())

    return FriezeFunction.from_values("tropical-frieze", cartan.transpose(), value)


def k_from_admissible_x(x, cartan, depth=16, check=True) -> FriezeFunction:
    """Cluster-additive function (for A) of an admissible element of the
    A-space of B^T, by tropical evaluation at the g-vectors of the belt
    Y-variables."""
    b = belts(cartan)
    if check:
        rho0 = PLMap(cartan, "+").apply(_dvec_at_root(x))
        candidate = TropPoint("Y", b.b, rho0)
        verdict = check_admissible_A(x, candidate, depth)
        if verdict is not True:
            raise NotAdmissible(f"element failed the A-side check: {verdict}")

    def value(i, m):
        return x.trop_eval(b.delta_sv_im(i, m).at_root())

    return FriezeFunction.from_values("cluster-additive", cartan, value)


def _dvec_at_root(f):
    """Denominator vector of a universally Laurent element at the root."""
    return f.denominator_vector()


def shift(f: FriezeFunction) -> FriezeFunction:
    """Shift by one column: (i, m) -> f(i, m-1)."""
    return FriezeFunction.from_values(
        f.kind, f.cartan, lambda i, m: f.value(i, m - 1)
    )


def shift_trop(rho: TropPoint, cartan: CartanMatrix) -> TropPoint:
    """Shift map on Y-space points: root coordinates E^+((E^-)^{-1}(-rho_0))."""
    b = belts(cartan)
    if rho.space != "Y" or rho.b0 != b.b:
        raise ValueError("expected a point of the Y-space of B")
    root = rho.at_root()
    eplus = PLMap(cartan, "+")
    eminus = PLMap(cartan, "-")
    coords = eplus.apply(eminus.invert(tuple(-x for x in root)))
    return TropPoint("Y", b.b, coords)


def ensemble_map_friezes(f: FriezeFunction) -> FriezeFunction:
    """Image of a tropical frieze for A under the ensemble map, as a
    cluster-additive function for A."""
    if f.kind != "tropical-frieze":
        raise ValueError("expected a tropical frieze")
    a = f.cartan.entries
    r = f.cartan.rank

    def value(i, m):
        s = sum(-a[j][i - 1] * f.value(j + 1, m) for j in range(i, r))
        s += sum(-a[j][i - 1] * f.value(j + 1, m + 1) for j in range(i - 1))
        return s

    return FriezeFunction.from_values("cluster-additive", f.cartan, value)
