"""Tropical points of A- and Y-spaces and their piecewise-linear mutation.

A tropical point is stored as one coordinate row vector anchored at a tree
vertex; coordinates elsewhere are propagated on demand through the matrix
pattern and cached.  The three supported spaces differ only in the mutation
rule and the width of the pattern matrix:

  * "A"      square pattern, rule with a max over the two column halves,
  * "Y"      square pattern, rule linear in the sign of the moved coordinate,
  * "Yprin"  wide r x 2r pattern, same rule as "Y".
"""

from __future__ import annotations

import threading
from itertools import product

from .errors import DimensionMismatch, NegativeExponent
from .laurent import check_trop
from .mutation import (
    as_matrix,
    matrix_pattern,
    pp,
    reduce_word,
    row_times_matrix,
    seed_pattern,
    transpose,
)


def trop_mutate_A(coords, b, k):
    """Tropicalized cluster-variable mutation in direction k (1-based)."""
    kk = k - 1
    plus = sum(pp(b[j][kk]) * coords[j] for j in range(len(coords)))
    minus = sum(pp(-b[j][kk]) * coords[j] for j in range(len(coords)))
    new = -coords[kk] + max(plus, minus)
    check_trop(new)
    return coords[:kk] + (new,) + coords[kk + 1 :]


def trop_mutate_Y(coords, b, k):
    """Tropicalized Y-variable mutation; b may be square or wide."""
    kk = k - 1
    ck = coords[kk]
    out = []
    for i in range(len(coords)):
        if i == kk:
            out.append(-ck)
        else:
            bki = b[kk][i]
            out.append(check_trop(coords[i] + pp(bki) * ck - bki * pp(ck)))
    return tuple(out)


_RULES = {"A": trop_mutate_A, "Y": trop_mutate_Y, "Yprin": trop_mutate_Y}


class TropPoint:
    """Tropical point anchored at one vertex; coordinates cached per address."""

    __slots__ = ("space", "b0", "anchor", "coords", "_cache", "_lock")

    def __init__(self, space, b0, coords, anchor=()):
        if space not in _RULES:
            raise ValueError(f"unknown space {space!r}")
        self.space = space
        self.b0 = as_matrix(b0)
        self.anchor = reduce_word(anchor)
        self.coords = tuple(int(c) for c in coords)
        width = len(self.b0[0])
        if space == "Yprin":
            if width != 2 * len(self.b0):
                raise DimensionMismatch("Yprin pattern matrix must be r x 2r")
        elif width != len(self.b0):
            raise DimensionMismatch("pattern matrix must be square")
        if len(self.coords) != width:
            raise DimensionMismatch("coordinate vector has wrong length")
        self._cache = {self.anchor: self.coords}
        self._lock = threading.RLock()

    @property
    def rank(self):
        return len(self.b0)

    def coords_at(self, addr):
        """Coordinate vector at a tree vertex, propagated from the nearest
        cached ancestor (every vertex passed gets cached)."""
        addr = reduce_word(addr)
        with self._lock:
            if addr in self._cache:
                return self._cache[addr]
            pattern = matrix_pattern(self.b0)
            rule = _RULES[self.space]
            if () not in self._cache:
                # walk the anchor up to the root once; afterwards some prefix
                # of any target is always cached
                cur_addr, cur = self.anchor, self.coords
                while cur_addr:
                    cur = rule(cur, pattern.at(cur_addr), cur_addr[-1])
                    cur_addr = cur_addr[:-1]
                    self._cache.setdefault(cur_addr, cur)
            depth = len(addr)
            while addr[:depth] not in self._cache:
                depth -= 1
            cur_addr = addr[:depth]
            cur = self._cache[cur_addr]
            for pos in range(depth, len(addr)):
                k = addr[pos]
                cur = rule(cur, pattern.at(cur_addr), k)
                cur_addr = cur_addr + (k,)
                self._cache.setdefault(cur_addr, cur)
            return cur

    def at_root(self):
        return self.coords_at(())

    def __eq__(self, other):
        if not isinstance(other, TropPoint):
            return NotImplemented
        return (
            self.space == other.space
            and self.b0 == other.b0
            and other.coords_at(self.anchor) == self.coords
        )

    def __hash__(self):
        return hash((self.space, self.b0, self.at_root()))

    def __repr__(self):
        return f"TropPoint({self.space}, coords_at_root={self.at_root()})"


def coords_at(point: TropPoint, addr):
    return point.coords_at(addr)


def p_map(delta: TropPoint) -> TropPoint:
    """Ensemble map: chart-linear, coords delta_t B_t in the Y-space of the
    same pattern."""
    if delta.space != "A":
        raise ValueError("p_map expects an A-space point")
    bt = matrix_pattern(delta.b0).at(delta.anchor)
    coords = row_times_matrix(delta.coords, bt)
    return TropPoint("Y", delta.b0, coords, delta.anchor)


def principal_wide_root(b0):
    """Wide matrix (B^T I) of the principal Y-pattern attached to B."""
    b0 = as_matrix(b0)
    r = len(b0)
    bt = transpose(b0)
    return tuple(
        bt[i] + tuple(1 if j == i else 0 for j in range(r)) for i in range(r)
    )


def beta_map(delta_sv: TropPoint, b0) -> TropPoint:
    """Injective map from A-space points of B^T into the principal Y-space:
    coordinates (delta_t B_t^T, delta_t C_t^T)."""
    from .mutation import gcf_pattern

    b0 = as_matrix(b0)
    if delta_sv.space != "A" or delta_sv.b0 != transpose(b0):
        raise ValueError("beta_map expects an A-space point of the transpose")
    b, _, c, _ = gcf_pattern(b0).at(delta_sv.anchor)
    d = delta_sv.coords
    left = row_times_matrix(d, transpose(b))
    right = row_times_matrix(d, transpose(c))
    return TropPoint("Yprin", principal_wide_root(b0), left + right, delta_sv.anchor)


def g_vector_of_cluster_monomial(b0, addr, exponents) -> TropPoint:
    """g-vector of the cluster monomial with the given exponents at addr, as a
    tropical point of the Y-space of b0."""
    if any(e < 0 for e in exponents):
        raise NegativeExponent("cluster monomials have nonnegative exponents")
    coords = tuple(-e for e in exponents)
    return TropPoint("Y", b0, coords, addr)


def d_trop_point(space, b0, addr, i) -> TropPoint:
    """The d-tropical point of the i-th variable (1-based) at addr."""
    b0 = as_matrix(b0)
    r = len(b0)
    coords = tuple(-1 if j == i - 1 else 0 for j in range(r))
    return TropPoint(space, b0, coords, addr)


def d_compat_degree(d_point: TropPoint, f) -> int:
    """Tropical value of f (subtraction-free, in root-chart coordinates) at a
    d-tropical point."""
    return f.trop_eval(d_point.at_root())


# -- admissibility -----------------------------------------------------------

UNKNOWN = None


def _in_cone(bt_t, offset, bound=24):
    """Is offset = bt_t * u for some integer u >= 0?  Returns True/False or
    UNKNOWN when the bounded search is exhausted without a certificate."""
    r = len(offset)
    cols = list(zip(*bt_t))
    # exact rational solve decides the full-rank case outright
    sol = _solve_unique(bt_t, offset)
    if sol is not None:
        return all(x == int(x) and x >= 0 for x in sol)
    if all(x == 0 for x in offset):
        return True
    if not _consistent(bt_t, offset):
        return False
    limit = sum(abs(x) for x in offset) + 2
    if limit > bound or (limit + 1) ** r > 200_000:
        return UNKNOWN
    for u in product(range(limit + 1), repeat=r):
        if not any(u):
            continue
        if all(
            sum(cols[j][i] * u[j] for j in range(r)) == offset[i] for i in range(r)
        ):
            return True
    # solutions exist over the rationals but none was found in the box
    return UNKNOWN


def _solve_unique(m, rhs):
    """Solve m*u = rhs over Q by Gaussian elimination; None when singular."""
    from fractions import Fraction

    n = len(rhs)
    a = [[Fraction(m[i][j]) for j in range(n)] + [Fraction(rhs[i])] for i in range(n)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        for i in range(n):
            if i != col and a[i][col] != 0:
                factor = a[i][col] / a[col][col]
                a[i] = [x - factor * y for x, y in zip(a[i], a[col])]
    return [a[i][n] / a[i][i] for i in range(n)]


def _consistent(m, rhs):
    """Rational solvability of m*u = rhs (rank test on the augmented matrix)."""
    from fractions import Fraction

    n = len(rhs)
    a = [[Fraction(m[i][j]) for j in range(n)] + [Fraction(rhs[i])] for i in range(n)]
    row = 0
    for col in range(n):
        piv = next((i for i in range(row, n) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        for i in range(n):
            if i != row and a[i][col] != 0:
                factor = a[i][col] / a[row][col]
                a[i] = [x - factor * y for x, y in zip(a[i], a[row])]
        row += 1
    return all(
        a[i][n] == 0 for i in range(row, n)
    )


def _pointed_form_ok(expansion, pointed, cone_matrix=None):
    """Check the pointed-expansion shape: coefficient 1 at `pointed`, all
    coefficients nonnegative, every offset nonnegative (and in the cone
    spanned by cone_matrix columns when given).  Returns True/False/UNKNOWN."""
    if not expansion.is_laurent():
        return False
    terms = expansion.laurent().terms
    if terms.get(pointed, 0) != 1:
        return False
    unknown = False
    for e, c in terms.items():
        if c < 0:
            return False
        if e == pointed:
            continue
        offset = tuple(a - b for a, b in zip(e, pointed))
        if cone_matrix is None:
            if any(x < 0 for x in offset):
                return False
        else:
            hit = _in_cone(cone_matrix, offset)
            if hit is False:
                return False
            if hit is UNKNOWN:
                unknown = True
    return UNKNOWN if unknown else True


def reexpress_A(f, pattern, addr, k):
    """Rewrite f from the chart at addr into the chart across edge k."""
    from .laurent import RationalFunction

    target = reduce_word(addr + (k,))
    seed = pattern.seed_at(target)
    b = seed.matrix
    r = seed.rank
    nv = r
    targets = [RationalFunction.variable(j + 1, nv) for j in range(r)]
    plus = RationalFunction.one(nv)
    minus = RationalFunction.one(nv)
    for j in range(r):
        bjk = b[j][k - 1]
        if bjk > 0:
            plus = plus * targets[j] ** bjk
        elif bjk < 0:
            minus = minus * targets[j] ** (-bjk)
    targets[k - 1] = (plus + minus) / RationalFunction.variable(k, nv)
    return f.substitute(targets)


def reexpress_Y(f, pattern, addr, k):
    from .laurent import RationalFunction

    target = reduce_word(addr + (k,))
    seed = pattern.seed_at(target)
    b = seed.matrix
    r = seed.rank
    yk = RationalFunction.variable(k, r)
    one_plus = yk + 1
    targets = []
    for i in range(1, r + 1):
        if i == k:
            targets.append(yk.inverse())
            continue
        t = RationalFunction.variable(i, r)
        bki = b[k - 1][i - 1]
        if bki > 0:
            t = t * yk**bki * one_plus ** (-bki)
        elif bki < 0:
            t = t * one_plus ** (-bki)
        targets.append(t)
    return f.substitute(targets)


def _check_admissible(element, point, root_matrix, reexpress, with_cone, depth):
    """Shared depth-bounded admissibility walk over the tree with pruning of
    repeated unordered seeds; three-valued outcome."""
    pattern = seed_pattern("A" if with_cone else "Y", root_matrix)
    start = pattern.seed_at(())
    seen = {start.unordered_key()}
    frontier = [((), element)]
    unknown = False
    closed = True
    r = len(root_matrix)
    for step in range(depth + 1):
        next_frontier = []
        for addr, expr in frontier:
            seed = pattern.seed_at(addr)
            pointed = tuple(-c for c in point.coords_at(addr))
            cone = None
            if with_cone:
                # the A-pattern matrix at t equals B_t^T for the paired
                # Y-pattern, whose columns span the admissible offset cone
                cone = seed.principal_part()
            ok = _pointed_form_ok(expr, pointed, cone)
            if ok is False:
                return False
            if ok is UNKNOWN:
                unknown = True
            if step == depth:
                continue
            for k in range(1, r + 1):
                nbr = pattern.seed_at(addr + (k,))
                key = nbr.unordered_key()
                if key in seen:
                    continue
                seen.add(key)
                next_frontier.append((nbr.address, reexpress(expr, pattern, addr, k)))
        if not next_frontier and step < depth:
            break
        frontier = next_frontier
    else:
        closed = False
    if unknown:
        return UNKNOWN
    if not closed:
        return UNKNOWN
    return True


def check_admissible_A(x, rho: TropPoint, depth=16):
    """Pointed-Laurent admissibility of x on the A-space dual to rho's
    Y-space; offsets must lie in the cone B_t^T Z_{>=0}^r at every vertex
    within the given mutation distance (all vertices when the exchange graph
    closes earlier).  Returns True, False, or UNKNOWN."""
    if rho.space != "Y":
        raise ValueError("expected a Y-space tropical point")
    return _check_admissible(
        x, rho, transpose(rho.b0), reexpress_A, True, depth
    )


def check_admissible_Y(y, delta_sv: TropPoint, depth=16):
    """Pointed-Laurent admissibility of y on the Y-space dual to delta_sv's
    A-space; offsets need only be componentwise nonnegative."""
    if delta_sv.space != "A":
        raise ValueError("expected an A-space tropical point")
    return _check_admissible(
        y, delta_sv, transpose(delta_sv.b0), reexpress_Y, False, depth
    )
