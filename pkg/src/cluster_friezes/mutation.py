"""Seeds, matrix / cluster / coefficient mutation, and exchange graphs.

Matrices are immutable tuples of row tuples.  Mutation directions and matrix
indices in the public API are 1-based, matching the usual conventions for
exchange matrices; tree vertices are addressed by reduced edge words from the
root.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetExceeded, DimensionMismatch
from .laurent import IntLaurentPoly, RationalFunction

Matrix = tuple  # tuple of row tuples


def pp(x):
    """Positive part [x]_+ = max(x, 0)."""
    return x if x > 0 else 0


def as_matrix(rows) -> Matrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m)) if m else ()


def mat_neg(m: Matrix) -> Matrix:
    return tuple(tuple(-x for x in row) for row in m)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def row_times_matrix(row, m: Matrix):
    return tuple(sum(r * m[j][i] for j, r in enumerate(row)) for i in range(len(m[0])))


def matrix_times_col(m: Matrix, col):
    return tuple(sum(x * c for x, c in zip(row, col)) for row in m)


def find_skew_symmetrizer(b: Matrix):
    """Positive integer diagonal d with diag(d)*B skew-symmetric, or None."""
    r = len(b)
    for i in range(r):
        if b[i][i] != 0:
            return None
        for j in range(r):
            if (b[i][j] == 0) != (b[j][i] == 0):
                return None
            if b[i][j] * b[j][i] > 0:
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
                if b[i][j] != 0 and d[j] is None:
                    # d_i b_ij = -d_j b_ji
                    d[j] = d[i] * Fraction(b[i][j], -b[j][i])
                    stack.append(j)
    lcm = 1
    for x in d:
        lcm = lcm * x.denominator // _gcd(lcm, x.denominator)
    dints = tuple(int(x * lcm) for x in d)
    g = 0
    for x in dints:
        g = _gcd(g, x)
    dints = tuple(x // g for x in dints)
    for i in range(r):
        for j in range(r):
            if dints[i] * b[i][j] != -dints[j] * b[j][i]:
                return None
    return dints


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


class MutationMatrix:
    """Skew-symmetrizable integer matrix; validated at construction."""

    __slots__ = ("entries", "skew_symmetrizer")

    def __init__(self, rows):
        self.entries = as_matrix(rows)
        r = len(self.entries)
        if any(len(row) != r for row in self.entries):
            raise DimensionMismatch("mutation matrix must be square")
        d = find_skew_symmetrizer(self.entries)
        if d is None:
            raise ValueError("matrix is not skew-symmetrizable")
        self.skew_symmetrizer = d

    @property
    def rank(self):
        return len(self.entries)

    def mutate(self, k):
        return MutationMatrix(mutate_matrix_raw(self.entries, k))

    def __eq__(self, other):
        return isinstance(other, MutationMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"MutationMatrix({list(map(list, self.entries))})"


def mutate_matrix_raw(m: Matrix, k: int) -> Matrix:
    """Matrix mutation in direction k (1-based); works for square, tall and
    wide shapes as long as k indexes both a row and a column."""
    nrows, ncols = len(m), len(m[0])
    kk = k - 1
    if not (0 <= kk < nrows and kk < ncols):
        raise DimensionMismatch(f"direction {k} out of range")
    out = []
    for i in range(nrows):
        row = []
        for j in range(ncols):
            if i == kk or j == kk:
                row.append(-m[i][j])
            else:
                row.append(
                    m[i][j]
                    + pp(m[i][kk]) * pp(m[kk][j])
                    - pp(-m[i][kk]) * pp(-m[kk][j])
                )
        out.append(tuple(row))
    return tuple(out)


def mutate_matrix(b: MutationMatrix, k: int) -> MutationMatrix:
    if not 1 <= k <= b.rank:
        raise DimensionMismatch(f"direction {k} out of range 1..{b.rank}")
    return b.mutate(k)


# -- tree addresses ----------------------------------------------------------


def reduce_word(word):
    """Cancel adjacent equal letters; mutation in the same direction twice
    returns to the original seed."""
    out = []
    for k in word:
        if out and out[-1] == k:
            out.pop()
        else:
            out.append(int(k))
    return tuple(out)


def canonical_address(i: int, m: int, r: int):
    """Reduced edge word of the belt vertex t(i, m) from the root.

    Nonnegative columns follow the edge sequence (1, 2, ..., r, 1, 2, ...),
    negative columns the mirrored sequence (r, r-1, ..., 1, r, ...).
    """
    if not 1 <= i <= r:
        raise DimensionMismatch(f"index {i} out of range 1..{r}")
    if m >= 0:
        word = list(range(1, r + 1)) * m + list(range(1, i))
    else:
        word = list(range(r, 0, -1)) * (-m - 1) + list(range(r, i - 1, -1))
    return reduce_word(word)


class MatrixPattern:
    """Memoized assignment of matrices to reduced tree addresses."""

    def __init__(self, root: Matrix):
        self.root = as_matrix(root)
        self._memo = {(): self.root}
        self._lock = threading.RLock()

    def at(self, addr):
        addr = reduce_word(addr)
        with self._lock:
            if addr in self._memo:
                return self._memo[addr]
            # walk up to the deepest cached prefix, then extend
            depth = len(addr)
            while addr[:depth] not in self._memo:
                depth -= 1
            m = self._memo[addr[:depth]]
            for pos in range(depth, len(addr)):
                m = mutate_matrix_raw(m, addr[pos])
                self._memo[addr[: pos + 1]] = m
            return m


_matrix_patterns = {}
_matrix_patterns_lock = threading.Lock()


def matrix_pattern(root) -> MatrixPattern:
    root = as_matrix(root)
    with _matrix_patterns_lock:
        if root not in _matrix_patterns:
            _matrix_patterns[root] = MatrixPattern(root)
        return _matrix_patterns[root]


# -- seeds -------------------------------------------------------------------


@dataclass(frozen=True)
class Seed:
    """A labelled seed: exchange matrix (tall when frozen rows are present),
    mutable cluster, frozen variables, and the tree address it sits at."""

    kind: str  # "A" or "Y"
    matrix: Matrix
    cluster: tuple
    frozen: tuple
    address: tuple

    @property
    def rank(self):
        return len(self.cluster)

    def variables(self):
        return self.cluster + self.frozen

    def principal_part(self) -> Matrix:
        r = self.rank
        return tuple(row[:r] for row in self.matrix[:r])

    def coefficient_part(self) -> Matrix:
        r = self.rank
        return self.matrix[r:]

    def unordered_key(self):
        """Canonical form under simultaneous permutation of cluster entries
        and matrix rows/columns; frozen rows keep their place."""
        r = self.rank
        order = sorted(range(r), key=lambda i: _rf_sort_key(self.cluster[i]))
        cluster = tuple(self.cluster[i] for i in order)
        rows = [tuple(self.matrix[i][j] for j in order) for i in order]
        rows += [tuple(row[j] for j in order) for row in self.matrix[r:]]
        return (cluster, tuple(rows))


def _rf_sort_key(f: RationalFunction):
    return (
        tuple(sorted(f.num.terms.items())),
        tuple(sorted(f.den.terms.items())),
    )


def root_seed(kind, b0, nfrozen=0) -> Seed:
    """Initial seed whose cluster is the coordinate variables.

    For A-seeds, b0 may be a tall (r+nfrozen) x r extended matrix; the frozen
    variables are the trailing coordinates.
    """
    b0 = as_matrix(b0)
    r = len(b0[0])
    total = r + nfrozen
    if len(b0) != total:
        raise DimensionMismatch("matrix shape does not match frozen count")
    if kind not in ("A", "Y"):
        raise ValueError(f"unknown seed kind {kind!r}")
    if kind == "Y" and nfrozen:
        raise DimensionMismatch("Y-seeds carry no frozen variables here")
    cluster = tuple(RationalFunction.variable(i + 1, total) for i in range(r))
    frozen = tuple(RationalFunction.variable(i + 1, total) for i in range(r, total))
    return Seed(kind, b0, cluster, frozen, ())


def exchange_binomial(matrix: Matrix, variables, k):
    """The two-term exchange numerator at direction k (1-based)."""
    total = len(variables)
    nv = variables[0].nvars
    plus = IntLaurentPoly.one(nv)
    minus = IntLaurentPoly.one(nv)
    for j in range(total):
        b = matrix[j][k - 1]
        if b > 0:
            plus = plus * variables[j].laurent() ** b
        elif b < 0:
            minus = minus * variables[j].laurent() ** (-b)
    return plus + minus


def mutate_A_seed(seed: Seed, k: int) -> Seed:
    if seed.kind != "A":
        raise ValueError("A-mutation applied to a non-A seed")
    r = seed.rank
    if not 1 <= k <= r:
        raise DimensionMismatch(f"direction {k} out of range 1..{r}")
    variables = seed.variables()
    num = exchange_binomial(seed.matrix, variables, k)
    old = seed.cluster[k - 1]
    # the exchange relation divides exactly by the Laurent phenomenon
    new_num = num.exact_div(old.laurent())
    new = RationalFunction.from_poly(new_num)
    cluster = seed.cluster[: k - 1] + (new,) + seed.cluster[k:]
    return Seed(
        "A",
        mutate_matrix_raw(seed.matrix, k),
        cluster,
        seed.frozen,
        reduce_word(seed.address + (k,)),
    )


def mutate_Y_seed(seed: Seed, k: int) -> Seed:
    if seed.kind != "Y":
        raise ValueError("Y-mutation applied to a non-Y seed")
    r = seed.rank
    if not 1 <= k <= r:
        raise DimensionMismatch(f"direction {k} out of range 1..{r}")
    yk = seed.cluster[k - 1]
    one_plus = yk + 1
    cluster = []
    for i in range(1, r + 1):
        if i == k:
            cluster.append(yk.inverse())
            continue
        b = seed.matrix[k - 1][i - 1]
        yi = seed.cluster[i - 1]
        if b > 0:
            yi = yi * yk**b * one_plus ** (-b)
        elif b < 0:
            yi = yi * one_plus ** (-b)
        cluster.append(yi)
    return Seed(
        "Y",
        mutate_matrix_raw(seed.matrix, k),
        tuple(cluster),
        (),
        reduce_word(seed.address + (k,)),
    )


def mutate_seed(seed: Seed, k: int) -> Seed:
    return mutate_A_seed(seed, k) if seed.kind == "A" else mutate_Y_seed(seed, k)


class SeedPattern:
    """Memoized seed assignment for one root seed; safe for concurrent use."""

    def __init__(self, kind, b0, nfrozen=0):
        self.root = root_seed(kind, b0, nfrozen)
        self._memo = {(): self.root}
        self._lock = threading.RLock()

    def seed_at(self, addr) -> Seed:
        addr = reduce_word(addr)
        with self._lock:
            if addr in self._memo:
                return self._memo[addr]
            depth = len(addr)
            while addr[:depth] not in self._memo:
                depth -= 1
            seed = self._memo[addr[:depth]]
            for pos in range(depth, len(addr)):
                seed = mutate_seed(seed, addr[pos])
                self._memo[seed.address] = seed
            return seed


_seed_patterns = {}
_seed_patterns_lock = threading.Lock()


def seed_pattern(kind, b0, nfrozen=0) -> SeedPattern:
    key = (kind, as_matrix(b0), nfrozen)
    with _seed_patterns_lock:
        if key not in _seed_patterns:
            _seed_patterns[key] = SeedPattern(kind, b0, nfrozen)
        return _seed_patterns[key]


def seed_at(kind, b0, addr) -> Seed:
    """Seed reached from the root seed of b0 by walking addr."""
    return seed_pattern(kind, as_matrix(b0)).seed_at(addr)


def principal_extension(b0: Matrix) -> Matrix:
    """Tall matrix (B \\ I) for principal coefficients at the root."""
    b0 = as_matrix(b0)
    r = len(b0)
    ident = tuple(tuple(1 if i == j else 0 for j in range(r)) for i in range(r))
    return b0 + ident


def principal_pattern_at(b0, addr) -> Seed:
    """Principal-coefficients seed at addr: r mutable variables plus r frozen
    coefficient variables that never mutate."""
    b0 = as_matrix(b0)
    return seed_pattern("A", principal_extension(b0), len(b0)).seed_at(addr)


# -- g-vectors, c-vectors and F-polynomials ----------------------------------


@dataclass(frozen=True)
class GCFData:
    """G-matrix, C-matrix and F-polynomials of one principal-coefficients seed.

    Columns of gmatrix are the exponent vectors of the leading monomials of
    the mutable variables; fpolys live in the coefficient variables, have
    constant term 1 and nonnegative coefficients.
    """

    gmatrix: Matrix
    cmatrix: Matrix
    fpolys: tuple


class GCFPattern:
    """Walks the standard G/C/F mutation recurrences, memoized by address."""

    def __init__(self, b0):
        b0 = as_matrix(b0)
        r = len(b0)
        ident = tuple(tuple(1 if i == j else 0 for j in range(r)) for i in range(r))
        ones = tuple(IntLaurentPoly.one(r) for _ in range(r))
        self.b0 = b0
        self.rank = r
        self._memo = {(): (b0, ident, ident, ones)}
        self._lock = threading.RLock()

    def _step(self, state, k):
        b, g, c, f = state
        r = self.rank
        kk = k - 1
        nv = r
        pos = IntLaurentPoly.one(nv)
        neg = IntLaurentPoly.one(nv)
        for j in range(r):
            cjk = c[j][kk]
            if cjk > 0:
                pos = pos * IntLaurentPoly.variable(j + 1, nv) ** cjk
            elif cjk < 0:
                neg = neg * IntLaurentPoly.variable(j + 1, nv) ** (-cjk)
            bjk = b[j][kk]
            if bjk > 0:
                pos = pos * f[j] ** bjk
            elif bjk < 0:
                neg = neg * f[j] ** (-bjk)
        fk = (pos + neg).exact_div(f[kk])
        fnew = f[:kk] + (fk,) + f[kk + 1 :]
        # sign-coherence of the k-th c-vector selects the tropical sign
        eps = 1 if any(c[j][kk] > 0 for j in range(r)) else -1
        gnew = []
        for i in range(r):
            row = list(g[i])
            row[kk] = -g[i][kk] + sum(g[i][l] * pp(-eps * b[l][kk]) for l in range(r))
            gnew.append(tuple(row))
        cnew = []
        for i in range(r):
            row = [c[i][j] + c[i][kk] * pp(eps * b[kk][j]) for j in range(r)]
            row[kk] = -c[i][kk]
            cnew.append(tuple(row))
        return (mutate_matrix_raw(b, k), tuple(gnew), tuple(cnew), fnew)

    def at(self, addr):
        addr = reduce_word(addr)
        with self._lock:
            if addr in self._memo:
                return self._memo[addr]
            depth = len(addr)
            while addr[:depth] not in self._memo:
                depth -= 1
            state = self._memo[addr[:depth]]
            for pos in range(depth, len(addr)):
                state = self._step(state, addr[pos])
                self._memo[addr[: pos + 1]] = state
            return state


_gcf_patterns = {}
_gcf_patterns_lock = threading.Lock()


def gcf_pattern(b0) -> GCFPattern:
    b0 = as_matrix(b0)
    with _gcf_patterns_lock:
        if b0 not in _gcf_patterns:
            _gcf_patterns[b0] = GCFPattern(b0)
        return _gcf_patterns[b0]


def extract_gcf(b0, addr) -> GCFData:
    """G-matrix, C-matrix and F-polynomial data at addr for principal
    coefficients at the root."""
    b, g, c, f = gcf_pattern(b0).at(addr)
    data = GCFData(g, c, f)
    for poly in f:
        if poly.constant_coeff() != 1 or not poly.coefficients_nonnegative():
            raise AssertionError("F-polynomial failed sign-coherence shape")
    return data


def gcf_from_principal(b0, addr) -> GCFData:
    """G/C/F read off the symbolic principal-coefficients seed (slow oracle)."""
    b0 = as_matrix(b0)
    r = len(b0)
    seed = principal_pattern_at(b0, addr)
    gcols = []
    fpolys = []
    for i in range(r):
        u = seed.cluster[i].laurent()
        exp = next(iter(u.terms))
        deg = [exp[j] for j in range(r)]
        for j in range(r):
            coeff_exp = exp[r + j]
            for l in range(r):
                deg[l] -= b0[l][j] * coeff_exp
        gcols.append(tuple(deg))
        f_terms = {}
        for e, coeff in u.terms.items():
            key = e[r:]
            f_terms[key] = f_terms.get(key, 0) + coeff
        fpolys.append(IntLaurentPoly(r, f_terms))
    g = tuple(tuple(gcols[j][i] for j in range(r)) for i in range(r))
    c = tuple(row[:r] for row in seed.matrix[r:])
    return GCFData(g, c, tuple(fpolys))


# -- global-monomial tests ---------------------------------------------------


def is_cluster_monomial(b0, addr, exponents) -> bool:
    """A local monomial on an A-space is a cluster monomial iff its exponent
    vector is componentwise nonnegative."""
    del b0, addr
    return all(e >= 0 for e in exponents)


def is_global_Y_monomial(b0, addr, exponents) -> bool:
    """y_t^m is universally Laurent iff B_t m >= 0 componentwise."""
    bt = matrix_pattern(b0).at(addr)
    return all(v >= 0 for v in matrix_times_col(bt, tuple(exponents)))


def separation_check(b0, addr) -> bool:
    """Check y_t = y^{C_t} * F_t(y)^{B_t} as exact rational functions."""
    b0 = as_matrix(b0)
    r = len(b0)
    yseed = seed_at("Y", b0, addr)
    b, _, c, f = gcf_pattern(b0).at(addr)
    fr = [RationalFunction.from_poly(p) for p in f]
    for j in range(r):
        rhs = RationalFunction.monomial(tuple(c[i][j] for i in range(r)))
        for i in range(r):
            if b[i][j]:
                rhs = rhs * fr[i] ** b[i][j]
        if rhs != yseed.cluster[j]:
            return False
    return True


# -- exchange-graph enumeration ----------------------------------------------


@dataclass
class ExchangeGraph:
    kind: str
    b0: Matrix
    seeds: dict  # canonical key -> Seed (first reached)
    closed: bool

    @property
    def addresses(self):
        return [seed.address for seed in self.seeds.values()]

    def cluster_variables(self):
        """Distinct cluster entries over all enumerated seeds."""
        out = {}
        for seed in self.seeds.values():
            for i, x in enumerate(seed.cluster):
                out.setdefault(x, (seed.address, i + 1))
        return out


def enumerate_exchange_graph(kind, b0, max_seeds=10_000) -> ExchangeGraph:
    """BFS over mutations, identifying seeds that agree up to a simultaneous
    permutation of cluster and matrix indices.  Raises BudgetExceeded when the
    graph fails to close within max_seeds (likely infinite type)."""
    b0 = as_matrix(b0)
    r = len(b0[0])
    pattern = seed_pattern(kind, b0)
    start = pattern.seed_at(())
    seeds = {start.unordered_key(): start}
    frontier = [start]
    while frontier:
        next_frontier = []
        for seed in frontier:
            for k in range(1, r + 1):
                nbr = pattern.seed_at(seed.address + (k,))
                key = nbr.unordered_key()
                if key not in seeds:
                    if len(seeds) >= max_seeds:
                        raise BudgetExceeded(
                            f"exchange graph exceeded {max_seeds} seeds"
                        )
                    seeds[key] = nbr
                    next_frontier.append(nbr)
        frontier = next_frontier
    return ExchangeGraph(kind, b0, seeds, True)
