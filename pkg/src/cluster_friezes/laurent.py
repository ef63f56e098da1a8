"""Exact sparse Laurent-polynomial and rational-function arithmetic over Z.

Polynomials are stored as dicts mapping exponent tuples (entries may be
negative) to nonzero Python ints.  Fractions are kept in a canonical reduced
form so that equality is plain dict comparison:

  * the denominator is a true polynomial with nonzero constant term (all
    monomial content lives in the numerator),
  * numerator and denominator share no polynomial factor and no integer
    content,
  * the graded-lex leading coefficient of the denominator is positive.

Tropical (max-plus) evaluation is provided for fractions whose stored
coefficients are all positive.
"""

from __future__ import annotations

from math import gcd as int_gcd

from .errors import (
    DimensionMismatch,
    NotDivisible,
    SubtractionFreeViolation,
    TropOverflow,
    ZeroDenominator,
)

# Tropical coordinates are checked 64-bit quantities; growth past this bound
# is an error, never wraparound.
TROP_LIMIT = 2**63


def check_trop(value: int) -> int:
    if not -TROP_LIMIT < value < TROP_LIMIT:
        raise TropOverflow(f"tropical value {value} out of checked range")
    return value


def trop_add(a: int, b: int) -> int:
    return check_trop(max(a, b))


def trop_mul(a: int, b: int) -> int:
    return check_trop(a + b)


def _grlex_key(exp):
    return (sum(exp), exp)


class IntLaurentPoly:
    """Sparse Laurent polynomial with arbitrary-precision integer coefficients."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        if terms is None:
            terms = {}
        self.terms = {e: c for e, c in terms.items() if c != 0}
        self._hash = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, nvars):
        return cls(nvars)

    @classmethod
    def constant(cls, c, nvars):
        if c == 0:
            return cls(nvars)
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def one(cls, nvars):
        return cls.constant(1, nvars)

    @classmethod
    def variable(cls, i, nvars):
        """The variable x_i, 1-based."""
        if not 1 <= i <= nvars:
            raise DimensionMismatch(f"variable index {i} out of range 1..{nvars}")
        e = [0] * nvars
        e[i - 1] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def monomial(cls, exp, coeff=1):
        return cls(len(exp), {tuple(exp): coeff})

    # -- basic queries -----------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def is_one(self):
        return self.terms == {(0,) * self.nvars: 1}

    def is_monomial(self):
        return len(self.terms) == 1

    def is_constant(self):
        return not self.terms or self.terms.keys() == {(0,) * self.nvars}

    def constant_coeff(self):
        return self.terms.get((0,) * self.nvars, 0)

    def coefficients_nonnegative(self):
        return all(c > 0 for c in self.terms.values())

    def has_nonneg_exponents(self):
        return all(all(x >= 0 for x in e) for e in self.terms)

    def leading(self):
        """Graded-lex leading (exponent, coefficient); poly must be nonzero."""
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def min_exponents(self):
        """Componentwise minimum of exponents over all terms."""
        if not self.terms:
            raise ValueError("zero polynomial has no exponents")
        mins = [min(e[i] for e in self.terms) for i in range(self.nvars)]
        return tuple(mins)

    def degree_in(self, i):
        """Max exponent of variable i (0-based), -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    # -- ring operations ---------------------------------------------------

    def _check(self, other):
        if self.nvars != other.nvars:
            raise DimensionMismatch(
                f"operands over {self.nvars} and {other.nvars} variables"
            )

    def __eq__(self, other):
        if not isinstance(other, IntLaurentPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return IntLaurentPoly(self.nvars, out)

    def __neg__(self):
        return IntLaurentPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return IntLaurentPoly(self.nvars)
            return IntLaurentPoly(
                self.nvars, {e: c * other for e, c in self.terms.items()}
            )
        self._check(other)
        if len(self.terms) > len(other.terms):
            # iterate over the smaller operand in the outer loop
            return other * self
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    del out[e]
        return IntLaurentPoly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a polynomial; use RationalFunction")
        result = IntLaurentPoly.one(self.nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def shift(self, exp):
        """Multiply by the monomial x^exp."""
        return IntLaurentPoly(
            self.nvars,
            {tuple(a + b for a, b in zip(e, exp)): c for e, c in self.terms.items()},
        )

    def int_content(self):
        if not self.terms:
            return 0
        g = 0
        for c in self.terms.values():
            g = int_gcd(g, abs(c))
            if g == 1:
                break
        return g

    def div_int(self, n):
        return IntLaurentPoly(self.nvars, {e: c // n for e, c in self.terms.items()})

    # -- exact division ----------------------------------------------------

    def exact_div(self, other):
        """Exact quotient self/other in the Laurent ring; NotDivisible otherwise."""
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return IntLaurentPoly(self.nvars)
        # clear monomial content so both operands are true polynomials
        smin = self.min_exponents()
        omin = other.min_exponents()
        p = self.shift(tuple(-x for x in smin))
        q = other.shift(tuple(-x for x in omin))
        quot = _poly_exact_div(p, q)
        return quot.shift(tuple(a - b for a, b in zip(smin, omin)))

    # -- evaluation helpers --------------------------------------------------

    def trop_max(self, coords):
        """max over terms of <coords, exponent>; the poly must be nonzero."""
        if not self.terms:
            raise SubtractionFreeViolation("tropical evaluation of zero")
        best = None
        for e in self.terms:
            v = sum(c * x for c, x in zip(coords, e))
            if best is None or v > best:
                best = v
        return check_trop(best)

    # -- display -----------------------------------------------------------

    def to_str(self, names=None):
        if not self.terms:
            return "0"
        if names is None:
            names = [f"x{i + 1}" for i in range(self.nvars)]
        parts = []
        for e in sorted(self.terms, key=_grlex_key, reverse=True):
            c = self.terms[e]
            factors = [
                f"{names[i]}" if p == 1 else f"{names[i]}^{p}"
                for i, p in enumerate(e)
                if p != 0
            ]
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            elif c == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        s = " + ".join(parts)
        return s.replace("+ -", "- ")

    def __repr__(self):
        return f"IntLaurentPoly({self.to_str()})"


def _poly_exact_div(p, q):
    """Exact division of true polynomials by leading-term elimination.

    If q*h = p for some polynomial h the quotient is returned; any failure of
    leading-term divisibility proves inexactness and raises NotDivisible.
    """
    n = p.nvars
    qe, qc = q.leading()
    rem = dict(p.terms)
    out = {}
    while rem:
        re = max(rem, key=_grlex_key)
        rc = rem[re]
        if rc % qc != 0:
            raise NotDivisible("leading coefficient does not divide")
        de = tuple(a - b for a, b in zip(re, qe))
        if any(x < 0 for x in de):
            raise NotDivisible("leading monomial does not divide")
        dc = rc // qc
        out[de] = dc
        for e2, c2 in q.terms.items():
            e = tuple(a + b for a, b in zip(de, e2))
            s = rem.get(e, 0) - dc * c2
            if s:
                rem[e] = s
            else:
                rem.pop(e, None)
    return IntLaurentPoly(n, out)


# -- multivariate gcd (content / primitive-part recursion, primitive PRS) ----


def _to_univariate(p, var):
    """View p as a univariate poly in variable `var` with IntLaurentPoly coeffs."""
    coeffs = {}
    for e, c in p.terms.items():
        d = e[var]
        rest = e[:var] + (0,) + e[var + 1 :]
        coeffs.setdefault(d, {})[rest] = c
    return {d: IntLaurentPoly(p.nvars, t) for d, t in coeffs.items()}


def _from_univariate(coeffs, var):
    terms = {}
    nvars = None
    for d, poly in coeffs.items():
        nvars = poly.nvars
        for e, c in poly.terms.items():
            terms[e[:var] + (d,) + e[var + 1 :]] = c
    return IntLaurentPoly(nvars, terms)


def _uni_content(coeffs):
    g = None
    for poly in coeffs.values():
        g = poly if g is None else poly_gcd(g, poly)
        if g.is_one():
            break
    return g


def _uni_scale(coeffs, poly):
    return {d: p * poly for d, p in coeffs.items()}


def _uni_divexact(coeffs, poly):
    return {d: p.exact_div(poly) for d, p in coeffs.items()}


def _uni_sub(a, b):
    out = dict(a)
    for d, p in b.items():
        s = out.get(d)
        s = -p if s is None else s - p
        if s.is_zero():
            out.pop(d, None)
        else:
            out[d] = s
    return out


def _pseudo_rem(f, g):
    """Pseudo-remainder of univariate polys with IntLaurentPoly coefficients."""
    df, dg = max(f), max(g)
    lg = g[dg]
    rem = dict(f)
    while rem and max(rem) >= dg:
        dr = max(rem)
        lr = rem[dr]
        rem = _uni_scale(rem, lg)
        shift_g = {d + dr - dg: p * lr for d, p in g.items()}
        rem = _uni_sub(rem, shift_g)
        if any(d > dr for d in rem):
            raise AssertionError("pseudo-division failed to reduce degree")
    return rem


def poly_gcd(p, q):
    """gcd of true polynomials over Z, positive graded-lex leading coefficient."""
    if p.is_zero():
        g = q
    elif q.is_zero():
        g = p
    else:
        g = _poly_gcd_nonzero(p, q)
    if g.is_zero():
        return g
    if g.leading()[1] < 0:
        g = -g
    return g


def _poly_gcd_nonzero(p, q):
    n = p.nvars
    # trivial and monomial fast paths
    if p.is_constant() or q.is_constant():
        c = int_gcd(p.int_content(), q.int_content())
        return IntLaurentPoly.constant(c, n)
    if p.is_monomial() or q.is_monomial():
        c = int_gcd(p.int_content(), q.int_content())
        pmin, qmin = p.min_exponents(), q.min_exponents()
        exp = tuple(min(a, b) for a, b in zip(pmin, qmin))
        return IntLaurentPoly.monomial(exp, c)

    var = max(
        i for i in range(n) if p.degree_in(i) > 0 or q.degree_in(i) > 0
    )
    if p.degree_in(var) == 0 or q.degree_in(var) == 0:
        # one operand is free of the chosen variable: gcd divides its content
        if p.degree_in(var) > 0:
            p, q = q, p
        qc = _uni_content(_to_univariate(q, var))
        return poly_gcd(p, qc)

    fu = _to_univariate(p, var)
    gu = _to_univariate(q, var)
    fc = _uni_content(fu)
    gc = _uni_content(gu)
    f = _uni_divexact(fu, fc)
    g = _uni_divexact(gu, gc)
    if max(f) < max(g):
        f, g = g, f
    while True:
        r = _pseudo_rem(f, g)
        if not r:
            break
        if max(r) == 0:
            g = {0: IntLaurentPoly.one(n)}
            break
        rc = _uni_content(r)
        f, g = g, _uni_divexact(r, rc)
    cont = poly_gcd(fc, gc)
    prim = _from_univariate(g, var)
    prim = prim.exact_div(_uni_content(_to_univariate(prim, var)))
    return prim * cont


# -- rational functions ------------------------------------------------------


class RationalFunction:
    """Reduced fraction of Laurent polynomials, canonical per module docstring."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None, _reduced=False):
        if den is None:
            den = IntLaurentPoly.one(num.nvars)
        if _reduced:
            self.num, self.den = num, den
        else:
            self.num, self.den = _reduce(num, den)
        self._hash = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_poly(cls, p):
        return cls(p, IntLaurentPoly.one(p.nvars), _reduced=True)

    @classmethod
    def constant(cls, c, nvars):
        return cls.from_poly(IntLaurentPoly.constant(c, nvars))

    @classmethod
    def one(cls, nvars):
        return cls.constant(1, nvars)

    @classmethod
    def zero(cls, nvars):
        return cls.from_poly(IntLaurentPoly.zero(nvars))

    @classmethod
    def variable(cls, i, nvars):
        return cls.from_poly(IntLaurentPoly.variable(i, nvars))

    @classmethod
    def monomial(cls, exp, coeff=1):
        return cls.from_poly(IntLaurentPoly.monomial(exp, coeff))

    # -- queries -----------------------------------------------------------

    @property
    def nvars(self):
        return self.num.nvars

    def is_zero(self):
        return self.num.is_zero()

    def is_one(self):
        return self.num.is_one() and self.den.is_one()

    def is_laurent(self):
        """True when the reduced denominator is the constant 1."""
        return self.den.is_one()

    def laurent(self):
        if not self.den.is_one():
            raise ValueError("element is not a Laurent polynomial")
        return self.num

    def is_laurent_monomial(self):
        return self.den.is_one() and self.num.is_monomial()

    def monomial_exponent(self):
        if not self.is_laurent_monomial():
            raise ValueError("not a Laurent monomial")
        ((e, c),) = self.num.terms.items()
        if c != 1:
            raise ValueError("monomial has a nontrivial coefficient")
        return e

    def denominator_vector(self):
        """d-vector of a Laurent element: negated minimal exponents of num."""
        num = self.laurent()
        if num.is_zero():
            raise ValueError("zero element has no denominator vector")
        return tuple(-m for m in num.min_exponents())

    def subtraction_free(self):
        return (
            not self.num.is_zero()
            and self.num.coefficients_nonnegative()
            and self.den.coefficients_nonnegative()
        )

    # -- field operations ----------------------------------------------------

    def _check(self, other):
        if self.nvars != other.nvars:
            raise DimensionMismatch(
                f"operands over {self.nvars} and {other.nvars} variables"
            )

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __add__(self, other):
        if isinstance(other, int):
            other = RationalFunction.constant(other, self.nvars)
        self._check(other)
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        if isinstance(other, int):
            other = RationalFunction.constant(other, self.nvars)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return RationalFunction(self.num * other, self.den)
        self._check(other)
        # cross-cancel first; the four remaining pairs are then coprime, so
        # the product is already in canonical form
        a_num, b_den = _cancel(self.num, other.den)
        b_num, a_den = _cancel(other.num, self.den)
        return RationalFunction(a_num * b_num, a_den * b_den, _reduced=True)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, int):
            other = RationalFunction.constant(other, self.nvars)
        return self * other.inverse()

    def inverse(self):
        if self.num.is_zero():
            raise ZeroDenominator("inverse of zero")
        # numerator and denominator are coprime already; only the monomial
        # content and the leading sign need renormalizing
        shift = self.num.min_exponents()
        den = self.num.shift(tuple(-x for x in shift))
        num = self.den.shift(tuple(-x for x in shift))
        if den.leading()[1] < 0:
            num, den = -num, -den
        return RationalFunction(num, den, _reduced=True)

    def __pow__(self, n):
        if n == 0:
            return RationalFunction.one(self.nvars)
        base = self if n > 0 else self.inverse()
        n = abs(n)
        # coprimality and the canonical form survive taking powers
        return RationalFunction(base.num**n, base.den**n, _reduced=True)

    # -- substitution and tropical evaluation --------------------------------

    def substitute(self, targets):
        """Replace variable i (1-based) by targets[i-1]; targets are fractions."""
        if len(targets) != self.nvars:
            raise DimensionMismatch("wrong number of substitution targets")
        pow_cache = [dict() for _ in targets]

        def target_pow(i, n):
            cache = pow_cache[i]
            if n not in cache:
                cache[n] = targets[i] ** n
            return cache[n]

        def eval_poly(p):
            nv = targets[0].nvars if targets else 0
            total = RationalFunction.zero(nv)
            for e, c in p.terms.items():
                term = RationalFunction.constant(c, nv)
                for i, x in enumerate(e):
                    if x:
                        term = term * target_pow(i, x)
                total = total + term
            return total

        num = eval_poly(self.num)
        den = eval_poly(self.den)
        if den.is_zero():
            raise ZeroDenominator("substitution produced a zero denominator")
        return num / den

    def trop_eval(self, coords):
        """Max-plus evaluation of a subtraction-free fraction at integer coords."""
        if len(coords) != self.nvars:
            raise DimensionMismatch("coordinate vector has wrong length")
        if not self.subtraction_free():
            raise SubtractionFreeViolation(
                "element is not presented subtraction-free"
            )
        return check_trop(self.num.trop_max(coords) - self.den.trop_max(coords))

    def to_str(self, names=None):
        num = self.num.to_str(names)
        if self.den.is_one():
            return num
        den = self.den.to_str(names)
        if len(self.num.terms) > 1:
            num = f"({num})"
        if len(self.den.terms) > 1:
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self):
        return f"RationalFunction({self.to_str()})"


def _cancel(num, den):
    """Cancel the polynomial/integer gcd of num (Laurent) and den (poly)."""
    if den.is_one() or num.is_zero():
        return num, den
    nmin = num.min_exponents()
    npoly = num.shift(tuple(-x for x in nmin))
    g = poly_gcd(npoly, den)
    if not g.is_one():
        npoly = npoly.exact_div(g)
        den = den.exact_div(g)
        num = npoly.shift(nmin)
    return num, den


def _reduce(num, den):
    """Canonical reduced form; see module docstring."""
    if den.is_zero():
        raise ZeroDenominator("zero denominator")
    n = num.nvars
    if num.nvars != den.nvars:
        raise DimensionMismatch("numerator and denominator variable counts differ")
    if num.is_zero():
        return num, IntLaurentPoly.one(n)
    # move the denominator's monomial content into the numerator
    dmin = den.min_exponents()
    if any(dmin):
        den = den.shift(tuple(-x for x in dmin))
        num = num.shift(tuple(-x for x in dmin))
    num, den = _cancel(num, den)
    if den.leading()[1] < 0:
        num, den = -num, -den
    return num, den


def rf_reduce(num, den):
    """Reduced canonical fraction num/den."""
    return RationalFunction(num, den)


def exact_div(p, q):
    """Exact Laurent-ring quotient; raises NotDivisible on nonzero remainder."""
    return p.exact_div(q)


def substitute_monomials(f, matrix, base):
    """Substitute variable i of f by base^(column i of matrix).

    `matrix` is a sequence of rows of length equal to f.nvars; its column i
    gives the exponents of the tuple `base` used to replace variable i.
    """
    ncols = len(matrix[0]) if matrix else 0
    if ncols != f.nvars:
        raise DimensionMismatch("matrix column count must equal nvars of f")
    if len(matrix) != len(base):
        raise DimensionMismatch("matrix row count must equal number of base elements")
    targets = []
    for i in range(f.nvars):
        col = [row[i] for row in matrix]
        t = RationalFunction.one(base[0].nvars) if base else RationalFunction.one(0)
        for b, e in zip(base, col):
            if e:
                t = t * b**e
        targets.append(t)
    return f.substitute(targets)


def trop_eval(f, coords):
    """Tropical (max-plus) value of a subtraction-free fraction at coords."""
    return f.trop_eval(coords)
