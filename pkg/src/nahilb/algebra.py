"""Exact sparse multivariate arithmetic over the rationals.

Everything downstream (weight multisets, localization sums, iterated
residues) reduces to three value types defined here:

* ``LinearForm``: a homogeneous degree-one form with rational coefficients
  in variables drawn from the namespaces ``s`` (torus weights), ``theta``
  (framing roots), ``eta`` (tautological placeholders) and ``z`` (residue
  variables).
* ``SparsePolynomial``: a dict-backed polynomial keyed by monomials, with
  exact rational coefficients (plain ints where integral, ``Fraction``
  otherwise; the two mix and compare transparently).
* ``FactoredRational``: ``scalar * poly * prod_i L_i**e_i`` with primitive
  pairwise non-proportional linear factors ``L_i`` and integer exponents.
  Euler classes of weight multisets live here natively, so localization
  never expands a denominator.

Variables are plain tuples ``(namespace, index)``.  The total order on
variables is namespace rank (s < theta < eta < z) then index; monomial
comparisons are graded lexicographic with earlier variables dominating.

Example::

    >>> s1, s2 = ("s", 1), ("s", 2)
    >>> p = SparsePolynomial.variable(s1) + SparsePolynomial.variable(s2)
    >>> q = p * p
    >>> q.homogeneous_degree()
    2
    >>> evaluate(q, {s1: Fraction(1), s2: Fraction(2)})
    Fraction(9, 1)

No polynomial gcd is ever computed: cancellation happens only by exact
trial division by linear factors, which is complete for the factored
denominators this engine produces.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .errors import DivisionByZero, MissingVariable, NotPolynomial

NAMESPACES = ("s", "theta", "eta", "z")
_NS_RANK = {ns: i for i, ns in enumerate(NAMESPACES)}

Var = tuple  # (namespace, index), index >= 1

_ZERO = 0
_ONE = 1


def _num(c):
    """Keep coefficients as plain ints whenever they are integral.

    int and Fraction mix transparently in arithmetic and compare (and
    hash) equal, and integer coefficients dominate in practice, so this
    skips Fraction overhead in the hot products without changing any
    observable value.
    """
    if type(c) is int:
        return c
    if c.denominator == 1:
        return c.numerator
    return c


def var_key(v: Var) -> tuple[int, int]:
    """Total order on variables: namespace rank, then index."""
    return (_NS_RANK[v[0]], v[1])


def var_name(v: Var) -> str:
    return f"{v[0]}{v[1]}"


def parse_var(name: str) -> Var:
    for ns in NAMESPACES:
        if name.startswith(ns) and name[len(ns):].isdigit():
            return (ns, int(name[len(ns):]))
    raise ValueError(f"not a variable name: {name!r}")


# A monomial is a tuple of (var, exponent) pairs, sorted by var_key,
# exponents >= 1.  The empty tuple is the constant monomial.

def _mono_mul(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        va, ea = a[i]
        vb, eb = b[j]
        ka, kb = var_key(va), var_key(vb)
        if ka == kb:
            out.append((va, ea + eb))
            i += 1
            j += 1
        elif ka < kb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def _mono_degree(m: tuple) -> int:
    return sum(e for _, e in m)


def _mono_sort_key(m: tuple):
    # Ascending sort by this key lists monomials in descending graded-lex
    # order, leading term first.
    return (-_mono_degree(m), tuple((var_key(v), -e) for v, e in m))


def _mono_divides(v: Var, m: tuple) -> bool:
    return any(w == v for w, _ in m)


def _mono_div_var(m: tuple, v: Var) -> tuple:
    out = []
    for w, e in m:
        if w == v:
            if e > 1:
                out.append((w, e - 1))
        else:
            out.append((w, e))
    return tuple(out)


class SparsePolynomial:
    """Polynomial with exact rational coefficients, keyed by sparse monomials."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {m: c for m, c in (terms or {}).items() if c != 0}

    @classmethod
    def zero(cls) -> "SparsePolynomial":
        return cls()

    @classmethod
    def one(cls) -> "SparsePolynomial":
        return cls({(): _ONE})

    @classmethod
    def constant(cls, c) -> "SparsePolynomial":
        return cls({(): _num(Fraction(c))})

    @classmethod
    def variable(cls, v: Var) -> "SparsePolynomial":
        return cls({((v, 1),): _ONE})

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == {(): _ONE}

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, SparsePolynomial) and self.terms == other.terms

    __hash__ = None

    def __neg__(self) -> "SparsePolynomial":
        return SparsePolynomial({m: -c for m, c in self.terms.items()})

    def __add__(self, other) -> "SparsePolynomial":
        if isinstance(other, (int, Fraction)):
            other = SparsePolynomial.constant(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            nc = out.get(m, _ZERO) + c
            if nc:
                out[m] = nc
            elif m in out:
                del out[m]
        p = SparsePolynomial.__new__(SparsePolynomial)
        p.terms = out
        return p

    __radd__ = __add__

    def __sub__(self, other) -> "SparsePolynomial":
        if isinstance(other, (int, Fraction)):
            other = SparsePolynomial.constant(other)
        return self + (-other)

    def __mul__(self, other) -> "SparsePolynomial":
        if isinstance(other, (int, Fraction)):
            c = _num(Fraction(other))
            if not c:
                return SparsePolynomial.zero()
            return SparsePolynomial({m: co * c for m, co in self.terms.items()})
        out: dict = {}
        if len(self.terms) > len(other.terms):
            a, b = other, self
        else:
            a, b = self, other
        for ma, ca in a.terms.items():
            for mb, cb in b.terms.items():
                m = _mono_mul(ma, mb)
                nc = out.get(m, _ZERO) + ca * cb
                if nc:
                    out[m] = nc
                elif m in out:
                    del out[m]
        p = SparsePolynomial.__new__(SparsePolynomial)
        p.terms = out
        return p

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "SparsePolynomial":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = SparsePolynomial.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def total_degree(self) -> int:
        """Maximum monomial degree; 0 for the zero polynomial."""
        if not self.terms:
            return 0
        return max(_mono_degree(m) for m in self.terms)

    def homogeneous_degree(self) -> int | None:
        """Common degree of all terms, or None if degrees are mixed.

        The zero polynomial reports 0.
        """
        if not self.terms:
            return 0
        degs = {_mono_degree(m) for m in self.terms}
        if len(degs) == 1:
            return degs.pop()
        return None

    def variables(self) -> set:
        out = set()
        for m in self.terms:
            for v, _ in m:
                out.add(v)
        return out

    def max_exponent(self, v: Var) -> int:
        """Largest exponent of v across terms (0 when absent)."""
        best = 0
        for m in self.terms:
            for w, e in m:
                if w == v and e > best:
                    best = e
        return best

    def split_by_exponent(self, v: Var) -> dict:
        """Decompose as sum_k v**k * (coefficient polynomial without v)."""
        out: dict[int, dict] = {}
        for m, c in self.terms.items():
            k = 0
            rest = []
            for w, e in m:
                if w == v:
                    k = e
                else:
                    rest.append((w, e))
            out.setdefault(k, {})[tuple(rest)] = c
        return {k: SparsePolynomial(d) for k, d in out.items()}

    def coefficient_of(self, v: Var, k: int) -> "SparsePolynomial":
        return self.split_by_exponent(v).get(k, SparsePolynomial.zero())

    def substitute(self, mapping: dict) -> "SparsePolynomial":
        """Replace each variable in mapping by a polynomial, in parallel."""
        pows: dict = {}

        def power(v, e):
            key = (v, e)
            if key not in pows:
                pows[key] = mapping[v] ** e
            return pows[key]

        out = SparsePolynomial.zero()
        for m, c in self.terms.items():
            keep = []
            repl = SparsePolynomial.constant(c)
            for v, e in m:
                if v in mapping:
                    repl = repl * power(v, e)
                else:
                    keep.append((v, e))
            if keep:
                repl = repl * SparsePolynomial({tuple(keep): _ONE})
            out = out + repl
        return out

    def evaluate(self, assignment: dict) -> Fraction:
        total = _ZERO
        for m, c in self.terms.items():
            val = c
            for v, e in m:
                if v not in assignment:
                    raise MissingVariable(f"no value for {var_name(v)}")
                val *= Fraction(assignment[v]) ** e
            total += val
        return Fraction(total)

    def sorted_terms(self) -> list:
        """Terms in descending graded-lex order, leading term first."""
        return sorted(self.terms.items(), key=lambda mc: _mono_sort_key(mc[0]))

    def leading(self) -> tuple:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        m = min(self.terms, key=_mono_sort_key)
        return m, self.terms[m]

    def extract_content(self) -> tuple:
        """Return (content, primitive) with primitive integer coefficients,
        gcd 1, positive leading coefficient.  Zero returns (1, zero)."""
        if not self.terms:
            return _ONE, self
        num = 0
        den = 1
        for c in self.terms.values():
            num = gcd(num, c.numerator)
            den = den * c.denominator // gcd(den, c.denominator)
        content = Fraction(num, den)
        _, lead = self.leading()
        if lead < 0:
            content = -content
        prim = SparsePolynomial(
            {m: _num(c / content) for m, c in self.terms.items()})
        return content, prim

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = "*".join(
                var_name(v) + (f"^{e}" if e > 1 else "") for v, e in m
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        out = " + ".join(parts)
        return out.replace("+ -", "- ")

    __repr__ = __str__


def exact_divide_linear(p: SparsePolynomial, form: "LinearForm") -> SparsePolynomial | None:
    """Quotient p / form when the division is exact, else None.

    Standard reduction by the leading term; for a linear divisor the
    remainder stays divisible whenever the input was, so a single failed
    step certifies non-divisibility.
    """
    if form.is_zero():
        raise DivisionByZero("division by the zero form")
    lead_var = form.leading_var()
    lead_coeff = form.coeffs[lead_var]
    quotient: dict = {}
    rem = p
    while rem.terms:
        m, c = rem.leading()
        if not _mono_divides(lead_var, m):
            return None
        qm = _mono_div_var(m, lead_var)
        qc = _num(Fraction(c) / lead_coeff)
        quotient[qm] = quotient.get(qm, _ZERO) + qc
        rem = rem - form.as_poly() * SparsePolynomial({qm: qc})
    return SparsePolynomial(quotient)


class LinearForm:
    """Homogeneous degree-one form with rational coefficients."""

    __slots__ = ("coeffs", "_key")

    def __init__(self, coeffs: dict | None = None):
        self.coeffs = {v: _num(Fraction(c))
                       for v, c in (coeffs or {}).items() if c != 0}
        self._key = tuple(sorted(
            ((var_key(v), c) for v, c in self.coeffs.items())
        ))

    @classmethod
    def variable(cls, v: Var) -> "LinearForm":
        return cls({v: _ONE})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        return isinstance(other, LinearForm) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def key(self):
        return self._key

    def __add__(self, other: "LinearForm") -> "LinearForm":
        out = dict(self.coeffs)
        for v, c in other.coeffs.items():
            out[v] = out.get(v, _ZERO) + c
        return LinearForm(out)

    def __sub__(self, other: "LinearForm") -> "LinearForm":
        out = dict(self.coeffs)
        for v, c in other.coeffs.items():
            out[v] = out.get(v, _ZERO) - c
        return LinearForm(out)

    def __neg__(self) -> "LinearForm":
        return LinearForm({v: -c for v, c in self.coeffs.items()})

    def scale(self, c) -> "LinearForm":
        return LinearForm({v: co * c for v, co in self.coeffs.items()})

    def leading_var(self) -> Var:
        """Variable with the smallest id among those present."""
        return min(self.coeffs, key=var_key)

    def primitive(self) -> tuple:
        """Return (content, primitive form): integer coprime coefficients,
        leading coefficient positive."""
        if not self.coeffs:
            return _ONE, self
        num = 0
        den = 1
        for c in self.coeffs.values():
            num = gcd(num, c.numerator)
            den = den * c.denominator // gcd(den, c.denominator)
        content = Fraction(num, den)
        if self.coeffs[self.leading_var()] < 0:
            content = -content
        return content, LinearForm({v: c / content for v, c in self.coeffs.items()})

    def as_poly(self) -> SparsePolynomial:
        return SparsePolynomial({((v, 1),): c for v, c in self.coeffs.items()})

    def evaluate(self, assignment: dict) -> Fraction:
        total = _ZERO
        for v, c in self.coeffs.items():
            if v not in assignment:
                raise MissingVariable(f"no value for {var_name(v)}")
            total += c * Fraction(assignment[v])
        return Fraction(total)

    def substitute(self, mapping: dict) -> "LinearForm":
        """Replace variables by linear forms, in parallel."""
        out: dict = {}
        for v, c in self.coeffs.items():
            if v in mapping:
                for w, cw in mapping[v].coeffs.items():
                    out[w] = out.get(w, _ZERO) + c * cw
            else:
                out[v] = out.get(v, _ZERO) + c
        return LinearForm(out)

    def max_index(self, namespace: str) -> int:
        """Largest index used in the namespace, or 0 when absent."""
        best = 0
        for (ns, idx) in self.coeffs:
            if ns == namespace and idx > best:
                best = idx
        return best

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for v in sorted(self.coeffs, key=var_key):
            c = self.coeffs[v]
            if c == 1:
                parts.append(var_name(v))
            elif c == -1:
                parts.append("-" + var_name(v))
            else:
                parts.append(f"{c}*{var_name(v)}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


def linear_form_of(weight, namespace: str) -> LinearForm:
    """Linear form of an integer weight vector in the given namespace,
    coordinate i paired with index i+1."""
    return LinearForm({(namespace, i + 1): Fraction(c)
                       for i, c in enumerate(weight) if c})


class FactoredRational:
    """scalar * poly * prod L_i**e_i in canonical form.

    The factors are primitive, pairwise distinct linear forms sorted by
    their coefficient key; the polynomial part is primitive with positive
    leading coefficient; zero is scalar 1 with zero polynomial part.
    Construct through :meth:`build`, which normalizes.
    """

    __slots__ = ("scalar", "poly", "factors")

    def __init__(self, scalar: Fraction, poly: SparsePolynomial, factors: tuple):
        self.scalar = scalar
        self.poly = poly
        self.factors = factors

    @classmethod
    def build(cls, scalar, poly: SparsePolynomial, factors=()) -> "FactoredRational":
        scalar = Fraction(scalar)
        merged: dict[LinearForm, int] = {}
        pending_zero = False
        for form, exp in factors:
            if exp == 0:
                continue
            if form.is_zero():
                if exp < 0:
                    raise DivisionByZero("zero linear form in a denominator")
                pending_zero = True
                continue
            content, prim = form.primitive()
            scalar *= content ** exp
            merged[prim] = merged.get(prim, 0) + exp
        if pending_zero or scalar == 0 or poly.is_zero():
            return cls(_ONE, SparsePolynomial.zero(), ())
        content, prim_poly = poly.extract_content()
        scalar *= content
        pairs = tuple(sorted(
            ((f, e) for f, e in merged.items() if e != 0),
            key=lambda fe: fe[0].key(),
        ))
        return cls(scalar, prim_poly, pairs)

    @classmethod
    def zero(cls) -> "FactoredRational":
        return cls(Fraction(1), SparsePolynomial.zero(), ())

    @classmethod
    def one(cls) -> "FactoredRational":
        return cls(Fraction(1), SparsePolynomial.one(), ())

    @classmethod
    def from_poly(cls, p: SparsePolynomial) -> "FactoredRational":
        return cls.build(_ONE, p)

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def __eq__(self, other) -> bool:
        return (isinstance(other, FactoredRational)
                and self.scalar == other.scalar
                and self.poly == other.poly
                and self.factors == other.factors)

    __hash__ = None

    def __neg__(self) -> "FactoredRational":
        return FactoredRational(-self.scalar, self.poly, self.factors) \
            if not self.is_zero() else self

    def __mul__(self, other) -> "FactoredRational":
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if c == 0 or self.is_zero():
                return FactoredRational.zero()
            return FactoredRational(self.scalar * c, self.poly, self.factors)
        return FactoredRational.build(
            self.scalar * other.scalar,
            self.poly * other.poly,
            self.factors + other.factors,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: "FactoredRational") -> "FactoredRational":
        if other.is_zero():
            raise DivisionByZero("division by the zero rational")
        if not other.poly.is_one():
            raise ValueError("divisor must have trivial polynomial part")
        return FactoredRational.build(
            Fraction(self.scalar) / other.scalar,
            self.poly,
            self.factors + tuple((f, -e) for f, e in other.factors),
        )

    def simplify(self) -> "FactoredRational":
        """Cancel denominator factors that exactly divide the polynomial."""
        if self.is_zero():
            return self
        poly = self.poly
        new_factors = []
        for form, exp in self.factors:
            while exp < 0:
                q = exact_divide_linear(poly, form)
                if q is None:
                    break
                poly = q
                exp += 1
            if exp:
                new_factors.append((form, exp))
        return FactoredRational.build(self.scalar, poly, new_factors)

    def expand(self) -> SparsePolynomial:
        """Multiply out; requires no remaining denominator factors."""
        r = self.simplify()
        if r.is_zero():
            return SparsePolynomial.zero()
        if any(e < 0 for _, e in r.factors):
            raise NotPolynomial(f"denominator factors remain: {r}")
        out = r.poly * r.scalar
        for form, exp in r.factors:
            out = out * (form.as_poly() ** exp)
        return out

    def evaluate(self, assignment: dict) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        total = Fraction(self.scalar) * self.poly.evaluate(assignment)
        for form, exp in self.factors:
            val = form.evaluate(assignment)
            if val == 0:
                if exp < 0:
                    raise DivisionByZero(f"factor {form} vanishes at the point")
                return Fraction(0)
            total *= val ** exp
        return total

    def homogeneous_degree(self) -> int | None:
        if self.is_zero():
            return 0
        d = self.poly.homogeneous_degree()
        if d is None:
            return None
        return d + sum(e for _, e in self.factors)

    def substitute_linear(self, mapping: dict) -> "FactoredRational":
        """Replace variables by linear forms everywhere; a denominator
        factor collapsing to zero raises DegenerateRestriction."""
        from .errors import DegenerateRestriction
        if self.is_zero():
            return self
        poly_map = {v: f.as_poly() for v, f in mapping.items()}
        new_poly = self.poly.substitute(poly_map)
        new_factors = []
        for form, exp in self.factors:
            nf = form.substitute(mapping)
            if nf.is_zero() and exp < 0:
                raise DegenerateRestriction(
                    f"denominator factor {form} collapses under the substitution")
            new_factors.append((nf, exp))
        return FactoredRational.build(self.scalar, new_poly, new_factors).simplify()

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        num = [f"({self.scalar})"] if self.scalar != 1 else []
        if not self.poly.is_one() or not num and not self.factors:
            num.append(f"({self.poly})")
        den = []
        for form, exp in self.factors:
            target = num if exp > 0 else den
            e = abs(exp)
            target.append(f"({form})" + (f"^{e}" if e > 1 else ""))
        out = "*".join(num) if num else "1"
        if den:
            out += " / " + "*".join(den)
        return out

    __repr__ = __str__


def sum_factored(items) -> FactoredRational:
    """Exact sum of factored rationals over a common factored denominator.

    The common denominator is the factorwise maximum of the negative
    exponents; each summand is expanded against it, the numerator
    polynomials are added, and the result is simplified by trial division.
    """
    items = [r for r in items if not r.is_zero()]
    if not items:
        return FactoredRational.zero()
    needed: dict[LinearForm, int] = {}
    for r in items:
        for form, exp in r.factors:
            if exp < 0:
                needed[form] = max(needed.get(form, 0), -exp)
    total = SparsePolynomial.zero()
    for r in items:
        contrib = r.poly * r.scalar
        exps = dict(needed)
        for form, exp in r.factors:
            if form in exps:
                exps[form] += exp
            elif exp > 0:
                exps[form] = exp
            # exp < 0 with form not in needed cannot happen by construction
        for form, exp in exps.items():
            if exp:
                contrib = contrib * (form.as_poly() ** exp)
        total = total + contrib
    return FactoredRational.build(
        _ONE, total, tuple((f, -e) for f, e in needed.items())
    ).simplify()


def rational_equal(a: FactoredRational, b: FactoredRational) -> bool:
    """Mathematical equality, independent of the factored presentation."""
    a = a.simplify()
    b = b.simplify()
    if a == b:
        return True
    return sum_factored([a, -b]).is_zero()


def evaluate(value, assignment: dict) -> Fraction:
    """Evaluate a LinearForm, SparsePolynomial or FactoredRational at a
    point given as a map from variables to rationals."""
    if isinstance(value, (LinearForm, SparsePolynomial, FactoredRational)):
        return value.evaluate(assignment)
    raise TypeError(f"cannot evaluate {type(value).__name__}")


def homogeneous_degree(value) -> int | None:
    """Common total degree of the value, or None when inhomogeneous."""
    if isinstance(value, LinearForm):
        return 0 if value.is_zero() else 1
    if isinstance(value, (SparsePolynomial, FactoredRational)):
        return value.homogeneous_degree()
    raise TypeError(f"no degree for {type(value).__name__}")
