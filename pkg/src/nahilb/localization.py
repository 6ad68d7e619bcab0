"""Virtual localization over nested Hilbert schemes of affine space.

Integrals are sums over the monomial fixed points of the torus action.
A chain contributes the restriction of the integrand times the Euler
class of its moving obstruction weights over the Euler class of its
moving tangent weights, and only when the fixed parts of the two
complexes have equal rank; chains failing that gate contribute zero.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import (
    FactoredRational,
    LinearForm,
    SparsePolynomial,
    linear_form_of,
    sum_factored,
)
from .errors import (
    IndexOutOfRange,
    InconsistentVirtualDimension,
    NoFixedPoints,
    NotBisymmetric,
    RequiresFullFlag,
    RequiresNilfil,
)
from .partitions import (
    Enumeration,
    canonical_enumeration,
    enumerate_nested,
    is_nilfil,
)
from .weights import (
    epunct_class,
    euler_class,
    obstruction_class,
    obstruction_net_count,
    punctual_net_count,
    tangent_class,
    tangent_class_punctual,
    tangent_net_count,
)

SPACES = ("nhilb", "nilfil")


class TautClass:
    """Polynomial integrand in theta_1..theta_q and eta_1..eta_{d-1}.

    theta_i are the Chern roots of the twisting representation and eta_j
    is the weight of the j-th chain point (eta_0 = 0 stays implicit).
    Construction checks symmetry under adjacent transpositions within
    each block; check=False skips this for integrands carrying extra
    parameters, such as folded Euler factors in the s-variables.
    """

    __slots__ = ("poly", "q", "d")

    def __init__(self, poly, q: int, d: int, check: bool = True):
        if isinstance(poly, (int, Fraction)):
            poly = SparsePolynomial.constant(poly)
        self.poly = poly
        self.q = int(q)
        self.d = int(d)
        if self.q < 0 or self.d < 1:
            raise IndexOutOfRange(f"invalid block sizes q={q}, d={d}")
        for ns, idx in poly.variables():
            if ns == "theta" and not 1 <= idx <= self.q:
                raise IndexOutOfRange(f"theta_{idx} outside 1..{self.q}")
            if ns == "eta" and not 1 <= idx <= self.d - 1:
                raise IndexOutOfRange(f"eta_{idx} outside 1..{self.d - 1}")
            if ns == "z":
                raise IndexOutOfRange("z-variables are residue-internal")
        if check:
            self._check_blocks()

    def _check_blocks(self):
        for ns, size in (("theta", self.q), ("eta", self.d - 1)):
            for i in range(1, size):
                a, b = (ns, i), (ns, i + 1)
                swap = {a: SparsePolynomial.variable(b),
                        b: SparsePolynomial.variable(a)}
                if self.poly.substitute(swap) != self.poly:
                    raise NotBisymmetric(
                        f"not symmetric under {ns}_{i} <-> {ns}_{i + 1}")

    def __eq__(self, other) -> bool:
        return (isinstance(other, TautClass) and self.poly == other.poly
                and self.q == other.q and self.d == other.d)

    __hash__ = None

    def __repr__(self) -> str:
        return f"TautClass({self.poly}, q={self.q}, d={self.d})"


class IntegralResult:
    """Value of a virtual integral together with how it was computed."""

    __slots__ = ("value", "vdim", "method", "space")

    def __init__(self, value: FactoredRational, vdim: int, method: str,
                 space: str):
        self.value = value
        self.vdim = vdim
        self.method = method
        self.space = space

    def __repr__(self) -> str:
        return (f"IntegralResult({self.value}, vdim={self.vdim}, "
                f"method={self.method}, space={self.space})")


def chern_taut(k: int, q: int, d: int, dual: bool = False) -> TautClass:
    """k-th Chern class of the twisted tautological bundle, an elementary
    symmetric polynomial in the roots theta_i - eta_j (0 <= j <= d-1).

    For q = 0 the roots degenerate to the d values -eta_j, or eta_j when
    dual is set.
    """
    limit = d if q == 0 else q * d
    if not 0 <= k <= limit:
        raise IndexOutOfRange(f"no c_{k} with q={q}, d={d}")
    roots = []
    sign = Fraction(-1 if dual else 1)
    for j in range(d):
        eta = LinearForm({("eta", j): Fraction(1)}) if j else LinearForm()
        if q == 0:
            roots.append(eta.scale(-sign))
        else:
            for i in range(1, q + 1):
                theta = LinearForm({("theta", i): Fraction(1)})
                roots.append((theta - eta).scale(sign))
    elem = [SparsePolynomial.one()] + [SparsePolynomial.zero()] * k
    for root in roots:
        rp = root.as_poly()
        for t in range(min(k, len(roots)), 0, -1):
            elem[t] = elem[t] + rp * elem[t - 1]
    return TautClass(elem[k], q, d)


def restrict_class(P: TautClass, e: Enumeration) -> SparsePolynomial:
    """Specialize eta_j to the weight of the j-th chain point of e."""
    mapping = {}
    for ns, idx in P.poly.variables():
        if ns == "eta":
            if idx >= e.d:
                raise IndexOutOfRange(
                    f"eta_{idx} needs a chain of more than {e.d} points")
            mapping[(ns, idx)] = linear_form_of(e.points[idx], "s").as_poly()
    return P.poly.substitute(mapping) if mapping else P.poly


def _point_value(e: Enumeration, space: str, P: TautClass):
    """Contribution of one chain plus the net ranks used for vdim checks."""
    if space == "nilfil":
        if not is_nilfil(e.nested()):
            raise RequiresNilfil(f"{e.nested()} has a non-nilpotent step")
        tangent = tangent_class_punctual(e)
    else:
        tangent = tangent_class(e)
    obstruction = obstruction_class(e)
    ranks = (tangent.net_rank(), obstruction.net_rank())
    if tangent.fixed_rank() != obstruction.fixed_rank():
        return FactoredRational.zero(), ranks
    value = FactoredRational.from_poly(restrict_class(P, e))
    value = value * euler_class(obstruction.moving(), "s")
    value = value / euler_class(tangent.moving(), "s")
    return value.simplify(), ranks


def contribution(e: Enumeration, n: int, space: str,
                 P: TautClass) -> FactoredRational:
    """Localization contribution of a single fixed chain."""
    if space not in SPACES:
        raise ValueError(f"unknown space {space!r}")
    if e.n != n:
        raise ValueError(f"enumeration lives in {e.n} variables, not {n}")
    value, _ = _point_value(e, space, P)
    return value


def _expected_vdim(n: int, dims, space: str) -> int:
    if space == "nilfil":
        return punctual_net_count(n, dims) - obstruction_net_count(dims)
    return tangent_net_count(n, dims) - obstruction_net_count(dims)


def integrate_localization(n: int, dims, space: str,
                           P: TautClass) -> IntegralResult:
    """Equivariant virtual integral of P as a sum over fixed chains."""
    if space not in SPACES:
        raise ValueError(f"unknown space {space!r}")
    dims = tuple(int(x) for x in dims)
    points = enumerate_nested(n, dims)
    if space == "nilfil":
        points = [p for p in points if is_nilfil(p)]
    vdim = _expected_vdim(n, dims, space)
    terms = []
    for np_ in points:
        e = canonical_enumeration(np_)
        value, (tan_net, obs_net) = _point_value(e, space, P)
        if tan_net - obs_net != vdim:
            raise InconsistentVirtualDimension(
                f"{np_} reports {tan_net - obs_net}, expected {vdim}")
        terms.append(value)
    value = sum_factored(terms)
    _check_degree(value, P, vdim)
    return IntegralResult(value, vdim, "localization", space)


def _check_degree(value: FactoredRational, P: TautClass, vdim: int):
    pdeg = P.poly.homogeneous_degree()
    if value.is_zero() or pdeg is None:
        return
    assert value.homogeneous_degree() == pdeg - vdim, \
        f"degree {value.homogeneous_degree()} != {pdeg} - {vdim}"


def reduce_full_flag(n: int, r, P: TautClass) -> IntegralResult:
    """Full-flag integral computed on the nilpotent filtration locus.

    The pushforward identity divides each contribution by the Euler
    class of the punctual-to-full correction bundle, so the sum runs
    over the small fixed set but reproduces the ambient integral.
    Accepts the number of nesting steps r (the chain has r + 1 points)
    or an explicit all-ones dims tuple.
    """
    if isinstance(r, (tuple, list)):
        dims = tuple(int(x) for x in r)
        if any(x != 1 for x in dims):
            raise RequiresFullFlag(f"dims {dims} is not a full flag")
    else:
        if r < 0:
            raise RequiresFullFlag(f"need r >= 0, got {r}")
        dims = (1,) * (r + 1)
    vdim = _expected_vdim(n, dims, "nhilb")
    terms = []
    for np_ in enumerate_nested(n, dims):
        if not is_nilfil(np_):
            continue
        e = canonical_enumeration(np_)
        tangent = tangent_class_punctual(e)
        obstruction = obstruction_class(e)
        if tangent.fixed_rank() != obstruction.fixed_rank():
            continue
        value = FactoredRational.from_poly(restrict_class(P, e))
        value = value * euler_class(obstruction.moving(), "s")
        value = value / euler_class(tangent.moving(), "s")
        value = value / euler_class(epunct_class(e), "s")
        terms.append(value.simplify())
    value = sum_factored(terms)
    _check_degree(value, P, vdim)
    return IntegralResult(value, vdim, "localization", "nhilb")


def cy_restrict(v: FactoredRational, n: int) -> FactoredRational:
    """Restrict to the subtorus where the weights sum to zero by
    substituting s_n = -(s_1 + ... + s_{n-1})."""
    form = LinearForm({("s", i): Fraction(-1) for i in range(1, n)})
    return v.substitute_linear({("s", n): form})


def virtual_dimension(n: int, dims, space: str) -> int:
    """Net tangent rank minus obstruction rank, constant over the fixed
    set; raises when the space has no fixed points at all."""
    if space not in SPACES:
        raise ValueError(f"unknown space {space!r}")
    dims = tuple(int(x) for x in dims)
    points = enumerate_nested(n, dims)
    if space == "nilfil":
        points = [p for p in points if is_nilfil(p)]
    if not points:
        raise NoFixedPoints(f"no fixed chains for n={n}, dims={dims}, {space}")
    return _expected_vdim(n, dims, space)
