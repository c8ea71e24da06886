"""Truncated formal power series in one variable with exact coefficients.

A jet of order N stores the coefficients of z^0 .. z^N; terms beyond z^N are
unknown rather than zero, and every operation is exact in the quotient ring of
series modulo z^(N+1).  No operation silently extends the order; binary
operations require equal orders (truncate the longer operand first).

Coefficients are :class:`~germlin.cyclotomic.CycloElem` values at a single
conductor per jet.  Construction accepts ints, Fractions and mixed-conductor
elements and lifts everything to the lcm conductor, so rational jets live at
conductor 1.

The textual form is ``jet(N=4)[0, 1, 1, 0, 0]``, meaning z + z^2 at order 4.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .cyclotomic import CycloElem, cyclo_embed, format_scalar, parse_scalar

__all__ = [
    "Jet",
    "DEFAULT_ORDER",
    "jet_ring",
    "jet_compose",
    "jet_comp_inverse",
    "jet_mul_inverse",
    "jet_derivative",
    "jet_rational_power",
    "RightComposer",
]

DEFAULT_ORDER = 32


def _as_cyclo(value, n: int) -> CycloElem:
    if isinstance(value, CycloElem):
        return value.lift(n) if value.n != n else value
    return cyclo_embed(value, n)


def _zero(n: int) -> CycloElem:
    return cyclo_embed(0, n)


def _mul_coeffs(a: list, b: list, N: int, n: int) -> list:
    """Coefficients of a*b truncated at degree N, skipping zero terms."""
    out = [_zero(n)] * (N + 1)
    for i, ai in enumerate(a):
        if i > N:
            break
        if ai.is_zero:
            continue
        top = N - i
        for j, bj in enumerate(b):
            if j > top:
                break
            if not bj.is_zero:
                out[i + j] = out[i + j] + ai * bj
    return out


def _pow_coeffs(base: list, e: int, N: int, n: int) -> list:
    """base**e truncated at degree N by binary powering."""
    result = [_zero(n)] * (N + 1)
    result[0] = cyclo_embed(1, n)
    if e == 0:
        return result
    acc = None
    b = list(base)
    while e:
        if e & 1:
            acc = list(b) if acc is None else _mul_coeffs(acc, b, N, n)
        e >>= 1
        if e:
            b = _mul_coeffs(b, b, N, n)
    return acc


class Jet:
    """A truncated series c0 + c1 z + ... + cN z^N, exact modulo z^(N+1)."""

    __slots__ = ("order", "conductor", "coeffs")

    def __init__(self, coeffs, order: int | None = None, conductor: int = 1):
        coeffs = list(coeffs)
        if order is None:
            if not coeffs:
                raise ValueError("empty coefficient list needs an explicit order")
            order = len(coeffs) - 1
        if order < 0:
            raise ValueError("jet order must be >= 0")
        if len(coeffs) > order + 1:
            raise ValueError(
                f"got {len(coeffs)} coefficients for order {order}; truncate first"
            )
        n = conductor
        for c in coeffs:
            if isinstance(c, CycloElem):
                n = n * c.n // gcd(n, c.n)
        coeffs = [_as_cyclo(c, n) for c in coeffs]
        coeffs.extend(_zero(n) for _ in range(order + 1 - len(coeffs)))
        self.order = order
        self.conductor = n
        self.coeffs = tuple(coeffs)

    # -- constructors ----------------------------------------------------------

    @classmethod
    def zero(cls, order: int, conductor: int = 1) -> "Jet":
        return cls([], order=order, conductor=conductor)

    @classmethod
    def identity(cls, order: int, conductor: int = 1) -> "Jet":
        """The series z."""
        if order < 1:
            raise ValueError("the identity jet needs order >= 1")
        return cls([0, 1], order=order, conductor=conductor)

    @classmethod
    def constant(cls, value, order: int, conductor: int = 1) -> "Jet":
        return cls([value], order=order, conductor=conductor)

    # -- simple accessors --------------------------------------------------------

    @property
    def constant_term(self) -> CycloElem:
        return self.coeffs[0]

    @property
    def linear_term(self) -> CycloElem:
        if self.order < 1:
            raise ValueError("order-0 jet has no linear term")
        return self.coeffs[1]

    def coefficient(self, k: int) -> CycloElem:
        return self.coeffs[k]

    def truncate(self, order: int) -> "Jet":
        if order > self.order:
            raise ValueError("cannot extend a jet; compose at the lower order")
        return Jet(self.coeffs[: order + 1], order=order, conductor=self.conductor)

    def lift(self, conductor: int) -> "Jet":
        if conductor == self.conductor:
            return self
        return Jet(self.coeffs, order=self.order, conductor=conductor)

    def key(self):
        """Hashable identity for dedup among jets of one order and conductor."""
        return self.coeffs

    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.coeffs)

    # -- ring structure -----------------------------------------------------------

    def _common(self, other: "Jet") -> tuple["Jet", "Jet"]:
        if not isinstance(other, Jet):
            raise TypeError(f"expected a Jet, got {type(other).__name__}")
        if other.order != self.order:
            raise ValueError(
                f"jet orders differ ({self.order} vs {other.order}); truncate first"
            )
        n = self.conductor * other.conductor // gcd(self.conductor, other.conductor)
        return self.lift(n), other.lift(n)

    def __add__(self, other):
        if isinstance(other, (int, Fraction, CycloElem)):
            coeffs = list(self.coeffs)
            coeffs[0] = coeffs[0] + other
            return Jet(coeffs, order=self.order, conductor=self.conductor)
        a, b = self._common(other)
        return Jet(
            [x + y for x, y in zip(a.coeffs, b.coeffs)],
            order=a.order,
            conductor=a.conductor,
        )

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, CycloElem)):
            return self + (-1 * other)
        a, b = self._common(other)
        return Jet(
            [x - y for x, y in zip(a.coeffs, b.coeffs)],
            order=a.order,
            conductor=a.conductor,
        )

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Jet([-c for c in self.coeffs], order=self.order, conductor=self.conductor)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycloElem)):
            return Jet(
                [c * other for c in self.coeffs],
                order=self.order,
                conductor=self.conductor,
            )
        a, b = self._common(other)
        return Jet(
            _mul_coeffs(list(a.coeffs), list(b.coeffs), a.order, a.conductor),
            order=a.order,
            conductor=a.conductor,
        )

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return jet_mul_inverse(self) ** (-e)
        return Jet(
            _pow_coeffs(list(self.coeffs), e, self.order, self.conductor),
            order=self.order,
            conductor=self.conductor,
        )

    def __eq__(self, other):
        if not isinstance(other, Jet):
            return NotImplemented
        if self.order != other.order:
            return False
        a, b = self._common(other)
        return a.coeffs == b.coeffs

    __hash__ = None  # jets are compared by value across conductors; use .key()

    def __repr__(self):
        inner = ", ".join(format_scalar(c) for c in self.coeffs)
        return f"jet(N={self.order})[{inner}]"

    __str__ = __repr__

    # -- serialization -------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "conductor": self.conductor,
            "coeffs": [format_scalar(c) for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Jet":
        return cls(
            [parse_scalar(s) for s in data["coeffs"]],
            order=data["order"],
            conductor=data.get("conductor", 1),
        )


# -- ring and composition operations -----------------------------------------------


def jet_ring(op: str, f: Jet, g: Jet) -> Jet:
    """Ring arithmetic on same-order jets: op in {add, sub, mul}."""
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown ring operation {op!r}")


def jet_compose(f: Jet, g: Jet) -> Jet:
    """The composition f(g(z)) truncated at the common order.

    g must have zero constant term, otherwise the truncated composition is not
    well defined.  Dense outer series use Horner accumulation
    c0 + g*(c1 + g*(c2 + ...)) with every product truncated; an outer series
    with very few terms instead sums c_e * g^e directly.
    """
    a, b = f._common(g)
    if not b.coeffs[0].is_zero:
        raise ValueError("inner series must have zero constant term")
    N, n = a.order, a.conductor
    fc, gc = list(a.coeffs), list(b.coeffs)
    support = [i for i, c in enumerate(fc) if not c.is_zero]
    if not support:
        return Jet.zero(N, n)
    if len(support) <= 4:
        out = [_zero(n)] * (N + 1)
        for e in support:
            pw = _pow_coeffs(gc, e, N, n)
            ce = fc[e]
            for t in range(e, N + 1):
                if not pw[t].is_zero:
                    out[t] = out[t] + ce * pw[t]
        return Jet(out, order=N, conductor=n)
    acc = [fc[support[-1]]] + [_zero(n)] * N
    for i in range(support[-1] - 1, -1, -1):
        acc = _mul_coeffs(acc, gc, N, n)
        acc[0] = acc[0] + fc[i]
    return Jet(acc, order=N, conductor=n)


def jet_comp_inverse(f: Jet) -> Jet:
    """The compositional inverse g with f(g(z)) = g(f(z)) = z to order N.

    Solved order by order: with the powers f^m precomputed, the coefficients
    b_m of g are determined by the triangular system  sum_m b_m [z^n] f^m =
    [n == 1], whose diagonal entries are powers of the (invertible) linear
    coefficient.  A one-sided inverse in the truncated composition group is
    automatically two-sided.
    """
    N, n = f.order, f.conductor
    if N < 1 or not f.coeffs[0].is_zero:
        raise ValueError("compositional inverse needs zero constant term")
    a1 = f.coeffs[1]
    if a1.is_zero:
        raise ValueError("compositional inverse needs an invertible linear term")
    powers: list[list] = [None, list(f.coeffs)]  # type: ignore[list-item]
    for m in range(2, N + 1):
        powers.append(_mul_coeffs(powers[-1], list(f.coeffs), N, n))
    b = [_zero(n)] * (N + 1)
    b[1] = cyclo_embed(1, n) / a1
    for m in range(2, N + 1):
        s = _zero(n)
        for j in range(1, m):
            if not b[j].is_zero:
                pjm = powers[j][m]
                if not pjm.is_zero:
                    s = s + b[j] * pjm
        b[m] = -s / powers[m][m]
    return Jet(b, order=N, conductor=n)


def jet_mul_inverse(f: Jet) -> Jet:
    """The reciprocal series g with f*g = 1 to order N (nonzero constant term)."""
    N, n = f.order, f.conductor
    a0 = f.coeffs[0]
    if a0.is_zero:
        raise ValueError("reciprocal needs a nonzero constant term")
    inv0 = cyclo_embed(1, n) / a0
    b = [inv0] + [_zero(n)] * N
    for m in range(1, N + 1):
        s = _zero(n)
        for k in range(1, m + 1):
            ak = f.coeffs[k]
            if not ak.is_zero and not b[m - k].is_zero:
                s = s + ak * b[m - k]
        b[m] = -s * inv0
    return Jet(b, order=N, conductor=n)


def jet_derivative(f: Jet) -> Jet:
    """Term-wise derivative; the order drops to N-1 (z^N's image is unknown)."""
    if f.order == 0:
        raise ValueError("cannot differentiate an order-0 jet to a valid order")
    return Jet(
        [f.coeffs[i + 1] * (i + 1) for i in range(f.order)],
        order=f.order - 1,
        conductor=f.conductor,
    )


def jet_rational_power(f: Jet, r) -> Jet:
    """f**r for rational r via the binomial series on f = 1 + u.

    Requires constant term exactly 1; the result is
    sum_k C(r, k) u^k with generalized binomial coefficients, exact because
    u has positive valuation.
    """
    r = Fraction(r)
    N, n = f.order, f.conductor
    if not f.coeffs[0].is_one:
        raise ValueError("rational powers require constant term 1")
    u = [c for c in f.coeffs]
    u[0] = u[0] - 1
    out = [_zero(n)] * (N + 1)
    out[0] = cyclo_embed(1, n)
    upow = None
    binom = Fraction(1)
    for k in range(1, N + 1):
        binom *= Fraction(r.numerator - (k - 1) * r.denominator, k * r.denominator)
        if binom == 0:
            break
        upow = list(u) if upow is None else _mul_coeffs(upow, u, N, n)
        if all(c.is_zero for c in upow):
            break
        for t in range(k, N + 1):
            if not upow[t].is_zero:
                out[t] = out[t] + upow[t] * binom
    return Jet(out, order=N, conductor=n)


class RightComposer:
    """Right composition w -> w(g) against a fixed inner series g.

    Precomputing the powers of g makes each call a triangular sum
    sum_e w_e g^e, an order-of-magnitude cheaper than Horner when many
    compositions share the same inner series (word evaluation, conjugator
    search).
    """

    def __init__(self, g: Jet):
        if not g.coeffs[0].is_zero:
            raise ValueError("inner series must have zero constant term")
        self.order = g.order
        self.conductor = g.conductor
        N, n = g.order, g.conductor
        powers = [[cyclo_embed(1, n)] + [_zero(n)] * N, list(g.coeffs)]
        for _ in range(2, N + 1):
            powers.append(_mul_coeffs(powers[-1], list(g.coeffs), N, n))
        self.powers = powers

    def __call__(self, w: Jet) -> Jet:
        if w.order != self.order:
            raise ValueError("order mismatch in right composition")
        wl = w.lift(self.conductor) if w.conductor != self.conductor else w
        N, n = self.order, self.conductor
        out = [_zero(n)] * (N + 1)
        for e, ce in enumerate(wl.coeffs):
            if ce.is_zero:
                continue
            pw = self.powers[e]
            for t in range(e, N + 1):
                if not pw[t].is_zero:
                    out[t] = out[t] + ce * pw[t]
        return Jet(out, order=N, conductor=n)
