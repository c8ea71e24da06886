"""Built-in registry of the bundled group and foliation examples.

Group entries construct presentations over exactly pinned cyclotomic scalars;
where a scalar is pinned by polynomial constraints, every root of unity
satisfying them yields its own presentation, and callers are expected to run
their checks against all of them.

Group ids:

* ``ex4.1``          six generators z/a (x4), z/(a+z), z/(a - a^5 z) with
                     a^6 = 1 and a = 1/(1-a); ships the known conjugacy
                     witness for the pair (5,1).
* ``g10`` ``g12`` ``g12p`` ``g14`` ``g18`` ``g18p``
                     the analogous families with 10/12/12/14/18/18
                     generators and the constraints a^3+a, a, a^3+a^2,
                     a^5+a^3+a, a, a^5+a^4+a^3 = 1/(1-a) respectively.
* ``ex4.3``          the pair f = z/(1-z^p)^(1/p), f^-1 = z/(1+z^p)^(1/p),
                     parameterized by p; extras carry the rotation
                     h(z) = zeta_{2p} z conjugating f^-1 to f in the ambient
                     group and the closed form of the iterates.

Form ids:

* ``ex6.1``          the degree-k family in four variables with parameters
                     (a, b, c, alpha, beta, gamma); extras carry the
                     polynomial Q with Omega = -(k+1) Q dx + x dQ and the
                     meromorphic first integral Q / x^(k+1).  The default
                     parameter sets pin beta = (-1)^k alpha so that
                     (0, 1, -1, 0) is a singular point for every k.
* ``ex6.2``          the three-variable integrable form with polynomial
                     first integral x^2(y^2+z^2)/2 - x^4 y^4/4 - x^4 z^4/4
                     and tangent cone 2x(y^2+z^2).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .cyclotomic import format_scalar, solve_root_constraints, zeta
from .expressions import series_from_string
from .germs import Germ, Word
from .group_cert import GroupPresentation, LoadedPresentation
from .jets import DEFAULT_ORDER, Jet
from .pforms import MultiPoly, PForm1, form_from_string, poly_from_string

__all__ = [
    "GROUP_EXAMPLES",
    "FORM_EXAMPLES",
    "RegistryError",
    "build_group_example",
    "build_form_example",
    "ex43_ambient_conjugator",
    "ex43_iterate_expr",
    "FormExample",
    "default_parameter_sets",
]


class RegistryError(ValueError):
    """Raised for unknown example ids or bad example parameters."""


@dataclass
class _GroupFamily:
    count: int  # number of basic generators
    conductor: int
    constraint: str

    def expressions(self) -> list[str]:
        last = self.count - 1  # exponent in z/(a - a^(last) z)
        return (
            ["z/a"] * (self.count - 2)
            + ["z/(a + z)", f"z/(a - a^{last}*z)"]
        )


_FAMILIES = {
    "ex4.1": _GroupFamily(6, 6, "a = 1/(1 - a)"),
    "g10": _GroupFamily(10, 10, "a^3 + a = 1/(1 - a)"),
    "g12": _GroupFamily(12, 12, "a = 1/(1 - a)"),
    "g12p": _GroupFamily(12, 12, "a^3 + a^2 = 1/(1 - a)"),
    "g14": _GroupFamily(14, 14, "a^5 + a^3 + a = 1/(1 - a)"),
    "g18": _GroupFamily(18, 18, "a = 1/(1 - a)"),
    "g18p": _GroupFamily(18, 18, "a^5 + a^4 + a^3 = 1/(1 - a)"),
}

GROUP_EXAMPLES = tuple(list(_FAMILIES) + ["ex4.3"])
FORM_EXAMPLES = ("ex6.1", "ex6.2")

# The witness g_1 = f_1 o f_5 o f_1^4 conjugating the pair (5, 1) of ex4.1.
_EX41_WITNESS = {(5, 1): Word.from_list([[1, 1], [5, 1], [1, 4]])}


def build_group_example(
    example_id: str, order: int = DEFAULT_ORDER, p: Optional[int] = None
) -> list[LoadedPresentation]:
    """Construct a registry group example; one presentation per pinned root."""
    if example_id in _FAMILIES:
        fam = _FAMILIES[example_id]
        roots = solve_root_constraints(fam.conductor, [fam.constraint])
        if not roots:
            raise RegistryError(f"{example_id}: constraint has no solutions")
        out = []
        witnesses = _EX41_WITNESS if example_id == "ex4.1" else None
        for a in roots:
            env = {"a": a}
            gens = [
                Germ(series_from_string(expr, env, order=order))
                for expr in fam.expressions()
            ]
            out.append(
                LoadedPresentation(
                    label=f"a={format_scalar(a)}",
                    scalars=dict(env),
                    presentation=GroupPresentation(gens, witnesses, order=order),
                )
            )
        return out
    if example_id == "ex4.3":
        if p is None:
            p = 1
        if p < 1:
            raise RegistryError("ex4.3 needs p >= 1")
        f_expr = f"z / pow(1 - z^{p}, 1/{p})"
        finv_expr = f"z / pow(1 + z^{p}, 1/{p})"
        gens = [
            Germ(series_from_string(f_expr, {}, order=order)),
            Germ(series_from_string(finv_expr, {}, order=order)),
        ]
        return [
            LoadedPresentation(
                label=f"p={p}",
                scalars={},
                presentation=GroupPresentation(gens, None, order=order),
            )
        ]
    raise RegistryError(f"unknown group example {example_id!r}")


def ex43_ambient_conjugator(p: int, order: int = DEFAULT_ORDER) -> Germ:
    """The rotation h(z) = zeta_{2p} z with h o f^-1 o h^-1 = f for ex4.3."""
    mu = zeta(2 * p)
    return Germ(Jet([0, mu] + [0] * (order - 1), order=order))


def ex43_iterate_expr(p: int, n: int) -> str:
    """Closed form of the n-th iterate of the ex4.3 generator."""
    return f"z / pow(1 - {n}*z^{p}, 1/{p})"


@dataclass
class FormExample:
    label: str
    variables: tuple[str, ...]
    omega: PForm1
    first_integral: Optional[MultiPoly] = None
    mero_numerator: Optional[MultiPoly] = None
    mero_denominator: Optional[MultiPoly] = None
    kupka_point: Optional[tuple] = None
    expected_cone: Optional[MultiPoly] = None
    params: dict = field(default_factory=dict)


def default_parameter_sets(k: int) -> list[tuple]:
    """Two parameter tuples (a, b, c, alpha, beta, gamma) per degree k.

    beta = (-1)^k * alpha keeps the reference point (0, 1, -1, 0) on the
    singular locus for every k.
    """
    sign = (-1) ** k
    return [(1, 1, 1, 1, sign, 1), (2, 3, 5, 7, 7 * sign, 11)]


def _kupka_family(k: int, params: tuple) -> tuple[PForm1, MultiPoly]:
    if k < 2:
        raise RegistryError("ex6.1 needs k >= 2")
    if len(params) != 6:
        raise RegistryError("ex6.1 takes six parameters a,b,c,alpha,beta,gamma")
    a, b, c, al, be, ga = (Fraction(v) for v in params)
    if any(v == 0 for v in (a, b, c, al, be, ga)):
        raise RegistryError("ex6.1 parameters must be nonzero")
    n = 4
    x = MultiPoly.variable(n, 0)
    y = MultiPoly.variable(n, 1)
    z = MultiPoly.variable(n, 2)
    w = MultiPoly.variable(n, 3)
    dx_coeff = (
        -(x**2) * (y ** (k - 1) * a + z ** (k - 1) * b + w ** (k - 1) * c)
        + y ** (k + 1) * al
        + z ** (k + 1) * be
        + w ** (k + 1) * ga
    )
    omega = PForm1(
        n,
        [
            dx_coeff,
            x * y ** (k - 2) * (x**2 * a - y**2 * al),
            x * z ** (k - 2) * (x**2 * b - z**2 * be),
            x * w ** (k - 2) * (x**2 * c - w**2 * ga),
        ],
    )
    q = (
        x**2
        * (
            y ** (k - 1) * Fraction(a, k - 1)
            + z ** (k - 1) * Fraction(b, k - 1)
            + w ** (k - 1) * Fraction(c, k - 1)
        )
        - y ** (k + 1) * Fraction(al, k + 1)
        - z ** (k + 1) * Fraction(be, k + 1)
        - w ** (k + 1) * Fraction(ga, k + 1)
        + x ** (k + 1)
    )
    return omega, q


def build_form_example(
    example_id: str, k: Optional[int] = None, params: Optional[tuple] = None
) -> FormExample:
    if example_id == "ex6.1":
        if k is None:
            k = 2
        if params is None:
            params = default_parameter_sets(k)[0]
        omega, q = _kupka_family(k, tuple(params))
        x = MultiPoly.variable(4, 0)
        return FormExample(
            label=f"k={k}",
            variables=("x", "y", "z", "w"),
            omega=omega,
            mero_numerator=q,
            mero_denominator=x ** (k + 1),
            kupka_point=(0, 1, -1, 0),
            params={"k": k, "params": [str(v) for v in params]},
        )
    if example_id == "ex6.2":
        variables = ("x", "y", "z")
        omega = form_from_string(
            "((y^2 + z^2) - x^2*(y^4 + z^4))*dx"
            " + x*y*(1 - x^2*y^2)*dy + z*x*(1 - x^2*z^2)*dz",
            variables=variables,
        )
        integral = poly_from_string(
            "x^2*(y^2 + z^2)/2 - x^4*y^4/4 - x^4*z^4/4", variables=variables
        )
        cone = poly_from_string("2*x*(y^2 + z^2)", variables=variables)
        return FormExample(
            label="ex6.2",
            variables=variables,
            omega=omega,
            first_integral=integral,
            expected_cone=cone,
        )
    raise RegistryError(f"unknown form example {example_id!r}")
