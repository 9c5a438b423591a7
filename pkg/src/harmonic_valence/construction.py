"""Polynomials S, T, p, q of the valence construction and the harmonic map p + conj(q).

The standard construction for degree ``n`` is

    S(z) = i z^n,    T(z) = i (z + 1)^(n-1) (z - (n-1)),
    p = S + T,       q = S - T,

so that ``p(z) + conj(q(z)) = 2 Re S(z) + 2i Im T(z)``.  The perturbed family
replaces the centre ``1`` by a unit complex number ``a``:
``T(z) = i (z + a)^(n-1) (z - (n-1) a)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

__all__ = [
    "ComplexPoly",
    "ProductPoly",
    "SplitForm",
    "HarmonicMap",
    "ConstructionParams",
    "Zero",
    "DegenerateZero",
    "build_standard",
    "build_perturbed",
    "perturbation_center",
    "standard_degenerate_zeros",
    "evaluate",
    "evaluate_expanded",
    "jacobian",
    "determinant_scale",
]

_SNAP = 1e-9


def horner(coeffs: np.ndarray, z):
    """Evaluate ``sum(coeffs[j] * z**j)`` by Horner's rule, vectorised over ``z``."""
    z = np.asarray(z, dtype=complex)
    acc = np.zeros_like(z) + coeffs[-1]
    for c in coeffs[-2::-1]:
        acc = acc * z + c
    return acc


@dataclass(frozen=True, eq=False)
class ComplexPoly:
    """Dense polynomial with complex coefficients, ``coeffs[j]`` multiplies ``z**j``."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex)).copy()
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else c[:1]
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z):
        return horner(self.coeffs, z)

    def derivative(self) -> "ComplexPoly":
        if self.degree == 0:
            return ComplexPoly([0.0])
        return ComplexPoly(self.coeffs[1:] * np.arange(1, self.degree + 1))

    def naive(self, z):
        """Term-by-term evaluation; used to cross-check Horner."""
        z = np.asarray(z, dtype=complex)
        return sum(c * z**j for j, c in enumerate(self.coeffs))


@dataclass(frozen=True)
class ProductPoly:
    """Polynomial kept in factored form ``lead * prod((z - root)**mult)``."""

    lead: complex
    factors: tuple = ()

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.factors)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.full_like(z, self.lead)
        for root, mult in self.factors:
            out = out * (z - root) ** mult
        return out


@dataclass(frozen=True)
class SplitForm:
    """S, T and their derivatives in product form."""

    S: ProductPoly
    dS: ProductPoly
    T: ProductPoly
    dT: ProductPoly


@dataclass(frozen=True, eq=False)
class HarmonicMap:
    """The map ``f(z) = p(z) + conj(q(z))``.

    ``split`` is only present for maps built from S and T here.  When it is, all
    evaluation goes through the factored S and T: near the origin Re S is far
    below the rounding error of the expanded coefficients, and for large
    degree the expanded coefficients themselves are badly scaled.
    """

    analytic: ComplexPoly
    coanalytic: ComplexPoly
    split: Optional[SplitForm] = field(default=None, compare=False)

    @property
    def degree(self) -> int:
        return self.analytic.degree

    @property
    def factored(self) -> bool:
        return self.split is not None

    def derivatives(self, z):
        """Return ``(p'(z), q'(z))``."""
        if self.factored:
            s, t = self.split.dS(z), self.split.dT(z)
            return s + t, s - t
        return self.analytic.derivative()(z), self.coanalytic.derivative()(z)

    def im_T(self, z):
        """Im T(z) from the factored form (requires a map built from S and T)."""
        if self.split is None:
            raise ValueError("Im T is only defined for the S/T constructions")
        return self.split.T(z).imag


@dataclass(frozen=True)
class ConstructionParams:
    n: int
    a: complex = 1.0

    def __post_init__(self):
        if self.n < 4:
            raise ValueError(f"n must be >= 4 (got {self.n})")
        if abs(abs(self.a) - 1.0) > 1e-12:
            raise ValueError(f"perturbation centre must have unit modulus (|a| = {abs(self.a)!r})")


@dataclass(frozen=True)
class Zero:
    """A zero of a harmonic map.

    ``index`` is the sign of the Jacobian determinant (0 when degenerate);
    ``multiplicity`` is an annotation supplied from the construction.
    """

    location: complex
    index: int
    residual: float
    multiplicity: int = 1


@dataclass(frozen=True)
class DegenerateZero:
    """Analytically known degenerate zero with its multiplicity and local winding."""

    location: complex
    multiplicity: int
    winding: int


def _expand_T(n: int, a: complex) -> np.ndarray:
    """Coefficients of (z + a)^(n-1) (z - (n-1) a), lowest degree first.

    Coefficients that cancel to below ``_SNAP`` times the size of the terms
    producing them are set to exactly zero.
    """
    m = n - 1
    binom = np.array(
        [math.comb(m, j) * a ** (m - j) for j in range(m + 1)], dtype=complex
    )
    root = np.array([-(n - 1) * a, 1.0], dtype=complex)
    coeffs = np.convolve(binom, root)
    magnitude = np.convolve(np.abs(binom), np.abs(root))
    coeffs[np.abs(coeffs) < _SNAP * magnitude] = 0.0
    return coeffs


def _split_form(n: int, a: complex) -> SplitForm:
    # T'(z) = i n (z + a)^(n-2) (z - (n-2) a)
    return SplitForm(
        S=ProductPoly(1j, ((0.0, n),)),
        dS=ProductPoly(1j * n, ((0.0, n - 1),)),
        T=ProductPoly(1j, ((-a, n - 1), ((n - 1) * a, 1))),
        dT=ProductPoly(1j * n, ((-a, n - 2), ((n - 2) * a, 1))),
    )


def build_perturbed(params: ConstructionParams) -> HarmonicMap:
    """Build ``p = S + T`` and ``q = S - T`` with ``T(z) = i (z+a)^(n-1) (z-(n-1)a)``."""
    n, a = params.n, complex(params.a)
    if a == 1:
        a = 1.0
    T = 1j * _expand_T(n, a)
    S = np.zeros(n + 1, dtype=complex)
    S[n] = 1j
    return HarmonicMap(
        analytic=ComplexPoly(S + T),
        coanalytic=ComplexPoly(S - T),
        split=_split_form(n, a),
    )


def build_standard(n: int) -> HarmonicMap:
    """The standard construction (``a = 1``); ``deg p = n``, ``deg q = n - 2``."""
    return build_perturbed(ConstructionParams(n))


def perturbation_center(t: float) -> complex:
    """Unit perturbation centre ``e^{it}``; exactly 1 for ``t = 0``."""
    return 1.0 if t == 0 else cmath.exp(1j * t)


def standard_degenerate_zeros(n: int) -> list[DegenerateZero]:
    """The degenerate zero z = -1 of the standard construction.

    Near z = -1, with ``w = z + 1``, the map behaves like
    ``2n((-1)^n Im w - i Re w^(n-1))``.  The multiplicity along the negative real
    ray is ``n - 1``; the local winding is +1 when ``n - 1`` is odd and 0 otherwise.
    """
    return [DegenerateZero(-1.0 + 0j, n - 1, 1 if n % 2 == 0 else 0)]


def evaluate(f: HarmonicMap, z):
    """``p(z) + conj(q(z))``, through ``2 Re S + 2i Im T`` when ``f`` is factored."""
    if f.factored:
        return 2 * f.split.S(z).real + 2j * f.split.T(z).imag
    return evaluate_expanded(f, z)


def evaluate_expanded(f: HarmonicMap, z):
    """``p(z) + conj(q(z))`` by Horner on the dense coefficients."""
    return f.analytic(z) + np.conj(f.coanalytic(z))


def jacobian(f: HarmonicMap, z):
    """Real Jacobian of ``(x, y) -> (Re f, Im f)`` and its determinant.

    Returns ``(J, det)`` with ``J`` of shape ``z.shape + (2, 2)``;
    ``det = |p'|^2 - |q'|^2``, which for factored maps is evaluated as
    ``4 Re(S' conj(T'))`` to avoid cancellation.
    """
    if f.factored:
        ds, dt = f.split.dS(z), f.split.dT(z)
        J = 2 * np.stack(
            [np.stack([ds.real, -ds.imag], -1), np.stack([dt.imag, dt.real], -1)], -2
        )
        return J, 4 * (ds * np.conj(dt)).real
    dp, dq = f.derivatives(z)
    dx = dp + np.conj(dq)
    dy = 1j * (dp - np.conj(dq))
    J = np.stack(
        [np.stack([dx.real, dy.real], -1), np.stack([dx.imag, dy.imag], -1)], -2
    )
    return J, np.abs(dp) ** 2 - np.abs(dq) ** 2


def determinant_scale(f: HarmonicMap, z):
    """Magnitude against which the Jacobian determinant is judged zero."""
    if f.factored:
        return 4 * np.abs(f.split.dS(z)) * np.abs(f.split.dT(z))
    dp, dq = f.derivatives(z)
    return np.abs(dp) ** 2 + np.abs(dq) ** 2
