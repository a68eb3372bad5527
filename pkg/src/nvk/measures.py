"""Positive Borel measures on R^k with integration of test functions.

Variants
--------
``Atomic``            finitely many weighted points (exact integration).
``LebesgueDensity``   a nonnegative density against Lebesgue measure; the
                      density defaults to 1, which encodes Lebesgue measure
                      itself.
``Product``           a product of one-dimensional measures.
``Pushforward2D``     the planar measure U |-> int (int chi_U(a t1 + b t2,
                      g t1 + d t2) dt2) dmu1(t1): the image of mu1 x Lebesgue
                      under an affine map, inner Lebesgue integral first.
``PushforwardLadder`` the n-dimensional measure U |-> scale * int (int
                      chi_U(t1 - b1 t2, ..., t1 - b_{n-1} tn,
                      t1 + t2 + ... + tn) dtn ... dt2) dmu(t1).
``LebesguePad``       an inner measure placed on a subset of the axes, with
                      Lebesgue factors filling the remaining axes; the
                      Lebesgue axes are integrated first, in descending
                      axis order.

Integration order is part of each variant's definition and is never
reversed.  Test functions receive one argument per axis and must evaluate
elementwise when the innermost integration variable arrives as an array.

Sets are finite unions of closed axis-aligned boxes.  Atoms sitting on a
box boundary count as inside.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .errors import DimensionMismatchError, DomainError
from .quadrature import (
    DEFAULT_CONFIG,
    QuadratureConfig,
    QuadratureResult,
    integrate_line,
)

__all__ = [
    "Measure",
    "Atomic",
    "LebesgueDensity",
    "Product",
    "Pushforward2D",
    "PushforwardLadder",
    "LebesguePad",
    "Box",
    "lebesgue",
    "zero_measure",
    "indicator",
    "integrate",
    "mass",
    "is_zero_measure",
]


class _Diverged(Exception):
    """Internal: an inner integral of a measure nest diverged."""


@dataclass(frozen=True)
class Measure:
    """Abstract base; use one of the concrete variants."""

    @property
    def dimension(self) -> int:
        raise NotImplementedError


@dataclass(frozen=True)
class Atomic(Measure):
    """Finitely many atoms ((location, weight), ...), weights > 0.

    ``dim`` is only needed when the atom list is empty (the zero measure).
    """

    atoms: tuple[tuple[tuple[float, ...], float], ...]
    dim: Optional[int] = None

    def __post_init__(self):
        norm = []
        for loc, w in self.atoms:
            loc = tuple(float(x) for x in (loc if isinstance(loc, (tuple, list, np.ndarray)) else (loc,)))
            if not w > 0:
                raise DomainError("atomic weights must be strictly positive")
            norm.append((loc, float(w)))
        object.__setattr__(self, "atoms", tuple(norm))
        if self.atoms:
            k = len(self.atoms[0][0])
            if any(len(loc) != k for loc, _ in self.atoms):
                raise DimensionMismatchError("atoms must share one dimension")
            if self.dim is not None and self.dim != k:
                raise DimensionMismatchError("dim inconsistent with atom locations")
            object.__setattr__(self, "dim", k)
        elif self.dim is None:
            raise DomainError("empty atomic measure needs an explicit dim")

    @classmethod
    def single(cls, weight: float, *location: float) -> "Atomic":
        return cls(((tuple(location), weight),))

    @property
    def dimension(self) -> int:
        return int(self.dim)  # type: ignore[arg-type]


@dataclass(frozen=True)
class LebesgueDensity(Measure):
    """Density against Lebesgue measure on R^k; ``density=None`` means 1.

    ``decay_degree`` is an optional hint for the divergence detector: the
    density grows at most like |t|^decay_degree.  The default assumes O(1)
    and relies on windowed doubling alone.
    """

    dim: int
    density: Optional[Callable] = None
    decay_degree: int = 0

    def __post_init__(self):
        if self.dim < 1:
            raise DomainError("dimension must be >= 1")

    @property
    def dimension(self) -> int:
        return self.dim


def lebesgue(dim: int = 1) -> LebesgueDensity:
    """Lebesgue measure on R^dim."""
    return LebesgueDensity(dim)


def zero_measure(dim: int) -> Atomic:
    """The zero measure on R^dim."""
    return Atomic((), dim=dim)


def is_zero_measure(mu: Measure) -> bool:
    return isinstance(mu, Atomic) and not mu.atoms


@dataclass(frozen=True)
class Product(Measure):
    """Product of one-dimensional measures; the last factor is innermost."""

    factors: tuple[Measure, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise DomainError("product needs at least one factor")
        for f in self.factors:
            if f.dimension != 1:
                raise DimensionMismatchError("product factors must be one-dimensional")

    @property
    def dimension(self) -> int:
        return len(self.factors)


@dataclass(frozen=True)
class Pushforward2D(Measure):
    """Image of mu1 x Lebesgue under (t1, t2) |-> (a t1 + b t2, g t1 + d t2)."""

    base: Measure
    alpha: float
    beta: float
    gamma: float
    delta: float

    def __post_init__(self):
        if self.base.dimension != 1:
            raise DimensionMismatchError("base measure must be one-dimensional")

    @property
    def dimension(self) -> int:
        return 2

    @property
    def coefficients(self) -> tuple[float, float, float, float]:
        return (self.alpha, self.beta, self.gamma, self.delta)


@dataclass(frozen=True)
class PushforwardLadder(Measure):
    """Image measure supported on the ladder map

        (t1, ..., tn) |-> (t1 - b1 t2, ..., t1 - b_{n-1} tn, t1 + ... + tn),

    scaled by ``scale``.  The scale is stored rather than recomputed so
    unscaled variants can be represented for testing.
    """

    base: Measure
    b: tuple[float, ...]
    scale: float

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(float(x) for x in self.b))
        if self.base.dimension != 1:
            raise DimensionMismatchError("base measure must be one-dimensional")
        if not self.b:
            raise DomainError("ladder needs at least one coefficient")
        if any(not bj > 0 for bj in self.b):
            raise DomainError("ladder coefficients must be strictly positive")
        if not self.scale > 0:
            raise DomainError("scale must be strictly positive")

    @property
    def dimension(self) -> int:
        return len(self.b) + 1


@dataclass(frozen=True)
class LebesguePad(Measure):
    """Inner measure on the listed axes, Lebesgue factors on the rest.

    Integration runs the Lebesgue (padding) axes first, innermost the one
    with the largest index, then the inner measure over its own axes.
    """

    inner: Measure
    axes: tuple[int, ...]
    dim: int

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(int(a) for a in self.axes))
        if list(self.axes) != sorted(set(self.axes)):
            raise DomainError("axes must be strictly ascending")
        if self.axes and (self.axes[0] < 0 or self.axes[-1] >= self.dim):
            raise DomainError("axes out of range")
        if self.inner.dimension != len(self.axes):
            raise DimensionMismatchError("inner measure dimension must match axes")

    @property
    def dimension(self) -> int:
        return self.dim

    @property
    def padded_axes(self) -> tuple[int, ...]:
        return tuple(j for j in range(self.dim) if j not in self.axes)


@dataclass(frozen=True)
class Box:
    """Closed axis-aligned box; bounds may be +-inf."""

    bounds: tuple[tuple[float, float], ...]

    def __post_init__(self):
        norm = tuple((float(lo), float(hi)) for lo, hi in self.bounds)
        object.__setattr__(self, "bounds", norm)
        for lo, hi in self.bounds:
            if not lo <= hi:
                raise DomainError("box bounds need lo <= hi on every axis")

    @property
    def dimension(self) -> int:
        return len(self.bounds)

    def contains(self, point: Sequence[float]) -> bool:
        return all(lo <= x <= hi for (lo, hi), x in zip(self.bounds, point))


Region = Union[Box, Sequence[Box]]


def indicator(region: Region) -> Callable:
    """Elementwise indicator function of a finite union of closed boxes."""
    boxes = [region] if isinstance(region, Box) else list(region)

    def chi(*args):
        inside = None
        for box in boxes:
            this = None
            for (lo, hi), x in zip(box.bounds, args):
                cond = (np.asarray(x) >= lo) & (np.asarray(x) <= hi)
                this = cond if this is None else (this & cond)
            inside = this if inside is None else (inside | this)
        return np.asarray(inside, dtype=float)

    return chi


def _elementwise(func: Callable) -> Callable:
    """Adapter so that a scalar-only callable accepts array arguments."""

    def wrapped(*args):
        arrs = [np.asarray(a) for a in args]
        shape = np.broadcast_shapes(*(a.shape for a in arrs))
        if shape == ():
            return func(*(a.item() for a in arrs))
        out = np.empty(shape, dtype=complex)
        it = np.broadcast(*arrs)
        for idx, vals in zip(np.ndindex(shape), it):
            out[idx] = func(*vals)
        return out

    return wrapped


@dataclass
class _ErrorBudget:
    total: float = 0.0
    converged: bool = True

    def absorb(self, r: QuadratureResult, weight: float = 1.0):
        if r.diverged:
            raise _Diverged
        self.total += abs(weight) * r.error_estimate
        if not r.converged:
            self.converged = False


def integrate(mu: Measure, f: Callable,
              cfg: QuadratureConfig = DEFAULT_CONFIG) -> QuadratureResult:
    """Integral of ``f`` against ``mu``.

    ``f`` takes ``mu.dimension`` positional arguments and must broadcast when
    the innermost integration variable arrives as an array.  Divergence is
    reported through the result, not raised.
    """
    try:
        budget = _ErrorBudget()
        value = _integrate(mu, f, cfg, budget)
    except _Diverged:
        return QuadratureResult(complex("nan"), math.inf, False, True)
    return QuadratureResult(value, budget.total, budget.converged, False)


def _integrate(mu: Measure, f: Callable, cfg: QuadratureConfig,
               budget: _ErrorBudget) -> complex:
    if isinstance(mu, Atomic):
        total = 0.0 + 0.0j
        for loc, w in mu.atoms:
            total += w * complex(f(*loc))
        return total

    if isinstance(mu, LebesgueDensity):
        return _integrate_lebesgue(mu, f, cfg, budget)

    if isinstance(mu, Product):
        return _integrate_product(mu, f, cfg, budget)

    if isinstance(mu, Pushforward2D):
        return _integrate_pushforward2d(mu, f, cfg, budget)

    if isinstance(mu, PushforwardLadder):
        return _integrate_ladder(mu, f, cfg, budget)

    if isinstance(mu, LebesguePad):
        return _integrate_padded(mu, f, cfg, budget)

    raise DomainError(f"unknown measure variant {type(mu).__name__}")


def _integrate_lebesgue(mu: LebesgueDensity, f: Callable, cfg: QuadratureConfig,
                        budget: _ErrorBudget) -> complex:
    k = mu.dim
    dens = mu.density

    def rec(fixed: tuple[float, ...], depth: int) -> complex:
        # Axis 0 is outermost; the last axis is the innermost integral.
        lcfg = cfg.tighter(0.1 ** depth) if depth else cfg
        innermost = depth == k - 1
        if innermost:
            def g(x):
                args = fixed + (x,)
                vals = np.asarray(f(*args), dtype=complex)
                if dens is not None:
                    vals = vals * np.asarray(dens(*args))
                return vals
        else:
            def g(x):
                return rec(fixed + (float(x),), depth + 1)
            g = _elementwise(g)
        r = integrate_line(g, lcfg)
        budget.absorb(r)
        return r.value

    return rec((), 0)


def _against_base(base: Measure, g: Callable, cfg: QuadratureConfig,
                  budget: _ErrorBudget) -> complex:
    """Integral of scalar callable ``g`` against a one-dimensional base."""
    if isinstance(base, Atomic):
        total = 0.0 + 0.0j
        for (x,), w in base.atoms:
            total += w * complex(g(x))
        return total
    if isinstance(base, LebesgueDensity):
        dens = base.density

        def h(x):
            v = g(x)
            return v * complex(dens(x)) if dens is not None else v

        r = integrate_line(_elementwise(h), cfg)
        budget.absorb(r)
        return r.value
    raise DomainError("base measure must be atomic or a Lebesgue density")


def _integrate_pushforward2d(mu: Pushforward2D, f: Callable, cfg: QuadratureConfig,
                             budget: _ErrorBudget) -> complex:
    a, b, g_, d = mu.coefficients

    def inner(t1: float) -> complex:
        def h(t2):
            return f(a * t1 + b * t2, g_ * t1 + d * t2)

        # Recenter the substitution where the image coordinates are small,
        # otherwise the node layout degrades as |t1| grows.
        centers = []
        width = 1.0
        if b != 0:
            centers.append(-a * t1 / b)
            width = max(width, 1.0 / abs(b))
        if d != 0:
            centers.append(-g_ * t1 / d)
            width = max(width, 1.0 / abs(d))
        center = float(np.mean(centers)) if centers else 0.0
        if len(centers) == 2:
            width = max(width, 0.5 * abs(centers[0] - centers[1]))
        r = integrate_line(h, cfg.tighter(), center=center, halfwidth=width)
        budget.absorb(r)
        return r.value

    return _against_base(mu.base, inner, cfg, budget)


def _integrate_ladder(mu: PushforwardLadder, f: Callable, cfg: QuadratureConfig,
                      budget: _ErrorBudget) -> complex:
    b = mu.b
    n = len(b) + 1

    def coords(t1, rest):
        out = [t1 - b[j] * rest[j] for j in range(n - 1)]
        out.append(t1 + sum(rest))
        return out

    def inner(t1: float) -> complex:
        def rec(fixed: tuple[float, ...]) -> complex:
            depth = len(fixed)
            lcfg = cfg.tighter(0.1 ** (depth + 1))
            j = depth  # integrating t_{j+2}, entering u_{j+1} = t1 - b_j t_{j+2}
            c1 = t1 / b[j]
            width = max(1.0, 1.0 / b[j])
            if depth == n - 2:  # integrating t_n, vectorised
                c2 = -(t1 + sum(fixed))
                center = 0.5 * (c1 + c2)
                width = max(width, 0.5 * abs(c1 - c2))

                def g(x):
                    rest = fixed + (x,)
                    return f(*coords(t1, rest))
            else:
                center = c1

                def g(x):
                    return rec(fixed + (float(x),))
                g = _elementwise(g)
            r = integrate_line(g, lcfg, center=center, halfwidth=width)
            budget.absorb(r)
            return r.value

        return rec(())

    value = _against_base(mu.base, inner, cfg, budget)
    return mu.scale * value


def _integrate_product(mu: Product, f: Callable, cfg: QuadratureConfig,
                       budget: _ErrorBudget) -> complex:
    k = len(mu.factors)

    def rec(fixed: tuple[float, ...]) -> complex:
        axis = len(fixed)
        factor = mu.factors[axis]
        lcfg = cfg.tighter(0.1 ** axis) if axis else cfg
        innermost = axis == k - 1

        if isinstance(factor, Atomic):
            total = 0.0 + 0.0j
            for (x,), w in factor.atoms:
                if innermost:
                    total += w * complex(f(*fixed, x))
                else:
                    total += w * rec(fixed + (x,))
            return total

        if isinstance(factor, LebesgueDensity):
            dens = factor.density
            if innermost:
                def g(x):
                    vals = np.asarray(f(*fixed, x), dtype=complex)
                    if dens is not None:
                        vals = vals * np.asarray(dens(x))
                    return vals
            else:
                def g(x):
                    v = rec(fixed + (float(x),))
                    return v * complex(dens(x)) if dens is not None else v
                g = _elementwise(g)
            r = integrate_line(g, lcfg)
            budget.absorb(r)
            return r.value

        raise DomainError("product factors must be atomic or Lebesgue densities")

    return rec(())


def _integrate_padded(mu: LebesguePad, f: Callable, cfg: QuadratureConfig,
                      budget: _ErrorBudget) -> complex:
    pad = mu.padded_axes
    inner_axes = mu.axes

    if not pad:
        return _integrate(mu.inner, f, cfg, budget)

    # Padding axes run first, innermost the largest index.
    pad_desc = tuple(sorted(pad, reverse=True))

    def g(*s_vals):
        s_scalars = tuple(float(np.real(v)) for v in s_vals)

        def rec(fixed: dict[int, float], depth: int) -> complex:
            axis = pad_desc[len(pad) - 1 - depth]  # outermost pad axis first
            lcfg = cfg.tighter(0.1 ** (depth + 1))
            innermost = depth == len(pad) - 1
            if innermost:
                def h(x):
                    args: list = [None] * mu.dim
                    for j, sv in zip(inner_axes, s_scalars):
                        args[j] = sv
                    for j, fv in fixed.items():
                        args[j] = fv
                    args[axis] = x
                    return f(*args)
            else:
                def h(x):
                    sub = dict(fixed)
                    sub[axis] = float(x)
                    return rec(sub, depth + 1)
                h = _elementwise(h)
            r = integrate_line(h, lcfg)
            budget.absorb(r)
            return r.value

        return rec({}, 0)

    return _integrate(mu.inner, _elementwise(g), cfg, budget)


def mass(mu: Measure, region: Region,
         cfg: QuadratureConfig = DEFAULT_CONFIG) -> QuadratureResult:
    """Measure of a finite union of closed boxes.

    Exact for atomic measures; otherwise equals ``integrate(mu, chi_U)``.
    """
    boxes = [region] if isinstance(region, Box) else list(region)
    for box in boxes:
        if box.dimension != mu.dimension:
            raise DimensionMismatchError("box dimension must match the measure")

    if isinstance(mu, Atomic):
        total = sum(w for loc, w in mu.atoms if any(b.contains(loc) for b in boxes))
        return QuadratureResult(complex(total), 0.0, True, False)

    return integrate(mu, indicator(boxes), cfg)
