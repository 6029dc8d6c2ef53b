"""Planar vector fields and the builtin catalogue of test systems.

A :class:`VectorField` bundles two expressions (dx/dt, dy/dt).  Evaluation
goes through compiled callables cached on the instance; Jacobians come from
exact symbolic differentiation.

Builtins
--------
saddle   dx/dt = x,  dy/dt = -y            (linear saddle at the origin)
node     dx/dt = -x, dy/dt = -y            (globally attracting linear sink)
radial   polar dr/dt = r(1-r^2), dtheta/dt = 1   (unit limit cycle)
vdp      dx/dt = y,  dy/dt = (1-x^2)y - x  (van der Pol, mu = 1)
annulus  polar dr/dt = -r(r-1)(r-1.5)(r-2), dtheta/dt = 1

Polar-defined builtins are expanded to Cartesian expression strings when
the catalogue is built, using dx/dt = x*g(r) - y, dy/dt = y*g(r) + x with
g = (dr/dt)/r, so a single evaluation pathway serves every system.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np

from . import expr as ex
from .errors import UnknownSystemError

__all__ = ["VectorField", "from_strings", "builtin", "builtin_names", "BUILTINS"]

Point = tuple[float, float]


@dataclass(frozen=True)
class VectorField:
    """Autonomous planar field dx/dt = fx(x, y), dy/dt = fy(x, y)."""

    fx: ex.Expr
    fy: ex.Expr
    name: str = ""

    @cached_property
    def _velocity_fn(self) -> Callable[[float, float], tuple[float, ...]]:
        return ex.scalar_function(self.fx, self.fy)

    @cached_property
    def _velocity_np(self) -> Callable[..., tuple[np.ndarray, ...]]:
        return ex.numpy_function(self.fx, self.fy)

    @cached_property
    def _jacobian_fn(self) -> Callable[[float, float], tuple[float, ...]]:
        return ex.scalar_function(
            ex.differentiate(self.fx, "x"),
            ex.differentiate(self.fx, "y"),
            ex.differentiate(self.fy, "x"),
            ex.differentiate(self.fy, "y"),
        )

    def velocity(self, p: Point) -> Point:
        """Field value at p; raises NonFiniteError on NaN/inf."""
        vx, vy = self._velocity_fn(p[0], p[1])
        return (vx, vy)

    def velocity_many(self, x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Vectorized field evaluation; non-finite entries are left to the
        caller to mask."""
        vx, vy = self._velocity_np(x, y)
        return vx, vy

    def jacobian(self, p: Point) -> np.ndarray:
        """2x2 matrix of symbolic partials evaluated at p."""
        j = self._jacobian_fn(p[0], p[1])
        return np.array([[j[0], j[1]], [j[2], j[3]]])

    def speed(self, p: Point) -> float:
        vx, vy = self.velocity(p)
        return float(np.hypot(vx, vy))

    def reversed(self) -> "VectorField":
        """Time-reversed field (negated right-hand sides)."""
        return VectorField(
            ex.Unary("neg", self.fx),
            ex.Unary("neg", self.fy),
            name=f"{self.name}-reversed" if self.name else "reversed",
        )


def from_strings(fx: str, fy: str, name: str = "") -> VectorField:
    """Build a field from two expression strings."""
    return VectorField(ex.parse(fx), ex.parse(fy), name=name)


def _polar_to_cartesian(g_of_r: str) -> tuple[str, str]:
    """Expand polar (dr/dt)/r = g(r), dtheta/dt = 1 to Cartesian strings.

    ``g_of_r`` is an expression in r; r is substituted by sqrt(x^2 + y^2),
    which is exact algebra for the catalogued polynomials in r.
    """
    g = g_of_r.replace("r", "(sqrt(x^2 + y^2))")
    return (f"x*({g}) - y", f"y*({g}) + x")


def _make_builtins() -> dict[str, VectorField]:
    catalogue: dict[str, tuple[str, str]] = {
        "saddle": ("x", "-y"),
        "node": ("-x", "-y"),
        "radial": ("-y + x*(1 - x^2 - y^2)", "x + y*(1 - x^2 - y^2)"),
        "vdp": ("y", "(1 - x^2)*y - x"),
        # dr/dt = -r(r-1)(r-1.5)(r-2)  =>  g = (dr/dt)/r = -r^3+4.5r^2-6.5r+3
        "annulus": _polar_to_cartesian("3 + 4.5*r^2 - (r^2 + 6.5)*r"),
    }
    return {
        name: from_strings(fx, fy, name=name) for name, (fx, fy) in catalogue.items()
    }


BUILTINS = _make_builtins()


def builtin(name: str) -> VectorField:
    """Look up a catalogued system; raises UnknownSystemError."""
    try:
        return BUILTINS[name]
    except KeyError:
        raise UnknownSystemError(
            f"unknown system {name!r}; available: {', '.join(sorted(BUILTINS))}"
        ) from None


def builtin_names() -> list[str]:
    return sorted(BUILTINS)
