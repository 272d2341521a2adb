"""Shared numerical helpers: checked adaptive quadrature."""

from __future__ import annotations

from typing import Callable, Sequence

from scipy.integrate import quad


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach its tolerance.

    Carries the best value obtained and the achieved error estimate so the
    failure is reported, never silently truncated.
    """

    def __init__(self, message: str, value: float, error_estimate: float):
        super().__init__(f"{message} (value={value!r}, error_estimate={error_estimate!r})")
        self.value = value
        self.error_estimate = error_estimate


def checked_quad(
    func: Callable[[float], float],
    a: float,
    b: float,
    *,
    epsrel: float,
    epsabs: float = 1e-300,
    points: Sequence[float] | None = None,
    limit: int = 200,
) -> tuple[float, float]:
    """scipy.integrate.quad that raises instead of warning on failure."""
    out = quad(func, a, b, epsabs=epsabs, epsrel=epsrel, points=points, limit=limit, full_output=1)
    if len(out) > 3:
        raise QuadratureError(str(out[3]), out[0], out[1])
    return out[0], out[1]
