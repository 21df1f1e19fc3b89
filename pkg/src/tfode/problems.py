"""Built-in benchmark problems with closed-form solutions.

``example2`` is a Caputo problem manufactured so that the exact solution is
``e^{-lam t} (t^8 + 9/4 t^alpha)``; its RHS is smooth along the solution, so
the stepper attains its full design order.  ``example3`` is the tempered
relaxation equation ``D^(alpha,lam) u = -mu u`` whose solution
``e^{-lam t} E_{alpha,1}(-mu t^alpha)`` has unbounded low-order derivatives
at t = 0 and is the standard target for the split-interval scheme.
"""

from __future__ import annotations

import math

from .solver import CAPUTO, Problem
from .specfun import gamma, mittag_leffler

__all__ = [
    "exact_example2",
    "exact_example3",
    "example2",
    "example3",
    "builtin_problem",
    "BUILTIN_PROBLEMS",
]


def exact_example2(alpha: float, lam: float, t: float) -> float:
    """Closed-form solution of ``example2``: e^{-lam t} (t^8 + 9/4 t^alpha)."""
    if t < 0.0:
        raise ValueError("t must be nonnegative")
    return math.exp(-lam * t) * (t**8 + 2.25 * t**alpha)


def exact_example3(alpha: float, lam: float, mu: float, t: float) -> float:
    """Closed-form solution of ``example3``: e^{-lam t} E_{alpha,1}(-mu t^alpha)."""
    if t < 0.0:
        raise ValueError("t must be nonnegative")
    if mu <= 0.0:
        raise ValueError("mu must be positive")
    return math.exp(-lam * t) * mittag_leffler(alpha, 1.0, -mu * t**alpha)


def example2(alpha: float, lam: float, b: float = 1.0) -> Problem:
    """Caputo problem with the manufactured solution of :func:`exact_example2`.

    RHS: ``e^{-lam t} (G(9)/G(9-alpha) t^(8-alpha) + t^8 + 9/4 t^alpha
    + 9/4 G(alpha+1)) - u`` with zero initial data.
    """
    c1 = gamma(9.0) / gamma(9.0 - alpha)
    c2 = 2.25 * gamma(alpha + 1.0)

    def rhs(t: float, u: float) -> float:
        return (
            math.exp(-lam * t) * (c1 * t ** (8.0 - alpha) + t**8 + 2.25 * t**alpha + c2)
            - u
        )

    n = max(1, math.ceil(alpha))
    return Problem(
        kind=CAPUTO,
        alpha=alpha,
        lam=lam,
        a=0.0,
        b=b,
        init=(0.0,) * n,
        rhs=rhs,
        exact=lambda t: exact_example2(alpha, lam, t),
    )


def example3(alpha: float, lam: float, mu: float = 1.0, b: float = 1.1) -> Problem:
    """Tempered relaxation equation ``D^(alpha,lam) u = -mu u``.

    Initial data ``e^{lam t} u|_0 = 1`` (and zero first derivative for
    ``alpha`` in (1, 2)).
    """
    def rhs(t: float, u: float) -> float:
        return -mu * u

    n = max(1, math.ceil(alpha))
    init = (1.0,) if n == 1 else (1.0, 0.0)
    return Problem(
        kind=CAPUTO,
        alpha=alpha,
        lam=lam,
        a=0.0,
        b=b,
        init=init,
        rhs=rhs,
        exact=lambda t: exact_example3(alpha, lam, mu, t),
    )


BUILTIN_PROBLEMS = {
    "example2": example2,
    "example3": example3,
    "relax": example3,  # alias with configurable mu
}


def builtin_problem(name: str, alpha: float, lam: float, **kwargs) -> Problem:
    """Instantiate a built-in problem by registry name."""
    try:
        factory = BUILTIN_PROBLEMS[name]
    except KeyError:
        raise ValueError(
            f"unknown builtin problem {name!r}; available: "
            f"{', '.join(sorted(BUILTIN_PROBLEMS))}"
        ) from None
    return factory(alpha, lam, **kwargs)
