"""
Volumetric stored-energy law ``H(t) = alpha t**(tau+2) + beta t**(-s)``.

The family is smooth and convex on ``(0, inf)``, superlinear at infinity and
blows up at ``0+``. Its derivative behaves like ``t**(tau+1)`` for large ``t``
and like ``-t**(-s-1)`` near ``0``, which are the growth conditions needed for
the inner-variation equations. Every function here accepts scalars or arrays
and raises :class:`InfeasibleDeterminantError` on non-positive input.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .errors import InfeasibleDeterminantError

D0_DEFAULT = 0.5
D1_DEFAULT = 2.0


@dataclass(frozen=True)
class MaterialLaw:
    alpha: float = 1.0
    beta: float = 1.0
    tau: float = 1.0
    s: float = 1.0

    def __post_init__(self):
        for name in ("alpha", "beta", "tau", "s"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    def to_dict(self) -> dict:
        return asdict(self)


def _check_positive(t):
    t = np.asarray(t, dtype=float)
    if t.ndim == 0:
        if not t > 0:
            raise InfeasibleDeterminantError(f"volume ratio {float(t)!r} is not positive", None, float(t))
        return t
    bad = ~(t > 0)
    if bad.any():
        k = int(np.argmin(np.where(np.isnan(t), -np.inf, t)))
        raise InfeasibleDeterminantError(
            f"{int(bad.sum())} non-positive volume ratio(s); worst {t.flat[k]!r} at index {k}", k, float(t.flat[k]))
    return t


def _out(t, value):
    return float(value) if np.ndim(t) == 0 else value


def eval_H(law: MaterialLaw, t):
    t = _check_positive(t)
    return _out(t, law.alpha * t ** (law.tau + 2) + law.beta * t ** (-law.s))


def eval_H_prime(law: MaterialLaw, t):
    t = _check_positive(t)
    return _out(t, law.alpha * (law.tau + 2) * t ** (law.tau + 1) - law.beta * law.s * t ** (-law.s - 1))


def eval_H_second(law: MaterialLaw, t):
    t = _check_positive(t)
    return _out(t, law.alpha * (law.tau + 2) * (law.tau + 1) * t ** law.tau
                + law.beta * law.s * (law.s + 1) * t ** (-law.s - 2))


def stationary_point(law: MaterialLaw) -> float:
    """The unique ``t*`` with ``H'(t*) = 0`` (closed form)."""
    return (law.beta * law.s / (law.alpha * (law.tau + 2))) ** (1.0 / (law.tau + law.s + 2))


def growth_constants(law: MaterialLaw, d0: float = D0_DEFAULT, d1: float = D1_DEFAULT,
                     n_check: int = 2000) -> dict:
    """Constants of the two-sided power bounds and a numerical self-check.

    Near zero (``t < d0``)::

        c1 t^-s     <= H(t)   <= c2 t^-s
        c1 t^(-s-1) <= -H'(t) <= c2 t^(-s-1)

    and for ``t >= d1``: ``c3 t^(tau+1) <= H'(t) <= c4 t^(tau+1)``. The
    constants are exact extrema of the normalized ratios; ``verified`` records
    that sampled ratios respect them.
    """
    a, b, tau, s = law.alpha, law.beta, law.tau, law.s
    p = tau + s + 2
    if not d0 < stationary_point(law):
        raise ValueError(f"d0={d0} must lie below the stationary point {stationary_point(law):.6g} of H")
    # H t^s = a t^p + b and -H' t^(s+1) = b s - a (tau+2) t^p are monotone on (0, d0)
    c1 = min(b, b * s - a * (tau + 2) * d0 ** p)
    c2 = max(b + a * d0 ** p, b * s)
    # H' t^-(tau+1) = a (tau+2) - b s t^-p increases to a (tau+2)
    c3 = a * (tau + 2) - b * s * d1 ** (-p)
    c4 = a * (tau + 2)
    if c3 <= 0:
        raise ValueError(f"d1={d1} too small: lower growth constant is not positive")

    t_lo = np.linspace(d0 / n_check, d0, n_check, endpoint=False)
    t_hi = np.geomspace(d1, 1e3 * d1, n_check)
    r0 = eval_H(law, t_lo) * t_lo ** s
    r1 = -eval_H_prime(law, t_lo) * t_lo ** (s + 1)
    r2 = eval_H_prime(law, t_hi) * t_hi ** (-(tau + 1))
    eps = 1e-12
    verified = bool(
        (r0 >= c1 * (1 - eps)).all() and (r0 <= c2 * (1 + eps)).all()
        and (r1 >= c1 * (1 - eps)).all() and (r1 <= c2 * (1 + eps)).all()
        and (r2 >= c3 * (1 - eps)).all() and (r2 <= c4 * (1 + eps)).all()
    )
    return {"d0": d0, "d1": d1, "c1": c1, "c2": c2, "c3": c3, "c4": c4, "verified": verified}
