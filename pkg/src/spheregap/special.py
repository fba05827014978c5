"""Associated Legendre functions of real degree and non-positive real order.

Evaluates the Ferrers function of the first kind P_l^mu(x) on (-1, 1] for
real degree l and order mu <= 0, together with the Gamma function and the
closed-form value P_l^mu(0). These are the radial building blocks of the
separated Dirichlet eigenfunctions on spherical lunes and half-lune
triangles: there the order is -k*pi/beta and the degree exceeds |mu| by a
nonnegative integer.

Evaluation strategy
-------------------
For x >= 0 we use the hypergeometric representation about x = 1,

    P_l^mu(x) = ((1+x)/(1-x))^(mu/2) / Gamma(1-mu)
                * 2F1(l+1, -l; 1-mu; (1-x)/2),

whose series converges quickly for (1-x)/2 <= 1/2 and whose prefactor stays
finite for mu <= 0. For x < 0 two routes are used:

* if l + mu is an integer (every admissible eigenfunction pair is of this
  kind), the connection formula between P_l^mu(-x) and P_l^mu(x) collapses
  to the exact parity rule P_l^mu(-x) = (-1)^(l+mu) P_l^mu(x), which keeps
  machine accuracy arbitrarily close to the endpoint;
* otherwise the general Legendre ODE is integrated numerically from x = 0
  (initial value and slope from the series) with an adaptive high-order
  scheme at absolute tolerance 1e-12.
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from ._kernels import hyp2f1_batch
from .errors import ConvergenceError, DomainError, GammaPoleError

_MAX_TERMS = 800
_INTEGER_TOL = 1e-9
DEFAULT_TOL = 1e-10


def gamma_fn(x: float) -> float:
    """Gamma function on the real line, at least 12 significant digits for |x| <= 50.

    Raises GammaPoleError at the poles x = 0, -1, -2, ...
    """
    if x <= 0 and abs(x - round(x)) < 1e-14:
        raise GammaPoleError(f"gamma pole at x = {x}")
    return math.gamma(x)


def _is_nonpositive_integer(x: float, tol: float = 1e-12) -> bool:
    return x <= tol and abs(x - round(x)) < tol


@dataclass(frozen=True)
class LegendreParams:
    """Validated (degree, order) pair admissible as a radial eigenfunction.

    Admissible means order <= 0 and degree = |order| + m for a nonnegative
    integer m. Arbitrary pairs can still be evaluated through the plain
    module functions; this container is the gate used by the spectrum code.
    """

    degree: float
    order: float

    def __post_init__(self):
        if self.order > 0:
            raise ValueError(f"order must be <= 0, got {self.order}")
        m = self.degree - abs(self.order)
        if m < -_INTEGER_TOL or abs(m - round(m)) > _INTEGER_TOL:
            raise ValueError(
                f"degree {self.degree} is not |order| + m with integer m >= 0 "
                f"(order {self.order})"
            )

    @property
    def offset(self) -> int:
        """The integer m in degree = |order| + m."""
        return int(round(self.degree - abs(self.order)))


def is_admissible(degree: float, order: float) -> bool:
    """Whether (degree, order) passes LegendreParams validation."""
    try:
        LegendreParams(degree, order)
    except ValueError:
        return False
    return True


def _series_many(degree, order, x, tol):
    """Hypergeometric-series evaluation for an array of x in [0, 1]."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    at_one = x >= 1.0
    out[at_one] = 0.0 if order < 0 else 1.0
    rest = ~at_one
    if rest.any():
        xr = x[rest]
        w = 0.5 * (1.0 - xr)
        vals, conv, resid = hyp2f1_batch(
            degree + 1.0, -degree, 1.0 - order, w, tol, _MAX_TERMS
        )
        if not conv.all():
            raise ConvergenceError(
                "hypergeometric series did not converge", float(resid[~conv].max())
            )
        pref = ((1.0 + xr) / (1.0 - xr)) ** (0.5 * order) / gamma_fn(1.0 - order)
        out[rest] = pref * vals
    return out


def _ode_continue(degree, order, x_neg, tol):
    """Integrate the general Legendre ODE from x = 0 to negative arguments."""
    lam = degree * (degree + 1.0)
    mu2 = order * order
    y0 = [legendre_p(degree, order, 0.0, tol=tol),
          legendre_p_dx(degree, order, 0.0, tol=tol)]

    def rhs(x, y):
        one_m_x2 = 1.0 - x * x
        return [y[1], (2.0 * x * y[1] - (lam - mu2 / one_m_x2) * y[0]) / one_m_x2]

    x_neg = np.asarray(x_neg, dtype=float)
    order_idx = np.argsort(x_neg)[::-1]
    sol = solve_ivp(
        rhs,
        (0.0, float(x_neg.min())),
        y0,
        t_eval=x_neg[order_idx],
        method="DOP853",
        rtol=1e-12,
        atol=1e-12,
    )
    if not sol.success:
        raise ConvergenceError(f"ODE continuation failed: {sol.message}", math.inf)
    out = np.empty_like(x_neg)
    out[order_idx] = sol.y[0]
    return out


def legendre_p_many(degree: float, order: float, x, *, tol: float = DEFAULT_TOL) -> np.ndarray:
    """P_l^mu at an array of points x in (-1, 1], order mu <= 0."""
    if order > 0:
        raise DomainError(f"order must be <= 0, got {order}")
    if degree < -0.5:
        degree = -degree - 1.0  # P is invariant under degree -> -degree - 1
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x <= -1.0) or np.any(x > 1.0):
        raise DomainError("argument outside (-1, 1]")
    out = np.empty_like(x)
    neg = x < 0.0
    out[~neg] = _series_many(degree, order, x[~neg], tol)
    if neg.any():
        m = degree + order
        if abs(m - round(m)) < _INTEGER_TOL:
            # parity rule, exact for degree - |order| integer
            sign = -1.0 if int(round(m)) % 2 else 1.0
            out[neg] = sign * _series_many(degree, order, -x[neg], tol)
        else:
            out[neg] = _ode_continue(degree, order, x[neg], tol)
    return out


def legendre_p(degree: float, order: float, x: float, *, tol: float = DEFAULT_TOL) -> float:
    """Ferrers function P_l^mu(x) for real degree l, order mu <= 0, x in (-1, 1].

    Solves (1-x^2) R'' - 2x R' + [l(l+1) - mu^2/(1-x^2)] R = 0. For mu < 0
    the value tends to 0 as x -> 1.
    """
    return float(legendre_p_many(degree, order, np.array([x]), tol=tol)[0])


def legendre_p_dx(degree: float, order: float, x: float, *, tol: float = DEFAULT_TOL) -> float:
    """Derivative dP_l^mu/dx at x in [0, 1), from the series representation."""
    if order > 0:
        raise DomainError(f"order must be <= 0, got {order}")
    if x < 0.0 or x >= 1.0:
        raise DomainError("derivative path requires x in [0, 1)")
    a, b, c = degree + 1.0, -degree, 1.0 - order
    w = np.array([0.5 * (1.0 - x)])
    f, conv, resid = hyp2f1_batch(a, b, c, w, tol, _MAX_TERMS)
    f2, conv2, resid2 = hyp2f1_batch(a + 1.0, b + 1.0, c + 1.0, w, tol, _MAX_TERMS)
    if not (conv.all() and conv2.all()):
        raise ConvergenceError(
            "hypergeometric series did not converge",
            float(max(resid.max(), resid2.max())),
        )
    pref = ((1.0 + x) / (1.0 - x)) ** (0.5 * order) / gamma_fn(1.0 - order)
    return float(pref * (order / (1.0 - x * x) * f[0] - 0.5 * a * b / c * f2[0]))


def legendre_p_at_zero(degree: float, order: float) -> float:
    """Closed-form P_l^mu(0) = 2^mu sqrt(pi) / (Gamma((l-mu)/2 + 1) Gamma(1/2 - (l+mu)/2)).

    A pole of either Gamma factor makes the whole expression an exact zero.
    """
    g1_arg = 0.5 * (degree - order) + 1.0
    g2_arg = 0.5 - 0.5 * (degree + order)
    if _is_nonpositive_integer(g1_arg) or _is_nonpositive_integer(g2_arg):
        return 0.0
    return 2.0**order * math.sqrt(math.pi) / (math.gamma(g1_arg) * math.gamma(g2_arg))
