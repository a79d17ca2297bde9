"""Central-difference derivatives of scalar functions and Richardson extrapolation."""
from typing import Callable, Optional, Sequence

import numpy as np

EPS = np.finfo(float).eps

ScalarField = Callable[[np.ndarray], float]


def default_steps(x, power: float = 0.25) -> np.ndarray:
    """Per-axis steps eps**power * (1 + |x_i|).

    power=1/4 balances truncation and rounding for second differences.
    """
    return EPS ** power * (1.0 + np.abs(np.asarray(x, dtype=float)))


def central_gradient(func: ScalarField, x, steps: Optional[np.ndarray] = None) -> np.ndarray:
    """Gradient by central first differences."""
    x = np.asarray(x, dtype=float)
    h = default_steps(x) if steps is None else np.broadcast_to(np.asarray(steps, dtype=float), x.shape)
    grad = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h[i]
        grad[i] = (func(x + e) - func(x - e)) / (2.0 * h[i])
    return grad


def central_hessian(func: ScalarField, x, steps: Optional[np.ndarray] = None,
                    center_value: Optional[float] = None) -> np.ndarray:
    """Symmetric Hessian by central second differences.

    Diagonal: (f(x+h e_i) - 2 f(x) + f(x-h e_i)) / h_i^2.
    Off-diagonal: four-point cross stencil divided by 4 h_i h_j.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    h = default_steps(x) if steps is None else np.broadcast_to(np.asarray(steps, dtype=float), x.shape)
    f0 = func(x) if center_value is None else center_value
    hess = np.empty((n, n))
    for i in range(n):
        ei = np.zeros(n)
        ei[i] = h[i]
        hess[i, i] = (func(x + ei) - 2.0 * f0 + func(x - ei)) / h[i] ** 2
        for j in range(i + 1, n):
            ej = np.zeros(n)
            ej[j] = h[j]
            cross = func(x + ei + ej) - func(x + ei - ej) - func(x - ei + ej) + func(x - ei - ej)
            hess[i, j] = hess[j, i] = cross / (4.0 * h[i] * h[j])
    return hess


def richardson_extrapolate(base_values: Sequence, p: int = 2, r: float = 2.0):
    """Combine approximations at steps h, h/r, h/r^2, ... to cancel the O(h^p) error term.

    For two values and p=2, r=2 this is (4 A_{h/2} - A_h) / 3.
    """
    if len(base_values) < 2:
        raise ValueError("richardson_extrapolate requires at least two base values.")

    vals = [np.asarray(v, dtype=float) for v in base_values]
    for j in range(1, len(vals)):
        factor = r ** (p * j)
        for k in range(len(vals) - 1, j - 1, -1):
            vals[k] = (factor * vals[k] - vals[k - 1]) / (factor - 1.0)

    result = vals[-1]
    return float(result) if result.ndim == 0 else result
