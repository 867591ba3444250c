"""Adaptive embedded Runge-Kutta pair of orders 5(4), Dormand-Prince coefficients.

A lean reimplementation tuned for this package's large complex linear systems:
stage combinations are single dot products, FSAL reuse saves one evaluation
per step, and samples are taken on the fly by cubic Hermite interpolation
onto a fixed output grid (solution and derivative are available at both step
ends for free, and the step controller keeps h times the fastest active
frequency small, so the interpolation error sits far below the integration
tolerance).
"""

from __future__ import annotations

import math

import numpy as np

_C = np.array([0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0])
_A = (
    np.array([1.0 / 5.0]),
    np.array([3.0 / 40.0, 9.0 / 40.0]),
    np.array([44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0]),
    np.array([19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0,
              -212.0 / 729.0]),
    np.array([9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0,
              -5103.0 / 18656.0]),
    np.array([35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0,
              -2187.0 / 6784.0, 11.0 / 84.0]),
)
# difference between the 5th-order weights and the embedded 4th-order ones
_E = np.array([35.0 / 384.0 - 5179.0 / 57600.0,
               0.0,
               500.0 / 1113.0 - 7571.0 / 16695.0,
               125.0 / 192.0 - 393.0 / 640.0,
               -2187.0 / 6784.0 + 92097.0 / 339200.0,
               11.0 / 84.0 - 187.0 / 2100.0,
               -1.0 / 40.0])


class StepSizeUnderflow(RuntimeError):
    """Step size shrank below machine resolution; carries the failure time."""

    def __init__(self, t: float):
        self.t = t
        super().__init__(f"step size underflow at t = {t}")


def _rms(v: np.ndarray) -> float:
    return float(np.linalg.norm(v)) / math.sqrt(v.size)


def _initial_step(fun, t0, y0, f0, direction, rtol, atol, order=5):
    # Hairer-Norsett-Wanner starting step heuristic
    scale = atol + rtol * np.abs(y0)
    d0 = _rms((y0 / scale).astype(complex))
    d1 = _rms((f0 / scale).astype(complex))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    f1 = fun(t0 + h0 * direction, y0 + h0 * direction * f0)
    d2 = _rms(((f1 - f0) / scale).astype(complex)) / h0
    if d1 <= 1e-15 and d2 <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1.0 / (order + 1))
    return min(100.0 * h0, h1)


def integrate_dopri5(fun, t0: float, t1: float, y0: np.ndarray, *,
                     rtol: float = 1e-8, atol: float = 1e-10,
                     t_eval: np.ndarray | None = None,
                     max_step: float = math.inf,
                     observer=None, project=None):
    """Advance y' = fun(t, y) from t0 to t1, sampling onto t_eval.

    Returns (y_final, samples, n_steps); samples[i] is the cubic-Hermite value
    of y at t_eval[i] (None when t_eval is None), n_steps counts accepted
    steps.  observer(t, y), if given, is called after every accepted step.
    project(y), if given, is applied in place to every accepted state: use it
    to re-project onto a linear manifold that the flow preserves exactly, so
    floating-point rounding bias cannot accumulate coherently over long runs.
    Raises StepSizeUnderflow if the step controller collapses.
    """
    direction = 1.0 if t1 >= t0 else -1.0
    t = t0
    y = np.array(y0, dtype=complex, copy=True)
    f = fun(t, y)
    n = y.size

    sampling = t_eval is not None
    next_i = 0
    if sampling:
        t_eval = np.asarray(t_eval, dtype=float)
        samples = np.empty((t_eval.size, n), dtype=complex)
        while next_i < t_eval.size and (t_eval[next_i] - t) * direction <= 0.0:
            samples[next_i] = y
            next_i += 1
    else:
        samples = None

    h = min(_initial_step(fun, t, y, f, direction, rtol, atol),
            abs(t1 - t0), max_step)
    K = np.empty((7, n), dtype=complex)
    abs_y = np.abs(y)
    n_steps = 0

    SAFETY, MIN_FACTOR, MAX_FACTOR, EXP = 0.9, 0.2, 10.0, -1.0 / 5.0

    while (t1 - t) * direction > 0.0:
        h = min(h, abs(t1 - t), max_step)
        if h <= abs(t) * 1e-15 + 1e-300:
            raise StepSizeUnderflow(t)
        hd = h * direction

        K[0] = f
        for i in range(5):
            yi = y + hd * (_A[i] @ K[: i + 1])
            K[i + 1] = fun(t + _C[i + 1] * hd, yi)
        y_new = y + hd * (_A[5] @ K[:6])
        f_new = fun(t + hd, y_new)
        K[6] = f_new

        abs_new = np.abs(y_new)
        scale = np.maximum(abs_y, abs_new)
        scale *= rtol
        scale += atol
        norm = abs(hd) * _rms((_E @ K) / scale)

        if norm <= 1.0:
            t_new = t + hd
            if project is not None:
                project(y_new)
            if sampling:
                while next_i < t_eval.size and \
                        (t_eval[next_i] - t_new) * direction <= 0.0:
                    s = (t_eval[next_i] - t) / hd
                    h00 = (1.0 + 2.0 * s) * (1.0 - s) ** 2
                    h10 = s * (1.0 - s) ** 2
                    h01 = s * s * (3.0 - 2.0 * s)
                    h11 = s * s * (s - 1.0)
                    samples[next_i] = (h00 * y + h01 * y_new
                                       + (hd * h10) * f + (hd * h11) * f_new)
                    next_i += 1
            t, y, f, abs_y = t_new, y_new, f_new, abs_new
            n_steps += 1
            if observer is not None:
                observer(t, y)
            factor = MAX_FACTOR if norm == 0.0 else min(
                MAX_FACTOR, SAFETY * norm ** EXP)
            h *= factor
        else:
            h *= max(MIN_FACTOR, SAFETY * norm ** EXP)

    if sampling:
        while next_i < t_eval.size:
            samples[next_i] = y
            next_i += 1
    return y, samples, n_steps
