"""Numerical geodesics on nilpotent Lie groups in exponential coordinates.

The geodesic equation splits into the Euler-Arnold equation for the
body velocity and a kinematic reconstruction for the position; a
geodesic-orbit certificate is validated by comparing the integrated
geodesic with the one-parameter isometry orbit exp(tD) X0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from . import linear_core as lc
from .algebra import MetricLieAlgebra, nilpotency_class
from .errors import InputError, PreconditionError
from .go_checker import SamplerConfig, isometry_decomposition, kv_solve


def group_mult(L: MetricLieAlgebra, a, b) -> np.ndarray:
    """Baker-Campbell-Hausdorff product in exponential coordinates.

    Exact for nilpotency class at most 2, where the series truncates.
    """
    if nilpotency_class(L) > 2:
        raise PreconditionError("closed-form product needs nilpotency class <= 2")
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return a + b + 0.5 * L.bracket(a, b)


def connection(L: MetricLieAlgebra, X, Y) -> np.ndarray:
    """Levi-Civita connection of the left-invariant metric at the identity."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    d = L.dim
    rhs = np.empty(d)
    for k in range(d):
        w = np.eye(d)[k]
        rhs[k] = 0.5 * (
            L.inner(L.bracket(X, Y), w) - L.inner(L.bracket(Y, w), X) + L.inner(L.bracket(w, X), Y)
        )
    return np.linalg.solve(L.gram, rhs)


def _velocity_rate(L: MetricLieAlgebra, gram_inv, v):
    # Euler-Arnold: (dv/dt, w) = ([v, w], v) for all w
    d = L.dim
    r = np.array([L.inner(L.bracket(v, np.eye(d)[j]), v) for j in range(d)])
    return gram_inv @ r


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    positions: np.ndarray  # (steps + 1, d) exponential coordinates
    velocities: np.ndarray  # body velocities, same shape


def geodesic_integrate(L: MetricLieAlgebra, X0, T: float, h: float) -> Trajectory:
    """Fixed-step RK4 for the geodesic through the identity with gamma'(0) = X0."""
    if h <= 0 or T <= 0:
        raise InputError("need positive step and horizon")
    X0 = np.asarray(X0, dtype=float)
    if X0.shape != (L.dim,):
        raise InputError("initial velocity has wrong dimension")
    gram_inv = np.linalg.inv(L.gram)
    steps = int(round(T / h))

    def rate(state):
        x, v = state[: L.dim], state[L.dim:]
        xdot = v - 0.5 * L.bracket(x, v)
        return np.concatenate([xdot, _velocity_rate(L, gram_inv, v)])

    state = np.concatenate([np.zeros(L.dim), X0])
    times = np.empty(steps + 1)
    out = np.empty((steps + 1, 2 * L.dim))
    times[0] = 0.0
    out[0] = state
    for i in range(steps):
        k1 = rate(state)
        k2 = rate(state + 0.5 * h * k1)
        k3 = rate(state + 0.5 * h * k2)
        k4 = rate(state + h * k3)
        state = state + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        times[i + 1] = (i + 1) * h
        out[i + 1] = state
    return Trajectory(times, out[:, : L.dim], out[:, L.dim:])


def orbit_integrate(L: MetricLieAlgebra, X0, D, T: float, h: float) -> Trajectory:
    """Curve with body velocity v(t) = exp(tD) X0 reconstructed by RK4.

    D must be a gram-skew derivation; then the curve is the orbit of a
    one-parameter isometry group and a candidate geodesic.
    """
    X0 = np.asarray(X0, dtype=float)
    D = np.asarray(D, dtype=float)
    d = L.dim
    skew_res = np.max(np.abs(L.gram @ D + D.T @ L.gram))
    der_res = max(
        float(np.max(np.abs(D @ L.bracket(np.eye(d)[i], np.eye(d)[j])
                            - L.bracket(D @ np.eye(d)[i], np.eye(d)[j])
                            - L.bracket(np.eye(d)[i], D @ np.eye(d)[j]))))
        for i in range(d) for j in range(d)
    )
    tol = 1e-8 * max(1.0, float(np.max(np.abs(D))))
    if skew_res > tol or der_res > tol:
        raise PreconditionError("D is not a metric-skew derivation")
    steps = int(round(T / h))

    def vel(t):
        return expm(t * D) @ X0

    def xrate(t, x):
        v = vel(t)
        return v - 0.5 * L.bracket(x, v)

    x = np.zeros(d)
    times = np.empty(steps + 1)
    pos = np.empty((steps + 1, d))
    velocities = np.empty((steps + 1, d))
    times[0], pos[0], velocities[0] = 0.0, x, X0
    for i in range(steps):
        t = i * h
        k1 = xrate(t, x)
        k2 = xrate(t + 0.5 * h, x + 0.5 * h * k1)
        k3 = xrate(t + 0.5 * h, x + 0.5 * h * k2)
        k4 = xrate(t + h, x + h * k3)
        x = x + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        times[i + 1] = t + h
        pos[i + 1] = x
        velocities[i + 1] = vel(t + h)
    return Trajectory(times, pos, velocities)


@dataclass(frozen=True)
class OrbitComparison:
    sup_deviation: float
    endpoint_deviation: float
    times: np.ndarray
    deviations: np.ndarray
    kv_residual: float


def compare_geodesic_orbit(
    L: MetricLieAlgebra,
    X0,
    T: float = 1.0,
    h: float = 1e-3,
    config: SamplerConfig = SamplerConfig(),
) -> OrbitComparison:
    """Integrate the geodesic with gamma'(0) = X0 and the isometry orbit
    generated by the KV solution Z, and report their pointwise distance.

    For a GO metric the sup deviation is at the integrator error level;
    a persistent gap certifies that this X0 admits no orbit geodesic
    within the full isometry algebra.
    """
    X0 = np.asarray(X0, dtype=float)
    decomp = isometry_decomposition(L, config.tau_rank)
    coeffs, kv_res = kv_solve(decomp, X0)
    D = np.zeros((L.dim, L.dim))
    for c, H in zip(coeffs, decomp.h_basis):
        D += c * H
    geo = geodesic_integrate(L, X0, T, h)
    orb = orbit_integrate(L, X0, D, T, h)
    diffs = geo.positions - orb.positions
    dev = np.sqrt(np.einsum("ti,ij,tj->t", diffs, L.gram, diffs))
    return OrbitComparison(
        sup_deviation=float(np.max(dev)),
        endpoint_deviation=float(dev[-1]),
        times=geo.times,
        deviations=dev,
        kv_residual=float(kv_res),
    )
