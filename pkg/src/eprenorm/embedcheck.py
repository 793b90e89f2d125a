"""Certifies the auxiliary-mode embedding of the exponential memory kernel.

Two integrators evolve the same mean-field dynamics through different
formulations: one carries the auxiliary mode c as a third dynamical
variable coupled via g_c, the other keeps the two physical modes and feeds
the memory convolution through the accumulator

    u(t) = int_0^t exp(-Omega_c (t - tau)) b(tau) dtau,
    du/dt = -Omega_c u + b,   u(0) = 0,

entering the mechanical equation as +(gamma*Omega_c/2) * u.  With c(0) = 0
the two right-hand sides are mathematically identical, so their trajectory
difference measures nothing but integrator error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import StepTooLarge
from .model import DriveParams, SystemParams, memory_kernel_smooth, spectral_density

# Resolution requirement: at least 50 steps per fastest period/decay.
MAX_DT_FRACTION = 1.0 / 50.0


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled mean-amplitude history.

    amps has one row per time; columns are (a, b, c) for the three-mode
    integrator and (a, b, u) for the convolution integrator.
    """

    times: np.ndarray
    amps: np.ndarray

    def __post_init__(self):
        if len(self.times) < 2:
            raise ValueError("trajectory needs at least 2 samples")
        if self.times[1] <= self.times[0]:
            raise ValueError("times must increase")
        if self.amps.shape[0] != len(self.times):
            raise ValueError("one amplitude row per time sample")


def _check_step(p: SystemParams, t_final: float, dt: float):
    if t_final <= 0.0:
        raise ValueError(f"t_final must be positive, got {t_final!r}")
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt!r}")
    limit = MAX_DT_FRACTION / max(p.omega_m, p.omega_c)
    if dt > limit:
        raise StepTooLarge(f"dt = {dt!r} exceeds resolution limit {limit!r}")


def _rk4(f, y0, n_steps: int, dt: float):
    """Classical fixed-step 4th-order integration over tuples of complexes."""
    half = dt / 2.0
    sixth = dt / 6.0
    y = y0
    out = [y0]
    for _ in range(n_steps):
        k1 = f(y)
        k2 = f(tuple(a + half * b for a, b in zip(y, k1)))
        k3 = f(tuple(a + half * b for a, b in zip(y, k2)))
        k4 = f(tuple(a + dt * b for a, b in zip(y, k3)))
        y = tuple(
            a + sixth * (b + 2.0 * c + 2.0 * d + e)
            for a, b, c, d, e in zip(y, k1, k2, k3, k4)
        )
        out.append(y)
    return out


def _trajectory(states, n_steps: int, dt: float) -> Trajectory:
    times = np.arange(n_steps + 1, dtype=float) * dt
    return Trajectory(times=times, amps=np.array(states, dtype=complex))


def integrate_pseudomode(
    p: SystemParams, d: DriveParams, init, t_final: float, dt: float
) -> Trajectory:
    """Integrate the three-mode system (a, b, c) from init with fixed-step RK4."""
    _check_step(p, t_final, dt)
    n_steps = max(1, int(round(t_final / dt)))
    ca = 1j * d.delta - p.kappa / 2.0
    cb = -(1j * p.omega_m + p.gamma / 2.0)
    ig = 1j * d.g
    gc = p.g_c
    oc = p.omega_c

    def rhs(y):
        a, b, c = y
        return (ca * a - ig * b, -ig * a + cb * b - gc * c, -gc * b - oc * c)

    y0 = (complex(init[0]), complex(init[1]), complex(init[2]))
    return _trajectory(_rk4(rhs, y0, n_steps, dt), n_steps, dt)


def integrate_nonmarkovian(
    p: SystemParams, d: DriveParams, init_ab, t_final: float, dt: float
) -> Trajectory:
    """Integrate the two-mode system with the memory convolution held in u.

    The returned third column is the accumulator u, which maps onto the
    auxiliary mode as c = -g_c * u.
    """
    _check_step(p, t_final, dt)
    n_steps = max(1, int(round(t_final / dt)))
    ca = 1j * d.delta - p.kappa / 2.0
    cb = -(1j * p.omega_m + p.gamma / 2.0)
    ig = 1j * d.g
    mem = p.gamma * p.omega_c / 2.0
    oc = p.omega_c

    def rhs(y):
        a, b, u = y
        return (ca * a - ig * b, -ig * a + cb * b + mem * u, -oc * u + b)

    y0 = (complex(init_ab[0]), complex(init_ab[1]), 0.0j)
    return _trajectory(_rk4(rhs, y0, n_steps, dt), n_steps, dt)


def compare_embeddings(
    p: SystemParams, d: DriveParams, init_ab, t_final: float, dt: float
) -> float:
    """Maximum relative (a, b) deviation between the two formulations.

    The three-mode run starts with c(0) = 0 so the embedding is exact and
    any deviation is integrator error; the result is normalized by the peak
    amplitude norm of the convolution run.
    """
    pm = integrate_pseudomode(p, d, (init_ab[0], init_ab[1], 0.0), t_final, dt)
    direct = integrate_nonmarkovian(p, d, init_ab, t_final, dt)
    diff = np.linalg.norm(pm.amps[:, :2] - direct.amps[:, :2], axis=1)
    scale = float(np.max(np.linalg.norm(direct.amps[:, :2], axis=1)))
    worst = float(np.max(diff))
    if scale == 0.0:
        return 0.0 if worst == 0.0 else math.inf
    return worst / scale


def convergence_order(p: SystemParams, d: DriveParams, init, t_final: float, dt: float):
    """Observed integrator order from endpoint self-differences at dt, dt/2, dt/4.

    Returns (order, ratio) with ratio = |y_dt - y_dt/2| / |y_dt/2 - y_dt/4|
    and order = log2(ratio); a clean 4th-order scheme gives ratio near 16.
    """
    ends = [
        integrate_pseudomode(p, d, init, t_final, dt / k).amps[-1] for k in (1, 2, 4)
    ]
    d1 = float(np.linalg.norm(ends[0] - ends[1]))
    d2 = float(np.linalg.norm(ends[1] - ends[2]))
    if d2 == 0.0:
        return math.inf, math.inf
    ratio = d1 / d2
    return math.log2(ratio), ratio


def kernel_fourier_error(p: SystemParams, t: float | None = None,
                         n_points: int = 40001, window: float = 50.0) -> float:
    """Consistency of the smooth memory kernel with the bath spectral function.

    Numerically inverts K_smooth(t) = (1/2pi) int (I(|w|) - gamma) e^{-iwt} dw
    over [-window*Omega_c, window*Omega_c] by the trapezoid rule (the flat
    gamma part is the local delta contribution and is subtracted before
    transforming) and returns the deviation from the closed form relative to
    the kernel amplitude gamma*Omega_c/2.
    """
    if t is None:
        t = 1.0 / p.omega_c
    amp = p.gamma * p.omega_c / 2.0
    if amp == 0.0:
        return 0.0
    omega = np.linspace(-window * p.omega_c, window * p.omega_c, n_points)
    integrand = (spectral_density(p, np.abs(omega)) - p.gamma) * np.exp(-1j * omega * t)
    smooth = complex(np.trapezoid(integrand, omega)) / (2.0 * math.pi)
    return abs(smooth - memory_kernel_smooth(p, t)) / amp
