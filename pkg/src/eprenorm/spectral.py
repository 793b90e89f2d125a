"""Eigendecomposition of the drift matrices with paired left/right
eigenvectors, Petermann factors, and coupling/detuning sweeps.

Right eigenvectors come from explicit null-space construction (row cross
products for 3x3, the adjugate-row formula for 2x2) with an
inverse-iteration fallback near rank deficiency.  Left eigenvectors are
right eigenvectors of the adjoint matrix, paired greedily by conjugated
eigenvalue.  The Petermann factor of a paired mode is

    K = (<L|L> <R|R>) / |<L|R>|^2

which is unity for a normal mode and diverges at an exceptional point.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .charpoly import CubicPoly, cubic_roots
from .model import DriftMatrix, DriveParams, SystemParams, drift_markovian, drift_nonmarkovian, rad_to_hz

# |<L|R>|^2 below this fraction of <L|L><R|R> counts as numerically divergent.
DIVERGENT_OVERLAP_RTOL = 1e-30
# Pairing / degeneracy thresholds for the defective flag.
PAIRING_RTOL = 1e-3
DEGENERACY_RTOL = 1e-3
# Cross-product candidates below this fraction of |M|_F^2 trigger inverse iteration.
CROSS_NORM_RTOL = 1e-12


@dataclass(frozen=True)
class EigenMode:
    """One eigenvalue with paired right/left eigenvectors and Petermann factor.

    divergent marks a Petermann factor at or beyond double-precision reach
    (overlap underflow or a defective pair); the finite computed value is
    still reported so log-scale consumers have a number to plot.
    """

    lam: complex
    right: tuple
    left: tuple
    petermann: float
    divergent: bool
    defective: bool


@dataclass(frozen=True)
class SweepRow:
    """One sweep grid point: coordinate, continuity-ordered branches, factors.

    All frequencies are reported in Hz (cycles), converted exactly once from
    the internal rad/s representation when the row is assembled.
    """

    coord_hz: float
    lambdas_hz: tuple
    petermann: tuple
    divergent: tuple
    markovian_hz: tuple | None = None


def _eigenvalues(arr: np.ndarray):
    """Eigenvalues sorted by (Im, Re): quadratic formula or companion cubic."""
    n = arr.shape[0]
    if n == 2:
        tr = arr[0, 0] + arr[1, 1]
        det = arr[0, 0] * arr[1, 1] - arr[0, 1] * arr[1, 0]
        disc = np.sqrt(complex(tr * tr - 4.0 * det))
        lams = [complex((tr - disc) / 2.0), complex((tr + disc) / 2.0)]
        lams.sort(key=lambda z: (z.imag, z.real))
        return tuple(lams)
    tr = complex(np.trace(arr))
    tr2 = complex(np.trace(arr @ arr))
    det = complex(np.linalg.det(arr))
    q = CubicPoly(c2=-tr, c1=(tr * tr - tr2) / 2.0, c0=-det)
    return cubic_roots(q)


def _fix_phase(v: np.ndarray) -> np.ndarray:
    """Unit norm with the largest entry rotated to the positive real axis."""
    idx = int(np.argmax(np.abs(v)))
    pivot = v[idx]
    if pivot != 0:
        v = v * (pivot.conjugate() / abs(pivot))
    nrm = np.linalg.norm(v)
    return v / nrm if nrm > 0 else v


def _inverse_iteration(b: np.ndarray, scale: float) -> np.ndarray:
    """Few rounds of regularized inverse iteration for a near-null vector."""
    n = b.shape[0]
    eps = 1e-12 * max(scale, 1.0)
    v = np.ones(n, dtype=complex) / math.sqrt(n)
    for _ in range(3):
        try:
            w = np.linalg.solve(b + eps * np.eye(n), v)
        except np.linalg.LinAlgError:
            eps *= 1e3
            continue
        nrm = np.linalg.norm(w)
        if nrm == 0:
            break
        v = w / nrm
    return v


def _null_vector(arr: np.ndarray, lam: complex) -> np.ndarray:
    """Right eigenvector of arr at lam via explicit null-space formulas."""
    n = arr.shape[0]
    b = arr - lam * np.eye(n)
    fro = float(np.linalg.norm(arr))
    if n == 2:
        cands = [
            np.array([b[0, 1], -b[0, 0]], dtype=complex),
            np.array([b[1, 1], -b[1, 0]], dtype=complex),
        ]
    else:
        cands = [
            np.cross(b[i], b[j])
            for i, j in ((0, 1), (0, 2), (1, 2))
        ]
    norms = [float(np.linalg.norm(c)) for c in cands]
    best = int(np.argmax(norms))
    if norms[best] < CROSS_NORM_RTOL * fro**2:
        return _fix_phase(_inverse_iteration(b, fro))
    return _fix_phase(cands[best])


def _petermann_value(right, left):
    """Petermann factor and underflow flag from one left/right pair."""
    rvec = np.asarray(right, dtype=complex)
    lvec = np.asarray(left, dtype=complex)
    rr = float(np.vdot(rvec, rvec).real)
    ll = float(np.vdot(lvec, lvec).real)
    lr_sq = abs(np.vdot(lvec, rvec)) ** 2
    if lr_sq < DIVERGENT_OVERLAP_RTOL * ll * rr:
        if lr_sq == 0.0:
            return math.inf, True
        return float(ll * rr / lr_sq), True
    return float(ll * rr / lr_sq), False


def petermann(mode: EigenMode) -> float:
    """Recompute the Petermann factor of a paired mode from its vectors."""
    return _petermann_value(mode.right, mode.left)[0]


def eigensystem(m: DriftMatrix):
    """Full eigendecomposition with paired left/right vectors.

    Modes come back ordered by eigenvalue (imaginary part, then real part).
    A mode is flagged defective when its left/right pairing distance is
    anomalous or when another eigenvalue sits within a relative gap of
    1e-3, both signatures of a nearby coalescence.
    """
    arr = m.as_array()
    adj = arr.conj().T
    lams = _eigenvalues(arr)
    mus = _eigenvalues(adj)

    rights = [_null_vector(arr, lam) for lam in lams]

    # Pair each eigenvalue with the nearest conjugated adjoint eigenvalue.
    pool = list(range(len(mus)))
    match_dist = []
    lefts = []
    for lam in lams:
        j = min(pool, key=lambda k: abs(mus[k].conjugate() - lam))
        pool.remove(j)
        match_dist.append(abs(mus[j].conjugate() - lam))
        lefts.append(_null_vector(adj, mus[j]))

    spread = max(
        (abs(a - b) for a in lams for b in lams), default=0.0
    ) or float(np.linalg.norm(arr))
    defective = [d > PAIRING_RTOL * spread for d in match_dist]

    # Near-degenerate pairs are defective even when the pairing is clean.
    scale = max(abs(lam) for lam in lams)
    if scale > 0 and len(lams) > 1:
        pairs = [(i, j) for i in range(len(lams)) for j in range(i + 1, len(lams))]
        i, j = min(pairs, key=lambda ij: abs(lams[ij[0]] - lams[ij[1]]))
        if abs(lams[i] - lams[j]) < DEGENERACY_RTOL * scale:
            defective[i] = True
            defective[j] = True

    modes = []
    for lam, rvec, lvec, dflag in zip(lams, rights, lefts, defective):
        k, underflow = _petermann_value(rvec, lvec)
        modes.append(
            EigenMode(
                lam=lam,
                right=tuple(rvec),
                left=tuple(lvec),
                petermann=k,
                divergent=underflow or dflag,
                defective=dflag,
            )
        )
    return modes


def petermann_at(p: SystemParams, d: DriveParams):
    """Petermann factors of the three-mode drift at one drive point."""
    return tuple(mode.petermann for mode in eigensystem(drift_nonmarkovian(p, d)))


def _match_order(prev, new):
    """Permutation of new minimizing total distance to prev (branch tracking)."""
    best = min(
        permutations(range(len(new))),
        key=lambda perm: sum(abs(new[perm[i]] - prev[i]) for i in range(len(prev))),
    )
    return best


def _modes_at(p: SystemParams, delta: float, g: float):
    return eigensystem(drift_nonmarkovian(p, DriveParams(delta=delta, g=g)))


def _sweep(p: SystemParams, delta: float, g_grid, markovian_ref: bool, threads: int):
    gs = [float(g) for g in g_grid]
    if len(gs) < 2:
        raise ValueError("sweep grid needs at least 2 points")
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            mode_lists = list(pool.map(lambda g: _modes_at(p, delta, g), gs))
    else:
        mode_lists = [_modes_at(p, delta, g) for g in gs]

    rows = []
    prev = None
    prev_mk = None
    for g, modes in zip(gs, mode_lists):
        lams = [mode.lam for mode in modes]
        if prev is not None:
            order = _match_order(prev, lams)
            modes = [modes[k] for k in order]
            lams = [mode.lam for mode in modes]
        prev = lams

        mk_hz = None
        if markovian_ref:
            mk = list(_eigenvalues(drift_markovian(p, DriveParams(delta=delta, g=g)).as_array()))
            if prev_mk is not None:
                order = _match_order(prev_mk, mk)
                mk = [mk[k] for k in order]
            prev_mk = mk
            mk_hz = tuple(rad_to_hz(lam) for lam in mk)

        rows.append(
            SweepRow(
                coord_hz=rad_to_hz(g),
                lambdas_hz=tuple(rad_to_hz(lam) for lam in lams),
                petermann=tuple(mode.petermann for mode in modes),
                divergent=tuple(mode.divergent for mode in modes),
                markovian_hz=mk_hz,
            )
        )
    return rows


def sweep_eigs(p: SystemParams, delta: float, g_grid, markovian_ref: bool = False, threads: int = 1):
    """Eigenvalue branches vs coupling at fixed detuning, continuity-matched.

    With markovian_ref, each row also carries the two eigenvalues of the
    memoryless two-mode block for side-by-side comparison.
    """
    return _sweep(p, delta, g_grid, markovian_ref=markovian_ref, threads=threads)


def sweep_petermann(p: SystemParams, delta: float, g_grid, threads: int = 1):
    """Petermann factors vs coupling at fixed detuning (same row layout)."""
    return _sweep(p, delta, g_grid, markovian_ref=False, threads=threads)
