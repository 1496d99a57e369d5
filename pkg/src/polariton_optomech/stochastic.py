"""Ensemble integration of the linear Langevin equations ``du = A u dt + dW``.

The one-step propagator ``F = exp(A h)`` and the exactly integrated noise
covariance ``Q(h) = int_0^h exp(A s) D exp(A^T s) ds`` are used, so the only
role of ``dt`` is the density of samples entering the time average.

Trajectories are generated on a coarse base grid of step ``H = dt * 2**k``
and refined by repeated conditional-midpoint (bridge) sampling down to
``dt``. Each refinement level of each trajectory draws from its own
seed-derived stream, so a run at ``dt/2`` contains the run at ``dt`` as a
subsequence and ``dt``-refinement studies compare identical paths.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from scipy.linalg import expm

from .gaussian import (
    CovarianceMatrix,
    LinearGaussianModel,
    UnstableModelError,
    log_negativity,
    reduce,
    stability,
)

#: Largest base-grid step, in units of ``1/gamma``.
BASE_STEP = 1.0


@dataclass(frozen=True)
class SimConfig:
    """Integration settings (times in units of ``1/gamma``).

    ``dt * rho(A) < 0.1`` is checked against the model in :func:`simulate`.
    """

    dt: float = 0.02
    burn_in: float = 20.0
    sample_window: float = 200.0
    n_trajectories: int = 400
    seed: int = 0

    def __post_init__(self):
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.burn_in < 0:
            raise ValueError("burn_in must be non-negative")
        if not self.sample_window > 0:
            raise ValueError("sample_window must be positive")
        if int(self.n_trajectories) != self.n_trajectories or self.n_trajectories < 100:
            raise ValueError(f"n_trajectories must be an integer >= 100, got {self.n_trajectories}")
        if int(self.seed) != self.seed or self.seed < 0:
            raise ValueError("seed must be a non-negative integer")

    def check_model(self, model: LinearGaussianModel) -> None:
        rho = float(np.abs(np.linalg.eigvals(model.drift)).max())
        if self.dt * rho >= 0.1:
            raise ValueError(f"dt * rho(A) = {self.dt * rho:.3g} must be < 0.1 (rho = {rho:.4g})")


def exact_step(A: np.ndarray, D: np.ndarray, h: float) -> Tuple[np.ndarray, np.ndarray]:
    """Propagator ``F = exp(A h)`` and noise covariance ``Q(h)`` (Van Loan)."""
    n = A.shape[0]
    M = np.zeros((2 * n, 2 * n))
    M[:n, :n] = -A
    M[:n, n:] = D
    M[n:, n:] = A.T
    E = expm(M * h)
    F = E[n:, n:].T
    Q = F @ E[:n, n:]
    return F, 0.5 * (Q + Q.T)


def _psd_factor(c: np.ndarray) -> np.ndarray:
    # symmetric square root; tolerates the rank deficiency of a pure squeezed bath
    w, u = np.linalg.eigh(0.5 * (c + c.T))
    return u * np.sqrt(np.clip(w, 0.0, None))


def _bridge(F: np.ndarray, Q: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gain matrices for the midpoint of an interval of two steps ``h``.

    ``x_mid = F x0 + K (x1 - F^2 x0) + L z`` with ``z`` standard normal.
    """
    S = F @ Q @ F.T + Q
    K = np.linalg.solve(S, F @ Q).T  # Q F^T S^-1
    C = Q - K @ F @ Q
    return F - K @ F @ F, K, _psd_factor(C)


def _stream(seed: int, trajectory: int, level: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=(trajectory, level))
    return np.random.Generator(np.random.PCG64(ss))


@dataclass(frozen=True)
class SimEstimate:
    """Time- and ensemble-averaged second moments.

    ``samples`` holds one time-averaged ``u u^T`` per trajectory; the
    estimate is their mean and ``stderr`` the standard error across
    trajectories.
    """

    cov: CovarianceMatrix
    stderr: np.ndarray
    samples: np.ndarray
    config: SimConfig

    @property
    def n_trajectories(self) -> int:
        return self.samples.shape[0]

    def z_scores(self, reference: np.ndarray) -> np.ndarray:
        """Entrywise ``(estimate - reference) / stderr``."""
        ref = reference.v if isinstance(reference, CovarianceMatrix) else np.asarray(reference)
        return (self.cov.v - ref) / self.stderr

    def pair_log_negativity(self, a, b, n_groups: int = 20) -> Tuple[float, float]:
        """``E_N`` of the pair ``(a, b)`` and its grouped-jackknife standard error."""
        full = log_negativity(reduce(self.cov, (a, b)))
        groups = np.array_split(np.arange(self.n_trajectories), n_groups)
        total = self.samples.sum(axis=0)
        values = []
        for g in groups:
            v = (total - self.samples[g].sum(axis=0)) / (self.n_trajectories - len(g))
            sub = reduce(CovarianceMatrix(0.5 * (v + v.T), self.cov.mode_labels), (a, b))
            values.append(log_negativity(sub, tol=1e-2))
        values = np.array(values)
        se = math.sqrt((n_groups - 1) / n_groups * np.sum((values - values.mean()) ** 2))
        return full, se

    def to_csv(self, path) -> None:
        """One row per independent entry: ``i, j, labels, estimate, stderr``."""
        labels = [f"{m}_{c}" for m in self.cov.mode_labels for c in ("q", "p")]
        with open(path, "w", newline="") as fh:
            cfg = self.config
            fh.write(
                f"# dt={cfg.dt!r} burn_in={cfg.burn_in!r} sample_window={cfg.sample_window!r} "
                f"n_trajectories={cfg.n_trajectories} seed={cfg.seed}\n"
            )
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["i", "j", "row", "col", "estimate", "stderr"])
            n = self.cov.v.shape[0]
            for i in range(n):
                for j in range(i, n):
                    w.writerow([i, j, labels[i], labels[j], f"{self.cov.v[i, j]:.15e}", f"{self.stderr[i, j]:.15e}"])


def _levels(dt: float) -> int:
    return max(0, int(math.floor(math.log2(BASE_STEP / dt) + 1e-12)))


def simulate(model: LinearGaussianModel, cfg: SimConfig, *, chunk_size: int = 100) -> SimEstimate:
    """Estimate the stationary covariance of ``model`` by direct integration.

    Each trajectory starts at ``u = 0``, is propagated for ``burn_in`` on the
    base grid, then sampled over ``sample_window`` (both rounded up to whole
    base steps) at spacing ``dt``. ``dt`` should be a power-of-two fraction
    of ``BASE_STEP * gamma`` for runs at different ``dt`` to share paths.

    Raises
    ------
    UnstableModelError
        If the drift matrix has no stationary state.
    ValueError
        If ``dt * rho(A) >= 0.1``.
    """
    if not stability(model).stable:
        raise UnstableModelError("stochastic simulation needs a stable drift matrix")
    cfg.check_model(model)
    A, D = model.drift, model.diffusion
    d = A.shape[0]
    k = _levels(cfg.dt * model.gamma)
    H = cfg.dt * 2**k
    n_burn = int(math.ceil(cfg.burn_in / H - 1e-9))
    n_base = max(1, int(math.ceil(cfg.sample_window / H - 1e-9)))

    F_base, Q_base = exact_step(A, D, H)
    L_base = _psd_factor(Q_base)
    bridges = []
    for level in range(1, k + 1):
        F, Q = exact_step(A, D, H / 2**level)
        bridges.append(_bridge(F, Q))

    per_traj = np.empty((cfg.n_trajectories, d, d))
    for start in range(0, cfg.n_trajectories, chunk_size):
        ids = range(start, min(start + chunk_size, cfg.n_trajectories))
        per_traj[start : start + len(ids)] = _run_chunk(
            ids, cfg.seed, n_burn, n_base, F_base, L_base, bridges, d
        )

    mean = per_traj.mean(axis=0)
    mean = 0.5 * (mean + mean.T)
    stderr = per_traj.std(axis=0, ddof=1) / math.sqrt(cfg.n_trajectories)
    return SimEstimate(CovarianceMatrix(mean, model.mode_labels), stderr, per_traj, cfg)


def _run_chunk(
    ids: Sequence[int],
    seed: int,
    n_burn: int,
    n_base: int,
    F: np.ndarray,
    L: np.ndarray,
    bridges: List[Tuple[np.ndarray, np.ndarray, np.ndarray]],
    d: int,
) -> np.ndarray:
    m = len(ids)
    gens = [_stream(seed, i, 0) for i in ids]
    z = np.stack([g.standard_normal((n_burn + n_base, d)) for g in gens])
    noise = z @ L.T
    x = np.zeros((m, d))
    for t in range(n_burn):
        x = x @ F.T + noise[:, t]
    path = np.empty((m, n_base + 1, d))
    path[:, 0] = x
    for t in range(n_base):
        x = x @ F.T + noise[:, n_burn + t]
        path[:, t + 1] = x

    for level, (P, K, C) in enumerate(bridges, start=1):
        left, right = path[:, :-1], path[:, 1:]
        zl = np.stack([_stream(seed, i, level).standard_normal((left.shape[1], d)) for i in ids])
        mid = left @ P.T + right @ K.T + zl @ C.T
        fine = np.empty((m, 2 * left.shape[1] + 1, d))
        fine[:, 0::2] = path
        fine[:, 1::2] = mid
        path = fine

    # time average over the window, excluding the duplicated endpoint
    samples = path[:, :-1]
    return np.einsum("mti,mtj->mij", samples, samples) / samples.shape[1]
