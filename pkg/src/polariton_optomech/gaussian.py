"""Linear Gaussian models: drift/diffusion builders, steady-state covariance, entanglement.

Conventions
-----------
Quadratures are ordered ``(q1, p1, q2, p2, ...)`` with ``q = (b + b^dag)/sqrt(2)``
and ``p = (b - b^dag)/(i sqrt(2))``, so the vacuum covariance is ``I/2``.
Fluctuations obey ``du/dt = A u + noise`` with ``<noise(t) noise(t')^T>_sym =
D delta(t - t')``; the stationary covariance solves ``A V + V A^T = -D``.

Mode 0 is always the mechanical mode ``b`` (in the frame rotating at the
mechanical frequency). Its bath has thermal occupation ``n_bar`` and
two-photon correlation ``m_sq = <xi xi>`` for the noise entering ``db/dt``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

#: Stability margin, in units of the model's ``gamma``.
STABILITY_MARGIN = 1e-9
#: Floor for eigenvalues of ``V + i Omega/2`` and for ``nu - 1/2``.
PHYSICALITY_TOL = 1e-10
#: ``2 nu_min`` within this distance of 1 counts as separable.
ENTANGLEMENT_FLOOR = 1e-12


class UnstableModelError(ValueError):
    """The drift matrix has no stable stationary state."""


class LyapunovSolveError(RuntimeError):
    """The Lyapunov system is singular or the solution is inaccurate."""


class NonPhysicalCovarianceError(ValueError):
    """A covariance matrix violates the uncertainty principle."""


@dataclass(frozen=True)
class BathSpec:
    n_bar: float = 0.0
    m_sq: complex = 0.0

    def __post_init__(self):
        if not self.n_bar >= 0:
            raise ValueError(f"n_bar must be non-negative, got {self.n_bar}")
        object.__setattr__(self, "m_sq", complex(self.m_sq))
        bound = math.sqrt(self.n_bar * (self.n_bar + 1))
        if abs(self.m_sq) > bound * (1 + 1e-12) + 1e-15:
            raise ValueError(f"|m_sq| = {abs(self.m_sq):.6g} exceeds sqrt(n(n+1)) = {bound:.6g}")

    @classmethod
    def maximally_squeezed(cls, n_bar: float) -> "BathSpec":
        return cls(n_bar, math.sqrt(n_bar * (n_bar + 1)))


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class LinearGaussianModel:
    drift: np.ndarray
    diffusion: np.ndarray
    mode_labels: Tuple[str, ...]
    gamma: float = 1.0
    bath: BathSpec = field(default_factory=BathSpec)

    def __post_init__(self):
        A, D = _frozen(self.drift), _frozen(self.diffusion)
        n = 2 * len(self.mode_labels)
        if A.shape != (n, n) or D.shape != (n, n):
            raise ValueError(f"expected {n}x{n} drift and diffusion for modes {self.mode_labels}")
        if not np.allclose(D, D.T, rtol=0, atol=1e-14 * max(1.0, np.abs(D).max())):
            raise ValueError("diffusion matrix must be symmetric")
        if np.linalg.eigvalsh(D).min() < -1e-12 * max(1.0, np.abs(D).max()):
            raise ValueError("diffusion matrix must be positive semidefinite")
        object.__setattr__(self, "drift", A)
        object.__setattr__(self, "diffusion", D)
        object.__setattr__(self, "mode_labels", tuple(self.mode_labels))

    @property
    def n_modes(self) -> int:
        return len(self.mode_labels)

    def mode_index(self, label) -> int:
        if isinstance(label, (int, np.integer)):
            if not 0 <= label < self.n_modes:
                raise IndexError(f"mode index {label} out of range for {self.n_modes} modes")
            return int(label)
        try:
            return self.mode_labels.index(label)
        except ValueError:
            raise KeyError(f"unknown mode {label!r}; modes are {self.mode_labels}") from None


@dataclass(frozen=True)
class CovarianceMatrix:
    """Symmetrized quadrature covariance ``V_ij = <u_i u_j + u_j u_i>/2``."""

    v: np.ndarray
    mode_labels: Tuple[str, ...] = ()

    def __post_init__(self):
        v = np.array(self.v, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1] or v.shape[0] % 2:
            raise ValueError(f"covariance must be square with even dimension, got {v.shape}")
        if not np.allclose(v, v.T, rtol=0, atol=1e-12 * max(1.0, np.abs(v).max())):
            raise ValueError("covariance must be symmetric")
        v = 0.5 * (v + v.T)
        v.setflags(write=False)
        labels = tuple(self.mode_labels) or tuple(f"mode{i}" for i in range(v.shape[0] // 2))
        if len(labels) != v.shape[0] // 2:
            raise ValueError("one label per mode expected")
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "mode_labels", labels)

    @property
    def n_modes(self) -> int:
        return self.v.shape[0] // 2

    def symplectic_eigenvalues(self) -> np.ndarray:
        return symplectic_eigenvalues(self.v)

    def uncertainty_floor(self) -> float:
        """Smallest eigenvalue of ``V + (i/2) Omega``."""
        return float(np.linalg.eigvalsh(self.v + 0.5j * symplectic_form(self.n_modes)).min())

    def is_physical(self, tol: float = PHYSICALITY_TOL) -> bool:
        return self.uncertainty_floor() >= -tol and self.symplectic_eigenvalues().min() >= 0.5 - tol


def symplectic_form(n_modes: int) -> np.ndarray:
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def symplectic_eigenvalues(v: np.ndarray) -> np.ndarray:
    """Symplectic spectrum of ``v``, ascending, one value per mode.

    The eigenvalues of ``i Omega v`` come in pairs ``+-nu``.
    """
    v = np.asarray(v, dtype=float)
    n = v.shape[0] // 2
    ev = np.sort(np.abs(np.linalg.eigvals(1j * symplectic_form(n) @ v)))
    return ev[::2]


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------


def _mechanical_diffusion(gamma_m: float, bath: BathSpec) -> np.ndarray:
    # symmetrized noise of sqrt(gamma_m) (xi, xi^dag) projected on (q, p)
    n, m = bath.n_bar, bath.m_sq
    rate = 0.5 * gamma_m
    return rate * np.array(
        [[2 * n + 1 + 2 * m.real, 2 * m.imag], [2 * m.imag, 2 * n + 1 - 2 * m.real]]
    )


def _parametric_star(
    couplings: Sequence[float],
    frequencies: Sequence[float],
    gamma: float,
    bath: BathSpec,
    gamma_m: Optional[float],
    labels: Sequence[str],
) -> LinearGaussianModel:
    """Mechanical mode coupled parametrically to each optical mode.

    ``da_j/dt = -(gamma + i w_j) a_j - (i/2) G_j b^dag`` and
    ``db/dt = -(gamma_m/2) b - (i/2) sum_j G_j a_j^dag``, plus noise.
    """
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    gamma_m = 2.0 * gamma if gamma_m is None else gamma_m
    if not gamma_m > 0:
        raise ValueError("gamma_m must be positive")
    n = 1 + len(couplings)
    A = -gamma * np.eye(2 * n)
    A[0, 0] = A[1, 1] = -0.5 * gamma_m
    for j, (G, w) in enumerate(zip(couplings, frequencies), start=1):
        x, y = 2 * j, 2 * j + 1
        A[0, y] -= 0.5 * G
        A[1, x] -= 0.5 * G
        A[x, 1] -= 0.5 * G
        A[y, 0] -= 0.5 * G
        A[x, y] += w
        A[y, x] -= w
    D = gamma * np.eye(2 * n)
    D[:2, :2] = _mechanical_diffusion(gamma_m, bath)
    return LinearGaussianModel(A, D, tuple(labels), gamma, bath)


def build_two_mode(G_psi: float, gamma: float = 1.0, bath: BathSpec = BathSpec(), *, gamma_m=None) -> LinearGaussianModel:
    """Mirror ``b`` and polariton ``psi`` at the parametric resonance (4x4)."""
    return _parametric_star([G_psi], [0.0], gamma, bath, gamma_m, ("b", "psi"))


def build_two_colour(
    G_theta: float, U: float, gamma: float = 1.0, bath: BathSpec = BathSpec(), *, gamma_m=None
) -> LinearGaussianModel:
    """Mirror ``b`` and the Theta polariton detuned by ``U`` (4x4)."""
    return _parametric_star([G_theta], [U], gamma, bath, gamma_m, ("b", "theta"))


def build_three_mode(
    G_t: float,
    U: float,
    gamma: float = 1.0,
    bath: BathSpec = BathSpec(),
    variant: str = "theta_pi",
    *,
    G_pi: Optional[float] = None,
    gamma_m=None,
) -> LinearGaussianModel:
    """Mirror plus both transformed polaritons (6x6).

    ``variant="theta_pi"``: modes ``(b, theta, pi)`` at frequencies ``+U`` and
    ``-U`` with couplings ``(G_t, G_pi)``, ``G_pi = -G_t`` by default.

    ``variant="a1_a2"``: modes ``(b, A1, A2)`` with ``A1 = (Theta - Pi)/sqrt(2)``
    and ``A2 = (Theta + Pi)/sqrt(2)``. ``b`` couples to ``A1`` parametrically
    with strength ``G_t/sqrt(2)``; ``A1`` and ``A2`` are linearly mixed by ``U``.
    """
    if variant == "theta_pi":
        G_pi = -G_t if G_pi is None else G_pi
        return _parametric_star([G_t, G_pi], [U, -U], gamma, bath, gamma_m, ("b", "theta", "pi"))
    if variant != "a1_a2":
        raise ValueError(f"unknown variant {variant!r}; expected 'theta_pi' or 'a1_a2'")
    if G_pi is not None and G_pi != -G_t:
        raise ValueError("the A1/A2 basis requires G_pi = -G_t")
    # star convention has G/2 entries; the b-A1 entries are G_t/sqrt(2)
    model = _parametric_star([math.sqrt(2) * G_t, 0.0], [0.0, 0.0], gamma, bath, gamma_m, ("b", "A1", "A2"))
    A = np.array(model.drift)
    # A1 <-> A2 linear mixing: dA1/dt = -i U A2, dA2/dt = -i U A1
    A[2, 5] += U
    A[3, 4] -= U
    A[4, 3] += U
    A[5, 2] -= U
    return LinearGaussianModel(A, model.diffusion, model.mode_labels, gamma, bath)


def theta_pi_to_a1_a2() -> np.ndarray:
    """Orthogonal map from ``(b, theta, pi)`` quadratures to ``(b, A1, A2)``."""
    r = 1 / math.sqrt(2)
    S = np.zeros((6, 6))
    S[0, 0] = S[1, 1] = 1.0
    for k in (0, 1):
        S[2 + k, 2 + k], S[2 + k, 4 + k] = r, -r
        S[4 + k, 2 + k], S[4 + k, 4 + k] = r, r
    return S


# ---------------------------------------------------------------------------
# stationary state
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StabilityReport:
    stable: bool
    eigenvalues: np.ndarray
    max_real: float
    marginal: bool


def stability(model: LinearGaussianModel) -> StabilityReport:
    """Stable iff every drift eigenvalue has real part below ``-1e-9 gamma``.

    ``marginal`` flags eigenvalues within the margin of the imaginary axis.
    """
    ev = np.linalg.eigvals(model.drift)
    max_real = float(ev.real.max())
    margin = STABILITY_MARGIN * model.gamma
    return StabilityReport(max_real < -margin, ev, max_real, abs(max_real) <= margin)


def solve_lyapunov(model: LinearGaussianModel, *, check_stability: bool = True) -> CovarianceMatrix:
    """Solve ``A V + V A^T = -D`` by a direct Kronecker-product linear solve.

    Systems here are at most 36x36, so the vectorized form is solved
    exactly with LU; the result is symmetrized and the residual checked.
    """
    if check_stability:
        report = stability(model)
        if not report.stable:
            raise UnstableModelError(
                f"drift matrix not stable: max Re(eig) = {report.max_real:.3e} (margin {STABILITY_MARGIN}*gamma)"
            )
    A, D = model.drift, model.diffusion
    n = A.shape[0]
    eye = np.eye(n)
    # row-major vec: vec(A V) = (A kron I) vec V, vec(V A^T) = (I kron A) vec V
    L = np.kron(A, eye) + np.kron(eye, A)
    try:
        v = np.linalg.solve(L, -D.reshape(-1)).reshape(n, n)
    except np.linalg.LinAlgError as exc:
        raise LyapunovSolveError(f"singular Lyapunov operator (cond = {np.linalg.cond(L):.3e})") from exc
    v = 0.5 * (v + v.T)
    scale = max(np.abs(D).max(), np.finfo(float).tiny)
    residual = np.abs(A @ v + v @ A.T + D).max()
    if residual > 1e-12 * scale:
        raise LyapunovSolveError(
            f"Lyapunov residual {residual:.3e} exceeds 1e-12*|D| (cond = {np.linalg.cond(L):.3e})"
        )
    return CovarianceMatrix(v, model.mode_labels)


def steady_state(model: LinearGaussianModel) -> CovarianceMatrix:
    return solve_lyapunov(model)


# ---------------------------------------------------------------------------
# bipartite quantities
# ---------------------------------------------------------------------------


def _quadrature_indices(modes: Sequence[int]) -> list:
    return [k for m in modes for k in (2 * m, 2 * m + 1)]


def reduce(cov: CovarianceMatrix, modes: Sequence) -> CovarianceMatrix:
    """Principal submatrix over the quadratures of ``modes`` (indices or labels)."""
    idx = []
    for m in modes:
        if isinstance(m, str):
            try:
                m = cov.mode_labels.index(m)
            except ValueError:
                raise KeyError(f"unknown mode {m!r}; modes are {cov.mode_labels}") from None
        if not 0 <= m < cov.n_modes:
            raise IndexError(f"mode index {m} out of range for {cov.n_modes} modes")
        idx.append(int(m))
    if len(set(idx)) != len(idx):
        raise ValueError("modes must be distinct")
    q = _quadrature_indices(idx)
    return CovarianceMatrix(cov.v[np.ix_(q, q)], tuple(cov.mode_labels[i] for i in idx))


def partial_transpose(v: np.ndarray) -> np.ndarray:
    """Flip the sign of the last mode's momentum (time reversal on that mode)."""
    flip = np.ones(v.shape[0])
    flip[-1] = -1.0
    return v * np.outer(flip, flip)


def log_negativity(cov: CovarianceMatrix, *, tol: float = PHYSICALITY_TOL) -> float:
    """``E_N = max(0, -log2(2 nu_min))`` of the partially transposed two-mode state."""
    if cov.n_modes != 2:
        raise ValueError(f"log_negativity needs a two-mode covariance, got {cov.n_modes} modes")
    if not cov.is_physical(tol):
        raise NonPhysicalCovarianceError(
            f"covariance violates the uncertainty relation (floor {cov.uncertainty_floor():.3e})"
        )
    nu = symplectic_eigenvalues(partial_transpose(cov.v)).min()
    # a separable boundary state (2 nu = 1) must not report rounding noise as entanglement
    if 2.0 * nu >= 1.0 - ENTANGLEMENT_FLOOR:
        return 0.0
    return -math.log2(2.0 * nu)


def pair_log_negativity(cov: CovarianceMatrix, a, b) -> float:
    return log_negativity(reduce(cov, (a, b)))


# ---------------------------------------------------------------------------
# complex-mode moments
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MomentSet:
    """Equal-time second moments of a mode pair ``(A, B)``.

    ``aa = <A^2>``, ``bb = <B^2>``, ``adag_b = <A^dag B>``, ``ab = <A B>``.
    """

    n_a: float
    n_b: float
    aa: complex = 0j
    bb: complex = 0j
    adag_b: complex = 0j
    ab: complex = 0j


def quad_to_complex_moments(cov: CovarianceMatrix, pair: Tuple) -> MomentSet:
    """Normally ordered moments of modes ``pair = (A, B)`` from the covariance."""
    sub = reduce(cov, pair).v
    qa, pa, qb, pb = sub[0, 0], sub[1, 1], sub[2, 2], sub[3, 3]
    return MomentSet(
        n_a=0.5 * (qa + pa - 1.0),
        n_b=0.5 * (qb + pb - 1.0),
        aa=complex(0.5 * (qa - pa), sub[0, 1]),
        bb=complex(0.5 * (qb - pb), sub[2, 3]),
        adag_b=0.5 * complex(sub[0, 2] + sub[1, 3], sub[0, 3] - sub[1, 2]),
        ab=0.5 * complex(sub[0, 2] - sub[1, 3], sub[0, 3] + sub[1, 2]),
    )


def complex_moments_to_quad(ms: MomentSet) -> np.ndarray:
    """Inverse of :func:`quad_to_complex_moments` (4x4 covariance)."""
    v = np.empty((4, 4))
    for i, n, s in ((0, ms.n_a, ms.aa), (2, ms.n_b, ms.bb)):
        v[i, i] = n + 0.5 + s.real
        v[i + 1, i + 1] = n + 0.5 - s.real
        v[i, i + 1] = v[i + 1, i] = s.imag
    c, x = complex(ms.adag_b), complex(ms.ab)
    v[0, 2] = c.real + x.real  # <qa qb>
    v[1, 3] = c.real - x.real  # <pa pb>
    v[0, 3] = c.imag + x.imag  # <qa pb>
    v[1, 2] = x.imag - c.imag  # <pa qb>
    v[2, 0], v[3, 1], v[3, 0], v[2, 1] = v[0, 2], v[1, 3], v[0, 3], v[1, 2]
    return v
