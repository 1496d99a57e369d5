"""Model assembly from flat parameters, single-point reports and grid sweeps."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .coherence import UndefinedDegreeError, degrees
from .gaussian import (
    BathSpec,
    LinearGaussianModel,
    UnstableModelError,
    build_three_mode,
    build_two_colour,
    build_two_mode,
    pair_log_negativity,
    quad_to_complex_moments,
    solve_lyapunov,
    stability,
)

VARIANTS = ("two_mode", "two_colour", "theta_pi", "a1_a2")

#: Pair whose entanglement is reported as the headline ``E_N`` of each variant.
PRIMARY_PAIR = {
    "two_mode": ("psi", "b"),
    "two_colour": ("b", "theta"),
    "theta_pi": ("theta", "pi"),
    "a1_a2": ("A2", "b"),
}

UNSTABLE = "unstable"


@dataclass(frozen=True)
class ModelParams:
    """Couplings and bath of one linearized model, in units of ``gamma``."""

    variant: str
    G: float
    U: float = 0.0
    n_bar: float = 0.0
    m_sq: complex = 0.0
    gamma: float = 1.0
    gamma_m: Optional[float] = None
    G_pi: Optional[float] = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}; expected one of {', '.join(VARIANTS)}")

    def bath(self) -> BathSpec:
        return BathSpec(self.n_bar, self.m_sq)

    def build(self) -> LinearGaussianModel:
        kw = dict(gamma=self.gamma, bath=self.bath(), gamma_m=self.gamma_m)
        if self.variant == "two_mode":
            return build_two_mode(self.G, **kw)
        if self.variant == "two_colour":
            return build_two_colour(self.G, self.U, **kw)
        return build_three_mode(self.G, self.U, variant=self.variant, G_pi=self.G_pi, **kw)


@dataclass
class PairReport:
    pair: Tuple[str, str]
    E_N: float
    moments: Dict[str, complex]
    degrees: Dict[str, float] = field(default_factory=dict)


@dataclass
class PointReport:
    params: ModelParams
    stable: bool
    max_real_eig: float
    pairs: List[PairReport] = field(default_factory=list)

    @property
    def primary(self) -> Optional[PairReport]:
        want = PRIMARY_PAIR[self.params.variant]
        for p in self.pairs:
            if set(p.pair) == set(want):
                return p
        return None

    def rows(self) -> List[Tuple[str, str]]:
        """Flat ``(quantity, value)`` rows for CSV output."""
        out = [("variant", self.params.variant), ("stable", str(self.stable).lower()),
               ("max_re_eig", _fmt(self.max_real_eig))]
        for p in self.pairs:
            tag = f"{p.pair[0]}|{p.pair[1]}"
            out.append((f"E_N[{tag}]", _fmt(p.E_N)))
            for name, value in p.degrees.items():
                out.append((f"{name}[{tag}]", _fmt(value)))
            for name, value in p.moments.items():
                out.append((f"re_{name}[{tag}]", _fmt(value.real)))
                out.append((f"im_{name}[{tag}]", _fmt(value.imag)))
        return out


def _fmt(x: float) -> str:
    return f"{x:.15e}"


def evaluate_point(params: ModelParams) -> PointReport:
    """Stability, then E_N, moments, degrees and chi for every mode pair."""
    model = params.build()
    rep = stability(model)
    report = PointReport(params, rep.stable, rep.max_real)
    if not rep.stable:
        return report
    cov = solve_lyapunov(model)
    primary = PRIMARY_PAIR[params.variant]
    labels = model.mode_labels
    pairs = [primary] + [p for p in itertools.combinations(labels, 2) if set(p) != set(primary)]
    for a, b in pairs:
        ms = quad_to_complex_moments(cov, (a, b))
        moments = {"n_a": complex(ms.n_a), "n_b": complex(ms.n_b), "aa": ms.aa, "bb": ms.bb,
                   "adag_b": ms.adag_b, "ab": ms.ab}
        try:
            d = degrees(ms)
            degs = {"gamma1": d.gamma1, "eta_aa": d.eta_aa, "eta_bb": d.eta_bb, "eta_ab": d.eta_ab,
                    "g2_a": d.g2_a, "g2_b": d.g2_b, "g2_ab": d.g2_ab, "chi": d.chi}
        except UndefinedDegreeError:
            degs = {}
        report.pairs.append(PairReport((a, b), pair_log_negativity(cov, a, b), moments, degs))
    return report


# ---------------------------------------------------------------------------
# grids
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Axis:
    name: str
    values: np.ndarray


def closed_axis(name: str, lo: float, hi: float, n: int) -> Axis:
    return Axis(name, np.linspace(lo, hi, n))


def open_axis(name: str, lo: float, hi: float, n: int) -> Axis:
    """``n`` points strictly inside ``(lo, hi)``."""
    return Axis(name, np.linspace(lo, hi, n + 2)[1:-1])


def left_open_axis(name: str, lo: float, hi: float, n: int) -> Axis:
    """``n`` points in ``(lo, hi]``."""
    return Axis(name, np.linspace(lo, hi, n + 1)[1:])


@dataclass(frozen=True)
class Sweep:
    """A two-axis grid and how to evaluate one point of it."""

    x: Axis
    y: Axis
    quantity: str
    base: Mapping[str, object]

    def params_at(self, xv: float, yv: float) -> ModelParams:
        kw = dict(self.base)
        kw[PARAM_FIELD[self.x.name]] = xv
        kw[PARAM_FIELD[self.y.name]] = yv
        if kw.pop("max_squeezing", False):
            n = kw.get("n_bar", 0.0)
            kw["m_sq"] = math.sqrt(n * (n + 1))
        return ModelParams(**kw)

    def evaluate(self, xv: float, yv: float):
        """Value of ``quantity`` at one grid point, or ``UNSTABLE``."""
        params = self.params_at(xv, yv)
        model = params.build()
        if not stability(model).stable:
            return UNSTABLE
        try:
            cov = solve_lyapunov(model)
        except UnstableModelError:
            return UNSTABLE
        a, b = PRIMARY_PAIR[params.variant]
        if self.quantity == "E_N":
            return pair_log_negativity(cov, a, b)
        if self.quantity == "chi":
            try:
                return degrees(quad_to_complex_moments(cov, (a, b))).chi
            except UndefinedDegreeError:
                return float("nan")
        raise ValueError(f"unknown quantity {self.quantity!r}")

    def run(self) -> List[Tuple[float, float, object]]:
        """Row-major over ``(x, y)``."""
        return [(xv, yv, self.evaluate(xv, yv)) for xv in self.x.values for yv in self.y.values]

    def header(self) -> List[str]:
        return [self.x.name, self.y.name, self.quantity]


PARAM_FIELD = {"nbar": "n_bar", "G": "G", "Gpsi": "G", "Gtheta": "G", "Gt": "G", "U": "U", "msq": "m_sq",
                "gamma_m": "gamma_m"}

SWEEPABLE = tuple(PARAM_FIELD)


def figure_sweep(figure: str, grid: int = 50, *, G_fixed: float = 1.0) -> Sweep:
    """Default sweeps for the four reference surfaces (``gamma = 1``)."""
    nbar = closed_axis("nbar", 0.0, 1.5, grid)
    if figure == "fig2":
        return Sweep(nbar, open_axis("Gpsi", 0.0, 2.0, grid), "E_N", {"variant": "two_mode"})
    if figure == "fig3":
        return Sweep(nbar, open_axis("Gpsi", 0.0, 2.0, grid), "chi",
                     {"variant": "two_mode", "max_squeezing": True})
    if figure == "fig4":
        return Sweep(nbar, left_open_axis("U", G_fixed / math.sqrt(2), 10.0, grid), "E_N",
                     {"variant": "two_colour", "G": G_fixed})
    if figure == "fig5":
        return Sweep(nbar, left_open_axis("U", G_fixed / math.sqrt(2), 10.0, grid), "E_N",
                     {"variant": "a1_a2", "G": G_fixed})
    raise ValueError(f"unknown figure {figure!r}; expected fig2, fig3, fig4 or fig5")


def grid_values(results: Sequence[Tuple[float, float, object]], nx: int, ny: int) -> np.ndarray:
    """Reshape sweep output into an ``(nx, ny)`` float array, NaN where unstable."""
    vals = [np.nan if v == UNSTABLE else float(v) for _, _, v in results]
    return np.array(vals).reshape(nx, ny)
