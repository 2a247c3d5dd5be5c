"""Scenario descriptions, parameter sweeps and CSV emission.

A :class:`ScenarioParams` is the dB-domain description of one system (link
shadowing parameters, noise statistics, destination count, pinhole flag);
:class:`SweepSpec` runs one metric over one axis (transmit power in dB or
the number of destinations) with a set of evaluation methods.  Sweeps are
deterministic given the spec: Monte Carlo points derive their substreams
from the master seed and the point index, rows are emitted in axis order
regardless of completion order, and CSV output is byte-stable so it can be
used in golden-file regressions.

Transmit power is quoted in dB relative to a unit background noise variance;
the default scenario normalizes both background variances to 1 so the power
axis reads as per-link SNR.  Re-base by scaling ``bg_var_*`` if an absolute
noise floor is known.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .channel import PinholeTopology, link_params_from_db
from .errors import ConfigError, PlcsecError
from .metrics import (
    SecrecyResult,
    SystemConfig,
    asc_asymptotic,
    asc_asymptotic_large_n,
    asc_quadrature,
    poi_closed_form,
    poi_quadrature,
)
from .montecarlo import McConfig, mc_asc, mc_poi
from .noise import NoiseParams
from .special_math import DEFAULT_QUAD_ORDER, gauss_hermite_rule

__all__ = [
    "ASC_METHODS",
    "CSV_HEADER",
    "POI_METHODS",
    "ScenarioParams",
    "SweepError",
    "SweepRow",
    "SweepSpec",
    "rows_to_csv",
    "run_sweep",
]

ASC_METHODS = ("quadrature", "asymptotic", "asymptotic-large-n", "monte-carlo")
POI_METHODS = ("quadrature", "closed-form-poi", "monte-carlo")
AXES = ("transmit_power_db", "n_destinations")

DEFAULT_MC = McConfig(samples=1_000_000, seed=20230117, workers=1)


@dataclass(frozen=True)
class ScenarioParams:
    """dB-domain description of one pinhole scenario."""

    m_a_db: float = -20.0
    s_a_db: float = 6.0
    m_b_db: float = -20.0
    s_b_db: float = 6.0
    m_e_db: float = -40.0
    s_e_db: float = 6.0
    n_destinations: int = 10
    pinhole: bool = True
    transmit_power_db: float = 20.0
    p_b: float = 0.1
    p_e: float = 0.1
    eta_b: float = 10.0
    eta_e: float = 10.0
    bg_var_b: float = 1.0
    bg_var_e: float = 1.0

    def __post_init__(self) -> None:
        # Fail at construction, not at first use: config loading relies on it.
        for name in ("s_a_db", "s_b_db", "s_e_db"):
            if getattr(self, name) <= 0.0:
                raise ConfigError(f"{name} must be > 0")
        for name in (
            "m_a_db", "m_b_db", "m_e_db", "transmit_power_db",
            "p_b", "p_e", "eta_b", "eta_e", "bg_var_b", "bg_var_e",
        ):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(f"{name} must be finite")
        for name in ("p_b", "p_e"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1]")
        for name in ("eta_b", "eta_e"):
            if getattr(self, name) < 0.0:
                raise ConfigError(f"{name} must be >= 0")
        for name in ("bg_var_b", "bg_var_e"):
            if getattr(self, name) <= 0.0:
                raise ConfigError(f"{name} must be > 0")
        if not isinstance(self.n_destinations, int) or self.n_destinations < 1:
            raise ConfigError("n_destinations must be a positive integer")

    def system_config(
        self,
        *,
        power_db: float | None = None,
        n_destinations: int | None = None,
        quad_order: int = DEFAULT_QUAD_ORDER,
    ) -> SystemConfig:
        """Materialize a :class:`SystemConfig`, optionally overriding the
        sweep axis quantities."""
        p_db = self.transmit_power_db if power_db is None else power_db
        n = self.n_destinations if n_destinations is None else n_destinations
        topo = PinholeTopology(
            source_link=link_params_from_db(self.m_a_db, self.s_a_db),
            destination_link=link_params_from_db(self.m_b_db, self.s_b_db),
            eavesdropper_link=link_params_from_db(self.m_e_db, self.s_e_db),
            n_destinations=int(n),
            pinhole_present=self.pinhole,
        )
        return SystemConfig(
            topology=topo,
            dest_noise=NoiseParams(
                background_var=self.bg_var_b,
                impulse_ratio=self.eta_b,
                impulse_prob=self.p_b,
            ),
            eav_noise=NoiseParams(
                background_var=self.bg_var_e,
                impulse_ratio=self.eta_e,
                impulse_prob=self.p_e,
            ),
            transmit_power=10.0 ** (p_db / 10.0),
            quadrature=gauss_hermite_rule(quad_order),
        )


@dataclass(frozen=True)
class SweepSpec:
    """One metric swept over one axis with a set of evaluation methods."""

    metric: str
    axis: str
    values: tuple
    methods: tuple
    base: ScenarioParams = field(default_factory=ScenarioParams)
    quadrature_order: int = DEFAULT_QUAD_ORDER
    mc: McConfig = DEFAULT_MC
    label: str = ""

    def __post_init__(self) -> None:
        if self.metric not in ("asc", "poi"):
            raise ConfigError(f"metric must be 'asc' or 'poi', got {self.metric!r}")
        if self.axis not in AXES:
            raise ConfigError(f"axis must be one of {AXES}, got {self.axis!r}")
        values = tuple(self.values)
        if not values:
            raise ConfigError("values must be a nonempty list")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ConfigError("values must be strictly increasing")
        if self.axis == "n_destinations" and any(
            int(v) != v or v < 1 for v in values
        ):
            raise ConfigError("n_destinations values must be positive integers")
        methods = tuple(self.methods)
        if not methods:
            raise ConfigError("methods must be a nonempty list")
        allowed = ASC_METHODS if self.metric == "asc" else POI_METHODS
        for m in methods:
            if m not in allowed:
                raise ConfigError(
                    f"method {m!r} is not valid for metric {self.metric!r}; "
                    f"allowed: {', '.join(allowed)}"
                )
        if len(set(methods)) != len(methods):
            raise ConfigError("methods must not repeat")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "methods", methods)
        # Validate the quadrature order eagerly so config errors surface
        # before a sweep starts.
        gauss_hermite_rule(self.quadrature_order)


@dataclass(frozen=True)
class SweepRow:
    axis_value: float
    method: str
    metric: str
    value: float
    ci_halfwidth: float


@dataclass(frozen=True)
class SweepError:
    axis_value: float
    method: str
    message: str


_EVALUATORS = {
    ("asc", "quadrature"): asc_quadrature,
    ("asc", "asymptotic"): asc_asymptotic,
    ("asc", "asymptotic-large-n"): asc_asymptotic_large_n,
    ("poi", "quadrature"): poi_quadrature,
    ("poi", "closed-form-poi"): poi_closed_form,
}


def _point_seed(seed: int, index: int) -> int:
    """Substream seed for one sweep point, derived counter-style."""
    return int(np.random.SeedSequence([seed, index]).generate_state(1, np.uint64)[0])


def _evaluate_point(spec: SweepSpec, index: int, axis_value, method: str) -> SecrecyResult:
    if spec.axis == "transmit_power_db":
        cfg = spec.base.system_config(
            power_db=float(axis_value), quad_order=spec.quadrature_order
        )
    else:
        cfg = spec.base.system_config(
            n_destinations=int(axis_value), quad_order=spec.quadrature_order
        )
    if method == "monte-carlo":
        # One substream per point; blocks inside are already deterministic,
        # so worker parallelism stays at the point level.
        mc = replace(spec.mc, seed=_point_seed(spec.mc.seed, index), workers=1)
        return mc_asc(cfg, mc) if spec.metric == "asc" else mc_poi(cfg, mc)
    return _EVALUATORS[(spec.metric, method)](cfg)


def run_sweep(spec: SweepSpec) -> tuple[list[SweepRow], list[SweepError]]:
    """Evaluate every (axis value, method) pair of the spec.

    Points are dispatched to a bounded pool; rows come back in axis order
    (methods in spec order within a point) regardless of completion order.
    A failing point becomes a :class:`SweepError` and the sweep continues.
    """
    tasks = [
        (index, axis_value, method)
        for index, axis_value in enumerate(spec.values)
        for method in spec.methods
    ]

    def work(task):
        index, axis_value, method = task
        try:
            result = _evaluate_point(spec, index, axis_value, method)
        except PlcsecError as exc:
            return SweepError(axis_value=axis_value, method=method, message=str(exc))
        return SweepRow(
            axis_value=axis_value,
            method=method,
            metric=spec.metric,
            value=result.value,
            ci_halfwidth=result.ci_halfwidth,
        )

    if spec.mc.workers > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=spec.mc.workers) as pool:
            outcomes = list(pool.map(work, tasks))
    else:
        outcomes = [work(t) for t in tasks]

    rows = [o for o in outcomes if isinstance(o, SweepRow)]
    errors = [o for o in outcomes if isinstance(o, SweepError)]
    return rows, errors


CSV_HEADER = "axis,method,metric,value,ci_halfwidth"


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)) or (isinstance(x, float) and x.is_integer()):
        return str(int(x))
    return format(float(x), ".12g")


def rows_to_csv(rows: list[SweepRow]) -> str:
    """Render rows as CSV with values at 12 significant digits."""
    lines = [CSV_HEADER]
    for row in rows:
        lines.append(
            f"{_fmt(row.axis_value)},{row.method},{row.metric},"
            f"{format(row.value, '.12g')},{format(row.ci_halfwidth, '.12g')}"
        )
    return "\n".join(lines) + "\n"
