"""Average secrecy capacity and intercept probability of the scheduled system.

The instantaneous secrecy rate is the clamped difference between the
scheduled destination's rate and the eavesdropper's rate, mixed over the
four joint impulsive-noise events.  Three independent evaluation routes are
provided for its average:

* ``asc_quadrature`` -- the exact expectation reduced to nested
  standard-normal expectations and evaluated with Gauss-Hermite rules.  The
  positivity clamp is encoded in the integration limits, which surface as a
  log-normal CDF factor inside each inner integrand; residual negativity of
  the result therefore indicates quadrature error and is reported, not
  clipped.
* ``asc_asymptotic`` / ``asc_asymptotic_large_n`` -- closed forms for the
  high-power saturation value, obtained by dropping the +1 inside both log
  terms (the shared pinhole gain then cancels, so the result is independent
  of transmit power) and integrating tail powers through the exponential
  Q-fit.  Every term reduces to the half-axis Gaussian segment integrals of
  :mod:`plcsec.special_math`.
* ``poi_quadrature`` / ``poi_closed_form`` -- the probability that the
  eavesdropper's rate exceeds the scheduled destination's.  The shared gain
  and the transmit power cancel in the defining inequality, so both
  functions are structurally independent of transmit power.

The alternating binomial sums in the closed forms cancel catastrophically as
the number of destinations grows (term magnitudes grow like exp(0.55 N)
while the sum stays bounded), so beyond a small N they are evaluated in
arbitrary precision and rounded once at the end.  The largest intermediate
term magnitude is reported as a conditioning diagnostic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import mpmath
import numpy as np
from scipy import special as sps

from .channel import LinkParams, PinholeTopology, effective_links
from .errors import ConfigError, DomainError, EvaluationError
from .noise import NoiseEvent, NoiseParams, noise_events
from .special_math import (
    DEFAULT_Q_APPROX,
    DEFAULT_QUAD_ORDER,
    QApproxParams,
    QuadratureRule,
    gauss_hermite_rule,
    gaussian_segment_integrals,
)

__all__ = [
    "AsymptoticConstants",
    "SecrecyResult",
    "SystemConfig",
    "asc_asymptotic",
    "asc_asymptotic_large_n",
    "asc_quadrature",
    "asymptotic_constants",
    "instantaneous_secrecy_capacity",
    "poi_closed_form",
    "poi_quadrature",
]

LN2 = math.log(2.0)

# Index above which alternating binomial sums switch to arbitrary precision.
_MP_SUM_THRESHOLD = 25
# Binomial coefficients overflow double precision alarmingly close to this,
# and required working precision grows linearly; keep a hard ceiling.
_MAX_CLOSED_FORM_N = 1000


@dataclass(frozen=True)
class SystemConfig:
    """Everything needed to evaluate the secrecy metrics of one scenario."""

    topology: PinholeTopology
    dest_noise: NoiseParams
    eav_noise: NoiseParams
    transmit_power: float
    quadrature: QuadratureRule = field(
        default_factory=lambda: gauss_hermite_rule(DEFAULT_QUAD_ORDER)
    )
    q_approx: QApproxParams = DEFAULT_Q_APPROX

    def __post_init__(self) -> None:
        if not (math.isfinite(self.transmit_power) and self.transmit_power > 0.0):
            raise ConfigError("transmit_power must be finite and > 0")


@dataclass(frozen=True)
class SecrecyResult:
    """A metric value with its evaluation route.

    ``ci_halfwidth`` is nonzero only for Monte Carlo estimates.
    ``diagnostics`` carries accuracy indicators such as the largest
    intermediate term of an alternating sum or a negative quadrature value.
    """

    value: float
    method: str
    ci_halfwidth: float = 0.0
    diagnostics: Mapping[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class AsymptoticConstants:
    """Completed-square constants behind the closed forms, for one (j, k, n).

    Both families describe factors ``amp * exp(-(a t - b)^2 / 2)`` obtained
    by folding powers of the exponential Q-fit into the standard normal
    density: ``a`` is the quadratic scale, ``b``/``b_bar`` the completed
    shifts on the negative/positive half-axes, ``c`` the raw constant of the
    exponent and ``d``/``d_bar`` the resulting amplitudes.  ``phi_e`` is the
    eavesdropper-to-destination log-std ratio and ``lam`` the standardized
    mean offset of the eavesdropper-versus-destination contest for the event.
    """

    phi_e: float
    lam: float
    dest_a: float
    dest_b: float
    dest_b_bar: float
    dest_c: float
    dest_d: float
    eav_a: float
    eav_b: float
    eav_b_bar: float
    eav_c: float
    eav_d: float
    eav_d_bar: float


def _tilde_events(cfg: SystemConfig) -> list[NoiseEvent]:
    # Unit transmit power turns the alpha factors into their power-stripped
    # variants, keeping power-independent code paths structurally so.
    return noise_events(cfg.dest_noise, cfg.eav_noise, 1.0)


def _event_offset(ev: NoiseEvent, dest: LinkParams, eav: LinkParams) -> float:
    """Standardized mean offset of the eavesdropper contest for one event."""
    return (eav.m - dest.m + math.log(ev.alpha_e / ev.alpha_b)) / dest.s


# ---------------------------------------------------------------------------
# Instantaneous secrecy rate
# ---------------------------------------------------------------------------


def instantaneous_secrecy_capacity(
    gain_a: float, gain_n_star: float, gain_e: float, cfg: SystemConfig
) -> float:
    """Noise-event mixture of clamped rate differences, in bits per use.

    ``gain_a`` is the shared-segment gain, ``gain_n_star`` the scheduled
    destination's branch gain and ``gain_e`` the eavesdropper's branch gain.
    """
    for name, g in (("gain_a", gain_a), ("gain_n_star", gain_n_star), ("gain_e", gain_e)):
        if not (math.isfinite(g) and g > 0.0):
            raise DomainError(f"{name} must be finite and > 0")
    total = 0.0
    for ev in noise_events(cfg.dest_noise, cfg.eav_noise, cfg.transmit_power):
        rate_b = math.log1p(ev.alpha_b * gain_a * gain_n_star) / LN2
        rate_e = math.log1p(ev.alpha_e * gain_a * gain_e) / LN2
        total += ev.probability * max(rate_b - rate_e, 0.0)
    return total


# ---------------------------------------------------------------------------
# Exact averages via nested Gauss-Hermite quadrature
# ---------------------------------------------------------------------------


def asc_quadrature(cfg: SystemConfig) -> SecrecyResult:
    """Average secrecy capacity by nested standard-normal quadrature.

    The outer expectation runs over the shared gain (collapsed to the single
    point 1 when the pinhole is absent); each inner expectation runs over the
    scheduled destination's or the eavesdropper's standardized log-gain, with
    the positivity clamp appearing as the conditional CDF factor of the other
    side.  The raw (unclamped) sum is returned: a slightly negative value is
    a quadrature-accuracy diagnostic, not a property of the metric.
    """
    topo = cfg.topology
    dest, eav = effective_links(topo)
    n = topo.n_destinations
    rule = cfg.quadrature
    t = rule.nodes
    w = rule.weights

    if topo.pinhole_present:
        src = topo.source_link
        x = np.exp(src.s * t + src.m)
        wx = w
    else:
        x = np.ones(1)
        wx = np.ones(1)

    y = np.exp(dest.s * t + dest.m)
    z = np.exp(eav.s * t + eav.m)
    # Scheduling factor N * Phi(t)^(N-1), built in log space for large N.
    sel = n * np.exp((n - 1) * sps.log_ndtr(t))

    total = 0.0
    diagnostics: dict[str, float] = {}
    for ev in noise_events(cfg.dest_noise, cfg.eav_noise, cfg.transmit_power):
        log_ratio = math.log(ev.alpha_b) - math.log(ev.alpha_e)
        # Destination side: clamp shows up as the eavesdropper CDF.
        u_b = (dest.s * t + dest.m + log_ratio - eav.m) / eav.s
        base_b = w * sel * sps.ndtr(u_b)
        # Eavesdropper side: clamp shows up as 1 - (destination max CDF).
        u_e = (eav.s * t + eav.m - log_ratio - dest.m) / dest.s
        base_e = w * (-np.expm1(n * sps.log_ndtr(u_e)))

        rate_b = np.log1p(ev.alpha_b * x[:, None] * y[None, :]) / LN2
        rate_e = np.log1p(ev.alpha_e * x[:, None] * z[None, :]) / LN2
        inner = rate_b @ base_b - rate_e @ base_e
        if not np.all(np.isfinite(inner)):
            bad = int(np.argmax(~np.isfinite(inner)))
            raise EvaluationError(
                "non-finite quadrature term in event "
                f"(dest_state={ev.dest_state}, eav_state={ev.eav_state}) "
                f"at outer node index {bad}"
            )
        total += ev.probability * float(wx @ inner)

    if total < 0.0:
        diagnostics["negative_value"] = total
    return SecrecyResult(value=total, method="quadrature", diagnostics=diagnostics)


def poi_quadrature(cfg: SystemConfig) -> SecrecyResult:
    """Intercept probability by a single Gauss-Hermite expectation per event.

    For each noise event the intercept probability is
    ``E[Phi(phi_e t + lam)^N]`` over a standard normal t; transmit power
    never enters (only power-stripped SNR factors appear), so results are
    bit-identical across transmit powers.
    """
    dest, eav = effective_links(cfg.topology)
    n = cfg.topology.n_destinations
    phi_e = eav.s / dest.s
    t = cfg.quadrature.nodes
    w = cfg.quadrature.weights

    total = 0.0
    for ev in _tilde_events(cfg):
        lam = _event_offset(ev, dest, eav)
        vals = np.exp(n * sps.log_ndtr(phi_e * t + lam))
        if not np.all(np.isfinite(vals)):
            bad = int(np.argmax(~np.isfinite(vals)))
            raise EvaluationError(
                "non-finite intercept integrand in event "
                f"(dest_state={ev.dest_state}, eav_state={ev.eav_state}) "
                f"at node index {bad}"
            )
        total += ev.probability * float(np.dot(w, vals))
    return SecrecyResult(value=total, method="quadrature")


# ---------------------------------------------------------------------------
# Completed-square constant families
# ---------------------------------------------------------------------------


def _dest_family(qp: QApproxParams, n: int) -> tuple[float, float, float, float]:
    """(a, b_bar, c, d) for the n-th power of the Q-fit times the normal pdf."""
    a = math.sqrt(2.0 * n * qp.k1 + 1.0)
    b_bar = -n * qp.k2 / a
    c = 2.0 * n * qp.k3
    d = math.exp(-0.5 * (c - b_bar * b_bar))
    return a, b_bar, c, d


def _eav_family(
    qp: QApproxParams, n: int, lam: float, phi_e: float
) -> tuple[float, float, float, float, float, float]:
    """(a, b, b_bar, c, d, d_bar) for the eavesdropper-side contest factor."""
    inv2 = 1.0 / (phi_e * phi_e)
    a = math.sqrt(2.0 * n * qp.k1 + inv2)
    b = (n * qp.k2 + lam * inv2) / a
    b_bar = (-n * qp.k2 + lam * inv2) / a
    c = 2.0 * n * qp.k3 + lam * lam * inv2
    d = math.exp(-0.5 * (c - b * b))
    d_bar = math.exp(-0.5 * (c - b_bar * b_bar))
    return a, b, b_bar, c, d, d_bar


def asymptotic_constants(cfg: SystemConfig, j: int, k: int, n: int) -> AsymptoticConstants:
    """Constant slice used by the closed forms for noise event (j, k), index n."""
    if j not in (1, 2) or k not in (1, 2):
        raise DomainError("event indices j, k must be 1 or 2")
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 0:
        raise DomainError("family index n must be a nonnegative integer")
    dest, eav = effective_links(cfg.topology)
    ev = next(
        e for e in _tilde_events(cfg) if e.dest_state == j and e.eav_state == k
    )
    phi_e = eav.s / dest.s
    lam = _event_offset(ev, dest, eav)
    da, db_bar, dc, dd = _dest_family(cfg.q_approx, n)
    ea, eb, eb_bar, ec, ed, ed_bar = _eav_family(cfg.q_approx, n, lam, phi_e)
    return AsymptoticConstants(
        phi_e=phi_e,
        lam=lam,
        dest_a=da,
        dest_b=-db_bar,
        dest_b_bar=db_bar,
        dest_c=dc,
        dest_d=dd,
        eav_a=ea,
        eav_b=eb,
        eav_b_bar=eb_bar,
        eav_c=ec,
        eav_d=ed,
        eav_d_bar=ed_bar,
    )


# ---------------------------------------------------------------------------
# Alternating-sum engines (double precision below the threshold, arbitrary
# precision above it; the largest term magnitude is always tracked)
# ---------------------------------------------------------------------------


def _pos_bracket(a: float, b: float, c0: float, c1: float) -> float:
    seg = gaussian_segment_integrals(a, b)
    return c0 * seg.i_pos + c1 * seg.i_pos_t


def _neg_bracket(a: float, b: float, c0: float, c1: float) -> float:
    seg = gaussian_segment_integrals(a, b)
    return c0 * seg.i_neg + c1 * seg.i_neg_t


def _mp_phi(b):
    return mpmath.exp(-b * b / 2) / mpmath.sqrt(2 * mpmath.pi)


def _mp_cdf(b):
    return mpmath.erfc(-b / mpmath.sqrt(2)) / 2


def _mp_pos_bracket(a, b, c0, c1):
    cdf = _mp_cdf(b)
    return c0 * cdf / a + c1 * (_mp_phi(b) + b * cdf) / (a * a)


def _alternating_sum(
    m_top: int,
    term_float: Callable[[int], float],
    term_mp: Callable[[int], "mpmath.mpf"],
) -> tuple[float, float]:
    """Sum ``term(n)`` for n = 0..m_top, returning (sum, max |term|).

    Below the threshold the terms are exact-summed in double precision.
    Above it every term is rebuilt in arbitrary precision: the terms
    themselves are what lose accuracy (their magnitude grows exponentially
    with the index while the sum stays bounded), so compensated summation of
    double-precision terms would not help.
    """
    if m_top < _MP_SUM_THRESHOLD:
        terms = [term_float(n) for n in range(m_top + 1)]
        return math.fsum(terms), max(abs(v) for v in terms)
    with mpmath.workdps(30 + int(0.35 * m_top)):
        terms = [term_mp(n) for n in range(m_top + 1)]
        total = mpmath.fsum(terms)
        largest = max(abs(v) for v in terms)
        return float(total), float(largest)


def _dest_minus_sum(
    qp: QApproxParams, big_n: int, c0: float, c1: float
) -> tuple[float, float]:
    """Positive-half-axis destination term of the asymptotic average."""

    def term_float(n: int) -> float:
        a, b_bar, _, d = _dest_family(qp, n)
        sign = -1.0 if n % 2 else 1.0
        return (
            sign
            * math.comb(big_n - 1, n)
            * d
            * _pos_bracket(a, b_bar, c0, c1)
            * big_n
            / LN2
        )

    def term_mp(n: int):
        k1, k2, k3 = mpmath.mpf(qp.k1), mpmath.mpf(qp.k2), mpmath.mpf(qp.k3)
        a = mpmath.sqrt(2 * n * k1 + 1)
        b_bar = -n * k2 / a
        c = 2 * n * k3
        d = mpmath.exp(-(c - b_bar * b_bar) / 2)
        sign = -1 if n % 2 else 1
        return (
            sign
            * mpmath.mpf(math.comb(big_n - 1, n))
            * d
            * _mp_pos_bracket(a, b_bar, mpmath.mpf(c0), mpmath.mpf(c1))
            * big_n
            / mpmath.log(2)
        )

    return _alternating_sum(big_n - 1, term_float, term_mp)


def _eav_minus_sum(
    qp: QApproxParams,
    big_n: int,
    lam: float,
    phi_e: float,
    c0: float,
    c1: float,
    include_rate: bool,
) -> tuple[float, float]:
    """Positive-half-axis eavesdropper sum, shared by the asymptotic average
    (``include_rate=True``, an extra 1/ln 2 and the t-weighted part) and the
    closed-form intercept probability (``include_rate=False``, mass only)."""
    scale = 1.0 / (phi_e * LN2) if include_rate else 1.0 / phi_e

    def term_float(n: int) -> float:
        a, _, b_bar, _, _, d_bar = _eav_family(qp, n, lam, phi_e)
        sign = -1.0 if n % 2 else 1.0
        if include_rate:
            bracket = _pos_bracket(a, b_bar, c0, c1)
        else:
            bracket = gaussian_segment_integrals(a, b_bar).i_pos
        return sign * math.comb(big_n, n) * d_bar * bracket * scale

    def term_mp(n: int):
        k1, k2, k3 = mpmath.mpf(qp.k1), mpmath.mpf(qp.k2), mpmath.mpf(qp.k3)
        lam_mp = mpmath.mpf(lam)
        inv2 = 1 / (mpmath.mpf(phi_e) ** 2)
        a = mpmath.sqrt(2 * n * k1 + inv2)
        b_bar = (-n * k2 + lam_mp * inv2) / a
        c = 2 * n * k3 + lam_mp * lam_mp * inv2
        d_bar = mpmath.exp(-(c - b_bar * b_bar) / 2)
        sign = -1 if n % 2 else 1
        if include_rate:
            bracket = _mp_pos_bracket(a, b_bar, mpmath.mpf(c0), mpmath.mpf(c1))
        else:
            bracket = _mp_cdf(b_bar) / a
        return sign * mpmath.mpf(math.comb(big_n, n)) * d_bar * bracket * mpmath.mpf(scale)

    return _alternating_sum(big_n, term_float, term_mp)


def _check_closed_form_n(n: int) -> None:
    if n > _MAX_CLOSED_FORM_N:
        raise ConfigError(
            f"closed forms support at most {_MAX_CLOSED_FORM_N} destinations "
            "(alternating binomial sums lose precision beyond that)"
        )


# ---------------------------------------------------------------------------
# Closed-form asymptotic average secrecy capacity
# ---------------------------------------------------------------------------


def _asymptotic_value(cfg: SystemConfig, keep_vanishing_terms: bool) -> SecrecyResult:
    topo = cfg.topology
    dest, eav = effective_links(topo)
    n_dest = topo.n_destinations
    _check_closed_form_n(n_dest)
    qp = cfg.q_approx
    phi_e = eav.s / dest.s

    total = 0.0
    largest = 0.0
    for ev in _tilde_events(cfg):
        lam = _event_offset(ev, dest, eav)
        c0_b = math.log(ev.alpha_b) + dest.m

        dest_minus, mt = _dest_minus_sum(qp, n_dest, c0_b, dest.s)
        largest = max(largest, mt)
        eav_zero = (math.log(ev.alpha_e) + eav.m) / LN2
        event_value = dest_minus - eav_zero

        if keep_vanishing_terms:
            a, b_bar, _, d = _dest_family(qp, n_dest - 1)
            dest_plus = (
                n_dest * d / LN2 * _neg_bracket(a, -b_bar, c0_b, dest.s)
            )
            c0_e = math.log(ev.alpha_e) + eav.m - eav.s * lam / phi_e
            ea, eb, _, _, ed, _ = _eav_family(qp, n_dest, lam, phi_e)
            eav_plus = ed / (phi_e * LN2) * _neg_bracket(ea, eb, c0_e, eav.s / phi_e)
            eav_minus, mt = _eav_minus_sum(
                qp, n_dest, lam, phi_e, c0_e, eav.s / phi_e, include_rate=True
            )
            largest = max(largest, mt)
            event_value += dest_plus - eav_plus - eav_minus

        total += ev.probability * event_value

    method = "asymptotic" if keep_vanishing_terms else "asymptotic-large-n"
    return SecrecyResult(
        value=total,
        method=method,
        diagnostics={"max_alternating_term": largest},
    )


def asc_asymptotic(cfg: SystemConfig) -> SecrecyResult:
    """High-power saturation value of the average secrecy capacity.

    Independent of the transmit power and of the shared-segment statistics
    by construction.  Accuracy rests on the destination's log-mean being
    well above the eavesdropper's; the gap to ``asc_quadrature`` at a given
    finite power widens as that margin shrinks.
    """
    return _asymptotic_value(cfg, keep_vanishing_terms=True)


def asc_asymptotic_large_n(cfg: SystemConfig) -> SecrecyResult:
    """Many-destination limit: only the terms that survive as N grows.

    Keeps the positive-half-axis destination sum and the eavesdropper's full
    log expectation; the three terms it drops all vanish as the number of
    destinations grows (given the destination's log-mean dominates).
    """
    return _asymptotic_value(cfg, keep_vanishing_terms=False)


# ---------------------------------------------------------------------------
# Closed-form intercept probability
# ---------------------------------------------------------------------------


def poi_closed_form(cfg: SystemConfig) -> SecrecyResult:
    """Intercept probability assembled from the segment-integral constants.

    Same contest factor as :func:`poi_quadrature`, but the tail power is
    expanded through the exponential Q-fit, leaving one Gaussian segment
    integral per binomial term.  Transmit power never enters.
    """
    topo = cfg.topology
    dest, eav = effective_links(topo)
    n_dest = topo.n_destinations
    _check_closed_form_n(n_dest)
    qp = cfg.q_approx
    phi_e = eav.s / dest.s

    total = 0.0
    largest = 0.0
    for ev in _tilde_events(cfg):
        lam = _event_offset(ev, dest, eav)
        a, b, _, _, d, _ = _eav_family(qp, n_dest, lam, phi_e)
        head = d * gaussian_segment_integrals(a, b).i_neg / phi_e
        tail, mt = _eav_minus_sum(
            qp, n_dest, lam, phi_e, 0.0, 0.0, include_rate=False
        )
        largest = max(largest, mt)
        total += ev.probability * (head + tail)

    return SecrecyResult(
        value=total,
        method="closed-form-poi",
        diagnostics={"max_alternating_term": largest},
    )
