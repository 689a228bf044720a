"""Benchmark capacities and the achievable-rate functional.

The secret-key lower bound of an end-to-end pair is max(CI, RCI); the
repeater protocol succeeds with probability 1/g^2 per chain use, so the
headline figure is rate_weighted = p_succ * max(CI, RCI). Negative lower
bounds are kept as-is, with a clamped companion value for plotting.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .gaussian import TwoModeCM, _eig_pair, _entropy_terms
from .memory import nla_success_probability

_LN2 = math.log(2.0)


def plob_lossy(eta_total: float) -> float:
    """Repeaterless key capacity of the pure-loss channel, -log2(1 - eta)."""
    if not 0.0 < eta_total < 1.0:
        raise DomainError(f"eta_total={eta_total} must be in (0, 1)")
    return -math.log1p(-eta_total) / _LN2


def repeater_capacity(eta_total: float, N: int) -> float:
    """Key capacity of an N-link lossy chain, -log2(1 - eta^(1/N))."""
    if not isinstance(N, int) or N < 1:
        raise DomainError(f"N={N} must be an integer >= 1")
    if not 0.0 < eta_total < 1.0:
        raise DomainError(f"eta_total={eta_total} must be in (0, 1)")
    return -math.log1p(-(eta_total ** (1.0 / N))) / _LN2


@dataclass(frozen=True)
class RateFragment:
    """Entropic rates of one end-to-end CM plus the success weighting."""

    ci: float
    rci: float
    lower_bound: float
    p_succ: float
    rate_weighted: float
    rate_clamped: float
    nu_minus: float
    nu_plus: float


def achievable_rate(cm: TwoModeCM, g: float) -> RateFragment:
    """Rate bundle for an end-to-end CM heralded with amplifier gain g."""
    h_a, h_b, h_nm, h_np = _entropy_terms(cm)
    ci = h_b - h_nm - h_np
    rci = h_a - h_nm - h_np
    lower = max(ci, rci)
    p = nla_success_probability(g)
    weighted = p * lower
    nu_minus, nu_plus = _eig_pair(cm.a, cm.b, cm.c)
    return RateFragment(
        ci=ci,
        rci=rci,
        lower_bound=lower,
        p_succ=p,
        rate_weighted=weighted,
        rate_clamped=max(0.0, weighted),
        nu_minus=nu_minus,
        nu_plus=nu_plus,
    )


@dataclass(frozen=True)
class RateRecord:
    """One fully evaluated parameter point; the unit of CSV/JSON output.

    Fields that cannot be computed (invalid equivalent description, or an
    upstream error) are None. error holds the diagnostic message for
    failed points and is None otherwise.
    """

    L_km: float
    n: int
    N: int
    mu: float
    g: float
    eta_total: float | None = None
    xi_snu: float | None = None
    lambda_g: float | None = None
    valid: bool | None = None
    tau_c_s: float | None = None
    xi_qm_snu: float | None = None
    t_store_s: float | None = None
    a: float | None = None
    b: float | None = None
    c: float | None = None
    nu_minus: float | None = None
    nu_plus: float | None = None
    ci: float | None = None
    rci: float | None = None
    lower_bound: float | None = None
    p_succ: float | None = None
    rate_weighted: float | None = None
    rate_clamped: float | None = None
    plob: float | None = None
    repeater_cap: float | None = None
    error: str | None = None
