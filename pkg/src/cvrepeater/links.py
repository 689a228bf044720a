"""Basic-link construction: amplifier-equivalent parameters and the link CM.

A basic link is a TMSV source of variance mu whose transmitted mode crosses
a thermal-loss channel (eta, xi) and is then conditioned on the success of a
noiseless linear amplifier of gain g. For g > 1 the heralded output state is
equivalent to a *different* amplifier-free link with parameters
(mu_g, eta_g, xi_g); the equivalence holds only while lambda_g < 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, InvalidEquivalentError, SingularityError
from .gaussian import TwoModeCM

_DENOM_TOL = 1e-12


@dataclass(frozen=True)
class LinkSpec:
    """Physical parameters of one basic link."""

    mu: float
    eta: float
    xi: float = 0.0
    g: float = 1.0
    L0: float | None = None  # km, informational

    def __post_init__(self):
        if self.mu < 1.0:
            raise DomainError(f"mu={self.mu} must be >= 1")
        if not 0.0 < self.eta <= 1.0:
            raise DomainError(f"eta={self.eta} must be in (0, 1]")
        if self.xi < 0.0:
            raise DomainError(f"xi={self.xi} must be >= 0")
        if self.g < 1.0:
            raise DomainError(f"g={self.g} must be >= 1")


@dataclass(frozen=True)
class EquivalentParams:
    """Amplifier-free description of a heralded link.

    valid is true exactly when 0 <= lambda_g < 1; outside that region the
    equivalent description is unreliable and the dependent fields are NaN.
    """

    lambda_g: float
    mu_g: float
    eta_g: float
    xi_g: float
    valid: bool

    def __post_init__(self):
        if self.valid:
            if not 0.0 <= self.lambda_g < 1.0:
                raise DomainError(
                    f"valid=True requires 0 <= lambda_g < 1, got {self.lambda_g}"
                )
            if self.mu_g < 1.0:
                raise DomainError(f"valid=True requires mu_g >= 1, got {self.mu_g}")
        elif 0.0 <= self.lambda_g < 1.0:
            raise DomainError(
                f"valid=False contradicts lambda_g={self.lambda_g} < 1"
            )


def nla_equivalent(spec: LinkSpec) -> EquivalentParams:
    """Map (mu, eta, xi, g) to the equivalent amplifier-free link.

    g = 1 short-circuits to the bare link: the general eta_g expression does
    not reduce to eta at g = 1, and a unit-gain amplifier is a no-op, so the
    bare parameters are returned unchanged.
    """
    mu, eta, xi, g = spec.mu, spec.eta, spec.xi, spec.g
    if g == 1.0:
        lam = math.sqrt((mu - 1.0) / (mu + 1.0))
        return EquivalentParams(lam, mu, eta, xi, True)

    u = eta * (g * g - 1.0)
    den_rad = 2.0 - u * xi
    if abs(den_rad) <= _DENOM_TOL:
        raise SingularityError(f"denominator 2 - eta*(g^2-1)*xi = {den_rad}")
    radicand = ((mu - 1.0) / (mu + 1.0)) * (2.0 - u * (xi - 2.0)) / den_rad
    if radicand < 0.0:
        raise DomainError(
            f"negative radicand {radicand} for lambda_g at (mu={mu}, eta={eta}, "
            f"xi={xi}, g={g})"
        )
    lam = math.sqrt(radicand)
    if lam >= 1.0:
        nan = float("nan")
        return EquivalentParams(lam, nan, nan, nan, False)

    den_eta = 1.0 + eta * g * g * (u * (xi - 2.0) * xi / 4.0 - xi + 1.0)
    if abs(den_eta) <= _DENOM_TOL:
        raise SingularityError(
            f"denominator 1 + eta*g^2*(eta*(g^2-1)*(xi-2)*xi/4 - xi + 1) = {den_eta}"
        )
    lam2 = lam * lam
    mu_g = (1.0 + lam2) / (1.0 - lam2)
    eta_g = eta * g * g / den_eta
    xi_g = xi - u * (xi - 2.0) * xi / 2.0
    return EquivalentParams(lam, mu_g, eta_g, xi_g, True)


def basic_link_cm(eq: EquivalentParams) -> TwoModeCM:
    """Covariance matrix of one heralded basic link.

    (a0, b0, c0) = (mu_g, eta_g*mu_g + (1 - eta_g) + xi_g,
                    sqrt(eta_g*(mu_g^2 - 1)))
    """
    if not eq.valid:
        raise InvalidEquivalentError(
            "lambda_g >= 1: equivalent description unreliable"
        )
    b0 = eq.eta_g * eq.mu_g + (1.0 - eq.eta_g) + eq.xi_g
    c0 = math.sqrt(eq.eta_g * (eq.mu_g * eq.mu_g - 1.0))
    return TwoModeCM(eq.mu_g, b0, c0)


def transmittance_from_length(L: float, alpha: float) -> float:
    """Fiber transmittance 10^(-alpha*L/10) for length L km, alpha dB/km."""
    if L < 0.0:
        raise DomainError(f"L={L} must be >= 0")
    if alpha <= 0.0:
        raise DomainError(f"alpha={alpha} must be > 0")
    return 10.0 ** (-alpha * L / 10.0)
