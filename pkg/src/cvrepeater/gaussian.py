"""Two-mode Gaussian states in standard form and their entropic functionals.

A two-mode covariance matrix (CM) in standard form is fully described by a
triplet (a, b, c):

    V = [[a*I, c*Z],
         [c*Z, b*I]],   I = diag(1, 1),  Z = diag(1, -1)

in shot-noise units where the vacuum variance is 1. Everything in this
package stays inside this family: thermal-loss links, memory decay, and
entanglement swapping all map standard form to standard form.
"""
from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, PhysicalityError, SingularityError

# Physicality tolerance: symplectic eigenvalues may sit below 1 by this much
# before a state is rejected as unphysical.
EPS_PHYS = 1e-9

_MACH = sys.float_info.epsilon
_LN2 = math.log(2.0)

Z2 = np.array([[1.0, 0.0], [0.0, -1.0]])


def _scaled_tol(a: float, b: float, c: float) -> float:
    # Rounding in a*b - c*c grows with the squared magnitudes, so the
    # physicality tolerance must scale with them; EPS_PHYS is the floor.
    s = max(1.0, a * a, b * b, c * c, abs(a * b))
    return max(EPS_PHYS, 64.0 * _MACH * s)


def _eig_pair(a: float, b: float, c: float) -> tuple[float, float]:
    """Closed-form symplectic eigenvalues of a standard-form CM.

    nu+^2 = (Delta + sqrt(Delta^2 - 4 detV)) / 2 with Delta = a^2+b^2-2c^2
    and detV = (ab - c^2)^2; nu- is recovered as |ab - c^2| / nu+, which
    avoids the cancellation in the (Delta - sqrt(...)) branch.

    The discriminant is evaluated in the factored form
    (a-b)^2 * ((a+b)^2 - 4c^2): the expanded Delta^2 - 4 detV subtracts
    two near-equal squares when nu- ~ nu+ and loses all accuracy at
    large a, b.
    """
    delta = a * a + b * b - 2.0 * c * c
    dets = a * b - c * c
    disc = (a - b) * (a - b) * ((a + b) * (a + b) - 4.0 * c * c)
    if disc < -1e-12 * max(delta * delta, 1.0):
        raise SingularityError(
            f"eigenvalue discriminant {disc} negative beyond tolerance"
        )
    disc = max(disc, 0.0)
    nu_plus = math.sqrt((delta + math.sqrt(disc)) / 2.0)
    if nu_plus == 0.0:
        return 0.0, 0.0
    return abs(dets) / nu_plus, nu_plus


@dataclass(frozen=True)
class TwoModeCM:
    """Standard-form two-mode covariance matrix (a, b, c), snu."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "c", float(self.c))
        tol = _scaled_tol(self.a, self.b, self.c)
        if self.a < 1.0 - tol or self.b < 1.0 - tol:
            raise PhysicalityError(
                f"sub-vacuum diagonal variance: a={self.a}, b={self.b}"
            )
        if self.c * self.c > self.a * self.b + tol:
            raise PhysicalityError(
                f"c^2={self.c * self.c} exceeds a*b={self.a * self.b}"
            )
        nu_minus, _ = _eig_pair(self.a, self.b, self.c)
        if nu_minus < 1.0 - tol:
            raise PhysicalityError(
                f"uncertainty violation: nu_minus={nu_minus} < 1"
            )

    def triplet(self) -> tuple[float, float, float]:
        return (self.a, self.b, self.c)

    def matrix(self) -> np.ndarray:
        """Return the explicit 4x4 matrix in (x_A, p_A, x_B, p_B) order."""
        m = np.zeros((4, 4))
        m[0:2, 0:2] = self.a * np.eye(2)
        m[2:4, 2:4] = self.b * np.eye(2)
        m[0:2, 2:4] = self.c * Z2
        m[2:4, 0:2] = self.c * Z2
        return m


class SymplecticPair(NamedTuple):
    nu_minus: float
    nu_plus: float


def tmsv(mu: float) -> TwoModeCM:
    """Two-mode squeezed vacuum with quadrature variance mu >= 1."""
    if mu < 1.0:
        raise DomainError(f"sub-vacuum variance mu={mu}")
    return TwoModeCM(mu, mu, math.sqrt(mu * mu - 1.0))


def symplectic_eigenvalues(v: TwoModeCM) -> SymplecticPair:
    """Symplectic spectrum (nu_minus, nu_plus) of a physical CM."""
    return SymplecticPair(*_eig_pair(v.a, v.b, v.c))


def entropy_h(x: float) -> float:
    """Bosonic entropy h(x) in bits for a symplectic value x >= 1.

    h(x) = ((x+1)/2) log2((x+1)/2) - ((x-1)/2) log2((x-1)/2), with the
    0*log0 := 0 convention so h(1) = 0. Values in [1 - EPS_PHYS, 1) clamp
    to 1. Evaluated in a rearranged form that stays accurate for large x.
    """
    if x < 1.0 - EPS_PHYS:
        raise DomainError(f"symplectic value {x} below 1")
    if x <= 1.0:
        return 0.0
    return math.log2((x + 1.0) / 2.0) + (x - 1.0) / 2.0 * math.log1p(
        2.0 / (x - 1.0)
    ) / _LN2


def _entropy_terms(v: TwoModeCM) -> tuple[float, float, float, float]:
    """(h(a), h(b), h(nu_minus), h(nu_plus)) with roundoff-safe clamping."""
    nu_minus, nu_plus = _eig_pair(v.a, v.b, v.c)
    tol = _scaled_tol(v.a, v.b, v.c)
    if 1.0 - tol <= nu_minus < 1.0:
        nu_minus = 1.0
    if 1.0 - tol <= nu_plus < 1.0:
        nu_plus = 1.0
    return (
        entropy_h(v.a),
        entropy_h(v.b),
        entropy_h(nu_minus),
        entropy_h(nu_plus),
    )


def coherent_information(v: TwoModeCM) -> float:
    """h(b) - h(nu_minus) - h(nu_plus), in bits; may be negative."""
    h_a, h_b, h_nm, h_np = _entropy_terms(v)
    return h_b - h_nm - h_np


def reverse_coherent_information(v: TwoModeCM) -> float:
    """h(a) - h(nu_minus) - h(nu_plus), in bits; may be negative.

    The retained mode A keeps variance a, so this is the quantity that
    approaches -log2(1 - eta) for a high-variance pure-loss link.
    """
    h_a, h_b, h_nm, h_np = _entropy_terms(v)
    return h_a - h_nm - h_np


def _omega(n_modes: int) -> np.ndarray:
    """Symplectic form, (q, p) interleaved per mode."""
    w = np.array([[0.0, 1.0], [-1.0, 0.0]])
    out = np.zeros((2 * n_modes, 2 * n_modes))
    for k in range(n_modes):
        out[2 * k : 2 * k + 2, 2 * k : 2 * k + 2] = w
    return out


class GeneralCM4:
    """Four-mode covariance matrix used as a Bell-relay input.

    Mode order: (a1, b2, b1, a2) with (q, p) interleaved, i.e. an 8x8 real
    symmetric matrix. a1/b2 are the kept outer modes; b1/a2 are the inner
    modes consumed by the Bell measurement.
    """

    __slots__ = ("m",)

    def __init__(self, m):
        m = np.array(m, dtype=float)
        if m.shape != (8, 8):
            raise DomainError(f"expected an 8x8 matrix, got {m.shape}")
        scale = max(1.0, float(np.abs(m).max()))
        if float(np.abs(m - m.T).max()) > 1e-12 * scale:
            raise PhysicalityError("matrix is not symmetric")
        nus = np.abs(np.linalg.eigvals(1j * _omega(4) @ m))
        tol = max(EPS_PHYS, 64.0 * _MACH * scale * scale)
        if float(nus.min()) < 1.0 - tol:
            raise PhysicalityError(
                f"uncertainty violation: min symplectic value {nus.min()}"
            )
        self.m = m

    def matrix(self) -> np.ndarray:
        return self.m.copy()

    @classmethod
    def from_links(cls, link1: TwoModeCM, link2: TwoModeCM) -> "GeneralCM4":
        """Assemble two independent standard-form links for a Bell relay.

        link1 spans (a1, b1), link2 spans (a2, b2); the relay measures
        (b1, a2), the adjacent inner modes.
        """
        m = np.zeros((8, 8))
        eye = np.eye(2)
        m[0:2, 0:2] = link1.a * eye  # a1
        m[2:4, 2:4] = link2.b * eye  # b2
        m[4:6, 4:6] = link1.b * eye  # b1
        m[6:8, 6:8] = link2.a * eye  # a2
        m[0:2, 4:6] = link1.c * Z2  # a1 <-> b1
        m[4:6, 0:2] = link1.c * Z2
        m[2:4, 6:8] = link2.c * Z2  # b2 <-> a2
        m[6:8, 2:4] = link2.c * Z2
        return cls(m)
