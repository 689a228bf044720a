"""Quantum-memory decay and heralding-time bookkeeping.

Storage in a non-ideal memory acts as a thermal-loss channel applied to both
modes of a stored pair: correlations shrink by f = exp(-t/tau_c) while the
diagonal variances relax toward the noise floor 1 + xi_qm.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .gaussian import TwoModeCM


@dataclass(frozen=True)
class MemoryParams:
    """Coherence time tau_c (s; +inf for an ideal memory) and excess noise."""

    tau_c: float = math.inf
    xi_qm: float = 0.0

    def __post_init__(self):
        if not self.tau_c > 0.0:
            raise DomainError(f"tau_c={self.tau_c} must be > 0")
        if self.xi_qm < 0.0:
            raise DomainError(f"xi_qm={self.xi_qm} must be >= 0")

    @classmethod
    def ideal(cls) -> "MemoryParams":
        return cls(math.inf, 0.0)

    @property
    def is_ideal(self) -> bool:
        return math.isinf(self.tau_c) and self.xi_qm == 0.0


@dataclass(frozen=True)
class TimingParams:
    """Inputs of the heralding time: link length, signal speed, success odds."""

    L0: float  # km
    c_speed: float  # km/s
    p_succ: float

    def __post_init__(self):
        if self.L0 < 0.0:
            raise DomainError(f"L0={self.L0} must be >= 0")
        if self.c_speed <= 0.0:
            raise DomainError(f"c_speed={self.c_speed} must be > 0")
        if not 0.0 < self.p_succ <= 1.0:
            raise DomainError(f"p_succ={self.p_succ} must be in (0, 1]")


def decohere(v: TwoModeCM, t: float, mem: MemoryParams) -> TwoModeCM:
    """State of a stored pair after both memories have run for time t.

    a(t) = 1 + xi_qm + (a(0) - 1 - xi_qm) e^(-t/tau_c), likewise for b,
    and c(t) = c(0) e^(-t/tau_c). t -> inf gives the uncorrelated
    thermalized pair (1 + xi_qm, 1 + xi_qm, 0).
    """
    if t < 0.0:
        raise DomainError(f"t={t} must be >= 0")
    if math.isinf(mem.tau_c):
        return v
    f = math.exp(-t / mem.tau_c)
    if f == 1.0:
        return v
    floor = 1.0 + mem.xi_qm
    return TwoModeCM(
        floor + (v.a - floor) * f,
        floor + (v.b - floor) * f,
        v.c * f,
    )


def heralding_time(tp: TimingParams) -> float:
    """Mean time until a basic link is announced: 2*L0 / (c * p_succ)."""
    return 2.0 * tp.L0 / (tp.c_speed * tp.p_succ)


def nla_success_probability(g: float) -> float:
    """Best-case amplifier success probability, 1/g^2."""
    if g < 1.0:
        raise DomainError(f"g={g} must be >= 1")
    return 1.0 / (g * g)
