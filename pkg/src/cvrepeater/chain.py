"""Entanglement swapping: the standard-form recursion and the general relay.

A chain of depth n holds N = 2^n identical links. All links decay in memory
for the same storage time, then n rounds of pairwise Bell measurements
collapse the chain to a single end-to-end pair. For identical links each
round is the closed-form triplet recursion swap_once; bell_relay_general is
the full conditional-CM computation, which also accepts unequal links.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, MeasurementDegeneracyError, PhysicalityError
from .gaussian import GeneralCM4, TwoModeCM, Z2
from .memory import MemoryParams, decohere

_OMEGA_1 = np.array([[0.0, 1.0], [1.0, 0.0]])
_OMEGA_2 = np.array([[0.0, 1.0], [-1.0, 0.0]])


@dataclass(frozen=True)
class ChainSpec:
    """One replicated link plus the storage applied before swapping."""

    depth_n: int
    link_cm: TwoModeCM
    mem: MemoryParams
    t_store: float = 0.0

    def __post_init__(self):
        if not isinstance(self.depth_n, int) or self.depth_n < 0:
            raise DomainError(f"depth_n={self.depth_n} must be an integer >= 0")
        if self.t_store < 0.0:
            raise DomainError(f"t_store={self.t_store} must be >= 0")

    @property
    def n_links(self) -> int:
        return 2 ** self.depth_n


def swap_once(v: TwoModeCM) -> TwoModeCM:
    """End-to-end CM after Bell-measuring the middle of two copies of v.

    (a', b', c') = (a - k, b - k, k) with k = c^2 / (a + b). Conserves
    a' + c' = a and b' + c' = b exactly.
    """
    den = v.a + v.b
    if den <= 1e-12:
        raise MeasurementDegeneracyError(f"degenerate input: a + b = {den}")
    k = v.c * v.c / den
    return TwoModeCM(v.a - k, v.b - k, k)


def chain_cm(spec: ChainSpec) -> TwoModeCM:
    """Decay every link for t_store, then swap pairwise n times."""
    v = decohere(spec.link_cm, spec.t_store, spec.mem)
    for _ in range(spec.depth_n):
        v = swap_once(v)
    return v


def bell_relay_general(v4) -> TwoModeCM:
    """Conditional CM of the kept modes after a CV Bell measurement.

    v4 is a GeneralCM4 (or a raw symmetric 8x8 array) over (a1, b2, b1, a2);
    the measurement consumes (b1, a2). With the inner-pair blocks B (b1),
    A (a2), D (b1-a2 cross) and kept-to-inner cross blocks C1, C2:

        Upsilon = (Z B Z + A - Z D - D^T Z) / 2
        V_out = V_(a1,b2) - (1/(2 det Upsilon)) * sum_jk C_j (w_j^T Upsilon w_k) C_k^T

    The outcome does not enter: conditional second moments of Gaussian
    measurements are outcome-independent.
    """
    if isinstance(v4, GeneralCM4):
        m = v4.m
    else:
        m = np.asarray(v4, dtype=float)
        if m.shape != (8, 8):
            raise DomainError(f"expected an 8x8 matrix, got {m.shape}")
        scale = max(1.0, float(np.abs(m).max()))
        if float(np.abs(m - m.T).max()) > 1e-12 * scale:
            raise PhysicalityError("matrix is not symmetric")

    kept = m[0:4, 0:4]
    c_blocks = (m[0:4, 4:6], m[0:4, 6:8])
    blk_b = m[4:6, 4:6]
    blk_a = m[6:8, 6:8]
    blk_d = m[4:6, 6:8]

    ups = 0.5 * (Z2 @ blk_b @ Z2 + blk_a - Z2 @ blk_d - blk_d.T @ Z2)
    det_ups = ups[0, 0] * ups[1, 1] - ups[0, 1] * ups[1, 0]
    if abs(det_ups) <= 1e-12:
        raise MeasurementDegeneracyError(
            f"conditioning matrix is singular: det = {det_ups}"
        )

    omegas = (_OMEGA_1, _OMEGA_2)
    corr = np.zeros((4, 4))
    for j in range(2):
        for k in range(2):
            corr += c_blocks[j] @ (omegas[j].T @ ups @ omegas[k]) @ c_blocks[k].T
    out = kept - corr / (2.0 * det_ups)

    # The kept pair must come back in standard form (a*I, b*I, c*Z blocks).
    stol = 1e-8 * max(1.0, float(np.abs(out).max()))
    structured = (
        abs(out[0, 0] - out[1, 1]) <= stol
        and abs(out[2, 2] - out[3, 3]) <= stol
        and abs(out[0, 2] + out[1, 3]) <= stol
        and abs(out[0, 1]) <= stol
        and abs(out[0, 3]) <= stol
        and abs(out[1, 2]) <= stol
        and abs(out[2, 3]) <= stol
    )
    if not structured:
        raise PhysicalityError("conditional state left standard form")
    return TwoModeCM(out[0, 0], out[2, 2], out[0, 2])


def relay_links(link1: TwoModeCM, link2: TwoModeCM) -> TwoModeCM:
    """Bell-relay two (possibly unequal) standard-form links."""
    return bell_relay_general(GeneralCM4.from_links(link1, link2))
