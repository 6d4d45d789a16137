"""Closed-form capacity upper bound for rank-one received signals.

Covers MISO and SIMO links (and the scalar channel): the message-bearing
signal occupies a single receive dimension of power ``|h|^2 P`` after
transmit or receive beamforming, and each state eigendirection is aimed
into that dimension at the full amplification cap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelModel
from .errors import NegativeParameter, NotRankOne, ZeroAmax
from .spectral import whiten_state


@dataclass(frozen=True)
class Rank1Inputs:
    """Everything the closed form depends on.

    The bound depends on the channel vector and power only through the
    received signal power ``h_norm_sq_P = |h|^2 P``.
    """

    h_norm_sq_P: float
    v: tuple                 # positive eigenvalues of the state covariance
    a_max: float             # may be math.inf
    kappa: float

    def __post_init__(self):
        if self.h_norm_sq_P < 0.0:
            raise NegativeParameter("received signal power must be nonnegative")
        if any(x <= 0.0 for x in self.v):
            raise NegativeParameter("state eigenvalues must be positive")


def rank_one_bound(inputs: Rank1Inputs) -> float:
    """Exact rank-one upper bound in bits.

    kappa * [sum_i log2((|h|^2 P + 1 + a^2 v_i) / (a^2 v_i))
             + log2(1 + |h|^2 P)] / (m_s + 1)

    With an unbounded cap each sum term vanishes, leaving the pure prelog
    value.  A zero cap is rejected; the caller should use the
    interference-free capacity instead.
    """
    if inputs.a_max == 0.0:
        raise ZeroAmax("rank-one bound needs a_max > 0")
    hp = inputs.h_norm_sq_P
    m_s = len(inputs.v)
    total = math.log2(1.0 + hp)
    if not math.isinf(inputs.a_max):
        a2 = inputs.a_max ** 2
        for vi in inputs.v:
            t = a2 * vi
            total += math.log2((hp + 1.0 + t) / t)
    return inputs.kappa * total / (m_s + 1)


def prelog_reference(inputs: Rank1Inputs) -> float:
    """kappa / (m_s + 1) * log2(1 + |h|^2 P): the pure prelog-loss value."""
    m_s = len(inputs.v)
    return inputs.kappa / (m_s + 1) * math.log2(1.0 + inputs.h_norm_sq_P)


def prelog_gap_certificate(inputs: Rank1Inputs) -> dict:
    """Certify the gap between the exact bound and its prelog reference.

    When every state eigenvalue satisfies
    ``v_i >= (1 + |h|^2 P) / a_max^2`` each sum term of the bound is at
    most one bit, so the gap lies in [0, kappa * m_s / (m_s + 1)].
    Returns ``{"applies": bool, "gap_bound": float}``; the guarantee is
    only made when ``applies`` is true.
    """
    if math.isinf(inputs.a_max):
        raise ZeroAmax("gap certificate requires a finite a_max")
    m_s = len(inputs.v)
    gap_bound = inputs.kappa * m_s / (m_s + 1)
    if inputs.a_max == 0.0:
        return {"applies": False, "gap_bound": gap_bound}
    threshold = (1.0 + inputs.h_norm_sq_P) / inputs.a_max ** 2
    return {"applies": bool(min(inputs.v) >= threshold), "gap_bound": gap_bound}


def rank1_inputs_from_model(model: ChannelModel) -> Rank1Inputs:
    """Reduce a MISO/SIMO model to the closed form's inputs.

    Transmit beamforming (MISO) and receive combining (SIMO) both deliver
    received signal power ``|h|^2 P`` with ``|h|^2 = ||H||_F^2``.
    """
    if model.m_t != 1 and model.m_r != 1:
        raise NotRankOne("closed form applies only when m_t = 1 or m_r = 1")
    h_norm_sq = float(np.linalg.norm(model.H) ** 2)
    v = tuple(float(x) for x in whiten_state(model.Q_s).eigvals)
    return Rank1Inputs(h_norm_sq_P=h_norm_sq * model.P, v=v,
                       a_max=model.a_max, kappa=model.field.kappa)
