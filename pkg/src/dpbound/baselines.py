"""Reference rates bracketing the compound bound.

* Interference-free capacity: water-filling over the channel's singular
  values, an upper reference no bound may exceed usefully.
* Worst-case treat-interference-as-noise: the rate a receiver that lumps
  interference into noise is guaranteed, against the aligned saturated
  adversary, with the transmit covariance fixed at the interference-free
  optimum.  A valid achievable rate, deliberately not re-optimized.
"""

from __future__ import annotations

import math

import numpy as np

from .adversary import GroupPartition, build_family, required_group_sizes
from .channel import ChannelModel, _hermitize
from .spectral import logdet_psd, logdet_ratio, signal_subspace, whiten_state


def water_filling(model: ChannelModel) -> tuple[float, np.ndarray]:
    """Interference-free capacity (bits) and the optimizing covariance.

    Maximizes kappa * log2 det(I + H Q H^dagger) subject to tr(Q) <= P by
    water-filling over the squared singular values of H.
    """
    H = np.asarray(model.H)
    P = model.P
    if P == 0.0 or not np.any(H):
        return 0.0, np.zeros((model.m_t, model.m_t), dtype=H.dtype)
    _, s, Vh = np.linalg.svd(H, full_matrices=False)
    gains = s ** 2
    gains = gains[gains > 0]
    k = len(gains)
    powers = np.zeros(k)
    for active in range(k, 0, -1):
        mu = (P + np.sum(1.0 / gains[:active])) / active
        p = mu - 1.0 / gains[:active]
        if p[-1] >= 0.0:
            powers[:active] = p
            break
    cap = model.field.kappa * float(np.sum(np.log2(1.0 + gains[:k] * powers)))
    V = Vh.conj().T[:, :k]
    Q = _hermitize(V @ np.diag(powers) @ V.conj().T)
    return cap, Q


def interference_free_capacity(model: ChannelModel) -> float:
    """Water-filling capacity with no interference, in bits."""
    return water_filling(model)[0]


def _canonical_partition(m_s: int, M0: int) -> GroupPartition:
    sizes = required_group_sizes(m_s, M0)
    groups, pos = [], 0
    for sz in sizes:
        groups.append(tuple(range(pos, pos + sz)))
        pos += sz
    return GroupPartition(groups=tuple(groups))


def tin_worst_case(model: ChannelModel) -> float:
    """Guaranteed rate when interference is treated as noise, in bits.

    Uses the interference-free optimizer for the input covariance and takes
    the minimum Gaussian rate over the aligned, cap-saturated adversary
    family (contiguous grouping of the descending state spectrum).  The
    strongest group aims the largest interference eigenvalues at the
    strongest signal directions, which is the worst aligned member.

    With an unbounded cap the limit is computed analytically: directions
    reachable by interference contribute nothing, so the rate is the
    capacity of the untouched signal directions (zero when interference
    can cover the whole signal subspace).
    """
    _, Q_wf = water_filling(model)
    G = _hermitize(np.asarray(model.H) @ Q_wf @ np.asarray(model.H).conj().T)
    sub = signal_subspace(model.H, Q_wf)
    if sub.M0 == 0:
        return 0.0
    kappa = model.field.kappa
    if model.a_max == 0.0:
        return kappa * float(logdet_ratio(np.eye(model.m_r) + G, np.eye(model.m_r)))

    white = whiten_state(model.Q_s)
    part = _canonical_partition(model.m_s, sub.M0)

    if math.isinf(model.a_max):
        lam = np.asarray(sub.spectrum)
        best = math.inf
        for group in part.groups:
            occupied = len(group)
            rate = kappa * float(np.sum(np.log2(1.0 + lam[occupied:])))
            best = min(best, rate)
        return best

    fam = build_family(model, sub, white, part)
    eye = np.eye(model.m_r)
    best = math.inf
    for A in fam.members:
        Nmat = _hermitize(A @ np.asarray(model.Q_s) @ A.conj().T)
        # det(I + (I+N)^{-1} G) via the noise-whitened signal; stable even
        # when the interference covariance is enormously ill-conditioned
        L = np.linalg.cholesky(eye + Nmat)
        W = np.linalg.solve(L, np.linalg.solve(L, G).conj().T).conj().T
        rate = kappa * float(logdet_psd(eye + _hermitize(W)))
        best = min(best, rate)
    return best
