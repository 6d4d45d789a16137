"""Independent brute-force verification of the bound machinery.

Three checks live here: a dense-grid minimization over feasible adversary
families (no alignment assumption) for small instances, a numeric check of
the log-det concavity inequality the bound's derivation leans on, and a
cross-check of the general evaluator against the rank-one closed form.
Grids are deterministic so failures replay bit-for-bit.
"""

from __future__ import annotations

import math

import numpy as np

from .channel import ChannelModel, InputCovariance, _hermitize, validate_model
from .errors import InfeasiblePsi, NotRankOne, TooLarge
from .general import inner_inf
from .rank1 import rank1_inputs_from_model, rank_one_bound
from .spectral import logdet_psd, signal_subspace, whiten_state

SEED_LADDER = tuple(range(10))


def _grid_objective_scalar(lam, t_arrays, m_s, M0, kappa):
    """Vectorized objective over grids of diagonal interference powers.

    ``t_arrays`` holds one broadcastable array of interference powers per
    group term for the M0 = 1 case.
    """
    N = len(t_arrays)
    divisible = (m_s % M0 == 0)
    s = lam[0]
    total = np.log2(1.0 + s)
    for i, t in enumerate(t_arrays):
        with np.errstate(divide="ignore"):
            if i == N - 1 and not divisible:
                total = total + np.log2(s + 1.0 + t) - np.log2(t + 0.5) + 2.0 * M0
            else:
                total = total + np.log2(s + 1.0 + t) - np.log2(t)
    return kappa * total / (N + 1)


def brute_force_inner_inf(model: ChannelModel, Q_x, grid_resolution: int) -> float:
    """Grid minimum of the objective over feasible families, in bits.

    Families are parameterized without any alignment assumption: each
    member is ``U^dagger C_i E^dagger`` scaled back from the whitened state
    basis, where ``C_i`` ranges over gains in [0, a_max] and rotation
    angles on [0, pi), with state-orthogonality between members enforced
    by construction.  Guarded to m_r * m_s <= 4, at most two groups and a
    signal rank of at most two.
    """
    if isinstance(Q_x, InputCovariance):
        Q_x = Q_x.Q_x
    sub = signal_subspace(model.H, Q_x)
    M0 = sub.M0
    m_s = model.m_s
    if M0 == 0:
        raise TooLarge("zero-rank signal has no objective to minimize")
    n_groups = -(-m_s // M0)
    if model.m_r * m_s > 4 or n_groups > 2 or M0 > 2:
        raise TooLarge(
            f"instance (m_r={model.m_r}, m_s={m_s}, M0={M0}) exceeds the guard")
    if math.isinf(model.a_max):
        raise TooLarge("grid search needs a finite cap")

    kappa = model.field.kappa
    lam = np.asarray(sub.spectrum)
    v = np.asarray(whiten_state(model.Q_s).eigvals)
    R = int(grid_resolution)
    gains = np.linspace(0.0, model.a_max, R)
    if model.a_max == 0.0:
        return math.inf

    if M0 == 1 and m_s == 1:
        t = gains ** 2 * v[0]
        vals = _grid_objective_scalar(lam, [t], m_s, M0, kappa)
        return float(np.min(vals))

    if M0 == 1 and m_s == 2:
        # two rank-one members, orthogonal under diag(v) by construction
        n_ang = max(int(math.sqrt(R)) * 2, 32)
        theta = np.linspace(0.0, math.pi, n_ang, endpoint=False)
        n_gain = max(int(math.sqrt(R)), 16)
        g = np.linspace(0.0, model.a_max, n_gain)
        c2 = np.cos(theta) ** 2
        s2 = np.sin(theta) ** 2
        w = v[0] * c2 + v[1] * s2
        q = v[0] ** 2 * c2 + v[1] ** 2 * s2
        u = np.where(q > 0, v[0] * v[1] * w / np.where(q > 0, q, 1.0), 0.0)
        g1 = g[:, None, None] ** 2
        g2 = g[None, :, None] ** 2
        t1 = g1 * w[None, None, :]
        t2 = g2 * u[None, None, :]
        vals = _grid_objective_scalar(lam, [t1, t2], m_s, M0, kappa)
        return float(np.min(vals))

    # M0 == 2: a single member (two groups never fit in m_r * m_s <= 4)
    if m_s == 1:
        n_gain = max(int(math.sqrt(R)), 64)
        n_ang = n_gain
        phi = np.linspace(0.0, math.pi, n_ang, endpoint=False)
        t = np.linspace(0.0, model.a_max, n_gain)[:, None] ** 2 * v[0]
        c2 = np.cos(phi) ** 2
        s2 = np.sin(phi) ** 2
        # T = t * [c; s][c; s]^T; uneven branch since m_s < M0
        det_num = ((lam[0] + 1.0 + t * c2) * (lam[1] + 1.0 + t * s2)
                   - (t * np.cos(phi) * np.sin(phi)) ** 2)
        det_den = (t * c2 + 0.5) * (t * s2 + 0.5) - (t * np.cos(phi) * np.sin(phi)) ** 2
        total = (np.log2((1.0 + lam[0]) * (1.0 + lam[1]))
                 + np.log2(det_num) - np.log2(det_den) + 4.0)
        return float(np.min(kappa * total / 2.0))

    # M0 == 2, m_s == 2: one full-rank member C = R(phi) diag(g) R(theta)^T,
    # so T = R(phi) [diag(g) R(theta)^T diag(v) R(theta) diag(g)] R(phi)^T.
    n_gain = max(int(round(R ** 0.25)), 12)
    n_ang = 2 * n_gain
    phi = np.linspace(0.0, math.pi, n_ang, endpoint=False)
    theta = np.linspace(0.0, math.pi, n_ang, endpoint=False)
    gax = np.linspace(0.0, model.a_max, n_gain)
    g1 = gax[:, None, None, None]
    g2 = gax[None, :, None, None]
    ct, st = np.cos(theta), np.sin(theta)
    ct = ct[None, None, :, None]
    st = st[None, None, :, None]
    cp, sp = np.cos(phi), np.sin(phi)
    cp = cp[None, None, None, :]
    sp = sp[None, None, None, :]
    M11 = v[0] * ct ** 2 + v[1] * st ** 2
    M22 = v[0] * st ** 2 + v[1] * ct ** 2
    M12 = (v[0] - v[1]) * ct * st
    K11 = g1 ** 2 * M11
    K22 = g2 ** 2 * M22
    K12 = g1 * g2 * M12
    T11 = cp ** 2 * K11 + sp ** 2 * K22 - 2.0 * cp * sp * K12
    T22 = sp ** 2 * K11 + cp ** 2 * K22 + 2.0 * cp * sp * K12
    T12 = cp * sp * (K11 - K22) + (cp ** 2 - sp ** 2) * K12
    det_t = (g1 * g2) ** 2 * v[0] * v[1]
    det_n = (1.0 + lam[0] + T11) * (1.0 + lam[1] + T22) - T12 ** 2
    with np.errstate(divide="ignore"):
        total = (math.log2((1.0 + lam[0]) * (1.0 + lam[1]))
                 + np.log2(det_n) - np.log2(np.broadcast_to(
                     det_t, det_n.shape)))
    return float(np.min(kappa * total / 2.0))


def feasible_concavity_pairs(seed: int, count: int, max_dim: int = 4):
    """Yield seeded (M, Psi) pairs with M positive definite and M +/- Psi PSD.

    Psi is a random symmetric matrix scaled just inside the feasibility
    boundary (via the whitened spectrum of Psi against M), so the pairs
    exercise the inequality near its tight edge.
    """
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(1, max_dim + 1))
        B = rng.standard_normal((n, n))
        M = B @ B.T + 0.1 * np.eye(n)
        C = rng.standard_normal((n, n))
        Psi = (C + C.T) / 2.0
        L = np.linalg.cholesky(M)
        W = np.linalg.solve(L, np.linalg.solve(L, Psi).T).T
        w = np.linalg.eigvalsh(_hermitize(W))
        t_max = 1.0 / max(float(np.max(np.abs(w))), 1e-12)
        yield M, Psi * (0.95 * t_max * float(rng.uniform()))


def logdet_concavity_check(M, Psi, tol: float = 1e-9) -> bool:
    """Verify log2 det(M+Psi) + log2 det(M-Psi) <= 2 log2 det(M) + tol.

    Raises :class:`InfeasiblePsi` when M +/- Psi is not PSD (the premise
    fails, which says nothing about the inequality).
    """
    M = _hermitize(np.asarray(M, dtype=float) if not np.iscomplexobj(M)
                   else np.asarray(M))
    Psi = _hermitize(np.asarray(Psi, dtype=M.dtype))
    scale = max(float(np.linalg.norm(M)), 1e-300)
    for sign in (1.0, -1.0):
        w = np.linalg.eigvalsh(M + sign * Psi)
        if float(w[0]) < -1e-10 * scale:
            raise InfeasiblePsi(f"M {'+' if sign > 0 else '-'} Psi is not PSD")
    lhs = logdet_psd(M + Psi) + logdet_psd(M - Psi)
    rhs = 2.0 * logdet_psd(M)
    if math.isinf(lhs) and lhs < 0:
        return True
    return lhs <= rhs + tol


def cross_check_rank1(model: ChannelModel) -> dict:
    """Compare the general evaluator against the rank-one closed form.

    Builds the beamforming covariance, runs the matrix-product objective
    through the aligned inner minimization, and reports both values plus
    their absolute difference.
    """
    if model.m_t != 1 and model.m_r != 1:
        raise NotRankOne("cross-check needs m_t = 1 or m_r = 1")
    H = np.asarray(model.H)
    if model.m_t == 1:
        Q_x = np.array([[model.P]], dtype=float)
    else:
        h = H.conj().T  # m_t x 1
        norm_sq = float(np.linalg.norm(h) ** 2)
        if norm_sq == 0.0:
            raise NotRankOne("zero channel has no beamforming direction")
        Q_x = _hermitize(model.P * (h @ h.conj().T) / norm_sq)
    _, general = inner_inf(model, Q_x)
    closed = rank_one_bound(rank1_inputs_from_model(model))
    return {"general": general, "closed_form": closed,
            "delta": abs(general - closed)}


def fixed_equivalence_suite() -> list[dict]:
    """The frozen 20-case suite comparing aligned and brute-force minima.

    Each entry carries a validated model, an input covariance and the grid
    resolution for the brute-force pass.  Cases cover scalar channels over
    a wide cap/power range plus two-dimensional receive subspaces with one
    and two state dimensions.
    """
    cases = []

    def scalar(P, a, v, res=10_000):
        m = validate_model(1, 1, 1, [[1.0]], [[v]], a, P, "real")
        cases.append({"model": m, "Q_x": np.array([[P]]), "resolution": res})

    for P, a, v in [(31.6227766016838, 100.0, 1.0),
                    (31.6227766016838, 1.0, 1.0),
                    (31.6227766016838, 0.316227766, 1.0),
                    (10.0, 3.0, 4.0),
                    (1.0, 10.0, 0.5),
                    (100.0, 0.5, 2.0),
                    (0.5, 2.0, 1.0),
                    (5.0, 5.0, 5.0)]:
        scalar(P, a, v)

    def miso2(P, a, v, h, res=4096):
        m = validate_model(2, 1, 1, [list(h)], [[v]], a, P, "real")
        hvec = np.array(h, dtype=float)
        ns = float(hvec @ hvec)
        Q = P * np.outer(hvec, hvec) / ns
        cases.append({"model": m, "Q_x": Q, "resolution": res})

    miso2(10.0, 2.0, 1.0, (1.0, 0.0))
    miso2(20.0, 4.0, 2.0, (0.6, 0.8))

    def simo_ms2(P, a, v1, v2, res=4096):
        m = validate_model(1, 2, 2, [[1.0], [0.0]],
                           [[v1, 0.0], [0.0, v2]], a, P, "real")
        cases.append({"model": m, "Q_x": np.array([[P]]), "resolution": res})

    simo_ms2(10.0, 2.0, 4.0, 1.0)
    simo_ms2(31.6227766016838, 10.0, 2.0, 0.5)
    simo_ms2(5.0, 1.0, 1.0, 1.0)

    def scalar_ms2(P, a, v1, v2, res=4096):
        m = validate_model(1, 1, 2, [[1.0]],
                           [[v1, 0.0], [0.0, v2]], a, P, "real")
        cases.append({"model": m, "Q_x": np.array([[P]]), "resolution": res})

    scalar_ms2(10.0, 3.0, 4.0, 1.0)
    scalar_ms2(31.6227766016838, 100.0, 1.0, 1.0)

    def mimo22(P, a, v1, v2, d1, d2, res=200_000):
        m = validate_model(2, 2, 2, [[1.0, 0.0], [0.0, 1.0]],
                           [[v1, 0.0], [0.0, v2]], a, P, "real")
        cases.append({"model": m, "Q_x": np.diag([d1, d2]).astype(float),
                      "resolution": res})

    mimo22(10.0, 10.0, 1.0, 1.0, 5.0, 5.0)
    mimo22(10.0, 3.0, 4.0, 1.0, 7.0, 3.0)
    mimo22(4.0, 1.0, 2.0, 0.5, 2.0, 2.0)

    def rx2_ms1(P, a, v, d1, d2, res=40_000):
        m = validate_model(2, 2, 1, [[1.0, 0.0], [0.0, 1.0]], [[v]], a, P, "real")
        cases.append({"model": m, "Q_x": np.diag([d1, d2]).astype(float),
                      "resolution": res})

    rx2_ms1(10.0, 2.0, 1.0, 6.0, 4.0)
    rx2_ms1(8.0, 5.0, 3.0, 4.0, 4.0)

    assert len(cases) == 20
    return cases


def run_equivalence_suite(tolerance: float = 1e-4) -> list[dict]:
    """Run the fixed suite; returns one record per case with the gap."""
    records = []
    for i, case in enumerate(fixed_equivalence_suite()):
        _, aligned = inner_inf(case["model"], case["Q_x"])
        brute = brute_force_inner_inf(case["model"], case["Q_x"],
                                      case["resolution"])
        records.append({
            "case": i,
            "aligned": aligned,
            "brute_force": brute,
            "gap": abs(aligned - brute),
            "ok": bool(abs(aligned - brute) <= tolerance),
        })
    return records
