import math

import numpy as np
import pytest

from dpbound import (
    interference_free_capacity,
    tin_worst_case,
    validate_model,
    water_filling,
)

from conftest import rand_model

P15 = 10.0 ** 1.5


def test_scalar_interference_free():
    m = validate_model(1, 1, 1, [[1.0]], [[1.0]], 100.0, P15)
    assert interference_free_capacity(m) == pytest.approx(2.5139038366752597,
                                                          abs=1e-12)


def test_dead_channel():
    m = validate_model(2, 2, 1, np.zeros((2, 2)), [[1.0]], 1.0, 5.0)
    assert interference_free_capacity(m) == 0.0
    assert tin_worst_case(m) == 0.0


def test_water_filling_hand_case():
    m = validate_model(2, 2, 1, np.diag([2.0, 1.0]), [[1.0]], 1.0, 3.0)
    cap, Q = water_filling(m)
    assert cap == pytest.approx(2.0874628412503395, abs=1e-12)
    assert np.allclose(np.diag(Q), [1.875, 1.125], atol=1e-10)
    assert np.trace(Q) == pytest.approx(3.0)


def test_water_filling_beats_grid():
    # 1-D oracle over the power split for H = diag(2, 1), P = 3
    m = validate_model(2, 2, 1, np.diag([2.0, 1.0]), [[1.0]], 1.0, 3.0)
    cap, _ = water_filling(m)
    grid = np.linspace(0.0, 3.0, 1001)
    rates = 0.5 * (np.log2(1 + 4 * grid) + np.log2(1 + (3 - grid)))
    assert cap >= float(rates.max()) - 1e-12
    assert cap == pytest.approx(float(rates.max()), abs=1e-5)


def test_tin_scalar_values():
    strong = validate_model(1, 1, 1, [[1.0]], [[1.0]], 100.0, P15)
    assert tin_worst_case(strong) == pytest.approx(
        0.5 * math.log2(1 + P15 / 10001.0), abs=1e-9)
    weak = validate_model(1, 1, 1, [[1.0]], [[1.0]], math.sqrt(0.1), P15)
    assert tin_worst_case(weak) == pytest.approx(
        0.5 * math.log2(1 + P15 / 1.1), abs=1e-9)


def test_tin_zero_cap_equals_interference_free():
    m = validate_model(2, 2, 2, [[1.0, 0.2], [0.0, 0.8]],
                       np.diag([2.0, 1.0]), 0.0, 4.0)
    assert tin_worst_case(m) == pytest.approx(interference_free_capacity(m),
                                              abs=1e-12)


def test_tin_unbounded_cap_full_coverage():
    m = validate_model(2, 2, 2, np.eye(2), np.eye(2), math.inf, 10.0)
    assert tin_worst_case(m) == 0.0


def test_tin_unbounded_cap_partial_coverage():
    # one state dimension cannot cover a two-dimensional signal subspace
    m = validate_model(2, 2, 1, np.eye(2), [[1.0]], math.inf, 10.0)
    analytic = tin_worst_case(m)
    assert analytic > 0.0
    big = validate_model(2, 2, 1, np.eye(2), [[1.0]], 1e7, 10.0)
    assert tin_worst_case(big) == pytest.approx(analytic, abs=1e-4)


def test_tin_never_exceeds_interference_free(rng):
    for _ in range(40):
        m = rand_model(rng)
        assert tin_worst_case(m) <= interference_free_capacity(m) + 1e-9


def test_interference_free_concave_nondecreasing_in_power():
    H = np.array([[1.0, 0.3], [0.1, 0.7]])
    grid = np.linspace(0.5, 20.0, 40)
    caps = [interference_free_capacity(
        validate_model(2, 2, 1, H, [[1.0]], 1.0, float(p))) for p in grid]
    diffs = np.diff(caps)
    assert np.all(diffs >= -1e-9)
    assert np.all(np.diff(diffs) <= 1e-9)  # concavity via second differences
