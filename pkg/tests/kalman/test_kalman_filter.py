#!/usr/bin/env python3

from swimtrack import codetools, kalman
from swimtrack.core import BoundingBox, to_state_form
import numpy as np
import pytest

codetools.setup_logging()


def test_init():
    state = kalman.init(BoundingBox(0, 0, 10, 10))
    np.testing.assert_array_equal(state.x_hat, [5, 5, 100, 1, 0, 0, 0])
    np.testing.assert_array_equal(state.P, 0.01 * np.eye(7))

    state = kalman.init(BoundingBox(10, 20, 4, 2), frame=7)
    np.testing.assert_array_equal(state.x_hat, [12, 21, 8, 2, 0, 0, 0])
    assert state.frame == 7


def test_predict_state():
    state = kalman.init(BoundingBox(0, 0, 10, 10))
    assert np.array_equal(kalman.predict(state).x_hat, state.x_hat)

    moving = state._replace(x_hat=np.array([5., 5, 100, 1, 2, -1, 3]))
    pred = kalman.predict(moving)
    np.testing.assert_allclose(pred.x_hat, [7, 4, 103, 1, 2, -1, 3])
    assert pred.frame == 1
    # the input is left alone
    np.testing.assert_array_equal(moving.x_hat, [5, 5, 100, 1, 2, -1, 3])


def test_predict_covariance():
    """P = cI goes to c A A^T + Q, multiplied out by hand"""
    c = 0.3
    config = kalman.KalmanConfig(q_scale=0.05)
    state = kalman.KalmanTrackState(
        np.array([5., 5, 100, 1, 0, 0, 0]), c * np.eye(7), 0, config)

    expected = np.zeros((7, 7))
    for i in range(7):
        expected[i, i] = c + 0.05
    for i in range(3):
        # position picks up its velocity variance and the two correlate
        expected[i, i] += c
        expected[i, i + 4] = expected[i + 4, i] = c

    np.testing.assert_allclose(kalman.predict(state).P, expected)


def test_predict_keeps_area_positive():
    state = kalman.init(BoundingBox(0, 0, 10, 10))
    shrinking = state._replace(x_hat=np.array([5., 5, 100, 1, 0, 0, -150]))
    pred = kalman.predict(shrinking)
    assert pred.x_hat[2] == 100
    assert pred.x_hat[6] == 0


def test_update_half_gain():
    """With P equal to R the lifted gain is one half"""
    config = kalman.KalmanConfig(p0_scale=0.1, r_scale=0.1)
    state = kalman.init(BoundingBox(0, 0, 10, 10), config)
    z = BoundingBox(4, -3, 12, 8)

    new = kalman.update(state, z)
    expected = (np.asarray(state.x_hat[:4]) +
                np.asarray(to_state_form(z))) / 2.0
    np.testing.assert_allclose(new.x_hat[:4], expected)
    np.testing.assert_allclose(new.x_hat[4:], 0)
    np.testing.assert_allclose(new.P, 0.05 * np.eye(7))


def test_update_converges_monotonically():
    state = kalman.init(BoundingBox(0, 0, 10, 10))
    z_box = BoundingBox(4, -3, 12, 8)
    z = np.asarray(to_state_form(z_box))

    errors = [np.linalg.norm(state.x_hat[:4] - z)]
    for _ in range(50):
        state = kalman.update(state, z_box)
        errors.append(np.linalg.norm(state.x_hat[:4] - z))

    assert all(b < a for a, b in zip(errors, errors[1:]))
    assert errors[-1] < 0.2 * errors[0]


@pytest.mark.parametrize('measurement', ['lifted', 'projected'])
def test_constant_velocity_tracking(measurement):
    """Noiseless constant velocity: prediction locks on, P stays valid"""
    config = kalman.KalmanConfig(measurement=measurement)

    def truth(k):
        return BoundingBox(100 + 2.0 * k, 50 + 1.0 * k, 120, 40)

    state = kalman.init(truth(0), config)
    for k in range(1, 100):
        state = kalman.predict(state)
        assert np.max(np.abs(state.P - state.P.T)) < 1e-9
        assert np.all(np.diag(state.P) >= 0)

        if k > 20:
            u, v = state.x_hat[:2]
            cu, cv = truth(k).center
            assert abs(u - cu) < 0.5
            assert abs(v - cv) < 0.5

        state = kalman.update(state, truth(k))
        assert np.max(np.abs(state.P - state.P.T)) < 1e-9
        assert np.all(np.diag(state.P) >= 0)

    assert state.box.w == pytest.approx(120, abs=1e-6)
    assert state.box.h == pytest.approx(40, abs=1e-6)


def test_projected_update_moves_velocity():
    config = kalman.KalmanConfig(measurement='projected')
    state = kalman.predict(kalman.init(BoundingBox(0, 0, 10, 10), config))
    new = kalman.update(state, BoundingBox(2, 0, 10, 10))

    assert 5 < new.x_hat[0] < 7
    assert new.x_hat[4] > 0
    assert config.R.shape == (4, 4)


def test_singular_gain():
    with pytest.raises(kalman.SingularMatrixError):
        kalman._gain(np.zeros((4, 4)), np.ones((7, 4)))


def test_config():
    config = kalman.KalmanConfig.from_dict({'q_scale': 0.5})
    assert config.q_scale == 0.5
    assert config.to_dict()['measurement'] == 'lifted'

    with pytest.raises(kalman.InvalidKalmanConfigError):
        kalman.KalmanConfig(r_scale=0)
    with pytest.raises(kalman.InvalidKalmanConfigError):
        kalman.KalmanConfig(measurement='sideways')
    with pytest.raises(codetools.InvalidConfigError):
        kalman.KalmanConfig.from_dict({'q': 1})
