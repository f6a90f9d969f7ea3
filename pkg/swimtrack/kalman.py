"""Linear constant-velocity Kalman filter over the box state
`[u, v, s, r, u_dot, v_dot, s_dot]`.

Each track owns one `KalmanTrackState`; `predict()` and `update()` return new
states and never modify their input.
"""

from public import public
from swimtrack.codetools import (
    InvalidConfigError, SwimtrackError, check_config_keys)
from swimtrack.core import from_state_form, to_state_form
import collections
import numpy as np
import textwrap

DIM_X = 7
DIM_Z = 4

# s and r are kept above this after an update so the box stays valid
STATE_FLOOR = 1e-6

MEASUREMENT_MODELS = ('lifted', 'projected')

# identity plus the velocity coupling u += u_dot, v += v_dot, s += s_dot
TRANSITION = np.eye(DIM_X)
TRANSITION[0, 4] = TRANSITION[1, 5] = TRANSITION[2, 6] = 1.0
TRANSITION.flags.writeable = False

OBSERVATION = np.eye(DIM_Z, DIM_X)
OBSERVATION.flags.writeable = False


@public
class InvalidKalmanConfigError(InvalidConfigError):
    exit_code = 2


@public
class SingularMatrixError(SwimtrackError):
    exit_code = 1


_KalmanConfig = collections.namedtuple(
    'KalmanConfig', ['p0_scale', 'q_scale', 'r_scale', 'measurement'])


@public
class KalmanConfig(_KalmanConfig):
    """Noise model of the box filter.

    Parameters
    ----------
    p0_scale: float
        Initial error covariance is `p0_scale * I`.

    q_scale: float
        Process noise covariance is `q_scale * I`.

    r_scale: float
        Measurement noise covariance is `r_scale * I`.

    measurement: str
        `lifted` feeds a 7-vector measurement whose derivative components are
        copied from the prediction, so the gain is `P(P + R)^-1` over the full
        state. `projected` uses the 4x7 observation matrix of SORT instead.
    """
    __slots__ = ()

    def __new__(cls, p0_scale=1e-2, q_scale=1e-2, r_scale=1e-1,
                measurement='lifted'):
        scales = dict(p0_scale=p0_scale, q_scale=q_scale, r_scale=r_scale)
        for name, value in scales.items():
            if not (np.isfinite(value) and value > 0):
                raise InvalidKalmanConfigError(
                    "{n} must be positive: {v}".format(n=name, v=value))
        if measurement not in MEASUREMENT_MODELS:
            raise InvalidKalmanConfigError(textwrap.dedent("""\
                unknown measurement model: {m}
                  expected one of: {ok}\
                """).format(m=measurement, ok=', '.join(MEASUREMENT_MODELS)))
        return super(KalmanConfig, cls).__new__(
            cls, float(p0_scale), float(q_scale), float(r_scale), measurement)

    @property
    def Q(self):
        return self.q_scale * np.eye(DIM_X)

    @property
    def R(self):
        dim = DIM_X if self.measurement == 'lifted' else DIM_Z
        return self.r_scale * np.eye(dim)

    @classmethod
    def from_dict(cls, data):
        """Build from a JSON config object with the same field names."""
        check_config_keys(data, cls._fields, 'kalman')
        try:
            return cls(**data)
        except (TypeError, ValueError) as e:
            raise InvalidKalmanConfigError(
                "bad kalman config: {e}".format(e=e)) from None

    def to_dict(self):
        return dict(self._asdict())


_KalmanTrackState = collections.namedtuple(
    'KalmanTrackState', ['x_hat', 'P', 'frame', 'config'])


@public
class KalmanTrackState(_KalmanTrackState):
    """State estimate `x_hat` (7-vector), error covariance `P` (7x7), the frame
    the estimate refers to and the `KalmanConfig` the track runs with."""
    __slots__ = ()

    @property
    def box(self):
        """The estimate as a `BoundingBox`."""
        u, v, s, r = self.x_hat[:4]
        return from_state_form(u, v, max(s, STATE_FLOOR), max(r, STATE_FLOOR))


def _symmetrize(P):
    return (P + P.T) / 2.0


@public
def init(detection_box, config=None, frame=0):
    """Start a track at a detection with zero derivatives.

    Parameters
    ----------
    detection_box: BoundingBox
    config: KalmanConfig, optional
    frame: int
        Frame of the detection.

    Returns
    -------
    state: KalmanTrackState
    """
    if config is None:
        config = KalmanConfig()
    x_hat = np.zeros(DIM_X)
    x_hat[:4] = to_state_form(detection_box)
    P = config.p0_scale * np.eye(DIM_X)
    return KalmanTrackState(x_hat, P, int(frame), config)


@public
def predict(state):
    """Advance one frame: `x = A x`, `P = A P A^T + Q`.

    The aspect ratio has no derivative so it is carried over unchanged. If
    the predicted area would not be positive the area velocity is zeroed
    first.
    """
    x_hat = state.x_hat.copy()
    if x_hat[2] + x_hat[6] <= 0:
        x_hat[6] = 0.0

    x_pred = TRANSITION @ x_hat
    P_pred = TRANSITION @ state.P @ TRANSITION.T + state.config.Q
    return state._replace(x_hat=x_pred, P=_symmetrize(P_pred),
                          frame=state.frame + 1)


def _gain(S, PHt):
    # K = PHt S^-1, solved as S^T K^T = PHt^T
    try:
        return np.linalg.solve(S.T, PHt.T).T
    except np.linalg.LinAlgError as e:
        raise SingularMatrixError(textwrap.dedent("""\
            innovation covariance is not invertible
              Message: {e}\
            """).format(e=e)) from None


@public
def update(state, measurement):
    """Correct a predicted state with a detected box.

    In the `lifted` model the measurement `(u, v, s, r)` is extended with the
    predicted derivatives, giving zero innovation on components 4-6, and

        K = P(P + R)^-1,  x = x + K(z - x),  P = (I - K)P

    over all seven components. In the `projected` model the standard 4x7
    observation matrix `H` is used.

    Raises
    ------
    SingularMatrixError
        If the innovation covariance cannot be inverted.
    """
    config = state.config
    x_pred = state.x_hat
    P_pred = state.P
    z = np.asarray(to_state_form(measurement), dtype=float)

    if config.measurement == 'lifted':
        z_full = np.concatenate([z, x_pred[4:]])
        K = _gain(P_pred + config.R, P_pred)
        x_new = x_pred + K @ (z_full - x_pred)
        P_new = (np.eye(DIM_X) - K) @ P_pred
    else:
        H = OBSERVATION
        PHt = P_pred @ H.T
        K = _gain(H @ PHt + config.R, PHt)
        x_new = x_pred + K @ (z - H @ x_pred)
        P_new = (np.eye(DIM_X) - K @ H) @ P_pred

    x_new[2] = max(x_new[2], STATE_FLOOR)
    x_new[3] = max(x_new[3], STATE_FLOOR)

    return state._replace(x_hat=x_new, P=_symmetrize(P_new))
