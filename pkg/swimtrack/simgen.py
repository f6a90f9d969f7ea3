"""Synthetic race generator.

Every lane holds one swimmer moving at constant speed along the lane. Its
s-value is a sinusoid with range [0, 1] at the lane's stroke frequency,
flattened to the neutral value inside turn windows. Detections are the ground
truth boxes with Gaussian centre jitter, random drops and Poisson clutter.
"""

from public import public
from swimtrack.codetools import InvalidConfigError, check_config_keys, info
from swimtrack.core import (
    NEUTRAL_SVALUE, SWIMMING, BoundingBox, Detection, SValueSeries, Track)
from swimtrack.stroke import MAX_STROKE_HZ
import collections
import math
import numpy as np
import textwrap

DEFAULT_STROKE_FREQS = (0.5, 0.625, 0.75, 0.8, 1.0, 1.2, 1.25, 1.5)

# added to every default lane phase; keeps the mean crossings of the default
# frequencies off whole frames at 30 fps
PHASE_OFFSET = math.pi / 60

TURNING = 'turning'

_FIELDS = [
    'n_lanes', 'duration_s', 'fps', 'swimmer_speed', 'stroke_freq_hz',
    'det_noise_px', 'miss_rate', 'fp_rate', 's_noise', 'turn_windows', 'seed',
    'frame_width', 'frame_height', 'box_width', 'box_height', 'start_x',
    'phases',
]

_SimConfig = collections.namedtuple('SimConfig', _FIELDS)


def _bad(msg, **kwargs):
    return InvalidConfigError(textwrap.dedent(msg).format(**kwargs))


def _per_lane(value, n_lanes, name):
    values = np.atleast_1d(np.asarray(value, dtype=float))
    if values.size == 1:
        values = np.repeat(values, n_lanes)
    if values.size != n_lanes:
        raise _bad("""\
            {name} needs one value per lane
              lanes: {n}
              values: {k}\
            """, name=name, n=n_lanes, k=values.size)
    return tuple(float(v) for v in values)


@public
class SimConfig(_SimConfig):
    """Parameters of a synthetic race.

    Parameters
    ----------
    n_lanes: int
        Lanes are numbered 1..n_lanes from the top of the frame.
    duration_s: float
    fps: float
    swimmer_speed: float
        Pixels per frame, left to right.
    stroke_freq_hz: float or list of float, optional
        Strokes per second, one value for every lane or one per lane.
        Defaults to a spread of 0.5-1.5 Hz.
    det_noise_px: float
        Standard deviation of the detection centre jitter.
    miss_rate: float
        Probability that a detection is dropped.
    fp_rate: float
        Expected clutter detections per frame.
    s_noise: float
        Standard deviation of the noise on the predicted s-values.
    turn_windows: list of (start_s, end_s)
        Intervals in which no lane is swimming.
    seed: int, optional
    frame_width, frame_height: float
    box_width, box_height: float
    start_x: float
        Left edge of every box in frame 0.
    phases: float or list of float, optional
        Sinusoid phase per lane in radians; default
        `2 pi (lane - 1) / n + PHASE_OFFSET`.

    Raises
    ------
    InvalidConfigError
    """
    __slots__ = ()

    def __new__(cls, n_lanes=8, duration_s=30.0, fps=30.0, swimmer_speed=0.9,
                stroke_freq_hz=None, det_noise_px=0.0, miss_rate=0.0,
                fp_rate=0.0, s_noise=0.0, turn_windows=(), seed=0,
                frame_width=1920.0, frame_height=1080.0, box_width=120.0,
                box_height=40.0, start_x=20.0, phases=None):
        try:
            if int(n_lanes) != n_lanes or n_lanes < 1:
                raise _bad("n_lanes must be a positive integer: {n}",
                           n=n_lanes)
            n_lanes = int(n_lanes)

            if stroke_freq_hz is None:
                stroke_freq_hz = np.resize(DEFAULT_STROKE_FREQS, n_lanes)
            freqs = _per_lane(stroke_freq_hz, n_lanes, 'stroke_freq_hz')
            if phases is None:
                phases = [2 * math.pi * k / n_lanes + PHASE_OFFSET
                          for k in range(n_lanes)]
            phases = _per_lane(phases, n_lanes, 'phases')

            positive = dict(duration_s=duration_s, fps=fps,
                            frame_width=frame_width,
                            frame_height=frame_height, box_width=box_width,
                            box_height=box_height)
            positive = {k: float(v) for k, v in positive.items()}
            scalars = dict(swimmer_speed=swimmer_speed,
                           det_noise_px=det_noise_px, miss_rate=miss_rate,
                           fp_rate=fp_rate, s_noise=s_noise, start_x=start_x)
            scalars = {k: float(v) for k, v in scalars.items()}
            windows = tuple((float(a), float(b)) for a, b in turn_windows)
            if seed is not None:
                if int(seed) != seed:
                    raise _bad("seed must be an integer: {s}", s=seed)
                seed = int(seed)
        except (TypeError, ValueError) as e:
            raise InvalidConfigError(
                "bad simulation config: {e}".format(e=e)) from None

        for name, value in positive.items():
            if not (math.isfinite(value) and value > 0):
                raise _bad("{k} must be positive: {v}", k=name, v=value)
        for name in ('det_noise_px', 'fp_rate', 's_noise'):
            if not scalars[name] >= 0:
                raise _bad("{k} must not be negative: {v}", k=name,
                           v=scalars[name])
        if not 0.0 <= scalars['miss_rate'] <= 1.0:
            raise _bad("miss_rate outside [0, 1]: {v}",
                       v=scalars['miss_rate'])
        for lane, f in enumerate(freqs, start=1):
            if not 0 < f < MAX_STROKE_HZ:
                raise _bad("""\
                    stroke frequency of lane {lane} outside (0, {m}) Hz
                      got: {f}\
                    """, lane=lane, m=MAX_STROKE_HZ, f=f)
        for a, b in windows:
            if not 0 <= a < b:
                raise _bad("turn window must satisfy 0 <= start < end: "
                           "({a}, {b})", a=a, b=b)

        return super(SimConfig, cls).__new__(
            cls,
            n_lanes=n_lanes,
            stroke_freq_hz=freqs,
            turn_windows=windows,
            seed=seed,
            phases=phases,
            **positive,
            **scalars,
        )

    @classmethod
    def from_dict(cls, data):
        """Build from a JSON config object with the same field names."""
        check_config_keys(data, cls._fields, 'simulation')
        return cls(**data)

    def to_dict(self):
        d = dict(self._asdict())
        d['stroke_freq_hz'] = list(self.stroke_freq_hz)
        d['phases'] = list(self.phases)
        d['turn_windows'] = [list(w) for w in self.turn_windows]
        return d

    @property
    def n_frames(self):
        return int(round(self.duration_s * self.fps))

    def lane_center_y(self, lane):
        return (lane - 0.5) * self.frame_height / self.n_lanes

    def in_turn(self, t):
        """Boolean mask of the times `t` (seconds) inside a turn window."""
        t = np.asarray(t, dtype=float)
        mask = np.zeros(t.shape, dtype=bool)
        for a, b in self.turn_windows:
            mask |= (t >= a) & (t < b)
        return mask


SimResult = collections.namedtuple(
    'SimResult',
    ['ground_truth', 'detections', 'svalues', 'predicted_svalues',
     'true_peaks', 'config'])
SimResult.__doc__ = """\
`ground_truth` is one Track per lane (track id = lane), `detections` the noisy
detector output in frame order, `svalues` and `predicted_svalues` map lane to
the clean and the noisy SValueSeries, and `true_peaks` maps lane to the
fractional frames of the sinusoid maxima inside swimming time."""
public(SimResult)


def _true_peaks(config, freq, phase):
    # maxima where 2 pi f t + phase = pi / 2 + 2 pi k
    t0 = (math.pi / 2 - phase) / (2 * math.pi * freq)
    period = 1.0 / freq
    last_t = (config.n_frames - 1) / config.fps
    k_lo = math.ceil(-t0 / period)
    k_hi = math.floor((last_t - t0) / period)
    t = t0 + period * np.arange(k_lo, k_hi + 1)
    t = t[(t >= 0) & (t <= last_t)]
    t = t[~config.in_turn(t)]
    return [float(v) for v in t * config.fps]


@public
def generate(config):
    """Simulate a race.

    Parameters
    ----------
    config: SimConfig

    Returns
    -------
    result: SimResult
        Identical for identical configs with the same seed.
    """
    det_rng, clutter_rng, s_rng = [
        np.random.default_rng(s)
        for s in np.random.SeedSequence(config.seed).spawn(3)
    ]

    n = config.n_frames
    frames = np.arange(n)
    t = frames / config.fps
    turning = config.in_turn(t)
    swimming = ~turning
    labels = [TURNING if tu else SWIMMING for tu in turning]

    ground_truth = []
    svalues = {}
    predicted = {}
    true_peaks = {}
    for lane in range(1, config.n_lanes + 1):
        freq = config.stroke_freq_hz[lane - 1]
        phase = config.phases[lane - 1]

        x = config.start_x + config.swimmer_speed * frames
        y = config.lane_center_y(lane) - config.box_height / 2.0
        entries = [(int(f), BoundingBox(xf, y, config.box_width,
                                        config.box_height))
                   for f, xf in zip(frames, x)]
        ground_truth.append(Track(lane, entries, source='ground_truth',
                                  lane=lane, labels=labels))

        s = 0.5 + 0.5 * np.sin(2 * math.pi * freq * t + phase)
        s = np.clip(s, 0.0, 1.0)
        s[turning] = NEUTRAL_SVALUE
        noisy = np.clip(s + s_rng.normal(0.0, config.s_noise, n), 0.0, 1.0)
        noisy[turning] = NEUTRAL_SVALUE

        svalues[lane] = SValueSeries(lane, config.fps,
                                     zip(frames, s, swimming))
        predicted[lane] = SValueSeries(lane, config.fps,
                                       zip(frames, noisy, swimming))
        true_peaks[lane] = _true_peaks(config, freq, phase)

    detections = []
    for f in frames:
        for gt in ground_truth:
            _, box = gt.entries[f]
            if config.miss_rate and det_rng.random() < config.miss_rate:
                continue
            confidence = 1.0
            if config.det_noise_px:
                dx, dy = det_rng.normal(0.0, config.det_noise_px, 2)
                box = BoundingBox(box.x + dx, box.y + dy, box.w, box.h)
                confidence = 1.0 - min(abs(det_rng.normal(0.0, 0.1)), 0.5)
            detections.append(Detection(int(f), box, confidence,
                                        labels[f], lane=gt.lane))

        for _ in range(clutter_rng.poisson(config.fp_rate)):
            cx = clutter_rng.uniform(0.0,
                                     config.frame_width - config.box_width)
            cy = clutter_rng.uniform(0.0,
                                     config.frame_height - config.box_height)
            box = BoundingBox(cx, cy, config.box_width, config.box_height)
            detections.append(Detection(int(f), box,
                                        clutter_rng.uniform(0.05, 0.6)))

    info("simulated {n} lane(s) over {f} frame(s): {d} detection(s)".format(
        n=config.n_lanes, f=n, d=len(detections)))

    return SimResult(
        ground_truth=ground_truth,
        detections=detections,
        svalues=svalues,
        predicted_svalues=predicted,
        true_peaks=true_peaks,
        config=config,
    )
