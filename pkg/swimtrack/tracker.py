"""SORT style track lifecycle over a stream of per-frame detections."""

from public import public
from swimtrack import kalman
from swimtrack.assoc import DEFAULT_IOU_MIN, associate
from swimtrack.codetools import (
    InvalidConfigError, SwimtrackError, check_config_keys, debug, info)
from swimtrack.core import Track
from swimtrack.kalman import KalmanConfig
from swimtrack.progressbar import iter_with_bar
import collections
import itertools
import textwrap


@public
class InvalidTrackerConfigError(InvalidConfigError):
    pass


@public
class OutOfOrderFrameError(SwimtrackError):
    exit_code = 3


_TrackerConfig = collections.namedtuple(
    'TrackerConfig',
    ['iou_min', 'max_age', 'min_hits', 'kalman', 'persist_confirmed'])


@public
class TrackerConfig(_TrackerConfig):
    """Track lifecycle parameters.

    Parameters
    ----------
    iou_min: float
        Association gate; pairs below it are not matched.

    max_age: int
        A track is dropped once it has gone more than `max_age` frames
        without a matching detection.

    min_hits: int
        Consecutive matches before a track is reported.

    kalman: KalmanConfig

    persist_confirmed: bool
        Keep reporting a track on every matched frame once it has reached
        `min_hits` consecutive matches, instead of waiting for a fresh streak
        after each miss.
    """
    __slots__ = ()

    def __new__(cls, iou_min=DEFAULT_IOU_MIN, max_age=10, min_hits=3,
                kalman=None, persist_confirmed=True):
        if kalman is None:
            kalman = KalmanConfig()
        try:
            iou_min = float(iou_min)
            if int(max_age) != max_age or int(min_hits) != min_hits:
                raise ValueError("max_age and min_hits must be integers")
        except (TypeError, ValueError) as e:
            raise InvalidTrackerConfigError(str(e)) from None

        if not 0.0 <= iou_min <= 1.0:
            raise InvalidTrackerConfigError(
                "iou_min outside [0, 1]: {v}".format(v=iou_min))
        if max_age < 1 or min_hits < 1:
            raise InvalidTrackerConfigError(textwrap.dedent("""\
                max_age and min_hits must be at least 1
                  max_age: {a}
                  min_hits: {h}\
                """).format(a=max_age, h=min_hits))

        return super(TrackerConfig, cls).__new__(
            cls, iou_min, int(max_age), int(min_hits), kalman,
            bool(persist_confirmed))

    @classmethod
    def from_dict(cls, data):
        """Build from a JSON config object; `kalman` may be a nested object."""
        check_config_keys(data, cls._fields, 'tracker')
        data = dict(data)
        if 'kalman' in data:
            data['kalman'] = KalmanConfig.from_dict(data['kalman'])
        return cls(**data)

    def to_dict(self):
        d = dict(self._asdict())
        d['kalman'] = self.kalman.to_dict()
        return d


class LiveTrack(object):
    """Mutable bookkeeping of one track while the tracker runs."""

    def __init__(self, track_id, kalman_state):
        self.track_id = track_id
        self.kalman_state = kalman_state
        self.hit_streak = 1
        self.frames_since_update = 0
        self.confirmed = False
        self.history = []
        self.labels = []
        self.lanes = collections.Counter()
        self._last_label = None

    def __repr__(self):
        return "LiveTrack(id={i}, streak={s}, missed={m}, len={n})".format(
            i=self.track_id, s=self.hit_streak, m=self.frames_since_update,
            n=len(self.history))

    @property
    def box(self):
        return self.kalman_state.box

    def predict(self):
        self.kalman_state = kalman.predict(self.kalman_state)
        return self.kalman_state.box

    def hit(self, detection, min_hits):
        self.kalman_state = kalman.update(self.kalman_state, detection.box)
        self.hit_streak += 1
        self.frames_since_update = 0
        if self.hit_streak >= min_hits:
            self.confirmed = True
        self.observe(detection)

    def miss(self):
        self.hit_streak = 0
        self.frames_since_update += 1

    def observe(self, detection):
        self._last_label = detection.class_label
        if detection.lane is not None:
            self.lanes[detection.lane] += 1

    def record(self, frame):
        box = self.kalman_state.box
        self.history.append((frame, box))
        self.labels.append(self._last_label)
        return box

    @property
    def lane(self):
        if not self.lanes:
            return None
        # ties go to the smallest lane number
        top = max(self.lanes.values())
        return min(k for k, v in self.lanes.items() if v == top)

    def to_track(self):
        return Track(self.track_id, self.history, source='tracker',
                     lane=self.lane, labels=self.labels)


@public
class SortTracker(object):
    """Detect, predict, associate and update loop for one video sequence.

    Frames must be fed in strictly increasing order. A frame number that
    skips ahead advances every live track through the missing frames as
    misses.

    Parameters
    ----------
    config: TrackerConfig, optional
    """

    def __init__(self, config=None):
        self.config = config if config is not None else TrackerConfig()
        self._ids = itertools.count(1)
        self._live = []
        self._emitted = {}
        self.last_frame = None
        self.frame_count = 0

    @property
    def live_tracks(self):
        return list(self._live)

    def _advance(self):
        """Predict every live track one frame; return the predicted boxes."""
        self.frame_count += 1
        return [t.predict() for t in self._live]

    def _retire(self):
        keep = []
        for t in self._live:
            if t.frames_since_update > self.config.max_age:
                debug("retired track {t}".format(t=t))
            else:
                keep.append(t)
        self._live = keep

    def step(self, frame, detections):
        """Process the detections of one frame.

        Parameters
        ----------
        frame: int
        detections: list of Detection

        Returns
        -------
        emitted: list of (track_id, BoundingBox)
            Estimated boxes of the tracks reported in this frame.

        Raises
        ------
        OutOfOrderFrameError
            If `frame` is not larger than the previous frame.
        """
        frame = int(frame)
        if self.last_frame is not None and frame <= self.last_frame:
            raise OutOfOrderFrameError(textwrap.dedent("""\
                frames must be strictly increasing
                  previous: {p}
                  got: {f}\
                """).format(p=self.last_frame, f=frame))

        if self.last_frame is not None:
            for _ in range(frame - self.last_frame - 1):
                self._advance()
                for t in self._live:
                    t.miss()
                self._retire()
        self.last_frame = frame

        predicted = self._advance()
        result = associate(predicted, [d.box for d in detections],
                           iou_min=self.config.iou_min)

        for ti, di in result.matches:
            self._live[ti].hit(detections[di], self.config.min_hits)
        for ti in result.unmatched_tracks:
            self._live[ti].miss()
        for di in result.unmatched_detections:
            det = detections[di]
            state = kalman.init(det.box, self.config.kalman, frame=frame)
            t = LiveTrack(next(self._ids), state)
            t.observe(det)
            self._live.append(t)
            debug("frame {f}: new track {i}".format(f=frame, i=t.track_id))

        emitted = []
        for t in self._live:
            if t.frames_since_update > 0:
                continue
            if (t.hit_streak >= self.config.min_hits or
                    (self.config.persist_confirmed and t.confirmed) or
                    self.frame_count <= self.config.min_hits):
                emitted.append((t.track_id, t.record(frame)))
                self._emitted[t.track_id] = t

        self._retire()
        return emitted

    def finalize(self):
        """Return every track that was reported at least once, by id.

        Returns
        -------
        tracks: list of Track
        """
        tracks = [self._emitted[k].to_track() for k in sorted(self._emitted)]
        info("{n} track(s) over {f} frame(s)".format(
            n=len(tracks), f=self.frame_count))
        return tracks


@public
def crop_rects(track, pad=0, bounds=None):
    """Per-frame crop rectangles of a track's sub-video.

    Parameters
    ----------
    track: Track
    pad: float
        Pixels added on every side of each box.
    bounds: (width, height), optional
        Frame size to clamp the rectangles to.

    Returns
    -------
    rects: list of (frame, BoundingBox)
    """
    if pad < 0:
        raise ValueError("pad must not be negative: {p}".format(p=pad))

    rects = []
    for frame, box in track.entries:
        if pad:
            box = box.expand(pad)
        if bounds is not None:
            box = box.clamp(*bounds)
        rects.append((frame, box))
    return rects


@public
def track_detections(detections, config=None, progress=False):
    """Run a `SortTracker` over a detection stream.

    Parameters
    ----------
    detections: iterable of Detection
        Grouped by frame in stream order; frame numbers must not decrease.
    config: TrackerConfig, optional
    progress: bool
        Draw an ETA bar over the frames.

    Returns
    -------
    tracks: list of Track

    Raises
    ------
    OutOfOrderFrameError
    """
    frames = []
    for det in detections:
        if frames and det.frame == frames[-1][0]:
            frames[-1][1].append(det)
        elif frames and det.frame < frames[-1][0]:
            raise OutOfOrderFrameError(textwrap.dedent("""\
                detections are not grouped by increasing frame
                  frame {f} follows frame {p}\
                """).format(f=det.frame, p=frames[-1][0]))
        else:
            frames.append((det.frame, [det]))

    tracker = SortTracker(config)
    for frame, dets in iter_with_bar(frames, 'tracking', len(frames),
                                     enabled=progress):
        tracker.step(frame, dets)
    return tracker.finalize()
