"""Geometry primitives and value types shared by the tracking and stroke code.

Boxes are stored in top-left + size form, which is what detection files use.
The Kalman state uses the centroid form `(u, v, s, r)` with `s = w * h` and
`r = w / h`; it is derived on demand.
"""

from public import public
from swimtrack.codetools import SwimtrackError
import collections
import math
import numpy as np
import textwrap

# class ids in files index this tuple
CLASS_LABELS = (
    'on_blocks',
    'diving',
    'swimming',
    'underwater',
    'turning',
    'finishing',
)

SWIMMING = 'swimming'

# s-value assigned to frames where the swimmer is not in the swimming class
NEUTRAL_SVALUE = 0.5

TRACK_SOURCES = ('tracker', 'ground_truth')


@public
class InvalidBoxError(SwimtrackError):
    exit_code = 3


@public
class InvalidSeriesError(SwimtrackError):
    exit_code = 3


@public
class BoundingBox(collections.namedtuple('BoundingBox', ['x', 'y', 'w', 'h'])):
    """Axis-aligned box in pixels: left edge `x`, top edge `y`, width `w` and
    height `h`.

    Raises
    ------
    InvalidBoxError
        If a coordinate is not finite or `w` / `h` is not positive.
    """
    __slots__ = ()

    def __new__(cls, x, y, w, h):
        x, y, w, h = float(x), float(y), float(w), float(h)
        if not all(math.isfinite(c) for c in (x, y, w, h)):
            raise InvalidBoxError(
                "non-finite box coordinates: {b}".format(b=(x, y, w, h)))
        if not (w > 0 and h > 0):
            raise InvalidBoxError(textwrap.dedent("""\
                box width and height must be positive
                  w: {w}
                  h: {h}\
                """).format(w=w, h=h))
        return super(BoundingBox, cls).__new__(cls, x, y, w, h)

    @property
    def x2(self):
        return self.x + self.w

    @property
    def y2(self):
        return self.y + self.h

    @property
    def area(self):
        return self.w * self.h

    @property
    def center(self):
        return (self.x + self.w / 2.0, self.y + self.h / 2.0)

    def to_state_form(self):
        return to_state_form(self)

    def expand(self, pad):
        """Grow the box by `pad` pixels on every side."""
        return BoundingBox(self.x - pad, self.y - pad,
                           self.w + 2 * pad, self.h + 2 * pad)

    def clamp(self, width, height):
        """Clip the box to the frame `[0, width] x [0, height]`.

        Raises
        ------
        InvalidBoxError
            If the box lies entirely outside the frame.
        """
        x1 = min(max(self.x, 0.0), width)
        y1 = min(max(self.y, 0.0), height)
        x2 = min(max(self.x2, 0.0), width)
        y2 = min(max(self.y2, 0.0), height)
        return BoundingBox(x1, y1, x2 - x1, y2 - y1)

    def interpolate(self, other, t):
        """Component-wise linear interpolation; `t=0` is `self`, `t=1` is
        `other`."""
        return BoundingBox(*(a + (b - a) * t for a, b in zip(self, other)))


@public
def to_state_form(box):
    """Convert a box to the Kalman centroid form.

    Parameters
    ----------
    box: BoundingBox

    Returns
    -------
    (u, v, s, r): tuple of float
        Centroid coordinates, area and aspect ratio (width / height).
    """
    return (box.x + box.w / 2.0,
            box.y + box.h / 2.0,
            box.w * box.h,
            box.w / box.h)


@public
def from_state_form(u, v, s, r):
    """Inverse of `to_state_form()`.

    Raises
    ------
    InvalidBoxError
        If `s` or `r` is not positive.
    """
    if not (s > 0 and r > 0):
        raise InvalidBoxError(
            "area and aspect ratio must be positive: s={s} r={r}".format(
                s=s, r=r))
    w = math.sqrt(s * r)
    h = s / w
    return BoundingBox(u - w / 2.0, v - h / 2.0, w, h)


@public
def iou(a, b):
    """Intersection-over-union of two boxes, in `[0, 1]`."""
    iw = min(a.x2, b.x2) - max(a.x, b.x)
    ih = min(a.y2, b.y2) - max(a.y, b.y)
    if iw <= 0 or ih <= 0:
        return 0.0
    inter = iw * ih
    return inter / (a.area + b.area - inter)


@public
def iou_matrix(boxes_a, boxes_b):
    """Pairwise IoU between two box lists.

    Returns
    -------
    ious: numpy.ndarray
        `len(boxes_a) x len(boxes_b)` array.
    """
    if len(boxes_a) == 0 or len(boxes_b) == 0:
        return np.zeros((len(boxes_a), len(boxes_b)))

    a = np.asarray(boxes_a, dtype=float)
    b = np.asarray(boxes_b, dtype=float)

    ax1, ay1 = a[:, 0:1], a[:, 1:2]
    ax2, ay2 = ax1 + a[:, 2:3], ay1 + a[:, 3:4]
    bx1, by1 = b[:, 0], b[:, 1]
    bx2, by2 = bx1 + b[:, 2], by1 + b[:, 3]

    iw = np.clip(np.minimum(ax2, bx2) - np.maximum(ax1, bx1), 0, None)
    ih = np.clip(np.minimum(ay2, by2) - np.maximum(ay1, by1), 0, None)
    inter = iw * ih
    union = a[:, 2:3] * a[:, 3:4] + b[:, 2] * b[:, 3] - inter
    return inter / union


@public
def class_label_for(class_id):
    """Map a file class id (0-5) to its class label."""
    try:
        if int(class_id) != class_id or class_id < 0:
            raise IndexError
        return CLASS_LABELS[int(class_id)]
    except (IndexError, TypeError, ValueError):
        raise ValueError(
            "class id must be one of 0-{n}: {c}".format(
                n=len(CLASS_LABELS) - 1, c=class_id)) from None


_Detection = collections.namedtuple(
    'Detection', ['frame', 'box', 'confidence', 'class_label', 'lane'])


@public
class Detection(_Detection):
    """One detector output: a box in a frame, with its class and, when the
    data set provides it, the swimmer's lane number.
    """
    __slots__ = ()

    def __new__(cls, frame, box, confidence=1.0, class_label=SWIMMING,
                lane=None):
        if int(frame) != frame or frame < 0:
            raise ValueError(
                "frame must be a non-negative integer: {f}".format(f=frame))
        if not isinstance(box, BoundingBox):
            box = BoundingBox(*box)
        confidence = float(confidence)
        if not 0.0 <= confidence <= 1.0:
            raise ValueError("confidence outside [0, 1]: {c}".format(
                c=confidence))
        if class_label not in CLASS_LABELS:
            raise ValueError("unknown class label: {c}".format(c=class_label))
        if lane is not None:
            lane = int(lane)
        return super(Detection, cls).__new__(
            cls, int(frame), box, confidence, class_label, lane)

    @property
    def class_id(self):
        return CLASS_LABELS.index(self.class_label)


_Track = collections.namedtuple(
    'Track', ['track_id', 'entries', 'source', 'lane', 'labels'])


@public
class Track(_Track):
    """Identity-stamped sequence of per-frame boxes.

    Parameters
    ----------
    track_id: int
        Positive id, unique within one sequence.

    entries: iterable of (frame, BoundingBox)
        Strictly increasing in frame.

    source: str
        `tracker` or `ground_truth`.

    lane: int, optional
        Lane the track belongs to (majority vote for tracker output).

    labels: iterable of str, optional
        Class label per entry.
    """
    __slots__ = ()

    def __new__(cls, track_id, entries, source='tracker', lane=None,
                labels=None):
        if int(track_id) != track_id or track_id < 1:
            raise ValueError("track id must be a positive integer: {t}".format(
                t=track_id))
        if source not in TRACK_SOURCES:
            raise ValueError("unknown track source: {s}".format(s=source))

        entries = tuple((int(f), b if isinstance(b, BoundingBox)
                         else BoundingBox(*b)) for f, b in entries)
        frames = [f for f, _ in entries]
        if any(b <= a for a, b in zip(frames, frames[1:])):
            raise InvalidSeriesError(
                "track {t} frames are not strictly increasing".format(
                    t=track_id))

        if labels is not None:
            labels = tuple(labels)
            if len(labels) != len(entries):
                raise ValueError(
                    "track {t} has {n} labels for {m} entries".format(
                        t=track_id, n=len(labels), m=len(entries)))
        if lane is not None:
            lane = int(lane)

        return super(Track, cls).__new__(
            cls, int(track_id), entries, source, lane, labels)

    @property
    def frames(self):
        return [f for f, _ in self.entries]

    @property
    def boxes(self):
        return [b for _, b in self.entries]

    @property
    def first_frame(self):
        return self.entries[0][0] if self.entries else None

    @property
    def last_frame(self):
        return self.entries[-1][0] if self.entries else None

    def by_frame(self):
        """Return a `{frame: BoundingBox}` dict."""
        return dict(self.entries)

    def label_at(self, i):
        """Class label of entry `i`; `swimming` when labels are unknown."""
        if self.labels is None:
            return SWIMMING
        return self.labels[i]


_SValueSeries = collections.namedtuple(
    'SValueSeries', ['track_id', 'fps', 'samples'])


@public
class SValueSeries(_SValueSeries):
    """Per-track stroke-phase values.

    `samples` is a sequence of `(frame, s_value, swimming)`; frames strictly
    increase, every s-value is in `[0, 1]` and a frame with `swimming` false
    has the neutral s-value 0.5.

    Raises
    ------
    InvalidSeriesError
        If any of the above does not hold.
    """
    __slots__ = ()

    def __new__(cls, track_id, fps, samples):
        fps = float(fps)
        if not fps > 0:
            raise InvalidSeriesError("fps must be positive: {f}".format(f=fps))

        samples = tuple((int(f), float(s), bool(sw)) for f, s, sw in samples)
        for (fa, _, _), (fb, _, _) in zip(samples, samples[1:]):
            if fb <= fa:
                raise InvalidSeriesError(
                    "s-value frames not strictly increasing at {f}".format(
                        f=fb))
        for f, s, sw in samples:
            if not 0.0 <= s <= 1.0:
                raise InvalidSeriesError(
                    "s-value outside [0, 1] at frame {f}: {s}".format(
                        f=f, s=s))
            if not sw and s != NEUTRAL_SVALUE:
                raise InvalidSeriesError(textwrap.dedent("""\
                    non-swimming frame must carry s-value {n}
                      frame: {f}
                      s-value: {s}\
                    """).format(n=NEUTRAL_SVALUE, f=f, s=s))

        return super(SValueSeries, cls).__new__(cls, track_id, fps, samples)

    @property
    def frames(self):
        return np.array([f for f, _, _ in self.samples], dtype=int)

    @property
    def values(self):
        return np.array([s for _, s, _ in self.samples], dtype=float)

    @property
    def swimming(self):
        return np.array([sw for _, _, sw in self.samples], dtype=bool)

    def segments(self):
        """Maximal runs of consecutive swimming frames.

        Returns
        -------
        segments: list of (start, stop)
            Python slice bounds into `samples`.
        """
        segments = []
        start = None
        prev_frame = None
        for i, (frame, _, swimming) in enumerate(self.samples):
            contiguous = prev_frame is not None and frame == prev_frame + 1
            if start is not None and (not swimming or not contiguous):
                segments.append((start, i))
                start = None
            if swimming and start is None:
                start = i
            prev_frame = frame
        if start is not None:
            segments.append((start, len(self.samples)))
        return segments

    def between(self, first, last, track_id=None):
        """Samples with `first <= frame <= last`, as a new series."""
        return SValueSeries(
            self.track_id if track_id is None else track_id,
            self.fps,
            [smp for smp in self.samples if first <= smp[0] <= last],
        )
