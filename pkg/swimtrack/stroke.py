"""Stroke peaks and stroke rates from per-track s-value series.

A series is smoothed with a zero-phase Butterworth low-pass, thresholded at
its mean into a square wave, and every run of ones becomes one stroke top at
the run's mean position. Stroke rates come from the gaps between neighbouring
tops.
"""

from public import public
from scipy import signal
from swimtrack.codetools import (
    InvalidConfigError, SwimtrackError, debug, info, warn)
from swimtrack.core import InvalidSeriesError
import collections
import numpy as np
import textwrap


@public
class InvalidSpecError(InvalidConfigError):
    pass


@public
class SignalTooShortError(SwimtrackError):
    exit_code = 4


@public
class EmptySwimmingRegionError(SwimtrackError):
    exit_code = 4


@public
class InsufficientPeaksError(SwimtrackError):
    exit_code = 4


# no swimmer strokes faster than this
MAX_STROKE_HZ = 3.0

_FilterSpec = collections.namedtuple(
    'FilterSpec', ['order', 'cutoff_hz', 'fps'])


@public
class FilterSpec(_FilterSpec):
    """Butterworth low-pass design.

    Parameters
    ----------
    order: int
        Even filter order, at least 2.

    cutoff_hz: float
        -3 dB point of a single filter pass, below Nyquist.

    fps: float
        Sampling rate of the s-value series.

    Raises
    ------
    InvalidSpecError
    """
    __slots__ = ()

    def __new__(cls, order=8, cutoff_hz=3.0, fps=30.0):
        try:
            cutoff_hz, fps = float(cutoff_hz), float(fps)
            if int(order) != order:
                raise ValueError("filter order must be an integer")
        except (TypeError, ValueError) as e:
            raise InvalidSpecError(str(e)) from None

        if order < 2 or order % 2:
            raise InvalidSpecError(
                "filter order must be even and >= 2: {o}".format(o=order))
        if not fps > 0:
            raise InvalidSpecError("fps must be positive: {f}".format(f=fps))
        if not 0 < cutoff_hz < fps / 2.0:
            raise InvalidSpecError(textwrap.dedent("""\
                cutoff must lie between 0 and the Nyquist frequency
                  cutoff_hz: {c}
                  nyquist: {n}\
                """).format(c=cutoff_hz, n=fps / 2.0))

        return super(FilterSpec, cls).__new__(cls, int(order), cutoff_hz, fps)

    def sos(self):
        """Second-order sections of the digital filter (bilinear transform
        with pre-warping)."""
        return signal.butter(self.order, self.cutoff_hz, btype='low',
                             output='sos', fs=self.fps)

    def magnitude(self, freqs_hz):
        """Single-pass magnitude response at `freqs_hz`."""
        freqs = np.atleast_1d(np.asarray(freqs_hz, dtype=float))
        _, h = signal.sosfreqz(self.sos(), worN=freqs, fs=self.fps)
        return np.abs(h)

    @property
    def min_length(self):
        return 3 * self.order

    @property
    def min_peak_gap(self):
        """Shortest possible stroke period, in frames."""
        return self.fps / MAX_STROKE_HZ


_StrokeSeries = collections.namedtuple(
    'StrokeSeries',
    ['track_id', 'peak_positions', 'rates', 'fps', 'segment_peaks'])


@public
class StrokeSeries(_StrokeSeries):
    """Stroke tops of one track.

    `peak_positions` are fractional frame numbers, `rates` is a list of
    `(midpoint_frame, strokes_per_minute)` and `segment_peaks` keeps the tops
    of every swimming segment apart, since no rate spans two segments.
    """
    __slots__ = ()

    @property
    def mean_rate(self):
        """Cadence over all segments in strokes/minute, or `None`."""
        strokes = 0
        frames = 0.0
        for peaks in self.segment_peaks:
            if len(peaks) >= 2:
                strokes += len(peaks) - 1
                frames += peaks[-1] - peaks[0]
        if not strokes:
            return None
        return 60.0 * self.fps * strokes / frames


@public
def butterworth_lowpass(values, spec):
    """Zero-phase low-pass of an s-value sequence.

    The filter runs forward and backward over cascaded second-order sections,
    with an odd reflection of `3 * order` samples at each end.

    Parameters
    ----------
    values: sequence of float
    spec: FilterSpec

    Returns
    -------
    smoothed: numpy.ndarray
        Same length as `values`.

    Raises
    ------
    SignalTooShortError
        If there are fewer than `3 * order` samples.
    """
    x = np.asarray(values, dtype=float)
    if len(x) < spec.min_length:
        raise SignalTooShortError(textwrap.dedent("""\
            signal too short for an order {o} filter
              samples: {n}
              required: {m}\
            """).format(o=spec.order, n=len(x), m=spec.min_length))

    padlen = min(spec.min_length, len(x) - 1)
    return signal.sosfiltfilt(spec.sos(), x, padtype='odd', padlen=padlen)


def _runs(q):
    """`(start, stop)` slice bounds of every run of True in `q`."""
    edges = np.diff(np.concatenate([[0], q.astype(np.int8), [0]]))
    starts = np.flatnonzero(edges == 1)
    stops = np.flatnonzero(edges == -1)
    return list(zip(starts.tolist(), stops.tolist()))


def _merge_close(runs, min_gap):
    # each run is [index_sum, count]; its peak is index_sum / count
    runs = [[(a + b - 1) * (b - a) / 2.0, b - a] for a, b in runs]
    while len(runs) > 1:
        peaks = [s / n for s, n in runs]
        gaps = np.diff(peaks)
        i = int(np.argmin(gaps))
        if gaps[i] >= min_gap:
            break
        s, n = runs.pop(i + 1)
        runs[i][0] += s
        runs[i][1] += n
    return [s / n for s, n in runs]


@public
def extract_peaks(smoothed, swimming, min_gap=0, drop_partial=False):
    """Stroke tops of a smoothed s-value sequence.

    The threshold is the mean over swimming frames. Frames at or above it
    that are also swimming form the square wave; each maximal run of ones
    gives one top at the mean of its indices.

    Parameters
    ----------
    smoothed: sequence of float
    swimming: sequence of bool
    min_gap: float
        Neighbouring tops closer than this are merged, closest pair first,
        into their index-weighted mean.
    drop_partial: bool
        Drop runs cut off by the sequence ends or a non-swimming frame, as
        long as at least one complete run remains.

    Returns
    -------
    peaks: list of float
        Fractional indices into `smoothed`, increasing.

    Raises
    ------
    EmptySwimmingRegionError
        If no frame is swimming.
    """
    x = np.asarray(smoothed, dtype=float)
    sw = np.asarray(swimming, dtype=bool)
    if x.shape != sw.shape:
        raise InvalidSeriesError(textwrap.dedent("""\
            smoothed values and swimming flags differ in length
              values: {n}
              flags: {m}\
            """).format(n=len(x), m=len(sw)))
    if not sw.any():
        raise EmptySwimmingRegionError("no swimming frames in series")

    threshold = x[sw].mean()
    # a flat signal must sit on its own mean despite rounding in mean()
    tol = 1e-12 * max(1.0, abs(threshold))
    q = (x >= threshold - tol) & sw
    runs = _runs(q)

    if drop_partial:
        n = len(x)

        def complete(run):
            a, b = run
            return a > 0 and b < n and sw[a - 1] and sw[b]

        whole = [r for r in runs if complete(r)]
        if whole:
            debug("dropped {k} partial run(s)".format(
                k=len(runs) - len(whole)))
            runs = whole

    if min_gap > 0:
        return _merge_close(runs, min_gap)
    return [(a + b - 1) / 2.0 for a, b in runs]


@public
def stroke_rates(peaks, fps):
    """Instantaneous stroke rates between neighbouring tops.

    Parameters
    ----------
    peaks: sequence of float
        Increasing frame positions.
    fps: float

    Returns
    -------
    rates: list of (midpoint_frame, strokes_per_minute)

    Raises
    ------
    InsufficientPeaksError
        If fewer than two tops are given.
    """
    peaks = [float(p) for p in peaks]
    if len(peaks) < 2:
        raise InsufficientPeaksError(
            "at least 2 stroke tops are needed, got {n}".format(
                n=len(peaks)))

    rates = []
    for a, b in zip(peaks, peaks[1:]):
        if b <= a:
            raise InvalidSeriesError(
                "stroke tops not increasing: {a} then {b}".format(a=a, b=b))
        rates.append(((a + b) / 2.0, 60.0 * fps / (b - a)))
    return rates


@public
def process_series(series, spec=None):
    """Stroke tops and rates of one `SValueSeries`.

    Every swimming segment is smoothed and thresholded on its own. Segments
    shorter than the filter needs are skipped with a warning; runs cut off by
    a segment edge are dropped and tops closer than `spec.min_peak_gap` are
    merged.

    Parameters
    ----------
    series: SValueSeries
    spec: FilterSpec, optional
        Defaults to the standard design at the series frame rate.

    Returns
    -------
    strokes: StrokeSeries

    Raises
    ------
    EmptySwimmingRegionError
        If no frame is swimming.
    SignalTooShortError
        If no swimming segment is long enough to filter.
    InsufficientPeaksError
        If no segment yields two tops.
    """
    if spec is None:
        spec = FilterSpec(fps=series.fps)
    elif spec.fps != series.fps:
        warn("track {t}: filtering at {f} fps, series is {s} fps".format(
            t=series.track_id, f=spec.fps, s=series.fps))

    if not series.samples:
        raise SignalTooShortError(
            "track {t}: empty s-value series".format(t=series.track_id))

    segments = series.segments()
    if not segments:
        raise EmptySwimmingRegionError(
            "track {t}: no swimming frames in series".format(
                t=series.track_id))

    frames = series.frames
    values = series.values

    segment_peaks = []
    long_enough = 0
    for a, b in segments:
        if b - a < spec.min_length:
            warn(textwrap.dedent("""\
                track {t}: skipping swimming segment at frames {f0}-{f1}
                  length: {n}
                  required: {m}\
                """).format(t=series.track_id, f0=frames[a],
                            f1=frames[b - 1], n=b - a, m=spec.min_length))
            continue
        long_enough += 1

        smoothed = butterworth_lowpass(values[a:b], spec)
        peaks = extract_peaks(smoothed, np.ones(b - a, dtype=bool),
                              min_gap=spec.min_peak_gap, drop_partial=True)
        segment_peaks.append([float(frames[a]) + p for p in peaks])

    if not long_enough:
        raise SignalTooShortError(textwrap.dedent("""\
            track {t}: no swimming segment is long enough to filter
              longest: {n}
              required: {m}\
            """).format(t=series.track_id,
                        n=max(b - a for a, b in segments),
                        m=spec.min_length))

    rates = []
    for peaks in segment_peaks:
        if len(peaks) >= 2:
            rates.extend(stroke_rates(peaks, spec.fps))
    if not rates:
        raise InsufficientPeaksError(
            "track {t}: no swimming segment has 2 stroke tops".format(
                t=series.track_id))

    result = StrokeSeries(
        track_id=series.track_id,
        peak_positions=[p for peaks in segment_peaks for p in peaks],
        rates=rates,
        fps=spec.fps,
        segment_peaks=segment_peaks,
    )
    info("track {t}: {n} stroke top(s), {r:.1f} strokes/min".format(
        t=series.track_id, n=len(result.peak_positions), r=result.mean_rate))
    return result
