"""Detection / track CSV, s-value CSV and JSON report files.

Detection and track files share one layout, a row per box::

    frame,track_id,x,y,w,h,confidence,class_id,lane

`track_id` is -1 for raw detections and `lane` is -1 when unknown. S-value
files hold `frame,s_value,swimming` for one sub-video. The header line is
optional on input and always written on output. Floats are written with 6
significant digits.
"""

from public import public
from swimtrack.codetools import (
    InvalidConfigError, SwimtrackError, atomic_write, debug)
from swimtrack.core import (
    CLASS_LABELS, BoundingBox, Detection, SValueSeries, Track,
    class_label_for)
import collections
import json
import math
import numpy as np
import pandas as pd
import textwrap

DETECTION_COLUMNS = ['frame', 'track_id', 'x', 'y', 'w', 'h', 'confidence',
                     'class_id', 'lane']

SVALUE_COLUMNS = ['frame', 's_value', 'swimming']

_INT_COLUMNS = {'frame', 'track_id', 'class_id', 'lane', 'swimming'}

UNKNOWN = -1

FLOAT_FORMAT = '%.6g'


@public
class FormatError(SwimtrackError):
    exit_code = 3


def _read_table(path, columns):
    """Parse a CSV into numeric columns.

    Returns
    -------
    (frame, lines): (pandas.DataFrame, numpy.ndarray)
        Numeric table and the file line number of every row.
    """
    try:
        df = pd.read_csv(path, header=None, dtype=str,
                         skip_blank_lines=False, keep_default_na=False,
                         skipinitialspace=True)
    except pd.errors.EmptyDataError:
        return pd.DataFrame(columns=columns, dtype=float), np.array([], int)
    except pd.errors.ParserError as e:
        raise FormatError(textwrap.dedent("""\
            malformed CSV: {path}
              expected columns: {cols}
              Message: {e}\
            """).format(path=path, cols=','.join(columns), e=e)) from None
    except (OSError, UnicodeDecodeError) as e:
        raise FormatError("cannot read {path}: {e}".format(
            path=path, e=e)) from None

    if df.shape[1] != len(columns):
        raise FormatError(textwrap.dedent("""\
            wrong number of columns in {path}
              expected: {n} ({cols})
              got: {m}\
            """).format(path=path, n=len(columns), cols=','.join(columns),
                        m=df.shape[1]))
    df.columns = columns

    df = df.fillna('').apply(lambda c: c.str.strip())
    lines = np.arange(1, len(df) + 1)

    if len(df) and df.iloc[0, 0] == columns[0]:
        if list(df.iloc[0]) != columns:
            raise FormatError(textwrap.dedent("""\
                unexpected header in {path}
                  expected: {want}
                  got: {got}\
                """).format(path=path, want=','.join(columns),
                            got=','.join(df.iloc[0])))
        df, lines = df.iloc[1:], lines[1:]

    blank = (df == '').all(axis=1).to_numpy()
    df, lines = df[~blank], lines[~blank]

    numeric = df.apply(pd.to_numeric, errors='coerce')
    for col in columns:
        bad = numeric[col].isna().to_numpy()
        if col in _INT_COLUMNS:
            values = numeric[col].to_numpy(dtype=float)
            bad |= ~np.isnan(values) & (values != np.round(values))
        if bad.any():
            i = int(np.flatnonzero(bad)[0])
            raise FormatError(textwrap.dedent("""\
                bad value in {path} line {line}
                  column: {col}
                  value: '{v}'\
                """).format(path=path, line=lines[i], col=col,
                            v=df[col].iloc[i]))

    for col in _INT_COLUMNS & set(columns):
        numeric[col] = numeric[col].astype(int)

    return numeric.reset_index(drop=True), lines


def _rows(path, columns):
    df, lines = _read_table(path, columns)
    return zip(lines, df.itertuples(index=False))


def _detection_from_row(path, line, row):
    try:
        label = class_label_for(row.class_id)
        lane = None if row.lane == UNKNOWN else row.lane
        return Detection(row.frame, BoundingBox(row.x, row.y, row.w, row.h),
                         row.confidence, label, lane=lane)
    except (ValueError, SwimtrackError) as e:
        raise FormatError(textwrap.dedent("""\
            invalid row in {path} line {line}
              Message: {e}\
            """).format(path=path, line=line, e=e)) from None


@public
def read_detections(path):
    """Read a detection file in file order.

    Returns
    -------
    detections: list of Detection

    Raises
    ------
    FormatError
        On a malformed row, with its line number.
    """
    detections = [_detection_from_row(path, line, row)
                  for line, row in _rows(path, DETECTION_COLUMNS)]
    debug("read {n} detection(s) from {p}".format(n=len(detections), p=path))
    return detections


@public
def read_tracks(path, source='tracker'):
    """Read a track file, one `Track` per `track_id`.

    Rows may interleave tracks; each track's rows are sorted by frame. The
    track's lane is the most frequent known lane of its rows.

    Raises
    ------
    FormatError
        On a malformed row, a `track_id` below 1 or a frame listed twice
        for one track.
    """
    by_id = collections.defaultdict(list)
    for line, row in _rows(path, DETECTION_COLUMNS):
        if row.track_id < 1:
            raise FormatError(textwrap.dedent("""\
                track file row without a track id: {path} line {line}
                  track_id: {t}\
                """).format(path=path, line=line, t=row.track_id))
        by_id[row.track_id].append(
            (line, _detection_from_row(path, line, row)))

    tracks = []
    for track_id in sorted(by_id):
        rows = sorted(by_id[track_id], key=lambda r: r[1].frame)
        for (_, a), (line, b) in zip(rows, rows[1:]):
            if a.frame == b.frame:
                raise FormatError(textwrap.dedent("""\
                    track {t} lists frame {f} twice: {path} line {line}\
                    """).format(t=track_id, f=b.frame, path=path, line=line))
        dets = [d for _, d in rows]
        lanes = collections.Counter(d.lane for d in dets
                                    if d.lane is not None)
        lane = min(lanes, key=lambda k: (-lanes[k], k)) if lanes else None
        tracks.append(Track(track_id, [(d.frame, d.box) for d in dets],
                            source=source, lane=lane,
                            labels=[d.class_label for d in dets]))
    debug("read {n} track(s) from {p}".format(n=len(tracks), p=path))
    return tracks


@public
def read_annotations(path):
    """Read sparse lane annotations for `interpolate_ground_truth()`.

    Returns
    -------
    annotations: list of (frame, lane, BoundingBox)

    Raises
    ------
    FormatError
        If a row has no lane.
    """
    annotations = []
    for line, row in _rows(path, DETECTION_COLUMNS):
        det = _detection_from_row(path, line, row)
        if det.lane is None:
            raise FormatError(
                "annotation without a lane: {path} line {line}".format(
                    path=path, line=line))
        annotations.append((det.frame, det.lane, det.box))
    return annotations


def _write_table(path, columns, rows):
    df = pd.DataFrame(rows, columns=columns)
    for col in _INT_COLUMNS & set(columns):
        df[col] = df[col].astype(int)
    with atomic_write(path) as fh:
        df.to_csv(fh, index=False, float_format=FLOAT_FORMAT,
                  lineterminator='\n')


@public
def write_detections(path, detections):
    """Write detections with `track_id` -1, in the given order."""
    rows = [(d.frame, UNKNOWN, d.box.x, d.box.y, d.box.w, d.box.h,
             d.confidence, d.class_id,
             UNKNOWN if d.lane is None else d.lane)
            for d in detections]
    _write_table(path, DETECTION_COLUMNS, rows)


@public
def write_tracks(path, tracks, confidence=1.0):
    """Write tracks as rows sorted by frame, then track id."""
    rows = []
    for t in tracks:
        lane = UNKNOWN if t.lane is None else t.lane
        for i, (frame, box) in enumerate(t.entries):
            class_id = CLASS_LABELS.index(t.label_at(i))
            rows.append((frame, t.track_id, box.x, box.y, box.w, box.h,
                         confidence, class_id, lane))
    rows.sort(key=lambda r: (r[0], r[1]))
    _write_table(path, DETECTION_COLUMNS, rows)


@public
def read_svalues(path, fps, track_id=None):
    """Read one s-value file.

    Raises
    ------
    FormatError
        On a malformed row, a swimming flag other than 0/1, or values that
        break the `SValueSeries` rules.
    """
    samples = []
    for line, row in _rows(path, SVALUE_COLUMNS):
        if row.swimming not in (0, 1):
            raise FormatError(textwrap.dedent("""\
                swimming flag must be 0 or 1: {path} line {line}
                  value: {v}\
                """).format(path=path, line=line, v=row.swimming))
        samples.append((row.frame, row.s_value, bool(row.swimming)))

    try:
        return SValueSeries(track_id, fps, samples)
    except SwimtrackError as e:
        raise FormatError("invalid s-values in {path}: {e}".format(
            path=path, e=e)) from None


@public
def write_svalues(path, series):
    rows = [(f, s, int(sw)) for f, s, sw in series.samples]
    _write_table(path, SVALUE_COLUMNS, rows)


def _plain(obj):
    """JSON-ready copy of `obj` with floats at 6 significant digits."""
    if hasattr(obj, '_asdict'):
        return _plain(obj._asdict())
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        if not math.isfinite(obj):
            return None
        return float(FLOAT_FORMAT % obj)
    return obj


@public
def write_json(path, obj):
    """Write `obj` (dicts, lists, namedtuples, numbers) as indented JSON."""
    with atomic_write(path) as fh:
        json.dump(_plain(obj), fh, indent=2)
        fh.write('\n')


@public
def read_json(path):
    """Raises `FormatError` when the file is missing or not JSON."""
    try:
        with open(path, 'r', encoding='utf-8') as fh:
            return json.load(fh)
    except (OSError, ValueError) as e:
        raise FormatError("cannot read JSON {path}: {e}".format(
            path=path, e=e)) from None


@public
def read_config(path):
    """Like `read_json()` but a bad file is a configuration error."""
    try:
        return read_json(path)
    except FormatError as e:
        raise InvalidConfigError(str(e)) from None


@public
def read_peaks(path, lane=None):
    """Stroke tops from a JSON file.

    Accepts a plain list, a `strokes` output (`{"peaks": [...]}`) or a
    simulation `truth_peaks.json` (`{"lanes": {"<lane>": [...]}}`), in
    which case `lane` picks the lane; it may be left out when there is only
    one.

    Raises
    ------
    FormatError
    """
    data = read_json(path)
    if isinstance(data, dict) and 'lanes' in data:
        lanes = data['lanes']
        if lane is None:
            if len(lanes) != 1:
                raise FormatError(textwrap.dedent("""\
                    {path} holds several lanes; pick one
                      lanes: {ls}\
                    """).format(path=path, ls=', '.join(sorted(lanes))))
            lane = next(iter(lanes))
        try:
            data = lanes[str(lane)]
        except KeyError:
            raise FormatError("no lane {lane} in {path}".format(
                lane=lane, path=path)) from None
    elif isinstance(data, dict) and 'peaks' in data:
        data = data['peaks']

    if not isinstance(data, list):
        raise FormatError(
            "no list of stroke tops in {path}".format(path=path))
    try:
        return [float(p) for p in data]
    except (TypeError, ValueError):
        raise FormatError(
            "stroke tops must be numbers: {path}".format(path=path)) from None
