"""Stroke, tracking and detection evaluation.

Stroke reports compare predicted stroke tops with ground truth tops (F1 with
a frame tolerance, distance to the nearest true top) and predicted s-values
with true ones. Tracking reports are CLEAR-MOT (MOTA, MOTP) plus the identity
metrics (IDF1, IDP, IDR) and the mostly tracked / partially tracked / mostly
lost trajectory counts. Detection reports give average precision per class.
"""

from public import public
from swimtrack.assoc import hungarian
from swimtrack.codetools import SwimtrackError, debug, info
from swimtrack.core import (
    CLASS_LABELS, SWIMMING, InvalidSeriesError, SValueSeries, Track,
    iou_matrix)
import collections
import motmetrics as mm
import numpy as np
import textwrap

DEFAULT_PEAK_TOL = 3

DEFAULT_IOU_MATCH = 0.5

DEFAULT_AP_IOU = 0.25

# coverage bounds of mostly tracked / mostly lost trajectories
MOSTLY_TRACKED = 0.8
MOSTLY_LOST = 0.2

_MOT_METRICS = [
    'mota', 'motp', 'idf1', 'idp', 'idr', 'idtp',
    'num_switches', 'num_false_positives', 'num_misses',
    'num_objects', 'num_predictions', 'num_detections',
]


@public
class EmptyPeaksError(SwimtrackError):
    exit_code = 4


@public
class DuplicateFrameError(SwimtrackError):
    exit_code = 3


@public
class FrameRangeMismatchError(SwimtrackError):
    exit_code = 3


StrokeReport = collections.namedtuple(
    'StrokeReport',
    ['f1', 'precision', 'recall', 'asd', 'sdstd', 'delta', 'tp', 'fp', 'fn'])
public(StrokeReport)

MotReport = collections.namedtuple(
    'MotReport',
    ['mota', 'motp', 'idf1', 'idp', 'idr',
     'gt', 'mt', 'pt', 'ml',
     'fp', 'fn', 'idsw',
     'mota_raw', 'num_frames', 'num_gt_boxes', 'num_hyp_boxes',
     'num_matches', 'idtp'])
MotReport.__doc__ = """\
Percentages: `mota` (floored at 0), `motp` (mean IoU of matched pairs),
`idf1`, `idp`, `idr` and the signed `mota_raw`. Counts: trajectories `gt`,
`mt`, `pt`, `ml`; events `fp`, `fn`, `idsw`; boxes and matches."""
public(MotReport)

DetectionReport = collections.namedtuple(
    'DetectionReport',
    ['ap', 'swimming', 'not_swimming', 'map', 'iou_threshold'])
DetectionReport.__doc__ = """\
`ap` maps each class label present in the annotations to its average
precision. `swimming` is the AP of the swimming class, `not_swimming` the mean
AP of the other classes and `map` the mean over all; each is `None` when it
has no class to average."""
public(DetectionReport)


def _ratio(num, den):
    return num / den if den else 0.0


def _finite(value):
    value = float(value)
    return value if np.isfinite(value) else 0.0


@public
def match_peaks(predicted, truth, tol=DEFAULT_PEAK_TOL):
    """One-to-one matching of predicted stroke tops to true ones.

    The match count is maximised first and the summed distance second; no
    matched pair is more than `tol` frames apart.

    Parameters
    ----------
    predicted: sequence of float
    truth: sequence of float
    tol: float

    Returns
    -------
    (pairs, unmatched_pred, unmatched_truth)
        `pairs` holds `(pred_index, truth_index)` sorted by predicted index;
        the other two list indices without a partner.
    """
    pred = np.asarray(predicted, dtype=float).reshape(-1)
    true = np.asarray(truth, dtype=float).reshape(-1)

    pairs = []
    if len(pred) and len(true):
        dist = np.abs(pred[:, None] - true[None, :])
        within = dist <= tol + 1e-9
        # any set of k in-tolerance pairs beats every set of k - 1
        bonus = tol * min(len(pred), len(true)) + 1.0
        cost = np.where(within, dist - bonus, 0.0)
        pairs = [(p, t) for p, t in hungarian(cost) if within[p, t]]

    matched_p = {p for p, _ in pairs}
    matched_t = {t for _, t in pairs}
    return (
        pairs,
        [i for i in range(len(pred)) if i not in matched_p],
        [i for i in range(len(true)) if i not in matched_t],
    )


def _svalue_delta(predicted, truth):
    if predicted is None or truth is None:
        return None

    if isinstance(predicted, SValueSeries) and isinstance(truth, SValueSeries):
        common, pi, ti = np.intersect1d(
            predicted.frames, truth.frames, return_indices=True)
        if not len(common):
            raise FrameRangeMismatchError(textwrap.dedent("""\
                s-value series share no frames
                  predicted: track {p}
                  truth: track {t}\
                """).format(p=predicted.track_id, t=truth.track_id))
        a = predicted.values[pi]
        b = truth.values[ti]
    else:
        if isinstance(predicted, SValueSeries):
            predicted = predicted.values
        if isinstance(truth, SValueSeries):
            truth = truth.values
        a = np.asarray(predicted, dtype=float)
        b = np.asarray(truth, dtype=float)
        if a.shape != b.shape:
            raise InvalidSeriesError(textwrap.dedent("""\
                s-value sequences differ in length
                  predicted: {n}
                  truth: {m}\
                """).format(n=a.size, m=b.size))
        if not a.size:
            return None

    return float(np.mean(np.abs(a - b)))


@public
def stroke_report(predicted_peaks, truth_peaks, predicted_svalues=None,
                  truth_svalues=None, tol=DEFAULT_PEAK_TOL):
    """Score predicted stroke tops and s-values against ground truth.

    `asd` and `sdstd` are the mean and (population) standard deviation of
    the distance from every predicted top to its nearest true top. `delta` is
    the mean absolute s-value difference; s-value series are compared on the
    frames they share, plain sequences element-wise. Without s-values
    `delta` is `None`.

    Raises
    ------
    EmptyPeaksError
        If either list of tops is empty.
    """
    pred = np.asarray(predicted_peaks, dtype=float).reshape(-1)
    true = np.asarray(truth_peaks, dtype=float).reshape(-1)
    if not len(pred) or not len(true):
        raise EmptyPeaksError(textwrap.dedent("""\
            stroke report needs predicted and true stroke tops
              predicted: {n}
              truth: {m}\
            """).format(n=len(pred), m=len(true)))

    pairs, _, _ = match_peaks(pred, true, tol=tol)
    tp = len(pairs)
    fp = len(pred) - tp
    fn = len(true) - tp
    precision = _ratio(tp, tp + fp)
    recall = _ratio(tp, tp + fn)
    f1 = _ratio(2 * precision * recall, precision + recall)

    nearest = np.abs(pred[:, None] - true[None, :]).min(axis=1)

    return StrokeReport(
        f1=f1,
        precision=precision,
        recall=recall,
        asd=float(nearest.mean()),
        sdstd=float(nearest.std()),
        delta=_svalue_delta(predicted_svalues, truth_svalues),
        tp=tp,
        fp=fp,
        fn=fn,
    )


@public
def interpolate_ground_truth(sparse):
    """Fill sparse lane annotations in to one box per frame.

    Boxes are interpolated linearly, component by component, between
    neighbouring annotated frames of the same lane. Nothing is extrapolated
    past a lane's first or last annotation.

    Parameters
    ----------
    sparse: iterable of (frame, lane, BoundingBox)

    Returns
    -------
    tracks: list of Track
        One ground truth track per lane, ids 1..n by ascending lane.

    Raises
    ------
    DuplicateFrameError
        If a lane is annotated twice in one frame.
    """
    by_lane = collections.defaultdict(dict)
    for frame, lane, box in sparse:
        if lane is None:
            raise ValueError(
                "annotation at frame {f} has no lane".format(f=frame))
        frame = int(frame)
        if frame in by_lane[lane]:
            raise DuplicateFrameError(textwrap.dedent("""\
                lane annotated twice in one frame
                  lane: {lane}
                  frame: {f}\
                """).format(lane=lane, f=frame))
        by_lane[lane][frame] = box

    tracks = []
    for track_id, lane in enumerate(sorted(by_lane), start=1):
        keyframes = sorted(by_lane[lane].items())
        entries = [keyframes[0]]
        for (f0, b0), (f1, b1) in zip(keyframes, keyframes[1:]):
            for f in range(f0 + 1, f1):
                entries.append((f, b0.interpolate(b1, (f - f0) / (f1 - f0))))
            entries.append((f1, b1))
        tracks.append(Track(track_id, entries, source='ground_truth',
                            lane=lane))
        debug("lane {lane}: {k} annotation(s) -> {n} frame(s)".format(
            lane=lane, k=len(keyframes), n=len(entries)))
    return tracks


def _frame_index(tracks):
    frames = collections.defaultdict(dict)
    for t in tracks:
        for f, box in t.entries:
            frames[f][t.track_id] = box
    return frames


def _iou_distances(gts, hyps, iou_match):
    """motmetrics distances: `1 - IoU`, NaN where a pair may not match"""
    if not gts or not hyps:
        return np.empty((len(gts), len(hyps)))
    ious = iou_matrix(gts, hyps)
    return np.where(ious >= iou_match, 1.0 - ious, np.nan)


@public
def mot_report(hypotheses, ground_truth, iou_match=DEFAULT_IOU_MATCH):
    """CLEAR-MOT, identity and trajectory-coverage metrics.

    Frames are fed to a `motmetrics.MOTAccumulator`: a ground truth object
    keeps the hypothesis it was matched to in the previous frame while their
    IoU stays at or above `iou_match`, the rest are assigned optimally on
    `1 - IoU`, and an identity switch is counted whenever an object's
    hypothesis differs from the one it was last matched to. The identity
    metrics come from motmetrics' global object-to-hypothesis assignment.

    Parameters
    ----------
    hypotheses: list of Track
    ground_truth: list of Track
    iou_match: float

    Returns
    -------
    report: MotReport

    Raises
    ------
    FrameRangeMismatchError
        If there is no ground truth, or a hypothesis box lies outside the
        ground truth frame range.
    """
    gt_frames = _frame_index(ground_truth)
    hyp_frames = _frame_index(hypotheses)
    if not gt_frames:
        raise FrameRangeMismatchError("ground truth holds no boxes")

    first, last = min(gt_frames), max(gt_frames)
    outside = [f for f in hyp_frames if not first <= f <= last]
    if outside:
        raise FrameRangeMismatchError(textwrap.dedent("""\
            hypotheses extend past the ground truth frame range
              ground truth: {a}-{b}
              hypothesis frames: {lo}-{hi}\
            """).format(a=first, b=last, lo=min(hyp_frames),
                        hi=max(hyp_frames)))

    acc = mm.MOTAccumulator(auto_id=False)
    frames = sorted(set(gt_frames) | set(hyp_frames))
    for frame in frames:
        gts = gt_frames.get(frame, {})
        hyps = hyp_frames.get(frame, {})
        g_keys = sorted(gts)
        h_keys = sorted(hyps)
        acc.update(
            g_keys, h_keys,
            _iou_distances([gts[g] for g in g_keys],
                           [hyps[h] for h in h_keys], iou_match),
            frameid=frame)

    mh = mm.metrics.create()
    summary = mh.compute(acc, metrics=_MOT_METRICS, name='swimtrack').iloc[0]

    events = acc.mot_events
    matched = events[events.Type.isin(['MATCH', 'SWITCH'])]
    for (frame, _), row in events[events.Type == 'SWITCH'].iterrows():
        debug("frame {f}: id switch on object {g} -> {h}".format(
            f=frame, g=row.OId, h=row.HId))
    matched_frames = matched.OId.value_counts()

    mt = pt = ml = 0
    for t in ground_truth:
        coverage = _ratio(matched_frames.get(t.track_id, 0), len(t.entries))
        if coverage >= MOSTLY_TRACKED:
            mt += 1
        elif coverage <= MOSTLY_LOST:
            ml += 1
        else:
            pt += 1

    motp = summary['motp']
    mota_raw = 100.0 * float(summary['mota'])
    report = MotReport(
        mota=max(0.0, mota_raw),
        motp=100.0 * (1.0 - float(motp)) if np.isfinite(motp) else 0.0,
        idf1=100.0 * _finite(summary['idf1']),
        idp=100.0 * _finite(summary['idp']),
        idr=100.0 * _finite(summary['idr']),
        gt=len(ground_truth),
        mt=mt,
        pt=pt,
        ml=ml,
        fp=int(summary['num_false_positives']),
        fn=int(summary['num_misses']),
        idsw=int(summary['num_switches']),
        mota_raw=mota_raw,
        num_frames=len(frames),
        num_gt_boxes=int(summary['num_objects']),
        num_hyp_boxes=int(summary['num_predictions']),
        num_matches=int(summary['num_detections']),
        idtp=int(round(float(summary['idtp']))),
    )
    info("MOTA {a:.2f} MOTP {p:.2f} IDF1 {i:.2f} over {n} frame(s)".format(
        a=report.mota, p=report.motp, i=report.idf1, n=report.num_frames))
    return report


def _class_ap(detections, annotations, iou_threshold):
    gt_by_frame = collections.defaultdict(list)
    for a in annotations:
        gt_by_frame[a.frame].append(a.box)
    used = {f: np.zeros(len(b), dtype=bool) for f, b in gt_by_frame.items()}

    ranked = sorted(enumerate(detections),
                    key=lambda d: (-d[1].confidence, d[1].frame, d[0]))
    hits = []
    for _, det in ranked:
        boxes = gt_by_frame.get(det.frame)
        if not boxes:
            hits.append(False)
            continue
        ious = iou_matrix([det.box], boxes)[0]
        ious[used[det.frame]] = -1.0
        j = int(np.argmax(ious))
        if ious[j] >= iou_threshold:
            used[det.frame][j] = True
            hits.append(True)
        else:
            hits.append(False)

    if not hits:
        return 0.0
    hits = np.asarray(hits)
    tp = np.cumsum(hits)
    fp = np.cumsum(~hits)
    recall = tp / len(annotations)
    precision = tp / (tp + fp)

    # all-point interpolation: precision envelope over recall steps
    mrec = np.concatenate([[0.0], recall, [1.0]])
    mpre = np.concatenate([[0.0], precision, [0.0]])
    mpre = np.maximum.accumulate(mpre[::-1])[::-1]
    steps = np.flatnonzero(mrec[1:] != mrec[:-1])
    return float(np.sum((mrec[steps + 1] - mrec[steps]) * mpre[steps + 1]))


@public
def average_precision(detections, annotations,
                      iou_threshold=DEFAULT_AP_IOU):
    """Per-class average precision of a detector.

    Detections of a class are ranked by confidence; each is a true positive
    when it overlaps a not yet claimed annotation of the same class and
    frame by at least `iou_threshold`.

    Parameters
    ----------
    detections: list of Detection
    annotations: list of Detection
    iou_threshold: float

    Returns
    -------
    report: DetectionReport
    """
    ap = {}
    for label in CLASS_LABELS:
        gts = [a for a in annotations if a.class_label == label]
        if not gts:
            continue
        dets = [d for d in detections if d.class_label == label]
        ap[label] = _class_ap(dets, gts, iou_threshold)
        debug("AP[{c}] = {v:.4f}".format(c=label, v=ap[label]))

    others = [v for k, v in ap.items() if k != SWIMMING]
    return DetectionReport(
        ap=ap,
        swimming=ap.get(SWIMMING),
        not_swimming=float(np.mean(others)) if others else None,
        map=float(np.mean(list(ap.values()))) if ap else None,
        iou_threshold=float(iou_threshold),
    )
