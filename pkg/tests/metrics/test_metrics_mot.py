#!/usr/bin/env python3

from swimtrack import codetools, metrics, simgen
from swimtrack.core import BoundingBox, Detection, Track
import pytest

codetools.setup_logging()


def lane_track(track_id, frames, lane=1, source='ground_truth'):
    return Track(track_id,
                 [(f, BoundingBox(10 + f, 100 * lane, 120, 40))
                  for f in frames],
                 source=source, lane=lane)


@pytest.fixture
def race():
    return simgen.generate(simgen.SimConfig(duration_s=5)).ground_truth


def test_identity(race):
    report = metrics.mot_report(race, race)
    assert report.mota == 100
    assert report.motp == pytest.approx(100)
    assert report.idf1 == 100
    assert report.idp == 100 and report.idr == 100
    assert report.gt == len(race)
    assert report.mt == len(race)
    assert report.fp == report.fn == report.idsw == 0
    assert report.num_frames == 150


def test_relabelled_hypotheses(race):
    """Hypothesis ids do not matter, only their consistency"""
    relabelled = [t._replace(track_id=100 - t.track_id, source='tracker')
                  for t in race]
    assert metrics.mot_report(relabelled, race) == \
        metrics.mot_report(race, race)


def test_everything_missed(race):
    report = metrics.mot_report([], race)
    assert report.fn == report.num_gt_boxes == 8 * 150
    assert report.fp == 0
    assert report.mota == 0
    assert report.mota_raw == 0
    assert report.ml == len(race)
    assert report.idf1 == 0


def test_mota_is_floored():
    gt = [lane_track(1, range(10))]
    clutter = [lane_track(5, range(10), lane=4, source='tracker'),
               lane_track(6, range(10), lane=6, source='tracker')]
    report = metrics.mot_report(clutter, gt)
    assert report.fp == 20
    assert report.fn == 10
    assert report.mota_raw == pytest.approx(-200)
    assert report.mota == 0


def test_split_identity():
    """One trajectory of 100 frames, tracked 50 frames each by two ids"""
    gt = [lane_track(1, range(100))]
    hyp = [lane_track(7, range(50), source='tracker'),
           lane_track(8, range(50, 100), source='tracker')]
    report = metrics.mot_report(hyp, gt)

    assert report.idsw == 1
    assert report.mota == pytest.approx(99)
    assert report.mt == 1
    assert report.idtp == 50
    assert report.idf1 == pytest.approx(50)
    assert report.idp == pytest.approx(50)
    assert report.idr == pytest.approx(50)


def test_partially_tracked():
    gt = [lane_track(1, range(100))]
    hyp = [lane_track(3, range(50), source='tracker')]
    report = metrics.mot_report(hyp, gt)
    assert (report.mt, report.pt, report.ml) == (0, 1, 0)
    assert report.fn == 50
    assert report.idsw == 0


def test_match_is_kept_while_overlapping():
    """A better fitting newcomer does not steal an ongoing match"""
    gt = [Track(1, [(f, BoundingBox(0, 0, 100, 40)) for f in range(4)],
                source='ground_truth')]
    hyp = [
        Track(1, [(f, BoundingBox(20, 0, 100, 40)) for f in range(4)]),
        Track(2, [(f, BoundingBox(0, 0, 100, 40)) for f in range(2, 4)]),
    ]
    report = metrics.mot_report(hyp, gt)
    assert report.idsw == 0
    assert report.fp == 2


def test_frame_range_mismatch():
    gt = [lane_track(1, range(10))]
    with pytest.raises(metrics.FrameRangeMismatchError) as excinfo:
        metrics.mot_report([lane_track(2, range(5, 15), source='tracker')],
                           gt)
    assert excinfo.value.exit_code == 3

    with pytest.raises(metrics.FrameRangeMismatchError):
        metrics.mot_report([], [])


def test_interpolate_ground_truth():
    sparse = [(0, 1, BoundingBox(0, 0, 10, 10)),
              (3, 1, BoundingBox(9, 0, 10, 10)),
              (5, 2, BoundingBox(0, 50, 10, 10))]
    tracks = metrics.interpolate_ground_truth(sparse)

    assert [t.track_id for t in tracks] == [1, 2]
    assert [t.lane for t in tracks] == [1, 2]
    first, second = tracks
    assert first.frames == [0, 1, 2, 3]
    assert [b.x for b in first.boxes] == pytest.approx([0, 3, 6, 9])
    assert second.frames == [5]


def test_interpolate_every_third_frame():
    """Piecewise linear motion is rebuilt exactly"""
    def truth(f):
        x = 2.0 * f if f < 15 else 30.0 - (f - 15)
        return BoundingBox(x, 200, 120, 40)

    sparse = [(f, 3, truth(f)) for f in range(0, 30, 3)] + \
        [(29, 3, truth(29))]
    tracks = metrics.interpolate_ground_truth(sparse)
    assert len(tracks) == 1
    assert len(tracks[0].entries) == 30
    for f, box in tracks[0].entries:
        assert box == pytest.approx(truth(f))


def test_interpolate_duplicate_frame():
    sparse = [(0, 1, BoundingBox(0, 0, 10, 10)),
              (0, 1, BoundingBox(1, 0, 10, 10))]
    with pytest.raises(metrics.DuplicateFrameError):
        metrics.interpolate_ground_truth(sparse)


def test_average_precision():
    annotations = [
        Detection(0, (0, 0, 10, 10), class_label='swimming'),
        Detection(0, (50, 0, 10, 10), class_label='swimming'),
        Detection(1, (0, 0, 10, 10), class_label='turning'),
    ]
    detections = [
        Detection(0, (0, 0, 10, 10), 0.9, 'swimming'),
        Detection(0, (200, 0, 10, 10), 0.8, 'swimming'),
        Detection(0, (50, 1, 10, 10), 0.7, 'swimming'),
        Detection(1, (1, 0, 10, 10), 0.9, 'turning'),
    ]
    report = metrics.average_precision(detections, annotations)

    # ranked hits: yes, no, yes -> 0.5 * 1 + 0.5 * 2/3
    assert report.swimming == pytest.approx(0.5 + 1 / 3)
    assert report.ap['turning'] == pytest.approx(1.0)
    assert report.not_swimming == pytest.approx(1.0)
    assert report.map == pytest.approx((0.5 + 1 / 3 + 1.0) / 2)
    assert set(report.ap) == {'swimming', 'turning'}
    assert report.iou_threshold == 0.25


def test_average_precision_duplicates_are_false_positives():
    annotations = [Detection(0, (0, 0, 10, 10))]
    detections = [Detection(0, (0, 0, 10, 10), 0.9),
                  Detection(0, (0, 0, 10, 10), 0.8)]
    report = metrics.average_precision(detections, annotations)
    assert report.swimming == pytest.approx(1.0)
    assert report.not_swimming is None


def test_motp_is_mean_iou():
    gt = [Track(1, [(f, BoundingBox(0, 0, 100, 40)) for f in range(5)],
                source='ground_truth')]
    hyp = [Track(4, [(f, BoundingBox(20, 0, 100, 40)) for f in range(5)])]
    report = metrics.mot_report(hyp, gt)
    assert report.motp == pytest.approx(100 * 2 / 3)
    assert report.num_matches == 5
    assert report.mota == pytest.approx(100)


def test_switch_is_remembered_across_absence():
    """An object that reappears under a new id is a switch"""
    gt = [lane_track(1, list(range(10)) + list(range(15, 25)))]
    hyp = [lane_track(2, range(10), source='tracker'),
           lane_track(3, range(15, 25), source='tracker')]
    report = metrics.mot_report(hyp, gt)
    assert report.idsw == 1
    assert report.fp == report.fn == 0
    assert report.num_frames == 20
    assert report.idtp == 10
