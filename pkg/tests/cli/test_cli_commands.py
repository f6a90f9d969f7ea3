#!/usr/bin/env python3

from swimtrack import codetools, formats
from swimtrack.cli import (
    eval_det, eval_mot, eval_stroke, pipeline, simulate, strokes, track)
import json
import os
import pytest

codetools.setup_logging()

NOISY = {
    'duration_s': 20,
    'det_noise_px': 2.0,
    'miss_rate': 0.05,
    'fp_rate': 0.2,
    's_noise': 0.05,
    'seed': 3,
}


def run_main(main, argv):
    """Run a command entry point and return its exit status"""
    with pytest.raises(SystemExit) as excinfo:
        main(argv)
    return excinfo.value.code


def load(path):
    with open(path) as fh:
        return json.load(fh)


def read_bytes(path):
    with open(path, 'rb') as fh:
        return fh.read()


@pytest.fixture
def workdir(monkeypatch):
    monkeypatch.delenv('SWIMTRACK_SEED', raising=False)
    with codetools.TempDir() as temp_dir:
        yield temp_dir


def simulate_race(workdir, config, name='race'):
    config_path = os.path.join(workdir, name + '.json')
    with open(config_path, 'w') as fh:
        json.dump(config, fh)
    out_dir = os.path.join(workdir, name)
    assert run_main(simulate.main,
                    ['--config', config_path, '--out-dir', out_dir]) == 0
    return out_dir


def test_simulate_files(workdir):
    race = simulate_race(workdir, {'duration_s': 5})
    for name in ('detections.csv', 'gt_tracks.csv', 'truth_peaks.json',
                 'sim_config.json', os.path.join('svalues', 'lane_1.csv'),
                 os.path.join('svalues_truth', 'lane_8.csv')):
        assert os.path.isfile(os.path.join(race, name))

    # noiseless: detections are the ground truth boxes
    dets = formats.read_detections(os.path.join(race, 'detections.csv'))
    gt = formats.read_tracks(os.path.join(race, 'gt_tracks.csv'),
                             source='ground_truth')
    boxes = {(t.lane, f): b for t in gt for f, b in t.entries}
    assert len(dets) == len(boxes)
    for d in dets:
        assert d.box == pytest.approx(boxes[(d.lane, d.frame)])

    peaks = load(os.path.join(race, 'truth_peaks.json'))
    assert sorted(peaks['lanes'], key=int) == [str(k) for k in range(1, 9)]


def test_simulate_deterministic(workdir):
    a = simulate_race(workdir, NOISY, name='a')
    b = simulate_race(workdir, NOISY, name='b')
    for name in ('detections.csv', 'gt_tracks.csv', 'truth_peaks.json',
                 os.path.join('svalues', 'lane_3.csv')):
        assert read_bytes(os.path.join(a, name)) == \
            read_bytes(os.path.join(b, name))


def test_simulate_missing_config(workdir):
    status = run_main(simulate.main, [
        '--config', os.path.join(workdir, 'nope.json'),
        '--out-dir', os.path.join(workdir, 'race')])
    assert status == 2


def test_simulate_seed_from_env(workdir, monkeypatch):
    monkeypatch.setenv('SWIMTRACK_SEED', '17')
    race = simulate_race(workdir, {'duration_s': 2, 'seed': 1})
    assert load(os.path.join(race, 'sim_config.json'))['seed'] == 17

    monkeypatch.setenv('SWIMTRACK_SEED', 'x17')
    status = run_main(simulate.main,
                      ['--out-dir', os.path.join(workdir, 'other')])
    assert status == 2


def test_round_trip(workdir):
    race = simulate_race(workdir, NOISY)
    tracks = os.path.join(workdir, 'tracks.csv')
    crops = os.path.join(workdir, 'crops')
    assert run_main(track.main, [
        '--detections', os.path.join(race, 'detections.csv'),
        '--out', tracks,
        '--crops-dir', crops,
        '--pad', '5',
        '--bounds', '1920', '1080']) == 0
    assert os.listdir(crops)

    mot = os.path.join(workdir, 'mot.json')
    assert run_main(eval_mot.main, [
        '--gt', os.path.join(race, 'gt_tracks.csv'),
        '--hyp', tracks,
        '--out', mot]) == 0
    assert load(mot)['mota'] >= 90

    lane_json = os.path.join(workdir, 'lane_5.json')
    assert run_main(strokes.main, [
        '--svalues', os.path.join(race, 'svalues', 'lane_5.csv'),
        '--fps', '30',
        '--out', lane_json]) == 0
    result = load(lane_json)
    assert result['mean_spm'] == pytest.approx(60 * 1.0, rel=0.05)
    assert len(result['rates']) >= 2

    report = os.path.join(workdir, 'stroke.json')
    assert run_main(eval_stroke.main, [
        '--pred', lane_json,
        '--truth', os.path.join(race, 'truth_peaks.json'),
        '--lane', '5',
        '--svalues-pred', os.path.join(race, 'svalues', 'lane_5.csv'),
        '--svalues-truth', os.path.join(race, 'svalues_truth', 'lane_5.csv'),
        '--out', report]) == 0
    data = load(report)
    assert data['f1'] > 0.9
    assert 0 < data['delta'] < 0.1


def test_track_empty_file(workdir):
    dets = os.path.join(workdir, 'dets.csv')
    with open(dets, 'w'):
        pass
    out = os.path.join(workdir, 'tracks.csv')
    assert run_main(track.main, ['--detections', dets, '--out', out]) == 0
    assert formats.read_tracks(out) == []


def test_track_out_of_order(workdir):
    dets = os.path.join(workdir, 'dets.csv')
    with open(dets, 'w') as fh:
        fh.write("5,-1,0,0,10,10,1,2,-1\n4,-1,0,0,10,10,1,2,-1\n")
    status = run_main(track.main, [
        '--detections', dets, '--out', os.path.join(workdir, 't.csv')])
    assert status == 3


def test_track_ids_stable(workdir):
    race = simulate_race(workdir, {'duration_s': 5})
    out = os.path.join(workdir, 'tracks.csv')
    assert run_main(track.main, [
        '--detections', os.path.join(race, 'detections.csv'),
        '--out', out]) == 0
    tracks = formats.read_tracks(out)
    assert len(tracks) == 8
    assert all(len(t.entries) == 150 for t in tracks)


def test_track_bad_config(workdir):
    config = os.path.join(workdir, 'tracker.json')
    with open(config, 'w') as fh:
        json.dump({'max_age': -1}, fh)
    status = run_main(track.main, [
        '--detections', os.path.join(workdir, 'none.csv'),
        '--config', config,
        '--out', os.path.join(workdir, 't.csv')])
    assert status == 2


def test_strokes_errors(workdir):
    svalues = os.path.join(workdir, 's.csv')
    with open(svalues, 'w') as fh:
        fh.writelines("{f},0.5,0\n".format(f=f) for f in range(100))
    out = os.path.join(workdir, 'out.json')

    status = run_main(strokes.main,
                      ['--svalues', svalues, '--fps', '30', '--out', out])
    assert status == 4

    status = run_main(strokes.main,
                      ['--svalues', svalues, '--fps', '6', '--out', out])
    assert status == 2
    assert not os.path.exists(out)


def test_strokes_one_hertz(workdir):
    race = simulate_race(workdir, {'duration_s': 20, 'n_lanes': 1,
                                   'stroke_freq_hz': 1.0})
    out = os.path.join(workdir, 'out.json')
    assert run_main(strokes.main, [
        '--svalues', os.path.join(race, 'svalues', 'lane_1.csv'),
        '--fps', '30',
        '--track-id', '1',
        '--out', out]) == 0
    result = load(out)
    assert result['track_id'] == 1
    for rate in result['rates']:
        assert rate['spm'] == pytest.approx(60, rel=0.02)


def test_evaluations_identity(workdir):
    race = simulate_race(workdir, {'duration_s': 5})
    gt = os.path.join(race, 'gt_tracks.csv')

    mot = os.path.join(workdir, 'mot.json')
    assert run_main(eval_mot.main,
                    ['--gt', gt, '--hyp', gt, '--out', mot]) == 0
    assert load(mot)['mota'] == 100

    peaks = os.path.join(workdir, 'peaks.json')
    formats.write_json(peaks, [12.5, 42.5, 72.5])
    stroke_out = os.path.join(workdir, 'stroke.json')
    assert run_main(eval_stroke.main, [
        '--pred', peaks, '--truth', peaks, '--out', stroke_out]) == 0
    assert load(stroke_out)['f1'] == 1.0

    dets = os.path.join(race, 'detections.csv')
    det_out = os.path.join(workdir, 'det.json')
    assert run_main(eval_det.main,
                    ['--gt', dets, '--det', dets, '--out', det_out]) == 0
    assert load(det_out)['swimming'] == 1.0


def test_eval_stroke_needs_both_svalue_files(workdir):
    race = simulate_race(workdir, {'duration_s': 5, 'n_lanes': 1})
    peaks = os.path.join(workdir, 'peaks.json')
    formats.write_json(peaks, [12.5, 42.5, 72.5])
    out = os.path.join(workdir, 'stroke.json')
    status = run_main(eval_stroke.main, [
        '--pred', peaks, '--truth', peaks,
        '--svalues-pred', os.path.join(race, 'svalues', 'lane_1.csv'),
        '--out', out])
    assert status == 2
    assert not os.path.exists(out)


def test_eval_mot_interpolated(workdir):
    sparse = os.path.join(workdir, 'sparse.csv')
    with open(sparse, 'w') as fh:
        fh.write("0,-1,0,100,120,40,1,2,1\n9,-1,9,100,120,40,1,2,1\n")
    hyp = os.path.join(workdir, 'hyp.csv')
    with open(hyp, 'w') as fh:
        fh.writelines("{f},4,{f},100,120,40,1,2,1\n".format(f=f)
                      for f in range(10))
    out = os.path.join(workdir, 'mot.json')
    assert run_main(eval_mot.main, [
        '--gt', sparse, '--interpolate', '--hyp', hyp, '--out', out]) == 0
    report = load(out)
    assert report['num_gt_boxes'] == 10
    assert report['mota'] == 100


def test_pipeline(workdir):
    race = simulate_race(workdir, {'duration_s': 20})
    out_dir = os.path.join(workdir, 'out')
    argv = [
        '--detections', os.path.join(race, 'detections.csv'),
        '--svalues-dir', os.path.join(race, 'svalues_truth'),
        '--fps', '30',
        '--out-dir', out_dir,
        '--gt', os.path.join(race, 'gt_tracks.csv'),
        '--truth-peaks', os.path.join(race, 'truth_peaks.json'),
        '--svalues-truth-dir', os.path.join(race, 'svalues_truth'),
    ]
    assert run_main(pipeline.main, argv) == 0

    summary = load(os.path.join(out_dir, 'summary.json'))
    config = load(os.path.join(race, 'sim_config.json'))
    assert summary['num_tracks'] == 8
    assert summary['mot']['mota'] == 100
    for entry in summary['tracks']:
        assert entry['status'] == 'ok'
        freq = config['stroke_freq_hz'][entry['lane'] - 1]
        assert entry['mean_spm'] == pytest.approx(60 * freq, rel=0.02)
        # tops cut off at either end of the race are not reported
        assert entry['stroke_report']['precision'] == 1.0
        assert entry['stroke_report']['f1'] > 0.85
        assert entry['stroke_report']['delta'] == 0

    for name in ('tracks.csv', 'mot_report.json', 'crops/track_1.csv',
                 'strokes/track_1.json', 'stroke_reports/track_1.json'):
        assert os.path.isfile(os.path.join(out_dir, name))

    # reruns give the same files
    first = read_bytes(os.path.join(out_dir, 'summary.json'))
    assert run_main(pipeline.main, argv) == 0
    assert read_bytes(os.path.join(out_dir, 'summary.json')) == first


def test_pipeline_without_svalues(workdir):
    race = simulate_race(workdir, {'duration_s': 5})
    empty = os.path.join(workdir, 'empty')
    os.makedirs(empty)
    out_dir = os.path.join(workdir, 'out')
    assert run_main(pipeline.main, [
        '--detections', os.path.join(race, 'detections.csv'),
        '--svalues-dir', empty,
        '--fps', '30',
        '--out-dir', out_dir]) == 0

    summary = load(os.path.join(out_dir, 'summary.json'))
    assert {e['status'] for e in summary['tracks']} == {'no-svalues'}
    assert 'mot' not in summary


def test_pipeline_collects_track_errors(workdir):
    race = simulate_race(workdir, {'duration_s': 5})
    argv = [
        '--detections', os.path.join(race, 'detections.csv'),
        '--svalues-dir', os.path.join(race, 'svalues'),
        '--fps', '5',
        '--out-dir', os.path.join(workdir, 'out'),
    ]
    # a 3 Hz cutoff is above Nyquist at 5 fps
    assert run_main(pipeline.main, argv) == 2
    summary = load(os.path.join(workdir, 'out', 'summary.json'))
    assert {e['status'] for e in summary['tracks']} == {'error'}

    assert run_main(pipeline.main, argv + ['--fail-fast']) == 2
