import numpy as np
import pytest

from oracles import si_oracle, ti_oracle
from qrhull.errors import GeometryError, ValidationError
from qrhull.features import content_features, spatial_information, temporal_information


def frames_from(arrays):
    return [np.asarray(a, dtype=np.uint8) for a in arrays]


class TestTemporalInformation:
    def test_static_sequence_is_zero(self, rng):
        frame = rng.integers(0, 256, (8, 8), dtype=np.uint8)
        per, ti = temporal_information([frame] * 5)
        assert per == [0.0] * 4
        assert ti == 0.0

    def test_two_frame_hand_case(self):
        f0 = np.zeros((2, 2), dtype=np.uint8)
        f1 = np.array([[0, 0], [2, 2]], dtype=np.uint8)
        per, ti = temporal_information([f0, f1])
        # differences {0, 0, 2, 2}: population std = 1
        assert per == [1.0]
        assert ti == 1.0

    def test_brightness_shift_invariance(self, rng):
        frames = [rng.integers(0, 200, (8, 8), dtype=np.uint8) for _ in range(4)]
        shifted = [(f + 50).astype(np.uint8) for f in frames]
        assert temporal_information(frames) == temporal_information(shifted)

    def test_matches_oracle(self, rng):
        frames = [rng.integers(0, 256, (12, 16), dtype=np.uint8) for _ in range(5)]
        per, ti = temporal_information(frames)
        per_exp, ti_exp = ti_oracle([f.tolist() for f in frames])
        for got, exp in zip(per, per_exp):
            assert got == pytest.approx(exp, rel=1e-9)
        assert ti == pytest.approx(ti_exp, rel=1e-9)

    def test_needs_two_frames(self, rng):
        with pytest.raises(ValidationError):
            temporal_information([rng.integers(0, 256, (8, 8), dtype=np.uint8)])


class TestSpatialInformation:
    def test_constant_frame_is_zero(self):
        per, si = spatial_information([np.full((8, 8), 77, dtype=np.uint8)])
        assert per == [0.0]
        assert si == 0.0

    def test_vertical_step_edge(self):
        frame = np.zeros((8, 8), dtype=np.uint8)
        frame[:, 4:] = 255
        per, si = spatial_information([frame])
        per_exp, si_exp = si_oracle([frame.tolist()])
        assert per[0] == pytest.approx(per_exp[0], rel=1e-9)
        assert si == pytest.approx(si_exp, rel=1e-9)

    def test_mirror_invariance(self, rng):
        frame = rng.integers(0, 256, (10, 10), dtype=np.uint8)
        _, si = spatial_information([frame])
        _, si_h = spatial_information([frame[:, ::-1].copy()])
        _, si_v = spatial_information([frame[::-1, :].copy()])
        _, si_r = spatial_information([frame[::-1, ::-1].copy()])
        assert si_h == pytest.approx(si, rel=1e-12)
        assert si_v == pytest.approx(si, rel=1e-12)
        assert si_r == pytest.approx(si, rel=1e-12)

    def test_matches_oracle(self, rng):
        frames = [rng.integers(0, 256, (16, 16), dtype=np.uint8) for _ in range(3)]
        per, si = spatial_information(frames)
        per_exp, si_exp = si_oracle([f.tolist() for f in frames])
        for got, exp in zip(per, per_exp):
            assert got == pytest.approx(exp, rel=1e-9)
        assert si == pytest.approx(si_exp, rel=1e-9)

    def test_too_small_frame(self):
        with pytest.raises(GeometryError):
            spatial_information([np.zeros((2, 8), dtype=np.uint8)])


class TestScaling:
    def test_features_scale_linearly(self, rng):
        # std is absolutely homogeneous: feature(c * video) = c * feature(video)
        base = [rng.integers(0, 64, (8, 8), dtype=np.uint8) for _ in range(4)]
        tripled = [(f * 3).astype(np.uint8) for f in base]
        feats = content_features(base)
        feats3 = content_features(tripled)
        assert feats3.si == pytest.approx(3 * feats.si, rel=1e-9)
        assert feats3.ti == pytest.approx(3 * feats.ti, rel=1e-9)


def test_content_features_means(rng):
    frames = [rng.integers(0, 256, (8, 8), dtype=np.uint8) for _ in range(4)]
    feats = content_features(frames)
    assert feats.si == pytest.approx(np.mean(feats.per_frame_si))
    assert feats.ti == pytest.approx(np.mean(feats.per_frame_ti))
    assert len(feats.per_frame_ti) == len(feats.per_frame_si) - 1
    assert all(v >= 0 for v in feats.per_frame_si + feats.per_frame_ti)
