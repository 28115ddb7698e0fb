import math

import numpy as np
import pytest

from bsvm.features import (
    LOG_FLOOR,
    MfccConfig,
    add_deltas,
    filterbank_energies,
    frame_signal,
    hamming,
    mfcc_frame,
    phoneme_vector,
    samples_to_span,
    segment_vectors,
    utterance_features,
)

CFG = MfccConfig()


def test_defaults_match_setup():
    assert CFG.frame_size / CFG.sample_rate == 0.016
    assert CFG.frames_per_second == 125
    assert CFG.frame_dim == 39 and CFG.phoneme_dim == 117


def test_frame_count():
    assert frame_signal(np.zeros(16000)).shape == (124, 256)
    assert (16000 - 256) // 128 + 1 == 124
    assert frame_signal(np.zeros(256)).shape == (1, 256)
    with pytest.raises(ValueError):
        frame_signal(np.zeros(255))


def test_frames_are_strided_views():
    x = np.arange(1000.0)
    f = frame_signal(x)
    np.testing.assert_array_equal(f[3], x[384:640])


def test_hamming():
    np.testing.assert_allclose(hamming(3), [0.08, 1.0, 0.08], atol=1e-15)
    np.testing.assert_allclose(hamming(2), [0.08, 0.08], atol=1e-15)
    for n in (2, 7, 256):
        w = hamming(n)
        np.testing.assert_array_equal(w, w[::-1])
        k = np.arange(n)
        np.testing.assert_allclose(w, 0.54 - 0.46 * np.cos(2 * np.pi * k / (n - 1)), atol=1e-15)
    with pytest.raises(ValueError):
        hamming(1)


def _mfcc_oracle(frame, cfg):
    """Loop-level MFCC with explicit DFT and DCT sums."""
    n = len(frame)
    emph = [frame[0]] + [frame[i] - cfg.preemphasis * frame[i - 1] for i in range(1, n)]
    win = [emph[i] * (0.54 - 0.46 * math.cos(2 * math.pi * i / (n - 1))) for i in range(n)]
    nfft = 1
    while nfft < n:
        nfft *= 2
    power = []
    for k in range(nfft // 2 + 1):
        re = sum(win[i] * math.cos(2 * math.pi * k * i / nfft) for i in range(n))
        im = -sum(win[i] * math.sin(2 * math.pi * k * i / nfft) for i in range(n))
        power.append(re * re + im * im)
    mel = lambda f: 2595 * math.log10(1 + f / 700)  # noqa: E731
    imel = lambda m: 700 * (10 ** (m / 2595) - 1)  # noqa: E731
    top = mel(cfg.sample_rate / 2)
    edges = [imel(top * i / (cfg.mel_filters + 1)) for i in range(cfg.mel_filters + 2)]
    logs = []
    for j in range(cfg.mel_filters):
        lo, c, hi = edges[j], edges[j + 1], edges[j + 2]
        e = 0.0
        for k, p in enumerate(power):
            f = k * cfg.sample_rate / nfft
            w = max(0.0, min((f - lo) / (c - lo), (hi - f) / (hi - c)))
            e += w * p
        logs.append(math.log(max(e, LOG_FLOOR)))
    M = cfg.mel_filters
    out = []
    for q in range(cfg.cepstral_count):
        s = sum(logs[j] * math.cos(math.pi * q * (2 * j + 1) / (2 * M)) for j in range(M))
        out.append(s * math.sqrt((1 if q == 0 else 2) / M))
    return out


def test_mfcc_against_loop_oracle():
    rng = np.random.default_rng(0)
    frame = rng.standard_normal(256) * 0.1
    np.testing.assert_allclose(mfcc_frame(frame), _mfcc_oracle(frame.tolist(), CFG), rtol=1e-9, atol=1e-9)


def test_mfcc_zero_frame():
    c = mfcc_frame(np.zeros(256))
    assert c.shape == (13,)
    np.testing.assert_allclose(c[1:], 0.0, atol=1e-9)
    assert c[0] == pytest.approx(math.sqrt(26) * math.log(LOG_FLOOR), rel=1e-12)


def test_mfcc_deterministic():
    frame = np.sin(np.arange(256) * 0.3)
    np.testing.assert_array_equal(mfcc_frame(frame), mfcc_frame(frame.copy()))


def test_mfcc_wrong_length():
    with pytest.raises(ValueError):
        mfcc_frame(np.zeros(100))


def test_tone_lands_in_expected_band():
    # expected band from the mel edge formula: the filter with the largest triangle weight at 1 kHz
    top = 2595 * math.log10(1 + 8000 / 700)
    edges = [700 * (10 ** (top * i / 27 / 2595) - 1) for i in range(28)]
    weights = [max(0.0, min((1000 - edges[j]) / (edges[j + 1] - edges[j]),
                            (edges[j + 2] - 1000) / (edges[j + 2] - edges[j + 1]))) for j in range(26)]
    expected = int(np.argmax(weights))
    assert expected == 8
    t = np.arange(256) / 16000
    energies = filterbank_energies(np.sin(2 * np.pi * 1000 * t))
    assert int(np.argmax(energies)) == expected
    assert energies[8:10].sum() > 0.9 * energies.sum()


def test_deltas_constant_are_zero():
    out = add_deltas(np.tile(np.arange(13.0), (10, 1)))
    assert out.shape == (10, 39)
    assert np.all(out[:, 13:] == 0.0)


def test_deltas_linear_ramp():
    slope = 0.7
    c = slope * np.arange(20.0)[:, None] * np.ones((1, 13))
    out = add_deltas(c, 2)
    np.testing.assert_allclose(out[2:-2, 13:26], slope, rtol=1e-12)
    np.testing.assert_allclose(out[4:-4, 26:], 0.0, atol=1e-12)


def test_deltas_single_frame_and_empty():
    out = add_deltas(np.ones((1, 13)))
    assert np.all(out[:, 13:] == 0.0)
    with pytest.raises(ValueError):
        add_deltas(np.empty((0, 13)))


def test_phoneme_vector():
    F = np.arange(20 * 39, dtype=float).reshape(20, 39)
    np.testing.assert_array_equal(phoneme_vector(F, (10, 14)), F[[11, 12, 13]].reshape(-1))
    np.testing.assert_array_equal(phoneme_vector(F, (5, 5)), np.tile(F[5], 3))
    np.testing.assert_array_equal(phoneme_vector(F, (4, 5)), F[[4, 4, 5]].reshape(-1))
    assert phoneme_vector(F, (0, 19)).shape == (117,)
    with pytest.raises(ValueError):
        phoneme_vector(F, (5, 4))
    with pytest.raises(ValueError):
        phoneme_vector(F, (18, 20))


def test_samples_to_span():
    assert samples_to_span(0, 1600, 124) == (0, 12)
    assert samples_to_span(1280, 1281, 124) == (10, 10)
    assert samples_to_span(1290, 1300, 124) == (11, 11)
    assert samples_to_span(15900, 16000, 124) == (123, 123)


def test_silence_is_finite_and_dimensioned():
    feats = utterance_features(np.zeros(16000))
    assert feats.shape == (124, 39)
    assert np.all(np.isfinite(feats))
    vecs = segment_vectors(np.zeros(16000), [(0, 1600), (1600, 8000), (8000, 16000)])
    assert vecs.shape == (3, 117) and np.all(np.isfinite(vecs))


def test_pipeline_deterministic():
    x = np.random.default_rng(1).standard_normal(8000) * 0.1
    a = segment_vectors(x, [(0, 4000), (4000, 8000)])
    b = segment_vectors(x.copy(), [(0, 4000), (4000, 8000)])
    np.testing.assert_array_equal(a, b)
