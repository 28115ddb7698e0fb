"""MFCC front end: framing, Hamming window, mel filterbank, DCT, deltas, frame stacking.

Defaults give 16 ms frames (256 samples at 16 kHz), a 128-sample hop (125 frames
per second), 13 cepstra plus first and second deltas (39 per frame) and three
stacked frames per phoneme (117 values).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.fft import dct

LOG_FLOOR = 1e-10


@dataclass(frozen=True)
class MfccConfig:
    sample_rate: int = 16000
    frame_size: int = 256
    hop: int = 128
    preemphasis: float = 0.97
    mel_filters: int = 26
    cepstral_count: int = 13
    delta_window: int = 2
    stack_frames: int = 3

    def __post_init__(self):
        if self.frame_size < 2 or self.hop < 1:
            raise ValueError("frame_size must be >= 2 and hop >= 1")
        if not 0 <= self.preemphasis < 1:
            raise ValueError(f"preemphasis must lie in [0, 1), got {self.preemphasis}")
        if self.cepstral_count > self.mel_filters:
            raise ValueError("cepstral_count cannot exceed mel_filters")
        if self.delta_window < 1 or self.stack_frames < 1:
            raise ValueError("delta_window and stack_frames must be >= 1")

    @property
    def frame_dim(self) -> int:
        return 3 * self.cepstral_count

    @property
    def phoneme_dim(self) -> int:
        return self.frame_dim * self.stack_frames

    @property
    def frames_per_second(self) -> float:
        return self.sample_rate / self.hop

    @property
    def nfft(self) -> int:
        return 1 << (self.frame_size - 1).bit_length()


def frame_signal(samples, config: MfccConfig = MfccConfig()) -> np.ndarray:
    x = np.asarray(samples, dtype=np.float64).reshape(-1)
    n = x.shape[0]
    if n < config.frame_size:
        raise ValueError(f"signal of {n} samples is shorter than one frame ({config.frame_size})")
    count = (n - config.frame_size) // config.hop + 1
    idx = np.arange(config.frame_size)[None, :] + config.hop * np.arange(count)[:, None]
    return x[idx]


def hamming(n: int) -> np.ndarray:
    if n < 2:
        raise ValueError(f"Hamming window needs n >= 2, got {n}")
    k = np.arange(n)
    w = 0.54 - 0.46 * np.cos(2.0 * np.pi * k / (n - 1))
    # exact mirror symmetry
    half = n // 2
    w[n - half:] = w[:half][::-1]
    return w


def hz_to_mel(f):
    return 2595.0 * np.log10(1.0 + np.asarray(f, dtype=np.float64) / 700.0)


def mel_to_hz(m):
    return 700.0 * (10.0 ** (np.asarray(m, dtype=np.float64) / 2595.0) - 1.0)


def mel_filterbank(config: MfccConfig = MfccConfig()) -> np.ndarray:
    """Triangular filters equally spaced in mel from 0 Hz to Nyquist, shape (filters, nfft//2+1)."""
    nyquist = config.sample_rate / 2.0
    edges = mel_to_hz(np.linspace(0.0, hz_to_mel(nyquist), config.mel_filters + 2))
    freqs = np.arange(config.nfft // 2 + 1) * config.sample_rate / config.nfft
    lo, mid, hi = edges[:-2, None], edges[1:-1, None], edges[2:, None]
    rising = (freqs[None, :] - lo) / (mid - lo)
    falling = (hi - freqs[None, :]) / (hi - mid)
    return np.maximum(0.0, np.minimum(rising, falling))


def _filterbank_energies(frames, config):
    frames = np.atleast_2d(np.asarray(frames, dtype=np.float64))
    if frames.shape[1] != config.frame_size:
        raise ValueError(f"frame length {frames.shape[1]} != frame_size {config.frame_size}")
    emph = frames.copy()
    emph[:, 1:] -= config.preemphasis * frames[:, :-1]
    spec = np.fft.rfft(emph * hamming(config.frame_size), n=config.nfft)
    power = spec.real ** 2 + spec.imag ** 2
    return power @ mel_filterbank(config).T


def filterbank_energies(frame, config: MfccConfig = MfccConfig()) -> np.ndarray:
    return _filterbank_energies(frame, config)[0]


def mfcc_frames(frames, config: MfccConfig = MfccConfig()) -> np.ndarray:
    energies = _filterbank_energies(frames, config)
    logs = np.log(np.maximum(energies, LOG_FLOOR))
    return dct(logs, type=2, axis=1, norm="ortho")[:, :config.cepstral_count]


def mfcc_frame(frame, config: MfccConfig = MfccConfig()) -> np.ndarray:
    return mfcc_frames(np.asarray(frame).reshape(1, -1), config)[0]


def _delta(c, window):
    T = c.shape[0]
    padded = np.concatenate([np.repeat(c[:1], window, axis=0), c, np.repeat(c[-1:], window, axis=0)])
    num = np.zeros_like(c)
    for d in range(1, window + 1):
        num += d * (padded[window + d:window + d + T] - padded[window - d:window - d + T])
    return num / (2.0 * sum(d * d for d in range(1, window + 1)))


def add_deltas(cepstra, delta_window: int = 2) -> np.ndarray:
    """Append regression deltas and delta-deltas (edges replicated): (T, n) -> (T, 3n)."""
    c = np.atleast_2d(np.asarray(cepstra, dtype=np.float64))
    if c.shape[0] == 0:
        raise ValueError("cannot compute deltas of an empty frame sequence")
    d1 = _delta(c, delta_window)
    d2 = _delta(d1, delta_window)
    return np.hstack([c, d1, d2])


def phoneme_vector(frames39, span, stack_frames: int = 3) -> np.ndarray:
    """Concatenate ``stack_frames`` frames centred on the span midpoint.

    Frames falling outside the span are replaced by the nearest frame inside it.
    """
    F = np.atleast_2d(np.asarray(frames39, dtype=np.float64))
    first, last = int(span[0]), int(span[1])
    if last < first:
        raise ValueError(f"empty span {span}")
    if first < 0 or last >= F.shape[0]:
        raise ValueError(f"span {span} outside 0..{F.shape[0] - 1}")
    mid = (first + last) // 2
    offsets = np.arange(stack_frames) - stack_frames // 2
    idx = np.clip(mid + offsets, first, last)
    return F[idx].reshape(-1)


def utterance_features(samples, config: MfccConfig = MfccConfig()) -> np.ndarray:
    """Per-frame 39-dim features of a whole utterance, shape (frames, 3 * cepstral_count)."""
    return add_deltas(mfcc_frames(frame_signal(samples, config), config), config.delta_window)


def samples_to_span(start: int, end: int, n_frames: int, config: MfccConfig = MfccConfig()):
    """Map a sample interval [start, end) to an inclusive frame-index span.

    Frame t starts at ``t * hop``; the span covers frames starting inside the interval,
    clamped to the frames that exist.
    """
    first = min(-(-start // config.hop), n_frames - 1)
    last = min(max((end - 1) // config.hop, first), n_frames - 1)
    return first, last


def segment_vectors(samples, segments, config: MfccConfig = MfccConfig()) -> np.ndarray:
    """One stacked phoneme vector per (start, end) segment, shape (segments, phoneme_dim)."""
    frames = utterance_features(samples, config)
    out = np.empty((len(segments), config.phoneme_dim))
    for k, (start, end) in enumerate(segments):
        span = samples_to_span(start, end, frames.shape[0], config)
        out[k] = phoneme_vector(frames, span, config.stack_frames)
    return out
