"""PCM WAV input and TIMIT-style ``start end label`` segmentation files."""

from __future__ import annotations

import re
import wave
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dataset import DataError

_COMMENT = re.compile(r"(^|\s)#.*$")


def load_wav(path):
    """Read a mono 16-bit PCM WAV; returns ``(samples in [-1, 1), sample_rate)``."""
    path = Path(path)
    try:
        with wave.open(str(path), "rb") as w:
            channels = w.getnchannels()
            width = w.getsampwidth()
            rate = w.getframerate()
            if channels != 1:
                raise DataError(f"{path}: unsupported channels={channels}; only mono is supported")
            if width != 2:
                raise DataError(f"{path}: unsupported sample width={8 * width} bits; only 16-bit PCM")
            raw = w.readframes(w.getnframes())
    except wave.Error as exc:
        raise DataError(f"{path}: malformed or unsupported WAV header: {exc}") from exc
    except EOFError as exc:
        raise DataError(f"{path}: truncated WAV header") from exc
    samples = np.frombuffer(raw, dtype="<i2").astype(np.float64) / 32768.0
    return samples, rate


def save_wav(path, samples, sample_rate: int = 16000):
    """Write float samples in [-1, 1) as mono 16-bit PCM."""
    pcm = np.clip(np.round(np.asarray(samples, dtype=np.float64) * 32768.0), -32768, 32767)
    with wave.open(str(path), "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(2)
        w.setframerate(int(sample_rate))
        w.writeframes(pcm.astype("<i2").tobytes())


@dataclass(frozen=True)
class SegmentationRecord:
    start_sample: int
    end_sample: int
    label: str


def parse_segmentation_text(text: str, source: str = "<segmentation>") -> list:
    records = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = _COMMENT.sub("", line).strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise DataError(f"{source}:{lineno}: expected 'start end label', got {line!r}")
        try:
            start, end = int(parts[0]), int(parts[1])
        except ValueError:
            raise DataError(f"{source}:{lineno}: start/end must be integers, got {parts[0]!r} {parts[1]!r}") from None
        if start < 0 or start >= end:
            raise DataError(f"{source}:{lineno}: need 0 <= start < end, got {start} {end}")
        records.append(SegmentationRecord(start, end, parts[2]))
    return records


def parse_segmentation(path) -> list:
    path = Path(path)
    return parse_segmentation_text(path.read_text(), str(path))
