"""Dataset containers and file formats. Model files live in :mod:`bsvm.data.modelio`."""

from .audio import SegmentationRecord, load_wav, parse_segmentation, save_wav
from .csvio import load_feature_csv, read_feature_table, save_feature_csv, write_feature_table
from .dataset import DataError, LabeledDataset, split

__all__ = [
    "DataError",
    "LabeledDataset",
    "SegmentationRecord",
    "load_feature_csv",
    "load_wav",
    "parse_segmentation",
    "read_feature_table",
    "save_feature_csv",
    "save_wav",
    "split",
    "write_feature_table",
]
