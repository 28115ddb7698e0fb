"""``bsvm`` command line: features, train, predict, evaluate.

Option precedence: command-line flag > ``--config`` JSON file > built-in default.
Built-in defaults: RBF kernel, C = 10, gamma = 1/feature_dim (1/117 for stacked
phoneme vectors), 39 features per frame, 16 ms frames at 16 kHz, 125 frames per second.

Exit codes: 0 success, 1 usage error, 2 data error, 3 more non-converged binary
models than ``--max-nonconverged`` allows (the model is still written).
``BSVM_LOG_LEVEL`` sets log verbosity (default WARNING).
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from .data import DataError, LabeledDataset, load_wav, parse_segmentation, read_feature_table, write_feature_table
from .data.modelio import load_model, save_model
from .features import MfccConfig, segment_vectors
from .hierarchy import HierarchicalModel, load_taxonomy, predict_hierarchical_batch, train_hierarchical
from .kernels import KernelSpec
from .metrics import evaluate, format_confusion, format_csv, format_table, report_rows
from .multiclass import ConstantModel, OvoModel, predict_ovo_batch, train_ovo
from .solver import SolverConfig

log = logging.getLogger("bsvm")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NONCONVERGED = 0, 1, 2, 3

DEFAULTS = {
    "kernel": "rbf",
    "gamma": None,  # 1 / feature dimension
    "c": 10.0,
    "tolerance": 1e-3,
    "max_passes": 1000,
    "seed": 0,
    "epsilon": 1e-9,
    "belief": True,
    "hierarchy": None,
    "max_nonconverged": None,
    "sample_rate": 16000,
    "frame_size": 256,
    "hop": 128,
    "preemphasis": 0.97,
    "mel_filters": 26,
    "cepstra": 13,
    "delta_window": 2,
    "stack_frames": 3,
    "seg_ext": ".phn",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _resolve(args, config, key):
    value = getattr(args, key, None)
    if value is not None:
        return value
    if key in config:
        return config[key]
    return DEFAULTS[key]


def _load_config(path):
    if path is None:
        return {}
    try:
        cfg = json.loads(Path(path).read_text())
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise UsageError(f"config {path} must hold a JSON object")
    unknown = sorted(set(k.replace("-", "_") for k in cfg) - set(DEFAULTS))
    if unknown:
        raise UsageError(f"unknown config key(s): {', '.join(unknown)}")
    return {k.replace("-", "_"): v for k, v in cfg.items()}


def mfcc_config(args, config) -> MfccConfig:
    r = lambda k: _resolve(args, config, k)  # noqa: E731
    return MfccConfig(
        sample_rate=int(r("sample_rate")),
        frame_size=int(r("frame_size")),
        hop=int(r("hop")),
        preemphasis=float(r("preemphasis")),
        mel_filters=int(r("mel_filters")),
        cepstral_count=int(r("cepstra")),
        delta_window=int(r("delta_window")),
        stack_frames=int(r("stack_frames")),
    )


# ---------------------------------------------------------------- features

def _wav_files(inputs):
    files = []
    for item in inputs:
        p = Path(item)
        if p.is_dir():
            files.extend(sorted(q for q in p.rglob("*") if q.suffix.lower() == ".wav"))
        elif p.exists():
            files.append(p)
        else:
            raise DataError(f"{p}: no such file or directory")
    return files


def cmd_features(inputs, out, mfcc: MfccConfig = MfccConfig(), seg_ext: str = ".phn") -> int:
    """Write one CSV row (label + stacked features) per segmentation record. Returns row count."""
    labels, rows = [], []
    for wav in _wav_files(inputs):
        seg = wav.with_suffix(seg_ext)
        if not seg.exists():
            raise DataError(f"{wav}: missing segmentation file {seg}")
        samples, rate = load_wav(wav)
        if rate != mfcc.sample_rate:
            raise DataError(f"{wav}: sample rate {rate} Hz does not match configured {mfcc.sample_rate} Hz")
        records = parse_segmentation(seg)
        if not records:
            continue
        if samples.shape[0] < mfcc.frame_size:
            raise DataError(f"{wav}: {samples.shape[0]} samples is shorter than one frame")
        vecs = segment_vectors(samples, [(r.start_sample, r.end_sample) for r in records], mfcc)
        labels.extend(r.label for r in records)
        rows.append(vecs)
        log.info("%s: %d segments", wav, len(records))
    X = np.vstack(rows) if rows else np.empty((0, mfcc.phoneme_dim))
    write_feature_table(out, X, labels, dim=mfcc.phoneme_dim)
    return len(labels)


# ---------------------------------------------------------------- train

def _all_flat(model):
    if isinstance(model, HierarchicalModel):
        return [(name, m) for name, m in model.submodels()]
    return [("model", model)]


def cmd_train(train_csv, out, *, kernel="rbf", gamma=None, c=10.0, tolerance=1e-3, max_passes=1000,
              seed=0, belief=True, hierarchy=None, epsilon=1e-9, backend=None, stream=None):
    """Train a flat or hierarchical model and write it. Returns the model."""
    stream = stream or sys.stdout
    labels, X, beliefs = read_feature_table(train_csv)
    if labels is None:
        raise DataError(f"{train_csv}: training data needs a label column")
    dataset = LabeledDataset(X, labels, beliefs)
    if len(dataset) == 0:
        raise DataError(f"{train_csv}: no training samples")
    spec = KernelSpec.for_dimension(kernel, dataset.dim, gamma)
    config = SolverConfig(c=float(c), tolerance=float(tolerance), max_passes=int(max_passes), seed=int(seed))
    if hierarchy:
        model = train_hierarchical(dataset, load_taxonomy(hierarchy), spec, config, belief, epsilon, backend)
    else:
        model = train_ovo(dataset, spec, config, belief, epsilon, backend)
    print(f"kernel={spec.kind} gamma={spec.gamma!r} C={config.c!r} beliefs={'on' if belief else 'off'} "
          f"samples={len(dataset)} dim={dataset.dim}", file=stream)
    for name, sub in _all_flat(model):
        if isinstance(sub, ConstantModel):
            print(f"{name}: constant {sub.label}", file=stream)
            continue
        for a, b, m in sub.pairs:
            status = "ok" if m.converged else "NOT CONVERGED"
            print(f"{name} {a}/{b}: sv={m.sv_alphas.size} iter={m.n_iter} kkt_gap={m.kkt_gap:.3e} {status}",
                  file=stream)
    save_model(model, out)
    return model


def count_nonconverged(model) -> int:
    return sum(len(sub.nonconverged) for _, sub in _all_flat(model))


# ---------------------------------------------------------------- predict / evaluate

def _check_dim(model, X, source):
    if X.shape[1] != model.dim:
        raise DataError(f"{source}: data has {X.shape[1]} features but the model expects {model.dim}")


def _fmt_votes(votes: dict) -> str:
    return ";".join(f"{k}:{v}" for k, v in votes.items())


def predict_table(model, X):
    """Predictions for a matrix: dict of column name -> list."""
    if isinstance(model, HierarchicalModel):
        coarse, fine, votes1, fine_votes = predict_hierarchical_batch(model, X)
        return {
            "coarse": coarse,
            "fine": fine,
            "coarse_votes": [_fmt_votes(dict(zip(model.level1.labels, v.tolist()))) for v in votes1],
            "fine_votes": [_fmt_votes(v) for v in fine_votes],
        }
    labels, votes, _ = predict_ovo_batch(model, X)
    return {"predicted": labels,
            "votes": [_fmt_votes(dict(zip(model.labels, v.tolist()))) for v in votes]}


def cmd_predict(model_path, input_csv, out):
    model = load_model(model_path)
    labels, X, _ = read_feature_table(input_csv)
    if X.shape[0]:
        _check_dim(model, X, input_csv)
    cols = predict_table(model, X) if X.shape[0] else {
        k: [] for k in (("coarse", "fine", "coarse_votes", "fine_votes")
                        if isinstance(model, HierarchicalModel) else ("predicted", "votes"))}
    names = (["label"] if labels is not None else []) + list(cols)
    with Path(out).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        for i in range(X.shape[0]):
            row = ([labels[i]] if labels is not None else []) + [cols[k][i] for k in cols]
            w.writerow(row)
    return cols


def evaluation_blocks(model, X, truth):
    """Report blocks ``[(title, rows, report)]`` for a model on labeled data."""
    if isinstance(model, HierarchicalModel):
        tax = model.taxonomy
        unknown = sorted(set(truth) - set(tax.coarse_of))
        if unknown:
            raise DataError(f"label {unknown[0]!r} is not in the model's taxonomy")
        coarse_pred, fine_pred, _, _ = predict_hierarchical_batch(model, X)
        coarse_true = [tax.coarse_of[t] for t in truth]
        level1 = evaluate(coarse_pred, coarse_true)
        level2 = evaluate(fine_pred, truth)
        rows = report_rows("Level 2", level2, with_classes=False)
        true_arr = np.array(coarse_true, dtype=object)
        for c in tax.coarse_labels:
            idx = np.flatnonzero(true_arr == c)
            if idx.size:
                sub = evaluate([fine_pred[i] for i in idx], [truth[i] for i in idx])
                rows += report_rows(f"  {c}", sub, with_classes=False)
        return [("Level 1", report_rows("Level 1", level1), level1), ("Level 2", rows, level2)]
    pred, _, _ = predict_ovo_batch(model, X)
    report = evaluate(pred, truth)
    return [("All", report_rows("All", report), report)]


def cmd_evaluate(model_path, labeled_csv, csv_out=None, confusion=False, stream=None):
    stream = stream or sys.stdout
    model = load_model(model_path)
    truth, X, _ = read_feature_table(labeled_csv)
    if truth is None:
        raise DataError(f"{labeled_csv}: evaluation data needs a label column")
    if X.shape[0] == 0:
        raise DataError(f"{labeled_csv}: no samples to evaluate")
    _check_dim(model, X, labeled_csv)
    blocks = evaluation_blocks(model, X, truth)
    all_rows = []
    for title, rows, report in blocks:
        print(format_table(rows), file=stream)
        if confusion:
            print(f"confusion ({title}; rows = truth, columns = prediction)", file=stream)
            print(format_confusion(report), file=stream)
        all_rows.extend(rows)
    if csv_out:
        Path(csv_out).write_text(format_csv(all_rows))
    return [report for _, _, report in blocks]


# ---------------------------------------------------------------- argument parsing

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bsvm", description="Belief-weighted SVM phoneme recognition.")
    p.add_argument("--config", help="JSON file of option defaults (flags still win)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    f = sub.add_parser("features", help="extract stacked MFCC phoneme vectors from WAV + segmentation")
    f.add_argument("inputs", nargs="+", help="WAV files or directories searched recursively")
    f.add_argument("--out", "-o", required=True, help="feature CSV to write")
    f.add_argument("--seg-ext", help="segmentation file extension next to each WAV (default .phn)")
    f.add_argument("--sample-rate", type=int, help="expected sample rate in Hz (default 16000)")
    f.add_argument("--frame-size", type=int, help="frame length in samples (default 256 = 16 ms at 16 kHz)")
    f.add_argument("--hop", type=int, help="frame stride in samples (default 128 = 125 frames/s)")
    f.add_argument("--preemphasis", type=float, help="pre-emphasis coefficient (default 0.97)")
    f.add_argument("--mel-filters", type=int, help="mel filter count (default 26)")
    f.add_argument("--cepstra", type=int, help="cepstral coefficients incl. c0 (default 13; 39 with deltas)")
    f.add_argument("--delta-window", type=int, help="delta regression half-window (default 2)")
    f.add_argument("--stack-frames", type=int, help="frames stacked around the midpoint (default 3 -> 117 dims)")

    t = sub.add_parser("train", help="train a one-vs-one or hierarchical model")
    t.add_argument("train_csv")
    t.add_argument("--out", "-o", required=True, help="model file to write")
    t.add_argument("--belief", dest="belief", action="store_true", default=None,
                   help="weight samples by centroid-distance beliefs (default)")
    t.add_argument("--no-belief", dest="belief", action="store_false", help="standard SVM baseline")
    t.add_argument("--hierarchy", metavar="TAXONOMY", help="'<fine> <coarse>' file; trains two levels")
    t.add_argument("--kernel", choices=["rbf", "linear"], help="kernel (default rbf)")
    t.add_argument("--gamma", type=float, help="RBF width (default 1/feature_dim, i.e. 1/117)")
    t.add_argument("--c", type=float, help="penalty C (default 10)")
    t.add_argument("--tolerance", type=float, help="KKT stopping tolerance (default 1e-3)")
    t.add_argument("--max-passes", type=int, help="iteration cap as multiples of pair size (default 1000)")
    t.add_argument("--seed", type=int, help="working-pair scan order seed (default 0)")
    t.add_argument("--epsilon", type=float, help="zero-distance guard for beliefs (default 1e-9)")
    t.add_argument("--max-nonconverged", type=int,
                   help="exit 3 if more binary models than this fail to converge (default: never)")

    pr = sub.add_parser("predict", help="predict labels for a feature CSV")
    pr.add_argument("model")
    pr.add_argument("input_csv")
    pr.add_argument("--out", "-o", required=True, help="prediction CSV to write")

    e = sub.add_parser("evaluate", help="accuracy / macro precision / macro recall report")
    e.add_argument("model")
    e.add_argument("labeled_csv")
    e.add_argument("--csv", dest="csv_out", help="also write the report as CSV")
    e.add_argument("--confusion", action="store_true", help="print confusion matrices")
    return p


def main(argv=None) -> int:
    level = os.environ.get("BSVM_LOG_LEVEL", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(args.config)
        r = lambda k: _resolve(args, config, k)  # noqa: E731
        if args.command == "features":
            n = cmd_features(args.inputs, args.out, mfcc_config(args, config), r("seg_ext"))
            print(f"wrote {n} rows to {args.out}")
        elif args.command == "train":
            model = cmd_train(
                args.train_csv, args.out, kernel=r("kernel"), gamma=r("gamma"), c=r("c"),
                tolerance=r("tolerance"), max_passes=r("max_passes"), seed=r("seed"), belief=r("belief"),
                hierarchy=r("hierarchy"), epsilon=r("epsilon"),
            )
            bad = count_nonconverged(model)
            limit = r("max_nonconverged")
            if bad:
                print(f"warning: {bad} binary model(s) did not converge", file=sys.stderr)
            if limit is not None and bad > int(limit):
                return EXIT_NONCONVERGED
        elif args.command == "predict":
            cmd_predict(args.model, args.input_csv, args.out)
        elif args.command == "evaluate":
            cmd_evaluate(args.model, args.labeled_csv, args.csv_out, args.confusion)
    except UsageError as exc:
        print(f"bsvm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, ValueError, OSError) as exc:
        print(f"bsvm: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
