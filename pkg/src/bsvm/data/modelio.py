"""Text model files.

Layout::

    BSVM-MODEL v1
    { ... JSON body ... }
    checksum <16 hex digits>

The checksum is a 64-bit BLAKE2b digest of every byte before the checksum line.
Floats are written with ``repr`` so a round trip reproduces the model exactly.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from ..hierarchy import HierarchicalModel, Taxonomy
from ..kernels import KernelSpec
from ..multiclass import ConstantModel, OvoModel
from ..solver import BinaryModel
from .dataset import DataError

MAGIC = "BSVM-MODEL"
VERSION = "v1"


class ModelFormatError(DataError):
    pass


class ChecksumError(ModelFormatError):
    pass


class VersionError(ModelFormatError):
    pass


def _checksum(body: bytes) -> str:
    return hashlib.blake2b(body, digest_size=8).hexdigest()


def _dump(obj, indent=0) -> str:
    # scalar lists stay on one line; everything else is indented
    pad = " " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad} {json.dumps(str(k))}: {_dump(v, indent + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, list):
        if all(not isinstance(v, (dict, list)) for v in obj):
            return json.dumps(obj)
        items = [f"{pad} {_dump(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    return json.dumps(obj)


def _kernel_to(k: KernelSpec):
    return {"kind": k.kind, "gamma": k.gamma}


def _binary_to(m: BinaryModel):
    return {
        "bias": m.bias,
        "c": m.c,
        "converged": m.converged,
        "kkt_gap": m.kkt_gap,
        "n_iter": m.n_iter,
        "objective": m.objective,
        "kernel": _kernel_to(m.kernel),
        "dim": m.dim,
        "sv_indices": m.sv_indices.tolist(),
        "alphas": m.sv_alphas.tolist(),
        "labels": m.sv_labels.tolist(),
        "beliefs": m.sv_beliefs.tolist(),
        "vectors": m.support_vectors.tolist(),
    }


def _binary_from(d) -> BinaryModel:
    dim = int(d["dim"])
    return BinaryModel(
        support_vectors=np.array(d["vectors"], dtype=np.float64).reshape(-1, dim),
        sv_labels=np.array(d["labels"], dtype=np.float64),
        sv_alphas=np.array(d["alphas"], dtype=np.float64),
        sv_beliefs=np.array(d["beliefs"], dtype=np.float64),
        bias=float(d["bias"]),
        kernel=KernelSpec(**d["kernel"]),
        c=float(d["c"]),
        sv_indices=np.array(d["sv_indices"], dtype=np.int64),
        converged=bool(d["converged"]),
        kkt_gap=float(d["kkt_gap"]),
        n_iter=int(d["n_iter"]),
        objective=float(d["objective"]),
    )


def _flat_to(m):
    if isinstance(m, ConstantModel):
        return {"type": "constant", "label": m.label, "dim": m.dim}
    return {
        "type": "ovo",
        "labels": list(m.labels),
        "use_beliefs": m.use_beliefs,
        "kernel": _kernel_to(m.kernel),
        "pairs": [{"positive": a, "negative": b, "model": _binary_to(bm)} for a, b, bm in m.pairs],
    }


def _flat_from(d):
    if d["type"] == "constant":
        return ConstantModel(d["label"], int(d["dim"]))
    if d["type"] != "ovo":
        raise ModelFormatError(f"unknown sub-model type {d['type']!r}")
    pairs = tuple((p["positive"], p["negative"], _binary_from(p["model"])) for p in d["pairs"])
    return OvoModel(tuple(d["labels"]), pairs, KernelSpec(**d["kernel"]), bool(d["use_beliefs"]))


def model_to_dict(model) -> dict:
    if isinstance(model, HierarchicalModel):
        return {
            "type": "hierarchical",
            "taxonomy": [[f, model.taxonomy.coarse_of[f]] for f in model.taxonomy.fine_labels],
            "level1": _flat_to(model.level1),
            "level2": [[c, _flat_to(model.level2[c])] for c in model.taxonomy.coarse_labels],
        }
    if isinstance(model, (OvoModel, ConstantModel)):
        return _flat_to(model)
    raise TypeError(f"cannot serialize {type(model).__name__}")


def model_from_dict(d):
    if d.get("type") == "hierarchical":
        taxonomy = Taxonomy({f: c for f, c in d["taxonomy"]})
        return HierarchicalModel(_flat_from(d["level1"]),
                                 {c: _flat_from(sub) for c, sub in d["level2"]}, taxonomy)
    return _flat_from(d)


def dumps_model(model) -> str:
    body = f"{MAGIC} {VERSION}\n{_dump(model_to_dict(model))}\n"
    return body + f"checksum {_checksum(body.encode())}\n"


def loads_model(text: str, source: str = "<model>"):
    first = text.split("\n", 1)[0].strip()
    parts = first.split()
    if len(parts) != 2 or parts[0] != MAGIC:
        raise ModelFormatError(f"{source}: not a model file (first line {first!r})")
    if parts[1] != VERSION:
        raise VersionError(f"{source}: model version {parts[1]!r} is not supported (expected {VERSION})")
    body, sep, tail = text.rstrip("\n").rpartition("\n")
    if not sep or not tail.startswith("checksum "):
        raise ChecksumError(f"{source}: checksum line missing; file truncated or corrupted")
    body += "\n"
    if _checksum(body.encode()) != tail.split()[1]:
        raise ChecksumError(f"{source}: checksum mismatch; file truncated or corrupted")
    try:
        payload = json.loads(body.split("\n", 1)[1])
        return model_from_dict(payload)
    except (ValueError, KeyError, TypeError) as exc:
        raise ModelFormatError(f"{source}: malformed model body: {exc}") from exc


def save_model(model, path):
    Path(path).write_text(dumps_model(model))


def load_model(path):
    path = Path(path)
    return loads_model(path.read_text(), str(path))
