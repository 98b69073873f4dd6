"""Labelled samples, label variants, splitting and JSON Lines persistence.

File layout: the first line is a header object
``{"format", "version", "n_samples", "feature_names", "config"}``; each
following line is one sample ``{"scene_id", "seed", "features", "y_dbm", "s"}``.
"""
import csv
import json
from dataclasses import dataclass, field

import numpy as np

from .quantizer import NO_QUANTIZATION, dequantize, quantize

FORMAT = "sabeam-dataset"
SCHEMA_VERSION = 1
OUTAGE_DBM = -250.0

ORIGINAL = "original"
CQI = "cqi"
RECONSTRUCTED = "reconstructed"
ORDERED = "ordered"
LABEL_KINDS = (ORIGINAL, CQI, RECONSTRUCTED, ORDERED)


class DatasetError(ValueError):
    """Malformed or incompatible dataset file."""


class SchemaVersionError(DatasetError):
    pass


def to_dbm(y_linear):
    """``10 log10(y / 1 mW)``; zero power maps to the outage sentinel."""
    y = np.asarray(y_linear, dtype=np.float64)
    out = np.full(y.shape, OUTAGE_DBM)
    pos = y > 0
    out[pos] = np.maximum(10.0 * np.log10(y[pos]), OUTAGE_DBM)
    return out


def from_dbm(y_dbm):
    y = np.asarray(y_dbm, dtype=np.float64)
    return np.where(y <= OUTAGE_DBM, 0.0, 10.0 ** (y / 10.0))


@dataclass
class Sample:
    scene_id: int
    seed: int
    features: np.ndarray
    y_dbm: np.ndarray
    s: int

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)
        self.y_dbm = np.asarray(self.y_dbm, dtype=np.float64)

    def to_dict(self):
        return {"scene_id": self.scene_id, "seed": self.seed,
                "features": self.features.tolist(), "y_dbm": self.y_dbm.tolist(),
                "s": self.s}

    def __eq__(self, other):
        return (isinstance(other, Sample) and self.scene_id == other.scene_id
                and self.seed == other.seed and self.s == other.s
                and np.array_equal(self.features, other.features)
                and np.array_equal(self.y_dbm, other.y_dbm))


@dataclass
class LabelVariant:
    kind: str
    values: np.ndarray
    params: object = None


def make_label(sample, kind, params=NO_QUANTIZATION, m=1):
    """Label row of the given kind for one sample.

    ``ordered`` keeps the ``m`` strongest powers, descending (ties by beam
    index), after quantise-and-reconstruct.
    """
    y = sample.y_dbm if isinstance(sample, Sample) else np.asarray(sample, dtype=np.float64)
    if kind == ORIGINAL:
        return LabelVariant(kind, y.copy())
    if kind == CQI:
        return LabelVariant(kind, np.asarray(quantize(y, params)), params)
    if kind == RECONSTRUCTED:
        return LabelVariant(kind, np.asarray(dequantize(quantize(y, params), params)), params)
    if kind == ORDERED:
        if not 1 <= m <= len(y):
            raise ValueError(f"m must be in [1, {len(y)}]")
        top = y[np.argsort(-y, kind="stable")[:m]]
        return LabelVariant(kind, np.asarray(dequantize(quantize(top, params), params)), params)
    raise ValueError(f"unknown label kind {kind!r}")


@dataclass
class Dataset:
    samples: list
    feature_names: list = field(default_factory=list)
    config: dict = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    def __len__(self):
        return len(self.samples)

    def features(self):
        return np.array([s.features for s in self.samples], dtype=np.float64)

    def y_dbm(self):
        return np.array([s.y_dbm for s in self.samples], dtype=np.float64)

    def best_index(self):
        return np.array([s.s for s in self.samples], dtype=np.int64)

    def strongest_dbm(self):
        return self.y_dbm().max(axis=1)

    def subset(self, idx):
        return Dataset([self.samples[i] for i in idx], list(self.feature_names),
                       dict(self.config), self.schema_version)


def split(ds, train_frac, seed):
    """Deterministic shuffled split into (train, test)."""
    if len(ds) == 0:
        raise DatasetError("cannot split an empty dataset")
    if not 0.0 < train_frac < 1.0:
        raise ValueError("train_frac must lie strictly between 0 and 1")
    perm = np.random.default_rng(seed).permutation(len(ds))
    n_train = int(round(train_frac * len(ds)))
    return ds.subset(np.sort(perm[:n_train])), ds.subset(np.sort(perm[n_train:]))


def _header(ds):
    return {"format": FORMAT, "version": ds.schema_version, "n_samples": len(ds),
            "feature_names": list(ds.feature_names), "config": ds.config}


def save(ds, path):
    with open(path, "w") as fh:
        fh.write(json.dumps(_header(ds), sort_keys=True) + "\n")
        for sample in ds.samples:
            fh.write(json.dumps(sample.to_dict()) + "\n")


def _parse_sample(obj, lineno, n_features):
    try:
        sample = Sample(int(obj["scene_id"]), int(obj["seed"]), obj["features"],
                        obj["y_dbm"], int(obj["s"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise DatasetError(f"line {lineno}: malformed sample ({exc})") from None
    if sample.features.ndim != 1 or sample.y_dbm.ndim != 1 or len(sample.y_dbm) == 0:
        raise DatasetError(f"line {lineno}: features and y_dbm must be flat lists")
    if n_features is not None and len(sample.features) != n_features:
        raise DatasetError(f"line {lineno}: expected {n_features} features, "
                           f"got {len(sample.features)}")
    if not np.all(np.isfinite(sample.y_dbm)) or not np.all(np.isfinite(sample.features)):
        raise DatasetError(f"line {lineno}: non-finite value")
    if sample.s != int(np.argmax(sample.y_dbm)) + 1:
        raise DatasetError(f"line {lineno}: s does not index the strongest beam")
    return sample


def load(path):
    """Read a dataset written by :func:`save`; never returns a partial dataset."""
    samples = []
    with open(path) as fh:
        lines = fh.read().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise DatasetError(f"{path}: empty file")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise DatasetError(f"line 1: invalid header ({exc.msg})") from None
    if not isinstance(header, dict) or header.get("format") != FORMAT:
        raise DatasetError("line 1: not a sabeam dataset header")
    if header.get("version") != SCHEMA_VERSION:
        raise SchemaVersionError(
            f"line 1: schema version {header.get('version')!r}, expected {SCHEMA_VERSION}")
    names = header.get("feature_names") or None
    n_features = len(names) if names else None
    n_beams = None
    for lineno, line in enumerate(lines[1:], start=2):
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DatasetError(f"line {lineno}: invalid JSON ({exc.msg})") from None
        if not isinstance(obj, dict):
            raise DatasetError(f"line {lineno}: expected an object")
        sample = _parse_sample(obj, lineno, n_features)
        n_features = len(sample.features)
        if n_beams is None:
            n_beams = len(sample.y_dbm)
        elif len(sample.y_dbm) != n_beams:
            raise DatasetError(f"line {lineno}: expected {n_beams} beam powers")
        samples.append(sample)
    if len(samples) != header.get("n_samples"):
        raise DatasetError(f"{path}: truncated, header announces {header.get('n_samples')} "
                           f"samples but {len(samples)} were read")
    return Dataset(samples, list(names or []), header.get("config", {}), SCHEMA_VERSION)


def export_csv(ds, path):
    """One row per sample: ids, best index, feature columns, then ``y_1..y_NB``."""
    n_beams = len(ds.samples[0].y_dbm) if ds.samples else 0
    if ds.feature_names:
        names = list(ds.feature_names)
    elif ds.samples:
        names = [f"f{i}" for i in range(len(ds.samples[0].features))]
    else:
        names = []
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["scene_id", "seed", "s", *names, *[f"y_{i + 1}" for i in range(n_beams)]])
        for sm in ds.samples:
            writer.writerow([sm.scene_id, sm.seed, sm.s, *map(repr, sm.features.tolist()),
                             *map(repr, sm.y_dbm.tolist())])
