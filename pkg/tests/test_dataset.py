import csv
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sabeam.dataset import (CQI, ORDERED, ORIGINAL, OUTAGE_DBM, RECONSTRUCTED, Dataset,
                            DatasetError, Sample, SchemaVersionError, export_csv, from_dbm, load,
                            make_label, save, split, to_dbm)
from sabeam.pipeline import GenerationConfig, generate_dataset
from sabeam.quantizer import CqiParams


def random_dataset(n=30, seed=0, n_feat=6):
    rng = np.random.default_rng(seed)
    samples = []
    for k in range(n):
        y = rng.uniform(-160, -30, 64)
        samples.append(Sample(k, int(rng.integers(2**63)), rng.standard_normal(n_feat) * 1e3,
                              y, int(np.argmax(y)) + 1))
    return Dataset(samples, [f"f{i}" for i in range(n_feat)], {"note": "random", "n": n})


def test_label_examples():
    y = np.array([3.0, 1.0, 2.0] + [-10.0] * 61)
    assert make_label(y, ORDERED, m=2).values.tolist() == [3.0, 2.0]
    assert make_label(y, ORDERED, m=1).values.tolist() == [3.0]
    assert make_label(np.full(64, -50.0), ORDERED, m=3).values.tolist() == [-50.0] * 3
    assert np.array_equal(make_label(y, ORIGINAL).values, y)
    p = CqiParams(45.0, 0.0, 1.0)
    assert make_label(y, CQI, p).values[:3].tolist() == [3, 1, 2]
    assert make_label(np.full(64, 44.23), ORDERED, p, 1).values.tolist() == [45.0]
    with pytest.raises(ValueError):
        make_label(y, ORDERED, m=0)
    with pytest.raises(ValueError):
        make_label(y, "bogus")


@settings(max_examples=100)
@given(st.lists(st.floats(-120, 0), min_size=64, max_size=64), st.integers(1, 64),
       st.sampled_from([None, 0.5, 3.0]))
def test_ordered_non_increasing_and_bounded(y, m, r):
    params = CqiParams(-20.0, -100.0, r)
    y = np.array(y)
    top = make_label(y, ORDERED, params, m).values
    assert len(top) == m and np.all(np.diff(top) <= 0)
    rec = make_label(y, RECONSTRUCTED, params).values
    inside = (y > params.p_lower) & (y <= params.p_upper)
    bound = r if r is not None else 1e-12
    assert np.all(rec[inside] - y[inside] < bound)
    assert np.all(rec[inside] - y[inside] >= -1e-9)


def test_dbm_conversion_and_outage():
    y = np.array([0.0, 1.0, 1e-3])
    assert to_dbm(y).tolist() == [OUTAGE_DBM, 0.0, -30.0]
    assert from_dbm(to_dbm(y)).tolist() == pytest.approx(y.tolist())


def test_split_sizes_and_partition():
    ds = random_dataset(100)
    train, test = split(ds, 0.8, 3)
    assert (len(train), len(test)) == (80, 20)
    ids_a = {s.scene_id for s in train.samples}
    ids_b = {s.scene_id for s in test.samples}
    assert not ids_a & ids_b and ids_a | ids_b == set(range(100))
    again = split(ds, 0.8, 3)
    assert again[0].samples == train.samples and again[1].samples == test.samples
    assert split(ds, 0.8, 4)[0].samples != train.samples


def test_split_errors():
    with pytest.raises(DatasetError):
        split(Dataset([]), 0.5, 0)
    with pytest.raises(ValueError):
        split(random_dataset(5), 1.0, 0)


def test_round_trip(tmp_path):
    ds = random_dataset()
    path = tmp_path / "d.jsonl"
    save(ds, path)
    back = load(path)
    assert back.samples == ds.samples
    assert back.feature_names == ds.feature_names and back.config == ds.config
    save(back, tmp_path / "e.jsonl")
    assert (tmp_path / "e.jsonl").read_bytes() == path.read_bytes()


def test_generated_round_trip(tmp_path):
    ds = generate_dataset(GenerationConfig(), 12, seed=5)
    save(ds, tmp_path / "g.jsonl")
    back = load(tmp_path / "g.jsonl")
    assert back.samples == ds.samples
    assert json.loads(json.dumps(ds.config)) == back.config
    for s in back.samples:
        assert len(s.y_dbm) == 64 and s.s == int(np.argmax(s.y_dbm)) + 1


def test_truncated_file_rejected(tmp_path):
    path = tmp_path / "d.jsonl"
    save(random_dataset(), path)
    lines = path.read_text().splitlines(keepends=True)
    (tmp_path / "cut.jsonl").write_text("".join(lines[:-3]))
    with pytest.raises(DatasetError, match="truncated"):
        load(tmp_path / "cut.jsonl")
    (tmp_path / "half.jsonl").write_text("".join(lines[:-1]) + lines[-1][:40])
    with pytest.raises(DatasetError, match=f"line {len(lines)}"):
        load(tmp_path / "half.jsonl")


def test_version_mismatch(tmp_path):
    path = tmp_path / "d.jsonl"
    save(random_dataset(3), path)
    lines = path.read_text().splitlines()
    header = json.loads(lines[0])
    header["version"] = 99
    path.write_text("\n".join([json.dumps(header)] + lines[1:]) + "\n")
    with pytest.raises(SchemaVersionError):
        load(path)


def test_bad_sample_reports_line(tmp_path):
    path = tmp_path / "d.jsonl"
    save(random_dataset(3), path)
    lines = path.read_text().splitlines()
    obj = json.loads(lines[2])
    obj["s"] = 0 if obj["s"] != 1 else 2
    lines[2] = json.dumps(obj)
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(DatasetError, match="line 3"):
        load(path)


def test_csv_export(tmp_path):
    ds = random_dataset(4, n_feat=3)
    export_csv(ds, tmp_path / "d.csv")
    with open(tmp_path / "d.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0][:6] == ["scene_id", "seed", "s", "f0", "f1", "f2"]
    assert rows[0][-1] == "y_64" and len(rows) == 5
    assert float(rows[1][-1]) == ds.samples[0].y_dbm[-1]
