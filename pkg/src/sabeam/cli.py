"""``sabeam`` command line: dataset generation and the beam-prediction experiments.

Every command writes plain CSV (or JSON) plus a ``<out>.meta.json`` sidecar
holding the full run configuration, so outputs can be reproduced from the
sidecar and the seed alone. Qualitative checks are logged as ``check ...
PASS/FAIL`` lines; with ``--strict`` a failed check exits with status 3.
"""
import argparse
import csv
import json
import logging
import os
import sys

from . import dataset as ds_mod
from . import experiments
from .config import ConfigError, load_config, with_overrides
from .pipeline import generate_dataset, sample_seed
from .raytracer import trace
from .scene import ConfigurationError, generate_scene

log = logging.getLogger("sabeam")

EXIT_ERROR = 2
EXIT_CHECK_FAILED = 3


class CommandError(Exception):
    pass


def _fmt(value):
    if isinstance(value, float):
        return repr(value)
    return "" if value is None else str(value)


def write_csv(rows, path, header):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(row.get(k, "")) for k in header])


def write_meta(path, command, cfg, extra=None):
    meta = {"command": command, "config": cfg.to_dict()}
    if extra:
        meta.update(extra)
    with open(f"{path}.meta.json", "w") as fh:
        json.dump(meta, fh, indent=1, sort_keys=True, default=str)
        fh.write("\n")


def _load_data(args, cfg):
    if not args.data:
        raise CommandError("--data is required (create one with 'sabeam generate')")
    if not os.path.exists(args.data):
        raise CommandError(f"dataset not found: {args.data}")
    ds = ds_mod.load(args.data)
    data = experiments.prepare(ds, cfg.run.train_frac, cfg.run.seed)
    return ds, data


class Checks:
    """Collects qualitative PASS/FAIL lines."""

    def __init__(self):
        self.failed = []

    def __call__(self, name, ok):
        log.info("check %s: %s", name, "PASS" if ok else "FAIL")
        if not ok:
            self.failed.append(name)


def cmd_generate(args, cfg, checks):
    def progress(done, total):
        log.info("generated %d/%d samples", done, total)

    ds = generate_dataset(cfg.generation, cfg.run.n_samples, cfg.run.seed,
                          workers=cfg.run.workers, progress=progress)
    ds_mod.save(ds, args.out)
    if args.csv:
        ds_mod.export_csv(ds, args.csv)
        write_meta(args.csv, "generate", cfg, {"dataset": ds.config})
    n_outage = sum(s.y_dbm.max() <= ds_mod.OUTAGE_DBM for s in ds.samples)
    log.info("wrote %d samples (%d outages) to %s", len(ds), n_outage, args.out)


def cmd_table2(args, cfg, checks):
    ds, data = _load_data(args, cfg)
    rows = experiments.run_table2(data, cfg.models(), cfg.run.workers)
    write_csv(rows, args.out, ["model", "rmse_db"])
    write_meta(args.out, "table2", cfg, {"dataset": ds.config})
    err = {r["model"]: r["rmse_db"] for r in rows}
    checks("random_forest < ols", err["random_forest"] < err["ols"])
    checks("random_forest < gradient_boosting", err["random_forest"] < err["gradient_boosting"])


def cmd_awareness(args, cfg, checks):
    ds, data = _load_data(args, cfg)
    mode = args.mode or cfg.run.awareness_mode
    spec = cfg.models()["random_forest"]
    rows = experiments.run_awareness_sweep(data, spec, mode, cfg.run.workers)
    write_csv(rows, args.out, ["mode", "prefix", "n_features", "rmse_db"])
    write_meta(args.out, "awareness-sweep", cfg, {"dataset": ds.config, "mode": mode})
    if mode == "group":
        err = [r["rmse_db"] for r in rows]
        checks("rsu-only rmse exceeds every richer level", all(err[0] > e for e in err[1:]))
        checks("lane-1 trucks cut rmse by >= 20%", err[1] <= 0.8 * err[0])
        checks("rmse non-increasing through truck groups", err[0] >= err[1] >= err[2])


def cmd_quant(args, cfg, checks):
    ds, data = _load_data(args, cfg)
    spec = cfg.models()["random_forest"]
    cdf_rows = [] if args.cdf_out else None
    rows = experiments.run_quant_sweep(data, spec, cfg.quantization, cfg.run.workers, cdf_rows)
    header = ["p_upper", "p_lower", "r_cqi", "rmse_db", "frac_below_1db"]
    write_csv(rows, args.out, header)
    write_meta(args.out, "quant-sweep", cfg, {"dataset": ds.config})
    if cdf_rows is not None:
        write_csv(cdf_rows, args.cdf_out, ["r_cqi", "abs_error_db", "cdf"])
        write_meta(args.cdf_out, "quant-sweep", cfg, {"dataset": ds.config})
    base = rows[0]["rmse_db"]
    ref = cfg.quantization.reference
    fine = [r for r in rows[1:]
            if r["r_cqi"] <= 0.1 and (r["p_upper"], r["p_lower"]) == ref]
    if fine:
        checks("rmse at r_cqi <= 0.1 (widest bounds) within 10% of unquantised",
               all(r["rmse_db"] <= 1.1 * base for r in fine))
    checks("quantised rmse within baseline + r_cqi",
           all(base <= r["rmse_db"] + r["r_cqi"] for r in rows[1:]))


def cmd_allbeams(args, cfg, checks):
    ds, data = _load_data(args, cfg)
    reg = cfg.models()["random_forest"]
    rows = experiments.run_eval_allbeams(data, reg, cfg.classifier_spec(), cfg.allbeams,
                                         cfg.run.workers)
    header = ["model", "r_cqi", "p_align", "r_throughput", "rmse_db", "noise_floor_dbm"]
    write_csv(rows, args.out, header)
    write_meta(args.out, "eval-allbeams", cfg, {"dataset": ds.config})
    clf = rows[0]
    for r in rows[1:]:
        checks(f"regression r_cqi={r['r_cqi']} throughput >= classifier - 0.5pp",
               r["r_throughput"] >= clf["r_throughput"] - 0.005)
        checks(f"regression r_cqi={r['r_cqi']} throughput >= classifier",
               r["r_throughput"] >= clf["r_throughput"])


def cmd_dump_paths(args, cfg, checks):
    scene_seed = sample_seed(cfg.run.seed, args.index)
    scene = generate_scene(cfg.scene, scene_seed)
    paths = trace(scene, cfg.raytrace)
    doc = {"sample": args.index, "scene_seed": scene_seed, "scene": scene.to_dict(),
           "paths": [p.to_dict() for p in paths]}
    text = json.dumps(doc, indent=1, sort_keys=True) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI-style config file")
    common.add_argument("--seed", type=int, help="run seed (generation, split, models)")
    common.add_argument("--workers", type=int, help="parallel workers")
    common.add_argument("--strict", action="store_true",
                        help="exit with status 3 when a qualitative check fails")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="sabeam", description="Dataset generation and beam-prediction experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", parents=[common], help="simulate a labelled dataset")
    p.add_argument("--n", type=int, dest="n_samples", help="number of samples")
    p.add_argument("--out", required=True, help="output JSONL path")
    p.add_argument("--csv", help="also export a flat CSV here")
    p.set_defaults(func=cmd_generate)

    experiments_help = {
        "table2": (cmd_table2, "strongest-beam RMSE of OLS, random forest, boosting"),
        "awareness-sweep": (cmd_awareness, "RMSE versus situational awareness"),
        "quant-sweep": (cmd_quant, "RMSE versus CQI quantisation parameters"),
        "eval-allbeams": (cmd_allbeams, "beam selection: all-beam regression vs classifier"),
    }
    for name, (func, text) in experiments_help.items():
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--data", help="dataset JSONL written by 'generate'")
        p.add_argument("--out", required=True, help="output CSV path")
        if name == "awareness-sweep":
            p.add_argument("--mode", choices=("group", "vehicle"))
        if name == "quant-sweep":
            p.add_argument("--cdf-out", help="also write tidy error CDF rows here")
        p.set_defaults(func=func)

    p = sub.add_parser("dump-paths", parents=[common], help="trace one scene, print its paths")
    p.add_argument("--index", type=int, default=0, help="sample index within the run seed")
    p.add_argument("--out", default="-", help="output JSON path (default stdout)")
    p.set_defaults(func=cmd_dump_paths)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    checks = Checks()
    try:
        cfg = with_overrides(load_config(args.config), seed=args.seed, workers=args.workers,
                             n_samples=getattr(args, "n_samples", None))
        args.func(args, cfg, checks)
    except (CommandError, ConfigError, ConfigurationError, ds_mod.DatasetError,
            ValueError, OSError) as exc:
        print(f"sabeam {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if checks.failed and args.strict:
        print(f"sabeam {args.command}: failed checks: {', '.join(checks.failed)}",
              file=sys.stderr)
        return EXIT_CHECK_FAILED
    return 0


if __name__ == "__main__":
    sys.exit(main())
