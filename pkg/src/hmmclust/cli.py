"""Command-line front end.

Subcommands: simulate, estimate, cluster, exact, bounds, reproduce.  A JSON
config file supplies the model and options; flags override it.  Outputs land
in --out (default: current directory) as CSV/JSON with floats at 12
significant digits, so a fixed config + seed reproduces byte-identical files.
On failure the process prints an error JSON to stderr and exits nonzero
(2 for configuration problems, 1 for runtime errors); configuration issues
are listed exhaustively, not one at a time.

Heavy imports happen inside the command functions so that --threads can pin
the BLAS thread pools before numpy loads.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

KNOWN_METHODS = ("bayes", "plugin", "kmeans")
REPRODUCE_TARGETS = ("table1", "example1", "example2", "prop1")


def _set_threads(k):
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS",
                "NUMEXPR_NUM_THREADS"):
        os.environ[var] = str(k)


def _load_config(path):
    if path is None:
        return {}
    with open(path) as fh:
        return json.load(fh)


def _validate(config, command, target=None):
    issues = []
    if not isinstance(config, dict):
        return ["config root must be a JSON object"]
    n = config.get("n")
    if n is not None and (not isinstance(n, int) or n < 1):
        issues.append("n must be a positive integer")
    reps = config.get("replicates")
    if reps is not None and (not isinstance(reps, int) or reps < 1):
        issues.append("replicates must be a positive integer")
    methods = config.get("methods")
    if methods is not None:
        bad = [m for m in methods if m not in KNOWN_METHODS]
        if bad:
            issues.append(f"unknown methods: {bad}; known: {list(KNOWN_METHODS)}")
    reading = config.get("gaussian_second_param")
    if reading is not None and reading not in ("stddev", "variance"):
        issues.append("gaussian_second_param must be 'stddev' or 'variance'")
    model = config.get("model")
    if isinstance(model, dict) and "path" in model and not os.path.exists(model["path"]):
        issues.append(f"model file not found: {model['path']}")
    traj = config.get("trajectory")
    if traj is not None and command in ("estimate", "cluster") and not os.path.exists(traj):
        issues.append(f"trajectory file not found: {traj}")
    if command == "reproduce" and target not in REPRODUCE_TARGETS:
        issues.append(f"reproduce target must be one of {list(REPRODUCE_TARGETS)}")
    return issues


def _resolve_model(config):
    """Model from config: {'example': 1|2}, {'prop1': {'eta': ...}},
    {'path': 'params.json'}, an inline params document, or the default
    (example 1)."""
    from . import experiments, oracle, serialize

    reading = config.get("gaussian_second_param", "variance")
    spec = config.get("model", {"example": 1})
    if "example" in spec:
        build = {1: experiments.example1_params, 2: experiments.example2_params}
        return build[spec["example"]](reading), f"example{spec['example']}"
    if "prop1" in spec:
        eta = spec["prop1"].get("eta", 0.1)
        return oracle.prop1_model(eta, spec["prop1"].get("eps")), f"prop1(eta={eta})"
    if "path" in spec:
        ingest = config.get("gaussian_second_param", "stddev")
        return serialize.params_from_json(spec["path"], ingest), spec["path"]
    ingest = config.get("gaussian_second_param", "stddev")
    return serialize.params_from_json(json.dumps(spec), ingest), "inline"


def _out_path(args, name):
    os.makedirs(args.out, exist_ok=True)
    return os.path.join(args.out, name)


def _provenance(args, config, extra=None):
    doc = {"command": args.command, "seed": args.seed, "config": config}
    if extra:
        doc.update(extra)
    return doc


def cmd_simulate(args, config):
    from . import model, serialize

    params, label = _resolve_model(config)
    n = config.get("n", 1000)
    traj = model.sample_trajectory(params, n, seed=args.seed)
    path = _out_path(args, config.get("trajectory_out", "trajectory.csv"))
    serialize.trajectory_to_csv(traj, path)
    print(f"wrote {path} (model {label}, n={n}, seed={args.seed})")
    return 0


def cmd_estimate(args, config):
    import numpy as np

    from . import model, serialize, spectral

    params, label = _resolve_model(config)
    if config.get("trajectory"):
        _, y = serialize.trajectory_from_csv(config["trajectory"])
    else:
        y = model.sample_trajectory(params, config.get("n", 10_000), seed=args.seed).y
    cfg = spectral.SpectralConfig(seed=args.seed, **config.get("spectral", {}))
    est = spectral.full_estimate(y, params.J, cfg)
    doc = _provenance(args, config, {
        "model": label, "nu": est.nu.tolist(), "Q": est.Q.tolist(),
        "diagnostics": est.diagnostics})
    path = _out_path(args, "estimate.json")
    with open(path, "w") as fh:
        json.dump(serialize.round_floats(doc), fh, indent=2)
        fh.write("\n")
    dpath = _out_path(args, "densities.csv")
    serialize.densities_to_csv(est.grid, np.maximum(est.densities, 0.0), dpath)
    print(f"wrote {path} and {dpath}")
    return 0


def cmd_cluster(args, config):
    import numpy as np

    from . import clusterers, model, partitions, serialize, spectral

    params, label = _resolve_model(config)
    method = config.get("method", "bayes")
    if method not in KNOWN_METHODS:
        raise ValueError(f"unknown method {method!r}")
    x = None
    if config.get("trajectory"):
        x, y = serialize.trajectory_from_csv(config["trajectory"])
    else:
        traj = model.sample_trajectory(params, config.get("n", 10_000), seed=args.seed)
        x, y = traj.x, traj.y
    cfg = spectral.SpectralConfig(seed=args.seed, **config.get("spectral", {}))
    run = clusterers.run_method(method, params, y, seed=args.seed, spectral_config=cfg)
    doc = _provenance(args, config, {
        "model": label, "method": method, "seconds": run.seconds,
        "n_blocks": len(run.partition.blocks)})
    if x is not None:
        truth = partitions.partition_from_labels(np.asarray(x))
        doc["clustering_error"] = partitions.misclassification_loss(run.partition, truth)
    path = _out_path(args, "cluster.json")
    with open(path, "w") as fh:
        json.dump(serialize.round_floats(doc), fh, indent=2)
        fh.write("\n")
    ppath = _out_path(args, "partition.json")
    serialize.partition_to_json(run.partition, ppath)
    print(f"wrote {path} and {ppath}")
    return 0


def cmd_exact(args, config):
    from . import model, oracle, serialize

    params, label = _resolve_model(config)
    n = config.get("n", 4)
    doc = _provenance(args, config, {"model": label, "n": n})
    finite = not model.is_continuous(params.emissions[0])
    if finite:
        doc["class_risk_exact"] = oracle.bayes_class_risk_exact(params, n=n)
        doc["clust_risk_exact"] = oracle.bayes_clust_risk_exact(params, n)
    elif params.is_iid():
        doc["class_risk_exact"] = oracle.bayes_class_risk_exact(params)
    if params.J == 2 and params.is_iid():
        rep = oracle.coincidence_check_iid_J2(
            params, n=n, trials=config.get("trials", 200), seed=args.seed)
        doc["coincidence"] = {
            "trials": rep.trials, "checked": rep.checked,
            "ties_skipped": rep.ties_skipped,
            "violations": len(rep.violations), "ok": rep.ok}
    if params.J > 2 and params.is_iid():
        rep = oracle.divergence_witness_iid_J3(params, n=config.get("witness_n", 2))
        doc["divergence"] = {"condition_holds": rep.condition_holds,
                             "witness": rep.witness}
    path = _out_path(args, "exact.json")
    with open(path, "w") as fh:
        json.dump(serialize.round_floats(doc), fh, indent=2)
        fh.write("\n")
    print(f"wrote {path}")
    return 0


def cmd_bounds(args, config):
    from . import bounds, serialize

    params, label = _resolve_model(config)
    n = config.get("n", 1000)
    report = bounds.bound_report(params, n, class_risk=config.get("class_risk"))
    doc = _provenance(args, config, {"model": label, "report": report})
    path = _out_path(args, "bounds.json")
    serialize.bound_report_to_json(doc, path)
    print(f"wrote {path} (Lambda={report['Lambda']['value']:.6g})")
    return 0


def cmd_reproduce(args, config):
    from . import experiments, serialize

    target = args.target
    cfg = experiments.ExperimentConfig(
        n=config.get("n"),
        replicates=config.get("replicates", 5),
        methods=tuple(config.get("methods", KNOWN_METHODS)),
        seed=args.seed if args.seed is not None else 20240601,
        gaussian_second_param=config.get("gaussian_second_param", "variance"))
    if target == "prop1":
        rows = experiments.prop1_table(tuple(config.get("etas", (0.1, 0.03, 0.01))),
                                       n=config.get("prop1_n", 10))
        path = _out_path(args, "prop1.csv")
        serialize.results_to_csv(rows, path)
        for r in rows:
            print("eta=%-5g clust=%.6f class=%.6f ratio=%.4f"
                  % (r["eta"], r["clust_risk"], r["class_risk"], r["ratio"]))
        print(f"wrote {path}")
        return 0
    if target == "table1":
        rows = experiments.reproduce_table(cfg)
        path = _out_path(args, "table1.csv")
        serialize.results_to_csv(experiments.pivot_rows(rows), path)
    else:
        which = int(target[-1])
        rows = experiments.run_example(which, cfg)
        path = _out_path(args, f"{target}.csv")
        serialize.results_to_csv(rows, path)
    for r in rows:
        print("example %d  %-7s %.3f%% +- %.3f  Lambda=%.4f"
              % (r["example"], r["method"], r["error_pct"],
                 r["half_width_pct"], r["Lambda"]))
    print(f"wrote {path}")
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="hmmclust",
                                description="Model-based clustering of hidden "
                                            "Markov chain states")
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--seed", type=int, default=None, help="master RNG seed")
    p.add_argument("--threads", type=int, default=None,
                   help="cap BLAS/OpenMP thread pools")
    p.add_argument("--out", default=".", help="output directory")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("simulate", "estimate", "cluster", "exact", "bounds"):
        sub.add_parser(name)
    rep = sub.add_parser("reproduce")
    rep.add_argument("target", choices=REPRODUCE_TARGETS)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads is not None:
        _set_threads(args.threads)
    try:
        config = _load_config(args.config)
    except (OSError, json.JSONDecodeError) as e:
        json.dump({"error": "config", "issues": [str(e)]}, sys.stderr)
        sys.stderr.write("\n")
        return 2
    issues = _validate(config, args.command, getattr(args, "target", None))
    if issues:
        json.dump({"error": "config", "issues": issues}, sys.stderr)
        sys.stderr.write("\n")
        return 2
    handlers = {"simulate": cmd_simulate, "estimate": cmd_estimate,
                "cluster": cmd_cluster, "exact": cmd_exact,
                "bounds": cmd_bounds, "reproduce": cmd_reproduce}
    try:
        return handlers[args.command](args, config)
    except Exception as e:  # runtime failure -> machine-readable error
        json.dump({"error": type(e).__name__, "message": str(e)}, sys.stderr)
        sys.stderr.write("\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
