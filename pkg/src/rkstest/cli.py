"""Command-line interface: test, experiment, roc, nulldist, gen.

Results go to stdout as key=value lines; logs go to stderr.  Exit code
0 on success, 1 on usage errors, 2 on data errors.  All randomness
derives from the printed master seed: sub-computations use child seeds
derive_seed(seed, tag, index), so any replicate, restart, permutation,
or draw can be reproduced in isolation.  The default thread count can
be set with the RKS_THREADS environment variable.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import fields as dataclass_fields

import numpy as np

from .baselines import Estimator, KernelSpec, energy_distance, kernel_mmd2, lrt_oracle
from .calibrate import PValueMode, permutation_test
from .errors import RksError
from .gen import DEFAULT_V, Role, SettingName, SettingSpec, sample
from .harness import ExperimentConfig, read_experiment_csv, roc_from_stats, run_experiment
from .model import Label, read_sample_csv, write_sample_csv
from .nulldist import default_grid, estimate_covariance, simulate_sup
from .opt import OptConfig
from .ridge import Objective, write_network_csv
from .seeds import derive_seed
from .statistic import (
    K0Surrogate,
    RksConfig,
    compute_rks,
    rks_exact_1d,
    rks_exact_halfspace_2d,
)

log = logging.getLogger("rks")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit(key, value) -> None:
    if isinstance(value, float):
        value = format(value, ".17g")
    elif isinstance(value, bool):
        value = str(value).lower()
    print(f"{key}={value}")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    p.add_argument(
        "--threads",
        type=int,
        default=int(os.environ.get("RKS_THREADS", "0")),
        help="worker threads, 0 = auto (env RKS_THREADS)",
    )
    p.add_argument("-v", "--verbose", action="count", default=0, help="log more to stderr")


def _add_opt_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("optimizer")
    g.add_argument("--lr", type=float, default=0.5, help="Adam learning rate")
    g.add_argument("--iterations", type=int, default=200, help="gradient steps per restart")
    g.add_argument("--beta1", type=float, default=0.9)
    g.add_argument("--beta2", type=float, default=0.99)
    g.add_argument("--epsilon-adam", type=float, default=1e-8)
    g.add_argument("--lambda", dest="lam", type=float, default=1.0, help="penalty weight")
    g.add_argument("--neurons", type=int, default=10)
    g.add_argument("--restarts", type=int, default=3)
    g.add_argument("--objective", choices=["log", "nolog"], default="log")
    g.add_argument("--init-scale", type=float, default=1.0)


def _opt_config(args) -> OptConfig:
    return OptConfig(
        learning_rate=args.lr,
        iterations=args.iterations,
        beta1=args.beta1,
        beta2=args.beta2,
        epsilon_adam=args.epsilon_adam,
        lam=args.lam,
        neurons=args.neurons,
        restarts=args.restarts,
        objective=Objective(args.objective),
        init_scale=args.init_scale,
    )


def _setting_spec(args, d: int, role: Role) -> SettingSpec:
    if not args.setting:
        raise UsageError("this method requires --setting")
    name = SettingName(args.setting)
    v = args.v if args.v is not None else DEFAULT_V[name]
    return SettingSpec(name=name, d=d, v=v, role=role)


def cmd_test(args) -> int:
    x = read_sample_csv(args.x, Label.X, header=args.header)
    y = read_sample_csv(args.y, Label.Y, header=args.header)
    _emit("seed", args.seed)
    _emit("method", args.method)
    stat_seed = derive_seed(args.seed, "test", "stat")

    witness = None
    value = None
    if args.method == "rks":
        _emit("k", args.k)
        if args.exact:
            if args.k != 0 or x.d > 2:
                raise UsageError("--exact requires --k 0 and d <= 2")
            stat = rks_exact_1d if x.d == 1 else rks_exact_halfspace_2d
        else:
            cfg = RksConfig(
                k=args.k,
                opt=_opt_config(args),
                standardize=not args.no_standardize,
                surrogate_k0=K0Surrogate(args.surrogate),
            )

            def stat(u, w):
                return compute_rks(u, w, cfg, seed=stat_seed).value

            result = compute_rks(x, y, cfg, seed=stat_seed)
            witness = result.witness
            value = result.value
    elif args.method.startswith("kmmd-poly"):
        spec = KernelSpec.polynomial(int(args.method[-1]))
        est = Estimator(args.estimator)

        def stat(u, w):
            return kernel_mmd2(u, w, spec, est)

    elif args.method == "kmmd-gauss":
        spec = KernelSpec.gaussian(args.bandwidth)
        est = Estimator(args.estimator)

        def stat(u, w):
            return kernel_mmd2(u, w, spec, est)

    elif args.method == "energy":
        stat = energy_distance
    elif args.method == "lrt":
        spec = _setting_spec(args, x.d, Role.P)

        def stat(u, w):
            return lrt_oracle(u, w, spec)

    else:
        raise UsageError(f"unknown method {args.method}")

    if value is None:
        value = float(stat(x, y))
    _emit("value", value)
    if witness is not None and args.witness_out:
        write_network_csv(witness, args.witness_out)
        _emit("witness_file", args.witness_out)

    if args.B > 0:
        res = permutation_test(
            x,
            y,
            stat,
            B=args.B,
            alpha=args.alpha,
            seed=derive_seed(args.seed, "test", "perm"),
            mode=PValueMode(args.pvalue_mode),
            threads=args.threads,
        )
        _emit("B", args.B)
        _emit("p_value", res.p_value)
        _emit("reject", res.reject)
    return 0


def _parse_config_file(path) -> dict:
    """Flat key=value config; # starts a comment, blank lines ignored."""
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}: line {lineno}: expected key=value")
            key, val = (part.strip() for part in line.split("=", 1))
            out[key] = val
    return out


def cmd_experiment(args) -> int:
    raw = _parse_config_file(args.config)
    known = {f.name for f in dataclass_fields(ExperimentConfig)}
    unknown = set(raw) - known
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}; valid: {sorted(known)}")
    kwargs = dict(raw)
    for key in ("d", "m", "n", "reps", "seed"):
        if key in kwargs:
            kwargs[key] = int(kwargs[key])
    if "v" in kwargs:
        kwargs["v"] = float(kwargs["v"])
    if "methods" in kwargs:
        kwargs["methods"] = tuple(s.strip() for s in kwargs["methods"].split(",") if s.strip())
    if args.output:
        kwargs["output"] = args.output
    if args.seed_given:
        kwargs["seed"] = args.seed
    try:
        cfg = ExperimentConfig(**kwargs)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    if not cfg.output:
        raise UsageError("an output path is required (config key output= or --output)")
    _emit("seed", cfg.seed)
    _emit("setting", cfg.setting.value)
    record = run_experiment(cfg)
    _emit("output", cfg.output)
    _emit("rows", len(record.rows))
    for mth in cfg.methods:
        _emit(f"auc_{mth}", record.aucs[mth])
    return 0


def cmd_roc(args) -> int:
    rows = read_experiment_csv(args.input)
    methods = []
    values: dict[str, dict[str, list[float]]] = {}
    for _, mth, cond, val in rows:
        if mth not in values:
            methods.append(mth)
            values[mth] = {"null": [], "alt": []}
        values[mth].setdefault(cond, []).append(val)
    if not methods:
        raise UsageError(f"{args.input}: no data rows")
    curves = {}
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write("method,fpr,tpr\n")
        for mth in methods:
            curve = roc_from_stats(
                np.array(values[mth]["null"]), np.array(values[mth]["alt"])
            )
            curves[mth] = curve
            for fpr, tpr in curve.points:
                fh.write(f"{mth},{format(fpr, '.17g')},{format(tpr, '.17g')}\n")
    _emit("out", args.out)
    for mth in methods:
        _emit(f"auc_{mth}", curves[mth].auc)
    if args.plot:
        _render_roc_plot(curves, args.plot)
        _emit("plot", args.plot)
    return 0


def _render_roc_plot(curves, path) -> None:
    try:
        import matplotlib
    except ImportError:
        raise UsageError("--plot requires matplotlib (install the 'plot' extra)") from None
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 5))
    for mth, curve in curves.items():
        ax.plot(curve.points[:, 0], curve.points[:, 1], label=f"{mth} (AUC {curve.auc:.3f})")
    ax.plot([0, 1], [0, 1], linestyle=":", color="gray", linewidth=1)
    ax.set_xlabel("false positive rate")
    ax.set_ylabel("true positive rate")
    ax.legend(loc="lower right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def cmd_nulldist(args) -> int:
    spec = _setting_spec(args, args.d, Role.P)
    _emit("seed", args.seed)
    est = sample(spec, args.sample_size, derive_seed(args.seed, "nulldist", "sample"))
    dirs, offsets = default_grid(est, n_dirs=args.grid_dirs)
    gp = estimate_covariance(est, args.k, (dirs, offsets), centered=not args.uncentered)
    sups = simulate_sup(gp, args.draws, derive_seed(args.seed, "nulldist", "sim"))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write("sup\n")
            for v in sups:
                fh.write(format(v, ".17g") + "\n")
        _emit("out", args.out)
    _emit("draws", args.draws)
    _emit("grid_points", gp.covariance.shape[0])
    _emit("median", float(np.median(sups)))
    return 0


def cmd_gen(args) -> int:
    spec = SettingSpec(
        name=SettingName(args.setting),
        d=args.d,
        v=args.v if args.v is not None else DEFAULT_V[SettingName(args.setting)],
        role=Role(args.role),
    )
    _emit("seed", args.seed)
    out = sample(spec, args.n, derive_seed(args.seed, "gen"))
    write_sample_csv(out, args.out)
    _emit("out", args.out)
    _emit("n", args.n)
    _emit("d", args.d)
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="rks", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    setting_names = [s.value for s in SettingName]

    p = sub.add_parser("test", help="two-sample test on CSV samples")
    _add_common(p)
    p.add_argument("--x", required=True, help="CSV of X observations (one row each)")
    p.add_argument("--y", required=True, help="CSV of Y observations")
    p.add_argument("--header", action="store_true", help="skip a header line in the CSVs")
    p.add_argument("--k", type=int, default=0, help="spline degree (default 0)")
    p.add_argument(
        "--method",
        default="rks",
        choices=["rks", "kmmd-poly1", "kmmd-poly2", "kmmd-poly3", "kmmd-gauss", "energy", "lrt"],
    )
    p.add_argument("--exact", action="store_true", help="exact oracle (k=0, d<=2 only)")
    p.add_argument("--B", type=int, default=0, help="permutations; 0 skips calibration")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--pvalue-mode", choices=["plusone", "paper"], default="plusone")
    p.add_argument("--no-standardize", action="store_true")
    p.add_argument("--surrogate", choices=["logistic", "grid"], default="logistic")
    p.add_argument("--estimator", choices=["biased", "unbiased"], default="biased")
    p.add_argument("--bandwidth", type=float, default=None, help="Gaussian kernel bandwidth (default: median heuristic)")
    p.add_argument("--setting", choices=setting_names, default=None, help="setting for --method lrt")
    p.add_argument("--v", type=float, default=None, help="setting parameter (default per setting)")
    p.add_argument("--witness-out", default=None, help="write the witness network CSV here")
    _add_opt_flags(p)
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("experiment", help="replicated null/alt experiment from a config file")
    _add_common(p)
    p.add_argument("--config", required=True, help="flat key=value config file")
    p.add_argument("--output", default=None, help="override the config output path")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("roc", help="ROC curves and AUC from an experiment CSV")
    _add_common(p)
    p.add_argument("--input", required=True, help="long-format experiment CSV")
    p.add_argument("--out", required=True, help="output CSV of (method, fpr, tpr)")
    p.add_argument("--plot", default=None, help="also render the curves to this image file")
    p.set_defaults(func=cmd_roc)

    p = sub.add_parser("nulldist", help="simulate the asymptotic null supremum")
    _add_common(p)
    p.add_argument("--setting", choices=setting_names, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--v", type=float, default=None)
    p.add_argument("--grid-dirs", type=int, default=64)
    p.add_argument("--draws", type=int, default=10000)
    p.add_argument("--sample-size", type=int, default=20000, help="rows for covariance estimation")
    p.add_argument("--uncentered", action="store_true", help="use raw second moments")
    p.add_argument("--out", default=None, help="CSV of simulated suprema")
    p.set_defaults(func=cmd_nulldist)

    p = sub.add_parser("gen", help="draw a sample from a benchmark setting")
    _add_common(p)
    p.add_argument("--setting", choices=setting_names, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--v", type=float, default=None)
    p.add_argument("--role", choices=["p", "q"], default="p")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "command", None):
            parser.print_usage(sys.stderr)
            return 1
        level = logging.WARNING - 10 * min(args.verbose, 2)
        logging.basicConfig(stream=sys.stderr, level=level, format="%(name)s: %(message)s")
        args.seed_given = any(arg == "--seed" or arg.startswith("--seed=") for arg in argv)
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (RksError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
