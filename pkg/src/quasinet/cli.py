"""Command-line front end for the convergence experiments.

Subcommands: xor, parity, spirals, gradcheck, sweep. Per-task defaults
reproduce the benchmark settings (learning rate 0.9 and init std 1.0 for
the logic tasks, 0.01 / 0.5 for the spirals), so a bare invocation runs
the standard experiment. Progress goes to stderr; stdout carries the
summary so it stays machine-readable.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .experiments import (
    PARITY_HIDDEN,
    SpiralParams,
    TrainConfig,
    best_hidden_size,
    make_parity,
    make_spirals,
    run_batch,
    run_spirals,
    spirals_to_csv,
    sweep_hidden_sizes,
    write_results_csv,
    write_summary_json,
)
from .gradcheck import check_network
from .network import LayerSpec, Network, NetworkSpec
from .numerics import RngState

KIND_ALIASES = {"tanh": "tanh_sum", "prod": "product"}
KIND_NAMES = {"tanh_sum": "tanh", "product": "prod"}


def parse_architecture(s: str):
    """Parse "tanh:10,prod:80,tanh:5,prod:1" into a LayerSpec list."""
    layers = []
    for token in s.split(","):
        token = token.strip()
        parts = token.split(":")
        if len(parts) != 2 or parts[0] not in KIND_ALIASES:
            raise argparse.ArgumentTypeError(
                f"bad architecture token {token!r}: expected kind:size with kind in "
                f"{sorted(KIND_ALIASES)}"
            )
        try:
            size = int(parts[1])
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad architecture token {token!r}: size not an integer")
        if size < 1:
            raise argparse.ArgumentTypeError(f"bad architecture token {token!r}: size must be >= 1")
        layers.append(LayerSpec(kind=KIND_ALIASES[parts[0]], size=size))
    return layers


def format_architecture(layers) -> str:
    return ",".join(f"{KIND_NAMES[ls.kind]}:{ls.size}" for ls in layers)


def _add_common(p, lr, std, epochs, runs):
    p.add_argument("--arch", type=parse_architecture, default=None,
                   help="architecture as kind:size,... with kind in {tanh, prod}")
    p.add_argument("--lr", type=float, default=lr, help="learning rate")
    p.add_argument("--init-std", type=float, default=std, help="weight init std (Gaussian, mean 0)")
    p.add_argument("--epochs", type=int, default=epochs, help="epoch cap per run")
    p.add_argument("--runs", type=int, default=runs, help="number of independently seeded runs")
    p.add_argument("--seed", type=int, default=0, help="base seed; run i uses seed+i")
    p.add_argument("--window", type=int, default=10, help="consecutive correct epochs for convergence")
    p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    p.add_argument("--out-csv", default=None, help="write per-run results CSV here")
    p.add_argument("--out-json", default=None, help="write summary JSON here")
    p.add_argument("--timing", action="store_true",
                   help="include wall times in the CSV (breaks byte-for-byte reproducibility)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quasinet", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("xor", help="minimal XOR convergence experiment")
    _add_common(p, lr=0.9, std=1.0, epochs=500, runs=100)

    p = sub.add_parser("parity", help="n-parity convergence experiment")
    p.add_argument("--n", type=int, required=True, help="number of parity inputs")
    p.add_argument("--baseline", action="store_true",
                   help="use the tanh-tanh MLP baseline instead of the product network")
    _add_common(p, lr=0.9, std=1.0, epochs=10000, runs=100)

    p = sub.add_parser("spirals", help="2-spirals experiment")
    _add_common(p, lr=0.01, std=0.5, epochs=10000, runs=10)
    p.add_argument("--points", type=int, default=2000, help="total number of spiral points")
    p.add_argument("--turns", type=float, default=3.0, help="spiral turns")
    p.add_argument("--train-frac", type=float, default=0.8, help="training fraction")
    p.add_argument("--noise-std", type=float, default=0.0, help="coordinate noise std")
    p.add_argument("--data-seed", type=int, default=0, help="seed for dataset generation/split")
    p.add_argument("--eval-every", type=int, default=10, help="accuracy sampling period (epochs)")
    p.add_argument("--out-data-csv", default=None, help="export the generated dataset as x,y,label CSV")

    p = sub.add_parser("gradcheck", help="finite-difference check of all analytic gradients")
    p.add_argument("--arch", type=parse_architecture,
                   default=parse_architecture("tanh:10,prod:80,tanh:5,prod:1"))
    p.add_argument("--inputs", type=int, default=2, help="network input dimension")
    p.add_argument("--samples", type=int, default=5, help="number of random input/target samples")
    p.add_argument("--eps", type=float, default=1e-5, help="finite-difference step")
    p.add_argument("--tol", type=float, default=1e-6, help="relative-error tolerance")
    p.add_argument("--init-std", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-json", default=None, help="write the report JSON here")

    p = sub.add_parser("sweep", help="hidden-size sweep for n-parity")
    p.add_argument("--n", type=int, required=True, help="number of parity inputs")
    p.add_argument("--h-min", type=int, default=None, help="smallest hidden size (default n-2)")
    p.add_argument("--h-max", type=int, default=None, help="largest hidden size (default 2n+4)")
    p.add_argument("--baseline", action="store_true", help="sweep the tanh-tanh MLP baseline")
    _add_common(p, lr=0.9, std=1.0, epochs=10000, runs=100)

    return parser


def _default_parity_arch(n: int, baseline: bool):
    h = PARITY_HIDDEN.get(n, 2 * n)
    out_kind = "tanh_sum" if baseline else "product"
    return [LayerSpec("tanh_sum", h), LayerSpec(out_kind, 1)]


def _print_summary(task: str, arch: str, summary: dict):
    print(f"task={task} arch={arch}")
    for key in ("runs", "converged", "mean_epochs", "std_epochs",
                "mean_train_accuracy", "mean_test_accuracy"):
        if summary.get(key) is not None:
            value = summary[key]
            print(f"  {key} = {value:.4f}" if isinstance(value, float) else f"  {key} = {value}")


def _run_convergence_task(args, task: str, data, arch_layers, input_dim: int,
                          test=None, eval_every: int = 0) -> int:
    spec = NetworkSpec(input_dim=input_dim, layers=tuple(arch_layers), init_std=args.init_std)
    config = TrainConfig(
        spec=spec, alpha=args.lr, max_epochs=args.epochs, convergence_window=args.window,
        runs=args.runs, base_seed=args.seed, task=task, eval_every=eval_every,
    )
    print(f"running {task}: {args.runs} runs, arch {format_architecture(arch_layers)}",
          file=sys.stderr)
    records, summary = run_batch(config, data, test, jobs=args.jobs)
    arch_str = format_architecture(arch_layers)
    _print_summary(task, arch_str, summary)
    _write_outputs(args, task, arch_str, records, summary)
    return 0


def _write_outputs(args, task, arch_str, records, summary):
    if args.out_csv:
        write_results_csv(args.out_csv, records, task, arch_str, args.lr, args.init_std,
                          timing=args.timing)
    if args.out_json:
        echo = {
            "task": task, "arch": arch_str, "alpha": args.lr, "init_std": args.init_std,
            "epochs": args.epochs, "runs": args.runs, "base_seed": args.seed,
            "window": args.window,
        }
        write_summary_json(args.out_json, echo, summary)


def _cmd_xor(args) -> int:
    arch = args.arch or [LayerSpec("tanh_sum", 2), LayerSpec("product", 1)]
    return _run_convergence_task(args, "xor", make_parity(2), arch, input_dim=2)


def _cmd_parity(args) -> int:
    arch = args.arch or _default_parity_arch(args.n, args.baseline)
    task = f"parity{args.n}" + ("-mlp" if args.baseline else "")
    return _run_convergence_task(args, task, make_parity(args.n), arch, input_dim=args.n)


def _cmd_spirals(args) -> int:
    arch = args.arch or parse_architecture("tanh:10,prod:80,tanh:5,prod:1")
    params = SpiralParams(n_points=args.points, turns=args.turns,
                          train_fraction=args.train_frac, noise_std=args.noise_std,
                          seed=args.data_seed)
    spec = NetworkSpec(input_dim=2, layers=tuple(arch), init_std=args.init_std)
    config = TrainConfig(
        spec=spec, alpha=args.lr, max_epochs=args.epochs, convergence_window=args.window,
        runs=args.runs, base_seed=args.seed, task="spirals", eval_every=args.eval_every,
    )
    print(f"running spirals: {args.runs} runs, arch {format_architecture(arch)}", file=sys.stderr)
    records, summary, (train, test) = run_spirals(config, params, jobs=args.jobs)
    arch_str = format_architecture(arch)
    _print_summary("spirals", arch_str, summary)
    _write_outputs(args, "spirals", arch_str, records, summary)
    if args.out_data_csv:
        spirals_to_csv(args.out_data_csv, train, test)
    return 0


def _cmd_gradcheck(args) -> int:
    spec = NetworkSpec(input_dim=args.inputs, layers=tuple(args.arch), init_std=args.init_std)
    rng = RngState(args.seed)
    net = Network.init(spec, rng)
    X = rng.generator.uniform(-0.9, 0.9, size=(args.samples, args.inputs))
    D = np.sign(rng.generator.standard_normal((args.samples, spec.output_dim)))
    D[D == 0] = 1.0
    report = check_network(net, (X, D), eps=args.eps, tol=args.tol)
    print(f"gradcheck arch={format_architecture(args.arch)} "
          f"max_rel_err={report.max_rel_err:.3e} tol={args.tol:g} "
          f"{'PASS' if report.passed else 'FAIL'}")
    if args.out_json:
        with open(args.out_json, "w") as fh:
            fh.write(report.to_json() + "\n")
    return 0 if report.passed else 1


def _cmd_sweep(args) -> int:
    n = args.n
    h_min = args.h_min if args.h_min is not None else max(1, n - 2)
    h_max = args.h_max if args.h_max is not None else 2 * n + 4
    data = make_parity(n)
    out_kind = "tanh_sum" if args.baseline else "product"

    def make_config(h):
        spec = NetworkSpec(
            input_dim=n,
            layers=(LayerSpec("tanh_sum", h), LayerSpec(out_kind, 1)),
            init_std=args.init_std,
        )
        return TrainConfig(spec=spec, alpha=args.lr, max_epochs=args.epochs,
                           convergence_window=args.window, runs=args.runs,
                           base_seed=args.seed, task=f"parity{n}-sweep")

    results = sweep_hidden_sizes(make_config, range(h_min, h_max + 1), data, jobs=args.jobs)
    for h, summary in results:
        print(f"h={h:3d} converged={summary['converged']:3d}/{summary['runs']} "
              f"mean_epochs={summary['mean_epochs']:.1f}")
    best = best_hidden_size(results)
    print(f"best hidden size: {best}")
    if args.out_json:
        payload = {
            "task": f"parity{n}-sweep", "h_values": list(range(h_min, h_max + 1)),
            "results": {str(h): s for h, s in results}, "best_h": best,
        }
        with open(args.out_json, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "xor": _cmd_xor,
        "parity": _cmd_parity,
        "spirals": _cmd_spirals,
        "gradcheck": _cmd_gradcheck,
        "sweep": _cmd_sweep,
    }
    try:
        return handlers[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
