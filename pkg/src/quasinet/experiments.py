"""Benchmark datasets, the convergence protocol, and batch experiment runners.

Logic tasks use the +/-1 encoding: true = -1, false = +1 would work equally
well, what matters is that XOR becomes sign multiplication. A network counts
as converged when it gives the correct (sign-agreeing) output on every
training pattern for `convergence_window` consecutive epochs (default 10).
Batches run `runs` independent trials seeded base_seed .. base_seed+runs-1;
non-converging runs contribute max_epochs to the mean epoch count.
"""

from __future__ import annotations

import csv
import itertools
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .network import Network, NetworkSpec
from .numerics import RngState

# best hidden sizes found for QuasiNet on n-parity (used as CLI defaults)
PARITY_HIDDEN = {2: 2, 3: 4, 4: 6, 5: 7, 6: 12, 7: 15}


@dataclass
class Dataset:
    inputs: np.ndarray  # (n, d)
    targets: np.ndarray  # (n, k)
    encoding: str = "pm1"

    def __post_init__(self):
        self.inputs = np.asarray(self.inputs, dtype=np.float64)
        self.targets = np.asarray(self.targets, dtype=np.float64)
        if self.inputs.shape[0] != self.targets.shape[0]:
            raise ValueError(
                f"{self.inputs.shape[0]} inputs vs {self.targets.shape[0]} targets"
            )

    def __len__(self) -> int:
        return self.inputs.shape[0]


def make_parity(n: int) -> Dataset:
    """All 2^n patterns over {-1,+1}^n; target is the product of the entries
    (so -1 exactly when the number of -1 inputs is odd)."""
    if not 1 <= n <= 20:
        raise ValueError(f"parity size must be in [1, 20], got {n}")
    inputs = np.array(list(itertools.product((-1.0, 1.0), repeat=n)))
    targets = np.prod(inputs, axis=1, keepdims=True)
    return Dataset(inputs=inputs, targets=targets)


def make_xor() -> Dataset:
    return make_parity(2)


@dataclass(frozen=True)
class SpiralParams:
    n_points: int = 2000
    turns: float = 3.0
    train_fraction: float = 0.8
    noise_std: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.n_points < 4 or self.n_points % 2 != 0:
            raise ValueError(f"n_points must be even and >= 4, got {self.n_points}")
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError(f"train_fraction must be in (0, 1), got {self.train_fraction}")
        if self.noise_std < 0:
            raise ValueError(f"noise_std must be >= 0, got {self.noise_std}")


def make_spirals(params: SpiralParams, rng: RngState):
    """Two interleaved Archimedean spirals, point-reflections of each other.

    m = n_points/2 points per spiral at t = k/m for k = 1..m (t = 0 is skipped:
    both spirals would land on the origin with conflicting labels), angle
    t * turns * 2*pi, radius t. Spiral 0 gets target -1, its reflection +1.
    Coordinates are rescaled to lie strictly inside (-1, 1)^2 after optional
    Gaussian noise. The split is stratified and shuffled.
    """
    m = params.n_points // 2
    t = np.arange(1, m + 1) / m
    phi = t * params.turns * 2.0 * np.pi
    sp0 = np.column_stack((t * np.sin(phi), t * np.cos(phi)))
    sp1 = -sp0
    coords = np.vstack((sp0, sp1))
    labels = np.concatenate((np.full(m, -1.0), np.full(m, 1.0)))
    if params.noise_std > 0:
        coords = coords + rng.generator.normal(0.0, params.noise_std, size=coords.shape)
    denom = max(1.0 + 4.0 * params.noise_std, float(np.max(np.abs(coords)))) * (1.0 + 1e-12)
    coords = coords / denom

    n_train = int(round(params.train_fraction * m))
    train_idx, test_idx = [], []
    for cls in range(2):
        perm = cls * m + rng.permutation(m)
        train_idx.extend(perm[:n_train])
        test_idx.extend(perm[n_train:])
    train_idx = np.array(train_idx)
    test_idx = np.array(test_idx)
    train = Dataset(inputs=coords[train_idx], targets=labels[train_idx, None])
    test = Dataset(inputs=coords[test_idx], targets=labels[test_idx, None])
    return train, test


def spirals_to_csv(path, train: Dataset, test: Dataset):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "y", "label"])
        for ds in (train, test):
            for (x, y), (label,) in zip(ds.inputs, ds.targets):
                w.writerow([f"{x:.17g}", f"{y:.17g}", int(label)])


# -- protocol ------------------------------------------------------------


@dataclass(frozen=True)
class TrainConfig:
    spec: NetworkSpec
    alpha: float
    max_epochs: int
    convergence_window: int = 10
    runs: int = 100
    base_seed: int = 0
    task: str = ""
    # > 0: evaluate train/test accuracy every `eval_every` epochs and define
    # convergence as 100% train accuracy on `convergence_window` consecutive
    # checks (the 2-spirals protocol) instead of per-epoch all-correct flags
    eval_every: int = 0

    def __post_init__(self):
        if self.max_epochs < 1:
            raise ValueError(f"max_epochs must be >= 1, got {self.max_epochs}")
        if self.convergence_window < 1:
            raise ValueError(f"convergence_window must be >= 1, got {self.convergence_window}")
        if self.max_epochs < self.convergence_window and self.eval_every == 0:
            raise ValueError("max_epochs must be >= convergence_window")
        if self.runs < 1:
            raise ValueError(f"runs must be >= 1, got {self.runs}")


@dataclass
class RunRecord:
    seed: int
    converged: bool
    epochs_to_converge: int | None
    final_train_accuracy: float
    test_accuracy: float | None
    wall_time: float
    trajectory: list = field(default_factory=list)  # (epoch, train_acc, test_acc)


def convergence_check(flags, window: int):
    """First (1-indexed) epoch ending a run of `window` consecutive True flags."""
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    streak = 0
    for e, ok in enumerate(flags, start=1):
        streak = streak + 1 if ok else 0
        if streak >= window:
            return True, e
    return False, None


def accuracy(net: Network, data: Dataset) -> float:
    Y = net.forward_batch(data.inputs)
    ok = np.all((Y != 0.0) & (np.sign(Y) == np.sign(data.targets)), axis=1)
    return float(np.mean(ok))


def run_trial(config: TrainConfig, seed: int, train: Dataset, test: Dataset | None = None) -> RunRecord:
    """One seeded training run: init, epoch loop, early stop on convergence."""
    start = time.perf_counter()
    rng = RngState(seed)
    net = Network.init(config.spec, rng)
    converged = False
    epoch_of_convergence = None
    streak = 0
    trajectory = []
    for epoch in range(1, config.max_epochs + 1):
        stats = net.train_epoch(train, config.alpha, rng)
        if config.eval_every > 0:
            if epoch % config.eval_every == 0:
                tr_acc = accuracy(net, train)
                te_acc = accuracy(net, test) if test is not None else None
                trajectory.append((epoch, tr_acc, te_acc))
                streak = streak + 1 if tr_acc == 1.0 else 0
        else:
            streak = streak + 1 if stats.all_correct else 0
        if streak >= config.convergence_window:
            converged = True
            epoch_of_convergence = epoch
            break
    return RunRecord(
        seed=seed,
        converged=converged,
        epochs_to_converge=epoch_of_convergence,
        final_train_accuracy=accuracy(net, train),
        test_accuracy=accuracy(net, test) if test is not None else None,
        wall_time=time.perf_counter() - start,
        trajectory=trajectory,
    )


def _trial_worker(args):
    config, seed, train, test = args
    return run_trial(config, seed, train, test)


def summarize(records, max_epochs: int) -> dict:
    """Aggregate a batch; non-converged runs count max_epochs in the mean."""
    epochs = np.array(
        [r.epochs_to_converge if r.converged else max_epochs for r in records], dtype=np.float64
    )
    test_accs = [r.test_accuracy for r in records if r.test_accuracy is not None]
    return {
        "runs": len(records),
        "converged": sum(r.converged for r in records),
        "mean_epochs": float(np.mean(epochs)),
        "std_epochs": float(np.std(epochs)),
        "mean_train_accuracy": float(np.mean([r.final_train_accuracy for r in records])),
        "mean_test_accuracy": float(np.mean(test_accs)) if test_accs else None,
    }


def run_batch(config: TrainConfig, train: Dataset, test: Dataset | None = None, jobs: int = 1):
    """Independent trials with seeds base_seed .. base_seed+runs-1."""
    seeds = range(config.base_seed, config.base_seed + config.runs)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_trial_worker, [(config, s, train, test) for s in seeds]))
    else:
        records = [run_trial(config, s, train, test) for s in seeds]
    return records, summarize(records, config.max_epochs)


def run_spirals(config: TrainConfig, params: SpiralParams, jobs: int = 1):
    """The 2-spirals pipeline: generate, split, train with sampled accuracy
    trajectories (every `eval_every` epochs, default 10)."""
    if config.eval_every <= 0:
        config = replace(config, eval_every=10)
    train, test = make_spirals(params, RngState(params.seed))
    records, summary = run_batch(config, train, test, jobs=jobs)
    summary["spiral_params"] = {
        "n_points": params.n_points,
        "turns": params.turns,
        "train_fraction": params.train_fraction,
        "noise_std": params.noise_std,
        "seed": params.seed,
    }
    return records, summary, (train, test)


# -- hidden-size sweep ---------------------------------------------------


def sweep_hidden_sizes(make_config, h_values, train: Dataset, test: Dataset | None = None, jobs: int = 1):
    """Run a batch per hidden size; make_config(h) builds the TrainConfig."""
    results = []
    for h in h_values:
        config = make_config(h)
        _, summary = run_batch(config, train, test, jobs=jobs)
        results.append((h, summary))
    return results


def best_hidden_size(sweep_results) -> int:
    """Most converged runs; ties broken by fewer mean epochs, then smaller h."""
    return min(
        sweep_results, key=lambda item: (-item[1]["converged"], item[1]["mean_epochs"], item[0])
    )[0]


# -- result files --------------------------------------------------------


def write_results_csv(path, records, task: str, arch: str, alpha: float, init_std: float,
                      timing: bool = False):
    """One row per run. Wall times are only written when `timing` is set so
    repeated runs of the same command produce byte-identical files."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["seed", "task", "arch", "alpha", "init_std", "converged", "epochs",
                    "final_train_acc", "test_acc", "wall_time_s"])
        for r in records:
            w.writerow([
                r.seed,
                task,
                arch,
                f"{alpha:g}",
                f"{init_std:g}",
                int(r.converged),
                r.epochs_to_converge if r.converged else "",
                f"{r.final_train_accuracy:.6f}",
                f"{r.test_accuracy:.6f}" if r.test_accuracy is not None else "",
                f"{r.wall_time:.3f}" if timing else "",
            ])


def write_summary_json(path, config_echo: dict, summary: dict):
    with open(path, "w") as fh:
        json.dump({"config": config_echo, "summary": summary}, fh, indent=2, sort_keys=True)
        fh.write("\n")
