"""Acceptance gate: one test per headline claim, run at full protocol scale.

Each test prints a single summary line so a verbose run reads as a scorecard.
These are deliberately heavyweight (the full suite takes on the order of an
hour on one core); the fast unit suite lives in the other test modules.
"""

import numpy as np
import pytest

from quasinet.experiments import (
    PARITY_HIDDEN,
    SpiralParams,
    TrainConfig,
    make_parity,
    make_xor,
    run_batch,
    run_spirals,
    sweep_hidden_sizes,
    best_hidden_size,
)
from quasinet.gradcheck import check_network, relative_error
from quasinet.layers import (
    EPS_DIV,
    ProductLayer,
    TanhSumLayer,
    partial_product,
    product_factors,
    quasi_pow,
)
from quasinet.network import LayerSpec, Network, NetworkSpec, predict_correct
from quasinet.numerics import RngState

GRADCHECK_TOL = 1e-6
SHORTCUT_TOL = 1e-10


def scorecard(name: str, ok: bool, detail: str):
    line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
    print(line, flush=True)
    assert ok, line


def parity_spec(n: int, h: int, out_kind: str = "product") -> NetworkSpec:
    return NetworkSpec(
        input_dim=n, layers=(LayerSpec("tanh_sum", h), LayerSpec(out_kind, 1))
    )


def random_samples(rng: RngState, n: int, in_dim: int, out_dim: int):
    X = rng.generator.uniform(-0.9, 0.9, size=(n, in_dim))
    D = np.sign(rng.generator.standard_normal((n, out_dim)))
    D[D == 0] = 1.0
    return X, D


# -- shared heavyweight runs ----------------------------------------------


@pytest.fixture(scope="module")
def parity_table():
    """100 seeds per (n, h) row of the parity benchmark, 10k-epoch cap."""
    table = {}
    for n, h in sorted(PARITY_HIDDEN.items()):
        cfg = TrainConfig(
            spec=parity_spec(n, h), alpha=0.9, max_epochs=10000, runs=100,
            base_seed=0, task=f"parity{n}",
        )
        records, summary = run_batch(cfg, make_parity(n))
        table[(n, h)] = (records, summary)
    return table


class TestGradientOracle:
    def test_analytic_gradients_match_finite_differences(self):
        """Every architecture used by the experiments, >= 100 random nets."""
        small_archs = [parity_spec(2, 2)] + [
            parity_spec(n, h) for n, h in sorted(PARITY_HIDDEN.items())
        ] + [parity_spec(5, 50, out_kind="tanh_sum")]
        deep_arch = NetworkSpec(
            input_dim=2,
            layers=(
                LayerSpec("tanh_sum", 10), LayerSpec("product", 80),
                LayerSpec("tanh_sum", 5), LayerSpec("product", 1),
            ),
            init_std=0.5,
        )
        checked = 0
        worst = 0.0
        seed = 0
        for spec in small_archs:
            for _ in range(12):
                rng = RngState(seed)
                seed += 1
                net = Network.init(spec, rng)
                report = check_network(
                    net, random_samples(rng, 1, spec.input_dim, spec.output_dim),
                    tol=GRADCHECK_TOL,
                )
                worst = max(worst, report.max_rel_err)
                assert report.passed, (spec, report.worst())
                checked += 1
        for _ in range(4):
            rng = RngState(seed)
            seed += 1
            net = Network.init(deep_arch, rng)
            report = check_network(net, random_samples(rng, 1, 2, 1), tol=GRADCHECK_TOL)
            worst = max(worst, report.max_rel_err)
            assert report.passed, ("deep", report.worst())
            checked += 1
        scorecard(
            "gradient oracle", checked >= 100 and worst < GRADCHECK_TOL,
            f"{checked} nets, worst rel err {worst:.2e} < {GRADCHECK_TOL:g}",
        )


class TestQuasiPowIdentities:
    def test_identities_exact_on_random_points(self):
        rng = RngState(0)
        hs = rng.generator.uniform(-1.0, 1.0, size=10000)
        ds = rng.generator.uniform(0.0, 1.0, size=10000)
        ok = (
            all(quasi_pow(h, 1.0) == h for h in hs)
            and all(quasi_pow(h, 0.0) == 1.0 for h in hs)
            and all(quasi_pow(1.0, d) == 1.0 for d in ds)
            and all(quasi_pow(0.0, d) == 1.0 - d for d in ds)
        )
        scorecard("quasi_pow identities", ok, "4 identities exact at 10000 points each")


class TestDivisionShortcut:
    def test_divided_and_direct_partial_products_agree(self):
        rng = RngState(0)
        worst = 0.0
        checked = 0
        for _ in range(2000):
            n = int(rng.generator.integers(2, 12))
            W = rng.gaussian_matrix(1, n, 0.0, 2.0)
            h = np.tanh(rng.gaussian_matrix(1, n, 0.0, 2.0)[0])
            F = product_factors(W, h)[0]
            y = float(np.prod(F))
            for j in range(n):
                direct = float(np.prod(np.delete(F, j)))
                got = partial_product(y, F, j)
                assert np.isfinite(got)
                if abs(F[j]) > EPS_DIV:
                    worst = max(worst, abs(got - direct) / max(1.0, abs(direct)))
                    checked += 1
                else:
                    assert got == pytest.approx(direct, rel=1e-12)
        # adversarial near-zero factors exercise the fallback path
        F = np.array([0.5, EPS_DIV / 2, -0.8])
        got = partial_product(float(np.prod(F)), F, 1)
        assert np.isfinite(got) and got == pytest.approx(0.5 * -0.8, rel=1e-12)
        scorecard(
            "division shortcut", worst < SHORTCUT_TOL,
            f"{checked} divided partials, worst abs err {worst:.2e} < {SHORTCUT_TOL:g}",
        )


class TestExactParityConstruction:
    def test_saturated_network_classifies_all_patterns(self):
        for n in range(1, 11):
            W1 = np.zeros((n, n + 1))
            for j in range(n):
                W1[j, j] = 20.0  # saturate each tanh unit onto its input's sign
            W2 = np.full((1, n), 30.0)  # sigma ~ 1: pass every factor through
            net = Network([TanhSumLayer(W1), ProductLayer(W2)])
            ds = make_parity(n)
            Y = net.forward_batch(ds.inputs)
            for t in range(len(ds)):
                assert predict_correct(Y[t], ds.targets[t]), (n, t)
        scorecard("exact parity construction", True,
                  "all 2^n patterns correct for n = 1..10")


class TestXorConvergence:
    def test_minimal_xor_hundred_seeds(self):
        cfg = TrainConfig(
            spec=parity_spec(2, 2), alpha=0.9, max_epochs=500, runs=100,
            base_seed=0, task="xor",
        )
        _, summary = run_batch(cfg, make_xor())
        scorecard(
            "minimal XOR", summary["converged"] >= 98,
            f"{summary['converged']}/100 converged within 500 epochs (need >= 98)",
        )


class TestParityTable:
    def test_every_row_converges(self, parity_table):
        counts = {}
        for (n, h), (_, summary) in parity_table.items():
            counts[(n, h)] = summary["converged"]
        ok = all(c >= 95 for c in counts.values())
        scorecard(
            "parity table",
            ok,
            "converged/100 per (n,h): "
            + ", ".join(f"({n},{h})={c}" for (n, h), c in sorted(counts.items()))
            + " (need >= 95 each)",
        )

    def test_parity_seven_converges_quickly(self, parity_table):
        records, _ = parity_table[(7, 15)]
        epochs = [r.epochs_to_converge for r in records if r.converged]
        median = float(np.median(epochs))
        scorecard("parity-7 speed", median < 500,
                  f"median epochs to convergence {median:g} < 500")


class TestBaselineContrast:
    def test_mlp_baseline_underperforms(self, parity_table):
        cfg = TrainConfig(
            spec=parity_spec(5, 50, out_kind="tanh_sum"), alpha=0.9,
            max_epochs=10000, runs=100, base_seed=0, task="parity5-mlp",
        )
        _, summary = run_batch(cfg, make_parity(5))
        product_count = parity_table[(5, 7)][1]["converged"]
        mlp_count = summary["converged"]
        scorecard(
            "MLP baseline contrast",
            mlp_count < product_count and mlp_count <= 80,
            f"tanh-tanh h=50: {mlp_count}/100 vs product h=7: {product_count}/100 "
            f"(need strictly fewer and <= 80)",
        )


class TestHiddenSizeSweep:
    @pytest.mark.parametrize("n", [4, 6])
    def test_best_hidden_size_near_input_count(self, n):
        data = make_parity(n)

        def make_config(h):
            return TrainConfig(
                spec=parity_spec(n, h), alpha=0.9, max_epochs=2000, runs=25,
                base_seed=0, task=f"parity{n}-sweep",
            )

        h_values = list(range(max(1, n - 2), 2 * n + 5))
        results = sweep_hidden_sizes(make_config, h_values, data)
        best = best_hidden_size(results)
        lo, hi = n - 2, 2 * n + 2
        scorecard(
            f"hidden-size sweep (parity {n})", lo <= best <= hi,
            f"best h = {best} within [{lo}, {hi}]; counts "
            + ", ".join(f"h={h}:{s['converged']}" for h, s in results),
        )


class TestSpirals:
    def test_two_spirals_generalize(self):
        spec = NetworkSpec(
            input_dim=2,
            layers=(
                LayerSpec("tanh_sum", 10), LayerSpec("product", 80),
                LayerSpec("tanh_sum", 5), LayerSpec("product", 1),
            ),
            init_std=0.5,
        )
        cfg = TrainConfig(
            spec=spec, alpha=0.01, max_epochs=10000, runs=10, base_seed=0,
            task="spirals", eval_every=10,
        )
        records, summary, _ = run_spirals(cfg, SpiralParams())
        mean_test = summary["mean_test_accuracy"]
        full = sum(r.converged for r in records)
        scorecard(
            "2-spirals", mean_test >= 0.95 and full >= 1,
            f"mean test accuracy {mean_test:.4f} (need >= 0.95), "
            f"{full}/10 fully converged (need >= 1)",
        )


class TestReproducibility:
    def test_same_seed_byte_identical_csv(self, tmp_path):
        from quasinet.cli import main

        args = ["xor", "--runs", "10", "--epochs", "200"]
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        main(args + ["--out-csv", str(p1)])
        main(args + ["--out-csv", str(p2)])
        ok = p1.read_bytes() == p2.read_bytes()
        scorecard("reproducibility", ok,
                  "repeated command produced byte-identical CSV")
