"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines. Every tolerance is pinned here; nothing is deferred to later
calibration.
"""

import itertools
import time

import numpy as np

from conftest import ar1
from permplane.bounds import contains_many, envelope
from permplane.cli import main
from permplane.infomeasures import (
    jensen_shannon_divergence,
    plane_many,
    plane_point,
    q0,
)
from permplane.ingest import TimeSeries
from permplane.ordinal import (
    EmbeddingParams,
    OrdinalDistribution,
    ordinal_distribution,
    pattern_rank,
)
from permplane.ranking import rank_series
from permplane.stats import correlation_battery, kendall, spearman
from permplane.surrogate import surrogate_test
from test_stats import (
    make_panel_with_quantifiers,
    oracle_kendall_tau,
    oracle_spearman_rho,
)


def report(number: int, name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"[criterion {number}] {name}: {status}{suffix}")


def fixture_series(n=1209, seed=20240101) -> TimeSeries:
    rng = np.random.default_rng(seed)
    return TimeSeries(name="fixture", values=np.cumsum(rng.standard_normal(n)))


def test_criterion_1_worked_example_exactness(worked_series):
    params = EmbeddingParams(3, 1)
    ordinal_distribution(worked_series, params)  # warm the numpy code paths
    t0 = time.perf_counter()
    dist = ordinal_distribution(worked_series, params)
    elapsed = time.perf_counter() - t0

    p = dist.probabilities
    expected = {
        (0, 1, 2): 2 / 5,
        (2, 0, 1): 2 / 5,
        (1, 0, 2): 1 / 5,
        (0, 2, 1): 0.0,
        (1, 2, 0): 0.0,
        (2, 1, 0): 0.0,
    }
    exact = all(p[pattern_rank(perm)] == want for perm, want in expected.items())
    ok = exact and elapsed < 1e-3
    report(1, "worked-example exactness", ok, f"{elapsed * 1e6:.0f} us")
    assert exact, f"probabilities {p.tolist()} differ from exact rationals"
    assert elapsed < 1e-3, f"distribution took {elapsed:.6f}s, budget 1 ms"


def test_criterion_2_q0_identity():
    q0(2)  # warm up
    t0 = time.perf_counter()
    worst = 0.0
    for m in (2, 6, 24, 120, 720):
        one_hot = np.zeros(m)
        one_hot[0] = 1.0
        uniform = np.full(m, 1.0 / m)
        product = q0(m) * jensen_shannon_divergence(one_hot, uniform)
        worst = max(worst, abs(product - 1.0))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-12 and elapsed < 1e-3
    report(2, "Q0 identity", ok, f"worst |q0*Jmax - 1| = {worst:.2e}, {elapsed * 1e3:.2f} ms")
    assert worst <= 1e-12
    assert elapsed < 1e-3, f"identity check took {elapsed:.6f}s, budget 1 ms"


def test_criterion_3_degenerate_plane_points():
    monotone = plane_point(ordinal_distribution(np.arange(50.0), EmbeddingParams(3, 1)))
    exact_corner = monotone.h == 0.0 and monotone.c == 0.0

    counts = np.full(6, 7, dtype=np.int64)
    uniform_dist = OrdinalDistribution(
        params=EmbeddingParams(3, 1),
        counts=counts,
        total=42,
        probabilities=counts / 42,
        n_source=44,
    )
    random_corner = plane_point(uniform_dist)
    near_ideal = abs(random_corner.h - 1.0) <= 1e-12 and abs(random_corner.c) <= 1e-12

    ok = exact_corner and near_ideal
    report(
        3,
        "degenerate plane points",
        ok,
        f"monotone=({monotone.h}, {monotone.c}), uniform=({random_corner.h}, {random_corner.c})",
    )
    assert exact_corner
    assert near_ideal


def test_criterion_4_shuffle_limit():
    t0 = time.perf_counter()
    series = fixture_series()
    trials = 1000
    rates = {}
    for dim, h_floor, c_ceiling in ((3, 0.99, 0.01), (5, 0.97, None)):
        r = surrogate_test(series, EmbeddingParams(dim, 1), n_shuffles=trials, seed=777)
        good = sum(
            1
            for q in r.surrogates
            if q.h >= h_floor and (c_ceiling is None or q.c <= c_ceiling)
        )
        rates[dim] = good / trials
    elapsed = time.perf_counter() - t0
    ok = rates[3] >= 0.99 and rates[5] >= 0.99 and elapsed < 30.0
    report(
        4,
        "shuffle limit",
        ok,
        f"D=3 rate {rates[3]:.3f}, D=5 rate {rates[5]:.3f}, {elapsed:.1f}s",
    )
    assert rates[3] >= 0.99, f"D=3 pass rate {rates[3]}"
    assert rates[5] >= 0.99, f"D=5 pass rate {rates[5]}"
    assert elapsed < 30.0


def test_criterion_5_envelope_containment():
    t0 = time.perf_counter()
    rng = np.random.default_rng(31337)
    violations = 0
    checked = 0
    for m, size in ((6, 100_000), (120, 10_000)):
        env = envelope(m)
        h, c = plane_many(rng.dirichlet(np.ones(m), size=size))
        inside = contains_many(env, h, c, eps=1e-9)
        violations += int(size - inside.sum())
        checked += size
    elapsed = time.perf_counter() - t0
    ok = violations == 0 and elapsed < 60.0
    report(5, "envelope containment", ok, f"{checked} points, {violations} violations, {elapsed:.1f}s")
    assert violations == 0
    assert elapsed < 60.0


def test_criterion_6_monotone_transform_invariance():
    rng = np.random.default_rng(555)
    params = EmbeddingParams(3, 1)
    transforms = (
        lambda v: v**3,  # odd cube, sign-preserving
        np.exp,
        lambda v: 3.5 * v + 2.0,
    )
    mismatches = 0
    for _ in range(100):
        x = rng.standard_normal(300)
        base = plane_point(ordinal_distribution(x, params))
        for f in transforms:
            other = plane_point(ordinal_distribution(f(x), params))
            if other.h != base.h or other.c != base.c:
                mismatches += 1
    ok = mismatches == 0
    report(6, "monotone-transform invariance", ok, f"{mismatches} bit-level mismatches in 300 checks")
    assert mismatches == 0


def test_criterion_7_correlation_oracle():
    worst_s = worst_k = 0.0
    checked = 0

    # exhaustive small-alphabet sweep covers every tie pattern at n = 3, 4
    for n, alphabet in ((3, (0.0, 1.0, 2.0)), (4, (0.0, 1.0, 2.0))):
        vectors = [
            v for v in itertools.product(alphabet, repeat=n) if len(set(v)) > 1
        ]
        for x in vectors:
            for y in vectors:
                worst_s = max(worst_s, abs(spearman(x, y).rho - oracle_spearman_rho(x, y)))
                worst_k = max(worst_k, abs(kendall(x, y).rho - oracle_kendall_tau(x, y)))
                checked += 1

    # randomized coverage with heavy ties for n = 5..8
    rng = np.random.default_rng(99)
    for n in (5, 6, 7, 8):
        for _ in range(60):
            x = rng.integers(0, 4, size=n).astype(float)
            y = rng.integers(0, 4, size=n).astype(float)
            if len(set(x.tolist())) < 2 or len(set(y.tolist())) < 2:
                continue
            worst_s = max(worst_s, abs(spearman(x, y).rho - oracle_spearman_rho(x, y)))
            worst_k = max(worst_k, abs(kendall(x, y).rho - oracle_kendall_tau(x, y)))
            checked += 1
        for _ in range(40):
            x = rng.standard_normal(n)
            y = rng.standard_normal(n)
            worst_s = max(worst_s, abs(spearman(x, y).rho - oracle_spearman_rho(x, y)))
            worst_k = max(worst_k, abs(kendall(x, y).rho - oracle_kendall_tau(x, y)))
            checked += 1

    # battery reproduces the footnote semantics: one missing attribute value
    # lowers n for that cell only
    h = {"a": 0.2, "b": 0.4, "c": 0.6, "d": 0.8}
    attrs = {
        "a": {"qr": 1.0, "ie": 4.0},
        "b": {"qr": 2.0, "ie": 3.0},
        "c": {"qr": None, "ie": 2.0},
        "d": {"qr": 4.0, "ie": 1.0},
    }
    panel, quantifiers = make_panel_with_quantifiers(h, attrs, ["qr", "ie"])
    cells = {cell.attribute: cell for cell in correlation_battery(panel, quantifiers)}
    footnote_ok = cells["qr"].n == 3 and cells["ie"].n == 4

    ok = worst_s <= 1e-12 and worst_k <= 1e-12 and footnote_ok
    report(
        7,
        "correlation oracle",
        ok,
        f"{checked} inputs, worst spearman {worst_s:.2e}, worst kendall {worst_k:.2e}",
    )
    assert worst_s <= 1e-12
    assert worst_k <= 1e-12
    assert footnote_ok


def test_criterion_8_correlated_process_ordering():
    t0 = time.perf_counter()
    params = EmbeddingParams(4, 1)
    trials = 200
    correct = 0
    for trial in range(trials):
        points = {}
        for label, phi in (("a_phi0.00", 0.0), ("b_phi0.50", 0.5), ("c_phi0.95", 0.95)):
            x = ar1(phi, 1209, seed=10_000 + 7 * trial + int(phi * 100))
            points[label] = plane_point(ordinal_distribution(x, params))
        ranked = [e.name for e in rank_series(points).entries]
        correct += ranked == ["a_phi0.00", "b_phi0.50", "c_phi0.95"]
    elapsed = time.perf_counter() - t0
    rate = correct / trials
    ok = rate >= 0.95 and elapsed < 60.0
    report(8, "correlated-process ordering", ok, f"rate {rate:.3f}, {elapsed:.1f}s")
    assert rate >= 0.95
    assert elapsed < 60.0


def test_criterion_9_end_to_end_determinism(tmp_path, write_wide_csv):
    rng = np.random.default_rng(2718)
    panel = write_wide_csv(
        {"alpha": rng.standard_normal(300), "beta": np.cumsum(rng.standard_normal(300))}
    )

    outputs = []
    for run in ("first", "second"):
        out = tmp_path / run
        code_a = main(
            ["analyze", "--input", str(panel), "--dims", "3,4", "--out", str(out / "analyze")]
        )
        code_j = main(
            ["analyze", "--input", str(panel), "--dims", "3", "--format", "json",
             "--out", str(out / "analyze_json")]
        )
        code_s = main(
            ["shuffle-test", "--input", str(panel), "--dims", "3", "--shuffles", "5",
             "--seed", "1234", "--out", str(out / "shuffle")]
        )
        assert code_a == code_j == code_s == 0
        files = sorted(p for p in (out).rglob("*") if p.is_file())
        outputs.append({p.relative_to(out): p.read_bytes() for p in files})

    same_names = set(outputs[0]) == set(outputs[1])
    identical = same_names and all(outputs[0][k] == outputs[1][k] for k in outputs[0])
    report(
        9,
        "end-to-end determinism",
        identical,
        f"{len(outputs[0])} files byte-compared",
    )
    assert same_names
    assert identical
