"""Acceptance suite: one test per acceptance criterion.

Each test prints a single ``PASS``/``FAIL`` line with the measured numbers and
then asserts. Tolerances and trial counts are fixed by the criteria and are
not tuned to the results.
"""

import itertools
import math
import time
from collections import Counter

import numpy as np
import pytest
from scipy import stats

from logparadox.core import arith_mean, concat, geom_mean, multiset_difference, multiset_equal, summarize
from logparadox.finite_diff import (
    Concat,
    Delete,
    Replace,
    closed_form_diff,
    condition_check,
    oracle_diff,
    sign,
)
from logparadox.generators import gen_exponential, gen_symmetric_tails, kmer_experiment, reference_models
from logparadox.paradox import heuristic_precondition, optimal_target, replace_step
from logparadox.resampling import MwuMethod, mwu_test, replacement_sweep
from logparadox.rng import make_rng

SEEDS = range(10)


@pytest.fixture
def say(capsys):
    def _say(cid, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {cid}: {detail}")
        return ok

    return _say


# 1 ---------------------------------------------------------------------------


def test_c01_worked_example(say):
    t0 = time.perf_counter()
    x = [2, 4, 6, 13]
    s = summarize(x)
    cases = {
        "concat": (closed_form_diff(x, Concat([5.5])), (-1, 1)),
        "delete": (closed_form_diff(x, Delete([6])), (1, -1)),
        "replace": (closed_form_diff(x, Replace([3, 11], [2, 13])), (-1, 1)),
    }
    elapsed = time.perf_counter() - t0
    signs = {k: (sign(r.d_arith), sign(r.d_geom)) for k, (r, _) in cases.items()}
    ok = (
        s.arith_mean == 6.25
        and abs(s.geom_mean - 4.998) <= 0.005
        and all(signs[k] == want for k, (_, want) in cases.items())
        and elapsed < 0.1
    )
    assert say(1, ok, f"mean={s.arith_mean} gmean={s.geom_mean:.5f} signs={signs} t={elapsed * 1e3:.2f}ms")


# 2 and 3 ---------------------------------------------------------------------


def _random_trials(n_trials, seed):
    rng = make_rng(seed)
    kinds = ("concat", "delete", "replace")

    def draw(k):
        return 10.0 ** rng.uniform(-3, 6, size=k)

    for t in range(n_trials):
        kind = kinds[t % 3]
        n = int(rng.integers(2, 501))
        x = draw(n)
        if kind == "concat":
            yield x, Concat(draw(int(rng.integers(1, 501))))
            continue
        k = int(rng.integers(1, n))
        sub = x[rng.choice(n, size=k, replace=False)]
        if kind == "delete":
            yield x, Delete(sub)
        else:
            yield x, Replace(draw(k), sub)


@pytest.fixture(scope="module")
def trials():
    t0 = time.perf_counter()
    rows = []
    for x, p in _random_trials(10_000, seed=2024):
        rows.append((closed_form_diff(x, p), oracle_diff(x, p), condition_check(x, p)))
    return rows, time.perf_counter() - t0


def _rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def test_c02_closed_form_vs_oracle(trials, say):
    rows, elapsed = trials
    worst = {"d_arith": 0.0, "d_geom": 0.0, "d_id": 0.0}
    bad = 0
    for c, o, _ in rows:
        trial_bad = False
        for k in worst:
            r = _rel(getattr(c, k), getattr(o, k))
            worst[k] = max(worst[k], r)
            trial_bad |= r > 1e-9
        bad += trial_bad
    ok = bad == 0 and elapsed < 10
    detail = ", ".join(f"{k} max rel {v:.2e}" for k, v in worst.items())
    assert say(2, ok, f"{len(rows)} trials, {bad} outside 1e-9; {detail}; t={elapsed:.2f}s")


def test_c03_condition_table(trials, say):
    rows, _ = trials
    violations = 0
    in_band = 0
    for _, o, pred in rows:
        for realized, predicted in ((sign(o.d_arith), pred.sign_arith), (sign(o.d_geom), pred.sign_geom)):
            if realized == 0:
                in_band += 1
            elif realized != predicted:
                violations += 1
    ok = violations == 0
    assert say(3, ok, f"{len(rows)} trials, {violations} sign violations, {in_band} diffs inside the 1e-12 band")


# 4 ---------------------------------------------------------------------------


def test_c04_replace_all_by_q(say):
    rng = make_rng(404)
    worst_a = worst_g = worst_c = 0.0
    for i in range(1000):
        n = int(rng.integers(2, 501))
        x = gen_exponential(n, seed=int(rng.integers(2 ** 63)))
        s = summarize(x)
        q = optimal_target(x)
        r = closed_form_diff(x, Replace([q] * n, x.values))
        id_ = s.inter_mean_distance
        worst_a = max(worst_a, abs(r.d_arith + id_ / 2) / id_)
        worst_g = max(worst_g, abs(r.d_geom - id_ / 2) / id_)
        crit = -r.d_arith * r.d_geom
        worst_c = max(worst_c, abs(crit - id_ ** 2 / 4) / (id_ ** 2 / 4))
    ok = worst_a <= 1e-9 and worst_g <= 1e-9 and worst_c <= 1e-8
    assert say(4, ok, f"max |d_a+ID/2|/ID={worst_a:.2e}, |d_g-ID/2|/ID={worst_g:.2e}, crit rel={worst_c:.2e}")


# 5 ---------------------------------------------------------------------------


def _mixed_vector(rng):
    n = int(rng.integers(3, 60))
    style = int(rng.integers(4))
    if style == 0:
        return 10.0 ** rng.uniform(-2, 4, size=n)
    if style == 1:
        return 10 + 1000 * rng.standard_exponential(n)
    if style == 2:
        # a tight body with one or two outliers either side
        body = rng.normal(100, 5, size=n)
        body[0] = rng.uniform(1, 100)
        body[-1] = rng.uniform(100, 400)
        return np.abs(body) + 1e-3
    return rng.uniform(1, 10, size=n)


def test_c05_minmax_precondition(say):
    rng = make_rng(505)
    counterexamples = holds = 0
    for _ in range(1000):
        x = _mixed_vector(rng)
        q = optimal_target(x)
        pre = heuristic_precondition(float(x.min()), float(x.max()), q)
        new, _ = replace_step(x)
        d_a = arith_mean(new) - arith_mean(x)
        d_g = geom_mean(new) - geom_mean(x)
        opposite = sign(d_a) * sign(d_g) == -1
        holds += pre
        counterexamples += pre != opposite
    ok = counterexamples == 0
    assert say(5, ok, f"1000 vectors, precondition true for {holds}, counterexamples {counterexamples}")


# 6 ---------------------------------------------------------------------------


def test_c06_replacement_sweep(say):
    t0 = time.perf_counter()
    strong = 0
    earlier = 0
    log = []
    for seed in SEEDS:
        data = gen_exponential(2000, seed=seed)
        big = replacement_sweep(data, max_fraction=0.1, sample_size=200, n_resamples=50, seed=seed)
        small = replacement_sweep(data, max_fraction=0.1, sample_size=50, n_resamples=50, seed=seed)
        p100 = big.point(100)
        strong += p100.p_value < 0.001 and p100.paradox_direction_ok
        k_big = big.threshold_crossings[0.05]
        k_small = small.threshold_crossings[0.05]
        earlier += k_big is not None and (k_small is None or k_big <= k_small)
        log.append(f"s{seed}:p={p100.p_value:.3g},k200={k_big},k50={k_small}")
    elapsed = time.perf_counter() - t0
    ok = strong >= 8 and earlier >= 7 and elapsed < 60
    assert say(
        6, ok,
        f"p<0.001 at k=100 in {strong}/10 seeds (need 8); S=200 crosses 0.05 no later than S=50 "
        f"in {earlier}/10 (need 7); t={elapsed:.1f}s; " + " ".join(log),
    )


# 7 ---------------------------------------------------------------------------


def test_c07_kmer_cells(say):
    t0 = time.perf_counter()
    a, b = reference_models()
    good = 0
    log = []
    for seed in SEEDS:
        r = kmer_experiment(a, b, n_cells=1000, structures_per_cell=525, seed=seed)
        mean_a, mean_b = r.arith_means_a.mean(), r.arith_means_b.mean()
        se_a = r.arith_means_a.std(ddof=1) / math.sqrt(r.arith_means_a.size)
        se_b = r.arith_means_b.std(ddof=1) / math.sqrt(r.arith_means_b.size)
        checks = (
            abs(mean_a - 372.2) <= 3 * se_a,
            abs(mean_b - 239.8) <= 3 * se_b,
            r.geom_means_b.mean() > r.geom_means_a.mean(),
            r.verdict.is_paradox,
            r.p_arith < 0.001 and r.p_geom < 0.001,
        )
        good += all(checks)
        log.append(f"s{seed}:A={mean_a:.1f}({(mean_a - 372.2) / se_a:+.1f}se),B={mean_b:.1f}({(mean_b - 239.8) / se_b:+.1f}se)")
    elapsed = time.perf_counter() - t0
    ok = good >= 9 and elapsed < 30
    assert say(7, ok, f"{good}/10 seeds meet all conditions (need 9); t={elapsed:.1f}s; " + " ".join(log))


# 8 ---------------------------------------------------------------------------


def _oracle_p(counts, total, obs, alternative):
    le = sum(c for s, c in counts.items() if s <= obs) / total
    ge = sum(c for s, c in counts.items() if s >= obs) / total
    if alternative == "greater":
        return ge
    if alternative == "less":
        return le
    return min(1.0, 2 * min(le, ge))


def test_c08_mwu_exhaustive(say):
    exact_mismatch = 0
    worst_normal = 0.0
    worst_at = None
    splits = 0
    for n1 in range(1, 9):
        for n2 in range(1, 9):
            ranks = range(1, n1 + n2 + 1)
            combos = list(itertools.combinations(ranks, n1))
            counts = Counter(sum(c) for c in combos)
            total = len(combos)
            for combo in combos:
                rest = [r for r in ranks if r not in combo]
                a, b = [float(v) for v in combo], [float(v) for v in rest]
                splits += 1
                for alt in ("two-sided", "greater", "less"):
                    want = _oracle_p(counts, total, sum(combo), alt)
                    exact_mismatch += mwu_test(a, b, alt, MwuMethod.EXACT).p_value != want
                    gap = abs(mwu_test(a, b, alt, MwuMethod.NORMAL_APPROX).p_value - want)
                    if gap > worst_normal:
                        worst_normal, worst_at = gap, (n1, n2)
    ok = exact_mismatch == 0 and worst_normal <= 0.05
    assert say(
        8, ok,
        f"{splits} splits x 3 alternatives: exact mismatches {exact_mismatch}; "
        f"normal approximation max gap {worst_normal:.4f} at (n1, n2)={worst_at}",
    )


# 9 ---------------------------------------------------------------------------


def _property_vector(rng, i):
    kind = i % 5
    n = int(rng.integers(1, 200))
    if kind == 0:
        return np.full(n, 10.0 ** rng.uniform(-3, 6))
    if kind == 1:
        return np.array([10.0 ** rng.uniform(-3, 6), 10.0 ** rng.uniform(-3, 6)])
    if kind == 2:
        lo = 10.0 ** rng.uniform(-3, -1)
        return np.where(rng.random(max(n, 2)) < 0.5, lo, lo * 1e9)
    if kind == 3:
        c = 10.0 ** rng.uniform(-3, 6)
        return c * (1 + 1e-12 * rng.standard_normal(max(n, 2)))
    return 10.0 ** rng.uniform(-3, 6, size=max(n, 2))


def test_c09_property_suite(say):
    rng = make_rng(909)
    failures = Counter()
    for i in range(10_000):
        x = _property_vector(rng, i)
        s = summarize(x)
        if not (s.min <= s.geom_mean <= s.arith_mean <= s.max):
            failures["ordering"] += 1
        if not (s.inter_mean_distance >= 0 and 0 < s.flatness <= 1):
            failures["id/flatness range"] += 1
        if s.min == s.max and not (s.arith_mean == s.geom_mean == s.min and s.inter_mean_distance == 0):
            failures["constant equality"] += 1
        c = 10.0 ** rng.uniform(-2, 2)
        if abs(geom_mean(c * x) - c * s.geom_mean) > 1e-12 * c * s.geom_mean:
            failures["geometric scaling"] += 1
        if abs(arith_mean(c * x) - c * s.arith_mean) > 1e-12 * c * s.arith_mean:
            failures["arithmetic scaling"] += 1
        xx = concat(x, x)
        if abs(arith_mean(xx) - s.arith_mean) > 1e-12 * s.arith_mean or abs(geom_mean(xx) - s.geom_mean) > 1e-12 * s.geom_mean:
            failures["self concat"] += 1
        y = 10.0 ** rng.uniform(-3, 6, size=int(rng.integers(1, 5)))
        for p in (Concat(y),) + ((Replace(y[:1], x[:1]), Delete(x[:1])) if x.size > 1 else ()):
            cf, o = closed_form_diff(x, p), oracle_diff(x, p)
            scale = max(s.arith_mean, arith_mean(y))
            for k in ("d_arith", "d_geom", "d_id"):
                if abs(getattr(cf, k) - getattr(o, k)) > 1e-9 * scale:
                    failures[f"closed form {k}"] += 1
        if x.size > 1:
            back = multiset_difference(concat(multiset_difference(concat(x, y[:1]), x[:1]), x[:1]), y[:1])
            if not multiset_equal(back, x):
                failures["replace round trip"] += 1
    ok = not failures
    assert say(9, ok, f"10000 vectors, failures: {dict(failures) or 'none'}")


# 10 --------------------------------------------------------------------------


def test_c10_symmetric_tails_trend(say):
    mus = np.arange(10, 101)
    rhos = []
    for seed in SEEDS:
        ids = [summarize(gen_symmetric_tails(float(mu), 2.0, 100, seed=seed * 1000 + int(mu))).inter_mean_distance for mu in mus]
        rhos.append(stats.spearmanr(mus, ids).statistic)
    good = sum(r > 0.95 for r in rhos)
    ok = good == 10
    assert say(10, ok, f"Spearman rho > 0.95 in {good}/10 seeds; min rho {min(rhos):.4f}")
