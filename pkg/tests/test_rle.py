import math

import numpy as np
import pytest

from compest import (
    QueryCountedString,
    exact_rle_cost,
    meets_contract,
    probe_run_length,
    rle_additive_estimate,
    rle_bucketed_estimate,
    rle_multiplicative_search,
    rle_refined_search,
)
from compest.config import DEFAULT_CONFIG
from compest.oracles import ceil_log2
from compest.rle import (
    additive_probe_cap,
    contribution,
    rle_bucketed_estimate_detailed,
    rle_multiplicative_search_detailed,
    rle_refined_search_detailed,
)
from naive import all_ones, alternating, random_symbols


def acc(arr, sigma=2):
    return QueryCountedString.from_tokens(arr, sigma)


# -- probing -------------------------------------------------------------


def test_probe_examples():
    r = probe_run_length(acc(np.array([0, 0, 1, 1, 0])), 3, 8)
    assert (r.length, r.capped) == (2, False)
    r = probe_run_length(acc(all_ones(100)), 50, 8)
    assert (r.length, r.capped) == (8, True)
    assert r.queries <= 17
    r = probe_run_length(acc(np.concatenate([[0], np.ones(99)]).astype(np.uint8)), 1, 8)
    assert (r.length, r.capped) == (1, False)


def test_probe_matches_direct_computation():
    rng = np.random.default_rng(5)
    for _ in range(200):
        n = int(rng.integers(1, 60))
        arr = rng.integers(0, 2, size=n).astype(np.uint8)
        t = int(rng.integers(1, n + 1))
        cap = int(rng.integers(1, 12))
        lo = hi = t - 1
        while lo > 0 and arr[lo - 1] == arr[t - 1]:
            lo -= 1
        while hi < n - 1 and arr[hi + 1] == arr[t - 1]:
            hi += 1
        true_len = hi - lo + 1
        r = probe_run_length(acc(arr), t, cap)
        if true_len >= cap:
            assert (r.length, r.capped) == (cap, True)
        else:
            assert (r.length, r.capped) == (true_len, False)


def test_probe_query_budget():
    w = acc(all_ones(10_000))
    sess = w.session()
    r = probe_run_length(sess, 5_000, 64)
    assert r.queries <= 2 * 64 + 1
    assert sess.queries == r.queries


def test_contribution_dominated_by_decreasing_envelope():
    # c(ell) itself ticks up where the length ceiling jumps (e.g. 4/7 -> 5/8
    # at sigma=2), but it never exceeds the smooth envelope
    # (log2(ell+1) + 1 + s) / ell, which is non-increasing. That envelope is
    # what the capped-probe tail bound relies on.
    for sigma in (2, 4, 26, 256):
        lengths = np.arange(1, 2000)
        c = contribution(lengths, sigma)
        s_bits = int(ceil_log2(np.array([sigma]))[0])
        envelope = (np.log2(lengths + 1) + 1 + s_bits) / lengths
        assert np.all(c <= envelope + 1e-12)
        assert np.all(np.diff(envelope) <= 1e-12)
        # so every longer run contributes at most the envelope at the cap
        running_max_from_right = np.maximum.accumulate(c[::-1])[::-1]
        assert np.all(running_max_from_right <= envelope + 1e-12)


def test_probe_cap_tail_bound():
    # ignored runs contribute at most eps/2 per position, for many parameter mixes
    for eps in (0.03, 0.1, 0.3, 0.7):
        for sigma in (2, 4, 26, 1024):
            ell0 = additive_probe_cap(eps, sigma)
            tail = (int(ceil_log2(np.array([ell0 + 1]))[0]) + int(ceil_log2(np.array([sigma]))[0])) / ell0
            assert tail <= eps / 2


# -- additive estimator ---------------------------------------------------


def test_additive_rejects_bad_epsilon():
    w = acc(alternating(100))
    for eps in (0.0, 1.0, -0.2, 5.0):
        with pytest.raises(ValueError):
            rle_additive_estimate(w, eps, seed=1)


def test_additive_alternating_is_exact():
    n = 100_000
    w = acc(alternating(n))
    rep = rle_additive_estimate(w, 0.1, seed=123)
    assert rep.estimate == 2.0 * n == exact_rle_cost(alternating(n), 2).total_cost
    assert rep.lam == 1.0 and rep.epsilon == 0.1


def test_additive_all_ones_estimates_zero():
    n = 100_000
    w = acc(all_ones(n))
    rep = rle_additive_estimate(w, 0.1, seed=9)
    assert rep.estimate == 0.0
    exact = exact_rle_cost(all_ones(n), 2).total_cost
    assert meets_contract(rep, exact, n)


def test_additive_budget_and_contract_on_random():
    n = 30_000
    eps = 0.1
    hits = 0
    for seed in range(30):
        arr = random_symbols(n, 2, seed + 400)
        w = acc(arr)
        rep = rle_additive_estimate(w, eps, seed=seed)
        exact = exact_rle_cost(arr, 2).total_cost
        q = DEFAULT_CONFIG.additive_sample_count(eps)
        ell0 = additive_probe_cap(eps, 2)
        assert rep.queries_used <= q * (2 * ell0 + 1)
        assert rep.queries_used <= DEFAULT_CONFIG.additive_query_ceiling(eps, 2)
        hits += abs(rep.estimate - exact) <= eps * n
    assert hits >= 27


def test_additive_small_input_goes_exact():
    arr = random_symbols(100, 2, seed=8)
    w = acc(arr)
    rep = rle_additive_estimate(w, 0.2, seed=0)
    assert rep.estimate == exact_rle_cost(arr, 2).total_cost
    assert rep.queries_used == 100


def test_additive_probe_records():
    from compest.rle import rle_additive_estimate_detailed

    arr = random_symbols(50_000, 2, seed=12)
    rep, probes = rle_additive_estimate_detailed(acc(arr), 0.1, seed=6)
    assert len(probes) == DEFAULT_CONFIG.additive_sample_count(0.1)
    s_bits = int(ceil_log2(np.array([2]))[0])
    for p in probes[:200]:
        if p.capped:
            assert p.contribution == 0.0
        else:
            expect = (int(ceil_log2(np.array([p.length + 1]))[0]) + s_bits) / p.length
            assert p.contribution == pytest.approx(expect)
    mean_contrib = float(np.mean([p.contribution for p in probes]))
    assert rep.estimate == pytest.approx(arr.size * mean_contrib)


def test_run_probe_validation():
    from compest import RunProbe

    with pytest.raises(ValueError):
        RunProbe(position=1, length=8, capped=True, contribution=0.5)


def test_additive_deterministic_replay():
    arr = random_symbols(50_000, 2, seed=2)
    r1 = rle_additive_estimate(acc(arr), 0.05, seed=77)
    r2 = rle_additive_estimate(acc(arr), 0.05, seed=77)
    assert r1 == r2


# -- bucketed estimator ---------------------------------------------------


def test_bucketed_rejects_bad_params():
    w = acc(alternating(100))
    with pytest.raises(ValueError):
        rle_bucketed_estimate(w, 0.0, 0.5, seed=1)
    with pytest.raises(ValueError):
        rle_bucketed_estimate(w, 0.1, 1.5, seed=1)


def test_bucketed_alternating_concentrates_in_first_bucket():
    n = 100_000
    w = acc(alternating(n))
    rep, table = rle_bucketed_estimate_detailed(w, 0.05, 1 / 3, seed=5)
    assert table.rows[0].beta == 1.0  # every position sits in a unit run
    assert rep.estimate == pytest.approx(2.0 * n)
    assert rep.lam == 3.0 and rep.confidence == pytest.approx(2 / 3)


def test_bucketed_all_ones_estimates_zero():
    n = 100_000
    w = acc(all_ones(n))
    rep, table = rle_bucketed_estimate_detailed(w, 0.05, 1 / 3, seed=5)
    assert not table.exact_mode
    assert rep.estimate == 0.0  # runs exceed every bucket cap
    assert meets_contract(rep, exact_rle_cost(all_ones(n), 2).total_cost, n)


def test_bucketed_sample_counts_follow_weights():
    w = acc(random_symbols(100_000, 2, seed=3))
    _, table = rle_bucketed_estimate_detailed(w, 0.05, 1 / 3, seed=6)
    table.validate()
    for row in table.rows:
        expect = min(table.q, math.ceil(table.q * row.weight))
        assert row.q_h == expect and row.q_h <= table.q


def test_bucketed_full_sampling_two_sided_identity():
    # with the whole string classified, the output lands in [exact, 2*exact]
    for seed in range(8):
        arr = random_symbols(1000, 2, seed + 900)
        w = acc(arr)
        rep, table = rle_bucketed_estimate_detailed(w, 0.3, 1 / 3, seed=seed)
        assert table.exact_mode  # sample count >= n triggers the full scan
        exact = exact_rle_cost(arr, 2).total_cost
        # ignored tail (runs past the last bucket) is bounded by eps*n/2
        assert exact - 0.3 * arr.size / 2 <= rep.estimate <= 2 * exact
        assert rep.queries_used == arr.size


def test_bucketed_query_ceiling():
    eps, delta = 0.05, 1 / 3
    w = acc(random_symbols(100_000, 2, seed=13))
    rep = rle_bucketed_estimate(w, eps, delta, seed=21)
    ell0 = additive_probe_cap(eps, 2)
    assert rep.queries_used <= DEFAULT_CONFIG.bucketed_query_ceiling(eps, delta, ell0)


# -- multiplicative searches ----------------------------------------------


def test_search_terminates_fast_on_incompressible():
    n = 2**16
    w = acc(alternating(n))
    trace = rle_multiplicative_search_detailed(w, seed=11)
    assert len(trace.rounds) <= 2
    exact = 2 * n
    assert exact / 4 <= trace.report.estimate <= 4 * exact
    assert trace.report.lam == 4.0 and trace.report.epsilon == 0.0


def test_search_continues_while_lower_bound_nonpositive():
    n = 2**16
    w = acc(all_ones(n))
    trace = rle_multiplicative_search_detailed(w, seed=11)
    nonpos = [r for r in trace.rounds if r.lower <= 0]
    assert nonpos, "early rounds must have had nonpositive lower bounds"
    for r in trace.rounds[:-1]:
        assert r.lower <= 0 or r.upper / r.lower > 16
    exact = exact_rle_cost(all_ones(n), 2).total_cost
    assert exact / 4 <= trace.report.estimate <= 4 * exact


def test_search_on_random_binary():
    n = 2**15
    arr = random_symbols(n, 2, seed=42)
    exact = exact_rle_cost(arr, 2).total_cost
    for seed in range(5):
        rep = rle_multiplicative_search(acc(arr), seed=seed)
        assert exact / 4 <= rep.estimate <= 4 * exact


def test_refined_rejects_bad_gamma():
    w = acc(alternating(100))
    for gamma in (0.0, -1.0):
        with pytest.raises(ValueError):
            rle_refined_search(w, gamma, seed=1)


def test_refined_alternating_within_factor():
    n = 2**16
    w = acc(alternating(n))
    exact = 2 * n
    trace = rle_refined_search_detailed(w, 0.5, seed=3)
    est = trace.report.estimate
    assert exact / 1.5 <= est <= 1.5 * exact
    assert trace.report.lam == 1.5


def test_refined_loose_gamma_comparable_to_plain_search():
    n = 2**14
    arr = random_symbols(n, 2, seed=17)
    exact = exact_rle_cost(arr, 2).total_cost
    rep = rle_refined_search(acc(arr), 3.0, seed=2)
    assert exact / 4 <= rep.estimate <= 4 * exact


def test_refined_query_growth_is_polynomial_in_inv_gamma():
    n = 2**16
    arr = random_symbols(n, 2, seed=23)
    q_loose = rle_refined_search(acc(arr), 1.0, seed=4).queries_used
    q_tight = rle_refined_search(acc(arr), 0.25, seed=4).queries_used
    assert q_tight <= 64 * max(1, q_loose)
