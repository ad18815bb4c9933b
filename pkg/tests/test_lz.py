import math

import numpy as np
import pytest

from compest import (
    LzEstimateParams,
    QueryCountedString,
    SharedWindowSamples,
    SubstringTrie,
    distinct_profile,
    distinguish_compressible,
    estimate_distinct,
    exact_distinct_substrings,
    exact_lz_cost,
    lz_estimate,
    meets_contract,
)
from compest._rng import make_rng
from compest.colors import amplification_runs, sample_count
from compest.config import DEFAULT_CONFIG, EstimatorConfig
from compest.lz import lz_estimate_detailed
from naive import all_ones, random_symbols


def acc(arr, sigma=None):
    return QueryCountedString.from_tokens(arr, sigma)


# -- trie -----------------------------------------------------------------


def test_trie_counters_match_brute_force():
    rng = make_rng(99)
    for trial in range(30):
        depth = int(rng.integers(1, 6))
        trie = SubstringTrie(depth)
        inserted = []
        for _ in range(int(rng.integers(0, 40))):
            word = tuple(rng.integers(0, 3, size=depth).tolist())
            trie.insert(word)
            inserted.append(word)
        for ell in range(1, depth + 1):
            assert trie.distinct_at(ell) == len({w[:ell] for w in inserted})
            assert trie.distinct_at(ell) <= max(1, trie.inserted)


def test_trie_ignores_symbols_past_depth_limit():
    trie = SubstringTrie(2)
    trie.insert([1, 2, 3])
    trie.insert([1, 2, 9])
    assert trie.counters == (1, 1)


def test_trie_validates_depth():
    trie = SubstringTrie(3)
    with pytest.raises(ValueError):
        trie.distinct_at(0)
    with pytest.raises(ValueError):
        trie.distinct_at(4)


# -- shared samples ---------------------------------------------------------


def test_counting_backends_agree():
    arr = random_symbols(4096, 2, seed=6)
    small = EstimatorConfig(trie_max_work=1 << 30)  # force the trie lane
    big = EstimatorConfig(trie_max_work=0)  # force the vectorized lane
    w1, w2 = acc(arr), acc(arr)
    s1 = SharedWindowSamples(w1.session(), 6, 5, 400, seed=12, config=small)
    s2 = SharedWindowSamples(w2.session(), 6, 5, 400, seed=12, config=big)
    for ell in range(1, 7):
        assert np.array_equal(s1.distinct_counts(ell), s2.distinct_counts(ell))


def test_sort_backend_agrees_on_wide_alphabet():
    # symbols too wide for the bincount grid exercise the unique-based lane
    arr = make_rng(3).integers(0, 50_000, size=2000)
    cfg = EstimatorConfig(trie_max_work=0, bincount_max_cells=1)
    s = SharedWindowSamples(acc(arr).session(), 3, 4, 150, seed=8, config=cfg)
    s_trie = SharedWindowSamples(acc(arr).session(), 3, 4, 150, seed=8)
    for ell in (1, 2, 3):
        assert np.array_equal(s.distinct_counts(ell), s_trie.distinct_counts(ell))


def test_shared_starts_reused_across_lengths():
    arr = random_symbols(4096, 2, seed=4)
    w = acc(arr)
    shared = SharedWindowSamples(w.session(), 8, 3, 200, seed=5)
    # one start set serves every length: column ell of the windows is the
    # prefix projection, with no fresh draws per length
    starts = shared.run_starts(1)
    _ = shared.distinct_counts(2)
    _ = shared.distinct_counts(8)
    assert np.array_equal(shared.run_starts(1), starts)
    assert starts.max() <= arr.size - 8 + 1


def test_shared_window_reads_within_reuse_budget():
    arr = random_symbols(4096, 2, seed=4)
    w = acc(arr)
    sess = w.session()
    SharedWindowSamples(sess, 8, 3, 200, seed=5)
    assert sess.queries <= 3 * 200 * 8


# -- distinct estimation ----------------------------------------------------


def test_estimate_distinct_constant_string():
    w = acc(all_ones(2000))
    est = estimate_distinct(w, 2, B=2.0, delta=0.1, seed=3)
    assert est in (1.0, 2.0)  # d=1 exactly; sampled lane reports B * 1


def test_estimate_distinct_exact_lane_for_small_factor():
    arr = random_symbols(4096, 2, seed=10)
    w = acc(arr)
    est = estimate_distinct(w, 4, B=0.5, delta=0.1, seed=3)
    assert est == exact_distinct_substrings(arr, 4)
    assert w.reads == arr.size  # full scan


def test_estimate_distinct_sampled_contract():
    arr = random_symbols(4096, 2, seed=20)
    exact = exact_distinct_substrings(arr, 4)
    n_virt = arr.size - 4 + 1
    assert sample_count(n_virt, 4.0) < n_virt  # sampled (not exact) lane
    hits = 0
    for seed in range(100):
        w = acc(arr)
        est = estimate_distinct(w, 4, B=4.0, delta=1 / 30, seed=seed)
        assert est == int(est / 4.0) * 4.0  # B times an integer distinct count
        hits += exact / 4.0 <= est <= 4.0 * exact
    assert hits >= 90


def test_estimate_distinct_validates_length():
    w = acc(random_symbols(100, 2, seed=1))
    with pytest.raises(ValueError):
        estimate_distinct(w, 101, B=2.0, delta=0.1, seed=0)


# -- parameter derivation ----------------------------------------------------


def test_params_example():
    p = LzEstimateParams.derive(8, 0.05, 100_000)
    assert p.ell0 == 5
    assert p.B == pytest.approx(8 / (2 * math.sqrt(math.log2(5))))
    assert p.B == pytest.approx(2.625, abs=0.01)


def test_params_validation():
    with pytest.raises(ValueError):
        LzEstimateParams.derive(1.0, 0.05, 100)
    with pytest.raises(ValueError):
        LzEstimateParams.derive(8, 0.0, 100)
    with pytest.raises(ValueError):
        LzEstimateParams.derive(8, 0.25, 100)  # A * eps = 2


def test_params_clamp_ell0_to_n():
    p = LzEstimateParams.derive(1.5, 0.01, 20)
    assert p.ell0 == 20


# -- full estimator -----------------------------------------------------------


def test_lz_estimate_constant_string_bounded_by_a_plus_eps_n():
    n = 100_000
    w = acc(all_ones(n))
    rep, params, dhat = lz_estimate_detailed(w, 8, 0.05, seed=3)
    assert np.all(dhat >= 1.0)
    assert rep.estimate <= 8 + 0.05 * n + 1e-9
    assert meets_contract(rep, exact_lz_cost(all_ones(n)).total_cost, n)


def test_lz_estimate_contract_on_random_binary():
    n = 50_000
    arr = random_symbols(n, 2, seed=14)
    exact = exact_lz_cost(arr).total_cost
    for seed in range(5):
        rep = lz_estimate(acc(arr), 8, 0.05, seed=seed)
        assert meets_contract(rep, exact, n)
        assert rep.lam == 8 and rep.epsilon == 0.05


def test_lz_estimate_sandwich_with_exact_profile():
    # the estimate built from exact counts respects the structural sandwich
    for seed in range(10):
        arr = random_symbols(2048, 2, seed + 50)
        ell0 = 8
        prof = distinct_profile(arr, ell0)
        m = max(prof[ell - 1] / ell for ell in range(1, ell0 + 1))
        c = exact_lz_cost(arr).total_cost
        assert m <= c <= 4 * (m * math.log2(ell0) + arr.size / ell0)


def test_lz_estimate_deterministic_replay():
    arr = random_symbols(30_000, 2, seed=9)
    assert lz_estimate(acc(arr), 8, 0.05, seed=4) == lz_estimate(acc(arr), 8, 0.05, seed=4)


def test_lz_query_ceiling_at_reference_params():
    n = 100_000
    arr = random_symbols(n, 2, seed=31)
    rep = lz_estimate(acc(arr), 8, 0.05, seed=0)
    assert rep.queries_used <= DEFAULT_CONFIG.lz_query_ceiling(n, 8, 0.05)


# -- distinguisher ------------------------------------------------------------


def test_distinguish_constant_vs_random_bytes():
    n = 100_000
    lo, hi = math.sqrt(n), n / 4
    res = distinguish_compressible(acc(all_ones(n)), lo, hi, seed=1)
    assert res.verdict == "LOW"
    arr = random_symbols(n, 256, seed=2)
    res = distinguish_compressible(acc(arr, 256), lo, hi, seed=1)
    assert res.verdict == "HIGH"


def test_distinguish_rejects_small_gap():
    w = acc(random_symbols(1000, 2, seed=1))
    with pytest.raises(ValueError, match="gap too small"):
        distinguish_compressible(w, 100, 399, seed=0)  # ratio < 4
    with pytest.raises(ValueError):
        distinguish_compressible(w, 100, 50, seed=0)


def test_distinguish_derived_parameters_recorded():
    n = 10_000
    w = acc(random_symbols(n, 2, seed=3))
    res = distinguish_compressible(w, 20, 2000, seed=5)
    assert res.A == pytest.approx(math.sqrt(100) / 2)
    assert res.epsilon == pytest.approx(20 * res.A / n)
    assert res.report.lam == res.A


# -- query reuse at scale ------------------------------------------------------


def test_sampled_lane_reuses_queries_across_lengths():
    # pick parameters where the sampling lane is genuinely sublinear
    n = 60_000
    arr = random_symbols(n, 2, seed=8)
    w = acc(arr)
    rep, params, _ = lz_estimate_detailed(w, 16, 0.05, seed=2)
    assert params.B > math.sqrt(10)  # sampled (not exact) regime
    k = amplification_runs(1 / (3 * params.ell0))
    s = sample_count(n - params.ell0 + 1, params.B)
    assert rep.queries_used <= k * s * params.ell0 + 1
