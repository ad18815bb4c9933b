#!/usr/bin/env python3
"""The hard-instance families, and the gaps that make them hard.

Each family witnesses a limit of sublinear estimation:

* planted zeros (wk): multiplicative RLE approximation must find needles;
* coin runs: additive RLE error eps*n needs ~1/eps^2 samples, because the
  cost gap between nearby biases is Theta(eps * n);
* phased strings (lztight): the LZ diversity upper bound is tight;
* colors-to-LZ (col2lz): LZ estimation inherits the hardness of support-size
  estimation - and the instance can be served lazily, block by block.
"""

import math

import numpy as np

from compest import (
    QueryCountedString,
    distinct_profile,
    exact_lz_cost,
    exact_rle_cost,
    generate_coin_runs,
    generate_colors_to_lz,
    generate_lz_tight,
    generate_wk,
)

print("== planted zeros: cost ~ k * log2(n/k), zeros are the only signal ==")
n, k = 1024, 16
costs = [exact_rle_cost(generate_wk(n, k, seed), 2).total_cost for seed in range(20)]
print(f"  n={n} k={k}: costs {min(costs)}..{max(costs)}, scale k*log2(n/k) = {k * math.log2(n / k):.0f}")

print("\n== coin runs: mean cost separates biases by Theta(eps * n) ==")
n = 30_000
for p in (0.5, 0.6):
    costs = [exact_rle_cost(generate_coin_runs(n, p, seed), 2).total_cost for seed in range(20)]
    print(f"  p={p}: mean exact cost {np.mean(costs):.0f}")

print("\n== phased strings: few distinct substrings, yet expensive to parse ==")
m, ell0 = 64, 16
arr = generate_lz_tight(m, ell0)
prof = distinct_profile(arr, ell0)
c = exact_lz_cost(arr).total_cost
harmonic = m * sum(1 / l for l in range(1, ell0 + 1))
print(f"  m={m} phases={ell0}: n={arr.size}, C_lz={c} >= m*H(ell0) ~ {harmonic:.0f}")
print(f"  d_ell vs 3*ell*m: {[(int(prof[l-1]), 3*l*m) for l in (1, 4, 16)]}")

print("\n== colors-to-LZ: lazy blocks, one source read per block ==")
n_prime, alpha = 500, 0.1
tau = QueryCountedString.from_tokens(np.random.default_rng(4).integers(0, 50, size=n_prime))
w = generate_colors_to_lz(tau, alpha, 2, seed=9)
sess = w.session()
sess.read_many(np.arange(1, 101))  # touch the first 100 positions
print(f"  instance length {w.length} = n' * k with k = {w.length // n_prime}")
print(f"  after reading 100 positions: blocks materialized = {w.provider.blocks_materialized}, "
      f"source reads = {w.provider.tau_reads}")
full = w.materialize()
print(f"  full instance: C_lz = {exact_lz_cost(full).total_cost} <= 2*alpha'*n = {2 * alpha * w.length:.0f}")
