"""Sublinear estimators for run-length encoding cost.

Three estimators with different accuracy/query trade-offs, all reading the
input only through a query-counted session:

* :func:`rle_additive_estimate` - additive error eps*n from O~(1/eps^3) reads.
  Samples positions, bounds the length of each sampled run by probing its
  neighbourhood, and averages per-position cost contributions. Runs longer
  than the probe cap are dropped; their per-position contribution is at most
  eps/2, which the cap is chosen to guarantee.
* :func:`rle_bucketed_estimate` - a (3, eps) estimate from O~(1/eps) reads.
  Groups positions into geometric buckets by run length and estimates each
  bucket's population with precision proportional to its weight.
* :func:`rle_multiplicative_search` - a pure 4-multiplicative estimate with
  no additive term, by calling the bucketed estimator with geometrically
  shrinking eps until the implied cost interval is tight. Expected reads
  scale with n / C, so less compressible inputs finish sooner.
  :func:`rle_refined_search` sharpens the factor to (1 + gamma) with
  narrower buckets at a poly(1/gamma) query premium.

The per-position cost contribution of index t in a run of length ell is
c(t) = (ceil(log2(ell + 1)) + ceil(log2(sigma))) / ell, so that the total
cost equals n times the mean contribution. c is dominated by the
non-increasing envelope (log2(ell + 1) + 1 + s) / ell (it is not itself
monotone: the ceiling jumps at powers of two), which is what lets capped
probes and coarse buckets stand in for exact lengths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._rng import derive_seed, make_rng
from .accessor import EstimateReport, QueryCountedString, QuerySession
from .config import DEFAULT_CONFIG, EstimatorConfig
from .oracles import alphabet_bits, ceil_log2, exact_rle_cost, run_lengths


def contribution(length, alphabet_size: int) -> np.ndarray:
    """Per-position cost contribution c(t) for positions in runs of the given length."""
    ln = np.asarray(length, dtype=np.int64)
    return (ceil_log2(ln + 1) + alphabet_bits(alphabet_size)) / ln


def additive_probe_cap(epsilon: float, alphabet_size: int) -> int:
    """Probe cap ell0 = ceil(8 * log2(4*sigma/eps) / eps).

    Positions in runs at least this long are ignored by the additive
    estimator; the cap guarantees their contribution is at most eps/2 each,
    which is asserted on every call rather than trusted.
    """
    ell0 = math.ceil(8.0 * math.log2(4.0 * alphabet_size / epsilon) / epsilon)
    s_bits = alphabet_bits(alphabet_size)
    # c(ell) is not strictly non-increasing (the length ceiling jumps at
    # powers of two), but it is dominated by the non-increasing envelope
    # (log2(ell+1) + 1 + s) / ell; asserting the envelope at ell0 bounds the
    # contribution of every ignored position, not just the one at ell0.
    tail_exact = (int(ceil_log2(np.array([ell0 + 1]))[0]) + s_bits) / ell0
    tail_envelope = (math.log2(ell0 + 1) + 1 + s_bits) / ell0
    if max(tail_exact, tail_envelope) > epsilon / 2:
        raise RuntimeError(
            f"probe cap {ell0} leaves per-position tail {tail_envelope:.4g} > eps/2; "
            "the cap formula is broken"
        )
    return ell0


@dataclass(frozen=True)
class ProbeResult:
    """Outcome of probing one position: exact run length, or a certified floor."""

    length: int
    capped: bool  # True: run length is >= `length` (== the cap); False: exact
    queries: int


@dataclass(frozen=True)
class RunProbe:
    """One sampled position in the additive estimator: the probed run length
    (exact below the cap, else the certified ">= cap" flag) and the cost
    contribution credited to it - c(length) when exact, 0 when capped."""

    position: int
    length: int
    capped: bool
    contribution: float

    def __post_init__(self):
        if self.capped and self.contribution != 0.0:
            raise ValueError("capped probes contribute 0 to the estimate")


class RunProber:
    """Batch incremental run-length prober.

    Holds one probe per sampled position and expands each probe left first,
    then right, one offset at a time, stopping at a run boundary, the string
    edge, or once ``cap`` positions of the run are confirmed. State persists,
    so raising the cap later resumes the expansion instead of re-reading.
    All probes advance in lockstep so reads batch into vectorized calls.
    """

    def __init__(self, session: QuerySession, positions: np.ndarray):
        self.sess = session
        self.t = np.asarray(positions, dtype=np.int64)
        m = self.t.size
        self.sym = session.read_many(self.t) if m else np.empty(0)
        self.reads = np.ones(m, dtype=np.int64)
        self.left = np.zeros(m, dtype=np.int64)
        self.right = np.zeros(m, dtype=np.int64)
        self.left_open = self.t > 1
        self.right_open = self.t < session.length

    def confirmed(self) -> np.ndarray:
        return self.left + self.right + 1

    def _expand_side(self, cap: int, upto: int, left_side: bool) -> None:
        open_ = self.left_open if left_side else self.right_open
        ext = self.left if left_side else self.right
        while True:
            conf = self.left[:upto] + self.right[:upto] + 1
            idx = np.flatnonzero(open_[:upto] & (conf < cap))
            if idx.size == 0:
                return
            pos = self.t[idx] - self.left[idx] - 1 if left_side else self.t[idx] + self.right[idx] + 1
            vals = self.sess.read_many(pos)
            self.reads[idx] += 1
            match = vals == self.sym[idx]
            ext[idx[match]] += 1
            open_[idx[~match]] = False
            moved = idx[match]
            if left_side:
                open_[moved] &= self.t[moved] - self.left[moved] > 1
            else:
                open_[moved] &= self.t[moved] + self.right[moved] < self.sess.length

    def advance(self, cap: int, upto: int | None = None) -> None:
        """Expand the first ``upto`` probes until each knows its exact run
        length or has confirmed at least ``cap`` positions."""
        upto = self.t.size if upto is None else upto
        self._expand_side(cap, upto, left_side=True)
        self._expand_side(cap, upto, left_side=False)

    def result(self, i: int, cap: int) -> ProbeResult:
        conf = int(self.left[i] + self.right[i] + 1)
        if conf >= cap:
            return ProbeResult(length=cap, capped=True, queries=int(self.reads[i]))
        return ProbeResult(length=conf, capped=False, queries=int(self.reads[i]))


def probe_run_length(w, t: int, cap: int) -> ProbeResult:
    """Probe the run containing position ``t``: exact length if below ``cap``,
    otherwise the certified flag that it is at least ``cap``."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    sess = w.session() if isinstance(w, QueryCountedString) else w
    if not 1 <= t <= sess.length:
        raise IndexError(f"position {t} outside [1, {sess.length}]")
    prober = RunProber(sess, np.array([t], dtype=np.int64))
    prober.advance(cap)
    return prober.result(0, cap)


def _exact_scan_estimate(sess: QuerySession) -> float:
    data = sess.read_all()
    return float(exact_rle_cost(data, sess.alphabet_size).total_cost)


def rle_additive_estimate_detailed(
    w: QueryCountedString, epsilon: float, seed: int, *, config: EstimatorConfig = DEFAULT_CONFIG
) -> tuple[EstimateReport, list[RunProbe]]:
    """As :func:`rle_additive_estimate`, also returning the per-sample probes
    (empty when the degenerate exact scan fired)."""
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must be in (0, 1)")
    n = w.length
    sigma = w.alphabet_size
    ell0 = additive_probe_cap(epsilon, sigma)
    q = config.additive_sample_count(epsilon)
    sess = w.session()
    if n <= ell0 or q >= n:
        est = _exact_scan_estimate(sess)
        return EstimateReport(est, 1.0, epsilon, sess.queries, seed), []
    rng = make_rng(seed)
    ts = rng.integers(1, n + 1, size=q)
    prober = RunProber(sess, ts)
    prober.advance(ell0)
    conf = prober.confirmed()
    capped = conf >= ell0
    contrib = np.where(capped, 0.0, contribution(np.maximum(conf, 1), sigma))
    est = float(n * contrib.mean())
    used = sess.queries
    if used > q * (2 * ell0 + 1):
        raise RuntimeError("probe budget exceeded; prober is broken")
    probes = [
        RunProbe(
            position=int(ts[i]),
            length=int(ell0 if capped[i] else conf[i]),
            capped=bool(capped[i]),
            contribution=float(contrib[i]),
        )
        for i in range(q)
    ]
    return EstimateReport(est, 1.0, epsilon, used, seed), probes


def rle_additive_estimate(
    w: QueryCountedString, epsilon: float, seed: int, *, config: EstimatorConfig = DEFAULT_CONFIG
) -> EstimateReport:
    """Estimate the RLE cost to within an additive eps*n, claiming (1, eps).

    Degenerate inputs (n below the probe cap, or sample count at least n)
    fall back to an exact scan; sublinearity is meaningless below the budget.
    """
    report, _ = rle_additive_estimate_detailed(w, epsilon, seed, config=config)
    return report


@dataclass(frozen=True)
class BucketRow:
    h: int
    low: float        # run lengths in [low, high) land in the bucket
    high: float
    cap: int          # probe cap that decides membership
    weight: float     # cost estimate per position in the bucket
    q_h: int
    hits: int

    @property
    def beta(self) -> float:
        return self.hits / self.q_h if self.q_h else 0.0


@dataclass(frozen=True)
class BucketTable:
    """Per-bucket sampling record for the bucketed estimator.

    In the sampled regime the sample counts obey
    q_h = min(q, ceil(q * weight_h)); when the estimator degenerates to a
    full scan (``exact_mode``) q_h is the full population n instead.
    """

    h0: int
    s_bits: int
    q: int
    rows: tuple
    exact_mode: bool = False

    def validate(self) -> None:
        for row in self.rows:
            if not 0.0 <= row.beta <= 1.0:
                raise AssertionError(f"beta out of range in bucket {row.h}")
            if not self.exact_mode:
                expect = min(self.q, math.ceil(self.q * row.weight))
                if row.q_h != expect:
                    raise AssertionError(f"bucket {row.h}: q_h {row.q_h} != {expect}")


def _pow2_buckets(ell0: int, s_bits: int) -> list[tuple[int, float, float, int, float]]:
    h0 = math.ceil(math.log2(ell0))
    out = []
    for h in range(1, h0 + 1):
        out.append((h, float(2 ** (h - 1)), float(2**h), 2**h, (h + s_bits) / 2 ** (h - 1)))
    return out


def _geometric_buckets(ell0: int, s_bits: int, gamma: float) -> list[tuple[int, float, float, int, float]]:
    ratio = 1.0 + gamma / 2.0
    h0 = math.ceil(math.log(ell0) / math.log(ratio))
    out = []
    for h in range(1, h0 + 1):
        low = ratio ** (h - 1)
        high = ratio**h
        lmin = math.ceil(low)
        if lmin >= high:  # no integer run length falls in this bucket
            continue
        cap = math.floor(high) + 1
        weight = float((int(ceil_log2(np.array([lmin + 1]))[0]) + s_bits) / lmin)
        out.append((h, low, high, cap, weight))
    return out


def _bucketed_core(
    sess: QuerySession,
    buckets: list,
    q: int,
    seed: int,
) -> tuple[float, BucketTable, int]:
    """Shared engine for the factor-2 and refined bucketed estimators.

    Returns (estimate, table, queries-so-far). Degenerates to an exact scan
    when the sample count reaches the string length; the scan classifies
    every position, so each beta_h is the true bucket fraction and the
    output lands within a factor of the bucket width of the true cost.
    """
    n = sess.length
    s_bits = alphabet_bits(sess.alphabet_size)
    h0 = max((h for h, *_ in buckets), default=0)
    rows = []
    if q >= n:
        data = sess.read_all()
        _, lens = run_lengths(data)
        per_pos = np.repeat(lens, lens)
        est = 0.0
        for h, low, high, cap, weight in buckets:
            hits = int(np.count_nonzero((per_pos >= low) & (per_pos < high)))
            est += (hits / n) * n * weight
            rows.append(BucketRow(h, low, high, cap, weight, q_h=n, hits=hits))
        table = BucketTable(h0=h0, s_bits=s_bits, q=q, rows=tuple(rows), exact_mode=True)
        table.validate()
        return est, table, sess.queries

    rng = make_rng(seed)
    ts = rng.integers(1, n + 1, size=q)
    prober = RunProber(sess, ts)
    est = 0.0
    for h, low, high, cap, weight in buckets:
        q_h = min(q, math.ceil(q * weight))
        prober.advance(cap, upto=q_h)
        conf = prober.confirmed()[:q_h]
        exact = conf < cap  # both boundaries found below the cap
        member = exact & (conf >= math.ceil(low)) & (conf < high)
        hits = int(np.count_nonzero(member))
        est += (n / q_h) * hits * weight
        rows.append(BucketRow(h, low, high, cap, weight, q_h=q_h, hits=hits))
    table = BucketTable(h0=h0, s_bits=s_bits, q=q, rows=tuple(rows), exact_mode=False)
    table.validate()
    return est, table, sess.queries


def rle_bucketed_estimate_detailed(
    w: QueryCountedString,
    epsilon: float,
    delta: float,
    seed: int,
    *,
    config: EstimatorConfig = DEFAULT_CONFIG,
    session: QuerySession | None = None,
) -> tuple[EstimateReport, BucketTable]:
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must be in (0, 1)")
    if not 0 < delta < 1:
        raise ValueError("delta must be in (0, 1)")
    sess = session if session is not None else w.session()
    sigma = sess.alphabet_size
    ell0 = additive_probe_cap(epsilon, sigma)
    buckets = _pow2_buckets(ell0, alphabet_bits(sigma))
    q = config.bucketed_sample_count(epsilon, delta)
    est, table, _ = _bucketed_core(sess, buckets, q, seed)
    report = EstimateReport(est, 3.0, epsilon, sess.queries, seed, confidence=1.0 - delta)
    return report, table


def rle_bucketed_estimate(
    w: QueryCountedString, epsilon: float, delta: float, seed: int, *, config=DEFAULT_CONFIG
) -> EstimateReport:
    """Bucketed (3, eps)-estimate of the RLE cost, confidence 1 - delta."""
    report, _ = rle_bucketed_estimate_detailed(w, epsilon, delta, seed, config=config)
    return report


@dataclass(frozen=True)
class SearchRound:
    j: int
    epsilon: float
    delta: float
    estimate: float
    lower: float
    upper: float


@dataclass(frozen=True)
class SearchTrace:
    rounds: tuple
    report: EstimateReport


def _interval_search(
    w: QueryCountedString,
    seed: int,
    config: EstimatorConfig,
    *,
    bucket_fn,
    q_scale: float,
    shrink: float,
    grow: float,
    stop_ratio: float,
    claim_lam: float,
) -> SearchTrace:
    """Shared search loop: call the bucketed estimator with eps_j = 2^-j and
    delta_j = (1/3) * 2^-j, convert each (factor, additive) estimate into a
    cost interval [lower, upper], and stop once the interval ratio is below
    ``stop_ratio``. A non-positive lower end means the ratio is treated as
    infinite and the loop continues. The output sqrt(lower * upper) is then
    within sqrt(stop_ratio) of the cost whenever every interval was valid.
    """
    n = w.length
    sess = w.session()
    sigma = sess.alphabet_size
    s_bits = alphabet_bits(sigma)
    rounds = []
    for j in range(1, config.search_max_rounds + 1):
        eps_j = 2.0**-j
        delta_j = (1.0 / 3.0) * 2.0**-j
        ell0 = additive_probe_cap(eps_j, sigma)
        q = math.ceil(config.bucketed_sample_count(eps_j, delta_j) * q_scale)
        est, _, _ = _bucketed_core(sess, bucket_fn(ell0, s_bits), q, derive_seed(seed, j))
        lower = (est - eps_j * n) * shrink
        upper = (est + eps_j * n) * grow
        rounds.append(SearchRound(j, eps_j, delta_j, est, lower, upper))
        if lower > 0 and upper / lower <= stop_ratio:
            out = math.sqrt(lower * upper)
            report = EstimateReport(out, claim_lam, 0.0, sess.queries, seed)
            return SearchTrace(rounds=tuple(rounds), report=report)
    raise RuntimeError("cost search did not converge; this should be impossible")


def rle_multiplicative_search_detailed(
    w: QueryCountedString, seed: int, *, config: EstimatorConfig = DEFAULT_CONFIG
) -> SearchTrace:
    return _interval_search(
        w,
        seed,
        config,
        bucket_fn=_pow2_buckets,
        q_scale=1.0,
        shrink=1.0 / 3.0,
        grow=3.0,
        stop_ratio=16.0,
        claim_lam=4.0,
    )


def rle_multiplicative_search(
    w: QueryCountedString, seed: int, *, config: EstimatorConfig = DEFAULT_CONFIG
) -> EstimateReport:
    """Pure 4-multiplicative estimate of the RLE cost (no additive slack)."""
    return rle_multiplicative_search_detailed(w, seed, config=config).report


def rle_refined_search_detailed(
    w: QueryCountedString, gamma: float, seed: int, *, config: EstimatorConfig = DEFAULT_CONFIG
) -> SearchTrace:
    if gamma <= 0:
        raise ValueError("gamma must be > 0")
    ratio = 1.0 + gamma / 2.0
    # Per-bucket population estimates aim for relative error eta; the clamp
    # keeps the interval arithmetic sane for very loose gamma.
    eta = min(gamma / 8.0, 0.4)
    # Narrower buckets mean more of them and tighter per-bucket estimates:
    # scale the sample count by (1/2 / eta)^2 relative to the factor-2
    # buckets' baseline deviation of 1/2, and by the bucket-count growth.
    q_scale = (0.5 / eta) ** 2 * max(1.0, 1.0 / math.log2(ratio))
    stop_ratio = (1.0 + gamma) ** 2
    # Interval validity: estimate <= ratio*(1+eta)*C + eps*n and
    # estimate >= (1-eta)*C - eps*n, so the cost interval is
    # [(est - eps*n) / (ratio*(1+eta)), (est + eps*n) / (1-eta)].
    # ratio*(1+eta)/(1-eta) < (1+gamma)^2 for every gamma > 0, so the loop
    # terminates once eps_j is small against C/n.
    return _interval_search(
        w,
        seed,
        config,
        bucket_fn=lambda ell0, s_bits: _geometric_buckets(ell0, s_bits, gamma),
        q_scale=q_scale,
        shrink=1.0 / (ratio * (1.0 + eta)),
        grow=1.0 / (1.0 - eta),
        stop_ratio=stop_ratio,
        claim_lam=1.0 + gamma,
    )


def rle_refined_search(
    w: QueryCountedString, gamma: float, seed: int, *, config: EstimatorConfig = DEFAULT_CONFIG
) -> EstimateReport:
    """(1 + gamma)-multiplicative estimate via narrower run-length buckets."""
    return rle_refined_search_detailed(w, gamma, seed, config=config).report
