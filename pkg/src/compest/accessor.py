"""Query-counted access to input strings.

Every estimator reads its input only through this layer, which records the
set of distinct positions touched. That makes query-complexity claims
checkable: ``queries_used`` in an :class:`EstimateReport` is a measurement,
not an assumption.

Conventions:

* Positions are 1-indexed (``1 <= t <= n``); byte offsets in files are
  0-indexed and converted at the CLI boundary.
* A query is the first read of a distinct position. Re-reading a position is
  free ("cache-once"); all stated query budgets remain valid upper bounds
  under this accounting.
* Symbols are non-negative integers. Text and files are exposed as their
  bytes.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Callable

import numpy as np


class QueryCountedString:
    """Read-only string of symbols with a distinct-position read counter.

    Backed either by an in-memory array or by a lazy provider callback that
    materializes symbols on demand (used by reduction instances, where
    generating the whole string up front would defeat sublinearity).

    Concurrent estimator runs should each open their own :meth:`session`;
    the master counter merges all sessions, each session counts only the
    positions it touched itself.
    """

    def __init__(
        self,
        data: np.ndarray | None = None,
        *,
        provider: Callable[[np.ndarray], np.ndarray] | None = None,
        length: int | None = None,
        alphabet_size: int | None = None,
    ):
        if (data is None) == (provider is None):
            raise ValueError("exactly one of data or provider is required")
        if data is not None:
            data = np.ascontiguousarray(data)
            if data.ndim != 1:
                raise ValueError("backing data must be one-dimensional")
            if data.size == 0:
                raise ValueError("empty string")
            self._data = data
            self._provider = None
            self.length = int(data.size)
            inferred = int(np.unique(data).size)
            self.alphabet_size = max(2, inferred if alphabet_size is None else int(alphabet_size))
            if inferred > self.alphabet_size:
                raise ValueError(
                    f"{inferred} distinct symbols exceed declared alphabet size {self.alphabet_size}"
                )
        else:
            if length is None or alphabet_size is None:
                raise ValueError("provider-backed strings need explicit length and alphabet_size")
            if length < 1:
                raise ValueError("empty string")
            self._data = None
            self._provider = provider
            self.length = int(length)
            self.alphabet_size = max(2, int(alphabet_size))
        self._touched = np.zeros(self.length, dtype=bool)
        self._lock = threading.Lock()

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_bytes(cls, raw: bytes, alphabet_size: int | None = None) -> "QueryCountedString":
        return cls(np.frombuffer(raw, dtype=np.uint8), alphabet_size=alphabet_size)

    @classmethod
    def from_string(cls, text: str, alphabet_size: int | None = None) -> "QueryCountedString":
        return cls.from_bytes(text.encode("utf-8"), alphabet_size=alphabet_size)

    @classmethod
    def from_file(cls, path, alphabet_size: int | None = None) -> "QueryCountedString":
        with open(path, "rb") as fh:
            return cls.from_bytes(fh.read(), alphabet_size=alphabet_size)

    @classmethod
    def from_tokens(cls, tokens, alphabet_size: int | None = None) -> "QueryCountedString":
        return cls(np.asarray(tokens), alphabet_size=alphabet_size)

    @classmethod
    def from_provider(
        cls, provider: Callable[[np.ndarray], np.ndarray], length: int, alphabet_size: int
    ) -> "QueryCountedString":
        """Lazy accessor: ``provider`` maps 0-indexed position arrays to symbols."""
        return cls(provider=provider, length=length, alphabet_size=alphabet_size)

    # -- reading ----------------------------------------------------------

    @property
    def reads(self) -> int:
        """Distinct positions touched so far, over all sessions."""
        return int(np.count_nonzero(self._touched))

    def _fetch(self, idx0: np.ndarray) -> np.ndarray:
        if self._data is not None:
            return self._data[idx0]
        with self._lock:
            return np.asarray(self._provider(idx0))

    def _check(self, positions) -> np.ndarray:
        idx0 = np.asarray(positions, dtype=np.int64) - 1
        if idx0.size and (idx0.min() < 0 or idx0.max() >= self.length):
            bad = idx0[(idx0 < 0) | (idx0 >= self.length)][0] + 1
            raise IndexError(f"position {int(bad)} outside [1, {self.length}]")
        return idx0

    def read(self, position: int) -> int:
        """Symbol at 1-indexed ``position``; counts one query on first touch."""
        idx0 = self._check(np.array([position]))
        self._touched[idx0] = True
        return int(self._fetch(idx0)[0])

    def session(self) -> "QuerySession":
        return QuerySession(self)

    def materialize(self) -> np.ndarray:
        """Full copy of the string, bypassing the read counters.

        Oracle plumbing: exact reference computations are not under the query
        model. For provider-backed strings this generates every position.
        """
        if self._data is not None:
            return self._data.copy()
        return np.asarray(self._provider(np.arange(self.length, dtype=np.int64)))


class QuerySession:
    """One estimator run's counter view onto a :class:`QueryCountedString`.

    ``queries`` counts distinct positions touched through this session only;
    the parent's master counter is updated as well so overlapping sessions
    merge correctly.
    """

    def __init__(self, parent: QueryCountedString):
        self.parent = parent
        self.length = parent.length
        self.alphabet_size = parent.alphabet_size
        self._touched = np.zeros(parent.length, dtype=bool)

    @property
    def queries(self) -> int:
        return int(np.count_nonzero(self._touched))

    def read_many(self, positions: np.ndarray) -> np.ndarray:
        idx0 = self.parent._check(np.asarray(positions))
        self._touched[idx0] = True
        self.parent._touched[idx0] = True
        return self.parent._fetch(idx0)

    def read(self, position: int) -> int:
        return int(self.read_many(np.array([position], dtype=np.int64))[0])

    def read_all(self) -> np.ndarray:
        """Read the whole string through the session (n queries)."""
        return self.read_many(np.arange(1, self.length + 1, dtype=np.int64))


def read(accessor: QueryCountedString, position: int) -> int:
    """Read symbol ``w_position`` (1-indexed), counting the query once."""
    return accessor.read(position)


@dataclass(frozen=True)
class EstimateReport:
    """Outcome of one estimator run and the accuracy contract it claims.

    An estimate ``est`` for a cost ``C`` meets a (lambda, epsilon) contract if

        C / lambda - epsilon * n  <=  est  <=  lambda * C + epsilon * n.

    ``confidence`` is the declared probability that the contract holds
    (2/3 unless an amplified variant was used).
    """

    estimate: float
    lam: float
    epsilon: float
    queries_used: int
    seed: int
    confidence: float = 2.0 / 3.0

    def __post_init__(self):
        if self.estimate < 0:
            raise ValueError("estimate must be nonnegative")
        if self.lam < 1:
            raise ValueError("multiplicative factor must be >= 1")
        if not (0 <= self.epsilon <= 1):
            raise ValueError("additive fraction must be in [0, 1]")

    def to_json_dict(self) -> dict:
        return {
            "estimate": float(self.estimate),
            "lambda": float(self.lam),
            "epsilon": float(self.epsilon),
            "queries_used": int(self.queries_used),
            "seed": int(self.seed),
            "confidence": float(self.confidence),
        }


def meets_contract(report: EstimateReport, exact: float, n: int) -> bool:
    """True iff the report's estimate satisfies its claimed contract for ``exact``."""
    if exact < 0:
        raise ValueError("exact cost must be nonnegative")
    lo = exact / report.lam - report.epsilon * n
    hi = report.lam * exact + report.epsilon * n
    return lo <= report.estimate <= hi
