#!/usr/bin/python3
"""
Typicality Module

Strong (letter-typical) sequence tests, batched for decoders, and the
finite-length checks of the typical-set size and joint-typicality bounds.
"""

import logging
from dataclasses import dataclass
from math import comb, factorial, log2, sqrt
from typing import Dict, Iterator, Sequence, Tuple

import numpy as np

from .config import Config
from .exception_handler import CapExceededError, ConfigurationError
from .prob_core import plogp_sum


@dataclass(frozen=True)
class TypicalityParams:
    """Channel-side (delta) and source-side (gamma) typicality slack."""

    delta: float
    gamma: float

    def __post_init__(self) -> None:
        for name, value in (("delta", self.delta), ("gamma", self.gamma)):
            if not 0 < value < 1:
                raise ConfigurationError(f"{name} must be in (0, 1), got {value}")

    @classmethod
    def for_block_length(
        cls, m: int, scale: float = Config.TYPICALITY_SCALE
    ) -> "TypicalityParams":
        """delta = gamma = scale / sqrt(m), capped below one."""
        if m < 1:
            raise ConfigurationError("m must be ≥ 1")
        slack = min(scale / sqrt(m), Config.MAX_TYPICALITY_SLACK)
        return cls(slack, slack)


def symbol_counts(codes: np.ndarray, alphabet: int) -> np.ndarray:
    """Histogram of each row of an integer array, shape (P, alphabet)."""
    codes = np.atleast_2d(codes)
    rows = codes.shape[0]
    offsets = codes + alphabet * np.arange(rows)[:, None]
    return np.bincount(offsets.ravel(), minlength=rows * alphabet).reshape(rows, alphabet)


def typical_mask(codes: np.ndarray, pmf: np.ndarray, delta: float) -> np.ndarray:
    """
    Strong typicality of many sequences over one (flattened) alphabet.

    Args:
        codes: Integer array (P, n) of symbol indices into pmf.ravel()
        pmf: Probability table of any shape
        delta: Allowed deviation of every empirical frequency

    Returns:
        Boolean array (P,)
    """
    flat = np.asarray(pmf, dtype=float).ravel()
    codes = np.atleast_2d(codes)
    n = codes.shape[1]
    freq = symbol_counts(codes, flat.size) / n
    zero = flat <= Config.ZERO_CELL_THRESHOLD
    close = np.all(np.abs(freq - flat[None, :]) <= delta + 1e-12, axis=1)
    return close & ~np.any(freq[:, zero] > 0, axis=1)


def is_strongly_typical(seq: Sequence[int], pmf: Sequence[float], delta: float) -> bool:
    """Single-variable strong typicality, including the zero-probability clause."""
    symbols = np.asarray(seq, dtype=int)
    table = np.asarray(pmf, dtype=float)
    if symbols.size == 0:
        return False
    return bool(typical_mask(symbols[None, :], table, delta)[0])


def combine(columns: Sequence[np.ndarray], cardinalities: Sequence[int]) -> np.ndarray:
    """Row-major joint symbol index of several aligned symbol arrays."""
    return np.ravel_multi_index(tuple(np.asarray(c) for c in columns), tuple(cardinalities))


def is_jointly_typical(
    columns: Sequence[Sequence[int]], pmf: np.ndarray, delta: float
) -> bool:
    """Joint strong typicality of aligned sequences w.r.t. a joint table."""
    table = np.asarray(pmf, dtype=float)
    codes = combine([np.asarray(c, dtype=int) for c in columns], table.shape)
    return bool(typical_mask(codes[None, :], table, delta)[0])


def is_conditionally_typical(
    x: Sequence[int], y: Sequence[int], channel: np.ndarray, delta: float
) -> bool:
    """
    y^n typical given x^n for a conditional table W(y|x):
    |N(a,b)/n - N(a)/n W(b|a)| <= delta, and N(a,b) = 0 whenever W(b|a) = 0.
    """
    xs = np.asarray(x, dtype=int)
    ys = np.asarray(y, dtype=int)
    w = np.asarray(channel, dtype=float)
    n = xs.size
    pair = np.zeros(w.shape)
    np.add.at(pair, (xs, ys), 1.0)
    pair /= n
    marginal = pair.sum(axis=1, keepdims=True)
    if np.any(pair[w <= Config.ZERO_CELL_THRESHOLD] > 0):
        return False
    return bool(np.all(np.abs(pair - marginal * w) <= delta + 1e-12))


@dataclass(frozen=True)
class TypicalSetReport:
    size: int
    n: int
    entropy: float
    lhs: float
    bound: float
    holds: bool

    def to_dict(self) -> Dict[str, float]:
        return {
            "size": self.size,
            "n": self.n,
            "entropy": self.entropy,
            "lhs": self.lhs,
            "bound": self.bound,
            "holds": self.holds,
        }


def _compositions(n: int, parts: int) -> Iterator[Tuple[int, ...]]:
    if parts == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in _compositions(n - first, parts - 1):
            yield (first,) + rest


def typical_set_size_check(
    pmf: Sequence[float], n: int, delta: float
) -> TypicalSetReport:
    """
    Count the strongly typical set exactly and compare
    |log|T|/n - H(X)| with delta/|X|.

    Sequences are counted type by type (a multinomial per type class), which
    is the exhaustive count without materializing the sequences.

    Raises:
        CapExceededError: If |X|^n exceeds the enumeration cap
    """
    p = np.asarray(pmf, dtype=float).ravel()
    k = p.size
    if n < 1:
        raise ConfigurationError("n must be ≥ 1")
    if k**n > Config.TYPICAL_SET_ENUMERATION_CAP:
        raise CapExceededError(
            "Sequence space", float(k) ** n, Config.TYPICAL_SET_ENUMERATION_CAP
        )

    size = 0
    for counts in _compositions(n, k):
        freq = np.asarray(counts) / n
        if np.any((p <= Config.ZERO_CELL_THRESHOLD) & (freq > 0)):
            continue
        if np.all(np.abs(freq - p) <= delta + 1e-12):
            multinomial = factorial(n)
            for c in counts:
                multinomial //= factorial(c)
            size += multinomial
    entropy = float(plogp_sum(p[None], (1,))[0])
    lhs = abs(log2(size) / n - entropy) if size > 0 else float("inf")
    bound = delta / k
    logging.debug(
        f"typical set n={n}: |T|={size} over {type_class_count(n, k)} types, "
        f"lhs={lhs:.4f}, bound={bound:.4f}"
    )
    return TypicalSetReport(size, n, entropy, lhs, bound, lhs <= bound)


def joint_typicality_probability(
    pmf_xy: np.ndarray,
    n: int,
    delta: float,
    samples: int = 100_000,
    seed: int = Config.DEFAULT_SEED,
    chunk: int = 20_000,
) -> Dict[str, float]:
    """
    Frequency with which independent x^n ~ P_X, y^n ~ P_Y are jointly typical,
    next to the bound 2^{-n(I(X;Y) - 3 delta)}.
    """
    table = np.asarray(pmf_xy, dtype=float)
    p_x, p_y = table.sum(axis=1), table.sum(axis=0)
    mutual = float(
        plogp_sum(p_x[None], (1,))[0]
        + plogp_sum(p_y[None], (1,))[0]
        - plogp_sum(table[None], (1, 2))[0]
    )
    rng = np.random.default_rng(seed)
    hits = 0
    for start in range(0, samples, chunk):
        count = min(chunk, samples - start)
        xs = rng.choice(p_x.size, size=(count, n), p=p_x)
        ys = rng.choice(p_y.size, size=(count, n), p=p_y)
        hits += int(typical_mask(xs * p_y.size + ys, table, delta).sum())
    return {
        "empirical": hits / samples,
        "bound": 2.0 ** (-n * (mutual - 3 * delta)),
        "mutual_information": mutual,
        "samples": samples,
    }


def type_class_count(n: int, alphabet: int) -> int:
    """Number of types of length-n sequences over an alphabet."""
    return comb(n + alphabet - 1, alphabet - 1)
