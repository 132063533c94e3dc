#!/usr/bin/python3
"""
Simulate Module

Monte Carlo runs of the random-coding schemes at desk-scale block lengths:
the matched source-channel scheme (source codebooks mapped straight onto
channel codebooks, joint typicality decoding), the separation scheme
(random binning plus a MAC code) and uncoded symbol-by-symbol transmission.

Every trial draws fresh codebooks from its own random stream, derived from
the master seed and the trial index, so trials can run in any order or in
parallel with identical results.
"""

import csv
import io
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from math import ceil
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .config import Config
from .criteria import side_for
from .exception_handler import CapExceededError, ConfigurationError, ModelError
from .prob_core import ChannelKind, ChannelModel, JointPmf, ProductInput, entropy_cond
from .typicality import TypicalityParams, typical_mask

EVENTS = ("e1", "e2", "e3", "e4")
COMPONENTS = ("channel_decoding", "source_decoding")


class Scheme(str, Enum):
    MATCHED = "matched"
    SEPARATION = "separation"
    UNCODED = "uncoded"


@dataclass
class SimConfig:
    """Parameters of one simulation run."""

    m: int
    b: float
    scheme: Scheme = Scheme.MATCHED
    trials: int = Config.DEFAULT_TRIALS
    seed: int = Config.DEFAULT_SEED
    epsilon: float = Config.CODEBOOK_EPSILON
    typicality: Optional[TypicalityParams] = None
    rates: Optional[Tuple[float, float]] = None
    input: Optional[ProductInput] = None
    receivers: Optional[List[int]] = None
    codebook_cap: int = Config.CODEBOOK_CAP
    bin_cap: int = Config.BIN_CAP
    threads: Optional[int] = None

    def __post_init__(self) -> None:
        self.scheme = Scheme(self.scheme)
        if self.m < 1:
            raise ConfigurationError("m must be ≥ 1")
        if self.trials < 1:
            raise ConfigurationError("trials must be ≥ 1")
        if self.b <= 0:
            raise ConfigurationError("b must be positive")
        if self.n < 1:
            raise ConfigurationError(f"n = round(b*m) must be ≥ 1 (b={self.b}, m={self.m})")
        if self.epsilon <= 0:
            raise ConfigurationError("epsilon must be positive")
        if self.seed < 0:
            raise ConfigurationError("seed must be nonnegative")
        if self.threads is not None and self.threads < 1:
            raise ConfigurationError("threads must be ≥ 1")

    @property
    def n(self) -> int:
        return int(round(self.b * self.m))

    @property
    def slack(self) -> TypicalityParams:
        return self.typicality or TypicalityParams.for_block_length(self.m)


@dataclass
class SimResult:
    """Counts of a simulation run, one entry per decoding receiver."""

    scheme: str
    m: int
    n: int
    b: float
    trials: int
    seed: int
    receivers: List[int]
    error_counts: List[int]
    event_counts: List[Dict[str, int]]
    component_counts: List[Dict[str, int]]
    symbol_errors: List[int] = field(default_factory=list)
    symbols: int = 0
    wall_clock: float = 0.0

    @property
    def error_rates(self) -> List[float]:
        return [count / self.trials for count in self.error_counts]

    @property
    def error_rate(self) -> float:
        """Worst receiver error rate."""
        return max(self.error_rates)

    def to_dict(self, include_timing: bool = False) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "scheme": self.scheme,
            "m": self.m,
            "n": self.n,
            "b": self.b,
            "trials": self.trials,
            "seed": self.seed,
            "receivers": [
                {
                    "receiver": k,
                    "errors": self.error_counts[i],
                    "error_rate": self.error_rates[i],
                    "events": dict(self.event_counts[i]),
                    "components": dict(self.component_counts[i]),
                    "symbol_errors": self.symbol_errors[i] if self.symbol_errors else None,
                }
                for i, k in enumerate(self.receivers)
            ],
            "symbols": self.symbols,
        }
        if include_timing:
            data["wall_clock"] = self.wall_clock
        return data

    @staticmethod
    def csv_header() -> List[str]:
        return [
            "scheme",
            "m",
            "n",
            "b",
            "trials",
            "seed",
            "error_rate_rx1",
            "error_rate_rx2",
            *EVENTS,
            "channel_errors",
            "source_errors",
        ]

    def csv_row(self) -> List[str]:
        fmt = f"{{:.{Config.DECIMALS}f}}"
        rates = {k: self.error_rates[i] for i, k in enumerate(self.receivers)}
        events = {e: sum(c[e] for c in self.event_counts) for e in EVENTS}
        components = {c: sum(x[c] for x in self.component_counts) for c in COMPONENTS}
        return [
            self.scheme,
            str(self.m),
            str(self.n),
            fmt.format(self.b),
            str(self.trials),
            str(self.seed),
            fmt.format(rates[1]) if 1 in rates else "",
            fmt.format(rates[2]) if 2 in rates else "",
            *[str(events[e]) for e in EVENTS],
            str(components["channel_decoding"]),
            str(components["source_decoding"]),
        ]

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator=Config.CSV_LINE_TERMINATOR)
        writer.writerow(self.csv_header())
        writer.writerow(self.csv_row())
        return buffer.getvalue()


@dataclass
class _TrialOutcome:
    errors: List[bool]
    events: List[Dict[str, bool]]
    components: List[Dict[str, bool]]
    symbol_errors: List[int] = field(default_factory=list)


# ---------------------------------------------------------------------------
# Shared helpers
# ---------------------------------------------------------------------------


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent stream for one trial, derived from the master seed."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))


def _run_trials(
    cfg: SimConfig, trial: Callable[[np.random.Generator], _TrialOutcome]
) -> List[_TrialOutcome]:
    def run(index: int) -> _TrialOutcome:
        return trial(trial_rng(cfg.seed, index))

    if cfg.threads == 1:
        return [run(t) for t in range(cfg.trials)]
    with ThreadPoolExecutor(max_workers=cfg.threads) as executor:
        return list(executor.map(run, range(cfg.trials)))


def _aggregate(
    cfg: SimConfig, receivers: List[int], outcomes: List[_TrialOutcome], started: float
) -> SimResult:
    count = len(receivers)
    symbol_errors = (
        [sum(o.symbol_errors[i] for o in outcomes) for i in range(count)]
        if outcomes and outcomes[0].symbol_errors
        else []
    )
    result = SimResult(
        scheme=cfg.scheme.value,
        m=cfg.m,
        n=cfg.n,
        b=cfg.b,
        trials=cfg.trials,
        seed=cfg.seed,
        receivers=list(receivers),
        error_counts=[sum(o.errors[i] for o in outcomes) for i in range(count)],
        event_counts=[
            {e: sum(o.events[i].get(e, False) for o in outcomes) for e in EVENTS}
            for i in range(count)
        ],
        component_counts=[
            {c: sum(o.components[i].get(c, False) for o in outcomes) for c in COMPONENTS}
            for i in range(count)
        ],
        symbol_errors=symbol_errors,
        symbols=cfg.trials * cfg.m if symbol_errors else 0,
        wall_clock=time.perf_counter() - started,
    )
    logging.info(
        f"{cfg.scheme.value}: m={cfg.m} n={cfg.n} error rates {result.error_rates} "
        f"({result.wall_clock:.2f}s)"
    )
    return result


def _sample_rows(
    rng: np.random.Generator, cdf: np.ndarray, rows: np.ndarray
) -> np.ndarray:
    """Draw one symbol per entry of ``rows`` from the conditional rows of ``cdf``."""
    u = rng.random(rows.shape)
    symbols = (u[..., None] > cdf[rows]).sum(axis=-1)
    return np.minimum(symbols, cdf.shape[-1] - 1)


def _draw_sources(
    rng: np.random.Generator, joint: JointPmf, m: int
) -> Dict[str, np.ndarray]:
    cells = rng.choice(joint.table.size, size=m, p=joint.table.ravel())
    values = np.unravel_index(cells, joint.cardinalities)
    return {name: np.asarray(v) for name, v in zip(joint.variables, values)}


def _receivers(channel: ChannelModel, cfg: SimConfig) -> List[int]:
    receivers = cfg.receivers or list(range(1, channel.receiver_count + 1))
    for k in receivers:
        channel.receiver_outputs(k)
    return receivers


class _ChannelSampler:
    """Draws full channel outputs and projects them onto each receiver."""

    def __init__(self, channel: ChannelModel) -> None:
        x1, x2 = channel.input_cardinalities
        self.x2 = x2
        flat = channel.table.reshape(x1 * x2, -1)
        self.cdf = np.cumsum(flat, axis=1)
        full = np.unravel_index(np.arange(flat.shape[1]), channel.output_cardinalities)
        self.projection: Dict[int, np.ndarray] = {}
        for k in range(1, channel.receiver_count + 1):
            keep = channel.receiver_outputs(k)
            self.projection[k] = np.ravel_multi_index(
                tuple(full[i] for i in keep),
                tuple(channel.output_cardinalities[i] for i in keep),
            )

    def transmit(
        self, rng: np.random.Generator, x1: np.ndarray, x2: np.ndarray
    ) -> np.ndarray:
        return _sample_rows(rng, self.cdf, x1 * self.x2 + x2)

    def observe(self, outputs: np.ndarray, receiver: int) -> np.ndarray:
        return self.projection[receiver][outputs]


@dataclass
class _ChannelCode:
    """Time-sharing sequence and per-user channel codebooks of one trial."""

    q: np.ndarray
    book1: np.ndarray
    book2: np.ndarray


class _ChannelSide:
    """Channel-side typicality tables of one receiver."""

    def __init__(self, input: ProductInput, table: np.ndarray, delta: float) -> None:
        self.q_card = input.q_cardinality
        self.x1, self.x2 = input.x_cardinalities
        self.y = table.shape[-1]
        self.delta = delta
        self.pmf = np.einsum(
            "q,qi,qj,ijy->qijy", input.q_weights, input.cond1, input.cond2, table
        )
        self.support = self.pmf.ravel() > Config.ZERO_CELL_THRESHOLD
        self.marginal1 = self.pmf.sum(axis=2)  # (q, x1, y)
        self.marginal2 = self.pmf.sum(axis=1)  # (q, x2, y)

    def codes(
        self, code: _ChannelCode, rows1: np.ndarray, rows2: np.ndarray, y: np.ndarray
    ) -> np.ndarray:
        """Joint (q, x1, x2, y) symbols for all pairs, shape (B, C, n)."""
        head = (code.q[None, :] * self.x1 + code.book1[rows1]) * self.x2
        return (head[:, None, :] + code.book2[rows2][None, :, :]) * self.y + y

    def truth(self, q: np.ndarray, x1: np.ndarray, x2: np.ndarray, y: np.ndarray) -> bool:
        code = ((q * self.x1 + x1) * self.x2 + x2) * self.y + y
        return bool(typical_mask(code[None, :], self.pmf, self.delta)[0])

    def candidates(self, code: _ChannelCode, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Indices whose (q, x_k, y) marginal could belong to a typical tuple."""
        c1 = (code.q[None, :] * self.x1 + code.book1) * self.y + y
        c2 = (code.q[None, :] * self.x2 + code.book2) * self.y + y
        ok1 = typical_mask(c1, self.marginal1, self.x2 * self.delta)
        ok2 = typical_mask(c2, self.marginal2, self.x1 * self.delta)
        return np.nonzero(ok1)[0], np.nonzero(ok2)[0]


def _draw_channel_code(
    rng: np.random.Generator, input: ProductInput, sizes: Tuple[int, int], n: int
) -> _ChannelCode:
    q = rng.choice(input.q_cardinality, size=n, p=input.q_weights)
    cdf1 = np.cumsum(input.cond1, axis=1)
    cdf2 = np.cumsum(input.cond2, axis=1)
    book1 = _sample_rows(rng, cdf1, np.broadcast_to(q, (sizes[0], n)))
    book2 = _sample_rows(rng, cdf2, np.broadcast_to(q, (sizes[1], n)))
    return _ChannelCode(q, book1, book2)


def _resolve_input(channel: ChannelModel, cfg: SimConfig) -> ProductInput:
    x1, x2 = channel.input_cardinalities
    input = cfg.input or ProductInput.uniform(x1, x2)
    if input.source_conditioned:
        raise ConfigurationError("Random-coding schemes need a product input p(q)p(x|q)")
    if input.x_cardinalities != (x1, x2):
        raise ModelError("Input alphabets do not match the channel")
    return input


def _block_rows(columns: int, length: int) -> int:
    return max(1, Config.PAIR_ELEMENT_BUDGET // max(1, columns * length))


def _source_pmf(joint: JointPmf, side: Tuple[str, ...]) -> np.ndarray:
    if side:
        return joint.marginal(("S1", "S2") + side).table
    return joint.marginal(("S1", "S2")).table[:, :, None]


def _side_symbols(sources: Dict[str, np.ndarray], side: Tuple[str, ...], m: int) -> np.ndarray:
    return sources[side[0]] if side else np.zeros(m, dtype=int)


# ---------------------------------------------------------------------------
# Matched scheme
# ---------------------------------------------------------------------------


def codebook_sizes(joint: JointPmf, m: int, epsilon: float) -> Tuple[int, int]:
    """M_k = ceil(2^{m (H(S_k) + epsilon/2)})."""
    return tuple(  # type: ignore[return-value]
        int(ceil(2.0 ** (m * (entropy_cond(joint, s) + epsilon / 2))))
        for s in ("S1", "S2")
    )


class _MatchedDecoder:
    """Joint source-and-channel typicality decoder of one receiver."""

    def __init__(
        self,
        joint: JointPmf,
        channel: ChannelModel,
        input: ProductInput,
        receiver: int,
        slack: TypicalityParams,
    ) -> None:
        self.side = side_for(joint, receiver, None)
        self.receiver = receiver
        self.source_pmf = _source_pmf(joint, self.side)
        self.s1, self.s2, self.w = self.source_pmf.shape
        self.gamma = slack.gamma
        self.source_support = self.source_pmf.ravel() > Config.ZERO_CELL_THRESHOLD
        self.marginal1 = self.source_pmf.sum(axis=1)  # (s1, w)
        self.marginal2 = self.source_pmf.sum(axis=0)  # (s2, w)
        self.channel = _ChannelSide(input, channel.receiver_table(receiver), slack.delta)

    def decode(
        self,
        books: Tuple[np.ndarray, np.ndarray],
        code: _ChannelCode,
        truth: Tuple[np.ndarray, np.ndarray],
        w: np.ndarray,
        y: np.ndarray,
    ) -> Tuple[bool, bool]:
        """
        Scan candidate index pairs.

        Returns:
            Tuple of (a pair decoding to the true sequences passed,
            a pair decoding to other sequences passed)
        """
        src1, src2 = books
        s1, s2 = truth
        ok1 = typical_mask(src1 * self.w + w, self.marginal1, self.s2 * self.gamma)
        ok2 = typical_mask(src2 * self.w + w, self.marginal2, self.s1 * self.gamma)
        ch1, ch2 = self.channel.candidates(code, y)
        cand1 = np.intersect1d(np.nonzero(ok1)[0], ch1)
        cand2 = np.intersect1d(np.nonzero(ok2)[0], ch2)
        if len(cand1) == 0 or len(cand2) == 0:
            return False, False

        rows = _block_rows(len(cand2), max(src1.shape[1], code.q.size))
        found_true = False
        for start in range(0, len(cand1), rows):
            block = cand1[start : start + rows]
            src_codes = (
                (src1[block][:, None, :] * self.s2 + src2[cand2][None, :, :]) * self.w + w
            )
            ch_codes = self.channel.codes(code, block, cand2, y)
            ok = self.source_support[src_codes].all(axis=-1)
            ok &= self.channel.support[ch_codes].all(axis=-1)
            bi, ci = np.nonzero(ok)
            if len(bi) == 0:
                continue
            passing = typical_mask(src_codes[bi, ci], self.source_pmf, self.gamma)
            passing &= typical_mask(ch_codes[bi, ci], self.channel.pmf, self.channel.delta)
            if not passing.any():
                continue
            bi, ci = bi[passing], ci[passing]
            same = (src1[block[bi]] == s1).all(axis=1) & (src2[cand2[ci]] == s2).all(axis=1)
            found_true = found_true or bool(same.any())
            if not same.all():
                return found_true, True
        return found_true, False


def run_matched_scheme(
    joint: JointPmf, channel: ChannelModel, cfg: SimConfig
) -> SimResult:
    """
    Random coding with source codebooks of size M_k mapped one-to-one onto
    channel codebooks, smallest-index encoding and joint typicality decoding.

    Events per receiver: e1 no source codeword matches, e2 the source tuple is
    not typical, e3 the transmitted channel tuple is not typical, e4 another
    pair of source sequences passes both tests.
    """
    if cfg.scheme != Scheme.MATCHED:
        raise ConfigurationError("run_matched_scheme needs scheme=matched")
    if channel.kind == ChannelKind.TWO_WAY:
        raise ConfigurationError("The matched scheme decodes at MAC-type receivers only")
    sizes = codebook_sizes(joint, cfg.m, cfg.epsilon)
    for k, size in enumerate(sizes, start=1):
        if size > cfg.codebook_cap:
            raise CapExceededError(f"Codebook M{k}", size, cfg.codebook_cap)
    input = _resolve_input(channel, cfg)
    receivers = _receivers(channel, cfg)
    slack = cfg.slack
    decoders = [_MatchedDecoder(joint, channel, input, k, slack) for k in receivers]
    sampler = _ChannelSampler(channel)
    p1 = joint.marginal("S1").table
    p2 = joint.marginal("S2").table
    logging.debug(
        f"matched scheme: M={sizes}, delta={slack.delta:.3f}, gamma={slack.gamma:.3f}"
    )

    def trial(rng: np.random.Generator) -> _TrialOutcome:
        sources = _draw_sources(rng, joint, cfg.m)
        book1 = rng.choice(p1.size, size=(sizes[0], cfg.m), p=p1)
        book2 = rng.choice(p2.size, size=(sizes[1], cfg.m), p=p2)
        code = _draw_channel_code(rng, input, sizes, cfg.n)
        s1, s2 = sources["S1"], sources["S2"]

        match1 = np.nonzero((book1 == s1).all(axis=1))[0]
        match2 = np.nonzero((book2 == s2).all(axis=1))[0]
        if len(match1) == 0 or len(match2) == 0:
            return _TrialOutcome(
                errors=[True] * len(receivers),
                events=[{"e1": True} for _ in receivers],
                components=[{} for _ in receivers],
            )
        i1, i2 = int(match1[0]), int(match2[0])
        x1, x2 = code.book1[i1], code.book2[i2]
        outputs = sampler.transmit(rng, x1, x2)

        errors, events = [], []
        for decoder in decoders:
            w = _side_symbols(sources, decoder.side, cfg.m)
            y = sampler.observe(outputs, decoder.receiver)
            truth_code = (s1 * decoder.s2 + s2) * decoder.w + w
            e2 = not typical_mask(truth_code[None, :], decoder.source_pmf, decoder.gamma)[0]
            e3 = not decoder.channel.truth(code.q, x1, x2, y)
            found, impostor = decoder.decode((book1, book2), code, (s1, s2), w, y)
            errors.append(impostor or not found)
            events.append({"e2": e2, "e3": e3, "e4": impostor})
        return _TrialOutcome(errors, events, [{} for _ in receivers])

    started = time.perf_counter()
    return _aggregate(cfg, receivers, _run_trials(cfg, trial), started)


# ---------------------------------------------------------------------------
# Separation scheme
# ---------------------------------------------------------------------------


def run_separation_scheme(
    joint: JointPmf, channel: ChannelModel, cfg: SimConfig
) -> SimResult:
    """
    Uniform random binning of every source sequence into 2^{m R_k} bins, an
    independent MAC code over the bin indices, a channel typicality decoder
    and a per-user source decoder using the receiver's side information.

    The source-decoding component is evaluated with the true bin indices so
    both terms of the error decomposition are reported on every trial.
    """
    if cfg.scheme != Scheme.SEPARATION:
        raise ConfigurationError("run_separation_scheme needs scheme=separation")
    if cfg.rates is None:
        raise ConfigurationError("The separation scheme needs rates R1,R2")
    if channel.kind == ChannelKind.TWO_WAY:
        raise ConfigurationError("The separation scheme decodes at MAC-type receivers only")
    bins = tuple(int(ceil(2.0 ** (cfg.m * r))) for r in cfg.rates)
    for k, size in enumerate(bins, start=1):
        if size > cfg.bin_cap:
            raise CapExceededError(f"Bin count of user {k}", size, cfg.bin_cap)
    alphabets = (joint.cardinality("S1"), joint.cardinality("S2"))
    spaces = tuple(a**cfg.m for a in alphabets)
    for k, size in enumerate(spaces, start=1):
        if size > Config.SEQUENCE_ENUMERATION_CAP:
            raise CapExceededError(
                f"Sequence space of user {k}", size, Config.SEQUENCE_ENUMERATION_CAP
            )

    input = _resolve_input(channel, cfg)
    receivers = _receivers(channel, cfg)
    slack = cfg.slack
    sampler = _ChannelSampler(channel)
    sequences = [
        np.stack(np.unravel_index(np.arange(spaces[k]), (alphabets[k],) * cfg.m), axis=1)
        for k in range(2)
    ]
    sides = {k: side_for(joint, k, None) for k in receivers}
    user_pmfs = {
        (k, user): joint.marginal((f"S{user}",) + sides[k])
        .table.reshape(alphabets[user - 1], -1)
        for k in receivers
        for user in (1, 2)
    }
    channels = {
        k: _ChannelSide(input, channel.receiver_table(k), slack.delta) for k in receivers
    }

    def channel_decode(
        side: _ChannelSide, code: _ChannelCode, y: np.ndarray
    ) -> Optional[Tuple[int, int]]:
        cand1, cand2 = side.candidates(code, y)
        found: Optional[Tuple[int, int]] = None
        rows = _block_rows(len(cand2), cfg.n)
        for start in range(0, len(cand1), rows):
            block = cand1[start : start + rows]
            codes = side.codes(code, block, cand2, y)
            ok = side.support[codes].all(axis=-1)
            bi, ci = np.nonzero(ok)
            if len(bi) == 0:
                continue
            passing = typical_mask(codes[bi, ci], side.pmf, side.delta)
            hits = np.nonzero(passing)[0]
            if len(hits) > 1 or (len(hits) == 1 and found is not None):
                return None
            if len(hits) == 1:
                found = (int(block[bi[hits[0]]]), int(cand2[ci[hits[0]]]))
        return found

    def source_decode(
        k: int, user: int, assignment: np.ndarray, index: int, w: np.ndarray, truth: int
    ) -> bool:
        pmf = user_pmfs[(k, user)]
        members = np.nonzero(assignment == index)[0]
        codes = sequences[user - 1][members] * pmf.shape[1] + w
        typical = members[typical_mask(codes, pmf, slack.gamma)]
        return len(typical) == 1 and int(typical[0]) == truth

    def trial(rng: np.random.Generator) -> _TrialOutcome:
        sources = _draw_sources(rng, joint, cfg.m)
        assignment = [rng.integers(bins[k], size=spaces[k]) for k in range(2)]
        code = _draw_channel_code(rng, input, bins, cfg.n)
        seq_index = [
            int(np.ravel_multi_index(tuple(sources[f"S{u}"]), (alphabets[u - 1],) * cfg.m))
            for u in (1, 2)
        ]
        sent = (int(assignment[0][seq_index[0]]), int(assignment[1][seq_index[1]]))
        outputs = sampler.transmit(rng, code.book1[sent[0]], code.book2[sent[1]])

        errors, components = [], []
        for k in receivers:
            y = sampler.observe(outputs, k)
            w = _side_symbols(sources, sides[k], cfg.m)
            channel_error = channel_decode(channels[k], code, y) != sent
            source_error = not all(
                source_decode(k, u, assignment[u - 1], sent[u - 1], w, seq_index[u - 1])
                for u in (1, 2)
            )
            errors.append(channel_error or source_error)
            components.append(
                {"channel_decoding": channel_error, "source_decoding": source_error}
            )
        return _TrialOutcome(errors, [{} for _ in receivers], components)

    started = time.perf_counter()
    return _aggregate(cfg, receivers, _run_trials(cfg, trial), started)


# ---------------------------------------------------------------------------
# Uncoded transmission
# ---------------------------------------------------------------------------


def _map_decision_tables(
    joint: JointPmf,
    channel: ChannelModel,
    mapping: Tuple[Sequence[int], Sequence[int]],
    receiver: int,
) -> Tuple[np.ndarray, Tuple[str, ...]]:
    """MAP decision table indexed by (observed side symbol, y)."""
    m1, m2 = (np.asarray(m, dtype=int) for m in mapping)
    w_table = channel.receiver_table(receiver)[m1[:, None], m2[None, :]]  # (s1, s2, y)
    if channel.kind == ChannelKind.TWO_WAY:
        pair = joint.marginal(("S1", "S2")).table
        score = pair[:, :, None] * w_table
        if receiver == 1:  # knows S1, decodes S2
            return score.argmax(axis=1), ("S1",)
        return score.argmax(axis=0), ("S2",)
    side = side_for(joint, receiver, None)
    pmf = _source_pmf(joint, side)  # (s1, s2, w)
    score = pmf[:, :, :, None] * w_table[:, :, None, :]  # (s1, s2, w, y)
    s1, s2, w, y = score.shape
    return score.reshape(s1 * s2, w, y).argmax(axis=0), side


def run_uncoded(
    joint: JointPmf,
    channel: ChannelModel,
    mapping: Tuple[Sequence[int], Sequence[int]],
    cfg: SimConfig,
) -> SimResult:
    """
    Send x_k = mapping_k(s_k) symbol by symbol and decode with the exact MAP
    rule given (y, side information); two-way users decode the other source
    from (y_k, own source).
    """
    if cfg.scheme != Scheme.UNCODED:
        raise ConfigurationError("run_uncoded needs scheme=uncoded")
    if cfg.n != cfg.m:
        raise ConfigurationError("Uncoded transmission runs at b = 1")
    x1, x2 = channel.input_cardinalities
    for user, (symbols, alphabet, card) in enumerate(
        zip(mapping, (joint.cardinality("S1"), joint.cardinality("S2")), (x1, x2)), start=1
    ):
        if len(symbols) != alphabet or any(not 0 <= int(x) < card for x in symbols):
            raise ModelError(
                f"Mapping of user {user} must send each of {alphabet} source symbols "
                f"to an input in 0..{card - 1}"
            )
    receivers = _receivers(channel, cfg)
    tables = {k: _map_decision_tables(joint, channel, mapping, k) for k in receivers}
    sampler = _ChannelSampler(channel)
    m1, m2 = (np.asarray(m, dtype=int) for m in mapping)
    s2_card = joint.cardinality("S2")

    def trial(rng: np.random.Generator) -> _TrialOutcome:
        sources = _draw_sources(rng, joint, cfg.m)
        s1, s2 = sources["S1"], sources["S2"]
        outputs = sampler.transmit(rng, m1[s1], m2[s2])
        errors, symbol_errors = [], []
        for k in receivers:
            decision, side = tables[k]
            y = sampler.observe(outputs, k)
            observed = _side_symbols(sources, side, cfg.m)
            decoded = decision[observed, y]
            if channel.kind == ChannelKind.TWO_WAY:
                wrong = decoded != (s2 if k == 1 else s1)
            else:
                wrong = decoded != s1 * s2_card + s2
            count = int(wrong.sum())
            errors.append(count > 0)
            symbol_errors.append(count)
        return _TrialOutcome(
            errors, [{} for _ in receivers], [{} for _ in receivers], symbol_errors
        )

    started = time.perf_counter()
    return _aggregate(cfg, receivers, _run_trials(cfg, trial), started)


def run_scheme(
    joint: JointPmf,
    channel: ChannelModel,
    cfg: SimConfig,
    mapping: Optional[Tuple[Sequence[int], Sequence[int]]] = None,
) -> SimResult:
    """Dispatch on cfg.scheme."""
    if cfg.scheme == Scheme.MATCHED:
        return run_matched_scheme(joint, channel, cfg)
    if cfg.scheme == Scheme.SEPARATION:
        return run_separation_scheme(joint, channel, cfg)
    if mapping is None:
        mapping = (
            list(range(joint.cardinality("S1"))),
            list(range(joint.cardinality("S2"))),
        )
    return run_uncoded(joint, channel, mapping, cfg)
