#!/usr/bin/python3
"""
Probability Core Module

Exact finite-alphabet probability tables, information measures in bits and
the structural hypothesis checks (Markov chains, independence, channel
factorization, common part) that the achievability criteria rely on.

All objects are immutable after construction and every function is pure, so
the module is safe to use from many threads at once.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .config import Config
from .exception_handler import (
    ConfigurationError,
    ModelError,
    OverlapError,
    UnknownVariableError,
)

Names = Union[str, Sequence[str]]


def _as_names(names: Names) -> Tuple[str, ...]:
    if isinstance(names, str):
        return tuple(n.strip() for n in names.split(",") if n.strip())
    return tuple(names)


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


def plogp_sum(p: np.ndarray, axes: Tuple[int, ...]) -> np.ndarray:
    """Return -sum p log2 p over the given axes, with 0 log 0 = 0."""
    safe = np.where(p > 0, p, 1.0)
    return -np.sum(p * np.log2(safe), axis=axes)


# ---------------------------------------------------------------------------
# Batched entropies over named tables
# ---------------------------------------------------------------------------


def batched_entropy(
    tables: np.ndarray, names: Sequence[str], subset: Sequence[str]
) -> np.ndarray:
    """
    Entropy of a subset of named axes for a batch of joint tables.

    Args:
        tables: Array of shape (N, *cardinalities); axis 0 is the batch
        names: Names of the non-batch axes, in order
        subset: Names whose joint entropy is wanted

    Returns:
        Array of shape (N,) with entropies in bits
    """
    keep = {names.index(n) + 1 for n in subset}
    drop = tuple(a for a in range(1, tables.ndim) if a not in keep)
    marginal = tables.sum(axis=drop) if drop else tables
    if marginal.ndim == 1:
        return np.zeros(marginal.shape[0])
    return plogp_sum(marginal, tuple(range(1, marginal.ndim)))


def batched_cond_entropy(
    tables: np.ndarray,
    names: Sequence[str],
    targets: Sequence[str],
    given: Sequence[str] = (),
) -> np.ndarray:
    """H(targets | given) for a batch of tables, in bits."""
    union = list(dict.fromkeys(list(targets) + list(given)))
    h = batched_entropy(tables, names, union)
    if given:
        h = h - batched_entropy(tables, names, list(given))
    return np.maximum(h, 0.0)


def batched_cond_mutual_info(
    tables: np.ndarray,
    names: Sequence[str],
    a: Sequence[str],
    b: Sequence[str],
    given: Sequence[str] = (),
) -> np.ndarray:
    """I(a; b | given) for a batch of tables, in bits."""
    value = batched_cond_entropy(tables, names, a, given) - batched_cond_entropy(
        tables, names, a, list(given) + list(b)
    )
    return np.maximum(value, 0.0)


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class JointPmf:
    """Named finite random variables with a joint probability table."""

    variables: Tuple[str, ...]
    cardinalities: Tuple[int, ...]
    table: np.ndarray

    def __post_init__(self) -> None:
        variables = tuple(self.variables)
        cards = tuple(int(c) for c in self.cardinalities)
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "cardinalities", cards)

        if len(set(variables)) != len(variables):
            raise ModelError(f"Variable names must be unique: {list(variables)}")
        if len(cards) != len(variables):
            raise ModelError("One cardinality is required per variable")
        if any(c < 1 for c in cards):
            raise ModelError(f"Cardinalities must be positive: {list(cards)}")

        table = np.asarray(self.table, dtype=float)
        if table.size != int(np.prod(cards, dtype=np.int64)):
            raise ModelError(
                f"Table has {table.size} entries, expected {int(np.prod(cards))}"
            )
        table = table.reshape(cards)
        if np.any(table < 0):
            raise ModelError("Probability table entries must be nonnegative")
        total = float(table.sum())
        if abs(total - 1.0) > Config.PROB_TOLERANCE:
            raise ModelError(f"Probability table sums to {total!r}, expected 1")
        object.__setattr__(self, "table", _frozen(table))

    @classmethod
    def from_flat(
        cls,
        variables: Sequence[str],
        cardinalities: Sequence[int],
        probabilities: Sequence[float],
    ) -> "JointPmf":
        """Build a pmf from a flat row-major probability list."""
        return cls(tuple(variables), tuple(cardinalities), np.asarray(probabilities))

    @classmethod
    def from_cells(
        cls,
        variables: Sequence[str],
        cardinalities: Sequence[int],
        cells: Dict[Tuple[int, ...], float],
    ) -> "JointPmf":
        """Build a pmf from a sparse {(value, ...): probability} mapping."""
        table = np.zeros(tuple(cardinalities))
        for cell, prob in cells.items():
            table[tuple(cell)] = prob
        return cls(tuple(variables), tuple(cardinalities), table)

    def flat(self) -> List[float]:
        """Row-major probability list."""
        return [float(v) for v in self.table.ravel()]

    def has(self, name: str) -> bool:
        return name in self.variables

    def axis(self, name: str) -> int:
        if name not in self.variables:
            raise UnknownVariableError(name, list(self.variables))
        return self.variables.index(name)

    def cardinality(self, name: str) -> int:
        return self.cardinalities[self.axis(name)]

    def check_names(self, names: Sequence[str]) -> None:
        for name in names:
            self.axis(name)

    def marginal(self, names: Names) -> "JointPmf":
        """Marginal pmf over the named variables, in the order given."""
        wanted = _as_names(names)
        self.check_names(wanted)
        drop = tuple(i for i, v in enumerate(self.variables) if v not in wanted)
        table = self.table.sum(axis=drop) if drop else self.table
        kept = [v for v in self.variables if v in wanted]
        order = [kept.index(n) for n in wanted]
        return JointPmf(
            wanted,
            tuple(self.cardinality(n) for n in wanted),
            np.transpose(table, order) if kept else np.asarray(table),
        )

    def add_derived(
        self,
        name: str,
        inputs: Names,
        function: Callable[..., int],
        cardinality: int,
    ) -> "JointPmf":
        """Append a variable that is a deterministic function of others."""
        args = _as_names(inputs)
        self.check_names(args)
        if name in self.variables:
            raise ModelError(f"Variable '{name}' already exists")
        table = np.zeros(self.cardinalities + (cardinality,))
        for cell in np.ndindex(*self.cardinalities):
            value = int(function(*(cell[self.axis(a)] for a in args)))
            if not 0 <= value < cardinality:
                raise ModelError(f"Derived value {value} outside 0..{cardinality - 1}")
            table[cell + (value,)] = self.table[cell]
        return JointPmf(self.variables + (name,), self.cardinalities + (cardinality,), table)


class ChannelKind(str, Enum):
    """Structural kind of a two-transmitter channel."""

    MAC = "mac"
    COMPOUND = "compound"
    TWO_WAY = "two-way"
    NO_MAI = "no-mai"


NO_MAI_OUTPUTS = ("Y11", "Y21", "Y12", "Y22")


def no_mai_deviation(table: np.ndarray) -> float:
    """
    Distance of P(y11, y21, y12, y22 | x1, x2) from p(y11, y12|x1) p(y21, y22|x2).

    Output naming is Y_{m,k}: from transmitter m to receiver k.
    """
    part1 = table.sum(axis=(3, 5))  # (x1, x2, y11, y12)
    part2 = table.sum(axis=(2, 4))  # (x1, x2, y21, y22)
    product = (
        part1[:, :, :, None, :, None] * part2[:, :, None, :, None, :]
    )
    deviation = float(np.max(np.abs(table - product)))
    deviation = max(deviation, float(np.max(np.abs(part1 - part1[:, :1]))))
    deviation = max(deviation, float(np.max(np.abs(part2 - part2[:1]))))
    return deviation


@dataclass(frozen=True, eq=False)
class ChannelModel:
    """Conditional pmf of the channel outputs given the inputs (X1, X2)."""

    kind: ChannelKind
    input_cardinalities: Tuple[int, int]
    output_names: Tuple[str, ...]
    output_cardinalities: Tuple[int, ...]
    table: np.ndarray

    def __post_init__(self) -> None:
        kind = ChannelKind(self.kind)
        object.__setattr__(self, "kind", kind)
        ins = tuple(int(c) for c in self.input_cardinalities)
        outs = tuple(int(c) for c in self.output_cardinalities)
        names = tuple(self.output_names)
        object.__setattr__(self, "input_cardinalities", ins)
        object.__setattr__(self, "output_cardinalities", outs)
        object.__setattr__(self, "output_names", names)

        if len(ins) != 2 or any(c < 1 for c in ins):
            raise ModelError(f"Channel needs two positive input cardinalities: {ins}")
        if len(names) != len(outs) or any(c < 1 for c in outs):
            raise ModelError("One positive cardinality is required per output")
        expected_outputs = {
            ChannelKind.MAC: 1,
            ChannelKind.COMPOUND: 2,
            ChannelKind.TWO_WAY: 2,
            ChannelKind.NO_MAI: 4,
        }[kind]
        if len(outs) != expected_outputs:
            raise ModelError(
                f"Channel kind {kind.value} needs {expected_outputs} output "
                f"variable(s), got {len(outs)}"
            )

        table = np.asarray(self.table, dtype=float)
        shape = ins + outs
        if table.size != int(np.prod(shape, dtype=np.int64)):
            raise ModelError(
                f"Channel table has {table.size} entries, expected {int(np.prod(shape))}"
            )
        table = table.reshape(shape)
        if np.any(table < 0):
            raise ModelError("Channel table entries must be nonnegative")
        rows = table.reshape(ins[0] * ins[1], -1).sum(axis=1)
        if np.max(np.abs(rows - 1.0)) > Config.PROB_TOLERANCE:
            raise ModelError("Every conditional row of the channel must sum to 1")
        if kind == ChannelKind.NO_MAI:
            deviation = no_mai_deviation(table)
            if deviation > Config.PROB_TOLERANCE:
                raise ModelError(
                    f"Channel declared no-mai does not factorize (deviation {deviation:.3g})"
                )
        object.__setattr__(self, "table", _frozen(table))

    @classmethod
    def deterministic(
        cls,
        kind: Union[ChannelKind, str],
        input_cardinalities: Tuple[int, int],
        output_names: Sequence[str],
        output_cardinalities: Sequence[int],
        function: Callable[[int, int], Union[int, Tuple[int, ...]]],
    ) -> "ChannelModel":
        """Build a noiseless channel from a function (x1, x2) -> output(s)."""
        table = np.zeros(tuple(input_cardinalities) + tuple(output_cardinalities))
        for x1 in range(input_cardinalities[0]):
            for x2 in range(input_cardinalities[1]):
                out = function(x1, x2)
                out = out if isinstance(out, tuple) else (out,)
                table[(x1, x2) + tuple(out)] = 1.0
        return cls(
            ChannelKind(kind),
            tuple(input_cardinalities),  # type: ignore[arg-type]
            tuple(output_names),
            tuple(output_cardinalities),
            table,
        )

    @property
    def receiver_count(self) -> int:
        return 1 if self.kind == ChannelKind.MAC else 2

    def receiver_outputs(self, receiver: int) -> Tuple[int, ...]:
        """Indices of the output variables observed by a receiver (1-based)."""
        if not 1 <= receiver <= self.receiver_count:
            raise ConfigurationError(
                f"Receiver {receiver} is not valid for a {self.kind.value} channel"
            )
        if self.kind == ChannelKind.NO_MAI:
            return (0, 1) if receiver == 1 else (2, 3)
        return (receiver - 1,)

    def receiver_table(self, receiver: int) -> np.ndarray:
        """P(y_k | x1, x2) with the receiver's outputs flattened to one axis."""
        keep = self.receiver_outputs(receiver)
        drop = tuple(
            2 + i for i in range(len(self.output_names)) if i not in keep
        )
        table = self.table.sum(axis=drop) if drop else self.table
        x1, x2 = self.input_cardinalities
        return table.reshape(x1, x2, -1)

    def pipe_table(self, transmitter: int, receiver: int) -> np.ndarray:
        """P(y_{m,k} | x_m) for a no-mai channel (m = transmitter, k = receiver)."""
        if self.kind != ChannelKind.NO_MAI:
            raise ConfigurationError("Per-link pipes only exist for no-mai channels")
        index = NO_MAI_OUTPUTS.index(f"Y{transmitter}{receiver}")
        drop = tuple(2 + i for i in range(4) if i != index)
        link = self.table.sum(axis=drop)  # (x1, x2, y)
        return link[:, 0, :] if transmitter == 1 else link[0, :, :]

    def flat(self) -> List[float]:
        return [float(v) for v in self.table.ravel()]


@dataclass(frozen=True, eq=False)
class ProductInput:
    """
    Time-sharing input distribution p(q) p(x1|q) p(x2|q).

    In source-conditioned mode the rows are p(x1|q,s1) and p(x2|q,s2), with
    cond arrays of shape (|Q|, |S|, |X|).
    """

    q_weights: np.ndarray
    cond1: np.ndarray
    cond2: np.ndarray
    max_q: int = Config.MAX_TIME_SHARING

    def __post_init__(self) -> None:
        q = np.asarray(self.q_weights, dtype=float).ravel()
        c1 = np.asarray(self.cond1, dtype=float)
        c2 = np.asarray(self.cond2, dtype=float)
        if c1.ndim != c2.ndim or c1.ndim not in (2, 3):
            raise ModelError("Input rows must be (Q, X) or (Q, S, X) arrays")
        if c1.shape[0] != q.size or c2.shape[0] != q.size:
            raise ModelError("One input row (block) is required per time-sharing value")
        if q.size > self.max_q:
            raise ModelError(
                f"|Q| = {q.size} exceeds the cardinality bound {self.max_q}"
            )
        for name, rows in (("q_weights", q), ("cond1", c1), ("cond2", c2)):
            if np.any(rows < 0):
                raise ModelError(f"{name} has negative entries")
            sums = rows.sum(axis=-1)
            if np.max(np.abs(sums - 1.0)) > Config.PROB_TOLERANCE:
                raise ModelError(f"{name} rows must be probability vectors")
        object.__setattr__(self, "q_weights", _frozen(q))
        object.__setattr__(self, "cond1", _frozen(c1))
        object.__setattr__(self, "cond2", _frozen(c2))

    @classmethod
    def single(
        cls, p_x1: Sequence[float], p_x2: Sequence[float]
    ) -> "ProductInput":
        """A product input without time sharing."""
        return cls(np.ones(1), np.asarray([p_x1]), np.asarray([p_x2]))

    @classmethod
    def uniform(cls, x1_card: int, x2_card: int) -> "ProductInput":
        return cls.single(np.full(x1_card, 1 / x1_card), np.full(x2_card, 1 / x2_card))

    @classmethod
    def uncoded(
        cls,
        mapping1: Sequence[int],
        mapping2: Sequence[int],
        x1_card: int,
        x2_card: int,
    ) -> "ProductInput":
        """Source-conditioned input that sends x_k = mapping_k(s_k)."""
        c1 = np.zeros((1, len(mapping1), x1_card))
        c2 = np.zeros((1, len(mapping2), x2_card))
        for s, x in enumerate(mapping1):
            c1[0, s, x] = 1.0
        for s, x in enumerate(mapping2):
            c2[0, s, x] = 1.0
        return cls(np.ones(1), c1, c2)

    @property
    def source_conditioned(self) -> bool:
        return self.cond1.ndim == 3

    @property
    def q_cardinality(self) -> int:
        return int(self.q_weights.size)

    @property
    def x_cardinalities(self) -> Tuple[int, int]:
        return int(self.cond1.shape[-1]), int(self.cond2.shape[-1])

    def joint_inputs(self, sources: Optional[JointPmf] = None) -> np.ndarray:
        """
        p(x1, x2 | q) for every q, shape (|Q|, |X1|, |X2|).

        Source-conditioned inputs need the pmf of (S1, S2) to average over.
        """
        if not self.source_conditioned:
            return self.cond1[:, :, None] * self.cond2[:, None, :]
        if sources is None:
            raise ModelError("Source-conditioned inputs need the source pmf")
        pair = sources.marginal(("S1", "S2")).table
        if pair.shape != (self.cond1.shape[1], self.cond2.shape[1]):
            raise ModelError("Input source alphabets do not match the source pmf")
        return np.einsum("ab,qai,qbj->qij", pair, self.cond1, self.cond2)

    def to_dict(self) -> Dict[str, object]:
        return {
            "q_weights": self.q_weights.tolist(),
            "cond1": self.cond1.tolist(),
            "cond2": self.cond2.tolist(),
            "source_conditioned": self.source_conditioned,
        }


@dataclass(frozen=True)
class CommonPart:
    """Gács-Körner common part U = map1(S1) = map2(S2)."""

    map1: Tuple[int, ...]
    map2: Tuple[int, ...]
    u_cardinality: int
    u_entropy: float
    u_pmf: Tuple[float, ...] = field(default=())


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def entropy_cond(joint: JointPmf, targets: Names, given: Names = ()) -> float:
    """
    Conditional entropy H(targets | given) in bits.

    Raises:
        UnknownVariableError: If a name is not a variable of the pmf
        OverlapError: If targets and given share a variable
    """
    t = _as_names(targets)
    g = _as_names(given)
    joint.check_names(t + g)
    overlap = sorted(set(t) & set(g))
    if overlap:
        raise OverlapError(overlap)
    value = batched_cond_entropy(joint.table[None], joint.variables, t, g)
    return float(value[0])


def conditional_mutual_info(
    joint: JointPmf, a: Names, b: Names, given: Names = ()
) -> float:
    """I(a; b | given) in bits."""
    return max(
        entropy_cond(joint, a, given)
        - entropy_cond(joint, a, _as_names(given) + _as_names(b)),
        0.0,
    )


class InfoExpr(str, Enum):
    """Mutual information expressions on the channel side."""

    I1 = "I(X1;Yk|X2,Q)"
    I2 = "I(X2;Yk|X1,Q)"
    ISUM = "I(X1,X2;Yk|Q)"

    @classmethod
    def parse(cls, text: str) -> "InfoExpr":
        normalized = text.replace(" ", "")
        for expr in cls:
            for k in ("k", "1", "2", ""):
                if normalized == expr.value.replace("Yk", f"Y{k}"):
                    return expr
        for expr in cls:
            if normalized == expr.value.replace(",Q", "").replace("|Q", "").replace(
                "Yk", "Y"
            ):
                return expr
        raise ModelError(f"Unknown information expression: {text}")


def rate_triples(p_x1x2: np.ndarray, channel_table: np.ndarray) -> np.ndarray:
    """
    (I(X1;Y|X2), I(X2;Y|X1), I(X1,X2;Y)) for a batch of input pmfs.

    Args:
        p_x1x2: Array of shape (N, |X1|, |X2|), product or joint inputs
        channel_table: Array of shape (|X1|, |X2|, |Y|)

    Returns:
        Array of shape (N, 3) in bits
    """
    joint = p_x1x2[..., None] * channel_table[None]
    h_rows = plogp_sum(channel_table, (2,))  # H(Y | x1, x2)
    h_y_x1x2 = np.einsum("nab,ab->n", p_x1x2, h_rows)
    h_y_x2 = plogp_sum(joint.sum(axis=1), (1, 2)) - plogp_sum(p_x1x2.sum(axis=1), (1,))
    h_y_x1 = plogp_sum(joint.sum(axis=2), (1, 2)) - plogp_sum(p_x1x2.sum(axis=2), (1,))
    h_y = plogp_sum(joint.sum(axis=(1, 2)), (1,))
    triples = np.stack([h_y_x2 - h_y_x1x2, h_y_x1 - h_y_x1x2, h_y - h_y_x1x2], axis=1)
    return np.maximum(triples, 0.0)


def mutual_info(
    channel: ChannelModel,
    input: ProductInput,
    expr: Union[InfoExpr, str],
    receiver: int = 1,
    sources: Optional[JointPmf] = None,
) -> float:
    """
    Exact conditional mutual information on the channel side, in bits.

    Evaluated under p(q) p(x1|q) p(x2|q) P(y_k|x1,x2); source-conditioned
    inputs are first averaged over the source pmf.
    """
    expression = expr if isinstance(expr, InfoExpr) else InfoExpr.parse(expr)
    if input.x_cardinalities != channel.input_cardinalities:
        raise ModelError(
            f"Input alphabets {input.x_cardinalities} do not match channel "
            f"inputs {channel.input_cardinalities}"
        )
    table = channel.receiver_table(receiver)
    per_q = rate_triples(input.joint_inputs(sources), table)
    column = list(InfoExpr).index(expression)
    return float(np.dot(input.q_weights, per_q[:, column]))


# Structure patterns


@dataclass(frozen=True)
class Markov:
    """A - B - C, i.e. A and C independent given B (B may be empty)."""

    a: Tuple[str, ...]
    b: Tuple[str, ...]
    c: Tuple[str, ...]

    def describe(self) -> str:
        middle = ",".join(self.b) or "()"
        return f"markov({','.join(self.a)} - {middle} - {','.join(self.c)})"


@dataclass(frozen=True)
class Identical:
    """Two variables that are equal with probability one."""

    a: str
    b: str

    def describe(self) -> str:
        return f"identical({self.a} = {self.b})"


@dataclass(frozen=True)
class FactorizedNoMai:
    """Channel factorizes into per-transmitter links."""

    channel: ChannelModel

    def describe(self) -> str:
        return "factorized-no-mai(channel)"


Pattern = Union[Markov, Identical, FactorizedNoMai]


def markov(a: Names, b: Names, c: Names) -> Markov:
    return Markov(_as_names(a), _as_names(b), _as_names(c))


def independent(a: Names, b: Names, given: Names = ()) -> Markov:
    return Markov(_as_names(a), _as_names(given), _as_names(b))


def identical(a: str, b: str) -> Identical:
    return Identical(a, b)


def factorized_no_mai(channel: ChannelModel) -> FactorizedNoMai:
    return FactorizedNoMai(channel)


@dataclass(frozen=True)
class StructureReport:
    """Outcome of a structure check."""

    pattern: str
    holds: bool
    max_deviation: float

    def to_dict(self) -> Dict[str, object]:
        return {
            "pattern": self.pattern,
            "holds": self.holds,
            "max_deviation": self.max_deviation,
        }


def _markov_deviation(joint: JointPmf, pattern: Markov) -> float:
    names = pattern.a + pattern.b + pattern.c
    joint.check_names(names)
    overlap = sorted(
        (set(pattern.a) & set(pattern.b))
        | (set(pattern.a) & set(pattern.c))
        | (set(pattern.b) & set(pattern.c))
    )
    if overlap:
        raise OverlapError(overlap)
    t = joint.marginal(names).table
    na, nb = len(pattern.a), len(pattern.b)
    a_axes = tuple(range(na))
    b_axes = tuple(range(na, na + nb))
    c_axes = tuple(range(na + nb, len(names)))
    p_b = t.sum(axis=a_axes + c_axes, keepdims=True)
    p_ab = t.sum(axis=c_axes, keepdims=True)
    p_bc = t.sum(axis=a_axes, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        cond = np.where(p_b > 0, t / p_b, 0.0)
        product = np.where(p_b > 0, (p_ab / p_b) * (p_bc / p_b), 0.0)
    return float(np.max(np.abs(cond - product)))


def structure_check(
    joint: Optional[JointPmf],
    pattern: Pattern,
    tolerance: float = Config.STRUCTURE_TOLERANCE,
) -> StructureReport:
    """
    Check a factorization identity and report its largest deviation.

    Markov chains and independence compare p(a,c|b) with p(a|b)p(c|b) on every
    cell with p(b) > 0; Identical reports P(A != B); FactorizedNoMai measures
    the channel product form.
    """
    if isinstance(pattern, Markov):
        if joint is None:
            raise ModelError("A joint pmf is required for Markov/independence checks")
        deviation = _markov_deviation(joint, pattern)
    elif isinstance(pattern, Identical):
        if joint is None:
            raise ModelError("A joint pmf is required for identity checks")
        pair = joint.marginal((pattern.a, pattern.b)).table
        if pair.shape[0] != pair.shape[1]:
            deviation = 1.0
        else:
            deviation = float(1.0 - np.trace(pair))
    elif isinstance(pattern, FactorizedNoMai):
        channel = pattern.channel
        if len(channel.output_names) != 4:
            deviation = float("inf")
        else:
            deviation = no_mai_deviation(channel.table)
    else:
        raise ModelError(f"Unknown structure pattern: {pattern!r}")

    report = StructureReport(pattern.describe(), deviation <= tolerance, deviation)
    logging.debug(f"structure_check {report.pattern}: deviation={deviation:.3g}")
    return report


def gacs_korner_common(pair: JointPmf) -> CommonPart:
    """
    Gács-Körner common part of a pair of variables.

    Connected components of the bipartite support graph (edge (s1, s2) iff
    p(s1, s2) > 0) label U. Symbols with zero marginal probability map to
    label 0.
    """
    if len(pair.variables) != 2:
        raise ModelError("The common part needs a pmf over exactly two variables")
    table = pair.table
    support = table > Config.ZERO_CELL_THRESHOLD
    if not support.any():
        raise ModelError("The pmf has empty support")

    n1, n2 = table.shape
    rows, cols = np.nonzero(support)
    graph = coo_matrix(
        (np.ones(rows.size), (rows, n1 + cols)), shape=(n1 + n2, n1 + n2)
    )
    _, labels = connected_components(graph, directed=False)

    used1 = support.any(axis=1)
    used2 = support.any(axis=0)
    relabel: Dict[int, int] = {}
    for node in list(np.nonzero(used1)[0]) + [n1 + j for j in np.nonzero(used2)[0]]:
        relabel.setdefault(int(labels[node]), len(relabel))

    map1 = tuple(relabel[int(labels[i])] if used1[i] else 0 for i in range(n1))
    map2 = tuple(relabel[int(labels[n1 + j])] if used2[j] else 0 for j in range(n2))
    u_card = len(relabel)
    p_s1 = table.sum(axis=1)
    u_pmf = np.zeros(u_card)
    for s1, u in enumerate(map1):
        u_pmf[u] += p_s1[s1]
    u_entropy = float(plogp_sum(u_pmf[None], (1,))[0])
    return CommonPart(map1, map2, u_card, max(u_entropy, 0.0), tuple(u_pmf.tolist()))


def random_pmf(
    rng: np.random.Generator, shape: Tuple[int, ...], sparsity: float = 0.0
) -> np.ndarray:
    """Random probability table, optionally with zeroed cells (for tests and oracles)."""
    table = rng.dirichlet(np.ones(int(np.prod(shape)))).reshape(shape)
    if sparsity > 0:
        table = np.where(rng.random(shape) < sparsity, 0.0, table)
        if table.sum() == 0:
            table.flat[0] = 1.0
        table = table / table.sum()
    return table

