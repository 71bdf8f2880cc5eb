"""Cell-level primitives for time-space constrained rewriting codes.

A memory is a row of n binary cells.  A write replaces the whole state
vector; its cost at a cell is 1 exactly when the cell value changes.
The (alpha, beta, p) constraint bounds the total cost inside any window
of alpha consecutive writes and beta contiguous cells by p.

This module holds the shared vocabulary: state vectors as 0/1 tuples,
write sequences, the flip matrix, the window checker, and the abstract
encoder/decoder interface every code construction implements.
"""

from __future__ import annotations

import warnings
from abc import ABC, abstractmethod
from dataclasses import dataclass
from math import log2
from random import Random

# A cell state is a tuple of 0/1 ints; index 0 is cell 1, the leftmost
# and most significant position under psi().
Bits = tuple


class ConvergenceError(RuntimeError):
    """An iterative method hit its iteration cap before reaching tolerance."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class ResourceLimitError(RuntimeError):
    """A computation would exceed a configured size limit."""


def parse_state(text: str) -> Bits:
    """Parse a 01-string such as '1011' into a state tuple."""
    if not text or any(ch not in "01" for ch in text):
        raise ValueError(f"state must be a nonempty 01-string, got {text!r}")
    return tuple(int(ch) for ch in text)


def format_state(bits: Bits) -> str:
    return "".join(str(b) for b in bits)


def psi(bits: Bits) -> int:
    """Decimal value of a state; cell 1 is the most significant bit."""
    value = 0
    for b in bits:
        value = (value << 1) | b
    return value


def bits_from_int(value: int, width: int) -> Bits:
    """Inverse of psi for a fixed width."""
    if value < 0 or value >> width:
        raise ValueError(f"value {value} does not fit in {width} bits")
    return tuple((value >> (width - 1 - i)) & 1 for i in range(width))


def hamming_weight(bits: Bits) -> int:
    return sum(bits)


def hamming_distance(u: Bits, v: Bits) -> int:
    """Number of positions where u and v differ."""
    if len(u) != len(v):
        raise ValueError(f"length mismatch: {len(u)} vs {len(v)}")
    return sum(a != b for a, b in zip(u, v))


def xor(u: Bits, v: Bits) -> Bits:
    if len(u) != len(v):
        raise ValueError(f"length mismatch: {len(u)} vs {len(v)}")
    return tuple(a ^ b for a, b in zip(u, v))


def complement(u: Bits) -> Bits:
    return tuple(1 - b for b in u)


def all_zero(n: int) -> Bits:
    return (0,) * n


def all_one(n: int) -> Bits:
    return (1,) * n


@dataclass(frozen=True)
class ConstraintParams:
    """The (alpha, beta, p) window budget.

    alpha: writes per window, beta: cells per window, p: cost budget.
    p >= alpha*beta makes the constraint vacuous (every sequence
    satisfies it); operations accept such parameters and report the
    fact rather than reject them.
    """

    alpha: int
    beta: int
    p: int

    def __post_init__(self):
        for name in ("alpha", "beta", "p"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")

    @property
    def vacuous(self) -> bool:
        return self.p >= self.alpha * self.beta


class WriteSequence:
    """An initial state followed by the state after each write.

    The initial state is pinned to all-zero, matching how every
    construction here starts; traces loaded from external files may
    override that explicitly.
    """

    def __init__(self, states, *, allow_nonzero_start=False):
        states = tuple(tuple(s) for s in states)
        if not states:
            raise ValueError("a write sequence needs at least the initial state")
        n = len(states[0])
        if n == 0:
            raise ValueError("states must have at least one cell")
        for i, s in enumerate(states):
            if len(s) != n:
                raise ValueError(f"state {i} has {len(s)} cells, expected {n}")
            if any(b not in (0, 1) for b in s):
                raise ValueError(f"state {i} has non-binary entries")
        if any(states[0]) and not allow_nonzero_start:
            raise ValueError("initial state must be all-zero "
                             "(pass allow_nonzero_start=True for external traces)")
        self.states = states

    @property
    def n(self) -> int:
        return len(self.states[0])

    @property
    def writes(self) -> int:
        return len(self.states) - 1

    def __len__(self):
        return len(self.states)

    def __eq__(self, other):
        return isinstance(other, WriteSequence) and self.states == other.states

    @classmethod
    def from_lines(cls, lines, *, allow_nonzero_start=True):
        """Build from one 01-string per line; the first line is the initial state."""
        states = [parse_state(ln.strip()) for ln in lines if ln.strip()]
        if not states:
            raise ValueError("empty write-sequence input")
        return cls(states, allow_nonzero_start=allow_nonzero_start)

    def to_lines(self):
        return [format_state(s) for s in self.states]


def flip_matrix(ws: WriteSequence):
    """Rows of cell flips: row i is states[i] XOR states[i-1], i >= 1."""
    if ws.writes == 0:
        raise ValueError("write sequence has no writes, flip matrix is empty")
    return tuple(xor(ws.states[i], ws.states[i - 1]) for i in range(1, len(ws.states)))


@dataclass(frozen=True)
class ConstraintVerdict:
    """Outcome of a window check; write/cell/cost locate the first violation."""

    satisfied: bool
    write: int | None = None
    cell: int | None = None
    cost: int | None = None

    def __bool__(self):
        return self.satisfied


def check_constraint(ws: WriteSequence, params: ConstraintParams) -> ConstraintVerdict:
    """Test every complete alpha-by-beta window of the flip matrix.

    Cell windows run over 1 <= j <= n - beta + 1 only; a sequence
    narrower than beta cells is rejected.  Time windows cover writes
    [i, i + alpha - 1] for 1 <= i <= m - alpha + 1.  With fewer than
    alpha writes the single clipped window [1, m] is tested instead;
    shorter suffix windows of longer traces are subsets of the last
    complete window and need no separate test.

    Returns the first violation in (write, cell) lexicographic order.
    """
    n = ws.n
    if n < params.beta:
        raise ValueError(f"sequence has {n} cells, narrower than beta={params.beta}")
    m = ws.writes
    if m == 0:
        return ConstraintVerdict(True)
    flips = flip_matrix(ws)

    # prefix[i][j] = total flips in rows < i, cols < j
    prefix = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(1, m + 1):
        row = flips[i - 1]
        acc = 0
        prev = prefix[i - 1]
        cur = prefix[i]
        for j in range(1, n + 1):
            acc += row[j - 1]
            cur[j] = prev[j] + acc

    def window_cost(i, j, rows, cols):
        return (prefix[i + rows - 1][j + cols - 1] - prefix[i - 1][j + cols - 1]
                - prefix[i + rows - 1][j - 1] + prefix[i - 1][j - 1])

    rows = min(params.alpha, m)
    last_start = max(1, m - params.alpha + 1)
    for i in range(1, last_start + 1):
        for j in range(1, n - params.beta + 2):
            cost = window_cost(i, j, rows, params.beta)
            if cost > params.p:
                return ConstraintVerdict(False, write=i, cell=j, cost=cost)
    return ConstraintVerdict(True)


class RewritingCode(ABC):
    """Encoder/decoder pair over n cells with per-write message alphabets.

    Subclasses declare n_cells, period, and the (alpha, beta, p)
    constraint their write sequences satisfy.  message_count(i) == 1
    marks a write carrying no information; the encoder may still move
    cells on such writes (resets do).  Instances are immutable after
    construction and safe to share across threads.
    """

    n_cells: int
    period: int
    params: ConstraintParams

    @abstractmethod
    def message_count(self, write_index: int) -> int:
        """Size of the message alphabet of the given 1-based write."""

    @abstractmethod
    def encode(self, write_index: int, message: int, current: Bits) -> Bits:
        """New cell state storing the message on the given write."""

    @abstractmethod
    def decode(self, write_index: int, current: Bits) -> int:
        """Recover the message of the given write from the state after it."""

    def _check_write_index(self, write_index: int):
        if not isinstance(write_index, int) or write_index < 1:
            raise ValueError(f"write index must be a positive integer, got {write_index!r}")

    def _check_message(self, write_index: int, message: int):
        count = self.message_count(write_index)
        if not 1 <= message <= count:
            raise ValueError(
                f"message {message} out of range [1:{count}] on write {write_index}")


@dataclass(frozen=True)
class RateReport:
    """Information written per cell per write over a span of writes."""

    bits_written: float
    writes: int
    cells: int
    rate: float


def measure_rate(code: RewritingCode, writes: int) -> RateReport:
    """Sum log2(message_count(i)) over the first `writes` writes.

    For an honest per-period figure `writes` should be a multiple of
    code.period; other spans still compute but carry a warning.
    """
    if writes < 1:
        raise ValueError("writes must be >= 1")
    if writes % code.period:
        warnings.warn(
            f"{writes} writes is not a multiple of the code period {code.period}; "
            "the rate is not a whole-period average", stacklevel=2)
    bits = 0.0
    for i in range(1, writes + 1):
        bits += log2(code.message_count(i))
    return RateReport(bits_written=bits, writes=writes, cells=code.n_cells,
                      rate=bits / (writes * code.n_cells))


@dataclass(frozen=True)
class SimulationResult:
    trace: WriteSequence
    messages: tuple
    decoded: tuple

    @property
    def round_trip_ok(self) -> bool:
        return self.messages == self.decoded


def random_messages(code: RewritingCode, writes: int, rng: Random):
    """Uniform messages for each write, honoring per-write alphabets."""
    return tuple(rng.randrange(code.message_count(i)) + 1 for i in range(1, writes + 1))


def run_trace(code: RewritingCode, messages) -> SimulationResult:
    """Apply a message stream from the all-zero state, decoding each write."""
    state = all_zero(code.n_cells)
    states = [state]
    decoded = []
    for i, m in enumerate(messages, start=1):
        state = code.encode(i, m, state)
        states.append(state)
        decoded.append(code.decode(i, state))
    return SimulationResult(WriteSequence(states), tuple(messages), tuple(decoded))


def simulate(code: RewritingCode, writes: int, seed: int) -> SimulationResult:
    """Deterministic random-message simulation.

    Messages come from random.Random(seed), the stdlib Mersenne
    Twister, whose randrange output is stable across platforms, so a
    (code, writes, seed) triple always reproduces the same trace.
    """
    return run_trace(code, random_messages(code, writes, Random(seed)))
