"""Capacity bounds for the (alpha, beta, p) constraint.

Upper bounds: for a budget renewed every write (alpha = 1) or spent
per cell (beta = 1) the capacity equals the window-weight-limit
capacity of the flip patterns; two small time-space cases carry
published numeric bounds served from a reference table; p >= alpha*beta
makes the constraint vacuous with capacity exactly 1.

Lower bounds: the best of the fixed-schedule rate p/(alpha*beta), the
half-capacity of the pattern-accumulating space construction (or its
full capacity once the coset codes make every pattern addressable),
the write-once time schedules, and dilutions of the one-sided optima.

count_2d_arrays counts binary arrays whose every a-by-b window has at
most p ones: the two-dimensional relaxation whose normalized log is an
upper bound on any rate measured over the same span.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from math import ceil, log2

from .core import ResourceLimitError
from .wwl import WwlParams, wwl_capacity

# published numeric upper bounds for the two smallest genuinely
# two-dimensional cases; served verbatim, never recomputed
REFERENCE_2D = {
    (2, 2, 1): 0.43431,
    (3, 3, 1): 0.25681,
}

_ENV_STATE_BITS = "TSCC_MAX_STATE_BITS"
_DEFAULT_STATE_BITS = 24


def _validate(alpha, beta, p):
    for name, v in (("alpha", alpha), ("beta", beta), ("p", p)):
        if not isinstance(v, int) or v < 1:
            raise ValueError(f"{name} must be a positive integer, got {v!r}")


def upper_bound(alpha: int, beta: int, p: int, tol: float = 1e-9):
    """Capacity upper bound and its provenance tag."""
    _validate(alpha, beta, p)
    if p >= alpha * beta:
        return 1.0, "vacuous-1"
    if alpha == 1:
        return wwl_capacity(WwlParams(beta, p), tol).upper, "wwl-alpha1"
    if beta == 1:
        return wwl_capacity(WwlParams(alpha, p), tol).upper, "wwl-beta1"
    if (alpha, beta, p) in REFERENCE_2D:
        return REFERENCE_2D[(alpha, beta, p)], "2d-reference"
    return 1.0, "vacuous-1"


def _best_time_rate(alpha: int, p: int):
    """Best write-once schedule rate for a per-cell budget, with its t."""
    if p == 1:
        # log2(t+1)/(t+alpha) is unimodal in t; scan until it drops
        best_v, best_t = 0.0, None
        t = 1
        while True:
            v = log2(t + 1) / (t + alpha)
            if v > best_v:
                best_v, best_t = v, t
            elif best_t is not None and t > best_t + 4:
                return best_v, best_t
            t += 1
    best_v, best_t = 0.0, None
    for t in range(1, alpha // (p - 1) + 1):
        v = p * log2(t + 1) / (alpha + t)
        if v > best_v:
            best_v, best_t = v, t
    tstar = ceil(alpha / (p - 1))
    v = log2(tstar + 1) / tstar
    if v > best_v:
        best_v, best_t = v, tstar
    return best_v, best_t


def lower_bound(alpha: int, beta: int, p: int, *, use_coset: bool = False,
                tol: float = 1e-9):
    """Best achievable-rate lower bound: (value, provenance, t_opt).

    t_opt is the write-once epoch length behind a time-construction
    value, None otherwise.
    """
    _validate(alpha, beta, p)
    if p >= alpha * beta:
        return 1.0, "trivial", None
    candidates = [(p / (alpha * beta), "trivial", None)]
    if alpha == 1:
        cap = wwl_capacity(WwlParams(beta, p), tol).lower
        candidates.append((cap / 2, "space-construction", None))
        if use_coset:
            candidates.append((cap, "coset", None))
    elif beta == 1:
        v, t = _best_time_rate(alpha, p)
        candidates.append((v, "time-construction", t))
    else:
        v_time, _, t = lower_bound(alpha, 1, p, use_coset=use_coset, tol=tol)
        v_space, _, _ = lower_bound(1, beta, p, use_coset=use_coset, tol=tol)
        candidates.append((v_time / beta, "dilution", t))
        candidates.append((v_space / alpha, "dilution", None))
    best = candidates[0]
    for cand in candidates[1:]:
        if cand[0] > best[0]:
            best = cand
    return best


@dataclass(frozen=True)
class BoundReport:
    alpha: int
    beta: int
    p: int
    lower: float
    lower_provenance: str
    upper: float
    upper_provenance: str
    t_opt: int | None = None


def bounds_report(alpha: int, beta: int, p: int, *, use_coset: bool = False,
                  tol: float = 1e-9) -> BoundReport:
    lo, lo_prov, t_opt = lower_bound(alpha, beta, p, use_coset=use_coset, tol=tol)
    hi, hi_prov = upper_bound(alpha, beta, p, tol=tol)
    return BoundReport(alpha=alpha, beta=beta, p=p, lower=lo, lower_provenance=lo_prov,
                       upper=hi, upper_provenance=hi_prov, t_opt=t_opt)


@dataclass(frozen=True)
class Array2DCount:
    """Exact count of m-by-n binary arrays with every a-by-b window <= p ones."""

    a: int
    b: int
    p: int
    m: int
    n: int
    count: int

    @property
    def normalized(self) -> float:
        return log2(self.count) / (self.m * self.n)


def _max_state_bits(override):
    if override is not None:
        return override
    env = os.environ.get(_ENV_STATE_BITS)
    return int(env) if env else _DEFAULT_STATE_BITS


def count_2d_arrays(a: int, b: int, p: int, m: int, n: int,
                    max_state_bits: int | None = None) -> Array2DCount:
    """Exact transfer-matrix count over row-by-row states.

    The scan keeps the last a-1 rows as the DP state and checks every
    a-by-b window when its bottom row is placed, so each window is
    tested exactly once.  The orientation with the smaller state is
    chosen automatically (the count is transpose-invariant); the state
    width (a-1)*n is capped at max_state_bits, default 24, overridable
    via the TSCC_MAX_STATE_BITS environment variable.
    """
    _validate(a, b, p)
    if m < 1 or n < 1:
        raise ValueError("m and n must be >= 1")
    result_args = dict(a=a, b=b, p=p, m=m, n=n)
    if m < a or n < b:
        # no complete window exists, every array qualifies
        return Array2DCount(count=1 << (m * n), **result_args)
    if (a - 1) * n > (b - 1) * m:
        a, b, m, n = b, a, n, m
    limit = _max_state_bits(max_state_bits)
    if (a - 1) * n > limit:
        raise ResourceLimitError(
            f"DP state needs {(a - 1) * n} bits, over the limit of {limit}; "
            f"raise {_ENV_STATE_BITS} to allow it")
    if n > 26:
        raise ResourceLimitError(f"row width {n} is over the hard limit of 26 bits")

    rows = list(range(1 << n))
    window_mask = (1 << b) - 1
    offsets = range(n - b + 1)

    def row_window_counts(r):
        return tuple((r >> (n - b - j) & window_mask).bit_count() for j in offsets)

    counts = [row_window_counts(r) for r in rows]

    def band_ok(band):
        for j in offsets:
            if sum(counts[r][j] for r in band) > p:
                return False
        return True

    if a == 1:
        valid = sum(1 for r in rows if band_ok((r,)))
        return Array2DCount(count=valid ** m, **result_args)

    # state: tuple of the last a-1 rows; seed rows carry no complete window yet
    dp = {(): 1}
    for _ in range(a - 1):
        dp = {state + (r,): c for state, c in dp.items() for r in rows}
    for _ in range(a - 1, m):
        nxt = {}
        for state, c in dp.items():
            for r in rows:
                if band_ok(state + (r,)):
                    key = state[1:] + (r,)
                    nxt[key] = nxt.get(key, 0) + c
        dp = nxt
    return Array2DCount(count=sum(dp.values()), **result_args)


def parse_grid(text: str):
    """Parse 'alpha=4:8,beta=1,p=1:2' into ordered parameter lists."""
    ranges = {}
    for part in text.split(","):
        if "=" not in part:
            raise ValueError(f"bad grid component {part!r}, expected name=lo:hi or name=v")
        name, _, span = part.partition("=")
        name = name.strip()
        if name not in ("alpha", "beta", "p"):
            raise ValueError(f"unknown grid parameter {name!r}")
        lo, sep, hi = span.partition(":")
        lo = int(lo)
        hi = int(hi) if sep else lo
        if lo < 1 or hi < lo:
            raise ValueError(f"bad range for {name}: {span!r}")
        ranges[name] = list(range(lo, hi + 1))
    missing = {"alpha", "beta", "p"} - set(ranges)
    if missing:
        raise ValueError(f"grid is missing {sorted(missing)}")
    return ranges


def _table_row(point):
    alpha, beta, p, use_coset = point
    r = bounds_report(alpha, beta, p, use_coset=use_coset)
    t_opt = "" if r.t_opt is None else str(r.t_opt)
    return (f"{alpha},{beta},{p},{t_opt},{r.lower:.6g},{r.upper:.6g},"
            f"{r.lower_provenance}|{r.upper_provenance}")


def emit_tables(grid, *, use_coset: bool = False, workers: int = 1) -> str:
    """CSV of bounds over a parameter grid, rows in grid order.

    grid is a parse_grid() mapping or its textual form.  Columns:
    alpha,beta,p,t_opt,lower,upper,provenance with provenance holding
    the lower and upper tags joined by '|'.  Output is deterministic
    for a given grid regardless of worker count.
    """
    if isinstance(grid, str):
        grid = parse_grid(grid)
    points = [(alpha, beta, p, use_coset)
              for alpha in grid["alpha"] for beta in grid["beta"] for p in grid["p"]]
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_table_row, points))
    else:
        rows = [_table_row(pt) for pt in points]
    return "\n".join(["alpha,beta,p,t_opt,lower,upper,provenance"] + rows) + "\n"
