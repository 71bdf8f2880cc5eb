import itertools

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from tscc.core import (ConstraintParams, WriteSequence, all_zero, bits_from_int,
                       check_constraint, flip_matrix, format_state,
                       hamming_distance, hamming_weight, measure_rate,
                       parse_state, psi, simulate, xor)
from tscc.constructions import TrivialCode


def test_parse_format_roundtrip():
    assert parse_state("1011001001") == (1, 0, 1, 1, 0, 0, 1, 0, 0, 1)
    assert format_state((1, 1, 0, 0, 0)) == "11000"


def test_parse_rejects_junk():
    with pytest.raises(ValueError):
        parse_state("10a1")
    with pytest.raises(ValueError):
        parse_state("")


def test_psi_is_msb_first():
    assert psi((1, 1, 0, 0, 0)) == 24
    assert psi((0, 0, 0)) == 0
    assert psi((0, 1)) == 1


@given(st.integers(0, 2 ** 12 - 1))
def test_bits_from_int_inverts_psi(v):
    assert psi(bits_from_int(v, 12)) == v


def test_hamming_helpers():
    assert hamming_weight((1, 0, 1, 1)) == 3
    assert hamming_distance((1, 0, 1), (0, 0, 1)) == 1
    assert xor((1, 0, 1), (1, 1, 0)) == (0, 1, 1)


# --- WriteSequence -----------------------------------------------------------

def test_sequence_pins_zero_start():
    with pytest.raises(ValueError):
        WriteSequence([(1, 0), (0, 0)])
    ws = WriteSequence([(1, 0), (0, 0)], allow_nonzero_start=True)
    assert ws.writes == 1


def test_sequence_rejects_ragged_and_nonbinary():
    with pytest.raises(ValueError):
        WriteSequence([(0, 0), (0, 0, 1)])
    with pytest.raises(ValueError):
        WriteSequence([(0, 0), (0, 2)])
    with pytest.raises(ValueError):
        WriteSequence([])


def test_sequence_line_roundtrip():
    lines = ["0000", "1010", "1111"]
    ws = WriteSequence.from_lines(lines)
    assert ws.to_lines() == lines
    assert ws.writes == 2


def test_flip_matrix_rows_are_xors():
    ws = WriteSequence([(0, 0, 0), (1, 0, 1), (1, 1, 1)])
    assert flip_matrix(ws) == ((1, 0, 1), (0, 1, 0))


@given(st.data())
def test_flip_row_sums_equal_write_costs(data):
    n = data.draw(st.integers(1, 8))
    m = data.draw(st.integers(1, 8))
    states = [tuple(data.draw(st.integers(0, 1)) for _ in range(n))
              for _ in range(m + 1)]
    ws = WriteSequence(states, allow_nonzero_start=True)
    for i, row in enumerate(flip_matrix(ws), start=1):
        assert sum(row) == hamming_distance(ws.states[i], ws.states[i - 1])


# --- constraint checker ------------------------------------------------------

def naive_check(ws, params):
    """Quadruple-loop reference for the windowed flip budget."""
    flips = flip_matrix(ws) if ws.writes else ()
    m, n = len(flips), ws.n
    if n < params.beta:
        raise ValueError("too narrow")
    rows = min(params.alpha, m)
    for i in range(1, max(1, m - params.alpha + 1) + 1):
        for j in range(1, n - params.beta + 2):
            cost = sum(flips[r][c]
                       for r in range(i - 1, i - 1 + rows)
                       for c in range(j - 1, j - 1 + params.beta))
            if cost > params.p:
                return (i, j, cost)
    return None


def assert_matches_naive(ws, params):
    verdict = check_constraint(ws, params)
    expect = naive_check(ws, params)
    if expect is None:
        assert verdict.satisfied
    else:
        assert (verdict.write, verdict.cell, verdict.cost) == expect


def test_checker_exhaustive_tiny():
    """Every 2-cell trace of up to 3 writes, against the naive scan."""
    for m in range(1, 4):
        for cells in itertools.product(range(4), repeat=m):
            states = [(0, 0)] + [bits_from_int(v, 2) for v in cells]
            ws = WriteSequence(states)
            for alpha in (1, 2, 3):
                for p in (1, 2, 3):
                    assert_matches_naive(ws, ConstraintParams(alpha, 2, p))


@settings(max_examples=300)
@given(st.data())
def test_checker_matches_naive_random(data):
    n = data.draw(st.integers(1, 8))
    m = data.draw(st.integers(1, 64 // n))
    states = [all_zero(n)] + [
        tuple(data.draw(st.integers(0, 1)) for _ in range(n)) for _ in range(m)]
    ws = WriteSequence(states)
    alpha = data.draw(st.integers(1, m + 1))
    beta = data.draw(st.integers(1, n))
    p = data.draw(st.integers(1, alpha * beta + 1))
    assert_matches_naive(ws, ConstraintParams(alpha, beta, p))


@given(st.data())
def test_vacuous_budget_always_satisfied(data):
    n = data.draw(st.integers(1, 6))
    m = data.draw(st.integers(1, 6))
    states = [all_zero(n)] + [
        tuple(data.draw(st.integers(0, 1)) for _ in range(n)) for _ in range(m)]
    alpha = data.draw(st.integers(1, 4))
    beta = data.draw(st.integers(1, n))
    params = ConstraintParams(alpha, beta, alpha * beta)
    assert params.vacuous
    assert check_constraint(WriteSequence(states), params).satisfied


def test_checker_rejects_narrow_sequence():
    ws = WriteSequence([(0, 0), (1, 1)])
    with pytest.raises(ValueError):
        check_constraint(ws, ConstraintParams(1, 3, 1))


def test_checker_clips_short_traces():
    # one write of cost 2 against alpha=3: the lone clipped window is checked
    ws = WriteSequence([(0, 0), (1, 1)])
    assert not check_constraint(ws, ConstraintParams(3, 2, 1))
    assert check_constraint(ws, ConstraintParams(3, 2, 2)).satisfied


def test_first_violation_is_lexicographic():
    # flip rows 0000, 0011, 0011, 1110: windows starting at write 2 cell 3
    # and write 3 cell 2 both overflow, so (2, 3) must win
    ws = WriteSequence([
        (0, 0, 0, 0),
        (0, 0, 0, 0),
        (0, 0, 1, 1),
        (0, 0, 0, 0),
        (1, 1, 1, 0),
    ])
    verdict = check_constraint(ws, ConstraintParams(2, 2, 2))
    assert (verdict.write, verdict.cell, verdict.cost) == (2, 3, 4)


def test_verdict_is_truthy_only_when_satisfied():
    ws = WriteSequence([(0, 0), (1, 1)])
    assert bool(check_constraint(ws, ConstraintParams(1, 2, 2)))
    assert not bool(check_constraint(ws, ConstraintParams(1, 2, 1)))


# --- rates and simulation ----------------------------------------------------

def test_measure_rate_golden():
    code = TrivialCode(3, 3, 2, 15)
    report = measure_rate(code, 30)
    assert report.rate == pytest.approx(2 / 9)
    assert report.cells == 15 and report.writes == 30


def test_measure_rate_warns_off_period():
    code = TrivialCode(3, 3, 2, 15)
    with pytest.warns(UserWarning):
        measure_rate(code, 4)


def test_single_message_write_decodes_to_one():
    code = TrivialCode(2, 2, 1, 4)
    state = all_zero(4)
    for i in range(1, 2 * code.period + 1):
        state = code.encode(i, 1, state)
        if code.message_count(i) == 1:
            assert code.decode(i, state) == 1


def test_simulate_is_deterministic():
    code = TrivialCode(3, 3, 2, 15)
    a = simulate(code, 30, seed=5)
    b = simulate(code, 30, seed=5)
    assert a.trace == b.trace and a.messages == b.messages
    assert a.round_trip_ok
    assert simulate(code, 30, seed=6).messages != a.messages
