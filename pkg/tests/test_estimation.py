import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from btsep.datamodel import ModelKind, build_dataset, parse_dataset
from btsep.estimation import (
    LOSS,
    TIE,
    WIN,
    ConvergenceError,
    FitOptions,
    InconsistencyError,
    PairRelation,
    Status,
    check_likelihood_equations,
    degenerate_probability,
    fit,
    log_likelihood,
    outcome_support,
    prob_matrix_json,
    probability_matrix,
)
from btsep.separation import Decoration, saturate

from conftest import EX1, EX2, EX3, overlap_dataset
from oracles import brute_force_mle, preorders_on_three

D, G, L, I = PairRelation.DOMINATES, PairRelation.EQUIV, PairRelation.DOMINATED_BY, PairRelation.INCOMPARABLE

# Win-probability table: rows give win vs tie, columns win vs loss.
# Entries: 1, 0, "A" (arbitrary) or the set of outcomes in a formula's denominator.
WIN_TABLE = {
    D: {D: 1, G: {WIN, LOSS}, L: 0, I: "A"},
    G: {D: {WIN, TIE}, G: {WIN, LOSS, TIE}, L: 0, I: "A"},
    L: {D: 0, G: 0, L: 0, I: 0},
    I: {D: "A", G: "A", L: 0, I: "A"},
}
# Tie-probability table: rows give tie vs win, columns tie vs loss.
TIE_TABLE = {
    D: {D: 1, G: {LOSS, TIE}, L: 0, I: "A"},
    G: {D: {WIN, TIE}, G: {WIN, LOSS, TIE}, L: 0, I: "A"},
    L: {D: 0, G: 0, L: 0, I: 0},
    I: {D: "A", G: "A", L: 0, I: "A"},
}


def _rel(r, a, b):
    if r[a, b] and r[b, a]:
        return G
    if r[a, b]:
        return D
    if r[b, a]:
        return L
    return I


def _expected(cell, k, support):
    if cell == 1:
        return support[k].status is Status.ONE
    if cell == 0:
        return support[k].status is Status.ZERO
    if cell == "A":
        return support[k].status is Status.ARBITRARY
    live = {o for o, e in support.items() if e.status is Status.PENDING}
    return live == cell


@pytest.mark.parametrize("r", list(preorders_on_three()))
def test_general_rule_matches_tie_tables(r):
    # positions: 0 win, 1 tie, 2 loss
    pos = {WIN: 0, TIE: 1, LOSS: 2}
    rel = {(a, b): _rel(r, pos[a], pos[b]) for a in pos for b in pos if a != b}
    support = outcome_support(rel, (WIN, LOSS, TIE))
    assert _expected(WIN_TABLE[rel[WIN, TIE]][rel[WIN, LOSS]], WIN, support)
    assert _expected(TIE_TABLE[rel[TIE, WIN]][rel[TIE, LOSS]], TIE, support)


def test_degenerate_basic_cases(ex1):
    sep = saturate(ex1)
    assert degenerate_probability(sep, 0, 1, WIN).status is Status.PENDING
    assert degenerate_probability(sep, 0, 2, WIN).status is Status.ONE
    assert degenerate_probability(sep, 2, 0, WIN).status is Status.ZERO


def test_degenerate_arbitrary():
    ds = build_dataset([("a", "b", "1"), ("c", "d", "1")], "basic")
    assert degenerate_probability(saturate(ds), 0, 2, WIN).status is Status.ARBITRARY


def test_two_team_closed_form():
    ds = build_dataset([("a", "b", "1"), ("a", "b", "1"), ("b", "a", "1")], "basic")
    res = fit(ds)
    pm = probability_matrix(res)
    assert pm[0, 1, WIN].value == pytest.approx(2 / 3, abs=1e-10)
    assert log_likelihood(res) == pytest.approx(2 * math.log(2 / 3) + math.log(1 / 3), abs=1e-10)


def test_single_game_contributes_zero():
    res = fit(build_dataset([("a", "b", "1")], "basic"))
    assert probability_matrix(res)[0, 1, WIN].status is Status.ONE
    assert log_likelihood(res) == 0.0


def test_example1_within_class_half(ex1):
    pm = probability_matrix(fit(ex1))
    assert pm[0, 1, WIN].value == 0.5
    assert pm[2, 3, WIN].value == 0.5
    assert pm[0, 3, WIN].status is Status.ONE


def test_example2_all_observed_certain(ex2):
    res = fit(ex2)
    pm = probability_matrix(res)
    assert log_likelihood(res) == 0.0
    for g in ex2.games:
        assert pm[g.first, g.second, int(g.outcome)].status is Status.ONE


@pytest.mark.parametrize(
    "model, expected",
    [
        ("single-tie", {(0, 1): (0.464, 0.126, 0.410), (0, 2): (0.513, 0.101, 0.385), (1, 2): (0.316, 0.229, 0.455)}),
        ("team-tie", {(0, 1): (0.210, 0.040, 0.750), (0, 2): (0.790, 0.210, None), (1, 2): (0.210, 0.290, 0.500)}),
    ],
)
def test_example3_probabilities(model, expected):
    res = fit(parse_dataset(EX3, model))
    pm = probability_matrix(res)
    for (i, j), triple in expected.items():
        for k, v in zip((WIN, LOSS, TIE), triple):
            if v is None:
                assert pm[i, j, k].status is Status.ZERO
            else:
                assert round(pm[i, j, k].value, 3) == v
    assert res.max_residual < 1e-6


def test_residuals_before_convergence():
    ds = parse_dataset(EX3, "single-tie")
    with pytest.raises(ConvergenceError) as info:
        fit(ds, options=FitOptions(max_iter=1))
    assert not info.value.result.converged
    assert check_likelihood_equations(info.value.result).max > 1e-3


def test_symmetric_balanced_zero_residual():
    ds = build_dataset([("a", "b", "1"), ("b", "a", "1"), ("b", "c", "1"), ("c", "b", "1"), ("a", "c", "1"), ("c", "a", "1")], "basic")
    res = fit(ds)
    assert res.iterations == 1
    assert res.max_residual == 0.0


def test_mismatched_separation_rejected(ex1):
    other = saturate(parse_dataset(EX2, "single-order"))
    with pytest.raises(ValueError):
        fit(ex1, other)


def test_zero_observed_is_hard_error(ex1):
    res = fit(ex1)
    flipped = build_dataset([("a", "b", "1"), ("b", "a", "1"), ("c", "d", "1"), ("d", "c", "1"), ("c", "a", "1")], "basic")
    with pytest.raises(InconsistencyError):
        log_likelihood(res, flipped)


def test_json_export_round_trips():
    pm = probability_matrix(fit(parse_dataset(EX3, "team-tie")))
    data = json.loads(json.dumps(prob_matrix_json(pm)))
    assert data["probabilities"]["a"]["c"]["0"] == "zero"
    assert data["probabilities"]["a"]["c"]["1"]["p"] == pm[0, 2, WIN].value
    assert set(data["parameters"]) == {"strengths", "tie_strengths", "nu_i"}


def test_team_order_json_parameters():
    ds = build_dataset([("a", "b", "1"), ("b", "a", "1"), ("a", "b", "2"), ("b", "a", "2")], "team-order")
    data = prob_matrix_json(probability_matrix(fit(ds)))
    assert set(data["parameters"]) == {"home_strengths", "away_strengths"}


rows = st.lists(
    st.tuples(st.integers(0, 4), st.integers(0, 4), st.sampled_from(["1", "2", "0"])).filter(lambda r: r[0] != r[1]),
    min_size=1,
    max_size=16,
)


def _dataset(rs, model):
    model = ModelKind.parse(model)
    return build_dataset([(f"t{a}", f"t{b}", o if model.has_ties else ("1" if o == "0" else o)) for a, b, o in rs], model)


@settings(max_examples=80, deadline=None)
@given(rows, st.sampled_from([m.value for m in ModelKind]))
def test_estimates_consistent(rs, model):
    ds = _dataset(rs, model)
    res = fit(ds)
    pm = probability_matrix(res)
    assert np.all(res.strengths > 0) and np.all(np.isfinite(res.strengths))
    for g in ds.games:
        assert pm[g.first, g.second, int(g.outcome)].status in (Status.ONE, Status.DETERMINED)
    for i, j in pm.pairs():
        st_ = [pm.status[i, j, k] for k in pm.outcomes]
        vals = [pm.value[i, j, k] for k in pm.outcomes]
        det = [v for s, v in zip(st_, vals) if s == Status.DETERMINED]
        if det:
            nonzero = [s for s in st_ if s != Status.ZERO]
            assert all(s == Status.DETERMINED for s in nonzero)
            assert sum(det) == pytest.approx(1.0, abs=1e-12)
    assert res.max_residual < 1e-6


@settings(max_examples=40, deadline=None)
@given(rows, st.sampled_from([m.value for m in ModelKind]))
def test_scale_invariance(rs, model):
    ds = _dataset(rs, model)
    # fit tightly so that the comparison measures invariance, not the stopping rule
    a = probability_matrix(fit(ds, options=FitOptions(tol=1e-13, normalization="geometric")))
    b = probability_matrix(fit(ds, options=FitOptions(tol=1e-13, normalization="first")))
    assert np.array_equal(a.status, b.status)
    mask = a.status == Status.DETERMINED
    assert np.allclose(a.value[mask], b.value[mask], atol=1e-10, rtol=0)


@settings(max_examples=40, deadline=None)
@given(rows)
def test_single_tie_conditional_win(rs):
    ds = _dataset(rs, "single-tie")
    res = fit(ds)
    pm = probability_matrix(res)
    pi = res.strengths
    for i, j in pm.pairs():
        if all(pm.status[i, j, k] == Status.DETERMINED for k in (WIN, LOSS, TIE)):
            p1, p2 = pm.value[i, j, WIN], pm.value[i, j, LOSS]
            assert p1 / (p1 + p2) == pytest.approx(pi[i] / (pi[i] + pi[j]), rel=1e-12)


def test_tie_probability_peaks_at_equal_strengths():
    nu = 0.8
    for product in (0.25, 1.0, 9.0):
        grid = np.exp(np.linspace(-3, 3, 601))
        pi_i = np.sqrt(product) * grid
        pi_j = product / pi_i
        p0 = nu * np.sqrt(pi_i * pi_j) / (pi_i + pi_j + nu * np.sqrt(pi_i * pi_j))
        assert np.isclose(pi_i[np.argmax(p0)], pi_j[np.argmax(p0)])


@pytest.mark.parametrize("model", [m for m in ModelKind])
def test_matches_brute_force(model):
    rng = np.random.default_rng(7)
    for _ in range(3):
        ds = overlap_dataset(rng, model, int(rng.integers(2, 5)))
        pm = probability_matrix(fit(ds))
        P = brute_force_mle(ds)
        mask = pm.status == Status.DETERMINED
        assert np.allclose(pm.value[mask], P[mask], atol=1e-4)


def test_sqrt_tie_update_agrees():
    ds = parse_dataset(EX3, "single-tie")
    a, b = fit(ds), fit(ds, options=FitOptions(tie_update="sqrt"))
    assert np.allclose(a.strengths, b.strengths, atol=1e-8)


def test_tie_free_single_tie_converges():
    # without ties the square-root update alternates between two points
    rows = [("d", "c", "1"), ("d", "b", "2"), ("a", "c", "1"), ("d", "a", "2"), ("a", "b", "1"), ("b", "d", "2"), ("d", "b", "1"), ("c", "d", "1")]
    ds = build_dataset(rows, "single-tie")
    assert fit(ds).max_residual < 1e-6
    with pytest.raises(ConvergenceError):
        fit(ds, options=FitOptions(tie_update="sqrt", max_iter=5000))


def test_partial_degeneracy_formula():
    # team-specific ties, a vs c: tie impossible, win/loss fitted
    res = fit(parse_dataset(EX3, "team-tie"))
    pi = res.strengths
    assert probability_matrix(res)[0, 2, WIN].value == pytest.approx(pi[0] / (pi[0] + pi[2]), abs=1e-14)
    sep = res.separation
    assert sep.relation(sep.item(0, Decoration.MINUS), sep.item(2, Decoration.PLUS)) is PairRelation.DOMINATES
