import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from houghseg.ccl import label_components
from houghseg.hough import (LINE_PARAMS, WORD_PARAMS, HoughParams, accept_lines, hough_image,
                            rasterize_segments, round_half_away, synthesize_hough_image, vote)
from oracles import brute_vote, round_away


def random_masks(n, max_side=16, seed=0):
    rng = np.random.default_rng(seed)
    for _ in range(n):
        h, w = rng.integers(1, max_side + 1, size=2)
        yield rng.random((h, w)) < rng.uniform(0.05, 0.6)


def test_line_and_word_profile_values():
    assert (LINE_PARAMS.theta_start, LINE_PARAMS.theta_end, LINE_PARAMS.delta_theta,
            LINE_PARAMS.connect_gap, LINE_PARAMS.min_votes) == (85, 95, 1, 50, 30)
    assert (WORD_PARAMS.theta_start, WORD_PARAMS.theta_end, WORD_PARAMS.delta_theta,
            WORD_PARAMS.connect_gap, WORD_PARAMS.min_votes) == (30, 120, 1, 20, 2)
    assert LINE_PARAMS.n_theta == 11 and WORD_PARAMS.n_theta == 91


@pytest.mark.parametrize("kwargs", [
    dict(theta_start=10, theta_end=5, delta_theta=1, connect_gap=1, min_votes=1),
    dict(theta_start=0, theta_end=181, delta_theta=1, connect_gap=1, min_votes=1),
    dict(theta_start=0, theta_end=10, delta_theta=0, connect_gap=1, min_votes=1),
    dict(theta_start=0, theta_end=10, delta_theta=1, connect_gap=-1, min_votes=1),
    dict(theta_start=0, theta_end=10, delta_theta=1, connect_gap=1, min_votes=0),
])
def test_invalid_params(kwargs):
    with pytest.raises(ValueError):
        HoughParams(**kwargs)


@pytest.mark.parametrize("v", [0.5, -0.5, 1.5, -2.5, 0.49999999999999994, -0.49999999999999994,
                               2.4999999999999996, 7.0, -7.0, 3.2, -3.7])
def test_round_half_away(v):
    assert round_half_away(v) == round_away(v)


def test_empty_image_votes_nothing():
    acc = vote(np.zeros((5, 7), dtype=bool), LINE_PARAMS)
    assert not acc.votes.any()
    assert acc.n_rho == 2 * math.ceil(math.hypot(5, 7)) + 1


def test_single_pixel():
    m = np.zeros((12, 4), dtype=bool)
    m[10, 0] = True
    acc = vote(m, LINE_PARAMS)
    assert acc.votes.sum() == 11
    assert acc.votes[10 + acc.rho_offset, 5] == 1  # theta = 90
    for k, theta in enumerate(acc.thetas):
        assert acc.votes[round_away(10 * math.sin(math.radians(theta))) + acc.rho_offset, k] == 1


def test_row_of_fifty():
    m = np.zeros((30, 60), dtype=bool)
    m[20, 0:50] = True
    acc = vote(m, LINE_PARAMS)
    assert acc.votes[20 + acc.rho_offset, 5] == 50
    assert np.array_equal(acc.votes, brute_vote(m, 85, 95, 1))


@pytest.mark.parametrize("params", [LINE_PARAMS, WORD_PARAMS], ids=["line", "word"])
def test_vote_matches_oracle(params):
    for m in random_masks(60, seed=1):
        assert np.array_equal(vote(m, params).votes,
                              brute_vote(m, params.theta_start, params.theta_end, params.delta_theta))


@pytest.mark.parametrize("params", [LINE_PARAMS, WORD_PARAMS], ids=["line", "word"])
def test_column_sums_equal_foreground(params):
    for m in random_masks(40, max_side=30, seed=2):
        acc = vote(m, params)
        assert (acc.votes.sum(axis=0) == m.sum()).all()
        assert acc.votes.max(initial=0) <= m.sum()


def test_accept_lines_empty():
    m = np.zeros((10, 10), dtype=bool)
    assert accept_lines(vote(m, LINE_PARAMS), LINE_PARAMS, m) == []


def test_accept_row_of_fifty():
    m = np.zeros((30, 60), dtype=bool)
    m[20, 0:50] = True
    lines = accept_lines(vote(m, LINE_PARAMS), LINE_PARAMS, m)
    top = lines[0]
    assert (top.rho, top.theta, top.votes) == (20, 90.0, 50)
    assert len(top.supporters) == 50
    assert sorted(map(tuple, top.supporters)) == [(20, c) for c in range(50)]

    strict = HoughParams(85, 95, 1, 50, 51)
    assert all((ln.rho, ln.theta) != (20, 90.0) for ln in accept_lines(vote(m, strict), strict, m))


def test_accepted_lines_are_consistent():
    for m in random_masks(30, max_side=20, seed=3):
        acc = vote(m, WORD_PARAMS)
        lines = accept_lines(acc, WORD_PARAMS, m)
        assert len(lines) == (acc.votes >= 2).sum()
        keys = [(-ln.votes, ln.rho, ln.theta) for ln in lines]
        assert keys == sorted(keys)
        for ln in lines:
            assert ln.votes == len(ln.supporters)
            rad = math.radians(ln.theta)
            for row, col in ln.supporters:
                assert m[row, col]
                assert round_away(col * math.cos(rad) + row * math.sin(rad)) == ln.rho


def two_runs(gap):
    m = np.zeros((12, 20 + gap + 10), dtype=bool)
    m[5, 0:10] = True
    m[5, 10 + gap:20 + gap] = True
    return m


def test_no_lines_gives_empty_image():
    m = two_runs(15)
    assert not synthesize_hough_image(m, [], WORD_PARAMS).any()


def test_gap_15_bridges():
    m = two_runs(15)
    out = synthesize_hough_image(m, accept_lines(vote(m, WORD_PARAMS), WORD_PARAMS, m), WORD_PARAMS)
    assert out[5, 0:35].all()
    assert out.sum() == 35
    assert len(label_components(out)) == 1


def test_gap_25_stays_split():
    m = two_runs(25)
    out = synthesize_hough_image(m, accept_lines(vote(m, WORD_PARAMS), WORD_PARAMS, m), WORD_PARAMS)
    assert np.array_equal(out, m)
    assert len(label_components(out)) == 2


def test_non_supporters_are_dropped():
    m = np.zeros((40, 40), dtype=bool)
    m[10, 2:38] = True
    m[30, 20] = True  # lone pixel, never reaches 30 votes
    out = hough_image(m, LINE_PARAMS)
    assert out[10, 2:38].all() and not out[30, 20]


def test_rasterize_endpoints_and_steps():
    rr, cc = rasterize_segments([0], [0], [3], [7])
    assert (rr[0], cc[0]) == (0, 0) and (rr[-1], cc[-1]) == (3, 7)
    assert len(rr) == 8
    assert (np.diff(cc) == 1).all() and set(np.diff(rr)) <= {0, 1}
    rr, cc = rasterize_segments([5], [5], [5], [5])
    assert rr.tolist() == [5] and cc.tolist() == [5]


@pytest.mark.parametrize("params", [LINE_PARAMS, WORD_PARAMS, HoughParams(0, 180, 7.5, 6, 3)],
                         ids=["line", "word", "coarse"])
def test_fast_path_matches_explicit_path(params):
    for m in random_masks(25, max_side=40, seed=4):
        explicit = synthesize_hough_image(m, accept_lines(vote(m, params), params, m), params)
        assert np.array_equal(hough_image(m, params), explicit)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 30), st.integers(0, 30))
def test_bridging_monotone_in_gap(seed, g1, extra):
    m = np.random.default_rng(seed).random((24, 40)) < 0.08
    small = HoughParams(30, 120, 1, g1, 2)
    large = HoughParams(30, 120, 1, g1 + extra, 2)
    a, b = hough_image(m, small), hough_image(m, large)
    assert not (a & ~b).any()


def test_supporters_are_kept_and_bridges_are_near_them():
    for m in random_masks(10, max_side=30, seed=5):
        lines = accept_lines(vote(m, WORD_PARAMS), WORD_PARAMS, m)
        out = synthesize_hough_image(m, lines, WORD_PARAMS)
        support = np.zeros_like(m)
        for ln in lines:
            support[ln.supporters[:, 0], ln.supporters[:, 1]] = True
        assert not (support & ~out).any()
        # every bridge pixel sits between two supporters of one line within connect_gap
        bridges = np.argwhere(out & ~support)
        for row, col in bridges[:20]:
            found = False
            for ln in lines:
                rad = math.radians(ln.theta)
                d = np.array([-math.sin(rad), math.cos(rad)])
                t_sup = ln.supporters[:, 1] * d[0] + ln.supporters[:, 0] * d[1]
                t_pix = col * d[0] + row * d[1]
                before = t_sup[t_sup <= t_pix + 1]
                after = t_sup[t_sup >= t_pix - 1]
                if len(before) and len(after) and after.min() - before.max() <= WORD_PARAMS.connect_gap + 2:
                    found = True
                    break
            assert found


def test_accumulator_render():
    m = np.zeros((30, 60), dtype=bool)
    m[20, 0:50] = True
    img = vote(m, LINE_PARAMS).to_gray()
    assert img.dtype == np.uint8 and img.max() == 255
    assert not vote(np.zeros((3, 3), bool), LINE_PARAMS).to_gray().any()
