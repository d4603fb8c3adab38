"""Indicator engine: spec cases plus brute-force oracle equivalence."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from moocscope import indicators
from moocscope.events import CourseConfig, Event, Pseudonym, payload_items
from moocscope.indicators import (
    Funnel,
    best_grade,
    certified_ratio,
    compare,
    download_group_quiz_stats,
    dropout,
    forum_stats,
    funnel,
    participant_category,
    percent_str,
    reads_vs_grade,
    video_timeline,
)

from helpers import (
    START,
    brute_category,
    brute_compare_pairs,
    brute_download_groups,
    brute_forum,
    brute_funnel,
    brute_timeline,
    learner_events,
    make_view,
    random_view,
)

L = Pseudonym


def _decimal_percent(cell: Fraction) -> str:
    """Independent half-even rendering via the decimal module."""
    from decimal import Decimal, ROUND_HALF_EVEN

    exact = Decimal(cell.numerator * 100) / Decimal(cell.denominator)
    return str(exact.quantize(Decimal("0.01"), rounding=ROUND_HALF_EVEN))


def _config(**kwargs) -> CourseConfig:
    defaults = dict(
        id="course", start=START, end=START + 70 * 86400, weeks=10,
        pass_threshold=50,
        quizzes=(("q1", 1), ("q2", 2)),
        videos=(("v1", 1, 300),),
        files=(("f1", 1), ("f2", 1)),
    )
    defaults.update(kwargs)
    return CourseConfig(**defaults)


def _quiz(ts, learner, quiz, attempt, score):
    return Event(ts, L(learner), "course", "QUIZ_ATTEMPT", quiz,
                 payload_items({"attempt": attempt, "score": score}))


# -- participant categories ----------------------------------------------


def test_enroll_only_is_registrant():
    view = make_view(_config(), [Event(START, L("a"), "course", "ENROLL", "")])
    assert participant_category(L("a"), view) == "registrant"


def test_forum_reads_do_not_activate():
    view = make_view(_config(), [
        Event(START, L("a"), "course", "ENROLL", ""),
        Event(START + 1, L("a"), "course", "FORUM_READ", "t1"),
    ])
    assert participant_category(L("a"), view) == "registrant"


def test_downloads_do_not_activate():
    view = make_view(_config(), [
        Event(START, L("a"), "course", "ENROLL", ""),
        Event(START + 1, L("a"), "course", "DOC_DOWNLOAD", "f1", payload_items({"week": 1})),
    ])
    assert participant_category(L("a"), view) == "registrant"


def test_passing_everything_with_eval_is_certified():
    view = make_view(_config(), [
        Event(START, L("a"), "course", "ENROLL", ""),
        _quiz(START + 1, "a", "q1", 1, 60),
        _quiz(START + 2, "a", "q2", 1, 50),
        Event(START + 3, L("a"), "course", "EVAL_SUBMIT", ""),
    ])
    assert participant_category(L("a"), view) == "certified"


def test_passing_everything_without_eval_is_completer():
    view = make_view(_config(), [
        Event(START, L("a"), "course", "ENROLL", ""),
        _quiz(START + 1, "a", "q1", 2, 90),
        _quiz(START + 2, "a", "q2", 1, 50),
    ])
    assert participant_category(L("a"), view) == "completer"


def test_failing_one_quiz_is_active():
    view = make_view(_config(), [
        Event(START, L("a"), "course", "ENROLL", ""),
        _quiz(START + 1, "a", "q1", 1, 90),
        _quiz(START + 2, "a", "q2", 1, 49),
        Event(START + 3, L("a"), "course", "EVAL_SUBMIT", ""),
    ])
    assert participant_category(L("a"), view) == "active"


def test_unenrolled_learner_is_an_error():
    view = make_view(_config(), [Event(START, L("a"), "course", "FORUM_POST", "t1",
                                       payload_items({"role": "student"}))])
    with pytest.raises(ValueError):
        participant_category(L("a"), view)


def test_category_matches_brute_force_on_random_instances():
    rng = random.Random(42)
    checked = 0
    for _ in range(1000):
        view = random_view(rng, max_learners=12)
        for learner in {e.learner for e in view.events}:
            expected = brute_category(learner_events(view, learner), view.config)
            if expected is None:
                with pytest.raises(ValueError):
                    participant_category(learner, view)
            else:
                assert participant_category(learner, view) == expected
            checked += 1
    assert checked > 5000


# -- funnel and dropout ---------------------------------------------------


def test_empty_view_has_empty_funnel():
    view = make_view(_config(), [])
    assert funnel(view) == Funnel(0, 0, 0, 0)


def test_funnel_matches_brute_force_and_stays_monotone():
    rng = random.Random(43)
    for _ in range(300):
        view = random_view(rng)
        f = funnel(view)
        assert (f.registrants, f.active, f.completers, f.certified) == brute_funnel(view)
        assert f.registrants >= f.active >= f.completers >= f.certified >= 0


def test_course_dropout_matrix_exact_rationals():
    matrix = dropout(Funnel(1012, 479, 217, 177))
    assert matrix.cert_vs_reg == Fraction(835, 1012)
    assert matrix.cert_vs_active == Fraction(302, 479)
    assert matrix.compl_vs_reg == Fraction(795, 1012)
    assert matrix.compl_vs_active == Fraction(262, 479)
    assert matrix.active_vs_reg == Fraction(533, 1012)
    rendered = matrix.rendered()
    assert rendered == {
        "cert_vs_reg": "82.51",
        "cert_vs_active": "63.05",
        "compl_vs_reg": "78.56",
        "compl_vs_active": "54.70",
        "active_vs_reg": "52.67",
    }


def test_second_course_dropout_row():
    rendered = dropout(Funnel(519, 333, 131, 99)).rendered()
    assert rendered == {
        "cert_vs_reg": "80.92",
        "cert_vs_active": "70.27",
        "compl_vs_reg": "74.76",
        "compl_vs_active": "60.66",
        "active_vs_reg": "35.84",
    }


def test_no_attrition_means_zero_rates():
    matrix = dropout(Funnel(7, 7, 7, 7))
    assert all(getattr(matrix, name) == 0 for name in matrix.FIELDS)


def test_zero_denominators_render_not_available():
    matrix = dropout(Funnel(0, 0, 0, 0))
    assert set(matrix.rendered().values()) == {"n/a"}


def test_dropout_cells_equal_independent_rational_recomputation():
    rng = random.Random(44)
    for _ in range(500):
        counts = sorted((rng.randint(0, 2000) for _ in range(4)), reverse=True)
        f = Funnel(*counts)
        matrix = dropout(f)
        pairs = [
            (f.certified, f.registrants), (f.certified, f.active),
            (f.completers, f.registrants), (f.completers, f.active),
            (f.active, f.registrants),
        ]
        for name, (num, den) in zip(matrix.FIELDS, pairs):
            cell = getattr(matrix, name)
            if den == 0:
                assert cell is None
            else:
                assert cell == 1 - Fraction(num, den)
                # rendering is exactly half-even rounding: at most half a
                # unit in the last place off, reaching 0.005 only on ties
                rendered = percent_str(cell)
                assert rendered == _decimal_percent(cell)
                assert abs(float(cell) * 100 - float(rendered)) <= 0.005 + 1e-12


def test_certified_ratio_rendering():
    assert percent_str(certified_ratio(Funnel(1012, 479, 217, 177))) == "17.49"
    assert percent_str(certified_ratio(Funnel(519, 333, 131, 99))) == "19.08"
    assert percent_str(certified_ratio(Funnel(10, 0, 0, 0))) == "0.00"
    with pytest.raises(ValueError):
        certified_ratio(Funnel(0, 0, 0, 0))


# -- best grade ------------------------------------------------------------


def test_best_grade_examples():
    assert best_grade([_quiz(START, "a", "q1", 1, 40),
                       _quiz(START + 1, "a", "q1", 2, 60),
                       _quiz(START + 2, "a", "q1", 3, 55)]) == 60
    assert best_grade([_quiz(START, "a", "q1", 1, 70)]) == 70


def test_best_grade_rejects_bad_input():
    with pytest.raises(ValueError):
        best_grade([])
    with pytest.raises(ValueError):
        best_grade([_quiz(START, "a", "q1", 6, 10)])
    with pytest.raises(ValueError):
        best_grade([Event(START, L("a"), "course", "FORUM_READ", "t1")])


@given(st.lists(st.integers(0, 100), min_size=1, max_size=5))
def test_best_grade_is_max_under_permutation_and_duplication(scores):
    events = [_quiz(START + i, "a", "q1", (i % 5) + 1, s) for i, s in enumerate(scores)]
    expected = max(scores)
    assert best_grade(events) == expected
    assert best_grade(list(reversed(events))) == expected
    assert best_grade(events + events) == expected


# -- video timelines -------------------------------------------------------


def test_timeline_empty_video():
    view = make_view(_config(), [])
    tl = video_timeline(view, "v1")
    assert tl.duration == 300
    assert not any(tl.pause_skip)
    assert not any(tl.replay)


def test_backward_seek_is_a_replay_not_a_skip():
    view = make_view(_config(), [
        Event(START, L("a"), "course", "VIDEO_SEEK", "v1",
              payload_items({"from": 120, "to": 30})),
    ])
    tl = video_timeline(view, "v1")
    assert tl.replay[30] == 1
    assert tl.pause_skip[120] == 0


def test_forward_seek_counts_at_its_origin():
    view = make_view(_config(), [
        Event(START, L("a"), "course", "VIDEO_SEEK", "v1",
              payload_items({"from": 10, "to": 50})),
    ])
    tl = video_timeline(view, "v1")
    assert tl.pause_skip[10] == 1
    assert tl.replay[50] == 0


def test_unknown_video_is_an_error():
    with pytest.raises(ValueError):
        video_timeline(make_view(_config(), []), "ghost")


def test_timeline_matches_per_second_brute_recount():
    rng = random.Random(45)
    for _ in range(300):
        view = random_view(rng)
        for video, _, _ in view.config.videos:
            tl = video_timeline(view, video)
            pause_skip, replay = brute_timeline(view, video)
            assert list(tl.pause_skip) == pause_skip
            assert list(tl.replay) == replay


# -- forum stats ------------------------------------------------------------


def test_all_reads_on_day_one_gives_full_early_share():
    events = [Event(START + i, L(f"u{i}"), "course", "FORUM_READ", "t1") for i in range(10)]
    stats = forum_stats(make_view(_config(), events))
    assert stats.phase_shares.first_two_weeks == 1
    assert stats.phase_shares.last_two_weeks == 0


def test_forum_stats_match_brute_force():
    rng = random.Random(46)
    for _ in range(300):
        view = random_view(rng)
        stats = forum_stats(view)
        expected = brute_forum(view)
        assert stats.reads_by_day == expected["reads_by_day"]
        assert stats.posts_by_day == expected["posts_by_day"]
        assert stats.posts_per_student == expected["posts_per_student"]
        assert stats.total_posts == expected["total_posts"]
        assert stats.instructor_posts == expected["instructor_posts"]
        assert stats.instructor_share == expected["instructor_share"]
        assert stats.phase_shares.first_two_weeks == expected["first"]
        assert stats.phase_shares.last_two_weeks == expected["last"]
        if stats.total_posts:
            assert sum(stats.posts_per_student.values()) + stats.instructor_posts == stats.total_posts


# -- download groups ---------------------------------------------------------


def test_without_downloads_everyone_is_in_the_none_group():
    events = [
        Event(START, L("a"), "course", "ENROLL", ""),
        _quiz(START + 1, "a", "q1", 1, 80),
        Event(START, L("b"), "course", "ENROLL", ""),
        _quiz(START + 2, "b", "q1", 1, 60),
    ]
    groups = download_group_quiz_stats(make_view(_config(), events), 1)
    assert groups["none"].n == 2
    assert groups["all"].n == 0
    assert groups["some"].n == 0
    assert groups["none"].mean == 70.0
    assert groups["none"].median == 70.0


def test_partial_download_lands_in_some_group():
    events = [
        _quiz(START + 1, "a", "q1", 1, 80),
        Event(START, L("a"), "course", "DOC_DOWNLOAD", "f1", payload_items({"week": 1})),
    ]
    groups = download_group_quiz_stats(make_view(_config(), events), 1)
    assert groups["some"].n == 1


def test_week_without_quiz_or_files_is_an_error():
    view = make_view(_config(files=(("f1", 1),)), [])
    with pytest.raises(ValueError):
        download_group_quiz_stats(view, 2)  # quiz q2 exists, no files
    with pytest.raises(ValueError):
        download_group_quiz_stats(view, 9)


def test_download_groups_match_brute_force():
    rng = random.Random(47)
    for _ in range(300):
        view = random_view(rng)
        weeks = {w for _, w in view.config.quizzes} & {w for _, w in view.config.files}
        for week in weeks:
            groups = download_group_quiz_stats(view, week)
            expected = brute_download_groups(view, week)
            for name in ("all", "some", "none"):
                n, mean, median = expected[name]
                assert groups[name].n == n
                if n:
                    assert groups[name].mean == pytest.approx(mean)
                    assert groups[name].median == pytest.approx(median)


# -- correlation and compare --------------------------------------------------


def test_high_performer_median_on_constructed_fixture():
    # three learners above grade 90 with raw read counts 10, 21, 40
    events = []
    for name, score, reads in (("a", 95, 10), ("b", 92, 21), ("c", 99, 40), ("d", 50, 7)):
        events.append(Event(START, L(name), "course", "ENROLL", ""))
        events.append(_quiz(START + 1, name, "q1", 1, score))
        events.append(_quiz(START + 2, name, "q2", 1, score))
        events.extend(
            Event(START + 10 + i, L(name), "course", "FORUM_READ", "t1") for i in range(reads)
        )
    result = reads_vs_grade(make_view(_config(), events))
    assert result.median_reads_high_performers == 21


def test_reads_vs_grade_requires_three_pairs():
    events = [
        Event(START, L("a"), "course", "ENROLL", ""),
        _quiz(START + 1, "a", "q1", 1, 80),
    ]
    with pytest.raises(ValueError):
        reads_vs_grade(make_view(_config(), events))


def test_compare_rejects_equal_and_unknown_keys(gol_view):
    with pytest.raises(ValueError):
        compare(gol_view, "posts", "posts")
    with pytest.raises(ValueError):
        compare(gol_view, "posts", "nonsense")


def test_compare_join_matches_brute_force_nested_loop():
    rng = random.Random(48)
    keys = list(indicators.COMPARE_KEYS)
    checked = 0
    for _ in range(400):
        view = random_view(rng)
        x_key = keys[rng.randrange(len(keys))]
        y_key = keys[(keys.index(x_key) + 1 + rng.randrange(len(keys) - 1)) % len(keys)]
        if x_key == y_key:
            continue
        expected = brute_compare_pairs(view, x_key, y_key)
        if len(expected) < 3:
            with pytest.raises(ValueError):
                compare(view, x_key, y_key)
            continue
        result = compare(view, x_key, y_key)
        assert list(result.pairs) == sorted(expected, key=lambda p: p[0])
        checked += 1
    assert checked > 100


def test_compare_fit_agrees_with_reads_vs_grade(gol_view):
    direct = reads_vs_grade(gol_view)
    via_compare = compare(gol_view, "quiz_mean", "reads_sqrt")
    assert via_compare.fit == direct.fit
    assert [(x, y) for _, x, y in via_compare.pairs] == [(x, y) for _, x, y in direct.pairs]
