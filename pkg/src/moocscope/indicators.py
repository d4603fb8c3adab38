"""Per-course engagement indicators.

Everything here is a pure function of an immutable CourseView, so any
set of indicators may be evaluated in parallel with no coordination.

Participant levels are nested: every certified learner is a completer,
every completer is active, every active learner is a registrant. That
nesting is what makes the dropout matrix and the participant counts
mutually consistent; the disjoint "completers only" count is exposed
separately on :class:`Funnel`.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from datetime import date
from fractions import Fraction
from typing import Sequence

from .events import (
    DOC_DOWNLOAD,
    ENROLL,
    EVAL_SUBMIT,
    FORUM_POST,
    FORUM_READ,
    INSTRUCTOR_ROLE,
    MAX_QUIZ_ATTEMPTS,
    QUIZ_ATTEMPT,
    SECONDS_PER_DAY,
    VIDEO_PAUSE,
    VIDEO_PLAY,
    VIDEO_SEEK,
    Event,
    Pseudonym,
)
from .store import CourseView

REGISTRANT = "registrant"
ACTIVE = "active"
COMPLETER = "completer"
CERTIFIED = "certified"
LEVELS = (REGISTRANT, ACTIVE, COMPLETER, CERTIFIED)

#: Verbs that lift a registrant to the active level. Forum reads and
#: file downloads deliberately do not activate; pass
#: ``activating_verbs`` to the classification entry points to run
#: sensitivity variants.
DEFAULT_ACTIVATING_VERBS = frozenset({VIDEO_PLAY, FORUM_POST, QUIZ_ATTEMPT})

#: Stable per-learner indicator keys shared by CLI, API and dashboard.
COMPARE_KEYS = (
    "posts",
    "reads",
    "downloads",
    "quiz_mean",
    "quiz_attempt_count",
    "videos_played",
    "reads_sqrt",
)

_EPOCH_ORDINAL = 719163

TWO_WEEKS = 14 * SECONDS_PER_DAY


def percent_str(value: Fraction | float | None, digits: int = 2) -> str:
    """Render a ratio as a percent with half-even rounding, or ``n/a``."""
    if value is None:
        return "n/a"
    frac = value if isinstance(value, Fraction) else Fraction(value).limit_denominator(10**12)
    scaled = round(frac * 100 * 10**digits)  # Fraction.__round__ is half-even
    whole, part = divmod(scaled, 10**digits)
    return f"{whole}.{part:0{digits}d}"


@dataclass(frozen=True)
class Funnel:
    """Nested participant counts for one course."""

    registrants: int
    active: int
    completers: int
    certified: int

    def __post_init__(self) -> None:
        if not self.registrants >= self.active >= self.completers >= self.certified >= 0:
            raise ValueError("funnel counts must be nested and non-negative")

    @property
    def completers_only(self) -> int:
        """Completers that did not go on to certification."""
        return self.completers - self.certified


@dataclass(frozen=True)
class DropoutMatrix:
    """The five dropout-rate definitions, as exact rationals in [0, 1].

    A cell is None when its denominator category is empty; rendering
    shows ``n/a`` for those, never 0.
    """

    cert_vs_reg: Fraction | None
    cert_vs_active: Fraction | None
    compl_vs_reg: Fraction | None
    compl_vs_active: Fraction | None
    active_vs_reg: Fraction | None

    FIELDS = ("cert_vs_reg", "cert_vs_active", "compl_vs_reg", "compl_vs_active", "active_vs_reg")

    def rendered(self) -> dict[str, str]:
        return {name: percent_str(getattr(self, name)) for name in self.FIELDS}


@dataclass(frozen=True)
class VideoTimeline:
    """Per-second distinct-student counts for one video.

    ``pause_skip[s]`` counts students that paused at second ``s`` or
    seeked away from it (forward seek, attributed to its origin);
    ``replay[s]`` counts students that landed on second ``s`` via a
    backward seek.
    """

    video: str
    duration: int
    pause_skip: tuple[int, ...]
    replay: tuple[int, ...]


@dataclass(frozen=True)
class PhaseShares:
    first_two_weeks: Fraction | None
    last_two_weeks: Fraction | None


@dataclass(frozen=True)
class ForumStats:
    reads_by_day: dict[date, int]
    posts_by_day: dict[date, int]
    posts_per_student: dict[Pseudonym, int]
    total_posts: int
    instructor_posts: int
    instructor_share: Fraction | None
    phase_shares: PhaseShares


@dataclass(frozen=True)
class GroupStats:
    """First-attempt grade statistics for one download group."""

    n: int
    mean: float | None
    median: float | None


@dataclass(frozen=True)
class RegressionFit:
    """Ordinary least squares fit of y on x with a pointwise SE band.

    ``residual_std`` is the regression standard error (df = n - 2).
    ``slope``/``intercept`` are None when x has zero variance;
    ``pearson_r`` is None when either variable has zero variance.
    """

    n: int
    slope: float | None
    intercept: float | None
    pearson_r: float | None
    residual_std: float
    x_mean: float
    sxx: float

    def se_band(self, x0: float) -> float | None:
        if self.sxx == 0:
            return None
        return self.residual_std * math.sqrt(1.0 / self.n + (x0 - self.x_mean) ** 2 / self.sxx)


@dataclass(frozen=True)
class CorrelationResult:
    """Per-learner (grade, sqrt reads) pairs plus the OLS fit."""

    pairs: tuple[tuple[Pseudonym, float, float], ...]
    fit: RegressionFit
    median_reads_high_performers: float | None


@dataclass(frozen=True)
class CompareResult:
    x_key: str
    y_key: str
    pairs: tuple[tuple[Pseudonym, float, float], ...]
    fit: RegressionFit


# -- per-learner accumulation -------------------------------------------


class _Activity:
    __slots__ = ("enrolled", "activated", "evaluated", "bests", "attempts",
                 "reads", "posts", "files", "videos")

    def __init__(self) -> None:
        self.enrolled = False
        self.activated = False
        self.evaluated = False
        self.bests: dict[str, int] = {}
        self.attempts = 0
        self.reads = 0
        self.posts = 0
        self.files: set[str] = set()
        self.videos: set[str] = set()


def _collect(view: CourseView, activating: frozenset[str]) -> dict[Pseudonym, _Activity]:
    profiles: dict[Pseudonym, _Activity] = {}
    for event in view.events:
        act = profiles.get(event.learner)
        if act is None:
            act = profiles[event.learner] = _Activity()
        verb = event.verb
        if verb in activating:
            act.activated = True
        if verb == QUIZ_ATTEMPT:
            act.attempts += 1
            score = event.get("score")
            if isinstance(score, int):
                best = act.bests.get(event.object)
                if best is None or score > best:
                    act.bests[event.object] = score
        elif verb == FORUM_READ:
            act.reads += 1
        elif verb == FORUM_POST:
            act.posts += 1
        elif verb == DOC_DOWNLOAD:
            act.files.add(event.object)
        elif verb == VIDEO_PLAY:
            act.videos.add(event.object)
        elif verb == ENROLL:
            act.enrolled = True
        elif verb == EVAL_SUBMIT:
            act.evaluated = True
    return profiles


def _classify(act: _Activity, quiz_ids: Sequence[str], threshold: int) -> str:
    if not act.activated:
        return REGISTRANT
    for quiz in quiz_ids:
        best = act.bests.get(quiz)
        if best is None or best < threshold:
            return ACTIVE
    if not act.evaluated:
        return COMPLETER
    return CERTIFIED


def participant_category(
    learner: Pseudonym,
    view: CourseView,
    activating_verbs: frozenset[str] = DEFAULT_ACTIVATING_VERBS,
) -> str:
    """Deepest participant level this enrolled learner reaches."""
    act = _collect(view, activating_verbs).get(learner)
    if act is None or not act.enrolled:
        raise ValueError(f"learner {learner!r} is not enrolled in {view.config.id!r}")
    return _classify(act, view.config.quiz_ids(), view.config.pass_threshold)


def funnel(view: CourseView, activating_verbs: frozenset[str] = DEFAULT_ACTIVATING_VERBS) -> Funnel:
    """Count enrolled learners at or above each participant level."""
    quiz_ids = view.config.quiz_ids()
    threshold = view.config.pass_threshold
    counts = {level: 0 for level in LEVELS}
    for act in _collect(view, activating_verbs).values():
        if not act.enrolled:
            continue
        level = _classify(act, quiz_ids, threshold)
        counts[REGISTRANT] += 1
        if level == REGISTRANT:
            continue
        counts[ACTIVE] += 1
        if level == ACTIVE:
            continue
        counts[COMPLETER] += 1
        if level == CERTIFIED:
            counts[CERTIFIED] += 1
    return Funnel(counts[REGISTRANT], counts[ACTIVE], counts[COMPLETER], counts[CERTIFIED])


def _rate(kept: int, base: int) -> Fraction | None:
    if base == 0:
        return None
    return 1 - Fraction(kept, base)


def dropout(f: Funnel) -> DropoutMatrix:
    """The five dropout definitions derived from one funnel."""
    return DropoutMatrix(
        cert_vs_reg=_rate(f.certified, f.registrants),
        cert_vs_active=_rate(f.certified, f.active),
        compl_vs_reg=_rate(f.completers, f.registrants),
        compl_vs_active=_rate(f.completers, f.active),
        active_vs_reg=_rate(f.active, f.registrants),
    )


def certified_ratio(f: Funnel) -> Fraction:
    if f.registrants == 0:
        raise ValueError("certified ratio undefined with zero registrants")
    return Fraction(f.certified, f.registrants)


def best_grade(attempts: Sequence[Event]) -> int:
    """Best-of-attempts grade for one quiz and one learner."""
    if not attempts:
        raise ValueError("no attempts")
    scores = []
    for event in attempts:
        if event.verb != QUIZ_ATTEMPT:
            raise ValueError(f"not a quiz attempt: {event.verb}")
        attempt = event.get("attempt")
        if not isinstance(attempt, int) or not 1 <= attempt <= MAX_QUIZ_ATTEMPTS:
            raise ValueError(f"attempt number {attempt!r} outside 1..{MAX_QUIZ_ATTEMPTS}")
        score = event.get("score")
        if not isinstance(score, int):
            raise ValueError("attempt carries no integer score")
        scores.append(score)
    return max(scores)


def video_timeline(view: CourseView, video: str) -> VideoTimeline:
    """Distinct-student pause/skip and replay counts per video second.

    A forward seek counts as a skip at its origin second; a backward
    seek counts as a replay at its landing second. Events whose
    positions fall outside the configured duration are ignored here
    (validate() reports them).
    """
    durations = view.config.video_durations()
    if video not in durations:
        raise ValueError(f"unknown video {video!r}")
    duration = durations[video]
    pause_skip: dict[int, set[Pseudonym]] = {}
    replay: dict[int, set[Pseudonym]] = {}
    for event in view.events:
        if event.object != video:
            continue
        if event.verb == VIDEO_PAUSE:
            pos = event.get("pos")
            if isinstance(pos, int) and 0 <= pos <= duration:
                pause_skip.setdefault(pos, set()).add(event.learner)
        elif event.verb == VIDEO_SEEK:
            src, dst = event.get("from"), event.get("to")
            if not isinstance(src, int) or not isinstance(dst, int):
                continue
            if not (0 <= src <= duration and 0 <= dst <= duration):
                continue
            if dst > src:
                pause_skip.setdefault(src, set()).add(event.learner)
            elif dst < src:
                replay.setdefault(dst, set()).add(event.learner)
    return VideoTimeline(
        video=video,
        duration=duration,
        pause_skip=tuple(len(pause_skip.get(s, ())) for s in range(duration + 1)),
        replay=tuple(len(replay.get(s, ())) for s in range(duration + 1)),
    )


def _day_of(ts: int) -> date:
    return date.fromordinal(ts // SECONDS_PER_DAY + _EPOCH_ORDINAL)


def forum_stats(view: CourseView) -> ForumStats:
    """Forum reading and posting aggregates.

    Days are UTC. Phase shares are fractions of all reads in the view
    that fall into the first two weeks after course start and the last
    two weeks before course end.
    """
    start = view.config.start
    end = view.config.end
    reads_by_day: dict[date, int] = {}
    posts_by_day: dict[date, int] = {}
    posts_per_student: dict[Pseudonym, int] = {}
    total_posts = 0
    instructor_posts = 0
    total_reads = 0
    early_reads = 0
    late_reads = 0
    for event in view.events:
        if event.verb == FORUM_READ:
            total_reads += 1
            day = _day_of(event.ts)
            reads_by_day[day] = reads_by_day.get(day, 0) + 1
            if start <= event.ts < start + TWO_WEEKS:
                early_reads += 1
            if end - TWO_WEEKS <= event.ts < end:
                late_reads += 1
        elif event.verb == FORUM_POST:
            total_posts += 1
            day = _day_of(event.ts)
            posts_by_day[day] = posts_by_day.get(day, 0) + 1
            if event.get("role") == INSTRUCTOR_ROLE:
                instructor_posts += 1
            else:
                posts_per_student[event.learner] = posts_per_student.get(event.learner, 0) + 1
    return ForumStats(
        reads_by_day=reads_by_day,
        posts_by_day=posts_by_day,
        posts_per_student=posts_per_student,
        total_posts=total_posts,
        instructor_posts=instructor_posts,
        instructor_share=Fraction(instructor_posts, total_posts) if total_posts else None,
        phase_shares=PhaseShares(
            first_two_weeks=Fraction(early_reads, total_reads) if total_reads else None,
            last_two_weeks=Fraction(late_reads, total_reads) if total_reads else None,
        ),
    )


def reads_by_week(stats: ForumStats, view: CourseView) -> dict[int, int]:
    """Aggregate daily reads into 7-day bins from course start (week 1)."""
    start_day = view.config.start // SECONDS_PER_DAY
    weeks: dict[int, int] = {}
    for day, count in stats.reads_by_day.items():
        week = (day.toordinal() - _EPOCH_ORDINAL - start_day) // 7 + 1
        weeks[week] = weeks.get(week, 0) + count
    return dict(sorted(weeks.items()))


def download_group_quiz_stats(view: CourseView, week: int) -> dict[str, GroupStats]:
    """First-attempt grades grouped by that week's file downloads.

    Takers are learners with an ``attempt=1`` event on at least one of
    the week's quizzes; each taker contributes the mean of their
    first-attempt scores over those quizzes (with one quiz per week
    that is just the score). Groups partition takers by how many of the
    week's files they downloaded: all, some, or none.
    """
    quizzes = sorted(q for q, w in view.config.quizzes if w == week)
    files = sorted(f for f, w in view.config.files if w == week)
    if not quizzes:
        raise ValueError(f"week {week} has no quiz configured")
    if not files:
        raise ValueError(f"week {week} has no files configured")
    quiz_set = set(quizzes)
    file_set = set(files)

    first_attempt: dict[tuple[Pseudonym, str], tuple[int, int]] = {}
    downloaded: dict[Pseudonym, set[str]] = {}
    for event in view.events:
        if event.verb == QUIZ_ATTEMPT and event.object in quiz_set and event.get("attempt") == 1:
            key = (event.learner, event.object)
            score = event.get("score")
            if isinstance(score, int):
                seen = first_attempt.get(key)
                if seen is None or event.ts < seen[0]:
                    first_attempt[key] = (event.ts, score)
        elif event.verb == DOC_DOWNLOAD and event.object in file_set:
            downloaded.setdefault(event.learner, set()).add(event.object)

    grades: dict[Pseudonym, list[int]] = {}
    for (learner, _), (_, score) in first_attempt.items():
        grades.setdefault(learner, []).append(score)

    groups: dict[str, list[float]] = {"all": [], "some": [], "none": []}
    empty: set[str] = set()
    for learner, scores in grades.items():
        coverage = len(downloaded.get(learner, empty) & file_set)
        if coverage == len(file_set):
            group = "all"
        elif coverage == 0:
            group = "none"
        else:
            group = "some"
        groups[group].append(sum(scores) / len(scores))

    def _stats(values: list[float]) -> GroupStats:
        if not values:
            return GroupStats(0, None, None)
        return GroupStats(len(values), sum(values) / len(values), float(statistics.median(values)))

    return {name: _stats(values) for name, values in groups.items()}


def fit_ols(points: Sequence[tuple[float, float]]) -> RegressionFit:
    """Least-squares line through (x, y) points with SE band parameters."""
    n = len(points)
    if n < 3:
        raise ValueError("need at least 3 points")
    x_mean = sum(x for x, _ in points) / n
    y_mean = sum(y for _, y in points) / n
    sxx = sum((x - x_mean) ** 2 for x, _ in points)
    syy = sum((y - y_mean) ** 2 for _, y in points)
    sxy = sum((x - x_mean) * (y - y_mean) for x, y in points)

    if sxx == 0:
        return RegressionFit(n, None, None, None, 0.0, x_mean, 0.0)
    slope = sxy / sxx
    intercept = y_mean - slope * x_mean
    pearson_r = sxy / math.sqrt(sxx * syy) if syy > 0 else None
    ssr = sum((y - (intercept + slope * x)) ** 2 for x, y in points)
    residual_std = math.sqrt(max(ssr, 0.0) / (n - 2))
    return RegressionFit(n, slope, intercept, pearson_r, residual_std, x_mean, sxx)


def _quiz_mean(act: _Activity, quiz_set: frozenset[str]) -> float | None:
    bests = [score for quiz, score in act.bests.items() if quiz in quiz_set]
    if not bests:
        return None
    return sum(bests) / len(bests)


def reads_vs_grade(view: CourseView) -> CorrelationResult:
    """Relate quiz performance to forum reading for active learners.

    For every active learner with at least one quiz attempt: x is the
    mean of best-of-attempt grades over the quizzes they attempted, y
    is the square root of their forum read count. Also reports the
    median raw read count among learners with x > 90.
    """
    quiz_set = frozenset(view.config.quiz_ids())
    threshold = view.config.pass_threshold
    pairs: list[tuple[Pseudonym, float, float]] = []
    high_reads: list[int] = []
    profiles = _collect(view, DEFAULT_ACTIVATING_VERBS)
    for learner in sorted(profiles):
        act = profiles[learner]
        if not act.enrolled or not act.activated:
            continue
        x = _quiz_mean(act, quiz_set)
        if x is None:
            continue
        pairs.append((learner, x, math.sqrt(act.reads)))
        if x > 90:
            high_reads.append(act.reads)
    if len(pairs) < 3:
        raise ValueError("need at least 3 active learners with quiz attempts")
    fit = fit_ols([(x, y) for _, x, y in pairs])
    median_high = float(statistics.median(high_reads)) if high_reads else None
    return CorrelationResult(tuple(pairs), fit, median_high)


def _indicator_value(act: _Activity, key: str, quiz_set: frozenset[str]) -> float | None:
    if key == "posts":
        return float(act.posts)
    if key == "reads":
        return float(act.reads)
    if key == "reads_sqrt":
        return math.sqrt(act.reads)
    if key == "downloads":
        return float(len(act.files))
    if key == "quiz_mean":
        return _quiz_mean(act, quiz_set)
    if key == "quiz_attempt_count":
        return float(act.attempts)
    if key == "videos_played":
        return float(len(act.videos))
    raise ValueError(f"unknown indicator key {key!r}")


def compare(view: CourseView, x_key: str, y_key: str) -> CompareResult:
    """Join two per-learner indicators over active learners and fit OLS.

    A learner contributes a pair when both indicators are defined for
    them; count-style indicators are always defined (possibly 0),
    ``quiz_mean`` requires at least one attempt on a configured quiz.
    """
    if x_key == y_key:
        raise ValueError("compare needs two distinct indicator keys")
    for key in (x_key, y_key):
        if key not in COMPARE_KEYS:
            raise ValueError(f"unknown indicator key {key!r}")
    quiz_set = frozenset(view.config.quiz_ids())
    pairs: list[tuple[Pseudonym, float, float]] = []
    profiles = _collect(view, DEFAULT_ACTIVATING_VERBS)
    for learner in sorted(profiles):
        act = profiles[learner]
        if not act.enrolled or not act.activated:
            continue
        x = _indicator_value(act, x_key, quiz_set)
        y = _indicator_value(act, y_key, quiz_set)
        if x is None or y is None:
            continue
        pairs.append((learner, x, y))
    if len(pairs) < 3:
        raise ValueError("fewer than 3 learners have both indicators")
    fit = fit_ols([(x, y) for _, x, y in pairs])
    return CompareResult(x_key, y_key, tuple(pairs), fit)
