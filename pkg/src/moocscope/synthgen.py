"""Deterministic synthetic course log generator.

A CourseProfile pins the aggregate statistics a generated log must
reproduce once ingested and analyzed: the participant funnel, forum
post/read totals and their weekly placement, per-week first-attempt
quiz statistics split by download group, video hotspot counts, and the
median read count of high performers. Targets are hit by construction,
not sampling: learners are assigned categories first, score multisets
are built to match the requested means and medians exactly, and read
events are laid into per-day quotas. The seed only shuffles identities
and jitters timestamps; no exact target depends on it, and the same
seed always yields a byte-identical log.

Profile file format: ``key = value`` lines, ``#`` comments, repeatable
keys for lists. Example::

    course = demo2014
    start = 2014-10-20
    end = 2014-12-31
    weeks = 2
    pass_threshold = 50
    seed = 7
    quiz = q1 week=1
    video = v1 week=1 duration=300
    file = f1 week=1
    funnel = 100 60 20 10
    posts_total = 50
    posts_instructor = 5
    reads_week = 1:200 2:100
    quiz_group = week=1 n_all=30 mean_all=80.7 median_all=85 n_none=10 median_none=71
    hotspot = v1 second=35 kind=pause_skip students=12
    high_grade_read_median = 21
    video_noise = 0
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from pathlib import Path

from .events import (
    DOC_DOWNLOAD,
    ENROLL,
    EVAL_SUBMIT,
    FORUM_POST,
    FORUM_READ,
    INSTRUCTOR_ROLE,
    QUIZ_ATTEMPT,
    REGISTER,
    SECONDS_PER_DAY,
    STUDENT_ROLE,
    UNENROLL,
    VIDEO_COMPLETE,
    VIDEO_PAUSE,
    VIDEO_PLAY,
    VIDEO_SEEK,
    CourseConfig,
)
from .indicators import Funnel
from .ingest import parse_date, serialize_raw


class ProfileError(ValueError):
    """Profile is malformed or its targets are infeasible."""


@dataclass(frozen=True)
class GroupTarget:
    """Per-week first-attempt statistics for the download groups."""

    week: int
    n_all: int
    median_all: int
    n_none: int
    median_none: int
    mean_all: float | None = None
    mean_none: float | None = None


@dataclass(frozen=True)
class Hotspot:
    video: str
    second: int
    kind: str  # pause_skip | replay
    students: int


@dataclass(frozen=True)
class CourseProfile:
    config: CourseConfig
    funnel: Funnel
    seed: int
    posts_total: int = 0
    posts_instructor: int = 0
    reads_week: dict[int, int] = field(default_factory=dict)
    quiz_groups: tuple[GroupTarget, ...] = ()
    hotspots: tuple[Hotspot, ...] = ()
    high_grade_read_median: int | None = None
    video_noise: int = 0


def bundled_profile_path(name: str) -> Path:
    """Path of a profile shipped with the package (e.g. ``gol2014``)."""
    return Path(__file__).parent / "profiles" / f"{name}.profile"


# -- profile parsing ------------------------------------------------------


def _attrs(tokens: list[str], spec: dict[str, type]) -> dict:
    out: dict = {}
    for token in tokens:
        key, sep, value = token.partition("=")
        if not sep or key not in spec:
            raise ProfileError(f"bad attribute {token!r}")
        out[key] = spec[key](value)
    return out


def parse_profile(text: str) -> CourseProfile:
    scalars: dict[str, str] = {}
    quizzes: list[tuple[str, int]] = []
    videos: list[tuple[str, int, int]] = []
    files: list[tuple[str, int]] = []
    groups: list[GroupTarget] = []
    hotspots: list[Hotspot] = []
    reads_week: dict[int, int] = {}

    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ProfileError(f"expected 'key = value': {line!r}")
        key, value = key.strip(), value.strip()
        tokens = value.split()
        if key == "quiz":
            attrs = _attrs(tokens[1:], {"week": int})
            quizzes.append((tokens[0], attrs["week"]))
        elif key == "video":
            attrs = _attrs(tokens[1:], {"week": int, "duration": int})
            videos.append((tokens[0], attrs["week"], attrs["duration"]))
        elif key == "file":
            attrs = _attrs(tokens[1:], {"week": int})
            files.append((tokens[0], attrs["week"]))
        elif key == "quiz_group":
            attrs = _attrs(tokens, {
                "week": int, "n_all": int, "n_none": int,
                "median_all": int, "median_none": int,
                "mean_all": float, "mean_none": float,
            })
            try:
                groups.append(GroupTarget(**attrs))
            except TypeError as exc:
                raise ProfileError(f"incomplete quiz_group: {value!r}") from exc
        elif key == "hotspot":
            attrs = _attrs(tokens[1:], {"second": int, "kind": str, "students": int})
            if attrs.get("kind") not in ("pause_skip", "replay"):
                raise ProfileError(f"hotspot kind must be pause_skip or replay: {value!r}")
            hotspots.append(Hotspot(tokens[0], attrs["second"], attrs["kind"], attrs["students"]))
        elif key == "reads_week":
            for token in tokens:
                week, sep2, count = token.partition(":")
                if not sep2:
                    raise ProfileError(f"reads_week entries are week:count, got {token!r}")
                reads_week[int(week)] = int(count)
        else:
            scalars[key] = value

    for required in ("course", "start", "end", "weeks", "pass_threshold", "funnel"):
        if required not in scalars:
            raise ProfileError(f"profile is missing {required!r}")

    try:
        config = CourseConfig(
            id=scalars["course"],
            start=parse_date(scalars["start"]),
            end=parse_date(scalars["end"]),
            weeks=int(scalars["weeks"]),
            pass_threshold=int(scalars["pass_threshold"]),
            quizzes=tuple(quizzes),
            videos=tuple(videos),
            files=tuple(files),
        )
        counts = [int(t) for t in scalars["funnel"].split()]
        if len(counts) != 4:
            raise ProfileError("funnel needs four counts: registrants active completers certified")
        funnel = Funnel(*counts)
    except ValueError as exc:
        raise ProfileError(str(exc)) from exc

    return CourseProfile(
        config=config,
        funnel=funnel,
        seed=int(scalars.get("seed", "0")),
        posts_total=int(scalars.get("posts_total", "0")),
        posts_instructor=int(scalars.get("posts_instructor", "0")),
        reads_week=reads_week,
        quiz_groups=tuple(groups),
        hotspots=tuple(hotspots),
        high_grade_read_median=(
            int(scalars["high_grade_read_median"]) if "high_grade_read_median" in scalars else None
        ),
        video_noise=int(scalars.get("video_noise", "0")),
    )


def load_profile(path: str | Path) -> CourseProfile:
    return parse_profile(Path(path).read_text(encoding="utf-8"))


# -- exact-target building blocks ----------------------------------------


def partition_total(total: int, weights: list[int]) -> list[int]:
    """Split ``total`` into integer parts proportional to ``weights``.

    Largest-remainder method with index tiebreak, so the split is
    deterministic and sums exactly to ``total``.
    """
    if total < 0:
        raise ValueError("total must be non-negative")
    if not weights or all(w == 0 for w in weights):
        raise ValueError("need at least one positive weight")
    whole = sum(weights)
    base = [total * w // whole for w in weights]
    remainder = total - sum(base)
    order = sorted(range(len(weights)), key=lambda i: (-(total * weights[i] % whole), i))
    for i in order[:remainder]:
        base[i] += 1
    return base


def build_scores(n: int, median: int, total: int) -> list[int]:
    """Integer scores in [0, 100] with this exact median and sum.

    Half the values sit at or below the median, half at or above, which
    pins the median regardless of later shuffling; a symmetric spread
    plus a greedy adjustment hits the sum exactly.
    """
    if n == 0:
        return []
    if not 0 <= median <= 100:
        raise ProfileError(f"median {median} outside 0..100")
    if n == 1:
        if total != median:
            raise ProfileError("single score cannot have different mean and median")
        return [median]

    half = (n - 1) // 2 if n % 2 else n // 2 - 1
    fixed = [median] if n % 2 else [median, median]
    cap = min(15, median, 100 - median)
    spread = [((i * 7) % cap) + 1 if cap else 0 for i in range(half)]
    lows = [median - d for d in spread]
    highs = [median + d for d in spread]

    delta = total - n * median
    if delta > 0:
        delta = _drain(highs, delta, limit=100, direction=1)
        delta = _drain(lows, delta, limit=median, direction=1)
    elif delta < 0:
        delta = -_drain(lows, -delta, limit=0, direction=-1)
        delta = -_drain(highs, -delta, limit=median, direction=-1)
    if delta:
        raise ProfileError(f"cannot reach sum {total} with n={n}, median={median}")
    return lows + fixed + highs


def _drain(values: list[int], amount: int, limit: int, direction: int) -> int:
    """Distribute ``amount`` one point at a time toward ``limit``."""
    while amount > 0:
        moved = False
        for i, value in enumerate(values):
            if amount == 0:
                break
            if (limit - value) * direction > 0:
                values[i] = value + direction
                amount -= 1
                moved = True
        if not moved:
            break
    return amount


def _median_counts(k: int, median: int) -> list[int]:
    """Read counts for k learners whose median is exactly ``median``."""
    if k == 0:
        return []
    half = (k - 1) // 2 if k % 2 else k // 2 - 1
    fixed = [median] if k % 2 else [median, median]
    lows = [max(0, median - 2 * (half - i)) for i in range(half)]
    highs = [median + 2 * (i + 1) for i in range(half)]
    return lows + fixed + highs


# -- generation -----------------------------------------------------------


class _Emitter:
    """Accumulates raw lines, guaranteeing event-tuple uniqueness.

    Every event of one learner on one day gets a fresh second, so no
    two generated events ever collapse under the tidying dedup key.
    """

    def __init__(self, config: CourseConfig, rng: random.Random):
        self.config = config
        self.rng = rng
        self.lines: list[str] = []
        self._base: dict[str, int] = {}
        self._seq: dict[tuple[str, int], int] = {}

    def emit(self, user: str, day: int, verb: str, obj: str = "", **payload) -> None:
        day = max(0, min(day, self.config.day_count() - 1))
        base = self._base.get(user)
        if base is None:
            base = self.rng.randrange(0, 79200)
            self._base[user] = base
        seq = self._seq.get((user, day), 0)
        self._seq[(user, day)] = seq + 1
        second = base + seq
        if second >= SECONDS_PER_DAY:
            raise ProfileError("too many events for one learner on one day")
        ts = self.config.start + day * SECONDS_PER_DAY + second
        self.lines.append(serialize_raw(ts, user, self.config.id, verb, obj, payload))


def _check_feasible(profile: CourseProfile) -> None:
    config = profile.config
    f = profile.funnel
    days = config.day_count()
    if f.registrants == 0:
        if (profile.posts_total or profile.reads_week or profile.quiz_groups
                or profile.hotspots or profile.video_noise):
            raise ProfileError("an empty course cannot carry activity targets")
        return
    if profile.posts_instructor > profile.posts_total:
        raise ProfileError("instructor posts exceed total posts")
    if profile.posts_total - profile.posts_instructor > 0 and f.active == 0:
        raise ProfileError("student posts need active learners")
    quiz_weeks = {w for _, w in config.quizzes}
    file_weeks = {w for _, w in config.files}
    quizzes_per_week: dict[int, int] = {}
    for _, w in config.quizzes:
        quizzes_per_week[w] = quizzes_per_week.get(w, 0) + 1
    seen_weeks = set()
    max_takers = f.completers
    for group in profile.quiz_groups:
        if group.week in seen_weeks:
            raise ProfileError(f"duplicate quiz_group for week {group.week}")
        seen_weeks.add(group.week)
        if group.week not in quiz_weeks or group.week not in file_weeks:
            raise ProfileError(f"quiz_group week {group.week} needs a quiz and files")
        if quizzes_per_week[group.week] != 1:
            raise ProfileError(f"quiz_group week {group.week} must have exactly one quiz")
        takers = group.n_all + group.n_none
        if min(group.n_all, group.n_none) < 0:
            raise ProfileError("group sizes must be non-negative")
        if takers > f.active:
            raise ProfileError(f"week {group.week} takers exceed active learners")
        if takers < f.completers:
            raise ProfileError(
                f"week {group.week} takers cannot be fewer than completers "
                "(every completer attempts every quiz)"
            )
        max_takers = max(max_takers, takers)
    if max_takers > f.completers and not (quiz_weeks - seen_weeks):
        # extra takers would otherwise pass every quiz and inflate completers
        raise ProfileError("takers beyond completers need a quiz week without group targets")
    durations = config.video_durations()
    seen_spots = set()
    for spot in profile.hotspots:
        if spot.video not in durations:
            raise ProfileError(f"hotspot on unknown video {spot.video!r}")
        key = (spot.video, spot.second, spot.kind)
        if key in seen_spots:
            raise ProfileError(f"duplicate hotspot {key}")
        seen_spots.add(key)
        limit = durations[spot.video] if spot.kind == "pause_skip" else durations[spot.video] - 1
        if not 0 <= spot.second <= limit:
            raise ProfileError(f"hotspot second {spot.second} out of range for {spot.video}")
        if spot.students > f.active:
            raise ProfileError("hotspot students exceed active learners")
    for week, count in profile.reads_week.items():
        if week < 1 or count < 0:
            raise ProfileError(f"bad reads_week entry {week}:{count}")
        if (week - 1) * 7 >= days:
            raise ProfileError(f"reads week {week} starts after the course ends")
    if profile.high_grade_read_median is not None:
        if profile.high_grade_read_median < 0:
            raise ProfileError("read median must be non-negative")
        if f.completers == 0 or not config.quizzes:
            raise ProfileError("high-grade read median needs completers and quizzes")
    if profile.video_noise:
        if f.active == 0 or not config.videos:
            raise ProfileError("video noise needs active learners and videos")
    if f.completers > 0 and config.quizzes and f.active == 0:
        raise ProfileError("completers need to be active")


def generate(profile: CourseProfile) -> str:
    """Construct the raw log for one profile; see the module docstring."""
    _check_feasible(profile)
    config = profile.config
    f = profile.funnel
    if f.registrants == 0:
        return ""

    rng = random.Random(profile.seed)
    days = config.day_count()
    ids = [f"u{i:05d}" for i in range(1, f.registrants + 1)]
    rng.shuffle(ids)
    certified = ids[: f.certified]
    completers = ids[: f.completers]
    actives = ids[: f.active]
    instructor = "staff-instructor"
    em = _Emitter(config, rng)
    threads = [f"t{k:02d}" for k in range(1, max(config.weeks, 1) * 3 + 1)]

    # enrollment: everyone registers an account, then enrolls
    enroll_span = min(14, days)
    for i, user in enumerate(ids):
        day = i % enroll_span
        em.emit(user, day, REGISTER)
        em.emit(user, day, ENROLL)
    # a few lurkers formally quit mid-course; indicators ignore this
    for i, user in enumerate(ids[f.active:]):
        if i % 50 == 0 and days > 21:
            em.emit(user, 21, UNENROLL)

    bests = _emit_quizzes(profile, em, rng, completers, actives)
    _emit_videos(profile, em, rng, completers, actives)
    _emit_posts(profile, em, rng, actives, instructor, threads, days)
    _emit_reads(profile, em, ids, bests, threads, days)

    for i, user in enumerate(certified):
        em.emit(user, days - 1 - (i % 7), EVAL_SUBMIT)

    _emit_noise(profile, em, actives, days)

    return "".join(line + "\n" for line in em.lines)


def generate_to_file(profile: CourseProfile, path: str | Path) -> int:
    """Write the generated log; returns the number of lines."""
    text = generate(profile)
    Path(path).write_text(text, encoding="utf-8")
    return text.count("\n")


def _ace_cohort(profile: CourseProfile, completers: list[str]) -> list[str]:
    """Completers steered above grade 90 so the high-performer set is
    never empty when a read-median target is configured."""
    if profile.high_grade_read_median is None:
        return []
    return completers[: min(9, len(completers))]


def _emit_quizzes(
    profile: CourseProfile,
    em: _Emitter,
    rng: random.Random,
    completers: list[str],
    actives: list[str],
) -> dict[str, dict[str, int]]:
    """Emit attempts, retakes and group downloads; returns best grades."""
    config = profile.config
    threshold = config.pass_threshold
    groups_by_week = {g.week: g for g in profile.quiz_groups}
    aces = _ace_cohort(profile, completers)
    bests: dict[str, dict[str, int]] = {}

    def attempt(user: str, day: int, quiz: str, number: int, score: int) -> None:
        em.emit(user, day, QUIZ_ATTEMPT, quiz, attempt=number, score=score)
        per_quiz = bests.setdefault(user, {})
        if score > per_quiz.get(quiz, -1):
            per_quiz[quiz] = score

    weeks: dict[int, list[str]] = {}
    for quiz, week in config.quizzes:
        weeks.setdefault(week, []).append(quiz)

    for week in sorted(weeks):
        quiz_day = (week - 1) * 7 + rng.randint(3, 6)
        week_files = sorted(name for name, w in config.files if w == week)
        for quiz in sorted(weeks[week]):
            group = groups_by_week.get(week)
            if group is not None:
                _emit_group_week(
                    profile, em, rng, group, quiz, quiz_day, week_files,
                    completers, actives, aces, attempt,
                )
            else:
                for i, user in enumerate(completers):
                    if user in aces:
                        score = 94 + (i + week) % 6
                    else:
                        score = threshold + (i * 7 + week * 3) % (101 - threshold)
                    attempt(user, quiz_day, quiz, 1, score)
                    for name in week_files:
                        if i % 2 == 0:
                            em.emit(user, max(0, quiz_day - 1), DOC_DOWNLOAD, name,
                                    week=week)
    return bests


def _emit_group_week(
    profile: CourseProfile,
    em: _Emitter,
    rng: random.Random,
    group: GroupTarget,
    quiz: str,
    quiz_day: int,
    week_files: list[str],
    completers: list[str],
    actives: list[str],
    aces: list[str],
    attempt,
) -> None:
    """One week with download-group targets: construct both groups."""
    config = profile.config
    threshold = config.pass_threshold
    takers_needed = group.n_all + group.n_none
    extras = actives[len(completers): takers_needed]
    takers = completers + extras

    def target_sum(n: int, median: int, mean: float | None) -> int:
        return round(n * mean) if mean is not None else n * median

    scores_all = build_scores(group.n_all, group.median_all,
                              target_sum(group.n_all, group.median_all, group.mean_all))
    scores_none = build_scores(group.n_none, group.median_none,
                               target_sum(group.n_none, group.median_none, group.mean_none))

    ace_members = [u for u in aces if u in takers][: group.n_all]
    pool = [u for u in takers if u not in ace_members]
    rng.shuffle(pool)
    all_group = ace_members + pool[: group.n_all - len(ace_members)]
    none_group = pool[group.n_all - len(ace_members):]

    # aces take the top of the multiset so their grade mean stays high
    ranked = sorted(scores_all, reverse=True)
    ace_scores = ranked[: len(ace_members)]
    rest = ranked[len(ace_members):]
    rng.shuffle(rest)
    rng.shuffle(scores_none)

    completer_set = set(completers)
    for members, scores in ((all_group, ace_scores + rest), (none_group, scores_none)):
        download = members is all_group
        for i, user in enumerate(members):
            score = scores[i]
            attempt(user, quiz_day, quiz, 1, score)
            if download:
                for name in week_files:
                    em.emit(user, max(0, quiz_day - 2), DOC_DOWNLOAD, name, week=group.week)
            if score < threshold:
                # completers must end up passing; some others retry too
                if user in completer_set:
                    retry = threshold + (i * 13) % max(1, min(90, 101 - threshold) - threshold)
                    attempt(user, quiz_day, quiz, 2, retry)
                elif i % 2 == 0:
                    retry = max(0, min(89, score + 5 + (i % 17)))
                    attempt(user, quiz_day, quiz, 2, retry)


def _emit_videos(
    profile: CourseProfile,
    em: _Emitter,
    rng: random.Random,
    completers: list[str],
    actives: list[str],
) -> None:
    config = profile.config
    days = config.day_count()
    durations = config.video_durations()
    if not config.videos:
        return

    # completers follow the weekly videos; this also re-activates them
    for video, week, _ in config.videos:
        day = (week - 1) * 7 + 1
        if day >= days:
            continue
        for i, user in enumerate(completers):
            if i % 2 == 0:
                em.emit(user, day, VIDEO_PLAY, video, pos=0)
                if i % 4 == 0:
                    em.emit(user, day, VIDEO_COMPLETE, video)

    # every active learner beyond the quiz takers watches something
    takers = {g.n_all + g.n_none for g in profile.quiz_groups}
    watched_from = max(takers) if takers else len(completers)
    video_ids = [v for v, _, _ in config.videos]
    for i, user in enumerate(actives[watched_from:]):
        video = video_ids[i % len(video_ids)]
        em.emit(user, (i * 3) % days, VIDEO_PLAY, video, pos=0)

    for idx, spot in enumerate(profile.hotspots):
        duration = durations[spot.video]
        week = next(w for v, w, _ in config.videos if v == spot.video)
        day = min(days - 1, (week - 1) * 7 + rng.randint(0, 6))
        start = (idx * 37) % max(1, len(actives))
        members = [actives[(start + j) % len(actives)] for j in range(spot.students)]
        for j, user in enumerate(members):
            em.emit(user, day, VIDEO_PLAY, spot.video, pos=0)
            if spot.kind == "replay":
                origin = min(duration, spot.second + 10 + j % 45)
                em.emit(user, day, VIDEO_SEEK, spot.video,
                        **{"from": origin, "to": spot.second})
            elif spot.second < duration and j % 2 == 0:
                target = min(duration, spot.second + 15 + j % 30)
                em.emit(user, day, VIDEO_SEEK, spot.video,
                        **{"from": spot.second, "to": target})
            else:
                em.emit(user, day, VIDEO_PAUSE, spot.video, pos=spot.second)


def _emit_posts(
    profile: CourseProfile,
    em: _Emitter,
    rng: random.Random,
    actives: list[str],
    instructor: str,
    threads: list[str],
    days: int,
) -> None:
    student_posts = profile.posts_total - profile.posts_instructor
    day_weights = [8 if d < 7 else 5 if d < 14 else 2 if d < 28 else 1 for d in range(days)]
    thread_cycle = 0

    def spread(total: int, author_of) -> None:
        nonlocal thread_cycle
        if total == 0:
            return
        per_day = partition_total(total, day_weights)
        counter = 0
        for day, count in enumerate(per_day):
            for _ in range(count):
                user, role = author_of(counter)
                em.emit(user, day, FORUM_POST, threads[thread_cycle % len(threads)], role=role)
                thread_cycle += 1
                counter += 1

    if student_posts:
        # heavy-tailed split: learners early in the shuffled order post more
        weights = [len(actives) - i for i in range(len(actives))]
        budgets = partition_total(student_posts, weights)
        authors = [user for user, n in zip(actives, budgets) for _ in range(n)]
        spread(student_posts, lambda c: (authors[c], STUDENT_ROLE))
    spread(profile.posts_instructor, lambda c: (instructor, INSTRUCTOR_ROLE))


def _emit_reads(
    profile: CourseProfile,
    em: _Emitter,
    ids: list[str],
    bests: dict[str, dict[str, int]],
    threads: list[str],
    days: int,
) -> None:
    total = sum(profile.reads_week.values())
    if total == 0:
        return

    # per-day quotas: front-loaded inside each week, exact per week
    slots: list[int] = []
    for week in sorted(profile.reads_week):
        count = profile.reads_week[week]
        first_day = (week - 1) * 7
        span = min(7, days - first_day)
        weights = [3, 2, 2, 1, 1, 1, 1][:span]
        for offset, day_count in enumerate(partition_total(count, weights)):
            slots.extend([first_day + offset] * day_count)

    # high performers get exact read counts so their median is pinned
    high: list[str] = []
    if profile.high_grade_read_median is not None:
        for user, per_quiz in bests.items():
            if per_quiz and sum(per_quiz.values()) / len(per_quiz) > 90:
                high.append(user)
        if not high:
            raise ProfileError("no learner ended above grade 90; cannot pin read median")
    counts = _median_counts(len(high), profile.high_grade_read_median or 0)
    if sum(counts) > total:
        raise ProfileError("not enough reads to serve the high-performer median")

    assigned: dict[int, str] = {}
    stride = max(1, len(high))
    for j, (user, count) in enumerate(zip(high, counts)):
        position = j
        for _ in range(count):
            while position in assigned:
                position += 1
            if position >= len(slots):
                raise ProfileError("read quota exhausted while placing high performers")
            assigned[position] = user
            position += stride

    high_set = set(high)
    others = [u for u in ids if u not in high_set]
    if not others and len(assigned) < len(slots):
        raise ProfileError("no learners left to absorb remaining reads")
    cursor = 0
    for position, day in enumerate(slots):
        user = assigned.get(position)
        if user is None:
            user = others[cursor % len(others)]
            cursor += 1
        em.emit(user, day, FORUM_READ, threads[position % len(threads)])


def _emit_noise(profile: CourseProfile, em: _Emitter, actives: list[str], days: int) -> None:
    """Pad the log with pause events at untargeted video seconds."""
    if not profile.video_noise:
        return
    config = profile.config
    reserved: dict[str, set[int]] = {}
    for spot in profile.hotspots:
        if spot.kind == "pause_skip":
            reserved.setdefault(spot.video, set()).add(spot.second)
    videos = [(v, d) for v, _, d in config.videos
              if d + 1 > len(reserved.get(v, ()))]
    if not videos:
        raise ProfileError("video noise needs a video with untargeted seconds")
    for i in range(profile.video_noise):
        video, duration = videos[i % len(videos)]
        second = (i * 13) % (duration + 1)
        taken = reserved.get(video, ())
        while second in taken:
            second = (second + 1) % (duration + 1)
        user = actives[i % len(actives)]
        em.emit(user, (i * 5) % days, VIDEO_PAUSE, video, pos=second)
