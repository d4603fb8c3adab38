"""Brute-force oracles and random instance builders for the oracle suites.

Everything here recomputes indicator results the slow, obvious way:
per-learner event lists, nested loops, one definition inlined per
function. None of it shares code paths with the implementations it
checks.
"""

from __future__ import annotations

import random
from datetime import date, datetime, timezone
from fractions import Fraction

from moocscope.events import CourseConfig, Event, Pseudonym, tidy_sort
from moocscope.store import CourseView

START = 1_413_158_400  # 2014-10-13T00:00:00Z

ACTIVATING = ("VIDEO_PLAY", "FORUM_POST", "QUIZ_ATTEMPT")


def learner_events(view: CourseView, learner) -> list[Event]:
    return [e for e in view.events if e.learner == learner]


def all_learners(view: CourseView) -> list:
    seen = []
    for event in view.events:
        if event.learner not in seen:
            seen.append(event.learner)
    return sorted(seen)


# -- random instances ------------------------------------------------------


def random_view(rng: random.Random, max_learners: int = 20) -> CourseView:
    """A small random course: messy but parser-shaped events."""
    weeks = rng.randint(1, 4)
    quizzes = tuple((f"q{w}", w) for w in range(1, weeks + 1) if rng.random() < 0.8)
    videos = tuple((f"v{i}", rng.randint(1, weeks), rng.randint(5, 40)) for i in range(rng.randint(1, 3)))
    files = tuple(
        (f"f{w}-{j}", w)
        for w in range(1, weeks + 1)
        for j in range(rng.randint(0, 2))
    )
    days = weeks * 7 + rng.randint(1, 14)
    config = CourseConfig(
        id="course",
        start=START,
        end=START + days * 86400,
        weeks=weeks,
        pass_threshold=rng.choice([50, 75]),
        quizzes=quizzes,
        videos=videos,
        files=files,
    )

    learners = [Pseudonym(f"learner{i:02d}") for i in range(rng.randint(1, max_learners))]
    events: list[Event] = []

    def stamp() -> int:
        return config.start + rng.randint(-86400, (days + 1) * 86400)

    for learner in learners:
        if rng.random() < 0.9:
            events.append(Event(stamp(), learner, "course", "ENROLL", ""))
        for _ in range(rng.randint(0, 12)):
            events.append(_random_event(rng, config, learner, stamp()))

    uniq = sorted(set(events), key=lambda e: e.sort_key)
    return CourseView(config=config, events=tuple(uniq), built_at=0)


def _random_event(rng: random.Random, config: CourseConfig, learner, ts: int) -> Event:
    verb = rng.choice(
        ["VIDEO_PLAY", "VIDEO_PAUSE", "VIDEO_SEEK", "VIDEO_COMPLETE",
         "FORUM_READ", "FORUM_POST", "DOC_DOWNLOAD", "QUIZ_ATTEMPT",
         "EVAL_SUBMIT", "REGISTER", "UNENROLL"]
    )
    if verb in ("EVAL_SUBMIT", "REGISTER", "UNENROLL"):
        return Event(ts, learner, "course", verb, "")
    if verb.startswith("VIDEO"):
        video, _, duration = config.videos[rng.randrange(len(config.videos))]
        if rng.random() < 0.1:
            video = "ghost-video"
        if verb == "VIDEO_SEEK":
            src = rng.randint(0, duration)
            dst = rng.randint(0, duration)
            if src == dst:
                dst = (dst + 1) % (duration + 1)
            return Event(ts, learner, "course", verb, video, (("from", src), ("to", dst)))
        if verb == "VIDEO_COMPLETE":
            return Event(ts, learner, "course", verb, video)
        return Event(ts, learner, "course", verb, video, (("pos", rng.randint(0, duration)),))
    if verb == "FORUM_READ":
        return Event(ts, learner, "course", verb, f"t{rng.randint(1, 4)}")
    if verb == "FORUM_POST":
        role = "instructor" if rng.random() < 0.15 else "student"
        return Event(ts, learner, "course", verb, f"t{rng.randint(1, 4)}", (("role", role),))
    if verb == "DOC_DOWNLOAD":
        if config.files and rng.random() < 0.9:
            name, week = config.files[rng.randrange(len(config.files))]
        else:
            name, week = "ghost-file", rng.randint(1, config.weeks)
        return Event(ts, learner, "course", verb, name, (("week", week),))
    # QUIZ_ATTEMPT
    if config.quizzes and rng.random() < 0.9:
        quiz = config.quizzes[rng.randrange(len(config.quizzes))][0]
    else:
        quiz = "ghost-quiz"
    return Event(
        ts, learner, "course", verb, quiz,
        (("attempt", rng.randint(1, 5)), ("score", rng.randint(0, 100))),
    )


# -- brute-force recomputations -------------------------------------------


def brute_category(events: list[Event], config: CourseConfig) -> str | None:
    if not any(e.verb == "ENROLL" for e in events):
        return None
    if not any(e.verb in ACTIVATING for e in events):
        return "registrant"
    for quiz, _ in config.quizzes:
        scores = [
            e.get("score")
            for e in events
            if e.verb == "QUIZ_ATTEMPT" and e.object == quiz and isinstance(e.get("score"), int)
        ]
        if not scores or max(scores) < config.pass_threshold:
            return "active"
    if any(e.verb == "EVAL_SUBMIT" for e in events):
        return "certified"
    return "completer"


def brute_funnel(view: CourseView) -> tuple[int, int, int, int]:
    order = {"registrant": 1, "active": 2, "completer": 3, "certified": 4}
    levels = [0, 0, 0, 0]
    for learner in all_learners(view):
        category = brute_category(learner_events(view, learner), view.config)
        if category is None:
            continue
        depth = order[category]
        for i in range(depth):
            levels[i] += 1
    return tuple(levels)


def brute_timeline(view: CourseView, video: str) -> tuple[list[int], list[int]]:
    duration = dict((v, d) for v, _, d in view.config.videos)[video]
    pause_skip = []
    replay = []
    for s in range(duration + 1):
        pausers = set()
        repliers = set()
        for e in view.events:
            if e.object != video:
                continue
            if e.verb == "VIDEO_PAUSE" and e.get("pos") == s:
                pausers.add(e.learner)
            if e.verb == "VIDEO_SEEK":
                src, dst = e.get("from"), e.get("to")
                if not isinstance(src, int) or not isinstance(dst, int):
                    continue
                if src < 0 or dst < 0 or src > duration or dst > duration:
                    continue
                if src == s and dst > src:
                    pausers.add(e.learner)
                if dst == s and dst < src:
                    repliers.add(e.learner)
        pause_skip.append(len(pausers))
        replay.append(len(repliers))
    return pause_skip, replay


def _utc_day(ts: int) -> date:
    return datetime.fromtimestamp(ts, tz=timezone.utc).date()


def brute_forum(view: CourseView) -> dict:
    reads = [e for e in view.events if e.verb == "FORUM_READ"]
    posts = [e for e in view.events if e.verb == "FORUM_POST"]
    reads_by_day: dict[date, int] = {}
    for e in reads:
        reads_by_day[_utc_day(e.ts)] = reads_by_day.get(_utc_day(e.ts), 0) + 1
    posts_by_day: dict[date, int] = {}
    for e in posts:
        posts_by_day[_utc_day(e.ts)] = posts_by_day.get(_utc_day(e.ts), 0) + 1
    instructor = sum(1 for e in posts if e.get("role") == "instructor")
    per_student: dict = {}
    for e in posts:
        if e.get("role") != "instructor":
            per_student[e.learner] = per_student.get(e.learner, 0) + 1
    start, end = view.config.start, view.config.end
    early = sum(1 for e in reads if start <= e.ts < start + 14 * 86400)
    late = sum(1 for e in reads if end - 14 * 86400 <= e.ts < end)
    return {
        "reads_by_day": reads_by_day,
        "posts_by_day": posts_by_day,
        "posts_per_student": per_student,
        "total_posts": len(posts),
        "instructor_posts": instructor,
        "instructor_share": Fraction(instructor, len(posts)) if posts else None,
        "first": Fraction(early, len(reads)) if reads else None,
        "last": Fraction(late, len(reads)) if reads else None,
    }


def brute_download_groups(view: CourseView, week: int) -> dict:
    quizzes = [q for q, w in view.config.quizzes if w == week]
    files = [f for f, w in view.config.files if w == week]
    values = {"all": [], "some": [], "none": []}
    for learner in all_learners(view):
        events = learner_events(view, learner)
        scores = []
        for quiz in quizzes:
            best_ts, score = None, None
            for e in events:
                if (e.verb == "QUIZ_ATTEMPT" and e.object == quiz and e.get("attempt") == 1
                        and isinstance(e.get("score"), int)):
                    if best_ts is None or e.ts < best_ts:
                        best_ts, score = e.ts, e.get("score")
            if score is not None:
                scores.append(score)
        if not scores:
            continue
        got = {e.object for e in events if e.verb == "DOC_DOWNLOAD" and e.object in files}
        if len(got) == len(files):
            group = "all"
        elif not got:
            group = "none"
        else:
            group = "some"
        values[group].append(sum(scores) / len(scores))

    def summarize(vals):
        if not vals:
            return (0, None, None)
        ordered = sorted(vals)
        k = len(ordered)
        median = ordered[k // 2] if k % 2 else (ordered[k // 2 - 1] + ordered[k // 2]) / 2
        return (k, sum(ordered) / k, float(median))

    return {name: summarize(vals) for name, vals in values.items()}


def brute_indicator(events: list[Event], key: str, config: CourseConfig) -> float | None:
    import math

    if key == "posts":
        return float(sum(1 for e in events if e.verb == "FORUM_POST"))
    if key == "reads":
        return float(sum(1 for e in events if e.verb == "FORUM_READ"))
    if key == "reads_sqrt":
        return math.sqrt(sum(1 for e in events if e.verb == "FORUM_READ"))
    if key == "downloads":
        return float(len({e.object for e in events if e.verb == "DOC_DOWNLOAD"}))
    if key == "quiz_attempt_count":
        return float(sum(1 for e in events if e.verb == "QUIZ_ATTEMPT"))
    if key == "videos_played":
        return float(len({e.object for e in events if e.verb == "VIDEO_PLAY"}))
    if key == "quiz_mean":
        bests = []
        for quiz, _ in config.quizzes:
            scores = [
                e.get("score")
                for e in events
                if e.verb == "QUIZ_ATTEMPT" and e.object == quiz and isinstance(e.get("score"), int)
            ]
            if scores:
                bests.append(max(scores))
        if not bests:
            return None
        return sum(bests) / len(bests)
    raise AssertionError(key)


def brute_compare_pairs(view: CourseView, x_key: str, y_key: str) -> list[tuple]:
    pairs = []
    for learner in all_learners(view):
        events = learner_events(view, learner)
        if brute_category(events, view.config) in (None, "registrant"):
            continue
        x = brute_indicator(events, x_key, view.config)
        y = brute_indicator(events, y_key, view.config)
        if x is None or y is None:
            continue
        pairs.append((learner, x, y))
    return pairs


def brute_schema_ok(event: Event, config: CourseConfig) -> bool:
    """Closed-schema acceptance: the dumb enumeration of every rule."""
    schemas = {
        "REGISTER": (), "ENROLL": (), "UNENROLL": (), "EVAL_SUBMIT": (),
        "VIDEO_PLAY": ("pos",), "VIDEO_PAUSE": ("pos",),
        "VIDEO_SEEK": ("from", "to"), "VIDEO_COMPLETE": (),
        "FORUM_READ": (), "FORUM_POST": ("role",),
        "DOC_DOWNLOAD": ("week",), "QUIZ_ATTEMPT": ("attempt", "score"),
    }
    if event.verb not in schemas:
        return False
    payload = dict(event.payload)
    if sorted(payload) != sorted(schemas[event.verb]):
        return False
    if event.verb in ("REGISTER", "ENROLL", "UNENROLL", "EVAL_SUBMIT"):
        if event.object != "":
            return False
    elif event.object == "":
        return False
    durations = {v: d for v, _, d in config.videos}
    if event.verb in ("VIDEO_PLAY", "VIDEO_PAUSE"):
        if event.object not in durations:
            return False
        pos = payload["pos"]
        if not isinstance(pos, int) or not 0 <= pos <= durations[event.object]:
            return False
    if event.verb == "VIDEO_SEEK":
        if event.object not in durations:
            return False
        src, dst = payload["from"], payload["to"]
        for value in (src, dst):
            if not isinstance(value, int) or not 0 <= value <= durations[event.object]:
                return False
        if src == dst:
            return False
    if event.verb == "VIDEO_COMPLETE" and event.object not in durations:
        return False
    if event.verb == "QUIZ_ATTEMPT":
        if event.object not in [q for q, _ in config.quizzes]:
            return False
        if not isinstance(payload["attempt"], int) or not 1 <= payload["attempt"] <= 5:
            return False
        if not isinstance(payload["score"], int) or not 0 <= payload["score"] <= 100:
            return False
    if event.verb == "FORUM_POST" and payload["role"] not in ("student", "instructor"):
        return False
    if event.verb == "DOC_DOWNLOAD":
        file_weeks = {f: w for f, w in config.files}
        if event.object not in file_weeks:
            return False
        week = payload["week"]
        if not isinstance(week, int) or week != file_weeks[event.object]:
            return False
    return True


def make_view(config: CourseConfig, events: list[Event]) -> CourseView:
    return CourseView(config=config, events=tuple(tidy_sort(events)), built_at=0)
