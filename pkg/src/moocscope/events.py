"""Canonical event vocabulary and course configuration.

One Event is one learner action; a CourseConfig describes the calendar
and content the events refer to. Both are immutable values and safe to
share between threads. Semantic checks against a config live in
:func:`validate`; syntactic parsing lives in :mod:`moocscope.ingest`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, NewType

#: De-identified learner token. Nothing outside :mod:`moocscope.privacy`
#: may construct one from a raw identity.
Pseudonym = NewType("Pseudonym", str)

SECONDS_PER_DAY = 86400

REGISTER = "REGISTER"
ENROLL = "ENROLL"
UNENROLL = "UNENROLL"
VIDEO_PLAY = "VIDEO_PLAY"
VIDEO_PAUSE = "VIDEO_PAUSE"
VIDEO_SEEK = "VIDEO_SEEK"
VIDEO_COMPLETE = "VIDEO_COMPLETE"
FORUM_READ = "FORUM_READ"
FORUM_POST = "FORUM_POST"
DOC_DOWNLOAD = "DOC_DOWNLOAD"
QUIZ_ATTEMPT = "QUIZ_ATTEMPT"
EVAL_SUBMIT = "EVAL_SUBMIT"

#: Closed payload schema per verb: required key -> value type.
#: Keys outside the schema are tolerated by the parser (they may carry
#: PII and are handled by scrubbing) but flagged by validate().
PAYLOAD_SCHEMA: dict[str, dict[str, type]] = {
    REGISTER: {},
    ENROLL: {},
    UNENROLL: {},
    VIDEO_PLAY: {"pos": int},
    VIDEO_PAUSE: {"pos": int},
    VIDEO_SEEK: {"from": int, "to": int},
    VIDEO_COMPLETE: {},
    FORUM_READ: {},
    FORUM_POST: {"role": str},
    DOC_DOWNLOAD: {"week": int},
    QUIZ_ATTEMPT: {"attempt": int, "score": int},
    EVAL_SUBMIT: {},
}

VERBS = frozenset(PAYLOAD_SCHEMA)

#: Verbs whose object field must stay empty.
OBJECT_FREE_VERBS = frozenset({REGISTER, ENROLL, UNENROLL, EVAL_SUBMIT})

STUDENT_ROLE = "student"
INSTRUCTOR_ROLE = "instructor"
ROLES = frozenset({STUDENT_ROLE, INSTRUCTOR_ROLE})

MAX_QUIZ_ATTEMPTS = 5

#: Payload is stored as key-sorted pairs so events hash and compare
#: deterministically; this tuple is the dedup identity used by both
#: ingest and the store.
Payload = tuple[tuple[str, "int | str"], ...]


def payload_items(mapping: Mapping[str, int | str]) -> Payload:
    """Normalize a payload mapping into sorted immutable pairs."""
    return tuple(sorted(mapping.items()))


@dataclass(frozen=True, slots=True)
class Event:
    """One typed learner action.

    ``ts`` is Unix epoch seconds (UTC, second resolution). ``learner``
    is always a pseudonym by the time an Event exists; raw identities
    never reach this type.
    """

    ts: int
    learner: Pseudonym
    course: str
    verb: str
    object: str
    payload: Payload = ()

    def get(self, key: str, default: int | str | None = None) -> int | str | None:
        for k, v in self.payload:
            if k == key:
                return v
        return default

    @property
    def sort_key(self) -> tuple:
        """Total ordering key for tidied sequences."""
        return (self.ts, self.learner, self.verb, self.object, self.course, self.payload)


@dataclass(frozen=True)
class CourseConfig:
    """Course calendar and content inventory.

    ``start``/``end`` are epoch seconds at UTC midnight; the course
    period is the half-open interval [start, end). ``weeks`` counts
    content weeks; every quiz/video/file is pinned to one of them.
    """

    id: str
    start: int
    end: int
    weeks: int
    pass_threshold: int
    quizzes: tuple[tuple[str, int], ...] = ()
    videos: tuple[tuple[str, int, int], ...] = ()
    files: tuple[tuple[str, int], ...] = ()

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("course id must be non-empty")
        if self.start >= self.end:
            raise ValueError("course start must precede end")
        if not 0 < self.pass_threshold <= 100:
            raise ValueError("pass_threshold must be in (0, 100]")
        if self.weeks < 0:
            raise ValueError("weeks must be non-negative")
        for name, week in list(self.quizzes) + list(self.files):
            if not 1 <= week <= self.weeks:
                raise ValueError(f"week {week} of {name!r} outside 1..{self.weeks}")
        for name, week, duration in self.videos:
            if not 1 <= week <= self.weeks:
                raise ValueError(f"week {week} of {name!r} outside 1..{self.weeks}")
            if duration <= 0:
                raise ValueError(f"video {name!r} needs a positive duration")

    def quiz_ids(self) -> tuple[str, ...]:
        return tuple(q for q, _ in self.quizzes)

    def video_durations(self) -> dict[str, int]:
        return {v: d for v, _, d in self.videos}

    def file_weeks(self) -> dict[str, int]:
        return {f: w for f, w in self.files}

    def day_count(self) -> int:
        return (self.end - self.start) // SECONDS_PER_DAY


def validate(event: Event, config: CourseConfig) -> list[str]:
    """Check one event against the verb schemas and the course config.

    Returns every violation found; an empty list means the event is
    valid. Violations are data, not failures: callers decide what to do
    with flagged events. The config must cover the event's course.
    """
    if event.course != config.id:
        raise ValueError(f"config {config.id!r} does not cover course {event.course!r}")

    violations: list[str] = []
    schema = PAYLOAD_SCHEMA.get(event.verb)
    if schema is None:
        return [f"unknown verb {event.verb!r}"]

    payload = dict(event.payload)
    for key, expected in schema.items():
        if key not in payload:
            violations.append(f"missing payload key {key!r}")
        elif not isinstance(payload[key], expected):
            violations.append(f"payload key {key!r} must be {expected.__name__}")
    for key in payload:
        if key not in schema:
            violations.append(f"unexpected payload key {key!r}")

    if event.verb in OBJECT_FREE_VERBS:
        if event.object:
            violations.append("object must be empty")
    elif not event.object:
        violations.append("missing object id")

    def _int(key: str) -> int | None:
        value = payload.get(key)
        return value if isinstance(value, int) else None

    if event.verb in (VIDEO_PLAY, VIDEO_PAUSE, VIDEO_SEEK):
        duration = config.video_durations().get(event.object)
        if event.object and duration is None:
            violations.append("unknown object id")
        elif duration is not None:
            keys = ("pos",) if event.verb != VIDEO_SEEK else ("from", "to")
            for key in keys:
                value = _int(key)
                if value is not None and not 0 <= value <= duration:
                    violations.append(f"position out of range: {key}={value}")
        if event.verb == VIDEO_SEEK:
            src, dst = _int("from"), _int("to")
            if src is not None and dst is not None and src == dst:
                violations.append("seek must move: from equals to")
    elif event.verb == VIDEO_COMPLETE:
        if event.object and event.object not in config.video_durations():
            violations.append("unknown object id")
    elif event.verb == QUIZ_ATTEMPT:
        if event.object and event.object not in config.quiz_ids():
            violations.append("unknown object id")
        attempt = _int("attempt")
        if attempt is not None and attempt > MAX_QUIZ_ATTEMPTS:
            violations.append(f"attempt exceeds {MAX_QUIZ_ATTEMPTS}")
        if attempt is not None and attempt < 1:
            violations.append("attempt below 1")
        score = _int("score")
        if score is not None and not 0 <= score <= 100:
            violations.append("score out of range")
    elif event.verb == FORUM_POST:
        role = payload.get("role")
        if isinstance(role, str) and role not in ROLES:
            violations.append(f"unknown role {role!r}")
    elif event.verb == DOC_DOWNLOAD:
        week = _int("week")
        file_week = config.file_weeks().get(event.object)
        if event.object and file_week is None:
            violations.append("unknown object id")
        if week is not None:
            if week < 1:
                violations.append("week below 1")
            elif week > config.weeks:
                violations.append("week beyond course weeks")
            elif file_week is not None and week != file_week:
                violations.append("week does not match configured file week")

    return violations


def tidy_sort(events: Iterable[Event]) -> list[Event]:
    """Sort events into the canonical total order."""
    return sorted(events, key=lambda e: e.sort_key)
