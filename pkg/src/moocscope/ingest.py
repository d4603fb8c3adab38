"""Raw log parsing and tidying.

Line grammar, six pipe-delimited fields:

    ts|user|course|verb|object|payload

``ts`` must be UTC ``YYYY-MM-DDThh:mm:ssZ``; anything else quarantines.
``payload`` is ``;``-separated ``key=value`` pairs (may be empty). The
characters ``| ; = %`` and newlines never appear literally inside a
field; values needing them are percent-encoded. Tidying sorts events
into the canonical total order and collapses duplicates keyed on the
full event tuple, the same identity the store dedups on.
"""

from __future__ import annotations

import calendar
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable
from urllib.parse import quote, unquote

from .events import (
    OBJECT_FREE_VERBS,
    PAYLOAD_SCHEMA,
    SECONDS_PER_DAY,
    VERBS,
    Event,
    Pseudonym,
    tidy_sort,
)
from .privacy import is_token, pseudonymize, scrub

FIELD_COUNT = 6

_TS_RE = re.compile(r"\A(\d{4})-(\d{2})-(\d{2})T(\d{2}):(\d{2}):(\d{2})Z\Z")
_DATE_RE = re.compile(r"\A(\d{4})-(\d{2})-(\d{2})\Z")
_INT_RE = re.compile(r"\A-?\d+\Z")

_EPOCH_ORDINAL = 719163  # date(1970, 1, 1).toordinal()

# Midnight epoch per calendar day; log files cluster on few days, so
# this keeps the per-line cost at a regex match plus dict lookups.
_midnight_cache: dict[tuple[int, int, int], int | None] = {}


def parse_ts(text: str) -> int | None:
    """Parse a strict UTC timestamp into epoch seconds, or None."""
    m = _TS_RE.match(text)
    if not m:
        return None
    y, mo, d, h, mi, s = map(int, m.groups())
    if h > 23 or mi > 59 or s > 59:
        return None
    day = (y, mo, d)
    midnight = _midnight_cache.get(day, -1)
    if midnight == -1:
        try:
            if not 1 <= mo <= 12 or not 1 <= d <= calendar.monthrange(y, mo)[1]:
                midnight = None
            else:
                midnight = calendar.timegm((y, mo, d, 0, 0, 0))
        except ValueError:
            midnight = None
        _midnight_cache[day] = midnight
    if midnight is None:
        return None
    return midnight + h * 3600 + mi * 60 + s


def format_ts(epoch: int) -> str:
    days, rem = divmod(epoch, SECONDS_PER_DAY)
    h, rem = divmod(rem, 3600)
    mi, s = divmod(rem, 60)
    y, mo, d = _from_epoch_days(days)
    return f"{y:04d}-{mo:02d}-{d:02d}T{h:02d}:{mi:02d}:{s:02d}Z"


def _from_epoch_days(days: int) -> tuple[int, int, int]:
    from datetime import date

    d = date.fromordinal(days + _EPOCH_ORDINAL)
    return d.year, d.month, d.day


def parse_date(text: str) -> int:
    """Parse ``YYYY-MM-DD`` into epoch seconds at UTC midnight."""
    m = _DATE_RE.match(text)
    if not m:
        raise ValueError(f"bad date {text!r}")
    ts = parse_ts(f"{text}T00:00:00Z")
    if ts is None:
        raise ValueError(f"bad date {text!r}")
    return ts


def format_date(epoch: int) -> str:
    return format_ts(epoch)[:10]


def encode_field(value: str) -> str:
    """Percent-encode a field so it is safe inside the line grammar."""
    return quote(value, safe="")


def _decode(value: str) -> str:
    return unquote(value) if "%" in value else value


def serialize_raw(
    ts: int,
    user: str,
    course: str,
    verb: str,
    obj: str,
    payload: dict[str, int | str] | None = None,
) -> str:
    """Render one raw log line with a not-yet-pseudonymized user field."""
    pairs = payload or {}
    body = ";".join(f"{encode_field(k)}={encode_field(str(v))}" for k, v in sorted(pairs.items()))
    return "|".join((format_ts(ts), encode_field(user), encode_field(course), verb, encode_field(obj), body))


def serialize_event(event: Event) -> str:
    """Render a tidied event back into the line grammar (token as user)."""
    return serialize_raw(event.ts, event.learner, event.course, event.verb, event.object, dict(event.payload))


def parse_line(text: str, key: str) -> tuple[Event | None, str | None]:
    """Parse one raw line into a pseudonymized Event.

    Returns ``(event, None)`` on success, ``(None, reason)`` otherwise.
    All failures are quarantine reasons, never exceptions. A user field
    that already has pseudonym shape is passed through unhashed so
    re-ingesting tidied output is a no-op.
    """
    return _parse(text, _make_pseudonymizer(key))


def _make_pseudonymizer(key: str) -> Callable[[str], Pseudonym]:
    cache: dict[str, Pseudonym] = {}

    def pseudo(user: str) -> Pseudonym:
        token = cache.get(user)
        if token is None:
            token = Pseudonym(user) if is_token(user) else pseudonymize(user, key)
            cache[user] = token
        return token

    return pseudo


def _parse(text: str, pseudo: Callable[[str], Pseudonym]) -> tuple[Event | None, str | None]:
    parts = text.split("|")
    if len(parts) != FIELD_COUNT:
        return None, f"field count != {FIELD_COUNT}"
    ts_raw, user, course, verb, obj, payload_raw = parts
    ts = parse_ts(ts_raw)
    if ts is None:
        return None, "bad timestamp"
    if verb not in VERBS:
        return None, "unknown verb"
    if not user:
        return None, "empty user"
    if not course:
        return None, "empty course"

    schema = PAYLOAD_SCHEMA[verb]
    pairs: dict[str, int | str] = {}
    if payload_raw:
        for chunk in payload_raw.split(";"):
            k, sep, v = chunk.partition("=")
            if not sep or not k:
                return None, "malformed payload pair"
            k = _decode(k)
            if k in pairs:
                return None, f"duplicate payload key: {k}"
            v = _decode(v)
            if schema.get(k) is int:
                if not _INT_RE.match(v):
                    return None, f"bad payload value: {k}"
                pairs[k] = int(v)
            else:
                pairs[k] = v
    for required in schema:
        if required not in pairs:
            return None, f"missing payload key: {required}"

    obj = _decode(obj)
    if verb in OBJECT_FREE_VERBS:
        if obj:
            return None, "unexpected object"
    elif not obj:
        return None, "missing object"

    event = Event(ts, pseudo(_decode(user)), _decode(course), verb, obj, tuple(sorted(pairs.items())))
    return event, None


@dataclass
class IngestReport:
    """Accounting for one ingest run.

    ``parsed + quarantined`` equals the input line count; duplicates are
    a subset of parsed lines, so the tidied sequence holds
    ``parsed - duplicates_dropped`` events.
    """

    parsed: int = 0
    quarantined: int = 0
    duplicates_dropped: int = 0
    quarantine: list[tuple[int, str, str]] = field(default_factory=list)


def ingest(lines: Iterable[str], key: str) -> tuple[list[Event], IngestReport]:
    """Parse, scrub, sort and dedup a stream of raw lines.

    Line order never affects the output: the tidied sequence is sorted
    by the canonical event key and duplicate events (identical full
    tuples) are collapsed. Every input line is accounted for exactly
    once in the report. PII payload keys are scrubbed before an event
    enters the sequence.
    """
    pseudo = _make_pseudonymizer(key)
    report = IngestReport()
    events: list[Event] = []
    for line_no, raw in enumerate(lines, 1):
        text = raw.rstrip("\r\n")
        if not text.strip():
            report.quarantined += 1
            report.quarantine.append((line_no, "blank", text))
            continue
        event, reason = _parse(text, pseudo)
        if event is None:
            report.quarantined += 1
            report.quarantine.append((line_no, reason or "unparseable", text))
        else:
            report.parsed += 1
            events.append(scrub(event))

    events = tidy_sort(events)
    tidied: list[Event] = []
    previous: Event | None = None
    for event in events:
        if event == previous:
            report.duplicates_dropped += 1
        else:
            tidied.append(event)
            previous = event
    return tidied, report


def read_log_lines(paths: Iterable[str]) -> Iterable[str]:
    """Stream lines from one or more log files as a single sequence."""
    for path in paths:
        with open(path, encoding="utf-8") as fh:
            yield from fh


def write_quarantine(path: str, report: IngestReport) -> None:
    """Write the per-run quarantine file: line_no TAB reason TAB text."""
    with open(path, "w", encoding="utf-8") as fh:
        for line_no, reason, text in report.quarantine:
            fh.write(f"{line_no}\t{reason}\t{text}\n")
