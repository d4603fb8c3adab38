"""Append-only event persistence with per-course logs and snapshots.

Layout under the store root (format version 1):

    manifest.json          course configs + format version
    events/<course>.jsonl  one record log per course

Each record is one JSON line ``[ts, learner, verb, object, [[k, v], ...]]``.
A batch append writes its records followed by a commit line
``{"n": <record count>}`` in a single write and fsyncs, so a crash
leaves either the old or the new state: replay accepts records only
once their commit line is seen and drops any torn or uncommitted tail.
Single writer, many readers; readers only ever see immutable snapshots.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence
from urllib.parse import quote

from .events import CourseConfig, Event, Pseudonym, tidy_sort

FORMAT_VERSION = 1
MANIFEST = "manifest.json"


class StorageError(Exception):
    """Disk-level failure while appending or reading the store."""


class UnknownCourseError(KeyError):
    """Requested course has no registered config."""


@dataclass(frozen=True)
class CourseView:
    """Immutable per-course snapshot handed to the indicator engine."""

    config: CourseConfig
    events: tuple[Event, ...]
    built_at: int


def _config_to_dict(config: CourseConfig) -> dict:
    return {
        "id": config.id,
        "start": config.start,
        "end": config.end,
        "weeks": config.weeks,
        "pass_threshold": config.pass_threshold,
        "quizzes": [list(q) for q in config.quizzes],
        "videos": [list(v) for v in config.videos],
        "files": [list(f) for f in config.files],
    }


def _config_from_dict(data: dict) -> CourseConfig:
    return CourseConfig(
        id=data["id"],
        start=data["start"],
        end=data["end"],
        weeks=data["weeks"],
        pass_threshold=data["pass_threshold"],
        quizzes=tuple((q, w) for q, w in data["quizzes"]),
        videos=tuple((v, w, d) for v, w, d in data["videos"]),
        files=tuple((f, w) for f, w in data["files"]),
    )


class EventStore:
    """Durable store for tidied events and course configs."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.events_dir = self.root / "events"
        self.events_dir.mkdir(parents=True, exist_ok=True)
        self._configs: dict[str, CourseConfig] = {}
        self._cache: dict[str, list[Event]] = {}
        self._keys: dict[str, set] = {}
        self._load_manifest()

    # -- configs ---------------------------------------------------------

    def _load_manifest(self) -> None:
        path = self.root / MANIFEST
        if not path.exists():
            return
        data = json.loads(path.read_text(encoding="utf-8"))
        if data.get("version") != FORMAT_VERSION:
            raise StorageError(f"unsupported store format {data.get('version')!r}")
        for course_id, raw in data.get("courses", {}).items():
            self._configs[course_id] = _config_from_dict(raw)

    def _write_manifest(self) -> None:
        payload = {
            "version": FORMAT_VERSION,
            "courses": {cid: _config_to_dict(cfg) for cid, cfg in sorted(self._configs.items())},
        }
        tmp = self.root / (MANIFEST + ".tmp")
        tmp.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        os.replace(tmp, self.root / MANIFEST)

    def register_course(self, config: CourseConfig) -> None:
        """Insert or replace one course config (events are untouched)."""
        self._configs[config.id] = config
        self._write_manifest()

    def courses(self) -> list[str]:
        return sorted(self._configs)

    def config(self, course_id: str) -> CourseConfig:
        try:
            return self._configs[course_id]
        except KeyError:
            raise UnknownCourseError(course_id) from None

    # -- event log -------------------------------------------------------

    def _course_path(self, course_id: str) -> Path:
        return self.events_dir / (quote(course_id, safe="") + ".jsonl")

    def _loaded(self, course_id: str) -> list[Event]:
        if course_id not in self._cache:
            self._cache[course_id] = self._replay(course_id)
            self._keys[course_id] = set(self._cache[course_id])
        return self._cache[course_id]

    def _replay(self, course_id: str) -> list[Event]:
        path = self._course_path(course_id)
        if not path.exists():
            return []
        committed: list[Event] = []
        pending: list[Event] = []
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                if not line.endswith("\n"):
                    break  # torn tail record
                try:
                    record = json.loads(line)
                except ValueError:
                    break
                if isinstance(record, dict):
                    if record.get("n") != len(pending):
                        break  # commit does not match its batch
                    committed.extend(pending)
                    pending.clear()
                else:
                    ts, learner, verb, obj, pairs = record
                    pending.append(
                        Event(ts, Pseudonym(learner), course_id, verb, obj, tuple((k, v) for k, v in pairs))
                    )
        return committed

    def append(self, events: Sequence[Event]) -> int:
        """Durably append tidied events; returns how many committed.

        Events already present (same full tuple) are rejected, matching
        the ingest dedup key, so re-appending a batch commits 0. A
        failed write rolls the log back to its pre-batch state.
        """
        by_course: dict[str, list[Event]] = {}
        for event in events:
            by_course.setdefault(event.course, []).append(event)

        committed = 0
        for course_id, batch in by_course.items():
            existing = self._loaded(course_id)
            keys = self._keys[course_id]
            fresh = []
            for event in batch:
                if event not in keys:
                    fresh.append(event)
                    keys.add(event)
            if not fresh:
                continue
            buf = bytearray()
            for event in fresh:
                record = [event.ts, event.learner, event.verb, event.object,
                          [list(kv) for kv in event.payload]]
                buf += json.dumps(record, separators=(",", ":")).encode()
                buf += b"\n"
            buf += json.dumps({"n": len(fresh)}).encode() + b"\n"
            path = self._course_path(course_id)
            with open(path, "ab") as fh:
                start = fh.tell()
                try:
                    fh.write(buf)
                    fh.flush()
                    os.fsync(fh.fileno())
                except OSError as exc:
                    fh.truncate(start)
                    for event in fresh:
                        keys.discard(event)
                    raise StorageError(f"append to {path} failed") from exc
            existing.extend(fresh)
            committed += len(fresh)
        return committed

    def snapshot(self, course_id: str) -> CourseView:
        """Immutable time-ordered view of everything committed for one course."""
        config = self.config(course_id)
        events = tuple(tidy_sort(self._loaded(course_id)))
        return CourseView(config=config, events=events, built_at=int(time.time()))
