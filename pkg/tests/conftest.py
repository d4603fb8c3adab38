"""Shared fixtures: generated course corpora built once per session."""

from __future__ import annotations

import pytest

from moocscope.ingest import ingest
from moocscope.store import CourseView, EventStore
from moocscope.synthgen import bundled_profile_path, generate, load_profile

SESSION_KEY = "test-secret-key"


@pytest.fixture(scope="session")
def gol_profile():
    return load_profile(bundled_profile_path("gol2014"))


@pytest.fixture(scope="session")
def lin_profile():
    return load_profile(bundled_profile_path("lin2014"))


@pytest.fixture(scope="session")
def gol_log(gol_profile):
    return generate(gol_profile)


@pytest.fixture(scope="session")
def lin_log(lin_profile):
    return generate(lin_profile)


def _view(profile, log: str) -> CourseView:
    events, report = ingest(log.splitlines(), SESSION_KEY)
    assert report.quarantined == 0
    return CourseView(config=profile.config, events=tuple(events), built_at=0)


@pytest.fixture(scope="session")
def gol_view(gol_profile, gol_log):
    return _view(gol_profile, gol_log)


@pytest.fixture(scope="session")
def lin_view(lin_profile, lin_log):
    return _view(lin_profile, lin_log)


@pytest.fixture()
def populated_store(tmp_path, gol_profile, lin_profile, gol_view, lin_view):
    store = EventStore(tmp_path / "store")
    store.register_course(gol_profile.config)
    store.register_course(lin_profile.config)
    store.append(list(gol_view.events))
    store.append(list(lin_view.events))
    return store
