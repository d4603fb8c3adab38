"""Record live API responses as dashboard test fixtures.

Builds a store from the bundled course profiles, serves it through the
real application, and snapshots the JSON/CSV bodies the dashboard
consumes. Run from the repository root:

    python3 frontend/scripts/record_fixtures.py
"""

from __future__ import annotations

import json
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from moocscope.api import create_app
from moocscope.events import CourseConfig
from moocscope.ingest import ingest
from moocscope.store import EventStore
from moocscope.synthgen import bundled_profile_path, generate, load_profile

TOKEN = "fixture-token"
AUTH = {"Authorization": f"Bearer {TOKEN}"}
OUT = Path(__file__).parent.parent / "fixtures"


def main() -> None:
    OUT.mkdir(exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        store = EventStore(tmp)
        for name in ("gol2014", "lin2014"):
            profile = load_profile(bundled_profile_path(name))
            store.register_course(profile.config)
            events, _ = ingest(generate(profile).splitlines(), "fixture-key")
            store.append(events)
        store.register_course(
            CourseConfig(id="empty2014", start=1_413_158_400,
                         end=1_413_158_400 + 14 * 86400, weeks=2,
                         pass_threshold=50)
        )
        client = TestClient(create_app(store, TOKEN))

        def record(name: str, path: str, params: dict | None = None) -> None:
            response = client.get(f"/api/v1{path}", params=params, headers=AUTH)
            assert response.status_code == 200, (path, response.status_code)
            (OUT / name).write_text(
                json.dumps(response.json(), indent=2) + "\n", encoding="utf-8"
            )

        record("courses.json", "/courses")
        record("funnel.json", "/courses/gol2014/funnel")
        record("dropout.json", "/courses/gol2014/dropout")
        record("forum.json", "/courses/gol2014/forum")
        record("reads_day.json", "/courses/gol2014/forum/reads", {"granularity": "day"})
        record("reads_week.json", "/courses/gol2014/forum/reads", {"granularity": "week"})
        record("timeline.json", "/courses/gol2014/videos/gol-v01/timeline")
        record("quizzes.json", "/courses/gol2014/quizzes/summary")
        record("compare_posts_quiz_mean.json",
               "/courses/gol2014/compare", {"x": "posts", "y": "quiz_mean"})
        record("correlation.json", "/courses/gol2014/correlation")
        record("funnel_empty.json", "/courses/empty2014/funnel")

        for fmt in ("csv", "json"):
            response = client.get(
                "/api/v1/export", params={"course": "gol2014", "format": fmt}, headers=AUTH
            )
            assert response.status_code == 200
            (OUT / f"export.{fmt}").write_text(response.text, encoding="utf-8")

    print(f"fixtures written to {OUT}")


if __name__ == "__main__":
    main()
