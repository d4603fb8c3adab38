"""HTTP API over one event store.

All endpoints live under ``/api/v1`` behind bearer-token auth. The
service layer holds no analytics of its own: every response body is the
corresponding indicator or store result run through the serializers in
this module, and each request binds exactly one snapshot, so a long
report never observes a half-ingested batch. Responses only ever carry
pseudonym tokens.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from fastapi import Depends, FastAPI, HTTPException, Query, Request, Response
from fastapi.middleware.cors import CORSMiddleware

from . import indicators, reporting
from .ingest import ingest
from .store import CourseView, EventStore, UnknownCourseError

API_PREFIX = "/api/v1"

#: Per-learner series longer than this are paginated by default.
PAGE_CAP = 10_000


# -- serializers (shared with the equivalence tests) ----------------------


def _ratio(value: Fraction | None) -> dict | None:
    if value is None:
        return None
    return {
        "numerator": value.numerator,
        "denominator": value.denominator,
        "percent": indicators.percent_str(value),
    }


def funnel_json(f: indicators.Funnel) -> dict:
    return {
        "registrants": f.registrants,
        "active": f.active,
        "completers": f.completers,
        "certified": f.certified,
        "completers_only": f.completers_only,
        "certified_ratio": _ratio(
            indicators.certified_ratio(f) if f.registrants else None
        ),
    }


def dropout_json(matrix: indicators.DropoutMatrix) -> dict:
    return {name: _ratio(getattr(matrix, name)) for name in indicators.DropoutMatrix.FIELDS}


def forum_json(stats: indicators.ForumStats) -> dict:
    return {
        "total_posts": stats.total_posts,
        "instructor_posts": stats.instructor_posts,
        "instructor_share": _ratio(stats.instructor_share),
        "total_reads": sum(stats.reads_by_day.values()),
        "phase_shares": {
            "first_two_weeks": _ratio(stats.phase_shares.first_two_weeks),
            "last_two_weeks": _ratio(stats.phase_shares.last_two_weeks),
        },
        "posts_by_day": {day.isoformat(): n for day, n in sorted(stats.posts_by_day.items())},
        "posts_per_student": {
            learner: n for learner, n in sorted(stats.posts_per_student.items())
        },
    }


def reads_series_json(stats: indicators.ForumStats, view: CourseView, granularity: str) -> dict:
    if granularity == "week":
        series = {str(week): n for week, n in indicators.reads_by_week(stats, view).items()}
    else:
        series = {day.isoformat(): n for day, n in sorted(stats.reads_by_day.items())}
    return {"granularity": granularity, "reads": series}


def timeline_json(tl: indicators.VideoTimeline) -> dict:
    return {
        "video": tl.video,
        "duration": tl.duration,
        "pause_skip": list(tl.pause_skip),
        "replay": list(tl.replay),
    }


def group_stats_json(groups: dict[str, indicators.GroupStats]) -> dict:
    return {
        name: {"n": g.n, "mean": g.mean, "median": g.median}
        for name, g in groups.items()
    }


def fit_json(fit: indicators.RegressionFit, xs: Iterable[float]) -> dict:
    xs = sorted(set(xs))
    band = None
    if fit.slope is not None and xs:
        grid = _grid(min(xs), max(xs))
        band = [
            {"x": x, "y": fit.intercept + fit.slope * x, "se": fit.se_band(x)}
            for x in grid
        ]
    return {
        "n": fit.n,
        "slope": fit.slope,
        "intercept": fit.intercept,
        "pearson_r": fit.pearson_r,
        "residual_std": fit.residual_std,
        "x_mean": fit.x_mean,
        "sxx": fit.sxx,
        "band": band,
    }


def _grid(lo: float, hi: float, points: int = 100) -> list[float]:
    if hi == lo:
        return [lo]
    step = (hi - lo) / (points - 1)
    return [lo + i * step for i in range(points)]


def _page(pairs: tuple, offset: int | None, limit: int | None) -> tuple[list, dict]:
    total = len(pairs)
    start = offset or 0
    cap = limit if limit is not None else (PAGE_CAP if total > PAGE_CAP else total)
    window = pairs[start: start + cap]
    meta = {"total": total, "offset": start, "returned": len(window)}
    return list(window), meta


def correlation_json(result: indicators.CorrelationResult,
                     offset: int | None = None, limit: int | None = None) -> dict:
    window, meta = _page(result.pairs, offset, limit)
    return {
        "pairs": [{"learner": l, "x": x, "y": y} for l, x, y in window],
        "page": meta,
        "fit": fit_json(result.fit, [x for _, x, _ in result.pairs]),
        "median_reads_high_performers": result.median_reads_high_performers,
    }


def compare_json(result: indicators.CompareResult,
                 offset: int | None = None, limit: int | None = None) -> dict:
    window, meta = _page(result.pairs, offset, limit)
    return {
        "x_key": result.x_key,
        "y_key": result.y_key,
        "pairs": [{"learner": l, "x": x, "y": y} for l, x, y in window],
        "page": meta,
        "fit": fit_json(result.fit, [x for _, x, _ in result.pairs]),
    }


def quiz_summary_json(view: CourseView) -> dict:
    quiz_weeks = {w for _, w in view.config.quizzes}
    file_weeks = {w for _, w in view.config.files}
    weeks = {}
    for week in sorted(quiz_weeks & file_weeks):
        weeks[str(week)] = group_stats_json(indicators.download_group_quiz_stats(view, week))
    return {"weeks": weeks}


# -- application -----------------------------------------------------------


def create_app(store: EventStore, token: str, ingest_key: str | None = None) -> FastAPI:
    """Build the service; the token comes from the environment, never logs."""
    app = FastAPI(title="moocscope", docs_url=None, redoc_url=None)
    # the dashboard is served from its own origin; auth stays on the token
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET", "POST"],
        allow_headers=["Authorization", "Content-Type"],
    )

    async def authorized(request: Request) -> None:
        header = request.headers.get("authorization", "")
        if header != f"Bearer {token}":
            raise HTTPException(status_code=401, detail="missing or invalid bearer token")

    def view_of(course_id: str) -> CourseView:
        try:
            return store.snapshot(course_id)
        except UnknownCourseError:
            raise HTTPException(status_code=404, detail=f"unknown course {course_id!r}") from None

    dep = [Depends(authorized)]

    @app.get(f"{API_PREFIX}/courses", dependencies=dep)
    def courses() -> dict:
        return {"courses": store.courses()}

    @app.get(f"{API_PREFIX}/courses/{{course_id}}/funnel", dependencies=dep)
    def course_funnel(course_id: str) -> dict:
        return funnel_json(indicators.funnel(view_of(course_id)))

    @app.get(f"{API_PREFIX}/courses/{{course_id}}/dropout", dependencies=dep)
    def course_dropout(course_id: str) -> dict:
        f = indicators.funnel(view_of(course_id))
        return dropout_json(indicators.dropout(f))

    @app.get(f"{API_PREFIX}/courses/{{course_id}}/forum", dependencies=dep)
    def course_forum(course_id: str) -> dict:
        return forum_json(indicators.forum_stats(view_of(course_id)))

    @app.get(f"{API_PREFIX}/courses/{{course_id}}/forum/reads", dependencies=dep)
    def course_reads(course_id: str, granularity: str = Query("day", pattern="^(day|week)$")) -> dict:
        view = view_of(course_id)
        return reads_series_json(indicators.forum_stats(view), view, granularity)

    @app.get(f"{API_PREFIX}/courses/{{course_id}}/videos/{{video_id}}/timeline", dependencies=dep)
    def course_timeline(course_id: str, video_id: str) -> dict:
        try:
            return timeline_json(indicators.video_timeline(view_of(course_id), video_id))
        except ValueError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from None

    @app.get(f"{API_PREFIX}/courses/{{course_id}}/quizzes/summary", dependencies=dep)
    def course_quizzes(course_id: str) -> dict:
        return quiz_summary_json(view_of(course_id))

    @app.get(f"{API_PREFIX}/courses/{{course_id}}/quizzes/week/{{week}}/download-groups",
             dependencies=dep)
    def course_groups(course_id: str, week: int) -> dict:
        try:
            groups = indicators.download_group_quiz_stats(view_of(course_id), week)
        except ValueError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from None
        return group_stats_json(groups)

    @app.get(f"{API_PREFIX}/courses/{{course_id}}/correlation", dependencies=dep)
    def course_correlation(course_id: str, offset: int | None = Query(None, ge=0),
                           limit: int | None = Query(None, ge=1)) -> dict:
        try:
            result = indicators.reads_vs_grade(view_of(course_id))
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        return correlation_json(result, offset, limit)

    @app.get(f"{API_PREFIX}/courses/{{course_id}}/compare", dependencies=dep)
    def course_compare(course_id: str, x: str, y: str,
                       offset: int | None = Query(None, ge=0),
                       limit: int | None = Query(None, ge=1)) -> dict:
        try:
            result = indicators.compare(view_of(course_id), x, y)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        return compare_json(result, offset, limit)

    @app.get(f"{API_PREFIX}/export", dependencies=dep)
    def export(course: str, format: str = Query("csv", pattern="^(csv|json)$")) -> Response:
        report = reporting.build_report(view_of(course))
        body = reporting.export(report, format)
        media = "text/csv" if format == "csv" else "application/json"
        return Response(content=body, media_type=media)

    @app.post(f"{API_PREFIX}/ingest", dependencies=dep)
    async def ingest_lines(request: Request) -> dict:
        if not ingest_key:
            raise HTTPException(status_code=409, detail="no ingest key configured")
        body = (await request.body()).decode("utf-8")
        events, report = ingest(body.splitlines(), ingest_key)
        committed = store.append(events)
        return {
            "parsed": report.parsed,
            "quarantined": report.quarantined,
            "duplicates_dropped": report.duplicates_dropped,
            "committed": committed,
        }

    return app
