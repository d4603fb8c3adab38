"""Matplotlib renderings of the report views, written next to exports.

Uses the Agg backend so figures render in headless environments. Each
function saves one PNG; ``render_course_figures`` produces the full set
for a course snapshot.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from . import indicators
from .store import CourseView

_FUNNEL_LEVELS = ("registrants", "active", "completers", "certified")


def save_funnel(f: indicators.Funnel, course: str, path: Path) -> None:
    counts = [f.registrants, f.active, f.completers, f.certified]
    fig, ax = plt.subplots(figsize=(6, 4))
    bars = ax.bar(_FUNNEL_LEVELS, counts, color="#2c7fb8")
    ax.bar_label(bars, labels=[str(c) for c in counts])
    ax.set_ylabel("learners")
    ax.set_title(f"{course}: participants per level")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def save_dropout(matrix: indicators.DropoutMatrix, course: str, path: Path) -> None:
    names = list(indicators.DropoutMatrix.FIELDS)
    values = [float(getattr(matrix, n) or 0) * 100 for n in names]
    fig, ax = plt.subplots(figsize=(7, 4))
    bars = ax.barh(names, values, color="#de2d26")
    ax.bar_label(bars, labels=[indicators.percent_str(getattr(matrix, n)) for n in names])
    ax.set_xlabel("dropout rate (%)")
    ax.set_xlim(0, 100)
    ax.set_title(f"{course}: dropout definitions")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def save_video_timeline(tl: indicators.VideoTimeline, path: Path) -> None:
    seconds = range(tl.duration + 1)
    fig, ax = plt.subplots(figsize=(8, 3.5))
    ax.plot(seconds, tl.pause_skip, color="#1c9099", label="pause/skip")
    ax.plot(seconds, tl.replay, color="#de2d26", label="replay")
    ax.set_xlabel("video second")
    ax.set_ylabel("distinct students")
    ax.set_title(f"video {tl.video}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def save_forum_activity(stats: indicators.ForumStats, course: str, path: Path) -> None:
    fig, (ax_reads, ax_posts) = plt.subplots(2, 1, figsize=(8, 6), sharex=True)
    if stats.reads_by_day:
        days = sorted(stats.reads_by_day)
        ax_reads.plot(days, [stats.reads_by_day[d] for d in days], color="#2c7fb8")
    ax_reads.set_ylabel("reads")
    ax_reads.set_title(f"{course}: forum activity per day")
    if stats.posts_by_day:
        days = sorted(stats.posts_by_day)
        ax_posts.plot(days, [stats.posts_by_day[d] for d in days], "o", color="#756bb1", markersize=3)
    ax_posts.set_ylabel("posts")
    fig.autofmt_xdate()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def save_quiz_groups(per_week: dict[int, dict[str, indicators.GroupStats]], course: str, path: Path) -> None:
    weeks = sorted(per_week)
    width = 0.35
    fig, ax = plt.subplots(figsize=(7, 4))
    for offset, group, color in ((-width / 2, "all", "#31a354"), (width / 2, "none", "#fd8d3c")):
        xs, ys, labels = [], [], []
        for i, week in enumerate(weeks):
            g = per_week[week][group]
            if g.mean is not None:
                xs.append(i + offset)
                ys.append(g.mean)
                labels.append(f"n={g.n}")
        bars = ax.bar(xs, ys, width, label=f"downloaded {group}", color=color)
        ax.bar_label(bars, labels=labels, fontsize=8)
    ax.set_xticks(range(len(weeks)), [f"week {w}" for w in weeks])
    ax.set_ylabel("mean first-attempt grade")
    ax.set_title(f"{course}: grades by download group")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def save_correlation(result: indicators.CorrelationResult, course: str, path: Path) -> None:
    import numpy as np

    xs = [x for _, x, _ in result.pairs]
    ys = [y for _, _, y in result.pairs]
    fig, ax = plt.subplots(figsize=(7, 5))
    ax.plot(xs, ys, "o", color="#555555", markersize=3, alpha=0.6)
    fit = result.fit
    if fit.slope is not None:
        grid = np.linspace(min(xs), max(xs), 100)
        line = fit.intercept + fit.slope * grid
        band = np.array([fit.se_band(x) for x in grid])
        ax.plot(grid, line, color="#3182bd")
        ax.fill_between(grid, line - band, line + band, color="#bdbdbd", alpha=0.5)
    ax.set_xlabel("mean best quiz grade")
    ax.set_ylabel("sqrt(forum reads)")
    ax.set_title(f"{course}: reading vs performance")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def render_course_figures(view: CourseView, outdir: str | Path) -> list[Path]:
    """Render the full figure set for one course; returns saved paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    course = view.config.id
    paths: list[Path] = []

    f = indicators.funnel(view)
    target = outdir / f"{course}_funnel.png"
    save_funnel(f, course, target)
    paths.append(target)

    target = outdir / f"{course}_dropout.png"
    save_dropout(indicators.dropout(f), course, target)
    paths.append(target)

    target = outdir / f"{course}_forum.png"
    save_forum_activity(indicators.forum_stats(view), course, target)
    paths.append(target)

    for video, _, _ in view.config.videos:
        tl = indicators.video_timeline(view, video)
        if any(tl.pause_skip) or any(tl.replay):
            target = outdir / f"{course}_video_{video}.png"
            save_video_timeline(tl, target)
            paths.append(target)

    quiz_weeks = {w for _, w in view.config.quizzes}
    file_weeks = {w for _, w in view.config.files}
    eligible = sorted(quiz_weeks & file_weeks)
    if eligible:
        per_week = {w: indicators.download_group_quiz_stats(view, w) for w in eligible}
        target = outdir / f"{course}_quiz_groups.png"
        save_quiz_groups(per_week, course, target)
        paths.append(target)

    try:
        result = indicators.reads_vs_grade(view)
    except ValueError:
        pass
    else:
        target = outdir / f"{course}_correlation.png"
        save_correlation(result, course, target)
        paths.append(target)

    return paths
