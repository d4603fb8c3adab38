"""Course report assembly and document export.

A Report is a set of named tables whose columns carry units, rendered
losslessly to CSV (one file-section per table) or JSON and parseable
back for round-trip checks. All cells are canonical strings: counts as
integers, ratios as half-even two-decimal percents, undefined cells as
``n/a``.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

from . import indicators
from .store import CourseView

UNIT_NONE = ""
UNIT_COUNT = "count"
UNIT_PERCENT = "percent"
UNIT_SECONDS = "seconds"
UNIT_GRADE = "grade"

FORMATS = ("csv", "json")


@dataclass(frozen=True)
class Column:
    name: str
    unit: str = UNIT_NONE

    @property
    def header(self) -> str:
        return f"{self.name}({self.unit})" if self.unit else self.name


@dataclass(frozen=True)
class Section:
    name: str
    columns: tuple[Column, ...]
    rows: tuple[tuple[str, ...], ...]


@dataclass(frozen=True)
class Report:
    course: str
    sections: tuple[Section, ...]

    def section(self, name: str) -> Section:
        for section in self.sections:
            if section.name == name:
                return section
        raise KeyError(name)


def _num(value: float | None, digits: int = 2) -> str:
    if value is None:
        return "n/a"
    if float(value).is_integer():
        return str(int(value))
    return f"{value:.{digits}f}"


def _float(value: float | None) -> str:
    return "n/a" if value is None else f"{value:.6g}"


def build_report(view: CourseView) -> Report:
    """Compute every report section for one course snapshot."""
    course = view.config.id
    f = indicators.funnel(view)
    matrix = indicators.dropout(f)
    stats = indicators.forum_stats(view)

    sections = [
        Section(
            "funnel",
            (
                Column("course"),
                Column("registrants", UNIT_COUNT),
                Column("active", UNIT_COUNT),
                Column("completers", UNIT_COUNT),
                Column("certified", UNIT_COUNT),
            ),
            ((course, str(f.registrants), str(f.active), str(f.completers), str(f.certified)),),
        ),
        Section(
            "dropout",
            (Column("course"),) + tuple(Column(name, UNIT_PERCENT) for name in indicators.DropoutMatrix.FIELDS),
            ((course,) + tuple(matrix.rendered()[name] for name in indicators.DropoutMatrix.FIELDS),),
        ),
        Section(
            "summary",
            (
                Column("course"),
                Column("certified_ratio", UNIT_PERCENT),
                Column("completers_only", UNIT_COUNT),
                Column("events", UNIT_COUNT),
            ),
            ((
                course,
                indicators.percent_str(indicators.certified_ratio(f)) if f.registrants else "n/a",
                str(f.completers_only),
                str(len(view.events)),
            ),),
        ),
        Section(
            "forum",
            (
                Column("course"),
                Column("total_posts", UNIT_COUNT),
                Column("instructor_posts", UNIT_COUNT),
                Column("instructor_share", UNIT_PERCENT),
                Column("total_reads", UNIT_COUNT),
                Column("first_two_weeks_reads", UNIT_PERCENT),
                Column("last_two_weeks_reads", UNIT_PERCENT),
            ),
            ((
                course,
                str(stats.total_posts),
                str(stats.instructor_posts),
                indicators.percent_str(stats.instructor_share),
                str(sum(stats.reads_by_day.values())),
                indicators.percent_str(stats.phase_shares.first_two_weeks),
                indicators.percent_str(stats.phase_shares.last_two_weeks),
            ),),
        ),
        Section(
            "forum_reads_by_week",
            (Column("week"), Column("reads", UNIT_COUNT)),
            tuple(
                (str(week), str(count))
                for week, count in indicators.reads_by_week(stats, view).items()
            ),
        ),
        _quiz_section(view),
        _correlation_section(view),
    ]
    return Report(course=course, sections=tuple(sections))


def _quiz_section(view: CourseView) -> Section:
    quiz_weeks = {w for _, w in view.config.quizzes}
    file_weeks = {w for _, w in view.config.files}
    rows = []
    for week in sorted(quiz_weeks & file_weeks):
        groups = indicators.download_group_quiz_stats(view, week)
        for name in ("all", "some", "none"):
            g = groups[name]
            rows.append((str(week), name, str(g.n), _num(g.mean), _num(g.median)))
    return Section(
        "quiz_download_groups",
        (
            Column("week"),
            Column("group"),
            Column("n", UNIT_COUNT),
            Column("mean_first_attempt", UNIT_GRADE),
            Column("median_first_attempt", UNIT_GRADE),
        ),
        tuple(rows),
    )


def _correlation_section(view: CourseView) -> Section:
    columns = (
        Column("n", UNIT_COUNT),
        Column("slope"),
        Column("intercept"),
        Column("pearson_r"),
        Column("residual_std"),
        Column("median_reads_high_performers", UNIT_COUNT),
    )
    try:
        result = indicators.reads_vs_grade(view)
    except ValueError:
        return Section("correlation", columns, ())
    fit = result.fit
    row = (
        str(fit.n),
        _float(fit.slope),
        _float(fit.intercept),
        _float(fit.pearson_r),
        _float(fit.residual_std),
        _num(result.median_reads_high_performers),
    )
    return Section("correlation", columns, (row,))


# -- rendering ----------------------------------------------------------


def export(report: Report, format: str) -> str:
    if format == "csv":
        return export_csv(report)
    if format == "json":
        return export_json(report)
    raise ValueError(f"unknown export format {format!r}")


def export_csv(report: Report) -> str:
    out = io.StringIO()
    out.write(f"# course: {report.course}\n")
    for section in report.sections:
        out.write(f"# section: {section.name}\n")
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow([col.header for col in section.columns])
        for row in section.rows:
            writer.writerow(row)
        out.write("\n")
    return out.getvalue()


def parse_csv(text: str) -> Report:
    course = ""
    sections: list[Section] = []
    name: str | None = None
    columns: list[Column] = []
    rows: list[tuple[str, ...]] = []

    def flush() -> None:
        nonlocal name, columns, rows
        if name is not None:
            sections.append(Section(name, tuple(columns), tuple(rows)))
        name, columns, rows = None, [], []

    for line in text.splitlines():
        if line.startswith("# course: "):
            course = line[len("# course: "):]
        elif line.startswith("# section: "):
            flush()
            name = line[len("# section: "):]
        elif not line:
            continue
        else:
            cells = next(csv.reader([line]))
            if not columns:
                for header in cells:
                    if header.endswith(")") and "(" in header:
                        col_name, _, unit = header[:-1].rpartition("(")
                        columns.append(Column(col_name, unit))
                    else:
                        columns.append(Column(header))
            else:
                rows.append(tuple(cells))
    flush()
    return Report(course=course, sections=tuple(sections))


def export_json(report: Report) -> str:
    payload = {
        "course": report.course,
        "sections": [
            {
                "name": section.name,
                "columns": [{"name": col.name, "unit": col.unit} for col in section.columns],
                "rows": [list(row) for row in section.rows],
            }
            for section in report.sections
        ],
    }
    return json.dumps(payload, indent=2) + "\n"


def parse_json(text: str) -> Report:
    data = json.loads(text)
    return Report(
        course=data["course"],
        sections=tuple(
            Section(
                sec["name"],
                tuple(Column(col["name"], col["unit"]) for col in sec["columns"]),
                tuple(tuple(row) for row in sec["rows"]),
            )
            for sec in data["sections"]
        ),
    )
