"""Course activity analytics: events in, indicators and reports out."""

from .events import CourseConfig, Event, Pseudonym, validate
from .indicators import (
    COMPARE_KEYS,
    CompareResult,
    CorrelationResult,
    DropoutMatrix,
    ForumStats,
    Funnel,
    GroupStats,
    RegressionFit,
    VideoTimeline,
    best_grade,
    certified_ratio,
    compare,
    download_group_quiz_stats,
    dropout,
    forum_stats,
    funnel,
    participant_category,
    reads_vs_grade,
    video_timeline,
)
from .ingest import IngestReport, ingest, parse_line
from .privacy import IdentityVault, pseudonymize, scrub
from .store import CourseView, EventStore
from .synthgen import CourseProfile, bundled_profile_path, generate, load_profile

__version__ = "0.1.0"

__all__ = [
    "COMPARE_KEYS",
    "CompareResult",
    "CorrelationResult",
    "CourseConfig",
    "CourseProfile",
    "CourseView",
    "DropoutMatrix",
    "Event",
    "EventStore",
    "ForumStats",
    "Funnel",
    "GroupStats",
    "IdentityVault",
    "IngestReport",
    "Pseudonym",
    "RegressionFit",
    "VideoTimeline",
    "best_grade",
    "bundled_profile_path",
    "certified_ratio",
    "compare",
    "download_group_quiz_stats",
    "dropout",
    "forum_stats",
    "funnel",
    "generate",
    "ingest",
    "load_profile",
    "parse_line",
    "participant_category",
    "pseudonymize",
    "reads_vs_grade",
    "scrub",
    "validate",
    "video_timeline",
]
