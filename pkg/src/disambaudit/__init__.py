"""Career-anomaly auditing for authorship-disambiguation quality.

Reconstructs author careers from a works corpus, measures how often the
first last-author paper falls in the debut year, stratifies that rate by
metadata presence and inferred gender, and ships a synthetic harness that
validates the metric's sensitivity to identity-split errors.
"""

from .model import FilterConfig, ParseError, Position, WorkRecord, parse_work_line
from .ingest import AuthorCareer, PartialAggregate, merge, run_two_pass
from .metrics import AnomalyStat, MetricConfig, Stratum, build_report, windowed_anomaly_rate
from .gender import Gender, Thresholds, classify, load_dictionary
from .synth import GroundTruth, SplitSpec, SynthConfig, generate, inject_splits, oracle_report

__version__ = "0.1.0"

__all__ = [
    "AnomalyStat",
    "AuthorCareer",
    "FilterConfig",
    "Gender",
    "GroundTruth",
    "MetricConfig",
    "ParseError",
    "PartialAggregate",
    "Position",
    "SplitSpec",
    "Stratum",
    "SynthConfig",
    "Thresholds",
    "WorkRecord",
    "build_report",
    "classify",
    "generate",
    "inject_splits",
    "load_dictionary",
    "merge",
    "oracle_report",
    "parse_work_line",
    "run_two_pass",
    "windowed_anomaly_rate",
    "__version__",
]
