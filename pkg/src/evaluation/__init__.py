from .ablation import DEFAULT_KS, ablate_k, write_ablation
from .compare import compare, load_report
from .harness import build_service, evaluate, run_evaluation
from .manifest import load_manifest, write_manifest
from .report import (
    ReportTable,
    collect_reports,
    load_reference_reports,
    render_csv,
    render_rich,
    report_table,
)
from .rundir import RunDirectory

__all__ = [
    "DEFAULT_KS",
    "ablate_k",
    "write_ablation",
    "compare",
    "load_report",
    "build_service",
    "evaluate",
    "run_evaluation",
    "load_manifest",
    "write_manifest",
    "ReportTable",
    "collect_reports",
    "load_reference_reports",
    "render_csv",
    "render_rich",
    "report_table",
    "RunDirectory",
]
