import csv
import io
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field
from rich.table import Table

from src.errors import ConfigError
from src.schemas.evaluation import Condition, EvaluationReport
from src.schemas.taxonomy import TaskCategoryId
from src.utils.yaml_config import load_yaml, strip_lines

from .compare import load_report

CSV_HEADER = ("category", "dataset", "backend", "condition", "accuracy", "best")
_CONDITION_ORDER = {Condition.VANILLA: 0, Condition.TSPE: 1}
_START = object()


class TableCell(BaseModel):
    backend_id: str
    condition: Condition
    accuracy: float
    best: bool = False


class TableRow(BaseModel):
    category: Optional[TaskCategoryId] = None
    dataset_id: str
    cells: List[TableCell] = Field(default_factory=list)

    def cell(self, backend_id: str, condition: Condition) -> Optional[TableCell]:
        for cell in self.cells:
            if cell.backend_id == backend_id and cell.condition == condition:
                return cell
        return None


class ReportTable(BaseModel):
    """Accuracy per dataset row and (backend, condition) column, grouped by task category"""
    columns: List[Tuple[str, Condition]]
    rows: List[TableRow]


def _category_rank(category: Optional[TaskCategoryId]) -> int:
    order = list(TaskCategoryId)
    return order.index(category) if category is not None else len(order)


def report_table(reports: List[EvaluationReport], dataset_order: Optional[List[str]] = None) -> ReportTable:
    """Arrange reports as a table and star the best condition per (dataset, backend).

    Accuracies equal at two decimals tie, and every tied cell is starred. When
    several reports cover one cell the most recent one is used.
    """
    latest: Dict[Tuple[str, str, Condition], EvaluationReport] = {}
    for report in reports:
        key = (report.dataset_id, report.backend_id, report.condition)
        if key not in latest or report.timestamp >= latest[key].timestamp:
            latest[key] = report

    backends = sorted({backend for _, backend, _ in latest}, reverse=True)
    columns = [
        (backend, condition)
        for backend in backends
        for condition in sorted({c for _, b, c in latest if b == backend}, key=_CONDITION_ORDER.get)
    ]

    seen: List[str] = []
    for report in reports:
        if report.dataset_id not in seen:
            seen.append(report.dataset_id)
    if dataset_order:
        position = {d: i for i, d in enumerate(dataset_order)}
        seen.sort(key=lambda d: position.get(d, len(position)))

    rows = []
    for dataset_id in seen:
        cells = [
            TableCell(backend_id=b, condition=c, accuracy=latest[(dataset_id, b, c)].accuracy)
            for b, c in columns
            if (dataset_id, b, c) in latest
        ]
        for backend in backends:
            group = [cell for cell in cells if cell.backend_id == backend]
            if group:
                top = max(round(cell.accuracy, 2) for cell in group)
                for cell in group:
                    cell.best = round(cell.accuracy, 2) == top
        category = next(r.category for k, r in latest.items() if k[0] == dataset_id)
        rows.append(TableRow(category=category, dataset_id=dataset_id, cells=cells))

    rows.sort(key=lambda row: _category_rank(row.category))
    return ReportTable(columns=columns, rows=rows)


def render_csv(table: ReportTable) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in table.rows:
        for cell in row.cells:
            writer.writerow([
                row.category.value if row.category else "",
                row.dataset_id,
                cell.backend_id,
                cell.condition.value,
                f"{cell.accuracy:.2f}",
                "true" if cell.best else "false",
            ])
    return buffer.getvalue()


def render_rich(table: ReportTable, title: str = "Zero-shot accuracy (%)") -> Table:
    rich_table = Table(title=title, caption="* best condition per dataset and backend")
    rich_table.add_column("Task")
    rich_table.add_column("Dataset")
    for backend, condition in table.columns:
        label = "Vanilla" if condition == Condition.VANILLA else "TSPE"
        rich_table.add_column(f"{backend}\n{label}", justify="right")

    previous: object = _START
    for row in table.rows:
        if row.category != previous and rich_table.row_count:
            rich_table.add_section()
        name = (row.category.value if row.category else "-") if row.category != previous else ""
        previous = row.category
        values = []
        for backend, condition in table.columns:
            cell = row.cell(backend, condition)
            if cell is None:
                values.append("")
            elif cell.best:
                values.append(f"[bold]{cell.accuracy:.2f}*[/bold]")
            else:
                values.append(f"{cell.accuracy:.2f}")
        rich_table.add_row(name, row.dataset_id, *values)
    return rich_table


def collect_reports(path: Path) -> List[EvaluationReport]:
    """A single report file, or every ``report.json`` below a directory."""
    path = Path(path)
    if path.is_file():
        return [load_report(path)]
    if not path.is_dir():
        raise ConfigError(f"no report file or directory at {path}")
    return [load_report(p) for p in sorted(path.rglob("report.json"))]


def load_reference_reports(path: Path) -> List[EvaluationReport]:
    """Reference cells as single-run reports."""
    raw = strip_lines(load_yaml(path)) or {}
    try:
        backends = raw["backends"]
        reports = []
        for row in raw["rows"]:
            for backend in backends:
                for condition in Condition:
                    reports.append(EvaluationReport(
                        dataset_id=row["dataset"],
                        category=row.get("category"),
                        backend_id=backend,
                        condition=condition,
                        n_clips=0,
                        runs=1,
                        per_run_accuracies=[float(row[backend][condition.value])],
                    ))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: malformed reference table: {exc}") from exc
    return reports
