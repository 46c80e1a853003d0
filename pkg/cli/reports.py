"""
CSV output and the per-run JSON report
"""

import csv
import hashlib
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

import click
from pydantic import BaseModel, Field

import settings
from errors import XStableError
from logging_config import get_cli_logger

logger = get_cli_logger()


class RunReport(BaseModel):
    """Machine-readable record of one command run"""
    command: str
    status: str = "pass"
    model_digest: Optional[str] = None
    parameters: Dict[str, Any] = Field(default_factory=dict)
    outputs: List[str] = Field(default_factory=list)
    summary: Dict[str, Any] = Field(default_factory=dict)
    error: Optional[str] = None
    wall_time: float = 0.0

    @property
    def failed(self) -> bool:
        return self.status == "fail"


def format_value(value) -> str:
    """17 significant digits for floats, lowercase booleans, labels as given"""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        # adding 0.0 turns -0.0 into 0.0
        return format(value + 0.0, f".{settings.CSV_SIGNIFICANT_DIGITS}g")
    return str(value)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(value) for value in row])
    logger.info(f"Wrote {path}")
    return path


def file_digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def write_report(report: RunReport, out_dir: Path) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / settings.REPORT_FILE
    path.write_text(report.model_dump_json(indent=2) + "\n")
    return path


@contextmanager
def run_report(command: str, out_dir: Path, parameters: Dict[str, Any]):
    """
    Yield a RunReport and write it exactly once when the block ends. Errors
    are recorded verbatim and re-raised.
    """
    report = RunReport(command=command, parameters=parameters)
    started = time.perf_counter()
    try:
        yield report
    except XStableError as e:
        report.status = "error"
        report.error = str(e)
        logger.error(f"{command} failed: {e}")
        raise
    except click.ClickException as e:
        report.status = "error"
        report.error = e.format_message()
        raise
    except Exception as e:
        report.status = "error"
        report.error = f"{type(e).__name__}: {e}"
        logger.exception(f"{command} crashed: {e}")
        raise
    finally:
        report.wall_time = round(time.perf_counter() - started, 6)
        write_report(report, out_dir)
