"""Run reports as JSON documents or as their flattened CSV projection."""
import csv
from enum import Enum
import io
import logging
from pathlib import Path
from typing import Any, Iterator, Optional

import numpy as np
from pydantic import BaseModel

from app.core.config import get_settings
from app.schemas.reports import RunReport

logger = logging.getLogger(__name__)


def to_jsonable(value: Any) -> Any:
    """Plain JSON values; complex numbers become [re, im] pairs like matrix entries."""
    if isinstance(value, BaseModel):
        return to_jsonable(value.model_dump(mode="json"))
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Enum):
        return value.value
    return value


def build_report(command: str, parameters: dict, results: dict, seed: Optional[int] = None,
                 runtime: Optional[dict] = None) -> RunReport:
    return RunReport(
        command=command,
        version=get_settings().VERSION,
        parameters=to_jsonable(parameters),
        seed=seed,
        results=to_jsonable(results),
        runtime=to_jsonable(runtime or {}),
    )


def _flatten(prefix: str, value: Any) -> Iterator[tuple[str, Any]]:
    if isinstance(value, dict):
        for key, item in value.items():
            yield from _flatten(f"{prefix}.{key}" if prefix else str(key), item)
    elif isinstance(value, list):
        for index, item in enumerate(value):
            yield from _flatten(f"{prefix}[{index}]", item)
    else:
        yield prefix, value


def render_json(report: RunReport) -> str:
    return report.model_dump_json(indent=2) + "\n"


def render_csv(report: RunReport) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["key", "value"])
    for key, value in _flatten("", report.model_dump(mode="json")):
        writer.writerow([key, "" if value is None else repr(value) if isinstance(value, float) else value])
    return buffer.getvalue()


def write_report(report: RunReport, fmt: str = "json", output: Optional[str] = None) -> str:
    text = render_csv(report) if fmt == "csv" else render_json(report)
    if output:
        Path(output).write_text(text)
        logger.info(f"Report written to {output}")
    return text
