import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Union

from records.exceptions import SchemaViolation
from records.schemas import get_check

__all__ = ("ValidationReport", "Violation", "validate_file")

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Violation:
    line: int
    message: str
    field: Optional[str] = None

    def __str__(self):
        where = f" ({self.field})" if self.field else ""
        return f"line {self.line}{where}: {self.message}"


@dataclass
class ValidationReport:
    schema: str
    records: int = 0
    violations: List[Violation] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations


def validate_file(path: Union[str, Path], schema: str) -> ValidationReport:
    """Check every non-blank line; the file is only read."""
    check = get_check(schema)
    report = ValidationReport(schema)
    with Path(path).open("r", encoding="utf-8") as handle:
        for number, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            report.records += 1
            try:
                check(json.loads(line))
            except json.JSONDecodeError as exc:
                report.violations.append(Violation(number, f"invalid JSON: {exc.msg}"))
            except SchemaViolation as exc:
                report.violations.append(Violation(number, str(exc), exc.field))
    logger.info(f"{path}: {report.records} {schema} records, {len(report.violations)} violations")
    return report
