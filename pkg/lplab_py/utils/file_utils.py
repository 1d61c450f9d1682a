"""
@ai-metadata {
    "domain": "utilities",
    "description": "File helpers for experiment reports: JSON and CSV writers with full float precision",
    "dependencies": []
}
"""

import csv
import io
import json
import os
from typing import Any, Dict, Iterable, List, Optional, Sequence


def ensure_directory_exists(directory: str) -> None:
    """
    Ensure a directory exists, creating it if necessary.

    Args:
        directory: Directory path to ensure
    """
    if directory:
        os.makedirs(directory, exist_ok=True)


def format_cell(value: Any) -> str:
    """
    Render one CSV cell.

    Floats keep 17 significant digits; lists and mappings become JSON.
    """
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    if isinstance(value, (list, tuple, dict)):
        return json.dumps(value, sort_keys=True)
    return str(value)


def rows_to_csv(rows: Sequence[Dict[str, Any]], columns: Optional[List[str]] = None) -> str:
    """
    Format dict rows as CSV text.

    Args:
        rows: Rows to write
        columns: Column order; the sorted union of row keys when None

    Returns:
        The CSV document
    """
    if columns is None:
        columns = sorted({key for row in rows for key in row})
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_cell(row.get(column)) for column in columns])
    return buffer.getvalue()


def write_text(file_path: str, text: str) -> None:
    ensure_directory_exists(os.path.dirname(file_path))
    with open(file_path, "w", encoding="utf-8") as f:
        f.write(text)


def write_json(file_path: str, data: Any) -> None:
    """Write data as indented JSON with sorted keys."""
    write_text(file_path, json.dumps(data, indent=2, sort_keys=True) + "\n")


def write_csv(file_path: str, rows: Iterable[Dict[str, Any]], columns: Optional[List[str]] = None) -> None:
    write_text(file_path, rows_to_csv(list(rows), columns))
