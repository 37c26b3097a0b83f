"""
Results Writer for moment, scan, reconstruction and convergence tables.
"""
from __future__ import annotations

import json
import math

import numpy as np
import pandas as pd

from spectral_errors import ConfigError

MOMENT_COLUMNS = ["n_nodes", "value", "abs_error", "apriori_bound", "route"]
SCAN_COLUMNS = ["omega0", "sigma", "value", "route", "bound"]
RECONSTRUCT_COLUMNS = ["t", "real", "imag", "abs_error", "route", "n_nodes"]

CSV_DIGITS = 17
PLAIN_DIGITS = 7


def _is_missing(value) -> bool:
    if value is None:
        return True
    if isinstance(value, (float, np.floating)) and math.isnan(value):
        return True
    return False


def format_number(value, digits: int) -> str:
    """Fixed significant-digit text; complex values as re+imj, missing as ''."""
    if _is_missing(value):
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (complex, np.complexfloating)):
        z = complex(value)
        return f"{z.real:.{digits}g}{z.imag:+.{digits}g}j"
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.{digits}g}"
    return str(value)


def _json_value(value):
    if _is_missing(value):
        return None
    if isinstance(value, (complex, np.complexfloating)):
        z = complex(value)
        return {"real": z.real, "imag": z.imag}
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    return value


class ResultsWriter:
    """Renders result tables as csv, json or plain text."""

    def __init__(self, fmt: str = "plain"):
        if fmt not in ("csv", "json", "plain"):
            raise ConfigError(f"unknown output format {fmt!r}")
        self.fmt = fmt

    def frame(self, records: list[dict], columns: list[str]) -> pd.DataFrame:
        """DataFrame with exactly the given columns, in order."""
        df = pd.DataFrame.from_records(records, columns=columns)
        return df.astype(object)

    def render(self, df: pd.DataFrame, extra: list[dict] | None = None) -> str:
        """Render a table; extra carries JSON-only fields per row (e.g. per-point errors)."""
        if self.fmt == "csv":
            text = df.apply(lambda col: col.map(lambda v: format_number(v, CSV_DIGITS)))
            return text.to_csv(index=False, lineterminator="\n")
        if self.fmt == "json":
            rows = []
            for i, record in enumerate(df.to_dict(orient="records")):
                row = {k: _json_value(v) for k, v in record.items()}
                if extra is not None:
                    row.update({k: _json_value(v) for k, v in extra[i].items() if not _is_missing(v)})
                rows.append(row)
            return json.dumps(rows, indent=2) + "\n"
        text = df.apply(lambda col: col.map(lambda v: format_number(v, PLAIN_DIGITS)))
        if len(text) == 0:
            return "(no rows)\n"
        if len(text) == 1:
            return "".join(f"{k}: {v}\n" for k, v in text.iloc[0].items())
        return text.to_string(index=False) + "\n"

    def moment_table(self, records: list[dict]) -> pd.DataFrame:
        return self.frame(records, MOMENT_COLUMNS)

    def scan_table(self, records: list[dict]) -> pd.DataFrame:
        return self.frame(records, SCAN_COLUMNS)

    def reconstruct_table(self, records: list[dict]) -> pd.DataFrame:
        return self.frame(records, RECONSTRUCT_COLUMNS)
