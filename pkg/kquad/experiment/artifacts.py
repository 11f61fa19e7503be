import math
import os
from typing import Dict, List, Sequence

from kquad.utils.logger import CSVWriter, read_csv

from .runner import ROW_FIELDS, StudyRow, usable_for_fit
from .summary import SummaryEntry, render_summary, summarize

ROWS_FILE = "rows.csv"
SUMMARY_FILE = "summary.md"
PLOTDATA_DIR = "plotdata"


def write_rows_csv(path: str, rows: Sequence[StudyRow]) -> None:
    with CSVWriter(path, ROW_FIELDS) as writer:
        writer.write_all(row.to_dict() for row in rows)


def read_rows_csv(path: str) -> List[StudyRow]:
    return [StudyRow.from_strings(d) for d in read_csv(path)]


def write_plotdata(directory: str, rows: Sequence[StudyRow], entries: Sequence[SummaryEntry]) -> List[str]:
    """One log-log series file per (design, r): geometry, weights, wce per s and the fitted lines."""
    paths = []
    for entry in entries:
        series = [row for row in rows if row.design == entry.design and row.r == entry.r]
        orders = list(entry.wce)
        fields = ["n", "fill", "sep", "abs_w_sum"]
        fields += [f"wce_s{s}" for s in orders] + [f"fit_s{s}" for s in orders]
        by_n: Dict[int, Dict] = {}
        for row in series:
            record = by_n.setdefault(row.n, {"n": row.n, "fill": row.fill, "sep": row.sep, "abs_w_sum": row.abs_w_sum})
            record[f"wce_s{row.s}"] = row.wce if usable_for_fit(row) else math.nan
        for record in by_n.values():
            for s in orders:
                record.setdefault(f"wce_s{s}", math.nan)
                fit = entry.wce[s]
                record[f"fit_s{s}"] = math.nan if fit is None else fit.predict(record["n"])

        path = os.path.join(directory, f"{entry.design}_r{entry.r}.csv")
        with CSVWriter(path, fields) as writer:
            writer.write_all(by_n[n] for n in sorted(by_n))
        paths.append(path)
    return paths


def write_summary(path: str, entries: Sequence[SummaryEntry]) -> None:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(render_summary(entries))


def write_study_outputs(out_dir: str, rows: Sequence[StudyRow]) -> Dict[str, str | List[str]]:
    entries = summarize(rows)
    paths = {
        "rows": os.path.join(out_dir, ROWS_FILE),
        "summary": os.path.join(out_dir, SUMMARY_FILE),
    }
    write_rows_csv(paths["rows"], rows)
    write_summary(paths["summary"], entries)
    paths["plotdata"] = write_plotdata(os.path.join(out_dir, PLOTDATA_DIR), rows, entries)
    return paths
