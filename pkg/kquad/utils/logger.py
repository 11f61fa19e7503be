import csv
import math
import os
import time
from collections import defaultdict
from contextlib import contextmanager
from typing import Dict, Iterable, List, Sequence

from absl import logging

# 17 significant digits round-trip every double exactly.
FLOAT_FORMAT = "{:.17g}"


def format_value(value) -> str:
    if isinstance(value, float):
        return "nan" if math.isnan(value) else FLOAT_FORMAT.format(value)
    return str(value)


class CSVWriter:
    """
    Writes rows of a fixed set of columns to a csv file, creating parent directories as needed.
    Floats are written with enough digits to be parsed back bit-for-bit.
    """

    def __init__(self, path: str, fieldnames: Sequence[str]):
        self.path = path
        self.fieldnames = list(fieldnames)
        self._file_handler = None
        self._writer = None
        self.num_rows = 0

    def open(self) -> "CSVWriter":
        directory = os.path.dirname(self.path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        # UTF-8 with LF line endings on every platform.
        self._file_handler = open(self.path, "w", encoding="utf-8", newline="")
        self._writer = csv.DictWriter(self._file_handler, fieldnames=self.fieldnames, lineterminator="\n")
        self._writer.writeheader()
        return self

    def write(self, row: Dict) -> None:
        if self._writer is None:
            raise RuntimeError(f"CSVWriter for {self.path} is not open.")
        missing = set(self.fieldnames) - set(row)
        if missing:
            raise ValueError(f"Row is missing columns {sorted(missing)}.")
        self._writer.writerow({k: format_value(row[k]) for k in self.fieldnames})
        self.num_rows += 1

    def write_all(self, rows: Iterable[Dict]) -> None:
        for row in rows:
            self.write(row)

    def close(self) -> None:
        if self._file_handler is not None:
            self._file_handler.close()
            self._file_handler = None
            self._writer = None
            logging.info("Wrote %d rows to %s", self.num_rows, self.path)

    def __enter__(self) -> "CSVWriter":
        return self.open()

    def __exit__(self, *exc) -> None:
        self.close()


def read_csv(path: str) -> List[Dict[str, str]]:
    with open(path, "r", encoding="utf-8", newline="") as f:
        return list(csv.DictReader(f))


class Timer:
    """Accumulates wall time per key. Not thread safe: give each worker its own timer and merge them."""

    def __init__(self):
        self._times = defaultdict(float)
        self._counts = defaultdict(int)

    @property
    def times(self) -> Dict[str, float]:
        return {k: self._times[k] / self._counts[k] for k in self._times}

    @property
    def totals(self) -> Dict[str, float]:
        return dict(self._times)

    def merge(self, other: "Timer") -> None:
        for k, v in other._times.items():
            self._times[k] += v
            self._counts[k] += other._counts[k]

    @contextmanager
    def __call__(self, key: str):
        start_time = time.perf_counter()
        try:
            yield None
        finally:
            self._times[key] += time.perf_counter() - start_time
            self._counts[key] += 1
