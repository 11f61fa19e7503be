"""
Sweep runner for the convergence study.

For every design and every construction order r the runner walks the n grid in increasing order, computes the
BQ weights once per (design, n, r) and evaluates the worst case error of that rule for every evaluation order s.
Series for different (design, r) are independent and run on a thread pool; the LAPACK calls release the GIL.
"""

import dataclasses
import functools
import math
import os
from concurrent import futures
from kquad._compat import StrEnum
from typing import Dict, List, Sequence, Tuple

import tqdm
from absl import logging
from ml_collections import ConfigDict

from kquad.designs import fill_distance, make_design, separation_radius
from kquad.errors import FitUnavailableError, NotPositiveDefiniteError, NumericalBreakdownError
from kquad.quadrature import abs_weight_sum, bq_weights, worst_case_error
from kquad.utils.logger import Timer

from .config import validate_config
from .fit import fit_rate

THREADS_ENV_VAR = "QUAD_THREADS"
# The floor extrapolation uses the most recent ok cells of a series only.
EXTRAPOLATION_WINDOW = 3

ROW_FIELDS = ("n", "design", "r", "s", "wce", "fill", "sep", "abs_w_sum", "cond", "status")


class RowStatus(StrEnum):
    OK = "ok"
    CLAMPED = "clamped"
    SKIPPED_FLOOR = "skipped-floor"
    SOLVE_FAILED = "solve-failed"
    BREAKDOWN = "breakdown"
    CAPPED = "capped"


@dataclasses.dataclass(frozen=True)
class StudyRow:
    n: int
    design: str
    r: int
    s: int
    wce: float
    fill: float
    sep: float
    abs_w_sum: float
    cond: float
    status: RowStatus

    def to_dict(self) -> Dict:
        return {field: getattr(self, field) for field in ROW_FIELDS}

    @classmethod
    def from_strings(cls, d: Dict[str, str]) -> "StudyRow":
        return cls(
            n=int(d["n"]),
            design=d["design"],
            r=int(d["r"]),
            s=int(d["s"]),
            wce=float(d["wce"]),
            fill=float(d["fill"]),
            sep=float(d["sep"]),
            abs_w_sum=float(d["abs_w_sum"]),
            cond=float(d["cond"]),
            status=RowStatus(d["status"]),
        )


def default_num_workers() -> int:
    value = os.environ.get(THREADS_ENV_VAR)
    if value:
        try:
            workers = int(value)
        except ValueError:
            logging.warning("Ignoring %s=%r, expected a positive integer.", THREADS_ENV_VAR, value)
        else:
            if workers > 0:
                return workers
            logging.warning("Ignoring %s=%r, expected a positive integer.", THREADS_ENV_VAR, value)
    return os.cpu_count() or 1


def _extrapolate(history: List[Tuple[int, float]], n: int) -> float | None:
    try:
        return fit_rate(history[-EXTRAPOLATION_WINDOW:]).predict(n)
    except FitUnavailableError:
        return None


def _run_series(design_label: str, r: int, config: ConfigDict) -> Tuple[List[StudyRow], Timer]:
    timer = Timer()
    rows = []
    history = {s: [] for s in config.orders_s}
    conditioning = []
    capped = False
    nan = float("nan")
    for n in config.n_grid:
        design = make_design(design_label, n)
        fill, sep = fill_distance(design), separation_radius(design)
        row = functools.partial(StudyRow, n=n, design=design_label, r=r, fill=fill, sep=sep, abs_w_sum=nan)

        predicted = _extrapolate(conditioning, n)
        if not capped and predicted is not None and predicted > config.max_condition:
            logging.info(
                "Capping %s r=%d at n=%d: extrapolated condition proxy %.3g exceeds %.3g.",
                design_label,
                r,
                n,
                predicted,
                config.max_condition,
            )
            capped = True
        if capped:
            rows.extend(row(s=s, wce=nan, cond=nan, status=RowStatus.CAPPED) for s in config.orders_s)
            continue

        try:
            with timer("weights"):
                rule = bq_weights(r, config.scale, design, jitter=config.jitter)
        except NotPositiveDefiniteError as e:
            logging.warning("Solve failed, skipping larger n in this series: %s", e)
            rows.extend(row(s=s, wce=nan, cond=nan, status=RowStatus.SOLVE_FAILED) for s in config.orders_s)
            capped = True
            continue
        if rule.condition_proxy > config.max_condition:
            logging.info(
                "Capping %s r=%d at n=%d: condition proxy %.3g exceeds %.3g.",
                design_label,
                r,
                n,
                rule.condition_proxy,
                config.max_condition,
            )
            rows.extend(row(s=s, wce=nan, cond=rule.condition_proxy, status=RowStatus.CAPPED) for s in config.orders_s)
            capped = True
            continue
        conditioning.append((n, rule.condition_proxy))
        row = functools.partial(row, abs_w_sum=abs_weight_sum(rule), cond=rule.condition_proxy)

        for s in config.orders_s:
            if config.extrapolate_floor:
                predicted = _extrapolate(history[s], n)
                if predicted is not None and predicted < config.wce_floor:
                    rows.append(row(s=s, wce=nan, status=RowStatus.SKIPPED_FLOOR))
                    continue
            try:
                with timer("wce"):
                    report = worst_case_error(rule, s)
            except NumericalBreakdownError as e:
                logging.warning("n=%d design=%s r=%d s=%d: %s", n, design_label, r, s, e)
                rows.append(row(s=s, wce=nan, status=RowStatus.BREAKDOWN))
                continue
            if report.clamped:
                status = RowStatus.CLAMPED
            elif not report.resolved or report.wce < config.wce_floor:
                status = RowStatus.SKIPPED_FLOOR
            else:
                status = RowStatus.OK
                history[s].append((n, report.wce))
            rows.append(row(s=s, wce=report.wce, status=status))
    return rows, timer


def sort_rows(rows: Sequence[StudyRow], designs: Sequence[str]) -> List[StudyRow]:
    order = {design: i for i, design in enumerate(designs)}
    return sorted(rows, key=lambda row: (order.get(row.design, len(order)), row.design, row.n, row.r, row.s))


def run_study(config: ConfigDict, num_workers: int | None = None, progress: bool = True) -> List[StudyRow]:
    validate_config(config)
    num_workers = num_workers or default_num_workers()
    series = [(design, r) for design in config.designs for r in config.orders_r]
    logging.info(
        "Running %d series (%d cells) on %d workers.",
        len(series),
        len(series) * len(config.n_grid) * len(config.orders_s),
        num_workers,
    )

    timer = Timer()
    rows = []
    with futures.ThreadPoolExecutor(max_workers=num_workers) as pool:
        jobs = [pool.submit(_run_series, design, r, config) for design, r in series]
        for job in tqdm.tqdm(futures.as_completed(jobs), total=len(jobs), dynamic_ncols=True, disable=not progress):
            series_rows, series_timer = job.result()
            rows.extend(series_rows)
            timer.merge(series_timer)

    for key, total in timer.totals.items():
        logging.info("Time in %s: %.3fs total, %.3gs per call.", key, total, timer.times[key])
    counts = {status: sum(row.status == status for row in rows) for status in RowStatus}
    logging.info("Row status counts: %s", {str(k): v for k, v in counts.items() if v})
    return sort_rows(rows, list(config.designs))


def usable_for_fit(row: StudyRow) -> bool:
    return row.status == RowStatus.OK and math.isfinite(row.wce) and row.wce > 0
