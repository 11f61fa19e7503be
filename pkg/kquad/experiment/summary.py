"""
Exponent tables for a finished study.

Fitted exponents are log-log slopes (negative means decay). Theory columns are the predicted decay rates p of
kquad.theory turned into slopes -p, so the two can be read side by side.
"""

import dataclasses
from typing import Dict, List, Sequence

from absl import logging

from kquad.errors import DomainError, FitUnavailableError, GuaranteeVoidError
from kquad.theory import RateInputs

from .fit import RateFit, fit_rate
from .runner import StudyRow, usable_for_fit


@dataclasses.dataclass(frozen=True)
class Prediction:
    slope: float | None = None
    note: str = ""


@dataclasses.dataclass(frozen=True)
class SummaryEntry:
    design: str
    r: int
    wce: Dict[int, RateFit | None]
    fill: RateFit | None
    sep: RateFit | None
    abs_w_sum: RateFit | None
    theory: Dict[int, Dict[str, Prediction]]


THEORY_COLUMNS = ("bq", "weight_bound", "sep_bound")


def _try_fit(pairs, what: str) -> RateFit | None:
    try:
        return fit_rate(pairs)
    except FitUnavailableError as e:
        logging.warning("No fit for %s: %s", what, e)
        return None


def _prediction_from(value: float | DomainError) -> Prediction:
    if isinstance(value, GuaranteeVoidError):
        return Prediction(note="void")
    if isinstance(value, DomainError):
        return Prediction(note="n/a")
    return Prediction(slope=-value)


def _theory(r: int, s: int, fill: RateFit | None, sep: RateFit | None, wce_rr, weights) -> Dict[str, Prediction]:
    if s > r:
        # No predictor covers adaptation to greater smoothness; it is only measured.
        return {column: Prediction(note="s>r") for column in THEORY_COLUMNS}
    predictions = dict.fromkeys(THEORY_COLUMNS, Prediction(note="no fit"))
    if fill is None or sep is None:
        return predictions
    inputs = RateInputs.from_fit(
        r,
        s,
        fill_slope=fill.slope,
        sep_slope=sep.slope,
        wce_slope=None if wce_rr is None else wce_rr.slope,
        weight_slope=None if weights is None else weights.slope,
    )
    predicted = inputs.predict()
    predictions["bq"] = _prediction_from(predicted["bq_wellspecified" if s == r else "bq_misspecified"])
    # Without a fit at s = r, b would fall back to its optimal default rather than a measured rate.
    if wce_rr is not None:
        predictions["sep_bound"] = _prediction_from(predicted["sep_bound"])
        if weights is not None:
            predictions["weight_bound"] = _prediction_from(predicted["weight_bound"])
    return predictions


def summarize(rows: Sequence[StudyRow]) -> List[SummaryEntry]:
    designs = list(dict.fromkeys(row.design for row in rows))
    entries = []
    for design in designs:
        design_rows = [row for row in rows if row.design == design]
        for r in sorted({row.r for row in design_rows}):
            r_rows = [row for row in design_rows if row.r == r]
            # Geometry and weights do not depend on s; take one value per n.
            per_n = {}
            for row in r_rows:
                per_n.setdefault(row.n, row)
            label = f"{design} r={r}"
            fill = _try_fit([(n, row.fill) for n, row in per_n.items()], f"{label} fill distance")
            sep = _try_fit([(n, row.sep) for n, row in per_n.items()], f"{label} separation radius")
            weights = _try_fit([(n, row.abs_w_sum) for n, row in per_n.items()], f"{label} abs weight sum")
            wce = {}
            for s in sorted({row.s for row in r_rows}):
                pairs = [(row.n, row.wce) for row in r_rows if row.s == s and usable_for_fit(row)]
                wce[s] = _try_fit(pairs, f"{label} s={s}")
            theory = {s: _theory(r, s, fill, sep, wce.get(r), weights) for s in wce}
            entries.append(SummaryEntry(design, r, wce, fill, sep, weights, theory))
    return entries


def _slope(fit: RateFit | None) -> str:
    return "n/a" if fit is None else f"{fit.slope:.3f}"


def _prediction(prediction: Prediction) -> str:
    return prediction.note if prediction.slope is None else f"{prediction.slope:.3f}"


def render_summary(entries: Sequence[SummaryEntry]) -> str:
    lines = [
        "# Convergence study summary",
        "",
        "Fitted exponents are least squares slopes of ln(value) against ln(n); an error decaying as O(n^-p) shows",
        "a slope of -p. Theory columns give predicted slopes -p: `bq` is the Bayesian quadrature rate",
        "(alpha r when s = r, alpha [r - (r - s)/delta] when s < r, with alpha and delta from the fill and",
        "separation fits), `weight_bound` uses b from the s = r fit and c from the abs weight sum fit,",
        "`sep_bound` uses b and a from the separation fit. `void` marks delta <= 1 - s/r; `s>r` has no predictor.",
        "",
    ]
    for entry in entries:
        lines.append(f"## {entry.design}, r = {entry.r}")
        lines.append("")
        lines.append(
            f"h = O(n^{_slope(entry.fill)}), q = O(n^{_slope(entry.sep)}), "
            f"sum |w_i| = O(n^{_slope(entry.abs_w_sum)})"
        )
        lines.append("")
        lines.append("| s | wce exponent | points | residual rms | " + " | ".join(THEORY_COLUMNS) + " |")
        lines.append("|---|---|---|---|" + "---|" * len(THEORY_COLUMNS))
        for s, fit in entry.wce.items():
            points = "0" if fit is None else str(fit.points_used)
            rms = "n/a" if fit is None else f"{fit.residual_rms:.2e}"
            theory = " | ".join(_prediction(entry.theory[s][column]) for column in THEORY_COLUMNS)
            lines.append(f"| {s} | {_slope(fit)} | {points} | {rms} | {theory} |")
        lines.append("")
    return "\n".join(lines)
