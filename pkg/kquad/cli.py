"""
Command line front end.

Example commands:

quad study --config configs/full.cfg --out output/full
quad study --out output/quick --set n_grid=16,32,64 --set orders_r=1,2
quad weights --n 5 --r 1 --design uniform
quad wce --n 65 --r 4 --s 1 --design nonuniform --method bq
quad geometry --n 65 --design nonuniform
quad rates --r 4 --s 1 --alpha 1 --delta 1
"""

import os
import sys

from absl import app, flags, logging

from kquad.designs import fill_distance, make_design, quasi_uniformity_ratio, separation_radius
from kquad.errors import ConfigError, DesignError, NotPositiveDefiniteError, NumericalBreakdownError
from kquad.experiment import RowStatus, load_config, run_study, write_study_outputs
from kquad.kernels import DEFAULT_SCALE, SUPPORTED_ORDERS, WendlandKernel
from kquad.quadrature import (
    BayesianQuadrature,
    EqualWeights,
    QuadratureMethod,
    abs_weight_sum,
    bq_shortcut_square_error,
    bq_weights,
    worst_case_error,
)
from kquad.theory import FORMULAS, RateInputs

FLAGS = flags.FLAGS
SUBCOMMANDS = ("study", "weights", "wce", "geometry", "rates")

flags.DEFINE_string("config", None, "Path to a flat `key = value` study config.")
flags.DEFINE_string("out", "output/study", "Directory to write study outputs to.")
flags.DEFINE_multi_string("set", [], "Study config override as key=value. May be repeated.")
flags.DEFINE_integer("n", None, "Number of design points.")
flags.DEFINE_float("r", None, "Construction order of the kernel, or the assumed smoothness for `rates`.")
flags.DEFINE_float("s", None, "Evaluation order of the kernel, or the true smoothness for `rates`.")
flags.DEFINE_enum("design", "uniform", ["uniform", "nonuniform"], "Design point configuration.")
flags.DEFINE_float(
    "delta",
    None,
    f"Kernel scale for weights and wce (default {DEFAULT_SCALE}), "
    "or the quasi-uniformity exponent for `rates` (default 1).",
)
flags.DEFINE_enum("method", "bq", ["bq", "equal"], "Rule evaluated by `wce`: Bayesian quadrature or equal weights.")
flags.DEFINE_float("b", None, "Worst case error decay exponent (default r/d).")
flags.DEFINE_float("c", 0.0, "Growth exponent of the absolute weight sum.")
flags.DEFINE_float("a", None, "Separation radius decay exponent (default b/r).")
flags.DEFINE_float("alpha", None, "Fill distance decay exponent (default 1/d).")
flags.DEFINE_integer("d", 1, "Dimension.")

WEIGHT_DIGITS = "{:.12g}"


def _kernel_order(name: str) -> int:
    value = FLAGS[name].value
    if value is None or not float(value).is_integer() or int(value) not in SUPPORTED_ORDERS:
        raise app.UsageError(f"--{name} must be one of {SUPPORTED_ORDERS}, got {value}.")
    return int(value)


def _design():
    if FLAGS.n is None:
        raise app.UsageError("--n is required.")
    try:
        return make_design(FLAGS.design, FLAGS.n)
    except DesignError as e:
        raise app.UsageError(str(e)) from e


def _kernel_scale() -> float:
    scale = DEFAULT_SCALE if FLAGS.delta is None else FLAGS.delta
    if not 0 < scale <= 0.5:
        raise app.UsageError(f"--delta must lie in (0, 0.5] for kernel commands, got {scale}.")
    return scale


def cmd_study() -> int:
    out_dir = FLAGS.out
    try:
        config = load_config(FLAGS.config, FLAGS["set"].value)
    except ConfigError as e:
        logging.error("%s", e)
        return 2
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as e:
        logging.error("Cannot create output directory %s: %s", out_dir, e)
        return 1

    rows = run_study(config)
    try:
        paths = write_study_outputs(out_dir, rows)
    except OSError as e:
        logging.error("Failed writing study outputs to %s: %s", out_dir, e)
        return 1
    logging.info("Wrote %s and %s", paths["rows"], paths["summary"])
    logging.info("Wrote %d plot data files to %s", len(paths["plotdata"]), os.path.dirname(paths["plotdata"][0]))

    failed = sum(row.status == RowStatus.SOLVE_FAILED for row in rows)
    if failed:
        logging.warning("%d cells failed to solve.", failed)
        return 1
    return 0


def cmd_weights() -> int:
    r = _kernel_order("r")
    design, scale = _design(), _kernel_scale()
    try:
        rule = bq_weights(r, scale, design)
    except NotPositiveDefiniteError as e:
        logging.error("%s", e)
        print(f"solve failed at pivot {e.index} with value {e.pivot:.6g}", file=sys.stderr)
        return 1

    z = WendlandKernel(r, scale).mean(design.points)
    print(f"# {design.label} design, n={design.n}, r={r}, delta={scale}")
    print("x_i\tw_i")
    for x, w in zip(rule.points, rule.weights, strict=True):
        print(f"{WEIGHT_DIGITS.format(x)}\t{WEIGHT_DIGITS.format(w)}")
    print(f"sum |w_i| = {WEIGHT_DIGITS.format(abs_weight_sum(rule))}")
    print(f"condition proxy = {WEIGHT_DIGITS.format(rule.condition_proxy)}")
    print(f"z^T w = {WEIGHT_DIGITS.format(float(z @ rule.weights))} (nonnegative)")
    return 0


def cmd_wce() -> int:
    r, s = _kernel_order("r"), _kernel_order("s")
    design, scale = _design(), _kernel_scale()
    method: QuadratureMethod = BayesianQuadrature(r, scale) if FLAGS.method == "bq" else EqualWeights(scale)
    try:
        rule = method.build(design)
        report = worst_case_error(rule, s)
    except NotPositiveDefiniteError as e:
        logging.error("%s", e)
        print(f"solve failed at pivot {e.index} with value {e.pivot:.6g}", file=sys.stderr)
        return 1
    except NumericalBreakdownError as e:
        logging.error("%s", e)
        return 1

    print(f"# {FLAGS.method} rule on {design.label} design, n={design.n}, r={r}, s={s}, delta={scale}")
    print(f"wce = {report.wce:.12g}")
    print(f"raw e^2 = {report.raw_square:.12g}{' (clamped)' if report.clamped else ''}")
    print(f"rounding bound = {report.rounding_bound:.3g}{'' if report.resolved else ' (unresolved)'}")
    print(f"condition proxy = {report.condition_proxy:.12g}")
    if FLAGS.method == "bq" and s == r:
        print(f"shortcut e^2 = {bq_shortcut_square_error(rule):.12g}")
    return 0


def cmd_geometry() -> int:
    design = _design()
    print(f"# {design.label} design, n={design.n}")
    print(f"fill distance = {fill_distance(design):.12g}")
    print(f"separation radius = {separation_radius(design):.12g}")
    print(f"quasi-uniformity ratio = {quasi_uniformity_ratio(design):.12g}")
    return 0


def cmd_rates() -> int:
    if FLAGS.r is None or FLAGS.s is None:
        raise app.UsageError("`rates` requires --r and --s.")
    try:
        inputs = RateInputs(
            r=FLAGS.r,
            s=FLAGS.s,
            b=FLAGS.b,
            c=FLAGS.c,
            a=FLAGS.a,
            alpha=FLAGS.alpha,
            delta=1.0 if FLAGS.delta is None else FLAGS.delta,
            d=FLAGS.d,
        )
    except ValueError as e:
        raise app.UsageError(str(e)) from e

    print("# predicted decay exponents p, error = O(n^-p)")
    errors = []
    for name, value in inputs.predict().items():
        if isinstance(value, Exception):
            errors.append(value)
            print(f"{name}\t{FORMULAS[name]}\t{value}")
        else:
            print(f"{name}\t{FORMULAS[name]}\t{value:.6g}")
    if errors:
        raise app.UsageError(str(errors[0]))
    return 0


COMMANDS = {
    "study": cmd_study,
    "weights": cmd_weights,
    "wce": cmd_wce,
    "geometry": cmd_geometry,
    "rates": cmd_rates,
}


def main(argv):
    if len(argv) != 2 or argv[1] not in COMMANDS:
        raise app.UsageError(f"Expected exactly one subcommand from {SUBCOMMANDS}, got {argv[1:]}.")
    return COMMANDS[argv[1]]()


def run():
    app.run(main)


if __name__ == "__main__":
    run()
