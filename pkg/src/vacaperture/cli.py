"""Command-line entry point: ``vacaperture <command> ...``.

Exit codes: 0 success, 1 bad input or configuration, 2 fit or solver failure.
"""

from __future__ import annotations

import argparse
import contextlib
import sys
from pathlib import Path

from . import io
from .affordance import (
    Modality,
    Task,
    adjusted_record,
    make_record,
    perceptual_threshold,
    summarize_records,
    tost_equivalence,
)
from .errors import FitError, InputError, SolverError, VacApertureError
from .psychometrics import action_threshold, fit_psychometric
from .reproduce import format_report, reproduce
from .simulate import SimConfig, simulate_cohort
from .vac import distance_curves, vac_adjust_threshold, vac_inverse_width

EXIT_OK, EXIT_INPUT, EXIT_FIT = 0, 1, 2

FIT_COLUMNS = ("participant_id", "modality", "pse_cm", "slope_per_cm", "guess_rate", "lapse_rate",
               "log_likelihood", "converged", "n_trials")
THRESHOLD_COLUMNS = ("participant_id", "task", "perceptual_threshold_cm", "n_adjustments")
RATIO_COLUMNS = ("participant_id", "task", "action_threshold_cm", "perceptual_threshold_cm",
                 "adjusted_threshold_cm", "ratio_raw", "ratio_adjusted")
VAC_COLUMNS = ("depicted_width_cm", "perceived_width_cm")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="flat JSON run configuration")
    parser.add_argument("--out", type=Path, help="output file (default: stdout)")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--beta", type=float, help="vergence offset in degrees")
    parser.add_argument("--ipd", type=float, help="interpupillary distance in meters")
    parser.add_argument("--distance", type=float, help="viewing distance in meters")
    parser.add_argument("--mode", choices=["HALVED", "LITERAL", "halved", "literal"])


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="vacaperture", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("fit", help="fit passability curves per participant and modality")
    p.add_argument("action_csv", type=Path)
    _common(p)

    p = sub.add_parser("thresholds", help="mean adjusted width per participant and task")
    p.add_argument("adjustment_csv", type=Path)
    _common(p)

    p = sub.add_parser("ratios", help="raw and VAC-adjusted affordance ratios")
    p.add_argument("action_csv", type=Path)
    p.add_argument("adjustment_csv", type=Path)
    p.add_argument("--bound", type=float, default=0.1, help="equivalence bound in ratio units")
    _common(p)

    p = sub.add_parser("vac-adjust", help="perceived width of depicted apertures (cm)")
    p.add_argument("widths", type=float, nargs="+")
    p.add_argument("--inverse", action="store_true", help="treat widths as perceived; report depicted")
    _common(p)

    p = sub.add_parser("curves", help="perceived distance and width over viewing distance")
    p.add_argument("--width", type=float, default=30.0, help="depicted width in cm")
    p.add_argument("--min", dest="d_min", type=float, default=0.5)
    p.add_argument("--max", dest="d_max", type=float, default=5.0)
    p.add_argument("--step", type=float, default=0.1)
    _common(p)

    p = sub.add_parser("simulate", help="write a synthetic cohort (action.csv, adjustments.csv)")
    p.add_argument("--participants", type=int, default=60)
    _common(p)

    p = sub.add_parser("reproduce", help="recompute derived quantities with pass/fail checks")
    _common(p)
    return parser


def load_config(args) -> io.RunConfig:
    config = io.RunConfig.from_file(args.config) if args.config else io.RunConfig()
    return config.override(
        ipd_m=args.ipd,
        beta_deg=args.beta,
        vac_mode=args.mode.upper() if args.mode else None,
        viewing_distance_m=args.distance,
        seed=args.seed,
    )


@contextlib.contextmanager
def _output(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as handle:
            yield handle


def _fit_all(groups):
    return {key: fit_psychometric(trials) for key, trials in groups.items()}


def cmd_fit(args, config) -> int:
    fits = _fit_all(io.parse_action_csv(args.action_csv))
    rows = [
        (pid, modality, f.pse, f.slope, f.guess_rate, f.lapse_rate, f.log_likelihood, f.converged, f.n_trials)
        for (pid, modality), f in fits.items()
    ]
    with _output(args.out) as out:
        io.write_rows(out, FIT_COLUMNS, rows)
    return EXIT_OK


def cmd_thresholds(args, config) -> int:
    sets = io.parse_adjustment_csv(args.adjustment_csv)
    rows = [(s.participant_id, s.task, perceptual_threshold(s), len(s.widths)) for s in sets]
    with _output(args.out) as out:
        io.write_rows(out, THRESHOLD_COLUMNS, rows)
    return EXIT_OK


def build_records(action_csv, adjustment_csv, config: io.RunConfig):
    """Per-participant records joined from both files, VAC correction applied."""
    fits = _fit_all(io.parse_action_csv(action_csv))
    perceptual: dict[str, dict[Task, float]] = {}
    body: dict[str, float | None] = {}
    for s in io.parse_adjustment_csv(adjustment_csv):
        perceptual.setdefault(s.participant_id, {})[s.task] = perceptual_threshold(s)
        body[s.participant_id] = s.body_width
    observer, params = config.observer(), config.vac_params()
    records = []
    for pid in sorted(perceptual):
        try:
            ur = action_threshold(fits[(pid, Modality.UR)])
            vr = action_threshold(fits[(pid, Modality.VR)])
        except KeyError as exc:
            raise InputError(f"participant {pid} lacks {exc.args[0][1].value} action trials") from None
        record = make_record(pid, ur, vr, perceptual[pid], body_width=body[pid])
        records.append(adjusted_record(record, observer, params, config.viewing_distance_m))
    return records


def cmd_ratios(args, config) -> int:
    records = build_records(args.action_csv, args.adjustment_csv, config)
    rows = [
        (r.participant_id, t, r.action_for(t), r.perceptual_thresholds[t], r.adjusted_perceptual_thresholds[t],
         r.ratios_raw[t], r.ratios_adjusted[t])
        for r in records
        for t in Task
        if t in r.perceptual_thresholds
    ]
    with _output(args.out) as out:
        io.write_rows(out, RATIO_COLUMNS, rows)

    if len(records) >= 2:
        log = sys.stderr
        for label, adjusted in (("raw", False), ("adjusted", True)):
            for task, s in summarize_records(records, adjusted=adjusted).items():
                print(f"{label:8} {task.value:8} mean={s.mean:.4f} SE={s.standard_error:.4f} "
                      f"95% CI=[{s.ci95_low:.4f}, {s.ci95_high:.4f}] n={s.n}", file=log)
        base = [r for r in records if Task.UR_PRE in r.ratios_adjusted]
        for task in (Task.VR_PRE, Task.VR_POST):
            paired = [r for r in base if task in r.ratios_adjusted]
            if len(paired) < 2:
                continue
            res = tost_equivalence(
                [r.ratios_adjusted[Task.UR_PRE] for r in paired], [r.ratios_adjusted[task] for r in paired], args.bound
            )
            print(f"TOST adjusted UR_PRE vs {task.value} (+/-{args.bound}): t_lower={res.t_lower:.3f} "
                  f"p_lower={res.p_lower:.4g} t_upper={res.t_upper:.3f} p_upper={res.p_upper:.4g} "
                  f"g={res.effect_size_g:.3f} equivalent={res.equivalent}", file=log)
    return EXIT_OK


def cmd_vac_adjust(args, config) -> int:
    observer, params = config.observer(), config.vac_params()
    rows = []
    for w in args.widths:
        if args.inverse:
            rows.append((vac_inverse_width(w, config.viewing_distance_m, observer, params), w))
        else:
            rows.append((w, vac_adjust_threshold(w, config.viewing_distance_m, observer, params)))
    with _output(args.out) as out:
        io.write_rows(out, VAC_COLUMNS, rows)
    return EXIT_OK


def cmd_curves(args, config) -> int:
    rows = distance_curves(args.width, (args.d_min, args.d_max), args.step, config.observer(), config.vac_params())
    with _output(args.out) as out:
        io.write_curves_csv(out, rows)
    return EXIT_OK


def cmd_simulate(args, config) -> int:
    if args.out is None:
        raise InputError("simulate needs --out DIR")
    if args.participants < 1:
        raise InputError("--participants must be at least 1")
    base = SimConfig(
        seed=config.seed or 0,
        vac=config.vac_params(),
        observer_frame=config.observer(),
        viewing_distance=config.viewing_distance_m,
    )
    cohort = simulate_cohort(args.participants, seed=config.seed or 0, base_config=base)
    args.out.mkdir(parents=True, exist_ok=True)
    with open(args.out / "action.csv", "w", newline="") as out:
        io.write_action_csv(out, cohort.action_trials)
    with open(args.out / "adjustments.csv", "w", newline="") as out:
        io.write_adjustment_csv(out, cohort.adjustments)
    return EXIT_OK


def cmd_reproduce(args, config) -> int:
    lines = reproduce(config)
    print(format_report(lines, config))
    if args.out is not None:
        with open(args.out, "w", newline="") as out:
            io.write_rows(out, ("check", "value", "expected", "status", "note"),
                          ((l.check, l.value, l.expected, l.status, l.note) for l in lines))
    return EXIT_OK


COMMANDS = {
    "fit": cmd_fit,
    "thresholds": cmd_thresholds,
    "ratios": cmd_ratios,
    "vac-adjust": cmd_vac_adjust,
    "curves": cmd_curves,
    "simulate": cmd_simulate,
    "reproduce": cmd_reproduce,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args)
        return COMMANDS[args.command](args, config)
    except (FitError, SolverError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FIT
    except (VacApertureError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
