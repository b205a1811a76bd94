"""CSV schemas and the JSON run configuration used by the command line."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import IO, Iterable, Mapping, Sequence

from .affordance import AdjustmentSet, Modality, Task
from .errors import InputError
from .geometry import DEFAULT_EYE_HEIGHT_M, DEFAULT_IPD_M, ObserverFrame
from .psychometrics import BinaryTrial
from .vac import DEFAULT_BETA_DEG, VacMode, VacParams

ACTION_COLUMNS = ("participant_id", "modality", "order_index", "aperture_width_cm", "passed")
ADJUSTMENT_COLUMNS = ("participant_id", "task", "trial_index", "adjusted_width_cm")
ADJUSTMENT_OPTIONAL = ("body_width_cm",)
CURVES_COLUMNS = ("viewing_distance_m", "perceived_distance_m", "perceived_width_m")


@dataclass(frozen=True)
class RunConfig:
    ipd_m: float = DEFAULT_IPD_M
    beta_deg: float = DEFAULT_BETA_DEG
    vac_mode: VacMode = VacMode.HALVED
    viewing_distance_m: float = 2.5
    eye_height_m: float | None = None
    seed: int | None = None

    def __post_init__(self):
        try:
            object.__setattr__(self, "vac_mode", VacMode(str(getattr(self.vac_mode, "value", self.vac_mode)).upper()))
        except ValueError:
            raise InputError(f"vac_mode must be one of {[m.value for m in VacMode]}, got {self.vac_mode!r}") from None
        for name in ("ipd_m", "viewing_distance_m", "eye_height_m"):
            value = getattr(self, name)
            if value is not None and not (isinstance(value, (int, float)) and value > 0):
                raise InputError(f"{name} must be a positive number, got {value!r}")
        if not (isinstance(self.beta_deg, (int, float)) and self.beta_deg >= 0):
            raise InputError(f"beta_deg must be a non-negative number, got {self.beta_deg!r}")
        if self.seed is not None and not isinstance(self.seed, int):
            raise InputError(f"seed must be an integer, got {self.seed!r}")

    @classmethod
    def from_mapping(cls, data: Mapping) -> RunConfig:
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise InputError(f"unknown config keys: {', '.join(unknown)}")
        return cls(**data)

    @classmethod
    def from_file(cls, path) -> RunConfig:
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: invalid JSON ({exc})") from exc
        if not isinstance(data, dict):
            raise InputError(f"{path}: config must be a flat JSON object")
        return cls.from_mapping(data)

    def override(self, **values) -> RunConfig:
        return replace(self, **{k: v for k, v in values.items() if v is not None})

    def observer(self) -> ObserverFrame:
        return ObserverFrame(ipd=self.ipd_m, eye_height=self.eye_height_m or DEFAULT_EYE_HEIGHT_M)

    def vac_params(self) -> VacParams:
        return VacParams(beta=self.beta_deg, mode=self.vac_mode)


def _reader(path, required: Sequence[str], optional: Sequence[str] = ()):
    handle = open(path, newline="")
    reader = csv.DictReader(handle)
    header = reader.fieldnames
    if header is None:
        handle.close()
        raise InputError(f"{path}: empty file")
    header = [h.strip() for h in header]
    missing = [c for c in required if c not in header]
    extra = [c for c in header if c not in required and c not in optional]
    if missing or extra:
        handle.close()
        problems = []
        if missing:
            problems.append(f"missing column(s) {', '.join(missing)}")
        if extra:
            problems.append(f"unexpected column(s) {', '.join(extra)}")
        raise InputError(f"{path}: " + "; ".join(problems))
    reader.fieldnames = header
    return handle, reader


def _float(value, column, row) -> float:
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise InputError(f"{column} is not numeric: {value!r}", row=row) from None
    if not math.isfinite(out):
        raise InputError(f"{column} is not finite: {value!r}", row=row)
    return out


def _int(value, column, row) -> int:
    try:
        return int(value)
    except (TypeError, ValueError):
        raise InputError(f"{column} is not an integer: {value!r}", row=row) from None


def _text(value, column, row) -> str:
    if value is None or not value.strip():
        raise InputError(f"{column} is empty", row=row)
    return value.strip()


def _enum(enum_cls, value, column, row):
    try:
        return enum_cls(_text(value, column, row))
    except ValueError:
        allowed = ", ".join(m.value for m in enum_cls)
        raise InputError(f"{column} must be one of {{{allowed}}}, got {value!r}", row=row) from None


def parse_action_csv(path) -> dict[tuple[str, Modality], list[BinaryTrial]]:
    """Action trials grouped by ``(participant_id, modality)``, sorted by key then order index."""
    handle, reader = _reader(path, ACTION_COLUMNS)
    groups: dict[tuple[str, Modality], list[BinaryTrial]] = {}
    with handle:
        for row_no, row in enumerate(reader, start=1):
            pid = _text(row["participant_id"], "participant_id", row_no)
            modality = _enum(Modality, row["modality"], "modality", row_no)
            order = _int(row["order_index"], "order_index", row_no)
            width = _float(row["aperture_width_cm"], "aperture_width_cm", row_no)
            if not width > 0:
                raise InputError(f"aperture_width_cm must be positive, got {width}", row=row_no)
            passed = (row["passed"] or "").strip()
            if passed not in ("0", "1"):
                raise InputError(f"passed must be 0 or 1, got {row['passed']!r}", row=row_no)
            groups.setdefault((pid, modality), []).append(BinaryTrial(width, passed == "1", order))
    return {
        key: sorted(groups[key], key=lambda t: t.order_index)
        for key in sorted(groups, key=lambda k: (k[0], list(Modality).index(k[1])))
    }


def parse_adjustment_csv(path) -> list[AdjustmentSet]:
    """One :class:`AdjustmentSet` per participant and task, widths in trial order."""
    handle, reader = _reader(path, ADJUSTMENT_COLUMNS, ADJUSTMENT_OPTIONAL)
    rows: dict[tuple[str, Task], list[tuple[int, float]]] = {}
    body: dict[str, float] = {}
    with handle:
        for row_no, row in enumerate(reader, start=1):
            pid = _text(row["participant_id"], "participant_id", row_no)
            task = _enum(Task, row["task"], "task", row_no)
            index = _int(row["trial_index"], "trial_index", row_no)
            width = _float(row["adjusted_width_cm"], "adjusted_width_cm", row_no)
            if not width > 0:
                raise InputError(f"adjusted_width_cm must be positive, got {width}", row=row_no)
            raw_body = (row.get("body_width_cm") or "").strip()
            if raw_body:
                value = _float(raw_body, "body_width_cm", row_no)
                if body.setdefault(pid, value) != value:
                    raise InputError(f"body_width_cm changes within participant {pid}", row=row_no)
            rows.setdefault((pid, task), []).append((index, width))
    order = list(Task)
    return [
        AdjustmentSet(pid, task, tuple(w for _, w in sorted(rows[(pid, task)])), body.get(pid))
        for pid, task in sorted(rows, key=lambda k: (k[0], order.index(k[1])))
    ]


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    if hasattr(value, "value"):
        return str(value.value)
    return "" if value is None else str(value)


def write_rows(out: IO[str], columns: Sequence[str], rows: Iterable[Sequence]) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])


def write_action_csv(out: IO[str], groups: Mapping[tuple[str, Modality], Sequence[BinaryTrial]]) -> None:
    rows = (
        (pid, modality, t.order_index, t.aperture_width, t.passed)
        for (pid, modality), trials in groups.items()
        for t in trials
    )
    write_rows(out, ACTION_COLUMNS, rows)


def write_adjustment_csv(out: IO[str], sets: Sequence[AdjustmentSet]) -> None:
    with_body = any(s.body_width is not None for s in sets)
    columns = ADJUSTMENT_COLUMNS + (ADJUSTMENT_OPTIONAL if with_body else ())
    rows = []
    for s in sets:
        for i, w in enumerate(s.widths):
            row = [s.participant_id, s.task, i, w]
            if with_body:
                row.append(s.body_width)
            rows.append(row)
    write_rows(out, columns, rows)


def write_curves_csv(out: IO[str], rows: Iterable[tuple[float, float, float]]) -> None:
    write_rows(out, CURVES_COLUMNS, rows)


def read_table(path) -> list[dict]:
    """Read any CSV this package writes; numeric cells become floats."""
    with open(path, newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None:
            raise InputError(f"{path}: empty file")
        out = []
        for row in reader:
            parsed = {}
            for key, value in row.items():
                try:
                    parsed[key] = float(value)
                except (TypeError, ValueError):
                    parsed[key] = value
            out.append(parsed)
    return out


def parse_curves_csv(path) -> list[tuple[float, float, float]]:
    handle, reader = _reader(path, CURVES_COLUMNS)
    with handle:
        return [
            tuple(_float(row[c], c, row_no) for c in CURVES_COLUMNS)
            for row_no, row in enumerate(reader, start=1)
        ]

