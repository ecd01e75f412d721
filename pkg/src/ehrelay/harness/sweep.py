"""Parameter sweeps over analytic and simulated evaluators with CSV output."""

from __future__ import annotations

import csv
import io
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

from ..analytic import analytic_ber
from ..config import ConfigError, EhConfig, SystemConfig
from ..geometry import LinkGeometry
from ..montecarlo import simulate_ber

__all__ = [
    "AXES",
    "CSV_HEADER",
    "EVALUATORS",
    "FAILED",
    "MONTE_CARLO",
    "SweepResult",
    "SweepRow",
    "SweepSpec",
    "apply_axis",
    "evaluate",
    "ps_and_da",
    "read_csv",
    "run_sweep",
]

log = logging.getLogger(__name__)

AXES = ("ps_db", "rho", "n_ip", "n_eh", "n_r", "distance")
EVALUATORS = ("analytic_L", "analytic_NL", "mc_L", "mc_NL")
CSV_HEADER = ("axis", "evaluator", "ber", "flag", "half_width")
MONTE_CARLO = "monte-carlo"
FAILED = "failed"


@dataclass(frozen=True)
class SweepSpec:
    """One curve family: a base configuration varied along ``axis``.

    Antenna axes keep the other antenna group of ``base`` fixed.  In PS mode
    ``n_ip`` and ``n_eh`` both set ``n_r = n_ip + n_eh`` where the partner
    count is read from ``partner`` (the PS relay uses every antenna for both).
    """

    base: SystemConfig
    axis: str
    grid: tuple[float, ...]
    evaluators: tuple[str, ...] = ("analytic_L", "analytic_NL")
    output_path: Path | None = None
    min_errors: int = 200
    max_bits: int = 10**8
    partner: int = 0
    workers: int = 1
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "grid", tuple(float(g) for g in self.grid))
        object.__setattr__(self, "evaluators", tuple(self.evaluators))
        if self.output_path is not None:
            object.__setattr__(self, "output_path", Path(self.output_path))
        if self.axis not in AXES:
            raise ConfigError(f"axis must be one of {AXES}, got {self.axis!r}")
        if not self.grid:
            raise ConfigError("sweep grid is empty")
        if not self.evaluators:
            raise ConfigError("no evaluators requested")
        unknown = [e for e in self.evaluators if e not in EVALUATORS]
        if unknown:
            raise ConfigError(f"unknown evaluators {unknown}; choose from {EVALUATORS}")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        for value in self.grid:
            apply_axis(self.base, self.axis, value, self.partner)


@dataclass(frozen=True)
class SweepRow:
    axis: float
    evaluator: str
    ber: float
    flag: str
    half_width: float | None = None

    @property
    def failed(self) -> bool:
        return self.flag == FAILED


@dataclass
class SweepResult:
    """Rows of one curve family; ``spec`` is ``None`` for derived tables."""

    spec: SweepSpec | None
    rows: list[SweepRow] = field(default_factory=list)

    @property
    def failures(self) -> int:
        return sum(row.failed for row in self.rows)

    def curve(self, evaluator: str) -> tuple[list[float], list[float]]:
        pts = [(r.axis, r.ber) for r in self.rows if r.evaluator == evaluator]
        return [p[0] for p in pts], [p[1] for p in pts]

    def write(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_csv())
        return path

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in self.rows:
            writer.writerow([
                repr(r.axis), r.evaluator, repr(r.ber), r.flag,
                "" if r.half_width is None else repr(r.half_width),
            ])
        return buf.getvalue()


def _integer(value: float, name: str) -> int:
    if value != int(value) or value < 1:
        raise ConfigError(f"{name} must be a positive integer, got {value}")
    return int(value)


def apply_axis(base: SystemConfig, axis: str, value: float, partner: int = 0) -> SystemConfig:
    """``base`` with the swept quantity set to ``value``."""
    eh = base.eh
    try:
        if axis == "ps_db":
            return base.with_(ps_db=float(value))
        if axis == "rho":
            if eh.mode == "DA":
                return base  # the dedicated-antenna relay does not split power
            return base.with_(rho=float(value))
        if axis == "distance":
            return base.with_(geom_sr=LinkGeometry.deterministic(value, base.v),
                              geom_rd=LinkGeometry.deterministic(value, base.v))
        count = _integer(value, axis)
        if axis == "n_r":
            if eh.mode == "DA":
                if count <= eh.n_eh:
                    raise ConfigError(f"n_r={count} leaves no information antenna")
                return base.with_(eh=replace(eh, n_ip=count - eh.n_eh, n_r=count))
            return base.with_(n_r=count)
        if eh.mode == "DA":
            key = "n_ip" if axis == "n_ip" else "n_eh"
            fields = {key: count}
            fields["n_r"] = count + (eh.n_eh if key == "n_ip" else eh.n_ip)
            return base.with_(eh=replace(eh, **fields))
        return base.with_(n_r=count + partner)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc


def evaluate(config: SystemConfig, evaluator: str, min_errors: int = 200,
             max_bits: int = 10**8) -> SweepRow:
    """Run one evaluator on one configuration; failures become flagged rows."""
    kind, model = evaluator.split("_")
    cfg = config.with_(model=model)
    try:
        if kind == "analytic":
            out = analytic_ber(cfg)
            if not math.isfinite(out.ber):
                raise FloatingPointError("non-finite BER")
            return SweepRow(math.nan, evaluator, float(out.ber), out.method)
        est = simulate_ber(cfg, min_errors=min_errors, max_bits=max_bits)
        return SweepRow(math.nan, evaluator, est.ber, MONTE_CARLO, est.half_width_95)
    except (ArithmeticError, ValueError, RuntimeError) as exc:
        log.warning("%s failed: %s", evaluator, exc)
        return SweepRow(math.nan, evaluator, math.nan, FAILED)


def _task(args):
    config, evaluator, min_errors, max_bits = args
    return evaluate(config, evaluator, min_errors, max_bits)


def run_sweep(spec: SweepSpec) -> SweepResult:
    """Evaluate every (grid value, evaluator) pair and write the CSV if requested.

    Rows come out in grid order with evaluators in the order requested, no
    matter how work is distributed over ``spec.workers`` processes.
    """
    points = [(value, apply_axis(spec.base, spec.axis, value, spec.partner)) for value in spec.grid]
    tasks = [(cfg, ev, spec.min_errors, spec.max_bits) for _, cfg in points for ev in spec.evaluators]
    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            outcomes = list(pool.map(_task, tasks))
    else:
        outcomes = [_task(t) for t in tasks]
    axis_values = [value for value, _ in points for _ in spec.evaluators]
    rows = [replace(row, axis=value) for value, row in zip(axis_values, outcomes)]
    result = SweepResult(spec, rows)
    if spec.output_path is not None:
        result.write(spec.output_path)
    return result


def read_csv(path) -> list[SweepRow]:
    """Rows of a CSV written by :func:`run_sweep`."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != CSV_HEADER:
            raise ValueError(f"unexpected header {header}")
        return [
            SweepRow(float(a), ev, float(b), flag, float(hw) if hw else None)
            for a, ev, b, flag, hw in reader
        ]


def ps_and_da(base: SystemConfig, splits=((1, 3), (2, 2), (3, 1))) -> dict[str, SystemConfig]:
    """The PS relay of ``base`` and DA relays with the given ``(n_eh, n_ip)`` splits."""
    eh = base.eh
    shared = dict(model=eh.model, eta=eh.eta, p_th=eh.p_th)
    out = {f"PS_rho{eh.rho:g}": base.with_(eh=EhConfig.ps(n_r=eh.n_r, rho=eh.rho, **shared))}
    for n_eh, n_ip in splits:
        out[f"DA_{n_eh}_{n_ip}"] = base.with_(eh=EhConfig.da(n_eh, n_ip, **shared))
    return out
