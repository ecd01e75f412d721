"""Named recipes reproducing the published figures.

Each preset returns ``{label: SweepResult}``; :func:`run_preset` writes one
CSV per label as ``<name>_<label>.csv`` and a single SVG overview.  For the
tables that are not BER curves the ``ber`` column holds the plotted quantity:
the optimal BER with ``rho*`` recorded in ``flag`` (fig4, fig10), ``Lambda``
(fig5) and ``lambda`` (fig9).

``quick=True`` thins the grids and lowers the simulation effort so every
preset finishes in seconds; the CSV layout is unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from ..config import EhConfig, SystemConfig, db_to_linear
from ..geometry import LinkGeometry
from ..montecarlo import simulate_ber
from .experiments import approximation_error, optimize_rho, quadrature_error, rho_grid
from .sweep import SweepResult, SweepRow, SweepSpec, evaluate, ps_and_da, run_sweep

__all__ = ["PRESETS", "Preset", "run_preset"]

ALL_EVALUATORS = ("analytic_L", "analytic_NL", "mc_L", "mc_NL")


@dataclass(frozen=True)
class Options:
    base: SystemConfig
    quick: bool = False
    workers: int = 1

    @property
    def min_errors(self) -> int:
        return 50 if self.quick else 200

    @property
    def max_bits(self) -> int:
        return 10**6 if self.quick else 10**8

    def grid(self, full, quick):
        return tuple(quick if self.quick else full)

    @property
    def rhos(self):
        return (0.5, 0.8, 0.95) if self.quick else tuple(rho_grid(0.05))

    def spec(self, base, axis, grid, label, evaluators=ALL_EVALUATORS, partner=0) -> SweepSpec:
        return SweepSpec(base, axis, grid, evaluators, min_errors=self.min_errors,
                         max_bits=self.max_bits, partner=partner, workers=self.workers, label=label)


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    build: Callable[[Options], dict[str, SweepResult]]
    log_y: bool = True
    x_label: str = "P_s [dB]"
    y_label: str = "BER"


def _sweeps(specs) -> dict[str, SweepResult]:
    return {s.label: run_sweep(s) for s in specs}


def _uniform(base: SystemConfig, lo: float, hi: float) -> SystemConfig:
    return base.with_(geom_sr=LinkGeometry.uniform(lo, hi, base.v),
                      geom_rd=LinkGeometry.uniform(lo, hi, base.v))


def fig3(opt: Options) -> dict[str, SweepResult]:
    """BER against P_s for PS (rho = 0.8) and the DA splits (1,3), (2,2), (3,1)."""
    grid = opt.grid(range(0, 65, 5), (10, 30, 50))
    configs = ps_and_da(opt.base.with_(eh=EhConfig.ps(n_r=4, rho=0.8)))
    return _sweeps(opt.spec(cfg, "ps_db", grid, label) for label, cfg in configs.items())


def _optimal_rows(configs, rhos, opt: Options, axis_values) -> list[SweepRow]:
    rows = []
    for value, cfg in zip(axis_values, configs):
        for model in ("L", "NL"):
            rho, ber = optimize_rho(cfg.with_(model=model), rhos)
            rows.append(SweepRow(float(value), f"analytic_{model}", ber, f"rho*={rho:g}"))
            mc = evaluate(cfg.with_(rho=rho), f"mc_{model}", opt.min_errors, opt.max_bits)
            rows.append(SweepRow(float(value), mc.evaluator, mc.ber, f"rho*={rho:g}", mc.half_width))
    return rows


def fig4(opt: Options) -> dict[str, SweepResult]:
    """Optimal PS split ``rho*`` against P_s for N_r = 1 and N_r = 5."""
    grid = opt.grid(range(0, 65, 10), (20, 60))
    out = {}
    for n_r in (1, 5):
        base = opt.base.with_(eh=EhConfig.ps(n_r=n_r, rho=0.8))
        configs = [base.with_(ps_db=p) for p in grid]
        out[f"PS_Nr{n_r}"] = SweepResult(None, _optimal_rows(configs, opt.rhos, opt, grid))
    return out


def fig5(opt: Options) -> dict[str, SweepResult]:
    """Lambda(chi) at P_t = 30 dB with the saturating harvester and uniform distances."""
    cfg = opt.base.with_(eh=EhConfig.ps(n_r=4, rho=0.8, model="NL"), ps_db=30.0)
    chis = opt.grid((1, 2, 3, 4, 5, 6, 8, 10, 12, 15, 20, 25, 30), (1, 5, 20))
    mc = simulate_ber(cfg, min_errors=2_000 if opt.quick else 100_000, max_bits=opt.max_bits)
    rows = [SweepRow(float(p.chi), "lambda_mc", p.value, p.flag, mc.half_width_95 / mc.ber)
            for p in approximation_error(cfg, chis, mc=mc)]
    rows += [SweepRow(float(p.chi), "lambda_quadrature", p.value, p.flag)
             for p in quadrature_error(cfg, chis)]
    return {"PS_NL": SweepResult(None, rows)}


def fig6(opt: Options) -> dict[str, SweepResult]:
    """BER against N_ip (N_eh = 1, 2) and against N_eh (N_ip = 1, 2) at P_t = 60 dB."""
    grid = opt.grid(range(1, 8), (1, 4))
    base = opt.base.with_(ps_db=60.0)
    specs = []
    for fixed in (1, 2):
        ps = base.with_(eh=EhConfig.ps(n_r=4, rho=0.8))
        specs.append(opt.spec(ps, "n_ip", grid, f"nip_PS_Neh{fixed}", partner=fixed))
        specs.append(opt.spec(base.with_(eh=EhConfig.da(fixed, 1)), "n_ip", grid, f"nip_DA_Neh{fixed}"))
        specs.append(opt.spec(ps, "n_eh", grid, f"neh_PS_Nip{fixed}", partner=fixed))
        specs.append(opt.spec(base.with_(eh=EhConfig.da(1, fixed)), "n_eh", grid, f"neh_DA_Nip{fixed}"))
    return _sweeps(specs)


def fig7(opt: Options) -> dict[str, SweepResult]:
    """BER against rho at P_s = 40, 60 dB, N_eh = 4, N_ip = 2, distances U(1, 2)."""
    grid = opt.grid(rho_grid(0.05), (0.2, 0.5, 0.95))
    base = _uniform(opt.base, 1.0, 2.0)
    specs = []
    for ps_db in (40.0, 60.0):
        cfg = base.with_(ps_db=ps_db)
        specs.append(opt.spec(cfg.with_(eh=EhConfig.ps(n_r=6)), "rho", grid, f"PS_{ps_db:g}dB"))
        specs.append(opt.spec(cfg.with_(eh=EhConfig.da(4, 2)), "rho", grid, f"DA_4_2_{ps_db:g}dB"))
    return _sweeps(specs)


def _distance_configs(opt: Options, p_th_db: float | None = None):
    shared = {} if p_th_db is None else {"p_th": db_to_linear(p_th_db)}
    return {
        "PS": opt.base.with_(eh=EhConfig.ps(n_r=4, rho=0.8, **shared)),
        "DA_3_1": opt.base.with_(eh=EhConfig.da(3, 1, **shared)),
    }


def fig8(opt: Options) -> dict[str, SweepResult]:
    """BER against a common fixed distance, with the U(1, 3) result as the ps_db reference row."""
    grid = opt.grid(np.round(np.arange(1.0, 3.01, 0.2), 10), (1.0, 2.0, 3.0))
    specs = []
    for label, cfg in _distance_configs(opt).items():
        cfg = cfg.with_(ps_db=50.0)
        specs.append(opt.spec(cfg, "distance", grid, f"{label}_fixed"))
        specs.append(opt.spec(cfg, "ps_db", (50.0,), f"{label}_uniform"))
    return _sweeps(specs)


def fig9(opt: Options) -> dict[str, SweepResult]:
    """lambda(d) = BER(uniform) - BER(fixed d) with P_th = 30 dB at P_s = 40, 50 dB."""
    grid = opt.grid(np.round(np.arange(1.0, 3.01, 0.1), 10), (1.0, 2.1, 3.0))
    out = {}
    for label, cfg in _distance_configs(opt, p_th_db=30.0).items():
        for ps_db in (40.0, 50.0):
            c = cfg.with_(ps_db=ps_db)
            rows = []
            for model in ("L", "NL"):
                ref = {e: evaluate(c, f"{e}_{model}", opt.min_errors, opt.max_bits)
                       for e in ("analytic", "mc")}
                fixed = run_sweep(opt.spec(c, "distance", grid, "",
                                           (f"analytic_{model}", f"mc_{model}")))
                for row in fixed.rows:
                    kind = row.evaluator.split("_")[0]
                    r = ref[kind]
                    hw = None
                    if kind == "mc":
                        hw = math.hypot(r.half_width or 0.0, row.half_width or 0.0)
                    flag = row.flag if row.flag == r.flag else f"{r.flag}/{row.flag}"
                    rows.append(SweepRow(row.axis, f"lambda_{kind}_{model}", r.ber - row.ber, flag, hw))
            out[f"{label}_{ps_db:g}dB"] = SweepResult(None, rows)
    return out


def fig10(opt: Options) -> dict[str, SweepResult]:
    """BER against N_r at P_t = 50 dB: PS with rho optimised, DA with N_ip = 1."""
    grid = opt.grid(range(1, 9), (1, 3))
    base = opt.base.with_(ps_db=50.0)
    configs = [base.with_(eh=EhConfig.ps(n_r=n, rho=0.8)) for n in grid]
    out = {"PS_rho_opt": SweepResult(None, _optimal_rows(configs, opt.rhos, opt, grid))}
    rows = []
    for n_r in grid:
        if n_r < 2:
            continue
        cfg = base.with_(eh=EhConfig.da(n_r - 1, 1))
        for ev in ALL_EVALUATORS:
            row = evaluate(cfg, ev, opt.min_errors, opt.max_bits)
            rows.append(SweepRow(float(n_r), ev, row.ber, row.flag, row.half_width))
    out["DA_Nip1"] = SweepResult(None, rows)
    return out


PRESETS: dict[str, Preset] = {
    "fig3": Preset("fig3", fig3.__doc__, fig3),
    "fig4": Preset("fig4", fig4.__doc__, fig4),
    "fig5": Preset("fig5", fig5.__doc__, fig5, x_label="chi", y_label="Lambda"),
    "fig6": Preset("fig6", fig6.__doc__, fig6, x_label="antennas"),
    "fig7": Preset("fig7", fig7.__doc__, fig7, x_label="rho"),
    "fig8": Preset("fig8", fig8.__doc__, fig8, x_label="d"),
    "fig9": Preset("fig9", fig9.__doc__, fig9, log_y=False, x_label="d", y_label="lambda"),
    "fig10": Preset("fig10", fig10.__doc__, fig10, x_label="N_r"),
}


def run_preset(name: str, out_dir, base: SystemConfig | None = None, quick: bool = False,
               workers: int = 1, plot: bool = True) -> dict[str, SweepResult]:
    """Run preset ``name`` and write its CSV files (and an SVG) into ``out_dir``."""
    if name not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    preset = PRESETS[name]
    opt = Options(SystemConfig() if base is None else base, quick=quick, workers=workers)
    results = preset.build(opt)
    out_dir = Path(out_dir)
    for label, result in results.items():
        result.write(out_dir / f"{name}_{label}.csv")
    if plot:
        from .plot import plot_results

        plot_results(results, out_dir / f"{name}.svg", title=name, log_y=preset.log_y,
                     x_label=preset.x_label, y_label=preset.y_label)
    return results
