"""Named experiments: run configs, sweep parameters, write CSV and manifests.

A run turns one :class:`~posnerspin.config.ExperimentConfig` into an optional
time series (coherence, concurrence, singlet/triplet populations of observed
pairs) plus optional tables (transition spectrum, relaxation comparison).
Presets bundle the configurations behind the shipped fig<N> scenarios; each
preset resolves to one or more named variants.

Output discipline: CSV floats are written with repr-exact precision
(%.17g), rows ordered by the time grid, columns ordered by the config, and
no timestamps or RNG anywhere, so reruns are byte-identical.
"""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable

import numpy as np

from ._version import __version__
from .config import (
    TIMESERIES_QUANTITIES,
    ExperimentConfig,
    config_sha256,
    validate,
)
from .dynamics import (
    EigenPropagator,
    TimeGrid,
    brute_force_pair,
    pair_series,
    singlet_triplet_populations,
)
from .errors import ConfigError, PosnerSpinError, UnknownPresetError
from .hamiltonian import (
    GAMMA_BAR_MHZ_PER_T,
    J_P_H_HZ,
    FieldSpec,
    build_hamiltonian,
    coupling_topology,
    pair_coupling,
    phosphate_hydrogen_system,
    posner_system,
)
from .measures import coherence_bi, concurrence
from .relaxation import isotope_comparison
from .transitions import CouplingSpec, frequency_spectrum

#: Grid indices checked when a config requests the brute-force cross-check.
ORACLE_CHECK_POINTS = 25
ORACLE_STATE_TOL = 1e-9
ORACLE_COLUMN_TOL = 1e-8


class TimeSeries:
    """A time grid plus named, finite, equal-length value columns."""

    def __init__(self, times: np.ndarray, columns: dict[str, np.ndarray]):
        self.times = np.asarray(times, dtype=float)
        self.columns: dict[str, np.ndarray] = {}
        if self.times.ndim != 1 or self.times.size < 1:
            raise ValueError("times must be a non-empty 1d array")
        if not np.isfinite(self.times).all():
            raise ValueError("times contain non-finite values")
        for name, values in columns.items():
            arr = np.asarray(values, dtype=float)
            if arr.shape != self.times.shape:
                raise ValueError(
                    f"column {name!r} has shape {arr.shape}, expected {self.times.shape}"
                )
            if not np.isfinite(arr).all():
                raise ValueError(f"column {name!r} contains non-finite values")
            self.columns[name] = arr

    @property
    def column_names(self) -> list[str]:
        return list(self.columns)


@dataclass(frozen=True)
class Table:
    """Small rectangular result (spectrum rows, relaxation rows)."""

    columns: tuple[str, ...]
    rows: tuple[tuple, ...]


@dataclass
class RunResult:
    config: ExperimentConfig
    timeseries: TimeSeries | None
    tables: dict[str, Table]
    extras: dict[str, float]


# Propagators are pure functions of the physics fields; cache the expensive
# eigendecompositions across variants and repeated runs.
_PROP_CACHE: dict[tuple, EigenPropagator] = {}
_PROP_LOCK = threading.Lock()


def _propagator(config: ExperimentConfig) -> EigenPropagator:
    key = (
        config.species,
        config.doping,
        config.b0_tesla,
        config.topology,
        config.j_scale,
        config.j_p_li_hz,
        config.j_li_li_hz,
        config.j_p_h_hz,
    )
    with _PROP_LOCK:
        cached = _PROP_CACHE.get(key)
    if cached is not None:
        return cached
    if config.species == "posner":
        system = posner_system(config.doping)
        couplings = coupling_topology(
            topology=config.topology,
            doping=config.doping,
            scale=config.j_scale,
            j_p_li_hz=config.j_p_li_hz,
            j_li_li_hz=config.j_li_li_hz,
        )
    else:
        system = phosphate_hydrogen_system()
        couplings = pair_coupling(config.j_p_h_hz * config.j_scale)
    h = build_hamiltonian(system, FieldSpec(config.b0_tesla), couplings)
    prop = EigenPropagator(h)
    with _PROP_LOCK:
        _PROP_CACHE.setdefault(key, prop)
        return _PROP_CACHE[key]


def _resolve_pair(system, pair: tuple[str, str], what: str) -> tuple[int, int]:
    try:
        return (system.index_of(pair[0]), system.index_of(pair[1]))
    except KeyError as exc:
        raise ConfigError(f"pairs.{what}: {exc.args[0]}") from None


def _oracle_check(prop, entangled, observed, times, states) -> None:
    idx = np.unique(np.round(np.linspace(0, times.size - 1, ORACLE_CHECK_POINTS)).astype(int))
    for i in idx:
        reference = brute_force_pair(prop, prop, entangled, observed, times[i])
        dev = np.abs(reference.rho - states[i].rho).max()
        if dev > ORACLE_STATE_TOL:
            raise PosnerSpinError(
                f"oracle check failed at t={times[i]!r}: state deviation {dev:.3e}"
            )
        for fast, slow in (
            (concurrence(states[i]), concurrence(reference)),
            (coherence_bi(states[i]), coherence_bi(reference)),
        ):
            if abs(fast - slow) > ORACLE_COLUMN_TOL:
                raise PosnerSpinError(
                    f"oracle check failed at t={times[i]!r}: column deviation "
                    f"{abs(fast - slow):.3e}"
                )


def run(config: ExperimentConfig) -> RunResult:
    """Execute one configuration and return its time series and tables."""
    validate(config)
    ts_quantities = [q for q in config.quantities if q in TIMESERIES_QUANTITIES]
    timeseries = None
    tables: dict[str, Table] = {}
    extras: dict[str, float] = {}

    prop = None
    if ts_quantities or "transition_spectrum" in config.quantities:
        prop = _propagator(config)

    if ts_quantities:
        system = prop.system
        entangled = _resolve_pair(system, config.entangled, "entangled")
        observed = [_resolve_pair(system, p, "observed") for p in config.observed]
        times = TimeGrid(config.t_start, config.t_end, config.n_points).times

        series_by_pair = []
        for obs in observed:
            states = pair_series(prop, prop, entangled, obs, times)
            if config.oracle_check:
                _oracle_check(prop, entangled, obs, times, states)
            series_by_pair.append(states)

        columns: dict[str, np.ndarray] = {}
        for quantity in ts_quantities:
            for pair_labels, states in zip(config.observed, series_by_pair):
                suffix = f"{pair_labels[0]}_{pair_labels[1]}"
                if quantity == "coherence":
                    columns[f"coherence_{suffix}"] = np.array(
                        [coherence_bi(s) for s in states]
                    )
                elif quantity == "concurrence":
                    columns[f"concurrence_{suffix}"] = np.array(
                        [concurrence(s) for s in states]
                    )
                else:
                    pops = np.array(
                        [singlet_triplet_populations(s) for s in states]
                    )
                    for j, name in enumerate(("pS", "pT0", "pTp", "pTm")):
                        columns[f"{name}_{suffix}"] = pops[:, j]
        timeseries = TimeSeries(times, columns)

    if "transition_spectrum" in config.quantities:
        h = build_hamiltonian(
            prop.system,
            FieldSpec(config.b0_tesla),
            _couplings_for(config, prop.system),
        )
        spec = frequency_spectrum(
            h, CouplingSpec.uniform(len(prop.system), config.alpha), config.tol_degeneracy
        )
        tables["spectrum"] = Table(
            columns=("site", "site_label", "omega_rad_s", "frobenius_norm"),
            rows=tuple((r.site, r.site_label, r.omega_rad_s, r.frobenius_norm) for r in spec),
        )

    if "relaxation_table" in config.quantities:
        case6, case7, ratio = isotope_comparison(
            b0_tesla=config.b0_tesla,
            j7_hz=config.relax_j7_hz,
            tau6_s=config.relax_tau6_s,
            tau7_s=config.relax_tau7_s,
        )
        tables["relaxation"] = Table(
            columns=(
                "isotope",
                "spin",
                "j_hz",
                "tau_s",
                "omega_li_rad_s",
                "omega_p_rad_s",
                "delta_omega_rad_s",
                "rate_per_s",
                "lifetime_s",
            ),
            rows=tuple(
                (
                    c.isotope,
                    c.spin,
                    c.j_hz,
                    c.tau_s,
                    c.omega_li_rad_s,
                    c.omega_p_rad_s,
                    c.delta_omega_rad_s,
                    c.rate_per_s,
                    c.lifetime_s,
                )
                for c in (case6, case7)
            ),
        )
        extras["lifetime_ratio_6li_over_7li"] = ratio

    return RunResult(config=config, timeseries=timeseries, tables=tables, extras=extras)


def _couplings_for(config: ExperimentConfig, system):
    if config.species == "posner":
        return coupling_topology(
            topology=config.topology,
            doping=config.doping,
            scale=config.j_scale,
            j_p_li_hz=config.j_p_li_hz,
            j_li_li_hz=config.j_li_li_hz,
        )
    return pair_coupling(config.j_p_h_hz * config.j_scale)


SWEEP_PARAMETERS = ("J_scale", "B0")


def sweep(
    config: ExperimentConfig, parameter: str, values: list[float]
) -> list[tuple[str, ExperimentConfig]]:
    """Tagged configs with one physics knob swept; a single value equals run."""
    if parameter not in SWEEP_PARAMETERS:
        raise ConfigError(
            f"unknown sweep parameter {parameter!r}; expected one of {SWEEP_PARAMETERS}"
        )
    if not values:
        raise ConfigError("sweep needs at least one value")
    out = []
    for v in values:
        if parameter == "J_scale":
            variant = replace(config, j_scale=float(v))
        else:
            variant = replace(config, b0_tesla=float(v))
        validate(variant)
        out.append((f"{parameter}_{v:g}", variant))
    return out


# ----------------------------------------------------------------------
# Preset registry


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    build: Callable[[], list[tuple[str | None, ExperimentConfig]]]


def _transfer_pairs() -> tuple[tuple[str, str], ...]:
    return (("P0", "P0"), ("P3", "P3"), ("P4", "P4"))


def _fig2() -> list[tuple[str | None, ExperimentConfig]]:
    return sweep(ExperimentConfig(), "J_scale", [1, 10, 100])


def _fig34() -> list[tuple[str | None, ExperimentConfig]]:
    return [
        (top, ExperimentConfig(topology=top))
        for top in ("symmetric", "weak_asymmetry", "strong_asymmetry")
    ]


def _fig5() -> list[tuple[str | None, ExperimentConfig]]:
    return [
        (None, ExperimentConfig(observed=_transfer_pairs(), quantities=("concurrence",)))
    ]


def _fig6() -> list[tuple[str | None, ExperimentConfig]]:
    return [
        (
            top,
            ExperimentConfig(
                topology=top,
                observed=(("P3", "P3"), ("P4", "P4")),
                quantities=("concurrence",),
            ),
        )
        for top in ("symmetric", "weak_asymmetry")
    ]


def _fig7() -> list[tuple[str | None, ExperimentConfig]]:
    return [
        ("pure", ExperimentConfig()),
        ("li6", ExperimentConfig(doping="Li6")),
        ("li7", ExperimentConfig(doping="Li7")),
    ]


def _fig8(doping: str) -> Callable[[], list[tuple[str | None, ExperimentConfig]]]:
    # Phosphorus couplings at the top of the illustrative decade; the faster
    # z-correlation exchange makes the singlet and triplet-zero populations
    # move together once the dopant has dephased the transverse correlations.
    def build() -> list[tuple[str | None, ExperimentConfig]]:
        return [
            (None, ExperimentConfig(doping=doping, j_scale=3.0, quantities=("populations",)))
        ]

    return build


#: Low field chosen so the proton-phosphorus Larmor mismatch equals the
#: angular coupling 2 pi J, putting the spin pair in the mixing regime.
LOW_FIELD_TESLA = J_P_H_HZ / (
    (GAMMA_BAR_MHZ_PER_T["1H"] - GAMMA_BAR_MHZ_PER_T["31P"]) * 1e6
)


def _fig9(field: float) -> Callable[[], list[tuple[str | None, ExperimentConfig]]]:
    def build() -> list[tuple[str | None, ExperimentConfig]]:
        return [
            (
                None,
                ExperimentConfig(
                    species="phosphate_h",
                    b0_tesla=field,
                    quantities=("populations", "concurrence"),
                ),
            )
        ]

    return build


def _spectrum() -> list[tuple[str | None, ExperimentConfig]]:
    return [(None, ExperimentConfig(quantities=("transition_spectrum",)))]


def _relaxation() -> list[tuple[str | None, ExperimentConfig]]:
    return [(None, ExperimentConfig(quantities=("relaxation_table",)))]


PRESETS: dict[str, Preset] = {
    p.name: p
    for p in (
        Preset(
            "fig2_jsweep",
            "pure cluster, symmetric couplings scaled by 1/10/100: coherence and "
            "concurrence of the entangled pair",
            _fig2,
        ),
        Preset(
            "fig3_fig4_asymmetry",
            "symmetric vs weakly vs strongly asymmetric couplings: coherence and "
            "concurrence of the entangled pair",
            _fig34,
        ),
        Preset(
            "fig5_transfer",
            "entanglement transfer: concurrence of (P0,P0), (P3,P3) and (P4,P4)",
            _fig5,
        ),
        Preset(
            "fig6_transfer_asymmetry",
            "transfer under symmetric vs weakly asymmetric couplings",
            _fig6,
        ),
        Preset(
            "fig7_doping",
            "entangled-pair coherence and concurrence for pure, 6Li and 7Li clusters",
            _fig7,
        ),
        Preset("fig8_pure", "singlet/triplet populations, pure cluster", _fig8("none")),
        Preset("fig8_li6", "singlet/triplet populations, 6Li-doped cluster", _fig8("Li6")),
        Preset("fig8_li7", "singlet/triplet populations, 7Li-doped cluster", _fig8("Li7")),
        Preset(
            "fig9_high_field",
            "phosphate-proton molecule at 50 uT: frozen pT+/pT- subspace",
            _fig9(50e-6),
        ),
        Preset(
            "fig9_low_field",
            "phosphate-proton molecule with Zeeman comparable to the coupling",
            _fig9(LOW_FIELD_TESLA),
        ),
        Preset(
            "transition_spectrum",
            "per-site transition frequencies and weights of the pure cluster",
            _spectrum,
        ),
        Preset(
            "relaxation_table",
            "scalar-relaxation lifetimes of phosphorus next to 6Li vs 7Li",
            _relaxation,
        ),
    )
}


def preset_variants(name: str) -> list[tuple[str | None, ExperimentConfig]]:
    preset = PRESETS.get(name)
    if preset is None:
        raise UnknownPresetError(
            f"unknown preset {name!r}; run list-presets for the registry"
        )
    return preset.build()


# ----------------------------------------------------------------------
# Output files


def _fmt(value) -> str:
    if isinstance(value, float):
        return "%.17g" % value
    return str(value)


def write_timeseries_csv(path: Path, series: TimeSeries) -> dict:
    names = series.column_names
    lines = ["t_s," + ",".join(names)]
    data = [series.times] + [series.columns[n] for n in names]
    for row in zip(*data):
        lines.append(",".join("%.17g" % x for x in row))
    path.write_text("\n".join(lines) + "\n", newline="")
    return {"kind": "timeseries", "rows": series.times.size, "columns": ["t_s"] + names}


def write_table_csv(path: Path, table: Table) -> dict:
    lines = [",".join(table.columns)]
    for row in table.rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n", newline="")
    return {"kind": "table", "rows": len(table.rows), "columns": list(table.columns)}


def run_to_files(
    config: ExperimentConfig,
    run_name: str,
    outdir: Path,
    preset: str | None = None,
    variant: str | None = None,
) -> list[Path]:
    """Run one config and write its CSV outputs plus a manifest."""
    import json

    result = run(config)
    outdir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    files: dict[str, dict] = {}

    if result.timeseries is not None:
        path = outdir / f"{run_name}.csv"
        files[path.name] = write_timeseries_csv(path, result.timeseries)
        written.append(path)
    for table_name, table in result.tables.items():
        path = outdir / f"{run_name}__{table_name}.csv"
        files[path.name] = write_table_csv(path, table)
        written.append(path)

    manifest = {
        "engine": "posnerspin",
        "engine_version": __version__,
        "preset": preset,
        "variant": variant,
        "config_sha256": config_sha256(config),
        "files": files,
        "extras": result.extras,
    }
    mpath = outdir / f"{run_name}.manifest.json"
    mpath.write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n", newline="")
    written.append(mpath)
    return written


def run_variants(
    items: list[tuple[str, str | None, str | None, ExperimentConfig]],
    outdir: Path,
    jobs: int = 1,
) -> list[Path]:
    """Run (run_name, preset, variant, config) items, optionally in parallel.

    Results are independent files, so the level of parallelism cannot change
    any output byte.
    """
    if jobs <= 1 or len(items) <= 1:
        out: list[Path] = []
        for run_name, preset, variant, cfg in items:
            out.extend(run_to_files(cfg, run_name, outdir, preset, variant))
        return out
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        futures = [
            pool.submit(run_to_files, cfg, run_name, outdir, preset, variant)
            for run_name, preset, variant, cfg in items
        ]
        out = []
        for f in futures:
            out.extend(f.result())
        return out
