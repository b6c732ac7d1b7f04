"""Command-line front end and file formats.

Every frequency in a config or data file is the numeric value in units of
2*pi x MHz (``"omega_c": 11`` means 2*pi x 11 MHz). Configs are one JSON
document; unknown keys are rejected.

Exit codes: 0 ok, 2 input error, 3 physics/invariant error, 4 fit failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any

import numpy as np

from .blockade import BlockadeInput, blockade_radius, photons_per_sphere
from .core import LadderParams, PhysicsError
from .fitkit import FitFailure, FitProblem, lm_fit, make_eit_model
from .optical_response import spectrum
from .propagation import biphoton_pulse, check_resolution, propagate
from .quantum_state import (
    LABELS,
    TomographyError,
    TomographyRecord,
    bell_density,
    fidelity,
    linear_inversion,
    mle_reconstruct,
)

EXIT_OK, EXIT_INPUT, EXIT_PHYSICS, EXIT_FIT = 0, 2, 3, 4

UNITS_COMMENT = "# frequencies, detunings and rates in units of 2*pi x MHz; times in ns"
RATE_FIELDS = ("gamma_e", "gamma_r", "gamma_de", "gamma_dr")


class InputError(ValueError):
    """Malformed input file; maps to exit code 2."""


class InvariantError(ValueError):
    """Well-formed input that violates a physical invariant; exit code 3."""


@dataclass
class Grid:
    start: float = -30.0
    stop: float = 30.0
    points: int = 401

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)


@dataclass
class PulseSpec:
    bandwidth: float = 5.0
    samples: int = 2**17
    dt: float = 2.0


@dataclass
class BlockadeSpec:
    c6: float = 32.0
    delta_c: float = 0.0
    omega_c: float = 11.0
    flux: float | None = None
    group_delay_per_length: float | None = None


@dataclass
class FitSpec:
    free: list = field(default_factory=lambda: ["omega_c", "gamma_dr", "delta_shift"])
    initial: dict = field(default_factory=dict)


@dataclass
class Scenario:
    params: LadderParams = field(default_factory=LadderParams)
    gate_params: LadderParams | None = None
    grid: Grid = field(default_factory=Grid)
    pulse: PulseSpec = field(default_factory=PulseSpec)
    blockade: BlockadeSpec = field(default_factory=BlockadeSpec)
    fit: FitSpec = field(default_factory=FitSpec)
    method: str = "mle"
    seed: int = 0


# --- config parsing -----------------------------------------------------------

def _section(cls, data: Any, where: str):
    if not isinstance(data, dict):
        raise InputError(f"{where}: expected a JSON object")
    names = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - names)
    if unknown:
        raise InputError(f"{where}: unknown key(s) {', '.join(where + '.' + k for k in unknown)}")
    return data


def _number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InputError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _ladder(data: Any, where: str) -> LadderParams:
    data = _section(LadderParams, data, where)
    values = {k: _number(v, f"{where}.{k}") for k, v in data.items()}
    try:
        return LadderParams(**values)
    except PhysicsError as exc:
        raise InvariantError(f"{where}: {exc}") from exc


def parse_scenario(text: str) -> Scenario:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"config is not valid JSON (line {exc.lineno}, column {exc.colno}): {exc.msg}") from exc
    doc = _section(Scenario, doc, "config")
    sc = Scenario()
    if "params" in doc:
        sc.params = _ladder(doc["params"], "params")
    if "gate_params" in doc:
        sc.gate_params = _ladder(doc["gate_params"], "gate_params")
    if "grid" in doc:
        g = _section(Grid, doc["grid"], "grid")
        sc.grid = Grid(**{k: _number(v, f"grid.{k}") for k, v in g.items()})
    if "pulse" in doc:
        p = _section(PulseSpec, doc["pulse"], "pulse")
        sc.pulse = PulseSpec(**{k: _number(v, f"pulse.{k}") for k, v in p.items()})
    if "blockade" in doc:
        b = _section(BlockadeSpec, doc["blockade"], "blockade")
        sc.blockade = BlockadeSpec(**{k: _number(v, f"blockade.{k}") for k, v in b.items()})
    if "fit" in doc:
        f = _section(FitSpec, doc["fit"], "fit")
        free = f.get("free", FitSpec().free)
        if not isinstance(free, list) or not all(isinstance(x, str) for x in free):
            raise InputError("fit.free: expected a list of parameter names")
        bad = [x for x in free if x not in {fl.name for fl in fields(LadderParams)}]
        if bad:
            raise InputError(f"fit.free: unknown parameter(s) {bad}")
        initial = _section(LadderParams, f.get("initial", {}), "fit.initial")
        sc.fit = FitSpec(list(free), {k: _number(v, f"fit.initial.{k}") for k, v in initial.items()})
    if "method" in doc:
        if doc["method"] not in ("mle", "linear"):
            raise InputError(f"method: expected 'mle' or 'linear', got {doc['method']!r}")
        sc.method = doc["method"]
    if "seed" in doc:
        seed = doc["seed"]
        if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < 2**64:
            raise InputError("seed: expected an unsigned 64-bit integer")
        sc.seed = seed
    validate(sc)
    return sc


def validate(sc: Scenario) -> None:
    g = sc.grid
    if g.points != int(g.points) or g.points < 2:
        raise InvariantError(f"grid.points must be an integer >= 2, got {g.points:g}")
    g.points = int(g.points)
    if not g.stop > g.start:
        raise InvariantError("grid.stop must exceed grid.start")
    n = sc.pulse.samples
    if n != int(n) or n < 64 or int(n) & (int(n) - 1):
        raise InvariantError(f"pulse.samples must be a power of two >= 64, got {n:g}")
    sc.pulse.samples = int(n)
    if sc.pulse.dt <= 0:
        raise InvariantError("pulse.dt must be > 0")
    if sc.pulse.bandwidth <= 0:
        raise InvariantError("pulse.bandwidth must be > 0")
    if sc.blockade.c6 <= 0:
        raise InvariantError("blockade.c6 must be > 0")
    if sc.blockade.omega_c < 0:
        raise InvariantError("blockade.omega_c must be >= 0")


def load_scenario(path: str | Path, seed: int | None = None) -> Scenario:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc.strerror}") from exc
    sc = parse_scenario(text)
    if seed is not None:
        sc.seed = seed
    return sc


# --- CSV helpers ----------------------------------------------------------------

def format_number(x: float) -> str:
    return f"{x:.6g}"


def write_csv(path: str | Path, header: list[str], columns: list[np.ndarray], comments: list[str] = ()) -> None:
    buf = io.StringIO()
    for c in comments:
        buf.write(c.rstrip("\n") + "\n")
    buf.write(",".join(header) + "\n")
    for row in zip(*columns):
        buf.write(",".join(format_number(float(v)) for v in row) + "\n")
    Path(path).write_text(buf.getvalue(), encoding="utf-8", newline="\n")


def read_csv(path: str | Path) -> tuple[list[str], list[tuple[int, list[str]]]]:
    """Return the header and (line number, fields) rows, skipping leading ``#`` lines."""
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    header = None
    rows = []
    for lineno, line in enumerate(lines, start=1):
        if header is None:
            if not line.strip() or line.startswith("#"):
                continue
            header = [h.strip() for h in next(csv.reader([line]))]
            continue
        if not line.strip():
            continue
        rows.append((lineno, [v.strip() for v in next(csv.reader([line]))]))
    if header is None:
        raise InputError(f"{path}: file is empty (no header row)")
    return header, rows


def read_numeric_csv(path: str | Path, required: list[str], optional: list[str] = ()) -> dict[str, np.ndarray]:
    header, rows = read_csv(path)
    allowed = list(required) + list(optional)
    if header[: len(required)] != list(required) or any(h not in allowed for h in header):
        raise InputError(f"{path}: expected header {','.join(required)}" + (f"[,{','.join(optional)}]" if optional else ""))
    if not rows:
        raise InputError(f"{path}: no data rows")
    data = {h: [] for h in header}
    for lineno, values in rows:
        if len(values) != len(header):
            raise InputError(f"{path}: line {lineno}: expected {len(header)} fields, got {len(values)}")
        for h, v in zip(header, values):
            try:
                x = float(v)
            except ValueError:
                raise InputError(f"{path}: line {lineno}: {h} is not a number ({v!r})") from None
            if not math.isfinite(x):
                raise InputError(f"{path}: line {lineno}: {h} is not finite ({v})")
            data[h].append(x)
    return {h: np.array(v) for h, v in data.items()}


def write_json(path: str | Path, obj: dict) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def read_tomography_csv(path: str | Path) -> TomographyRecord:
    header, rows = read_csv(path)
    if header != ["basis_s1", "basis_s2", "counts"]:
        raise InputError(f"{path}: expected header basis_s1,basis_s2,counts")
    records = []
    for lineno, values in rows:
        if len(values) != 3:
            raise InputError(f"{path}: line {lineno}: expected 3 fields")
        b1, b2, c = values
        if b1 not in LABELS or b2 not in LABELS:
            raise InputError(f"{path}: line {lineno}: basis must be one of {'/'.join(LABELS)}")
        try:
            counts = float(c)
        except ValueError:
            raise InputError(f"{path}: line {lineno}: counts is not a number ({c!r})") from None
        if not math.isfinite(counts) or counts < 0:
            raise InputError(f"{path}: line {lineno}: counts must be finite and >= 0")
        records.append((b1, b2, counts))
    try:
        return TomographyRecord(tuple(records))
    except TomographyError as exc:
        raise InputError(f"{path}: {exc}") from exc


def write_tomography_csv(path: str | Path, rec: TomographyRecord) -> None:
    lines = ["basis_s1,basis_s2,counts"] + [f"{a},{b},{format_number(c)}" for a, b, c in rec.rows]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def sibling(path: str | Path, suffix: str) -> Path:
    return Path(path).with_suffix(suffix)


# --- commands -------------------------------------------------------------------

def cmd_spectrum(config: str | Path, out: str | Path, seed: int | None = None) -> int:
    sc = load_scenario(config, seed)
    try:
        spec = spectrum(sc.grid.values(), sc.params)
    except PhysicsError as exc:
        raise InvariantError(str(exc)) from exc
    write_csv(
        out,
        ["detuning_2pi_mhz", "re_chi", "im_chi", "transmission"],
        [spec.detunings, spec.chi_dimensionless.real, spec.chi_dimensionless.imag, spec.transmission],
        [UNITS_COMMENT, "# chi columns hold the dimensionless susceptibility f = chi k0 / alpha0"],
    )
    return EXIT_OK


def _fit_bounds(free: list[str]) -> tuple[list[float], list[float]]:
    lower = [0.0 if name in RATE_FIELDS + ("od", "a0", "omega_c") else -np.inf for name in free]
    lower = [1e-9 if name == "length" else lo for name, lo in zip(free, lower)]
    return lower, [np.inf] * len(free)


def cmd_fit(data: str | Path, config: str | Path, out: str | Path, seed: int | None = None) -> int:
    sc = load_scenario(config, seed)
    table = read_numeric_csv(data, ["detuning_2pi_mhz", "transmission"], ["sigma"])
    x, y = table["detuning_2pi_mhz"], table["transmission"]
    sigma = table.get("sigma")
    free = sc.fit.free
    initial = [sc.fit.initial.get(name, getattr(sc.params, name)) for name in free]
    lower, upper = _fit_bounds(free)
    initial = [max(v, lo) for v, lo in zip(initial, lower)]
    try:
        problem = FitProblem(make_eit_model(free, sc.params), x, y, initial, sigma=sigma, lower=lower, upper=upper)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    res = lm_fit(problem)
    best = sc.params.replace(**dict(zip(free, map(float, res.params))))
    report = {
        "params": {name: float(v) for name, v in zip(free, res.params)},
        "uncertainties": {name: float(e) for name, e in zip(free, res.uncertainties)},
        "chi2": float(res.chi2),
        "converged": bool(res.converged),
        "iterations": int(res.iterations),
    }
    write_json(out, report)
    curve = spectrum(x if np.all(np.diff(x) > 0) else np.unique(x), best)
    write_csv(
        sibling(out, ".csv"),
        ["detuning_2pi_mhz", "transmission"],
        [curve.detunings, curve.transmission],
        [UNITS_COMMENT, "# fitted transmission curve"],
    )
    return EXIT_OK


def cmd_propagate(config: str | Path, out: str | Path, seed: int | None = None) -> int:
    sc = load_scenario(config, seed)
    gate = sc.gate_params if sc.gate_params is not None else sc.params
    pulse = biphoton_pulse(sc.pulse.bandwidth, sc.pulse.samples, sc.pulse.dt)
    try:
        check_resolution(pulse, sc.params)
        check_resolution(pulse, gate)
        out_eit = propagate(pulse, sc.params)
        out_gate = propagate(pulse, gate)
    except PhysicsError as exc:
        raise InvariantError(str(exc)) from exc
    e_eit = out_eit.energy()
    if e_eit < 1e-15:
        raise InvariantError("EIT reference energy is zero; switch contrast undefined")
    contrast = 1.0 - out_gate.energy() / e_eit
    write_csv(
        out,
        ["time_ns", "intensity_eit", "intensity_gate"],
        [pulse.times, out_eit.intensity, out_gate.intensity],
        [UNITS_COMMENT, f"# input pulse bandwidth {format_number(sc.pulse.bandwidth)}, peak intensity 1"],
    )
    write_json(sibling(out, ".json"), {"switch_contrast": float(contrast)})
    return EXIT_OK


def cmd_tomo(counts: str | Path, out: str | Path, config: str | Path | None = None, seed: int | None = None) -> int:
    sc = load_scenario(config, seed) if config else Scenario()
    rec = read_tomography_csv(counts)
    try:
        if sc.method == "linear":
            rho = linear_inversion(rec)
        else:
            rho = mle_reconstruct(rec).matrix
    except TomographyError as exc:
        raise InputError(str(exc)) from exc
    except PhysicsError as exc:
        raise InvariantError(str(exc)) from exc
    ideal = bell_density(0.0).matrix
    try:
        fid = fidelity(rho, ideal)
    except PhysicsError:
        fid = float(np.real(np.trace(rho @ ideal)))  # non-PSD linear estimate: overlap with the pure target
    write_json(
        out,
        {
            "rho_real": np.real(rho).tolist(),
            "rho_imag": np.imag(rho).tolist(),
            "fidelity_vs_ideal_bell_theta0": float(fid),
            "purity": float(np.real(np.trace(rho @ rho))),
            "method": sc.method,
        },
    )
    return EXIT_OK


def cmd_blockade(config: str | Path, out: str | Path, seed: int | None = None) -> int:
    sc = load_scenario(config, seed)
    b = sc.blockade
    try:
        radius = blockade_radius(BlockadeInput(b.c6, b.delta_c, b.omega_c))
        result = {"radius_um": radius}
        if b.flux is not None and b.group_delay_per_length is not None:
            result["photons_per_sphere"] = photons_per_sphere(b.flux, radius, b.group_delay_per_length)
    except PhysicsError as exc:
        raise InvariantError(str(exc)) from exc
    write_json(out, result)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rydswitch", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config_required=True):
        p.add_argument("--config", required=config_required, help="scenario JSON")
        p.add_argument("--out", required=True, help="output path")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")

    common(sub.add_parser("spectrum", help="transmission spectrum CSV"))
    p = sub.add_parser("fit", help="fit a measured transmission spectrum")
    common(p)
    p.add_argument("--data", required=True, help="CSV detuning_2pi_mhz,transmission[,sigma]")
    common(sub.add_parser("propagate", help="wavepacket through gate-off and gate-on media"))
    p = sub.add_parser("tomo", help="reconstruct a two-photon density matrix")
    common(p, config_required=False)
    p.add_argument("--counts", required=True, help="CSV basis_s1,basis_s2,counts")
    common(sub.add_parser("blockade", help="blockade radius"))
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.command == "spectrum":
            return cmd_spectrum(args.config, args.out, args.seed)
        if args.command == "fit":
            return cmd_fit(args.data, args.config, args.out, args.seed)
        if args.command == "propagate":
            return cmd_propagate(args.config, args.out, args.seed)
        if args.command == "tomo":
            return cmd_tomo(args.counts, args.out, args.config, args.seed)
        return cmd_blockade(args.config, args.out, args.seed)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InvariantError as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_PHYSICS
    except FitFailure as exc:
        print(f"fit failed: {exc}", file=sys.stderr)
        return EXIT_FIT


if __name__ == "__main__":
    sys.exit(main())
