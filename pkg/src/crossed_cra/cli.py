"""Command-line interface.

Subcommands: ``spectrum``, ``overlaps``, ``bound-states``,
``oracle-compare``, ``wavepacket``.  Configuration comes from an INI file
(``--config``) overridden by flags; every output file starts with a
comment header echoing the fully resolved configuration.

Exit codes::

    0  success
    1  other library error
    2  configuration / usage error
    3  parameters not two-photon resonant (overlaps)
    4  tolerance exceeded (oracle-compare, wavepacket)
    5  I/O error
"""

from __future__ import annotations

import argparse
import configparser
import dataclasses
import logging
import math
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .bound_states import feshbach_resonances, search_bound_states, solve_bound_states
from .dark_state import overlaps
from .errors import ConfigError, CrossedCRAError, NotResonant, ToleranceExceeded
from .lattice_oracle import stationary_scatter, wavepacket_transport
from .model import DEFAULT_PARAMS, Chain, SystemParams, band
from .output import render, write_svg
from .scattering import as_rows, full_solution, packet_averaged_rates, spectrum

logger = logging.getLogger("crossed_cra")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CONFIG = 2
EXIT_NOT_RESONANT = 3
EXIT_TOLERANCE = 4
EXIT_IO = 5

ORACLE_TOL = 1e-8
WAVEPACKET_TOL = 1e-2
EXCLUSION = 1e-6

PARAM_FIELDS = [f.name for f in dataclasses.fields(SystemParams)]


@dataclass
class RunConfig:
    params: SystemParams = DEFAULT_PARAMS
    grid: tuple | None = None  # (e_min, e_max, n_points); None -> chain-B band, 2001 points
    outputs: tuple = ("spectrum",)
    oracle_n_half: int = 200
    oracle_points: int = 200
    output_format: str = "csv"
    output_path: str | None = None
    svg: bool = False
    e0: float = 1.0
    sigma_k: float = 0.05 * math.pi
    packet_n_half: int | None = None
    t_final: float | None = None

    def resolved_grid(self) -> tuple[float, float, int]:
        if self.grid is not None:
            return self.grid
        b_band = band(self.params, Chain.B)
        return (b_band.lower_edge, b_band.upper_edge, 2001)

    def energies(self) -> np.ndarray:
        e_min, e_max, n = self.resolved_grid()
        return np.linspace(e_min, e_max, n)

    def header(self) -> dict:
        e_min, e_max, n = self.resolved_grid()
        head = {"tool": f"crossed-cra {__version__}", "command": ",".join(self.outputs)}
        head.update({f"params.{k}": v for k, v in self.params.as_dict().items()})
        head.update({"grid.e_min": e_min, "grid.e_max": e_max, "grid.n_points": n})
        if "oracle_compare" in self.outputs:
            head.update({"oracle.n_half": self.oracle_n_half, "oracle.points": self.oracle_points})
        if "wavepacket" in self.outputs:
            head.update(
                {
                    "wavepacket.e0": self.e0,
                    "wavepacket.sigma_k": self.sigma_k,
                    "wavepacket.n_half": "auto" if self.packet_n_half is None else self.packet_n_half,
                    "wavepacket.t_final": "auto" if self.t_final is None else self.t_final,
                }
            )
        head["format"] = self.output_format
        return head


def parse_grid(text: str) -> tuple[float, float, int]:
    """Parse ``Emin:Emax:N``.  ``N = 1`` requires ``Emin == Emax``."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid must look like Emin:Emax:N, got {text!r}")
    try:
        e_min, e_max, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"grid {text!r}: {exc}") from None
    return validate_grid(e_min, e_max, n)


def validate_grid(e_min, e_max, n):
    if not (math.isfinite(e_min) and math.isfinite(e_max)):
        raise ConfigError("grid bounds must be finite")
    if n == 1 and e_min == e_max:
        return (e_min, e_max, 1)
    if n < 2:
        raise ConfigError(f"grid needs n_points >= 2, got {n}")
    if not e_min < e_max:
        raise ConfigError(f"grid needs e_min < e_max, got {e_min} >= {e_max}")
    return (e_min, e_max, n)


_SECTIONS = {
    "params": {name: float for name in PARAM_FIELDS},
    "grid": {"e_min": float, "e_max": float, "n_points": int},
    "output": {"format": str, "path": str, "svg": bool},
    "oracle": {"n_half": int, "points": int},
    "wavepacket": {"e0": float, "sigma_k": float, "n_half": int, "t_final": float},
}


def _line_of(text, section, key):
    current = None
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if stripped.startswith("[") and stripped.endswith("]"):
            current = stripped[1:-1].strip()
        elif current == section and stripped.split("=")[0].split(":")[0].strip() == key:
            return lineno
    return None


def load_config_file(path: str) -> dict:
    """Read an INI config into ``{section: {key: value}}`` with typed values."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    out = {}
    for section in parser.sections():
        if section not in _SECTIONS:
            raise ConfigError(f"{path}: unknown section [{section}]")
        fields = _SECTIONS[section]
        out[section] = {}
        for key, raw in parser.items(section):
            where = f"{path}:{_line_of(text, section, key)}"
            if key not in fields:
                raise ConfigError(f"{where}: unknown key {section}.{key}")
            if raw.strip() in ("", "auto"):
                continue
            kind = fields[key]
            try:
                if kind is bool:
                    value = parser.getboolean(section, key)
                else:
                    value = kind(raw.strip())
            except ValueError:
                raise ConfigError(f"{where}: {section}.{key} = {raw!r} is not a valid {kind.__name__}") from None
            out[section][key] = value
    return out


def resolve_config(args: argparse.Namespace, command: str) -> RunConfig:
    file_cfg = load_config_file(args.config) if args.config else {}
    params = DEFAULT_PARAMS.as_dict()
    params.update(file_cfg.get("params", {}))
    for name in PARAM_FIELDS:
        flag = getattr(args, name, None)
        if flag is not None:
            params[name] = flag
    try:
        system = SystemParams(**params)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid parameters: {exc}") from None

    cfg = RunConfig(params=system, outputs=(command.replace("-", "_"),))
    grid = file_cfg.get("grid", {})
    if grid:
        missing = {"e_min", "e_max", "n_points"} - grid.keys()
        if missing:
            raise ConfigError(f"[grid] is missing {sorted(missing)}")
        cfg.grid = validate_grid(grid["e_min"], grid["e_max"], grid["n_points"])
    if args.grid:
        cfg.grid = parse_grid(args.grid)

    output = file_cfg.get("output", {})
    cfg.output_format = args.format or output.get("format", "csv")
    if cfg.output_format not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {cfg.output_format!r}")
    cfg.output_path = args.out or output.get("path")
    cfg.svg = args.svg or output.get("svg", False)
    if cfg.svg and not cfg.output_path:
        raise ConfigError("--svg needs --out (the plot is written next to the data file)")

    oracle = file_cfg.get("oracle", {})
    oracle_flag = args.n_half if command == "oracle-compare" else None
    cfg.oracle_n_half = oracle_flag or oracle.get("n_half", 200)
    cfg.oracle_points = getattr(args, "points", None) or oracle.get("points", 200)

    packet = file_cfg.get("wavepacket", {})
    cfg.e0 = getattr(args, "e0", None) or packet.get("e0", 1.0)
    cfg.sigma_k = getattr(args, "sigma_k", None) or packet.get("sigma_k", 0.05 * math.pi)
    if command == "wavepacket" and args.n_half:
        cfg.packet_n_half = args.n_half
    else:
        cfg.packet_n_half = packet.get("n_half")
    cfg.t_final = getattr(args, "t_final", None) or packet.get("t_final")
    if cfg.oracle_n_half < 5 or cfg.oracle_points < 1:
        raise ConfigError("oracle n_half must be >= 5 and points >= 1")
    return cfg


def _emit(cfg: RunConfig, columns, rows, notes=()):
    text = render(cfg.output_format, cfg.header(), columns, rows, notes)
    if cfg.output_path:
        with open(cfg.output_path, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _svg(cfg, x, series, ylabel):
    if cfg.svg:
        write_svg(Path(cfg.output_path).with_suffix(".svg"), x, series, ylabel=ylabel)


def _grid_solutions(cfg, **kwargs):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        sols = spectrum(cfg.params, cfg.energies(), **kwargs)
    notes = [str(w.message) for w in caught]
    for note in notes:
        logger.warning(note)
    return sols, notes


SPECTRUM_COLUMNS = ["E", "T", "R", "L", "T+R", "s_re", "s_im", "r_re", "r_im", "edge"]


def run_spectrum(cfg: RunConfig) -> int:
    sols, notes = _grid_solutions(cfg)
    rows = as_rows(sols)
    _emit(cfg, SPECTRUM_COLUMNS, rows, notes)
    _svg(
        cfg,
        [r["E"] for r in rows],
        {"T": [r["T"] for r in rows], "R": [r["R"] for r in rows], "T+R": [r["T+R"] for r in rows]},
        "rate",
    )
    return EXIT_OK


OVERLAP_COLUMNS = ["E", "T", "D", "B+", "B-", "D_frac", "B+_frac", "B-_frac"]


def run_overlaps(cfg: RunConfig) -> int:
    sols, notes = _grid_solutions(cfg)
    rows = []
    for sol in sols:
        raw = overlaps(cfg.params, sol)
        row = {"E": sol.energy, "T": sol.t_rate, "D": raw.dark, "B+": raw.bright_plus, "B-": raw.bright_minus}
        try:
            frac = overlaps(cfg.params, sol, normalize=True)
            row.update({"D_frac": frac.dark, "B+_frac": frac.bright_plus, "B-_frac": frac.bright_minus})
        except ZeroDivisionError:
            pass
        rows.append(row)
    notes = list(notes) + [
        "D, B+, B- are |<E|X>|^2 with unit incident amplitude; *_frac divide by the intersection population"
    ]
    _emit(cfg, OVERLAP_COLUMNS, rows, notes)
    _svg(
        cfg,
        [r["E"] for r in rows],
        {"T": [r["T"] for r in rows], "|<E|D>|^2": [r["D"] for r in rows],
         "|<E|B+>|^2": [r["B+"] for r in rows], "|<E|B->|^2": [r["B-"] for r in rows]},
        "overlap",
    )
    return EXIT_OK


BOUND_COLUMNS = ["branch", "E", "residual", "feshbach", "s_re", "s_im", "abs_s", "localization_length", "atom_weight"]


def run_bound_states(cfg: RunConfig) -> int:
    states = solve_bound_states(cfg.params)
    resonant = set(feshbach_resonances(cfg.params))
    rows, notes = [], []
    for st in states:
        row = {
            "branch": st.branch.value,
            "E": st.energy,
            "residual": st.residual,
            "feshbach": st.energy in resonant,
            "localization_length": st.localization_length,
            "atom_weight": st.atom_weight,
        }
        if st.energy in resonant:
            s = full_solution(cfg.params, st.energy).s
            row.update({"s_re": s.real, "s_im": s.imag, "abs_s": abs(s)})
        rows.append(row)
    search = search_bound_states(cfg.params.omega_a, cfg.params.xi_a, cfg.params.j_a, cfg.params.eps_e)
    notes += [f"not resolved: {text}" for text in search.failures.values()]
    if not states and not search.failures:
        notes.append("j_a = 0: the atom induces no chain-A bound state" if cfg.params.j_a == 0 else "no bound state found")
    for st in states:
        if st.on_b_band_edge:
            notes.append(f"{st.branch.value} root sits on a chain-B band edge; reflection check skipped")
    _emit(cfg, BOUND_COLUMNS, rows, notes)
    return EXIT_OK


ORACLE_COLUMNS = ["E", "s_closed_re", "s_closed_im", "s_oracle_re", "s_oracle_im", "abs_diff"]


def oracle_energies(cfg: RunConfig) -> np.ndarray:
    """Decimated grid strictly inside the chain-B band, away from edges and roots."""
    e_min, e_max, n = cfg.resolved_grid()
    if n == 1:
        energies = np.array([e_min])
    else:
        energies = np.linspace(e_min, e_max, cfg.oracle_points + 2)[1:-1]
    a_band, b_band = band(cfg.params, Chain.A), band(cfg.params, Chain.B)
    avoid = [a_band.lower_edge, a_band.upper_edge, b_band.lower_edge, b_band.upper_edge]
    avoid += [st.energy for st in solve_bound_states(cfg.params)]
    keep = [
        e for e in energies
        if b_band.strictly_contains(e) and all(abs(e - x) > EXCLUSION for x in avoid)
    ]
    return np.array(keep)


def run_oracle_compare(cfg: RunConfig, *, flip_zeta: bool = False) -> int:
    rows = []
    for energy in oracle_energies(cfg):
        closed = full_solution(cfg.params, energy, flip_zeta=flip_zeta).s
        oracle = stationary_scatter(cfg.params, energy, cfg.oracle_n_half).s
        rows.append(
            {"E": float(energy), "s_closed_re": closed.real, "s_closed_im": closed.imag,
             "s_oracle_re": oracle.real, "s_oracle_im": oracle.imag, "abs_diff": abs(closed - oracle)}
        )
    if not rows:
        raise ConfigError("no admissible energies for oracle comparison in the requested grid")
    worst = max(r["abs_diff"] for r in rows)
    verdict = "PASS" if worst < ORACLE_TOL else "FAIL"
    notes = [f"max_abs_diff = {format(worst, '.17g')}", f"tolerance = {ORACLE_TOL}", f"verdict = {verdict}"]
    _emit(cfg, ORACLE_COLUMNS, rows, notes)
    _svg(cfg, [r["E"] for r in rows], {"|s_closed - s_oracle|": [r["abs_diff"] for r in rows]}, "deviation")
    print(f"{verdict} oracle-compare: {len(rows)} energies, max|ds| = {worst:.3e} (tol {ORACLE_TOL:g})", file=sys.stderr)
    if verdict == "FAIL":
        raise ToleranceExceeded(f"max |s_closed - s_oracle| = {worst:.3e} exceeds {ORACLE_TOL:g}")
    return EXIT_OK


WAVEPACKET_COLUMNS = ["channel", "wavepacket", "closed_form_avg", "abs_diff"]


def run_wavepacket(cfg: RunConfig) -> int:
    result = wavepacket_transport(cfg.params, cfg.e0, cfg.sigma_k, cfg.packet_n_half, cfg.t_final)
    averaged = packet_averaged_rates(cfg.params, cfg.e0, cfg.sigma_k)
    rows = []
    for name, wp, avg in zip(("T", "R", "L"), (result.transmitted, result.reflected, result.leaked), averaged):
        rows.append({"channel": name, "wavepacket": wp, "closed_form_avg": avg, "abs_diff": abs(wp - avg)})
    worst = max(r["abs_diff"] for r in rows)
    verdict = "PASS" if worst < WAVEPACKET_TOL else "FAIL"
    notes = [
        f"n_half = {result.n_half}",
        f"t_final = {format(result.t_final, '.17g')}",
        f"intersection_residual = {format(result.residual, '.17g')}",
        f"norm_drift = {format(result.norm_drift, '.17g')}",
        f"verdict = {verdict}",
    ]
    _emit(cfg, WAVEPACKET_COLUMNS, rows, notes)
    print(f"{verdict} wavepacket: max channel deviation {worst:.3e} (tol {WAVEPACKET_TOL:g})", file=sys.stderr)
    if verdict == "FAIL":
        raise ToleranceExceeded(f"wave-packet rates deviate by {worst:.3e}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="INI configuration file")
    common.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
    common.add_argument("--grid", metavar="Emin:Emax:N", help="energy grid (default: chain-B band, 2001 points)")
    common.add_argument("--svg", action="store_true", help="also write a static SVG plot next to --out")
    for name in PARAM_FIELDS:
        common.add_argument(f"--{name.replace('_', '-')}", dest=name, type=float, metavar="X")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="crossed-cra",
        description="Single-photon transport through crossed coupled-resonator arrays.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("spectrum", parents=[common], help="T, R, L and amplitudes on an energy grid")
    sub.add_parser("overlaps", parents=[common], help="dark/bright-state overlaps (resonant parameters)")
    sub.add_parser("bound-states", parents=[common], help="chain-A bound states and Feshbach resonances")
    oc = sub.add_parser("oracle-compare", parents=[common], help="closed form vs stationary lattice solve")
    oc.add_argument("--points", type=int, help="number of decimated grid points (default 200)")
    oc.add_argument("--n-half", type=int, help="lattice half-length (default 200)")
    oc.add_argument("--negate-zeta", action="store_true", help=argparse.SUPPRESS)
    wp = sub.add_parser("wavepacket", parents=[common], help="Gaussian packet scattering vs averaged closed form")
    wp.add_argument("--e0", type=float, help="carrier energy (default 1.0)")
    wp.add_argument("--sigma-k", type=float, help="momentum spread (default 0.05*pi)")
    wp.add_argument("--n-half", type=int, help="lattice half-length (default: auto)")
    wp.add_argument("--t-final", type=float, help="propagation time (default: auto)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        cfg = resolve_config(args, args.command)
        if args.command == "spectrum":
            return run_spectrum(cfg)
        if args.command == "overlaps":
            return run_overlaps(cfg)
        if args.command == "bound-states":
            return run_bound_states(cfg)
        if args.command == "oracle-compare":
            return run_oracle_compare(cfg, flip_zeta=args.negate_zeta)
        return run_wavepacket(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NotResonant as exc:
        print(f"not resonant: {exc}", file=sys.stderr)
        return EXIT_NOT_RESONANT
    except ToleranceExceeded as exc:
        print(f"tolerance exceeded: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except CrossedCRAError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
