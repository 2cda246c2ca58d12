"""Command-line driver.

Subcommands:

* ``fig1``      degree-truncation error sweep on a 1D chain (CSV)
* ``fig2``      central hole density on an L x L lattice (CSV)
* ``verify``    run the bound-verification suites (JSON report)
* ``propagate`` one generic propagation run (polynomial out, optional trace)
* ``color``     print the support-disjoint rotation schedule
* ``validate``  structural report on a Hamiltonian

Every subcommand takes ``--config file.json`` plus flags that mirror the
config keys; flags override file values and unknown config keys are
rejected.  Exit codes: 0 success, 2 config error, 3 bound violation in
``verify``, 4 term-cap abort.
"""

from __future__ import annotations

import argparse
import dataclasses
import io
import json
import sys

from . import __version__
from .experiments import Fig1Config, Fig2Config, run_fig1, run_fig2
from .hamiltonian import (
    QuarticHamiltonian,
    ValidationError,
    build_hubbard_1d,
    build_hubbard_2d,
    greedy_color_partition,
    read_hamiltonian,
    validate,
)
from .propagation import MPConfig, TermCapExceeded, mp_propagate
from .strings import read_polynomial, write_polynomial
from .verify import central_pair_string, run_all_checks

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BOUND = 3
EXIT_TERM_CAP = 4


class ConfigError(Exception):
    pass


def _load_config_file(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must be a JSON object")
    return data


def _build_config(cls, file_values: dict, args: argparse.Namespace):
    """Merge file values and CLI overrides into a config dataclass."""
    fields = {f.name: f for f in dataclasses.fields(cls)}
    unknown = set(file_values) - set(fields)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    merged = dict(file_values)
    for name in fields:
        cli_val = getattr(args, name, None)
        if cli_val is not None:
            merged[name] = cli_val
    for name, val in merged.items():
        if isinstance(val, list):
            merged[name] = tuple(val)
    try:
        return cls(**merged)
    except (TypeError, ValueError) as e:
        raise ConfigError(str(e)) from e


def _float_tuple(s: str) -> tuple[float, ...]:
    return tuple(float(x) for x in s.split(","))


def _int_tuple(s: str) -> tuple[int, ...]:
    return tuple(int(x) for x in s.split(","))


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as f:
            f.write(text)


@dataclasses.dataclass(frozen=True)
class ModelConfig:
    """Where the Hamiltonian comes from: a lattice builder or a JSON file."""

    model: str = "hubbard1d"
    L: int = 6
    U: float = 1.0
    periodic: bool = False
    hamiltonian: str | None = None


def _build_hamiltonian(cfg: ModelConfig) -> QuarticHamiltonian:
    if cfg.model == "hubbard1d":
        return build_hubbard_1d(cfg.L, cfg.U, periodic=cfg.periodic)
    if cfg.model == "hubbard2d":
        return build_hubbard_2d(cfg.L, cfg.U)
    if cfg.model == "file":
        if not cfg.hamiltonian:
            raise ConfigError("model=file needs a hamiltonian path")
        try:
            with open(cfg.hamiltonian) as f:
                return read_hamiltonian(f)
        except (OSError, ValueError, KeyError) as e:
            raise ConfigError(f"cannot read hamiltonian {cfg.hamiltonian}: {e}") from e
    raise ConfigError(f"unknown model {cfg.model!r}")


@dataclasses.dataclass(frozen=True)
class PropagateConfig(ModelConfig):
    t: float = 0.5
    delta_t: float = 0.01
    ell: int = 6
    prune_eps: float = 0.0
    truncation_mode: str = "per_rotation"
    term_cap: int = 50_000_000
    observable: str | None = None  # majpoly file; default central pair string
    out: str | None = None
    trace: str | None = None


def _cmd_propagate(args) -> int:
    cfg = _build_config(PropagateConfig, _load_config_file(args.config), args)
    h = _build_hamiltonian(cfg)
    schedule = greedy_color_partition(h)
    if cfg.observable:
        try:
            with open(cfg.observable) as f:
                a = read_polynomial(f)
        except (OSError, ValueError) as e:
            raise ConfigError(f"cannot read observable {cfg.observable}: {e}") from e
        if a.n_modes != h.n_modes:
            raise ConfigError(
                f"observable has {a.n_modes} modes, Hamiltonian has {h.n_modes}"
            )
    else:
        a = central_pair_string(cfg.L, h.n_modes)
    mp_cfg = MPConfig(
        delta_t=cfg.delta_t, ell=cfg.ell, prune_eps=cfg.prune_eps,
        truncation_mode=cfg.truncation_mode, term_cap=cfg.term_cap,
    )
    out, trace = mp_propagate(a, h, schedule, cfg.t, mp_cfg)
    buf = io.StringIO()
    write_polynomial(out, buf)
    _write_text(cfg.out, buf.getvalue())
    if cfg.trace:
        tbuf = io.StringIO()
        trace.to_csv(tbuf)
        _write_text(cfg.trace, tbuf.getvalue())
    return EXIT_OK


@dataclasses.dataclass(frozen=True)
class VerifyConfig:
    n_commutator_samples: int = 200
    out: str | None = None


def _cmd_verify(args) -> int:
    cfg = _build_config(VerifyConfig, _load_config_file(args.config), args)
    report = run_all_checks(n_commutator_samples=cfg.n_commutator_samples)
    _write_text(cfg.out, json.dumps(report, indent=2, default=str) + "\n")
    return EXIT_OK if report["passed"] else EXIT_BOUND


def _cmd_fig1(args) -> int:
    file_values = _load_config_file(args.config)
    out_path = file_values.pop("out", None)
    if args.out is not None:
        out_path = args.out
    cfg = _build_config(Fig1Config, file_values, args)
    _write_text(out_path, run_fig1(cfg))
    return EXIT_OK


def _cmd_fig2(args) -> int:
    file_values = _load_config_file(args.config)
    out_path = file_values.pop("out", None)
    if args.out is not None:
        out_path = args.out
    cfg = _build_config(Fig2Config, file_values, args)
    _write_text(out_path, run_fig2(cfg))
    return EXIT_OK


def _cmd_color(args) -> int:
    cfg = _build_config(ModelConfig, _load_config_file(args.config), args)
    h = _build_hamiltonian(cfg)
    schedule = greedy_color_partition(h)
    lines = [f"# {schedule.n_groups} groups, {len(h.terms)} terms"]
    for g, group in enumerate(schedule.groups):
        masks = " ".join(f"{h.terms[i].mask:#x}" for i in group)
        lines.append(f"group {g}: {masks}")
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def _cmd_validate(args) -> int:
    cfg = _build_config(ModelConfig, _load_config_file(args.config), args)
    h = _build_hamiltonian(cfg)
    report = validate(h)
    sys.stdout.write(json.dumps(report, indent=2) + "\n")
    return EXIT_OK


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", choices=("hubbard1d", "hubbard2d", "file"))
    p.add_argument("--L", type=int)
    p.add_argument("--U", type=float)
    p.add_argument("--periodic", action="store_const", const=True)
    p.add_argument("--hamiltonian")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="majprop", description="Majorana-string observable propagation"
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fig1", help="degree-truncation error sweep (CSV)")
    p.add_argument("--config")
    p.add_argument("--L", type=int)
    p.add_argument("--U", type=float)
    p.add_argument("--delta_t", type=float)
    p.add_argument("--times", type=_float_tuple)
    p.add_argument("--ells", type=_int_tuple)
    p.add_argument("--prune_eps", type=float)
    p.add_argument("--ref_prune_eps", type=float)
    p.add_argument("--truncation_mode", choices=("per_rotation", "per_sweep"))
    p.add_argument("--term_cap", type=int)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_fig1)

    p = sub.add_parser("fig2", help="hole-density time series (CSV)")
    p.add_argument("--config")
    p.add_argument("--L", type=int)
    p.add_argument("--U_values", type=_float_tuple)
    p.add_argument("--ells", type=_int_tuple)
    p.add_argument("--delta_t", type=float)
    p.add_argument("--t_max", type=float)
    p.add_argument("--prune_eps", type=float)
    p.add_argument("--truncation_mode", choices=("per_rotation", "per_sweep"))
    p.add_argument("--term_cap", type=int)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_fig2)

    p = sub.add_parser("verify", help="bound-verification suites (JSON)")
    p.add_argument("--config")
    p.add_argument("--n_commutator_samples", type=int)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("propagate", help="single propagation run")
    p.add_argument("--config")
    _add_model_flags(p)
    p.add_argument("--t", type=float)
    p.add_argument("--delta_t", type=float)
    p.add_argument("--ell", type=int)
    p.add_argument("--prune_eps", type=float)
    p.add_argument("--truncation_mode", choices=("per_rotation", "per_sweep"))
    p.add_argument("--term_cap", type=int)
    p.add_argument("--observable")
    p.add_argument("--out")
    p.add_argument("--trace")
    p.set_defaults(func=_cmd_propagate)

    p = sub.add_parser("color", help="print the rotation schedule")
    p.add_argument("--config")
    _add_model_flags(p)
    p.set_defaults(func=_cmd_color)

    p = sub.add_parser("validate", help="Hamiltonian structure report")
    p.add_argument("--config")
    _add_model_flags(p)
    p.set_defaults(func=_cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValidationError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except TermCapExceeded as e:
        print(f"error: term cap exceeded: {e}", file=sys.stderr)
        return EXIT_TERM_CAP


if __name__ == "__main__":
    sys.exit(main())
