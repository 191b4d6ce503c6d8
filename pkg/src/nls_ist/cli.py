"""``nls-ist`` command line: one subcommand per experiment.

    nls-ist <subcommand> [--config cfg.json] [--key value ...]

Every config key is also a kebab-case flag; flag values are parsed as JSON when
possible (``--times "[0, 5]"``, ``--L 40``) and kept as strings otherwise
(``--family "tanh_shift 3"``).  Exit status: 0 all PASS, 1 any FAIL or a numerical
error, 2 configuration or IO error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .data import ScatteringDataError
from .direct import ScatteringError
from .evolver import EvolutionError
from .experiments import COMMON, DEFAULTS, FAIL, ConfigError, make_config, run
from .families import DescriptorError
from .fields import TailError
from .rhp import ResidueSystemError
from .spectral import SpectralDomainError

# (exception type, stage tag, exit code); first match wins
_STAGES = [
    (ConfigError, "config", 2),
    (DescriptorError, "config", 2),
    (OSError, "io", 2),
    (TailError, "fields", 1),
    (SpectralDomainError, "spectral_core", 1),
    (ScatteringError, "direct_scattering", 1),
    (ScatteringDataError, "scattering_data", 1),
    (ResidueSystemError, "soliton_rhp", 1),
    (EvolutionError, "evolver", 1),
]


def _value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nls-ist",
        description="Inverse scattering experiments for defocusing NLS with nonzero background.")
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in DEFAULTS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", help="JSON file with config keys")
        keys = dict(COMMON)
        keys.update(DEFAULTS[name])
        for key, default in keys.items():
            flag = "--" + key.replace("_", "-")
            p.add_argument(flag, dest=f"set_{key}", type=_value, default=None, metavar="VALUE",
                           help=f"override {key} (default {json.dumps(default)})")
    return parser


def load_config(experiment: str, args: argparse.Namespace) -> dict:
    user = {}
    if args.config:
        with open(args.config) as fh:
            try:
                user = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{args.config}: invalid JSON ({exc})") from exc
        if not isinstance(user, dict):
            raise ConfigError(f"{args.config}: top level must be an object")
    for k, v in vars(args).items():
        if k.startswith("set_") and v is not None:
            user[k[4:]] = v
    return make_config(experiment, user)


def _stage(exc: BaseException):
    for cls, tag, code in _STAGES:
        if isinstance(exc, cls):
            return tag, code
    return "internal", 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.experiment, args)
        rep = run(args.experiment, cfg)
    except Exception as exc:
        tag, code = _stage(exc)
        if tag == "internal":
            raise
        print(f"nls-ist: [{tag}] {exc}", file=sys.stderr)
        return code
    for r in rep.rows:
        print(f"{r.verdict:<15} {r.label}: measured={r.measured} tol={r.tolerance}")
    n_fail = sum(r.verdict == FAIL for r in rep.rows)
    print(f"{args.experiment}: {'PASS' if n_fail == 0 else f'FAIL ({n_fail} rows)'}; "
          f"report in {cfg['output_dir']}/report.json")
    return 0 if n_fail == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
