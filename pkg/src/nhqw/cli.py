"""Command-line front end.

Exit codes: 0 success, 1 validation failure (bad config, size guard, seam
refusal), 2 verification tolerance violated, 3 I/O error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import oracle
from .analysis import ProbabilityTable, trajectory_table
from .config import RunConfig, read_config
from .errors import ValidationError
from .presets import PRESETS, get_preset, preset_names
from .qca import equivalence_report, max_seam_free_steps
from .walks import UobNhqwParams, random_params

EXIT_OK, EXIT_INVALID, EXIT_TOLERANCE, EXIT_IO = 0, 1, 2, 3

PRESET_HELP = (
    "Presets (model uob-nhqw) by parameter-table row: row1=fig5 (ndqw5), row2=fig4 (ndqw4), "
    "row3=fig7 (ndqw7), row4=fig6 (ndqw6), row5=fig3 (ndqw2), row6=fig8 (ndqw1), "
    "row7=fig9 (ndqw3), row8=fig10 (ndqw8). Labels ndqwK and rowK are accepted as aliases."
)


# --------------------------------------------------------------------------
# output formats


def format_csv(table: ProbabilityTable) -> str:
    lines = ["t,x,p"]
    lines += [f"{t},{x},{p!r}" for t, x, p in table.records()]
    return "\n".join(lines) + "\n"


def format_heatmap(table: ProbabilityTable) -> str:
    return "".join(" ".join(f"{p:8.6f}" for p in row) + "\n" for row in table.probs)


def write_run_outputs(config: RunConfig, out_dir) -> tuple[Path, Path]:
    table = trajectory_table(config.model, config.build_params(), config.n_sites,
                             config.steps, config.build_initial_state())
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{config.run_name}.csv"
    heat_path = out_dir / f"{config.run_name}_heatmap.txt"
    with open(csv_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_csv(table))
    with open(heat_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_heatmap(table))
    return csv_path, heat_path


def _write_report(out_dir, filename: str, text: str) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / filename
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


# --------------------------------------------------------------------------
# subcommands


def cmd_run(args) -> int:
    if args.config:
        config = read_config(args.config)
    else:
        config = RunConfig(model=args.model or "uob-nhqw")
    changes = {}
    if args.model and args.config and args.model != config.model:
        raise ValidationError(f"model: --model {args.model} conflicts with config model {config.model}")
    if args.preset:
        changes["preset"] = args.preset
    if args.N is not None:
        changes["n_sites"] = args.N
    if args.steps is not None:
        changes["steps"] = args.steps
    if args.name:
        changes["name"] = args.name
    if args.param:
        params = dict(config.params)
        for item in args.param:
            if "=" not in item:
                raise ValidationError(f"--param expects KEY=VALUE, got {item!r}")
            key, value = (s.strip() for s in item.split("=", 1))
            params[key] = value
        changes["params"] = params
    if changes:
        config = config.with_overrides(**changes)
        config.validate()
    out = args.out or config.out or "."
    csv_path, heat_path = write_run_outputs(config, out)
    print(f"wrote {csv_path}")
    print(f"wrote {heat_path}")
    return EXIT_OK


def cmd_list_presets(args) -> int:
    names = UobNhqwParams.names()
    header = ["preset", "row", "label"] + list(names)
    rows = [header]
    for name in preset_names():
        p = PRESETS[name]
        rows.append([p.name, str(p.row), p.label] + p.formatted())
    widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
    for r in rows:
        print("  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip())
    return EXIT_OK


def cmd_verify_qca(args) -> int:
    n, t = args.N, args.steps
    if n > 5:
        raise ValidationError(f"N: verify-qca is limited to N <= 5 (2**20 amplitudes), got {n}")
    if t > max_seam_free_steps(n):
        raise ValidationError(
            f"steps: refusing t={t} at N={n}; from the centred start the walk scatters across "
            f"the cyclic seam after {max_seam_free_steps(n)} steps, where the QCA embedding "
            f"is undefined"
        )
    presets = [get_preset(p) for p in args.preset] if args.preset else [PRESETS[k] for k in preset_names()]
    rng = np.random.default_rng(args.seed)
    cases = [(p.name, p.params) for p in presets]
    cases += [(f"draw{i:03d}", random_params("qca", rng)) for i in range(args.draws)]

    lines = [
        "verify-qca: ||G^t(embed(psi0)) - embed(T^t(psi0))||_2 over steps; leakage limit 1e-12",
        f"N = {n}", f"steps = {t}", f"seed = {args.seed}", f"draws = {args.draws}",
        f"tolerance = {args.tolerance!r}",
        "case,max_deviation,max_leakage,status",
    ]
    worst = 0.0
    failures = 0
    for name, params in cases:
        rep = equivalence_report(params, n, t, args.tolerance)
        worst = max(worst, rep.max_deviation)
        status = "pass" if rep.passed else "FAIL"
        failures += not rep.passed
        lines.append(f"{name},{rep.max_deviation:.3e},{rep.max_leakage:.3e},{status}")
    lines.append(f"overall = {'pass' if failures == 0 else 'FAIL'} "
                 f"({len(cases) - failures}/{len(cases)} cases, worst deviation {worst:.3e})")
    text = "\n".join(lines) + "\n"
    path = _write_report(args.out, "verify_qca_report.txt", text)
    print(text, end="")
    print(f"wrote {path}")
    return EXIT_OK if failures == 0 else EXIT_TOLERANCE


def cmd_oracle_check(args) -> int:
    models = oracle.WALK_MODELS if args.models == "all" else tuple(m.strip() for m in args.models.split(","))
    for m in models:
        if m not in oracle.MODELS:
            raise ValidationError(f"models: unknown model {m!r}; expected any of {', '.join(oracle.MODELS)}")
        limit = oracle.MAX_QCA_CELLS if m == "qca" else oracle.MAX_WALK_SITES
        if args.N > limit:
            raise ValidationError(f"N: oracle-check for {m} is limited to N <= {limit}, got {args.N}")
    rng = np.random.default_rng(args.seed)
    lines = [
        "oracle-check: max |structured step(psi) - M psi| over random unit states",
        f"N = {args.N}", f"seed = {args.seed}", f"draws = {args.draws}",
        f"trials = {args.trials}", f"tolerance = {args.tolerance!r}",
        "model,max_deviation,max_unitarity_error,status",
    ]
    failures = 0
    for m in models:
        dev = uerr = 0.0
        for _ in range(args.draws):
            params = random_params(m, rng)
            mat = oracle.dense_step_matrix(m, params, args.N)
            uerr = max(uerr, oracle.unitarity_error(mat))
            dev = max(dev, oracle.oracle_compare(m, params, args.N, args.trials, rng, matrix=mat))
        ok = dev < args.tolerance and uerr < args.tolerance
        failures += not ok
        lines.append(f"{m},{dev:.3e},{uerr:.3e},{'pass' if ok else 'FAIL'}")
    lines.append(f"overall = {'pass' if failures == 0 else 'FAIL'}")
    text = "\n".join(lines) + "\n"
    path = _write_report(args.out, "oracle_check_report.txt", text)
    print(text, end="")
    print(f"wrote {path}")
    return EXIT_OK if failures == 0 else EXIT_TOLERANCE


class _Parser(argparse.ArgumentParser):
    # usage errors are validation failures; argparse's default status 2 is taken
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="nhqw",
        description="History-dependent quantum walks and their QCA realisation.",
        epilog=PRESET_HELP,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate and write CSV + text heatmap", epilog=PRESET_HELP)
    run.add_argument("--config", help="key = value run file")
    run.add_argument("--preset", help="parameter-table preset (uob-nhqw), e.g. fig7")
    run.add_argument("--model", choices=["qw", "shqw", "mr-nhqw", "uob-nhqw"])
    run.add_argument("--N", type=int, help="lattice size (default 13)")
    run.add_argument("--steps", type=int, help="time steps (default 6)")
    run.add_argument("--param", action="append", metavar="KEY=VALUE",
                     help="model parameter, e.g. theta0=pi/4 (repeatable)")
    run.add_argument("--name", help="output file stem (default: preset or model)")
    run.add_argument("--out", help="output directory (default: config 'out' or .)")
    run.set_defaults(func=cmd_run)

    lst = sub.add_parser("list-presets", help="print the preset parameter rows", epilog=PRESET_HELP)
    lst.set_defaults(func=cmd_list_presets)

    ver = sub.add_parser(
        "verify-qca",
        help="check the QCA single-particle sector against the UOB walk",
        description="Runs the presets and random draws; N <= 5 and t within the seam-free "
                    "range (N//2 for odd N, N//2 - 1 for even N).",
    )
    ver.add_argument("--N", type=int, default=5)
    ver.add_argument("--steps", type=int, default=2)
    ver.add_argument("--draws", type=int, default=50)
    ver.add_argument("--preset", action="append", help="restrict to these presets (repeatable)")
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--tolerance", type=float, default=1e-10)
    ver.add_argument("--out", default=".")
    ver.set_defaults(func=cmd_verify_qca)

    orc = sub.add_parser(
        "oracle-check",
        help="compare structured steps with brute-force matrices",
        description=f"Size guard: N <= {oracle.MAX_WALK_SITES} for walk models "
                    f"(dimension N*2*2**N <= {5 * 2 * 32}), N <= {oracle.MAX_QCA_CELLS} for qca.",
    )
    orc.add_argument("--models", default="all", help="comma list of qw,shqw,mr-nhqw,uob-nhqw,qca or 'all'")
    orc.add_argument("--N", type=int, default=4)
    orc.add_argument("--trials", type=int, default=100, help="random states per parameter draw")
    orc.add_argument("--draws", type=int, default=20, help="random parameter draws per model")
    orc.add_argument("--seed", type=int, default=0)
    orc.add_argument("--tolerance", type=float, default=1e-12)
    orc.add_argument("--out", default=".")
    orc.set_defaults(func=cmd_oracle_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
