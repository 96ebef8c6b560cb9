"""Command line entry point: run, sweep, gen, verify.

Exit codes: 0 success, 1 validation error (bad parameters, malformed
input, or a skyline that fails verification), 2 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .arms import InvalidArmError, load_instance
from .harness import record_to_json, run_trial, summarize, summary_path_for, sweep, SweepConfig
from .instances import gen_staircase, gen_uniform_random
from .skyline import Config
from .verify import is_eps_skyline

EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 1, 2


def _parse_skyline(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise ValueError(f"cannot parse skyline {text!r}; expected comma-separated indices") from None


def cmd_run(args) -> int:
    instance = load_instance(args.instance)
    algo = args.algo
    if args.truncate:
        if algo != "alg1":
            raise ValueError("--truncate only applies to --algo alg1")
        algo = "alg1+truncate"
    record = run_trial(instance, Config(args.epsilon, args.delta), algo, args.seed, keep_result=True)
    skyline = record.result.S if record.result is not None else None
    print(record_to_json(record, skyline))
    return EXIT_OK


def cmd_sweep(args) -> int:
    config = SweepConfig.load(args.config)
    if args.workers is not None:
        config.workers = args.workers
    out = args.out or config.output
    records = sweep(config, out)
    if out:
        print(f"wrote {len(records)} rows to {out} (summary: {summary_path_for(out)})", file=sys.stderr)
    else:
        from .harness import write_csv

        write_csv(records, sys.stdout)
    for row in summarize(records):
        logging.info("%s", row)
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.kind == "uniform":
        if args.n is None:
            raise ValueError("gen uniform needs --n")
        gen_uniform_random(args.n, args.seed).save(args.out)
    else:
        if args.epsilon is None or args.m is None:
            raise ValueError("gen staircase needs --epsilon and --m")
        inst = gen_staircase(args.epsilon, args.m, args.seed)
        side = inst.save(args.out, args.sidecar)
        print(f"sidecar: {side}", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    instance = load_instance(args.instance)
    S = _parse_skyline(args.skyline)
    report = is_eps_skyline(instance.means, S, args.epsilon)
    print(json.dumps({
        "valid": report.valid,
        "violations": [
            {"condition": v.condition, "s": v.s, "t": v.t, "margin": v.margin}
            for v in report.violations
        ],
    }))
    return EXIT_OK if report.valid else EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="skyline-bandits", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one algorithm on an instance file")
    p.add_argument("--instance", required=True)
    p.add_argument("--algo", choices=["alg1", "naive"], default="alg1")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--truncate", action="store_true")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="run a parameter sweep from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="CSV path (overrides the config's output)")
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("gen", help="generate an instance file")
    p.add_argument("kind", choices=["uniform", "staircase"])
    p.add_argument("--n", type=int)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--m", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--sidecar", help="staircase metadata path (default: <out stem>.staircase.json)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", help="check a skyline against an instance's true means")
    p.add_argument("--instance", required=True)
    p.add_argument("--skyline", required=True, help='comma-separated indices, e.g. "0,3,7"')
    p.add_argument("--epsilon", type=float, required=True)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, KeyError, InvalidArmError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
