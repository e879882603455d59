"""``mask-lab`` command line: build maskers, verify sets, run demos, sample sets.

Exit codes: 0 success (or Masked), 1 NotMasked / failed demo, 2 usage or
input error, 3 I/O error. Details go to the JSON file named by ``--out``;
stdout gets a single summary line.
"""

import argparse
import dataclasses
import logging
import sys

import numpy as np

from . import io
from .demos import DEMOS, run_demo
from .linalg import random_unitary
from .maskers import (
    MAX_MULTIPARTY, as_amplitude_vector, as_probability_vector,
    build_injection_masker, build_multiparty_masker, build_remark24_operator,
    build_s_diamond, build_s_fn, build_s_sharp, sample_q_p, sample_q_q,
    sample_q_r,
)
from .verify import DEFAULT_TOL, verify_masking_mixed, verify_masking_pure

EXIT_OK, EXIT_NOT_MASKED, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

BUILD_KINDS = ("sfn", "sharp", "diamond", "multiparty", "injection", "remark24")
SAMPLE_SETS = ("q_r", "q_p", "q_q")


class UsageError(Exception):
    pass


def _build(args):
    kind, d = args.kind, args.d
    if kind == "remark24":
        if d not in (None, 2):
            raise UsageError("remark24 is defined for d = 2 only")
        return build_remark24_operator()
    if kind == "injection":
        if not args.states:
            raise UsageError("injection needs --states")
        state_kind, d_a, _, states = io.load_state_file(args.states)
        if state_kind != "pure":
            raise UsageError("injection masker needs pure input states")
        return build_injection_masker(states, d_a)
    if d is None or d < 1:
        raise UsageError(f"{kind} needs --d >= 1")
    if kind == "multiparty":
        if not 2 <= d <= MAX_MULTIPARTY:
            raise UsageError(f"multiparty supports 2 <= d <= {MAX_MULTIPARTY}")
        return build_multiparty_masker(d)
    if args.seed is None:
        basis_a = basis_b = np.eye(d, dtype=complex)
    else:
        basis_a = random_unitary(d, args.seed)
        basis_b = random_unitary(d, args.seed + 1)
    if kind == "sfn":
        s = build_s_fn(basis_a)
    elif kind == "sharp":
        s = build_s_sharp(basis_a, basis_b)
    else:
        s = build_s_diamond(basis_a, basis_b)
    if args.seed is not None:
        s = dataclasses.replace(s, params={**s.params, "seed": args.seed})
    return s


def cmd_build(args):
    s = _build(args)
    io.write_json(args.out, io.masker_file_payload(s))
    print(f"built {s.kind} masker ({s.d_a} -> {s.d_a}x{s.d_b}) -> {args.out}")
    return EXIT_OK


def cmd_verify(args):
    s = io.load_masker(args.masker)
    kind, d_a, d_b, states = io.load_state_file(args.states)
    if d_a != s.d_a:
        raise UsageError(f"states have dimension {d_a}, masker expects {s.d_a}")
    if kind == "pure":
        rep = verify_masking_pure(s, states, args.tol)
    else:
        rep = verify_masking_mixed(s, states, args.tol)
    io.write_json(args.out, io.report_payload(rep, s, kind))
    print(f"{rep.verdict.value}: {len(states)} {kind} states, "
          f"max deviation {rep.max_deviation:.3e} (tol {args.tol:g})")
    return EXIT_OK if rep.masked else EXIT_NOT_MASKED


def cmd_demo(args):
    if args.name not in DEMOS:
        raise UsageError(f"unknown demo {args.name!r}; choose from {', '.join(DEMOS)}")
    checks = run_demo(args.name, args.seed or 0)
    ok = all(c.passed for c in checks)
    payload = {
        "version": io.FORMAT_VERSION,
        "demo": args.name,
        "passed": ok,
        "assertions": [{"name": c.name, "result": "PASS" if c.passed else "FAIL",
                        "detail": c.detail} for c in checks],
    }
    io.write_json(args.out, payload)
    n_pass = sum(c.passed for c in checks)
    print(f"demo {args.name}: {'PASS' if ok else 'FAIL'} ({n_pass}/{len(checks)} assertions)")
    return EXIT_OK if ok else EXIT_NOT_MASKED


def cmd_sample(args):
    if args.count < 1:
        raise UsageError("--count must be positive")
    try:
        if args.set == "q_r":
            vec = as_amplitude_vector(args.params, tol=1e-9)
        else:
            vec = as_probability_vector(args.params, tol=1e-9)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rng = np.random.default_rng(args.seed)
    seeds = rng.integers(0, 2 ** 63, size=args.count)
    if args.set == "q_r":
        states = [sample_q_r(vec, seed=int(s)) for s in seeds]
        kind = "pure"
    elif args.set == "q_p":
        states = [sample_q_p(vec, seed=int(s)) for s in seeds]
        kind = "mixed"
    else:
        states = [sample_q_q(vec, seed=int(s)) for s in seeds]
        kind = "mixed"
    io.write_json(args.out, io.state_file_payload(kind, states, vec.size))
    print(f"sampled {args.count} {kind} states from {args.set} -> {args.out}")
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="mask-lab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="construct a masker and write it as JSON")
    p.add_argument("kind", choices=BUILD_KINDS)
    p.add_argument("--d", type=int, default=None, help="input dimension (n for multiparty)")
    p.add_argument("--seed", type=int, default=None, help="draw random bases with this seed")
    p.add_argument("--states", help="state file (injection masker)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="check whether a masker masks a set of states")
    p.add_argument("--masker", required=True)
    p.add_argument("--states", required=True)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("demo", help="run a named demonstration")
    p.add_argument("name", help=", ".join(DEMOS))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("sample", help="sample a maximal maskable set")
    p.add_argument("set", choices=SAMPLE_SETS)
    p.add_argument("--params", type=float, nargs="+", required=True,
                   help="amplitude vector (q_r) or probability vector (q_p, q_q)")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sample)
    return ap


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, format="mask-lab: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, io.InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
