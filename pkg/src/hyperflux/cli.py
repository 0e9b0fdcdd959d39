"""Command-line front end ``hyperflux``.

Exit codes: 0 success, 1 usage or job errors, 2 verification failure,
3 divergence (transform variable outside the convergence domain),
4 other numerical errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .expr import ExprError, normalize
from .jobs import (EXIT_OK, EXIT_USAGE, EXIT_VERIFY, JobError, JobSpec, json_default, parse_grid, parse_job,
                   run_job)
from .quadrature import QuadConfig
from .suites import run_suite


def _build_parser():
    p = argparse.ArgumentParser(prog="hyperflux", description="Numerical hyperfunction transforms.")
    sub = p.add_subparsers(dest="cmd", required=True)
    r = sub.add_parser("run", help="execute a JSON job file")
    r.add_argument("job")
    v = sub.add_parser("verify", help="run a self-verification suite")
    v.add_argument("--suite", default="all", choices=["all", "shift", "conv", "germ", "compare"])
    v.add_argument("--json", dest="json_out", help="write the report to this file")
    s = sub.add_parser("sample", help="sample a transform on a grid")
    s.add_argument("--object", required=True, help="object name (or an expression)")
    s.add_argument("--def", dest="defs", action="append", default=[], metavar="NAME=EXPR",
                   help="define an object; may be repeated")
    s.add_argument("--job", help="take object definitions from a job file")
    s.add_argument("--transform", default="fourier", choices=["fourier", "laplace"])
    s.add_argument("--grid", required=True, help='"re:a:b:n,im:a:b:n"')
    s.add_argument("--side", choices=["right", "left"])
    s.add_argument("--out", help="CSV output path (default stdout)")
    return p


def _sample_spec(args) -> JobSpec:
    objects = {}
    if args.job:
        with open(args.job, encoding="utf-8") as fh:
            objects.update(json.load(fh).get("objects", {}))
    for d in args.defs:
        name, sep, src = d.partition("=")
        if not sep:
            raise JobError([("--def", f"expected NAME=EXPR, got {d!r}")])
        objects[name.strip()] = src
    target = args.object
    if target not in objects:
        try:
            normalize(target)
        except ExprError as e:
            raise JobError([("--object", str(e))]) from None
        objects = dict(objects, _object=target)
        target = "_object"
    params = {"transform": args.transform}
    if args.side:
        params["side"] = args.side
    job = {"objects": objects, "command": "sample", "target": target, "grid": parse_grid(args.grid),
           "params": params}
    if args.out:
        job["output"] = {"csv": args.out}
    return parse_job(json.dumps(job))


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        if args.cmd == "run":
            with open(args.job, encoding="utf-8") as fh:
                spec = parse_job(fh.read())
        elif args.cmd == "sample":
            spec = _sample_spec(args)
        else:
            rep = run_suite(args.suite, QuadConfig.from_env())
            text = json.dumps(rep, indent=2, sort_keys=True, default=json_default) + "\n"
            if args.json_out:
                with open(args.json_out, "w", encoding="utf-8") as fh:
                    fh.write(text)
            status = "PASS" if rep["passed"] else "FAIL"
            print(f"suite {args.suite}: {status}")
            return EXIT_OK if rep["passed"] else EXIT_VERIFY
    except (JobError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    code, result = run_job(spec, stdout=sys.stdout)
    if "error" in result:
        print(f"error: {result['error']}", file=sys.stderr)
    elif spec.command not in ("fourier", "laplace", "sample") or spec.output.get("csv"):
        if not spec.output.get("json"):
            print(json.dumps(result, indent=2, sort_keys=True, default=json_default))
    return code


if __name__ == "__main__":
    sys.exit(main())
