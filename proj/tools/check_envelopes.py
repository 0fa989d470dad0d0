#!/usr/bin/env python3
"""Run the cmfield CLI over a spread of inputs and validate every envelope against the shipped schema."""

import argparse
import json
import os
import subprocess
import sys
import tempfile

import jsonschema

CASES = [
    (["forms", "--dk", "-20", "--N", "12"], 0),
    (["forms", "--dk", "-23"], 0),
    (["forms", "--dk", "-3"], 2),
    (["forms", "--dk", "-44"], 2),
    (["minpoly", "--dk", "-43", "--N", "2", "--prec", "256"], 0),
    (["minpoly", "--dk", "-20", "--N", "12", "--force"], 0),
    (["minpoly", "--dk", "-20", "--N", "12"], 4),
    (["bound", "--dk", "-43"], 0),
    (["bound", "--dk", "-20"], 4),
    (["normal-basis", "--dk", "-47", "--N", "2", "--prec", "256"], 0),
    (["delta", "--dk", "-43", "--p", "3", "--l", "1"], 0),
    (["delta", "--dk", "-8", "--p", "3", "--l", "1"], 6),
    (["ray", "--dk", "-7", "--p", "7", "--m", "2", "--prec", "128"], 0),
    (["ray", "--dk", "-7", "--p", "3", "--m", "1"], 2),
    (["hensel", "--dk", "-20", "--p", "5", "--m", "1", "--n", "3", "--l", "1", "--prec", "256"], 0),
    (["verify", "--suite", "forms"], 0),
]


def run(cli, args, env):
    proc = subprocess.run([cli, *args], capture_output=True, text=True, env=env, timeout=600)
    return proc.returncode, json.loads(proc.stdout)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--cli", required=True)
    ap.add_argument("--schema", required=True)
    opts = ap.parse_args()

    with open(opts.schema) as f:
        schema = json.load(f)
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)

    failures = 0
    with tempfile.TemporaryDirectory() as cache:
        env = dict(os.environ, CACHE_DIR=cache)
        env.pop("DEFAULT_PRECISION_BITS", None)
        for args, want in CASES:
            code, first = run(opts.cli, args, env)
            errors = sorted(validator.iter_errors(first), key=str)
            problems = [e.message for e in errors]
            if code != want:
                problems.append(f"exit {code}, expected {want}")
            if want == 0 and args[0] != "verify":
                code2, second = run(opts.cli, args, env)
                if not second["cached"]:
                    problems.append("second run missed the cache")
                if second["outputs"] != first["outputs"]:
                    problems.append("cached outputs differ")
            # Integers survive the round trip exactly.
            if "coefficients" in first["outputs"]:
                coeffs = [int(c) for c in first["outputs"]["coefficients"]]
                if [str(c) for c in coeffs] != first["outputs"]["coefficients"]:
                    problems.append("coefficient strings do not round-trip")
            status = "ok" if not problems else "FAIL"
            print(f"{status:4} {' '.join(args)}")
            for p in problems:
                print(f"     {p}")
            failures += bool(problems)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
