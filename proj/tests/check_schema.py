#!/usr/bin/env python3
"""Run every CLI subcommand with JSON output and validate against the schema."""

import argparse
import json
import subprocess
import sys

import jsonschema

INVOCATIONS = [
    ["optimize", "--n", "3"],
    ["optimize", "--n", "60"],
    ["sweep", "--n-min", "2", "--n-max", "40", "--step", "3"],
    ["simulate", "--n", "4", "--trials", "500", "--seed", "11"],
    ["verify", "--n", "3", "--grid", "16"],
    ["verify", "--n", "5"],
]


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--cli", required=True)
    parser.add_argument("--schema", required=True)
    args = parser.parse_args()

    with open(args.schema, encoding="utf-8") as fh:
        schema = json.load(fh)
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)

    failures = 0
    for argv in INVOCATIONS:
        proc = subprocess.run([args.cli, *argv, "--format", "json"], capture_output=True, text=True)
        label = " ".join(argv)
        if proc.returncode != 0:
            print(f"FAIL {label}: exit {proc.returncode}: {proc.stderr.strip()}")
            failures += 1
            continue
        errors = sorted(validator.iter_errors(json.loads(proc.stdout)), key=lambda e: list(e.path))
        for err in errors:
            print(f"FAIL {label}: {'/'.join(map(str, err.path))}: {err.message}")
        failures += bool(errors)
        if not errors:
            print(f"ok   {label}")

    # The schema must reject a report whose result does not match its command.
    bad = json.loads(subprocess.run([args.cli, "optimize", "--n", "3"], capture_output=True, text=True).stdout)
    bad["config"]["command"] = "simulate"
    if validator.is_valid(bad):
        print("FAIL schema accepted an optimize result labelled as simulate")
        failures += 1

    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
