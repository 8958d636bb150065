#!/usr/bin/env python3
"""Validate every report.json under a sweep directory against the report schema."""

import json
import pathlib
import sys

import jsonschema


def main() -> int:
    if len(sys.argv) != 3:
        print("usage: validate_reports.py SCHEMA SWEEP_DIR", file=sys.stderr)
        return 2
    schema = json.loads(pathlib.Path(sys.argv[1]).read_text())
    validator = jsonschema.Draft202012Validator(schema)
    reports = sorted(pathlib.Path(sys.argv[2]).rglob("report.json"))
    if not reports:
        print(f"no report.json under {sys.argv[2]}", file=sys.stderr)
        return 1
    bad = 0
    for path in reports:
        errors = list(validator.iter_errors(json.loads(path.read_text())))
        for e in errors:
            print(f"{path}: {'/'.join(map(str, e.absolute_path))}: {e.message}")
        bad += bool(errors)
    print(f"{len(reports) - bad} of {len(reports)} reports valid")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
