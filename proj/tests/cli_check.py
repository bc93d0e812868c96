#!/usr/bin/env python3
"""Run the asq CLI once, check its exit code and validate the JSON report."""
import argparse
import json
import pathlib
import subprocess
import sys

import jsonschema


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--asq", required=True)
    ap.add_argument("--schema", required=True)
    ap.add_argument("--rc", type=int, default=0)
    ap.add_argument("--count", action="append", default=[], help="name=value expected in counts")
    ap.add_argument("args", nargs=argparse.REMAINDER)
    opts = ap.parse_args()
    args = [a for a in opts.args if a != "--"]
    proc = subprocess.run([opts.asq, "--json", "-", "--quiet", *args], capture_output=True, text=True)
    sys.stderr.write(proc.stderr)
    if proc.returncode != opts.rc:
        print(f"exit code {proc.returncode}, expected {opts.rc}")
        print(proc.stdout)
        return 1
    if opts.rc == 2:
        return 0
    report = json.loads(proc.stdout)
    schema = json.loads(pathlib.Path(opts.schema).read_text())
    jsonschema.validate(report, schema, cls=jsonschema.Draft202012Validator)
    if report["ok"] != (opts.rc == 0):
        print(f"ok = {report['ok']} disagrees with exit code {proc.returncode}")
        return 1
    for item in opts.count:
        name, value = item.split("=", 1)
        got = report["counts"].get(name)
        if got != int(value):
            print(f"count {name}: expected {value}, got {got}")
            return 1
    print(json.dumps(report["counts"]))
    return 0


if __name__ == "__main__":
    sys.exit(main())
