#!/usr/bin/env python3
"""End-to-end checks of the vassan command line tool and its JSON report schema.

Usage: check_cli.py <path-to-vassan-binary> <source-dir>
"""

import csv
import io
import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema

BINARY = Path(sys.argv[1])
SOURCE = Path(sys.argv[2])
FIXTURES = SOURCE / "fixtures"
SCHEMA = json.loads((SOURCE / "schema" / "report.schema.json").read_text())

failures = []


def run(*args, expect):
    proc = subprocess.run([str(BINARY), *map(str, args)], capture_output=True, text=True, timeout=600)
    if proc.returncode != expect:
        failures.append(f"{' '.join(map(str, args))}: exit {proc.returncode}, expected {expect}\n{proc.stderr}")
    return proc


def check(cond, message):
    if not cond:
        failures.append(message)


def validate_report(path, command):
    report = json.loads(Path(path).read_text())
    try:
        jsonschema.validate(report, SCHEMA)
    except jsonschema.ValidationError as e:
        failures.append(f"{command} report violates the schema: {e.message} at {list(e.absolute_path)}")
    return report


with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)

    # Demonic analysis with a true query, a report and a cross-check.
    report_path = tmp / "analyze.json"
    out = run("analyze", FIXTURES / "example1.vass", "--query", "theta=2", "--cross-check", "--n-list", "2,4,8",
              "--report", report_path, expect=0)
    check("theta(2): true" in out.stdout, "analyze did not print the theta verdict")
    report = validate_report(report_path, "analyze")
    check(report["exponent"] == 2, "analyze report exponent is not 2")
    check(report["queries"][0]["witness"]["role"] == "realizes-lower", "theta witness role")
    check(report["cross_check"]["agrees"], "cross-check disagrees with the symbolic exponent")

    # A false query gives the negative exit code and a violating witness.
    report_path = tmp / "negative.json"
    run("analyze", FIXTURES / "doubling_pair.vass", "--measure", "counter=x", "--query", "upper=3",
        "--report", report_path, expect=1)
    report = validate_report(report_path, "analyze")
    check(report["exponent"] == "inf", "doubling pair counter should be exponential")
    sccs = report["decomposition"]["sccs"]
    check(any(s["exponential_witnesses"] for s in sccs), "missing circulation witness")

    # Game decision with a strategy.
    report_path = tmp / "game.json"
    strategy_path = tmp / "strategy.json"
    out = run("decide-game", FIXTURES / "controller_choice.vass", "--measure", "counter=z", "--query", "upper=1",
              "--report", report_path, "--strategy-out", strategy_path, expect=0)
    report = validate_report(report_path, "decide-game")
    check(report["queries"][0]["strategy"], "decide-game report lacks a strategy")
    check(strategy_path.exists(), "strategy file not written")

    # Generated instances parse back and analyze.
    sat_path = tmp / "sat.vass"
    run("gen", "sat", "--cnf", FIXTURES / "sat_single_clause.cnf", "--k", "2", "-o", sat_path, expect=0)
    out = run("analyze", sat_path, "--query", "theta=3", expect=0)
    check("theta(3): true" in out.stdout, "generated sat instance should have cubic length")
    qbf_path = tmp / "qbf.vass"
    run("gen", "qbf", "--qdimacs", FIXTURES / "qbf_valid.qdimacs", "--k", "2", "-o", qbf_path, expect=0)
    run("decide-game", qbf_path, "--query", "upper=3", expect=0)
    run("decide-game", qbf_path, "--query", "upper=2", expect=1)

    # Simulation rows.
    out = run("simulate", FIXTURES / "decrement_loop.vass", "--n-list", "1,2,3", expect=0)
    rows = list(csv.DictReader(io.StringIO(out.stdout)))
    check([(r["n"], r["state"], r["value"]) for r in rows] == [("1", "q", "1"), ("2", "q", "2"), ("3", "q", "3")],
          f"unexpected simulate output: {out.stdout!r}")

    # Decompositions.
    out = run("decompose", FIXTURES / "example1.vass", "--kind", "scc", expect=0)
    check(out.stdout.startswith("sccs 1\n"), "scc decomposition summary")
    out = run("decompose", FIXTURES / "controller_choice.vass", "--kind", "locking", "--dot", expect=0)
    check(out.stdout.startswith("digraph"), "locking dot output")

    # Errors.
    bad = tmp / "bad.vass"
    bad.write_text("counters c\nstate q demonic\nq -> q [x]\n")
    out = run("analyze", bad, expect=2)
    check("line 3" in out.stderr, "parse error should carry the line number")
    run("analyze", FIXTURES / "example1.vass", "--query", "sideways=2", expect=2)
    run("analyze", tmp / "missing.vass", expect=2)

if failures:
    for f in failures:
        print("FAIL:", f)
    sys.exit(1)
print("all CLI checks passed")
