#!/usr/bin/env python3
"""End-to-end checks for the cpcsim command-line tool.

Usage: cli_test.py /path/to/cpcsim
"""
import csv
import io
import json
import math
import os
import subprocess
import sys

BIN = sys.argv[1]
failures = []


def run(*args, env=None, expect=0):
    e = dict(os.environ)
    if env:
        e.update(env)
    p = subprocess.run([BIN, *args], capture_output=True, text=True, env=e)
    if p.returncode != expect:
        failures.append(f"{args}: exit {p.returncode} != {expect}; stderr: {p.stderr.strip()}")
    return p


def check(name, cond, detail=""):
    if not cond:
        failures.append(f"{name}: {detail}")


# predict
p = run("predict", "exp:1", "--cores", "100", "--json")
rec = json.loads(p.stdout)
check("predict exp linear", abs(rec["speedup"] - 100.0) < 1e-9, p.stdout)
check("predict cv", abs(rec["cv"] - 1.0) < 1e-12)

p = run("predict", "uniform:0:2", "--cores", "1", "--json")
check("predict uniform n=1", abs(json.loads(p.stdout)["speedup"] - 1.0) < 1e-12)

p = run("predict", "hyper:5:1", "--cores", "100", "--json")
check("predict hyper anchor", abs(json.loads(p.stdout)["speedup"] - 275.71) / 275.71 < 0.03)

# parse errors -> exit 2
run("predict", "gauss:0:1", expect=2)
run("predict", "exp:0", expect=2)
run("predict", "exp:1", "--cores", "nope", expect=2)
run("bogus-subcommand", expect=2)

# simulate: determinism byte-equality
a = run("simulate", "exp:1", "--cores", "1", "--steps", "10", "--seed", "5")
b = run("simulate", "exp:1", "--cores", "1", "--steps", "10", "--seed", "5")
check("simulate deterministic bytes", a.stdout == b.stdout, f"{a.stdout!r} vs {b.stdout!r}")

p = run("simulate", "exp:1", "--cores", "100", "--steps", "100000", "--seed", "1")
rec = json.loads(p.stdout)
check("simulate exp near 100",
      abs(rec["speedup"] - 100.0) < 4 * rec["speedup_stderr"], p.stdout)

p = run("simulate", "hyper:10:1", "--cores", "100", "--steps", "100000", "--seed", "2")
rec = json.loads(p.stdout)
check("simulate hyper 521 anchor", abs(rec["speedup"] - 521.15) / 521.15 < 0.05, p.stdout)

# CPCSIM_SEED environment default
a = run("simulate", "exp:1", "--steps", "10", env={"CPCSIM_SEED": "77"})
b = run("simulate", "exp:1", "--steps", "10", "--seed", "77")
check("CPCSIM_SEED default", a.stdout == b.stdout)

# sweep: cores family, CSV shape and round-trip
p = run("sweep", "--family", "cores", "--dist", "exp:1", "--range", "1..100")
rows = list(csv.DictReader(io.StringIO(p.stdout)))
check("sweep header",
      list(rows[0].keys()) == ["x", "cv", "analytic_speedup", "mc_speedup", "mc_stderr"])
check("sweep count", len(rows) == 100, str(len(rows)))
for i, row in enumerate(rows, start=1):
    if abs(float(row["analytic_speedup"]) - i) > 1e-9:
        check("sweep exp linear", False, f"n={i}: {row}")
        break
    if row["mc_speedup"] != "" or row["mc_stderr"] != "":
        check("analytic mode leaves MC empty", False, str(row))
        break

# CSV round-trip: re-emitting the parsed floats reproduces the bytes
body = p.stdout.splitlines()[1:]
for line in body[:20]:
    parts = line.split(",")
    for tok in parts[:3]:
        rt = repr(float(tok)).rstrip("0").rstrip(".")
        canon = tok.rstrip("0").rstrip(".") if "." in tok else tok
        if float(tok) != float(rt):
            check("csv round-trip", False, f"{tok} vs {rt}")
            break

# erlang-k sweep monotone decreasing
p = run("sweep", "--family", "erlang-k", "--range", "2..100", "--cores", "100")
rows = list(csv.DictReader(io.StringIO(p.stdout)))
vals = [float(r["analytic_speedup"]) for r in rows]
check("erlang-k monotone", all(x > y for x, y in zip(vals, vals[1:])))
check("erlang-k tail < 2", vals[-1] < 2.0, str(vals[-1]))

# hyper-a sweep monotone increasing
p = run("sweep", "--family", "hyper-a", "--range", "1..100", "--cores", "100")
rows = list(csv.DictReader(io.StringIO(p.stdout)))
vals = [float(r["analytic_speedup"]) for r in rows]
check("hyper-a monotone", all(x < y for x, y in zip(vals, vals[1:])))
check("hyper-a starts at 100", abs(vals[0] - 100.0) < 1e-6)

# sweep --out writes a file
out = "/tmp/cpcsim_sweep_test.csv"
run("sweep", "--family", "cores", "--dist", "uniform:0:2", "--range", "1..10", "--out", out)
with open(out) as fh:
    rows = list(csv.DictReader(fh))
check("sweep --out", len(rows) == 10)
check("uniform closed form", abs(float(rows[9]["analytic_speedup"]) - 5.5) < 1e-9)
os.unlink(out)

# sweep mc mode fills the MC columns deterministically
p = run("sweep", "--family", "cores", "--dist", "exp:1", "--range", "1..5",
        "--mode", "both", "--steps", "2000", "--seed", "9")
q = run("sweep", "--family", "cores", "--dist", "exp:1", "--range", "1..5",
        "--mode", "both", "--steps", "2000", "--seed", "9")
check("mc sweep deterministic", p.stdout == q.stdout)
rows = list(csv.DictReader(io.StringIO(p.stdout)))
check("mc columns filled", all(r["mc_speedup"] != "" and r["mc_stderr"] != "" for r in rows))

# json sweep: one flat object per line
p = run("sweep", "--family", "cores", "--dist", "exp:1", "--range", "1..3", "--json")
lines = [json.loads(l) for l in p.stdout.splitlines()]
check("json lines", len(lines) == 3 and lines[2]["analytic_speedup"] == 3.0)

# race: structural smoke (fast settings)
p = run("race", "exp:1", "--replicas", "2", "--rounds", "5", "--unit-ms", "10", "--json")
rec = json.loads(p.stdout)
check("race fields", rec["rounds"] == 5 and rec["model_speedup"] == 2.0, p.stdout)
check("race winners in range", all(0 <= r["winner"] < 2 for r in rec["per_round"]))

# race env failure -> exit 4 (mean far below overhead floor)
run("race", "exp:1", "--replicas", "2", "--rounds", "1", "--unit-ms", "0.000001", expect=4)

# race with neither dist nor cmd -> usage error
run("race", expect=2)

# command race
p = run("race", "--cmd", "/bin/sh -c true", "--replicas", "3", "--rounds", "2", "--json")
rec = json.loads(p.stdout)
check("cmd race winner index", all(0 <= r["winner"] < 3 for r in rec["per_round"]), p.stdout)

if failures:
    print("FAIL")
    for f in failures:
        print(" -", f)
    sys.exit(1)
print("cli_test: all checks passed")
