#!/usr/bin/env python3
"""CLI-level checks: JSON reports validate against the shipped schema, human
and JSON output agree on verdicts, and exit codes follow the contract
(0 success, 1 failure, 2 parse error, 3 budget exhausted)."""
import json
import subprocess
import sys
import tempfile
import os

import jsonschema

CTD = sys.argv[1]
SRC = sys.argv[2]
SCHEMA = json.load(open(os.path.join(SRC, "data", "report.schema.json")))

failures = []


def run(args, stdin=None):
    proc = subprocess.run([CTD] + args, capture_output=True, text=True)
    return proc


def check(name, cond, detail=""):
    if cond:
        print(f"ok   {name}")
    else:
        print(f"FAIL {name} {detail}")
        failures.append(name)


def json_of(args, expect_code):
    proc = run(args + ["--json"])
    check(f"exit code {' '.join(args)}", proc.returncode == expect_code,
          f"(got {proc.returncode}, stderr: {proc.stderr.strip()})")
    report = json.loads(proc.stdout)
    jsonschema.validate(report, SCHEMA)
    print(f"ok   schema {' '.join(args)}")
    return report


def verdicts_agree(args):
    text = run(args).stdout
    rep = json_of(args, run(args).returncode)
    agrees = ("PASS" in text) == rep["passed"] and ("FAIL\n" in text) != rep["passed"]
    check(f"verdict agreement {' '.join(args)}", agrees)
    for section in rep["sections"]:
        line = f"== {section['title']}: " + ("ok" if section["ok"] else "FAIL")
        check(f"section verdict {section['title']} {' '.join(args)}", line in text)


grades = os.path.join(SRC, "data", "grades.ctd")
zoo = os.path.join(SRC, "data", "zoo.ctd")

# passing runs
r = json_of(["closure", "--script", grades], 0)
check("grades report passed", r["passed"])
check("grades derivation present",
      r["sections"][0]["details"]["derivation"]["steps"][-1]["statement"]["member"] == ["C"])
r = json_of(["check", "--script", zoo], 0)
r = json_of(["anomaly"], 0)
check("anomaly derivation matches the shipped fixture",
      r["sections"][0]["details"]["derivation"] ==
      json.load(open(os.path.join(SRC, "data", "grades_derivation.json"))))
r = json_of(["enumerate", "--worlds", "a b", "--system", "CJ97"], 0)
check("enumerate count", r["sections"][0]["details"]["count"] == 4)
r = json_of(["independence", "--system", "CJ97", "--fail", "5e"], 0)
check("independence found", r["sections"][0]["details"]["status"] == "found")
r = json_of(["lemma", "--id", "unique_bad", "--worlds", "2"], 0)
check("lemma verified", r["sections"][0]["ok"])

# failing check -> exit 1
with tempfile.NamedTemporaryFile("w", suffix=".ctd", delete=False) as f:
    f.write("worlds a b\nmodel m = { ob {a}: {b} }\nsystem CJ97\ncheck\n")
    bad_script = f.name
r = json_of(["check", "--script", bad_script], 1)
check("failing check reported", not r["passed"])

# parse error -> exit 2
with tempfile.NamedTemporaryFile("w", suffix=".ctd", delete=False) as f:
    f.write("worlds a b\nset X = {zork}\n")
    broken = f.name
proc = run(["check", "--script", broken])
check("parse error exit code", proc.returncode == 2, f"(got {proc.returncode})")
check("parse error names position", ":2:" in proc.stderr and "zork" in proc.stderr,
      proc.stderr.strip())

# budget exhausted -> exit 3
proc = run(["lemma", "--id", "obSelf_of_obSelf", "--worlds", "3", "--budget", "50", "--json"])
check("budget exhausted exit code", proc.returncode == 3, f"(got {proc.returncode})")
rep = json.loads(proc.stdout)
jsonschema.validate(rep, SCHEMA)
check("budget flag in report", rep["budget_exhausted"])

# verdict agreement between human and JSON output
verdicts_agree(["check", "--script", zoo])
verdicts_agree(["check", "--script", bad_script])
verdicts_agree(["closure", "--script", grades])

# determinism across reruns and worker counts
a = run(["enumerate", "--worlds", "a b", "--system", "CJ97", "--json"]).stdout
b = run(["enumerate", "--worlds", "a b", "--system", "CJ97", "--json"]).stdout
c = run(["enumerate", "--worlds", "a b", "--system", "CJ97", "--json", "--workers", "4"]).stdout
check("rerun determinism", a == b)
check("worker-count independence", a == c)

os.unlink(bad_script)
os.unlink(broken)

if failures:
    print(f"{len(failures)} failures")
    sys.exit(1)
print("all CLI report checks passed")
