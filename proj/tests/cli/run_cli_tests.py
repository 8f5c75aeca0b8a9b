#!/usr/bin/env python3
"""End-to-end checks of the freqstokes command-line tool."""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

BIN = Path(sys.argv[1])
FAILURES = []


def run(*args, expect=0):
    proc = subprocess.run([str(BIN), *args], capture_output=True, text=True)
    if expect is not None and proc.returncode != expect:
        FAILURES.append(
            f"{' '.join(args)}: exit {proc.returncode}, expected {expect}\n"
            f"stdout: {proc.stdout}\nstderr: {proc.stderr}"
        )
    return proc


def check(cond, label):
    if not cond:
        FAILURES.append(label)
    print(("ok   " if cond else "FAIL ") + label)


def main():
    tmp = Path(tempfile.mkdtemp(prefix="freqstokes_cli_"))
    channel = tmp / "channel.json"
    pipe = tmp / "pipe.json"
    case = tmp / "case.json"

    # --- generate ---------------------------------------------------------
    run("generate", "channel", "--ny", "4", "--nx", "40", "-o", str(channel))
    mesh = json.loads(channel.read_text())
    check(len(mesh["nodes"]) == 205, "channel node count 205")
    check(len(mesh["elements"]) == 320, "channel element count 320")

    run("generate", "pipe", "--radius", "1", "--length", "15",
        "--target-elements", "3000", "-o", str(pipe))
    mesh = json.loads(pipe.read_text())
    check(mesh["dimension"] == 3, "pipe dimension 3")
    check(2000 <= len(mesh["elements"]) <= 8000, "pipe element count near target")
    check(set(mesh["patches"]) == {"inlet", "outlet", "wall"}, "pipe patch names")

    # missing required flag -> usage error
    proc = run("generate", "channel", "--ny", "4", expect=None)
    check(proc.returncode != 0, "missing required flag exits nonzero")

    # --- solve ------------------------------------------------------------
    case.write_text(json.dumps({
        "rho": 1.0, "mu": 1.0, "omega": 4.0, "tolerance": 1e-3,
        "max_iterations": 10000,
        "bcs": [
            {"patch": "inlet", "kind": "neumann", "real": [0, 0, 1], "imag": [0, 0, 0]},
            {"patch": "wall", "kind": "dirichlet", "real": [0, 0, 0], "imag": [0, 0, 0]},
        ],
    }))
    out1 = tmp / "run1"
    mtx = tmp / "system.mtx"
    run("--deterministic", "solve", "--case", str(case), "--mesh", str(pipe),
        "-o", str(out1), "--dump-system", str(mtx))
    report = json.loads((out1 / "report.json").read_text())
    check(report["solver"]["converged"], "solve converged")
    check(report["alpha"] == 2.0, "report alpha from omega and radius")
    check("timings" not in report, "deterministic report omits timings")
    check(report["case"]["c_stab"] == 0.03125, "report embeds resolved defaults")
    check((out1 / "solution.vtk").exists(), "vtk written")
    check((out1 / "profile.csv").read_text().startswith("coord,u_r,u_i,p_r,p_i"),
          "profile header")
    check(mtx.read_text().startswith("%%MatrixMarket matrix coordinate real symmetric"),
          "matrix market dump header")

    # byte-identical rerun in deterministic mode
    out2 = tmp / "run2"
    run("--deterministic", "solve", "--case", str(case), "--mesh", str(pipe), "-o", str(out2))
    check((out1 / "report.json").read_bytes() == (out2 / "report.json").read_bytes(),
          "deterministic rerun: identical report")
    check((out1 / "profile.csv").read_bytes() == (out2 / "profile.csv").read_bytes(),
          "deterministic rerun: identical profile")
    check((out1 / "solution.vtk").read_bytes() == (out2 / "solution.vtk").read_bytes(),
          "deterministic rerun: identical field")

    # --- error paths ------------------------------------------------------
    bad_mesh = tmp / "bad_mesh.json"
    bad_mesh.write_text('{"dimension": 3, "nodes": [[0,0,0]], "elements": [[0,1,2,3]], "patches": {}}')
    proc = run("solve", "--case", str(case), "--mesh", str(bad_mesh), "-o", str(tmp / "x"),
               expect=3)
    check("element 0" in proc.stderr, "mesh error names the offending element")

    bad_case = tmp / "bad_case.json"
    bad_case.write_text('{"rho": -1, "mu": 1, "omega": 0}')
    run("solve", "--case", str(bad_case), "--mesh", str(pipe), "-o", str(tmp / "x"), expect=2)

    starved = tmp / "starved.json"
    starved.write_text(json.dumps({
        "rho": 1.0, "mu": 1.0, "omega": 4.0, "tolerance": 1e-3, "max_iterations": 3,
        "bcs": [
            {"patch": "inlet", "kind": "neumann", "real": [0, 0, 1], "imag": [0, 0, 0]},
            {"patch": "wall", "kind": "dirichlet", "real": [0, 0, 0], "imag": [0, 0, 0]},
        ],
    }))
    out3 = tmp / "run3"
    run("solve", "--case", str(starved), "--mesh", str(pipe), "-o", str(out3), expect=4)
    check((out3 / "report.json").exists(), "non-convergence still writes the report")

    # --- verify -----------------------------------------------------------
    vcsv = tmp / "verify.csv"
    run("verify", "--case", str(case), "--mesh", str(pipe), "--alphas", "0,2",
        "-o", str(vcsv))
    lines = vcsv.read_text().strip().splitlines()
    check(lines[0] == "alpha,error_norm,q_r_star,q_i_star,q_ref_r_star,q_ref_i_star,n_itr",
          "verify csv header")
    check(len(lines) == 3, "verify row per alpha")
    row0 = lines[1].split(",")
    check(abs(float(row0[2]) - 1.0) < 0.15, "verify q_r* near 1 at alpha=0")
    check(abs(float(row0[4]) - 1.0) < 1e-9, "verify reference q_r* exactly 1 at alpha=0")

    # --- sweep ------------------------------------------------------------
    scsv = tmp / "sweep.csv"
    run("sweep", "--param", "tolerance", "--values", "1e-1,1e-2", "--case", str(case),
        "--mesh", str(pipe), "-o", str(scsv))
    lines = scsv.read_text().strip().splitlines()
    check(lines[0] == "value,error,imbalance,n_itr", "sweep csv header")
    check(len(lines) == 3, "sweep row per value")
    imb = [float(l.split(",")[2]) for l in lines[1:]]
    check(imb[1] < imb[0], "imbalance falls with tighter tolerance")

    run("sweep", "--param", "tolerance", "--values", "1e-2,1e-1,1e-3", "--case", str(case),
        "--mesh", str(pipe), "-o", str(scsv), expect=2)  # not monotone

    # --- womersley-table ----------------------------------------------------
    wcsv = tmp / "womersley.csv"
    run("womersley-table", "--alpha", "4", "--samples", "51", "-o", str(wcsv))
    lines = wcsv.read_text().strip().splitlines()
    check(lines[0] == "r_over_R,u_r,u_i", "table header")
    check(len(lines) == 52, "table row count")
    first = lines[1].split(",")
    last = lines[-1].split(",")
    check(float(first[0]) == 0.0 and float(last[0]) == 1.0, "table spans [0, 1]")
    check(abs(float(last[1])) < 1e-12 and abs(float(last[2])) < 1e-12, "no-slip at r=R")

    print(f"\n{len(FAILURES)} failures")
    if FAILURES:
        for f in FAILURES:
            print("FAIL:", f)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
