#!/usr/bin/env python3
"""Solve an LP/MILP/MIQP file with SCIP and write a plain solution file.

usage: scip_lp.py MODEL.lp SOLUTION.txt [TIME_LIMIT_SECONDS]
"""
import sys

import pyscipopt


def main(argv):
    if len(argv) < 3:
        print(__doc__, file=sys.stderr)
        return 2
    model, out = argv[1], argv[2]
    limit = float(argv[3]) if len(argv) > 3 else 300.0

    m = pyscipopt.Model()
    m.hideOutput()
    m.readProblem(model)
    m.setParam("limits/time", limit)
    m.setParam("limits/gap", 0.0)
    m.setParam("limits/absgap", 1e-9)
    m.setParam("numerics/feastol", 1e-9)
    m.setParam("parallel/maxnthreads", 1)
    m.optimize()
    st = m.getStatus()
    if st == "optimal":
        status = "optimal"
    elif st in ("infeasible", "inforunbd"):
        status = "infeasible"
    elif st in ("timelimit", "nodelimit", "gaplimit", "userinterrupt",
                "memlimit", "sollimit", "bestsollimit", "stallnodelimit",
                "totalnodelimit"):
        status = "limit"
    else:
        print("unexpected SCIP status: " + st, file=sys.stderr)
        return 1

    with open(out, "w") as f:
        f.write("status %s\n" % status)
        if m.getNSols() > 0 and status != "infeasible":
            sol = m.getBestSol()
            f.write("objective %.17g\n" % m.getSolObjVal(sol))
            for v in m.getVars():
                f.write("%s %.17g\n" % (v.name, m.getSolVal(sol, v)))
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
