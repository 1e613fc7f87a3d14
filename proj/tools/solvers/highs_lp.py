#!/usr/bin/env python3
"""Solve an LP/MILP file with HiGHS and write a plain solution file.

usage: highs_lp.py MODEL.lp SOLUTION.txt [TIME_LIMIT_SECONDS]
"""
import sys

import highspy


def main(argv):
    if len(argv) < 3:
        print(__doc__, file=sys.stderr)
        return 2
    model, out = argv[1], argv[2]
    limit = float(argv[3]) if len(argv) > 3 else 300.0

    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("threads", 1)
    h.setOptionValue("time_limit", limit)
    h.setOptionValue("mip_rel_gap", 0.0)
    h.setOptionValue("mip_abs_gap", 1e-9)
    h.setOptionValue("mip_feasibility_tolerance", 1e-9)
    h.setOptionValue("primal_feasibility_tolerance", 1e-9)
    h.setOptionValue("dual_feasibility_tolerance", 1e-9)
    if h.readModel(model) != highspy.HighsStatus.kOk:
        print("cannot read " + model, file=sys.stderr)
        return 1
    h.run()
    st = h.getModelStatus()
    M = highspy.HighsModelStatus
    if st == M.kOptimal:
        status = "optimal"
    elif st in (M.kInfeasible, M.kUnboundedOrInfeasible):
        status = "infeasible"
    elif st in (M.kTimeLimit, M.kIterationLimit, M.kInterrupt,
                M.kSolutionLimit, M.kObjectiveBound, M.kObjectiveTarget):
        status = "limit"
    else:
        print("unexpected HiGHS status: " + h.modelStatusToString(st), file=sys.stderr)
        return 1

    with open(out, "w") as f:
        f.write("status %s\n" % status)
        info = h.getInfo()
        has_point = status == "optimal" or info.primal_solution_status == 2
        if has_point:
            f.write("objective %.17g\n" % info.objective_function_value)
            lp = h.getLp()
            values = h.getSolution().col_value
            for name, v in zip(lp.col_names_, values):
                f.write("%s %.17g\n" % (name, v))
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
