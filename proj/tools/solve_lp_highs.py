#!/usr/bin/env python3
# Copyright 2026 The pipemap Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Solves an exported LP file with HiGHS and prints the result as JSON.

Output: {"status": "optimal" | "infeasible" | ..., "objective": float,
         "values": {name: value} (x_ variables only unless --all)}.
Exit code 3 when highspy is not importable.
"""

import argparse
import json
import sys


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("lp_file")
    parser.add_argument("--all", action="store_true", help="report every variable")
    args = parser.parse_args()

    try:
        import highspy
    except ImportError:
        print(json.dumps({"status": "no-solver"}))
        return 3

    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("mip_rel_gap", 0.0)
    h.setOptionValue("mip_abs_gap", 0.0)
    if h.readModel(args.lp_file) != highspy.HighsStatus.kOk:
        print(json.dumps({"status": "read-error"}))
        return 1
    h.run()
    status = h.getModelStatus()
    out = {"status": h.modelStatusToString(status).lower()}
    if status == highspy.HighsModelStatus.kOptimal:
        lp = h.getLp()
        names = list(lp.col_names_)
        values = list(h.getSolution().col_value)
        out["objective"] = h.getInfo().objective_function_value
        out["values"] = {
            name: value for name, value in zip(names, values) if args.all or name.startswith("x_")
        }
    print(json.dumps(out))
    return 0


if __name__ == "__main__":
    sys.exit(main())
