"""Recompute a sweep's aggregate table from the raw CSV and compare it with
the <base>.agg.csv written by the C++ side."""
import csv
import math
import sys
from collections import defaultdict

from scipy.stats import beta

CONF = 0.995


def cp(k, s):
    a = 1 - CONF
    lo = 0.0 if k == 0 else beta.ppf(a / 2, k, s - k + 1)
    hi = 1.0 if k == s else beta.ppf(1 - a / 2, k + 1, s - k)
    return lo, hi


def mean_se(xs):
    if not xs:
        return None
    n = len(xs)
    mu = math.fsum(xs) / n
    if n == 1:
        return mu, 0.0
    var = math.fsum((x - mu) ** 2 for x in xs) / (n - 1)
    return mu, math.sqrt(var / n)


def close(a, b, tol):
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def main(raw_path, agg_path):
    groups = defaultdict(list)
    with open(raw_path, newline="") as f:
        for row in csv.DictReader(f):
            groups[(int(row["grid_index"]), row["algorithm"])].append(row)

    with open(agg_path, newline="") as f:
        agg = list(csv.DictReader(f))

    failures = []
    if len(agg) != len(groups):
        failures.append(f"group count {len(agg)} != {len(groups)}")
    for row in agg:
        key = (int(row["grid_index"]), row["algorithm"])
        recs = groups.get(key, [])
        s = len(recs)
        ne = sum(r["terminal_kind"] in ("NE", "SPGD_CONVERGED") for r in recs)
        two = sum(r["terminal_kind"] == "CYCLE" and r["cycle_length"] == "2" for r in recs)
        if (int(row["count"]), int(row["ne_count"]), int(row["two_cycle_count"])) != (s, ne, two):
            failures.append(f"{key}: counts differ")
            continue
        for name, k in (("p_ne", ne), ("p_two_cycle", two)):
            lo, hi = cp(k, s)
            if not (close(float(row[name]), k / s, 1e-15)
                    and close(float(row[name + "_lo"]), lo, 1e-8)
                    and close(float(row[name + "_hi"]), hi, 1e-8)):
                failures.append(f"{key}: {name} interval differs")

        def values(col):
            return [float(r[col]) for r in recs if r[col] != "NA"]

        for col, mean_col, se_col in (
            ("steps_or_iters", "mean_steps", "se_steps"),
            ("wall_ns", "mean_wall_ns", "se_wall_ns"),
            ("terminal_mean_payoff", "mean_terminal_payoff", "se_terminal_payoff"),
            ("trajectory_mean_payoff", "mean_traj_payoff", "se_traj_payoff"),
        ):
            ref = mean_se(values(col))
            if ref is None:
                if row[mean_col] != "NA" or row[se_col] != "NA":
                    failures.append(f"{key}: {mean_col} should be NA")
                continue
            if not (close(float(row[mean_col]), ref[0], 1e-12)
                    and close(float(row[se_col]), ref[1], 1e-9)):
                failures.append(f"{key}: {mean_col} differs")

    for msg in failures:
        print("MISMATCH", msg)
    print(f"checked {len(agg)} aggregate rows: {'ok' if not failures else 'FAILED'}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1], sys.argv[2]))
