# pylint: disable=too-many-locals
"""Walk through the Bellman functions, the extremal and the lower-bound sequence."""

import math

from dyadic_bellman import (
    BellmanPoint,
    PowerWeightSpec,
    WeightedBellmanPoint,
    bellman_star,
    bellman_unweighted,
    delta_w,
    omega_p,
    power_weight_constants,
    run_suite,
)
from dyadic_bellman.extremal_lab import (
    extremal_g,
    prop2_instance,
    prop2_limit_rhs,
    solve_ap5,
)
from dyadic_bellman.models import Prop2Config, SuiteParameters

SEPARATOR = "-" * 60


def main() -> None:
    """Print a tour of the toolkit."""
    print(SEPARATOR)
    print("omega_p")
    for p in (1.5, 2.0, 3.0):
        print(f"  omega_{p}(0.75) = {omega_p(p, 0.75):.15g}")

    print(SEPARATOR)
    print("Bellman functions at F=2, f=1")
    unweighted = bellman_unweighted(BellmanPoint(2.0, 2.0, 1.0))
    print(f"  B_2(2, 1)          = {unweighted:.15g}")
    print(f"  2(1 + sqrt(0.5))^2 = {2 * (1 + math.sqrt(0.5)) ** 2:.15g}")

    spec = PowerWeightSpec(k=1.0, b=-0.5, p=2.0)
    constants = power_weight_constants(spec)
    point = WeightedBellmanPoint.build(2.0, 3.0, 1.0, constants.a, constants.c)
    print(f"  w** = t^-0.5: a={constants.a:.6g} c={constants.c:.6g}")
    print(f"  B*(3, 1)           = {bellman_star(point):.15g}")

    print(SEPARATOR)
    print("Extremal function")
    alpha_g = solve_ap5(2.0, 1.0, -0.5, 3.0, 1.0)
    achieved = delta_w(extremal_g(1.0, alpha_g), spec.weight(), 2.0)
    print(f"  alpha_g = {alpha_g:.15g}")
    print(f"  Delta_w(g) = {achieved:.15g}")

    print(SEPARATOR)
    print("Lower-bound sequence, p=2 F=2 f=1 h=4/3 z=1")
    cfg = Prop2Config(p=2.0, F=2.0, f=1.0, h=4 / 3, z=1.0)
    limit = prop2_limit_rhs(cfg)
    for alpha in (0.1, 0.01, 0.001):
        member = prop2_instance(cfg, alpha)
        print(
            f"  alpha={alpha:<6} [w]_p={member.ap_const:.6f} "
            f"ratio={member.int_maximal_p_w / limit:.6f}"
        )

    print(SEPARATOR)
    print("Doob suite, 20 random trees")
    (report,) = run_suite("doob", SuiteParameters(trials=20), seed=1)
    print(f"  pass={report.passed} worst margin={report.margin:.6g}")
    print(SEPARATOR)


if __name__ == "__main__":
    main()
