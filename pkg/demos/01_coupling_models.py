"""Coupling models: build, normalize and sanity-check agent dynamics.

Every agent in the chain applies a front controller against the gap to its
predecessor and a rear controller against the gap to its follower. Here we
build the three canonical coupling pairs used throughout the demos:

  symmetric           rear = front
  gain-asymmetric     rear = (2.5/4) * front   (position AND velocity scaled)
  velocity-asymmetric rear differs only in the s-coefficient of the numerator

The plant is a double integrator with linear friction, the controller a PI,
so each coupling is (1/3)(k_v s + k_p) / (s^2 (s/3 + 1)) with two integrators
factored out structurally.
"""

import numpy as np

from wavestring import (
    AgentDynamics,
    Polynomial,
    check_assumption1,
    low_order_coeffs,
    positional_symmetry,
    tf_eval,
    tf_normalize,
)

front = tf_normalize(Polynomial([4 / 3, 4 / 3]), Polynomial([0, 0, 1, 1 / 3]))
print("front coupling, normalized:")
print("  numerator coefficients  ", front.num.coeffs)
print("  denominator coefficients", front.den.coeffs)
print("  integrators factored out", front.p)
print("  value at s=1j           ", tf_eval(front, 1j))
print()

pairs = {
    "symmetric": AgentDynamics(front, front),
    "gain-asymmetric": AgentDynamics(
        front, tf_normalize(Polynomial([2.5 / 3, 2.5 / 3]), Polynomial([0, 0, 1, 1 / 3]))
    ),
    "velocity-asymmetric": AgentDynamics(
        front, tf_normalize(Polynomial([4 / 3, 2.5 / 3]), Polynomial([0, 0, 1, 1 / 3]))
    ),
}

print(f"{'pair':<22}{'kappa':>8}{'k_y1':>8}{'l_x1':>8}"
      f"{'pos.sym':>9}{'checks':>8}")
for name, d in pairs.items():
    c = low_order_coeffs(d)
    report = check_assumption1(d)
    print(f"{name:<22}{c.kappa:>8.3f}{c.k_y1:>8.3f}{c.l_x1:>8.3f}"
          f"{str(positional_symmetry(d)):>9}{str(report.passed):>8}")

print()
print("kappa is the DC gain ratio front/rear; the positional coupling is")
print("symmetric exactly when kappa = 1, regardless of velocity terms.")

# a structurally bad pair: a right-half-plane zero
bad = tf_normalize(Polynomial([-4, 4]), Polynomial([0, 0, 1, 1 / 3]))
report = check_assumption1(AgentDynamics(bad, front))
print()
print("a pair with a right-half-plane zero is flagged, not silently used:")
for v in report.violations:
    print("  violation:", v)
