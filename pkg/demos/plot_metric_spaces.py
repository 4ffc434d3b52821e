"""
Finite metric spaces with exact distances
=========================================

Distances are Fractions throughout. A raw symmetric matrix that breaks the
triangle inequality can be repaired by shortest-path closure.
"""

from fractions import Fraction

from kannanlab import FiniteMetricSpace, is_ultrametric, metric_closure, validate_metric

# a symmetric matrix where the long edge a-c exceeds the detour through b
raw = [[0, 1, 5], [1, 0, Fraction(3, 2)], [5, Fraction(3, 2), 0]]
report = validate_metric(raw)
print("valid:", report.valid)
for v in report.violations:
    print("  ", v.axiom, v.witness)

# shortest paths shrink d(a, c) to 5/2
space = metric_closure(raw, points=["a", "b", "c"])
print(space.d(0, 2))
print("ultrametric:", is_ultrametric(space))

# string rationals are accepted; floats are rejected on purpose
eq = FiniteMetricSpace.from_matrix([[0, "1/3", "1/3"], ["1/3", 0, "1/3"], ["1/3", "1/3", 0]])
print("equilateral is ultrametric:", is_ultrametric(eq))
