"""
Picard traces and the gap envelope
==================================

Iterate from the far point, then check that the successive gaps decay at
the rate predicted by the four-point coefficient.
"""

from kannanlab import cauchy_certificate, make_paper_example, picard
from kannanlab.formats import fmt, trace_to_table

space, f = make_paper_example(4, 10)
trace = picard(f, space.index("x4"), max_steps=10)
print(trace_to_table(trace, space))
print(trace.termination)

cert = cauchy_certificate(trace, 4, "5/12")
print("rho:", fmt(cert.rho), "observed:", fmt(cert.analysis.rho_min))
print("holds:", cert.holds)
# the tail bound involves an (n-1)-th root, so it is a float
print("tail bound from m = 3:", cert.tail_bound())
