"""
Classifying a self-map by its minimal coefficients
==================================================

For each contraction class the library finds the smallest admissible
coefficient by scanning every n-subset, then reports the witness subset.
"""

from kannanlab import (kannan_min_coefficient, make_paper_example, npk_min_coefficient,
                       tpd_min_coefficient)
from kannanlab.formats import fmt

space, f = make_paper_example(4, 10)
print(space.points, f.table)

# four-point condition holds with 5/12 < 3/4
r = npk_min_coefficient(f, 4)
print("npk(4):", fmt(r.min_coefficient), "member" if r.member else "non-member")

# three points fail: the first three labels are the witness
r = npk_min_coefficient(f, 3)
print("npk(3):", fmt(r.min_coefficient), [space.points[i] for i in r.witness])

print("kannan:", fmt(kannan_min_coefficient(f).min_coefficient))
print("tpd(4):", fmt(tpd_min_coefficient(f, 4).min_coefficient))

# the separation persists for larger n with M = n(n+1)
for n in range(4, 9):
    _, g = make_paper_example(n, n * (n + 1))
    up, low = npk_min_coefficient(g, n), npk_min_coefficient(g, n - 1)
    print(n, fmt(up.min_coefficient), fmt(low.min_coefficient), up.member, low.member)
