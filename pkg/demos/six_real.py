"""A plane quartic graph with six real (4,4)-osculants out of eight.

Run: python demos/six_real.py
"""

import numpy as np

from osculants.osculants import conjugation_pairing
from osculants.pipeline import solve
from osculants.series import SparseHypersurface

# y = g(x), coefficients of x, x^2, ..., x^7 scaled by 1e-6
g = [-586971, -481753, 114414, -361929, 152011, -616310, 244262]
f = SparseHypersurface(2, {(0, 1): -1.0, **{(k + 1, 0): c / 1e6 for k, c in enumerate(g)}})

sol = solve(f, (4, 4))
print(sol.summary())
np.set_printoptions(precision=5, suppress=True, linewidth=120)
for r in sorted(sol.osculants, key=lambda r: (not r.is_real, r.form.a[1][0].real)):
    x, y = r.form.a
    kind = "real   " if r.is_real else "complex"
    print(kind, "x:", x.real if r.is_real else x, "\n        y:", y.real if r.is_real else y)

rep = conjugation_pairing(sol.osculants, d=(4, 4))
print("\nconjugate pairing consistent:", rep.parity_ok)
