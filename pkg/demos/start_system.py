"""The start system: one root-of-unity point per primitive necklace.

Run: python demos/start_system.py
"""

import numpy as np

from osculants.combinatorics import enumerate_necklaces, necklace_to_string
from osculants.start import build_start_set, orbit_representatives_check, start_point
from osculants.system import evaluate, tilde_hypersurface

d = (2, 3)
f = tilde_hypersurface(2)
print(f"start points for d = {d}")
for nk in enumerate_necklaces(d):
    p = start_point(nk)
    res = evaluate(f, p).max_norm
    groups = "  ".join(np.array2string(g, precision=3, suppress_small=True) for g in p.alpha)
    print(f"  {necklace_to_string(nk)}: {groups}   residual {res:.1e}")

ss = build_start_set((3, 3, 2))
print(f"\n(3,3,2): {len(ss.points)} verified start points")

# every parametrization of the special curve is a rotation of a necklace point
rep = orbit_representatives_check((2, 4))
print(f"\n(2,4): {rep.n_parametrizations} parametrizations, orbit sizes {rep.orbit_sizes}, ok={rep.ok}")
