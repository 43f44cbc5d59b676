"""Real osculant counts over random real targets.

Run: python demos/experiment.py [trials]
"""

import sys

from osculants.pipeline import run_experiment

trials = int(sys.argv[1]) if len(sys.argv) > 1 else 20
for seed, d in enumerate([(2, 2), (2, 3), (3, 3)]):
    res = run_experiment(d, trials, seed=seed)
    counts = res.real_counts
    hist = {k: counts.count(k) for k in sorted(set(counts))}
    print(f"{d}: real counts {hist}, failed {len(res.failed)}, parity anomalies {len(res.parity_anomalies)}")
    print(res.to_csv())
