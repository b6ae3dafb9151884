"""A small replicated bias/MSE study.

Each replication draws its own independent stream from the master seed, so
the numbers do not depend on how many worker processes run the study.
Increase ``reps`` to 2000 for publication-size runs.
"""

import io

from tailcens.montecarlo import StudyConfig, export_csv, run_study

cfg = StudyConfig("frechet", gamma1=0.4, p=0.5, n=1000, reps=200, k_grid=(50, 100, 150, 200, 300),
                  betas=(1.01, 1.5), estimators=("efg", "mns", "na_tr"), master_seed=1)
result = run_study(cfg)

print(f"{'estimator':>12} {'k':>5} {'bias':>8} {'mse':>8}")
for (name, beta), st in sorted(result.cells.items(), key=lambda kv: (kv[0][0], kv[0][1] or 0)):
    label = name if beta is None else f"{name}({beta})"
    for j, k in enumerate(result.k_grid):
        print(f"{label:>12} {k:5d} {st.bias[j]:8.4f} {st.mse[j]:8.5f}")

buf = io.StringIO()
export_csv(result, buf)
print("\nCSV export, first lines:")
print("\n".join(buf.getvalue().splitlines()[:4]))
