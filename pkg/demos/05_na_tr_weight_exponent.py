"""Why ``na_tr`` raises the Nelson-Aalen tail ratio to the power beta/phat.

The weighted integral behind the estimator integrates against dF_n / Fbar_n(t).
A jump of the Nelson-Aalen F_n at Z_(i) carries the factor
Fbar_n(Z_(i)-) / Fbar_n(t) on top of the weight Fbar_n^(a-1), so the
discrete form uses the ratio to the power a = beta/phat.  Dropping that
factor (``exponent="a-1"``) gives an estimator whose limit is
beta^2 gamma1 / (beta - p)^2 instead of gamma1.  Its weight piles up near
the top order statistics, so it approaches that limit slowly; the
deterministic sum at the same k and m_n is printed alongside.
"""

import math

import numpy as np

from tailcens import censoring, estimators
from tailcens.selection import mn_loglog

gamma1, n, k, beta, reps = 1.0, 5000, 500, 1.01, 200


def short_form_centering(p):
    # the "a-1" sum with d_i/i -> p/i, NA ratio -> (i/k)^p, log ratio -> p gamma1 log(k/i)
    a = beta / p
    return sum(a * a * (p / i) * (i / k) ** (beta - p) * p * gamma1 * math.log(k / i)
               for i in range(mn_loglog(k), k + 1))


for p in (0.3, 0.7):
    design = censoring.CensoringDesign("pareto", gamma1, p)
    vals = {"a": [], "a-1": []}
    for r in range(reps):
        s = censoring.sort_with_concomitants(censoring.generate(design, n, np.random.SeedSequence(0, spawn_key=(r,))))
        for e in vals:
            vals[e].append(estimators.na_tr(s, k, beta, mn_loglog(k), exponent=e))
    print(f"p = {p}: mean with exponent a = {np.mean(vals['a']):.3f}, "
          f"with a-1 = {np.mean(vals['a-1']):.3f} (centering at this k {short_form_centering(p):.3f}, "
          f"limit {beta**2 * gamma1 / (beta - p) ** 2:.3f})")
