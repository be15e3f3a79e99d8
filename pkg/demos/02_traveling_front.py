"""A bistable front under skewed fractional diffusion.

Evolves the standard ramp initial condition at order 1.8 and skewness 0.1,
once with a balanced reaction (threshold 0.5) and once unbalanced
(threshold 0.6).  The balanced front settles into a slowly drifting
profile; the unbalanced one invades the metastable state.  Writes the
snapshot series as CSV next to this script.
"""

from pathlib import Path

import numpy as np

import fracfront as ff

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

grid = ff.Grid1D(30.0, 181)
params = ff.FractionalParams(1.8, 0.1)
cfg = ff.StepperConfig(method="semi-implicit", dt=0.02)
schedule = ff.make_schedule(20.0, 41)
ic = ff.chen_ramp(grid.x)

for a in (0.5, 0.6):
    nl = ff.BistableCubic(a)
    result = ff.integrate(ic, schedule, cfg, grid, params, nl)

    lo, hi = ff.bounds_check(result)
    monotone = max(float(np.max(np.maximum(0, -np.diff(s))))
                   for s in result.states)
    est = ff.estimate_speed(result)
    print(f"threshold a = {a}: potential gap = {nl.potential_gap():+.5f}")
    print(f"  solution range over the run: [{lo:.2e}, {hi:.10f}]")
    print(f"  monotonicity defect:         {monotone:.2e}")
    print(f"  front speed (level u = {a}): {est.speed:+.5f} "
          f"(fit rms {est.residual:.1e})")

    report = ff.estimate_decay_rate(result)
    print(f"  relaxation toward the wave:  rate = {report.decay_rate}, "
          f"R^2 = {report.r_squared:.3f}")

    path = OUT / f"front_a{a:g}.csv"
    ff.write_snapshot_csv(result, path)
    print(f"  snapshots -> {path}")
    print()

print("The balanced potential keeps the interface nearly still; raising the")
print("threshold to 0.6 makes state 1 metastable and the front invades it")
print("(positive speed, moving right).")
