"""
The minimizer as a function of q
================================

Sweeping q shows the two behaviours side by side: a continuous branch
growing out of the origin for n = 2, and a jump for n = 3.  Close to the
critical exponent n/(n-1) the optimal pair degenerates toward one ball
(x_bar grows without bound).
"""
# %%
import numpy as np

from twisted_cheeger import optimize as opt

# %% n = 2: x_bar grows like a square root past 7/4
qs = 1.75 + np.array([1e-4, 1e-3, 1e-2, 1e-1])
for s in opt.minimizer_curve(2, qs):
    print(f"n=2 q={s.q:.4f}  x_bar={s.x_bar:.5f}  x_bar/sqrt(q-7/4)={s.x_bar / np.sqrt(s.q - 1.75):.4f}")

# %% n = 3: zero up to q_tilde, then a finite jump
t = opt.threshold(3).q_tilde
qs = t + np.array([-1e-4, -1e-6, 1e-6, 1e-4])
for s in opt.minimizer_curve(3, qs):
    print(f"n=3 q-q_tilde={s.q - t:+.0e}  x_bar={s.x_bar:.5f}  f_bar={s.f_bar:.12f}")

# %% degeneration near the critical exponent
for n in (2, 3, 4):
    qc = n / (n - 1)
    xb = [s.x_bar for s in opt.minimizer_curve(n, [qc - 1e-2, qc - 1e-3, qc - 1e-4])]
    print(f"n={n}: x_bar at 1*-1e-2, 1e-3, 1e-4 = " + ", ".join(f"{v:.3f}" for v in xb))

# %% the same data as plot-ready CSV:  twisted-cheeger figures --out figures
