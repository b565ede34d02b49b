"""
Where symmetry breaks
=====================

For small q the best pair is two equal balls (x = 0).  Past a threshold
q_tilde(n) an unequal pair wins.  For n = 2 the switch is gentle and happens
at exactly 7/4; for n >= 3 a second well first appears away from the origin
(the fold), then drops below 1 at q_tilde, so the minimizer jumps.
"""
# %%
from twisted_cheeger import geometry as geo
from twisted_cheeger import mathcore as mc
from twisted_cheeger import optimize as opt

# %% n = 2
t = opt.threshold(2)
print(f"n=2: q_tilde = {t.q_tilde!r} after {t.iterations} bisection steps")

# %% n >= 3: fold, threshold and loss of local minimality at the origin
print(f"\n{'n':>3} {'1+1/n':>10} {'fold':>12} {'q_tilde':>16} {'x_tilde':>10} {'1+1/n+1/n^2':>12}")
for n in range(3, 9):
    t = opt.threshold(n)
    print(
        f"{n:>3} {1 + 1 / n:>10.6f} {opt.fold_exponent(n):>12.8f} {t.q_tilde:>16.12f} "
        f"{t.minimizers_at_threshold[1]:>10.6f} {mc.qbar(n):>12.8f}"
    )

# %% at the threshold the two pairs give the same quotient
n = 3
t = opt.threshold(n)
xt = t.minimizers_at_threshold[1]
r = geo.x_to_radii(n, xt)
print(f"\nn=3 at q_tilde: f(0)=1, f(x_tilde)={float(mc.f(n, t.q_tilde, xt)):.15f}")
print(f"equal balls r = {2 ** (-1 / n):.6f};  unequal pair r1 = {r.r1:.6f}, r2 = {r.r2:.6f}")

# %% the stationary points on either side of the jump
for q in (1.40, opt.fold_exponent(3) + 1e-4, t.q_tilde, 1.444, 1.46):
    pts = opt.stationary_points(3, q)
    print(f"q={q:.6f}: " + ", ".join(f"{p.kind}@{p.x:.4f}" for p in pts))
