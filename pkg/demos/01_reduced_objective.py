"""
Two balls, one number
=====================

Two disjoint balls with radii r1, r2 and r1**n + r2**n = 1 are described by
the single coordinate x = log(r1**(n/2) / r2**(n/2)).  The constrained
Cheeger quotient of the pair is a constant times f(x), so everything about
which pair of balls is best reduces to minimizing f over the real line.
"""
# %% imports
import numpy as np

from twisted_cheeger import geometry as geo
from twisted_cheeger import mathcore as mc

# %% the quotient of an actual pair of balls agrees with the reduced form
n, q = 3, 1.4
for x in (-2.0, 0.0, 0.5, 3.0):
    pair = geo.x_to_radii(n, x)
    direct = geo.quotient_Q(pair.to_pair(), q)
    print(f"x={x:5.2f}  r1={pair.r1:.6f} r2={pair.r2:.6f}  Q={direct:.15f}  reduced={geo.normalized_pair_quotient(n, q, x):.15f}")

# %% f is even and equals 1 at the origin; its curvature there is 1 + 1/n + 1/n^2 - q
for q in (1.2, 1.4, 13 / 9, 1.48):
    print(f"n=3 q={q:.4f}  f(0)={mc.f(3, q, 0.0)}  f''(0)={mc.d2fdx2_at_zero(3, q):+.6f}")

# %% profiles for n = 2: flat bottom up to q = 7/4, a double well after it
x = np.linspace(0, 12, 7)
print("\n   x   " + "  ".join(f"q={q:<5}" for q in (1.5, 1.75, 1.8, 1.9)))
for xi in x:
    print(f"{xi:5.1f}  " + "  ".join(f"{float(mc.f(2, q, xi)):.5f}" for q in (1.5, 1.75, 1.8, 1.9)))

# %% nothing overflows, even far out where cosh itself would
print("\nlog f(2, 1.5, 1e6) =", float(mc.log_f(2, 1.5, 1e6)))

# %% optional picture
try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None
if plt is not None:
    xs = np.linspace(0, 15, 600)
    for q in (1.5, 1.75, 1.8, 1.9):
        plt.plot(xs, mc.f(2, q, xs), label=f"q = {q}")
    plt.axhline(1, color="k", lw=0.5)
    plt.xlabel("x")
    plt.ylabel("f")
    plt.legend()
    plt.savefig("profiles_n2.png", dpi=120)
    print("wrote profiles_n2.png")
