"""Smoke 1: monotone cap of h = (r, 2) on [0.5, 1] + independent defect sweep."""
import numpy as np

from openbook.curves import Curve, Interval
from openbook.relative_giroux import cap_solid_torus

r = Interval(0.5, 1.0).mesh(1024)
h = Curve(r, np.stack([r, np.full_like(r, 2.0)], axis=1),
          np.stack([np.ones_like(r), np.zeros_like(r)], axis=1))

capped = cap_solid_torus(h, "monotone")
print("mode:", capped.cap_mode, " germ_radius:", capped.germ_radius,
      " sweeps:", capped.sweeps, " turning:", capped.turning_contribution)
print("cert passed:", capped.certificate.passed)
for line in capped.certificate.report_lines():
    print("  ", line)

# independent oracle: dense grid defect sweep through the exact pieces
pieces = capped.pieces
xs = np.linspace(1e-6, 1.0, 20001)
v = pieces.value(xs)
d = pieces.deriv(xs)
defect = (d[:, 0] * v[:, 1] - d[:, 1] * v[:, 0]) / xs
print("independent defect sweep: min =", float(defect.min()),
      "at x =", float(xs[int(np.argmin(defect))]))
assert defect.min() > 0, "contact defect must be positive everywhere"

# germ: standard pair (x^2, 1) inside the germ radius
xs_g = np.linspace(0.0, capped.germ_radius, 4097)
gv = pieces.value(xs_g)
gap = max(float(np.max(np.abs(gv[:, 0] - xs_g**2))),
          float(np.max(np.abs(gv[:, 1] - 1.0))))
print("germ gap on [0, w_g]:", gap)
assert gap <= 1e-12

# matches input beyond l_i
xs_t = np.linspace(0.5, 1.0, 4097)
tail_gap = float(np.max(np.abs(pieces.value(xs_t) - h(xs_t))))
print("tail gap on [l_i, R_i]:", tail_gap)

# sampled output: w_g is a mesh node so the sampled cap interpolates exactly
iv = float(np.max(np.abs(capped(np.linspace(0, capped.germ_radius, 513))
                         - pieces.value(np.linspace(0, capped.germ_radius, 513)))))
print("sampled-vs-exact on germ:", iv)
print("OK smoke 1")
