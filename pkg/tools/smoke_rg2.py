"""Smoke 2: h_1(l_i) < 0 forces the rotating mode; monotone raises ModeError."""
import numpy as np

from openbook.curves import Curve, Interval
from openbook.errors import ModeError
from openbook.relative_giroux import cap_solid_torus

r = Interval(0.5, 1.0).mesh(1024)
h = Curve(r, np.stack([r - 0.8, np.ones_like(r)], axis=1),
          np.stack([np.ones_like(r), np.zeros_like(r)], axis=1))

try:
    cap_solid_torus(h, "monotone")
    raise SystemExit("expected ModeError")
except ModeError as e:
    print("monotone rejected:", e)

capped = cap_solid_torus(h, "rotating")
print("mode:", capped.cap_mode, " germ_radius:", capped.germ_radius,
      " sweeps:", capped.sweeps, " turning:", capped.turning_contribution)
print("cert passed:", capped.certificate.passed)
for line in capped.certificate.report_lines():
    print("  ", line)

pieces = capped.pieces
xs = np.linspace(1e-6, 1.0, 40001)
v = pieces.value(xs)
d = pieces.deriv(xs)
defect = (d[:, 0] * v[:, 1] - d[:, 1] * v[:, 0]) / xs
print("independent defect sweep: min =", float(defect.min()),
      "at x =", float(xs[int(np.argmin(defect))]))
assert defect.min() > 0

xs_g = np.linspace(0.0, capped.germ_radius, 4097)
gv = pieces.value(xs_g)
gap = max(float(np.max(np.abs(gv[:, 0] - xs_g**2))),
          float(np.max(np.abs(gv[:, 1] - 1.0))))
print("germ gap:", gap)
assert gap <= 1e-12
xs_t = np.linspace(0.5, 1.0, 4097)
print("tail gap:", float(np.max(np.abs(pieces.value(xs_t) - h(xs_t)))))

# extra rotations bump the sweep count
capped2 = cap_solid_torus(h, "rotating", extra_rotations=2)
print("extra=2 sweeps:", capped2.sweeps, " turning:",
      capped2.turning_contribution)
assert capped2.sweeps == capped.sweeps + 2
print("OK smoke 2")
