"""Smoke 3: special affine branch -> constant homotopy, flags (i)-(iii),(v)."""
import numpy as np

from openbook.curves import Curve, Interval
from openbook.relative_giroux import CollarRegion, relative_giroux

r = Interval(0.5, 1.0).mesh(1024)
h = Curve(r, np.stack([r - 0.5, np.ones_like(r)], axis=1),
          np.stack([np.ones_like(r), np.zeros_like(r)], axis=1))
region = CollarRegion((0.5, 1.0), h, label="T7")

trace, chart, gcert = relative_giroux(region, n_i=2, special=True)
print("flags:", gcert.flags)
print("passed:", gcert.passed)
print("turning:", gcert.turning)
print("chart:", chart)
for line in gcert.certificate.report_lines():
    print("  ", line)
print("steps:", [(s.name, len(s.family)) for s in trace.steps])
print("assumption:", gcert.assumption_record[:90], "...")
cap = trace.filled_curve
print("cap mode:", cap.cap_mode, " germ_radius:", cap.germ_radius)
print("cap cert passed:", cap.certificate.passed)
for line in cap.certificate.report_lines():
    print("  ", line)

assert gcert.flags == {"i": True, "ii": True, "iii": True,
                       "iv": "n/a", "v": True}
assert gcert.passed
assert gcert.turning == 0.0
# every homotopy stage is constant
for s in trace.steps:
    for t, c in s.family:
        assert float(np.max(np.abs(c.values - s.family.curves[0].values))) == 0.0

# independent defect sweep of the recharted cap
pieces = cap.pieces
S = cap.domain.hi
xs = np.linspace(1e-6, S, 20001)
v, d = pieces.value(xs), pieces.deriv(xs)
defect = (d[:, 0] * v[:, 1] - d[:, 1] * v[:, 0]) / xs
print("special cap defect min:", float(defect.min()))
assert defect.min() > 0
print("OK smoke 3")
