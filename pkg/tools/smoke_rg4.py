"""Smoke 4: general pipeline, zero rotation choice, h = (r, 2) on [0.5, 1]."""
import numpy as np

from openbook.curves import Curve, Interval
from openbook.relative_giroux import CollarRegion, relative_giroux

r = Interval(0.5, 1.0).mesh(1024)
h = Curve(r, np.stack([r, np.full_like(r, 2.0)], axis=1),
          np.stack([np.ones_like(r), np.zeros_like(r)], axis=1))
region = CollarRegion((0.5, 1.0), h, label="T1")

trace, chart, gcert = relative_giroux(region, n_i=3, rotation_choice="zero")
print("flags:", gcert.flags)
print("passed:", gcert.passed)
print("turning:", gcert.turning)
print("end_value:", gcert.end_value, " end_derivative:", gcert.end_derivative)
print("chart:", chart)
for line in gcert.certificate.report_lines():
    print("  ", line)
print("steps:", [(s.name, len(s.family)) for s in trace.steps])
print("translation:", gcert.certificate.details["translation"])
sub = gcert.certificate.details["subdivision"]
print("subdivision:", {k: round(v, 6) for k, v in sub.items()})

h1_l = 0.5
h1_end = float(gcert.end_value[0])
assert gcert.passed, "certificate must pass"
assert 0 < h1_end < h1_l, "h1^1(l_i) must land in (0, h1(l_i))"
assert abs(gcert.turning) < 1e-6
assert gcert.flags["iv"] is True
print("OK smoke 4")
