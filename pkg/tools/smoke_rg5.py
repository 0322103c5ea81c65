"""Smoke 5: minus-one rotation on h_1(l_i) = -0.2; zero -> ChoiceError."""
import numpy as np

from openbook.curves import Curve, Interval
from openbook.errors import ChoiceError
from openbook.relative_giroux import CollarRegion, relative_giroux

r = Interval(0.5, 1.0).mesh(1024)
h = Curve(r, np.stack([r - 0.7, np.ones_like(r)], axis=1),
          np.stack([np.ones_like(r), np.zeros_like(r)], axis=1))
region = CollarRegion((0.5, 1.0), h, label="T2")

try:
    relative_giroux(region, n_i=2, rotation_choice="zero")
    raise SystemExit("expected ChoiceError")
except ChoiceError as e:
    print("zero rejected:", e)

trace, chart, gcert = relative_giroux(region, n_i=2,
                                      rotation_choice="minus_one")
print("flags:", gcert.flags)
print("passed:", gcert.passed)
print("turning:", gcert.turning)
print("end_value:", gcert.end_value)
for line in gcert.certificate.report_lines():
    print("  ", line)
print("slide samples:", len(trace.steps[1].family))
assert gcert.passed
assert abs(gcert.turning - (-1.0)) < 1e-6
assert float(gcert.end_value[0]) > 0
assert gcert.flags["iv"] is True

# minus_one is also available when h_1(l_i) > 0
r2g = Interval(0.5, 1.0).mesh(1024)
h2 = Curve(r2g, np.stack([r2g, np.full_like(r2g, 2.0)], axis=1),
           np.stack([np.ones_like(r2g), np.zeros_like(r2g)], axis=1))
region2 = CollarRegion((0.5, 1.0), h2, label="T3")
trace2, chart2, gcert2 = relative_giroux(region2, n_i=2,
                                         rotation_choice="minus_one")
print("positive-edge minus_one turning:", gcert2.turning,
      " passed:", gcert2.passed)
assert gcert2.passed and abs(gcert2.turning - (-1.0)) < 1e-6
print("OK smoke 5")
