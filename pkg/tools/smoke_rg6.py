"""Smoke 6: oracle contract, retry convergence, curvy input, SHS region."""
import numpy as np

from openbook.curves import Curve, Interval
from openbook.errors import ContactError, DomainError, GermError, \
    PreconditionError
from openbook.invariant_forms import InvariantSHS
from openbook.relative_giroux import CollarRegion, cap_solid_torus, \
    giroux_oracle, relative_giroux

r = Interval(0.5, 1.0).mesh(1024)
h = Curve(r, np.stack([r, np.full_like(r, 2.0)], axis=1),
          np.stack([np.ones_like(r), np.zeros_like(r)], axis=1))
h_neg = Curve(r, np.stack([r - 0.7, np.ones_like(r)], axis=1),
              np.stack([np.ones_like(r), np.zeros_like(r)], axis=1))

# --- oracle contract
cap1 = cap_solid_torus(h, "monotone")
ans = giroux_oracle([cap1], [5])
print("w:", ans.w, " mult:", ans.multiplicities)
assert ans.w == [0.25] and ans.multiplicities == [5]
assert "Assumed, not constructed" in ans.assumption_record

try:
    giroux_oracle([cap1], [2], K=3)
    raise SystemExit("expected PreconditionError")
except PreconditionError as e:
    print("below-K rejected:", e)

cap2 = cap_solid_torus(h_neg, "rotating")
ans2 = giroux_oracle([cap1, cap2], [3, 7])
print("two tori:", ans2.w, ans2.multiplicities)
assert ans2.w == [0.25, 0.25]

# mutated germ -> GermError
bad = Curve(cap1.r, cap1.values + np.array([0.0, 1e-6]), cap1.derivs,
            check=False)
bad.germ_radius = cap1.germ_radius
try:
    giroux_oracle([bad], [3])
    raise SystemExit("expected GermError")
except GermError as e:
    print("germ mutation rejected:", str(e)[:70])

# missing germ radius -> DomainError
try:
    giroux_oracle([h], [3])
    raise SystemExit("expected DomainError")
except DomainError as e:
    print("missing radius rejected:", str(e)[:60])

# --- extra_rotations retry convergence
region_neg = CollarRegion((0.5, 1.0), h_neg, label="T4")
tr, ch, gc = relative_giroux(region_neg, n_i=2, rotation_choice="minus_one",
                             extra_rotations=1)
print("retry turning:", gc.turning, " passed:", gc.passed)
assert gc.passed and abs(gc.turning + 1.0) < 1e-6

# --- curvy collar input
hc_v = np.stack([r, 2.0 + 0.25 * np.sin(4.0 * r)], axis=1)
hc_d = np.stack([np.ones_like(r), np.cos(4.0 * r)], axis=1)
hc = Curve(r, hc_v, hc_d)
region_c = CollarRegion((0.5, 1.0), hc, label="T5")
trc, chc, gcc = relative_giroux(region_c, n_i=4, rotation_choice="zero")
print("curvy zero: turning", gcc.turning, " passed:", gcc.passed,
      " end h1:", float(gcc.end_value[0]))
assert gcc.passed and abs(gcc.turning) < 1e-6
trc2, chc2, gcc2 = relative_giroux(region_c, n_i=4,
                                   rotation_choice="minus_one")
print("curvy minus_one: turning", gcc2.turning, " passed:", gcc2.passed)
assert gcc2.passed and abs(gcc2.turning + 1.0) < 1e-6

# --- SHS-structured region (g contact, h any 2-form potential)
pot = Curve(r, np.stack([np.full_like(r, 0.3), r], axis=1),
            np.stack([np.zeros_like(r), np.ones_like(r)], axis=1))
shs = InvariantSHS(pot, h)
region_s = CollarRegion((0.5, 1.0), shs, label="T6")
assert region_s.contact_curve is h
trs, chs, gcs = relative_giroux(region_s, n_i=2, rotation_choice="zero")
print("SHS region: passed", gcs.passed)
assert gcs.passed

# --- broken inputs rejected at region construction
h_bad = Curve(r, np.stack([np.full_like(r, 0.5), 2.0 - 2.0 * r], axis=1),
              np.stack([np.zeros_like(r), np.full_like(r, -2.0)], axis=1))
try:
    CollarRegion((0.5, 1.0), h_bad)
    raise SystemExit("expected ContactError")
except ContactError as e:
    print("non-contact region rejected:", str(e)[:60])
print("OK smoke 6")
