"""Invariant differential forms from curves.

A curve pair (h, g) encodes the 2-form w = d(h1 dphi + h2 dtheta) and the
1-form lambda = g1 dphi + g2 dtheta on an interval of radii times a torus.
Every structure predicate becomes a pointwise inequality:

* contact:        cross(h', h) > 0        (collar chart; sign per chart)
* stabilization:  cross(h', g') = 0  and  E := cross(h', g) > 0
* taming by the class a: cross(h', a) = h1' a2 - h2' a1 > 0

This module owns those predicates, the Reeb field, the proportionality
coefficient dlambda = f w, unimodular torus coordinate changes with their
orientation bookkeeping, and the two model-neighbourhood checks (Liouville
identity on pages, stabilizing-flow decay).
"""

from __future__ import annotations

import math

import numpy as np

from .certificates import Certificate
from .curves import (Curve, TAU_EQ, cross2, dot2, positivity_floor)
from .errors import (ContactError, DegeneracyError, DomainError,
                     ImmersionError, MatrixError)

# Orientation sign of each chart's volume form relative to dr^dphi^dtheta.
# collar (r,phi,theta): +1; binding (phi,r,theta): one transposition: -1;
# solidtorus (theta,r,phi): cyclic: +1.  The single source of truth for the
# sign juggling between the three coordinate conventions in use.
CHART_SIGNS = {"collar": 1.0, "binding": -1.0, "solidtorus": 1.0}


class ChartConvention:
    """Coordinate ordering tag with its orientation sign."""

    def __init__(self, order="collar"):
        if order not in CHART_SIGNS:
            raise DomainError("unknown chart order %r (want one of %s)"
                              % (order, sorted(CHART_SIGNS)))
        self.order = order
        self.sign = CHART_SIGNS[order]

    def __eq__(self, other):
        return isinstance(other, ChartConvention) and other.order == self.order

    def __repr__(self):
        return "ChartConvention(%r)" % self.order


COLLAR = ChartConvention("collar")
BINDING = ChartConvention("binding")
SOLIDTORUS = ChartConvention("solidtorus")


class IntegerVector2:
    """Integer homology class a1*phi + a2*theta on the torus."""

    def __init__(self, a1, a2, primitive=False):
        if a1 != int(a1) or a2 != int(a2):
            raise DomainError("integer vector needs integer entries")
        self.a1 = int(a1)
        self.a2 = int(a2)
        if primitive and math.gcd(abs(self.a1), abs(self.a2)) != 1:
            raise DomainError("(%d, %d) is not primitive" % (self.a1, self.a2))
        self.primitive = bool(primitive)

    def as_array(self):
        return np.array([self.a1, self.a2], dtype=float)

    def __iter__(self):
        return iter((self.a1, self.a2))

    def __eq__(self, other):
        return (isinstance(other, IntegerVector2)
                and (self.a1, self.a2) == (other.a1, other.a2))

    def __repr__(self):
        return "IntegerVector2(%d, %d)" % (self.a1, self.a2)


class InvariantForm:
    """1-form g1 dphi + g2 dtheta, as a curve plus chart tag."""

    def __init__(self, g, chart=COLLAR):
        self.g = g
        self.chart = chart if isinstance(chart, ChartConvention) else \
            ChartConvention(chart)

    def to_record(self):
        return {"chart": self.chart.order, "g": self.g.to_record()}

    @classmethod
    def from_record(cls, rec):
        return cls(Curve.from_record(rec["g"]), ChartConvention(rec["chart"]))


class InvariantSHS:
    """Stable pair: 2-form potential h and stabilizing 1-form g.

    Constructing the object does *not* verify the structure conditions;
    call :func:`verify_shs` for the certificate.  (Constructions build
    candidates first and certify as the final step.)
    """

    def __init__(self, h, g, chart=COLLAR):
        if not (np.allclose(h.r, g.r)):
            raise DomainError("h and g must share a sample grid")
        self.h = h
        self.g = g
        self.chart = chart if isinstance(chart, ChartConvention) else \
            ChartConvention(chart)

    @property
    def r(self):
        return self.h.r

    def to_record(self):
        return {"chart": self.chart.order, "h": self.h.to_record(),
                "g": self.g.to_record()}

    @classmethod
    def from_record(cls, rec):
        return cls(Curve.from_record(rec["h"]), Curve.from_record(rec["g"]),
                   ChartConvention(rec["chart"]))


class Defect:
    """Pointwise contact defect of a curve, with its positivity verdict."""

    def __init__(self, r, values):
        self.r = r
        self.values = values
        self.floor = positivity_floor(values)
        self.min = float(np.min(values))
        self.argmin = float(r[int(np.argmin(values))])
        self.is_contact = bool(self.min >= self.floor)

    def certificate(self, name="contact"):
        cert = Certificate(name)
        cert.add_lower("contact defect", self.values, self.floor, grid=self.r)
        return cert


def contact_defect(h, chart=COLLAR):
    """D(r) = (h1' h2 - h2' h1) x chart orientation sign.

    Positive D certifies that the 1-form with coefficient pair h is a
    positive contact form for the chart's orientation.
    """
    chart = chart if isinstance(chart, ChartConvention) else ChartConvention(chart)
    h.require_immersion("contact candidate")
    vals = chart.sign * cross2(h.derivs, h.values)
    return Defect(h.r, vals)


def area_coefficient(h, g):
    """E(r) = cross(h', g) = <g, i h'>: the lambda ^ omega density (signed)."""
    return cross2(h.derivs, g.values)


def verify_shs(h, g, chart=COLLAR):
    """Certificate for the stable-pair conditions.

    Checks, at every sample: the kernel condition cross(h', g') = 0 within
    TAU_EQ (scaled by the velocity sizes), and the positivity
    sign(chart) * E >= positivity floor, E = cross(h', g).
    """
    chart = chart if isinstance(chart, ChartConvention) else ChartConvention(chart)
    if not np.allclose(h.r, g.r):
        raise DomainError("verify_shs needs h, g on one sample grid")
    h.require_immersion("stable-pair h")
    cert = Certificate("shs")
    resid = cross2(h.derivs, g.derivs)
    vel_scale = max(1.0, float(np.max(np.hypot(*h.derivs.T))
                               * np.max(np.hypot(*g.derivs.T))))
    cert.add_residual("kernel condition cross(h',g')", resid,
                      TAU_EQ * vel_scale, grid=h.r)
    E = chart.sign * area_coefficient(h, g)
    cert.add_lower("area coefficient E", E, positivity_floor(E), grid=h.r)
    cert.details["chart"] = chart.order
    cert.details["E_min"] = float(np.min(E))
    return cert


def taming_condition(h, a):
    """Certificate that the class a1*phi + a2*theta positively tames h.

    The checked density is h1' a2 - h2' a1 = cross(h', a); the special case
    a = (0, 1) is exactly "first component strictly increasing".
    """
    if not isinstance(a, IntegerVector2):
        a = IntegerVector2(*a)
    vals = h.derivs[:, 0] * a.a2 - h.derivs[:, 1] * a.a1
    cert = Certificate("taming")
    cert.add_lower("taming density cross(h', a)", vals,
                   positivity_floor(vals), grid=h.r)
    cert.details["class"] = [a.a1, a.a2]
    return cert


class ReebField:
    """Kernel generator of w normalized by lambda(R) = 1.

    Components along (d/dphi, d/dtheta) as functions of r; the radial
    component is identically zero in the invariant setting.
    """

    def __init__(self, r, coeff_phi, coeff_theta, residual_lambda,
                 residual_omega):
        self.r = r
        self.coeff_phi = coeff_phi
        self.coeff_theta = coeff_theta
        self.residual_lambda = float(residual_lambda)
        self.residual_omega = float(residual_omega)

    def at(self, r):
        k = int(np.argmin(np.abs(self.r - r)))
        return float(self.coeff_phi[k]), float(self.coeff_theta[k])


def reeb(shs):
    """Reeb field of a verified stable pair: R = (-h2', h1') / E.

    E is used with its raw sign so the normalization lambda(R) = 1 holds in
    every chart; both defining residuals are re-checked below 1e-10.
    """
    cert = verify_shs(shs.h, shs.g, shs.chart)
    if not cert.passed:
        raise DegeneracyError("reeb needs a verified stable pair: %s"
                              % cert.failures())
    E = area_coefficient(shs.h, shs.g)
    if np.min(np.abs(E)) < positivity_floor(E):
        raise DegeneracyError("area coefficient vanishes; Reeb undefined")
    cphi = -shs.h.derivs[:, 1] / E
    ctheta = shs.h.derivs[:, 0] / E
    res_lambda = np.max(np.abs(shs.g.values[:, 0] * cphi
                               + shs.g.values[:, 1] * ctheta - 1.0))
    # i_R w: the phi/theta components vanish identically (R has no radial
    # part); the dr component is -(h1' R^phi + h2' R^theta).
    res_omega = np.max(np.abs(shs.h.derivs[:, 0] * cphi
                              + shs.h.derivs[:, 1] * ctheta))
    if max(res_lambda, res_omega) > 1e-10:
        raise DegeneracyError("Reeb residuals too large: lambda %g, omega %g"
                              % (res_lambda, res_omega))
    return ReebField(shs.r, cphi, ctheta, res_lambda, res_omega)


class NonProportional:
    """Sentinel: dlambda is not a pointwise multiple of w."""

    def __init__(self, max_residual, at):
        self.max_residual = float(max_residual)
        self.at = float(at)

    def __bool__(self):
        return False

    def __repr__(self):
        return "NonProportional(residual=%.3g at r=%.6g)" % (
            self.max_residual, self.at)


def proportionality(h, g):
    """Coefficient f with dlambda = f w, i.e. g' = f(r) h' pointwise.

    Returns the sampled f over h's grid when the parallelism residual
    ||g' - f h'|| stays below TAU_EQ x velocity scale at every sample, and a
    NonProportional sentinel (carrying the worst residual) otherwise.
    """
    h.require_immersion("proportionality base")
    if not np.allclose(h.r, g.r):
        raise DomainError("proportionality needs one sample grid")
    speed2 = dot2(h.derivs, h.derivs)
    f = dot2(g.derivs, h.derivs) / speed2
    resid = np.hypot(*(g.derivs - f[:, None] * h.derivs).T)
    scale = max(1.0, float(np.max(np.hypot(*g.derivs.T))))
    if np.max(resid) > TAU_EQ * scale * 10:
        k = int(np.argmax(resid))
        return NonProportional(np.max(resid), h.r[k])
    return f


def change_torus_coordinates(obj, matrix, negate_omega=None):
    """Unimodular torus coordinate change on a form or stable pair.

    Coefficient pairs transform by the inverse-transpose of the matrix
    mapping old (phi, theta) to new coordinates; the contact defect picks up
    det(matrix).  For det = -1 on a stable pair the usual convention
    restores positivity by replacing w with -w (negating h); pass
    ``negate_omega=False`` to suppress that.
    """
    m = np.asarray(matrix, dtype=float).reshape(2, 2)
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if abs(abs(det) - 1.0) > 1e-12 or np.max(np.abs(m - np.round(m))) > 1e-12:
        raise MatrixError("torus change must be an integer matrix with det +-1")
    inv_t = np.linalg.inv(m).T

    if isinstance(obj, InvariantSHS):
        if negate_omega is None:
            negate_omega = det < 0
        h_new = obj.h.transformed(inv_t)
        if negate_omega:
            h_new = h_new.scaled(-1.0)
        return InvariantSHS(h_new, obj.g.transformed(inv_t), obj.chart)
    if isinstance(obj, InvariantForm):
        return InvariantForm(obj.g.transformed(inv_t), obj.chart)
    if isinstance(obj, Curve):
        return obj.transformed(inv_t)
    raise DomainError("cannot change coordinates of %r" % type(obj))


HAT = np.array([[0, -1], [1, 0]])     # new (phi, theta) = (-theta, phi)
FLIP_TORUS = np.array([[-1, 0], [0, 1]])   # phi -> -phi (with r reflected)


def model_liouville_check(T, r0):
    """Page model: the outward field X = -(1-r^2)/(2r) d/dr satisfies
    i_X d(alpha|page) = alpha|page for alpha = T(1-r^2)(dphi + r^2 dtheta).

    Verified on a radial grid in [r0/10, r0]; the page restriction kills the
    dtheta terms, leaving the scalar identity
    (-2 T r) * X_r = T (1 - r^2).
    """
    if T <= 0 or not (0 < r0 < 1):
        raise DomainError("need T > 0 and r0 in (0, 1)")
    r = np.linspace(r0 / 10.0, r0, 512)
    lhs = (-2.0 * T * r) * (-(1.0 - r ** 2) / (2.0 * r))
    rhs = T * (1.0 - r ** 2)
    cert = Certificate("model_liouville")
    cert.add_residual("i_X d(alpha|page) - alpha|page", lhs - rhs, 1e-10,
                      grid=r)
    cert.details["coefficient_at_r0"] = float(T * (1.0 - r0 ** 2))
    return cert


def _binding_pair(T, f, t, r):
    """Coefficient pair of alpha_t = T(1-r^2)(dphi + r^2 dtheta) + t f dtheta
    and its r-derivative, with f' estimated by central differences."""
    r = np.asarray(r, dtype=float)
    fr = np.asarray([f(x) for x in r], dtype=float)
    eps = 1e-6
    dfr = np.asarray([(f(x + eps) - f(x - eps)) / (2 * eps) for x in r])
    p = np.stack([T * (1 - r ** 2), T * (1 - r ** 2) * r ** 2 + t * fr], -1)
    dp = np.stack([-2 * T * r, T * (2 * r - 4 * r ** 3) + t * dfr], -1)
    return p, dp


def gray_decay_check(T, f, r, t_grid):
    """Decay of the stabilizing flow: v(t) = f(r) * dtheta(R_t) = O(1/t).

    The family alpha_t adds t f dtheta to the binding model; its Reeb field
    at radius r has theta-component p1'/E_t, so v(t) = f p1'/E_t.  The
    certificate fits log v against log t and requires slope -1 within 0.05,
    after checking the family stays contact on a surrounding radial window
    for every sampled t (ContactError otherwise).
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if np.any(t_grid <= 0):
        raise DomainError("decay check needs positive times")
    window = np.linspace(max(1e-3, r / 2), min(0.999, 1.5 * r), 64)
    v = np.empty_like(t_grid)
    for k, t in enumerate(t_grid):
        p, dp = _binding_pair(T, f, t, window)
        defect = -(cross2(dp, p))          # binding-chart orientation
        if np.min(defect) < positivity_floor(defect):
            raise ContactError("family leaves the contact region at t=%g "
                               "(defect min %g)" % (t, float(np.min(defect))))
        p_r, dp_r = _binding_pair(T, f, t, np.array([r]))
        E = cross2(dp_r, p_r)[0]
        v[k] = f(r) * dp_r[0, 0] / E
    if np.any(v <= 0):
        raise DegeneracyError("decay quantity not positive; wrong region?")
    slope, intercept = np.polyfit(np.log(t_grid), np.log(v), 1)
    cert = Certificate("gray_decay")
    cert.add_residual("log-log slope + 1", np.array([slope + 1.0]), 0.05)
    ratios = (t_grid[1:] * v[1:]) / (t_grid[:-1] * v[:-1])
    cert.add_lower("successive t*v ratio", ratios, 0.9)
    cert.add_upper("successive t*v ratio (upper)", ratios, 1.1)
    cert.details["slope"] = float(slope)
    cert.details["v_times_1_plus_t"] = float(v[-1] * (1 + t_grid[-1]))
    return cert
