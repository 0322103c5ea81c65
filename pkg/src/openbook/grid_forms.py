"""Sampled scalar fields on a solid torus and the blended-form checks.

Where a contact form is *not* torus-invariant, its data enters as scalar
fields over (theta, r, phi) in S^1 x [0, delta] x S^1.  This module houses
the field container with its periodic finite differences, the epsilon/delta
selection that makes radial blends of two positive coefficient fields stay
positive, the positivity sweep itself, and the interior-density check that
the blended projection remains a fibration away from the axis with a
remainder controlled by the vanishing-rate constants.
"""

from __future__ import annotations

import numpy as np

from .certificates import Certificate
from .curves import TAU_EQ, CutoffProfile, positivity_floor
from .errors import DomainError, GermError, PositivityError

DEFAULT_SHAPE = (64, 128, 64)     # (n_theta, n_r, n_phi)


class ScalarField3:
    """Scalar samples over (theta, r, phi), periodic in both angles.

    Parameters
    ----------
    values : (n_theta, n_r, n_phi) array
    delta : float
        Radial extent; r runs over linspace(0, delta, n_r).
    """

    def __init__(self, values, delta):
        values = np.asarray(values, dtype=float)
        if values.ndim != 3:
            raise DomainError("field values must be 3d (theta, r, phi)")
        if values.shape[1] < 64:
            raise DomainError("need at least 64 radial samples")
        if delta <= 0:
            raise DomainError("radial extent must be positive")
        self.values = values
        self.delta = float(delta)
        n_t, n_r, n_p = values.shape
        self.theta = np.linspace(0.0, 1.0, n_t, endpoint=False)
        self.r = np.linspace(0.0, self.delta, n_r)
        self.phi = np.linspace(0.0, 1.0, n_p, endpoint=False)

    @classmethod
    def from_function(cls, fn, delta, shape=DEFAULT_SHAPE):
        """Sample fn(theta, r, phi) (vectorized) on the product grid."""
        n_t, n_r, n_p = shape
        theta = np.linspace(0.0, 1.0, n_t, endpoint=False)
        r = np.linspace(0.0, delta, n_r)
        phi = np.linspace(0.0, 1.0, n_p, endpoint=False)
        T, R, P = np.meshgrid(theta, r, phi, indexing="ij")
        return cls(np.asarray(fn(T, R, P), dtype=float) + 0.0 * R, delta)

    @classmethod
    def constant(cls, value, delta, shape=DEFAULT_SHAPE):
        return cls(np.full(shape, float(value)), delta)

    # -- finite differences ---------------------------------------------------

    def _periodic_diff(self, axis):
        v = self.values
        n = v.shape[axis]
        h = 1.0 / n
        rolled = lambda k: np.roll(v, -k, axis=axis)
        # 4th-order central, periodic
        return (rolled(-2) - 8 * rolled(-1) + 8 * rolled(1) - rolled(2)) / (12 * h)

    def d_theta(self):
        return self._periodic_diff(0)

    def d_phi(self):
        return self._periodic_diff(2)

    def d_r(self):
        """Radial derivative: 4th-order central inside, one-sided 2nd order
        at the two radial boundaries."""
        v = self.values
        h = self.r[1] - self.r[0]
        d = np.empty_like(v)
        d[:, 2:-2, :] = (v[:, :-4, :] - 8 * v[:, 1:-3, :]
                         + 8 * v[:, 3:-1, :] - v[:, 4:, :]) / (12 * h)
        d[:, 0, :] = (-3 * v[:, 0, :] + 4 * v[:, 1, :] - v[:, 2, :]) / (2 * h)
        d[:, 1, :] = (v[:, 2, :] - v[:, 0, :]) / (2 * h)
        d[:, -1, :] = (3 * v[:, -1, :] - 4 * v[:, -2, :] + v[:, -3, :]) / (2 * h)
        d[:, -2, :] = (v[:, -1, :] - v[:, -3, :]) / (2 * h)
        return d

    # -- serialization ---------------------------------------------------------

    def to_record(self):
        return {"delta": self.delta, "shape": list(self.values.shape),
                "values": self.values.reshape(-1).tolist()}

    @classmethod
    def from_record(cls, rec):
        return cls(np.asarray(rec["values"], dtype=float).reshape(rec["shape"]),
                   rec["delta"])

    def __repr__(self):
        return "ScalarField3(shape=%s, delta=%g)" % (self.values.shape,
                                                     self.delta)


class FieldConstants:
    """Certified grid bounds feeding the blend estimates.

    c0: twice the smaller field minimum; c1: radial-derivative bound;
    c2: field-difference bound; Cf, Ch: vanishing-rate bounds |f| <= Cf r
    and |h_phi - r^2 h_theta| <= Ch r.
    """

    def __init__(self, c0, c1, c2, Cf=None, Ch=None):
        self.c0 = float(c0)
        self.c1 = float(c1)
        self.c2 = float(c2)
        self.Cf = None if Cf is None else float(Cf)
        self.Ch = None if Ch is None else float(Ch)
        if self.c0 <= 0:
            raise PositivityError("c0 must be positive")

    def to_dict(self):
        return {"c0": self.c0, "c1": self.c1, "c2": self.c2,
                "Cf": self.Cf, "Ch": self.Ch}

    def __repr__(self):
        return "FieldConstants(%s)" % self.to_dict()


def _check_compatible(f0, f1):
    if f0.values.shape != f1.values.shape or f0.delta != f1.delta:
        raise DomainError("fields must share grid shape and radial extent")


def choose_eps_delta(f0, f1):
    """Pick (epsilon, delta) making the radial blend safely positive.

    With c0 = 2 min(min f0, min f1), c1 the larger radial-derivative bound
    and c2 = max |f1 - f0|, the blend f = (1-rho) f0 + rho f1 along any
    cutoff with |r rho'| < epsilon satisfies
    2f + r df/dr >= c0 - c1 delta - c2 epsilon; the returned pair gives each
    error term at most c0/4, so the guaranteed margin is c0/2.
    """
    _check_compatible(f0, f1)
    m0, m1 = float(np.min(f0.values)), float(np.min(f1.values))
    if min(m0, m1) <= 0:
        raise PositivityError("choose_eps_delta needs strictly positive fields "
                              "(min %g)" % min(m0, m1))
    c0 = 2.0 * min(m0, m1)
    c1 = max(float(np.max(np.abs(f0.d_r()))), float(np.max(np.abs(f1.d_r()))))
    c2 = float(np.max(np.abs(f1.values - f0.values)))
    delta = f0.delta if c1 == 0 else min(f0.delta, c0 / (4.0 * c1))
    epsilon = 1.0 if c2 == 0 else min(1.0, c0 / (4.0 * c2))
    return epsilon, delta, FieldConstants(c0, c1, c2)


def fpos_check(f0, f1, rho):
    """Grid sweep of the blend positivity quantity 2f + r df/dr.

    rho must be a radial cutoff profile (its analytic x rho'(x) is used, so
    the certified |x rho'| < epsilon bound enters exactly, not through
    re-differentiation).  Pass iff the grid minimum clears the positivity
    floor; the minimum and its node are reported either way.
    """
    _check_compatible(f0, f1)
    if not isinstance(rho, CutoffProfile):
        raise DomainError("rho must be a CutoffProfile")
    r = f0.r
    w = rho(r)[None, :, None]
    xdr = rho.x_drho(r)[None, :, None]
    f = (1 - w) * f0.values + w * f1.values
    rf_r = (r[None, :, None] * ((1 - w) * f0.d_r() + w * f1.d_r())
            + xdr * (f1.values - f0.values))
    q = 2 * f + rf_r
    cert = Certificate("fpos")
    cert.add_lower("2f + r df/dr", q, positivity_floor(q))
    k = np.unravel_index(int(np.argmin(q)), q.shape)
    cert.details["argmin_node"] = [int(k[0]), int(k[1]), int(k[2])]
    cert.details["argmin_r"] = float(r[k[1]])
    cert.details["min"] = float(np.min(q))
    return cert


def projection_interp_check(h, f, rho, n):
    """Interior density of the blended projection n*Theta + rho(r) f.

    For the form with coefficient field h over dtheta + r^2 dphi, the density
    splits into a main part (the covering-degree term), a rho-weighted
    correction, and the remainder f rho' (h_phi - r^2 h_theta).  The
    certificate checks, at every node off the axis:

    * remainder bounded by Cf * Ch * epsilon * r pointwise, with
      Cf = max |f|/r and Ch = max |h_phi - r^2 h_theta|/r;
    * total density, divided by r, clears the positivity floor.

    Fields independent of both angles make the remainder identically zero
    (checked to TAU_EQ), which is the invariant-form degenerate case.
    """
    _check_compatible(h, f)
    if n < 1 or n != int(n):
        raise DomainError("covering degree n must be a positive integer")
    axis_row = np.max(np.abs(f.values[:, 0, :]))
    if axis_row > TAU_EQ:
        raise GermError("projection field must vanish on the axis "
                        "(|f| up to %g at r=0)" % axis_row)
    r = h.r[None, :, None]
    h_r, h_phi, h_theta = h.d_r(), h.d_phi(), h.d_theta()
    f_r, f_phi, f_theta = f.d_r(), f.d_phi(), f.d_theta()
    w = rho(h.r)[None, :, None]
    drho = rho.derivative(h.r)[None, :, None]

    lever = h.values * 2 * r + r ** 2 * h_r          # 2 r h + r^2 h_r
    skew = h_phi - r ** 2 * h_theta                   # the vanishing bracket
    main = float(n) * lever
    corr = w * (f_theta * lever + f_r * skew - f_phi * h_r)
    remainder = f.values * drho * skew

    off = slice(1, None)   # nodes off the axis
    r_off = r[:, off, :] * np.ones_like(h.values[:, off, :])
    Cf = float(np.max(np.abs(f.values[:, off, :]) / r_off))
    Ch = float(np.max(np.abs(skew[:, off, :]) / r_off))
    eps = rho.epsilon

    cert = Certificate("projection_interp")
    bound = Cf * Ch * eps * r_off
    cert.add_upper("remainder vs Cf*Ch*eps*r",
                   np.abs(remainder[:, off, :]) - bound, 0.0)
    total = (main + corr + remainder)[:, off, :] / r_off
    cert.add_lower("density / r", total, positivity_floor(total))
    invariant_case = max(float(np.max(np.abs(h_phi))),
                         float(np.max(np.abs(h_theta)))) <= TAU_EQ
    if invariant_case:
        cert.add_residual("invariant-case remainder", remainder, TAU_EQ)
    cert.details["Cf"] = Cf
    cert.details["Ch"] = Ch
    cert.details["epsilon"] = eps
    cert.details["max_remainder"] = float(np.max(np.abs(remainder)))
    cert.details["invariant_case"] = bool(invariant_case)
    return cert, FieldConstants(2 * max(float(np.min(h.values)), 1e-12),
                                float(np.max(np.abs(h_r))),
                                0.0, Cf=Cf, Ch=Ch)
