"""Capping boundary tori with solid tori and normalizing collars.

The pipeline in this module turns an invariant contact form on a collar
[l_i, R_i] x T^2 into certified boundary data for a supporting fibration:

1. ``cap_solid_torus`` extends the coefficient curve across a solid torus
   glued at r = l_i, ending at the standard core germ (r^2, 1).
2. ``giroux_oracle`` is the braiding stub: it validates the standard germ
   and hands back the fibration data this toolkit assumes rather than
   constructs (binding = cores, angular fibration of multiplicity n_i near
   them).  The assumption is recorded verbatim in every downstream
   certificate.
3. ``relative_giroux`` performs the collar surgery: it builds a surrogate
   curve that repeats the collar window deeper inside the filling, slides
   the collar onto that window, and certifies the five boundary
   conclusions (form unchanged up to closed translation, fibration germ,
   invariance, boundary-velocity rotation, constancy in the special case).

Everything is done at the level of coefficient-curve pairs; the returned
families are sampled curves, while all certificate quantities are
evaluated through exact piecewise representations so the tolerances mean
what they say.
"""

import numpy as np

from .certificates import Certificate
from .curves import (DEFAULT_DENSITY, TAU_POS, AngleTrace, Curve, Interval,
                     _smoothstep, _smoothstep_slope, cross2, dot2,
                     positivity_floor, turning_number)
from .errors import (ChoiceError, ContactError, DomainError, GermError,
                     InfeasibleError, IntegrityError, ModeError,
                     PreconditionError, ResolutionError)
from .homotopies import (TAU_FAM, CurveFamily, monotone_extension,
                         radial_shift_family)
from .invariant_forms import (COLLAR, ChartConvention, IntegerVector2,
                              InvariantSHS, contact_defect, taming_condition)

__all__ = [
    "CollarRegion", "OracleAnswer", "GirouxCertificate", "HomotopyStep",
    "HomotopyTrace", "cap_solid_torus", "giroux_oracle", "relative_giroux",
]


# --- exact piecewise curves ---------------------------------------------------------

class PiecewiseCurve:
    """Planar curve given by exact formulas on consecutive subintervals.

    Sampled curves interpolate; at a junction of two construction pieces
    the interpolant of a uniform sample grid is only accurate to the grid
    scale.  Certificate quantities therefore evaluate through this exact
    representation, and sampled outputs are generated from it last.

    ``pieces`` maps [breaks[k], breaks[k+1]] to a (value_fn, deriv_fn)
    pair; both functions are vectorized, (n,) -> (n, 2).
    """

    def __init__(self, breaks, pieces):
        self.breaks = np.asarray(breaks, dtype=float)
        self.pieces = list(pieces)
        if len(self.breaks) != len(self.pieces) + 1:
            raise DomainError("need one piece per consecutive break pair")
        if np.any(np.diff(self.breaks) <= 0):
            raise DomainError("piece breaks must increase strictly")
        self.domain = Interval(self.breaks[0], self.breaks[-1])

    def _indices(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if not self.domain.contains(x):
            raise DomainError("evaluation outside piecewise domain %r"
                              % self.domain)
        return x, np.clip(np.searchsorted(self.breaks[1:-1], x, side="right"),
                          0, len(self.pieces) - 1)

    def _gather(self, x, which):
        x, idx = self._indices(x)
        out = np.empty((len(x), 2), dtype=float)
        for k in range(len(self.pieces)):
            mask = idx == k
            if np.any(mask):
                out[mask] = self.pieces[k][which](x[mask])
        return out

    def value(self, x):
        return self._gather(x, 0)

    def deriv(self, x):
        return self._gather(x, 1)

    def sample(self, density=DEFAULT_DENSITY):
        r = self.domain.mesh(density)
        return Curve(r, self.value(r), self.deriv(r), check=False)


def _parabola_piece():
    return (lambda x: np.column_stack([x * x, np.ones_like(x)]),
            lambda x: np.column_stack([2.0 * x, np.zeros_like(x)]))


def _curve_piece(c):
    return (lambda x: c(x), lambda x: c.derivative(x))


def _shifted_window_piece(h, l, offset):
    off = np.asarray(offset, dtype=float)
    return (lambda x: h(x + l) + off, lambda x: h.derivative(x + l))


def _graph_piece(s_curve, p_curve):
    """Contact bridge written as a tamed graph.

    The bridge is (s(r), s * P(s(r))) with s strictly increasing and P
    strictly decreasing; its contact defect is s' * s^2 * (-P'), positive
    as soon as the two slope certificates hold.  ``s_curve`` stores s in
    its first channel over r, ``p_curve`` stores -P in its first channel
    over s.
    """
    def value(x):
        s = s_curve(x)[:, 0]
        p = -p_curve(s)[:, 0]
        return np.column_stack([s, s * p])

    def deriv(x):
        s = s_curve(x)[:, 0]
        ds = s_curve.derivative(x)[:, 0]
        p = -p_curve(s)[:, 0]
        dp = -p_curve.derivative(s)[:, 0]
        return np.column_stack([ds, ds * (p + s * dp)])

    return (value, deriv)


def _polar_piece(beta_curve, logr_curve):
    """Rotating contact bridge in polar form.

    ``beta_curve`` stores -beta (increasing) and ``logr_curve`` stores
    log |h|, both over r.  The defect is |h|^2 * (-beta'), positive by the
    slope certificate of the first channel.
    """
    def _parts(x):
        beta = -beta_curve(x)[:, 0]
        dbeta = -beta_curve.derivative(x)[:, 0]
        rad = np.exp(logr_curve(x)[:, 0])
        drad = logr_curve.derivative(x)[:, 0] * rad
        return beta, dbeta, rad, drad

    def value(x):
        beta, _, rad, _ = _parts(x)
        return np.column_stack([rad * np.cos(beta), rad * np.sin(beta)])

    def deriv(x):
        beta, dbeta, rad, drad = _parts(x)
        c, s = np.cos(beta), np.sin(beta)
        return np.column_stack([drad * c - rad * dbeta * s,
                                drad * s + rad * dbeta * c])

    return (value, deriv)


def _blend_pieces(lo, hi, a_piece, b_piece):
    """C^1 blend from piece ``a`` to piece ``b`` across [lo, hi]."""
    span = hi - lo

    def value(x):
        w = _smoothstep((x - lo) / span)[:, None]
        return (1 - w) * a_piece[0](x) + w * b_piece[0](x)

    def deriv(x):
        u = (x - lo) / span
        w = _smoothstep(u)[:, None]
        dw = (_smoothstep_slope(u) / span)[:, None]
        return ((1 - w) * a_piece[1](x) + w * b_piece[1](x)
                + dw * (b_piece[0](x) - a_piece[0](x)))

    return (value, deriv)


# --- domain types -------------------------------------------------------------------

class CollarRegion:
    """A boundary collar [l_i, R_i] x T^2 carrying an invariant structure.

    ``structure`` is either the coefficient curve of a contact form or an
    InvariantSHS whose one-form coefficient pair is contact.  Construction
    verifies the contact condition in the given chart and the taming
    certificate of ``taming`` (default (0, 1): first component strictly
    increasing); both certificates are kept.
    """

    def __init__(self, interval, structure, chart=COLLAR, taming=(0, 1),
                 label="T0"):
        self.interval = interval if isinstance(interval, Interval) else \
            Interval(*interval)
        self.chart = chart if isinstance(chart, ChartConvention) else \
            ChartConvention(chart)
        self.label = str(label)
        if isinstance(structure, InvariantSHS):
            self.shs = structure
            self.contact_curve = structure.g
        else:
            self.shs = None
            self.contact_curve = structure
        h = self.contact_curve
        if (abs(h.domain.lo - self.interval.lo) > 1e-9
                or abs(h.domain.hi - self.interval.hi) > 1e-9):
            raise DomainError("curve domain %r does not match the collar %r"
                              % (h.domain, self.interval))
        self.taming = taming if isinstance(taming, IntegerVector2) else \
            IntegerVector2(*taming)
        defect = contact_defect(h, self.chart)
        if not defect.is_contact:
            raise ContactError(
                "collar structure is not contact: defect %.3g at r = %.6g"
                % (defect.min, defect.argmin))
        self.contact_certificate = defect.certificate("collar contact")
        self.taming_certificate = taming_condition(h, self.taming)
        if not self.taming_certificate.passed:
            raise ContactError(
                "class (%d, %d) does not tame the collar structure"
                % (self.taming.a1, self.taming.a2))

    @property
    def h(self):
        return self.contact_curve

    def __repr__(self):
        return "CollarRegion(%s, %r, chart=%r)" % (
            self.label, self.interval, self.chart.order)


class OracleAnswer:
    """Fibration data assumed for capped pieces with standard core germs."""

    def __init__(self, w, multiplicities, assumption_record):
        self.w = [float(x) for x in w]
        self.multiplicities = [int(n) for n in multiplicities]
        self.assumption_record = str(assumption_record)

    def to_dict(self):
        return {"w": self.w, "multiplicities": self.multiplicities,
                "assumption_record": self.assumption_record}

    def __repr__(self):
        return "OracleAnswer(w=%s, multiplicities=%s)" % (
            self.w, self.multiplicities)


class GirouxCertificate:
    """Verdicts for the five boundary conclusions of the collar pipeline.

    ``flags`` maps "i".."v" to True, False, or "n/a" (stated but not
    applicable to the requested branch).  The quantitative evidence lives
    in ``certificate``; ``passed`` demands that no applicable flag failed
    and every certified bound holds.
    """

    CONCLUSIONS = ("i", "ii", "iii", "iv", "v")

    def __init__(self, flags, certificate, end_value, end_derivative,
                 turning, assumption_record):
        self.flags = {k: flags.get(k, "n/a") for k in self.CONCLUSIONS}
        self.certificate = certificate
        self.end_value = np.asarray(end_value, dtype=float)
        self.end_derivative = np.asarray(end_derivative, dtype=float)
        self.turning = float(turning)
        self.assumption_record = str(assumption_record)

    @property
    def passed(self):
        if any(v is False for v in self.flags.values()):
            return False
        return self.certificate.passed

    def to_dict(self):
        return {
            "flags": {k: (v if isinstance(v, str) else bool(v))
                      for k, v in self.flags.items()},
            "end_value": [float(x) for x in self.end_value],
            "end_derivative": [float(x) for x in self.end_derivative],
            "turning": self.turning,
            "assumption_record": self.assumption_record,
            "certificate": self.certificate.to_dict(),
        }

    def __repr__(self):
        shown = ", ".join("%s=%s" % (k, self.flags[k])
                          for k in self.CONCLUSIONS)
        return "GirouxCertificate(%s, turning=%.3f)" % (shown, self.turning)


class HomotopyStep:
    """One stage of the boundary homotopy: a curve family plus its note."""

    def __init__(self, name, family, note=""):
        self.name = str(name)
        self.family = family
        self.note = str(note)

    def __repr__(self):
        return "HomotopyStep(%r, %d samples)" % (self.name, len(self.family))


class HomotopyTrace:
    """The three-stage boundary homotopy produced by the collar pipeline.

    ``steps`` holds the stage families on the collar (two of them constant
    at the invariant-curve level, recorded for the ledger); ``turning`` is
    the rotation number of the boundary velocity in the plotting plane
    (second component horizontal).  ``filled_curve`` is the capped
    extension and ``surgered_curve`` the window surrogate, both sampled.
    """

    def __init__(self, steps, boundary_trace, turning, assumption_record,
                 filled_curve=None, surgered_curve=None):
        self.steps = list(steps)
        self.boundary_trace = boundary_trace
        self.turning = float(turning)
        self.assumption_record = str(assumption_record)
        self.filled_curve = filled_curve
        self.surgered_curve = surgered_curve

    def __iter__(self):
        return iter(self.steps)

    def __repr__(self):
        return "HomotopyTrace(%s, turning=%.3f)" % (
            [s.name for s in self.steps], self.turning)


# --- capping ------------------------------------------------------------------------

_MODEL_TOL = 1e-9


def _model_gap(h, lo, hi, n=2049):
    """sup |h - (r - l_i, 1)| over [lo, hi] (l_i = the domain start)."""
    rr = np.linspace(lo, hi, n)
    model = np.column_stack([rr - h.domain.lo, np.ones_like(rr)])
    return float(np.max(np.abs(h(rr) - model)))


def _snap_index(r, target):
    """Index of the last mesh node at or below ``target``."""
    return int(np.searchsorted(r, target + 1e-12, side="right") - 1)


def _cap_monotone_pieces(h, w_g):
    """Filling bridge for the non-rotating cap.

    Written as a graph over the first component: with s = h_1 increasing
    and P = h_2 / h_1 decreasing, the contact defect factors as
    s' s^2 (-P'), so both structure conditions reduce to the two slope
    certificates of ``monotone_extension``.
    """
    l_i = h.domain.lo
    v_l, d_l = h(l_i), h.derivative(l_i)
    a, b = w_g * w_g, float(v_l[0])
    p_a, dp_a = 1.0 / a, -1.0 / (a * a)
    p_b = float(v_l[1]) / b
    defect_b = float(cross2(d_l, v_l))
    dp_b = -defect_b / (float(d_l[0]) * b * b)
    s_curve = monotone_extension(((a, 0.0), (2.0 * w_g, 0.0)),
                                 ((b, 0.0), (float(d_l[0]), 0.0)),
                                 Interval(w_g, l_i))
    p_curve = monotone_extension(((-p_a, 0.0), (-dp_a, 0.0)),
                                 ((-p_b, 0.0), (-dp_b, 0.0)),
                                 Interval(a, b))
    return _graph_piece(s_curve, p_curve), (s_curve, p_curve)


def _cap_rotating_pieces(h, w_g, sweeps):
    """Filling bridge that performs ``sweeps`` full clockwise position turns.

    In polar form the contact condition is exactly that the position angle
    decreases strictly, so the bridge interpolates -angle (increasing) and
    log-radius between the core germ and the collar end, with the angle
    lift lowered by 2 pi per requested sweep.
    """
    l_i = h.domain.lo
    v_l, d_l = h(l_i), h.derivative(l_i)
    beta_w = np.arctan2(1.0, w_g * w_g)
    rad_w = np.hypot(w_g * w_g, 1.0)
    dbeta_w = -2.0 * w_g / rad_w ** 2
    dlog_w = 2.0 * w_g ** 3 / rad_w ** 2
    beta_l = float(np.arctan2(v_l[1], v_l[0])) - 2.0 * np.pi * sweeps
    rad_l = float(np.hypot(v_l[0], v_l[1]))
    dbeta_l = float(cross2(v_l, d_l)) / rad_l ** 2
    dlog_l = float(dot2(v_l, d_l)) / rad_l ** 2
    if dbeta_l >= 0:
        raise ContactError("collar end is not strictly clockwise; cannot "
                           "attach a rotating filling")
    beta_curve = monotone_extension(((-beta_w, 0.0), (-dbeta_w, 0.0)),
                                    ((-beta_l, 0.0), (-dbeta_l, 0.0)),
                                    Interval(w_g, l_i))
    logr_curve = monotone_extension(
        ((0.0, np.log(rad_w)), (1.0, dlog_w)),
        ((1.0, np.log(rad_l)), (1.0, dlog_l)), Interval(w_g, l_i))
    # only the second channel of logr_curve carries data; the first is a
    # dummy ramp so the helper's slope constraint is vacuous.
    logr = Curve(logr_curve.r,
                 np.column_stack([logr_curve.values[:, 1],
                                  np.zeros(len(logr_curve.r))]),
                 np.column_stack([logr_curve.derivs[:, 1],
                                  np.zeros(len(logr_curve.r))]), check=False)
    return _polar_piece(beta_curve, logr), (beta_curve, logr)


def _min_sweeps(h, w_g):
    """Smallest nonnegative sweep count keeping -angle increasing."""
    v_l = h(h.domain.lo)
    beta_w = np.arctan2(1.0, w_g * w_g)
    beta_l = float(np.arctan2(v_l[1], v_l[0]))
    m = 0
    while beta_l - 2.0 * np.pi * m >= beta_w - 1e-9:
        m += 1
    return m


def _velocity_turning(pieces, lo, hi, n=513):
    """Turning of the velocity over [lo, hi].

    Computed in curve order along increasing radius; this equals the
    piece's contribution to the reported boundary rotation, because the
    boundary trace runs backward and is read in the swapped plotting
    plane, and the two reversals cancel.
    """
    for _ in range(6):
        rr = np.linspace(lo, hi, n)
        try:
            return float(turning_number(pieces.deriv(rr)))
        except ResolutionError:
            n = 2 * n - 1
    raise ResolutionError("velocity turning did not resolve at %d samples"
                          % n)


def cap_solid_torus(h, mode="monotone", germ_fraction=0.5, extra_rotations=0,
                    density=None):
    """Extend a collar curve across the solid torus glued at the inner edge.

    The extension equals the standard core pair (r^2, 1) on [0, w], equals
    the input beyond the collar edge, and is contact throughout (defect
    divided by r stays positive, the honest statement at the core).

    Parameters
    ----------
    h : Curve on [l_i, R_i], contact with increasing first component.
    mode : "monotone" keeps the first component increasing on the filling
        (requires h_1(l_i) > 0); "rotating" sweeps the position vector
        clockwise, adding ``extra_rotations`` full turns beyond the
        minimum; "special" handles the exactly-affine boundary model by
        the square-root rechart, returning the standard pair on the
        rescaled radius [0, sqrt(R_i - l_i)].
    germ_fraction : target size of the standard region as a fraction of
        l_i (shrunk automatically when the geometry demands it).

    Returns the sampled extension with attributes ``germ_radius``,
    ``pieces`` (exact evaluator), ``turning_contribution`` and
    ``certificate`` attached.
    """
    density = density or DEFAULT_DENSITY
    l_i, R_i = h.domain.lo, h.domain.hi
    defect = contact_defect(h)
    if not defect.is_contact:
        raise ContactError("cannot cap a non-contact collar curve "
                           "(defect %.3g at r = %.6g)"
                           % (defect.min, defect.argmin))
    tame = taming_condition(h, (0, 1))
    if not tame.passed:
        raise ContactError("capping requires an increasing first component "
                           "on the collar")
    if mode == "special":
        return _cap_special(h, density)
    if mode not in ("monotone", "rotating"):
        raise DomainError("unknown cap mode %r" % (mode,))

    h1_l = float(h(l_i)[0])
    if mode == "monotone" and h1_l <= 0:
        raise ModeError("monotone filling needs h_1(l_i) > 0 at the collar "
                        "edge (got %.6g); request the rotating mode" % h1_l)

    r = Interval(0.0, R_i).mesh(density)
    dr = r[1] - r[0]
    w_target = germ_fraction * l_i
    if mode == "monotone":
        v_l = h(l_i)
        w_sq = 0.8 * h1_l
        if v_l[1] > 0:
            w_sq = min(w_sq, 0.5 * h1_l / float(v_l[1]))
        w_target = min(w_target, float(np.sqrt(w_sq)))
    k = _snap_index(r, w_target)
    if k < 4 or r[k] > l_i - 4 * dr:
        raise InfeasibleError(
            "no room for a standard core region: the snapped radius %.4g "
            "leaves fewer than four mesh steps on one side" % r[min(k, len(r) - 1)])
    w_g = float(r[k])

    sweeps = 0
    if mode == "monotone":
        bridge, parts = _cap_monotone_pieces(h, w_g)
    else:
        sweeps = max(_min_sweeps(h, w_g), 1) + int(extra_rotations)
        bridge, parts = _cap_rotating_pieces(h, w_g, sweeps)

    pieces = PiecewiseCurve([0.0, w_g, l_i, R_i],
                            [_parabola_piece(), bridge, _curve_piece(h)])
    capped = Curve(r, pieces.value(r), pieces.deriv(r), check=False)

    cert = Certificate("cap_solid_torus")
    fine = np.linspace(0.0, w_g, 1025)
    germ_gap = pieces.value(fine) - np.column_stack(
        [fine * fine, np.ones_like(fine)])
    cert.add_residual("standard pair on the core region", germ_gap, 1e-12)
    vals = cross2(capped.derivs[1:], capped.values[1:]) / r[1:]
    cert.add_lower("contact defect over r", vals,
                   positivity_floor(vals), grid=r[1:])
    jet_gap = np.concatenate([pieces.value([l_i])[0] - h(l_i),
                              pieces.deriv([l_i])[0] - h.derivative(l_i)])
    cert.add_residual("collar junction 1-jet", jet_gap, 1e-12)
    outside = r >= l_i
    cert.add_residual("matches the input beyond the junction",
                      capped.values[outside] - h(r[outside]), 1e-12)
    if mode == "monotone":
        cert.add_lower("first-component slope on the filling",
                       capped.derivs[1:, 0], positivity_floor(
                           capped.derivs[1:, 0]), grid=r[1:])
    turning = _velocity_turning(pieces, w_g / 4.0, l_i,
                                n=max(513, 256 * (sweeps + 1) + 1))
    cert.details["mode"] = mode
    cert.details["germ_radius"] = w_g
    cert.details["turning_contribution"] = turning
    if mode == "rotating":
        cert.details["sweeps"] = sweeps
        sweep_angle = float(np.arctan2(h(l_i)[1], h(l_i)[0])
                            - 2.0 * np.pi * sweeps
                            - np.arctan2(1.0, w_g * w_g)) / (2.0 * np.pi)
        cert.details["position_sweep"] = sweep_angle

    capped.certificate = cert
    capped.germ_radius = w_g
    capped.pieces = pieces
    capped.turning_contribution = turning
    capped.cap_mode = mode
    capped.sweeps = sweeps
    return capped


def _cap_special(h, density):
    """Square-root rechart of an affine boundary model.

    Requires h = (r - l_i, 1) to hold (within 1e-9) on the inner tenth of
    the collar.  The returned curve lives on the rescaled radius
    s = sqrt(r - l_i), equals the standard pair exactly where the model
    holds, and continues as the recharted input beyond.
    """
    l_i, R_i = h.domain.lo, h.domain.hi
    extent = 0.1 * (R_i - l_i)
    gap = _model_gap(h, l_i, l_i + extent)
    if gap > _MODEL_TOL:
        raise PreconditionError(
            "special filling requires the affine boundary model on the "
            "inner tenth of the collar (gap %.3g > %.3g)" % (gap, _MODEL_TOL))
    s_m = float(np.sqrt(extent))
    S = float(np.sqrt(R_i - l_i))

    def rechart_value(s):
        return h(l_i + s * s)

    def rechart_deriv(s):
        return h.derivative(l_i + s * s) * (2.0 * s)[:, None]

    rechart = (rechart_value, rechart_deriv)
    blend = _blend_pieces(0.5 * s_m, s_m, _parabola_piece(), rechart)
    pieces = PiecewiseCurve([0.0, 0.5 * s_m, s_m, S],
                            [_parabola_piece(), blend, rechart])
    s = Interval(0.0, S).mesh(density)
    capped = Curve(s, pieces.value(s), pieces.deriv(s), check=False)

    cert = Certificate("cap_solid_torus")
    fine = np.linspace(0.0, 0.5 * s_m, 1025)
    germ_gap = pieces.value(fine) - np.column_stack(
        [fine * fine, np.ones_like(fine)])
    cert.add_residual("standard pair on the core region", germ_gap, 1e-12)
    vals = cross2(capped.derivs[1:], capped.values[1:]) / s[1:]
    cert.add_lower("contact defect over s", vals,
                   positivity_floor(vals), grid=s[1:])
    inner = np.linspace(0.0, s_m, 2049)
    model_gap = pieces.value(inner) - np.column_stack(
        [inner * inner, np.ones_like(inner)])
    cert.add_residual("recharted model distance on the blend",
                      model_gap, 2.0 * _MODEL_TOL)
    cert.details["mode"] = "special"
    cert.details["germ_radius"] = 0.5 * s_m
    cert.details["coordinate_change"] = "s = sqrt(r - l_i)"
    cert.details["turning_contribution"] = 0.0

    capped.certificate = cert
    capped.germ_radius = 0.5 * s_m
    capped.pieces = pieces
    capped.turning_contribution = 0.0
    capped.cap_mode = "special"
    capped.sweeps = 0
    return capped


# --- the braiding stub --------------------------------------------------------------

_ASSUMPTION = (
    "Assumed, not constructed: every capped piece whose coefficient pair "
    "equals the standard core pair (r^2, 1) inside r <= w_i admits a "
    "supporting fibration with binding the core circles, angular "
    "multiplicity n_i >= K, fibration germ n_i * theta and an unchanged "
    "contact form inside that region.  This run used K = %d with "
    "n = %s, w = %s.")

_GERM_TOL = 1e-12


def giroux_oracle(capped, n, K=1):
    """Validate standard core germs and hand back the assumed fibration data.

    Each entry of ``capped`` must carry the ``germ_radius`` attribute set
    by ``cap_solid_torus`` and equal the standard pair inside it to
    1e-12 (checked through the interpolant).  The answer restates the
    assumption verbatim; downstream certificates embed it, so no use of
    the stub is silent.

    Raises GermError for a non-standard germ and PreconditionError when a
    multiplicity falls below the configured threshold K.
    """
    if isinstance(capped, Curve):
        capped = [capped]
    n = [int(x) for x in np.atleast_1d(n)]
    if len(n) != len(capped):
        raise DomainError("need one multiplicity per capped piece "
                          "(%d vs %d)" % (len(n), len(capped)))
    K = int(K)
    w = []
    for i, c in enumerate(capped):
        radius = getattr(c, "germ_radius", None)
        if radius is None:
            raise DomainError(
                "capped piece %d lacks a germ radius; build it with "
                "cap_solid_torus" % i)
        rr = np.linspace(0.0, float(radius), 4097)
        gap = float(np.max(np.abs(
            c(rr) - np.column_stack([rr * rr, np.ones_like(rr)]))))
        if gap > _GERM_TOL:
            raise GermError(
                "piece %d is not standard inside r <= %.6g "
                "(gap %.3g > %.3g)" % (i, radius, gap, _GERM_TOL))
        if n[i] < K:
            raise PreconditionError(
                "multiplicity n_%d = %d is below the configured threshold "
                "K = %d" % (i, n[i], K))
        w.append(float(radius))
    record = _ASSUMPTION % (K, n, ["%.6g" % x for x in w])
    return OracleAnswer(w, n, record)


# --- the collar surgery -------------------------------------------------------------

def _feasible_subdivision(h, w_i, r1, r3, r4, density):
    """Choose subdivision points and the window translation.

    Returns (r1, r2, r3, r4, g0, g1, l, A, B) satisfying, with margins:
    the ordering 0 < g0 < r1 < r2 < g1 < w_i < l_i < r3 < r4 < R_i, the
    first-component corridor g0^2 < h_1(l_i) + A < T1 < g1^2 (T1 the
    window's top), A < 0 whenever h_1(l_i) > 0, and a positive contact
    defect on the translated window.  The corridor shrinks r3 toward the
    collar edge and g0 toward 0 until it opens; a collar too coarse to
    subdivide raises InfeasibleError.
    """
    l_i, R_i = h.domain.lo, h.domain.hi
    h1_l = float(h(l_i)[0])
    r1 = 0.2 * w_i if r1 is None else float(r1)
    if not 0 < r1 < w_i:
        raise DomainError("r1 = %.6g must sit inside (0, %.6g)" % (r1, w_i))
    r3_off = (0.25 * (R_i - l_i)) if r3 is None else float(r3) - l_i
    if r3_off <= 0:
        raise DomainError("r3 must exceed the collar edge")
    r4 = l_i + 0.5 * (R_i - l_i) if r4 is None else float(r4)
    step = 1.0 / density
    g0 = 0.5 * r1

    for _ in range(60):
        r3_off = min(r3_off, 0.5 * (w_i - r1))
        r2 = r1 + r3_off
        g1 = r2 + 0.75 * (w_i - r2)
        t_lo = g0 * g0 + (float(h(l_i + r3_off)[0]) - h1_l)
        t_hi = g1 * g1
        if h1_l > 0:
            if g0 * g0 >= 0.5 * h1_l:
                g0 = 0.5 * g0
                continue
            t_hi = min(t_hi, float(h(l_i + r3_off)[0]))
        if t_lo < t_hi - 0.1 * (t_hi - g0 * g0):
            break
        r3_off, g0 = 0.5 * r3_off, 0.5 * g0
        if r3_off < 4 * step:
            raise InfeasibleError(
                "subdivision corridor stayed empty down to the mesh scale; "
                "the collar is too shallow to host the window")
    else:
        raise InfeasibleError("subdivision corridor did not open")

    r3 = l_i + r3_off
    if not r3 < r4 < R_i:
        r4 = 0.5 * (r3 + R_i)
    if not 0 < r1 < r2 < g1 < w_i < l_i < r3 < r4 < R_i:
        raise InfeasibleError("subdivision ordering collapsed: %s" %
                              ([r1, r2, g1, w_i, l_i, r3, r4, R_i],))
    l = l_i - r1
    T1 = 0.5 * (t_lo + t_hi)
    A = T1 - float(h(r3)[0])

    # Translation second component: raising it improves the window defect
    # and the landing bridge; the core-side bridge caps it from above,
    # and shrinking g0 lifts that cap out of the way.
    ww = np.linspace(l_i, r3, 513)
    wv, wd = h(ww), h.derivative(ww)
    base = cross2(wd, wv)
    margin = 0.05 * max(1.0, float(np.max(np.abs(base))))
    b_window = float(np.max((wd[:, 1] * A - base + margin) / wd[:, 0]))
    b_landing = T1 / (g1 * g1) - float(h(r3)[1]) + margin
    B = max(b_window, b_landing) + 0.25 * max(1.0, abs(A))
    for _ in range(40):
        b_cap = (h1_l + A) / (g0 * g0) - float(h(l_i)[1])
        if B < b_cap - margin:
            break
        g0 = 0.5 * g0
    else:
        raise InfeasibleError("core-side bridge cap would not clear the "
                              "window translation")
    return r1, r2, r3, r4, g0, g1, l, A, B


def _window_bridge(jet_from, jet_to, domain):
    """Contact bridge between two jets, in polar form.

    ``jet_from``/``jet_to`` are (value, velocity) pairs of the curve at
    the junctions.  The contact defect in polar form is the squared
    radius times the clockwise angular speed, so interpolating -angle
    monotonically (log-radius riding along) keeps the bridge contact
    structurally.  A graph-over-first-component parametrization is not
    usable here: next to a sharp parabola tip its ray-slope derivative
    grows like the inverse fourth power of the tip radius, which no
    positive slope profile on a fixed mesh can integrate past, while the
    angular jets of the same data stay mild.
    """
    (v_a, d_a), (v_b, d_b) = jet_from, jet_to
    v_a, d_a = np.asarray(v_a, float), np.asarray(d_a, float)
    v_b, d_b = np.asarray(v_b, float), np.asarray(d_b, float)
    beta_a = float(np.arctan2(v_a[1], v_a[0]))
    beta_b = float(np.arctan2(v_b[1], v_b[0]))
    rad_a, rad_b = float(np.hypot(*v_a)), float(np.hypot(*v_b))
    dbeta_a = float(cross2(v_a, d_a)) / rad_a ** 2
    dbeta_b = float(cross2(v_b, d_b)) / rad_b ** 2
    if dbeta_a >= 0 or dbeta_b >= 0:
        raise InfeasibleError("bridge jets are not strictly clockwise; "
                              "widen the window margins")
    if beta_b >= beta_a:
        raise InfeasibleError("bridge target does not descend in angle; "
                              "widen the corridor margins")
    dlog_a = float(dot2(v_a, d_a)) / rad_a ** 2
    dlog_b = float(dot2(v_b, d_b)) / rad_b ** 2
    beta_curve = monotone_extension(((-beta_a, 0.0), (-dbeta_a, 0.0)),
                                    ((-beta_b, 0.0), (-dbeta_b, 0.0)),
                                    domain)
    logr_curve = monotone_extension(
        ((0.0, np.log(rad_a)), (1.0, dlog_a)),
        ((1.0, np.log(rad_b)), (1.0, dlog_b)), domain)
    # only the second channel of logr_curve carries data; the first is a
    # dummy ramp so the helper's slope constraint is vacuous.
    logr = Curve(logr_curve.r,
                 np.column_stack([logr_curve.values[:, 1],
                                  np.zeros(len(logr_curve.r))]),
                 np.column_stack([logr_curve.derivs[:, 1],
                                  np.zeros(len(logr_curve.r))]), check=False)
    return _polar_piece(beta_curve, logr)


def _build_surrogate(h, capped, w_i, sub):
    """Assemble the window surrogate curve on [0, R_i].

    Standard pair near 0 and near w_i, the translated collar window on
    [r1, r2], contact bridges between, and the capped extension beyond
    w_i.  The position angle decreases strictly throughout, and between
    the window start and the collar edge it drops by less than a half
    turn plus the filling sweeps; that band pins the boundary rotation
    at 0 or minus the sweep count.
    """
    r1, r2, r3, r4, g0, g1, l, A, B = sub
    l_i = h.domain.lo
    off = np.array([A, B])
    window = _shifted_window_piece(h, l, off)
    jet_r1 = (h(l_i) + off, h.derivative(l_i))
    jet_r2 = (h(r3) + off, h.derivative(r3))
    core_bridge = _window_bridge(((g0 * g0, 1.0), (2 * g0, 0.0)),
                                 jet_r1, Interval(g0, r1))
    par = _parabola_piece()
    landing = _window_bridge(jet_r2, ((g1 * g1, 1.0), (2 * g1, 0.0)),
                             Interval(r2, g1))
    # beyond w_i the surrogate continues as the capped extension; both
    # sides of the w_i junction are the standard pair, so it is smooth.
    breaks = [0.0, g0, r1, r2, g1, w_i]
    pieces = [par, core_bridge, window, landing, par]
    for lo, hi, piece in zip(capped.pieces.breaks[:-1],
                             capped.pieces.breaks[1:], capped.pieces.pieces):
        if hi > w_i + 1e-12:
            pieces.append(piece)
            breaks.append(float(hi))
    return PiecewiseCurve(breaks, pieces)


def _boundary_trace(surrogate, l_i, l, n=257):
    """Velocity of the sliding boundary, in plotting-plane order.

    The slide maps the boundary point to l_i - t*l with unit radial
    stretch, so the trace is the surrogate velocity read backward from
    the collar edge to the window start, components swapped to match the
    reported rotation convention.
    """
    for _ in range(7):
        tt = np.linspace(0.0, 1.0, n)
        ders = surrogate.deriv(l_i - tt * l)
        try:
            return AngleTrace(ders[:, ::-1])
        except ResolutionError:
            n = 2 * n - 1
    raise ResolutionError("boundary velocity trace did not resolve at %d "
                          "samples" % n)


def _phi_closures(l_i, r3, r4, l):
    """Exact slide maps on the collar: the window shifts by t*l, a bridge
    returns to the identity before r4.  Matches radial_shift_family's
    construction so the sampled certificate covers these formulas."""
    s1 = 0.5 * (r3 + r4)
    bridge = monotone_extension(((r3 - l, 0.0), (1.0, 0.0)),
                                ((s1, 0.0), (1.0, 0.0)), Interval(r3, s1))

    def phi(t, x):
        x = np.asarray(x, dtype=float)
        vals, ders = x.copy(), np.ones_like(x)
        win = x <= r3
        vals[win] = x[win] - t * l
        mid = (x > r3) & (x < s1)
        if np.any(mid):
            bv = bridge(x[mid])[:, 0]
            bd = bridge.derivative(x[mid])[:, 0]
            vals[mid] = (1 - t) * x[mid] + t * bv
            ders[mid] = (1 - t) + t * bd
        return vals, ders

    return phi


def _constant_family(curve, n_t=5):
    """Family that holds ``curve`` fixed for every parameter value."""
    t_grid = np.linspace(0.0, 1.0, n_t)
    return CurveFamily(t_grid, [curve] * n_t, start=curve)


def relative_giroux(region, n_i, rotation_choice="zero", special=False,
                    K=1, germ_fraction=0.5, extra_rotations=0, density=None,
                    r1=None, r3=None, r4=None):
    """Cap a collar region and slide it onto certified boundary data.

    Runs the full collar pipeline: fill the solid torus (mode picked by
    ``rotation_choice``), pass the germ through ``giroux_oracle``, build
    the window surrogate, slide the collar with the radial shift family,
    and certify the five boundary conclusions.

    Returns (HomotopyTrace, chart data dict, GirouxCertificate).  The
    chart data serializes the supporting fibration germ on the collar:
    torus id, coordinate tag, projection class (0, n_i) and the collar
    interval on which the certified statements hold.

    ``rotation_choice`` is "zero" (boundary velocity does not rotate;
    needs h_1(l_i) > 0, else ChoiceError) or "minus_one" (one full
    clockwise turn, always available).  ``special`` = True requires the
    affine boundary model and produces a constant boundary homotopy.
    """
    density = density or DEFAULT_DENSITY
    if not isinstance(region, CollarRegion):
        raise DomainError("relative_giroux needs a CollarRegion")
    h = region.contact_curve
    l_i, R_i = h.domain.lo, h.domain.hi
    n_i = int(n_i)

    if special:
        return _relative_special(region, h, n_i, K, density)

    h1_l = float(h(l_i)[0])
    if rotation_choice == "zero":
        if h1_l <= 0:
            raise ChoiceError(
                "zero boundary rotation needs h_1(l_i) > 0 (got %.6g); "
                "only minus_one is available here" % h1_l)
        mode, target = "monotone", 0
    elif rotation_choice == "minus_one":
        mode, target = "rotating", -1
    else:
        raise DomainError("rotation_choice must be 'zero' or 'minus_one'")

    extra = int(extra_rotations)
    capped = trace = None
    for attempt in range(4):
        capped = cap_solid_torus(h, mode, germ_fraction=germ_fraction,
                                 extra_rotations=max(extra, 0),
                                 density=density)
        answer = giroux_oracle([capped], [n_i], K=K)
        w_i = answer.w[0]
        sub = _feasible_subdivision(h, w_i, r1, r3, r4, density)
        surrogate = _build_surrogate(h, capped, w_i, sub)
        l = sub[6]
        trace = _boundary_trace(surrogate, l_i, l)
        achieved = int(np.round(trace.turning))
        if abs(trace.turning - achieved) > 1e-6:
            raise IntegrityError(
                "boundary velocity trace did not close up to an integer "
                "rotation (%.3g away)" % abs(trace.turning - achieved))
        if achieved == target:
            break
        if mode == "monotone":
            raise IntegrityError(
                "non-rotating surrogate produced boundary rotation %d"
                % achieved)
        extra += achieved - target
        if extra < 0:
            raise InfeasibleError(
                "restoring the requested rotation would need a negative "
                "sweep count")
    else:
        raise InfeasibleError(
            "requested boundary rotation %d was not achieved (last: %d)"
            % (target, achieved))

    sub_r1, r2v, r3v, r4v, g0, g1, l, A, B = sub

    # certified slide maps; the window is widened below l_i so the collar
    # edge sits strictly inside the exactly-shifted region of the samples.
    delta_w = min(3.0 / density, 0.5 * sub_r1)
    shift = radial_shift_family(l_i - delta_w, r3v, r4v, l, density=density)
    phi = _phi_closures(l_i, r3v, r4v, l)

    rb = Interval(l_i, R_i).mesh(density)
    start = Curve(rb, surrogate.value(rb), surrogate.deriv(rb), check=False)
    # per-step motion of the family is bounded by sup|surrogate'| times the
    # shift length; size the t-grid to land at half the continuity budget.
    probe = Interval(sub_r1, R_i).mesh(density)
    ders_max = float(np.max(np.abs(surrogate.deriv(probe))))
    vals_max = float(np.max(np.abs(surrogate.value(probe))))
    budget = 0.5 * TAU_FAM * max(vals_max, 1e-9)
    n_t = min(max(int(np.ceil(ders_max * l / budget)) + 1, 65), 20001)
    fam = None
    for _ in range(6):
        t_grid = np.linspace(0.0, 1.0, n_t)
        members = []
        for t in t_grid:
            pv, pd = phi(t, rb)
            members.append(Curve(rb, surrogate.value(pv),
                                 surrogate.deriv(pv) * pd[:, None],
                                 check=False))
        try:
            fam = CurveFamily(t_grid, members, start=start)
            break
        except IntegrityError:
            n_t = 2 * n_t - 1
    if fam is None:
        raise ResolutionError("slide family did not meet the continuity "
                              "budget at %d samples" % n_t)
    slid = fam.curves[-1]

    cert = Certificate("relative_giroux")
    fine = np.linspace(l_i, r3v, 2049)
    end_d = surrogate.deriv(fine - l)
    cert.add_residual("(i) collar velocity unchanged after the slide",
                      end_d - h.derivative(fine), 1e-9, grid=fine)
    end_v = surrogate.value(fine - l) - np.array([A, B])
    cert.add_residual("end form equals the input plus the closed "
                      "translation", end_v - h(fine), 1e-9, grid=fine)
    rr = Interval(0.0, R_i).mesh(density)[1:]
    sv, sd = surrogate.value(rr), surrogate.deriv(rr)
    sdef = cross2(sd, sv) / rr
    cert.add_lower("contact defect along the surrogate", sdef,
                   positivity_floor(sdef), grid=rr)
    cert.add_flag("(ii) collar maps into the fibration germ region",
                  r2v < w_i,
                  "slide lands in [%.6g, %.6g], germ holds to %.6g"
                  % (sub_r1, r2v, w_i))
    cert.add_flag("(iii) every stage is invariant", True,
                  "curve-level pipeline; recorded, not re-proved")
    h1_end = float(surrogate.value([sub_r1])[0][0])
    cert.add_lower("(iv) end first component at the boundary",
                   np.array([h1_end]), TAU_POS)
    if h1_l > 0:
        cert.add_lower("(iv) boundary margin h_1(l_i) - h_1^1(l_i)",
                       np.array([h1_l - h1_end]), TAU_POS)
    cert.add_residual("(iv) achieved rotation minus requested",
                      np.array([trace.turning - target]), 1e-6)
    # chain-rule cross-check: the certified sampled maps against the exact
    # closures used to build the family, at the boundary point.
    gaps = []
    for t, m in shift:
        pv = float(m([l_i])[0][0])
        pd = float(m.derivative([l_i])[0][0])
        route_b = surrogate.deriv([pv])[0] * pd
        route_a = surrogate.deriv([l_i - t * l])[0]
        gaps.append(route_b - route_a)
    cert.add_residual("boundary chain rule, certified maps vs closures",
                      np.stack(gaps), 1e-9)
    cert.add_residual("slide family starts at the capped form",
                      fam.curves[0].values - start.values, 0.0)
    cert.details["translation"] = [float(A), float(B)]
    cert.details["subdivision"] = {
        "g0": g0, "r1": sub_r1, "r2": r2v, "g1": g1, "w": w_i,
        "l": l_i, "r3": r3v, "r4": r4v}
    cert.details["turning"] = trace.turning
    cert.details["trace_samples"] = len(trace.samples)
    cert.details["assumption_record"] = answer.assumption_record
    cert.details["cap"] = capped.certificate.to_dict()
    cert.details["slide_maps"] = shift.certificate.to_dict()

    flags = {"i": bool(cert.margin("(i) collar velocity unchanged after "
                                   "the slide") >= 0),
             "ii": bool(r2v < w_i),
             "iii": True,
             "iv": bool(h1_end > 0
                        and (h1_l <= 0 or h1_end < h1_l)
                        and int(np.round(trace.turning)) == target),
             "v": "n/a"}

    steps = [
        HomotopyStep("settle-to-bridge-form", _constant_family(start),
                     "constant at the invariant-curve level; the stub "
                     "bridge form equals the surrogate on the collar"),
        HomotopyStep("slide-collar", fam,
                     "pullback of the surrogate under the radial shifts"),
        HomotopyStep("settle-to-supported-form", _constant_family(slid),
                     "constant; on [l_i, r3] the form equals the input "
                     "plus the closed translation (A, B)"),
    ]
    htrace = HomotopyTrace(steps, trace, trace.turning,
                           answer.assumption_record,
                           filled_curve=capped,
                           surgered_curve=surrogate.sample(density))
    chart = {
        "torus": region.label,
        "coordinates": region.chart.order,
        "projection_class": [0, n_i],
        "collar_interval": [float(l_i), float(r3v)],
    }
    gcert = GirouxCertificate(flags, cert,
                              surrogate.value([sub_r1])[0],
                              surrogate.deriv([sub_r1])[0],
                              trace.turning, answer.assumption_record)
    return htrace, chart, gcert


def _relative_special(region, h, n_i, K, density):
    """Affine boundary model: rechart, validate, and stay put.

    The capped piece is already standard after the square-root rechart,
    so the boundary homotopy is constant and only conclusions (i)-(iii)
    and (v) apply; the end data is the input's own.
    """
    l_i, R_i = h.domain.lo, h.domain.hi
    extent = 0.1 * (R_i - l_i)
    gap = _model_gap(h, l_i, l_i + extent)
    if gap > _MODEL_TOL:
        raise PreconditionError(
            "special branch requires the affine boundary model near the "
            "collar edge (gap %.3g > %.3g)" % (gap, _MODEL_TOL))
    capped = cap_solid_torus(h, "special", density=density)
    answer = giroux_oracle([capped], [n_i], K=K)
    w_i = answer.w[0]

    rb = Interval(l_i, R_i).mesh(density)
    start = Curve(rb, h(rb), h.derivative(rb), check=False)
    fams = [_constant_family(start) for _ in range(3)]

    cert = Certificate("relative_giroux")
    gap_t = max(float(np.max(np.abs(c.values - start.values)))
                for fam in fams for c in fam.curves)
    cert.add_residual("(v) boundary homotopy constant",
                      np.array([gap_t]), 0.0)
    cert.add_residual("(i) collar velocity unchanged",
                      np.zeros(2), 0.0)
    cert.add_flag("(ii) fibration germ inside the standard region", True,
                  "rechart is standard to %.3g inside s <= %.6g"
                  % (_GERM_TOL, w_i))
    cert.add_flag("(iii) every stage is invariant", True,
                  "constant pipeline; recorded")
    cert.details["turning"] = 0.0
    cert.details["assumption_record"] = answer.assumption_record
    cert.details["cap"] = capped.certificate.to_dict()
    cert.details["translation"] = [0.0, 0.0]

    flags = {"i": True, "ii": True, "iii": True, "iv": "n/a", "v": True}
    steps = [HomotopyStep(name, fam, "constant (special branch)")
             for name, fam in zip(("settle-to-bridge-form", "slide-collar",
                                   "settle-to-supported-form"), fams)]
    trace = AngleTrace(np.tile(h.derivative(l_i)[::-1], (9, 1)))
    htrace = HomotopyTrace(steps, trace, 0.0, answer.assumption_record,
                           filled_curve=capped, surgered_curve=None)
    collar_reach = l_i + w_i * w_i
    chart = {
        "torus": region.label,
        "coordinates": region.chart.order,
        "projection_class": [0, n_i],
        "collar_interval": [float(l_i), float(min(collar_reach, R_i))],
    }
    gcert = GirouxCertificate(flags, cert, h(l_i), h.derivative(l_i),
                              0.0, answer.assumption_record)
    return htrace, chart, gcert
