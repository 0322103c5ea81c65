"""Constructive homotopies of planar curve data.

Each operation here realizes one deformation step used in assembling global
open books: constant shifts of a contact curve, extension of a stabilizing
partner from boundary collars, flattening of the proportionality factor,
monotone extension plumbing, closing a family against boundary jets (with
the winding obstruction made explicit), the nose deformation onto a unit
arc, and the radial shift reparametrizations.

Every operation re-certifies what it claims: outputs carry a
``certificate`` attribute (or return one explicitly) with the measured
margins; nothing uncertified escapes.
"""

from __future__ import annotations

import numpy as np

from .certificates import Certificate, merge
from .curves import (DEFAULT_DENSITY, TAU_IMM, TAU_POS, TAU_SLOPE, Curve,
                     Interval, _smoothstep, _smoothstep_slope, antiderivative,
                     cross2, cumulative_integral, dot2, positivity_floor,
                     turning_number)
from .errors import (DomainError, ImmersionError, InfeasibleError,
                     IntegrityError, ObstructionError, PreconditionError,
                     ResolutionError, SolverError)

TAU_FAM = 1e-2      # allowed sup-motion between consecutive family samples
HALF_TURN_GUARD = np.pi / 2


# --- families ------------------------------------------------------------------


class CurveFamily:
    """A one-parameter family of curves sampled on a t-grid in [0, 1].

    Invariants enforced at construction: the t-grid is strictly increasing
    inside [0, 1]; all curves share one domain; consecutive sup-distance
    stays below TAU_FAM times the family's value scale; and when a start
    curve is declared, the t = 0 entry equals it exactly.
    """

    def __init__(self, t_grid, curves, start=None, check=True):
        self.t_grid = np.asarray(t_grid, dtype=float)
        self.curves = list(curves)
        if len(self.t_grid) != len(self.curves) or len(self.curves) == 0:
            raise DomainError("family needs one curve per t sample")
        if (np.any(np.diff(self.t_grid) <= 0) or self.t_grid[0] < -1e-12
                or self.t_grid[-1] > 1 + 1e-12):
            raise DomainError("t-grid must increase strictly within [0, 1]")
        d0 = self.curves[0].domain
        for c in self.curves[1:]:
            if abs(c.domain.lo - d0.lo) > 1e-12 or abs(c.domain.hi - d0.hi) > 1e-12:
                raise DomainError("family curves must share a domain")
        self.scale = max(float(np.max(np.abs(c.values))) for c in self.curves)
        gaps = [float(np.max(np.abs(a.values - b.values)))
                for a, b in zip(self.curves[:-1], self.curves[1:])]
        self.continuity = max(gaps) if gaps else 0.0
        if check:
            tol = TAU_FAM * max(self.scale, 1e-9)
            if self.continuity > tol:
                raise IntegrityError(
                    "family jumps by %.3g between consecutive samples "
                    "(allowed %.3g); refine the t-grid" % (self.continuity, tol))
            if start is not None:
                gap = float(np.max(np.abs(self.curves[0].values - start.values)))
                if gap > 1e-9 * max(self.scale, 1.0):
                    raise IntegrityError("t = 0 entry differs from the declared "
                                         "start curve by %.3g" % gap)
        self.certificate = None

    def __len__(self):
        return len(self.curves)

    def __iter__(self):
        return iter(zip(self.t_grid, self.curves))

    @property
    def domain(self):
        return self.curves[0].domain

    def at(self, t):
        k = int(np.argmin(np.abs(self.t_grid - t)))
        if abs(self.t_grid[k] - t) > 1e-9:
            raise DomainError("t = %g is not a family sample" % t)
        return self.curves[k]

    def certify_immersions(self, what="family curve"):
        for t, c in self:
            c.require_immersion("%s at t = %g" % (what, t))

    def to_records(self):
        return [{"t": float(t), "curve": c.to_record()} for t, c in self]

    @classmethod
    def from_records(cls, records, check=True):
        return cls([rec["t"] for rec in records],
                   [Curve.from_record(rec["curve"]) for rec in records],
                   check=check)

    def __repr__(self):
        return "CurveFamily(%d samples on %r, continuity=%.3g)" % (
            len(self), self.domain, self.continuity)


def _t_grid_for(motion, scale, n_min=33):
    """A t-grid dense enough that per-step motion respects TAU_FAM."""
    step = 0.5 * TAU_FAM * max(scale, 1e-9)
    n = max(n_min, int(np.ceil(motion / step)) + 1)
    return np.linspace(0.0, 1.0, n)


class ShiftPlan:
    """Bookkeeping for a constant shift: h + t(A, 0) or h + (0, B)."""

    def __init__(self, A=0.0, B=0.0, delta=0.0, epsilon=0.0):
        if B < 0:
            raise DomainError("second-component shifts must be nonnegative")
        self.A = float(A)
        self.B = float(B)
        self.delta = float(delta)
        self.epsilon = float(epsilon)

    def __repr__(self):
        return "ShiftPlan(A=%g, B=%g, delta=%g, epsilon=%g)" % (
            self.A, self.B, self.delta, self.epsilon)


# --- constant shifts -------------------------------------------------------------


def shift_theta(h, B):
    """Shift the second component by a constant B >= 0.

    For a contact curve with increasing first component this strictly
    improves the defect: the new defect is the old one plus h1' * B
    pointwise.  Returns (shifted curve, certificate).
    """
    if B < 0:
        raise PreconditionError("shift amount must be nonnegative")
    d1 = h.derivs[:, 0]
    if np.min(d1) <= 0:
        raise PreconditionError("second-component shift needs h1' > 0 "
                                "(min %.3g)" % float(np.min(d1)))
    old = cross2(h.derivs, h.values)
    if np.min(old) <= 0:
        raise PreconditionError("input curve is not contact (defect min %.3g)"
                                % float(np.min(old)))
    out = h.shifted((0.0, B))
    new = cross2(out.derivs, out.values)
    cert = Certificate("shift_theta")
    cert.add_lower("defect after shift", new, positivity_floor(new))
    cert.add_residual("defect identity", new - (old + d1 * B), 1e-12 * max(1.0, B))
    cert.details["B"] = float(B)
    return out, cert


def shift_phi(h, epsilon, n_t=33):
    """Move the first component at r = 0 into (0, epsilon) by a linear family.

    Picks delta in (0, epsilon) (keeping delta = h1(0) when that already
    lies inside, so the family degenerates to a constant), sets
    A = delta - h1(0), and certifies the family h + t(A, 0) as contact on a
    collar around r = 0 for every t.
    """
    if epsilon <= 0:
        raise DomainError("epsilon must be positive")
    if not h.domain.contains(0.0):
        raise DomainError("shift_phi expects a domain containing r = 0")
    h2_0 = float(h(0.0)[1])
    if h2_0 <= 0:
        raise PreconditionError("shift_phi needs h2(0) > 0 (got %.3g)" % h2_0)
    h1_0 = float(h(0.0)[0])
    delta = h1_0 if 0.0 < h1_0 < epsilon else epsilon / 2.0
    A = delta - h1_0
    plan = ShiftPlan(A=A, delta=delta, epsilon=epsilon)

    t_grid = _t_grid_for(abs(A), max(1.0, float(np.max(np.abs(h.values)))),
                         n_min=n_t)
    curves = [h.shifted((t * A, 0.0)) for t in t_grid]
    fam = CurveFamily(t_grid, curves, start=h)

    defects = np.stack([cross2(c.derivs, c.values) for c in curves])
    floor = positivity_floor(defects)
    # largest symmetric collar around r = 0 that stays contact for all t
    ok = np.all(defects >= floor, axis=0)
    r = h.r
    zero_k = int(np.argmin(np.abs(r)))
    width = 0.0
    for k in range(len(r)):
        lo, hi = max(zero_k - k, 0), min(zero_k + k, len(r) - 1)
        if not np.all(ok[lo:hi + 1]):
            break
        width = float(min(abs(r[lo]), abs(r[hi])) if k else 0.0)
    cert = Certificate("shift_phi")
    collar = np.abs(r) <= max(width, 1e-12)
    cert.add_lower("family defect near r = 0", defects[:, collar], floor)
    cert.add_flag("collar has positive width", width > 0)
    cert.details["delta"] = delta
    cert.details["A"] = A
    cert.details["collar_halfwidth"] = width
    cert.details["whole_domain_contact"] = bool(np.all(ok))
    fam.certificate = cert
    return plan, fam


# --- stabilizer extension ---------------------------------------------------------


def _mu_profile(curve_d, h_d):
    """Scalar profile mu with curve' = mu * h', where parallelism holds."""
    return dot2(curve_d, h_d) / np.maximum(dot2(h_d, h_d), 1e-300)


def _angle_lift(vectors):
    v = np.asarray(vectors, dtype=float)
    norms = np.hypot(v[:, 0], v[:, 1])
    if np.any(norms < TAU_IMM):
        raise ImmersionError("zero vector in angle lift at index %d"
                             % int(np.argmin(norms)))
    base = float(np.arctan2(v[0, 1], v[0, 0]))
    if len(v) < 2:
        return np.array([base])
    inc = np.arctan2(cross2(v[:-1], v[1:]), dot2(v[:-1], v[1:]))
    if np.any(np.abs(inc) >= HALF_TURN_GUARD):
        raise ResolutionError("angle lift needs finer sampling (gap %.3f rad)"
                              % float(np.max(np.abs(inc))))
    return np.concatenate([[base], base + np.cumsum(inc)])


def extend_stabilizer(h_family, boundary_g, n_knots=65):
    """Extend prescribed stabilizer collars across the middle, per t.

    ``boundary_g`` is a list, one entry per family sample, of pairs
    (left piece, right piece): curves on the two end collars of the shared
    domain, sampled on the matching restriction of the h-grid.  Each output
    g_t has g_t' = mu_t * h_t' for a piecewise-linear profile mu_t that
    matches both collars exactly and solves the two-point transport
    constraint; ties are broken by minimizing the square distance of mu_t
    from 1, which returns g = h verbatim-close in the self-stabilizing case.

    Raises InfeasibleError when the velocity direction is constant on the
    middle but the required transport is not parallel to it, and
    SolverError when no profile on the search space keeps the pair
    positive.
    """
    if len(boundary_g) != len(h_family):
        raise DomainError("need one boundary pair per family sample")
    out_curves = []
    certs = []
    warnings = []
    for (t, h), (gl, gr) in zip(h_family, boundary_g):
        r = h.r
        nl = len(gl.r)
        nr = len(gr.r)
        if (not np.allclose(gl.r, r[:nl], atol=1e-12)
                or not np.allclose(gr.r, r[-nr:], atol=1e-12)):
            raise DomainError("collar pieces must live on the h-grid ends")
        i0, i1 = nl - 1, len(r) - nr          # junction node indices
        if i1 - i0 < 8:
            raise DomainError("middle region too thin to solve on")

        # prescribed data must already stabilize h on the collars
        for piece, rows in ((gl, slice(0, nl)), (gr, slice(len(r) - nr, None))):
            ker = np.abs(cross2(h.derivs[rows], piece.derivs))
            scale = max(1.0, float(np.max(np.abs(h.derivs))),
                        float(np.max(np.abs(piece.derivs))))
            if np.max(ker) > 1e-9 * scale:
                raise PreconditionError(
                    "collar data is not parallel-transported by h' at t = %g "
                    "(kernel residual %.3g)" % (t, float(np.max(ker))))
            area = cross2(h.derivs[rows], piece.values)
            if np.min(area) < positivity_floor(area):
                raise PreconditionError(
                    "collar data loses pair positivity at t = %g" % t)

        mu_left = float(_mu_profile(gl.derivs, h.derivs[:nl])[-1])
        mu_right = float(_mu_profile(gr.derivs, h.derivs[-nr:])[0])
        rm = r[i0:i1 + 1]
        hd = h.derivs[i0:i1 + 1]
        delta_g = gr.values[0] - gl.values[-1]

        # slope-variation gate: a constant direction can only transport
        # along itself
        lift = _angle_lift(hd)
        variation = float(np.max(lift) - np.min(lift))
        if variation < TAU_SLOPE:
            u = hd[0] / np.hypot(hd[0, 0], hd[0, 1])
            ortho = abs(cross2(u, delta_g))
            allowed = (abs(dot2(u, delta_g)) * np.tan(variation + TAU_SLOPE)
                       + 1e-9 * max(1.0, float(np.max(np.abs(delta_g)))))
            if ortho > allowed:
                raise InfeasibleError(
                    "velocity direction is constant on the middle but the "
                    "required transport has a transverse component %.3g" % ortho)
        elif variation < 3 * TAU_SLOPE:
            warnings.append("slope variation %.3g near threshold %.3g at t = %g"
                            % (variation, TAU_SLOPE, t))

        # knots (always including both junctions), hat basis on the fine grid
        nk = min(n_knots, len(rm))
        knots = np.linspace(rm[0], rm[-1], nk)
        basis = np.zeros((len(rm), nk))
        for j in range(nk):
            e = np.zeros(nk)
            e[j] = 1.0
            basis[:, j] = np.interp(rm, knots, e)
        mu_base = np.interp(rm, [rm[0], rm[-1]], [mu_left, mu_right])

        # transport columns: integral of basis_j * h' across the middle
        cols = np.stack([cumulative_integral(rm, basis[:, j, None] * hd)[-1]
                         for j in range(1, nk - 1)], axis=1)   # (2, nk-2)
        rhs = delta_g - cumulative_integral(rm, mu_base[:, None] * hd)[-1]

        scale_g = max(1.0, float(np.max(np.abs(delta_g))))
        if float(np.max(np.abs(rhs))) <= 1e-11 * scale_g:
            coeff = np.zeros(nk - 2)            # mu = base already transports
        else:
            w = np.gradient(rm)
            phi = basis[:, 1:-1]
            G = (phi * w[:, None]).T @ phi
            b = (phi * w[:, None]).T @ (mu_base - 1.0)
            kkt = np.zeros((nk, nk))
            kkt[:nk - 2, :nk - 2] = 2 * G
            kkt[:nk - 2, nk - 2:] = cols.T
            kkt[nk - 2:, :nk - 2] = cols
            sol = np.linalg.solve(kkt, np.concatenate([-2 * b, rhs]))
            coeff = sol[:nk - 2]
        mu = mu_base + basis[:, 1:-1] @ coeff

        g_vals = np.vstack([
            gl.values,
            (gl.values[-1] + cumulative_integral(rm, mu[:, None] * hd))[1:-1],
            gr.values,
        ])
        g_ders = np.vstack([gl.derivs, (mu[:, None] * hd)[1:-1], gr.derivs])
        g = Curve(r, g_vals, g_ders, check=False)

        ker = np.abs(cross2(h.derivs, g.derivs))
        area = cross2(h.derivs, g.values)
        floor = positivity_floor(area)
        if np.min(area) < floor:
            raise SolverError(
                "no stabilizer on the profile search space keeps positivity "
                "at t = %g (margin %.3g)" % (t, float(np.min(area) - floor)))
        cert = Certificate("extend_stabilizer[t=%g]" % t)
        scale_d = max(1.0, float(np.max(np.abs(h.derivs))))
        cert.add_residual("kernel equation", ker, 1e-9 * scale_d)
        cert.add_lower("pair positivity", area, floor)
        cert.add_residual("left collar agreement", g.values[:nl] - gl.values,
                          1e-12 * scale_g)
        cert.add_residual("right collar agreement", g.values[-nr:] - gr.values,
                          1e-12 * scale_g)
        cert.details["mu_range"] = [float(np.min(mu)), float(np.max(mu))]
        cert.details["slope_variation"] = variation
        certs.append(cert)
        out_curves.append(g)

    fam = CurveFamily(h_family.t_grid, out_curves)
    fam.certificate = merge("extend_stabilizer", certs)
    if warnings:
        fam.certificate.details["warnings"] = warnings
    return fam


# --- proportionality flattening ---------------------------------------------------


def _plateau_eta(u):
    """Monotone C1 ramp with eta(0) = 0, eta'(0) = 0, eta(1) = 1,
    eta'(1) = 1/2: the transition profile out of a plateau."""
    u = np.clip(u, 0.0, 1.0)
    return u * u * (5.0 - 3.0 * u) / 2.0


def flatten_f(h, g, levels, plateau, exact_omega=False, chart=None):
    """Replace g by a partner whose proportionality factor is locally
    constant near the requested levels.

    The factor f (with g' = f h') is postcomposed with a monotone map that
    is the identity outside [level - plateau, level + plateau] and constant
    on the inner half of that window; the new partner integrates
    (sigma of f) * h' from g's left value.  Positivity is re-verified; a
    loss raises SolverError (shrink the plateau and retry).  With
    ``exact_omega`` set, level 0 is rejected: a factor that vanishes on an
    open set cannot certify the exactness bookkeeping downstream.
    """
    from .invariant_forms import (NonProportional, SOLIDTORUS, proportionality,
                                  verify_shs)

    chart = chart or SOLIDTORUS
    base = verify_shs(h, g, chart)
    if not base.passed:
        raise PreconditionError("flatten_f needs a verified pair: %s"
                                % "; ".join(c["quantity"]
                                            for c in base.failures()))
    f = proportionality(h, g)
    if isinstance(f, NonProportional):
        raise PreconditionError("pair is not proportional: residual %.3g"
                                % f.max_residual)
    fv = np.asarray(f, dtype=float)
    lo, hi = float(np.min(fv)), float(np.max(fv))
    levels = sorted(float(L) for L in levels)
    if plateau <= 0:
        raise DomainError("plateau width must be positive")
    for L in levels:
        if not (lo - 1e-12 <= L <= hi + 1e-12):
            raise DomainError("level %g outside the factor range [%g, %g]"
                              % (L, lo, hi))
        if exact_omega and abs(L) <= 1e-12:
            raise DomainError("level 0 cannot be flattened in exact mode: "
                              "the factor must keep only nonzero values")
        if abs(L) > 1e-12 and abs(L) <= plateau:
            raise DomainError("plateau %g straddles zero around level %g; "
                              "sign bookkeeping forbids it" % (plateau, L))
    for La, Lb in zip(levels[:-1], levels[1:]):
        if Lb - La < 2 * plateau:
            raise DomainError("plateaus of width %g overlap between levels "
                              "%g and %g" % (plateau, La, Lb))

    w = plateau / 2.0
    ft = fv.copy()
    for L in levels:
        d = fv - L
        a = np.abs(d)
        inner = a <= w
        ramp = (a > w) & (a <= 2 * w)
        ft[inner] = L
        u = (a[ramp] - w) / w
        ft[ramp] = L + np.sign(d[ramp]) * 2 * w * _plateau_eta(u)

    if np.array_equal(ft, fv):
        out = Curve(g.r, g.values.copy(), g.derivs.copy(), check=False)
    else:
        integrand = Curve(g.r, ft[:, None] * h.derivs,
                          np.zeros_like(h.derivs), check=False)
        out = antiderivative(integrand, g.values[0])

    cert = verify_shs(h, out, chart)
    if not cert.passed:
        raise SolverError("flattening lost positivity: %s; shrink the plateau"
                          % "; ".join(cert.failures()))
    if np.min(np.abs(fv)) > 0:
        cert.add_flag("factor sign preserved", bool(np.min(ft * fv) > 0))
    cert.details["c0_distance"] = float(np.max(np.abs(out.values - g.values)))
    cert.details["c1_distance"] = float(np.max(np.abs(out.derivs - g.derivs)))
    cert.details["distance_bound"] = float(
        plateau * np.max(np.abs(h.derivs)) * max(hi - lo, 1.0))
    cert.details["levels"] = levels
    out.certificate = cert
    return out


# --- monotone extension plumbing --------------------------------------------------


def _monotone_slope_profile(r, d_l, d_r, rise):
    """Strictly positive slope samples on the grid r with prescribed end
    values d_l, d_r and prescribed total integral (same quadrature as the
    caller uses, so the rise is hit exactly).

    Smoothstep pads carry the end slopes to zero; an interior box absorbs
    whatever integral is missing.  Shrinking the pads always reaches
    feasibility for positive data: as the pads narrow the box integral
    tends to the full span, driving the box height to rise/span > 0.
    """
    lo, hi = r[0], r[-1]
    span = hi - lo
    u = (r - lo) / span
    for shrink in range(40):
        uw = 0.25 / (2 ** shrink)
        pad_l = d_l * (1.0 - _smoothstep(u / uw))
        pad_r = d_r * _smoothstep((u - (1 - uw)) / uw)
        box = _smoothstep(u / uw) * _smoothstep((1 - u) / uw)
        pads_total = cumulative_integral(r, pad_l + pad_r)[-1]
        box_total = cumulative_integral(r, box)[-1]
        m = (rise - pads_total) / box_total
        prof = pad_l + pad_r + m * box
        if np.min(prof) > TAU_POS:
            return prof
    raise SolverError("no positive slope profile found (rise %.3g over span "
                      "%.3g with end slopes %.3g, %.3g)" % (rise, span, d_l, d_r))


def monotone_extension(left_jet, right_jet, domain,
                       constraint="first-component-increasing",
                       density=DEFAULT_DENSITY):
    """C1 curve matching two 1-jets with strictly increasing first component.

    Tries a single cubic Hermite first; when its first-component derivative
    dips (steep ends with a small rise), falls back to an explicit positive
    slope profile whose integral hits the rise exactly.  The jets are
    reproduced exactly at the endpoints either way.
    """
    if constraint != "first-component-increasing":
        raise DomainError("unsupported constraint %r" % (constraint,))
    (v_l, d_l), (v_r, d_r) = left_jet, right_jet
    v_l, d_l = np.asarray(v_l, float), np.asarray(d_l, float)
    v_r, d_r = np.asarray(v_r, float), np.asarray(d_r, float)
    dom = domain if isinstance(domain, Interval) else Interval(*domain)
    if d_l[0] <= 0 or d_r[0] <= 0:
        raise InfeasibleError("jet first-derivative components must be positive")
    if v_r[0] <= v_l[0]:
        raise InfeasibleError("right first component (%g) must exceed left (%g)"
                              % (v_r[0], v_l[0]))

    r = dom.mesh(density)
    span = dom.length
    rise = v_r[0] - v_l[0]

    u = (r - dom.lo) / span
    a, b = d_l[0] * span / rise - 1.0, d_r[0] * span / rise - 1.0
    dc1 = rise / span * (1 + a * (1 - u) * (1 - 3 * u) + b * u * (3 * u - 2))
    if np.min(dc1) > TAU_POS:
        c1 = v_l[0] + rise * (u + a * u * (1 - u) ** 2 + b * u * u * (u - 1))
    else:
        dc1 = _monotone_slope_profile(r, d_l[0], d_r[0], rise)
        c1 = v_l[0] + cumulative_integral(r, dc1)

    u = (r - dom.lo) / span
    h00 = (1 + 2 * u) * (1 - u) ** 2
    h10 = u * (1 - u) ** 2
    h01 = u * u * (3 - 2 * u)
    h11 = u * u * (u - 1)
    c2 = (h00 * v_l[1] + h10 * span * d_l[1]
          + h01 * v_r[1] + h11 * span * d_r[1])
    dc2 = (6 * u * (u - 1) / span * v_l[1] + (1 - u) * (1 - 3 * u) * d_l[1]
           - 6 * u * (u - 1) / span * v_r[1] + u * (3 * u - 2) * d_r[1])

    out = Curve(r, np.column_stack([c1, c2]), np.column_stack([dc1, dc2]),
                check=False)
    cert = Certificate("monotone_extension")
    cert.add_lower("first-component slope", dc1, max(TAU_POS, 0.0))
    cert.add_residual("left jet", np.concatenate([out.values[0] - v_l,
                                                  out.derivs[0] - d_l]), 1e-12)
    cert.add_residual("right jet", np.concatenate([out.values[-1] - v_r,
                                                   out.derivs[-1] - d_r]), 1e-12)
    out.certificate = cert
    return out


# --- closing a family against boundary jets ---------------------------------------


class BoundaryJets:
    """Per-t 1-jets at one end of a family, with the declared turning.

    ``turning`` is boundary-oriented: at the left end of the interval it is
    minus the winding of the jet velocities over t in the curve plane, at
    the right end it is plus that winding.
    """

    def __init__(self, t_grid, values, derivs, turning):
        self.t_grid = np.asarray(t_grid, dtype=float)
        self.values = np.asarray(values, dtype=float)
        self.derivs = np.asarray(derivs, dtype=float)
        self.turning = float(turning)
        if self.values.shape != (len(self.t_grid), 2) or \
                self.derivs.shape != (len(self.t_grid), 2):
            raise DomainError("jet arrays must be (n_t, 2)")

    @classmethod
    def constant(cls, t_grid, value, deriv):
        n = len(t_grid)
        return cls(t_grid, np.tile(np.asarray(value, float), (n, 1)),
                   np.tile(np.asarray(deriv, float), (n, 1)), 0.0)

    def winding(self):
        return turning_number(self.derivs)


def close_family(start, left, right, closed=False):
    """Build a family over the start curve's interval matching boundary jets.

    The total declared turning of the two ends must vanish — this is the
    Whitney-type obstruction: a family of immersions interpolating the
    boundary jets, with equal in-chart windings at the two ends, exists iff
    the boundary-oriented turnings sum to zero.  Velocities are produced by
    interpolating angle and log-magnitude lifts between the two end traces;
    values are anchored so that every sampled curve matches both jets
    exactly and the t = 0 curve is the start verbatim.  With ``closed``
    set, the t = 1 curve equals the start as well (requires the jets to
    return to their t = 0 data).
    """
    if not np.allclose(left.t_grid, right.t_grid, atol=1e-12):
        raise DomainError("both ends must share a t-grid")
    t_grid = left.t_grid
    a, b = start.domain.lo, start.domain.hi
    r = start.r

    for end, x, name in ((left, a, "left"), (right, b, "right")):
        if (np.max(np.abs(end.values[0] - start(x))) > 1e-9
                or np.max(np.abs(end.derivs[0] - start.derivative(x))) > 1e-9):
            raise DomainError("%s jets at t = 0 must match the start curve"
                              % name)
        actual = {"left": -1.0, "right": 1.0}[name] * end.winding()
        if abs(end.turning - actual) > 1e-6:
            raise DomainError("declared %s turning %g disagrees with the jet "
                              "trace (%g)" % (name, end.turning, actual))
    total = left.turning + right.turning
    if abs(total) > 1e-6:
        raise ObstructionError(
            "boundary turnings sum to %g != 0: no closing family of "
            "immersions exists" % total)
    if closed:
        for end, name in ((left, "left"), (right, "right")):
            if (np.max(np.abs(end.values[-1] - end.values[0])) > 1e-9
                    or np.max(np.abs(end.derivs[-1] - end.derivs[0])) > 1e-9):
                raise DomainError("closed families need %s jets returning to "
                                  "their start" % name)

    start.require_immersion("start curve")
    v0 = start.derivs
    phi0 = _angle_lift(v0)
    mag0 = np.log(np.hypot(v0[:, 0], v0[:, 1]))
    lam_l = _angle_lift(left.derivs)
    lam_r = _angle_lift(right.derivs)
    # align the lift bases with the start curve's end angles
    lam_l += phi0[0] - lam_l[0]
    lam_r += phi0[-1] - lam_r[0]
    mu_l = np.log(np.hypot(left.derivs[:, 0], left.derivs[:, 1]))
    mu_r = np.log(np.hypot(right.derivs[:, 0], right.derivs[:, 1]))
    val_l, val_r = left.values, right.values

    # refine the t-grid (in lift space, exact at the given samples) until
    # the family-continuity budget is met
    scale = max(1.0, float(np.max(np.abs(start.values))),
                float(np.max(np.abs(val_l))), float(np.max(np.abs(val_r))))
    speed = float(np.max(np.exp(mag0))) * np.exp(
        max(float(np.max(np.abs(mu_l - mu_l[0]))),
            float(np.max(np.abs(mu_r - mu_r[0])))))
    step_motion = [
        (np.max(np.abs(val_l[k + 1] - val_l[k]))
         + np.max(np.abs(val_r[k + 1] - val_r[k]))
         + (b - a) * speed * (abs(lam_l[k + 1] - lam_l[k])
                              + abs(lam_r[k + 1] - lam_r[k])
                              + abs(mu_l[k + 1] - mu_l[k])
                              + abs(mu_r[k + 1] - mu_r[k])))
        for k in range(len(t_grid) - 1)]
    budget = 0.5 * TAU_FAM * scale
    tt, is_sample = [t_grid[0]], [0]
    ll, rr_ang, ml, mr = [lam_l[0]], [lam_r[0]], [mu_l[0]], [mu_r[0]]
    vl, vr = [val_l[0]], [val_r[0]]
    for k in range(len(t_grid) - 1):
        n_sub = max(1, int(np.ceil(step_motion[k] / budget)))
        for j in range(1, n_sub + 1):
            w = j / n_sub
            tt.append((1 - w) * t_grid[k] + w * t_grid[k + 1])
            is_sample.append(k + 1 if j == n_sub else -1)
            ll.append((1 - w) * lam_l[k] + w * lam_l[k + 1])
            rr_ang.append((1 - w) * lam_r[k] + w * lam_r[k + 1])
            ml.append((1 - w) * mu_l[k] + w * mu_l[k + 1])
            mr.append((1 - w) * mu_r[k] + w * mu_r[k + 1])
            vl.append((1 - w) * val_l[k] + w * val_l[k + 1])
            vr.append((1 - w) * val_r[k] + w * val_r[k + 1])
    tt = np.asarray(tt)

    s = _smoothstep((r - a) / (b - a))
    beta = _smoothstep_slope((r - a) / (b - a)) / (b - a)
    beta_cum = cumulative_integral(r, beta)
    beta_total = beta_cum[-1]

    curves = []
    for k in range(len(tt)):
        phi = phi0 + (1 - s) * (ll[k] - ll[0]) + s * (rr_ang[k] - rr_ang[0])
        mag = mag0 + (1 - s) * (ml[k] - ml[0]) + s * (mr[k] - mr[0])
        V = np.exp(mag)[:, None] * np.column_stack([np.cos(phi), np.sin(phi)])
        drift = cumulative_integral(r, V - v0)
        vals = start.values + (vl[k] - vl[0])[None, :] + drift
        m_err = vr[k] - vals[-1]
        vals = vals + (beta_cum / beta_total)[:, None] * m_err[None, :]
        ders = V + (beta / beta_total)[:, None] * m_err[None, :]
        c = Curve(r, vals, ders, check=False)
        if not c.is_immersion():
            # retry: spread the correction where the curve is fast
            wgt = beta * np.exp(mag)
            wgt_cum = cumulative_integral(r, wgt)
            vals = (start.values + (vl[k] - vl[0])[None, :] + drift
                    + (wgt_cum / wgt_cum[-1])[:, None] * m_err[None, :])
            ders = V + (wgt / wgt_cum[-1])[:, None] * m_err[None, :]
            c = Curve(r, vals, ders, check=False)
            if not c.is_immersion():
                raise SolverError("value correction destroyed the immersion "
                                  "at t = %g" % tt[k])
        curves.append(c)

    fam = CurveFamily(tt, curves, start=start)
    cert = Certificate("close_family")
    cert.add_flag("total turning vanishes", abs(total) <= 1e-6)
    samples = [(j, is_sample[j]) for j in range(len(tt)) if is_sample[j] >= 0]
    jet_err = max(
        max(float(np.max(np.abs(curves[j].values[0] - val_l[k]))),
            float(np.max(np.abs(curves[j].values[-1] - val_r[k]))))
        for j, k in samples)
    cert.add_residual("boundary value agreement", np.array([jet_err]), 1e-9)
    der_err = max(
        max(float(np.max(np.abs(curves[j].derivs[0] - left.derivs[k]))),
            float(np.max(np.abs(curves[j].derivs[-1] - right.derivs[k]))))
        for j, k in samples)
    cert.add_residual("boundary jet agreement", np.array([der_err]), 1e-9)
    if closed:
        closure = float(np.max(np.abs(curves[-1].values - start.values)))
        cert.add_residual("closure", np.array([closure]), 1e-9)
    fam.certify_immersions()
    cert.add_flag("immersions for all t", True)
    cert.details["ends_winding"] = [float(-left.turning), float(right.turning)]
    cert.details["t_samples"] = len(tt)
    fam.certificate = cert
    if not cert.passed:
        raise SolverError("closing family failed certification: %s"
                          % "; ".join("%s" % f["quantity"]
                                      for f in cert.failures()))
    return fam


# --- the nose deformation ----------------------------------------------------------


def _bridge_velocity(rr, v_from, v_to, start_value, end_value):
    """Immersed bridge between two velocity fields on the node set rr.

    The bridge velocity blends the angle and log-speed lifts of v_from
    (weight 1 at rr[0]) and v_to (weight 1 at rr[-1]); because the speed is
    an exponential it can never vanish.  A two-parameter bump correction
    (one knob turning the angle, one scaling the log-speed) is solved by a
    damped Newton iteration so that the integrated values run exactly from
    start_value to end_value.  Endpoint velocities are left untouched by
    the bump, so the bridge matches v_from / v_to to machine precision at
    the ends.

    Returns (values, velocities, end_residual, angle_knob, speed_knob).
    """
    rr = np.asarray(rr, dtype=float)
    if len(rr) < 8:
        raise ResolutionError("bridge collar has %d nodes; sample the curve "
                              "more densely" % len(rr))
    phi0 = _angle_lift(v_from)
    phi1 = _angle_lift(v_to)
    mid = len(rr) // 2
    phi1 += 2 * np.pi * np.round((phi0[mid] - phi1[mid]) / (2 * np.pi))
    m0 = np.log(np.hypot(v_from[:, 0], v_from[:, 1]))
    m1 = np.log(np.hypot(v_to[:, 0], v_to[:, 1]))
    u = (rr - rr[0]) / (rr[-1] - rr[0])
    s = _smoothstep(u)
    theta = (1 - s) * phi0 + s * phi1
    mag = (1 - s) * m0 + s * m1
    # knob weight: positive on the whole interior, zero value and slope at
    # the ends so the endpoint velocities stay exact
    w = 4.0 * _smoothstep(u) * _smoothstep(1 - u)
    target = np.asarray(end_value, dtype=float) - np.asarray(start_value,
                                                             dtype=float)
    scale = max(1.0, float(np.max(np.abs(target))),
                float(np.max(np.exp(mag))) * (rr[-1] - rr[0]))
    mu = nu = 0.0
    for _ in range(60):
        th = theta + mu * w
        rho = np.exp(mag + nu * w)
        vel = rho[:, None] * np.column_stack([np.cos(th), np.sin(th)])
        res = cumulative_integral(rr, vel)[-1] - target
        err = float(np.hypot(res[0], res[1]))
        if err <= 1e-13 * scale:
            break
        j_mu = cumulative_integral(
            rr, (rho * w)[:, None] * np.column_stack([-np.sin(th),
                                                      np.cos(th)]))[-1]
        j_nu = cumulative_integral(
            rr, (rho * w)[:, None] * np.column_stack([np.cos(th),
                                                      np.sin(th)]))[-1]
        try:
            step = np.linalg.solve(np.column_stack([j_mu, j_nu]), -res)
        except np.linalg.LinAlgError:
            raise SolverError("bridge correction is degenerate")
        lam = 1.0
        for _ in range(40):
            th2 = theta + (mu + lam * step[0]) * w
            rho2 = np.exp(mag + (nu + lam * step[1]) * w)
            vel2 = rho2[:, None] * np.column_stack([np.cos(th2), np.sin(th2)])
            res2 = cumulative_integral(rr, vel2)[-1] - target
            if float(np.hypot(res2[0], res2[1])) < err:
                break
            lam *= 0.5
        mu += lam * step[0]
        nu += lam * step[1]
    th = theta + mu * w
    rho = np.exp(mag + nu * w)
    vel = rho[:, None] * np.column_stack([np.cos(th), np.sin(th)])
    values = np.asarray(start_value, dtype=float) + cumulative_integral(rr, vel)
    residual = float(np.max(np.abs(values[-1] - end_value)))
    if residual > 1e-9 * scale:
        raise SolverError("bridge endpoint residual %.3e did not converge; "
                          "the collar may be too short for the value gap"
                          % residual)
    if abs(mu) > 2.5 or abs(nu) > 2.5:
        raise SolverError("bridge needs an untame correction (angle knob "
                          "%.2f, speed knob %.2f); widen the collar"
                          % (mu, nu))
    values[-1] = end_value
    return values, vel, residual, mu, nu


def nose_deform(h, x, y, delta):
    """Deform a curve onto the unit arc (cos psi, -sin psi), psi = r - x + pi/4,
    over [x - delta, y + delta], relative to the rest of the domain.

    The window budget y - x + 2 delta < pi/4 keeps psi inside (0, pi/2), so
    the rotated components satisfy the strict monotonicity signs used by
    the preparation step downstream.  Blending collars of 10% of the window
    width connect the arc to the ambient curve; the homotopy interpolates
    angle and log-magnitude lifts inside the deformed zone and is constant
    outside it.

    Returns (family rel endpoints, end curve).
    """
    h.require_immersion("nose input")
    width = y - x + 2 * delta
    if delta <= 0 or y < x:
        raise DomainError("need y >= x and delta > 0")
    if width >= np.pi / 4:
        raise PreconditionError(
            "window width %.4f exceeds the pi/4 budget: the arc would leave "
            "the monotone quadrant" % width)
    c0 = 0.1 * width
    if (x - delta - c0 <= h.domain.lo + 1e-12
            or y + delta + c0 >= h.domain.hi - 1e-12):
        raise PreconditionError("window plus blending collars must sit in the "
                                "domain interior")

    r = h.r
    psi = r - x + np.pi / 4
    arc_vals = np.column_stack([np.cos(psi), -np.sin(psi)])
    arc_ders = np.column_stack([-np.sin(psi), -np.cos(psi)])

    vals = h.values.copy()
    ders = h.derivs.copy()
    win = (r >= x - delta) & (r <= y + delta)
    vals[win] = arc_vals[win]
    ders[win] = arc_ders[win]
    iw = np.nonzero(win)[0]

    def _bridge_side(side):
        """Bridge one collar, widening it until the endpoint displacement is
        commensurate with the collar's travel and the correction is tame."""
        c, last_err = c0, None
        for _ in range(6):
            if side == "left":
                edge = x - delta - c
                if edge <= h.domain.lo + 1e-12:
                    break
                i0 = int(np.searchsorted(r, edge)) - 1
                i1 = int(iw[0])
                v_from, v_to = h.derivs, arc_ders
                sv, ev = h.values[i0], arc_vals[i1]
            else:
                edge = y + delta + c
                if edge >= h.domain.hi - 1e-12:
                    break
                i0 = int(iw[-1])
                i1 = int(np.searchsorted(r, edge, side="right"))
                v_from, v_to = arc_ders, h.derivs
                sv, ev = arc_vals[i0], h.values[i1]
            span = slice(i0, i1 + 1)
            rr = r[span]
            speeds = np.hypot(h.derivs[span][:, 0], h.derivs[span][:, 1])
            travel = float(np.mean(speeds)) * (rr[-1] - rr[0])
            gap = float(np.hypot(*(ev - sv)))
            if 0.2 * travel <= gap <= 3.0 * travel:
                try:
                    bv, bd, res, mu, nu = _bridge_velocity(
                        rr, v_from[span], v_to[span], sv, ev)
                    return i0, i1, bv, bd, res, mu, nu, c
                except SolverError as exc:
                    last_err = exc
            c *= 2.0
        raise PreconditionError(
            "no %s collar width connects the curve to the arc tamely%s"
            % (side, "" if last_err is None else " (%s)" % last_err))

    i0l, i1l, bv, bd, res_l, mu_l, nu_l, c_l = _bridge_side("left")
    vals[i0l + 1:i1l] = bv[1:-1]
    ders[i0l + 1:i1l] = bd[1:-1]
    i0r, i1r, bv, bd, res_r, mu_r, nu_r, c_r = _bridge_side("right")
    vals[i0r + 1:i1r] = bv[1:-1]
    ders[i0r + 1:i1r] = bd[1:-1]
    end = Curve(r, vals, ders, check=False)
    end.require_immersion("nose end curve")

    cert = Certificate("nose_deform")
    wvals, wders = vals[win], ders[win]
    rot = np.column_stack([-wders[:, 1], wders[:, 0]])     # i . h'
    cert.add_residual("arc equation i h' = h", rot - wvals, 1e-10)
    # rotated curve (-h2, h1) on the window: first slope up, second down
    cert.add_lower("rotated first slope", -wders[:, 1], positivity_floor(wders))
    cert.add_upper("rotated second slope", wders[:, 0],
                   -positivity_floor(wders))
    defect = cross2(wders, wvals)
    cert.add_residual("window defect = 1", defect - 1.0, 1e-9)
    cert.details["window"] = [x - delta, y + delta]
    cert.details["collar_widths"] = [c_l, c_r]
    cert.details["collar_value_residuals"] = [res_l, res_r]
    cert.details["collar_knobs"] = [[mu_l, nu_l], [mu_r, nu_r]]
    end.certificate = cert

    # homotopy: log-lift interpolation inside the deformed zone
    zone = np.zeros(len(r), dtype=bool)
    zone[i0l:i1r + 1] = True
    rz = r[zone]
    v_h = h.derivs[zone]
    v_e = end.derivs[zone]
    phi_h = _angle_lift(v_h)
    phi_e = _angle_lift(v_e)
    phi_e += 2 * np.pi * np.round((phi_h[0] - phi_e[0]) / (2 * np.pi))
    m_h = np.log(np.hypot(v_h[:, 0], v_h[:, 1]))
    m_e = np.log(np.hypot(v_e[:, 0], v_e[:, 1]))
    uz = (rz - rz[0]) / (rz[-1] - rz[0])
    beta = _smoothstep_slope(uz) / (rz[-1] - rz[0])
    beta_cum = cumulative_integral(rz, beta)

    zone_len = rz[-1] - rz[0]
    max_speed = float(np.max(np.exp(np.maximum(m_h, m_e))))
    motion = (float(np.max(np.abs(end.values - h.values)))
              + zone_len * max_speed * (float(np.max(np.abs(phi_e - phi_h)))
                                        + float(np.max(np.abs(m_e - m_h)))))
    t_grid = _t_grid_for(motion, max(1.0, float(np.max(np.abs(h.values)))))

    def _member(t):
        phi = (1 - t) * phi_h + t * phi_e
        mag = (1 - t) * m_h + t * m_e
        V = np.exp(mag)[:, None] * np.column_stack([np.cos(phi), np.sin(phi)])
        drift = cumulative_integral(rz, V - v_h)
        zvals = h.values[zone] + drift
        m_err = h.values[zone][-1] - zvals[-1]
        zvals = zvals + (beta_cum / beta_cum[-1])[:, None] * m_err[None, :]
        zders = V + (beta / beta_cum[-1])[:, None] * m_err[None, :]
        return zvals, zders

    # the velocity integration resolves the collar features only up to
    # quadrature error, so the t = 1 member would miss the arc curve by a
    # small static field; fold t times that defect into every member (it
    # vanishes with its derivative at the zone ends)
    zv1, zd1 = _member(1.0)
    dvals = end.values[zone] - zv1
    dders = end.derivs[zone] - zd1
    curves = []
    for t in t_grid:
        zvals, zders = _member(t)
        cv = h.values.copy()
        cd = h.derivs.copy()
        cv[zone] = zvals + t * dvals
        cd[zone] = zders + t * dders
        curve = Curve(r, cv, cd, check=False)
        curve.require_immersion("nose family at t = %g" % t)
        curves.append(curve)

    fam = CurveFamily(t_grid, curves, start=h)
    fcert = Certificate("nose_family")
    end_gap = float(np.max(np.abs(curves[-1].values - end.values)))
    fcert.add_residual("t = 1 matches the arc curve", np.array([end_gap]), 1e-9)
    rel = max(float(np.max(np.abs(cc.values[~zone] - h.values[~zone])))
              for cc in curves)
    fcert.add_residual("rel endpoints outside the zone", np.array([rel]), 0.0)
    fcert.add_flag("immersions for all t", True)
    fam.certificate = fcert
    return fam, end


# --- radial shift reparametrizations -----------------------------------------------


class RadialShiftFamily:
    """Increasing reparametrizations of [0, r4], identity near both ends,
    sliding [l_i, r3] down by t*l."""

    def __init__(self, t_grid, maps, certificate):
        self.t_grid = np.asarray(t_grid, dtype=float)
        self.maps = list(maps)
        self.certificate = certificate

    def at(self, t):
        k = int(np.argmin(np.abs(self.t_grid - t)))
        if abs(self.t_grid[k] - t) > 1e-9:
            raise DomainError("t = %g is not a family sample" % t)
        return self.maps[k]

    def __iter__(self):
        return iter(zip(self.t_grid, self.maps))


def radial_shift_family(l_i, r3, r4, l, density=DEFAULT_DENSITY, n_t=33):
    """The interval reparametrizations behind the collar-sliding step.

    Phi_t is an increasing diffeomorphism of [0, r4], equal to the identity
    near 0 and near r4 for every t, with Phi_1(r) = r - l exactly on
    [l_i, r3].  Monotone bridges connect the shifted window to the fixed
    ends; the family is the straight line between identity and Phi_1, which
    stays monotone because both ends are.
    """
    if not (0 < l < l_i < r3 < r4):
        raise PreconditionError("need 0 < l < l_i < r3 < r4 "
                                "(got l=%g l_i=%g r3=%g r4=%g)" % (l, l_i, r3, r4))
    s0 = (l_i - l) / 2.0
    s1 = (r3 + r4) / 2.0
    bridge_l = monotone_extension(((s0, 0.0), (1.0, 0.0)),
                                  ((l_i - l, 0.0), (1.0, 0.0)),
                                  Interval(s0, l_i), density=density)
    bridge_r = monotone_extension(((r3 - l, 0.0), (1.0, 0.0)),
                                  ((s1, 0.0), (1.0, 0.0)),
                                  Interval(r3, s1), density=density)

    r = Interval(0.0, r4).mesh(density)
    phi1 = r.copy()
    dphi1 = np.ones_like(r)
    mid = (r >= l_i) & (r <= r3)
    phi1[mid] = r[mid] - l
    dphi1[mid] = 1.0
    bl = (r > s0) & (r < l_i)
    phi1[bl] = bridge_l(r[bl])[:, 0]
    dphi1[bl] = bridge_l.derivative(r[bl])[:, 0]
    br = (r > r3) & (r < s1)
    phi1[br] = bridge_r(r[br])[:, 0]
    dphi1[br] = bridge_r.derivative(r[br])[:, 0]

    t_grid = np.linspace(0.0, 1.0, n_t)
    maps = [Curve.scalar(r, (1 - t) * r + t * phi1,
                         (1 - t) * np.ones_like(r) + t * dphi1, check=False)
            for t in t_grid]

    cert = Certificate("radial_shift_family")
    slopes = np.stack([m.derivs[:, 0] for m in maps])
    cert.add_lower("min slope over all t", slopes, TAU_POS)
    idd = maps[0]
    cert.add_residual("t = 0 is the identity", idd.values[:, 0] - r, 0.0)
    win = (r >= l_i) & (r <= r3)
    cert.add_residual("t = 1 shifts the window exactly",
                      maps[-1].values[win, 0] - (r[win] - l), 1e-12)
    ends = (r <= s0) | (r >= s1)
    end_err = np.stack([m.values[ends, 0] - r[ends] for m in maps])
    cert.add_residual("identity near the ends for all t", end_err, 1e-12)
    cert.details["window"] = [l_i, r3]
    cert.details["slide"] = l
    return RadialShiftFamily(t_grid, maps, cert)
