"""Symbolic reference values for contact defects, Reeb fields, the model
radial vector field, and the decay of the perturbation coefficient in the
model neighbourhood.

Run:  python tools/oracles/defect_reeb_values.py

Uses sympy so every expected number in the tests is the exact evaluation of
a closed form, not a copy of package output.
"""
import sympy as sp


def main():
    r, T, t = sp.symbols("r T t", positive=True)

    # --- collar-chart defect of h = (r^2, 1):  h1' h2 - h2' h1 = 2r ---
    h1, h2 = r**2, sp.Integer(1)
    D = sp.diff(h1, r) * h2 - sp.diff(h2, r) * h1
    print("collar defect of (r^2, 1):", sp.simplify(D), "at r=0.5:", D.subs(r, sp.Rational(1, 2)))

    # --- binding-chart defect of the model pair (T(1-r^2), T(1-r^2) r^2) ---
    # binding chart flips the sign: defect = h1 h2' - h2 h1'
    b1 = T * (1 - r**2)
    b2 = T * (1 - r**2) * r**2
    Db = sp.expand(b1 * sp.diff(b2, r) - b2 * sp.diff(b1, r))
    print("binding defect:", sp.factor(Db))
    print("  at T=1, r=1/2:", Db.subs({T: 1, r: sp.Rational(1, 2)}),
          "=", float(Db.subs({T: 1, r: sp.Rational(1, 2)})))

    # --- solid-torus chart (theta, r, phi): pair for d theta + r^2 d phi ---
    s1, s2 = r**2, sp.Integer(1)
    Ds = sp.diff(s1, r) * s2 - sp.diff(s2, r) * s1
    print("solid-torus defect of (r^2, 1):", Ds)

    # --- Reeb field R = (-h2' dphi + h1' dtheta)/E, E = h1' g2 - h2' g1 ---
    for pair in [(r, sp.Integer(1)), (r**2, sp.Integer(1))]:
        p1, p2 = pair
        E = sp.diff(p1, r) * p2 - sp.diff(p2, r) * p1
        Rphi = sp.simplify(-sp.diff(p2, r) / E)
        Rtheta = sp.simplify(sp.diff(p1, r) / E)
        print(f"h=g={pair}: E={sp.simplify(E)}, R=({Rphi})*dphi_dir + ({Rtheta})*dtheta_dir")

    # --- proportionality of g' = f h': h=(r^2,1), g=(r,1) ---
    f = sp.simplify(sp.diff(r, r) / sp.diff(r**2, r))
    print("proportionality f(r):", f, "at r=1/4:", f.subs(r, sp.Rational(1, 4)))

    # --- model radial field X = -(1-r^2)/(2r) d_r against omega = -2 T r dr ^ dphi:
    #     iota_X omega = -2 T r * X^r * dphi ... = T(1-r^2) dphi ---
    Xr = -(1 - r**2) / (2 * r)
    coeff = sp.simplify(-2 * T * r * Xr)
    print("iota_X omega coefficient:", coeff, "at T=1, r=1/2:", coeff.subs({T: 1, r: sp.Rational(1, 2)}))

    # --- decay of the theta-perturbation coefficient in the model ---
    # pair at time t:  (T(1-r^2), T(1-r^2) r^2 + t f) with f = T(1-r^2) r^2
    # on the inner half of the neighbourhood.  The stabilized Reeb field gives
    # v(t) = f * dtheta(R_t); closed form below.
    a1 = T * (1 - r**2)
    a2 = T * (1 - r**2) * r**2 * (1 + t)
    E = sp.simplify(sp.diff(a1, r) * a2 - sp.diff(a2, r) * a1)
    f_pert = T * (1 - r**2) * r**2
    v = sp.simplify(f_pert * sp.diff(a1, r) / E)
    print("v(t, r) =", sp.simplify(v))
    for rv in [sp.Rational(1, 5), sp.Rational(1, 2)]:
        expr = sp.simplify(v.subs({T: 1, r: rv}))
        print(f"  at r={rv}: v = {expr} = {sp.nsimplify(expr)}; v*(1+t) = {sp.simplify(expr*(1+t))}",
              "=", float(sp.simplify(expr * (1 + t))))

    # --- defect shifts used by the adjustment moves ---
    # (a) h = (r, 1) on [0.1, 1], add (0, B) with B = 1: defect 1 -> 2
    h1, h2 = r, sp.Integer(1)
    base = sp.diff(h1, r) * h2 - sp.diff(h2, r) * h1
    shifted = sp.diff(h1, r) * (h2 + 1) - sp.diff(h2 + 1, r) * h1
    print("shift (0,1) on (r,1): defect", base, "->", shifted)
    # (b) h = (r, 1+r), first-component family h + t(A, 0), A = 0.05:
    famD = sp.diff(h1 + t * sp.Rational(5, 100), r) * (1 + r) - sp.diff(1 + r, r) * (h1 + t * sp.Rational(5, 100))
    print("family defect:", sp.expand(famD), "min over t in [0,1] at fixed r:",
          sp.expand(famD).subs(t, 1))


if __name__ == "__main__":
    main()
