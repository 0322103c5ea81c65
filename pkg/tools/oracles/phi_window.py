"""Reference values for the radial sliding reparametrisation used when a
collar is homotoped onto a capped solid torus.

Phi_t = (1 - t) id + t Phi_1, where Phi_1 slides [l, r3] down by l
(Phi_1(r) = r - l there), is the identity above r4, and interpolates
monotonically on [r3, r4].

Run:  python tools/oracles/phi_window.py
"""
import numpy as np


def phi1(r, l, r3, r4):
    r = np.asarray(r, dtype=float)
    out = np.empty_like(r)
    lo = r <= r3
    hi = r >= r4
    mid = ~(lo | hi)
    out[lo] = r[lo] - l
    out[hi] = r[hi]
    # cubic Hermite from (r3, r3 - l, slope 1) to (r4, r4, slope 1)
    s = (r[mid] - r3) / (r4 - r3)
    h00 = 2 * s**3 - 3 * s**2 + 1
    h10 = s**3 - 2 * s**2 + s
    h01 = -2 * s**3 + 3 * s**2
    h11 = s**3 - s**2
    out[mid] = (h00 * (r3 - l) + h10 * (r4 - r3) * 1.0
                + h01 * r4 + h11 * (r4 - r3) * 1.0)
    return out


def main():
    l_i, r3, r4 = 0.5, 0.7, 0.9
    l = 0.2  # slide distance = l_i - r1 with r1 = 0.3 in that instance
    val = phi1(np.array([0.6]), l, r3, r4)[0]
    print("Phi_1(0.6) =", val)

    # monotonicity of Phi_1 and of Phi_t for several t
    r = np.linspace(0.0, 1.2, 20001)
    p1 = phi1(r, l, r3, r4)
    print("Phi_1 strictly increasing:", bool(np.all(np.diff(p1) > 0)))
    for t in (0.25, 0.5, 0.75, 1.0):
        pt = (1 - t) * r + t * p1
        print(f"Phi_{t} strictly increasing:", bool(np.all(np.diff(pt) > 0)),
              " min slope:", float(np.diff(pt).min() / (r[1] - r[0])))

    # endpoint values
    print("Phi_1(r3) =", phi1(np.array([r3]), l, r3, r4)[0], "(should be r3 - l)")
    print("Phi_1(r4) =", phi1(np.array([r4]), l, r3, r4)[0], "(should be r4)")


if __name__ == "__main__":
    main()
