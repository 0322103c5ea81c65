"""Independent reference values for the velocity-winding utilities.

Run:  python tools/oracles/turning_values.py

Everything here is computed from closed forms, without importing the
package, so the numbers can be frozen into tests as independent
expectations.
"""
import numpy as np


def main():
    # --- one full clockwise loop -> -1 ---
    t = np.linspace(0.0, 1.0, 2001)
    v = np.stack([np.cos(-2 * np.pi * t), np.sin(-2 * np.pi * t)], axis=1)
    ang = np.arctan2(v[:, 1], v[:, 0])
    d = np.diff(ang)
    d = (d + np.pi) % (2 * np.pi) - np.pi
    print("clockwise loop turning:", d.sum() / (2 * np.pi))

    # --- unit-circle arc velocity, curve order (d/dr of e^{-i psi}) ---
    # velocity = -i e^{-i psi} = (-sin psi, -cos psi); its angle is
    # arg(-i e^{-i psi}) = -(psi + pi/2), so over a psi-span of 0.7 the
    # accumulated angle is exactly -0.7.
    span = 0.7
    print("arc velocity turning over span 0.7:", -span / (2 * np.pi))
    print("  repr:", repr(-span / (2 * np.pi)))

    # numerical double-check on a grid (x = psi start pi/4 - 0.1):
    psi = np.linspace(np.pi / 4 - 0.1, np.pi / 4 + 0.6, 4001)
    v = np.stack([-np.sin(psi), -np.cos(psi)], axis=1)
    ang = np.arctan2(v[:, 1], v[:, 0])
    d = np.diff(ang)
    d = (d + np.pi) % (2 * np.pi) - np.pi
    print("  grid check:", d.sum() / (2 * np.pi))

    # --- arc curve solves i h' = h exactly ---
    r = np.linspace(0.0, 0.7, 10_000)
    h = np.exp(-1j * (r + np.pi / 4))           # x = 0 here, irrelevant shift
    hp = -1j * np.exp(-1j * (r + np.pi / 4))
    print("max |i h' - h| closed form:", np.max(np.abs(1j * hp - h)))

    # --- hatted arc component bounds for psi in (pi/4 - d, span + pi/4 + d) ---
    # hat pair = (sin psi, cos psi); need first-derivative cos psi > 0 and
    # second-derivative -sin psi < 0 throughout, i.e. psi stays in (0, pi/2).
    dlt = 0.02
    lo, hi = np.pi / 4 - dlt, 0.16 + np.pi / 4 + dlt
    print("psi window:", (lo, hi), "inside (0, pi/2):", 0 < lo and hi < np.pi / 2)
    print("min cos over window:", np.cos(hi), "min sin:", np.sin(lo))


if __name__ == "__main__":
    main()
