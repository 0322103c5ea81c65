"""Reference values for the blended-field positivity estimate and the
interior-density remainder bound, computed with a throwaway grid
implementation that is independent of the package.

Run:  python tools/oracles/gridforms_values.py

Conventions (binding chart (phi, r, theta), disc radius delta):
  * Two positive fields f0(r, phi, theta), f1(r, phi, theta); the blend is
    f = (1 - rho) f0 + rho f1 with rho = rho(r) the logarithmic cutoff.
  * Positivity quantity:  2 f + r df/dr >= c0 - c1 delta - c2 eps with
    c0 = 2 min(min f0, min f1), c1 = max(|df0/dr|, |df1/dr|),
    c2 = max |f1 - f0|, provided |r rho'| < eps.
  * Interior density (projection pi1 = n Theta + rho(r) f):
    nTheta'(2 r h + r^2 h_r)
      + rho [ f_theta (2 r h + r^2 h_r) + f_r (h_phi - r^2 h_theta) - f_phi h_r ]
      + f rho' (h_phi - r^2 h_theta)
    where the third line is the remainder, bounded by C_f C_h eps r with
    |f| <= C_f r and |h_phi - r^2 h_theta| <= C_h r.
"""
import numpy as np

MU = 0.25


def cutoff(x, delta, eps, kappa=0.01, n_int=20001):
    s0 = MU / (2 * (1 + MU))
    eps_hat = eps / (1 + MU)
    with np.errstate(divide="ignore"):
        s = np.where(x > 0, np.log(delta / np.maximum(x, 1e-300)) * eps_hat, np.inf)
    u = (s - s0) / (1.0 - s0)
    grid = np.linspace(0.0, 1.0, n_int)
    inside = (grid > 0) & (grid < 1)
    b = np.zeros_like(grid)
    b[inside] = np.exp(-kappa / (grid[inside] * (1 - grid[inside])))
    cum = np.concatenate([[0.0], np.cumsum((b[1:] + b[:-1]) * 0.5 * np.diff(grid))])
    vals = np.interp(np.clip(u, 0.0, 1.0), grid, cum / cum[-1])
    return vals


def main():
    # --- constants for f0 == 1, f1 == 2 ---
    c0 = 2 * min(1.0, 2.0)
    c1 = 0.0
    c2 = 1.0
    print("constants for (1, 2):", (c0, c1, c2), "-> any eps <= 1 works (c2*eps <= 1 = c0/2)")

    # --- blended positivity for f0=1, f1=2, eps=0.5 ---
    delta, eps = 1.0, 0.5
    r = np.linspace(1e-9, delta, 4001)
    rho = cutoff(r, delta, eps)
    f = (1 - rho) * 1.0 + rho * 2.0
    # 2f + r f_r, with r f_r = r rho' (f1 - f0);  |r rho'| < eps
    rfr = np.gradient(rho, np.log(r)) * (2.0 - 1.0)
    q = 2 * f + rfr
    print("min 2f + r f_r:", q.min(), ">= 2 - eps =", 2 - eps)

    # --- remainder bound instance: h = 1 + 0.1 r cos(2 pi phi),
    #     f = 0.2 r sin(2 pi theta), n = 3, eps = 1e-2 ---
    eps = 1e-2
    n = 64
    r = np.linspace(1e-6, 1.0, n)
    phi = np.linspace(0.0, 1.0, n, endpoint=False)
    theta = np.linspace(0.0, 1.0, n, endpoint=False)
    R, P, TH = np.meshgrid(r, phi, theta, indexing="ij")
    h = 1 + 0.1 * R * np.cos(2 * np.pi * P)
    h_r = 0.1 * np.cos(2 * np.pi * P)
    h_phi = -0.2 * np.pi * R * np.sin(2 * np.pi * P)
    h_theta = np.zeros_like(R)
    f = 0.2 * R * np.sin(2 * np.pi * TH)

    rho = cutoff(R, 1.0, eps)
    drho = np.gradient(cutoff(r, 1.0, eps), np.log(r))  # r rho'
    rrho_p = np.broadcast_to(drho[:, None, None], R.shape)

    remainder = np.abs(f * (rrho_p / R) * (h_phi - R**2 * h_theta))
    C_f = np.max(np.abs(f) / R)
    C_h = np.max(np.abs(h_phi - R**2 * h_theta) / R)
    bound = C_f * C_h * eps * R
    print("C_f:", C_f, "C_h:", C_h)
    print("max remainder:", remainder.max(), "max bound:", bound.max(),
          "pointwise ok:", bool(np.all(remainder <= bound + 1e-15)))

    # invariant subcase: h independent of phi, theta -> remainder identically 0
    h_phi0 = np.zeros_like(R)
    rem0 = np.abs(f * (rrho_p / R) * (h_phi0 - R**2 * h_theta))
    print("invariant-subcase max remainder:", rem0.max())


if __name__ == "__main__":
    main()
