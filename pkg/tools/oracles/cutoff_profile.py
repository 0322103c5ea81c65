"""Reference construction for the logarithmic cutoff rho with
rho == 1 near x = 0, rho == 0 for x >= delta, and |x rho'(x)| < eps.

Profile: rho(x) = S(s(x)) with s = log(delta/x) * eps_hat,
eps_hat = eps/(1+mu), mu = 0.25; S is a smoothed step rising 0 -> 1 on
[s0, 1] with s0 = mu/(2(1+mu)) = 0.1, built as the normalised integral of
the flat bump exp(-kappa/(u(1-u))).

Slope budget: |x rho'| = eps_hat * S'(s), so we need max S' < 1 + mu = 1.25.
The rise length is 1 - s0 = 0.9, mean slope 1/0.9 = 1.111, so the profile
flatness max/mean must stay below 1.125.  This script sweeps kappa to find
one that fits, then measures sup |x rho'| end to end for delta=1, eps=0.5.

Run:  python3 tools/oracles/cutoff_profile.py
"""
import numpy as np

MU = 0.25
S0 = MU / (2 * (1 + MU))


def step_profile(kappa, n=200001):
    """Normalised bump integral on [0, 1]; returns (u_grid, S, max dS/du)."""
    u = np.linspace(0.0, 1.0, n)
    inside = (u > 0) & (u < 1)
    b = np.zeros_like(u)
    b[inside] = np.exp(-kappa / (u[inside] * (1 - u[inside])))
    cum = np.concatenate([[0.0], np.cumsum((b[1:] + b[:-1]) * 0.5 * np.diff(u))])
    S = cum / cum[-1]
    return u, S, b.max() / cum[-1]


def rho_of_x(x, delta, eps, kappa):
    eps_hat = eps / (1 + MU)
    with np.errstate(divide="ignore"):
        s = np.where(x > 0, np.log(delta / np.maximum(x, 1e-300)) * eps_hat, np.inf)
    u = np.clip((s - S0) / (1.0 - S0), 0.0, 1.0)
    ug, S, _ = step_profile(kappa)
    return np.interp(u, ug, S)


def main():
    print("s0 =", S0, " rise length =", 1 - S0, " mean dS/ds =", 1 / (1 - S0))
    budget = 1 + MU
    for kappa in (0.1, 0.05, 0.02, 0.01, 0.005):
        _, _, max_du = step_profile(kappa)
        max_ds = max_du / (1 - S0)
        print(f"kappa={kappa}: max dS/du = {max_du:.6f}, max dS/ds = {max_ds:.6f} "
              f"(budget {budget})  ok={max_ds < budget}")

    kappa = 0.01
    print("chosen kappa:", kappa)

    # end-to-end measurement, delta = 1, eps = 0.5
    delta, eps = 1.0, 0.5
    x = np.geomspace(1e-6, delta, 400001)
    rho = rho_of_x(x, delta, eps, kappa)
    xrp = np.gradient(rho, np.log(x))          # x * drho/dx
    print("rho(x->0) =", rho[0], " rho(delta) =", rho[-1])
    print("sup |x rho'| measured:", np.abs(xrp).max(), " < eps:", np.abs(xrp).max() < eps)
    print("nonincreasing:", bool(np.all(np.diff(rho) <= 1e-15)))
    print("plateau-1 radius delta*exp(-(1+mu)/eps) =", delta * np.exp(-(1 + MU) / eps))
    print("plateau-0 radius delta*exp(-mu/(2*eps)) =", delta * np.exp(-MU / (2 * eps)))

    # second pair to confirm scale invariance
    delta, eps = 0.3, 0.02
    x = np.geomspace(delta * np.exp(-2 * (1 + MU) / eps), delta, 400001)
    rho = rho_of_x(x, delta, eps, kappa)
    xrp = np.gradient(rho, np.log(x))
    print(f"(delta={delta}, eps={eps}) sup |x rho'| =", np.abs(xrp).max(),
          " < eps:", np.abs(xrp).max() < eps)


if __name__ == "__main__":
    main()
