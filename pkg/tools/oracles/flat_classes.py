"""Reference values for flat-piece fibration classes and page multiplicities.

A flat piece carries a closed one-form  lam = p dphi + q dtheta  with
(p, q) integer and gcd(p, q) = k > 0.  The primitive class is
(p, q)/k and a unimodular companion (u, v) with  p*v - q*u = k (i.e.
det [[p/k, u], [q/k, v]] = 1 after normalising) gives the fibration chart.

Multiplicity rule: open-book multiplicities on the contact side are capped
by K0 = max over requested n_i; a flat piece adjacent with primitive
multiplicity k_a forces page multiplicity lcm-style product k_a * K0.

Run:  python tools/oracles/flat_classes.py
"""
from math import gcd


def primitive_and_k(p, q):
    k = gcd(abs(p), abs(q))
    if k == 0:
        raise ValueError("zero class")
    return (p // k, q // k), k


def unimodular_partner(a, b, bound=20):
    """Integer (u, v) with a*v - b*u = 1, minimising |u| + |v| (exhaustive)."""
    best = None
    for u in range(-bound, bound + 1):
        for v in range(-bound, bound + 1):
            if a * v - b * u == 1:
                key = (abs(u) + abs(v), u, v)
                if best is None or key < best:
                    best = key
    if best is None:
        raise ValueError("no partner within bound")
    return (best[1], best[2])


def main():
    for (p, q) in [(0, 1), (0, 3), (2, 4)]:
        prim, k = primitive_and_k(p, q)
        part = unimodular_partner(*prim)
        print(f"lam = {p} dphi + {q} dtheta  -> primitive {prim}, k = {k}, "
              f"partner {part}, det = {prim[0]*part[1] - prim[1]*part[0]}")

    # multiplicity cap examples
    for ns in [{3, 5}, {5, 3}]:
        print("K0 for", sorted(ns), "=", max(ns))
    print("flat-adjacent k_a=2, K0=5 -> page multiplicity", 2 * 5)


if __name__ == "__main__":
    main()
