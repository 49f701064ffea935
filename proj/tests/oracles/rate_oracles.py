"""Independent high-precision evaluations used to freeze expected values in
the C++ tests. Run with `python3 rate_oracles.py`; requires mpmath."""
from mpmath import mp, mpf, sqrt, exp, findroot, log, ceil

mp.dps = 40


def eta_euclid(e):
    e = min(e, mpf(2))
    return 1 - sqrt(1 - (e / 2) ** 2)


def omega_euclid(b, e):
    return e / b


# ---- Plant chain, written out term by term -------------------------------
def plant_chain(eps, b, n, eta, omega, phi, lam0=None):
    B = b + 2 * n + 3 * n * n
    clamp = (lambda v: v) if lam0 is None else (lambda v: min(v, lam0 / 2))

    def p1(e):
        return clamp(phi(e, B) / b)

    def psi(e, bb):
        return omega(2 * bb, e) / (2 * bb)

    def p2(e):
        return psi(e * e * clamp(p1(e / 2)) / 4, B)

    def p3(e):
        return clamp(min(p1(e / 3), p1(eta(min(e / (3 * b), 2)) * e / 4), p1(e / 4)))

    def p4(e):
        h = eta(min(e, 2))
        return clamp(min(p1(e / 3), p2(e / 3), p1(h * e / 8), sqrt(p2(e / 4)),
                         h * e / (16 * b), 1))

    Phi = min(p3(eps / 2), p4(eps / 2)) ** 2
    return p1(eps), p2(eps), p3(eps), p4(eps), Phi


# ---- Reich chain ----------------------------------------------------------
def reich_chain(eps, b, E, eta, f):
    def phi(e):
        return 8 * (b + f(e / 2)) / e

    def psi(K, D):
        return (b + K) / D

    def phi1(e, D, c):
        h = 2 * eta(min(e / 2, 2))
        w = D * h * h / 18
        return max(psi(c + 1, D), psi((4 / e + 1) * c, D), (c + b) / w, phi(w))

    def phi2(e):
        return max(phi(e / 4), phi(e / 3),
                   phi1(e / (6 * E), e / 4, f(e * eta(min(e / (12 * E), 2)) / 2)))

    m = min(eps * eta(min((eps / 8) / (16 * (E + 1)), 2)) / 32, eps / 64)
    Phi = max(4 / eps * (b + f(m)), 8 / eps * f(m), phi2(eps / 2))
    return phi(eps), phi2(eps), Phi


if __name__ == "__main__":
    # Plant quantity for the 1-D identity operator at x = 1.
    q = lambda t: (1 / (1 + t) - exp(-t)) / t
    print("plant empirical threshold eps=0.1:", findroot(lambda t: q(t) - mpf("0.1"), 0.3))

    one = lambda e: mpf(1)
    print("plant chain eta=1, eps=1:",
          plant_chain(mpf(1), 1, 1, lambda e: mpf(1), omega_euclid, lambda e, B: e))
    print("plant chain euclid, eps=1:",
          plant_chain(mpf(1), 1, 1, eta_euclid, omega_euclid, lambda e, B: e))
    for eps in ["0.5", "0.25", "0.1"]:
        print("plant chain euclid phi=eps b=n=1 eps=", eps,
              plant_chain(mpf(eps), 1, 1, eta_euclid, omega_euclid, lambda e, B: e))

    print("reich eta=1 E=1 b=1 f=1 eps=6:", reich_chain(mpf(6), 1, 1, lambda e: mpf(1), lambda e: mpf(1)))
    print("reich const q=(1,0) b=2 E=1 eps=1:",
          reich_chain(mpf(1), 2, 1, eta_euclid, lambda e: mpf(1)))

    # Crandall-Liggett rate and closed forms for acceptance criterion 1.
    for k in [0, 4, 8]:
        n = int(ceil(mpf(2) ** (2 * k + 2)))
        for t in ["0.1", "0.5", "0.9"]:
            t = mpf(t)
            print("cl", k, n, t, abs((1 + t / n) ** (-n) - exp(-t)), mpf(2) ** (-k))
