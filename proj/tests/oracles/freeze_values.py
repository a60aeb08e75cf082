"""Independent reference values for the C++ tests.

Everything here is recomputed from the model definitions with mpmath at
elevated precision and written to frozen_values.hpp. Run from the repository
root:  python3 tests/oracles/freeze_values.py
"""

from pathlib import Path

from mpmath import mp, mpf, hyp2f1, gamma, quad, inf, expm1, log1p

mp.dps = 30

LAMBDA1 = 1 / (mpf(250) ** 2 * mp.pi)


def dbm(x):
    return mpf(10) ** (mpf(x) / 10) / 1000


def reference(**over):
    c = dict(l1=LAMBDA1, l2=50 * LAMBDA1, lu=50 * LAMBDA1, a=mpf("3.7"), P1=dbm(46), P2=dbm(21),
             M1=4, B1=mpf(1), B2=mpf(10), W=mpf(20e6), R0=mpf(2e6), Nf=1000, Nc=100, skew=mpf("0.5"))
    c.update(over)
    return c


def zipf(n, s):
    w = [mpf(i) ** (-s) for i in range(1, n + 1)]
    t = sum(w)
    return [x / t for x in w]


def tiers(c):
    return [c["l1"], c["l2"]], [c["P1"], c["P2"]], [c["M1"], 1], [c["B1"], c["B2"]]


def z1(x, mj, mjk, bjk, a):
    d = 2 / a
    return hyp2f1(-d, mj, 1 - d, -x / (mjk * bjk)) - 1


def z2(x, mj, mjk, a):
    d = 2 / a
    return gamma(1 - d) * gamma(mj + d) / gamma(mj) * (x / mjk) ** d


def association(c, p, q2):
    lam, P, M, B = tiers(c)
    d = 2 / c["a"]
    off = lam[0] / lam[1] * (P[0] * B[0] / (P[1] * B[1])) ** d
    pf2 = [q / (off + q) if q > 0 else mpf(0) for q in q2]
    P2 = sum(pi * x for pi, x in zip(p, pf2))
    return [1 - P2, P2], pf2


def loads(c, Pk):
    lam, P, M, B = tiers(c)
    pa = [mpf(1), 1 - (1 + Pk[1] * c["lu"] / (mpf("3.5") * lam[1])) ** mpf("-3.5")]
    eu = [1 + mpf("1.28") * c["lu"] * Pk[k] / lam[k] for k in range(2)]
    g = [mpf(2) ** (c["R0"] / (c["W"] * M[k]) * eu[k]) - 1 for k in range(2)]
    return pa, g


def denominator(c, k, x, q2val, pa):
    lam, P, M, B = tiers(c)
    d = 2 / c["a"]
    q = [mpf(1), q2val]
    den = 0
    for j in range(2):
        mjk = mpf(M[j]) / M[k]
        bjk = B[j] / B[k]
        s = lam[j] / lam[k] * (P[j] / P[k]) ** d
        den += s * (q[j] * pa[j] * bjk ** d * z1(x, M[j], mjk, bjk, c["a"])
                    + (1 - q[j]) * pa[j] * z2(x, M[j], mjk, c["a"]) + q[j] * bjk ** d)
    return den


def success(c, q2):
    p = zipf(c["Nf"], c["skew"])
    Pk, _ = association(c, p, q2)
    pa, g = loads(c, Pk)
    out = []
    for k in range(2):
        cache = {}
        s = 0
        for pf, qf in zip(p, q2):
            qk = mpf(1) if k == 0 else qf
            if qk == 0:
                continue
            if qf not in cache:
                cache[qf] = 1 / denominator(c, k, g[k], qf, pa)
            s += pf * qk * cache[qf]
        out.append(s)
    return out


def ase(c, q2, cap_bps=None):
    p = zipf(c["Nf"], c["skew"])
    lam, P, M, B = tiers(c)
    Pk, _ = association(c, p, q2)
    pa, _ = loads(c, Pk)
    total = 0
    for k in range(2):
        upper = inf if (cap_bps is None or k == 0) else cap_bps / c["W"] * mp.log(2)
        cache = {}
        s = 0
        for pf, qf in zip(p, q2):
            qk = mpf(1) if k == 0 else qf
            if qk == 0:
                continue
            if qf not in cache:
                pts = [0, 1, 4, 16, upper] if upper == inf else [0, upper]
                cache[qf] = quad(lambda x: 1 / denominator(c, k, expm1(x), qf, pa), pts)
            s += pf * qk / Pk[k] * cache[qf]
        total += lam[k] * pa[k] * M[k] * s
    return total


def ase_closed_form(c, q2):
    p = zipf(c["Nf"], c["skew"])
    lam, P, M, B = tiers(c)
    d = 2 / c["a"]
    Pk, _ = association(c, p, q2)
    pa, _ = loads(c, Pk)
    total = 0
    u = mpf(4) ** (-1 / c["a"])
    for k in range(2):
        k1 = sum(lam[j] / lam[k] * (P[j] / P[k]) ** d * pa[j] * gamma(1 - d) * gamma(M[j] + d) / gamma(M[j])
                 * (mpf(M[j]) / M[k]) ** (-d) for j in range(2))
        s = 0
        for pf, qf in zip(p, q2):
            qk = mpf(1) if k == 0 else qf
            if qk == 0:
                continue
            k2 = lam[1] / lam[k] * (P[1] / P[k]) ** d * qf * (1 - pa[1])
            term = c["a"] / (2 * k2) * log1p(k2 / k1 * u) if k2 > 0 else c["a"] / (2 * k1) * u
            s += pf * qk / Pk[k] * term
        total += pa[k] * lam[k] * M[k] * (mp.log(2) + s)
    return total


def popular(c):
    return [mpf(1) if i < c["Nc"] else mpf(0) for i in range(c["Nf"])]


def uniform(c):
    return [mpf(c["Nc"]) / c["Nf"]] * c["Nf"]


def z1_integral(x, m, a):
    # Z1 written as (2/alpha) * integral over u in (0,1) of (1 - (1 + x u)^-M) u^(-delta-1).
    # With u = s^k, k = 1/(1-delta), the integrand becomes (1 - (1 + x s^k)^-M) / s^k, which
    # is smooth on [0, 1]; expm1/log1p keep it accurate near s = 0.
    d = 2 / a
    k = 1 / (1 - d)
    f = lambda s: -expm1(-m * log1p(x * s ** k)) / s ** k if s > 0 else m * x
    return d * k * quad(f, mp.linspace(0, 1, 9), maxdegree=12)


def fmt(v):
    return mp.nstr(v, 20)


def main():
    lines = ["#pragma once", "", "// Generated by tests/oracles/freeze_values.py; do not edit.", "",
             "namespace frozen {", ""]

    d = 2 / mpf("3.7")
    lines.append("struct Hyp { double a, b, c, x, value; };")
    lines.append("inline constexpr Hyp kHyp2f1[] = {")
    for (a, b, c, x) in [(-d, 4, 1 - d, mpf("-0.3")), (-d, 4, 1 - d, mpf("-0.49")), (-d, 4, 1 - d, mpf("-0.9")),
                         (-d, 4, 1 - d, mpf("-7.5")), (-d, 4, 1 - d, mpf("-1e6")), (-d, 1, 1 - d, mpf("-2.5")),
                         (-d, 1, 1 - d, mpf("-0.01")), (-d, 1, 1 - d, mpf("-1e3")), (mpf("-0.5"), 2, mpf("0.5"), mpf(-30)),
                         (mpf("0.3"), mpf("1.7"), mpf("2.2"), mpf("-4")), (mpf("1.5"), mpf("1.5"), mpf("2.5"), mpf("-3")),
                         (mpf(-0.4), 8, mpf(0.6), mpf("-250"))]:
        lines.append(f"    {{{fmt(a)}, {fmt(b)}, {fmt(c)}, {fmt(x)}, {fmt(hyp2f1(a, b, c, x))}}},")
    lines.append("};")
    lines.append("")

    lines.append("// Interference kernel by direct integration: alpha, antennas, x, value.")
    lines.append("struct Z1 { double alpha; int m; double x, value; };")
    lines.append("inline constexpr Z1 kZ1Integral[] = {")
    for (a, m, x) in [(mpf("3.7"), 1, mpf("0.5")), (mpf("3.7"), 4, mpf("2.0")), (mpf(3), 2, mpf("0.05")),
                      (mpf(4), 1, mpf(10)), (mpf("2.5"), 4, mpf("0.8"))]:
        lines.append(f"    {{{fmt(a)}, {m}, {fmt(x)}, {fmt(z1_integral(x, m, a))}}},")
    lines.append("};")
    lines.append("")

    lines.append("// Per-tier coverage at the reference network: rate target, policy, macro, helper.")
    lines.append("struct Coverage { double rate; const char* policy; double macro, helper; };")
    lines.append("inline constexpr Coverage kCoverage[] = {")
    for r0 in [1e6, 2e6, 6e6]:
        c = reference(R0=mpf(r0))
        for name, q in [("popular", popular(c)), ("uniform", uniform(c))]:
            s = success(c, q)
            lines.append(f"    {{{r0:.0f}, \"{name}\", {fmt(s[0])}, {fmt(s[1])}}},")
    lines.append("};")
    lines.append("")

    c = reference(B2=mpf(1))
    lines.append("// ASE in nat/s/Hz/m^2 with equal biases.")
    lines.append(f"inline constexpr double kAsePopular = {fmt(ase(c, popular(c)))};")
    lines.append(f"inline constexpr double kAseUniform = {fmt(ase(c, uniform(c)))};")
    lines.append(f"inline constexpr double kAseClosedPopular = {fmt(ase_closed_form(c, popular(c)))};")
    ones = [mpf(1)] * c["Nf"]
    lines.append(f"inline constexpr double kAseTraditional10M = {fmt(ase(c, ones, mpf(10e6)))};")
    lines.append(f"inline constexpr double kAseEverything = {fmt(ase(c, ones))};")
    cb = reference()
    lines.append(f"inline constexpr double kAsePopularBiased = {fmt(ase(cb, popular(cb)))};")
    lines.append("")
    lines.append("}  // namespace frozen")

    out = Path(__file__).with_name("frozen_values.hpp")
    out.write_text("\n".join(lines) + "\n")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
