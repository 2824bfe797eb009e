"""High-precision fan curvature oracle (law of cosines at 50 digits)."""
import json
import sys

from mpmath import mp, mpf, acos, exp, pi, log, sin, findroot

mp.dps = 50


def center_angle(u0, ui, uj):
    a = exp(ui + uj)
    b = exp(u0 + uj)
    c = exp(u0 + ui)
    return acos((b * b + c * c - a * a) / (2 * b * c))


def curvature(u):
    n = len(u) - 1
    total = mpf(0)
    for j in range(1, n + 1):
        k = j % n + 1
        total += center_angle(u[0], u[j], u[k])
    return 2 * pi - total


def main():
    boundary = [mpf("0.1"), mpf("0.1"), mpf("0.05"), mpf("-0.05"), mpf("-0.1"), mpf("-0.05")]
    k_mixed = curvature([mpf(0)] + boundary)

    def residual(x):
        return curvature([mpf(0), x] + [mpf("0.1")] * 5)

    # Fine scan for the sign change, then a high-precision root.
    xs = [mpf(-2) + mpf(i) / 1000 for i in range(4001)]
    vals = [residual(x) for x in xs]
    bracket = None
    for a, b, fa, fb in zip(xs, xs[1:], vals, vals[1:]):
        if fa.imag == 0 and fb.imag == 0 and fa.real * fb.real <= 0:
            bracket = (a, b)
            break
    root = findroot(residual, bracket, solver="bisect")
    out = {
        "curvature_mixed": float(k_mixed),
        "solve_flat_u1": float(root),
        "regular_flat_factor": {str(n): float(log(2 * sin(pi / n))) for n in (5, 6, 7, 8)},
    }
    json.dump(out, sys.stdout, indent=2)
    print()


if __name__ == "__main__":
    main()
