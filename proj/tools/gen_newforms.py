#!/usr/bin/env python3
"""Writes the newform table read by the library (label|N|k|signs|a_p).

Weight-2 forms come from point counts on fixed Weierstrass models; the weight-4
level-5 form from the eta product eta(z)^4 eta(5z)^4.
"""

import argparse
import sys

import numpy as np
from sympy import primerange

# label -> (conductor, [a1, a2, a3, a4, a6], p_max)
CURVES = {
    "11a": (11, [0, -1, 1, -10, -20], 4000),
    "14a": (14, [1, 0, 1, 4, -6], 2000),
    "15a": (15, [1, 1, 1, -10, -10], 2000),
    "26a": (26, [1, 0, 1, -5, -8], 80000),
    "26b": (26, [1, -1, 1, -3, 3], 80000),
    "37a": (37, [0, 0, 1, -1, 0], 2000),
    "37b": (37, [0, 1, 1, -23, -50], 2000),
}


def ap_curve(coeffs, p):
    a1, a2, a3, a4, a6 = coeffs
    if p == 2:
        count = sum(
            1
            for x in range(2)
            for y in range(2)
            if (y * y + a1 * x * y + a3 * y - (x**3 + a2 * x * x + a4 * x + a6)) % 2 == 0
        )
        return 2 - count
    x = np.arange(p, dtype=np.int64)
    t = (a1 * x + a3) % p
    rhs = ((x * x % p) * x + a2 * (x * x % p) + a4 * x + a6) % p
    d = (4 * rhs + t * t) % p
    squares = np.zeros(p, dtype=np.int64)
    squares[(x * x) % p] = 1
    chi = np.where(d == 0, 0, 2 * squares[d] - 1)
    return -int(chi.sum())


def eta_product_coefficients(exponents, n):
    """q-expansion of prod_m eta(m z)^e_m, without the leading q power, to q^n."""
    series = np.zeros(n + 1, dtype=object)
    series[0] = 1
    for m, e in exponents.items():
        for k in range(1, n // m + 1):
            # multiply by (1 - q^(mk))^e
            for _ in range(e):
                step = m * k
                series[step:] = series[step:] - series[:-step].copy()
    return series


def eta_form(exponents, shift, p_max):
    series = eta_product_coefficients(exponents, p_max)
    return {p: int(series[p - shift]) for p in primerange(2, p_max + 1)}


def record(label, level, weight, ap):
    signs = []
    for p in sorted(ap):
        if level % p == 0 and level % (p * p) != 0:
            half = p ** ((weight - 2) // 2)
            if abs(ap[p]) != half:
                raise SystemExit(f"{label}: a_{p} = {ap[p]} is not +-{half}; wrong model for conductor {level}")
            signs.append(f"{p}:{'+1' if -ap[p] // half > 0 else '-1'}")
    body = ",".join(f"{p}:{ap[p]}" for p in sorted(ap))
    return f"{label}|{level}|{weight}|{','.join(signs)}|{body}"


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="-")
    parser.add_argument("--pmax-scale", type=float, default=1.0, help="scale every p_max (for quick runs)")
    args = parser.parse_args()

    lines = ["# label|N|k|Atkin-Lehner signs|a_p"]
    for label, (level, coeffs, p_max) in CURVES.items():
        bound = int(p_max * args.pmax_scale)
        ap = {p: ap_curve(coeffs, p) for p in primerange(2, bound + 1)}
        lines.append(record(label, level, 2, ap))
    # eta(z)^4 eta(5z)^4 = q - 4 q^2 + 2 q^3 + ...
    lines.append(record("5k4a", 5, 4, eta_form({1: 4, 5: 4}, 1, int(500 * args.pmax_scale))))

    text = "\n".join(lines) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)


if __name__ == "__main__":
    main()
