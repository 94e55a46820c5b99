#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Arbitrary-precision re-derivation of the closed-form reference values.

Evaluates the die-per-wafer, negative binomial yield, Rent's-rule TSV count
and average wire length formulas with mpmath at 50 significant digits and
writes them to crates/core/tests/data/oracles.json. The Rust test suites read
that file; they never call back into this script.

Usage: python3 scripts/derive_oracles.py [--check]
"""

import json
import random
import sys
from pathlib import Path

from mpmath import mp, mpf, pi, sqrt, ceil, floor

mp.dps = 50

OUT = Path(__file__).resolve().parent.parent / "crates/core/tests/data/oracles.json"


def dpw(diameter, area):
    d = mpf(diameter)
    a = mpf(area)
    return pi * (d / 2) ** 2 / a - pi * d / sqrt(2 * a)


def negbin(area, d0, alpha):
    return (1 + mpf(area) * mpf(d0) / mpf(alpha)) ** (-mpf(alpha))


def rent_term(k, n, p):
    k, n, p = mpf(k), mpf(n), mpf(p)
    return k * n * (1 - n ** (p - 1))


def rent_tsv_raw(alpha, k_pair, p_pair, k_i, p_i, n_i, k_j, p_j, n_j):
    s = mpf(n_i) + mpf(n_j)
    return mpf(alpha) * (
        rent_term(k_pair, s, p_pair) - rent_term(k_i, n_i, p_i) - rent_term(k_j, n_j, p_j)
    )


def avg_wire_length(p, n):
    p, n = mpf(p), mpf(n)
    half = mpf("0.5")
    lead = (1 - 4 ** (p - 1)) / (1 - n ** (p - 1))
    first = (7 * n ** (p - half) - 1) / (4 ** (p - half) - 1)
    second = (1 - n ** (p - 1 - half)) / (1 - 4 ** (p - 1 - half))
    return mpf(2) / 9 * lead * (first - second)


def s(x):
    return mp.nstr(x, 30, min_fixed=-100, max_fixed=100)


def main():
    scalars = {}
    raw = dpw(30, 1)
    scalars["dpw_30cm_1cm2"] = {"raw": s(raw), "floor": int(floor(raw))}
    scalars["negbin_a1_d01_alpha3"] = {"raw": s(negbin(1, "0.1", 3))}
    raw = rent_tsv_raw(1, 4, "0.6", 4, "0.6", 10**6, 4, "0.6", 10**6)
    scalars["rent_symmetric_k4_p06_1e6"] = {"raw": s(raw), "ceil": int(ceil(raw))}
    scalars["avg_wire_length_p06_n4"] = {"raw": s(avg_wire_length("0.6", 4))}

    rng = random.Random(0x3DC0)
    rent_cases = []
    while len(rent_cases) < 200:
        k_i = rng.uniform(2.0, 6.0)
        k_j = rng.uniform(2.0, 6.0)
        p_i = rng.uniform(0.5, 0.8)
        p_j = rng.uniform(0.5, 0.8)
        n_i = 10 ** rng.uniform(3.0, 9.0)
        n_j = 10 ** rng.uniform(3.0, 9.0)
        alpha = rng.uniform(0.5, 1.0)
        k_pair = (k_i + k_j) / 2
        p_pair = (p_i + p_j) / 2
        value = rent_tsv_raw(alpha, k_pair, p_pair, k_i, p_i, n_i, k_j, p_j, n_j)
        largest = max(
            rent_term(k_pair, mpf(n_i) + mpf(n_j), p_pair),
            rent_term(k_i, n_i, p_i),
            rent_term(k_j, n_j, p_j),
        )
        # keep well-conditioned cases: the f64 path loses log10(largest/value) digits
        if value <= 1 or largest / value > 1e5:
            continue
        rent_cases.append(
            {
                "alpha": alpha,
                "k_pair": k_pair,
                "p_pair": p_pair,
                "k_i": k_i,
                "p_i": p_i,
                "n_i": n_i,
                "k_j": k_j,
                "p_j": p_j,
                "n_j": n_j,
                "raw": s(value),
            }
        )

    wire_cases = []
    for _ in range(100):
        p = rng.uniform(0.52, 0.85)
        n = 10 ** rng.uniform(1.0, 10.0)
        wire_cases.append({"p": p, "n": n, "raw": s(avg_wire_length(p, n))})

    yield_cases = []
    for _ in range(100):
        a = rng.uniform(0.0, 10.0)
        d0 = rng.uniform(0.0, 0.5)
        alpha = rng.uniform(0.5, 20.0)
        yield_cases.append({"area": a, "d0": d0, "alpha": alpha, "raw": s(negbin(a, d0, alpha))})

    dpw_cases = []
    for _ in range(100):
        d = rng.choice([15.0, 20.0, 30.0, 45.0])
        a = rng.uniform(0.01, 8.0)
        raw = dpw(d, a)
        dpw_cases.append({"diameter": d, "area": a, "raw": s(raw), "floor": int(floor(raw))})

    doc = {
        "generator": "scripts/derive_oracles.py",
        "digits": mp.dps,
        "scalars": scalars,
        "rent_tsv": rent_cases,
        "avg_wire_length": wire_cases,
        "negbin": yield_cases,
        "dies_per_wafer": dpw_cases,
    }
    text = json.dumps(doc, indent=1, sort_keys=True) + "\n"
    if "--check" in sys.argv:
        if OUT.read_text() != text:
            print("oracles.json is stale; rerun without --check", file=sys.stderr)
            return 1
        print("oracles.json up to date")
        return 0
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(text)
    for name, value in scalars.items():
        print(f"{name}: {value}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
