#!/usr/bin/env python3
"""Regenerates the Shapiro-Wilk reference table in tests/shapiro_reference.hpp.

The samples replay the SplitMix64 / Box-Muller stream of tests/support.hpp;
W and p come from scipy.stats.shapiro.
"""
import math

from scipy import stats

MASK = (1 << 64) - 1


class Rng:
    def __init__(self, seed):
        self.state = seed & MASK

    def next(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def uniform(self):
        return ((self.next() >> 11) + 0.5) * 2.0**-53

    def normal(self):
        u1 = self.uniform()
        u2 = self.uniform()
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)


def draw(kind, rng):
    if kind == "normal":
        return rng.normal()
    if kind == "uniform":
        return rng.uniform()
    if kind == "exponential":
        return -math.log(rng.uniform())
    if kind == "lognormal":
        return math.exp(0.5 * rng.normal())
    if kind == "mixture":
        return rng.normal() if rng.uniform() < 0.7 else 3.0 + 0.5 * rng.normal()
    raise ValueError(kind)


KINDS = ["normal", "uniform", "exponential", "lognormal", "mixture"]
SIZES = [10, 50, 500, 2000]

for k, kind in enumerate(KINDS):
    for n in SIZES:
        seed = 1000 * (k + 1) + n
        rng = Rng(seed)
        sample = [draw(kind, rng) for _ in range(n)]
        res = stats.shapiro(sample)
        print(f'  {{ "{kind}", {n}, {seed}, {res.statistic:.10f}, {res.pvalue:.10e} }},')
