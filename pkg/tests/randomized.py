"""Seeded generator of random five-argument threat scenarios."""

from __future__ import annotations

import math

import numpy as np

from threatcorr.evidence import (
    build_coverage_bel,
    build_location_bel,
    build_movement_bel,
    build_separation_bel,
    rows,
)
from threatcorr.mass import TotalConflict
from threatcorr.resolver import DiscreditingFactor, PresenceBelief, PresenceTest, coarse_report


def _masses(rng, n, total=1.0):
    w = rng.dirichlet(np.ones(n)) * total
    w = np.maximum(w, 1e-3)
    return [float(x) for x in w / w.sum() * total]


def random_arguments(rng):
    n1, n2 = rng.integers(2, 7, 2)
    r1 = np.cumsum(rng.uniform(1, 25, n1))
    r2 = np.cumsum(rng.uniform(1, 25, n2))
    c1 = tuple(rng.uniform(0, 100, 2))
    c2 = tuple(rng.uniform(0, 100, 2))
    diag = float(rng.uniform(0, 0.6))
    nb = int(rng.integers(1, 6))
    lo = np.sort(rng.uniform(0, 30, nb))[::-1]
    hi = np.sort(rng.uniform(31, 60, nb))
    hi[-1] = math.inf if rng.random() < 0.5 else hi[-1]
    ns = int(rng.integers(1, 7))
    seps = np.sort(rng.choice(np.arange(0, 120), size=ns, replace=False))[::-1].astype(float)
    return [
        build_location_bel(1, c1, rows(list(r1), _masses(rng, n1))),
        build_location_bel(2, c2, rows(list(r2), _masses(rng, n2))),
        build_movement_bel(diag, rows(list(lo), _masses(rng, nb, 1 - diag), list(hi))),
        build_coverage_bel(float(rng.uniform(0, 1))),
        build_separation_bel(rows(list(seps), _masses(rng, ns))),
    ]


def random_factors(rng, arguments):
    factors = []
    for i in range(int(rng.integers(0, 5))):
        target = arguments[int(rng.integers(len(arguments)))].id
        tests = []
        for j in range(int(rng.integers(1, 4))):
            # outcomes commit mass to presence or leave it uncommitted
            outs = tuple(PresenceBelief(float(p)) for p in np.round(rng.uniform(0, 0.9, int(rng.integers(1, 4))), 3))
            tests.append(PresenceTest(f"t{i}.{j}", float(rng.uniform(0.5, 5)), outs, outs[int(rng.integers(len(outs)))]))
        factors.append(DiscreditingFactor(f"f{i}", target, tests=tuple(tests)))
    return factors


def threshold_for(conflict, default=0.25):
    """Default threshold, lowered so low-conflict draws still exercise passes II and III."""
    return default if conflict > default else conflict / 2


def random_scenarios(seed, count):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        args = random_arguments(rng)
        try:
            coarse_report(args)
        except TotalConflict:
            continue
        out.append((args, random_factors(rng, args)))
    return out
