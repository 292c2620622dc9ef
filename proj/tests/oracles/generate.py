"""Independent reference values for the test suite.

Everything here is computed from closed forms or brute-force sampling with
numpy, without touching the C++ library. The output is frozen into
oracle_values.hpp; rerun only if an oracle itself changes.

    python3 tests/oracles/generate.py > tests/oracle_values.hpp
"""

import math

import numpy as np


def lemniscate(u, a=1.0):
    s = np.sin(u)
    d = 1.0 + s * s
    return a * np.cos(u) / d, a * s * np.cos(u) / d


def point_segment_dist(p, a, b):
    """Distance from each point in p (k,2) to segment [a, b]."""
    ab = b - a
    t = np.clip(((p - a) @ ab) / max(ab @ ab, 1e-300), 0.0, 1.0)
    q = a + t[:, None] * ab
    return np.hypot(*(p - q).T)


def dist_to_polygon(p, poly):
    best = np.full(len(p), np.inf)
    m = len(poly)
    for i in range(m):
        best = np.minimum(best, point_segment_dist(p, poly[i], poly[(i + 1) % m]))
    return best


def sample_polygon(poly, per_edge):
    out = []
    m = len(poly)
    for i in range(m):
        a, b = poly[i], poly[(i + 1) % m]
        t = np.linspace(0.0, 1.0, per_edge, endpoint=False)[:, None]
        out.append(a + t * (b - a))
    return np.vstack(out)


def hausdorff(a, b, samples_each):
    sa = sample_polygon(a, max(2, samples_each // len(a)))
    sb = sample_polygon(b, max(2, samples_each // len(b)))
    return max(dist_to_polygon(sa, b).max(), dist_to_polygon(sb, a).max())


BOWTIE = np.array([[-1.0, -1.0], [1.0, 1.0], [1.0, -1.0], [-1.0, 1.0]])


def main():
    vals = {}

    # Highest point of the a=1 lemniscate by grid search over u.
    u = np.linspace(0.0, math.pi / 2, 1_000_001)
    _, y = lemniscate(u)
    vals["kLemniscateMaxY"] = float(y.max())

    # Area of both lobes: half the integral of r^2 = cos 2 phi, four quadrants.
    phi = np.linspace(0.0, math.pi / 4, 2_000_001)
    vals["kLemniscateArea"] = float(4.0 * 0.5 * np.trapezoid(np.cos(2.0 * phi), phi))

    # Curvature of r^2 = a^2 cos 2 phi is 3 r / a^2.
    vals["kLemniscateKappaRight"] = 3.0
    vals["kLemniscateKappaTop"] = 3.0 / math.sqrt(2.0)
    vals["kLemniscateAlpha"] = math.pi / 4
    vals["kLemniscateVanishingEstimate"] = 1.0 / (2.0 * math.pi + math.pi / 2.0)

    # Regular 256-gon on the unit circle against the bowtie, 1e4 samples each way.
    k = np.arange(256) * 2.0 * math.pi / 256
    circle = np.stack([np.cos(k), np.sin(k)], axis=1)
    vals["kCircle256BowtieHausdorff"] = float(hausdorff(circle, BOWTIE, 10_000))

    # Box-normalised lemniscate (dense parametric sampling) against the bowtie.
    u = np.linspace(0.0, math.pi / 2, 5001)
    x, y = lemniscate(u)
    quarter = np.stack([x[::-1], y[::-1]], axis=1)          # origin -> (1, 0)
    right = np.vstack([quarter, (quarter * [1, -1])[-2::-1]])  # over the top, back under
    eight = np.vstack([right, -right[1:-1]])
    ymax = eight[:, 1].max()
    boxed = eight / [eight[:, 0].max(), ymax]
    vals["kLemniscateBoxBowtieHausdorff"] = float(hausdorff(boxed, BOWTIE, 40_000))

    # Box-normalised area of both lobes: A / (X Y).
    vals["kLemniscateBoxArea"] = vals["kLemniscateArea"] / vals["kLemniscateMaxY"]

    print("#pragma once")
    print()
    print("// Generated by tests/oracles/generate.py; independent of the library.")
    print()
    print("namespace oracle {")
    print()
    for name, v in vals.items():
        print(f"inline constexpr double {name} = {v!r};")
    print()
    print("}  // namespace oracle")


if __name__ == "__main__":
    main()
