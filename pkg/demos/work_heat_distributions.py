"""Work and heat distributions of the monitored engine.

Builds the marginal and joint statistics of the default five-cycle engine
run: the exact Gaussian-mixture components on the energy-transfer lattice,
their densities, and how the per-stroke readout (one pointer pair per
stroke) differs from the accumulated readout (pointers read once at the
end).  The work marginal is identical for one and two accumulated pointers;
the heat marginal is not, because a lone heat pointer keeps interference
between branches that a second pointer would have resolved.
"""
from __future__ import annotations

import numpy as np

from ottomon import EngineConfig, joint_via_lattice, marginal_via_lattice


def describe_marginal(config: EngineConfig, scheme: str, observable: str) -> None:
    mix = marginal_via_lattice(config, scheme, observable, config.cycles)
    mean, second = mix.moments()
    print(f"\n{scheme} {observable} after {config.cycles} cycles")
    print(f"  components: {mix.centers.size}")
    print(f"  mean = {mean:+.6f}, std = {np.sqrt(second - mean**2):.6f}")
    order = np.argsort(-np.abs(mix.weights))[:5]
    for i in order:
        print(f"  value {mix.centers[i]:+7.2f}  weight {mix.weights[i]:+.6f}")


def main() -> None:
    config = EngineConfig(cycles=5)
    print("Engine:", config.thermo.__class__.__name__, "| pointer width", config.sigma)

    for observable in ("work", "heat"):
        for scheme in ("RM", "RC1", "RC2"):
            describe_marginal(config, scheme, observable)

    print("\nJoint (work, heat) mixture, two cycles, accumulated readout")
    joint = joint_via_lattice(config, "RC2", 2)
    print(f"  components: {len(joint.weights)}")
    print(f"  covariance of each component:\n{joint.covariance}")
    top = np.argsort(-joint.weights)[:5]
    for i in top:
        w, q = joint.centers[i]
        print(f"  (W, Q) = ({w:+6.2f}, {q:+6.2f})  weight {joint.weights[i]:.6f}")

    # Density of the work record on a grid, ready for plotting.
    mix = marginal_via_lattice(config, "RM", "work", 5)
    pad = 8.0 * np.sqrt(mix.variance)
    grid = np.linspace(mix.centers.min() - pad, mix.centers.max() + pad, 9)
    density = mix.density(grid)
    print("\nRM work density samples (value: density)")
    for x, p in zip(grid, density):
        print(f"  {x:+8.2f}: {p:.6f}")


if __name__ == "__main__":
    main()
