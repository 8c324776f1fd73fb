"""Check the dilation law across gravity regimes.

Scaling a constant-speed geometry by kappa keeps it constant-speed if either
the speed becomes sqrt(kappa) * v or gravity becomes g / kappa.  The kappa=6
row is the Moon case: a ramp built for Earth works there once enlarged six
times, at the original speed.

Usage:
    python3 scripts/moon_scaling.py --kappas 0.25 0.5 2 4 6
"""

import argparse

from rampforge import (Branch, builtin_field, integrate_ramp3d, make_ramp,
                       spec_from_mu, verify_scaling)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--mu", type=float, default=0.5)
    parser.add_argument("--v", type=float, default=5.0)
    parser.add_argument("--g", type=float, default=9.81)
    parser.add_argument("--mass", type=float, default=1.0)
    parser.add_argument("--kappas", type=float, nargs="+",
                        default=[0.25, 0.5, 2.0, 4.0, 6.0])
    args = parser.parse_args()

    spec = spec_from_mu(args.mu, g=args.g, v=args.v, m=args.mass)
    geometries = {
        "2d lower": make_ramp(spec, Branch.LOWER),
        "2d upper": make_ramp(spec, Branch.UPPER),
        "3d upslope": integrate_ramp3d(spec, builtin_field("upslope"),
                                       [1.0, 0.0, 0.0], 2.0 / spec.a),
    }

    header = (f"{'geometry':11s} {'kappa':>6s} {'v_scaled':>9s} "
              f"{'g_scaled':>9s} {'res(speed)':>11s} {'res(grav)':>11s} verdicts")
    print(f"base: mu={spec.mu} v={spec.v} m/s g={spec.g} m/s^2")
    print(header)
    print("-" * len(header))
    for name, geometry in geometries.items():
        for kappa in args.kappas:
            result = verify_scaling(spec, geometry, kappa)
            print(f"{name:11s} {kappa:6.2f} {result.speed_spec.v:9.4f} "
                  f"{result.gravity_spec.g:9.4f} "
                  f"{result.speed_report.max_residual:11.3e} "
                  f"{result.gravity_report.max_residual:11.3e} "
                  f"{result.speed_report.verdict.value}/"
                  f"{result.gravity_report.verdict.value}")
    print("dilated by 6 with g/6: the Moon ramp verdict is "
          f"{verify_scaling(spec, geometries['2d upper'], 6.0).gravity_report.verdict.value}")


if __name__ == "__main__":
    main()
