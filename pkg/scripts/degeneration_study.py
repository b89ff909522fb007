"""Watch the elliptic -> trigonometric -> rational limit chain converge.

    python scripts/degeneration_study.py --z 0.3 --z 0.5 --z 1.5
"""

import argparse
import json
from dataclasses import asdict, dataclass, field

from ellipgamma.identities import limit_rational_check, limit_trig_check
from ellipgamma.numerics import euler_gamma


@dataclass
class StudyConfig:
    z_values: list[float] = field(default_factory=lambda: [0.3, 0.5, 1.0, 1.5])
    tau: complex = 0.6j
    sigma_im: list[float] = field(default_factory=lambda: [1.0, 2.0, 3.0, 4.0, 5.0])
    t_values: list[float] = field(default_factory=lambda: [0.4, 0.2, 0.1, 0.07, 0.05])


def run(cfg: StudyConfig) -> list[dict]:
    rows = []
    for z in cfg.z_values:
        trig = limit_trig_check(z, cfg.tau, cfg.sigma_im)
        rational = limit_rational_check(z, cfg.t_values)
        scale = abs(euler_gamma(z))
        rows.append(
            {
                "z": z,
                "trig": dict(zip(cfg.sigma_im, trig)),
                "rational_rel": {t: r / scale for t, r in zip(cfg.t_values, rational)},
            }
        )
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--z", type=float, action="append", help="repeatable; default 0.3 0.5 1 1.5")
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    cfg = StudyConfig()
    if args.z:
        cfg.z_values = args.z
    rows = run(cfg)
    if args.json:
        print(json.dumps({"config": asdict(cfg) | {"tau": str(cfg.tau)}, "rows": rows}, indent=2))
        return
    print("trigonometric limit |Gammabar(z, tau, i s) - Gamma_q(z)|, tau =", cfg.tau)
    print("z".rjust(6) + "".join(f"s={s:g}".rjust(12) for s in cfg.sigma_im))
    for row in rows:
        print(f"{row['z']:6.2f}" + "".join(f"{v:12.3e}" for v in row["trig"].values()))
    print("\nrational limit |Gamma_q(z, i t) - Gamma(z)| / |Gamma(z)|")
    print("z".rjust(6) + "".join(f"t={t:g}".rjust(12) for t in cfg.t_values))
    for row in rows:
        print(f"{row['z']:6.2f}" + "".join(f"{v:12.3e}" for v in row["rational_rel"].values()))


if __name__ == "__main__":
    main()
