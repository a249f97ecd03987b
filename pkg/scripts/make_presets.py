"""Regenerate the preset spec files under src/levymoments/presets/."""

import json
from pathlib import Path

from levymoments import Expr, JumpKernel, ProcessSpec, brownian, compound_poisson, gbm, stable, stable_like

OUT = Path(__file__).resolve().parents[1] / "src" / "levymoments" / "presets"

STABLE_LIKE = stable_like(Expr.sinusoidal(1.2, 0.3))
TEMPERED = ProcessSpec(
    diffusion=Expr.constant(0.5),
    kernel=JumpKernel("TemperedStable", (("order", 0.8), ("scale", 1.0), ("tempering", 1.3))),
    name="tempered-stable-with-diffusion",
)
BV_TWO_POINT = compound_poisson(2.0, "TwoPoint", compensation="none", a=3.0)
MARTINGALE_TWO_POINT = compound_poisson(1.0, "TwoPoint", compensation="full", a=1.0)

PRESETS = {
    "AC1": STABLE_LIKE,
    "AC2": TEMPERED,
    "AC3": STABLE_LIKE,
    "AC4": stable(1.5),
    "AC5": stable(1.5),
    "AC6": BV_TWO_POINT,
    "AC7": gbm(0.0, 1.0),
    "AC8": MARTINGALE_TWO_POINT,
    "AC9": stable(1.5),
    "AC10": brownian(),
}


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for key, spec in PRESETS.items():
        d = spec.to_dict()
        d["name"] = f"{key}-{spec.name}" if spec.name else key
        (OUT / f"{key}.json").write_text(json.dumps(d, indent=2, sort_keys=True) + "\n")
        print(key, ProcessSpec.from_dict(d).spec_hash())


if __name__ == "__main__":
    main()
