"""Smoke test for the `brauer` extension module.

Build and install it first, for example:

    pip install maturin
    maturin build --release -m crates/python/Cargo.toml
    pip install target/wheels/brauer-*.whl

then run `python3 python/smoke_test.py` from the repository root.
"""

import pathlib
import sys

import brauer

ROOT = pathlib.Path(__file__).resolve().parent.parent


def check(name, cond):
    print(f"{'PASS' if cond else 'FAIL'} {name}")
    return cond


def main():
    ok = True

    dp1, _ = brauer.load_model(ROOT / "models" / "dp1_f11.toml")
    c = dp1.classify()
    ok &= check("dp1 over F_11 has type 2A4", c["singularity_type"] == "2A4")
    ok &= check("dp1 unramified Brauer group is (Z/5)^2", c["br_nr_factors"] == [5, 5])

    quartic, algebras = brauer.load_model(ROOT / "models" / "quartic_f17.toml")
    (alg,) = algebras
    img = brauer.evaluation_image(alg, quartic, 1)
    ok &= check("quartic invariant is constant 1/2 over F_17", img["image"] == ["1/2"])
    ok &= check("204 smooth F_17-points", quartic.count_points(1, smooth_only=True) == 204)
    ok &= check("not prolific over F_17", not brauer.prolific_check([alg], quartic, 1))
    ok &= check("prolific over F_17^2", brauer.prolific_check([alg], quartic, 2))
    ok &= check("zero-cycles reach 1/2", brauer.zero_cycle_image(alg, quartic, 2) == ["0", "1/2"])

    v = brauer.verdict("diagonal-quartic", "1,47,-103,-17*47*103")
    ok &= check("quartic verdict without algebras is Inconclusive", v["verdict"] == "Inconclusive")
    ok &= check("cone bound for g=3, N=2 is 98", brauer.cone_bound(3, 2)["strict_integer_threshold"] == "98")

    try:
        brauer.load_model(ROOT / "models" / "missing.toml")
        ok &= check("missing file raises", False)
    except brauer.DomainError:
        ok &= check("missing file raises DomainError", True)

    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
