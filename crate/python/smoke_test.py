#!/usr/bin/env python3
"""Smoke test for the sidonlab_py extension.

Builds are not triggered here; run `cargo build -p sidonlab-py` first.
The cdylib is copied next to a temp dir under the importable name.
"""

import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def import_extension():
    candidates = [
        ROOT / "target" / "release" / "libsidonlab_py.so",
        ROOT / "target" / "debug" / "libsidonlab_py.so",
        ROOT / "target" / "release" / "libsidonlab_py.dylib",
        ROOT / "target" / "debug" / "libsidonlab_py.dylib",
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit("no built extension found; run: cargo build -p sidonlab-py")
    stage = Path(tempfile.mkdtemp(prefix="sidonlab_py_"))
    shutil.copy2(built, stage / "sidonlab_py.so")
    sys.path.insert(0, str(stage))
    import sidonlab_py

    return sidonlab_py


def close(a, b, tol):
    assert abs(a - b) <= tol, f"{a} vs {b} (tol {tol})"


def main():
    lab = import_extension()

    # set type basics
    s = lab.IntegerSet([3, 1, 2, 2])
    assert s.elements() == [1, 2, 3]
    assert len(s) == 3 and 2 in s and 4 not in s
    assert s.counting_function(2) == 2
    assert s.truncate(2).elements() == [1, 2]
    assert lab.IntegerSet.from_text(s.to_text()).elements() == s.elements()
    try:
        lab.IntegerSet([0])
        raise AssertionError("zero must be rejected")
    except ValueError:
        pass

    # greedy construction and the Sidon predicates
    g = lab.greedy_sidon(10)
    assert g.elements() == [1, 2, 4, 8, 13, 21, 31, 45, 66, 81]
    assert lab.is_sidon(g) and lab.is_bhg(g, 2, 1)
    assert lab.rep_count(lab.IntegerSet([1, 2, 3, 4]), 2, 5) == 2

    two = lab.sumset([lab.IntegerSet([1, 2]), lab.IntegerSet([1, 2])], 4)
    assert two.elements() == [2, 3, 4]

    # random model, fixed seed
    sample = lab.generate(0.5, 10_000, 2)
    assert len(sample) == 30
    t = lab.violation_set(sample)
    assert len(t) == 7
    assert lab.z_statistic(sample, 10_000) == 7
    pruned = lab.prune(sample)
    assert lab.is_sidon(pruned) and len(pruned) == 23

    value, degenerate, quadruple, approx = lab.expected_z(0.5, 10_000)
    close(value, 12.105596271268366, 1e-9)
    close(degenerate + quadruple, value, 1e-12)
    assert not approx
    close(lab.riemann_sum(250), 4.159435012438, 1e-9)
    close(lab.expected_count_s(0.5, 10**6), 148.7762346318804, 1e-9)

    # quadrature
    v, err, evals = lab.integrate_singular()
    close(v, 10.78602512140599, 1e-6)
    assert err < 1e-3 and evals > 0
    v2, _, _ = lab.integrate_singular_cubature()
    close(v2, v, 1e-4)
    v_cap, _, _ = lab.integrate_truncated(1.0)
    close(v_cap, 1.0 / 12.0, 1e-12)
    close(lab.evaluate_f(1.0, 0.5, 0.6), 2.39381632225765, 1e-10)
    try:
        lab.evaluate_f(1.0, 0.5, 0.1)
        raise AssertionError("point outside the domain must be rejected")
    except ValueError:
        pass

    # closed forms and the optimized constant
    close(lab.gamma(1.0 / 3.0), 2.678938534707748, 1e-12)
    close(lab.incomplete_beta(0.3, 1 / 3, 1 / 3), 0.401227613791358, 1e-9)
    close(lab.beta_integral(1 / 3, 1 / 3), 0.883319375142725, 1e-12)
    close(lab.sss_density(0.5), 0.330042519306511, 1e-12)
    c_star, f_star = lab.optimize_bound()
    close(c_star, 0.343818166821324, 2e-4)
    assert f_star >= 0.064
    close(lab.density_lower_bound(c_star), f_star, 1e-12)
    assert lab.sst_bound(0.5) < lab.sss_density(0.5) * 2

    # campaign CSV shape
    csv = lab.campaign_csv(0.5, 2000, 3, 1)
    lines = csv.strip().split("\n")
    assert lines[0] == "seed,|S|,S(N),|T|,Z(N),density3_S,density3_remainder"
    assert len(lines) == 4

    print("smoke test passed:", len(sample), "elements at seed 2, I =", v)


if __name__ == "__main__":
    main()
