"""Smoke test for the dcorr Python extension.

Build and install the module first, e.g.

    maturin build --release -m crates/py/Cargo.toml -o dist
    pip install dist/dcorr-*.whl

then run `python python/smoke_test.py`.
"""

import math

import dcorr


def check(cond, msg):
    if not cond:
        raise SystemExit(f"FAIL: {msg}")
    print(f"ok   {msg}")


def main():
    m = dcorr.WeightMeasure("gauss:var=0.5")
    check(str(m) == "gauss:var=0.5", "measure spec round trip")
    check(dcorr.WeightMeasure.szekely(1.0).kernel(-2.5) == 2.5, "szekely kernel |x|")
    check(not dcorr.WeightMeasure.szekely().admissibility()["satisfies_int_res"], "szekely admissibility flag")

    x = [1.0, 2.0, 3.0, 4.0]
    check(math.isclose(dcorr.dcor(x, [-v for v in x], "szekely:alpha=1"), 1.0, rel_tol=1e-12), "dcor of sign flip")

    phi = dcorr.BENCHMARK_AR10
    series = dcorr.simulate_ar(phi, 1000, noise="gauss", seed=7)
    check(series == dcorr.simulate_ar(phi, 1000, noise="gauss", seed=7), "simulation reproducible by seed")

    model = dcorr.fit_ar(series, 10)
    check(model.p == 10 and len(model.residuals) == 990, "AR(10) fit shape")
    check(model.is_causal(), "fitted model is causal")
    check(max(abs(a - b) for a, b in zip(model.phi, phi)) < 0.15, "coefficients near truth")

    curve = dcorr.adcf(model.residuals, 10, m, scaled=True)
    check(curve.lags == list(range(1, 11)) and len(curve.values) == 10, "scaled residual ADCF")

    env = dcorr.parametric_bootstrap_envelope(model, 1000, 10, m, b=100, levels=[0.05, 0.5, 0.95], seed=1)
    q95 = env.quantile(0.95)
    check(len(q95) == 10 and all(v > 0 for v in q95), "parametric bootstrap envelope")
    check(isinstance(env.exceedances(curve, 0.95), list), "exceedances")

    perm = dcorr.permutation_envelope(model.residuals, 5, m, b=100, seed=2)
    check(perm.method == "Permutation" and perm.seed == 2, "permutation envelope metadata")

    try:
        dcorr.simulate_ar([1.1], 10)
    except dcorr.DcorrError as e:
        check("causal" in str(e), "non-causal phi rejected")
    else:
        raise SystemExit("FAIL: phi=(1.1) accepted")

    print("all smoke checks passed")


if __name__ == "__main__":
    main()
