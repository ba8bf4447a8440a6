"""Smoke test for the itqsl Python module.

Build and install first, e.g. `maturin develop -m crates/python/Cargo.toml`
or `pip install --no-build-isolation ./crates/python`, then run
`python python/smoke_test.py`.
"""

import math

import itqsl


def close(a, b, tol):
    assert abs(a - b) <= tol, f"{a} vs {b} (tol {tol})"


def main():
    psi = itqsl.StateVector([1, 1j]).normalize()
    close(psi.norm, 1.0, 1e-15)
    close(abs(psi.inner(psi)), 1.0, 1e-15)

    h = itqsl.HermitianOperator([[1, 0.5 - 0.5j], [0.5 + 0.5j, -1]])
    values, vectors = h.eig()
    assert values[0] < values[1] and len(vectors) == 2
    try:
        itqsl.HermitianOperator([[0, 1], [0, 0]])
    except ValueError:
        pass
    else:
        raise AssertionError("non-Hermitian matrix accepted")

    # two-level model saturates the bound
    h2, psi0 = itqsl.two_level(math.pi / 4, 1.0)
    traj = itqsl.propagate(h2, psi0, 2.0, 2000)
    rep = itqsl.qsl_report(traj)
    assert rep.saturated
    close(rep.theta_t, itqsl.two_level_theta(math.pi / 4, 1.0, 2.0), 1e-12)
    close(rep.path_length, itqsl.two_level_dispersion_integral(math.pi / 4, 1.0, 2.0), 1e-8)
    cert = itqsl.saturation_certificate(traj, h2)
    assert cert.is_saturating(1e-8) and cert.min_lambda >= 0

    # RK4 agrees with the spectral propagator
    rk = itqsl.propagate(h2, psi0, 2.0, 2000, method="rk4")
    close(rk.thetas[-1], traj.thetas[-1], 1e-10)

    # a generic instance is strictly inside the bound
    psi1 = itqsl.StateVector([1, 2, 0.5j]).normalize()
    h3 = itqsl.HermitianOperator([[0, 1, 0], [1, 0.3, 0.2j], [0, -0.2j, 1.5]])
    t3 = itqsl.propagate(h3, psi1, 3.0, 1000)
    r3 = itqsl.qsl_report(t3)
    assert r3.theta_t <= r3.path_length and not r3.saturated
    assert itqsl.rate_check(t3)[3]

    # Grover runtime
    crossing = itqsl.grover_crossing_time(1024, 0.0, 1.0, 0.01, 10.0)
    close(crossing, itqsl.grover_runtime(1024, 0.0, 1.0, 0.01), 1e-6)
    close(crossing, 8.07043, 1e-4)
    hg, pg, w = itqsl.grover(16, 0.0, 1.0, embed=True)
    fid = itqsl.fidelity(itqsl.propagate(hg, pg, 5.0, 100), w)
    close(fid[0], 1 / 16, 1e-15)
    close(fid[-1], 1 / (1 + 15 * math.exp(-10)), 1e-14)

    print(f"itqsl {itqsl.__version__}: smoke test passed")


if __name__ == "__main__":
    main()
