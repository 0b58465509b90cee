"""Conic solver tests: coordinates, builder placement, solves, certificates.

Every solved program here has a dense linear-algebra oracle (eigh), so the
solver is checked against answers it cannot influence.
"""

import dataclasses

import numpy as np
import pytest

from decnorms import conic
from decnorms.testkit import eigenvalue_program, make_generator, random_hermitian


def test_svec_round_trip_and_isometry():
    gen = make_generator(30)
    for _ in range(20):
        q = int(gen.integers(1, 7))
        a = random_hermitian(gen, q)
        b = random_hermitian(gen, q)
        va, vb = conic.svec(a), conic.svec(b)
        assert va.shape == (q * q,)
        assert np.allclose(conic.unsvec(va, q), a, atol=1e-14)
        # Euclidean pairing of coordinates equals the trace pairing
        assert float(va @ vb) == pytest.approx(np.trace(a @ b).real, abs=1e-10)
    with pytest.raises(ValueError):
        conic.unsvec(np.zeros(5), 2)


def test_block_builder_hermitian_var_placement():
    # Oracle: evaluate the built block at random coordinates and compare
    # against a hand-assembled [[P, x], [x*, Q]] matrix.
    gen = make_generator(31)
    d = 3
    x = random_hermitian(gen, d) + 1j * random_hermitian(gen, d)
    builder = conic.BlockBuilder(2 * d, 2 * d * d)
    builder.add_hermitian_var(0, d, 0)
    builder.add_hermitian_var(d * d, d, d)
    builder.add_constant_offdiag(x, 0, d)
    blk = builder.build()
    p = random_hermitian(gen, d)
    q = random_hermitian(gen, d)
    y = np.concatenate([conic.svec(p), conic.svec(q)])
    got = conic.unsvec(conic.svec(blk.f0) + blk.lin @ y, 2 * d)
    want = np.block([[p, x], [x.conj().T, q]])
    assert np.allclose(got, want, atol=1e-12)


def test_block_builder_partial_trace():
    gen = make_generator(32)
    n, c = 3, 2
    builder = conic.BlockBuilder(c, n * c * n * c)
    builder.add_partial_trace_var(0, n, c, 0, 1.0)
    blk = builder.build()
    big = random_hermitian(gen, n * c)
    got = conic.unsvec(blk.lin @ conic.svec(big), c)
    want = sum(big[r * c:(r + 1) * c, r * c:(r + 1) * c] for r in range(n))
    assert np.allclose(got, want, atol=1e-12)


def test_program_validation_errors():
    blk = conic.BlockBuilder(2, 2)
    blk.add_scalar_identity(0, 2, 0)
    spec = blk.build()
    with pytest.raises(conic.SolverError):
        conic.ConicProgram(objective=np.array([1.0, 0.0, 0.0]), psd_blocks=[spec])
    with pytest.raises(conic.SolverError):
        conic.ConicProgram(objective=np.array([1.0, 0.0]), psd_blocks=[])
    with pytest.raises(conic.SolverError):
        conic.ConicProgram(objective=np.array([1.0, 0.0]), psd_blocks=[spec],
                           eq_a=np.zeros((1, 2)))
    with pytest.raises(conic.SolverError):
        builder = conic.BlockBuilder(4, 1)
        builder.add_constant_offdiag(np.eye(2), 0, 0)


def test_eigenvalue_program_matches_eigh():
    gen = make_generator(33)
    for _ in range(12):
        d = int(gen.integers(2, 9))
        h = random_hermitian(gen, d)
        sol = conic.solve(eigenvalue_program(h))
        top = float(np.linalg.eigvalsh(h)[-1])
        assert sol.status == "optimal"
        assert sol.primal_value == pytest.approx(top, abs=1e-7)
        assert sol.gap <= 1e-7
        assert sol.dual_value <= sol.primal_value + 1e-7


def test_equality_constrained_min_eigenvalue():
    # minimize tr(h P) over density matrices P: optimum is the smallest
    # eigenvalue of h, checked against eigh.
    gen = make_generator(34)
    for _ in range(6):
        d = int(gen.integers(2, 5))
        h = random_hermitian(gen, d)
        m = d * d
        builder = conic.BlockBuilder(d, m)
        builder.add_hermitian_var(0, d, 0)
        prog = conic.ConicProgram(
            objective=conic.svec(h),
            psd_blocks=[builder.build()],
            eq_a=conic.svec(np.eye(d))[None, :],
            eq_b=np.array([1.0]),
        )
        sol = conic.solve(prog)
        bottom = float(np.linalg.eigvalsh(h)[0])
        assert sol.status == "optimal"
        assert sol.primal_value == pytest.approx(bottom, abs=1e-7)
        assert sol.equality_residual <= 1e-7
        rep = conic.verify_certificate(prog, sol)
        assert rep.clean, rep.discrepancies


def test_verify_certificate_flags_tampering():
    gen = make_generator(35)
    h = random_hermitian(gen, 4)
    prog = eigenvalue_program(h)
    sol = conic.solve(prog)
    rep = conic.verify_certificate(prog, sol)
    assert rep.clean, rep.discrepancies
    assert rep.stationarity_residual <= 1e-6
    assert rep.dual_psd_residual <= 1e-8

    bad = dataclasses.replace(sol, y=sol.y - 1e-2)
    rep_bad = conic.verify_certificate(prog, bad)
    assert not rep_bad.clean
    assert rep_bad.discrepancies
    # shrinking y below the top eigenvalue breaks primal feasibility
    assert any("PSD" in msg or "primal" in msg for msg in rep_bad.discrepancies)

    lied = dataclasses.replace(sol, primal_value=sol.primal_value + 1.0)
    rep_lied = conic.verify_certificate(prog, lied)
    assert not rep_lied.clean


def test_infeasible_program_detected():
    # P >= 0 and -I - P >= 0 cannot both hold.
    d = 2
    m = d * d
    b1 = conic.BlockBuilder(d, m)
    b1.add_hermitian_var(0, d, 0, 1.0)
    b2 = conic.BlockBuilder(d, m)
    b2.add_constant(-np.eye(d))
    b2.add_hermitian_var(0, d, 0, -1.0)
    prog = conic.ConicProgram(objective=np.zeros(m), psd_blocks=[b1.build(), b2.build()])
    sol = conic.solve(prog, max_iter=20_000)
    assert sol.status == "infeasible_suspected"
    assert "infeasibility" in sol.message


def test_unbounded_program_reported_as_suspected():
    builder = conic.BlockBuilder(1, 1)
    builder.add_scalar_identity(0, 1, 0, 1.0)
    prog = conic.ConicProgram(objective=np.array([-1.0]), psd_blocks=[builder.build()])
    sol = conic.solve(prog, max_iter=20_000)
    assert sol.status == "infeasible_suspected"
    assert "unbounded" in sol.message


def test_solver_determinism():
    gen = make_generator(36)
    h = random_hermitian(gen, 5)
    prog = eigenvalue_program(h)
    s1 = conic.solve(prog)
    s2 = conic.solve(prog)
    assert s1.iterations == s2.iterations
    assert np.array_equal(s1.y, s2.y)
    assert s1.primal_value == s2.primal_value
    assert s1.dual_value == s2.dual_value


def test_dump_diagnostics(tmp_path):
    gen = make_generator(37)
    prog = eigenvalue_program(random_hermitian(gen, 3))
    sol = conic.solve(prog)
    out = tmp_path / "diag.txt"
    conic.dump_diagnostics(prog, sol, str(out))
    text = out.read_text()
    assert "status: optimal" in text
    assert "block_0_min_eig" in text
