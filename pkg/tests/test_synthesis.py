import numpy as np
import pytest
import scipy.linalg as sla

from degsyn import (
    InvalidInputError,
    PreconditionViolationError,
    StateSpace,
    SynthesisSpec,
    assemble_closed_loop,
    build_h2_lmi,
    build_hinf_lmi,
    build_lmi,
    h2_norm,
    hinf_norm,
    solve,
    synthesize,
    validate,
)
from degsyn.synthesis import MatrixInequality, _NumpyOps

from conftest import random_stable_plant


def _random_values(problem, rng):
    vals = {}
    for b in problem.blocks:
        if b.shape == ():
            vals[b.name] = float(rng.uniform(0.1, 2.0))
        elif b.symmetric:
            R = rng.standard_normal(b.shape)
            vals[b.name] = R + R.T
        else:
            vals[b.name] = rng.standard_normal(b.shape)
    vals["omega_c"] = np.abs(vals["omega_c"]) + 0.1
    vals["kappa_a"] = np.abs(vals["kappa_a"]) + 0.1
    return vals


class TestSpecValidation:
    def test_rejects_bad_gamma(self):
        with pytest.raises(InvalidInputError):
            SynthesisSpec(norm_kind="hinf", gamma=0.0)

    def test_rejects_all_zero_weights(self):
        with pytest.raises(InvalidInputError):
            SynthesisSpec(norm_kind="h2", gamma=1.0, lambda_a=0, lambda_wc=0, lambda_xf=0)

    def test_rejects_negative_weight(self):
        with pytest.raises(InvalidInputError):
            SynthesisSpec(norm_kind="h2", gamma=1.0, lambda_a=-1)

    def test_rejects_unknown_norm(self):
        with pytest.raises(InvalidInputError):
            SynthesisSpec(norm_kind="hinfinity", gamma=1.0)


class TestProblemStructure:
    def test_hinf_block_dimensions_f16(self, f16):
        spec = SynthesisSpec(norm_kind="hinf", gamma=0.5, Wd=0.01)
        problem = build_hinf_lmi(f16, spec)
        dims = {mi.name: mi.dim for mi in problem.matrix_ineqs}
        assert dims["bounded-real"] == 13  # (nx+nu) + (nd+nu) + nz
        assert dims["dc-gain-schur"] == 7  # nx + nu
        assert problem.block("Q").shape == (4, 4)  # forced nx-by-nx by the Schur block

    def test_h2_block_dimensions_f16(self, f16):
        spec = SynthesisSpec(norm_kind="h2", gamma=0.5, Wd=0.01)
        problem = build_h2_lmi(f16, spec)
        dims = {mi.name: mi.dim for mi in problem.matrix_ineqs}
        assert dims["h2-lyapunov"] == 11  # (nx+nu) + (nd+nu)
        assert dims["output-schur"] == 9  # nz + nx + nu (printed redundant block kept)
        assert problem.block("Q2").shape == (4, 4)

    def test_exact_symmetry_by_construction(self, f16):
        rng = np.random.default_rng(21)
        for spec in (
            SynthesisSpec(norm_kind="hinf", gamma=0.5, Wd=0.01),
            SynthesisSpec(norm_kind="h2", gamma=0.5, Wd=0.01),
        ):
            problem = build_lmi(f16, spec)
            vals = _random_values(problem, rng)
            for mi in problem.matrix_ineqs:
                M = problem.evaluate_matrix(mi, vals)
                assert np.array_equal(M, M.T)  # exact, not tolerance-based

    def test_zero_v_reduces_to_pure_damping_block(self, f16):
        # at V = 0 the (1,1) block is [[YA + A'Y, YBu], [Bu'Y, -2 diag(wc)]]
        spec = SynthesisSpec(norm_kind="hinf", gamma=0.5, Wd=0.01)
        problem = build_hinf_lmi(f16, spec)
        rng = np.random.default_rng(4)
        vals = _random_values(problem, rng)
        vals["V"] = np.zeros((3, 4))
        M = problem.evaluate_matrix(problem.matrix_ineqs[0], vals)
        Y, wc = vals["Y"], vals["omega_c"]
        top = M[:7, :7]
        expected = np.block([
            [Y @ f16.A + f16.A.T @ Y, Y @ f16.Bu],
            [f16.Bu.T @ Y, -2.0 * np.diag(wc)],
        ])
        assert np.allclose(top, expected, atol=1e-12)

    def test_solver_form_is_congruent_to_paper_form(self, f16):
        # scaled form = T M T with T = blkdiag(I, Wd, I, I); same feasible set
        wd = 0.01
        for kind in ("hinf", "h2"):
            spec = SynthesisSpec(norm_kind=kind, gamma=0.5, Wd=wd)
            problem = build_lmi(f16, spec)
            rng = np.random.default_rng(8)
            vals = _random_values(problem, rng)
            main = problem.matrix_ineqs[0]
            M_paper = problem.evaluate_matrix(main, vals, scaled=False)
            M_scaled = problem.evaluate_matrix(main, vals, scaled=True)
            T = np.eye(main.dim)
            T[7, 7] = wd  # the dbar row sits right after the nx+nu states
            assert np.allclose(M_scaled, T @ M_paper @ T, rtol=1e-12, atol=1e-12)

    def test_h2_output_schur_redundant_block(self, f16_h2, f16):
        # dropping the identity block leaves the Schur form of Q1 >= Cz Y^-1 Cz'
        spec, result = f16_h2
        Q1, Y = result.Q_blocks["Q1"], result.Y
        reduced = np.block([[Q1, f16.Cz], [f16.Cz.T, Y]])
        assert np.linalg.eigvalsh(reduced).min() >= -1e-8
        schur = Q1 - f16.Cz @ np.linalg.solve(Y, f16.Cz.T)
        assert np.linalg.eigvalsh(schur).min() >= -1e-8

    def test_dump_lists_variables_and_constraints(self, f16):
        spec = SynthesisSpec(norm_kind="hinf", gamma=0.5, Wd=0.01)
        text = build_hinf_lmi(f16, spec).dump()
        for token in ("Y", "omega_c", "kappa_a", "gamma_xf", "bounded-real", "13x13", "offset"):
            assert token in text


class TestBuildPreconditions:
    def test_unstable_plant_rejected(self):
        sys = StateSpace(A=[[1.0]], Bu=[[1.0]], Bd=[[1.0]], Cz=[[1.0]], Dd=[[0.0]])
        with pytest.raises(PreconditionViolationError):
            build_hinf_lmi(sys, SynthesisSpec(norm_kind="hinf", gamma=1.0))

    def test_nonzero_dd_rejected(self):
        sys = StateSpace(A=[[-1.0]], Bu=[[1.0]], Bd=[[1.0]], Cz=[[1.0]], Dd=[[0.5]])
        with pytest.raises(InvalidInputError):
            build_h2_lmi(sys, SynthesisSpec(norm_kind="h2", gamma=1.0))
        with pytest.raises(InvalidInputError):
            build_hinf_lmi(sys, SynthesisSpec(norm_kind="hinf", gamma=1.0))

    def test_norm_kind_mismatch(self, f16):
        with pytest.raises(InvalidInputError):
            build_hinf_lmi(f16, SynthesisSpec(norm_kind="h2", gamma=1.0, Wd=0.01))


class TestSolveF16:
    def test_hinf_feasible_and_certified(self, f16_hinf, f16):
        spec, result = f16_hinf
        assert result.status == "optimal"
        assert result.verification.kind == "hinf"
        assert result.verification.value <= 0.5 * (1 + 1e-4)
        assert validate(result, f16, spec).passed

    def test_h2_feasible_and_certified(self, f16_h2, f16):
        spec, result = f16_h2
        assert result.status == "optimal"
        assert result.verification.value ** 2 <= 0.5 * (1 + 1e-4)
        assert validate(result, f16, spec).passed

    def test_recovery_identity(self, f16_hinf, f16_h2):
        for _, result in (f16_hinf, f16_h2):
            lhs = np.diag(result.deg.omega_c) @ result.K
            rel = np.max(np.abs(lhs - result.V)) / np.max(np.abs(result.V))
            assert rel < 1e-9

    def test_gain_recovery_formula(self):
        # wc* = [2, 4], V* = [[2, 0], [0, 8]] -> K = [[1, 0], [0, 2]]
        wc = np.array([2.0, 4.0])
        V = np.array([[2.0, 0.0], [0.0, 8.0]])
        K = V / wc[:, None]
        assert np.array_equal(K, [[1.0, 0.0], [0.0, 2.0]])

    def test_infeasible_tiny_gamma(self, f16):
        spec = SynthesisSpec(norm_kind="hinf", gamma=1e-9, Wd=0.01)
        result = synthesize(f16, spec)
        assert result.status == "infeasible"
        assert result.K is None
        assert "certificate" in result.diagnostics

    def test_h2_norm_convention(self, f16):
        # tr(Q1) <= gamma^2 bounds the norm itself
        spec = SynthesisSpec(norm_kind="h2", gamma=0.71, Wd=0.01, h2_bound_convention="norm")
        result = synthesize(f16, spec)
        assert result.status == "optimal"
        assert result.verification.value <= 0.71 * (1 + 1e-4)
        assert validate(result, f16, spec).passed

    def test_main_lmi_residual_at_optimum(self, f16_hinf, f16):
        # with (Y, V, wc, ka) fixed at the optimum, the bounded-real LMI holds
        spec, result = f16_hinf
        problem = build_hinf_lmi(f16, spec)
        vals = dict(result.Q_blocks)
        vals.update(Y=result.Y, V=result.V, omega_c=result.deg.omega_c,
                    kappa_a=result.deg.kappa_a, gamma_xf=result.deg.gamma_xf)
        M = problem.evaluate_matrix(problem.matrix_ineqs[0], vals)
        assert np.linalg.eigvalsh(M).max() <= spec.solver_tol


class TestSolveScalarPlant:
    def test_xf_weight_only(self):
        # lambda_a = lambda_wc = 0: solver pushes gamma_xf to the tr(V'V)
        # of a small-gain solution; the norm bound must still hold
        sys = StateSpace(A=[[-1.0]], Bu=[[1.0]], Bd=[[1.0]], Cz=[[1.0]], Dd=[[0.0]])
        spec = SynthesisSpec(norm_kind="hinf", gamma=1.5, lambda_a=0.0, lambda_wc=0.0,
                             lambda_xf=1.0, Wd=1.0)
        result = synthesize(sys, spec)
        assert result.status == "optimal"
        loop = assemble_closed_loop(sys, result.K, result.deg, 1.0)
        assert hinf_norm(loop.Acl, loop.Bcl, loop.Ccl).value <= 1.5 * (1 + 1e-4)
        trvv = float(np.trace(result.V.T @ result.V))
        assert trvv <= result.deg.gamma_xf + 1e-6


class TestValidate:
    def test_requires_optimal(self, f16):
        spec = SynthesisSpec(norm_kind="hinf", gamma=1e-9, Wd=0.01)
        result = synthesize(f16, spec)
        with pytest.raises(PreconditionViolationError):
            validate(result, f16, spec)

    def test_tampered_gain_fails(self, f16_hinf, f16):
        import dataclasses

        spec, result = f16_hinf
        K_bad = result.K.copy()
        K_bad[0, 0] += 10.0
        tampered = dataclasses.replace(result, K=K_bad)
        report = validate(tampered, f16, spec)
        assert not report.passed
        assert any(not c.passed for c in report.checks)

    def test_report_table_format(self, f16_hinf, f16):
        spec, result = f16_hinf
        table = validate(result, f16, spec).format_table()
        assert "PASS" in table and "hinf-bound" in table


class TestRandomFamily:
    """Certificate soundness and monotonicity over random stable plants."""

    def _feasible_gamma(self, sys, kind):
        if kind == "hinf":
            return 2.0 * hinf_norm(sys.A, sys.Bd, sys.Cz).value + 0.1
        return 2.0 * h2_norm(sys.A, sys.Bd, sys.Cz).value ** 2 + 0.1

    @pytest.mark.parametrize("kind", ["hinf", "h2"])
    def test_certificate_soundness(self, kind):
        rng = np.random.default_rng(314)
        solved = 0
        for _ in range(8):
            sys = random_stable_plant(rng, nx=int(rng.integers(2, 7)),
                                      nu=int(rng.integers(1, 4)), nd=int(rng.integers(1, 3)))
            gamma = self._feasible_gamma(sys, kind)
            spec = SynthesisSpec(norm_kind=kind, gamma=gamma, Wd=1.0)
            result = synthesize(sys, spec)
            if result.status != "optimal":
                continue
            solved += 1
            loop = assemble_closed_loop(sys, result.K, result.deg, 1.0)
            if kind == "hinf":
                achieved = hinf_norm(loop.Acl, loop.Bcl, loop.Ccl).value
                assert achieved <= gamma * (1 + 1e-4)
            else:
                achieved = h2_norm(loop.Acl, loop.Bcl, loop.Ccl).value
                assert achieved**2 <= gamma * (1 + 1e-4)
            assert validate(result, sys, spec).passed
        assert solved >= 6  # the family must mostly solve, not vacuously pass

    def test_relaxing_gamma_never_increases_objective(self):
        rng = np.random.default_rng(1234)
        checked = 0
        for _ in range(6):
            sys = random_stable_plant(rng, nx=int(rng.integers(2, 5)), nu=2, nd=1, nz=1)
            gamma = self._feasible_gamma(sys, "hinf")
            tight = synthesize(sys, SynthesisSpec(norm_kind="hinf", gamma=gamma, Wd=1.0))
            loose = synthesize(sys, SynthesisSpec(norm_kind="hinf", gamma=2 * gamma, Wd=1.0))
            if tight.status != "optimal" or loose.status != "optimal":
                continue
            checked += 1
            assert loose.objective <= tight.objective + 1e-6
        assert checked >= 4
