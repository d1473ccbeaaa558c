import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.linalg import expm

from stator_gates.linalg import (
    EPS_ALG,
    PauliAxis,
    StateVector,
    binary_entropy,
    distance_up_to_phase,
    pauli_axis_matrix,
    reduced_density_matrix,
    von_neumann_entropy,
)
from stator_gates.protocol import (
    GateSpec,
    ResourceSpec,
    branch_operator_closed_form,
    branch_probabilities,
    build_resource_state,
    deterministic_config,
    fpt_config,
    optimal_alpha,
    resource_entanglement,
    run_general_protocol,
    smallxi_config,
    smallxi_entanglement,
    smallxi_success_closed,
    target_gate,
)
from stator_gates.rng import SplitMix64
from stator_gates.stator import BASIS_NAMES, MeasurementAngles

AB = ("A", "B")


def random_spec(r):
    raw = np.abs([r.normal_pair()[0] for _ in range(4)])
    return ResourceSpec(tuple(raw / np.linalg.norm(raw)))


def random_draw(r):
    spec = random_spec(r)
    angles = MeasurementAngles(r.uniform(0, np.pi / 2), r.uniform(0, np.pi / 2))
    g = GateSpec(r.uniform(0, np.pi / 4), r.random_axis(), r.random_axis())
    return spec, angles, g


def reconstruct_operators(spec, angles, g):
    """Process reconstruction: run each computational input, stack the columns.

    Returns {basis outcome: [operator per σx outcome]}.
    """
    cols = {}
    for j in range(4):
        rep = run_general_protocol(spec, angles, g, StateVector.basis(AB, j))
        for br in rep.branches:
            key = br.path[:-1]
            col = np.zeros(4, dtype=complex) if br.post_state is None else np.sqrt(br.probability) * br.post_state.amplitudes
            cols.setdefault(key, [np.zeros(4, dtype=complex)] * 4)
            cols[key] = cols[key][:j] + [col] + cols[key][j + 1 :]
    out = {}
    for key, c in cols.items():
        basis = dict(key)["basis"]
        out.setdefault(basis, []).append(np.column_stack(c))
    return out


class TestResourceState:
    def test_product(self):
        psi = build_resource_state(ResourceSpec((1, 0, 0, 0)))
        assert psi.amplitudes[0] == 1
        assert resource_entanglement(ResourceSpec((1, 0, 0, 0))) == 0

    def test_uniform_is_one_ebit(self):
        psi = build_resource_state(ResourceSpec((0.5,) * 4))
        assert von_neumann_entropy(reduced_density_matrix(psi, ["a"])) == pytest.approx(1, abs=1e-12)

    def test_support(self, rng):
        psi = build_resource_state(random_spec(rng))
        support = set(np.nonzero(np.abs(psi.amplitudes) > 0)[0])
        assert support <= {0b000, 0b001, 0b110, 0b111}

    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            ResourceSpec((1, 1, 0, 0))

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            ResourceSpec((-1, 0, 0, 0))

    def test_entanglement_matches_partial_trace(self):
        r = SplitMix64(11)
        for _ in range(50):
            spec = random_spec(r)
            rho = reduced_density_matrix(build_resource_state(spec), ["a"])
            assert resource_entanglement(spec) == pytest.approx(von_neumann_entropy(rho), abs=1e-12)


class TestTargetGate:
    def test_zero_is_identity(self):
        np.testing.assert_allclose(target_gate(GateSpec(0.0)), np.eye(4))

    def test_quarter_pi_z(self):
        w = np.exp(1j * np.pi / 4)
        np.testing.assert_allclose(target_gate(GateSpec(np.pi / 4)), np.diag([w, w.conj(), w.conj(), w]), atol=1e-15)

    def test_against_expm(self, rng):
        for _ in range(20):
            g = GateSpec(rng.uniform(0, np.pi / 4), rng.random_axis(), rng.random_axis())
            H = np.kron(pauli_axis_matrix(g.axis_a), pauli_axis_matrix(g.axis_b))
            U = target_gate(g)
            np.testing.assert_allclose(U, expm(1j * g.xi * H), atol=1e-12)
            np.testing.assert_allclose(U.conj().T @ U, np.eye(4), atol=1e-12)

    def test_range(self):
        with pytest.raises(ValueError):
            GateSpec(1.0)


class TestBranchProbabilities:
    def test_product_state(self):
        p = branch_probabilities(ResourceSpec((1, 0, 0, 0)), MeasurementAngles(0, 0.4))
        assert p["B00"] == 1

    def test_uniform(self):
        p = branch_probabilities(ResourceSpec((0.5,) * 4), MeasurementAngles(0.3, 1.1))
        assert all(v == pytest.approx(0.25, abs=1e-15) for v in p.values())

    def test_uniform_simulated(self, rng):
        rep = run_general_protocol(ResourceSpec((0.5,) * 4), MeasurementAngles(np.pi / 4, np.pi / 4),
                                   GateSpec(0.3), rng.random_state(AB))
        for v in rep.basis_probabilities().values():
            assert v == pytest.approx(0.25, abs=1e-12)

    def test_matches_simulation(self):
        r = SplitMix64(2024)
        worst = 0.0
        for _ in range(500):
            spec, angles, g = random_draw(r)
            rep = run_general_protocol(spec, angles, g, r.random_state(AB))
            closed = branch_probabilities(spec, angles)
            sim = rep.basis_probabilities()
            worst = max(worst, max(abs(closed[k] - sim[k]) for k in BASIS_NAMES))
            assert abs(rep.total_probability - 1) <= 1e-12
        assert worst <= 1e-12


class TestBranchOperators:
    def test_single_term_limit(self):
        spec = ResourceSpec((np.sqrt(0.5), np.sqrt(0.5), 0, 0))
        K = branch_operator_closed_form(spec, MeasurementAngles(0.4, 0.2), GateSpec(0.3), "B00")
        np.testing.assert_allclose(K, np.sqrt(0.5) * np.cos(0.4) * np.eye(4))

    def test_deterministic_all_proportional(self, rng):
        g = GateSpec(0.37, rng.random_axis(), rng.random_axis())
        spec, angles = deterministic_config(g)
        for w in BASIS_NAMES:
            K = branch_operator_closed_form(spec, angles, g, w)
            assert distance_up_to_phase(K, target_gate(g)) <= 1e-12

    def test_bad_outcome(self):
        with pytest.raises(ValueError):
            branch_operator_closed_form(ResourceSpec((0.5,) * 4), MeasurementAngles(0, 0), GateSpec(0), "B22")

    @pytest.mark.parametrize("seed", range(8))
    def test_matches_process_reconstruction(self, seed):
        spec, angles, g = random_draw(SplitMix64(seed))
        recon = reconstruct_operators(spec, angles, g)
        for w in BASIS_NAMES:
            closed = branch_operator_closed_form(spec, angles, g, w)
            if np.linalg.norm(closed) < 1e-7:
                assert w not in recon or all(np.linalg.norm(K) < 1e-7 for K in recon[w])
                continue
            for K in recon[w]:
                # each σx outcome carries half the weight
                assert np.linalg.norm(K) * np.sqrt(2) == pytest.approx(np.linalg.norm(closed), abs=1e-10)
                assert distance_up_to_phase(K, closed) <= 1e-10

    def test_report_operator_matches_closed_form(self):
        r = SplitMix64(99)
        for _ in range(500):
            spec, angles, g = random_draw(r)
            rep = run_general_protocol(spec, angles, g, r.random_state(AB))
            for br in rep.branches:
                closed = branch_operator_closed_form(spec, angles, g, br.outcome("basis"))
                K = br.conditional_operator
                assert np.linalg.norm(K) * np.sqrt(2) == pytest.approx(np.linalg.norm(closed), abs=1e-10)
                assert distance_up_to_phase(K, closed) <= 1e-10


class TestDeterministic:
    @pytest.mark.parametrize("xi", [0.0, 0.1, 0.5, np.pi / 4])
    def test_unit_success(self, xi, rng):
        g = GateSpec(xi, rng.random_axis(), rng.random_axis())
        spec, angles = deterministic_config(g)
        rep = run_general_protocol(spec, angles, g, rng.random_state(AB))
        assert rep.F == pytest.approx(1, abs=1e-12)
        assert rep.E == pytest.approx(1, abs=1e-12)
        assert rep.classical_bits == 2
        assert len(rep.branches) == 8

    def test_zero_xi_identity(self, rng):
        g = GateSpec(0.0)
        spec, angles = deterministic_config(g)
        rep = run_general_protocol(spec, angles, g, rng.random_state(AB))
        for br in rep.branches:
            assert distance_up_to_phase(br.conditional_operator, np.eye(4)) <= 1e-12

    def test_post_states(self, rng):
        g = GateSpec(0.6, rng.random_axis(), rng.random_axis())
        target = rng.random_state(AB)
        spec, angles = deterministic_config(g)
        expect = target_gate(g) @ target.amplitudes
        for br in run_general_protocol(spec, angles, g, target).branches:
            assert abs(np.vdot(expect, br.post_state.amplitudes)) >= 1 - 1e-10


class TestFPT:
    def test_two_branch_case(self, rng):
        xi = 0.42
        g = GateSpec(xi, rng.random_axis(), rng.random_axis())
        spec = ResourceSpec((np.sqrt(0.5), 0, 0, np.sqrt(0.5)))
        rep = run_general_protocol(spec, MeasurementAngles(xi, 0.3), g, rng.random_state(AB))
        assert {br.outcome("basis") for br in rep.branches} == {"B00", "B01"}
        assert all(br.success for br in rep.branches)

    def test_maximal(self, rng):
        g = GateSpec(0.5)
        spec, angles = fpt_config(g, 1.0)
        assert spec.lam[0] == pytest.approx(1 / np.sqrt(2))
        rep = run_general_protocol(spec, angles, g, rng.random_state(AB))
        assert rep.F == pytest.approx(1, abs=1e-12)
        assert rep.E == pytest.approx(1, abs=1e-12)
        assert rep.probability_where(basis="B10") + rep.probability_where(basis="B11") <= 1e-14

    def test_reference_point(self):
        spec, _ = fpt_config(GateSpec(0.5), 0.793)
        E = binary_entropy(0.3965)
        assert resource_entanglement(spec) == pytest.approx(E, abs=1e-12)
        assert E == pytest.approx(0.969, abs=0.002)

    def test_point_eight(self, rng):
        g = GateSpec(0.3, rng.random_axis(), rng.random_axis())
        spec, angles = fpt_config(g, 0.8)
        rep = run_general_protocol(spec, angles, g, rng.random_state(AB))
        assert rep.F == pytest.approx(0.8, abs=1e-10)
        assert {br.outcome("basis") for br in rep.branches if br.success} == {"B00", "B01"}

    def test_infeasible(self):
        with pytest.raises(ValueError):
            fpt_config(GateSpec(0.3), 1.2)


class TestSmallXi:
    def test_quarter_pi(self):
        g = GateSpec(np.pi / 4)
        a = optimal_alpha(g)
        assert a == pytest.approx(np.pi / 4)
        assert smallxi_success_closed(g.xi, a) == pytest.approx(0.5)
        assert smallxi_entanglement(g.xi) == pytest.approx(1)

    def test_constraint(self):
        g = GateSpec(0.2)
        spec, angles = smallxi_config(g, 0.6)
        assert np.tan(0.6) * np.tan(angles.delta1) == pytest.approx(np.tan(0.2))

    def test_optimum_and_entanglement(self, rng):
        for xi in np.linspace(0.02, 0.76, 7):
            g = GateSpec(xi, rng.random_axis(), rng.random_axis())
            spec, angles = smallxi_config(g, optimal_alpha(g))
            rep = run_general_protocol(spec, angles, g, rng.random_state(AB))
            assert rep.F == pytest.approx(1 / (1 + np.sin(2 * xi)), abs=1e-10)
            assert rep.E == pytest.approx(smallxi_entanglement(xi), abs=1e-12)
            assert spec.H == pytest.approx(1 / (1 + np.tan(xi)), abs=1e-12)

    def test_grid_argmax(self):
        xi = 0.3
        alphas = np.linspace(0, np.pi / 2, 1002)[1:-1]
        g = GateSpec(xi)
        target = StateVector.basis(AB, 1)
        probs = []
        for a in alphas:
            spec, angles = smallxi_config(g, a)
            probs.append(run_general_protocol(spec, angles, g, target).probability_where(basis="B10"))
        best = alphas[int(np.argmax(probs))]
        assert abs(best - optimal_alpha(g)) <= alphas[1] - alphas[0]

    def test_zero_xi_flagged(self):
        with pytest.raises(ValueError):
            smallxi_config(GateSpec(0.0), 0.3)


class TestInvariants:
    def test_unitary_branches_target_independent(self):
        r = SplitMix64(5)
        spec, angles, g = random_draw(r)
        spec, angles = fpt_config(g, 0.7)
        base = None
        for _ in range(100):
            rep = run_general_protocol(spec, angles, g, r.random_state(AB))
            probs = {br.path: br.probability for br in rep.branches if br.success}
            if base is None:
                base = probs
            assert max(abs(probs[k] - base[k]) for k in base) <= 1e-10

    @given(st.integers(0, 2**32))
    def test_success_post_states(self, seed):
        r = SplitMix64(seed)
        spec, angles, g = random_draw(r)
        target = r.random_state(AB)
        expect = target_gate(g) @ target.amplitudes
        rep = run_general_protocol(spec, angles, g, target)
        assert abs(rep.total_probability - 1) <= 1e-12
        assert rep.F == pytest.approx(sum(b.probability for b in rep.branches if b.success), abs=EPS_ALG)
        for br in rep.branches:
            assert br.success == (br.distance <= 1e-10)
            if br.success and br.post_state is not None:
                assert abs(np.vdot(expect, br.post_state.amplitudes)) >= 1 - 1e-10

    def test_correction_table_target_independent(self, rng):
        spec, angles, g = random_draw(rng)
        paths = {tuple(br.path) for br in run_general_protocol(spec, angles, g, rng.random_state(AB)).branches}
        for j in range(4):
            rep = run_general_protocol(spec, angles, g, StateVector.basis(AB, j))
            assert {tuple(br.path) for br in rep.branches} == paths

    def test_sigma_x_convention(self, rng):
        spec, angles, g = random_draw(rng)
        assert run_general_protocol(spec, angles, g, rng.random_state(AB)).sigma_x_convention == "minus"
