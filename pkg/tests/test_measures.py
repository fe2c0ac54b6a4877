import numpy as np
import pytest

from oracles import wootters_fidelity_form, x_state_concurrence
from qmonogamy.channels import amplitude_damping, apply_local, depolarizing, phase_damping
from qmonogamy.errors import ContractError
from qmonogamy.linalg import kron, partial_trace
from qmonogamy.measures import (
    concurrence_2q,
    linear_entropy,
    negativity,
    pure_negativity_equals_concurrence_check,
    pure_sq_concurrence,
)
from qmonogamy.states import basis_state, ghz, projector, random_density, random_pure, random_unitary, w_state

PHI_PLUS = (basis_state("00") + basis_state("11")) / np.sqrt(2)


def test_concurrence_examples():
    assert concurrence_2q(projector(PHI_PLUS)) == pytest.approx(1.0, abs=1e-12)
    assert concurrence_2q(projector(basis_state("00"))) == pytest.approx(0.0, abs=1e-12)
    w_ab = partial_trace(projector(w_state()), (2, 2, 2), (0, 1))
    # X-state closed form gives the frozen value 2/3
    assert x_state_concurrence(w_ab) == pytest.approx(2 / 3, abs=1e-15)
    assert concurrence_2q(w_ab) == pytest.approx(2 / 3, abs=1e-9)


def test_concurrence_matches_oracle(rng):
    for _ in range(50):
        rho = random_density(4, rng, rank=int(rng.integers(1, 5)))
        assert concurrence_2q(rho) == pytest.approx(wootters_fidelity_form(rho), abs=1e-7)


@pytest.mark.parametrize("p", [0.1, 0.4, 0.8])
@pytest.mark.parametrize("pair", [(0, 1), (0, 2), (1, 2)])
def test_concurrence_damped_w_marginals(p, pair):
    rho = apply_local([amplitude_damping(p)] * 3, projector(w_state(1, 2, 3)))
    rho2 = partial_trace(rho, (2, 2, 2), pair)
    assert concurrence_2q(rho2) == pytest.approx(x_state_concurrence(rho2), abs=1e-9)


def test_concurrence_of_pure_states(rng):
    for _ in range(50):
        psi = random_pure(4, rng)
        rho_a = partial_trace(projector(psi), (2, 2), 0)
        assert concurrence_2q(projector(psi)) == pytest.approx(2 * np.sqrt(np.linalg.det(rho_a).real), abs=1e-7)


def test_concurrence_local_unitary_invariance(rng):
    for _ in range(30):
        rho = random_density(4, rng, rank=2)
        u = kron(random_unitary(2, rng), random_unitary(2, rng))
        assert concurrence_2q(u @ rho @ u.conj().T) == pytest.approx(concurrence_2q(rho), abs=1e-9)


def test_concurrence_rejects_invalid():
    with pytest.raises(ContractError):
        concurrence_2q(np.eye(4))


def test_negativity_examples(rng):
    assert negativity(kron(random_density(2, rng), random_density(4, rng)), 0) == pytest.approx(0, abs=1e-12)
    assert negativity(projector(ghz()), 0) == pytest.approx(1.0, abs=1e-12)
    assert negativity(projector(w_state()), 0) == pytest.approx(2 * np.sqrt(2) / 3, abs=1e-9)
    assert negativity(projector(PHI_PLUS), 0, (2, 2)) == pytest.approx(1.0, abs=1e-12)


def test_negativity_invariance_and_monotonicity(rng):
    chans = [amplitude_damping, phase_damping, depolarizing]
    for _ in range(30):
        rho = random_density(8, rng, rank=2)
        u = kron(random_unitary(2, rng), random_unitary(2, rng), random_unitary(2, rng))
        n0 = negativity(rho, 0)
        assert negativity(u @ rho @ u.conj().T, 0) == pytest.approx(n0, abs=1e-9)
        local = [chans[i](p) for i, p in zip(rng.integers(0, 3, 3), rng.uniform(0, 1, 3))]
        assert negativity(apply_local(local, rho), 0) <= n0 + 1e-9


def test_linear_entropy_examples():
    assert linear_entropy(np.diag([1.0, 0.0])) == pytest.approx(0.0)
    assert linear_entropy(np.eye(2) / 2) == pytest.approx(1.0)
    assert linear_entropy(np.diag([2 / 3, 1 / 3])) == pytest.approx(8 / 9)


@pytest.mark.parametrize("focus", [0, 1, 2])
def test_pure_sq_concurrence_examples(focus):
    assert pure_sq_concurrence(ghz(), focus) == pytest.approx(1.0, abs=1e-9)
    assert pure_sq_concurrence(basis_state("000"), focus) == pytest.approx(0.0, abs=1e-15)
    assert pure_sq_concurrence(w_state(), focus) == pytest.approx(8 / 9, abs=1e-12)


def test_pure_sq_concurrence_is_linear_entropy(rng):
    for _ in range(50):
        psi = random_pure(8, rng)
        for f in range(3):
            rho_f = partial_trace(projector(psi), (2, 2, 2), f)
            assert pure_sq_concurrence(psi, f) == pytest.approx(linear_entropy(rho_f), abs=1e-12)


def test_pure_sq_concurrence_needs_normalized():
    with pytest.raises(ContractError):
        pure_sq_concurrence(2 * ghz())


def test_negativity_concurrence_equivalence(rng):
    assert pure_negativity_equals_concurrence_check(ghz())
    assert pure_negativity_equals_concurrence_check(w_state(), 0)
    for _ in range(200):
        psi = random_pure(8, rng)
        for f in range(3):
            assert pure_negativity_equals_concurrence_check(psi, f)


def test_ckw_for_pure_states(rng):
    for _ in range(1000):
        psi = random_pure(8, rng)
        rho = projector(psi)
        pair = {k: concurrence_2q(partial_trace(rho, (2, 2, 2), k)) ** 2 for k in [(0, 1), (0, 2), (1, 2)]}
        for f in range(3):
            others = [k for k in pair if f in k]
            assert pure_sq_concurrence(psi, f) >= sum(pair[k] for k in others) - 1e-9
