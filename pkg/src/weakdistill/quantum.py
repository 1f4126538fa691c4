"""Minimal dense quantum backend and the three benchmark scenarios.

Statevectors and small density matrices up to 12 qubits, enough to compute
exact computational-basis distributions for:

* error mitigation of local depolarizing noise on a random state,
* entanglement distillation from isotropic states,
* a T-doped IQP circuit run with dephased-T-state injection.

Each scenario returns a two-term QuasiDecomposition whose target equals
the ideal distribution exactly (up to float noise).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .distributions import DiscreteDistribution, Rng
from .quasiprob import QuasiDecomposition, combine_signed_terms, target

MAX_DENSE_BITS = 12


@dataclass(frozen=True)
class StateVector:
    amplitudes: np.ndarray
    n_bits: int

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.size != 1 << self.n_bits:
            raise ValueError("amplitude length does not match n_bits")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"state norm {norm} deviates from 1")
        amps = amps.copy()
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    def born_distribution(self) -> DiscreteDistribution:
        return DiscreteDistribution(np.abs(self.amplitudes) ** 2, self.n_bits)


@dataclass(frozen=True)
class PureMixture:
    """A mixed state given as an ensemble of pure components."""

    components: list[tuple[float, StateVector]]

    def __post_init__(self):
        if not self.components:
            raise ValueError("mixture needs at least one component")
        total = sum(w for w, _ in self.components)
        if abs(total - 1.0) > 1e-9 or any(w < 0 for w, _ in self.components):
            raise ValueError("weights must be nonnegative and sum to 1")


def measurement_distribution(m: PureMixture) -> DiscreteDistribution:
    """Exact Born-rule distribution of the ensemble."""
    n_bits = m.components[0][1].n_bits
    if n_bits > MAX_DENSE_BITS:
        raise ValueError("dimension exceeds dense desk scale")
    probs = np.zeros(1 << n_bits)
    for weight, state in m.components:
        if state.n_bits != n_bits:
            raise ValueError("mixture component dimension mismatch")
        probs += weight * np.abs(state.amplitudes) ** 2
    return DiscreteDistribution(probs, n_bits)


def haar_random_state(n_bits: int, rng: Rng) -> StateVector:
    """Haar-random pure state: normalized complex-Gaussian amplitudes."""
    gen = rng.generator
    size = 1 << n_bits
    amps = gen.standard_normal(size) + 1j * gen.standard_normal(size)
    amps /= np.linalg.norm(amps)
    return StateVector(amps, n_bits)


# --- density-matrix helpers (small systems only) ---


def density_matrix(state: StateVector) -> np.ndarray:
    return np.outer(state.amplitudes, state.amplitudes.conj())


def _as_qubit_tensor(dm: np.ndarray, n: int) -> np.ndarray:
    return dm.reshape([2] * (2 * n))


def depolarize_qubit(dm: np.ndarray, qubit: int, p: float, n: int) -> np.ndarray:
    """Local depolarizing channel E(rho) = (1-p) rho + p Tr_q(rho) (x) I/2."""
    return (1.0 - p) * dm + p * replace_qubit_mixed(dm, qubit, n)


def replace_qubit_mixed(dm: np.ndarray, qubit: int, n: int) -> np.ndarray:
    """Trace out one qubit and reinsert it maximally mixed."""
    t = _as_qubit_tensor(dm, n)
    reduced = np.trace(t, axis1=qubit, axis2=n + qubit)
    # Reinsert I/2 at the traced position.
    expanded = np.tensordot(np.eye(2) / 2.0, reduced, axes=0)
    # expanded axes: (row_q, col_q, rows without q, cols without q)
    row_axes = list(range(2, 2 + (n - 1)))
    col_axes = list(range(2 + (n - 1), 2 + 2 * (n - 1)))
    order = []
    for i in range(n):
        if i == qubit:
            order.append(0)
        else:
            order.append(row_axes.pop(0))
    for i in range(n):
        if i == qubit:
            order.append(1)
        else:
            order.append(col_axes.pop(0))
    return np.transpose(expanded, order).reshape(1 << n, 1 << n)


def diagonal_distribution(dm: np.ndarray, n_bits: int) -> DiscreteDistribution:
    return DiscreteDistribution(np.real(np.diag(dm)), n_bits)


# --- scenario (a): probabilistic error cancellation of depolarizing noise ---


def scenario_depolarizing(n: int, p: float, rng: Rng) -> QuasiDecomposition:
    """Inverse of per-qubit depolarizing noise on a random n-qubit state.

    The device hands out the noisy state sigma = E(rho); applying the
    per-qubit inverse (1/(1-p)) Id - (p/(1-p)) D_i and expanding over all
    qubits gives 2**n signed terms D_A(sigma), one per qubit subset A,
    which are regrouped into two states. The per-qubit factors act on one
    shared entangled state, so the expansion runs on global distributions
    rather than disjoint tensor blocks; the grouping rule is the same.
    """
    if not 0 < p < 1:
        raise ValueError("p must lie in (0, 1)")
    if n > 6:
        raise ValueError("depolarizing scenario capped at 6 qubits")
    ideal = haar_random_state(n, rng)
    noisy = density_matrix(ideal)
    for qubit in range(n):
        noisy = depolarize_qubit(noisy, qubit, p, n)

    a = 1.0 / (1.0 - p)
    b = p / (1.0 - p)
    terms: list[tuple[float, DiscreteDistribution]] = []
    for subset in range(1 << n):
        dm = noisy
        weight = 1.0
        for qubit in range(n):
            if subset >> qubit & 1:
                dm = replace_qubit_mixed(dm, qubit, n)
                weight *= -b
            else:
                weight *= a
        terms.append((weight, diagonal_distribution(dm, n)))
    combined = combine_signed_terms(terms)

    ideal_probs = ideal.born_distribution().probs
    drift = np.abs(target(combined).values - ideal_probs).max()
    if drift > 1e-9:
        raise AssertionError(f"decomposition target drifted by {drift}")
    return combined


# --- scenario (b): entanglement distillation from isotropic states ---


def bell_projector_diagonal(n_pairs: int) -> np.ndarray:
    """<x| Phi^(x n) |x> for all 2n-bit outcomes, in closed form.

    A Bell pair contributes 1/2 on equal bit pairs and 0 otherwise, so the
    diagonal is 2**-n on outcomes whose every pair agrees.
    """
    size = 1 << (2 * n_pairs)
    diag = np.zeros(size)
    for x in range(size):
        ok = all((x >> (2 * k) & 1) == (x >> (2 * k + 1) & 1) for k in range(n_pairs))
        if ok:
            diag[x] = 2.0 ** (-n_pairs)
    return diag


def scenario_isotropic(n_pairs: int, p: float) -> QuasiDecomposition:
    """Bell pairs from isotropic states: Phi^(x n) = c+ rho_p - c- (I-Phi)/(d-1)."""
    if not 0 < p < 1:
        raise ValueError("p must lie in (0, 1)")
    n_bits = 2 * n_pairs
    if n_bits > MAX_DENSE_BITS:
        raise ValueError("isotropic scenario capped at 12 qubits")
    dim = 1 << n_bits
    phi = bell_projector_diagonal(n_pairs)
    complement = (1.0 - phi) / (dim - 1)
    sigma_plus = DiscreteDistribution((1.0 - p) * phi + p * complement, n_bits)
    sigma_minus = DiscreteDistribution(complement, n_bits)
    c_plus = 1.0 / (1.0 - p)
    c_minus = p / (1.0 - p)
    return QuasiDecomposition(c_plus, c_minus, sigma_plus, sigma_minus)


# --- scenario (c): T-doped IQP circuit via dephased-T-state injection ---


@dataclass(frozen=True)
class IqpCircuit:
    """H^(x n) . diagonal . H^(x n) circuit; T gates sit in the diagonal.

    cz_pairs lists qubit index pairs; s_powers[j] in {0,1,2,3} applies
    S**k on qubit j; t_positions lists the qubits carrying a T gate.
    """

    n_bits: int
    cz_pairs: tuple[tuple[int, int], ...]
    s_powers: tuple[int, ...]
    t_positions: tuple[int, ...]

    def __post_init__(self):
        if len(self.s_powers) != self.n_bits:
            raise ValueError("one S power per qubit required")
        if len(set(self.t_positions)) != len(self.t_positions):
            raise ValueError("T positions must be distinct")

    def diagonal_phases(self, z_flips: tuple[int, ...]) -> np.ndarray:
        """Phase of each basis state z; z_flips marks T gates degraded to Z.T."""
        if len(z_flips) != len(self.t_positions):
            raise ValueError("one flip flag per T gate required")
        size = 1 << self.n_bits
        z = np.arange(size)
        bits = (z[:, None] >> np.arange(self.n_bits)[None, :]) & 1
        phases = np.ones(size, dtype=complex)
        for a, b in self.cz_pairs:
            phases *= (-1.0) ** (bits[:, a] * bits[:, b])
        for j, k in enumerate(self.s_powers):
            phases *= (1j**k) ** bits[:, j]
        t_phase = np.exp(1j * np.pi / 4.0)
        for g, qubit in enumerate(self.t_positions):
            gate_phase = t_phase * (-1.0 if z_flips[g] else 1.0)
            phases *= np.where(bits[:, qubit] == 1, gate_phase, 1.0)
        return phases

    def output_distribution(self, z_flips: tuple[int, ...]) -> DiscreteDistribution:
        """Born distribution of H^(x n) D H^(x n) |0...0> with given T flips."""
        amps = _walsh_hadamard(self.diagonal_phases(z_flips)) / (1 << self.n_bits)
        return DiscreteDistribution(np.abs(amps) ** 2, self.n_bits)

    def to_dict(self) -> dict:
        return {
            "n_bits": self.n_bits,
            "cz_pairs": [list(pair) for pair in self.cz_pairs],
            "s_powers": list(self.s_powers),
            "t_positions": list(self.t_positions),
        }


def _walsh_hadamard(vec: np.ndarray) -> np.ndarray:
    out = vec.astype(complex).copy()
    h = 1
    while h < out.size:
        out = out.reshape(-1, 2 * h)
        a = out[:, :h].copy()
        b = out[:, h:].copy()
        out[:, :h] = a + b
        out[:, h:] = a - b
        out = out.reshape(-1)
        h *= 2
    return out


def random_iqp_circuit(n: int, t_count: int, rng: Rng) -> IqpCircuit:
    """Seeded random IQP structure: CZ per pair w.p. 1/2, random S powers,
    T gates on distinct random qubits."""
    if t_count > n:
        raise ValueError("cannot place more T gates than qubits")
    gen = rng.generator
    cz_pairs = tuple(
        (a, b)
        for a in range(n)
        for b in range(a + 1, n)
        if gen.random() < 0.5
    )
    s_powers = tuple(int(k) for k in gen.integers(0, 4, size=n))
    t_positions = tuple(int(q) for q in gen.choice(n, size=t_count, replace=False))
    return IqpCircuit(n, cz_pairs, s_powers, t_positions)


def iqp_decomposition(circuit: IqpCircuit, p: float) -> QuasiDecomposition:
    """Decompose the ideal circuit over dephased-T-state injections.

    Injecting rho_p^T implements T w.p. 1-p/2 and Z.T w.p. p/2 (flipped
    state swaps the weights). Expanding the per-gate signed decomposition
    T = c+ rho_p^T - c- rho_p^Tbar over all sign patterns gives 2**t terms,
    each a mixture over the 2**t flip patterns, regrouped into two states.
    """
    if not 0 < p < 1:
        raise ValueError("p must lie in (0, 1)")
    t_count = len(circuit.t_positions)
    if t_count > 6:
        raise ValueError("injection expansion capped at 6 T gates")
    c_plus_gate = (2.0 - p) / (2.0 * (1.0 - p))
    c_minus_gate = p / (2.0 * (1.0 - p))
    w_match = 1.0 - p / 2.0  # flip matches the injected state's dominant branch
    w_mismatch = p / 2.0

    flips = [tuple(b >> g & 1 for g in range(t_count)) for b in range(1 << t_count)]
    dists = np.stack([circuit.output_distribution(f).probs for f in flips])

    terms: list[tuple[float, DiscreteDistribution]] = []
    for s in range(1 << t_count):
        signs = [s >> g & 1 for g in range(t_count)]  # 0 -> rho_p^T, 1 -> flipped
        coeff = 1.0
        for bit in signs:
            coeff *= -c_minus_gate if bit else c_plus_gate
        weights = np.ones(1 << t_count)
        for b, flip in enumerate(flips):
            w = 1.0
            for g in range(t_count):
                w *= w_match if flip[g] == signs[g] else w_mismatch
            weights[b] = w
        mixed = weights @ dists
        terms.append((coeff, DiscreteDistribution(mixed, circuit.n_bits)))
    combined = combine_signed_terms(terms)

    ideal = circuit.output_distribution(tuple([0] * t_count)).probs
    drift = np.abs(target(combined).values - ideal).max()
    if drift > 1e-9:
        raise AssertionError(f"decomposition target drifted by {drift}")
    return combined


def scenario_iqp(n: int, t_count: int, p: float, rng: Rng) -> QuasiDecomposition:
    """Random T-doped IQP circuit realized through dephased-T injection."""
    if n > 8:
        raise ValueError("IQP scenario capped at 8 qubits")
    return iqp_decomposition(random_iqp_circuit(n, t_count, rng), p)
