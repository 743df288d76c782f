"""Simulated Pauli tomography with multinomial shot noise.

Every qubit in ``keep`` is measured in each of the 3^n settings
{X, Y, Z}^n with ``shots`` shots per setting and repetition. Counts are
pooled over repetitions, Pauli expectations are averaged over all
compatible settings, the state is reconstructed by linear inversion and then
projected to the nearest unit-trace positive matrix by eigenvalue clipping.
Error bars come from a parametric bootstrap of the pooled counts.

Randomness: repetition ``r`` draws from a Philox generator seeded with
``SeedSequence([seed, r])``; the bootstrap uses ``SeedSequence([seed, -1])``
mapped to a non-negative entropy word. Results are therefore bit-identical
for a given seed.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from .gates import H_MAT, reduced_density, statevector_run

BOOTSTRAP = 200
_BOOT_STREAM = 2 ** 32 - 1

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.diag([1.0, -1.0]).astype(complex),
}
# rotation taking the eigenbasis of each Pauli to the computational basis
_BASIS_CHANGE = {
    "X": H_MAT,
    "Y": H_MAT @ np.diag([1, -1j]),
    "Z": np.eye(2, dtype=complex),
}


@dataclass(frozen=True)
class TomographyEstimate:
    rho_hat: np.ndarray
    std_errors: np.ndarray
    shots: int
    repetitions: int
    seed: int
    keep: tuple = (0,)


def _kron_all(mats):
    out = np.eye(1, dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out


def _rng(seed, stream):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, stream])))


class _Model:
    """Precomputed settings, outcome probabilities and inversion weights."""

    def __init__(self, n):
        self.n = n
        self.settings = list(itertools.product("XYZ", repeat=n))
        self.paulis = list(itertools.product("IXYZ", repeat=n))
        d = 2 ** n
        bits = np.array(list(itertools.product((0, 1), repeat=n)))  # (d, n)
        weights = np.zeros((len(self.paulis), len(self.settings), d))
        for pi, p in enumerate(self.paulis):
            compat = [si for si, s in enumerate(self.settings)
                      if all(pc in ("I", sc) for pc, sc in zip(p, s))]
            support = np.array([pc != "I" for pc in p])
            signs = (-1.0) ** bits[:, support].sum(axis=1)
            for si in compat:
                weights[pi, si] = signs / len(compat)
        self.weights = weights.reshape(len(self.paulis), -1)
        self.pauli_mats = np.stack([_kron_all(_PAULI[c] for c in p) for p in self.paulis]) / d
        self.rotations = [_kron_all(_BASIS_CHANGE[c] for c in s) for s in self.settings]

    def probabilities(self, rho):
        probs = np.array([np.real(np.diag(u @ rho @ u.conj().T)) for u in self.rotations])
        probs = np.clip(probs, 0.0, None)
        return probs / probs.sum(axis=1, keepdims=True)

    def estimate(self, freqs):
        """freqs: (..., settings, outcomes) -> projected density matrices (..., d, d)."""
        shape = freqs.shape[:-2]
        f = freqs.reshape(shape + (-1,))
        expect = f @ self.weights.T
        rho = np.tensordot(expect, self.pauli_mats, axes=(-1, 0))
        return project_psd(rho)


def project_psd(rho):
    """Clip negative eigenvalues and renormalize; works on stacks."""
    rho = 0.5 * (rho + np.conj(np.swapaxes(rho, -1, -2)))
    w, v = np.linalg.eigh(rho)
    w = np.clip(w, 0.0, None)
    w = w / w.sum(axis=-1, keepdims=True)
    return (v * w[..., None, :]) @ np.conj(np.swapaxes(v, -1, -2))


def sample_and_tomograph(c, shots, repetitions=1, seed=0, keep=None, bootstrap=BOOTSTRAP):
    """Tomograph the qubits ``keep`` of the circuit output.

    ``keep`` defaults to (1, 0), medium then control, matching the ordering
    of the joint medium-control state.
    """
    if shots < 1 or repetitions < 1:
        raise ValueError("shots and repetitions must be >= 1")
    if bootstrap < 200:
        raise ValueError("at least 200 bootstrap resamples are required")
    keep = (1, 0) if keep is None else tuple(keep)
    rho = reduced_density(statevector_run(c), keep)
    model = _Model(len(keep))
    probs = model.probabilities(rho)

    counts = np.zeros(probs.shape, dtype=np.int64)
    for rep in range(repetitions):
        rng = _rng(seed, rep)
        for si, p in enumerate(probs):
            counts[si] += rng.multinomial(shots, p)
    total = shots * repetitions
    freqs = counts / total
    rho_hat = model.estimate(freqs)

    rng = _rng(seed, _BOOT_STREAM)
    boot = np.stack([rng.multinomial(total, f, size=bootstrap) for f in freqs], axis=1)
    samples = model.estimate(boot / total)
    std = np.sqrt(np.var(samples.real, axis=0) + np.var(samples.imag, axis=0))
    return TomographyEstimate(rho_hat, std, int(shots), int(repetitions), int(seed), keep)
