"""Small dense linear algebra for qubit density matrices.

Matrices are plain ``numpy`` arrays of complex dtype. Bipartite operators on
two qubits are ordered as (first ⊗ second); in the engine the first factor is
the working medium and the second the control.
"""

import numpy as np

from .errors import DimensionMismatch, DomainError, NotHermitian

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)

# |i><j| on a qubit
P00 = np.array([[1, 0], [0, 0]], dtype=complex)
P01 = np.array([[0, 1], [0, 0]], dtype=complex)
P10 = np.array([[0, 0], [1, 0]], dtype=complex)
P11 = np.array([[0, 0], [0, 1]], dtype=complex)

HERMITIAN_TOL = 1e-10
ENTROPY_CUTOFF = 1e-14


def hamiltonian(eps=1.0):
    """Qubit Hamiltonian -eps*Z, ground state |0> with energy -eps."""
    return -eps * Z


def tensor(a, b):
    """Kronecker product a ⊗ b."""
    a = np.asarray(a)
    b = np.asarray(b)
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise DomainError("tensor operands must be finite")
    return np.kron(a, b)


def dagger(m):
    return np.conj(np.swapaxes(m, -1, -2))


def hermitize(m, tol=HERMITIAN_TOL):
    """Return (m + m†)/2, refusing matrices whose asymmetry exceeds ``tol``."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    asym = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
    if asym > tol:
        raise NotHermitian(f"asymmetry {asym:.3e} exceeds {tol:.1e}")
    return 0.5 * (m + m.conj().T)


def partial_trace(rho, keep="first", dims=(2, 2)):
    """Reduced state of a bipartite operator.

    Parameters
    ----------
    rho : ndarray
        Operator on a space of dimension ``dims[0] * dims[1]``.
    keep : {"first", "second"} or {0, 1}
        Subsystem retained.
    dims : tuple of int
        Local dimensions.

    Returns
    -------
    ndarray
        Reduced operator on the retained subsystem.
    """
    rho = np.asarray(rho)
    d0, d1 = dims
    if rho.shape != (d0 * d1, d0 * d1):
        raise DimensionMismatch(f"expected shape {(d0 * d1,) * 2}, got {rho.shape}")
    r = rho.reshape(d0, d1, d0, d1)
    if keep in ("first", 0):
        return np.einsum("ijkj->ik", r)
    if keep in ("second", 1):
        return np.einsum("ijil->jl", r)
    raise DomainError(f"keep must be 'first' or 'second', got {keep!r}")


def eig_hermitian(m):
    """Eigen-decomposition of a Hermitian matrix, eigenvalues descending.

    Returns
    -------
    evals : ndarray
        Real eigenvalues sorted from largest to smallest.
    evecs : ndarray
        Unitary matrix whose columns are the matching eigenvectors.
    """
    h = hermitize(m, tol=1e-8)
    w, v = np.linalg.eigh(h)
    order = np.argsort(w)[::-1]
    return w[order], v[:, order]


def _entropy_of_spectrum(w):
    w = np.clip(np.real(w), 0.0, 1.0)
    w = w[w > ENTROPY_CUTOFF]
    return float(-np.sum(w * np.log(w)))


def von_neumann_entropy(rho):
    """-tr(rho ln rho) in nats."""
    w, _ = eig_hermitian(rho)
    return _entropy_of_spectrum(w)


def binary_entropy(x):
    """-x ln x - (1-x) ln(1-x) in nats, with 0 ln 0 = 0."""
    x = float(x)
    if x < -1e-12 or x > 1 + 1e-12:
        raise DomainError(f"binary entropy argument {x} outside [0, 1]")
    x = min(max(x, 0.0), 1.0)
    h = 0.0
    for p in (x, 1.0 - x):
        if p > 0.0:
            h -= p * np.log(p)
    return float(h)


def expectation(obs, rho):
    """Re tr(obs rho); the imaginary part must vanish."""
    obs = np.asarray(obs)
    rho = np.asarray(rho)
    if obs.shape != rho.shape:
        raise DimensionMismatch(f"observable {obs.shape} vs state {rho.shape}")
    val = np.trace(obs @ rho)
    if abs(val.imag) > 1e-10:
        raise NotHermitian(f"expectation has imaginary part {val.imag:.3e}")
    return float(val.real)


def is_density(rho, tol=HERMITIAN_TOL):
    """True if rho is Hermitian, unit trace and positive within ``tol``."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        return False
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        return False
    if abs(np.trace(rho) - 1) > tol:
        return False
    return np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0] >= -tol


def trace_distance(rho, sigma):
    """½‖rho − sigma‖₁."""
    w = np.linalg.eigvalsh(hermitize(np.asarray(rho) - np.asarray(sigma), tol=1e-8))
    return float(0.5 * np.sum(np.abs(w)))


def purity(rho):
    return float(np.real(np.trace(rho @ rho)))


def ket(*bits):
    """Computational basis column vector for the given bit string."""
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int("".join(str(b) for b in bits), 2) if bits else 0] = 1.0
    return v
