"""Dense linear algebra for multi-qubit states, operators, and Kraus channels.

Basis convention used everywhere in this package: the computational basis of
an m-qubit space is indexed by the integer value of the bit string
b1 b2 ... bm with site 1 as the most significant bit, so |01> has index 1 in
a two-qubit space.  All arrays are complex double precision.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

__all__ = [
    "I2",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "ket",
    "basis_ket",
    "bitstring_ket",
    "ket_to_density",
    "tensor",
    "partial_trace",
    "purity",
    "expectation",
    "pure_state_fidelity",
    "hermiticity_residual",
    "validate_density_matrix",
    "KrausChannel",
    "CPTPReport",
    "completeness_residual",
    "apply_channel",
    "dual_apply",
    "check_cptp",
    "save_matrix",
    "load_matrix",
]

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

# Default numerical tolerances for state and channel validation.
HERMITICITY_ATOL = 1e-9
TRACE_ATOL = 1e-9
PSD_ATOL = 1e-9
COMPLETENESS_ATOL = 1e-10
UNITALITY_ATOL = 1e-10


def ket(amplitudes) -> np.ndarray:
    """Normalized state vector from a sequence of complex amplitudes."""
    v = np.asarray(amplitudes, dtype=complex).reshape(-1)
    norm = np.linalg.norm(v)
    if norm < 1e-15:
        raise ValueError("cannot normalize a zero vector")
    return v / norm


def basis_ket(dim: int, index: int) -> np.ndarray:
    """Computational basis vector |index> in a dim-dimensional space."""
    if not 0 <= index < dim:
        raise ValueError(f"basis index {index} out of range for dim {dim}")
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def bitstring_ket(bits: str) -> np.ndarray:
    """Basis ket |b1 b2 ... bm> for a bit string, site 1 most significant."""
    if not bits or any(c not in "01" for c in bits):
        raise ValueError(f"invalid bit string {bits!r}")
    return basis_ket(2 ** len(bits), int(bits, 2))


def ket_to_density(psi: np.ndarray) -> np.ndarray:
    """Rank-one density matrix |psi><psi|."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    return np.outer(psi, psi.conj())


def tensor(*factors: np.ndarray) -> np.ndarray:
    """Kronecker product of operators (or kets); left factor most significant."""
    if not factors:
        raise ValueError("tensor needs at least one factor")
    return reduce(np.kron, [np.asarray(f, dtype=complex) for f in factors])


def hermiticity_residual(x: np.ndarray) -> float:
    """Max-abs deviation of a square matrix from its conjugate transpose."""
    x = np.asarray(x)
    return float(np.max(np.abs(x - x.conj().T)))


def validate_density_matrix(
    rho: np.ndarray,
    *,
    hermiticity_atol: float = HERMITICITY_ATOL,
    trace_atol: float = TRACE_ATOL,
    psd_atol: float = PSD_ATOL,
) -> np.ndarray:
    """Check Hermiticity, unit trace, and positive semidefiniteness.

    Returns the input as a complex array; raises ValueError naming the first
    violated property.  The PSD check uses an eigenvalue floor of -psd_atol
    because channel arithmetic accumulates rounding.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    herm = hermiticity_residual(rho)
    if herm > hermiticity_atol:
        raise ValueError(f"not Hermitian: residual {herm:.3e} > {hermiticity_atol:.1e}")
    tr = complex(np.trace(rho))
    if abs(tr - 1.0) > trace_atol:
        raise ValueError(f"trace {tr:.12g} deviates from 1 by more than {trace_atol:.1e}")
    min_eig = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0])
    if min_eig < -psd_atol:
        raise ValueError(f"not positive semidefinite: min eigenvalue {min_eig:.3e}")
    return rho


def partial_trace(rho: np.ndarray, m: int, keep) -> np.ndarray:
    """Reduced state on the kept sites of an m-qubit density matrix.

    Parameters
    ----------
    rho : (2**m, 2**m) array
    m : number of qubit sites
    keep : iterable of 1-based site indices to retain (order-insensitive;
        the reduction preserves the original relative site order)
    """
    rho = np.asarray(rho, dtype=complex)
    keep_set = set(int(s) for s in keep)
    if not keep_set:
        raise ValueError("keep set must be nonempty")
    if any(s < 1 or s > m for s in keep_set):
        raise ValueError(f"keep sites {sorted(keep_set)} out of range 1..{m}")
    dim = 1 << m
    if rho.shape != (dim, dim):
        raise ValueError(f"expected shape {(dim, dim)}, got {rho.shape}")
    t = rho.reshape((2,) * (2 * m))
    row_labels = list(range(m))
    col_labels = [i if (i + 1) not in keep_set else m + i for i in range(m)]
    kept = [i for i in range(m) if (i + 1) in keep_set]
    out_labels = kept + [m + i for i in kept]
    reduced = np.einsum(t, row_labels + col_labels, out_labels)
    d_keep = 1 << len(kept)
    return reduced.reshape(d_keep, d_keep)


def purity(rho: np.ndarray) -> float:
    """Tr(rho^2); 1 for pure states, 1/dim for the maximally mixed state."""
    rho = np.asarray(rho, dtype=complex)
    return float(np.real(np.trace(rho @ rho)))


def expectation(rho: np.ndarray, x: np.ndarray, *, hermiticity_atol: float = HERMITICITY_ATOL) -> float:
    """Tr(rho X) for a Hermitian observable X; rejects non-Hermitian input."""
    x = np.asarray(x, dtype=complex)
    resid = hermiticity_residual(x)
    if resid > hermiticity_atol:
        raise ValueError(f"observable is not Hermitian: residual {resid:.3e}")
    val = complex(np.trace(np.asarray(rho, dtype=complex) @ x))
    if abs(val.imag) > 1e-9:
        raise ValueError(f"expectation has imaginary part {val.imag:.3e}")
    return float(val.real)


def pure_state_fidelity(rho: np.ndarray, psi: np.ndarray) -> float:
    """Overlap <psi| rho |psi> of a state with a pure reference vector."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    return float(np.real(psi.conj() @ np.asarray(rho, dtype=complex) @ psi))


def completeness_residual(kraus_ops) -> float:
    """Max-abs norm of sum_k A_k^dag A_k - I."""
    ops = [np.asarray(a, dtype=complex) for a in kraus_ops]
    dim = ops[0].shape[0]
    acc = np.zeros((dim, dim), dtype=complex)
    for a in ops:
        acc += a.conj().T @ a
    return float(np.max(np.abs(acc - np.eye(dim))))


@dataclass(frozen=True)
class KrausChannel:
    """Quantum channel in operator-sum form: rho -> sum_k A_k rho A_k^dag.

    Construction enforces the completeness relation sum_k A_k^dag A_k = I
    within COMPLETENESS_ATOL; use check_cptp on a raw operator list to
    diagnose sets that are not trace preserving.
    """

    kraus_ops: tuple[np.ndarray, ...]
    label: str = ""
    dim: int = field(init=False)

    def __post_init__(self):
        ops = tuple(np.asarray(a, dtype=complex) for a in self.kraus_ops)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        dim = ops[0].shape[0]
        for a in ops:
            if a.ndim != 2 or a.shape != (dim, dim):
                raise ValueError("all Kraus operators must be square with equal dims")
        resid = completeness_residual(ops)
        if resid > COMPLETENESS_ATOL:
            raise ValueError(
                f"Kraus operators are not complete: residual {resid:.3e} > {COMPLETENESS_ATOL:.1e}"
            )
        object.__setattr__(self, "kraus_ops", ops)
        object.__setattr__(self, "dim", dim)


@dataclass(frozen=True)
class CPTPReport:
    completeness_residual: float
    is_unital: bool


def _kraus_list(channel_or_ops):
    if isinstance(channel_or_ops, KrausChannel):
        return list(channel_or_ops.kraus_ops)
    return [np.asarray(a, dtype=complex) for a in channel_or_ops]


def check_cptp(channel_or_ops) -> CPTPReport:
    """Completeness residual and unitality of a channel or raw Kraus list."""
    ops = _kraus_list(channel_or_ops)
    dim = ops[0].shape[0]
    acc = np.zeros((dim, dim), dtype=complex)
    for a in ops:
        acc += a @ a.conj().T
    unital = float(np.max(np.abs(acc - np.eye(dim)))) <= UNITALITY_ATOL
    return CPTPReport(completeness_residual=completeness_residual(ops), is_unital=unital)


def apply_channel(channel: KrausChannel, rho: np.ndarray, *, validate: bool = True) -> np.ndarray:
    """Apply the channel: sum_k A_k rho A_k^dag.

    With validate=True (the default) the output is checked against the
    density-matrix invariants; pass validate=False in benchmark loops or when
    mapping non-state operators through the same linear map.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (channel.dim, channel.dim):
        raise ValueError(f"state shape {rho.shape} does not match channel dim {channel.dim}")
    out = np.zeros_like(rho)
    for a in channel.kraus_ops:
        out += a @ rho @ a.conj().T
    if validate:
        validate_density_matrix(out)
    return out


def dual_apply(channel: KrausChannel, x: np.ndarray) -> np.ndarray:
    """Heisenberg-picture dual map: X -> sum_k A_k^dag X A_k.

    Satisfies Tr[X E(rho)] = Tr[E^dag(X) rho] for every rho, and is unital
    whenever the channel is trace preserving.
    """
    x = np.asarray(x, dtype=complex)
    if x.shape != (channel.dim, channel.dim):
        raise ValueError(f"operator shape {x.shape} does not match channel dim {channel.dim}")
    out = np.zeros_like(x)
    for a in channel.kraus_ops:
        out += a.conj().T @ x @ a
    return out


# Matrix (de)serialization: a JSON object {"dim": d, "entries": [[re, im], ...]}
# with d*d entries in row-major order.  The CLI shares this schema for
# explicit initial-state files.

def save_matrix(path, matrix: np.ndarray) -> None:
    """Write a square complex matrix to a JSON file of [re, im] pairs."""
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {matrix.shape}")
    flat = matrix.reshape(-1)
    payload = {
        "dim": int(matrix.shape[0]),
        "entries": [[float(z.real), float(z.imag)] for z in flat],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)
        fh.write("\n")


def load_matrix(path) -> np.ndarray:
    """Read a matrix written by save_matrix."""
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    try:
        dim = int(payload["dim"])
        entries = payload["entries"]
    except (TypeError, KeyError) as exc:
        raise ValueError(f"matrix file {path} is missing 'dim' or 'entries'") from exc
    if dim < 1 or len(entries) != dim * dim:
        raise ValueError(f"matrix file {path} has {len(entries)} entries, expected {dim * dim}")
    flat = np.array([complex(re, im) for re, im in entries], dtype=complex)
    return flat.reshape(dim, dim)
