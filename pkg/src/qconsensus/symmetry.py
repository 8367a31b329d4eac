"""Dicke states, excitation structure, and consensus diagnostics.

The conserved global observable used throughout is the diagonal operator
m*I + sum_i sigma_z^(i); a basis string with k excitations (k ones) is an
eigenvector with eigenvalue 2*(m - k).  Dicke states are indexed by the
excitation count k, never by the eigenvalue.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from math import comb, factorial

import numpy as np

from .network import permutation_index_table

__all__ = [
    "dicke_ket",
    "excitation_indices",
    "excitation_basis",
    "schmidt_reconstruct",
    "global_observable",
    "smc_projector",
    "is_ssc",
    "is_smc",
    "v_dicke",
    "v_total",
    "v_smc",
    "gossip_fixed_point",
    "per_site_expectations",
    "ConsensusReport",
    "consensus_report",
]


def excitation_indices(m: int, k: int) -> list[int]:
    """Ascending basis indices of the m-qubit strings with exactly k ones."""
    if not 0 <= k <= m:
        raise ValueError(f"excitation count {k} out of range 0..{m}")
    idx = [sum(1 << (m - 1 - i) for i in combo) for combo in combinations(range(m), k)]
    return sorted(idx)


def dicke_ket(m: int, k: int) -> np.ndarray:
    """Equal superposition of all C(m, k) basis strings with k excitations."""
    idx = excitation_indices(m, k)
    v = np.zeros(1 << m, dtype=complex)
    v[idx] = 1.0 / np.sqrt(len(idx))
    return v


def excitation_basis(m: int, k: int) -> list[np.ndarray]:
    """Computational basis vectors spanning the k-excitation subspace."""
    dim = 1 << m
    out = []
    for n in excitation_indices(m, k):
        v = np.zeros(dim, dtype=complex)
        v[n] = 1.0
        out.append(v)
    return out


def schmidt_reconstruct(m: int, k: int, m_a: int) -> np.ndarray:
    """Assemble the Dicke ket from its bipartite binomial decomposition.

    For a split into the first m_a and remaining m - m_a sites,

        |(m,k)> = C(m,k)^(-1/2) * sum_{ka+kb=k}
                  sqrt(C(m_a,ka) * C(m_b,kb)) |(m_a,ka)> (x) |(m_b,kb)>

    with terms skipped when ka > m_a or kb > m_b.
    """
    if not 0 <= k <= m:
        raise ValueError(f"excitation count {k} out of range 0..{m}")
    if not 1 <= m_a < m:
        raise ValueError(f"split size {m_a} must satisfy 1 <= m_a < m={m}")
    m_b = m - m_a
    v = np.zeros(1 << m, dtype=complex)
    for ka in range(k + 1):
        kb = k - ka
        if ka > m_a or kb > m_b:
            continue
        weight = np.sqrt(comb(m_a, ka) * comb(m_b, kb))
        v += weight * np.kron(dicke_ket(m_a, ka), dicke_ket(m_b, kb))
    return v / np.sqrt(comb(m, k))


def _excitation_counts(m: int) -> np.ndarray:
    return np.array([bin(n).count("1") for n in range(1 << m)], dtype=np.intp)


def global_observable(m: int) -> np.ndarray:
    """Diagonal conserved observable m*I + sum_i sigma_z^(i).

    Eigenvalue on a k-excitation basis string: 2*(m - k).
    """
    if m < 1:
        raise ValueError("need m >= 1")
    return np.diag(2.0 * (m - _excitation_counts(m))).astype(complex)


def smc_projector(m: int) -> np.ndarray:
    """Projector onto span{|00...0>, |11...1>}."""
    if m < 1:
        raise ValueError("need m >= 1")
    dim = 1 << m
    p = np.zeros((dim, dim), dtype=complex)
    p[0, 0] = 1.0
    p[dim - 1, dim - 1] = 1.0
    return p


def is_ssc(rho: np.ndarray, m: int, tol: float = 1e-9) -> tuple[bool, float]:
    """Symmetric-state consensus test.

    Returns (verdict, residual) where the residual is the max-abs change of
    rho under conjugation by any adjacent-transposition unitary.  Adjacent
    transpositions generate the full permutation group, so checking the m-1
    generators suffices.
    """
    rho = np.asarray(rho, dtype=complex)
    residual = 0.0
    for i in range(1, m):
        images = list(range(1, m + 1))
        images[i - 1], images[i] = images[i], images[i - 1]
        t = permutation_index_table(tuple(images), m)
        conjugated = rho[np.ix_(t, t)]
        residual = max(residual, float(np.max(np.abs(conjugated - rho))))
    return residual <= tol, residual


def is_smc(rho: np.ndarray, m: int, tol: float = 1e-9) -> tuple[bool, float, float]:
    """Single-measurement consensus test for sigma_z.

    Returns (verdict, population, pairwise_residual): population is the
    weight Tr(P_SMC rho) on span{|0...0>, |1...1>}; the pairwise residual is
    the worst violation of Tr(P_j^(k) P_j^(l) rho) = Tr(P_j^(l) rho) over
    outcomes j in {0,1} and site pairs.  The verdict is population >= 1-tol.
    """
    rho = np.asarray(rho, dtype=complex)
    dim = 1 << m
    diag = np.real(np.diag(rho))
    population = float(rho[0, 0].real + rho[dim - 1, dim - 1].real)
    bits = np.array([[(n >> (m - 1 - i)) & 1 for i in range(m)] for n in range(dim)])
    residual = 0.0
    for j in (0, 1):
        masks = [(bits[:, i] == j).astype(float) for i in range(m)]
        singles = [float(np.dot(mask, diag)) for mask in masks]
        for a in range(m):
            for b in range(m):
                if a == b:
                    continue
                joint = float(np.dot(masks[a] * masks[b], diag))
                residual = max(residual, abs(joint - singles[b]))
    return population >= 1.0 - tol, population, residual


def v_dicke(rho: np.ndarray, m: int, k: int) -> float:
    """Lyapunov value 1 - <(m,k)| rho |(m,k)> for one Dicke target."""
    d = dicke_ket(m, k)
    return 1.0 - float(np.real(d.conj() @ np.asarray(rho, dtype=complex) @ d))


def v_total(rho: np.ndarray, m: int) -> float:
    """Sum of v_dicke over k = 0..m; equals (m+1) minus the total Dicke weight.

    The minimum value m is attained exactly when rho is supported on the span
    of the Dicke kets.
    """
    return sum(v_dicke(rho, m, k) for k in range(m + 1))


def v_smc(rho: np.ndarray, m: int) -> float:
    """Lyapunov value 1 - Tr(P_SMC rho)."""
    rho = np.asarray(rho, dtype=complex)
    dim = 1 << m
    return 1.0 - float(rho[0, 0].real + rho[dim - 1, dim - 1].real)


def gossip_fixed_point(rho0: np.ndarray, m: int) -> np.ndarray:
    """Exact permutation-group average (1/m!) sum_pi U_pi rho U_pi^dag.

    Exhaustive over all m! permutations; guarded to m <= 8.
    """
    if m > 8:
        raise ValueError(f"exhaustive permutation averaging is limited to m <= 8, got {m}")
    rho0 = np.asarray(rho0, dtype=complex)
    acc = np.zeros_like(rho0)
    scratch = np.empty_like(rho0)
    for pi in permutations(range(1, m + 1)):
        t = permutation_index_table(pi, m)
        scratch[np.ix_(t, t)] = rho0
        acc += scratch
    return acc / factorial(m)


def per_site_expectations(rho: np.ndarray, m: int) -> np.ndarray:
    """Per-site expectations of I + sigma_z, i.e. 2*P(site reads 0).

    At consensus these agree across sites and, rescaled by m, recover the
    expectation of the global observable from any single site.
    """
    rho = np.asarray(rho, dtype=complex)
    diag = np.real(np.diag(rho))
    dim = 1 << m
    bits = np.array([[(n >> (m - 1 - i)) & 1 for i in range(m)] for n in range(dim)])
    return np.array([2.0 * float(np.dot((bits[:, i] == 0).astype(float), diag)) for i in range(m)])


@dataclass(frozen=True)
class ConsensusReport:
    """Scalar consensus diagnostics for one state."""

    ssc_residual: float
    smc_population: float
    smc_pairwise_residual: float
    s_expectation: float


def consensus_report(rho: np.ndarray, m: int) -> ConsensusReport:
    rho = np.asarray(rho, dtype=complex)
    _, ssc_residual = is_ssc(rho, m)
    _, population, pairwise = is_smc(rho, m)
    s_diag = np.real(np.diag(global_observable(m)))
    s_exp = float(np.dot(s_diag, np.real(np.diag(rho))))
    return ConsensusReport(
        ssc_residual=ssc_residual,
        smc_population=population,
        smc_pairwise_residual=pairwise,
        s_expectation=s_exp,
    )
