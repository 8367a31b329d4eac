"""Constructors for the three symmetrizing channel families.

All three families act on a chosen pair of sites and leave the rest of the
network untouched:

* gossip: convex mixture of the identity and the pair swap; unital, purity
  non-increasing, Dicke populations invariant.
* ssc: a two-operator map on the pair that transports the antisymmetric
  direction onto the symmetric Dicke vector and fixes everything else; drives
  the network into the span of the Dicke states while conserving the global
  excitation observable.
* smc: projects the pair onto its basis states outside span{|00>, |11>} and
  redistributes each onto |00>/|11> with weights chosen to conserve the same
  observable; drives the network onto span{|0...0>, |1...1>}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .network import NetworkTopology, embed_neighborhood
from .qcore import KrausChannel

__all__ = [
    "ChannelFamily",
    "FeedbackDecomposition",
    "gossip_channel",
    "ssc_pair_channel",
    "ssc_channel",
    "ssc_feedback_decomposition",
    "smc_neighborhood_channel",
    "smc_channel",
    "neighborhood_channel",
    "build_channels",
]

FAMILY_KINDS = ("gossip", "ssc", "smc")

_SWAP2 = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)

# Columns: |00>, (|01>+|10>)/sqrt2, (|01>-|10>)/sqrt2, |11>.  The ssc pair
# operators are defined blockwise in this excitation-ordered basis and
# conjugated back to the computational basis.
_R = 1.0 / np.sqrt(2.0)
_PAIR_EXCITATION_BASIS = np.array(
    [
        [1, 0, 0, 0],
        [0, _R, _R, 0],
        [0, _R, -_R, 0],
        [0, 0, 0, 1],
    ],
    dtype=complex,
).T


@dataclass(frozen=True)
class ChannelFamily:
    """Family selector: kind in {gossip, ssc, smc}; alpha only for gossip."""

    kind: str
    alpha: float | None = None

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise ValueError(f"unknown family {self.kind!r}, expected one of {FAMILY_KINDS}")
        if self.kind == "gossip":
            alpha = 0.5 if self.alpha is None else float(self.alpha)
            if not 0.0 < alpha < 1.0:
                raise ValueError(f"gossip mixing weight must lie in (0, 1), got {alpha}")
            object.__setattr__(self, "alpha", alpha)
        elif self.alpha is not None:
            raise ValueError(f"family {self.kind!r} takes no alpha parameter")

    @classmethod
    def gossip(cls, alpha: float = 0.5) -> "ChannelFamily":
        return cls("gossip", alpha)

    @classmethod
    def ssc(cls) -> "ChannelFamily":
        return cls("ssc")

    @classmethod
    def smc(cls) -> "ChannelFamily":
        return cls("smc")


@dataclass(frozen=True)
class FeedbackDecomposition:
    """Measure-and-correct form of the ssc pair map.

    projector_1 and projector_2 are the two measurement outcomes
    (complementary orthogonal projectors); applying correction_unitary after
    outcome 1 reproduces the first Kraus operator.
    """

    projector_1: np.ndarray
    projector_2: np.ndarray
    correction_unitary: np.ndarray


def gossip_channel(pair, m: int, alpha: float) -> KrausChannel:
    """Pair gossip map rho -> (1-alpha) rho + alpha U_swap rho U_swap^dag."""
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"gossip mixing weight must lie in (0, 1), got {alpha}")
    dim = 1 << m
    swap = embed_neighborhood(_SWAP2, pair, m)
    ops = (
        np.sqrt(1.0 - alpha) * np.eye(dim, dtype=complex),
        np.sqrt(alpha) * swap,
    )
    j, k = sorted(int(s) for s in pair)
    return KrausChannel(ops, label=f"gossip({j},{k}|alpha={alpha:g})")


def ssc_pair_channel() -> KrausChannel:
    """Two-qubit Dicke-preparing map in the computational basis.

    The first operator sends the antisymmetric vector (|01>-|10>)/sqrt2 to the
    symmetric one and annihilates the rest; the second is the orthogonal
    projector onto span{|00>, (|01>+|10>)/sqrt2, |11>}.  A single application
    therefore maps any state of the pair onto that span.
    """
    b = _PAIR_EXCITATION_BASIS
    raise_block = np.zeros((4, 4), dtype=complex)
    raise_block[1, 2] = 1.0
    proj_block = np.diag([1.0, 1.0, 0.0, 1.0]).astype(complex)
    m1 = b @ raise_block @ b.conj().T
    m2 = b @ proj_block @ b.conj().T
    return KrausChannel((m1, m2), label="ssc-pair")


def ssc_channel(pair, m: int) -> KrausChannel:
    """The ssc pair map embedded on sites (j, k) of an m-qubit network."""
    local = ssc_pair_channel()
    ops = tuple(embed_neighborhood(a, pair, m) for a in local.kraus_ops)
    j, k = sorted(int(s) for s in pair)
    return KrausChannel(ops, label=f"ssc({j},{k})")


def ssc_feedback_decomposition() -> FeedbackDecomposition:
    """Projective-measurement-plus-unitary realization of the ssc pair map.

    Outcome 1 projects onto the antisymmetric direction; the correction swaps
    the symmetric and antisymmetric vectors and acts as the identity on
    span{|00>, |11>} (any unitary completion off the measured range works,
    since the correction is only ever applied after outcome 1).
    """
    b = _PAIR_EXCITATION_BASIS
    proj_block = np.diag([1.0, 1.0, 0.0, 1.0]).astype(complex)
    swap_block = np.array(
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
    )
    p2 = b @ proj_block @ b.conj().T
    p1 = np.eye(4, dtype=complex) - p2
    u1 = b @ swap_block @ b.conj().T
    return FeedbackDecomposition(projector_1=p1, projector_2=p2, correction_unitary=u1)


def _transposition(a: int, b: int, dim: int) -> np.ndarray:
    u = np.eye(dim, dtype=complex)
    u[[a, b]] = u[[b, a]]
    return u


def smc_neighborhood_channel(n_sites: int) -> KrausChannel:
    """Single-measurement-consensus map on a neighborhood of n_sites qubits.

    Kraus set: the projector onto span{|0...0>, |1...1>}, plus for every other
    basis state |k> the pair sqrt(p_k0) U_k0 P_k and sqrt(p_k1) U_k1 P_k,
    where U_k0 |k> = |0...0>, U_k1 |k> = |1...1>, and p_k0 is the number of
    zero bits of k divided by n_sites (p_k1 = 1 - p_k0).  The weights make the
    map conserve the excitation observable; zero-weight terms are dropped.
    The unitaries are basis transpositions; only their action on |k> matters
    because they always appear multiplied by P_k.
    """
    if n_sites < 2:
        raise ValueError(f"need at least 2 sites in a neighborhood, got {n_sites}")
    dim = 1 << n_sites
    sym = np.zeros((dim, dim), dtype=complex)
    sym[0, 0] = 1.0
    sym[dim - 1, dim - 1] = 1.0
    ops = [sym]
    for k in range(1, dim - 1):
        zeros = n_sites - bin(k).count("1")
        p0 = zeros / n_sites
        proj_k = np.zeros((dim, dim), dtype=complex)
        proj_k[k, k] = 1.0
        for weight, target in ((p0, 0), (1.0 - p0, dim - 1)):
            if weight > 0.0:
                ops.append(np.sqrt(weight) * (_transposition(k, target, dim) @ proj_k))
    return KrausChannel(tuple(ops), label=f"smc-neighborhood({n_sites})")


def smc_channel(pair, m: int) -> KrausChannel:
    """The two-site smc map embedded on sites (j, k) of an m-qubit network."""
    local = smc_neighborhood_channel(2)
    ops = tuple(embed_neighborhood(a, pair, m) for a in local.kraus_ops)
    j, k = sorted(int(s) for s in pair)
    return KrausChannel(ops, label=f"smc({j},{k})")


def neighborhood_channel(family: ChannelFamily, pair, m: int) -> KrausChannel:
    """Whole-network channel of the given family acting on one pair."""
    if family.kind == "gossip":
        return gossip_channel(pair, m, family.alpha)
    if family.kind == "ssc":
        return ssc_channel(pair, m)
    return smc_channel(pair, m)


def build_channels(family: ChannelFamily, topology: NetworkTopology) -> tuple[KrausChannel, ...]:
    """One channel per neighborhood, in topology order."""
    return tuple(neighborhood_channel(family, pair, topology.m) for pair in topology.neighborhoods)
