"""
Spin-network constructors and single-excitation Hamiltonians.

Every network is an XX model ``sum_(ij) J_ij/2 (sx_i sx_j + sy_i sy_j)``
over an undirected graph, optionally in a uniform field along z. Because
the total z-magnetisation is conserved, its dynamics in the zero and
single excitation sectors is fully described by a small real symmetric
matrix:

- ``H1``: N x N, entry (i, j) = J_ij, diagonal = field shift ``h = 2B``.
- ``H01``: (N+1) x (N+1), the vacuum |00...0> at index 0 with energy 0
  and no coupling, followed by the H1 block.

Sites are numbered 1..N (the site basis |n> has the n-th spin flipped).
Matrices are 0-based, so site n lives in row n-1 of H1 and row n of H01.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, replace
from dataclasses import field as dc_field

import numpy as np
from scipy.linalg import helmert

from .errors import InvalidSizeError

__all__ = [
    "Family",
    "ChannelSpec",
    "uniform_chain",
    "modulated_chain",
    "modified_chain_a",
    "modified_chain_b",
    "multiarm",
    "attach_uncoupled_node",
    "apply_field",
    "build_hamiltonian",
    "couplings",
    "multiarm_sector_basis",
    "multiarm_output_ends",
]


class Family(str, enum.Enum):
    UNIFORM = "uniform"
    MODULATED = "modulated"
    MODIFIED_A = "modified-a"
    MODIFIED_B = "modified-b"
    MULTIARM = "multiarm"
    CUSTOM = "custom"


@dataclass(frozen=True)
class ChannelSpec:
    """Immutable description of one spin network.

    Attributes
    ----------
    n_sites : int
        Number of spins N.
    edges : tuple of (i, j, J)
        Undirected couplings with ``1 <= i < j <= N``, sorted by (i, j).
    field : float
        Field strength B; single-excitation states are shifted by ``2B``.
    family : Family
        Constructor that produced the spec.
    params : dict
        Family parameters (J, lambda, J0, l1, l2, N_A, uncoupled sites).
    """

    n_sites: int
    edges: tuple
    field: float = 0.0
    family: Family = Family.CUSTOM
    params: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        n = int(self.n_sites)
        if n < 1:
            raise InvalidSizeError(f"n_sites must be positive, got {self.n_sites}")
        canon = {}
        for edge in self.edges:
            i, j, coupling = int(edge[0]), int(edge[1]), edge[2]
            if isinstance(coupling, complex) or np.iscomplexobj(coupling):
                raise ValueError(f"coupling on ({i},{j}) must be real")
            coupling = float(coupling)
            if not math.isfinite(coupling):
                raise ValueError(f"coupling on ({i},{j}) is not finite")
            if i == j:
                raise ValueError(f"self-edge on site {i}")
            if not (1 <= i <= n and 1 <= j <= n):
                raise ValueError(f"edge ({i},{j}) references a site outside 1..{n}")
            key = (min(i, j), max(i, j))
            if key in canon:
                raise ValueError(f"edge {key} listed twice")
            canon[key] = coupling
        edges = tuple((i, j, canon[(i, j)]) for i, j in sorted(canon))
        object.__setattr__(self, "n_sites", n)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "field", float(self.field))
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "params", dict(self.params))

    @property
    def field_shift(self) -> float:
        """Energy offset of every single-excitation state relative to the vacuum."""
        return 2.0 * self.field

    def to_json(self) -> str:
        doc = {
            "family": self.family.value,
            "n_sites": self.n_sites,
            "params": {k: self.params[k] for k in sorted(self.params)},
            "edges": [[i, j, J] for i, j, J in self.edges],
            "field": self.field,
        }
        return json.dumps(doc, sort_keys=False, separators=(",", ": "))

    @classmethod
    def from_json(cls, text: str) -> "ChannelSpec":
        doc = json.loads(text)
        return cls(
            n_sites=doc["n_sites"],
            edges=tuple(tuple(e) for e in doc["edges"]),
            field=doc.get("field", 0.0),
            family=doc.get("family", "custom"),
            params=doc.get("params", {}),
        )


def _chain(couplings_, family, params) -> ChannelSpec:
    edges = tuple((n, n + 1, J) for n, J in enumerate(couplings_, start=1))
    return ChannelSpec(len(couplings_) + 1, edges, 0.0, family, params)


def _modulated_coupling(n, n_sites, lam):
    return lam * math.sqrt(n * (n_sites - n))


def uniform_chain(n_sites: int, J: float = 1.0) -> ChannelSpec:
    """Open XX chain with identical nearest-neighbour couplings ``J``."""
    if n_sites < 2:
        raise InvalidSizeError(f"uniform chain needs N >= 2, got {n_sites}")
    if J == 0:
        raise ValueError("uniform chain needs a nonzero coupling")
    return _chain([float(J)] * (n_sites - 1), Family.UNIFORM, {"J": float(J)})


def modulated_chain(n_sites: int, lam: float = 1.0) -> ChannelSpec:
    """Chain with ``J_{n,n+1} = lam * sqrt(n (N - n))``.

    Perfect mirror transfer at ``t = pi / (2 lam)`` without decoherence.
    """
    if n_sites < 2:
        raise InvalidSizeError(f"modulated chain needs N >= 2, got {n_sites}")
    if lam <= 0:
        raise ValueError("lambda must be positive")
    cs = [_modulated_coupling(n, n_sites, lam) for n in range(1, n_sites)]
    return _chain(cs, Family.MODULATED, {"lambda": float(lam)})


def modified_chain_a(n_sites: int, lam: float = 1.0, J0: float = 0.02) -> ChannelSpec:
    """Modulated chain whose first and last bonds are replaced by ``J0``."""
    if n_sites < 4:
        raise InvalidSizeError(f"modified chain needs N >= 4, got {n_sites}")
    if lam <= 0:
        raise ValueError("lambda must be positive")
    if J0 < 0:
        raise ValueError("J0 must be non-negative")
    cs = [_modulated_coupling(n, n_sites, lam) for n in range(1, n_sites)]
    cs[0] = cs[-1] = float(J0)
    return _chain(cs, Family.MODIFIED_A, {"lambda": float(lam), "J0": float(J0)})


def modified_chain_b(n_sites: int, J: float = 1.0, J0: float = 0.02) -> ChannelSpec:
    """Uniform chain whose first and last bonds are replaced by ``J0``."""
    if n_sites < 4:
        raise InvalidSizeError(f"modified chain needs N >= 4, got {n_sites}")
    if J <= 0:
        raise ValueError("J must be positive")
    if J0 < 0:
        raise ValueError("J0 must be non-negative")
    cs = [float(J)] * (n_sites - 1)
    cs[0] = cs[-1] = float(J0)
    return _chain(cs, Family.MODIFIED_B, {"J": float(J), "J0": float(J0)})


def _arm_site(l1, l2, arm, pos):
    # arm in 1..N_A, pos in 1..l2
    return l1 + 1 + (arm - 1) * l2 + pos


def multiarm(l1: int, l2: int, n_arms: int, lam: float = 1.0) -> ChannelSpec:
    """Star network M(l1, l2, N_A): input arm, hub, ``n_arms`` output arms.

    Site layout: input arm 1..l1, hub l1+1, then arm ``a`` occupies
    ``l1 + 1 + (a-1) l2 + 1 .. l1 + 1 + a l2``. All bonds carry the modulated
    couplings of an effective chain of length ``l = l1 + l2 + 1``; each
    hub-to-arm bond is divided by ``sqrt(n_arms)`` so that the symmetric arm
    combination reproduces that chain exactly.
    """
    if l1 < 1 or l2 < 1 or n_arms < 2:
        raise InvalidSizeError(f"invalid multiarm sizes l1={l1}, l2={l2}, N_A={n_arms}")
    if lam <= 0:
        raise ValueError("lambda must be positive")
    length = l1 + l2 + 1
    hub = l1 + 1
    edges = [(n, n + 1, _modulated_coupling(n, length, lam)) for n in range(1, l1 + 1)]
    hub_coupling = _modulated_coupling(hub, length, lam) / math.sqrt(n_arms)
    for arm in range(1, n_arms + 1):
        edges.append((hub, _arm_site(l1, l2, arm, 1), hub_coupling))
        for pos in range(1, l2):
            n_eff = hub + pos
            edges.append(
                (
                    _arm_site(l1, l2, arm, pos),
                    _arm_site(l1, l2, arm, pos + 1),
                    _modulated_coupling(n_eff, length, lam),
                )
            )
    params = {"l1": l1, "l2": l2, "N_A": n_arms, "lambda": float(lam)}
    return ChannelSpec(l1 + n_arms * l2 + 1, tuple(edges), 0.0, Family.MULTIARM, params)


def multiarm_output_ends(spec: ChannelSpec) -> list[int]:
    """Last site of every output arm of a multiarm spec."""
    p = spec.params
    return [_arm_site(p["l1"], p["l2"], a, p["l2"]) for a in range(1, p["N_A"] + 1)]


def multiarm_sector_basis(spec: ChannelSpec) -> np.ndarray:
    """Orthogonal change of basis separating the symmetric arm sector.

    Returns ``Q`` (N x N) whose first ``l = l1 + l2 + 1`` columns are the
    input-arm sites, the hub and the symmetric combinations
    ``|p+> = sum_a |p_a> / sqrt(N_A)`` level by level; the remaining
    columns are orthonormal antisymmetric combinations. ``Q.T @ H1 @ Q``
    is block diagonal with the effective modulated chain in the top block.
    """
    p = spec.params
    l1, l2, n_arms = p["l1"], p["l2"], p["N_A"]
    n = spec.n_sites
    hel = helmert(n_arms, full=True)  # row 0 is the uniform vector
    q = np.zeros((n, n))
    for s in range(l1 + 1):
        q[s, s] = 1.0
    col = l1 + 1
    for pos in range(1, l2 + 1):
        for a in range(n_arms):
            q[_arm_site(l1, l2, a + 1, pos) - 1, col] = hel[0, a]
        col += 1
    for r in range(1, n_arms):
        for pos in range(1, l2 + 1):
            for a in range(n_arms):
                q[_arm_site(l1, l2, a + 1, pos) - 1, col] = hel[r, a]
            col += 1
    return q


def attach_uncoupled_node(spec: ChannelSpec) -> ChannelSpec:
    """Append one isolated site (index N+1) to the network."""
    params = dict(spec.params)
    params["uncoupled"] = list(params.get("uncoupled", [])) + [spec.n_sites + 1]
    return replace(spec, n_sites=spec.n_sites + 1, params=params)


def apply_field(spec: ChannelSpec, B: float) -> ChannelSpec:
    """Add a uniform z field ``B`` (single-excitation shift grows by ``2B``)."""
    if B == 0:
        return spec
    return replace(spec, field=spec.field + float(B))


def couplings(spec: ChannelSpec) -> np.ndarray:
    """Nearest-neighbour couplings ``J_{n,n+1}`` of a chain spec."""
    table = {(i, j): J for i, j, J in spec.edges}
    out = []
    for n in range(1, spec.n_sites):
        if (n, n + 1) not in table:
            raise ValueError(f"spec is not a chain: missing bond ({n},{n + 1})")
        out.append(table[(n, n + 1)])
    if len(table) != len(out):
        raise ValueError("spec has non-nearest-neighbour edges")
    return np.array(out)


def build_hamiltonian(spec: ChannelSpec, subspace: str = "H1") -> np.ndarray:
    """Dense real symmetric Hamiltonian of ``spec`` in ``H1`` or ``H01``."""
    n = spec.n_sites
    h1 = np.zeros((n, n))
    for i, j, J in spec.edges:
        h1[i - 1, j - 1] = J
        h1[j - 1, i - 1] = J
    h1[np.diag_indices(n)] = spec.field_shift
    if subspace == "H1":
        return h1
    if subspace == "H01":
        h01 = np.zeros((n + 1, n + 1))
        h01[1:, 1:] = h1
        return h01
    raise ValueError(f"unknown subspace {subspace!r}; expected 'H1' or 'H01'")
