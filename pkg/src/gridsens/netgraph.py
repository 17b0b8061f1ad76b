"""Network descriptions, nodal susceptance assembly and Kron reduction.

A network file lists nodes with a role (``inverter``, ``interior`` or
``infinite``) and branches with per-unit impedances.  The grounded Laplacian
``B`` is obtained by removing the infinite bus from the nodal susceptance
matrix and Kron-eliminating every interior node, leaving one row per inverter.

Only branch reactance enters ``B`` (``b = 1/x``); resistances are carried in
:class:`Branch` but never used here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path

import numpy as np
from scipy.sparse.csgraph import connected_components

MIN_REACTANCE = 1e-9


class NetworkError(ValueError):
    """Raised for malformed or physically invalid network descriptions."""


class Role(str, Enum):
    INVERTER = "inverter"
    INTERIOR = "interior"
    INFINITE = "infinite"


@dataclass(frozen=True)
class Node:
    id: int
    role: Role


@dataclass(frozen=True)
class Branch:
    from_id: int
    to_id: int
    r_pu: float
    x_pu: float
    scalable: bool = True


@dataclass(frozen=True)
class BaseValues:
    u_base_kv: float = 0.69
    s_base_mva: float = 1.5
    f_base_hz: float = 50.0


@dataclass(frozen=True)
class NetworkSpec:
    nodes: tuple[Node, ...]
    branches: tuple[Branch, ...]
    k: float = 1.0
    base: BaseValues = field(default_factory=BaseValues)

    def __post_init__(self):
        validate(self)

    @property
    def inverter_ids(self) -> list[int]:
        return [nd.id for nd in self.nodes if nd.role is Role.INVERTER]

    @property
    def interior_ids(self) -> list[int]:
        return [nd.id for nd in self.nodes if nd.role is Role.INTERIOR]

    @property
    def infinite_id(self) -> int:
        return next(nd.id for nd in self.nodes if nd.role is Role.INFINITE)


@dataclass(frozen=True)
class GroundedLaplacian:
    """Symmetric positive definite susceptance matrix over inverter nodes.

    Row/column ``i`` corresponds to ``node_order[i]``.
    """

    b: np.ndarray
    node_order: tuple[int, ...]

    def __post_init__(self):
        b = np.asarray(self.b, dtype=float)
        if b.ndim != 2 or b.shape[0] != b.shape[1]:
            raise NetworkError(f"grounded Laplacian must be square, got shape {b.shape}")
        if len(self.node_order) != b.shape[0]:
            raise NetworkError("node_order length does not match matrix size")
        if np.abs(b - b.T).max(initial=0.0) > 1e-12:
            raise NetworkError("grounded Laplacian is not symmetric")
        b.setflags(write=False)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "node_order", tuple(self.node_order))

    @property
    def n(self) -> int:
        return self.b.shape[0]

    @classmethod
    def from_matrix(cls, b, node_order=None) -> "GroundedLaplacian":
        b = np.atleast_2d(np.asarray(b, dtype=float))
        if node_order is None:
            node_order = tuple(range(1, b.shape[0] + 1))
        return cls(b, tuple(node_order))

    def check(self) -> None:
        """Raise :class:`NetworkError` unless ``b`` is a PD M-matrix."""
        off = self.b - np.diag(np.diag(self.b))
        if off.max(initial=0.0) > 1e-12:
            raise NetworkError("grounded Laplacian has positive off-diagonal entries")
        if np.linalg.eigvalsh(self.b)[0] <= 0.0:
            raise NetworkError("grounded Laplacian is not positive definite")


def validate(spec: NetworkSpec) -> None:
    ids = [nd.id for nd in spec.nodes]
    if len(set(ids)) != len(ids):
        raise NetworkError("nodes: duplicate node ids")
    n_inf = sum(nd.role is Role.INFINITE for nd in spec.nodes)
    if n_inf != 1:
        raise NetworkError(f"nodes: expected exactly one infinite node, found {n_inf}")
    if not any(nd.role is Role.INVERTER for nd in spec.nodes):
        raise NetworkError("nodes: at least one inverter node is required")
    if not spec.k > 0:
        raise NetworkError(f"k: scaling factor must be positive, got {spec.k}")
    known = set(ids)
    for i, br in enumerate(spec.branches):
        if br.from_id not in known or br.to_id not in known:
            raise NetworkError(f"branches[{i}]: endpoint {br.from_id}-{br.to_id} references unknown node")
        if br.from_id == br.to_id:
            raise NetworkError(f"branches[{i}]: self-loop at node {br.from_id}")
        if not br.x_pu >= MIN_REACTANCE:
            raise NetworkError(f"branches[{i}].x_pu: reactance must be >= {MIN_REACTANCE}, got {br.x_pu}")
    pos = {nid: i for i, nid in enumerate(ids)}
    adj = np.zeros((len(ids), len(ids)))
    for br in spec.branches:
        adj[pos[br.from_id], pos[br.to_id]] = adj[pos[br.to_id], pos[br.from_id]] = 1.0
    ncomp, _ = connected_components(adj, directed=False)
    if ncomp != 1:
        raise NetworkError(f"branches: network graph is disconnected ({ncomp} components)")


def _parse(data: dict) -> NetworkSpec:
    try:
        base = BaseValues(**{key: float(v) for key, v in data.get("base", {}).items()})
        nodes = tuple(Node(int(nd["id"]), Role(str(nd["role"]).lower())) for nd in data["nodes"])
        branches = tuple(
            Branch(
                int(b["from"]),
                int(b["to"]),
                float(b.get("r_pu", 0.0)),
                float(b["x_pu"]),
                bool(b.get("scalable", True)),
            )
            for b in data["branches"]
        )
        k = float(data.get("k", 1.0))
    except KeyError as exc:
        raise NetworkError(f"missing field {exc.args[0]!r}") from exc
    except (TypeError, ValueError) as exc:
        raise NetworkError(f"schema violation: {exc}") from exc
    return NetworkSpec(nodes, branches, k, base)


def load_network(path) -> NetworkSpec:
    """Read and validate a JSON network file."""
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise NetworkError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise NetworkError(f"{path}: top level must be an object")
    return _parse(data)


def network_to_dict(spec: NetworkSpec) -> dict:
    return {
        "base": {
            "u_base_kv": spec.base.u_base_kv,
            "s_base_mva": spec.base.s_base_mva,
            "f_base_hz": spec.base.f_base_hz,
        },
        "k": spec.k,
        "nodes": [{"id": nd.id, "role": nd.role.value} for nd in spec.nodes],
        "branches": [
            {"from": b.from_id, "to": b.to_id, "r_pu": b.r_pu, "x_pu": b.x_pu, "scalable": b.scalable}
            for b in spec.branches
        ],
    }


def apply_scaling(spec: NetworkSpec) -> NetworkSpec:
    """Fold ``k`` into the impedances of scalable branches; the result has ``k=1``."""
    k = spec.k
    branches = tuple(
        replace(b, r_pu=b.r_pu * k, x_pu=b.x_pu * k) if b.scalable else b for b in spec.branches
    )
    return replace(spec, branches=branches, k=1.0)


def build_full_laplacian(spec: NetworkSpec) -> tuple[np.ndarray, dict[int, int]]:
    """Nodal susceptance matrix with the infinite bus grounded.

    Returns the matrix over every non-infinite node together with the map
    node id -> row index (file order).
    """
    inf = spec.infinite_id
    index = {nd.id: i for i, nd in enumerate(n for n in spec.nodes if n.id != inf)}
    a = np.zeros((len(index), len(index)))
    for br in spec.branches:
        y = 1.0 / br.x_pu
        i, j = index.get(br.from_id), index.get(br.to_id)
        if i is not None:
            a[i, i] += y
        if j is not None:
            a[j, j] += y
        if i is not None and j is not None:
            a[i, j] -= y
            a[j, i] -= y
    return a, index


def kron_reduce(full: np.ndarray, interior_idx, node_order=None) -> GroundedLaplacian:
    """Eliminate ``interior_idx`` from ``full`` by a Schur complement.

    The kept rows keep their relative order.  ``node_order`` labels the kept
    rows; it defaults to 1-based positions.
    """
    full = np.asarray(full, dtype=float)
    elim = sorted(set(int(i) for i in interior_idx))
    keep = [i for i in range(full.shape[0]) if i not in set(elim)]
    if not elim:
        b = full[np.ix_(keep, keep)].copy()
    else:
        a_ii = full[np.ix_(elim, elim)]
        if np.linalg.cond(a_ii) > 1e14:
            raise NetworkError(f"interior block on indices {elim} is singular")
        a_ci = full[np.ix_(keep, elim)]
        b = full[np.ix_(keep, keep)] - a_ci @ np.linalg.solve(a_ii, a_ci.T)
    b = 0.5 * (b + b.T)
    if node_order is None:
        node_order = tuple(i + 1 for i in keep)
    return GroundedLaplacian(b, tuple(node_order))


def grounded_laplacian(spec: NetworkSpec) -> GroundedLaplacian:
    """Scale, assemble and reduce ``spec`` to its inverter-node Laplacian."""
    scaled = apply_scaling(spec)
    full, index = build_full_laplacian(scaled)
    interior = [index[nid] for nid in scaled.interior_ids]
    glap = kron_reduce(full, interior, node_order=scaled.inverter_ids)
    glap.check()
    return glap


def random_network(rng: np.random.Generator, n_nodes: int, n_inverters: int, p_extra: float = 0.3) -> NetworkSpec:
    """Random connected network with one infinite bus, for property tests."""
    if not 2 <= n_inverters + 1 <= n_nodes:
        raise ValueError("need n_inverters >= 1 and room for the infinite bus")
    roles = [Role.INVERTER] * n_inverters + [Role.INTERIOR] * (n_nodes - n_inverters - 1) + [Role.INFINITE]
    nodes = tuple(Node(i + 1, r) for i, r in enumerate(roles))
    order = rng.permutation(n_nodes)
    edges = set()
    for a in range(1, n_nodes):
        b = rng.integers(0, a)
        edges.add(tuple(sorted((order[a], order[b]))))
    for a in range(n_nodes):
        for b in range(a + 1, n_nodes):
            if rng.random() < p_extra:
                edges.add((a, b))
    branches = tuple(
        Branch(int(a) + 1, int(b) + 1, 0.0, float(rng.uniform(0.05, 1.0))) for a, b in sorted(edges)
    )
    return NetworkSpec(nodes, branches, 1.0)
