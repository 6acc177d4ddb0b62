"""Exact Lévy-Prokhorov machinery for equal-weight empirical measures.

For empirical measures P (Np atoms) and Q (Nq atoms), the one-sided
deficiency at radius eps,

    def(P, Q, eps) = max over atom subsets S of [ P(S) - Q(S^eps) ],

is computed exactly as 1 minus the value of a bipartite max-flow: source ->
P-atom i with capacity 1/Np, Q-atom j -> sink with capacity 1/Nq, and an
uncapped edge i -> j whenever dist(i, j) <= eps.  Max-flow/min-cut duality
identifies the optimal subset S with the source side of a minimum cut, which
is returned as the witness.  Capacities are scaled by lcm(Np, Nq) so the
solver works on integers and feasibility is never a floating-point judgement
call.

Distances then come from the one-dimensional crossing problem

    eps* = inf { eps > 0 : deficiency(eps) <= eps }

(one direction for the one-sided distance, the max of both directions for the
Lévy-Prokhorov metric).  The deficiency is a right-continuous nonincreasing
step function that only changes at pairwise distances, so eps* equals
max(d_k, v_k) on the first inter-breakpoint interval that contains a
solution; a binary search over the sorted breakpoints finds it exactly.  A
subset-enumeration brute force (<= 12 atoms) reproduces the same integers and
serves as the oracle for the flow route.

Conventions: neighborhoods use non-strict distances (<= eps); the strict and
non-strict conventions differ only at finitely many breakpoint radii and
yield the same infimum.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

__all__ = [
    "EmpiricalMeasure",
    "DeficiencyReport",
    "deficiency",
    "deficiency_bruteforce",
    "prokhorov_distance",
    "one_sided_prokhorov",
    "bruteforce_prokhorov",
    "bruteforce_one_sided",
    "distance_matrix",
    "prokhorov_from_matrix",
    "one_sided_from_matrix",
    "read_atoms_csv",
]

_BRUTEFORCE_LIMIT = 12


@dataclass(frozen=True)
class EmpiricalMeasure:
    """Equal-weight atoms in R (metric 'absdiff') or path space (metric 'supnorm')."""

    atoms: np.ndarray
    metric: str = "absdiff"

    def __post_init__(self):
        arr = np.asarray(self.atoms, dtype=float)
        if self.metric == "absdiff":
            if arr.ndim != 1 or len(arr) == 0:
                raise ValueError("real-line measure needs a nonempty 1-d atom array")
        elif self.metric == "supnorm":
            if arr.ndim != 2 or arr.shape[0] == 0:
                raise ValueError("path measure needs a nonempty (count, knots) atom matrix")
        else:
            raise ValueError(f"unknown metric tag {self.metric!r}")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "atoms", arr)

    @classmethod
    def from_reals(cls, values) -> "EmpiricalMeasure":
        return cls(np.asarray(values, dtype=float), "absdiff")

    @classmethod
    def from_paths(cls, sample) -> "EmpiricalMeasure":
        knots = sample.knots if hasattr(sample, "knots") else np.asarray(sample, dtype=float)
        return cls(knots, "supnorm")

    @property
    def size(self) -> int:
        return self.atoms.shape[0]


@dataclass(frozen=True)
class DeficiencyReport:
    epsilon: float
    deficiency: float
    witness: tuple[int, ...]

    def to_json(self) -> str:
        return json.dumps(
            {
                "epsilon": self.epsilon,
                "deficiency": self.deficiency,
                "witness_indices": list(self.witness),
            }
        )


def _check_pair(P: EmpiricalMeasure, Q: EmpiricalMeasure) -> None:
    if P.metric != Q.metric:
        raise ValueError(f"metric tags differ: {P.metric!r} vs {Q.metric!r}")
    if P.metric == "supnorm" and P.atoms.shape[1] != Q.atoms.shape[1]:
        raise ValueError("path measures must share the same knot grid")


def distance_matrix(P: EmpiricalMeasure, Q: EmpiricalMeasure, chunk: int = 64) -> np.ndarray:
    """Pairwise distances, |p - q| or sup over knots; chunked to bound memory."""
    _check_pair(P, Q)
    if P.metric == "absdiff":
        return np.abs(P.atoms[:, None] - Q.atoms[None, :])
    out = np.empty((P.size, Q.size))
    for start in range(0, P.size, chunk):
        block = P.atoms[start : start + chunk]
        out[start : start + chunk] = np.abs(block[:, None, :] - Q.atoms[None, :, :]).max(axis=2)
    return out


def _flow_deficit(dmat: np.ndarray, eps: float) -> tuple[int, int, tuple[int, ...]]:
    """(unmatched integer mass, scale L, witness subset) at radius eps, by max flow."""
    npp, nq = dmat.shape
    L = math.lcm(npp, nq)
    cap_p = L // npp
    cap_q = L // nq
    source, sink = 0, npp + nq + 1
    rows_i, cols_j = np.nonzero(dmat <= eps)

    row = np.concatenate(
        [
            np.zeros(npp, dtype=np.int64),
            rows_i + 1,
            np.arange(nq, dtype=np.int64) + npp + 1,
        ]
    )
    col = np.concatenate(
        [
            np.arange(npp, dtype=np.int64) + 1,
            cols_j + npp + 1,
            np.full(nq, sink, dtype=np.int64),
        ]
    )
    data = np.concatenate(
        [
            np.full(npp, cap_p, dtype=np.int32),
            np.full(len(rows_i), L, dtype=np.int32),
            np.full(nq, cap_q, dtype=np.int32),
        ]
    )
    graph = csr_matrix((data, (row, col)), shape=(sink + 1, sink + 1), dtype=np.int32)
    result = maximum_flow(graph, source, sink)
    flow_value = int(result.flow_value)

    # witness: P atoms on the source side of the min cut (residual reachability)
    flow = result.flow
    f_source = np.asarray(flow[[source], 1 : npp + 1].todense()).ravel()
    f_pq = np.asarray(flow[1 : npp + 1, npp + 1 : npp + nq + 1].todense())
    neighbors = dmat <= eps
    reach_p = f_source < cap_p
    reach_q = np.zeros(nq, dtype=bool)
    changed = True
    while changed:
        new_q = np.logical_or.reduce(neighbors[reach_p], axis=0) if reach_p.any() else np.zeros(nq, bool)
        new_q &= ~reach_q
        reach_q |= new_q
        changed = False
        if new_q.any():
            # reverse residual edges: P atoms pushing flow into newly reached Q atoms
            new_p = (f_pq[:, new_q] > 0).any(axis=1) & ~reach_p
            if new_p.any():
                reach_p |= new_p
                changed = True
    witness = tuple(int(i) for i in np.nonzero(reach_p)[0])
    return L - flow_value, L, witness


def deficiency(P: EmpiricalMeasure, Q: EmpiricalMeasure, eps: float) -> DeficiencyReport:
    """Exact one-sided deficiency sup_S [P(S) - Q(S^eps)] with a witness subset."""
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    dmat = distance_matrix(P, Q)
    deficit, L, witness = _flow_deficit(dmat, eps)
    return DeficiencyReport(float(eps), deficit / L, witness)


def _enum_deficit(dmat: np.ndarray, eps: float) -> tuple[int, int, tuple[int, ...]]:
    """Brute-force twin of _flow_deficit: enumerate all P-atom subsets."""
    npp, nq = dmat.shape
    if npp > _BRUTEFORCE_LIMIT or nq > _BRUTEFORCE_LIMIT:
        raise ValueError(f"brute force limited to {_BRUTEFORCE_LIMIT} atoms per side")
    L = math.lcm(npp, nq)
    cap_p = L // npp
    cap_q = L // nq
    neigh_masks = []
    close = dmat <= eps
    for i in range(npp):
        mask = 0
        for j in np.nonzero(close[i])[0]:
            mask |= 1 << int(j)
        neigh_masks.append(mask)
    best, best_subset = 0, 0
    for subset in range(1 << npp):
        cover = 0
        s = subset
        while s:
            i = (s & -s).bit_length() - 1
            cover |= neigh_masks[i]
            s &= s - 1
        value = cap_p * subset.bit_count() - cap_q * cover.bit_count()
        if value > best:
            best, best_subset = value, subset
    witness = tuple(i for i in range(npp) if best_subset >> i & 1)
    return best, L, witness


def deficiency_bruteforce(P: EmpiricalMeasure, Q: EmpiricalMeasure, eps: float) -> DeficiencyReport:
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    deficit, L, witness = _enum_deficit(distance_matrix(P, Q), eps)
    return DeficiencyReport(float(eps), deficit / L, witness)


def _crossing(breaks: np.ndarray, value_at) -> float:
    """Smallest eps with value_at(eps) <= eps, for a right-continuous
    nonincreasing step function changing only at the sorted breakpoints."""

    @lru_cache(maxsize=None)
    def val(k: int) -> float:
        return value_at(float(breaks[k]))

    last = len(breaks) - 1

    def valid(k: int) -> bool:
        if k == last:
            return True
        return max(float(breaks[k]), val(k)) < float(breaks[k + 1])

    lo, hi = 0, last
    while lo < hi:
        mid = (lo + hi) // 2
        if valid(mid):
            hi = mid
        else:
            lo = mid + 1
    return max(float(breaks[lo]), val(lo))


def _breakpoints(dmat: np.ndarray) -> np.ndarray:
    return np.unique(np.concatenate([[0.0], dmat.ravel()]))


def prokhorov_from_matrix(dmat: np.ndarray) -> float:
    """Two-sided crossing on a precomputed distance matrix (rows = P atoms)."""

    def value_at(eps: float) -> float:
        a, L, _ = _flow_deficit(dmat, eps)
        b, _, _ = _flow_deficit(dmat.T, eps)
        return max(a, b) / L

    return _crossing(_breakpoints(dmat), value_at)


def one_sided_from_matrix(dmat: np.ndarray) -> float:
    """One-sided crossing on a precomputed distance matrix (rows = P atoms)."""

    def value_at(eps: float) -> float:
        a, L, _ = _flow_deficit(dmat, eps)
        return a / L

    return _crossing(_breakpoints(dmat), value_at)


def prokhorov_distance(P: EmpiricalMeasure, Q: EmpiricalMeasure) -> float:
    """inf{eps > 0 : deficiency <= eps in both directions}; exact crossing search."""
    return prokhorov_from_matrix(distance_matrix(P, Q))


def one_sided_prokhorov(P: EmpiricalMeasure, Q: EmpiricalMeasure) -> float:
    """inf{eps > 0 : deficiency(P, Q, eps) <= eps} (single direction)."""
    return one_sided_from_matrix(distance_matrix(P, Q))


def bruteforce_prokhorov(P: EmpiricalMeasure, Q: EmpiricalMeasure) -> float:
    """Oracle twin of prokhorov_distance via subset enumeration (<= 12 atoms)."""
    dmat = distance_matrix(P, Q)

    def value_at(eps: float) -> float:
        a, L, _ = _enum_deficit(dmat, eps)
        b, _, _ = _enum_deficit(dmat.T, eps)
        return max(a, b) / L

    return _crossing(_breakpoints(dmat), value_at)


def bruteforce_one_sided(P: EmpiricalMeasure, Q: EmpiricalMeasure) -> float:
    dmat = distance_matrix(P, Q)

    def value_at(eps: float) -> float:
        a, L, _ = _enum_deficit(dmat, eps)
        return a / L

    return _crossing(_breakpoints(dmat), value_at)


def read_atoms_csv(path) -> EmpiricalMeasure:
    """Load atoms from CSV: one row per atom; one column = reals, several = path knots."""
    rows = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].startswith("#") or row[0].startswith("n="):
                continue
            rows.append([float(v) for v in row])
    arr = np.array(rows)
    if arr.ndim != 2:
        raise ValueError(f"no atoms found in {path}")
    if arr.shape[1] == 1:
        return EmpiricalMeasure.from_reals(arr[:, 0])
    return EmpiricalMeasure.from_paths(arr)
