"""Oriented Cayley graphs whose connection sets are unions of conjugacy classes.

An oriented connection set contains no identity, no self-inverse class, and at
most one class from each inverse pair, so the signed adjacency matrix is skew
symmetric. The symmetric variant (inverse-closed sets, 0/1 adjacency) exists
for the undirected lifting fixture.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    InconsistencyError,
    InvalidParameterError,
    OrientationError,
)
from .characters import CharacterTable
from .groups import ConjugacyData, GroupTable, digits_of, subgroup_closure


@dataclass(frozen=True)
class ConnectionSet:
    """A validated class-closed connection set, stored both ways."""

    class_indices: tuple[int, ...]
    elements: tuple[int, ...]
    oriented: bool = True

    def __len__(self) -> int:
        return len(self.elements)


@dataclass(frozen=True, eq=False)
class CayleyGraph:
    group: GroupTable
    conj: ConjugacyData
    conn: ConnectionSet

    @property
    def order(self) -> int:
        return self.group.order


def _gather(conj: ConjugacyData, class_indices: Iterable[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    idx = sorted({int(c) for c in class_indices})
    if not idx:
        raise InvalidParameterError("connection set cannot be empty")
    for c in idx:
        if not (0 <= c < len(conj.classes)):
            raise InvalidParameterError(f"class index {c} out of range")
    elements = sorted(g for c in idx for g in conj.classes[c])
    return tuple(idx), tuple(elements)


def make_connection_set(conj: ConjugacyData, class_indices: Iterable[int]) -> ConnectionSet:
    """Oriented connection set from class indices; every violation is collected."""
    idx, elements = _gather(conj, class_indices)
    chosen = set(idx)
    violations: list[tuple[str, tuple[int, ...]]] = []
    identity_class = int(conj.class_of[conj.group.identity])
    reported_pairs = set()
    for c in idx:
        if c == identity_class:
            violations.append((OrientationError.RULE_IDENTITY, (c,)))
            continue
        cinv = conj.class_inv[c]
        if cinv == c:
            violations.append((OrientationError.RULE_REAL, (c,)))
        elif cinv in chosen and (cinv, c) not in reported_pairs:
            violations.append((OrientationError.RULE_INVERSE_PAIR, (c, cinv)))
            reported_pairs.add((c, cinv))
    if violations:
        raise OrientationError(violations)
    return ConnectionSet(class_indices=idx, elements=elements, oriented=True)


def make_symmetric_connection_set(conj: ConjugacyData,
                                  class_indices: Iterable[int]) -> ConnectionSet:
    """Inverse-closed connection set (undirected graphs); identity still barred."""
    idx, elements = _gather(conj, class_indices)
    chosen = set(idx)
    violations: list[tuple[str, tuple[int, ...]]] = []
    identity_class = int(conj.class_of[conj.group.identity])
    for c in idx:
        if c == identity_class:
            violations.append((OrientationError.RULE_IDENTITY, (c,)))
        elif conj.class_inv[c] not in chosen:
            violations.append((OrientationError.RULE_INVERSE_PAIR, (c, conj.class_inv[c])))
    if violations:
        raise OrientationError(violations)
    return ConnectionSet(class_indices=idx, elements=elements, oriented=False)


def cayley_graph(group: GroupTable, conj: ConjugacyData,
                 class_indices: Iterable[int], oriented: bool = True) -> CayleyGraph:
    maker = make_connection_set if oriented else make_symmetric_connection_set
    return CayleyGraph(group=group, conj=conj, conn=maker(conj, class_indices))


def adjacency_matrix(graph: CayleyGraph) -> np.ndarray:
    """Signed adjacency: the arc g -> c*g puts +1 at [c*g, g] and -1 at [g, c*g].

    Columns index the source vertex, so exp(tA) applied to a canonical basis
    vector evolves the walk that starts there. For a symmetric connection set
    the result is the usual 0/1 adjacency matrix.
    """
    n = graph.order
    mul = graph.group.mul
    inv = graph.group.inv
    cols = np.arange(n)
    a = np.zeros((n, n), dtype=np.float64)
    for c in graph.conn.elements:
        a[mul[c, cols], cols] += 1.0
        if graph.conn.oriented:
            a[mul[int(inv[c]), cols], cols] -= 1.0
    return a


@dataclass(frozen=True)
class Spectrum:
    """Per-character eigenvalue data of the signed adjacency matrix."""

    theta: np.ndarray        # complex, one entry per character
    char_sums: np.ndarray    # chi(C) = sum over connection elements

    @property
    def imag(self) -> np.ndarray:
        return self.theta.imag.copy()


def connection_character_sums(table: CharacterTable,
                              class_indices: Sequence[int]) -> np.ndarray:
    idx = np.asarray(class_indices, dtype=np.int64)
    weights = table.class_sizes[idx].astype(np.float64)
    return table.values[:, idx] @ weights


def spectrum(graph: CayleyGraph, table: CharacterTable) -> Spectrum:
    """theta_chi = (chi(C) - conj chi(C)) / chi(e) for each character row.

    Purely imaginary by skew symmetry; a real part beyond tolerance means the
    table does not belong to this graph's group.
    """
    if table.n_classes != len(graph.conj.classes):
        raise InconsistencyError("character table and graph disagree on class count")
    sums = connection_character_sums(table, graph.conn.class_indices)
    theta = (sums - np.conj(sums)) / table.degrees
    scale = max(1.0, float(len(graph.conn)))
    if np.max(np.abs(theta.real)) > table.tolerance * scale:
        raise InconsistencyError("spectrum has a real part; table/graph mismatch")
    trace = np.sum(table.degrees.astype(float) ** 2 * theta)
    if abs(trace) > table.tolerance * graph.order * scale:
        raise InconsistencyError("spectrum trace is nonzero; table/graph mismatch")
    return Spectrum(theta=theta, char_sums=sums)


def abelian_residue_counts(group: GroupTable, conn: ConnectionSet,
                           v: Sequence[int], r: int) -> np.ndarray:
    """counts[j] = number of connection elements w with v.w = j (mod r)."""
    n = len(v)
    if r**n != group.order:
        raise InvalidParameterError("digit shape does not match the group order")
    counts = np.zeros(r, dtype=np.int64)
    for w in conn.elements:
        dots = sum(int(a) * b for a, b in zip(v, digits_of(w, r, n))) % r
        counts[dots] += 1
    return counts


def theta_from_residue_counts(counts: np.ndarray, r: int) -> complex:
    """2i * sum_j counts[j] sin(2 pi j / r), the abelian eigenvalue formula."""
    j = np.arange(r)
    return complex(2j * np.sum(counts * np.sin(2 * np.pi * j / r)))


def idempotent(graph: CayleyGraph, table: CharacterTable, char_index: int) -> np.ndarray:
    """Spectral projector E[g, h] = chi(h g^-1) * chi(e) / |G|."""
    group = graph.group
    n = group.order
    # X[h, g] = h * g^-1, built column-by-column over g.
    x = group.mul[:, group.inv]
    vals = table.values[char_index]
    deg = float(table.degrees[char_index])
    return (deg / n) * vals[graph.conj.class_of[x]].T


def is_connected(graph: CayleyGraph) -> bool:
    return len(subgroup_closure(graph.group, graph.conn.elements)) == graph.order


def enumerate_oriented_class_unions(conj: ConjugacyData,
                                    max_classes: int | None = None) -> Iterator[ConnectionSet]:
    """All valid oriented connection sets, one representative per global inversion.

    Classes come in inverse pairs; each pair contributes its lexicographically
    smaller index first. A set is emitted only if its index tuple is smaller
    than that of its inverted image, so exactly one of C, C^-1 appears.
    """
    identity_class = int(conj.class_of[conj.group.identity])
    pairs = []
    for c in range(len(conj.classes)):
        cinv = conj.class_inv[c]
        if c == identity_class or cinv == c or cinv < c:
            continue
        pairs.append((c, cinv))
    cap = len(pairs) if max_classes is None else min(max_classes, len(pairs))

    for count in range(1, cap + 1):
        for combo in itertools.combinations(pairs, count):
            for orientation in itertools.product((0, 1), repeat=count):
                chosen = tuple(sorted(pair[side] for pair, side in zip(combo, orientation)))
                inverted = tuple(sorted(conj.class_inv[c] for c in chosen))
                if chosen <= inverted:
                    yield make_connection_set(conj, chosen)


# ---------------------------------------------------------------------------
# exports

def graph_to_dot(graph: CayleyGraph) -> str:
    directed = graph.conn.oriented
    lines = ["digraph cayley {" if directed else "graph cayley {"]
    edge = "->" if directed else "--"
    labels = graph.group.labels
    mul = graph.group.mul
    for g in range(graph.order):
        lines.append(f'  n{g} [label="{labels[g]}"];')
    for g in range(graph.order):
        for c in graph.conn.elements:
            h = int(mul[c, g])
            if directed or g < h:
                lines.append(f"  n{g} {edge} n{h};")
    lines.append("}")
    return "\n".join(lines)


def adjacency_to_csv(matrix: np.ndarray) -> str:
    rows = [",".join(str(int(x)) for x in row) for row in matrix]
    return "\n".join(rows) + "\n"


def spectrum_report(table: CharacterTable, spec: Spectrum) -> list[dict]:
    out = []
    for i in range(table.n_chars):
        out.append({
            "character": i,
            "degree": int(table.degrees[i]),
            "theta_imag": float(spec.theta[i].imag),
            "multiplicity": int(table.degrees[i]) ** 2,
        })
    return out
