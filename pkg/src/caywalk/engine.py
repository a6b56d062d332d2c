"""Certification of state transfer from character data.

All tests reduce to one residual: transfer from the identity vertex to a
central element z at time t holds exactly when every irreducible character
satisfies chi(z)/chi(e) = exp(t * theta_chi). Everything here consumes only
character rows, class sizes, and class maps, so imported tables work the same
as group-backed ones.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .cayley import CayleyGraph, connection_character_sums
from .characters import CharacterTable, GaloisData, ImportedTable
from .config import (
    MAX_DENOMINATOR,
    RATIONAL_TOL,
    DEFAULT_CONFIG,
    RunConfig,
)
from .errors import (
    InvalidParameterError,
    InvariantBreachError,
    SchemaError,
)
from .groups import (
    ConjugacyData,
    GroupTable,
    derived_series_solvable,
    power,
    subgroup_closure,
)

ALLOWED_MST_SIZES = (2, 3, 4, 6)

# Symbolic transfer times used by fixtures and the CLI.
TIME_TAGS = {
    "2pi/3sqrt3": 2.0 * math.pi / (3.0 * math.sqrt(3.0)),
    "pi/2": math.pi / 2.0,
    "pi/4": math.pi / 4.0,
}


def parse_time(text: str | float) -> float:
    """A transfer time from a symbolic tag, a solved:<float> tag, or a float."""
    if isinstance(text, (int, float)):
        return float(text)
    if text in TIME_TAGS:
        return TIME_TAGS[text]
    if text.startswith("solved:"):
        return float(text.split(":", 1)[1])
    try:
        return float(text)
    except ValueError:
        raise InvalidParameterError(f"unrecognized time {text!r}") from None


# ---------------------------------------------------------------------------
# class-level criterion core

def criterion_data(table: CharacterTable, conn_classes: Sequence[int],
                   z_class: int) -> tuple[np.ndarray, np.ndarray]:
    """(ratios, thetas): chi(z)/chi(e) and the adjacency eigenvalues per row."""
    sums = connection_character_sums(table, conn_classes)
    thetas = (sums - np.conj(sums)) / table.degrees
    ratios = table.values[:, z_class] / table.degrees
    return ratios, thetas


def residual_at(ratios: np.ndarray, thetas: np.ndarray, t: float) -> float:
    return float(np.max(np.abs(ratios - np.exp(t * thetas))))


@dataclass(frozen=True)
class CheckResult:
    accepted: bool
    residual: float
    reason: str | None = None


def check_transfer_classes(table: CharacterTable, conn_classes: Sequence[int],
                           z_class: int, t: float,
                           tol: float = DEFAULT_CONFIG.residual_tol) -> CheckResult:
    """Criterion evaluated purely on class data (imported tables included)."""
    if int(table.class_sizes[z_class]) != 1:
        return CheckResult(accepted=False, residual=math.inf,
                           reason="target class is not central")
    ratios, thetas = criterion_data(table, conn_classes, z_class)
    res = residual_at(ratios, thetas, t)
    return CheckResult(accepted=res < tol, residual=res)


def check_pst_at(graph: CayleyGraph, table: CharacterTable, z: int, t: float,
                 tol: float = DEFAULT_CONFIG.residual_tol) -> CheckResult:
    """Does the walk send the identity vertex exactly to z at time t?"""
    if not (0 <= z < graph.order):
        raise InvalidParameterError(f"element {z} out of range")
    if z not in graph.conj.center:
        return CheckResult(accepted=False, residual=math.inf,
                           reason="target is not central")
    z_class = int(graph.conj.class_of[z])
    return check_transfer_classes(table, graph.conn.class_indices, z_class, t, tol)


def check_pst_pair(graph: CayleyGraph, table: CharacterTable, a: int, b: int,
                   t: float, tol: float = DEFAULT_CONFIG.residual_tol) -> CheckResult:
    """Transfer a -> b reduces to identity -> b * a^-1 by vertex transitivity."""
    g = graph.group
    z = int(g.mul[b, g.inv[a]])
    return check_pst_at(graph, table, z, t, tol)


# ---------------------------------------------------------------------------
# minimal-time search

@dataclass(frozen=True)
class PSTCertificate:
    """A certified transfer: identity -> z at time tau with criterion residual."""

    z: int
    tau: float
    residual: float
    k: int
    phase: float = 1.0
    provenance: str = "criterion"


@dataclass(frozen=True)
class SolveOutcome:
    certificate: PSTCertificate | None
    near_miss_residual: float
    near_miss_time: float | None = None


def _candidate_times(ratios: np.ndarray, thetas: np.ndarray,
                     k_bound: int) -> tuple[np.ndarray, np.ndarray]:
    """Times solving the reference character's phase equation, k in -K..K."""
    t_imag = thetas.imag
    ref = int(np.argmax(np.abs(t_imag)))
    t_ref = t_imag[ref]
    alpha = float(np.angle(ratios[ref])) % (2.0 * math.pi)
    ks = np.arange(-k_bound, k_bound + 1)
    times = (alpha + 2.0 * math.pi * ks) / t_ref
    keep = times > 1e-12
    times, ks = times[keep], ks[keep]
    order = np.argsort(times)  # ascending, so the first hit is minimal
    return times[order], ks[order]


def solve_pst_time(graph: CayleyGraph, table: CharacterTable, z: int,
                   config: RunConfig = DEFAULT_CONFIG,
                   period_mode: bool = False) -> SolveOutcome:
    """Minimal positive transfer time identity -> z, or a near-miss diagnostic.

    With period_mode the target is the identity itself and the result is the
    least commensurable return time among the candidates (no minimality proof
    beyond the candidate family).
    """
    g = graph.group
    if z == g.identity and not period_mode:
        raise InvalidParameterError("z = identity needs period_mode=True")
    if z not in graph.conj.center:
        raise InvalidParameterError("target must be central")
    z_class = int(graph.conj.class_of[z])
    ratios, thetas = criterion_data(table, graph.conn.class_indices, z_class)

    tol = config.residual_tol
    constrained = np.abs(ratios - 1.0) > tol
    static = np.abs(thetas.imag) <= tol
    if np.all(static):
        return SolveOutcome(certificate=None, near_miss_residual=math.inf)
    if np.any(constrained & static):
        # A character that separates z from e but never moves rules out
        # every time at once: exp(t * 0) = 1 can never equal its ratio.
        return SolveOutcome(certificate=None, near_miss_residual=math.inf)

    k_bound = config.candidate_factor * g.order
    times, ks = _candidate_times(ratios, thetas, k_bound)
    if times.size == 0:
        return SolveOutcome(certificate=None, near_miss_residual=math.inf)

    residuals = np.max(np.abs(ratios[None, :] - np.exp(np.outer(times, thetas))), axis=1)
    hits = np.nonzero(residuals < tol)[0]
    if hits.size:
        first = int(hits[0])
        cert = PSTCertificate(z=z, tau=float(times[first]),
                              residual=float(residuals[first]), k=int(ks[first]))
        return SolveOutcome(certificate=cert, near_miss_residual=float(residuals[first]),
                            near_miss_time=float(times[first]))
    best = int(np.argmin(residuals))
    return SolveOutcome(certificate=None, near_miss_residual=float(residuals[best]),
                        near_miss_time=float(times[best]))


# ---------------------------------------------------------------------------
# transfer sets and their structure

@dataclass(frozen=True)
class MSTReport:
    """Everything the walk certifies about transfers out of the identity."""

    S_e: tuple[int, ...]
    size: int
    generator: int | None
    minimal_time: float | None
    certificates: Mapping[int, PSTCertificate]


def compute_S_e(graph: CayleyGraph, table: CharacterTable,
                config: RunConfig = DEFAULT_CONFIG) -> MSTReport:
    """Solve for every central target and assemble the transfer set.

    Structural facts are verified, not assumed: the set must be the cyclic
    group generated by the earliest target, its size must lie in {2, 3, 4, 6},
    and each power must transfer at the matching multiple of the minimal time.
    A violation raises InvariantBreachError rather than being repaired.
    """
    g = graph.group
    certificates: dict[int, PSTCertificate] = {}
    for z in graph.conj.center:
        if z == g.identity:
            continue
        outcome = solve_pst_time(graph, table, z, config)
        if outcome.certificate is not None:
            certificates[z] = outcome.certificate

    if not certificates:
        return MSTReport(S_e=(g.identity,), size=1, generator=None,
                         minimal_time=None, certificates={})

    generator = min(certificates, key=lambda z: (certificates[z].tau, z))
    tau_min = certificates[generator].tau
    members = tuple(sorted({g.identity, *certificates.keys()}))
    expected = subgroup_closure(g, [generator])
    if members != expected:
        raise InvariantBreachError(
            f"transfer set {members} is not the cyclic group {expected}")
    size = len(members)
    if size not in ALLOWED_MST_SIZES:
        raise InvariantBreachError(f"transfer set size {size} is not in {ALLOWED_MST_SIZES}")
    for n in range(1, size):
        zn = power(g, generator, n)
        res = check_pst_at(graph, table, zn, n * tau_min, config.residual_tol)
        if not res.accepted:
            raise InvariantBreachError(
                f"power law fails: no transfer to generator^{n} at {n} * tau_min")
    return MSTReport(S_e=members, size=size, generator=generator,
                     minimal_time=tau_min, certificates=certificates)


def partition_into_transfer_classes(graph: CayleyGraph,
                                    report: MSTReport) -> tuple[tuple[int, ...], ...] | None:
    """Cosets of the transfer set, or None when there is no transfer at all."""
    if report.size <= 1:
        return None
    g = graph.group
    assigned = np.full(g.order, -1, dtype=np.int64)
    parts: list[tuple[int, ...]] = []
    members = np.array(report.S_e, dtype=np.int64)
    for v in range(g.order):
        if assigned[v] >= 0:
            continue
        coset = tuple(sorted(int(g.mul[s, v]) for s in members))
        idx = len(parts)
        for u in coset:
            if assigned[u] >= 0:
                raise InvariantBreachError("transfer classes do not partition the vertices")
            assigned[u] = idx
        parts.append(coset)
    if any(len(p) != report.size for p in parts):
        raise InvariantBreachError("transfer classes have unequal sizes")
    return tuple(parts)


# ---------------------------------------------------------------------------
# time arithmetic

@dataclass(frozen=True)
class RationalTime:
    ok: bool
    multiplier: str
    p: int
    q: int


def time_rationality_check(tau: float, size: int,
                           max_denominator: int = MAX_DENOMINATOR,
                           tol: float = RATIONAL_TOL) -> RationalTime:
    """Match tau against p/q * pi/sqrt(3) (sizes 3, 6) or p/q * pi (sizes 2, 4)."""
    if size in (3, 6):
        multiplier = "pi/sqrt3"
        x = tau * math.sqrt(3.0) / math.pi
    else:
        multiplier = "pi"
        x = tau / math.pi
    frac = Fraction(x).limit_denominator(max_denominator)
    ok = frac > 0 and abs(x - float(frac)) < tol
    return RationalTime(ok=ok, multiplier=multiplier,
                        p=frac.numerator, q=frac.denominator)


# ---------------------------------------------------------------------------
# nonexistence and exclusion arguments

@dataclass(frozen=True)
class NonexistenceWitness:
    """Characters separating z from every graph: z outside all kernels, joint field Q.

    Such a set rules out transfer onto <z> for every oriented normal Cayley
    graph on the group, independent of the connection set.
    """

    z: int
    char_indices: tuple[int, ...]
    exponent: int


def _kernel_contains(table: CharacterTable, char_index: int, z_class: int) -> bool:
    row = table.values[char_index]
    return bool(abs(row[z_class] - row[0]) < table.tolerance)


def nonexistence_witness_classes(table: CharacterTable, galois: GaloisData,
                                 z_class: int,
                                 z_label: int = -1) -> NonexistenceWitness | None:
    """Greedy witness search on class-level data."""
    units = set(galois.units)
    covered = {1}
    chosen: list[int] = []
    for i in range(table.n_chars):
        if _kernel_contains(table, i, z_class):
            continue
        stab = set(galois.stabilizers[i])
        if chosen and stab <= covered:
            continue
        chosen.append(i)
        covered = _closure_mod(galois.exponent, covered | stab)
        if covered == units:
            return NonexistenceWitness(z=z_label, char_indices=tuple(chosen),
                                       exponent=galois.exponent)
    return None


def _closure_mod(m: int, seed: set[int]) -> set[int]:
    if m <= 2:
        return {1}
    out = set(seed)
    grew = True
    while grew:
        grew = False
        for x in list(out):
            for y in list(out):
                v = (x * y) % m
                if v not in out:
                    out.add(v)
                    grew = True
    return out


def nonexistence_witness(conj: ConjugacyData, table: CharacterTable,
                         galois: GaloisData, z: int) -> NonexistenceWitness | None:
    if z == conj.group.identity:
        return None
    z_class = int(conj.class_of[z])
    return nonexistence_witness_classes(table, galois, z_class, z_label=z)


@dataclass(frozen=True)
class SolvableReport:
    solvable: bool
    series: tuple[int, ...]
    excluded_sizes: tuple[int, ...]


def solvable_exclusion_report(group: GroupTable) -> SolvableReport:
    """Solvable groups cannot carry a transfer set of size 6."""
    solvable, series = derived_series_solvable(group)
    return SolvableReport(solvable=solvable, series=series,
                          excluded_sizes=(6,) if solvable else ())


# ---------------------------------------------------------------------------
# imported-table claims

def check_imported_claim(imported: ImportedTable, claim: dict,
                         tol: float = DEFAULT_CONFIG.residual_tol) -> dict:
    """Evaluate one transfer claim shipped inside an imported character table.

    Claim schema: {"z_class": int, "time": tag or float,
    "connection_classes": [int, ...]}. The connection classes are validated
    as a proper orientation using the inversion power map before the
    criterion runs.
    """
    needed = {"z_class", "time", "connection_classes"}
    if not needed.issubset(claim):
        raise SchemaError(f"claim missing keys: {sorted(needed - set(claim))}")
    table = imported.table
    n = table.n_classes
    conn = sorted({int(c) for c in claim["connection_classes"]})
    z_class = int(claim["z_class"])
    if not conn or any(not 0 <= c < n for c in conn) or not 0 <= z_class < n:
        raise InvalidParameterError("claim indices out of range")
    inv_map = imported.power_maps.get(table.exponent - 1) if table.exponent > 1 \
        else tuple(range(n))
    if inv_map is None:
        raise SchemaError("imported table lacks the inversion power map")
    if 0 in conn:
        raise InvalidParameterError("claim connection contains the identity class")
    for c in conn:
        if inv_map[c] == c:
            raise InvalidParameterError(f"claim connection class {c} is real")
        if inv_map[c] in conn:
            raise InvalidParameterError(
                f"claim connection contains the inverse pair {c}, {inv_map[c]}")
    t = parse_time(claim["time"])
    res = check_transfer_classes(table, conn, z_class, t, tol)
    return {"z_class": z_class, "time": t, "connection_classes": conn,
            "accepted": res.accepted, "residual": res.residual,
            "reason": res.reason}


# ---------------------------------------------------------------------------
# verdict documents

def verdict_document(graph: CayleyGraph, report: MSTReport,
                     oracle_fidelity: float | None,
                     connected: bool,
                     witnesses: Sequence[NonexistenceWitness] = ()) -> dict:
    if report.minimal_time is not None and report.size in ALLOWED_MST_SIZES:
        rational = time_rationality_check(report.minimal_time, report.size)
        rational_doc = {"ok": rational.ok, "multiplier": rational.multiplier,
                        "p": rational.p, "q": rational.q}
    else:
        rational_doc = None
    residual = max((c.residual for c in report.certificates.values()), default=0.0)
    return {
        "group": graph.group.family_tag,
        "connection_classes": list(graph.conn.class_indices),
        "S_e": list(report.S_e),
        "size": report.size,
        "tau": report.minimal_time,
        "tau_rational": rational_doc,
        "residual": residual,
        "oracle_fidelity": oracle_fidelity,
        "connected": connected,
        "witnesses": [
            {"z": w.z, "characters": list(w.char_indices)} for w in witnesses
        ],
    }
