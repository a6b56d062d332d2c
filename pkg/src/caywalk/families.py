"""Connection-set families with certified transfer, plus fixture plumbing.

Each constructor returns a FamilyCertificate: a group, a class-closed oriented
connection set, the claimed target and time, and the claimed transfer-set
size. Certificates are pinned to JSON fixture files shipped with the package;
dual_verify replays any certificate through both the character criterion and
the matrix-exponential oracle.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Sequence

import numpy as np

from .cayley import (
    CayleyGraph,
    adjacency_matrix,
    is_connected,
    make_connection_set,
    make_symmetric_connection_set,
)
from .characters import character_table_for
from .config import DEFAULT_CONFIG, RunConfig
from .engine import (
    MSTReport,
    check_pst_at,
    compute_S_e,
    parse_time,
    time_rationality_check,
    verdict_document,
)
from .errors import InconsistencyError, InvalidParameterError
from .groups import (
    ConjugacyData,
    GroupTable,
    WreathElement,
    WreathIndexing,
    build_abelian_power,
    build_cyclic,
    build_extraspecial3,
    build_modular_maximal_cyclic,
    build_wreath_sym,
    conjugacy,
    cycle_product,
    digits_of,
    element_order,
    index_of_digits,
    load_group,
    permutation_cycles,
    subgroup_closure,
)
from .oracle import (
    build_hermitian_operator,
    build_operator,
    evolve_column,
    fidelity,
    permutation_check,
)

Z8_TAU_TAG = "solved:0.7853981633974483"


@dataclass(eq=False)
class FamilyCertificate:
    """One claimed transfer instance, self-contained and replayable."""

    name: str
    family: str
    group: GroupTable
    conj: ConjugacyData
    connection_classes: tuple[int, ...]
    z: int
    tau_tag: str
    claimed_size: int | None
    claims_pst: bool = True
    oriented: bool = True
    report_only: bool = False
    group_spec: dict = field(default_factory=dict)
    notes: str = ""

    @property
    def tau(self) -> float:
        return parse_time(self.tau_tag)

    def graph(self) -> CayleyGraph:
        maker = make_connection_set if self.oriented else make_symmetric_connection_set
        return CayleyGraph(group=self.group, conj=self.conj,
                           conn=maker(self.conj, self.connection_classes))


def _classes_of_elements(conj: ConjugacyData, elements: Sequence[int],
                         exact: bool = True) -> tuple[int, ...]:
    """Class indices covering the elements; exact demands a perfect class union."""
    classes = tuple(sorted({int(conj.class_of[g]) for g in elements}))
    covered = sorted(g for c in classes for g in conj.classes[c])
    if exact and covered != sorted(int(g) for g in elements):
        raise InconsistencyError("element set is not a union of conjugacy classes")
    return classes


def _as_indices(connection: Sequence, r: int) -> list[int]:
    out = []
    for w in connection:
        if isinstance(w, (tuple, list)):
            out.append(index_of_digits(w, r))
        else:
            out.append(int(w))
    return out


def family_z3n(n: int, connection: Sequence) -> FamilyCertificate:
    """Z_3^n with any valid oriented connection set.

    The claimed target is the componentwise sum of the connection vectors at
    time 2*pi/(3*sqrt 3); a zero sum degrades the claim to a plain return.
    """
    group = build_abelian_power(3, n)
    conj = conjugacy(group)
    elements = _as_indices(connection, 3)
    classes = _classes_of_elements(conj, elements)
    total = [0] * n
    for w in elements:
        total = [(a + b) % 3 for a, b in zip(total, digits_of(w, 3, n))]
    sigma = index_of_digits(total, 3)
    claims = sigma != group.identity
    return FamilyCertificate(
        name=f"z3_{n}", family="cyclic-3-power", group=group, conj=conj,
        connection_classes=classes, z=sigma, tau_tag="2pi/3sqrt3",
        claimed_size=3 if claims else 1, claims_pst=claims,
        group_spec={"family": "abelian", "r": 3, "n": n},
        notes="" if claims else "zero column sum: periodic return only",
    )


def family_z4n(n: int, connection: Sequence) -> FamilyCertificate:
    """Z_4^n at time pi/2: transfer to twice the connection sum iff it has order 4."""
    group = build_abelian_power(4, n)
    conj = conjugacy(group)
    elements = _as_indices(connection, 4)
    classes = _classes_of_elements(conj, elements)
    total = [0] * n
    for w in elements:
        total = [(a + b) % 4 for a, b in zip(total, digits_of(w, 4, n))]
    sigma_order_four = any(d % 2 == 1 for d in total)
    target = index_of_digits([(2 * d) % 4 for d in total], 4)
    return FamilyCertificate(
        name=f"z4_{n}", family="cyclic-4-power", group=group, conj=conj,
        connection_classes=classes, z=target, tau_tag="pi/2",
        claimed_size=2 if sigma_order_four else 1, claims_pst=sigma_order_four,
        group_spec={"family": "abelian", "r": 4, "n": n},
        notes="size-4 transfer sets do not occur on this family",
    )


def family_extraspecial3(n: int, exponent_type: int = 3,
                         basis_elements: Sequence[int] | None = None) -> FamilyCertificate:
    """Extraspecial 3-group: centre preimages of a quotient basis, plus one
    central generator, transfer onto the whole centre at 2*pi/(3*sqrt 3)."""
    group = build_extraspecial3(n, exponent_type)
    conj = conjugacy(group)
    z = min(c for c in conj.center if c != group.identity)
    if basis_elements is None:
        if exponent_type == 9:
            basis_elements = [group.index_of("x"), group.index_of("y")]
        else:
            basis_elements = [group.index_of(f"x{i + 1}") for i in range(n)]
            basis_elements += [group.index_of(f"y{i + 1}") for i in range(n)]
    basis_elements = [int(b) for b in basis_elements]
    if len(basis_elements) != 2 * n:
        raise InvalidParameterError(f"need 2n = {2 * n} basis elements")
    if len(subgroup_closure(group, basis_elements)) != group.order:
        raise InvalidParameterError("basis images do not span the central quotient")

    elements = set()
    for b in basis_elements:
        elements.update(conj.classes[int(conj.class_of[b])])
    elements.add(z)
    classes = _classes_of_elements(conj, sorted(elements))
    return FamilyCertificate(
        name=f"extraspecial3_{group.order}" + ("_exp9" if exponent_type == 9 else ""),
        family="extraspecial-3", group=group, conj=conj,
        connection_classes=classes, z=z, tau_tag="2pi/3sqrt3",
        claimed_size=3,
        group_spec={"family": "extraspecial3", "n": n, "exponent": exponent_type},
    )


def family_m2(n: int) -> FamilyCertificate:
    """Modular maximal-cyclic group of order 2^n (n >= 5): transfer set of
    size 4 inside the cyclic centre at time pi/4."""
    if n < 5:
        raise InvalidParameterError("the certified family needs n >= 5")
    group = build_modular_maximal_cyclic(n)
    conj = conjugacy(group)
    half = 2 ** (n - 1)

    def elem(i: int, j: int) -> int:
        return 2 * (i % half) + j

    z = elem(2 ** (n - 3), 0)
    elements = {z, elem(2 ** (n - 4), 1), elem(2 ** (n - 2) + 2 ** (n - 4), 1)}
    elements.update(elem(4 * k + 1, 0) for k in range(2 ** (n - 3)))
    classes = _classes_of_elements(conj, sorted(elements))
    return FamilyCertificate(
        name=f"m2_{group.order}", family="modular-2", group=group, conj=conj,
        connection_classes=classes, z=z, tau_tag="pi/4", claimed_size=4,
        group_spec={"family": "m2", "n": n},
    )


def m2_remark_probe() -> FamilyCertificate:
    """Order-16 modular group with the connection set {x^2, x*sigma, x^5*sigma}.

    Shipped report-only: the verdict is whatever the criterion and the oracle
    agree on, with no asserted size.
    """
    group = build_modular_maximal_cyclic(4)
    conj = conjugacy(group)
    elements = [group.index_of("x^2"), group.index_of("x*sigma"),
                group.index_of("x^5*sigma")]
    classes = _classes_of_elements(conj, elements)
    return FamilyCertificate(
        name="m2_16_probe", family="modular-2", group=group, conj=conj,
        connection_classes=classes, z=group.index_of("x^2"), tau_tag="pi/4",
        claimed_size=None, report_only=True,
        group_spec={"family": "m2", "n": 4},
    )


def z8_certificate() -> FamilyCertificate:
    """Cay(Z_8, {1, 2, 5}): transfer set {0, 2, 4, 6} with solved minimal time."""
    group = build_cyclic(8)
    conj = conjugacy(group)
    classes = _classes_of_elements(conj, [1, 2, 5])
    return FamilyCertificate(
        name="z8_125", family="cyclic-8", group=group, conj=conj,
        connection_classes=classes, z=2, tau_tag=Z8_TAU_TAG, claimed_size=4,
        group_spec={"family": "cyclic", "r": 8},
    )


# ---------------------------------------------------------------------------
# wreath lifting

def _ncycles(n: int) -> list[tuple[int, ...]]:
    """Permutations of n >= 2 points that are a single full-length cycle."""
    return [perm for perm in itertools.permutations(range(n))
            if len(permutation_cycles(perm)) == 1]


def _lift_elements(base: GroupTable, wi: WreathIndexing,
                   conn_elements: Sequence[int]) -> list[int]:
    n = wi.n
    e = base.identity
    chosen = set(conn_elements)
    lifted = []
    # One moved coordinate, identity permutation.
    ident = tuple(range(n))
    for pos in range(n):
        for c in conn_elements:
            coords = tuple(c if k == pos else e for k in range(n))
            lifted.append(wi.encode(WreathElement(coords, ident)))
    # Full-cycle permutations whose forward cycle product lands in the set.
    for perm in _ncycles(n):
        cycle = tuple(i + 1 for i in permutation_cycles(perm)[0])
        for coords in itertools.product(range(base.order), repeat=n):
            if cycle_product(base, coords, cycle) in chosen:
                lifted.append(wi.encode(WreathElement(coords, perm)))
    return lifted


def wreath_lift(base_cert: FamilyCertificate, n: int) -> FamilyCertificate:
    """Lift a base certificate to base wr S_n at the same time.

    The lifted connection set pairs single-coordinate insertions with
    full-cycle twists; the target is the diagonal of the base target.
    """
    if n < 2:
        raise InvalidParameterError("need n >= 2")
    base = base_cert.group
    base_conn = base_cert.graph().conn
    group = build_wreath_sym(base, n)
    wi = WreathIndexing(base, n)
    conj = conjugacy(group)
    lifted = _lift_elements(base, wi, base_conn.elements)
    classes = _classes_of_elements(conj, lifted)
    z = wi.diagonal(base_cert.z)
    return FamilyCertificate(
        name=f"lift_{base_cert.name}_s{n}", family="wreath-lift",
        group=group, conj=conj, connection_classes=classes, z=z,
        tau_tag=base_cert.tau_tag,
        claimed_size=element_order(group, z) if base_cert.claims_pst else 1,
        claims_pst=base_cert.claims_pst, oriented=base_cert.oriented,
        group_spec={"family": "wreath", "base": base_cert.group_spec, "n": n},
    )


def undirected_cycle4_certificate() -> FamilyCertificate:
    """Undirected 4-cycle as Cay(Z_4, {1, 3}): antipodal transfer at pi/2."""
    group = build_cyclic(4)
    conj = conjugacy(group)
    classes = _classes_of_elements(conj, [1, 3])
    return FamilyCertificate(
        name="undirected_c4", family="undirected-base", group=group, conj=conj,
        connection_classes=classes, z=2, tau_tag="pi/2", claimed_size=2,
        oriented=False,
        group_spec={"family": "cyclic", "r": 4},
        notes="oracle-only: the oriented criterion does not apply",
    )


# ---------------------------------------------------------------------------
# group specs and fixture files

def build_group_from_spec(spec: dict, max_order: int | None = None) -> GroupTable:
    cap = max_order if max_order is not None else DEFAULT_CONFIG.max_order
    fam = spec.get("family")
    if fam == "cyclic":
        return build_cyclic(int(spec["r"]), cap)
    if fam == "abelian":
        return build_abelian_power(int(spec["r"]), int(spec["n"]), cap)
    if fam == "extraspecial3":
        return build_extraspecial3(int(spec["n"]), int(spec.get("exponent", 3)), cap)
    if fam == "m2":
        return build_modular_maximal_cyclic(int(spec["n"]), cap)
    if fam == "wreath":
        base = build_group_from_spec(spec["base"], cap)
        return build_wreath_sym(base, int(spec["n"]), cap)
    if fam == "file":
        return load_group(spec["path"], cap)
    raise InvalidParameterError(f"unknown group family {fam!r}")


def certificate_to_fixture(cert: FamilyCertificate) -> dict:
    return {
        "name": cert.name,
        "family": cert.family,
        "group": cert.group_spec,
        "connection_classes": list(cert.connection_classes),
        "z": cert.z,
        "tau": cert.tau_tag,
        "claimed_size": cert.claimed_size,
        "claims_pst": cert.claims_pst,
        "oriented": cert.oriented,
        "report_only": cert.report_only,
        "notes": cert.notes,
    }


def fixture_to_certificate(doc: dict) -> FamilyCertificate:
    group = build_group_from_spec(doc["group"])
    conj = conjugacy(group)
    return FamilyCertificate(
        name=doc["name"], family=doc["family"], group=group, conj=conj,
        connection_classes=tuple(int(c) for c in doc["connection_classes"]),
        z=int(doc["z"]), tau_tag=str(doc["tau"]),
        claimed_size=doc.get("claimed_size"),
        claims_pst=bool(doc.get("claims_pst", True)),
        oriented=bool(doc.get("oriented", True)),
        report_only=bool(doc.get("report_only", False)),
        group_spec=doc["group"], notes=doc.get("notes", ""),
    )


def shipped_certificates() -> list[FamilyCertificate]:
    """Rebuild every certificate the fixture files pin, from constructors."""
    base_z3 = family_z3n(1, [(1,)])
    base_z4 = family_z4n(1, [(1,)])
    return [
        base_z3,
        family_z3n(2, [(1, 0), (0, 1), (1, 1)]),
        family_z3n(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)]),
        base_z4,
        family_z4n(2, [(1, 0), (0, 1)]),
        family_extraspecial3(1),
        family_extraspecial3(2),
        family_m2(5),
        z8_certificate(),
        wreath_lift(base_z3, 2),
        wreath_lift(base_z3, 3),
        wreath_lift(base_z4, 2),
        undirected_cycle4_certificate(),
        m2_remark_probe(),
    ]


def load_fixture_documents() -> list[dict]:
    docs = []
    root = resources.files(__package__) / "fixtures"
    for entry in sorted(root.iterdir(), key=lambda p: p.name):
        if entry.name.endswith(".json"):
            docs.append(json.loads(entry.read_text(encoding="utf-8")))
    return docs


def load_fixture_certificates(directory: str | None = None) -> list[FamilyCertificate]:
    if directory is None:
        docs = load_fixture_documents()
    else:
        import pathlib

        docs = [json.loads(p.read_text(encoding="utf-8"))
                for p in sorted(pathlib.Path(directory).glob("*.json"))]
    return [fixture_to_certificate(doc) for doc in docs]


def write_fixture_files(directory: str) -> list[str]:
    """Regenerate the pinned fixture JSON from the constructors."""
    import pathlib

    out = []
    root = pathlib.Path(directory)
    root.mkdir(parents=True, exist_ok=True)
    for cert in shipped_certificates():
        path = root / f"{cert.name}.json"
        path.write_text(json.dumps(certificate_to_fixture(cert), indent=2,
                                   sort_keys=True) + "\n", encoding="utf-8")
        out.append(str(path))
    return out


# ---------------------------------------------------------------------------
# dual verification

@dataclass(eq=False)
class DualReport:
    """Criterion and oracle outcomes for one certificate."""

    name: str
    ok: bool
    messages: list[str]
    criterion_residual: float | None
    oracle_fidelity: float | None
    phase: float | None
    mst: MSTReport | None
    connected: bool
    verdict: dict | None


def dual_verify(cert: FamilyCertificate,
                config: RunConfig = DEFAULT_CONFIG) -> DualReport:
    """Replay a certificate through the criterion and (size permitting) the oracle.

    Report-only certificates cannot fail on their claims; they fail only if
    the criterion and the oracle contradict each other.
    """
    messages: list[str] = []
    graph = cert.graph()
    group = cert.group
    tau = cert.tau
    connected = is_connected(graph)
    run_oracle = group.order <= config.oracle_max_order

    if not cert.oriented:
        # Undirected fixtures are oracle territory only.
        fid = phase = None
        if run_oracle:
            op = build_hermitian_operator(adjacency_matrix(graph))
            fid, entry = fidelity(op, tau, group.identity, cert.z)
            if fid < 1.0 - config.fidelity_gap:
                messages.append(f"oracle fidelity {fid:.12f} below threshold")
        ok = not messages
        return DualReport(name=cert.name, ok=ok, messages=messages,
                          criterion_residual=None, oracle_fidelity=fid,
                          phase=None, mst=None, connected=connected, verdict=None)

    table = character_table_for(group, cert.conj, seed=config.seed,
                                tol=config.value_tol)
    criterion_residual: float | None = None
    mst: MSTReport | None = None
    fid: float | None = None
    phase: float | None = None
    criterion_holds = None

    if cert.claims_pst or cert.report_only:
        target = cert.z
        res = check_pst_at(graph, table, target, tau, config.residual_tol)
        criterion_residual = res.residual
        criterion_holds = res.accepted
        if not res.accepted and not cert.report_only:
            messages.append(
                f"criterion rejected transfer to {target} at {tau:.12g}"
                f" (residual {res.residual:.3e})")
        mst = compute_S_e(graph, table, config)
        if not cert.report_only:
            if cert.claimed_size is not None and mst.size != cert.claimed_size:
                messages.append(f"transfer set size {mst.size} != claimed {cert.claimed_size}")
            if mst.minimal_time is None or abs(mst.minimal_time - tau) > 1e-9:
                got = "none" if mst.minimal_time is None else f"{mst.minimal_time:.12g}"
                messages.append(f"minimal time {got} does not match the pinned {tau:.12g}")
            rational = time_rationality_check(tau, mst.size)
            if not rational.ok:
                messages.append("pinned time is not a small rational multiple")
    else:
        # Degenerate claim: the walk returns to the start, nothing transfers.
        res = check_pst_at(graph, table, group.identity, tau, config.residual_tol)
        criterion_residual = res.residual
        criterion_holds = res.accepted
        if not res.accepted:
            messages.append(f"no periodic return at {tau:.12g} (residual {res.residual:.3e})")
        mst = compute_S_e(graph, table, config)
        if mst.size != 1:
            messages.append("unexpected transfer despite a degenerate claim")

    if run_oracle:
        op = build_operator(adjacency_matrix(graph))
        if cert.claims_pst or cert.report_only:
            fid, entry = fidelity(op, tau, group.identity, cert.z)
            phase = float(entry.real)
            oracle_holds = fid > 1.0 - config.fidelity_gap and entry.real > 0
            if cert.report_only:
                if criterion_holds is not None and oracle_holds != criterion_holds:
                    messages.append("criterion and oracle disagree on the probe")
            else:
                if fid < 1.0 - config.fidelity_gap:
                    messages.append(f"oracle fidelity {fid:.12f} below threshold")
                elif entry.real < 0:
                    messages.append("oracle phase is not +1")
            if mst is not None and mst.size > 1 and mst.minimal_time is not None:
                perm = permutation_check(op, mst.minimal_time)
                if not perm.ok or not perm.fixed_point_free or \
                        not perm.commutes_with_generator or perm.order != mst.size:
                    if not cert.report_only:
                        messages.append("transfer permutation structure check failed")
        else:
            col = np.abs(evolve_column(op, tau, group.identity))
            fid = float(col[group.identity])
            col[group.identity] = 0.0
            stray = float(col.max())
            if fid < 1.0 - config.fidelity_gap:
                messages.append(f"periodic return fidelity {fid:.12f} below threshold")
            if stray > 0.999:
                messages.append(f"unexpected transfer peak {stray:.6f} at a degenerate claim")

    verdict = None
    if mst is not None:
        verdict = verdict_document(graph, mst, fid, connected)
        verdict["name"] = cert.name
    ok = not messages
    return DualReport(name=cert.name, ok=ok, messages=messages,
                      criterion_residual=criterion_residual, oracle_fidelity=fid,
                      phase=phase, mst=mst, connected=connected, verdict=verdict)
