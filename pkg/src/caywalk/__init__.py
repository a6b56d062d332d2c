"""Continuous quantum walks on oriented normal Cayley graphs.

The package certifies perfect and multiple state transfer on such graphs two
independent ways: a character-theoretic criterion evaluated on exact or
numerically recovered character tables, and a matrix-exponential oracle on
the skew-symmetric adjacency matrix.
"""
from .cayley import (
    CayleyGraph,
    ConnectionSet,
    Spectrum,
    adjacency_matrix,
    adjacency_to_csv,
    cayley_graph,
    connection_character_sums,
    enumerate_oriented_class_unions,
    graph_to_dot,
    idempotent,
    is_connected,
    make_connection_set,
    make_symmetric_connection_set,
    spectrum,
    spectrum_report,
)
from .characters import (
    CharacterTable,
    GaloisData,
    ImportedTable,
    abelian_character_table,
    character_table_for,
    character_table_numerical,
    character_table_to_json_str,
    export_character_table,
    galois_stabilizers,
    galois_stabilizers_imported,
    import_character_table,
    kernel,
    load_character_table,
    rational_intersection,
    units_mod,
)
from .config import DEFAULT_CONFIG, RunConfig
from .engine import (
    CheckResult,
    MSTReport,
    NonexistenceWitness,
    PSTCertificate,
    RationalTime,
    SolvableReport,
    SolveOutcome,
    check_imported_claim,
    check_pst_at,
    check_pst_pair,
    check_transfer_classes,
    compute_S_e,
    nonexistence_witness,
    nonexistence_witness_classes,
    parse_time,
    partition_into_transfer_classes,
    solvable_exclusion_report,
    solve_pst_time,
    time_rationality_check,
    verdict_document,
)
from .errors import (
    CaywalkError,
    CorruptTableError,
    GroupValidationError,
    InconsistencyError,
    InvalidParameterError,
    InvariantBreachError,
    NumericalFailureError,
    OrientationError,
    SchemaError,
    SizeLimitError,
    VerificationFailure,
)
from .families import (
    DualReport,
    FamilyCertificate,
    build_group_from_spec,
    dual_verify,
    family_extraspecial3,
    family_m2,
    family_z3n,
    family_z4n,
    fixture_to_certificate,
    load_fixture_certificates,
    m2_remark_probe,
    shipped_certificates,
    undirected_cycle4_certificate,
    wreath_lift,
    write_fixture_files,
    z8_certificate,
)
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
    derived_series_solvable,
    element_order,
    group_from_json,
    group_to_json,
    group_to_json_str,
    load_group,
    permutation_cycles,
    save_group,
    subgroup_closure,
    wreath_type,
)
from .oracle import (
    PermutationReport,
    ScanHit,
    WalkOperator,
    build_hermitian_operator,
    build_operator,
    evolve,
    evolve_column,
    fidelity,
    fidelity_series_csv,
    permutation_check,
    scan_pst,
)

__version__ = "1.0.0"

__all__ = [name for name in dir() if not name.startswith("_")]
