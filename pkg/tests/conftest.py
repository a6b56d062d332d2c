"""Independent oracles shared by the test suite.

Everything here recomputes facts from first principles (permutation
composition, brute-force orbit scans, Taylor-series matrix exponentials) so
library results are checked against a second, structurally different route.
"""
from __future__ import annotations

import itertools

import numpy as np
import pytest

from caywalk.groups import GroupTable


def permutation_group_table(n: int) -> GroupTable:
    """S_n as an explicit table, built from raw permutation composition."""
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    size = len(perms)
    mul = np.zeros((size, size), dtype=np.int64)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            mul[i, j] = index[tuple(p[q[k]] for k in range(n))]
    inv = np.zeros(size, dtype=np.int64)
    for i, p in enumerate(perms):
        ip = [0] * n
        for a, b in enumerate(p):
            ip[b] = a
        inv[i] = index[tuple(ip)]
    labels = tuple("".join(str(x) for x in p) for p in perms)
    return GroupTable(order=size, mul=mul, identity=index[tuple(range(n))],
                      inv=inv, labels=labels, family_tag=f"sym:{n}")


def brute_conjugacy_classes(mul: np.ndarray, inv: np.ndarray) -> list[frozenset[int]]:
    """Conjugacy classes by a plain double loop, no vectorization."""
    n = mul.shape[0]
    seen = set()
    classes = []
    for g in range(n):
        if g in seen:
            continue
        orbit = {int(mul[mul[h, g], inv[h]]) for h in range(n)}
        classes.append(frozenset(orbit))
        seen |= orbit
    return classes


def expm_taylor(m: np.ndarray) -> np.ndarray:
    """exp(M) by scaling-and-squaring with a plain Taylor series."""
    m = np.asarray(m, dtype=np.complex128)
    norm = float(np.abs(m).sum(axis=1).max()) if m.size else 0.0
    s = max(0, int(np.ceil(np.log2(norm))) + 1) if norm > 0 else 0
    x = m / (2.0 ** s)
    out = np.eye(m.shape[0], dtype=np.complex128)
    term = np.eye(m.shape[0], dtype=np.complex128)
    for k in range(1, 30):
        term = term @ x / k
        out = out + term
    for _ in range(s):
        out = out @ out
    return out


@pytest.fixture(scope="session")
def s3_table() -> GroupTable:
    return permutation_group_table(3)


@pytest.fixture(scope="session")
def s5_table() -> GroupTable:
    return permutation_group_table(5)


def pytest_terminal_summary(terminalreporter):
    """Print one verdict line per acceptance criterion, outside capture."""
    import sys

    results = getattr(sys.modules.get("test_acceptance"), "CRITERIA_RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, status, elapsed in sorted(results):
        terminalreporter.write_line(
            f"criterion {number:2d} {status:4s} {elapsed:7.2f}s  {title}")
