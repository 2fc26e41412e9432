import logging
from fractions import Fraction
from typing import List

from gradcode.core.models import GcScheme, LoadReport
from gradcode.errors import StructuralError

logger = logging.getLogger(__name__)


def validate(scheme: GcScheme) -> List[str]:
    """
    Check the structural invariants of a scheme.

    Returns an empty list when the scheme is well formed, otherwise one
    human-readable descriptor per violation (1-based worker/row/partition).
    """
    violations: List[str] = []
    n, k = scheme.n, scheme.k

    if len(scheme.assignment) != n:
        violations.append(f"assignment lists {len(scheme.assignment)} workers, expected n={n}")
    if len(scheme.rows) != n:
        violations.append(f"rows list {len(scheme.rows)} workers, expected n={n}")
    if violations:
        return violations

    row_counts = {len(worker_rows) for worker_rows in scheme.rows}
    if len(row_counts) > 1:
        violations.append(f"non-uniform communication load: row counts {sorted(row_counts)}")

    for i in range(n):
        assigned = set(scheme.assignment[i])
        out_of_range = sorted(j for j in assigned if not 0 <= j < k)
        if out_of_range:
            violations.append(
                f"worker W{i + 1} assigned partitions outside [1, {k}]: {[j + 1 for j in out_of_range]}"
            )
        covered = set()
        for r, row in enumerate(scheme.rows[i]):
            support = {j for j, c in row if c != 0}
            extra = sorted(support - assigned)
            if extra:
                violations.append(
                    f"worker W{i + 1} row {r + 1} uses unassigned partitions {[j + 1 for j in extra]}"
                )
            covered |= support
        for j in sorted(assigned - covered):
            violations.append(f"worker W{i + 1} partition D{j + 1} appears in no row")

    if scheme.designated is not None:
        if len(scheme.designated) != n:
            violations.append("designated sets do not cover every worker")
        else:
            for i, chosen in enumerate(scheme.designated):
                stray = sorted(set(chosen) - set(scheme.assignment[i]))
                if stray:
                    violations.append(
                        f"worker W{i + 1} designated for unassigned partitions {[j + 1 for j in stray]}"
                    )
    return violations


def load_report(scheme: GcScheme) -> LoadReport:
    """Exact communication load m, computation load l and replication counts."""
    violations = validate(scheme)
    if violations:
        raise StructuralError(
            f"Malformed {scheme.label} scheme: {violations[0]}", violations
        )
    y = [0] * scheme.k
    for assigned in scheme.assignment:
        for j in assigned:
            y[j] += 1
    heaviest = max(len(a) for a in scheme.assignment)
    report = LoadReport(m=scheme.m, l=Fraction(heaviest, scheme.k), y_per_partition=tuple(y))
    logger.debug("load report %s: m=%d l=%s", scheme.label, report.m, report.l)
    return report
