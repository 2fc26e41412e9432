"""
Recovery certificates: explicit coefficients over received messages whose
sum is the 0/1 indicator of the recovered partition set.
"""
import json
import logging
from fractions import Fraction
from typing import Dict, Iterable, List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from gradcode.core.models import GcScheme
from gradcode.errors import ParameterError
from gradcode.utils import RationalUtils

logger = logging.getLogger(__name__)

# (worker, row, coefficient), 0-based.
ComboTerm = Tuple[int, int, Fraction]


class StragglerSet(BaseModel):
    """Workers (0-based) that fail in one round."""

    model_config = ConfigDict(frozen=True)

    indices: Tuple[int, ...]

    @field_validator("indices", mode="before")
    @classmethod
    def _sorted(cls, value):
        return tuple(sorted(set(int(v) for v in value)))

    @classmethod
    def for_scheme(cls, scheme: GcScheme, indices: Iterable[int]) -> "StragglerSet":
        stragglers = cls(indices=tuple(indices))
        bad = [i + 1 for i in stragglers.indices if not 0 <= i < scheme.n]
        if bad:
            raise ParameterError(f"straggler indices outside [1, {scheme.n}]: {bad}")
        if len(stragglers.indices) > scheme.params.s:
            raise ParameterError(
                f"{len(stragglers.indices)} stragglers exceed the tolerance s={scheme.params.s}"
            )
        return stragglers

    def survivors(self, n: int) -> List[int]:
        dead = set(self.indices)
        return [i for i in range(n) if i not in dead]

    def as_frozenset(self) -> frozenset:
        return frozenset(self.indices)


class RecoveryCertificate(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    stragglers: Tuple[int, ...]
    combo: Tuple[ComboTerm, ...]
    recovered: Tuple[int, ...]
    required: int
    # Set when a cyclic decoder's case rule failed and arc packing produced the combination.
    fallback: bool = False

    @property
    def recovered_count(self) -> int:
        return len(self.recovered)

    @property
    def shortfall(self) -> int:
        return max(0, self.required - len(self.recovered))

    @property
    def workers_used(self) -> Tuple[int, ...]:
        return tuple(sorted({w for w, _, _ in self.combo}))


def make_certificate(
    scheme: GcScheme,
    stragglers: Iterable[int],
    terms: Dict[Tuple[int, int], Fraction],
    fallback: bool = False,
) -> RecoveryCertificate:
    """Build a certificate from accumulated (worker, row) -> coefficient terms."""
    combo = tuple(
        (w, r, Fraction(c)) for (w, r), c in sorted(terms.items()) if c != 0
    )
    total = combination_vector(scheme, combo)
    return RecoveryCertificate(
        stragglers=tuple(sorted(stragglers)),
        combo=combo,
        recovered=tuple(sorted(j for j, v in total.items() if v != 0)),
        required=scheme.params.required,
        fallback=fallback,
    )


def combination_vector(scheme: GcScheme, combo: Iterable[ComboTerm]) -> Dict[int, Fraction]:
    total: Dict[int, Fraction] = {}
    for worker, row, coef in combo:
        for j, c in scheme.rows[worker][row]:
            total[j] = total.get(j, Fraction(0)) + coef * c
    return {j: v for j, v in total.items() if v != 0}


def verify_certificate(
    scheme: GcScheme,
    stragglers: Iterable[int],
    certificate: RecoveryCertificate,
    check_required: bool = True,
) -> List[str]:
    """
    Check a certificate exactly.

    Returns an empty list when the certificate is sound, otherwise one
    descriptor per problem.
    """
    problems: List[str] = []
    dead = set(stragglers)
    for worker, row, _ in certificate.combo:
        if worker in dead:
            problems.append(f"combo uses straggler W{worker + 1}")
        if not 0 <= row < len(scheme.rows[worker]):
            problems.append(f"W{worker + 1} has no row {row + 1}")
    if problems:
        return problems
    total = combination_vector(scheme, certificate.combo)
    if not RationalUtils.is_unit_indicator(total.values()):
        off = sorted(j + 1 for j, v in total.items() if v != 1)
        problems.append(f"combination is not a 0/1 vector at partitions {off}")
    if tuple(sorted(total)) != tuple(certificate.recovered):
        problems.append("recovered set does not match the combination support")
    if check_required and len(certificate.recovered) < certificate.required:
        problems.append(
            f"recovered {len(certificate.recovered)} partitions, need {certificate.required}"
        )
    return problems


def apply_certificate(
    scheme: GcScheme,
    certificate: RecoveryCertificate,
    partial_gradients: np.ndarray,
) -> np.ndarray:
    """
    Evaluate the certificate on numeric partial gradients (shape k x p).

    Each message is formed first, as a worker would send it, then the
    master combines the messages with the certificate coefficients.
    """
    result = np.zeros(partial_gradients.shape[1:], dtype=float)
    for worker, row, coef in certificate.combo:
        message = np.zeros_like(result)
        for j, c in scheme.rows[worker][row]:
            message += float(c) * partial_gradients[j]
        result += float(coef) * message
    return result


def certificate_to_dict(certificate: RecoveryCertificate) -> dict:
    return {
        "stragglers": [i + 1 for i in certificate.stragglers],
        "recovered": [j + 1 for j in certificate.recovered],
        "required": certificate.required,
        "fallback": certificate.fallback,
        "combo": [
            {"worker": w + 1, "row": r + 1, "coef": RationalUtils.format(c)}
            for w, r, c in certificate.combo
        ],
    }


def certificate_from_dict(payload: dict) -> RecoveryCertificate:
    return RecoveryCertificate(
        stragglers=tuple(i - 1 for i in payload["stragglers"]),
        recovered=tuple(j - 1 for j in payload["recovered"]),
        required=int(payload["required"]),
        fallback=bool(payload.get("fallback", False)),
        combo=tuple(
            (int(t["worker"]) - 1, int(t["row"]) - 1, RationalUtils.parse(t["coef"]))
            for t in payload["combo"]
        ),
    )


def certificate_to_json(certificate: RecoveryCertificate) -> str:
    return json.dumps(certificate_to_dict(certificate), indent=2)
