from typing import Callable, Dict, Iterable

from gradcode.core.models import GcScheme
from gradcode.errors import DecodingError

from .baselines import decode_cgc, decode_frc
from .certificate import (
    RecoveryCertificate,
    StragglerSet,
    apply_certificate,
    certificate_from_dict,
    certificate_to_dict,
    certificate_to_json,
    make_certificate,
    verify_certificate,
)
from .cyclic import (
    cyclic1_workers,
    decode_cyclic1,
    decode_cyclic2,
    pack_arcs,
    stopping_straggler_1,
    stopping_straggler_literal,
)
from .individual import decode_balanced, decode_individual

DECODERS: Dict[str, Callable[[GcScheme, Iterable[int]], RecoveryCertificate]] = {
    "cyclic1": decode_cyclic1,
    "cyclic2": decode_cyclic2,
    "combinatorial": decode_individual,
    "tdesign": decode_individual,
    "intermediate": decode_individual,
    "uncoded": decode_individual,
    "balanced": decode_balanced,
    "frc": decode_frc,
    "cgc": decode_cgc,
}


def decode(scheme: GcScheme, stragglers: Iterable[int]) -> RecoveryCertificate:
    """
    Run the decoder registered for the scheme's family.

    Raises:
        ParameterError: If a straggler lies outside the scheme or more than s
            are given
        DecodingError: If the family has no decoder
    """
    indices = StragglerSet.for_scheme(scheme, stragglers).indices
    decoder = DECODERS.get(scheme.label)
    if decoder is None:
        raise DecodingError(f"no decoder for {scheme.label} schemes")
    return decoder(scheme, indices)


__all__ = [
    "DECODERS",
    "decode",
    "decode_cgc",
    "decode_frc",
    "RecoveryCertificate",
    "StragglerSet",
    "apply_certificate",
    "certificate_from_dict",
    "certificate_to_dict",
    "certificate_to_json",
    "make_certificate",
    "verify_certificate",
    "cyclic1_workers",
    "decode_cyclic1",
    "decode_cyclic2",
    "pack_arcs",
    "stopping_straggler_1",
    "stopping_straggler_literal",
    "decode_balanced",
    "decode_individual",
]
