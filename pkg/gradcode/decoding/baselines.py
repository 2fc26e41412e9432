import logging
from fractions import Fraction
from typing import Iterable

from gradcode.constructions.baselines import frc_slot_size
from gradcode.core.models import GcScheme
from gradcode.decoding.certificate import RecoveryCertificate, make_certificate
from gradcode.errors import DecodingError
from gradcode.utils import ExactLinalg

logger = logging.getLogger(__name__)


def decode_frc(scheme: GcScheme, stragglers: Iterable[int]) -> RecoveryCertificate:
    """
    Per slot, take the lowest live replica. A slot whose workers all
    straggle is lost; the shortfall is reported on the certificate.
    """
    dead = set(stragglers)
    d = frc_slot_size(scheme)
    terms = {}
    for slot in range(scheme.n // d):
        live = [w for w in range(slot * d, slot * d + d) if w not in dead]
        if live:
            terms[(live[0], 0)] = Fraction(1)
    cert = make_certificate(scheme, dead, terms)
    if cert.shortfall:
        logger.debug(
            "FRC shortfall %d for stragglers %s", cert.shortfall, sorted(w + 1 for w in dead)
        )
    return cert


def decode_cgc(scheme: GcScheme, stragglers: Iterable[int]) -> RecoveryCertificate:
    """Solve exactly for live-row coefficients that sum to the all-ones vector."""
    dead = set(stragglers)
    alive = [w for w in range(scheme.n) if w not in dead]
    dense = [scheme.dense_row(w, 0) for w in alive]
    coefs = ExactLinalg.solve_combination(dense, [Fraction(1)] * scheme.k)
    if coefs is None:
        raise DecodingError(
            f"live rows do not span the all-ones vector for stragglers {sorted(w + 1 for w in dead)}"
        )
    terms = {(w, 0): c for w, c in zip(alive, coefs) if c != 0}
    return make_certificate(scheme, dead, terms)
