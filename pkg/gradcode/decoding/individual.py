"""
Decoders for schemes that send gradients individually, and for the
balanced scheme that mixes one sum row with individual gradients.
"""
import logging
from fractions import Fraction
from typing import Dict, Iterable, Tuple

from gradcode.core.models import GcScheme
from gradcode.decoding.certificate import RecoveryCertificate, make_certificate
from gradcode.errors import DecodingError

logger = logging.getLogger(__name__)


def decode_individual(scheme: GcScheme, stragglers: Iterable[int]) -> RecoveryCertificate:
    """One singleton row per recovered partition, lowest worker first."""
    dead = set(stragglers)
    terms: Dict[Tuple[int, int], Fraction] = {}
    taken = set()
    for worker in range(scheme.n):
        if worker in dead:
            continue
        for j, row in sorted(scheme.singleton_rows(worker).items()):
            if j not in taken:
                taken.add(j)
                terms[(worker, row)] = Fraction(1)
    cert = make_certificate(scheme, dead, terms)
    if cert.shortfall:
        logger.debug(
            "%s recovered %d of %d required", scheme.label, cert.recovered_count, cert.required
        )
    return cert


def decode_balanced(scheme: GcScheme, stragglers: Iterable[int]) -> RecoveryCertificate:
    """
    Add up the sum rows of all live workers, then cancel the extra copies of
    every partition held by c > 1 live workers with (c - 1) times one
    individually sent gradient.
    """
    if scheme.label != "balanced":
        raise DecodingError(f"decode_balanced needs a balanced scheme, got {scheme.label}")
    dead = set(stragglers)
    alive = [w for w in range(scheme.n) if w not in dead]
    terms: Dict[Tuple[int, int], Fraction] = {(w, 0): Fraction(1) for w in alive}

    copies: Dict[int, int] = {}
    for w in alive:
        for j in scheme.assignment[w]:
            copies[j] = copies.get(j, 0) + 1

    for j, c in sorted(copies.items()):
        if c == 1:
            continue
        sender = next(
            ((w, scheme.singleton_rows(w)[j]) for w in alive if j in scheme.singleton_rows(w)),
            None,
        )
        if sender is None:
            raise DecodingError(
                f"no live worker sends D{j + 1} individually (held by {c} live workers)"
            )
        terms[sender] = terms.get(sender, Fraction(0)) - (c - 1)
    return make_certificate(scheme, dead, terms)
