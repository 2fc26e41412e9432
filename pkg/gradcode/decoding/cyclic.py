"""
Decoders for the one- and two-message cyclic schemes.

The straggler walks and the worker selection use 1-based worker numbers
(W_1..W_n), matching the way the groups A_j = {j, j+r, ...} are written.
Certificates are 0-based like everything else.
"""
import logging
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from gradcode.constructions.cyclic import cyclic_prefix_length, cyclic_width
from gradcode.core.models import GcScheme
from gradcode.decoding.certificate import RecoveryCertificate, make_certificate
from gradcode.errors import DecodingError

logger = logging.getLogger(__name__)

Terms = Dict[Tuple[int, int], Fraction]


# ============================================================================
# Straggler walks
# ============================================================================

def _group(i: int, r: int) -> int:
    return 1 + (i - 1) % r


def _group_members(j: int, r: int, limit: int) -> List[int]:
    return list(range(j, limit + 1, r))


def clean_groups(limit: int, r: int, stragglers: Set[int]) -> List[int]:
    """Groups j in [r] with no straggler among W_j, W_{j+r}, ... up to W_limit."""
    return [
        j for j in range(1, r + 1)
        if not any(w in stragglers for w in _group_members(j, r, limit))
    ]


def stopping_straggler_1(n: int, beta: int, r: int, stragglers: Iterable[int]) -> Optional[int]:
    """
    Walk down the stragglers in [beta] until one is found whose group has
    no straggler with a smaller index.

    Starts at the largest straggler in [beta]. While the current group has
    a smaller straggler, moves to the largest straggler below the current
    one whose group was not left in an earlier step, falling back to the
    largest straggler below it.

    Args:
        n: Number of workers
        beta: Upper end of the worker range the groups live in
        r: Group stride
        stragglers: 1-based straggler indices

    Returns:
        The stopping straggler, or None when some group is straggler-free
    """
    hit = {w for w in stragglers if 1 <= w <= min(beta, n)}
    if clean_groups(beta, r, hit):
        return None
    i = max(hit)
    visited: Set[int] = set()
    while any(w < i for w in hit if _group(w, r) == _group(i, r)):
        below = [w for w in hit if w < i]
        fresh = [w for w in below if _group(w, r) not in visited]
        nxt = max(fresh) if fresh else max(below)
        visited.add(_group(i, r))
        i = nxt
    return i


def stopping_straggler_literal(n: int, beta: int, r: int, stragglers: Iterable[int]) -> Optional[int]:
    """Largest straggler in [beta] whose group has no smaller straggler."""
    hit = {w for w in stragglers if 1 <= w <= min(beta, n)}
    if clean_groups(beta, r, hit):
        return None
    for i in sorted(hit, reverse=True):
        if not any(w < i for w in hit if _group(w, r) == _group(i, r)):
            return i
    return None


def _select_gapped(
    n: int,
    count: int,
    start: int,
    stop: int,
    r: int,
    stragglers: Set[int],
) -> Optional[List[int]]:
    """Greedy minimal k_1 < ... < k_count of live workers, k_1 >= start, gaps >= r, k_count <= stop."""
    chosen: List[int] = []
    low = start
    for _ in range(count):
        k = next((w for w in range(low, stop + 1) if w not in stragglers), None)
        if k is None:
            return None
        chosen.append(k)
        low = k + r
    return chosen


# ============================================================================
# Arc packing
# ============================================================================

# (start partition, length, terms) with 0-based partitions and workers.
Piece = Tuple[int, int, Terms]


def _cyclic_pieces(scheme: GcScheme, stragglers: Set[int]) -> List[Piece]:
    r, x = cyclic_width(scheme), cyclic_prefix_length(scheme)
    pieces: List[Piece] = []
    for w in range(scheme.n):
        if w in stragglers:
            continue
        pieces.append((w, r, {(w, 0): Fraction(1)}))
        if x:
            pieces.append((w, x, {(w, 1): Fraction(1)}))
            pieces.append(((w + x) % scheme.n, r - x, {(w, 0): Fraction(1), (w, 1): Fraction(-1)}))
    return pieces


def pack_arcs(n: int, pieces: Sequence[Piece]) -> Tuple[int, List[Piece]]:
    """
    Pairwise disjoint pieces on the n-cycle covering as many partitions as
    possible.

    Every cut point is tried; for each, pieces that do not cross the cut are
    packed by a left-to-right dynamic program.
    """
    by_start: Dict[int, List[Piece]] = {}
    for piece in pieces:
        by_start.setdefault(piece[0], []).append(piece)

    best_total, best_choice = -1, []
    for cut in range(n):
        score = [-1] * (n + 1)
        back: List[Optional[Tuple[int, Optional[Piece]]]] = [None] * (n + 1)
        score[0] = 0
        for pos in range(n):
            if score[pos] < 0:
                continue
            if score[pos] > score[pos + 1]:
                score[pos + 1] = score[pos]
                back[pos + 1] = (pos, None)
            for piece in by_start.get((cut + pos) % n, []):
                end = pos + piece[1]
                if end <= n and score[pos] + piece[1] > score[end]:
                    score[end] = score[pos] + piece[1]
                    back[end] = (pos, piece)
        if score[n] > best_total:
            choice, pos = [], n
            while pos > 0:
                prev, piece = back[pos]
                if piece is not None:
                    choice.append(piece)
                pos = prev
            best_total, best_choice = score[n], choice
            if best_total == n:
                break
    return best_total, best_choice


def _packing_certificate(scheme: GcScheme, stragglers: Set[int]) -> RecoveryCertificate:
    """Secondary path: best arc packing, flagged on the certificate."""
    logger.warning(
        "Case rule gave no certificate for %s stragglers %s; falling back to arc packing",
        scheme.label, sorted(w + 1 for w in stragglers),
    )
    total, chosen = pack_arcs(scheme.n, _cyclic_pieces(scheme, stragglers))
    terms: Terms = {}
    for _, _, piece_terms in chosen:
        for key, coef in piece_terms.items():
            terms[key] = terms.get(key, Fraction(0)) + coef
    return make_certificate(scheme, stragglers, terms, fallback=True)


def _finish(
    scheme: GcScheme,
    stragglers: Set[int],
    cert: Optional[RecoveryCertificate],
    fallback: bool,
) -> RecoveryCertificate:
    if cert is None or cert.shortfall:
        if not fallback:
            raise DecodingError(
                f"{scheme.label} case rule gave no certificate "
                f"for stragglers {sorted(w + 1 for w in stragglers)}"
            )
        cert = _packing_certificate(scheme, stragglers)
    if cert.shortfall:
        raise DecodingError(
            f"{scheme.label} decoder recovered {cert.recovered_count} < {cert.required} "
            f"for stragglers {sorted(w + 1 for w in stragglers)}"
        )
    return cert


def _full_rows(workers: Iterable[int]) -> Terms:
    """Terms for the all-ones rows of 1-based workers."""
    return {(w - 1, 0): Fraction(1) for w in workers}


# ============================================================================
# One message per worker
# ============================================================================

def cyclic1_workers(
    n: int,
    beta: int,
    r: int,
    stragglers: Set[int],
    walk=stopping_straggler_1,
) -> Optional[List[int]]:
    """
    1-based workers with pairwise disjoint windows covering beta partitions.
    """
    clean = clean_groups(beta, r, stragglers)
    if clean:
        return _group_members(clean[0], r, beta)
    i = walk(n, beta, r, stragglers)
    if i is None:
        return None
    g = _group(i, r)
    kept = [w for w in _group_members(g, r, beta) if w < i]
    picks = _select_gapped(n, beta // r - len(kept), i, n + g - r, r, stragglers)
    if picks is None:
        return None
    return kept + picks


def decode_cyclic1(scheme: GcScheme, stragglers: Iterable[int], fallback: bool = True) -> RecoveryCertificate:
    """
    Disjoint full windows chosen by the stopping-straggler walk.

    With fallback=False a failing case rule raises DecodingError instead of
    handing over to arc packing.
    """
    if scheme.label != "cyclic1":
        raise DecodingError(f"decode_cyclic1 needs a cyclic1 scheme, got {scheme.label}")
    dead = set(stragglers)
    n, beta, r = scheme.n, scheme.params.beta, cyclic_width(scheme)
    if beta % r != 0:
        return _finish(scheme, dead, None, fallback)
    hit = {w + 1 for w in dead}
    cert = None
    for walk in (stopping_straggler_1, stopping_straggler_literal):
        workers = cyclic1_workers(n, beta, r, hit, walk)
        if workers is not None:
            cert = make_certificate(scheme, dead, _full_rows(workers))
            break
    return _finish(scheme, dead, cert, fallback)


# ============================================================================
# Two messages per worker
# ============================================================================

def _wrap(w: int, n: int) -> int:
    return 1 + (w - 1) % n


def cyclic2_terms(n: int, beta: int, r: int, x: int, stragglers: Set[int]) -> Optional[Terms]:
    """Full rows and one prefix row (1-based workers) covering beta partitions."""
    gamma = beta - x
    clean = clean_groups(gamma, r, stragglers)

    if not clean:
        i = stopping_straggler_1(n, gamma, r, stragglers)
        if i is None:
            return None
        g = _group(i, r)
        u = next((w for w in range(i + 1, n + 1) if w not in stragglers), None)
        if u is None:
            return None
        kept = [w for w in _group_members(g, r, gamma) if w < i]
        picks = _select_gapped(n, gamma // r - len(kept), u + x, n + g - r, r, stragglers)
        if picks is None:
            return None
        terms = _full_rows(kept + picks)
        terms[(u - 1, 1)] = Fraction(1)
        return terms

    preferred = [w for w in clean if w >= r - x] + [w for w in clean if w < r - x]
    for w in preferred:
        tail = _wrap(w + gamma, n)
        if tail not in stragglers:
            terms = _full_rows(_group_members(w, r, gamma))
            terms[(tail - 1, 1)] = Fraction(1)
            return terms
    a = max(clean)
    for z in range(a + gamma, a + n - x + 1):
        z = _wrap(z, n)
        if z not in stragglers:
            terms = _full_rows(_group_members(a, r, gamma))
            terms[(z - 1, 1)] = Fraction(1)
            return terms
    return None


def decode_cyclic2(scheme: GcScheme, stragglers: Iterable[int], fallback: bool = True) -> RecoveryCertificate:
    """
    Full windows plus one prefix row, chosen by the two-case rule.

    The case rule leaves six four-straggler sets of cyclic2(9, 7/9, 4)
    uncovered, {W1, W2, W4, W9} among them. Those fall back to arc packing
    and the certificate carries fallback=True; with fallback=False they
    raise DecodingError.
    """
    if scheme.label != "cyclic2":
        raise DecodingError(f"decode_cyclic2 needs a cyclic2 scheme, got {scheme.label}")
    dead = set(stragglers)
    n, beta, r = scheme.n, scheme.params.beta, cyclic_width(scheme)
    x = cyclic_prefix_length(scheme)
    terms = cyclic2_terms(n, beta, r, x, {w + 1 for w in dead})
    cert = make_certificate(scheme, dead, terms) if terms is not None else None
    return _finish(scheme, dead, cert, fallback)
