from .linalg_utils import DenseRow, ExactLinalg
from .rational_utils import RationalLike, RationalUtils

__all__ = [
    "DenseRow",
    "ExactLinalg",
    "RationalLike",
    "RationalUtils",
]
