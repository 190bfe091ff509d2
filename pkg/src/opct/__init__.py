"""Order-theoretic point-free topology on finite truncations of omega-posets."""

from .combinatorics import Relation, cap_order_leq, is_band, is_cap, oracle
from .errors import OpctError
from .poset import ElementId, TruncatedPoset, build, extend, from_order
from .verdict import FAILS, HOLDS, UNKNOWN, Outcome, Verdict

__all__ = [
    "ElementId", "FAILS", "HOLDS", "OpctError", "Outcome", "Relation", "TruncatedPoset",
    "UNKNOWN", "Verdict", "build", "cap_order_leq", "extend", "from_order", "is_band",
    "is_cap", "oracle",
]
__version__ = "0.1.0"
