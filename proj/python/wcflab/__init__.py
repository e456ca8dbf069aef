"""Analysis of two-message weak coin flipping protocols."""

from ._core import (
    Protocol,
    WcfError,
    align,
    analyze,
    audit_labels,
    diagonal_profile,
    frontier,
    holder_floor,
    is_aligned,
    paper_pa,
    paper_pb,
    preparer_max,
    preparer_oracle,
    receiver_max,
    receiver_oracle,
    run_batch,
    run_cli,
    search_fair_minimum,
)

__all__ = [
    "Protocol",
    "WcfError",
    "align",
    "analyze",
    "audit_labels",
    "diagonal_profile",
    "frontier",
    "holder_floor",
    "is_aligned",
    "paper_pa",
    "paper_pb",
    "preparer_max",
    "preparer_oracle",
    "receiver_max",
    "receiver_oracle",
    "run_batch",
    "run_cli",
    "search_fair_minimum",
]
