"""Lowering of checked contracts to the ordered dataflow IR."""

from c2o.frontend.ast import Contract
from c2o.ir.dataflow import DataflowIR, Local, order_dataflow, same_step_reads
from c2o.ir.decouple import decouple_temporal
from c2o.ir.inline import inline_nodes


def normalize(contract: Contract, role: str = "observer") -> DataflowIR:
    """Inline, decouple and order ``contract`` (assumed well-formed)."""
    return order_dataflow(decouple_temporal(inline_nodes(contract)), role)


__all__ = [
    "DataflowIR",
    "Local",
    "decouple_temporal",
    "inline_nodes",
    "normalize",
    "order_dataflow",
    "same_step_reads",
]
