"""Verification workbench: binding, bounded and random checks, differential tests."""

from c2o.harness.binding import HarnessBinding, Signal, bind
from c2o.harness.check import (CheckResult, Counterexample, Harness, check_bounded,
                               check_random, replay)
from c2o.harness.diff import CLASSES, DiffReport, Divergence, diff
from c2o.harness.model import ContractModel, DesignModel, PythonModel, register, registered

__all__ = [
    "CLASSES", "CheckResult", "ContractModel", "Counterexample", "DesignModel", "DiffReport",
    "Divergence", "Harness", "HarnessBinding", "PythonModel", "Signal", "bind",
    "check_bounded", "check_random", "diff", "register", "registered", "replay",
]
