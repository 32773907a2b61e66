"""Wiring an observer to a design model by signal identity.

Every component signal exists once as a ``Signal`` object. Observer ports
and model ports refer to those objects, so an input read by both the model
and the observer is the same instance, never a copy with the same name.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from c2o.codegen import interface_of
from c2o.errors import BindingError, Diagnostic, InterfaceMismatch
from c2o.frontend import Contract
from c2o.frontend import ast as A
from c2o.harness.model import DesignModel


@dataclass(eq=False)
class Signal:
    name: str
    ty: A.SemType
    role: str  # "input" | "output"

    def __repr__(self) -> str:
        return f"Signal({self.role} {self.name}: {self.ty})"


@dataclass
class HarnessBinding:
    contract: Contract
    model: DesignModel
    signals: list[Signal]
    observer_ports: list[tuple[str, Signal]]
    model_inputs: list[tuple[str, Signal]]
    model_outputs: list[tuple[str, Signal]]
    warnings: list[Diagnostic] = field(default_factory=list)

    @property
    def inputs(self) -> list[Signal]:
        return [s for s in self.signals if s.role == "input"]

    @property
    def outputs(self) -> list[Signal]:
        return [s for s in self.signals if s.role == "output"]

    def __len__(self) -> int:
        return len(self.observer_ports)

    def validate(self) -> None:
        """Raise BindingError unless every port reads exactly one shared signal."""
        problems = []
        ids = [id(s) for s in self.signals]
        if len(set(ids)) != len(ids):
            problems.append("a signal is listed twice")
        by_name: dict[str, Signal] = {}
        for s in self.signals:
            if s.name in by_name:
                problems.append(f"signal {s.name!r} is duplicated (two sources with one name)")
            by_name[s.name] = s
        known = set(ids)
        for where, ports in (("observer", self.observer_ports),
                             ("model input", self.model_inputs),
                             ("model output", self.model_outputs)):
            names = [p for p, _ in ports]
            for p in {n for n in names if names.count(n) > 1}:
                problems.append(f"{where} port {p!r} bound more than once")
            for port, sig in ports:
                if id(sig) not in known:
                    problems.append(f"{where} port {port!r} reads {sig.name!r}, which is a copy, "
                                    "not the component signal")
        if problems:
            raise BindingError("; ".join(problems))


def type_differences(path: str, want: A.SemType, got: A.SemType) -> list[str]:
    """Field-level differences between a contract type and a model type."""
    if isinstance(want, A.RecordType) and isinstance(got, A.RecordType):
        out = []
        wf, gf = dict(want.fields), dict(got.fields)
        for f, t in want.fields:
            if f not in gf:
                out.append(f"{path}.{f}: field missing in model (contract {t})")
            else:
                out.extend(type_differences(f"{path}.{f}", t, gf[f]))
        for f, t in got.fields:
            if f not in wf:
                out.append(f"{path}.{f}: extra field in model ({t})")
        if not out and [f for f, _ in want.fields] != [f for f, _ in got.fields]:
            out.append(f"{path}: field order differs")
        return out
    if isinstance(want, A.RecordType) != isinstance(got, A.RecordType) or \
            (not isinstance(want, A.RecordType) and want != got):
        return [f"{path}: type mismatch (contract {want}, model {got})"]
    return []


def bind(contract: Contract, model: DesignModel) -> HarnessBinding:
    """Wire observer parameters and model ports to shared component signals."""
    errors, warnings = [], []
    m_in, m_out = dict(model.inputs), dict(model.outputs)
    signals, observer_ports = [], []
    params = interface_of(contract).params
    for prm in params:
        s = Signal(prm.name, prm.ty, prm.role)
        signals.append(s)
        observer_ports.append((prm.name, s))
        side = m_in if prm.role == "input" else m_out
        other = m_out if prm.role == "input" else m_in
        if prm.name not in side:
            if prm.name in other:
                errors.append(f"{prm.name}: contract {prm.role} is a model "
                              f"{'output' if prm.role == 'input' else 'input'}")
            else:
                errors.append(f"{prm.name}: contract {prm.role} missing from model")
            continue
        errors.extend(type_differences(prm.name, prm.ty, side[prm.name]))
    declared = {p.name for p in params}
    for n, t in model.inputs:
        if n not in declared:
            errors.append(f"{n}: extra model input ({t}) has no source")
    for n, t in model.outputs:
        if n not in declared:
            warnings.append(Diagnostic("ExtraModelOutput",
                                       f"model output {n!r} ({t}) is not observed; ignored",
                                       severity="warning"))
    if errors:
        raise InterfaceMismatch(errors)
    sig = {s.name: s for s in signals}
    b = HarnessBinding(
        contract=contract, model=model, signals=signals, observer_ports=observer_ports,
        model_inputs=[(n, sig[n]) for n, _ in model.inputs],
        model_outputs=[(n, sig[n]) for n, _ in model.outputs if n in sig],
        warnings=warnings)
    b.validate()
    return b
