"""Design models: deterministic step functions with a component's interface."""

from __future__ import annotations

import copy
from dataclasses import dataclass
from typing import Any, Callable, Mapping

from c2o.codegen import TypeConfig
from c2o.frontend import Contract
from c2o.frontend import ast as A
from c2o.interp import Machine
from c2o.pipeline import compile_contract


class ModelInstance:
    """Mutable execution state of a design model."""

    def reset(self) -> None:
        raise NotImplementedError

    def step(self, inputs: Mapping[str, Any]) -> dict[str, Any]:
        raise NotImplementedError

    def get_state(self):
        raise NotImplementedError

    def set_state(self, state) -> None:
        raise NotImplementedError


class DesignModel:
    name: str
    inputs: list[tuple[str, A.SemType]]
    outputs: list[tuple[str, A.SemType]]

    def instantiate(self, cfg: TypeConfig) -> ModelInstance:
        raise NotImplementedError


class _ProgramInstance(ModelInstance):
    def __init__(self, machine: Machine, outputs: list[str]):
        self.m = machine
        self.outputs = outputs

    def reset(self):
        self.m.reset()

    def step(self, inputs):
        self.m.step(inputs)
        return {o: self.m.value(o) for o in self.outputs}

    def get_state(self):
        return self.m.get_state()

    def set_state(self, state):
        self.m.set_state(state)


class ContractModel(DesignModel):
    """A model written as a contract whose ``assign`` statements define outputs."""

    def __init__(self, contract: Contract):
        self.contract = contract
        self.name = contract.name
        self.inputs = contract.input_types()
        self.outputs = contract.output_types()
        self._programs: dict[TypeConfig, Any] = {}

    def program(self, cfg: TypeConfig):
        if cfg not in self._programs:
            self._programs[cfg] = compile_contract(self.contract, cfg, role="model").program
        return self._programs[cfg]

    def instantiate(self, cfg: TypeConfig) -> ModelInstance:
        return _ProgramInstance(Machine(self.program(cfg)), [n for n, _ in self.outputs])


class _PyInstance(ModelInstance):
    def __init__(self, init: Callable[[], dict], fn):
        self.init = init
        self.fn = fn
        self.reset()

    def reset(self):
        self.state = self.init()

    def step(self, inputs):
        outputs, self.state = self.fn(dict(inputs), self.state)
        return outputs

    def get_state(self):
        return copy.deepcopy(self.state)

    def set_state(self, state):
        self.state = copy.deepcopy(state)


@dataclass
class PythonModel(DesignModel):
    """``step(inputs, state) -> (outputs, new_state)``; ``init() -> state``."""

    name: str
    inputs: list
    outputs: list
    step: Callable[[dict, Any], tuple[dict, Any]]
    init: Callable[[], Any] = dict

    def instantiate(self, cfg: TypeConfig) -> ModelInstance:
        return _PyInstance(self.init, self.step)


REGISTRY: dict[str, Callable[[], DesignModel]] = {}


def register(name: str):
    def deco(factory):
        REGISTRY[name] = factory
        return factory
    return deco


def registered(name: str) -> DesignModel:
    try:
        return REGISTRY[name]()
    except KeyError:
        raise KeyError(f"no registered model {name!r}; known: {sorted(REGISTRY)}") from None


@register("identity")
def _identity_model() -> DesignModel:
    # Output := Input, the passing fixture for the Table 1 range contract
    return PythonModel("identity", [("Input", A.INT)], [("Output", A.INT)],
                       lambda inp, st: ({"Output": inp["Input"]}, st))
