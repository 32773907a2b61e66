"""Fixed-width type lowering chosen once per compilation."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from c2o.errors import ConfigError
from c2o.frontend import ast as A


@dataclass(frozen=True)
class TypeConfig:
    int_width: int = 32
    int_signed: bool = True
    float_precision: Optional[str] = "double"

    def __post_init__(self):
        if self.int_width not in (8, 16, 32):
            raise ConfigError(f"int width must be 8, 16 or 32, got {self.int_width}")
        if self.float_precision not in ("single", "double", None):
            raise ConfigError(f"real precision must be single or double, "
                              f"got {self.float_precision!r}")

    @property
    def int_type(self) -> "FixedInt":
        return FixedInt(self.int_width, self.int_signed)

    @property
    def float_type(self) -> Optional["Float"]:
        return Float(self.float_precision) if self.float_precision else None

    def as_dict(self) -> dict:
        return {"int_width": self.int_width, "int_signed": self.int_signed,
                "float_precision": self.float_precision}


@dataclass(frozen=True)
class LBool:
    def __str__(self) -> str:
        return "bool"


@dataclass(frozen=True)
class FixedInt:
    width: int
    signed: bool

    def __str__(self) -> str:
        return f"{'' if self.signed else 'u'}int{self.width}"

    @property
    def lo(self) -> int:
        return -(1 << (self.width - 1)) if self.signed else 0

    @property
    def hi(self) -> int:
        return (1 << (self.width - 1)) - 1 if self.signed else (1 << self.width) - 1

    def contains(self, v: int) -> bool:
        return self.lo <= v <= self.hi


@dataclass(frozen=True)
class Float:
    precision: str  # "single" | "double"

    def __str__(self) -> str:
        return self.precision


@dataclass(frozen=True)
class Struct:
    name: str
    fields: tuple[tuple[str, "LoweredType"], ...]

    def __str__(self) -> str:
        return self.name

    def field_type(self, name: str) -> "LoweredType":
        for f, t in self.fields:
            if f == name:
                return t
        raise KeyError(name)


LoweredType = Union[LBool, FixedInt, Float, Struct]

BOOL_L = LBool()

SCALAR_NAMES = {
    "bool": BOOL_L,
    "int8": FixedInt(8, True), "int16": FixedInt(16, True), "int32": FixedInt(32, True),
    "uint8": FixedInt(8, False), "uint16": FixedInt(16, False), "uint32": FixedInt(32, False),
    "single": Float("single"), "double": Float("double"),
}


def lower_type(ty: A.SemType, cfg: TypeConfig, structs: dict[str, Struct]) -> LoweredType:
    if isinstance(ty, A.BoolType):
        return BOOL_L
    if isinstance(ty, A.IntType):
        return cfg.int_type
    if isinstance(ty, A.RealType):
        if cfg.float_type is None:
            raise ConfigError("contract uses real values but no float precision is configured")
        return cfg.float_type
    if ty.name not in structs:
        structs[ty.name] = Struct(ty.name, tuple((f, lower_type(t, cfg, structs))
                                                 for f, t in ty.fields))
    return structs[ty.name]


def default_value(ty: LoweredType):
    """Initial value of a pre-variable: true, 0, 0.0, or per-field defaults."""
    if isinstance(ty, LBool):
        return True
    if isinstance(ty, FixedInt):
        return 0
    if isinstance(ty, Float):
        return Fraction(0)
    return {f: default_value(t) for f, t in ty.fields}


def leaf_paths(ty: LoweredType, prefix: str) -> list[tuple[str, LoweredType]]:
    """Scalar leaves of ``ty`` with dotted paths, in field order."""
    if isinstance(ty, Struct):
        out = []
        for f, t in ty.fields:
            out.extend(leaf_paths(t, f"{prefix}.{f}"))
        return out
    return [(prefix, ty)]
