from enum import Enum
from typing import Any, Callable, Optional

from pydantic import validator

from tunnelkit.models.function import ConstantFunctionConfig, FunctionConfig
from tunnelkit.models.model import TypedModel


class SymbolType(str, Enum):
    BASE = "symbol_base"
    QUADRATIC = "symbol_quadratic"
    POTENTIAL = "symbol_potential"
    JUMP = "symbol_jump"
    CUSTOM = "symbol_custom"


class SymbolConfig(TypedModel, type=SymbolType.BASE.value):
    h_fd: float = 1e-4

    class Config:
        arbitrary_types_allowed = True


class QuadraticSymbolConfig(SymbolConfig, type=SymbolType.QUADRATIC.value):
    diffusion: FunctionConfig = ConstantFunctionConfig(value=1.0)


class PotentialSymbolConfig(SymbolConfig, type=SymbolType.POTENTIAL.value):
    diffusion: FunctionConfig = ConstantFunctionConfig(value=1.0)
    potential: FunctionConfig = ConstantFunctionConfig(value=0.0)
    # additive time profile V(t)
    potential_time: Optional[FunctionConfig] = None


class JumpSymbolConfig(SymbolConfig, type=SymbolType.JUMP.value):
    diffusion: FunctionConfig = ConstantFunctionConfig(value=1.0)
    potential: FunctionConfig = ConstantFunctionConfig(value=0.0)
    potential_time: Optional[FunctionConfig] = None
    intensity: FunctionConfig = ConstantFunctionConfig(value=1.0)
    jump_size: float = 1.0

    @validator("jump_size")
    def jump_size_nonzero(cls, v):
        if v == 0:
            raise ValueError("jump_size must be nonzero; use a potential symbol instead")
        return v


class CustomSymbolConfig(SymbolConfig, type=SymbolType.CUSTOM.value):
    """Programmatic symbols: hamiltonian(x, p, t) plus optional analytic derivatives."""

    hamiltonian: Callable[..., Any]
    grad_p: Optional[Callable[..., Any]] = None
    grad_x: Optional[Callable[..., Any]] = None
    hess_pp: Optional[Callable[..., Any]] = None
    time_dependent: bool = True
