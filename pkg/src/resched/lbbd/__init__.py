"""Logic-based Benders decomposition over a pluggable MILP adapter."""

from .adapters import AdapterUnavailable, ScipyAdapter, SolverAdapter, get_adapter
from .cuts import ContractViolation, Cut, generate_cut
from .master import MasterModel, build_master
from .solve import lbbd_solve

__all__ = [
    "AdapterUnavailable",
    "ContractViolation",
    "Cut",
    "MasterModel",
    "ScipyAdapter",
    "SolverAdapter",
    "build_master",
    "generate_cut",
    "get_adapter",
    "lbbd_solve",
]
