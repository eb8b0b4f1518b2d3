"""Tipos centrais de MDP tabular, amostragem e codec texto."""

from .core import (
    INFINITE,
    AlgoParams,
    DeterministicPolicy,
    HittingValues,
    InvalidMdpError,
    Mode,
    NonStationaryPolicy,
    TabularMdp,
    make_rng,
    sample_transition,
)
from .io import MdpFormatError, dumps_mdp, parse_mdp, write_mdp

__all__ = [
    "INFINITE",
    "AlgoParams",
    "DeterministicPolicy",
    "HittingValues",
    "InvalidMdpError",
    "Mode",
    "NonStationaryPolicy",
    "TabularMdp",
    "make_rng",
    "sample_transition",
    "MdpFormatError",
    "dumps_mdp",
    "parse_mdp",
    "write_mdp",
]
