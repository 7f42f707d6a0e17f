"""Moduli of continuity, Dini-type seminorms, witness fields and composition."""

from __future__ import annotations

from .compose import GridMap, compose, composition_check
from .modulus import ModulusProfile, modulus_global, modulus_pointwise, modulus_sphere
from .seminorms import (
    SeminormReport,
    dini_integral,
    holder_cstar_bound,
    holderlog_cstar_bound,
    norm_bstar,
    norm_cstar,
    norm_dstar,
    rescaling_check,
    seminorm_bstar,
    seminorm_cstar,
    seminorm_dstar,
    seminorm_holder,
    seminorm_holderlog,
    seminorm_report,
)
from .witness import make_witness, witness_function

__all__ = [
    "GridMap",
    "ModulusProfile",
    "SeminormReport",
    "compose",
    "composition_check",
    "dini_integral",
    "holder_cstar_bound",
    "holderlog_cstar_bound",
    "make_witness",
    "modulus_global",
    "modulus_pointwise",
    "modulus_sphere",
    "norm_bstar",
    "norm_cstar",
    "norm_dstar",
    "rescaling_check",
    "seminorm_bstar",
    "seminorm_cstar",
    "seminorm_dstar",
    "seminorm_holder",
    "seminorm_holderlog",
    "seminorm_report",
    "witness_function",
]
