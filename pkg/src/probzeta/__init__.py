"""Exact probabilistic zeta functions of finite permutation groups."""

from .dirichlet import DirichletPoly, evaluate, phi, phi_inverse, project, render, shift
from .multipoly import MultiPoly
from .permgroup import Perm, PermGroup, SizeRefusal, builtin, load_group
from .zeta import chief_factorization, generation_probability, p_g, p_gn

__version__ = "0.1.0"

__all__ = [
    "DirichletPoly",
    "MultiPoly",
    "Perm",
    "PermGroup",
    "SizeRefusal",
    "builtin",
    "chief_factorization",
    "evaluate",
    "generation_probability",
    "load_group",
    "p_g",
    "p_gn",
    "phi",
    "phi_inverse",
    "project",
    "render",
    "shift",
]
