"""Feichtinger-algebra calculus on finite abelian groups.

The submodules are the public surface; the names below are the ones most
sessions start with.
"""
from .checks import Check
from .groups import GroupSpec, PhasePoint, all_subgroups, annihilator, dual_group, phase_space
from .signals import Signal, a_norm, fourier, inverse_fourier, lp_norm, random_signal
from .tfa import s0_norm, stft
from .verify import SUITES, Report, run_suite

__all__ = [
    "Check",
    "GroupSpec",
    "PhasePoint",
    "Report",
    "SUITES",
    "Signal",
    "a_norm",
    "all_subgroups",
    "annihilator",
    "dual_group",
    "fourier",
    "inverse_fourier",
    "lp_norm",
    "phase_space",
    "random_signal",
    "run_suite",
    "s0_norm",
    "stft",
]
