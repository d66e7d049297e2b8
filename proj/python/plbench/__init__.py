"""Finite-sum optimization benchmark under the PL condition.

Thin wrapper over the compiled core: hard-instance oracles, mixing-matrix
spectral tools, solver parameter rules and the experiment runner.
"""

from ._core import (
    Chain,
    check_instance,
    default_round_count,
    drone_default_params,
    iota,
    mixing_for_gap,
    plot,
    psi,
    psi_grad,
    run_experiment,
    spectral,
)

__all__ = [
    "Chain",
    "check_instance",
    "default_round_count",
    "drone_default_params",
    "iota",
    "mixing_for_gap",
    "plot",
    "psi",
    "psi_grad",
    "run_experiment",
    "spectral",
]
