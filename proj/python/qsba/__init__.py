"""Quantum and semi-quantum sealed-bid auction simulator."""

from ._qsba import (
    AttackConfig,
    ProtocolFault,
    attack_names,
    bid_digest,
    closed_forms,
    liu_false_permutation_success,
    run_attack,
    run_cli,
    run_legacy,
    run_sqsba,
    success_bounds,
    swap_check_detection,
    wilson_interval,
)


def attack(name, **params):
    """Run an attack with AttackConfig fields given as keyword arguments."""
    cfg = AttackConfig()
    for key, value in params.items():
        if not hasattr(cfg, key):
            raise TypeError(f"unknown attack parameter {key!r}")
        setattr(cfg, key, value)
    return run_attack(name, cfg)


__all__ = [
    "AttackConfig",
    "ProtocolFault",
    "attack",
    "attack_names",
    "bid_digest",
    "closed_forms",
    "liu_false_permutation_success",
    "run_attack",
    "run_cli",
    "run_legacy",
    "run_sqsba",
    "success_bounds",
    "swap_check_detection",
    "wilson_interval",
]
