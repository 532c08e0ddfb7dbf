"""Pris- och VM-livscykelmodell.

Alla VM:ar för max(configs) startas vid initialize; lediga VM:ar stängs av och
startas om vid behov. Ett byte kostar därför omstart (uppskalning) eller stopp
(nedskalning), aldrig en full uppstart.
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class PriceModel:
    per_vm_second: float = 0.0
    vm_launch_s: float = 17.0
    vm_stop_s: float = 27.0
    vm_restart_s: float = 10.0

    def __post_init__(self) -> None:
        for name in ("per_vm_second", "vm_launch_s", "vm_stop_s", "vm_restart_s"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} får inte vara negativ")

    @classmethod
    def from_config(cls, cfg) -> "PriceModel":
        p = cfg.section("pricing")
        return cls(
            per_vm_second=float(p.get("per_vm_second", 0.0)),
            vm_launch_s=float(p.get("vm_launch_s", 17.0)),
            vm_stop_s=float(p.get("vm_stop_s", 27.0)),
            vm_restart_s=float(p.get("vm_restart_s", 10.0)),
        )


@dataclass(frozen=True)
class TransitionCost:
    latency_s: float
    cost: float


def vm_transition_cost(from_config: int, to_config: int, price: PriceModel) -> TransitionCost:
    """Uppskalning: k omstartade VM:ar (parallellt). Nedskalning: stopp."""
    k = to_config - from_config
    if k > 0:
        return TransitionCost(price.vm_restart_s, k * price.vm_restart_s * price.per_vm_second)
    if k < 0:
        return TransitionCost(price.vm_stop_s, -k * price.vm_stop_s * price.per_vm_second)
    return TransitionCost(0.0, 0.0)


def vm_deploy_cost(n_vms: int, price: PriceModel) -> TransitionCost:
    """Initialize startar alla n_vms parallellt (en uppstartstid)."""
    if n_vms < 1:
        raise ValueError(f"n_vms måste vara >= 1: {n_vms}")
    return TransitionCost(price.vm_launch_s, n_vms * price.vm_launch_s * price.per_vm_second)
