"""Energy-efficient OFDM power allocation with power-splitting receivers."""

from ._core import (
    BruteForceResult,
    ChannelRealization,
    ConfigError,
    InvalidParams,
    PowerAllocation,
    SmallInstance,
    SolveResult,
    SystemParams,
    brute_force,
    dbm_to_watt,
    default_config_json,
    generate_channel,
    path_loss_db,
    random_small_instance,
    solve,
    solve_baseline,
    sweep_csv,
    watt_to_dbm,
)

__all__ = [
    "BruteForceResult",
    "ChannelRealization",
    "ConfigError",
    "InvalidParams",
    "PowerAllocation",
    "SmallInstance",
    "SolveResult",
    "SystemParams",
    "brute_force",
    "dbm_to_watt",
    "default_config_json",
    "generate_channel",
    "path_loss_db",
    "random_small_instance",
    "solve",
    "solve_baseline",
    "sweep_csv",
    "watt_to_dbm",
]
