"""PAC eps-skyline identification for stochastic multi-armed bandits."""

from .arms import ArmSpec, Instance, InvalidArmError, SamplingOracle, make_instance, total_samples
from .instances import StaircaseInstance, decode_guesses, gen_staircase, gen_uniform_random
from .skyline import (
    Block,
    Config,
    LevelCapExceeded,
    RoundRecord,
    RunTrace,
    SkylineResult,
    identify_skyline,
    naive_skyline,
    split_block,
    truncate_skyline,
)
from .subroutines import EstimateRecord, est_mean, find_best, hoeffding_samples
from .verify import ViolationReport, check_event_E, exact_skyline, is_eps_best, is_eps_skyline

__all__ = [
    "ArmSpec", "Instance", "InvalidArmError", "SamplingOracle", "make_instance", "total_samples",
    "StaircaseInstance", "decode_guesses", "gen_staircase", "gen_uniform_random",
    "Block", "Config", "LevelCapExceeded", "RoundRecord", "RunTrace", "SkylineResult",
    "identify_skyline", "naive_skyline", "split_block", "truncate_skyline",
    "EstimateRecord", "est_mean", "find_best", "hoeffding_samples",
    "ViolationReport", "check_event_E", "exact_skyline", "is_eps_best", "is_eps_skyline",
]
