"""Random relation generators and the registry of executable laws."""

from .generators import GenProfile, GenerationError, generate
from .registry import (
    LAWS, LawReport, Failure, UnknownLaw, run_all, run_law, run_trial, trial_seed,
)
