"""
Run configuration for the replay harness and the CLI.
"""
from __future__ import annotations

import os
import re
from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .errors import ConfigError

SEED_ENV = "HUBS_SEED"
LOG_LEVEL_ENV = "HUBS_LOG_LEVEL"

ALGORITHMS = ("dense-incr", "sparse-incr", "relax-incr", "exact-decr", "approx-decr", "lv-decr")
INCREMENTAL_ALGORITHMS = frozenset({"dense-incr", "sparse-incr", "relax-incr"})
EXACT_ALGORITHMS = frozenset({"exact-decr", "lv-decr"})

EACH_OP_LIMIT = 64  # beyond this n the default cadence thins out
DEFAULT_STRIDE = 10

_CHECK = re.compile(r"^(each|end|auto|k:([1-9][0-9]*))$")

Algorithm = Literal["dense-incr", "sparse-incr", "relax-incr", "exact-decr", "approx-decr", "lv-decr"]


class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    algo: Algorithm = Field(..., description="Pipeline to replay")
    n: int = Field(16, ge=2, description="Vertex count (ignored when a stream file is given)")
    m: int = Field(32, ge=0, description="Structural ops to generate")
    W: float = Field(1.0, ge=1, description="Maximum edge weight; 1 means unweighted")
    eps: float = Field(0.5, gt=0, lt=1, description="Approximation parameter")
    d: Optional[int] = Field(None, ge=2, description="Even hop parameter of sparse-incr; auto-tuned when omitted")
    z: float = Field(4.0, gt=0, description="Hub family sampling constant")
    c: float = Field(3.0, gt=1, description="Blocker sampling constant")
    seed: int = Field(0, description="Seed for stream generation and every randomized component")
    stream: Optional[Path] = Field(None, description="Replay this stream file instead of generating one")
    check: str = Field("auto", description="Check cadence: each | k:<int> | end | auto")
    csv: Optional[Path] = Field(None, description="Write the per-check summary CSV here")
    weight_changes: int = Field(0, ge=0, description="Extra weight-change ops mixed into a generated stream")
    record_timing: bool = Field(True, description="Record elapsed_ns; off makes the CSV byte-stable")
    las_vegas_hubs: bool = Field(False, description="sparse-incr: sample hubs instead of the greedy blocker")

    @field_validator("check")
    @classmethod
    def _valid_check(cls, value: str) -> str:
        if not _CHECK.match(value):
            raise ValueError(f"check must be each, end, auto or k:<positive int>, got {value!r}")
        return value

    @property
    def incremental(self) -> bool:
        return self.algo in INCREMENTAL_ALGORITHMS

    @property
    def exact(self) -> bool:
        return self.algo in EXACT_ALGORITHMS

    def stride(self, n: Optional[int] = None) -> Optional[int]:
        """Ops between checks; None means only at the end."""
        n = self.n if n is None else n
        if self.check == "each":
            return 1
        if self.check == "end":
            return None
        if self.check == "auto":
            return 1 if n <= EACH_OP_LIMIT else DEFAULT_STRIDE
        return int(self.check.split(":", 1)[1])


def make_config(**values) -> RunConfig:
    """Build a RunConfig, applying HUBS_SEED and wrapping validation errors."""
    env_seed = os.environ.get(SEED_ENV)
    if env_seed is not None:
        try:
            values["seed"] = int(env_seed)
        except ValueError as exc:
            raise ConfigError(f"{SEED_ENV}={env_seed!r} is not an integer") from exc
    values = {k: v for k, v in values.items() if v is not None}
    try:
        return RunConfig(**values)
    except ValidationError as exc:
        raise ConfigError(str(exc)) from exc
