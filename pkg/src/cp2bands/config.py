"""Run configuration: a flat JSON document, overridable from the command line.

Keys and units (all energies in units of the electronic splitting of H0):

    N                     polyad quantum number (integer >= 1)
    lambda_min/max/steps  uniform lambda grid for ``spectrum`` (steps >= 1)
    lambdas               explicit lambda list; overrides the uniform grid when set
    gap_factor            band split factor (> 1); null selects the N-dependent default
    line_grid_t/phi       (t, phi) grid for first Chern numbers on the line
    volume_grid           points per axis of the 4D chart grid (doubled once)
    gap_tol               gap below which bands count as touching
    residual_max          max distance of an invariant from its rounded value
    search_grid/iters/sweeps/starts   phase-space gap search controls
    degeneracy_resolution lambda points scanned by ``degeneracy``
    seed                  seed for randomized multistarts
    out                   output directory
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from .chern import ChernConfig
from .errors import ConfigError
from .symbol import SearchConfig

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class RunConfig:
    N: int = 4
    lambda_min: float = 0.0
    lambda_max: float = 1.0
    lambda_steps: int = 101
    lambdas: tuple[float, ...] | None = None
    gap_factor: float | None = None
    line_grid_t: int = 128
    line_grid_phi: int = 256
    volume_grid: int = 24
    gap_tol: float = 1e-6
    residual_max: float = 0.05
    search_grid: int = 10
    search_iters: int = 64
    search_sweeps: int = 40
    search_starts: int = 3
    random_starts: int = 0
    degeneracy_resolution: int = 41
    seed: int = 0
    out: str = "out"

    def __post_init__(self):
        if self.lambdas is not None:
            object.__setattr__(self, "lambdas", tuple(float(x) for x in self.lambdas))
        self.validate()

    def validate(self) -> None:
        def need(cond, msg):
            if not cond:
                raise ConfigError(msg)

        need(isinstance(self.N, int) and self.N >= 1, f"N must be an integer >= 1, got {self.N!r}")
        need(0.0 <= self.lambda_min <= self.lambda_max <= 1.0, "need 0 <= lambda_min <= lambda_max <= 1")
        need(self.lambda_steps >= 1, "lambda_steps must be >= 1")
        if self.lambdas is not None:
            need(len(self.lambdas) > 0, "lambdas must not be empty")
            need(all(0.0 <= x <= 1.0 for x in self.lambdas), "lambdas must lie in [0, 1]")
        need(self.gap_factor is None or self.gap_factor > 1.0, "gap_factor must exceed 1")
        need(self.line_grid_t >= 4 and self.line_grid_phi >= 4, "line grids need at least 4 points")
        need(self.volume_grid >= 4, "volume_grid needs at least 4 points")
        need(self.gap_tol > 0.0, "gap_tol must be positive")
        need(0.0 < self.residual_max <= 0.5, "residual_max must lie in (0, 0.5]")
        need(self.search_grid >= 2 and self.search_iters >= 1 and self.search_sweeps >= 1, "bad search settings")
        need(self.search_starts >= 1 and self.random_starts >= 0, "bad search starts")
        need(self.degeneracy_resolution >= 2, "degeneracy_resolution must be >= 2")

    def lambda_grid(self) -> list[float]:
        if self.lambdas is not None:
            return list(self.lambdas)
        if self.lambda_steps == 1:
            return [self.lambda_min]
        step = (self.lambda_max - self.lambda_min) / (self.lambda_steps - 1)
        return [self.lambda_min + k * step for k in range(self.lambda_steps)]

    def search(self) -> SearchConfig:
        return SearchConfig(
            grid=self.search_grid,
            refine_iters=self.search_iters,
            sweeps=self.search_sweeps,
            n_starts=self.search_starts,
            random_starts=self.random_starts,
            seed=self.seed,
        )

    def chern(self) -> ChernConfig:
        return ChernConfig(
            line_grid=(self.line_grid_t, self.line_grid_phi),
            volume_grid=self.volume_grid,
            residual_max=self.residual_max,
            gap_tol=self.gap_tol,
            search=replace(self.search(), grid=min(self.search_grid, 8)),
        )

    def to_dict(self) -> dict:
        d = asdict(self)
        if d["lambdas"] is not None:
            d["lambdas"] = list(d["lambdas"])
        return {"schema_version": SCHEMA_VERSION, **d}

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        data = dict(data)
        version = data.pop("schema_version", SCHEMA_VERSION)
        if version != SCHEMA_VERSION:
            raise ConfigError(f"unsupported config schema_version {version}")
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc


def load_config(path: str | Path | None) -> RunConfig:
    if path is None:
        return RunConfig()
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    return RunConfig.from_dict(data)


def dump_config(cfg: RunConfig, path: str | Path) -> None:
    Path(path).write_text(json.dumps(cfg.to_dict(), indent=2) + "\n")
