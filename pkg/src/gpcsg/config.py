"""Run configuration: JSON files with documented defaults, CLI overridable."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .problems import PROBLEM_NAMES, builtin_problem

__all__ = ["RunConfig", "load_config"]


@dataclass
class RunConfig:
    """Settings for one solver run.

    cells is an int for 1D problems or a pair [nx, ny] for 2D ones.
    dt_policy 'cfl' uses the wave-speed bound; 'dx53' fixes dt = dx^(5/3)
    (the accuracy-study schedule).  mode picks the 2D sweep composition.
    """

    problem: str = "smooth"
    order: int = 4
    cells: object = 40
    cfl: float = 0.6
    dt_policy: str = "cfl"
    n_xi: int | None = None
    limiter: bool = True
    mode: str = "strang"  # 2D splitting: strang | thirdorder
    alternate_parity: bool = True
    solver: str = "sg"  # sg | collocation
    colloc_nodes: int = 40
    alpha_safety: float = 1.05
    t_final: float | None = None
    snapshots: list = field(default_factory=list)
    out: str | None = None
    vtk: bool = False
    dry_run: bool = False

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.problem not in PROBLEM_NAMES:
            raise ValueError(f"unknown problem {self.problem!r}; choose from {PROBLEM_NAMES}")
        if self.order < 0:
            raise ValueError("order must be >= 0")
        if not 0.0 < self.cfl <= 1.0:
            raise ValueError("cfl must be in (0, 1]")
        if self.dt_policy not in ("cfl", "dx53"):
            raise ValueError("dt_policy must be 'cfl' or 'dx53'")
        if self.mode not in ("strang", "thirdorder"):
            raise ValueError("mode must be 'strang' or 'thirdorder'")
        if self.solver not in ("sg", "collocation"):
            raise ValueError("solver must be 'sg' or 'collocation'")
        ndim = builtin_problem(self.problem).ndim
        if ndim == 1:
            if not isinstance(self.cells, int):
                raise ValueError(f"1D problem {self.problem!r} needs an integer cell count")
        else:
            if isinstance(self.cells, int):
                self.cells = [self.cells, self.cells]
            cells = list(self.cells)
            if len(cells) != 2:
                raise ValueError("2D problems need cells = [nx, ny]")
            self.cells = [int(cells[0]), int(cells[1])]

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


def load_config(path: str | Path | None = None, overrides: dict | None = None) -> RunConfig:
    """Build a RunConfig from an optional JSON file plus override values."""
    data: dict = {}
    if path is not None:
        data.update(json.loads(Path(path).read_text()))
    for key, value in (overrides or {}).items():
        if value is not None:
            data[key] = value
    return RunConfig.from_dict(data)
