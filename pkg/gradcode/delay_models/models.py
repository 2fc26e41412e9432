import json
from pathlib import Path
from typing import Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from gradcode.errors import ConfigError


class Scaling(BaseModel):
    """
    How a worker's time grows with the number of gradients it computes.

    data:           Y = points·delta + X
    server:         Y = points·X (delta unused)
    server-shifted: Y = delta + points·X
    """

    model_config = ConfigDict(frozen=True)

    type: Literal["data", "server", "server-shifted"] = "data"
    delta: float = Field(default=0.0, ge=0.0)


class DelayModel(BaseModel):
    """Random per-worker delay X plus its scaling law."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    family: Literal["pareto", "sexp"]
    lam: Optional[float] = Field(default=None, alias="lambda")
    rho: Optional[float] = None
    gamma_min: Optional[float] = Field(default=None, alias="gamma")
    w: Optional[float] = None
    scaling: Scaling = Field(default_factory=Scaling)

    @model_validator(mode="after")
    def _check_family(self):
        if self.family == "pareto":
            if self.lam is None or self.lam <= 0 or self.rho is None or self.rho <= 0:
                raise ValueError("pareto delays need lambda > 0 and rho > 0")
        else:
            if self.gamma_min is None or self.gamma_min < 0 or self.w is None or self.w <= 0:
                raise ValueError("shifted-exponential delays need gamma >= 0 and w > 0")
        return self

    @classmethod
    def pareto(cls, lam: float, rho: float, scaling: str = "data", delta: float = 0.0) -> "DelayModel":
        return cls(family="pareto", lam=lam, rho=rho, scaling=Scaling(type=scaling, delta=delta))

    @classmethod
    def shifted_exp(cls, gamma_min: float, w: float, scaling: str = "data", delta: float = 0.0) -> "DelayModel":
        return cls(family="sexp", gamma_min=gamma_min, w=w, scaling=Scaling(type=scaling, delta=delta))

    def with_delta(self, delta: float) -> "DelayModel":
        return self.model_copy(update={"scaling": Scaling(type=self.scaling.type, delta=delta)})

    def draw(self, rng: np.random.Generator, size=None) -> Union[float, np.ndarray]:
        """Raw delays X by inverse CDF from uniforms in (0, 1]."""
        u = 1.0 - rng.random(size)
        if self.family == "pareto":
            return self.lam * u ** (-1.0 / self.rho)
        return self.gamma_min - self.w * np.log(u)

    def scale(self, raw, points):
        """Completion time for a raw delay and a gradient count."""
        if self.scaling.type == "data":
            return points * self.scaling.delta + raw
        if self.scaling.type == "server":
            return points * raw
        return self.scaling.delta + points * raw

    def to_dict(self) -> dict:
        return self.model_dump(by_alias=True, exclude_none=True)


class WorkerLoadProfile(BaseModel):
    """Gradients each worker computes and how many workers the master waits for."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(gt=0)
    points_per_worker: float = Field(ge=0)
    wait_rank: int

    @model_validator(mode="after")
    def _check_rank(self):
        if not 1 <= self.wait_rank <= self.n:
            raise ValueError(f"wait_rank must lie in [1, {self.n}], got {self.wait_rank}")
        return self

    @property
    def s(self) -> int:
        return self.n - self.wait_rank


def load_delay_model(source: Union[str, Path, dict]) -> DelayModel:
    """Parse a delay model from a dict, a JSON string or a JSON file."""
    try:
        if isinstance(source, dict):
            return DelayModel.model_validate(source)
        text = str(source)
        if not text.lstrip().startswith("{"):
            text = Path(source).read_text()
        return DelayModel.model_validate(json.loads(text))
    except (ValueError, OSError) as exc:
        raise ConfigError(f"invalid delay model: {exc}") from exc
