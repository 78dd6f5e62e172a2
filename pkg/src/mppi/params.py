"""MPPI parameters and the off-road and on-road presets."""

from pydantic import BaseModel, ConfigDict, Field


class MppiParams(BaseModel):
    """Scalars of the image-space MPPI cost and sampler.

    ``lambda_`` is also accepted as ``lambda`` when built from a mapping.
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    horizon: int = Field(60, ge=1, description="T, steps")
    dt: float = Field(0.02, gt=0, description="control period, seconds")
    iterations: int = Field(2, ge=1, description="K, optimization repetitions per step")
    sigma_throttle: float = Field(0.35, gt=0)
    sigma_steer: float = Field(0.3, gt=0)
    speed_cost: float = Field(1.8, ge=0, description="C_s")
    crash_cost: float = Field(0.9, ge=0, description="C_c")
    gamma: float = Field(0.99, gt=0, le=1)
    v_desired: float = Field(5.0, description="m/s")
    lambda_: float = Field(1.0, gt=0, alias="lambda")
    num_samples: int = Field(1200, ge=2)
    soft_indicator: bool = True
    indicator_threshold: float = Field(0.5, gt=0, le=1)
    workers: int = Field(1, ge=1, description="threads used to score rollouts")

    @property
    def sigmas(self) -> tuple[float, float]:
        """Standard deviations in [throttle, steering] order."""
        return (self.sigma_throttle, self.sigma_steer)

    @classmethod
    def offroad(cls, **overrides) -> "MppiParams":
        return cls(**{"v_desired": 5.0, **overrides})

    @classmethod
    def onroad(cls, **overrides) -> "MppiParams":
        return cls(**{"v_desired": 2.5, **overrides})

    def with_updates(self, **changes) -> "MppiParams":
        """Validated copy with ``changes`` applied."""
        data = self.model_dump(by_alias=True)
        if "lambda_" in changes:
            changes["lambda"] = changes.pop("lambda_")
        data.update(changes)
        return MppiParams(**data)
