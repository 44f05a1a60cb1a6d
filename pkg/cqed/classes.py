import math
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .errors import ConfigurationError

FigureId = Literal["fig2", "fig3", "fig4", "fig5", "fig6", "rb87", "audit"]
FIGURE_IDS = ("fig2", "fig3", "fig4", "fig5", "fig6", "rb87", "audit")

TWO_PI = 2.0 * math.pi


class CavityParams(BaseModel):
    """One atom-cavity system in angular-frequency units (rotating frame, omega_c = 0)."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    g: float = Field(ge=0)
    kappa: float = Field(gt=0)
    gamma: float = Field(ge=0)
    delta: float = 0.0  # omega_c - omega_e
    omega_c: float = 0.0

    @property
    def real_mu_regime(self) -> bool:
        return self.g < (self.kappa - self.gamma) / (4.0 * math.sqrt(2.0))

    @classmethod
    def compromise(cls, kappa: float, gamma: float, delta: float = 0.0) -> "CavityParams":
        """Emitter with g = (kappa - gamma)/(8 sqrt 2), half the real-mu bound."""
        return cls(g=(kappa - gamma) / (8.0 * math.sqrt(2.0)), kappa=kappa, gamma=gamma, delta=delta)

    def replace(self, **changes) -> "CavityParams":
        return validated(CavityParams, {**self.model_dump(), **changes})


class PhysicalUnits(BaseModel):
    model_config = ConfigDict(frozen=True)

    mode: Literal["dimensionless", "physical"] = "dimensionless"
    frequency_unit: Literal["MHz"] = "MHz"  # rate/2pi
    time_unit: Literal["us"] = "us"


class CavityInput(BaseModel):
    """Rates as written in a scenario file; in physical mode they are r/2pi in MHz."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False, extra="forbid")

    g: float = Field(ge=0)
    kappa: float = Field(gt=0)
    gamma: float = Field(ge=0)
    delta: float = 0.0
    omega_c: float = 0.0


class GridSettings(BaseModel):
    model_config = ConfigDict(frozen=True, allow_inf_nan=False, extra="forbid")

    n_points: int = Field(default=4001, ge=3)
    width_factor: float = Field(default=40.0, gt=0)
    half_width: Optional[float] = Field(default=None, gt=0)


class TimingSettings(BaseModel):
    model_config = ConfigDict(frozen=True, allow_inf_nan=False, extra="forbid")

    t_start: Optional[float] = Field(default=None, ge=0)
    dt_wait: Optional[float] = Field(default=None, gt=0)
    n_times: int = Field(default=801, ge=3)
    distance_km: float = Field(default=0.0, ge=0)


class SweepSettings(BaseModel):
    """One sweep axis in the scenario's own units; gamma2_values defaults to cavity_b.gamma."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False, extra="forbid")

    axis: Literal["g1", "gamma1", "t"]
    start: float
    stop: float
    n: int = Field(default=11, ge=1)
    gamma2_values: Optional[List[float]] = None


class OutputSettings(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    directory: str = "out"
    plot: bool = False


class ScenarioConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str = "scenario"
    units: PhysicalUnits = PhysicalUnits()
    cavity_a: CavityInput
    cavity_b: CavityInput
    grid: GridSettings = GridSettings()
    timing: TimingSettings = TimingSettings()
    sweep: Optional[SweepSettings] = None
    output: OutputSettings = OutputSettings()

    def params_a(self) -> CavityParams:
        return cavity_from_input(self.cavity_a, self.units)

    def params_b(self) -> CavityParams:
        return cavity_from_input(self.cavity_b, self.units)


class FigureRun(BaseModel):
    """One figure request coming from the command line."""

    model_config = ConfigDict(frozen=True)

    id: FigureId
    out_dir: str = "out"
    grid_points: Optional[int] = Field(default=None, ge=3)
    grid_width: Optional[float] = Field(default=None, gt=0)
    plot: bool = False
    seed: int = 1
    n_draws: int = Field(default=100, ge=1)
    config_path: Optional[str] = None
    distance_km: float = Field(default=0.0, ge=0)


def validated(model, data: Dict):
    """Build a pydantic model, turning the first validation failure into a ConfigurationError."""
    try:
        return model(**data)
    except ValidationError as e:
        first = e.errors()[0]
        field = ".".join(str(part) for part in first["loc"]) or model.__name__
        raise ConfigurationError(first["msg"], field=field) from e


def cavity_from_input(raw: CavityInput, units: PhysicalUnits) -> CavityParams:
    if units.mode == "physical":
        from .helpers import to_angular
        return to_angular(raw.model_dump(), units)
    return validated(CavityParams, raw.model_dump())
