"Application settings via pydantic-settings."

from __future__ import annotations

from typing import Literal

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from cobordia.complex import TieBreak
from cobordia.geometry.alpha import SliceSpec
from cobordia.oracle import DEFAULT_MAX_CELLS


class AppSettings(BaseSettings):
    """App settings loaded from environment and CLI overrides.

    Raises:
        ValueError: If any validation fails.
    """

    model_config = SettingsConfigDict(
        env_prefix="COBORDIA_",
        env_file=".env",
        case_sensitive=False,
    )

    threads: int = Field(default=1, ge=1)
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = "INFO"
    epsilon: float = Field(default=0.1, gt=0.0, lt=0.5)
    axis: int | None = Field(default=None, ge=0)
    strip_slabs: bool = False
    tie_break: TieBreak = TieBreak.INPUT_ORDER
    oracle_max_cells: int = Field(default=DEFAULT_MAX_CELLS, ge=1)
    include_hull: bool = False
    keep_unbounded: bool = False

    @field_validator("log_level", mode="before")
    @classmethod
    def _upper_level(cls, value: object) -> object:
        return value.upper() if isinstance(value, str) else value

    def slice_spec(self, dimension: int) -> SliceSpec:
        """Resolve the slab definition for a cloud of the given dimension.

        Args:
            dimension: Ambient dimension of the point cloud.

        Returns:
            SliceSpec along the configured axis, the last one by default.

        Raises:
            ValueError: If the axis does not exist in that dimension.
        """
        axis = dimension - 1 if self.axis is None else self.axis
        if axis >= dimension:
            raise ValueError(f"Axis {axis} is outside a {dimension}-dimensional cloud.")
        return SliceSpec(axis=axis, epsilon=self.epsilon)
