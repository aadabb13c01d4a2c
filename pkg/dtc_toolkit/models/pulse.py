"""
Pulse models for the DTC toolkit.

This module defines flux waveforms, the multi-exponential Z-pulse distortion
model and the configuration of the Slepian-based adiabatic pulse.
Waveform samples are point values at t_j = j * dt (ns) in units of reduced
flux excursion from the idle point; the waveform is linearly interpolated
between samples, so its duration is (len(samples) - 1) * dt.
"""

import math
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy.integrate import trapezoid

from dtc_toolkit.models.types import FloatArray


class Waveform(BaseModel):
    """Sampled flux pulse."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    samples: FloatArray
    dt: float = Field(default=0.5, gt=0.0, description="Sample period (ns)")
    pad_samples: int = Field(
        default=0, ge=0, description="Leading and trailing zero samples on each side"
    )

    @field_validator("samples")
    @classmethod
    def validate_samples(cls, v: np.ndarray) -> np.ndarray:
        if v.ndim != 1 or v.size < 2:
            raise ValueError("samples must be a 1-D sequence of at least two values")
        if not np.all(np.isfinite(v)):
            raise ValueError("samples must be finite")
        return v

    @model_validator(mode="after")
    def validate_padding(self) -> "Waveform":
        if 2 * self.pad_samples >= self.samples.size:
            raise ValueError("padding leaves no core samples")
        return self

    @property
    def duration(self) -> float:
        return (self.samples.size - 1) * self.dt

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.samples.size) * self.dt

    @property
    def core(self) -> np.ndarray:
        """Samples between the zero pads (endpoints included)."""
        end = self.samples.size - self.pad_samples
        return self.samples[self.pad_samples:end]

    @property
    def peak(self) -> float:
        return float(np.max(np.abs(self.samples)))

    @property
    def area(self) -> float:
        """Trapezoidal area under the pulse (flux x ns)."""
        return float(trapezoid(self.samples, dx=self.dt))

    def scaled(self, amplitude: float) -> "Waveform":
        return self.model_copy(update={"samples": self.samples * amplitude})

    def reversed(self) -> "Waveform":
        return self.model_copy(update={"samples": self.samples[::-1].copy()})

    def concat(self, other: "Waveform") -> "Waveform":
        """
        Join two waveforms that meet at a shared sample.

        Raises:
            ValueError: If the sample periods differ or the boundary values do not match
        """
        if not math.isclose(self.dt, other.dt):
            raise ValueError("waveforms must share a sample period")
        if abs(self.samples[-1] - other.samples[0]) > 1e-12:
            raise ValueError("waveforms must meet at a shared boundary sample")
        samples = np.concatenate([self.samples, other.samples[1:]])
        return Waveform(samples=samples, dt=self.dt, pad_samples=0)

    def csv_rows(self):
        for t, value in zip(self.times, self.samples):
            yield float(t), float(value)


class DistortionTerm(BaseModel):
    """One exponential term a * exp(-t / tau) of the step response."""

    model_config = ConfigDict(frozen=True)

    a: float
    tau_ns: float = Field(gt=0.0)


class DistortionModel(BaseModel):
    """
    Step response s(t) = 1 + sum_k a_k exp(-t / tau_k).

    Positivity of s(t) is required only for inversion and is checked there.
    """

    model_config = ConfigDict(frozen=True)

    terms: List[DistortionTerm] = Field(default_factory=list)
    label: str = ""

    @property
    def max_tau(self) -> float:
        return max((t.tau_ns for t in self.terms), default=0.0)

    def step_response(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        out = np.ones_like(t)
        for term in self.terms:
            out = out + term.a * np.exp(-t / term.tau_ns)
        return out

    def to_dict(self) -> Dict[str, Any]:
        return {"label": self.label, "terms": [t.model_dump() for t in self.terms]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "DistortionModel":
        return cls(
            label=data.get("label", ""),
            terms=[DistortionTerm(**term) for term in data.get("terms", [])],
        )


class SlepianConfig(BaseModel):
    """Configuration of the Slepian adiabatic unit pulse."""

    model_config = ConfigDict(frozen=True)

    duration: float = Field(default=48.0, gt=0.0, description="Core duration (ns)")
    dt: float = Field(default=0.5, gt=0.0, description="Sample period (ns)")
    pad: float = Field(default=2.0, ge=0.0, description="Zero padding on each side (ns)")
    theta_initial: float = Field(default=0.05, gt=0.0)
    theta_final: float = Field(default=math.pi / 2 - 0.05)
    bandwidth: float = Field(
        default=2.5, gt=0.0, description="Time-halfbandwidth product of the prolate window"
    )
    window_points: int = Field(default=1001, ge=11)
    n_control: int = Field(default=20, ge=2, description="Control points for optimizers")

    @model_validator(mode="after")
    def validate_angles(self) -> "SlepianConfig":
        if not self.theta_initial < self.theta_final <= math.pi / 2:
            raise ValueError("require 0 < theta_initial < theta_final <= pi/2")
        if not _is_multiple(self.duration, self.dt) or not _is_multiple(self.pad, self.dt):
            raise ValueError("duration and pad must be whole multiples of dt")
        return self

    @property
    def core_intervals(self) -> int:
        return int(round(self.duration / self.dt))

    @property
    def pad_samples(self) -> int:
        return int(round(self.pad / self.dt))

    def with_duration(self, duration: float, pad: Optional[float] = None) -> "SlepianConfig":
        update: Dict[str, Any] = {"duration": duration}
        if pad is not None:
            update["pad"] = pad
        return SlepianConfig(**{**self.model_dump(), **update})


def _is_multiple(value: float, step: float) -> bool:
    ratio = value / step
    return abs(ratio - round(ratio)) < 1e-9
