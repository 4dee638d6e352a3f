"""One-amplitude scaling-law fits, y = A f(N), by ordinary least squares in linear space."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument


@dataclass(frozen=True)
class ScalingModel:
    form: str  # "power" or "log_over_n"
    exponent: float | None = None

    def __post_init__(self):
        if self.form == "power":
            if self.exponent is None or not math.isfinite(self.exponent):
                raise InvalidArgument("power model needs a finite exponent")
        elif self.form == "log_over_n":
            if self.exponent is not None:
                raise InvalidArgument("log_over_n takes no exponent")
        else:
            raise InvalidArgument(f"unknown model form {self.form!r}")

    @classmethod
    def power(cls, p: float) -> "ScalingModel":
        return cls("power", float(p))

    @classmethod
    def log_over_n(cls) -> "ScalingModel":
        return cls("log_over_n")

    def basis(self, n) -> np.ndarray:
        n = np.asarray(n, dtype=float)
        if self.form == "power":
            return n**self.exponent
        return np.log(n) / n

    def describe(self) -> str:
        if self.form == "power":
            return f"A*N^{self.exponent:.12g}"
        return "A*ln(N)/N"

    @classmethod
    def parse(cls, text: str) -> "ScalingModel":
        """'log_over_n', 'power:-0.6667' or 'power:2'."""
        if text == "log_over_n":
            return cls.log_over_n()
        if text.startswith("power:"):
            num = text.split(":", 1)[1]
            if "/" in num:
                top, bottom = num.split("/")
                return cls.power(float(top) / float(bottom))
            return cls.power(float(num))
        raise InvalidArgument(f"cannot parse model {text!r}")


@dataclass(frozen=True)
class FitResult:
    amplitude: float
    std_error: float
    residual_rms: float
    n_points: int


def fit_amplitude(n_values, y_values, model: ScalingModel) -> FitResult:
    n = np.asarray(n_values, dtype=float)
    y = np.asarray(y_values, dtype=float)
    if n.shape != y.shape or n.ndim != 1:
        raise InvalidArgument("N and y must be 1-D arrays of equal length")
    if n.size < 2:
        raise InvalidArgument("need at least two data points")
    if np.unique(n).size != n.size or np.any(n < 2):
        raise InvalidArgument("N values must be distinct and >= 2")
    if np.any(~np.isfinite(y)) or np.any(y <= 0):
        raise InvalidArgument("y values must be positive and finite")
    f = model.basis(n)
    ff = float(f @ f)
    if ff == 0.0:
        raise InvalidArgument("degenerate model basis")
    amp = float(f @ y) / ff
    resid = y - amp * f
    ss = float(resid @ resid)
    # exact data leaves rounding-level residuals; report them as zero
    if ss <= (1e-13 * float(np.abs(y).max())) ** 2 * n.size:
        ss = 0.0
    std_error = math.sqrt(ss / (n.size - 1) / ff)
    return FitResult(amp, std_error, math.sqrt(ss / n.size), int(n.size))


# Models used for the optimal-time and optimal-QFI scaling of each protocol.
T_OPT_MODELS = {
    "tat": ScalingModel.log_over_n(),
    "tnt": ScalingModel.log_over_n(),
    "oat": ScalingModel.power(-2.0 / 3.0),
}
FQ_OPT_MODELS = {
    "tat": ScalingModel.power(2.0),
    "tnt": ScalingModel.power(1.5),
    "oat": ScalingModel.power(5.0 / 3.0),
}
