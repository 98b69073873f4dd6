"""Uniform CQI quantisation of received power and its reconstruction."""
import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class CqiParams:
    """Power bounds in dBm and granularity in dB.

    ``granularity=None`` disables quantisation: both maps become identities.
    """

    p_upper: float = 45.0
    p_lower: float = 0.0
    granularity: float | None = 1.0

    def __post_init__(self):
        if self.p_upper <= self.p_lower:
            raise ValueError("p_upper must exceed p_lower")
        if self.granularity is not None and not self.granularity > 0:
            raise ValueError("granularity must be positive (or None)")

    @property
    def enabled(self):
        return self.granularity is not None

    @property
    def max_index(self):
        return math.ceil((self.p_upper - self.p_lower) / self.granularity)


NO_QUANTIZATION = CqiParams(granularity=None)

# grid points given in decimal (e.g. -79.8 with r = 0.2) divide to k + 1e-14;
# levels this close to an integer are treated as exactly on the grid
_GRID_SNAP = 1e-9


def quantize(p, params):
    """CQI index ``ceil(min(max((p - P_l) / r, 0), (P_u - P_l) / r))``.

    Works elementwise on arrays. Without quantisation ``p`` is returned as is.
    """
    if not params.enabled:
        return p
    r = params.granularity
    level = np.minimum(np.maximum((np.asarray(p, dtype=np.float64) - params.p_lower) / r, 0.0),
                       (params.p_upper - params.p_lower) / r)
    nearest = np.round(level)
    level = np.where(np.abs(level - nearest) <= _GRID_SNAP, nearest, level)
    q = np.ceil(level).astype(np.int64)
    return int(q) if q.ndim == 0 else q


def dequantize(q, params):
    """Reconstructed power ``r * q + P_l`` in dBm."""
    if not params.enabled:
        return q
    out = params.granularity * np.asarray(q, dtype=np.float64) + params.p_lower
    return float(out) if out.ndim == 0 else out


def reconstruct(p, params):
    """``dequantize(quantize(p))``: the power the infrastructure recovers."""
    return dequantize(quantize(p, params), params)
