"""First-order image-method ray tracer for the urban canyon.

Candidate paths are the direct (LOS) ray plus one specular bounce off each
building facade, the ground (optional) and each truck's two long side faces.
A candidate survives when its specular point lies on the reflecting face and
no vehicle box blocks either leg. Gains follow Friis free-space loss over the
unfolded path length with a fixed loss per bounce.
"""
import math
from dataclasses import dataclass

import numpy as np

from .scene import Kind, receiver_antenna

SPEED_OF_LIGHT = 299_792_458.0


@dataclass(frozen=True)
class PathRecord:
    """One propagation path; AoA is seen from the receiver, AoD from the RSU.

    Azimuth is measured in the x-y plane from +x, elevation from the x-y
    plane towards +z.
    """

    aoa_az: float
    aoa_el: float
    aod_az: float
    aod_el: float
    delay: float
    gain: complex
    via: str = "los"

    @property
    def bounces(self):
        return 0 if self.via == "los" else 1

    def to_dict(self):
        return {"aoa_az": self.aoa_az, "aoa_el": self.aoa_el, "aod_az": self.aod_az,
                "aod_el": self.aod_el, "delay": self.delay,
                "gain": [self.gain.real, self.gain.imag], "via": self.via}

    @classmethod
    def from_dict(cls, data):
        re, im = data["gain"]
        return cls(data["aoa_az"], data["aoa_el"], data["aod_az"], data["aod_el"],
                   data["delay"], complex(re, im), data.get("via", "los"))


@dataclass(frozen=True)
class RaytraceConfig:
    carrier_freq: float = 28e9
    max_paths: int = 10
    reflection_loss_db: float = 6.0
    include_ground: bool = True
    tx_power_dbm: float = 30.0

    def __post_init__(self):
        if self.max_paths < 1:
            raise ValueError("max_paths must be >= 1")
        if self.carrier_freq <= 0:
            raise ValueError("carrier_freq must be positive")

    @property
    def wavelength(self):
        return SPEED_OF_LIGHT / self.carrier_freq


def free_space_path_loss_db(distance, carrier_freq):
    """Friis loss ``20 log10(4 pi d / lambda)`` in dB."""
    wavelength = SPEED_OF_LIGHT / carrier_freq
    return 20.0 * math.log10(4.0 * math.pi * distance / wavelength)


def segments_hit_boxes(p0, p1, lo, hi):
    """Slab test of the closed segment ``p0 -> p1`` against closed boxes.

    ``lo`` and ``hi`` are ``(n, 3)`` corner arrays; returns ``(n,)`` bools.
    """
    p0 = np.asarray(p0, dtype=np.float64)
    d = np.asarray(p1, dtype=np.float64) - p0
    lo = np.atleast_2d(lo)
    hi = np.atleast_2d(hi)
    t_enter = np.zeros(lo.shape[0])
    t_exit = np.ones(lo.shape[0])
    for axis in range(3):
        if d[axis] == 0.0:
            outside = (p0[axis] < lo[:, axis]) | (p0[axis] > hi[:, axis])
            t_exit = np.where(outside, -np.inf, t_exit)
            continue
        t0 = (lo[:, axis] - p0[axis]) / d[axis]
        t1 = (hi[:, axis] - p0[axis]) / d[axis]
        t_enter = np.maximum(t_enter, np.minimum(t0, t1))
        t_exit = np.minimum(t_exit, np.maximum(t0, t1))
    return t_enter <= t_exit


def segment_hits_box(p0, p1, box):
    """True iff the segment ``p0 -> p1`` touches the vehicle's closed box.

    An endpoint lying on a face counts as a hit.
    """
    p0 = p0.array() if hasattr(p0, "array") else p0
    p1 = p1.array() if hasattr(p1, "array") else p1
    if np.array_equal(np.asarray(p0), np.asarray(p1)):
        raise ValueError("segment endpoints must differ")
    return bool(segments_hit_boxes(p0, p1, box.lo[None, :], box.hi[None, :])[0])


def _direction_angles(vec):
    az = math.atan2(vec[1], vec[0])
    el = math.atan2(vec[2], math.hypot(vec[0], vec[1]))
    return az, el


def _make_path(points, cfg, via):
    legs = [np.linalg.norm(b - a) for a, b in zip(points[:-1], points[1:])]
    length = float(sum(legs))
    delay = length / SPEED_OF_LIGHT
    bounces = len(points) - 2
    amp_db = (cfg.tx_power_dbm - 30.0) - free_space_path_loss_db(length, cfg.carrier_freq) \
        - cfg.reflection_loss_db * bounces
    # amplitude in sqrt(mW): tx power is referenced to 1 mW
    amplitude = 10.0 ** ((amp_db + 30.0) / 20.0)
    phase = -2.0 * math.pi * cfg.carrier_freq * delay
    aod = _direction_angles(points[1] - points[0])
    aoa = _direction_angles(points[-2] - points[-1])
    return PathRecord(aoa[0], aoa[1], aod[0], aod[1], delay,
                      complex(amplitude * math.cos(phase), amplitude * math.sin(phase)), via)


def _reflectors(scene, cfg):
    """Yield ``(axis, plane value, bounds, source index, outward sign, tag)``.

    ``bounds`` limits the specular point on the two in-plane axes (None for
    unbounded planes); ``outward sign`` is the side both endpoints must be on.
    """
    w_lo, w_hi = sorted(scene.walls)
    yield 1, w_lo, None, None, +1, f"wall@y={w_lo:g}"
    yield 1, w_hi, None, None, -1, f"wall@y={w_hi:g}"
    if cfg.include_ground:
        yield 2, 0.0, None, None, +1, "ground"
    for i, v in enumerate(scene.vehicles):
        if v.kind is not Kind.TRUCK:
            continue
        lo, hi = v.lo, v.hi
        bounds = {0: (lo[0], hi[0]), 2: (lo[2], hi[2])}
        for sign, y in ((-1, lo[1]), (+1, hi[1])):
            yield 1, y, bounds, i, sign, f"truck@x={v.center.x:.3f},y={v.center.y:.3f},side={sign:+d}"


def trace(scene, cfg=RaytraceConfig()):
    """Strongest ``cfg.max_paths`` unblocked paths, sorted by ``|gain|``."""
    tx = scene.rsu.array()
    rx = receiver_antenna(scene).array()
    n_boxes = len(scene.vehicles)
    lo = np.array([v.lo for v in scene.vehicles]).reshape(n_boxes, 3)
    hi = np.array([v.hi for v in scene.vehicles]).reshape(n_boxes, 3)

    def clear(a, b, skip=None):
        if n_boxes == 0:
            return True
        hits = segments_hit_boxes(a, b, lo, hi)
        if skip is not None:
            hits[skip] = False
        return not hits.any()

    paths = []
    if clear(tx, rx):
        paths.append(_make_path([tx, rx], cfg, "los"))

    for axis, value, bounds, source, sign, tag in _reflectors(scene, cfg):
        if sign * (tx[axis] - value) <= 0 or sign * (rx[axis] - value) <= 0:
            continue
        image = tx.copy()
        image[axis] = 2.0 * value - tx[axis]
        t = (value - image[axis]) / (rx[axis] - image[axis])
        point = image + t * (rx - image)
        point[axis] = value
        if bounds is not None and any(
                not (b_lo <= point[ax] <= b_hi) for ax, (b_lo, b_hi) in bounds.items()):
            continue
        if clear(tx, point, source) and clear(point, rx, source):
            paths.append(_make_path([tx, point, rx], cfg, tag))

    paths.sort(key=lambda p: -abs(p.gain))
    return paths[: cfg.max_paths]
