"""Receiver-centred location features ``[r, t1, t2, c1, c2]``.

Groups are lane-1 trucks, lane-2 trucks, lane-1 cars and lane-2 cars, each
sorted by ``|x|`` (ties by signed ``x``), truncated to the nearest ``N`` and
padded with virtual vehicles far down the road.
"""
from dataclasses import dataclass

import numpy as np

from .scene import Kind, receiver_antenna

GROUPS = ((Kind.TRUCK, 1), (Kind.TRUCK, 2), (Kind.CAR, 1), (Kind.CAR, 2))
GROUP_NAMES = ("t1", "t2", "c1", "c2")
MAX_LEVEL = len(GROUPS) + 1


@dataclass(frozen=True)
class EncoderConfig:
    """``awareness_level`` keeps the RSU plus the first ``level - 1`` groups."""

    max_per_group: int = 2
    virtual_x: float = 1e4
    awareness_level: int = MAX_LEVEL

    def __post_init__(self):
        if self.max_per_group < 1:
            raise ValueError("max_per_group must be >= 1")
        if not 1 <= self.awareness_level <= MAX_LEVEL:
            raise ValueError(f"awareness_level must be in [1, {MAX_LEVEL}]")


def feature_length(cfg):
    return 2 + (cfg.awareness_level - 1) * cfg.max_per_group * 2


def feature_names(cfg):
    names = ["r_x", "r_y"]
    for g in GROUP_NAMES[: cfg.awareness_level - 1]:
        for k in range(1, cfg.max_per_group + 1):
            names += [f"{g}_{k}_x", f"{g}_{k}_y"]
    return names


def encode(scene, cfg=EncoderConfig()):
    """Feature vector of ``scene`` in the receiver frame."""
    origin = receiver_antenna(scene)
    ox, oy = origin.x, origin.y
    values = [scene.rsu.x - ox, scene.rsu.y - oy]
    for kind, lane in GROUPS[: cfg.awareness_level - 1]:
        pts = sorted(((v.center.x - ox, v.center.y - oy) for v in scene.vehicles
                      if v.kind is kind and v.lane == lane),
                     key=lambda p: (abs(p[0]), p[0]))
        pts = pts[: cfg.max_per_group]
        pad_y = scene.lane_y[lane - 1] - oy
        pts += [(cfg.virtual_x, pad_y)] * (cfg.max_per_group - len(pts))
        for x, y in pts:
            values += [x, y]
    return np.asarray(values, dtype=np.float64)


def truncate(features, level, max_per_group):
    """Cut full-level feature rows down to ``awareness_level = level``."""
    n = 2 + (level - 1) * max_per_group * 2
    return np.asarray(features)[..., :n]
