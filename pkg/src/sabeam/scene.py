"""Random two-lane urban-canyon scenes with an RSU, trucks and cars."""
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np


class ConfigurationError(ValueError):
    """Raised for geometrically impossible scene configurations."""


@dataclass(frozen=True)
class Vec3:
    x: float
    y: float
    z: float

    def __post_init__(self):
        if not all(np.isfinite((self.x, self.y, self.z))):
            raise ValueError(f"non-finite coordinate in {self!r}")

    def array(self):
        return np.array([self.x, self.y, self.z], dtype=np.float64)

    @classmethod
    def of(cls, seq):
        x, y, z = seq
        return cls(float(x), float(y), float(z))


@dataclass(frozen=True)
class VehicleDims:
    length: float
    height: float
    width: float

    def __post_init__(self):
        if min(self.length, self.height, self.width) <= 0:
            raise ValueError("vehicle dimensions must be strictly positive")


class Kind(str, Enum):
    TRUCK = "truck"
    CAR = "car"


@dataclass(frozen=True)
class Vehicle:
    """Axis-aligned box resting on the ground; ``center.z == height / 2``."""

    kind: Kind
    lane: int
    center: Vec3
    dims: VehicleDims

    @property
    def lo(self):
        c, d = self.center, self.dims
        return np.array([c.x - d.length / 2, c.y - d.width / 2, 0.0])

    @property
    def hi(self):
        c, d = self.center, self.dims
        return np.array([c.x + d.length / 2, c.y + d.width / 2, d.height])

    def to_dict(self):
        c, d = self.center, self.dims
        return {"kind": self.kind.value, "lane": self.lane,
                "center": [c.x, c.y, c.z], "dims": [d.length, d.height, d.width]}

    @classmethod
    def from_dict(cls, data):
        return cls(Kind(data["kind"]), int(data["lane"]), Vec3.of(data["center"]),
                   VehicleDims(*map(float, data["dims"])))


@dataclass(frozen=True)
class SceneConfig:
    """Canyon geometry and traffic statistics.

    Dimensions are (length, height, width) in metres; ``density`` is vehicles
    per lane per 100 m of road.
    """

    length: float = 200.0
    lane_y: tuple = (6.0, 10.0)
    wall_y: tuple = (0.0, 20.0)
    rsu: tuple = (0.0, 1.0, 5.0)
    truck_dims: tuple = (12.0, 3.5, 2.6)
    car_dims: tuple = (5.0, 1.5, 1.9)
    density: float = 8.0
    truck_ratio: float = 0.4
    min_gap: float = 2.0

    def validate(self):
        w0, w1 = sorted(self.wall_y)
        if self.length <= 0:
            raise ConfigurationError("canyon length must be positive")
        if self.density <= 0:
            raise ConfigurationError("vehicle density must be positive")
        if not 0.0 <= self.truck_ratio < 1.0:
            # a receiver car must be drawable
            raise ConfigurationError("truck_ratio must lie in [0, 1)")
        if self.min_gap < 0:
            raise ConfigurationError("min_gap must be non-negative")
        if len(self.lane_y) != 2 or len(self.wall_y) != 2:
            raise ConfigurationError("need exactly two lanes and two walls")
        if abs(self.lane_y[0] - self.rsu[1]) > abs(self.lane_y[1] - self.rsu[1]):
            raise ConfigurationError("lane 1 must be the lane nearer the RSU")
        half_width = max(self.truck_dims[2], self.car_dims[2]) / 2
        for y in self.lane_y:
            if not (w0 + half_width < y < w1 - half_width):
                raise ConfigurationError(f"lane at y={y} does not fit between the walls")
        if not w0 < self.rsu[1] < w1:
            raise ConfigurationError("RSU must stand inside the canyon")
        VehicleDims(*self.truck_dims)
        VehicleDims(*self.car_dims)
        return self


@dataclass(frozen=True)
class Scene:
    rsu: Vec3
    receiver: Vehicle
    vehicles: tuple
    walls: tuple
    seed: int = 0
    lane_y: tuple = (6.0, 10.0)

    def translated(self, dx, dy):
        def move(v):
            c = v.center
            return replace(v, center=Vec3(c.x + dx, c.y + dy, c.z))

        return Scene(Vec3(self.rsu.x + dx, self.rsu.y + dy, self.rsu.z),
                     move(self.receiver), tuple(move(v) for v in self.vehicles),
                     (self.walls[0] + dy, self.walls[1] + dy), self.seed,
                     (self.lane_y[0] + dy, self.lane_y[1] + dy))

    def scaled(self, factor):
        """Scale every coordinate and dimension about the origin."""
        def grow(v):
            c, d = v.center, v.dims
            return Vehicle(v.kind, v.lane, Vec3(c.x * factor, c.y * factor, c.z * factor),
                           VehicleDims(d.length * factor, d.height * factor, d.width * factor))

        return Scene(Vec3.of(self.rsu.array() * factor), grow(self.receiver),
                     tuple(grow(v) for v in self.vehicles),
                     (self.walls[0] * factor, self.walls[1] * factor), self.seed,
                     (self.lane_y[0] * factor, self.lane_y[1] * factor))

    def to_dict(self):
        return {"rsu": [self.rsu.x, self.rsu.y, self.rsu.z],
                "receiver": self.receiver.to_dict(),
                "vehicles": [v.to_dict() for v in self.vehicles],
                "walls": list(self.walls), "lanes": list(self.lane_y), "seed": self.seed}

    @classmethod
    def from_dict(cls, data):
        return cls(Vec3.of(data["rsu"]), Vehicle.from_dict(data["receiver"]),
                   tuple(Vehicle.from_dict(v) for v in data["vehicles"]),
                   tuple(float(w) for w in data["walls"]), int(data["seed"]),
                   tuple(float(y) for y in data.get("lanes", (6.0, 10.0))))


def _drop_lane(rng, cfg, lane):
    """Poisson count of vehicles placed at random non-overlapping spots.

    Free road length is split into uniformly random gaps (sorted uniforms), so
    placement never overlaps and needs no retry loop. Vehicles that cannot fit
    are dropped from the end of the draw.
    """
    n = rng.poisson(cfg.density * cfg.length / 100.0)
    is_truck = rng.random(n) < cfg.truck_ratio
    dims = [VehicleDims(*(cfg.truck_dims if t else cfg.car_dims)) for t in is_truck]
    while dims and sum(d.length for d in dims) + (len(dims) - 1) * cfg.min_gap > cfg.length:
        dims.pop()
        is_truck = is_truck[:-1]
    if not dims:
        return []
    occupied = sum(d.length for d in dims) + (len(dims) - 1) * cfg.min_gap
    offsets = np.sort(rng.random(len(dims))) * (cfg.length - occupied)
    y = cfg.lane_y[lane - 1]
    start = -cfg.length / 2
    out = []
    for d, t, off in zip(dims, is_truck, offsets):
        x0 = start + off
        out.append(Vehicle(Kind.TRUCK if t else Kind.CAR, lane,
                           Vec3(x0 + d.length / 2, y, d.height / 2), d))
        start += d.length + cfg.min_gap
    return out


def generate_scene(cfg, seed):
    """Random scene for ``(cfg, seed)``; the receiver is a uniformly chosen car."""
    cfg.validate()
    rng = np.random.default_rng(seed)
    while True:
        vehicles = _drop_lane(rng, cfg, 1) + _drop_lane(rng, cfg, 2)
        cars = [i for i, v in enumerate(vehicles) if v.kind is Kind.CAR]
        if cars:
            break
    rx = cars[int(rng.integers(len(cars)))]
    receiver = vehicles.pop(rx)
    return Scene(Vec3.of(cfg.rsu), receiver, tuple(vehicles), tuple(cfg.wall_y), int(seed),
                 tuple(cfg.lane_y))


def receiver_antenna(scene):
    """Antenna point at the centre of the receiver car's roof."""
    c = scene.receiver.center
    return Vec3(c.x, c.y, scene.receiver.dims.height)
