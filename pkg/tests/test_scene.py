import json
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sabeam.scene import (ConfigurationError, Kind, Scene, SceneConfig, Vec3, Vehicle,
                          VehicleDims, generate_scene, receiver_antenna)

CFG = SceneConfig()


def test_deterministic_for_seed():
    assert generate_scene(CFG, 7) == generate_scene(CFG, 7)
    assert generate_scene(CFG, 7) != generate_scene(CFG, 8)


def test_no_trucks_when_ratio_zero():
    cfg = replace(CFG, truck_ratio=0.0)
    for seed in range(20):
        scene = generate_scene(cfg, seed)
        assert all(v.kind is Kind.CAR for v in scene.vehicles)


def test_mean_count_tracks_density():
    cfg = replace(CFG, density=10.0, length=200.0)
    counts = {1: [], 2: []}
    for seed in range(1000):
        scene = generate_scene(cfg, seed)
        everyone = scene.vehicles + (scene.receiver,)
        for lane in (1, 2):
            counts[lane].append(sum(v.lane == lane for v in everyone))
    for lane in (1, 2):
        assert abs(np.mean(counts[lane]) - 20.0) <= 0.15 * 20.0


def test_truck_fraction_converges():
    # receiver is always a car, so count over non-receiver vehicles plus it
    n_truck = n_total = 0
    for seed in range(400):
        scene = generate_scene(CFG, seed)
        everyone = scene.vehicles + (scene.receiver,)
        n_truck += sum(v.kind is Kind.TRUCK for v in everyone)
        n_total += len(everyone)
    p = CFG.truck_ratio
    sigma = np.sqrt(p * (1 - p) / n_total)
    # the one forced car per scene biases the ratio slightly low
    bias = p * 400 / n_total
    assert abs(n_truck / n_total - p) <= 3 * sigma + bias


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_lanes_never_overlap(seed):
    scene = generate_scene(CFG, seed)
    everyone = scene.vehicles + (scene.receiver,)
    for lane in (1, 2):
        spans = sorted((v.lo[0], v.hi[0]) for v in everyone if v.lane == lane)
        for (a0, a1), (b0, b1) in zip(spans, spans[1:]):
            assert b0 - a1 >= CFG.min_gap - 1e-9
        for v in everyone:
            if v.lane == lane:
                assert v.center.y == CFG.lane_y[lane - 1]
                assert v.center.z == v.dims.height / 2
                assert CFG.wall_y[0] < v.lo[1] and v.hi[1] < CFG.wall_y[1]
    assert scene.receiver.kind is Kind.CAR


def test_lanes_outside_walls_rejected():
    with pytest.raises(ConfigurationError):
        generate_scene(replace(CFG, lane_y=(6.0, 25.0)), 1)
    with pytest.raises(ConfigurationError):
        generate_scene(replace(CFG, density=0.0), 1)


def _car_at(x, y):
    return Vehicle(Kind.CAR, 1, Vec3(x, y, 0.75), VehicleDims(5.0, 1.5, 1.9))


def test_receiver_antenna_on_roof():
    scene = Scene(Vec3(0, 1, 5), _car_at(0.0, 3.0), (), (0.0, 20.0))
    assert receiver_antenna(scene) == Vec3(0.0, 3.0, 1.5)
    moved = scene.translated(5.0, 0.0)
    assert receiver_antenna(moved).x == receiver_antenna(scene).x + 5.0
    for seed in range(10):
        sc = generate_scene(CFG, seed)
        assert receiver_antenna(sc).z == CFG.car_dims[1]


def test_json_round_trip():
    scene = generate_scene(CFG, 3)
    doc = json.loads(json.dumps(scene.to_dict()))
    assert set(doc) >= {"rsu", "receiver", "vehicles", "walls", "seed"}
    assert Scene.from_dict(doc) == scene
