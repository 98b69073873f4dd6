"""End-to-end dataset generation: scene -> paths -> channel -> sweep -> sample."""
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .channel import ArrayConfig, ChannelConfig, beam_sweep, build_channel, make_codebook
from .dataset import Dataset, Sample, to_dbm
from .features import MAX_LEVEL, EncoderConfig, encode, feature_names
from .raytracer import RaytraceConfig, trace
from .scene import SceneConfig, generate_scene

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class GenerationConfig:
    scene: SceneConfig = field(default_factory=SceneConfig)
    raytrace: RaytraceConfig = field(default_factory=RaytraceConfig)
    array: ArrayConfig = field(default_factory=ArrayConfig)
    channel: ChannelConfig = field(default_factory=ChannelConfig)
    max_per_group: int = 2
    virtual_x: float = 1e4

    @property
    def encoder(self):
        return EncoderConfig(self.max_per_group, self.virtual_x, MAX_LEVEL)

    def to_dict(self):
        return asdict(self)


def sample_seed(seed, k):
    """Scene seed of sample ``k``; independent of worker count and order."""
    return int(np.random.SeedSequence([int(seed), int(k)]).generate_state(1, np.uint64)[0])


def simulate(scene, cfg, codebook=None):
    """Linear beam powers for a scene."""
    codebook = codebook if codebook is not None else make_codebook(cfg.array)
    paths = trace(scene, cfg.raytrace)
    taps = build_channel(paths, cfg.array, cfg.channel)
    return beam_sweep(taps, codebook), paths


def make_sample(k, seed, cfg, codebook=None):
    s_seed = sample_seed(seed, k)
    scene = generate_scene(cfg.scene, s_seed)
    label, _ = simulate(scene, cfg, codebook)
    y_dbm = to_dbm(label.y)
    return Sample(k, s_seed, encode(scene, cfg.encoder), y_dbm, int(np.argmax(y_dbm)) + 1)


def _make_chunk(args):
    ks, seed, cfg = args
    codebook = make_codebook(cfg.array)
    return [make_sample(k, seed, cfg, codebook) for k in ks]


def generate_dataset(cfg, n_samples, seed, workers=1, progress=None):
    """Generate ``n_samples`` samples; identical output for any ``workers``."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    cfg.scene.validate()
    chunk = 250
    jobs = [(range(a, min(a + chunk, n_samples)), seed, cfg) for a in range(0, n_samples, chunk)]
    samples = []
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_make_chunk, jobs):
                samples.extend(part)
                if progress:
                    progress(len(samples), n_samples)
    else:
        for job in jobs:
            samples.extend(_make_chunk(job))
            if progress:
                progress(len(samples), n_samples)
    snapshot = {"generation": cfg.to_dict(), "n_samples": n_samples, "seed": seed}
    return Dataset(samples, feature_names(cfg.encoder), snapshot)
