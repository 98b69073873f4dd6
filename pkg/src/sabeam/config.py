"""Run configuration: every module config plus run-level settings.

A config file is plain ``key = value`` text grouped in sections::

    [run]
    n_samples = 5000
    seed = 1

    [scene]
    density = 8

    [quantization]
    granularity = 0.1, 1, 5, 10

Unknown sections or keys are errors. Tuple fields take comma-separated
values and ``none`` stands for ``None``. Command-line flags override the file.
"""
import configparser
import dataclasses
from dataclasses import dataclass, field, fields, replace

from .channel import ArrayConfig, ChannelConfig
from .experiments import AllBeamConfig, QuantGrid
from .learn import ClassifierSpec, GradientBoostingSpec, OlsSpec, RandomForestSpec
from .learn.models import spec_to_dict
from .pipeline import GenerationConfig
from .raytracer import RaytraceConfig
from .scene import SceneConfig


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunSettings:
    n_samples: int = 5000
    train_frac: float = 0.8
    seed: int = 1
    workers: int = 1
    awareness_mode: str = "group"


@dataclass(frozen=True)
class EncoderSettings:
    max_per_group: int = 2
    virtual_x: float = 1e4


@dataclass(frozen=True)
class RunConfig:
    run: RunSettings = field(default_factory=RunSettings)
    scene: SceneConfig = field(default_factory=SceneConfig)
    raytrace: RaytraceConfig = field(default_factory=RaytraceConfig)
    array: ArrayConfig = field(default_factory=ArrayConfig)
    channel: ChannelConfig = field(default_factory=ChannelConfig)
    encoder: EncoderSettings = field(default_factory=EncoderSettings)
    random_forest: RandomForestSpec = field(default_factory=RandomForestSpec)
    gradient_boosting: GradientBoostingSpec = field(default_factory=GradientBoostingSpec)
    classifier: ClassifierSpec = field(default_factory=ClassifierSpec)
    quantization: QuantGrid = field(default_factory=QuantGrid)
    allbeams: AllBeamConfig = field(default_factory=AllBeamConfig)

    @property
    def generation(self):
        return GenerationConfig(self.scene, self.raytrace, self.array, self.channel,
                                self.encoder.max_per_group, self.encoder.virtual_x)

    def models(self):
        """Table-style regressors, all seeded with the run seed."""
        seed = self.run.seed
        return {"ols": OlsSpec(),
                "random_forest": replace(self.random_forest, seed=seed),
                "gradient_boosting": replace(self.gradient_boosting, seed=seed)}

    def classifier_spec(self):
        return replace(self.classifier, seed=self.run.seed)

    def to_dict(self):
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if hasattr(value, "kind"):
                out[f.name] = spec_to_dict(value)
            else:
                out[f.name] = dataclasses.asdict(value)
        return out


# fields the file may not set: seeds follow [run] seed, targets follow the command
_LOCKED = {"seed", "target", "kind", "classes"}


def _parse_scalar(text, like, name):
    text = text.strip()
    if text.lower() == "none":
        return None
    try:
        if isinstance(like, bool):
            if text.lower() in ("true", "yes", "1", "on"):
                return True
            if text.lower() in ("false", "no", "0", "off"):
                return False
            raise ValueError(text)
        if isinstance(like, int):
            return int(text)
        if isinstance(like, str):
            return text
        return float(text)
    except ValueError:
        raise ConfigError(f"{name}: cannot parse {text!r}") from None


def _parse_value(text, current, name):
    if isinstance(current, tuple):
        like = current[0] if current else 0.0
        items = [t for t in text.split(",") if t.strip()]
        if not items:
            raise ConfigError(f"{name}: empty list")
        return tuple(_parse_scalar(t, like, name) for t in items)
    if current is None:
        # optional numeric fields (e.g. max_depth)
        return _parse_scalar(text, 0, name)
    return _parse_scalar(text, current, name)


def _update(section_obj, items, section):
    names = {f.name for f in fields(section_obj) if f.init}
    changes = {}
    for key, text in items:
        if key not in names or (key in _LOCKED and section != "run"):
            raise ConfigError(f"[{section}] unknown or fixed key {key!r}")
        changes[key] = _parse_value(text, getattr(section_obj, key), f"[{section}] {key}")
    try:
        return replace(section_obj, **changes)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"[{section}] {exc}") from None


def parse_config_text(text, base=None):
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc).splitlines()[0]) from None
    cfg = base or RunConfig()
    sections = {f.name for f in fields(cfg)}
    changes = {}
    for section in parser.sections():
        if section not in sections:
            raise ConfigError(f"unknown section [{section}]")
        changes[section] = _update(getattr(cfg, section), parser.items(section), section)
    cfg = replace(cfg, **changes)
    validate(cfg)
    return cfg


def load_config(path=None):
    if path is None:
        cfg = RunConfig()
        validate(cfg)
        return cfg
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config_text(text)


def with_overrides(cfg, seed=None, workers=None, n_samples=None):
    """Apply command-line flags; flags win over the file."""
    run = cfg.run
    if seed is not None:
        run = replace(run, seed=seed)
    if workers is not None:
        run = replace(run, workers=workers)
    if n_samples is not None:
        run = replace(run, n_samples=n_samples)
    cfg = replace(cfg, run=run)
    validate(cfg)
    return cfg


def validate(cfg):
    try:
        cfg.scene.validate()
    except ValueError as exc:
        raise ConfigError(f"[scene] {exc}") from None
    run = cfg.run
    if run.n_samples < 1:
        raise ConfigError("[run] n_samples must be >= 1")
    if not 0.0 < run.train_frac < 1.0:
        raise ConfigError("[run] train_frac must lie strictly between 0 and 1")
    if run.workers < 1:
        raise ConfigError("[run] workers must be >= 1")
    if run.awareness_mode not in ("group", "vehicle"):
        raise ConfigError("[run] awareness_mode must be 'group' or 'vehicle'")
    if cfg.encoder.max_per_group < 1:
        raise ConfigError("[encoder] max_per_group must be >= 1")
    if cfg.raytrace.max_paths < 1 or cfg.raytrace.carrier_freq <= 0:
        raise ConfigError("[raytrace] max_paths and carrier_freq must be positive")
    q = cfg.quantization
    if any(pu <= pl for pu in q.p_upper for pl in q.p_lower):
        raise ConfigError("[quantization] every p_upper must exceed every p_lower")
    if any(r is None or r <= 0 for r in q.granularity):
        raise ConfigError("[quantization] granularities must be positive")
    a = cfg.allbeams
    if a.p_upper <= a.p_lower or any(r is not None and r <= 0 for r in a.granularities):
        raise ConfigError("[allbeams] need p_upper > p_lower and positive granularities")
