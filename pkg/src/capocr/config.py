"""Pipeline configuration: one flat TOML-style file, sections per module.

Parsing is strict: unknown sections or keys, duplicate keys, and type
mismatches are all rejected. load/save round-trip to the identical
effective configuration. (A built-in subset parser is used because the
stdlib gained tomllib only in 3.11 and a symmetric writer is needed anyway.)
"""

import math
from dataclasses import dataclass, field, fields


class ConfigError(ValueError):
    pass


@dataclass
class MfiConfig:
    window_length: int = 5
    edge_density_threshold: float = 1.5
    min_band_thickness: int = 4


@dataclass
class LocalizerConfig:
    score_threshold: float = 0.5
    min_zone_width: int = 8
    min_zone_height: int = 8
    epochs: int = 500
    learning_rate: float = 0.1
    seed: int = 0


@dataclass
class BinarizerConfig:
    fuzzifier: float = 2.0
    epsilon: float = 1e-4
    max_iter: int = 100
    seed: int = 0


@dataclass
class GaborConfig:
    orientations_deg: list = field(default_factory=lambda: [0.0, 45.0, 90.0, 135.0])
    phase: float = 0.0
    gamma: float = 0.5
    sigma_per_lambda: float = 0.56
    lambda_per_stroke: float = 2.0


@dataclass
class TextlineConfig:
    target_height: int = 26
    baseline_band_halfwidth: int = 2
    gap_threshold: int = 0
    min_segment_width: int = 2
    min_segment_area: int = 3
    crop_pad_x: int = 2
    crop_pad_y: int = 10
    min_component_px: int = 4
    median_prefilter: bool = True


@dataclass
class RecognizerConfig:
    k: int = 10
    m: float = 2.0
    membership_mode: str = "crisp"
    k_init: int = 5
    max_edit_distance: int = 1


@dataclass
class EvaluateConfig:
    iou_threshold: float = 0.5


@dataclass
class PathsConfig:
    localizer_model: str = ""
    recognizer_model: str = ""
    lexicon: str = ""
    debug_dir: str = ""


@dataclass
class PipelineConfig:
    mfi: MfiConfig = field(default_factory=MfiConfig)
    localizer: LocalizerConfig = field(default_factory=LocalizerConfig)
    binarizer: BinarizerConfig = field(default_factory=BinarizerConfig)
    gabor: GaborConfig = field(default_factory=GaborConfig)
    textline: TextlineConfig = field(default_factory=TextlineConfig)
    recognizer: RecognizerConfig = field(default_factory=RecognizerConfig)
    evaluate: EvaluateConfig = field(default_factory=EvaluateConfig)
    paths: PathsConfig = field(default_factory=PathsConfig)

    def gabor_orientations(self):
        return [math.radians(d) for d in self.gabor.orientations_deg]


def default_config():
    return PipelineConfig()


def _parse_scalar(token, where):
    token = token.strip()
    if token.startswith('"') and token.endswith('"') and len(token) >= 2:
        return token[1:-1]
    if token == "true":
        return True
    if token == "false":
        return False
    try:
        return int(token)
    except ValueError:
        pass
    try:
        return float(token)
    except ValueError:
        raise ConfigError(f"{where}: cannot parse value {token!r}") from None


def _parse_value(token, where):
    token = token.strip()
    if token.startswith("[") and token.endswith("]"):
        inner = token[1:-1].strip()
        if not inner:
            return []
        return [_parse_scalar(part, where) for part in inner.split(",")]
    return _parse_scalar(token, where)


def _coerce(value, default, where):
    if isinstance(default, bool):
        if not isinstance(value, bool):
            raise ConfigError(f"{where}: expected a boolean")
        return value
    if isinstance(default, int) and not isinstance(default, bool):
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{where}: expected an integer")
        return value
    if isinstance(default, float):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{where}: expected a number")
        return float(value)
    if isinstance(default, str):
        if not isinstance(value, str):
            raise ConfigError(f"{where}: expected a string")
        return value
    if isinstance(default, list):
        if not isinstance(value, list):
            raise ConfigError(f"{where}: expected an array")
        return [float(v) if isinstance(v, (int, float)) and not isinstance(v, bool) else v
                for v in value]
    raise ConfigError(f"{where}: unsupported config type")


def load_config(path):
    """Parse a config file and materialize all defaults."""
    cfg = default_config()
    sections = {f.name: getattr(cfg, f.name) for f in fields(cfg)}
    current = None
    seen = set()
    with open(path, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            where = f"{path}:{lineno}"
            if line.startswith("["):
                if not line.endswith("]"):
                    raise ConfigError(f"{where}: malformed section header")
                name = line[1:-1].strip()
                if name not in sections:
                    raise ConfigError(f"{where}: unknown section [{name}]")
                if ("section", name) in seen:
                    raise ConfigError(f"{where}: duplicate section [{name}]")
                seen.add(("section", name))
                current = name
                continue
            if "=" not in line:
                raise ConfigError(f"{where}: expected key = value")
            if current is None:
                raise ConfigError(f"{where}: key outside any section")
            key, _, rest = line.partition("=")
            key = key.strip()
            section_obj = sections[current]
            if key not in {f.name for f in fields(section_obj)}:
                raise ConfigError(f"{where}: unknown key {key!r} in [{current}]")
            if (current, key) in seen:
                raise ConfigError(f"{where}: duplicate key {key!r} in [{current}]")
            seen.add((current, key))
            value = _parse_value(rest.split("#", 1)[0], where)
            default = getattr(section_obj, key)
            setattr(section_obj, key, _coerce(value, default, where))
    return cfg


def _format_value(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, float)):
        return repr(value)
    if isinstance(value, str):
        return f'"{value}"'
    if isinstance(value, list):
        return "[" + ", ".join(_format_value(v) for v in value) + "]"
    raise ConfigError(f"cannot serialize {value!r}")


def save_config(cfg, path):
    lines = []
    for section_field in fields(cfg):
        section = getattr(cfg, section_field.name)
        lines.append(f"[{section_field.name}]")
        for f in fields(section):
            lines.append(f"{f.name} = {_format_value(getattr(section, f.name))}")
        lines.append("")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines))
