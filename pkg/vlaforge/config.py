"""
Sectioned ``key=value`` configuration files.

Keys outside any section land in the ``default`` section. Values stay strings;
the command that consumes a section converts them.
"""
from configparser import ConfigParser
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Union

__all__ = ("read_config", "parse_list", "parse_bool")

Config = Dict[str, Dict[str, str]]


def read_config(path: Union[str, Path]) -> Config:
    text = Path(path).read_text(encoding="utf-8")
    parser = ConfigParser(default_section="__shared__", interpolation=None, strict=False)
    parser.optionxform = str
    parser.read_string("[default]\n" + text)
    return {section: dict(parser.items(section)) for section in parser.sections()}


def merge_overrides(config: Config, section: str, overrides: Dict[str, object]) -> Config:
    """CLI flags override file values; ``None`` means the flag was not given."""
    merged = {name: dict(values) for name, values in config.items()}
    target = merged.setdefault(section, {})
    for key, value in overrides.items():
        if value is not None:
            target[key] = str(value)
    return merged


def parse_list(value: Optional[str], cast=str) -> List:
    if value is None or not value.strip():
        return []
    return [cast(item.strip()) for item in value.split(",") if item.strip()]


def parse_bool(value: Union[str, bool]) -> bool:
    if isinstance(value, bool):
        return value
    return value.strip().lower() in ("1", "true", "yes", "on")


def parse_weights(value: str, names: Iterable[str]) -> Dict[str, float]:
    """``"box:0.4,point:0.4,text:0.2"`` -> ``{"box": 0.4, ...}``."""
    allowed = set(names)
    weights = {}
    for item in parse_list(value):
        key, _, weight = item.partition(":")
        key = key.strip()
        if key not in allowed:
            raise ValueError(f"Unknown weight key {key!r}, expected one of {sorted(allowed)}")
        weights[key] = float(weight)
    return weights
