"""Flat key=value service configuration."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Optional

from .terms import parse_datetime


class ConfigError(ValueError):
    pass


@dataclass
class ServiceConfig:
    data_paths: list[str]
    rules_path: Optional[str] = None
    reference_time: Optional[datetime] = None  # None: dataset load instant
    top_n: int = 10
    host: str = "127.0.0.1"
    port: int = 8000
    case_sensitive_contains: bool = False

    def __post_init__(self) -> None:
        if self.top_n < 1:
            raise ConfigError("top_n must be >= 1")
        if not self.data_paths:
            raise ConfigError("at least one data file is required")
        for path in list(self.data_paths) + (
                [self.rules_path] if self.rules_path else []):
            if not Path(path).exists():
                raise ConfigError(f"file not found: {path}")


_BOOL = {"true": True, "false": False, "1": True, "0": False,
         "yes": True, "no": False}


def parse_config(text: str, base_dir: Optional[str] = None) -> ServiceConfig:
    """`key = value` lines with `#` comments; relative paths resolve
    against base_dir."""
    values: dict[str, str] = {}
    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {line_no}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()

    def resolve(path: str) -> str:
        p = Path(path)
        if base_dir is not None and not p.is_absolute():
            p = Path(base_dir) / p
        return str(p)

    known = {"data", "rules", "reference_time", "top_n", "host", "port",
             "case_sensitive_contains"}
    unknown = set(values) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if "data" not in values:
        raise ConfigError("missing required key 'data'")

    data_paths = [resolve(p.strip()) for p in values["data"].split(",")
                  if p.strip()]
    reference_time = None
    if "reference_time" in values:
        reference_time = parse_datetime(values["reference_time"])
    case_sensitive = False
    if "case_sensitive_contains" in values:
        token = values["case_sensitive_contains"].lower()
        if token not in _BOOL:
            raise ConfigError(
                f"case_sensitive_contains must be true/false, got {token!r}")
        case_sensitive = _BOOL[token]
    try:
        top_n = int(values.get("top_n", "10"))
        port = int(values.get("port", "8000"))
    except ValueError as exc:
        raise ConfigError(f"invalid numeric value: {exc}") from exc
    return ServiceConfig(
        data_paths=data_paths,
        rules_path=resolve(values["rules"]) if "rules" in values else None,
        reference_time=reference_time,
        top_n=top_n,
        host=values.get("host", "127.0.0.1"),
        port=port,
        case_sensitive_contains=case_sensitive,
    )


def load_config(path: str) -> ServiceConfig:
    text = Path(path).read_text(encoding="utf-8")
    return parse_config(text, base_dir=str(Path(path).parent))
