"""Project configuration: one (pdf, repo, links file) triple per session."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from scisoftx.errors import ScisoftxError
from scisoftx.linker import LinkerParams

DEFAULT_PORT = 8234
PORT_ENV_VAR = "SCISOFTX_PORT"


class ConfigError(ScisoftxError):
    """The project file is missing, malformed or points at absent paths."""


@dataclass
class ProjectConfig:
    pdf_path: Path
    repo_path: Path
    links_path: Path
    profiles: tuple[str, ...] = ("java", "python")
    linker: LinkerParams = field(default_factory=LinkerParams)
    static_dir: Path | None = None
    port: int | None = None

    def validate(self) -> None:
        if not self.pdf_path.is_file():
            raise ConfigError(f"pdf_path does not exist: {self.pdf_path}")
        if not self.repo_path.is_dir():
            raise ConfigError(f"repo_path is not a directory: {self.repo_path}")
        parent = self.links_path.parent
        if not parent.is_dir():
            raise ConfigError(f"links_path directory does not exist: {parent}")
        if self.static_dir is not None and not self.static_dir.is_dir():
            raise ConfigError(f"static_dir is not a directory: {self.static_dir}")

    def to_dict(self) -> dict:
        out = {
            "pdf_path": str(self.pdf_path),
            "repo_path": str(self.repo_path),
            "links_path": str(self.links_path),
            "profiles": list(self.profiles),
            "linker": self.linker.to_dict(),
        }
        if self.static_dir is not None:
            out["static_dir"] = str(self.static_dir)
        if self.port is not None:
            out["port"] = self.port
        return out


def load_config(path) -> ProjectConfig:
    """Read the canonical JSON project file and check its paths."""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from None
    try:
        base = path.parent
        config = ProjectConfig(
            pdf_path=(base / data["pdf_path"]).resolve(),
            repo_path=(base / data["repo_path"]).resolve(),
            links_path=(base / data["links_path"]).resolve(),
            profiles=tuple(data.get("profiles", ("java", "python"))),
            linker=LinkerParams.from_dict(data.get("linker", {})),
            static_dir=(base / data["static_dir"]).resolve() if data.get("static_dir") else None,
            port=int(data["port"]) if data.get("port") is not None else None,
        )
    except KeyError as exc:
        raise ConfigError(f"config file {path} is missing key {exc}") from None
    config.validate()
    return config


def resolve_port(cli_port: int | None, config: ProjectConfig | None) -> int:
    if cli_port is not None:
        return cli_port
    if config is not None and config.port is not None:
        return config.port
    env = os.environ.get(PORT_ENV_VAR)
    if env:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"{PORT_ENV_VAR} is not an integer: {env!r}") from None
    return DEFAULT_PORT
