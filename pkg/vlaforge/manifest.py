import hashlib
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Union

from django.conf import settings

from vlaforge.utils import as_dict

__all__ = ("Manifest", "OutputEntry", "config_hash", "file_sha256", "manifest_path")


def file_sha256(path: Union[str, Path]) -> str:
    digest = hashlib.sha256()
    with Path(path).open("rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def count_lines(path: Union[str, Path]) -> int:
    with Path(path).open("rb") as handle:
        return sum(1 for _ in handle)


def config_hash(config: dict) -> str:
    canonical = json.dumps(as_dict(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def manifest_path(output: Union[str, Path]) -> Path:
    output = Path(output)
    if output.is_dir():
        return output / "manifest.json"
    return output.with_name(output.name + ".manifest.json")


@dataclass
class OutputEntry:
    path: str
    count: int
    sha256: str
    schema: Optional[str] = None


@dataclass
class Manifest:
    tool_version: str
    command: List[str]
    global_seed: int
    outputs: List[OutputEntry] = field(default_factory=list)
    counters: Dict[str, int] = field(default_factory=dict)
    config_hash: Optional[str] = None
    elapsed_seconds: Optional[float] = None

    @classmethod
    def start(cls, global_seed: int, command: Optional[List[str]] = None) -> "Manifest":
        return cls(
            tool_version=settings.FORGE_VERSION,
            command=list(command if command is not None else sys.argv),
            global_seed=global_seed,
        )

    def add_output(self, path: Union[str, Path], schema: Optional[str] = None):
        path = Path(path)
        lines = count_lines(path) if schema else 1
        self.outputs.append(
            OutputEntry(
                path=path.name, schema=schema, count=lines, sha256=file_sha256(path)
            )
        )

    def write(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(
            json.dumps(as_dict(self), indent=2, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )
        return path

    @classmethod
    def read(cls, path: Union[str, Path]) -> "Manifest":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        data["outputs"] = [OutputEntry(**entry) for entry in data.get("outputs", [])]
        return cls(**data)

    def verify(self, directory: Union[str, Path]) -> List[str]:
        """Names of outputs whose hash or line count no longer matches."""
        directory = Path(directory)
        stale = []
        for entry in self.outputs:
            target = directory / entry.path
            if not target.exists() or file_sha256(target) != entry.sha256:
                stale.append(entry.path)
            elif entry.schema and count_lines(target) != entry.count:
                stale.append(entry.path)
        return stale
