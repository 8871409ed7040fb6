from functools import lru_cache
from pathlib import Path
from typing import Dict, Optional, Union

from django.conf import settings

from sim.exceptions import UnknownTask
from sim.models import TaskConfig, TaskKind
from vlaforge.config import parse_list, read_config

__all__ = ("get_task", "load_tasks")


def load_tasks(path: Optional[Union[str, Path]] = None) -> Dict[str, TaskConfig]:
    config = read_config(path or settings.SIM["tasks_file"])
    tasks = {}
    for name, values in config.items():
        if name == "default":
            continue
        tasks[name] = TaskConfig(
            name=name,
            kind=TaskKind(values["kind"]),
            instruction=values["instruction"],
            objects=int(values.get("objects", 0)),
            max_steps=int(values["max_steps"]),
            target_radius=float(values["target_radius"]),
            object_radius=float(values.get("object_radius", 0.04)),
            categories=tuple(parse_list(values.get("categories"))),
            target_name=values.get("target_name", "target"),
        )
    return tasks


@lru_cache(maxsize=None)
def _bundled_tasks() -> Dict[str, TaskConfig]:
    return load_tasks()


def get_task(name: str) -> TaskConfig:
    tasks = _bundled_tasks()
    if name not in tasks:
        raise UnknownTask(f"Unknown task {name!r}, expected one of {sorted(tasks)}")
    return tasks[name]
