from dataclasses import asdict, is_dataclass
from enum import Enum
from json import dumps, loads
from pathlib import Path
from typing import Any, Iterable, Iterator, Union

import numpy as np
from django.core.serializers.json import DjangoJSONEncoder

__all__ = (
    "ChoicesEnum",
    "DataClassJSONEncoder",
    "as_dict",
    "dumps_line",
    "read_jsonl",
    "write_jsonl",
)


class ChoicesEnum(Enum):
    """
    Custom Enum class, heavily inspired by choicesenum package
    https://pypi.org/project/choicesenum/
    """

    def __new__(cls, value, display=None):
        obj = object.__new__(cls)
        obj._value_ = value
        obj._display_ = display
        return obj

    @classmethod
    def choices(cls):
        return [(x.value, x.display) for x in cls]

    @classmethod
    def values(cls):
        return [x.value for x in cls]

    @property
    def display(self):
        return (
            self._display_
            if self._display_ is not None
            else self._name_.replace("_", " ").capitalize()
        )


class DictWithoutNone(dict):
    def __init__(self, seq: Iterable = None, **kwargs):
        if seq is not None:
            for k, v in seq:
                if v is not None:
                    self[k] = v
        else:
            super(DictWithoutNone, self).__init__(seq, **kwargs)


class DataClassJSONEncoder(DjangoJSONEncoder):
    def default(self, o: Any) -> Any:
        if is_dataclass(o):
            return asdict(o, dict_factory=DictWithoutNone)

        if isinstance(o, Enum):
            return o.value

        if isinstance(o, np.ndarray):
            return o.tolist()

        if isinstance(o, np.integer):
            return int(o)

        if isinstance(o, np.floating):
            return float(o)

        if isinstance(o, np.bool_):
            return bool(o)

        return super(DataClassJSONEncoder, self).default(o)


def as_dict(o: Any):
    return loads(dumps(o, cls=DataClassJSONEncoder))


def dumps_line(o: Any) -> str:
    """One JSONL line: UTF-8 text, compact separators, field order preserved."""
    return dumps(o, cls=DataClassJSONEncoder, ensure_ascii=False, separators=(",", ":"))


def write_jsonl(path: Union[str, Path], records: Iterable[Any]) -> int:
    count = 0
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as handle:
        for record in records:
            handle.write(dumps_line(record))
            handle.write("\n")
            count += 1
    return count


def read_jsonl(path: Union[str, Path]) -> Iterator[dict]:
    with Path(path).open("r", encoding="utf-8") as handle:
        for line in handle:
            if line.strip():
                yield loads(line)
