"""
Deterministic seed derivation.

Every random stream in forge is derived from ``(global_seed, namespace, index)``
so that a record's content depends only on its own position in the input and
never on scheduling or worker count. The derived 64-bit seed is the first eight
bytes (big-endian) of ``sha1(f"{global_seed}:{namespace}:{index}")``.
"""
import hashlib
from dataclasses import dataclass
from typing import Union

import numpy as np
import torch

__all__ = ("SeedScheme",)

Index = Union[int, str]


@dataclass(frozen=True)
class SeedScheme:
    global_seed: int

    def derive(self, namespace: str, index: Index = 0) -> int:
        payload = f"{self.global_seed}:{namespace}:{index}".encode("utf-8")
        return int.from_bytes(hashlib.sha1(payload).digest()[:8], "big")

    def rng(self, namespace: str, index: Index = 0) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(self.derive(namespace, index)))

    def torch_generator(self, namespace: str, index: Index = 0) -> torch.Generator:
        generator = torch.Generator()
        generator.manual_seed(self.derive(namespace, index))
        return generator

    def child(self, namespace: str, index: Index = 0) -> "SeedScheme":
        return SeedScheme(self.derive(namespace, index))
