import logging
import warnings
from dataclasses import dataclass

import numpy as np

from policy.exceptions import DegenerateDimension, EmptyDataset

__all__ = ("ActionScaler",)

logger = logging.getLogger(__name__)


@dataclass
class ActionScaler:
    """
    Per-dimension affine map of the [1st, 99th] percentile range onto [-1, 1].
    ``normalize`` clips outside that range and counts the clipped entries.
    """

    center: np.ndarray
    scale: np.ndarray
    clipped: int = 0

    @classmethod
    def fit(cls, actions: np.ndarray, percentiles=(1.0, 99.0)) -> "ActionScaler":
        actions = np.asarray(actions, dtype=np.float64)
        if actions.size == 0:
            raise EmptyDataset("Cannot fit a scaler on no actions")
        actions = actions.reshape(-1, actions.shape[-1])
        low, high = np.percentile(actions, percentiles, axis=0)
        center = (low + high) / 2
        half_range = (high - low) / 2
        degenerate = half_range == 0
        for dim in np.flatnonzero(degenerate):
            message = f"Action dimension {dim} is constant ({low[dim]}); kept with unit scale"
            logger.warning(message)
            warnings.warn(DegenerateDimension(message))
        scale = np.where(degenerate, 1.0, 1.0 / np.where(degenerate, 1.0, half_range))
        return cls(center=center, scale=scale)

    def normalize(self, actions: np.ndarray) -> np.ndarray:
        scaled = (np.asarray(actions, dtype=np.float64) - self.center) * self.scale
        outside = int(np.count_nonzero(np.abs(scaled) > 1.0))
        if outside:
            self.clipped += outside
            logger.debug(f"Clipped {outside} normalized action entries")
        return np.clip(scaled, -1.0, 1.0)

    def denormalize(self, chunk: np.ndarray) -> np.ndarray:
        return np.asarray(chunk, dtype=np.float64) / self.scale + self.center

    def to_json(self) -> dict:
        return {"center": self.center.tolist(), "scale": self.scale.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> "ActionScaler":
        return cls(np.asarray(data["center"], dtype=np.float64), np.asarray(data["scale"], dtype=np.float64))
