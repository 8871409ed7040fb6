from typing import Callable, Iterable, List, Optional, Tuple

import numpy as np

from policy.exceptions import EmptyDataset
from policy.network import NetConfig, VectorFieldNet
from policy.normalization import ActionScaler
from policy.training import TrainConfig, TrainResult, build_dataset, train
from sim.demos import chunk_windows
from sim.models import EpisodeRecord
from sim.observations import Observation
from sim.tasks import get_task
from vlaforge.seeding import SeedScheme

__all__ = ("fit_flow_policy", "windows_from_records")

Window = Tuple[Observation, np.ndarray]


def windows_from_records(records: Iterable[EpisodeRecord], horizon: int) -> List[Window]:
    windows = []
    for record in records:
        windows.extend(chunk_windows(record, get_task(record.task), horizon))
    return windows


def fit_flow_policy(
    windows: List[Window],
    net_cfg: NetConfig,
    train_cfg: TrainConfig,
    scheme: SeedScheme,
    net: Optional[VectorFieldNet] = None,
    callback: Optional[Callable] = None,
) -> Tuple[VectorFieldNet, ActionScaler, TrainResult]:
    """Fit the action scaler on the demo chunks, then train ``net`` (fresh if omitted)."""
    if not windows:
        raise EmptyDataset("No demonstration windows to train on")
    scaler = ActionScaler.fit(np.stack([chunk for _, chunk in windows]))
    dataset = build_dataset(windows, scaler)
    if net is None:
        net = VectorFieldNet(net_cfg, scheme.torch_generator("policy-init"))
    result = train(net, dataset, train_cfg, scheme.torch_generator("policy-train"), callback)
    return net, scaler, result
