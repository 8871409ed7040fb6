import logging
from dataclasses import asdict, dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import torch
from torch import Tensor

from policy.exceptions import EmptyDataset
from policy.flow import corrupt, fm_loss, forward, target_field
from policy.network import DTYPE, VectorFieldNet
from policy.normalization import ActionScaler
from sim.observations import Observation

__all__ = ("FlowDataset", "TrainConfig", "TrainResult", "build_dataset", "sample_tau", "train")

logger = logging.getLogger(__name__)

TAU_SCHEDULES = ("uniform", "beta")
NOISE_MODES = ("fresh", "fixed")


@dataclass(frozen=True)
class TrainConfig:
    lr: float = 5e-5
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    weight_decay: float = 0.0
    batch_size: int = 64
    steps: int = 2000
    tau_schedule: str = "uniform"
    noise: str = "fresh"
    negated_field: bool = False
    freeze_context_encoder: bool = True
    log_every: int = 100

    def __post_init__(self):
        if self.lr < 0 or self.eps <= 0 or self.batch_size < 1 or self.steps < 0:
            raise ValueError(f"Invalid training config {self}")
        if not (0 <= self.beta1 < 1 and 0 <= self.beta2 < 1):
            raise ValueError("Adam betas must lie in [0, 1)")
        if self.tau_schedule not in TAU_SCHEDULES:
            raise ValueError(f"tau_schedule must be one of {TAU_SCHEDULES}")
        if self.noise not in NOISE_MODES:
            raise ValueError(f"noise must be one of {NOISE_MODES}")

    def to_json(self) -> dict:
        return asdict(self)


@dataclass
class FlowDataset:
    contexts: Tensor
    states: Tensor
    chunks: Tensor

    def __len__(self):
        return self.chunks.shape[0]


@dataclass
class TrainResult:
    losses: List[float]
    steps: int


def build_dataset(windows: Sequence[Tuple[Observation, np.ndarray]], scaler: ActionScaler) -> FlowDataset:
    if not windows:
        raise EmptyDataset("No (observation, chunk) pairs to train on")
    return FlowDataset(
        contexts=torch.as_tensor(np.stack([obs.context for obs, _ in windows]), dtype=DTYPE),
        states=torch.as_tensor(np.stack([obs.state for obs, _ in windows]), dtype=DTYPE),
        chunks=torch.as_tensor(scaler.normalize(np.stack([c for _, c in windows])), dtype=DTYPE),
    )


def sample_tau(generator: torch.Generator, count: int, schedule: str = "uniform") -> Tensor:
    u = torch.rand(count, generator=generator, dtype=DTYPE)
    if schedule == "uniform":
        return u
    # Beta(1.5, 1) by inverse CDF, squeezed below 1
    return 0.999 * (1 - u ** (1 / 1.5))


def train(
    net: VectorFieldNet,
    dataset: FlowDataset,
    cfg: TrainConfig,
    generator: torch.Generator,
    callback: Optional[Callable[[int, VectorFieldNet], None]] = None,
) -> TrainResult:
    if len(dataset) == 0:
        raise EmptyDataset("No (observation, chunk) pairs to train on")
    for parameter in net.context_encoder.parameters():
        parameter.requires_grad_(not cfg.freeze_context_encoder)
    parameters = [p for p in net.parameters() if p.requires_grad]
    optimizer = torch.optim.AdamW(
        parameters,
        lr=cfg.lr,
        betas=(cfg.beta1, cfg.beta2),
        eps=cfg.eps,
        weight_decay=cfg.weight_decay,
    )
    fixed_noise = None
    if cfg.noise == "fixed":
        fixed_noise = torch.randn(dataset.chunks.shape, generator=generator, dtype=DTYPE)

    losses = []
    net.train()
    for step in range(1, cfg.steps + 1):
        index = torch.randint(len(dataset), (cfg.batch_size,), generator=generator)
        a = dataset.chunks[index]
        if fixed_noise is None:
            noise = torch.randn(a.shape, generator=generator, dtype=DTYPE)
        else:
            noise = fixed_noise[index]
        tau = sample_tau(generator, cfg.batch_size, cfg.tau_schedule)
        a_tau = corrupt(a, noise, tau[:, None, None])
        v = forward(net, a_tau, tau, dataset.contexts[index], dataset.states[index])
        loss = fm_loss(v, target_field(a, noise, cfg.negated_field))
        optimizer.zero_grad()
        loss.backward()
        optimizer.step()
        losses.append(loss.item())
        if cfg.log_every and step % cfg.log_every == 0:
            logger.info(f"step {step}: loss {losses[-1]:.6f}")
        if callback is not None:
            callback(step, net)
    net.eval()
    return TrainResult(losses, cfg.steps)
