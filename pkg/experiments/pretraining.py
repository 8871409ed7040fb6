import logging
from dataclasses import dataclass
from typing import List

import numpy as np
import torch
from torch import nn

from experiments.corpora import EMBED_DIM, Pair
from policy.exceptions import EmptyDataset
from policy.network import DTYPE, ContextEncoder

__all__ = ("PretrainConfig", "pretrain_context_encoder")

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PretrainConfig:
    steps: int = 500
    lr: float = 1e-3
    batch_size: int = 64


def pretrain_context_encoder(
    encoder: ContextEncoder,
    corpus: List[Pair],
    cfg: PretrainConfig,
    generator: torch.Generator,
) -> List[float]:
    """
    Regress answer embeddings from observation contexts through the encoder
    and a linear readout, updating ``encoder`` in place. The readout is dropped.
    """
    if not corpus:
        raise EmptyDataset("Pretraining corpus is empty")
    contexts = torch.as_tensor(np.stack([c for c, _ in corpus]), dtype=DTYPE)
    targets = torch.as_tensor(np.stack([t for _, t in corpus]), dtype=DTYPE)
    readout = nn.Linear(encoder.tokens * encoder.width, EMBED_DIM).to(DTYPE)
    with torch.no_grad():
        readout.weight.copy_(
            torch.randn(readout.weight.shape, generator=generator, dtype=DTYPE)
            / np.sqrt(readout.weight.shape[1])
        )
        readout.bias.zero_()
    for parameter in encoder.parameters():
        parameter.requires_grad_(True)
    optimizer = torch.optim.AdamW(
        list(encoder.parameters()) + list(readout.parameters()), lr=cfg.lr, weight_decay=0.0
    )
    losses = []
    for _step in range(cfg.steps):
        index = torch.randint(len(corpus), (cfg.batch_size,), generator=generator)
        features = encoder(contexts[index]).reshape(len(index), -1)
        loss = torch.mean((readout(features) - targets[index]) ** 2)
        optimizer.zero_grad()
        loss.backward()
        optimizer.step()
        losses.append(loss.item())
    if losses:
        logger.info(f"Pretrained context encoder: loss {losses[0]:.4f} -> {losses[-1]:.4f}")
    return losses

