"""
Action expert: joint non-causal attention over
``[context tokens..., state token, action tokens...]``.

Context tokens carry no positional embedding, so the output is invariant to
their order. Action tokens get a learned position each. The output head is
zero-initialized, so a fresh network predicts a zero field.
"""
import math
from dataclasses import asdict, dataclass
from typing import Optional

import torch
from torch import Tensor, nn

from sim.observations import ACTION_DIM, CONTEXT_DIM, STATE_DIM

__all__ = ("ContextEncoder", "NetConfig", "VectorFieldNet", "sinusoidal_embedding")

DTYPE = torch.float64


@dataclass(frozen=True)
class NetConfig:
    context_dim: int = CONTEXT_DIM
    state_dim: int = STATE_DIM
    action_dim: int = ACTION_DIM
    horizon: int = 4
    context_tokens: int = 4
    width: int = 32
    depth: int = 2
    heads: int = 2
    tau_dim: int = 16

    def __post_init__(self):
        if self.width % self.heads:
            raise ValueError(f"width {self.width} is not divisible by {self.heads} heads")
        if self.tau_dim % 2:
            raise ValueError("tau_dim must be even")

    def to_json(self) -> dict:
        return asdict(self)


def sinusoidal_embedding(tau: Tensor, dim: int) -> Tensor:
    """``(B,)`` flow times in [0, 1] to ``(B, dim)`` sin/cos features."""
    half = dim // 2
    frequencies = torch.exp(torch.linspace(0.0, math.log(1000.0), half, dtype=tau.dtype))
    angles = tau[:, None] * frequencies[None, :]
    return torch.cat([torch.sin(angles), torch.cos(angles)], dim=-1)


class ContextEncoder(nn.Module):
    """Observation context vector to a set of tokens, the stand-in for VLM features."""

    def __init__(self, cfg: NetConfig):
        super().__init__()
        self.tokens = cfg.context_tokens
        self.width = cfg.width
        self.net = nn.Sequential(
            nn.Linear(cfg.context_dim, cfg.width),
            nn.SiLU(),
            nn.Linear(cfg.width, cfg.context_tokens * cfg.width),
        )

    def forward(self, context: Tensor) -> Tensor:
        return self.net(context).reshape(context.shape[0], self.tokens, self.width)


class Block(nn.Module):
    def __init__(self, width: int, heads: int):
        super().__init__()
        self.heads = heads
        self.norm1 = nn.LayerNorm(width)
        self.qkv = nn.Linear(width, 3 * width)
        self.proj = nn.Linear(width, width)
        self.norm2 = nn.LayerNorm(width)
        self.mlp = nn.Sequential(nn.Linear(width, 4 * width), nn.SiLU(), nn.Linear(4 * width, width))

    def attend(self, x: Tensor) -> Tensor:
        batch, length, width = x.shape
        head_dim = width // self.heads
        q, k, v = self.qkv(x).split(width, dim=-1)
        q, k, v = (t.reshape(batch, length, self.heads, head_dim).transpose(1, 2) for t in (q, k, v))
        weights = torch.softmax(q @ k.transpose(-2, -1) / math.sqrt(head_dim), dim=-1)
        out = (weights @ v).transpose(1, 2).reshape(batch, length, width)
        return self.proj(out)

    def forward(self, x: Tensor) -> Tensor:
        x = x + self.attend(self.norm1(x))
        return x + self.mlp(self.norm2(x))


class VectorFieldNet(nn.Module):
    def __init__(self, cfg: NetConfig, generator: Optional[torch.Generator] = None, zero_head: bool = True):
        super().__init__()
        self.cfg = cfg
        self.context_encoder = ContextEncoder(cfg)
        self.state_encoder = nn.Linear(cfg.state_dim, cfg.width)
        self.action_encoder = nn.Sequential(
            nn.Linear(cfg.action_dim + cfg.tau_dim, cfg.width),
            nn.SiLU(),
            nn.Linear(cfg.width, cfg.width),
        )
        self.action_positions = nn.Parameter(torch.zeros(cfg.horizon, cfg.width))
        self.blocks = nn.ModuleList(Block(cfg.width, cfg.heads) for _ in range(cfg.depth))
        self.norm = nn.LayerNorm(cfg.width)
        self.head = nn.Linear(cfg.width, cfg.action_dim)
        self.to(DTYPE)
        self.reset_parameters(generator or torch.Generator().manual_seed(0), zero_head)

    @torch.no_grad()
    def reset_parameters(self, generator: torch.Generator, zero_head: bool = True):
        """Seeded init in ``named_parameters`` order, independent of torch's global RNG."""
        for name, parameter in self.named_parameters():
            if name == "action_positions":
                parameter.copy_(0.02 * torch.randn(parameter.shape, generator=generator, dtype=DTYPE))
            elif name.endswith("bias"):
                parameter.zero_()
            elif parameter.dim() == 1:
                parameter.fill_(1.0)
            else:
                std = 1.0 / math.sqrt(parameter.shape[1])
                parameter.copy_(std * torch.randn(parameter.shape, generator=generator, dtype=DTYPE))
        if zero_head:
            self.head.weight.zero_()
            self.head.bias.zero_()

    def forward_tokens(self, context_tokens: Tensor, a_tau: Tensor, tau: Tensor, state: Tensor) -> Tensor:
        batch, horizon, _ = a_tau.shape
        tau_features = sinusoidal_embedding(tau, self.cfg.tau_dim)[:, None, :].expand(batch, horizon, -1)
        actions = self.action_encoder(torch.cat([a_tau, tau_features], dim=-1)) + self.action_positions
        tokens = torch.cat([context_tokens, self.state_encoder(state)[:, None, :], actions], dim=1)
        for block in self.blocks:
            tokens = block(tokens)
        return self.head(self.norm(tokens[:, -horizon:]))

    def forward(self, a_tau: Tensor, tau: Tensor, context: Tensor, state: Tensor) -> Tensor:
        return self.forward_tokens(self.context_encoder(context), a_tau, tau, state)
