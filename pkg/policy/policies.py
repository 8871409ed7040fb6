import numpy as np
import torch

from policy.flow import integrate, net_field, observation_batch
from policy.network import VectorFieldNet
from policy.normalization import ActionScaler

__all__ = ("FlowPolicy",)


class FlowPolicy:
    """Samples a normalized chunk from noise, then maps it back to simulator units."""

    def __init__(
        self,
        net: VectorFieldNet,
        scaler: ActionScaler,
        steps: int = 10,
        solver: str = "euler",
        negated_field: bool = False,
    ):
        self.net = net
        self.scaler = scaler
        self.horizon = net.cfg.horizon
        self.steps = steps
        self.solver = solver
        self.negated_field = negated_field
        self.field = net_field(net)

    def predict_chunk(self, observation, state, task, rng: np.random.Generator) -> np.ndarray:
        generator = torch.Generator().manual_seed(int(rng.integers(2**63)))
        chunk = integrate(
            self.field,
            observation_batch(observation),
            generator,
            (1, self.horizon, self.net.cfg.action_dim),
            steps=self.steps,
            solver=self.solver,
            negated_field=self.negated_field,
        )
        return self.scaler.denormalize(chunk[0].numpy())
