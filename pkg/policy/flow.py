"""
Flow matching on the straight path ``A_tau = tau * A + (1 - tau) * eps``.

The regression target is the path velocity ``u = A - eps`` and sampling
integrates ``A += delta * v`` from noise at tau = 0 to tau = 1. With
``negated_field=True`` the target is ``eps - A`` and the integration step is
negated, which recovers the same samples.
"""
from typing import Callable, Dict, Optional, Tuple

import torch
from torch import Tensor

from policy.exceptions import NonFiniteActivation, ShapeMismatch
from policy.network import DTYPE, VectorFieldNet
from sim.observations import Observation

__all__ = (
    "Field",
    "backward",
    "corrupt",
    "fm_loss",
    "forward",
    "integrate",
    "net_field",
    "observation_batch",
    "target_field",
)

# (A_tau, tau, obs) -> v
Field = Callable[[Tensor, float, object], Tensor]

SOLVERS = ("euler", "heun")


def _same_shape(a: Tensor, b: Tensor):
    if a.shape != b.shape:
        raise ShapeMismatch(f"Shapes {tuple(a.shape)} and {tuple(b.shape)} differ")


def _finite(t: Tensor, what: str) -> Tensor:
    if not torch.isfinite(t).all():
        raise NonFiniteActivation(f"Non-finite values in {what}")
    return t


def corrupt(a: Tensor, eps: Tensor, tau) -> Tensor:
    """``tau`` is a scalar or broadcasts against ``a`` (e.g. ``(B, 1, 1)``)."""
    _same_shape(a, eps)
    tau = torch.as_tensor(tau, dtype=a.dtype)
    if ((tau < 0) | (tau > 1)).any():
        raise ValueError("tau must lie in [0, 1]")
    return tau * a + (1 - tau) * eps


def target_field(a: Tensor, eps: Tensor, negated_field: bool = False) -> Tensor:
    _same_shape(a, eps)
    return eps - a if negated_field else a - eps


def fm_loss(v_pred: Tensor, u: Tensor) -> Tensor:
    """Mean squared error over every entry."""
    _same_shape(v_pred, u)
    return torch.mean((v_pred - u) ** 2)


def forward(net: VectorFieldNet, a_tau: Tensor, tau: Tensor, context: Tensor, state: Tensor) -> Tensor:
    cfg = net.cfg
    expected = (a_tau.shape[0], cfg.horizon, cfg.action_dim)
    if tuple(a_tau.shape) != expected:
        raise ShapeMismatch(f"Action chunk shape {tuple(a_tau.shape)}, expected {expected}")
    if context.shape[-1] != cfg.context_dim or state.shape[-1] != cfg.state_dim:
        raise ShapeMismatch("Observation dims do not match the network config")
    return _finite(net(a_tau, tau, context, state), "vector field output")


def backward(net: VectorFieldNet, output: Tensor, upstream: Tensor) -> Dict[str, Tensor]:
    """Vector-Jacobian product of ``output`` for every parameter, zeros where unused."""
    _same_shape(output, upstream)
    names, parameters = zip(*[(n, p) for n, p in net.named_parameters() if p.requires_grad])
    grads = torch.autograd.grad(output, parameters, grad_outputs=upstream, allow_unused=True)
    return {
        name: grad if grad is not None else torch.zeros_like(parameter)
        for name, parameter, grad in zip(names, parameters, grads)
    }


def net_field(net: VectorFieldNet) -> Field:
    """Adapter from a network to the ``(A_tau, tau, obs)`` field signature."""

    def field(a_tau: Tensor, tau: float, obs: Tuple[Tensor, Tensor]) -> Tensor:
        context, state = obs
        tau_batch = torch.full((a_tau.shape[0],), tau, dtype=a_tau.dtype)
        with torch.no_grad():
            return forward(net, a_tau, tau_batch, context, state)

    return field


def observation_batch(observation: Observation) -> Tuple[Tensor, Tensor]:
    return (
        torch.as_tensor(observation.context, dtype=DTYPE)[None, :],
        torch.as_tensor(observation.state, dtype=DTYPE)[None, :],
    )


def integrate(
    field: Field,
    obs,
    generator: Optional[torch.Generator],
    shape: Tuple[int, ...],
    steps: int = 10,
    solver: str = "euler",
    negated_field: bool = False,
    start: Optional[Tensor] = None,
) -> Tensor:
    """
    Integrate from ``start`` (default: standard normal noise) over tau in
    ``[0, 1]`` with ``steps`` equal steps. Heun's method evaluates the field
    twice per step.
    """
    if solver not in SOLVERS:
        raise ValueError(f"Unknown solver {solver!r}, expected one of {SOLVERS}")
    a = start if start is not None else torch.randn(shape, generator=generator, dtype=DTYPE)
    delta = 1.0 / steps
    sign = -1.0 if negated_field else 1.0
    for k in range(steps):
        tau = k * delta
        v = field(a, tau, obs)
        if solver == "heun":
            predicted = a + sign * delta * v
            v = 0.5 * (v + field(predicted, tau + delta, obs))
        a = a + sign * delta * v
    return _finite(a, "integrated action chunk")
