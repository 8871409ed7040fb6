import itertools
import math

import pytest
import torch

from policy.exceptions import NonFiniteActivation, ShapeMismatch
from policy.flow import backward, corrupt, fm_loss, forward, integrate, net_field, target_field
from policy.network import NetConfig, VectorFieldNet

SMALL = NetConfig(width=8, heads=2, depth=1, context_tokens=3, tau_dim=4)


def inputs(cfg: NetConfig, batch: int = 2, seed: int = 0):
    g = torch.Generator().manual_seed(seed)
    return (
        torch.randn(batch, cfg.horizon, cfg.action_dim, generator=g, dtype=torch.float64),
        torch.rand(batch, generator=g, dtype=torch.float64),
        torch.randn(batch, cfg.context_dim, generator=g, dtype=torch.float64),
        torch.randn(batch, cfg.state_dim, generator=g, dtype=torch.float64),
    )


def test_corrupt_endpoints_are_exact():
    g = torch.Generator().manual_seed(1)
    a = torch.randn(4, 3, generator=g, dtype=torch.float64)
    eps = torch.randn(4, 3, generator=g, dtype=torch.float64)
    assert torch.equal(corrupt(a, eps, 1.0), a)
    assert torch.equal(corrupt(a, eps, 0.0), eps)
    half = corrupt(torch.tensor([[2.0]]), torch.tensor([[0.0]]), 0.5)
    assert torch.equal(half, torch.tensor([[1.0]]))


def test_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        corrupt(torch.zeros(2, 3), torch.zeros(3, 2), 0.5)
    with pytest.raises(ShapeMismatch):
        target_field(torch.zeros(2), torch.zeros(3))
    with pytest.raises(ShapeMismatch):
        fm_loss(torch.zeros(1, 2), torch.zeros(2, 1))
    net = VectorFieldNet(SMALL)
    a, tau, context, state = inputs(SMALL)
    with pytest.raises(ShapeMismatch):
        forward(net, a[:, :2], tau, context, state)


def test_target_field_conventions():
    a = torch.tensor([[1.0]])
    eps = torch.tensor([[0.0]])
    assert torch.equal(target_field(a, eps), torch.tensor([[1.0]]))
    assert torch.equal(target_field(a, eps, negated_field=True), torch.tensor([[-1.0]]))
    assert torch.count_nonzero(target_field(a, a)) == 0


def test_fm_loss_examples():
    u = torch.randn(4, 3, dtype=torch.float64, generator=torch.Generator().manual_seed(2))
    assert fm_loss(u, u).item() == 0.0
    assert fm_loss(u + 1, u).item() == pytest.approx(1.0, abs=1e-15)


def test_fm_loss_matches_hand_sum():
    g = torch.Generator().manual_seed(3)
    for _ in range(20):
        v = torch.randn(5, 4, 3, generator=g, dtype=torch.float64)
        u = torch.randn(5, 4, 3, generator=g, dtype=torch.float64)
        total = 0.0
        for x, y in zip(v.flatten().tolist(), u.flatten().tolist()):
            total += (x - y) ** 2
        assert abs(fm_loss(v, u).item() - total / v.numel()) <= 1e-12
        assert fm_loss(v, u).item() >= 0


@pytest.mark.parametrize("solver,calls", [("euler", 10), ("heun", 20)])
@pytest.mark.parametrize("negated_field", [False, True])
def test_integrate_covers_unit_interval_in_equal_steps(solver, calls, negated_field):
    seen = []
    c = torch.tensor([[[0.7, -1.3, 2.0]]], dtype=torch.float64)

    def constant(a, tau, obs):
        seen.append(tau)
        return c.expand_as(a)

    start = torch.zeros(1, 1, 3, dtype=torch.float64)
    end = integrate(
        constant, None, None, start.shape, steps=10, solver=solver, negated_field=negated_field, start=start
    )

    assert len(seen) == calls
    if solver == "euler":
        assert seen == [k * 0.1 for k in range(10)]
    else:
        assert seen[0::2] == [k * 0.1 for k in range(10)]
        assert seen[1::2] == [k * 0.1 + 0.1 for k in range(10)]
    expected = -c if negated_field else c
    assert torch.allclose(end, expected, rtol=0.0, atol=1e-12)


@pytest.mark.parametrize("solver", ["euler", "heun"])
@pytest.mark.parametrize("negated_field", [False, True])
def test_oracle_field_recovers_chunk(solver, negated_field):
    shape = (1, 4, 3)
    a = torch.randn(shape, generator=torch.Generator().manual_seed(9), dtype=torch.float64)
    eps0 = torch.randn(shape, generator=torch.Generator().manual_seed(5), dtype=torch.float64)
    oracle = target_field(a, eps0, negated_field)

    def field(a_tau, tau, obs):
        return oracle

    generator = torch.Generator().manual_seed(5)
    out = integrate(field, None, generator, shape, solver=solver, negated_field=negated_field)
    assert (out - a).abs().max().item() <= 1e-6


def test_zero_field_returns_start_noise():
    shape = (2, 4, 3)
    start = torch.randn(shape, generator=torch.Generator().manual_seed(4), dtype=torch.float64)
    out = integrate(
        lambda a, tau, obs: torch.zeros_like(a), None, torch.Generator().manual_seed(4), shape
    )
    assert torch.equal(out, start)


def test_fresh_network_predicts_zero_field():
    net = VectorFieldNet(SMALL)
    v = forward(net, *inputs(SMALL))
    assert torch.count_nonzero(v) == 0
    _, _, context, state = inputs(SMALL, batch=1)
    out = integrate(net_field(net), (context, state), torch.Generator().manual_seed(1), (1, 4, 3))
    start = torch.randn((1, 4, 3), generator=torch.Generator().manual_seed(1), dtype=torch.float64)
    assert torch.equal(out, start)


def test_non_finite_field_is_reported():
    with pytest.raises(NonFiniteActivation):
        integrate(lambda a, tau, obs: a * float("nan"), None, torch.Generator().manual_seed(0), (1, 2))


def test_context_token_order_does_not_matter():
    net = VectorFieldNet(SMALL, torch.Generator().manual_seed(7), zero_head=False)
    a, tau, context, state = inputs(SMALL)
    tokens = net.context_encoder(context)
    reference = net.forward_tokens(tokens, a, tau, state)
    for order in itertools.permutations(range(SMALL.context_tokens)):
        permuted = net.forward_tokens(tokens[:, list(order)], a, tau, state)
        torch.testing.assert_close(permuted, reference, rtol=0, atol=1e-12)


def test_action_token_order_matters():
    net = VectorFieldNet(SMALL, torch.Generator().manual_seed(7), zero_head=False)
    a, tau, context, state = inputs(SMALL)
    v = net(a, tau, context, state)
    swapped = net(a[:, [1, 0, 2, 3]], tau, context, state)
    assert not torch.allclose(v[:, [1, 0, 2, 3]], swapped)


def test_backward_populates_every_parameter():
    net = VectorFieldNet(SMALL, torch.Generator().manual_seed(8), zero_head=False)
    for parameter in net.parameters():
        parameter.requires_grad_(True)
    a, tau, context, state = inputs(SMALL)
    v = forward(net, a, tau, context, state)
    grads = backward(net, v, torch.ones_like(v))
    assert set(grads) == {name for name, _ in net.named_parameters()}
    assert all(torch.isfinite(g).all() for g in grads.values())
    assert sum(int(torch.count_nonzero(g) > 0) for g in grads.values()) >= len(grads) - 2


def test_gradients_match_central_differences():
    net = VectorFieldNet(SMALL, torch.Generator().manual_seed(11), zero_head=False)
    a, tau, context, state = inputs(SMALL, batch=3, seed=12)
    u = torch.randn(a.shape, generator=torch.Generator().manual_seed(13), dtype=torch.float64)

    def loss():
        return fm_loss(net(a, tau, context, state), u)

    named = dict(net.named_parameters())
    analytic = dict(zip(named, torch.autograd.grad(loss(), list(named.values()))))

    picker = torch.Generator().manual_seed(14)
    h = 1e-6
    checked = 0
    with torch.no_grad():
        for name, parameter in named.items():
            flat = parameter.view(-1)
            count = min(flat.numel(), 6)
            for index in torch.randperm(flat.numel(), generator=picker)[:count].tolist():
                original = flat[index].item()
                flat[index] = original + h
                plus = loss().item()
                flat[index] = original - h
                minus = loss().item()
                flat[index] = original
                numeric = (plus - minus) / (2 * h)
                exact = analytic[name].view(-1)[index].item()
                assert math.isclose(numeric, exact, rel_tol=1e-5, abs_tol=1e-8), (name, index)
                checked += 1
    assert checked >= 100
