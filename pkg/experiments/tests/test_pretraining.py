import numpy as np
import pytest
import torch

from experiments.corpora import EMBED_DIM, GEOMETRY_OFFSET, embed_answer, in_domain_pairs, out_domain_pairs
from experiments.pretraining import PretrainConfig, pretrain_context_encoder
from policy.exceptions import EmptyDataset
from policy.network import NetConfig, VectorFieldNet
from sim.observations import CONTEXT_DIM
from vlaforge.seeding import SeedScheme

SMALL = NetConfig(width=16, heads=2, depth=1, context_tokens=2, tau_dim=8)


def encoder(seed: int = 0):
    return VectorFieldNet(SMALL, torch.Generator().manual_seed(seed)).context_encoder


def weights(module):
    return [p.detach().clone() for p in module.parameters()]


def test_embed_answer_is_stable_and_number_aware():
    first = embed_answer("The plate is 0.42 m away.")
    assert first.shape == (EMBED_DIM,)
    assert np.array_equal(first, embed_answer("The plate is 0.42 m away."))
    assert first[0] > 0
    assert not np.array_equal(first, embed_answer("The plate is 0.84 m away."))
    assert np.all(embed_answer("") == 0)


def test_in_domain_pairs_use_policy_contexts():
    pairs = in_domain_pairs(SeedScheme(0), ["pick_place", "stack"], ["general", "spatial"], 10)
    assert len(pairs) == 10
    for context, target in pairs:
        assert context.shape == (CONTEXT_DIM,)
        assert target.shape == (EMBED_DIM,)
        # exactly one task flag is set
        assert context[:GEOMETRY_OFFSET].sum() == 1


def test_out_domain_pairs_carry_no_task_flag():
    pairs = out_domain_pairs(SeedScheme(0), ["grounding", "spatial"], 20)
    assert 0 < len(pairs) <= 20
    for context, _ in pairs:
        assert context.shape == (CONTEXT_DIM,)
        assert np.all(context[:GEOMETRY_OFFSET] == 0)


def test_empty_corpus_is_rejected():
    with pytest.raises(EmptyDataset):
        pretrain_context_encoder(encoder(), [], PretrainConfig(), torch.Generator().manual_seed(0))


def test_zero_steps_keeps_the_initialization():
    module = encoder()
    before = weights(module)
    corpus = in_domain_pairs(SeedScheme(0), ["reach"], ["general"], 4)
    generator = torch.Generator().manual_seed(0)
    losses = pretrain_context_encoder(module, corpus, PretrainConfig(steps=0), generator)
    assert losses == []
    assert all(torch.equal(a, b) for a, b in zip(before, weights(module)))


def test_pretraining_moves_weights_deterministically():
    corpus = in_domain_pairs(SeedScheme(0), ["reach"], ["general", "spatial"], 16)
    cfg = PretrainConfig(steps=20, lr=1e-2, batch_size=8)
    first, second = encoder(), encoder()
    before = weights(first)
    losses = pretrain_context_encoder(first, corpus, cfg, torch.Generator().manual_seed(3))
    assert len(losses) == 20
    pretrain_context_encoder(second, corpus, cfg, torch.Generator().manual_seed(3))
    assert not all(torch.equal(a, b) for a, b in zip(before, weights(first)))
    assert all(torch.equal(a, b) for a, b in zip(weights(first), weights(second)))
