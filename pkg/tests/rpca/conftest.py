import numpy as np
import pytest


def planted(rng, n=400, k=60, rank=2, density=0.05, noise=1e-3):
    """Low-rank plus sparse plus dense noise, returns ``(X, support)``."""
    L = rng.standard_normal((n, rank)) @ rng.standard_normal((rank, k))
    L /= np.sqrt(rank)
    support = rng.random((n, k)) < density
    S = np.zeros((n, k))
    S[support] = rng.choice([-1.0, 1.0], support.sum()) * \
        rng.uniform(0.5, 1.0, support.sum())
    return L + S + noise * rng.standard_normal((n, k)), support


def f1_score(found, truth):
    tp = np.sum(found & truth)
    if tp == 0:
        return 0.0
    precision = tp / np.sum(found)
    recall = tp / np.sum(truth)
    return 2 * precision * recall / (precision + recall)


@pytest.fixture
def planted_stack():
    return planted(np.random.default_rng(7))
