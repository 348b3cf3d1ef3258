import pytest

from jacobikit.corpus import CorpusSpec, generate_corpus
from jacobikit.serialize import dumps


def test_fixed_seed_is_reproducible():
    spec = CorpusSpec(seed=1, count=1, n_min=3, n_max=3)
    a, b = dumps(generate_corpus(spec)), dumps(generate_corpus(spec))
    assert a == b
    assert generate_corpus(spec)[0].N == 3


def test_seeds_differ():
    one = generate_corpus(CorpusSpec(seed=1, count=1, n_min=3, n_max=3))
    two = generate_corpus(CorpusSpec(seed=2, count=1, n_min=3, n_max=3))
    assert one != two


def test_default_corpus_shape():
    corpus = generate_corpus(CorpusSpec())
    assert len(corpus) == 100
    assert all(4 <= J.N <= 12 and (J.b > 0).all() for J in corpus)
    assert all(((J.q >= -2) & (J.q <= 2)).all() and ((J.b >= 0.5) & (J.b <= 2)).all() for J in corpus)


def test_spec_validation():
    with pytest.raises(ValueError):
        CorpusSpec(n_min=1)
    with pytest.raises(ValueError):
        CorpusSpec(b_range=(0.0, 1.0))
    with pytest.raises(ValueError):
        CorpusSpec(q_range=(1.0, 1.0))
    with pytest.raises(ValueError):
        CorpusSpec(seed=-1)
