import numpy as np
import pytest

from exchtest.errors import ConfigError, ReducibleChainError
from exchtest.markov_sim import GeneratorSpec, MarkovParams, generate, generate_batch, stationary


@pytest.mark.parametrize(
    "p01, p10, expected", [(0.1, 0.1, (0.5, 0.5)), (0.1, 0.3, (0.75, 0.25)), (1, 1, (0.5, 0.5))]
)
def test_stationary(p01, p10, expected):
    assert stationary(MarkovParams(p01, p10)) == pytest.approx(expected)


def test_stationary_reducible():
    with pytest.raises(ReducibleChainError):
        stationary(MarkovParams(0, 0))


def test_bad_params():
    with pytest.raises(ConfigError):
        MarkovParams(1.2, 0.1)
    with pytest.raises(ConfigError):
        GeneratorSpec("markov", 1, params=MarkovParams(0.1, 0.1))
    with pytest.raises(ConfigError):
        GeneratorSpec("iid", 10)


@pytest.mark.parametrize("seed", [0, 1, 99])
def test_absorbing(seed):
    bits = generate_batch(GeneratorSpec("markov", 30, seed, MarkovParams(0, 0)), 0, 50).bits
    assert np.all(bits == bits[:, :1])
    assert 0 < bits[:, 0].sum() < 50


def test_alternating():
    bits = generate_batch(GeneratorSpec("markov", 25, 3, MarkovParams(1, 1)), 0, 20).bits
    assert np.all(bits[:, 1:] != bits[:, :-1])


def test_fraction_of_ones():
    bits = generate_batch(GeneratorSpec("markov", 20, 0, MarkovParams(0.1, 0.1)), 0, 10**5).bits
    assert abs(bits.mean() - 0.5) <= 0.01


def test_transition_frequencies():
    bits = generate_batch(GeneratorSpec("markov", 2000, 5, MarkovParams(0.2, 0.35)), 0, 50).bits
    prev, nxt = bits[:, :-1], bits[:, 1:]
    assert nxt[prev == 0].mean() == pytest.approx(0.2, abs=0.01)
    assert 1 - nxt[prev == 1].mean() == pytest.approx(0.35, abs=0.01)


def test_iid_rate():
    bits = generate_batch(GeneratorSpec("iid", 1000, 2, p=0.3), 0, 100).bits
    assert bits.mean() == pytest.approx(0.3, abs=0.01)


def test_mixture_parameters_are_uniform():
    b = generate_batch(GeneratorSpec("umm", 5, 4), 0, 20000)
    for p in (b.pi01, b.pi10):
        assert p.mean() == pytest.approx(0.5, abs=0.01)
        assert p.var() == pytest.approx(1 / 12, abs=0.005)


def test_mixture_type_distribution_matches_alternative():
    """Empirical frequency of 3-bit sequences vs their exact mixture mass."""
    from exchtest.oracle import enumerate_umm

    bits = generate_batch(GeneratorSpec("umm", 3, 8), 0, 40000).bits
    codes = bits @ np.array([4, 2, 1])
    freq = np.bincount(codes, minlength=8) / len(codes)
    q = enumerate_umm(3)
    for key, mass in q.items():
        code = key[0] * 4 + key[1] * 2 + key[2]
        assert freq[code] == pytest.approx(float(mass), abs=0.01)


def test_reproducible_and_chunk_independent():
    spec = GeneratorSpec("umm", 40, 11)
    whole = generate_batch(spec, 0, 30).bits
    assert np.array_equal(whole, generate_batch(spec, 0, 30).bits)
    parts = np.vstack([generate_batch(spec, 0, 7).bits, generate_batch(spec, 7, 23).bits])
    assert np.array_equal(whole, parts)
    assert np.array_equal(generate(spec, 12).bits, whole[12])


def test_seed_changes_output():
    a = generate_batch(GeneratorSpec("umm", 40, 1), 0, 5).bits
    b = generate_batch(GeneratorSpec("umm", 40, 2), 0, 5).bits
    assert not np.array_equal(a, b)


def _stepped(spec, start, count):
    """Reference generator: one transition at a time from the same uniforms."""
    from exchtest.markov_sim import replication_rng

    rows = []
    for r in range(count):
        u = replication_rng(spec.seed, start + r).random(spec.N + 2)
        p01, p10 = (u[0], u[1]) if spec.kind.value == "umm" else (spec.params.pi01, spec.params.pi10)
        cur = int(u[2] < 0.5)
        row = [cur]
        for x in u[3:]:
            cur = int(x >= p10) if cur else int(x < p01)
            row.append(cur)
        rows.append(row)
    return np.array(rows, dtype=np.uint8)


@pytest.mark.parametrize(
    "spec",
    [
        GeneratorSpec("umm", 120, 5),
        GeneratorSpec("markov", 80, 1, MarkovParams(0.1, 0.1)),
        GeneratorSpec("markov", 30, 2, MarkovParams(0, 1)),
        GeneratorSpec("markov", 30, 2, MarkovParams(1, 0)),
        GeneratorSpec("markov", 2, 3, MarkovParams(0.3, 0.6)),
    ],
)
def test_matches_stepwise_reference(spec):
    assert np.array_equal(generate_batch(spec, 3, 60).bits, _stepped(spec, 3, 60))
