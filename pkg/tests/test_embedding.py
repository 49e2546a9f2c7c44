"""Embedding providers: fallback determinism, remote protocol, caching."""

from __future__ import annotations

import json

import httpx
import numpy as np
import pytest

from pwim.embedding import (
    CachingEmbedder,
    FALLBACK_DIM,
    FallbackEmbedder,
    RemoteEmbedder,
    fnv1a64,
    normalize,
    provider_from_env,
    trigram_counts,
)
from pwim.errors import (
    DimensionMismatchError,
    ProviderUnavailableError,
    ZeroVectorError,
)
from pwim.ranking import cosine

from genutil import CountingProvider


# ---------------------------------------------------------------------------
# fallback embedder: values frozen from an independent implementation

def test_fnv1a64_reference_values():
    # standard published test vectors for FNV-1a 64
    assert fnv1a64(b"") == 0xCBF29CE484222325
    assert fnv1a64(b"a") == 0xAF63DC4C8601EC8C
    assert fnv1a64(b"foobar") == 0x85944171F73967E8


def test_trigram_counts_frozen_abc():
    counts = trigram_counts("abc")
    expected = np.zeros(FALLBACK_DIM, dtype=np.int64)
    expected[36] = 2
    expected[75] = 1
    assert counts.tolist() == expected.tolist()


def test_trigram_counts_frozen_xyz():
    counts = trigram_counts("xyz")
    nonzero = {i: int(v) for i, v in enumerate(counts) if v}
    assert nonzero == {32: 2, 252: 1}


def test_trigram_counts_frozen_wait():
    nonzero = {i: int(v) for i, v in enumerate(trigram_counts("wait")) if v}
    assert nonzero == {10: 1, 127: 1, 148: 1, 209: 1}


def test_fallback_embed_frozen_abc():
    vec = FallbackEmbedder().embed("abc")
    nonzero = {i: v for i, v in enumerate(vec) if v}
    assert set(nonzero) == {36, 75}
    assert nonzero[36] == pytest.approx(0.8944271909999159, abs=1e-15)
    assert nonzero[75] == pytest.approx(0.4472135954999579, abs=1e-15)


def test_fallback_embed_frozen_wait():
    vec = FallbackEmbedder().embed("wait")
    nonzero = {i: v for i, v in enumerate(vec) if v}
    assert set(nonzero) == {10, 127, 148, 209}
    assert all(v == pytest.approx(0.5, abs=1e-15) for v in nonzero.values())


def test_fallback_casefolds():
    embedder = FallbackEmbedder()
    assert np.array_equal(embedder.embed("Order A BEER"), embedder.embed("order a beer"))


def test_identical_strings_cosine_exactly_one():
    embedder = FallbackEmbedder()
    assert cosine(embedder.embed("order a beer"), embedder.embed("order a beer")) == 1.0


def test_disjoint_trigrams_cosine_zero():
    embedder = FallbackEmbedder()
    assert cosine(embedder.embed("abc"), embedder.embed("xyz")) == 0.0


def test_overlapping_strings_cosine_frozen():
    embedder = FallbackEmbedder()
    sim = cosine(embedder.embed("order a beer"), embedder.embed("order a beer!"))
    assert 0.0 < sim < 1.0
    assert sim == pytest.approx(0.8807048459279794, abs=1e-12)


def test_vectors_unit_norm():
    embedder = FallbackEmbedder()
    for text in ("a", "wait", "order a beer", "Zebra Crossing 42!"):
        assert abs(np.linalg.norm(embedder.embed(text)) - 1.0) <= 1e-6


def test_duplicate_texts_identical_vectors():
    one, two = FallbackEmbedder().embed_batch(["order a beer", "order a beer"])
    assert np.array_equal(one, two)


def test_batch_concat_equals_separate():
    embedder = FallbackEmbedder()
    xs, ys = ["alpha", "beta"], ["gamma"]
    combined = embedder.embed_batch(xs + ys)
    separate = embedder.embed_batch(xs) + embedder.embed_batch(ys)
    for u, v in zip(combined, separate):
        assert np.array_equal(u, v)


@pytest.mark.parametrize("bad", [[], [""], ["ok", "  "]])
def test_empty_texts_rejected(bad):
    with pytest.raises(ValueError):
        FallbackEmbedder().embed_batch(bad)


def test_normalize_contract():
    out = normalize(np.array([3.0, 4.0]))
    assert out.tolist() == [0.6, 0.8]
    with pytest.raises(ZeroVectorError):
        normalize(np.zeros(4))
    with pytest.raises(ValueError):
        normalize(np.array([1.0]))
    with pytest.raises(ValueError):
        normalize(np.array([np.inf, 1.0]))


# ---------------------------------------------------------------------------
# remote provider over a mock transport

def respond_with(handler):
    return RemoteEmbedder("http://embed.test", transport=httpx.MockTransport(handler))


def test_remote_protocol_round_trip():
    seen = {}

    def handler(request: httpx.Request) -> httpx.Response:
        seen["url"] = str(request.url)
        seen["body"] = json.loads(request.content)
        return httpx.Response(200, json={
            "model": "all-mpnet-base-v2",
            "dimension": 3,
            "vectors": [[3.0, 4.0, 0.0], [0.0, 0.0, 2.0]],
        })

    provider = respond_with(handler)
    vectors = provider.embed_batch(["order a beer", "wait"])
    assert seen["url"] == "http://embed.test/embed"
    assert seen["body"] == {
        "model": "all-mpnet-base-v2",
        "texts": ["order a beer", "wait"],
    }
    # client-side re-normalization regardless of backend scaling
    assert vectors[0].tolist() == [0.6, 0.8, 0.0]
    assert vectors[1].tolist() == [0.0, 0.0, 1.0]
    assert provider.dimension == 3


def test_remote_non_200_is_provider_unavailable():
    provider = respond_with(lambda request: httpx.Response(500, text="boom"))
    with pytest.raises(ProviderUnavailableError):
        provider.embed_batch(["x y"])


def test_remote_transport_error_is_provider_unavailable():
    def handler(request):
        raise httpx.ConnectError("refused", request=request)

    provider = respond_with(handler)
    with pytest.raises(ProviderUnavailableError):
        provider.embed_batch(["x y"])


def test_remote_malformed_body_is_provider_unavailable():
    provider = respond_with(lambda request: httpx.Response(200, json={"nope": 1}))
    with pytest.raises(ProviderUnavailableError):
        provider.embed_batch(["x y"])


def test_remote_wrong_vector_count_is_provider_unavailable():
    provider = respond_with(lambda request: httpx.Response(200, json={
        "model": "m", "dimension": 2, "vectors": [[1.0, 0.0]],
    }))
    with pytest.raises(ProviderUnavailableError):
        provider.embed_batch(["a b", "c d"])


def test_remote_inconsistent_lengths_are_dimension_mismatch():
    provider = respond_with(lambda request: httpx.Response(200, json={
        "model": "m", "dimension": 2, "vectors": [[1.0, 0.0], [1.0, 0.0, 0.0]],
    }))
    with pytest.raises(DimensionMismatchError):
        provider.embed_batch(["a b", "c d"])


def test_remote_dimension_change_across_calls_rejected():
    dims = iter([2, 3])

    def handler(request):
        d = next(dims)
        return httpx.Response(200, json={
            "model": "m", "dimension": d, "vectors": [[1.0] * d],
        })

    provider = respond_with(handler)
    provider.embed_batch(["first"])
    with pytest.raises(DimensionMismatchError):
        provider.embed_batch(["second"])


def test_provider_from_env():
    assert isinstance(provider_from_env({}), FallbackEmbedder)
    remote = provider_from_env({"PWIM_EMBED_URL": "http://embed.test/"})
    assert isinstance(remote, RemoteEmbedder)
    assert remote.endpoint == "http://embed.test"


# ---------------------------------------------------------------------------
# caching wrapper

def test_cache_hit_skips_backend():
    backend = CountingProvider()
    cached = CachingEmbedder(backend)
    first = cached.embed("order a beer")
    second = cached.embed("order a beer")
    assert np.array_equal(first, second)
    assert cached.backend_calls == 1
    assert cached.backend_batches == [1]


def test_capacity_one_eviction_pattern():
    cached = CachingEmbedder(CountingProvider(), capacity=1)
    cached.embed("a")
    cached.embed("b")
    cached.embed("a")
    assert cached.backend_calls == 3


def test_eager_precompute_single_batch():
    cached = CachingEmbedder(CountingProvider())
    summaries = [f"summary {i}" for i in range(7)]
    cached.embed_batch(summaries)
    assert cached.backend_batches == [7]
    cached.embed_batch(summaries)  # all hits
    assert cached.backend_batches == [7]


def test_batch_with_duplicates_fetches_once():
    cached = CachingEmbedder(CountingProvider())
    out = cached.embed_batch(["x y", "x y", "x y"])
    assert cached.backend_batches == [1]
    assert all(np.array_equal(out[0], v) for v in out)


def test_small_capacity_batch_still_correct():
    # storing later misses evicts earlier ones; results must not care
    backend = CountingProvider()
    cached = CachingEmbedder(backend, capacity=1)
    out = cached.embed_batch(["a", "b", "c"])
    plain = backend.embed_batch(["a", "b", "c"])
    for u, v in zip(out, plain):
        assert np.array_equal(u, v)


def test_cache_transparency():
    texts = ["travel to the bar", "order a beer", "wait", "order a beer"]
    plain = FallbackEmbedder().embed_batch(texts)
    cached = CachingEmbedder(FallbackEmbedder()).embed_batch(texts)
    for u, v in zip(plain, cached):
        assert np.array_equal(u, v)


def test_cache_capacity_validation():
    with pytest.raises(ValueError):
        CachingEmbedder(FallbackEmbedder(), capacity=0)


def test_cache_mixed_hits_and_misses():
    cached = CachingEmbedder(CountingProvider())
    cached.embed_batch(["a", "b"])
    cached.embed_batch(["b", "c", "a", "d"])
    assert cached.backend_batches == [2, 2]  # only c and d fetched
