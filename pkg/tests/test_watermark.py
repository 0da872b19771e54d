import math

import numpy as np
import pytest
import scipy.stats
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import integral_luma, make_frame
from vidmark.attacks import adaptive_quantize
from vidmark.errors import CapacityError, ConfigurationError, DomainError, IntegrityError, ShapeError
from vidmark.motion import BlockRecord, MotionVector
from vidmark.watermark import (
    EmbedManifest,
    FrameEntry,
    WatermarkPattern,
    blocks_required,
    embed_frequency,
    embed_spatial,
    extract_frequency,
    extract_spatial,
    generate_watermark,
    generate_watermark_samples,
    psnr,
    similarity,
)


def block_grid(coords, m=8):
    return [
        BlockRecord(i, j, j * m, i * m, MotionVector(0, 0), 9.0, True) for i, j in coords
    ]


def manifest_for(coords, domain, alpha=0.1, wm_side=16, seed=123):
    side2 = wm_side * wm_side
    return EmbedManifest(
        domain=domain,
        alpha=alpha,
        seed=seed,
        generator_id="xorshift64star",
        block_size=8,
        wm_side=wm_side,
        wm_samples=side2,
        threshold=4.0,
        search_range=7,
        frames=[FrameEntry(index=0, blocks=list(coords))],
    )


class TestGenerator:
    def test_default_size_is_1024_samples(self):
        wm = generate_watermark(seed=9, n=32)
        assert wm.samples.shape == (32, 32)
        assert wm.size == 1024

    def test_deterministic_for_seed(self):
        a = generate_watermark(seed=42, n=32)
        b = generate_watermark(seed=42, n=32)
        np.testing.assert_array_equal(a.samples, b.samples)

    def test_different_seeds_differ(self):
        a = generate_watermark(seed=1, n=32)
        b = generate_watermark(seed=2, n=32)
        assert not np.array_equal(a.samples, b.samples)

    def test_standard_normal_statistics(self):
        wm = generate_watermark(seed=1, n=32)
        s = wm.samples
        assert abs(s.mean()) < 0.12
        assert abs(s.var() - 1.0) < 0.15
        assert abs(int((s > 0).sum()) - 512) <= 64

    def test_against_distribution_oracle(self):
        # Kolmogorov-Smirnov against the exact normal CDF
        wm = generate_watermark(seed=7, n=32)
        result = scipy.stats.kstest(wm.samples.ravel(), "norm")
        assert result.pvalue > 1e-3

    def test_seed_zero_usable(self):
        wm = generate_watermark(seed=0, n=8)
        assert np.std(wm.samples) > 0.5

    def test_flat_mode_sample_count(self):
        wm = generate_watermark_samples(seed=3, count=512)
        assert wm.samples.shape == (512,)
        assert wm.n is None

    def test_unknown_generator_rejected(self):
        with pytest.raises(ConfigurationError):
            generate_watermark(seed=1, n=8, generator_id="mersenne")

    def test_bad_size_rejected(self):
        with pytest.raises(ConfigurationError):
            generate_watermark(seed=1, n=0)


class TestCapacity:
    def test_spatial_block_counts(self):
        assert blocks_required("spatial", 1024, 8) == 16
        assert blocks_required("spatial", 512, 8) == 8

    def test_frequency_block_counts(self):
        assert blocks_required("frequency", 1024, 8) == 128
        assert blocks_required("frequency", 512, 8) == 64

    def test_frequency_requires_block_size_8(self):
        with pytest.raises(ConfigurationError):
            blocks_required("frequency", 1024, 16)

    def test_indivisible_payload_rejected(self):
        with pytest.raises(ConfigurationError):
            blocks_required("spatial", 1000, 8)


class TestSpatial:
    def test_embedding_arithmetic(self):
        frame = make_frame(np.full((8, 8), 100.0))
        wm = WatermarkPattern(np.full((8, 8), 2.0), seed=0, generator_id="xorshift64star")
        out = embed_spatial(frame, wm, block_grid([(0, 0)]), alpha=0.1, block_size=8)
        np.testing.assert_allclose(out.luma, 100.2, atol=1e-12)

    def test_zero_watermark_is_identity(self):
        rng = np.random.default_rng(0)
        frame = make_frame(integral_luma(rng, 16, 16))
        wm = WatermarkPattern(np.zeros((16, 16)), seed=0, generator_id="xorshift64star")
        out = embed_spatial(frame, wm, block_grid([(0, 0), (0, 1), (1, 0), (1, 1)]), 0.1, 8)
        np.testing.assert_array_equal(out.luma, frame.luma)

    def test_roundtrip_recovers_watermark(self):
        rng = np.random.default_rng(1)
        frame = make_frame(integral_luma(rng, 32, 32))
        wm = generate_watermark(seed=123, n=16)
        coords = [(0, 0), (1, 1), (2, 2), (3, 3)]
        out = embed_spatial(frame, wm, block_grid(coords), 0.1, 8)
        w_star = extract_spatial(frame, out, manifest_for(coords, "spatial"))
        assert np.abs(w_star - wm.samples).max() <= 1e-9

    def test_extract_of_original_is_zero(self):
        rng = np.random.default_rng(2)
        frame = make_frame(integral_luma(rng, 32, 32))
        coords = [(0, 0), (0, 1), (1, 0), (1, 1)]
        w_star = extract_spatial(frame, frame, manifest_for(coords, "spatial"))
        assert np.abs(w_star).max() == 0.0

    def test_untouched_samples_identical(self):
        rng = np.random.default_rng(3)
        frame = make_frame(integral_luma(rng, 32, 32))
        wm = generate_watermark(seed=5, n=8)  # one 8x8 block
        out = embed_spatial(frame, wm, block_grid([(1, 2)]), 0.1, 8)
        mask = np.ones((32, 32), dtype=bool)
        mask[8:16, 16:24] = False
        np.testing.assert_array_equal(out.luma[mask], frame.luma[mask])
        np.testing.assert_array_equal(out.chroma_b, frame.chroma_b)

    def test_block_count_mismatch(self):
        frame = make_frame(np.zeros((32, 32)))
        wm = generate_watermark(seed=1, n=16)
        with pytest.raises(CapacityError):
            embed_spatial(frame, wm, block_grid([(0, 0)]), 0.1, 8)

    def test_bad_alpha_rejected(self):
        frame = make_frame(np.zeros((8, 8)))
        wm = generate_watermark(seed=1, n=8)
        with pytest.raises(ConfigurationError):
            embed_spatial(frame, wm, block_grid([(0, 0)]), 0.0, 8)

    def test_geometry_mismatch_on_extract(self):
        a = make_frame(np.zeros((16, 16)))
        b = make_frame(np.zeros((32, 32)))
        with pytest.raises(ShapeError):
            extract_spatial(a, b, manifest_for([(0, 0)], "spatial"))

    def test_missing_manifest_frame(self):
        frame = make_frame(np.zeros((32, 32)), index=4)
        with pytest.raises(IntegrityError):
            extract_spatial(frame, frame, manifest_for([(0, 0)], "spatial"))

    def test_quantized_regression_value(self):
        # frozen output of a fixed seed through uniform step-16 quantization
        rng = np.random.default_rng(77)
        frame = make_frame(integral_luma(rng, 32, 32))
        wm = generate_watermark(seed=123, n=16)
        coords = [(0, 0), (0, 1), (1, 0), (1, 1)]
        embedded = embed_spatial(frame, wm, block_grid(coords), 0.1, 8)
        attacked = adaptive_quantize(embedded, 16.0, adaptive=False)
        delta = similarity(extract_spatial(frame, attacked, manifest_for(coords, "spatial")), wm)
        assert 0.0 < delta < 1.0
        assert delta == pytest.approx(0.12988309710654317, abs=1e-9)


class TestFrequency:
    def test_zero_watermark_is_identity(self):
        rng = np.random.default_rng(4)
        frame = make_frame(integral_luma(rng, 16, 16))
        wm = WatermarkPattern(np.zeros(32), seed=0, generator_id="xorshift64star")
        out = embed_frequency(frame, wm, block_grid([(0, 0), (0, 1), (1, 0), (1, 1)]), 0.1)
        assert np.abs(out.luma - frame.luma).max() <= 1e-9

    def test_default_watermark_needs_128_blocks(self):
        wm = generate_watermark(seed=1, n=32)
        frame = make_frame(np.zeros((96, 96)))
        coords = [(i, j) for i in range(12) for j in range(12)][:127]
        with pytest.raises(CapacityError):
            embed_frequency(frame, wm, block_grid(coords), 0.1)

    def test_roundtrip_similarity(self):
        rng = np.random.default_rng(5)
        frame = make_frame(integral_luma(rng, 64, 64))
        wm = generate_watermark(seed=321, n=16)  # 256 samples over 32 blocks
        coords = [(i, j) for i in range(8) for j in range(8)][: 256 // 8]
        out = embed_frequency(frame, wm, block_grid(coords), 0.1)
        manifest = manifest_for(coords, "frequency")
        w_star = extract_frequency(frame, out, manifest)
        assert np.abs(w_star - wm.samples).max() <= 1e-6
        assert similarity(w_star, wm) >= 0.999999

    def test_extract_of_original_is_zero_and_unselected_blocks_exact(self):
        rng = np.random.default_rng(6)
        frame = make_frame(integral_luma(rng, 32, 32))
        wm = generate_watermark_samples(seed=5, count=16)  # two blocks
        coords = [(0, 0), (2, 3)]
        out = embed_frequency(frame, wm, block_grid(coords), 0.1)
        mask = np.ones((32, 32), dtype=bool)
        mask[0:8, 0:8] = False
        mask[16:24, 24:32] = False
        np.testing.assert_array_equal(out.luma[mask], frame.luma[mask])

    def test_rejects_wrong_domain_manifest(self):
        frame = make_frame(np.zeros((16, 16)))
        with pytest.raises(ConfigurationError):
            extract_frequency(frame, frame, manifest_for([(0, 0)], "spatial"))


class TestPSNR:
    def test_identical_is_infinite(self):
        frame = make_frame(np.full((8, 8), 9.0))
        assert psnr(frame, frame) == math.inf

    def test_worked_example(self):
        original = np.full((8, 8), 255.0)
        modified = original.copy()
        modified[3, 4] -= 16.0
        assert psnr(original, modified) == pytest.approx(42.11, abs=0.01)

    def test_uses_region_peak_not_255(self):
        original = np.full((8, 8), 64.0)
        modified = original.copy()
        modified[0, 0] -= 16.0
        dim = psnr(original, modified)
        bright = psnr(np.full((8, 8), 255.0), np.where(modified == 48.0, 239.0, 255.0))
        assert dim < bright

    def test_all_zero_original_rejected(self):
        with pytest.raises(DomainError):
            psnr(np.zeros((4, 4)), np.ones((4, 4)))

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            psnr(np.zeros((4, 4)), np.zeros((8, 8)))

    def test_monotone_in_alpha(self):
        rng = np.random.default_rng(7)
        frame = make_frame(integral_luma(rng, 16, 16))
        wm = generate_watermark(seed=11, n=16)
        coords = [(0, 0), (0, 1), (1, 0), (1, 1)]
        values = []
        for alpha in (0.05, 0.1, 0.2, 0.4):
            out = embed_spatial(frame, wm, block_grid(coords), alpha, 8)
            values.append(psnr(frame, out))
        assert values == sorted(values, reverse=True)
        assert all(b < a for a, b in zip(values, values[1:]))


class TestSimilarity:
    def test_self_similarity_is_one(self):
        wm = generate_watermark(seed=1, n=16)
        assert similarity(wm, wm) == pytest.approx(1.0, abs=1e-12)

    def test_negated_is_minus_one(self):
        wm = generate_watermark(seed=1, n=16)
        assert similarity(-wm.samples, wm) == pytest.approx(-1.0, abs=1e-12)

    @given(st.floats(min_value=1e-6, max_value=1e6))
    @settings(deadline=None, max_examples=50)
    def test_scale_invariant(self, c):
        wm = generate_watermark(seed=2, n=8)
        noisy = wm.samples + 0.5
        assert similarity(c * noisy, wm) == pytest.approx(similarity(noisy, wm), abs=1e-12)

    def test_zero_norm_rejected(self):
        wm = generate_watermark(seed=1, n=8)
        with pytest.raises(DomainError):
            similarity(np.zeros((8, 8)), wm)

    def test_shape_mismatch_rejected(self):
        wm = generate_watermark(seed=1, n=8)
        with pytest.raises(ShapeError):
            similarity(np.zeros((4, 4)), wm)

    def test_orthogonal_patterns_decorrelated(self):
        a = generate_watermark(seed=1, n=32)
        b = generate_watermark(seed=2, n=32)
        assert abs(similarity(a, b)) < 0.15
