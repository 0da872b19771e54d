import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import integral_luma, make_frame
from vidmark.errors import ConfigurationError, FormatError, ShapeError, TruncationError
from vidmark.video_io import (
    Frame,
    FrameSequence,
    chroma_plane_shape,
    read_raw_yuv,
    read_y4m,
    rgb_to_ycbcr,
    write_y4m,
    ycbcr_to_rgb,
)


def random_sequence(rng, frames=2, height=16, width=16, layout="420"):
    c_shape = chroma_plane_shape(layout, width, height)
    out = []
    for i in range(frames):
        out.append(
            Frame(
                index=i,
                luma=integral_luma(rng, height, width),
                chroma_b=rng.integers(0, 256, c_shape).astype(float) - 128.0,
                chroma_r=rng.integers(0, 256, c_shape).astype(float) - 128.0,
                chroma_layout=layout,
            )
        )
    return FrameSequence(frames=out, frame_rate=Fraction(30000, 1001))


class TestY4MReading:
    def test_two_frame_420_stream(self, tmp_path):
        path = tmp_path / "a.y4m"
        payload = bytes(range(256)) + bytes(64) + bytes(64)
        path.write_bytes(b"YUV4MPEG2 W16 H16 F25:1 Ip A1:1 C420\n" + (b"FRAME\n" + payload) * 2)
        seq = read_y4m(path)
        assert len(seq) == 2
        assert seq.frames[0].luma.shape == (16, 16)
        assert seq.frames[0].chroma_b.shape == (8, 8)
        assert seq.frame_rate == Fraction(25, 1)
        assert seq.frames[1].index == 1

    def test_chroma_offset_removed(self, tmp_path):
        path = tmp_path / "a.y4m"
        payload = bytes([10] * 16) + bytes([128] * 4) + bytes([130] * 4)
        path.write_bytes(b"YUV4MPEG2 W4 H4 F25:1 C420\n" + b"FRAME\n" + payload)
        frame = read_y4m(path).frames[0]
        assert np.all(frame.luma == 10.0)
        assert np.all(frame.chroma_b == 0.0)
        assert np.all(frame.chroma_r == 2.0)

    def test_empty_file_is_format_error(self, tmp_path):
        path = tmp_path / "empty.y4m"
        path.write_bytes(b"")
        with pytest.raises(FormatError):
            read_y4m(path)

    def test_wrong_magic_reported(self, tmp_path):
        path = tmp_path / "bad.y4m"
        path.write_bytes(b"RIFFDATA W16 H16\n")
        with pytest.raises(FormatError, match="RIFF"):
            read_y4m(path)

    def test_unsupported_colourspace_token_named(self, tmp_path):
        path = tmp_path / "bad.y4m"
        path.write_bytes(b"YUV4MPEG2 W16 H16 F25:1 C410\n")
        with pytest.raises(FormatError, match="C410"):
            read_y4m(path)

    def test_interlaced_rejected_with_token(self, tmp_path):
        path = tmp_path / "bad.y4m"
        path.write_bytes(b"YUV4MPEG2 W16 H16 F25:1 It\n")
        with pytest.raises(FormatError, match="It"):
            read_y4m(path)

    def test_missing_geometry_rejected(self, tmp_path):
        path = tmp_path / "bad.y4m"
        path.write_bytes(b"YUV4MPEG2 W16 F25:1\n")
        with pytest.raises(FormatError, match="W or H"):
            read_y4m(path)

    def test_malformed_rate_names_token(self, tmp_path):
        path = tmp_path / "bad.y4m"
        path.write_bytes(b"YUV4MPEG2 W16 H16 F25\n")
        with pytest.raises(FormatError, match="F25"):
            read_y4m(path)

    def test_truncated_frame_carries_index(self, tmp_path):
        path = tmp_path / "short.y4m"
        full = bytes(384)
        path.write_bytes(
            b"YUV4MPEG2 W16 H16 F25:1 C420\n" + b"FRAME\n" + full + b"FRAME\n" + full[:100]
        )
        with pytest.raises(TruncationError) as err:
            read_y4m(path)
        assert err.value.frame_index == 1

    def test_garbage_between_frames_rejected(self, tmp_path):
        path = tmp_path / "bad.y4m"
        path.write_bytes(b"YUV4MPEG2 W16 H16 F25:1 C420\n" + b"NOISE\n" + bytes(384))
        with pytest.raises(FormatError, match="FRAME"):
            read_y4m(path)


class TestY4MWriting:
    def test_roundtrip_preserves_planes(self, tmp_path):
        rng = np.random.default_rng(5)
        seq = random_sequence(rng, frames=3, layout="422")
        path = tmp_path / "rt.y4m"
        write_y4m(seq, path)
        back = read_y4m(path)
        for a, b in zip(seq.frames, back.frames):
            np.testing.assert_array_equal(a.luma, b.luma)
            np.testing.assert_array_equal(a.chroma_b, b.chroma_b)
            np.testing.assert_array_equal(a.chroma_r, b.chroma_r)

    @pytest.mark.parametrize("layout", ["420", "422", "444"])
    def test_write_read_write_byte_identical(self, tmp_path, layout):
        # independent roundtrip oracle: for integral samples the second
        # write must reproduce the first file byte for byte
        rng = np.random.default_rng(17)
        seq = random_sequence(rng, frames=2, layout=layout)
        first = tmp_path / "one.y4m"
        second = tmp_path / "two.y4m"
        write_y4m(seq, first)
        write_y4m(read_y4m(first), second)
        assert first.read_bytes() == second.read_bytes()

    def test_constant_128_payload_is_0x80(self, tmp_path):
        frame = make_frame(np.full((4, 4), 128.0))
        path = tmp_path / "c.y4m"
        write_y4m(FrameSequence(frames=[frame]), path)
        data = path.read_bytes()
        payload = data.split(b"FRAME\n", 1)[1]
        assert payload == b"\x80" * (16 + 4 + 4)

    def test_clamping_rules(self, tmp_path):
        luma = np.array([[255.7, -0.4], [254.5, 1.5]])
        frame = make_frame(luma, layout="444")
        path = tmp_path / "c.y4m"
        write_y4m(FrameSequence(frames=[frame]), path)
        body = read_y4m(path).frames[0].luma
        assert body[0, 0] == 255.0  # clamped high
        assert body[0, 1] == 0.0  # clamped low
        assert body[1, 0] == 255.0  # round half up
        assert body[1, 1] == 2.0

    def test_empty_sequence_rejected(self, tmp_path):
        with pytest.raises(ConfigurationError):
            write_y4m(FrameSequence(frames=[]), tmp_path / "no.y4m")


class TestRawYUV:
    def test_roundtrip_via_bytes(self, tmp_path):
        rng = np.random.default_rng(2)
        seq = random_sequence(rng, frames=2, height=8, width=8)
        y4m = tmp_path / "src.y4m"
        write_y4m(seq, y4m)
        raw = tmp_path / "src.yuv"
        # strip the stream and frame headers to get headerless planar data
        data = y4m.read_bytes().split(b"\n", 1)[1].replace(b"FRAME\n", b"")
        raw.write_bytes(data)
        back = read_raw_yuv(raw, 8, 8, "420", Fraction(25, 1))
        assert len(back) == 2
        np.testing.assert_array_equal(back.frames[1].luma, seq.frames[1].luma)

    def test_partial_frame_is_truncation(self, tmp_path):
        raw = tmp_path / "bad.yuv"
        raw.write_bytes(bytes(96 + 10))  # one full 8x8 4:2:0 frame plus a stub
        with pytest.raises(TruncationError) as err:
            read_raw_yuv(raw, 8, 8, "420", Fraction(25, 1))
        assert err.value.frame_index == 1

    def test_unknown_format_rejected(self, tmp_path):
        raw = tmp_path / "x.yuv"
        raw.write_bytes(bytes(96))
        with pytest.raises(ConfigurationError):
            read_raw_yuv(raw, 8, 8, "411", Fraction(25, 1))


class TestFrameTypes:
    def test_chroma_shape_validated(self):
        with pytest.raises(ShapeError):
            Frame(0, np.zeros((16, 16)), np.zeros((16, 16)), np.zeros((8, 8)), "420")

    def test_mixed_geometry_sequence_rejected(self):
        a = make_frame(np.zeros((16, 16)))
        b = make_frame(np.zeros((8, 8)), index=1)
        with pytest.raises(ShapeError):
            FrameSequence(frames=[a, b])


class TestColorConversion:
    def test_black_is_zero(self):
        assert rgb_to_ycbcr(0.0, 0.0, 0.0) == (0.0, 0.0, 0.0)

    def test_pure_red_coefficients(self):
        # 0.2989*255, -0.1687*255, 0.5*255 evaluated in decimal
        y, cb, cr = rgb_to_ycbcr(255.0, 0.0, 0.0)
        assert y == pytest.approx(76.2195, abs=1e-10)
        assert cb == pytest.approx(-43.0185, abs=1e-10)
        assert cr == pytest.approx(127.5, abs=1e-10)

    def test_white_point_is_coefficient_row_sums(self):
        # row sums: luma coefficients add to exactly 1, the chroma rows to 1e-4
        y, cb, cr = rgb_to_ycbcr(255.0, 255.0, 255.0)
        assert y == pytest.approx(255.0, abs=1e-9)
        assert cb == pytest.approx(0.0255, abs=1e-9)
        assert cr == pytest.approx(0.0255, abs=1e-9)

    def test_inverse_recovers_red(self):
        r, g, b = ycbcr_to_rgb(76.2195, -43.0185, 127.5)
        assert (r, g, b) == pytest.approx((255.0, 0.0, 0.0), abs=1e-6)

    def test_roundtrip_specific_triple(self):
        out = ycbcr_to_rgb(*rgb_to_ycbcr(12.0, 200.0, 33.0))
        assert out == pytest.approx((12.0, 200.0, 33.0), abs=1e-9)

    def test_roundtrip_grid(self):
        # 17^3 lattice over the full cube
        axis = np.linspace(0.0, 255.0, 17)
        r, g, b = np.meshgrid(axis, axis, axis, indexing="ij")
        rr, gg, bb = ycbcr_to_rgb(*rgb_to_ycbcr(r, g, b))
        worst = max(np.abs(rr - r).max(), np.abs(gg - g).max(), np.abs(bb - b).max())
        assert worst <= 1e-9

    @given(
        st.floats(0, 255, allow_nan=False),
        st.floats(0, 255, allow_nan=False),
        st.floats(0, 255, allow_nan=False),
    )
    @settings(deadline=None, max_examples=50)
    def test_roundtrip_property(self, r, g, b):
        rr, gg, bb = ycbcr_to_rgb(*rgb_to_ycbcr(r, g, b))
        assert math.isclose(rr, r, abs_tol=1e-9)
        assert math.isclose(gg, g, abs_tol=1e-9)
        assert math.isclose(bb, b, abs_tol=1e-9)
