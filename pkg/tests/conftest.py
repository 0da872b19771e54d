import numpy as np
import pytest

from vidmark.synth import synth_clip
from vidmark.video_io import Frame, chroma_plane_shape


@pytest.fixture(scope="session")
def morph_clip():
    return synth_clip("morph", frames=30)


@pytest.fixture(scope="session")
def drift_clip():
    return synth_clip("drift", frames=30, seed=9)


@pytest.fixture(scope="session")
def bundled_clips(morph_clip, drift_clip):
    return [("morph", morph_clip), ("drift", drift_clip)]


def make_frame(luma, index=0, layout="420"):
    """Frame with zeroed chroma planes around the given luma."""
    luma = np.asarray(luma, dtype=np.float64)
    c_shape = chroma_plane_shape(layout, luma.shape[1], luma.shape[0])
    return Frame(index, luma, np.zeros(c_shape), np.zeros(c_shape), layout)


def integral_luma(rng, height, width):
    """Random 8-bit-valued luma stored as floats."""
    return rng.integers(0, 256, size=(height, width)).astype(np.float64)
