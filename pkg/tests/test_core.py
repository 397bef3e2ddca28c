"""Container invariants, SFT1 round trips, grayscale image I/O, and the
atomic-write discipline."""

import os
import struct

import numpy as np
import pytest

from freqfeat import (FormatError, Mask, ParameterError, Spectrum, Tensor,
                      image_read_gray, image_write_gray, tensor_read,
                      tensor_write)
from freqfeat.core import atomic_write, parallel_map


def test_tensor_shape_and_invariants():
    t = Tensor(np.zeros((2, 3, 4)))
    assert (t.channels, t.height, t.width) == (2, 3, 4)
    with pytest.raises(ParameterError):
        Tensor(np.zeros((0, 3, 4)))
    with pytest.raises(ParameterError):
        Tensor(np.array([[[np.nan]]]))
    with pytest.raises(ParameterError):
        Tensor(np.zeros(5))


def test_tensor_is_immutable():
    t = Tensor(np.zeros((1, 2, 2)))
    with pytest.raises(ValueError):
        t.data[0, 0, 0] = 1.0


def test_mask_must_be_binary():
    Mask(np.array([[0.0, 1.0], [1.0, 0.0]]))
    with pytest.raises(ParameterError):
        Mask(np.array([[0.5, 0.0], [0.0, 0.0]]))


def test_spectrum_validation():
    s = Spectrum(np.zeros((2, 2), dtype=complex))
    assert not s.centered
    with pytest.raises(ParameterError):
        Spectrum(np.zeros((2, 2, 2), dtype=complex))


def test_sft1_known_layout(tmp_path):
    path = tmp_path / "t.sft"
    tensor_write(Tensor(np.array([[[1.0, 2.0], [3.0, 4.0]]])), path)
    raw = path.read_bytes()
    assert raw[:4] == b"SFT1"
    assert struct.unpack("<III", raw[4:16]) == (1, 2, 2)
    assert np.frombuffer(raw[16:], dtype="<f8").tolist() == [1.0, 2.0, 3.0, 4.0]
    back = tensor_read(path)
    assert back.data.tolist() == [[[1.0, 2.0], [3.0, 4.0]]]


def test_sft1_roundtrip_byte_exact(tmp_path):
    rng = np.random.default_rng(20)
    t = Tensor(rng.standard_normal((3, 17, 23)))
    p1 = tmp_path / "a.sft"
    p2 = tmp_path / "b.sft"
    tensor_write(t, p1)
    back = tensor_read(p1)
    assert np.array_equal(back.data, t.data)
    tensor_write(back, p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_sft1_write_is_deterministic(tmp_path):
    t = Tensor(np.full((1, 1, 1), 0.0))
    p1, p2 = tmp_path / "a.sft", tmp_path / "b.sft"
    tensor_write(t, p1)
    tensor_write(t, p2)
    assert p1.read_bytes() == p2.read_bytes()
    assert tensor_read(p1).data.tolist() == [[[0.0]]]


def test_sft1_corrupt_magic(tmp_path):
    path = tmp_path / "bad.sft"
    tensor_write(Tensor(np.zeros((1, 2, 2))), path)
    raw = bytearray(path.read_bytes())
    raw[0] = ord("X")
    path.write_bytes(bytes(raw))
    with pytest.raises(FormatError, match="byte offset 0"):
        tensor_read(path)


def test_sft1_truncated_and_oversized(tmp_path):
    path = tmp_path / "bad.sft"
    path.write_bytes(b"SFT1" + struct.pack("<III", 1, 2, 2) + b"\x00" * 8)
    with pytest.raises(FormatError, match="truncated"):
        tensor_read(path)
    path.write_bytes(b"SFT1" + struct.pack("<III", 2 ** 30, 2 ** 30, 4))
    with pytest.raises(FormatError, match="overflows"):
        tensor_read(path)


# ---------------------------------------------------------------------------
# images
# ---------------------------------------------------------------------------

def test_pgm_8bit_scaling(tmp_path):
    path = tmp_path / "im.pgm"
    path.write_bytes(b"P5\n2 2\n255\n" + bytes([0, 255, 128, 64]))
    t = image_read_gray(path)
    assert t.shape == (1, 2, 2)
    assert np.allclose(t.data[0], [[0, 1], [128 / 255, 64 / 255]], atol=0, rtol=0)


def test_pgm_comment_and_16bit(tmp_path):
    path = tmp_path / "im.pgm"
    path.write_bytes(b"P5\n# a comment\n1 2\n65535\n" + struct.pack(">HH", 0, 65535))
    t = image_read_gray(path)
    assert t.data[0].tolist() == [[0.0], [1.0]]


def test_all_white_reads_as_ones(tmp_path):
    path = tmp_path / "w.pgm"
    path.write_bytes(b"P5\n3 2\n255\n" + bytes([255] * 6))
    assert np.all(image_read_gray(path).data == 1.0)


def test_unsupported_formats_name_the_type(tmp_path):
    p6 = tmp_path / "c.pgm"
    p6.write_bytes(b"P6\n1 1\n255\n\x00\x00\x00")
    with pytest.raises(FormatError, match="P6"):
        image_read_gray(p6)

    from PIL import Image

    rgb = tmp_path / "c.png"
    Image.new("RGB", (2, 2)).save(rgb)
    with pytest.raises(FormatError, match="RGB"):
        image_read_gray(rgb)


@pytest.mark.parametrize("ext", ["pgm", "png"])
@pytest.mark.parametrize("bits", [8, 16])
def test_image_roundtrip_quantization_bound(tmp_path, ext, bits):
    rng = np.random.default_rng(21)
    t = Tensor(rng.random((1, 9, 7)))
    path = tmp_path / f"im.{ext}"
    image_write_gray(t, path, bits=bits)
    back = image_read_gray(path)
    bound = 1.0 / (2 * ((1 << bits) - 1))
    assert np.abs(back.data - t.data).max() <= bound + 1e-15


def test_png_pgm_same_pixels_agree(tmp_path):
    rng = np.random.default_rng(22)
    t = Tensor(rng.random((1, 8, 8)))
    p_pgm = tmp_path / "x.pgm"
    p_png = tmp_path / "x.png"
    image_write_gray(t, p_pgm, bits=16)
    image_write_gray(t, p_png, bits=16)
    a = image_read_gray(p_pgm)
    b = image_read_gray(p_png)
    assert np.abs(a.data - b.data).max() < 1e-12


def test_image_write_clamps(tmp_path):
    t = Tensor(np.array([[[-0.5, 1.5]]]))
    path = tmp_path / "c.pgm"
    image_write_gray(t, path)
    assert image_read_gray(path).data[0].tolist() == [[0.0, 1.0]]


def test_image_write_determinism(tmp_path):
    t = Tensor(np.linspace(0, 1, 16).reshape(1, 4, 4))
    p1, p2 = tmp_path / "a.pgm", tmp_path / "b.pgm"
    image_write_gray(t, p1)
    image_write_gray(t, p2)
    assert p1.read_bytes() == p2.read_bytes()


# ---------------------------------------------------------------------------
# runtime helpers
# ---------------------------------------------------------------------------

def test_atomic_write_replaces_on_success(tmp_path):
    path = tmp_path / "out.bin"
    path.write_bytes(b"old")
    with atomic_write(path) as f:
        f.write(b"new")
    assert path.read_bytes() == b"new"
    assert os.listdir(tmp_path) == ["out.bin"]


def test_atomic_write_leaves_nothing_on_failure(tmp_path):
    path = tmp_path / "out.bin"
    with pytest.raises(RuntimeError):
        with atomic_write(path) as f:
            f.write(b"partial")
            raise RuntimeError("injected failure")
    assert os.listdir(tmp_path) == []


def test_atomic_write_keeps_old_file_on_failure(tmp_path):
    path = tmp_path / "out.bin"
    path.write_bytes(b"old")
    with pytest.raises(RuntimeError):
        with atomic_write(path) as f:
            f.write(b"partial")
            raise RuntimeError("injected failure")
    assert path.read_bytes() == b"old"
    assert os.listdir(tmp_path) == ["out.bin"]


@pytest.mark.parametrize("threads", ["1", "4"])
def test_parallel_map_preserves_order(monkeypatch, threads):
    monkeypatch.setenv("FREQFEAT_THREADS", threads)
    items = list(range(37))
    assert parallel_map(lambda v: v * v, items) == [v * v for v in items]
