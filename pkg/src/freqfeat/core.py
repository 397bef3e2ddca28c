"""Shape-checked tensor containers, the SFT1 binary tensor format, and
grayscale image I/O (PGM P5 and PNG, 8/16-bit).

Layout convention, fixed package-wide: row-major (channel, row, column),
float64.  All containers are immutable after construction and every
operation in the package is a pure function, so values are safe to share
across threads.
"""

import concurrent.futures
import os
import struct
import tempfile
from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np

from .errors import FormatError, ParameterError

SFT1_MAGIC = b"SFT1"

# Payload byte count must stay below this; guards against corrupt headers
# whose dimension product would overflow or exhaust memory.
_MAX_ELEMENTS = 1 << 40


def _freeze(a):
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Tensor:
    """Rank-3 real array (channels, height, width), float64, finite."""

    data: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.data, dtype=np.float64)
        if a.ndim == 2:
            a = a[np.newaxis]
        if a.ndim != 3:
            raise ParameterError(f"Tensor needs rank-3 data, got shape {a.shape}")
        if min(a.shape) < 1:
            raise ParameterError(f"Tensor dims must be positive, got {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ParameterError("Tensor data contains NaN or Inf")
        object.__setattr__(self, "data", _freeze(a))

    @property
    def channels(self) -> int:
        return self.data.shape[0]

    @property
    def height(self) -> int:
        return self.data.shape[1]

    @property
    def width(self) -> int:
        return self.data.shape[2]

    @property
    def shape(self):
        return self.data.shape

    def channel(self, c: int) -> np.ndarray:
        """Read-only (H, W) view of one channel."""
        return self.data[c]

    def map_channels(self, fn) -> "Tensor":
        """Apply fn : (H,W) -> (H,W) independently to every channel."""
        return Tensor(np.stack([fn(self.data[c]) for c in range(self.channels)]))


@dataclass(frozen=True)
class Spectrum:
    """Rank-2 complex array of frequency bins.

    `centered` records whether the zero-frequency bin has been cyclically
    shifted to the array center; it toggles only through
    fourier.center / fourier.uncenter.
    """

    data: np.ndarray
    centered: bool = False

    def __post_init__(self):
        a = np.asarray(self.data, dtype=np.complex128)
        if a.ndim != 2 or min(a.shape) < 1:
            raise ParameterError(f"Spectrum needs a rank-2 array, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ParameterError("Spectrum data contains NaN or Inf")
        object.__setattr__(self, "data", _freeze(a))

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class Mask:
    """Rank-2 binary gate over frequency bins; values exactly {0, 1}."""

    data: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.data, dtype=np.float64)
        if a.ndim != 2 or min(a.shape) < 1:
            raise ParameterError(f"Mask needs a rank-2 array, got shape {a.shape}")
        if not np.all((a == 0.0) | (a == 1.0)):
            raise ParameterError("Mask values must be exactly 0 or 1")
        object.__setattr__(self, "data", _freeze(a))

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    def count(self) -> int:
        return int(self.data.sum())


# ---------------------------------------------------------------------------
# SFT1 binary tensor format:
#   "SFT1" | u32le channels | u32le height | u32le width |
#   channels*height*width f64le values, row-major (c, row, col)
# ---------------------------------------------------------------------------

def tensor_write(t: Tensor, path) -> None:
    """Write a tensor as an SFT1 file; bytes are deterministic."""
    with atomic_write(path) as f:
        f.write(SFT1_MAGIC)
        f.write(struct.pack("<III", t.channels, t.height, t.width))
        f.write(t.data.astype("<f8").tobytes())


def tensor_read(path) -> Tensor:
    """Read an SFT1 file back into a Tensor (bit-exact round trip)."""
    with open(path, "rb") as f:
        magic = f.read(4)
        if magic != SFT1_MAGIC:
            raise FormatError(f"{path}: bad magic {magic!r} at byte offset 0")
        header = f.read(12)
        if len(header) != 12:
            raise FormatError(f"{path}: truncated header at byte offset {4 + len(header)}")
        c, h, w = struct.unpack("<III", header)
        if min(c, h, w) < 1:
            raise FormatError(f"{path}: zero dimension in header at byte offset 4")
        n = c * h * w
        if n > _MAX_ELEMENTS:
            raise FormatError(f"{path}: dimension product {c}x{h}x{w} overflows sane size")
        payload = f.read(8 * n)
        if len(payload) != 8 * n:
            raise FormatError(
                f"{path}: payload truncated at byte offset {16 + len(payload)}, "
                f"expected {8 * n} bytes"
            )
        if f.read(1):
            raise FormatError(f"{path}: trailing bytes at byte offset {16 + 8 * n}")
    data = np.frombuffer(payload, dtype="<f8").reshape(c, h, w)
    return Tensor(data.astype(np.float64))


# ---------------------------------------------------------------------------
# grayscale image I/O
# ---------------------------------------------------------------------------

def _pgm_read(path):
    with open(path, "rb") as f:
        raw = f.read()
    if raw[:2] != b"P5":
        raise FormatError(f"{path}: unsupported netpbm type {raw[:2]!r}, only P5 is supported")

    # header tokens: P5, width, height, maxval; '#' starts a comment line
    pos = 2
    tokens = []
    while len(tokens) < 3:
        while pos < len(raw) and raw[pos:pos + 1].isspace():
            pos += 1
        if pos < len(raw) and raw[pos:pos + 1] == b"#":
            while pos < len(raw) and raw[pos] != 0x0A:
                pos += 1
            continue
        start = pos
        while pos < len(raw) and not raw[pos:pos + 1].isspace():
            pos += 1
        if start == pos:
            raise FormatError(f"{path}: truncated PGM header at byte offset {pos}")
        tokens.append(raw[start:pos])
    pos += 1  # single whitespace after maxval
    try:
        width, height, maxval = (int(v) for v in tokens)
    except ValueError:
        raise FormatError(f"{path}: non-numeric PGM header field") from None
    if maxval == 255:
        dtype, scale = np.uint8, 255.0
    elif maxval == 65535:
        dtype, scale = ">u2", 65535.0
    else:
        raise FormatError(f"{path}: unsupported PGM maxval {maxval}, need 255 or 65535")
    n = width * height
    itemsize = np.dtype(dtype).itemsize
    pixels = raw[pos:pos + n * itemsize]
    if len(pixels) != n * itemsize:
        raise FormatError(f"{path}: PGM pixel data truncated at byte offset {pos + len(pixels)}")
    img = np.frombuffer(pixels, dtype=dtype).reshape(height, width)
    return img.astype(np.float64) / scale


def _pgm_write(arr01, path, bits):
    maxval = (1 << bits) - 1
    q = np.rint(arr01 * maxval)
    header = f"P5\n{arr01.shape[1]} {arr01.shape[0]}\n{maxval}\n".encode("ascii")
    if bits == 8:
        body = q.astype(np.uint8).tobytes()
    else:
        body = q.astype(">u2").tobytes()
    with atomic_write(path) as f:
        f.write(header)
        f.write(body)


def _png_read(path):
    from PIL import Image

    with Image.open(path) as im:
        mode = im.mode
        if mode == "L":
            scale = 255.0
        elif mode in ("I", "I;16", "I;16B"):
            scale = 65535.0
        else:
            raise FormatError(f"{path}: unsupported PNG color type {mode!r}, need 8/16-bit grayscale")
        arr = np.asarray(im, dtype=np.float64)
    return arr / scale


def _png_write(arr01, path, bits):
    from PIL import Image

    maxval = (1 << bits) - 1
    q = np.rint(arr01 * maxval)
    if bits == 8:
        im = Image.fromarray(q.astype(np.uint8))
    else:
        im = Image.fromarray(q.astype(np.uint16))
    with atomic_write(path) as f:
        im.save(f, format="PNG")


def image_read_gray(path) -> Tensor:
    """Read an 8/16-bit grayscale PGM or PNG into a 1xHxW tensor in [0,1]."""
    path = os.fspath(path)
    if path.lower().endswith(".png"):
        arr = _png_read(path)
    else:
        arr = _pgm_read(path)
    return Tensor(arr[np.newaxis])


def image_write_gray(t: Tensor, path, bits: int = 8) -> None:
    """Write a 1xHxW tensor as a grayscale image, clamping to [0,1] first.

    Clamping rather than erroring: inverse-transform residue can leave
    values marginally outside the unit range.
    """
    if t.channels != 1:
        raise ParameterError(f"image_write_gray needs a single-channel tensor, got {t.channels}")
    if bits not in (8, 16):
        raise ParameterError(f"bits must be 8 or 16, got {bits}")
    arr = np.clip(t.data[0], 0.0, 1.0)
    path = os.fspath(path)
    if path.lower().endswith(".png"):
        _png_write(arr, path, bits)
    else:
        _pgm_write(arr, path, bits)


# ---------------------------------------------------------------------------
# shared runtime helpers
# ---------------------------------------------------------------------------

@contextmanager
def atomic_write(path):
    """Write to a temp file in the destination directory, rename on success.

    On any failure the destination is left untouched and the temp file is
    removed, so partial artifacts never appear under the target name.
    """
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(prefix=os.path.basename(path) + ".", dir=directory)
    try:
        with os.fdopen(fd, "wb") as f:
            yield f
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def thread_count() -> int:
    """Worker count for data-parallel stages; FREQFEAT_THREADS overrides."""
    env = os.environ.get("FREQFEAT_THREADS")
    if env:
        n = int(env)
        if n < 1:
            raise ParameterError(f"FREQFEAT_THREADS must be >= 1, got {n}")
        return n
    return os.cpu_count() or 1


def parallel_map(fn, items):
    """Map fn over items, preserving input order in the result list.

    Work may execute on a thread pool (size from thread_count()); results
    are identical to a serial map because every fn call is pure.
    """
    items = list(items)
    workers = min(thread_count(), max(len(items), 1))
    if workers <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
