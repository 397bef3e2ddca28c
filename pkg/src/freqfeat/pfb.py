"""Perception frequency block: four parallel fusion branches with dilated
3x3 convolutions at rates 1/3/5/7, concatenation, 1x1 fusion, and a 1x1
shortcut with residual add.  Inference only; weights are seeded, identity,
or loaded from the PFBW container format.
"""

import struct
from dataclasses import dataclass
from io import BytesIO

import numpy as np

from .core import SFT1_MAGIC, Tensor, atomic_write
from .errors import FormatError, ParameterError
from .kernels import conv2d_multi
from .wasf import WasfParams, wasf_forward
from .wavelet import DwtConvParams

PFBW_MAGIC = b"PFBW"
DILATIONS = (1, 3, 5, 7)
DEFAULT_RADIUS_EXPONENTS = (1, 2, 3, 4)
DEFAULT_SEP_LENS = (3, 5, 7, 9)
NONLINEARITIES = ("none", "relu")


@dataclass(frozen=True)
class PfbBranch:
    """One branch: 1x1 projection, fusion operator, dilated 3x3 conv."""

    proj: np.ndarray      # (mid, in)
    wasf: WasfParams
    dilated: np.ndarray   # (mid, mid, 3, 3)
    dilation: int

    def __post_init__(self):
        proj = np.ascontiguousarray(self.proj, dtype=np.float64)
        dil = np.ascontiguousarray(self.dilated, dtype=np.float64)
        if proj.ndim != 2:
            raise ParameterError(f"projection kernel must be (mid, in), got {proj.shape}")
        mid = proj.shape[0]
        if dil.shape != (mid, mid, 3, 3):
            raise ParameterError(
                f"dilated kernel must be ({mid}, {mid}, 3, 3), got {dil.shape}"
            )
        proj.setflags(write=False)
        dil.setflags(write=False)
        object.__setattr__(self, "proj", proj)
        object.__setattr__(self, "dilated", dil)


@dataclass(frozen=True)
class PfbWeights:
    """Full parameter set for the block.

    `bias` is an optional per-output-channel offset added after the
    residual sum; it defaults to off (None) since the block is bias-free
    by design and bias-free keeps the forward pass linear.
    """

    branches: tuple
    fuse: np.ndarray       # (out, 4*mid)
    shortcut: np.ndarray   # (out, in)
    nonlinearity: str = "relu"
    bias: np.ndarray | None = None
    seed: int | None = None
    mode: str = "loaded"   # seeded | identity | loaded

    def __post_init__(self):
        if len(self.branches) != 4:
            raise ParameterError(f"block needs exactly 4 branches, got {len(self.branches)}")
        dils = tuple(b.dilation for b in self.branches)
        if dils != DILATIONS:
            raise ParameterError(f"branch dilations must be {DILATIONS}, got {dils}")
        if self.nonlinearity not in NONLINEARITIES:
            raise ParameterError(f"nonlinearity must be one of {NONLINEARITIES}")
        fuse = np.ascontiguousarray(self.fuse, dtype=np.float64)
        shortcut = np.ascontiguousarray(self.shortcut, dtype=np.float64)
        in_c = self.branches[0].proj.shape[1]
        mid_c = self.branches[0].proj.shape[0]
        for b in self.branches:
            if b.proj.shape != (mid_c, in_c):
                raise ParameterError("all branch projections must agree on channel counts")
        if fuse.ndim != 2 or fuse.shape[1] != 4 * mid_c:
            raise ParameterError(
                f"fuse kernel must be (out, {4 * mid_c}), got {fuse.shape}"
            )
        if shortcut.shape != (fuse.shape[0], in_c):
            raise ParameterError(
                f"shortcut kernel must be ({fuse.shape[0]}, {in_c}), got {shortcut.shape}"
            )
        fuse.setflags(write=False)
        shortcut.setflags(write=False)
        object.__setattr__(self, "fuse", fuse)
        object.__setattr__(self, "shortcut", shortcut)
        if self.bias is not None:
            bias = np.ascontiguousarray(self.bias, dtype=np.float64).ravel()
            if bias.size != fuse.shape[0]:
                raise ParameterError(
                    f"bias needs one value per output channel ({fuse.shape[0]}), got {bias.size}"
                )
            bias.setflags(write=False)
            object.__setattr__(self, "bias", bias)

    @property
    def in_channels(self) -> int:
        return self.branches[0].proj.shape[1]

    @property
    def mid_channels(self) -> int:
        return self.branches[0].proj.shape[0]

    @property
    def out_channels(self) -> int:
        return self.fuse.shape[0]


def _conv1x1(x: np.ndarray, k: np.ndarray) -> np.ndarray:
    return np.tensordot(k, x, axes=(1, 0))


def pfb_forward(t: Tensor, w: PfbWeights) -> Tensor:
    """Run the block on a (in_channels, H, W) tensor.

    Per branch: 1x1 projection to mid channels, fusion operator, 3x3 conv
    with the branch's dilation and matching padding (so spatial size is
    preserved).  Branch outputs are concatenated, fused to out channels by
    a 1x1 conv, added to the 1x1 shortcut of the input, and passed through
    the selected nonlinearity.
    """
    if t.channels != w.in_channels:
        raise ParameterError(
            f"input has {t.channels} channels, weights expect {w.in_channels}"
        )
    outs = []
    for b in w.branches:
        u = Tensor(_conv1x1(t.data, b.proj))
        u = wasf_forward(u, b.wasf)
        outs.append(conv2d_multi(u.data, b.dilated, dilation=b.dilation))
    cat = np.concatenate(outs, axis=0)
    y = _conv1x1(cat, w.fuse) + _conv1x1(t.data, w.shortcut)
    if w.bias is not None:
        y = y + w.bias[:, np.newaxis, np.newaxis]
    if w.nonlinearity == "relu":
        y = np.maximum(y, 0.0)
    return Tensor(y)


# ---------------------------------------------------------------------------
# deterministic seeded initialization
# ---------------------------------------------------------------------------
#
# 64-bit linear congruential generator, state' = (A*state + C) mod 2^64
# with A = 6364136223846793005, C = 1442695040888963407.  Each draw maps
# the new state to state / 2^64 in [0, 1) and then to [-0.1, 0.1).
# Identical on every platform; the first draw for a seed is
# -0.1 + 0.2 * ((A*seed + C) mod 2^64) / 2^64.

_LCG_A = 6364136223846793005
_LCG_C = 1442695040888963407
_LCG_MASK = (1 << 64) - 1


class _Lcg:
    def __init__(self, seed: int):
        self.state = seed & _LCG_MASK

    def draw(self) -> float:
        self.state = (_LCG_A * self.state + _LCG_C) & _LCG_MASK
        return -0.1 + 0.2 * (self.state / 2.0 ** 64)

    def array(self, shape) -> np.ndarray:
        out = np.empty(int(np.prod(shape)), dtype=np.float64)
        for i in range(out.size):
            out[i] = self.draw()
        return out.reshape(shape)


def _identity_wasf(n: int, lam: float, sep_len: int,
                   dwt_depth: int, dwt_kernel_size: int) -> WasfParams:
    return WasfParams.identity(
        n=n, lam=lam, sep_kernel_len=sep_len,
        dwt=DwtConvParams.identity(dwt_depth, dwt_kernel_size),
    )


def weights_seeded(seed: int, in_channels: int, mid_channels: int = 64,
                   out_channels: int | None = None, *,
                   radius_exponents=DEFAULT_RADIUS_EXPONENTS,
                   lambdas=(0.5, 0.5, 0.5, 0.5),
                   sep_lens=DEFAULT_SEP_LENS,
                   dwt_depth: int = 2, dwt_kernel_size: int = 3,
                   nonlinearity: str = "relu") -> PfbWeights:
    """Draw a complete weight bundle from the documented generator.

    Draw order is fixed: per branch in order, the projection kernel, the
    wavelet-stage kernels (level by level, LL/LH/HL/HH, then residual),
    the separable row and column kernels, the dilated kernel; then fuse,
    then shortcut.  All arrays fill row-major.
    """
    if out_channels is None:
        out_channels = in_channels
    if len(radius_exponents) != 4 or len(lambdas) != 4 or len(sep_lens) != 4:
        raise ParameterError("need one radius exponent, lambda, and separable length per branch")
    rng = _Lcg(seed)
    branches = []
    for j in range(4):
        proj = rng.array((mid_channels, in_channels))
        sub = rng.array((dwt_depth, 4, dwt_kernel_size, dwt_kernel_size))
        resid = rng.array((dwt_kernel_size, dwt_kernel_size))
        sep_row = rng.array((sep_lens[j],))
        sep_col = rng.array((sep_lens[j],))
        dil = rng.array((mid_channels, mid_channels, 3, 3))
        branches.append(PfbBranch(
            proj=proj,
            wasf=WasfParams(
                n=radius_exponents[j], lam=lambdas[j],
                dwt=DwtConvParams(sub, resid),
                sep_row=sep_row, sep_col=sep_col,
            ),
            dilated=dil,
            dilation=DILATIONS[j],
        ))
    fuse = rng.array((out_channels, 4 * mid_channels))
    shortcut = rng.array((out_channels, in_channels))
    return PfbWeights(tuple(branches), fuse, shortcut,
                      nonlinearity=nonlinearity, seed=seed, mode="seeded")


def weights_identity(channels: int, mid_channels: int = 64, *,
                     radius_exponents=DEFAULT_RADIUS_EXPONENTS,
                     sep_lens=DEFAULT_SEP_LENS,
                     dwt_depth: int = 2, dwt_kernel_size: int = 3) -> PfbWeights:
    """Bundle whose forward pass is the identity: zeroed branch paths,
    identity shortcut, no nonlinearity."""
    branches = []
    for j in range(4):
        branches.append(PfbBranch(
            proj=np.zeros((mid_channels, channels)),
            wasf=_identity_wasf(radius_exponents[j], 0.5, sep_lens[j],
                                dwt_depth, dwt_kernel_size),
            dilated=np.zeros((mid_channels, mid_channels, 3, 3)),
            dilation=DILATIONS[j],
        ))
    fuse = np.zeros((channels, 4 * mid_channels))
    shortcut = np.eye(channels)
    return PfbWeights(tuple(branches), fuse, shortcut,
                      nonlinearity="none", seed=None, mode="identity")


# ---------------------------------------------------------------------------
# PFBW container: "PFBW" | u32le entry count | entries of
# (u16le name length, UTF-8 name, embedded SFT1 tensor)
# ---------------------------------------------------------------------------

# the one optional entry: the per-channel bias vector, present only when set
_BIAS_NAME = "bias.vector"


def _entry_names() -> list:
    names = ["config.nonlinearity"]
    for j in range(1, 5):
        names += [
            f"branch{j}.proj.kernel",
            f"branch{j}.wasf.lambda",
            f"branch{j}.wasf.radius_exponent",
            f"branch{j}.wasf.dwt.kernels",
            f"branch{j}.wasf.sep.kernels",
            f"branch{j}.dilated.kernel",
        ]
    names += ["fuse.kernel", "shortcut.kernel"]
    return names


@dataclass(frozen=True)
class WeightBundle:
    """Flat named map of every parameter tensor in a PfbWeights, plus
    provenance metadata.  Exactly the required names, nothing else
    (bias.vector being the one optional entry)."""

    entries: dict
    seed: int | None = None
    mode: str = "loaded"

    def __post_init__(self):
        required = _entry_names()
        missing = [n for n in required if n not in self.entries]
        if missing:
            raise FormatError(f"weight bundle missing parameters: {', '.join(missing)}")
        extras = [n for n in self.entries if n not in required and n != _BIAS_NAME]
        if extras:
            raise FormatError(f"weight bundle has unknown parameters: {', '.join(extras)}")


def _scalar(v: float) -> Tensor:
    return Tensor(np.full((1, 1, 1), float(v)))


def bundle_from_weights(w: PfbWeights) -> WeightBundle:
    entries = {"config.nonlinearity": _scalar(NONLINEARITIES.index(w.nonlinearity))}
    for j, b in enumerate(w.branches, start=1):
        mid, in_c = b.proj.shape
        depth = b.wasf.dwt.depth
        ks = b.wasf.dwt.kernel_size
        dwt_k = np.concatenate([
            b.wasf.dwt.subband_kernels.reshape(4 * depth, ks, ks),
            b.wasf.dwt.residual_kernel[np.newaxis],
        ])
        sep = np.stack([b.wasf.sep_row, b.wasf.sep_col])[:, np.newaxis, :]
        entries[f"branch{j}.proj.kernel"] = Tensor(b.proj[np.newaxis])
        entries[f"branch{j}.wasf.lambda"] = _scalar(b.wasf.lam)
        entries[f"branch{j}.wasf.radius_exponent"] = _scalar(b.wasf.n)
        entries[f"branch{j}.wasf.dwt.kernels"] = Tensor(dwt_k)
        entries[f"branch{j}.wasf.sep.kernels"] = Tensor(sep)
        entries[f"branch{j}.dilated.kernel"] = Tensor(b.dilated.reshape(mid * mid, 3, 3))
    entries["fuse.kernel"] = Tensor(w.fuse[np.newaxis])
    entries["shortcut.kernel"] = Tensor(w.shortcut[np.newaxis])
    if w.bias is not None:
        entries[_BIAS_NAME] = Tensor(w.bias[np.newaxis, np.newaxis, :])
    return WeightBundle(entries, seed=w.seed, mode=w.mode)


def weights_from_bundle(b: WeightBundle) -> PfbWeights:
    def scalar(name):
        return float(b.entries[name].data[0, 0, 0])

    branches = []
    for j in range(1, 5):
        proj = b.entries[f"branch{j}.proj.kernel"].data[0]
        mid = proj.shape[0]
        dwt_k = b.entries[f"branch{j}.wasf.dwt.kernels"].data
        if (dwt_k.shape[0] - 1) % 4:
            raise FormatError(
                f"branch{j}.wasf.dwt.kernels holds {dwt_k.shape[0]} kernels, "
                "expected 4 * depth + 1"
            )
        depth = (dwt_k.shape[0] - 1) // 4
        ks = dwt_k.shape[1]
        dil = b.entries[f"branch{j}.dilated.kernel"].data
        if dil.shape[0] != mid * mid:
            raise FormatError(
                f"branch{j}.dilated.kernel holds {dil.shape[0]} planes, expected {mid * mid}"
            )
        sep = b.entries[f"branch{j}.wasf.sep.kernels"].data
        branches.append(PfbBranch(
            proj=proj,
            wasf=WasfParams(
                n=int(round(scalar(f"branch{j}.wasf.radius_exponent"))),
                lam=scalar(f"branch{j}.wasf.lambda"),
                dwt=DwtConvParams(dwt_k[:4 * depth].reshape(depth, 4, ks, ks), dwt_k[-1]),
                sep_row=sep[0, 0], sep_col=sep[1, 0],
            ),
            dilated=dil.reshape(mid, mid, 3, 3),
            dilation=DILATIONS[j - 1],
        ))
    nl_idx = int(round(float(b.entries["config.nonlinearity"].data[0, 0, 0])))
    if nl_idx not in (0, 1):
        raise FormatError(f"config.nonlinearity code {nl_idx} unknown")
    bias = None
    if _BIAS_NAME in b.entries:
        bias = b.entries[_BIAS_NAME].data.ravel()
    return PfbWeights(
        tuple(branches),
        fuse=b.entries["fuse.kernel"].data[0],
        shortcut=b.entries["shortcut.kernel"].data[0],
        nonlinearity=NONLINEARITIES[nl_idx],
        bias=bias,
        seed=b.seed, mode=b.mode,
    )


def _sft1_bytes(t: Tensor) -> bytes:
    buf = BytesIO()
    buf.write(SFT1_MAGIC)
    buf.write(struct.pack("<III", t.channels, t.height, t.width))
    buf.write(t.data.astype("<f8").tobytes())
    return buf.getvalue()


def weights_save(w: PfbWeights, path) -> None:
    """Write the PFBW container; entries in canonical order, so identical
    weights serialize to identical bytes."""
    bundle = bundle_from_weights(w)
    names = _entry_names()
    if _BIAS_NAME in bundle.entries:
        names = names + [_BIAS_NAME]
    with atomic_write(path) as f:
        f.write(PFBW_MAGIC)
        f.write(struct.pack("<I", len(names)))
        for name in names:
            raw = name.encode("utf-8")
            f.write(struct.pack("<H", len(raw)))
            f.write(raw)
            f.write(_sft1_bytes(bundle.entries[name]))


def _read_exact(f, n, path, what):
    raw = f.read(n)
    if len(raw) != n:
        raise FormatError(f"{path}: truncated while reading {what}")
    return raw


def weights_load(path) -> PfbWeights:
    """Read a PFBW container back; missing or unknown entries raise a
    FormatError naming them."""
    with open(path, "rb") as f:
        magic = f.read(4)
        if magic != PFBW_MAGIC:
            raise FormatError(f"{path}: bad magic {magic!r} at byte offset 0")
        (count,) = struct.unpack("<I", _read_exact(f, 4, path, "entry count"))
        entries = {}
        for _ in range(count):
            (name_len,) = struct.unpack("<H", _read_exact(f, 2, path, "name length"))
            name = _read_exact(f, name_len, path, "entry name").decode("utf-8")
            head = _read_exact(f, 16, path, f"header of {name!r}")
            if head[:4] != SFT1_MAGIC:
                raise FormatError(f"{path}: entry {name!r} is not an SFT1 tensor")
            c, h, wdt = struct.unpack("<III", head[4:])
            payload = _read_exact(f, 8 * c * h * wdt, path, f"payload of {name!r}")
            entries[name] = Tensor(
                np.frombuffer(payload, dtype="<f8").reshape(c, h, wdt).astype(np.float64)
            )
        if f.read(1):
            raise FormatError(f"{path}: trailing bytes after last entry")
    return weights_from_bundle(WeightBundle(entries, seed=None, mode="loaded"))
