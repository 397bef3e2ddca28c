"""Command-line front end.

One subcommand per library operation family; see `freqfeat --help`.
Inputs and outputs dispatch on extension: .sft is the raw tensor format,
.pgm / .png are grayscale images (image writes clamp to [0,1]).  Output
files are written to a temp name and renamed on success, so a failed run
never leaves a partial artifact.  FREQFEAT_THREADS caps data-parallel
stages (default: all cores); results do not depend on it.
"""

import argparse
import json
import os
import shlex
import sys

import numpy as np

from . import __version__
from .core import (Tensor, atomic_write, image_read_gray, image_write_gray,
                   parallel_map, tensor_read, tensor_write)
from .csf import (PRESETS, bandlimit, csf_sweep,
                  energy_retention_scorer, hvs_csf, subprocess_scorer)
from .errors import FreqfeatError, ParameterError
from .fourier import CutoffSpec, spf_mix, spf_split, SpectralMixParams
from .metrics import mean_scores, metric_dice, metric_iou, metric_mae
from .pfb import (_Lcg, pfb_forward, weights_identity, weights_load,
                  weights_save, weights_seeded)
from .svg import line_plot
from .synth import write_demo_images
from .wasf import WasfParams, wasf_forward
from .wavelet import (BANDS, DwtConvParams, WaveletPyramid, dwt_pyramid,
                      dwtconv, idwt_pyramid)

IMAGE_EXTS = (".pgm", ".png")


def _read_any(path) -> Tensor:
    if path.lower().endswith(".sft"):
        return tensor_read(path)
    if path.lower().endswith(IMAGE_EXTS):
        return image_read_gray(path)
    raise ParameterError(f"{path}: unknown input extension (use .sft, .pgm, or .png)")


def _write_any(t: Tensor, path, bits=8) -> None:
    if path.lower().endswith(".sft"):
        tensor_write(t, path)
    elif path.lower().endswith(IMAGE_EXTS):
        image_write_gray(t, path, bits=bits)
    else:
        raise ParameterError(f"{path}: unknown output extension (use .sft, .pgm, or .png)")


def _ints(text):
    return tuple(int(v) for v in text.split(","))


def _floats(text):
    return tuple(float(v) for v in text.split(","))


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------

def _cmd_filter(args) -> int:
    t = _read_any(args.input)
    out = bandlimit(t, CutoffSpec(args.radius_fraction))
    _write_any(out, args.output, bits=args.bits)
    return 0


def _cmd_split(args) -> int:
    t = _read_any(args.input)
    low, high = spf_split(t, args.radius)
    _write_any(low, args.low, bits=args.bits)
    _write_any(high, args.high, bits=args.bits)
    return 0


def _cmd_mix(args) -> int:
    t = _read_any(args.input)
    out = spf_mix(t, SpectralMixParams(args.lam, args.radius))
    _write_any(out, args.output, bits=args.bits)
    return 0


def _manifest_path(prefix):
    return f"{prefix}.manifest.json"


def _cmd_dwt(args) -> int:
    t = _read_any(args.input)
    if t.channels != 1:
        raise ParameterError("dwt works on single-channel inputs")
    p = dwt_pyramid(t, args.depth)
    for level, sub in enumerate(p.subbands, start=1):
        for b, name in enumerate(BANDS):
            tensor_write(Tensor(sub[b][np.newaxis]),
                         f"{args.out_prefix}.L{level}.{name}.sft")
    manifest = {
        "depth": p.depth,
        "input_shapes": [list(s) for s in p.input_shapes],
    }
    with atomic_write(_manifest_path(args.out_prefix)) as f:
        f.write(json.dumps(manifest, sort_keys=True).encode("ascii"))
    return 0


def _cmd_idwt(args) -> int:
    with open(_manifest_path(args.in_prefix)) as f:
        manifest = json.load(f)
    depth = int(manifest["depth"])
    shapes = tuple(tuple(s) for s in manifest["input_shapes"])
    levels = []
    for level in range(1, depth + 1):
        sub = np.stack([
            tensor_read(f"{args.in_prefix}.L{level}.{name}.sft").data[0]
            for name in BANDS
        ])
        levels.append(sub)
    out = idwt_pyramid(WaveletPyramid(tuple(levels), shapes))
    _write_any(out, args.output, bits=args.bits)
    return 0


def _seeded_dwt_params(seed, depth, kernel_size):
    rng = _Lcg(seed)
    sub = rng.array((depth, 4, kernel_size, kernel_size))
    resid = rng.array((kernel_size, kernel_size))
    return DwtConvParams(sub, resid), rng


def _cmd_dwtconv(args) -> int:
    if args.seed is None:
        params = DwtConvParams.identity(args.depth, args.kernel_size)
    else:
        params, _ = _seeded_dwt_params(args.seed, args.depth, args.kernel_size)
    out = dwtconv(_read_any(args.input), params)
    _write_any(out, args.output, bits=args.bits)
    return 0


def _cmd_wasf(args) -> int:
    if args.seed is None:
        params = WasfParams.identity(
            n=args.n, lam=args.lam, sep_kernel_len=args.sep_len,
            dwt=DwtConvParams.identity(args.depth, args.kernel_size),
        )
    else:
        dwt, rng = _seeded_dwt_params(args.seed, args.depth, args.kernel_size)
        params = WasfParams(
            n=args.n, lam=args.lam, dwt=dwt,
            sep_row=rng.array((args.sep_len,)),
            sep_col=rng.array((args.sep_len,)),
        )
    out = wasf_forward(_read_any(args.input), params)
    _write_any(out, args.output, bits=args.bits)
    return 0


def _cmd_pfb_init(args) -> int:
    if args.identity:
        w = weights_identity(args.in_channels, args.mid_channels,
                             radius_exponents=args.radius_exponents)
    else:
        if args.seed is None:
            raise ParameterError("pfb init needs --seed (or --identity)")
        w = weights_seeded(args.seed, args.in_channels, args.mid_channels,
                           args.out_channels,
                           radius_exponents=args.radius_exponents,
                           nonlinearity=args.nonlinearity)
    weights_save(w, args.weights)
    return 0


def _cmd_pfb_forward(args) -> int:
    w = weights_load(args.weights)
    out = pfb_forward(_read_any(args.input), w)
    _write_any(out, args.output, bits=args.bits)
    return 0


def _cmd_csf_model(args) -> int:
    params = PRESETS[args.preset]
    if args.f is not None:
        print(f"{hvs_csf(args.f, params):.10g}")
        return 0
    freqs = [round(i * args.step, 10) for i in range(int(args.fmax / args.step) + 1)]
    points = [(f, hvs_csf(f, params)) for f in freqs]
    if args.csv:
        with atomic_write(args.csv) as f:
            text = "f,sensitivity\n" + "".join(
                f"{x:.12g},{y:.12g}\n" for x, y in points
            )
            f.write(text.encode("ascii"))
    if args.svg:
        markup = line_plot(points, xlabel="spatial frequency",
                           ylabel="sensitivity", title=f"model {args.preset}")
        with atomic_write(args.svg) as f:
            f.write(markup.encode("ascii"))
    if not args.csv and not args.svg:
        for x, y in points:
            print(f"{x:.12g},{y:.12g}")
    return 0


def _list_images(directory):
    names = sorted(
        n for n in os.listdir(directory) if n.lower().endswith(IMAGE_EXTS)
    )
    if not names:
        raise ParameterError(f"{directory}: no .pgm or .png images found")
    return [os.path.join(directory, n) for n in names]


def _cmd_csf_sweep(args) -> int:
    paths = _list_images(args.images)
    images = parallel_map(image_read_gray, paths)
    dataset = [(img, img) for img in images]  # targets: the originals
    if args.scorer_cmd:
        scorer = subprocess_scorer(shlex.split(args.scorer_cmd))
    else:
        scorer = energy_retention_scorer
    cutoffs = [CutoffSpec(f) for f in args.cutoffs]
    curve = csf_sweep(dataset, scorer, cutoffs, label=args.label)
    if args.csv:
        curve.write_csv(args.csv)
    if args.svg:
        curve.write_svg(args.svg)
    if not args.csv and not args.svg:
        for f, s in curve.points:
            print(f"{f:.12g},{s:.12g}")
    return 0


def _metric_row(pair):
    name, pred_path, gt_path = pair
    pred = image_read_gray(pred_path).data[0]
    gt = (image_read_gray(gt_path).data[0] >= 0.5).astype(np.float64)
    return (name, metric_iou(pred, gt), metric_dice(pred, gt), metric_mae(pred, gt))


def _cmd_metrics(args) -> int:
    if args.pred and args.gt:
        pairs = [(os.path.basename(args.pred), args.pred, args.gt)]
    elif args.pred_dir and args.gt_dir:
        preds = {os.path.basename(p): p for p in _list_images(args.pred_dir)}
        gts = {os.path.basename(p): p for p in _list_images(args.gt_dir)}
        common = sorted(set(preds) & set(gts))
        if not common:
            raise ParameterError("prediction and ground-truth directories share no filenames")
        pairs = [(n, preds[n], gts[n]) for n in common]
    else:
        raise ParameterError("metrics needs --pred/--gt or --pred-dir/--gt-dir")

    rows = parallel_map(_metric_row, pairs)
    means = mean_scores([(r[1], r[2], r[3]) for r in rows])
    lines = ["name,iou,dice,mae"]
    lines += [f"{n},{i:.12g},{d:.12g},{m:.12g}" for n, i, d, m in rows]
    lines.append(f"mean,{means[0]:.12g},{means[1]:.12g},{means[2]:.12g}")
    text = "\n".join(lines) + "\n"
    if args.csv:
        with atomic_write(args.csv) as f:
            f.write(text.encode("ascii"))
    else:
        sys.stdout.write(text)
    return 0


def _cmd_synth(args) -> int:
    write_demo_images(args.outdir, count=args.count, size=args.size)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_io(p):
    p.add_argument("input", help="input file (.sft, .pgm, .png)")
    p.add_argument("output", help="output file (.sft, .pgm, .png)")
    p.add_argument("--bits", type=int, default=8, choices=(8, 16),
                   help="bit depth for image outputs")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="freqfeat",
        description="Frequency-domain image feature toolkit",
    )
    top.add_argument("--version", action="version", version=f"freqfeat {__version__}")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("filter", help="circular low-pass at a fractional cutoff")
    p.add_argument("--radius-fraction", type=float, required=True,
                   help="cutoff radius as a fraction of min(H,W)/2, in (0,1]")
    _add_io(p)
    p.set_defaults(fn=_cmd_filter)

    p = sub.add_parser("split", help="split into low/high frequency parts")
    p.add_argument("--radius", type=float, required=True,
                   help="low-frequency disk radius in bins")
    p.add_argument("input")
    p.add_argument("--low", required=True, help="output path for the low part")
    p.add_argument("--high", required=True, help="output path for the high part")
    p.add_argument("--bits", type=int, default=8, choices=(8, 16))
    p.set_defaults(fn=_cmd_split)

    p = sub.add_parser("mix", help="blend low/high frequency parts with weight lambda")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--radius", type=float, required=True)
    _add_io(p)
    p.set_defaults(fn=_cmd_mix)

    p = sub.add_parser("dwt", help="wavelet-analyze into per-level subband .sft files")
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("input")
    p.add_argument("--out-prefix", required=True)
    p.set_defaults(fn=_cmd_dwt)

    p = sub.add_parser("idwt", help="reconstruct from subband .sft files")
    p.add_argument("--in-prefix", required=True)
    p.add_argument("output")
    p.add_argument("--bits", type=int, default=8, choices=(8, 16))
    p.set_defaults(fn=_cmd_idwt)

    p = sub.add_parser("dwtconv", help="cascaded wavelet convolution")
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--kernel-size", type=int, default=3)
    p.add_argument("--seed", type=int, default=None,
                   help="draw random kernels; identity kernels when omitted")
    _add_io(p)
    p.set_defaults(fn=_cmd_dwtconv)

    p = sub.add_parser("wasf", help="wavelet-adaptive spectral fusion forward pass")
    p.add_argument("--n", type=int, required=True, help="radius exponent (radius 2^n)")
    p.add_argument("--lambda", dest="lam", type=float, default=0.5)
    p.add_argument("--sep-len", type=int, default=3)
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--kernel-size", type=int, default=3)
    p.add_argument("--seed", type=int, default=None)
    _add_io(p)
    p.set_defaults(fn=_cmd_wasf)

    p_pfb = sub.add_parser("pfb", help="perception frequency block")
    pfb_sub = p_pfb.add_subparsers(dest="pfb_command", required=True)

    p = pfb_sub.add_parser("init", help="create and save a weight bundle")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--identity", action="store_true",
                   help="identity-configured weights instead of seeded ones")
    p.add_argument("--weights", required=True, help="output .pfbw path")
    p.add_argument("--in-channels", type=int, default=3)
    p.add_argument("--mid-channels", type=int, default=64)
    p.add_argument("--out-channels", type=int, default=None)
    p.add_argument("--radius-exponents", type=_ints, default=(1, 2, 3, 4),
                   help="comma list of four radius exponents")
    p.add_argument("--nonlinearity", choices=("none", "relu"), default="relu")
    p.set_defaults(fn=_cmd_pfb_init)

    p = pfb_sub.add_parser("forward", help="run the block on a tensor")
    p.add_argument("--weights", required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", required=True)
    p.add_argument("--bits", type=int, default=8, choices=(8, 16))
    p.set_defaults(fn=_cmd_pfb_forward)

    p_csf = sub.add_parser("csf", help="contrast sensitivity tools")
    csf_sub = p_csf.add_subparsers(dest="csf_command", required=True)

    p = csf_sub.add_parser("model", help="evaluate the analytic sensitivity model")
    p.add_argument("--preset", choices=sorted(PRESETS), default="classic")
    p.add_argument("--f", type=float, default=None, help="single frequency to evaluate")
    p.add_argument("--fmax", type=float, default=60.0)
    p.add_argument("--step", type=float, default=0.1)
    p.add_argument("--csv", default=None)
    p.add_argument("--svg", default=None)
    p.set_defaults(fn=_cmd_csf_model)

    p = csf_sub.add_parser("sweep", help="measure a scorer's frequency sensitivity")
    p.add_argument("--images", required=True, help="directory of .pgm/.png images")
    p.add_argument("--scorer", choices=("energy",), default="energy")
    p.add_argument("--scorer-cmd", default=None,
                   help="external scorer command; gets a directory of filtered "
                        "PGMs appended and must print one score")
    p.add_argument("--cutoffs", type=_floats, required=True,
                   help="comma list of radius fractions in (0,1]")
    p.add_argument("--csv", default=None)
    p.add_argument("--svg", default=None)
    p.add_argument("--label", default="sensitivity sweep")
    p.set_defaults(fn=_cmd_csf_sweep)

    p = sub.add_parser("metrics", help="IoU / Dice / MAE for prediction vs ground truth")
    p.add_argument("--pred", default=None)
    p.add_argument("--gt", default=None)
    p.add_argument("--pred-dir", default=None)
    p.add_argument("--gt-dir", default=None)
    p.add_argument("--csv", default=None, help="write CSV here instead of stdout")
    p.set_defaults(fn=_cmd_metrics)

    p = sub.add_parser("synth", help="write deterministic synthetic test images")
    p.add_argument("--outdir", required=True)
    p.add_argument("--count", type=int, default=8)
    p.add_argument("--size", type=int, default=64)
    p.set_defaults(fn=_cmd_synth)

    return top


def _apply_config(argv):
    """`--config FILE` before the subcommand maps key=value lines onto
    long flags, inserted ahead of explicit arguments so the command line
    still wins."""
    if not argv:
        return argv
    if argv[0] != "--config" and not argv[0].startswith("--config="):
        return argv
    if argv[0] == "--config":
        if len(argv) < 2:
            raise ParameterError("--config needs a file argument")
        path, rest = argv[1], argv[2:]
    else:
        path, rest = argv[0].split("=", 1)[1], argv[1:]
    if not rest:
        raise ParameterError("--config must be followed by a subcommand")
    flags = []
    with open(path) as f:
        for line in f:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ParameterError(f"{path}: config lines must be key=value, got {line!r}")
            key, value = line.split("=", 1)
            flags += [f"--{key.strip()}", value.strip()]
    return rest[:1] + flags + rest[1:]


def run(argv) -> int:
    """Parse and execute; returns the process exit status."""
    parser = build_parser()
    try:
        argv = _apply_config(list(argv))
        args = parser.parse_args(argv)
        return args.fn(args)
    except (FreqfeatError, OSError, ValueError) as exc:
        print(f"freqfeat: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
