"""freqfeat: frequency-domain image feature toolkit.

Spectral pooling filters (low/high split and balanced mixing), cascaded
wavelet convolution, the wavelet-adaptive spectral fusion operator, the
perception frequency block forward pass, a contrast-sensitivity
measurement harness, and segmentation losses/metrics.  Double precision
throughout; every operation is a pure function over immutable values.
"""

__version__ = "0.1.0"

from .core import (Mask, Spectrum, Tensor, image_read_gray, image_write_gray,
                   tensor_read, tensor_write)
from .csf import (CLASSIC, PAPER_LITERAL, CsfCurve, CsfModelParams, bandlimit,
                  bandlimit_mask, csf_sweep, energy_retention_scorer, hvs_csf,
                  hvs_csf_xy, subprocess_scorer)
from .errors import (FormatError, FreqfeatError, NumericalError,
                     ParameterError, ScorerError, StateError)
from .fourier import (CutoffSpec, SpectralMixParams, center, cutoff_mask,
                      dft2, idft2, radial_mask, spf_mix, spf_split, uncenter)
from .metrics import (loss_bce, loss_iou, loss_level, loss_total, metric_dice,
                      metric_iou, metric_mae)
from .pfb import (PfbBranch, PfbWeights, WeightBundle, pfb_forward,
                  weights_identity, weights_load, weights_save, weights_seeded)
from .wasf import WasfParams, wasf_forward
from .wavelet import (DwtConvParams, WaveletPyramid, dwt2, dwt_pyramid,
                      dwtconv, idwt2, idwt_pyramid)

__all__ = [
    "Tensor", "Spectrum", "Mask",
    "tensor_read", "tensor_write", "image_read_gray", "image_write_gray",
    "CutoffSpec", "SpectralMixParams", "dft2", "idft2", "center", "uncenter",
    "cutoff_mask", "radial_mask", "spf_split", "spf_mix",
    "DwtConvParams", "WaveletPyramid", "dwt2", "idwt2", "dwt_pyramid",
    "idwt_pyramid", "dwtconv",
    "WasfParams", "wasf_forward",
    "PfbBranch", "PfbWeights", "WeightBundle", "pfb_forward",
    "weights_seeded", "weights_identity", "weights_save", "weights_load",
    "CsfModelParams", "CsfCurve", "CLASSIC", "PAPER_LITERAL", "hvs_csf",
    "hvs_csf_xy", "bandlimit", "bandlimit_mask", "csf_sweep",
    "energy_retention_scorer", "subprocess_scorer",
    "loss_iou", "loss_bce", "loss_level", "loss_total",
    "metric_iou", "metric_dice", "metric_mae",
    "FreqfeatError", "FormatError", "ParameterError", "StateError",
    "NumericalError", "ScorerError",
]
