"""Skin tone measurement toolkit.

Gray-card color correction, automated ITA-based skin tone rating, and
statistics over manual Fitzpatrick ratings.
"""

from .colorspace import ita, lab_to_rgb, rgb_to_lab, rgb_to_ycbcr
from .correction import (
    CorrectionFactors,
    apply_correction,
    background_mean,
    correct_image,
    correction_factors,
    segment_background_fallback,
)
from .ratings import (
    AgreementMatrix,
    ConsensusResult,
    DiffDistribution,
    RatingRecord,
    agreement,
    agreement_distribution,
    consensus,
    manual_vs_auto,
)
from .skin import (
    ItaRangeTable,
    SkinToneResult,
    SkinType,
    extract_skin_mask_fallback,
    mean_skin_pixel,
    rate_image,
    skin_pixel_filter,
)

__version__ = "0.1.0"
