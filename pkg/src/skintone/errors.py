"""Exception hierarchy shared across the toolkit."""


class SkinToneError(Exception):
    """Base class for all toolkit errors."""


class DimensionMismatchError(SkinToneError):
    """Mask and image dimensions differ."""


class EmptyMaskError(SkinToneError):
    """A mask that must select at least one pixel selects none."""


class MaskFormatError(SkinToneError):
    """Mask file violates the 0/255 grayscale PNG contract."""


class ZeroChannelMeanError(SkinToneError):
    """A background channel mean of zero makes the correction factor undefined."""


class DegenerateSegmentationError(SkinToneError):
    """The heuristic background segmentation is unreliable for this image."""


class NoSkinPixelsError(SkinToneError):
    """No pixel survived the chroma skin filter; occlusion or exposure failure."""


class InvalidRatingError(SkinToneError):
    """Fitzpatrick rating outside 1..6."""


class NoOverlapError(SkinToneError):
    """Two raters share no co-rated images."""
