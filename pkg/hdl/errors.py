class HDLError(Exception):
    pass

class HeatmapError(HDLError):
    """
    A grid that cannot be a heatmap: empty, non-finite, or malformed on disk.
    """

class DimensionMismatchError(HeatmapError):
    pass

class DegenerateBiasError(HDLError):
    """
    The softmax partition value does not exceed h*w, so the bias cannot be inverted.
    Usually beta is too small or the heatmap is too flat (or negative).
    """

class ConfigError(HDLError):
    pass

class VerificationError(HDLError):
    pass

class RecordError(HDLError):
    """
    A malformed annotation or prediction record.
    """
