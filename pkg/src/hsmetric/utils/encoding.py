"Extended-real encoding shared by the JSON and CSV writers."

import math

CSV_DIGITS = 17


def encode_real(value: float) -> float | str:
    """
    Encode an extended real for JSON.

    Args:
        value: finite float or ±inf.

    Returns:
        The float itself, or "inf"/"-inf" for infinities.
    """
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if math.isnan(value):
        raise ValueError("NaN cannot be encoded")
    return float(value)


def decode_real(value: float | int | str) -> float:
    """Inverse of :func:`encode_real`."""
    if isinstance(value, str):
        if value in ("inf", "-inf"):
            return float(value)
        raise ValueError(f"Invalid extended real: {value!r}")
    return float(value)


def format_real(value: float) -> str:
    """Format a float for CSV with 17 significant digits (lossless)."""
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(float(value), f".{CSV_DIGITS}g")
