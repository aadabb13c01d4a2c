"""
Array field types shared by the toolkit's pydantic models.

Models hold numpy arrays directly; these annotated aliases coerce lists and
tuples on construction so that models can be rebuilt from JSON.
"""

from typing import Annotated, Any

import numpy as np
from pydantic import BeforeValidator


def _as_float_array(value: Any) -> np.ndarray:
    return np.asarray(value, dtype=float)


def _as_complex_array(value: Any) -> np.ndarray:
    return np.asarray(value, dtype=complex)


def _as_int_array(value: Any) -> np.ndarray:
    return np.asarray(value, dtype=int)


FloatArray = Annotated[np.ndarray, BeforeValidator(_as_float_array)]
ComplexArray = Annotated[np.ndarray, BeforeValidator(_as_complex_array)]
IntArray = Annotated[np.ndarray, BeforeValidator(_as_int_array)]


def label_string(label) -> str:
    """Render an occupation tuple such as (1, 0, 0, 0) as "1000"."""
    return "".join(str(int(n)) for n in label)
