"""Python bindings for the nilfrac C++ core."""

import os


def _pin_openblas_core():
    # Some OpenBLAS builds pick broken AVX-512 kernels on newer Xeons; the
    # SkylakeX kernels are correct there. Must happen before the library loads.
    if "OPENBLAS_CORETYPE" in os.environ:
        return
    try:
        with open("/proc/cpuinfo") as f:
            for line in f:
                if line.startswith("flags"):
                    if " avx512f" in line:
                        os.environ["OPENBLAS_CORETYPE"] = "SkylakeX"
                    break
    except OSError:
        pass


_pin_openblas_core()

from ._core import *  # noqa: E402,F401,F403
from ._core import NilfracError, run  # noqa: E402,F401

__all__ = [
    "AccuracyError",
    "CapacityError",
    "ConfigError",
    "DomainError",
    "EvaluationError",
    "NilfracError",
    "ShapeError",
    "dilate",
    "extension_constant",
    "extension_multiplier",
    "fourier_fractional",
    "fractional_power",
    "grid_coordinates",
    "group_inverse",
    "group_mul",
    "homogeneous_norm",
    "operator_matrix",
    "run",
    "spectrum",
]
