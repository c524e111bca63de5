"""Level-set segmentation of speckled images."""

from ._core import (
    ConfigError,
    IoError,
    NumericFailure,
    config,
    count_boundary_contours,
    dice,
    div_adjoint,
    gamma_speckle,
    grad_forward,
    laplacian,
    make_phantom,
    params_digest,
    phantom_image,
    pp_uniformity,
    read_image,
    segment,
    write_pgm,
)

ALGORITHMS = ("rdls", "sbrd", "fprd1", "fprd2")

__all__ = [
    "ALGORITHMS",
    "ConfigError",
    "IoError",
    "NumericFailure",
    "config",
    "count_boundary_contours",
    "dice",
    "div_adjoint",
    "gamma_speckle",
    "grad_forward",
    "laplacian",
    "make_phantom",
    "params_digest",
    "phantom_image",
    "pp_uniformity",
    "read_image",
    "segment",
    "write_pgm",
]
