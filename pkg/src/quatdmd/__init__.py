"""Quaternion linear algebra and dynamic mode decomposition.

Color video is treated as a sequence of pure-quaternion matrices (one RGB
pixel per quaternion entry), decomposed by a quaternion variant of dynamic
mode decomposition into a static background mode and moving foreground
content.
"""

from .errors import (
    EigenPairingError,
    InsufficientDataError,
    LogSingularityError,
    MalformedAdjointError,
    NonDiagonalizableError,
    NonPrincipalLogError,
    QuatDmdError,
    RankError,
    SequenceLoadError,
    ShapeMismatchError,
)
from .quaternion import Quaternion, conjugate, exp, inverse, log, multiply, norm
from .qmatrix import QuaternionMatrix, complex_adjoint, from_adjoint
from .qlinalg import (
    QEigen,
    Qsvd,
    pseudoinverse,
    qsvd,
    spectral_decomposition,
    standard_eigen,
)
from .dmd import ExactDMD, dmd_reconstruct, exact_dmd
from .qdmd import QuaternionDMD, Separation, qdmd_fit, qdmd_reconstruct, separate
from .video import (
    DecodedFrame,
    FrameStack,
    decode_column,
    decode_image,
    downsample,
    encode_frames,
    frames_array,
    load_image,
    load_sequence,
    trim_static_margins,
    write_png,
)
from .metrics import (
    MetricsReport,
    age,
    cqm,
    evaluate_pair,
    msssim,
    pceps,
    peps,
    psnr,
)
from .background import BackgroundResult, dmd_on_video, qdmd_background

__version__ = "0.1.0"

__all__ = [
    "Quaternion",
    "multiply",
    "conjugate",
    "norm",
    "inverse",
    "exp",
    "log",
    "QuaternionMatrix",
    "complex_adjoint",
    "from_adjoint",
    "Qsvd",
    "qsvd",
    "pseudoinverse",
    "QEigen",
    "standard_eigen",
    "spectral_decomposition",
    "ExactDMD",
    "exact_dmd",
    "dmd_reconstruct",
    "QuaternionDMD",
    "Separation",
    "qdmd_fit",
    "qdmd_reconstruct",
    "separate",
    "FrameStack",
    "DecodedFrame",
    "encode_frames",
    "frames_array",
    "load_image",
    "load_sequence",
    "write_png",
    "decode_image",
    "decode_column",
    "downsample",
    "trim_static_margins",
    "MetricsReport",
    "evaluate_pair",
    "age",
    "peps",
    "pceps",
    "msssim",
    "psnr",
    "cqm",
    "BackgroundResult",
    "qdmd_background",
    "dmd_on_video",
    "QuatDmdError",
    "ShapeMismatchError",
    "MalformedAdjointError",
    "NonPrincipalLogError",
    "EigenPairingError",
    "NonDiagonalizableError",
    "RankError",
    "InsufficientDataError",
    "LogSingularityError",
    "SequenceLoadError",
    "__version__",
]
