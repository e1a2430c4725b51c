"""
Exception hierarchy for the workbench
"""


class WorkbenchError(ValueError):
    """Base class for every error raised by the numerical core"""


class RootOfUnityError(WorkbenchError):
    """Unsupported (N, n) pair or a q that is not a primitive n-th root of unity"""


class DimensionCapError(WorkbenchError):
    """A tensor product would exceed the configured dimension cap"""

    def __init__(self, dim: int, cap: int):
        super().__init__(f"tensor dimension {dim} exceeds cap {cap}")
        self.dim = dim
        self.cap = cap


class ParameterError(WorkbenchError):
    """Zero or degenerate parameters, off-curve rapidities, poles"""


class BoundaryError(WorkbenchError):
    """Boundary twists or sector labels that violate the required congruences"""


class EigenSolverError(WorkbenchError):
    """Eigen-decomposition failed or produced unusable eigenvectors"""
