from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from .base_types import Variant
from .errors import AsymmetricMatrix, ConvergenceFailure, EmptyDimension, NegativeSpectrum


ASYMMETRY_TOLERANCE = 1e-12
NEGATIVE_TOLERANCE = 1e-10


@dataclass(frozen=True)
class SpectralDecomposition:
    """
    Ascending non-negative eigenvalues with orthonormal eigenvectors stored
    as columns.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __len__(self):
        return len(self.eigenvalues)


@dataclass(frozen=True)
class ProbabilityDistribution:
    rho: np.ndarray

    def __len__(self):
        return len(self.rho)


@dataclass(frozen=True)
class DFFValues:
    t: float
    variant: Optional[Variant]
    values: np.ndarray


def decompose(laplacian):
    """
    Full symmetric eigendecomposition of a Laplacian.

    Args:
        laplacian (LaplacianMatrix|numpy.ndarray):

    Returns:
        SpectralDecomposition
    """
    matrix = np.asarray(getattr(laplacian, "matrix", laplacian), dtype=float)
    n = matrix.shape[0]

    if n == 0:
        return SpectralDecomposition(np.zeros(0), np.zeros((0, 0)))

    norm = max(1.0, float(np.abs(matrix).max()))
    asymmetry = float(np.abs(matrix - matrix.T).max())
    if asymmetry >= ASYMMETRY_TOLERANCE * norm:
        raise AsymmetricMatrix(f"Laplacian asymmetry {asymmetry:.3e} exceeds tolerance")

    try:
        eigenvalues, eigenvectors = scipy.linalg.eigh((matrix + matrix.T) / 2)
    except np.linalg.LinAlgError as e:
        raise ConvergenceFailure(f"Eigensolver failed on a {n}x{n} matrix: {e}")

    if eigenvalues[0] < -NEGATIVE_TOLERANCE * norm:
        raise NegativeSpectrum(
            f"Smallest eigenvalue {eigenvalues[0]:.3e} of a {n}x{n} Laplacian is negative"
        )

    return SpectralDecomposition(np.clip(eigenvalues, 0.0, None), eigenvectors)


def probability_distribution(weights):
    """
    Normalize simplex weights into a probability distribution.

    Args:
        weights (SimplexWeights|sequence(float)):

    Returns:
        ProbabilityDistribution
    """
    z = np.asarray(getattr(weights, "weights", weights), dtype=float)

    if z.size == 0:
        raise EmptyDimension("Cannot build a distribution over zero simplices")

    if (z <= 0).any():
        raise ValueError("Simplex weights must be positive")

    return ProbabilityDistribution(z / z.sum())


def _heat_weights(eigenvalues, t):
    if t <= 0:
        raise ValueError(f"Diffusion time must be positive, got {t}")

    return np.exp(-2.0 * t * eigenvalues)


def diffusion_distance_sq(spec, i, j, t):
    """
    Squared diffusion distance between simplices i and j at time t.

    Args:
        spec (SpectralDecomposition):
        i (int):
        j (int):
        t (float):

    Returns:
        float
    """
    weights = _heat_weights(spec.eigenvalues, t)
    if i == j:
        return 0.0

    diff = spec.eigenvectors[i, :] - spec.eigenvectors[j, :]
    return float(np.sum(weights * diff * diff))


class FrechetFunction:
    """
    Diffusion Frechet function of one spectrum and distribution.

    The t-independent part, C[i, k] = sum_j rho_j (phi_k(i) - phi_k(j))^2, is
    computed once so each evaluation is a weighted row sum over k.
    """

    def __init__(self, spec, distribution, variant=None):
        """
        Args:
            spec (SpectralDecomposition):
            distribution (ProbabilityDistribution):
            variant (Variant): Recorded on the returned values
        """
        rho = np.asarray(getattr(distribution, "rho", distribution), dtype=float)
        if len(rho) != len(spec):
            raise ValueError(
                f"Distribution has {len(rho)} entries for {len(spec)} simplices"
            )

        self.spec = spec
        self.variant = Variant.parse(variant) if variant is not None else None

        phi = spec.eigenvectors
        if len(spec) <= 1:
            self._contributions = np.zeros((len(spec), len(spec)))
        else:
            mean = rho @ phi
            second_moment = rho @ (phi * phi)
            contributions = phi * phi - 2.0 * phi * mean[None, :] + second_moment[None, :]
            self._contributions = np.clip(contributions, 0.0, None)

    def __call__(self, t):
        """
        Args:
            t (float):

        Returns:
            DFFValues
        """
        weights = _heat_weights(self.spec.eigenvalues, t)
        values = (self._contributions * weights[None, :]).sum(axis=1)

        return DFFValues(float(t), self.variant, values)


def dff(spec, rho, t, variant=None):
    """
    Diffusion Frechet function on every simplex at time t.

    Args:
        spec (SpectralDecomposition):
        rho (ProbabilityDistribution):
        t (float):
        variant (Variant):

    Returns:
        DFFValues
    """
    return FrechetFunction(spec, rho, variant)(t)
