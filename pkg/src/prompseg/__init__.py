"""Unsupervised trajectory segmentation with probabilistic movement primitives."""

from .basis import BasisConfig, basis_centers, gaussian_basis_matrix
from .errors import (DegenerateScaleError, InsufficientPeaksError, InvalidInputError,
                     NumericalError)
from .gp_promp import (GpConfig, GpModel, conditional_trajectory, gp_fit, gp_predict,
                       rbf_kernel)
from .numerics import KMeansResult, Rng64, kmeans, pseudoinverse, sym_eig
from .promp import (ExtrapolationWarning, ProMP, SegmentedProMP, adapt_weights, fit_promp,
                    generate, learn_segmented, learn_weights, mse, reconstruct,
                    reconstruct_segmented)
from .segment import (Segmentation, SpectralConfig, affinity_matrix, delay_embed,
                      find_peaks, laplacian, peaks_to_intervals, segment_trajectory,
                      significant_peaks, spectral_clusters)
from .trajgen import Trajectory, TrajectoryConfig, generate_dynamic_trajectory, linspace

__version__ = "0.1.0"
