"""platelab: exact Fourier-space evaluation of u_tt + (-Laplace)^sigma u = 0.

Computes L2 norms, energies and frequency splits of the dispersive flow
for closed-form polynomial-times-Gaussian data, fits growth laws to norm
trajectories, and verifies explicit growth/boundedness bounds as
executable scenarios.
"""

from ._core import BACKEND as core_backend
from .model import (DataCombo, DataError, Dipole, Gaussian, LapGaussian,
                    Moments, Problem, TensorDipole, ZERO, build_data,
                    l1_norm, l1_weighted_norm, l2_norm_data, moments)
from .spectra import (PolyGaussFourier, PolyGaussRadial, SpectralProfiles,
                      angular_cross, cross_profile, fourier_profile,
                      spectral_profiles, sup_fourier_bound)
from .propagator import (KernelPair, antiderivative_density,
                         displacement_density, kernels, velocity_density)
from .quadrature import (OscillatorySplit, PowerGauss, QuadConfig,
                         QuadratureError, integrate_radial, oscillation_nodes,
                         tensor_oracle)
from .analysis import (Classification, FitResult, GrowthClassificationError,
                       NormSeries, classify_growth, fit_log, fit_power,
                       frequency_split, high_dim_upper_bound,
                       low_freq_lower_bound, norm_series, solution_l2_sq,
                       total_energy, antiderivative_identity_residual)
from .scenarios import (SCENARIOS, SweepCell, VerificationReport, run_all,
                        run_scenario, sigma_sweep)

__version__ = "0.1.0"
