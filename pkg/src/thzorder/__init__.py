"""Derivative-order classification of terahertz Gaussian pulses at a ULA.

Pipeline: pulse synthesis, THz channel with molecular absorption noise,
array reception, IMUSIC direction finding, PSD reconstruction and
RMS-frequency-spread classification, plus a Monte Carlo TPR harness.
"""

from .array import (ArrayConfig, CovarianceEstimate, FrequencyGrid, SnapshotMatrix, analytic_covariance,
                    build_frequency_grid, element_delay, sample_covariance, steering_vector,
                    synthesize_snapshots)
from .channel import (AbsorptionTable, ChannelParams, absorption_coefficient, absorption_loss,
                      background_noise_psd, channel_response, load_absorption_csv,
                      molecular_noise_temperature, noise_variance_per_bin, resolve_absorption,
                      save_absorption_csv, self_noise_psd, spreading_loss, synthetic_absorption_table,
                      total_noise_psd)
from .classifier import (ClassificationResult, PsdEstimate, ReferenceTable, build_reference_table,
                         classify_order, estimate_psd, rms_spread_estimate)
from .doa import AngleGrid, MusicSpectrum, estimate_doa, imusic_spectrum, noise_subspace
from .errors import (AbsorptionFormatError, AbsorptionRangeError, ConfigurationError,
                     DegenerateInputError, NonHermitianError)
from .experiment import TprReport, TrialConfig, emit_report, run_trial, tpr_sweep
from .kernels import BACKEND
from .pulse import (BandDescriptor, PulseSpec, analytic_rms_spread, half_power_band,
                    normalization_constant, pulse_spectrum, sigma_from_center)

__version__ = "0.1.0"
