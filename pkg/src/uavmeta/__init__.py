"""Uplink SINR meta distribution of UAV-assisted networks with fractional power control."""

from .analytic import (MomentSet, beta_approximation, conditional_success_probability,
                       gil_pelaez, imaginary_moment_from_samples, laplace_transform,
                       moment_b, moment_set)
from .model import (NetworkParams, ParameterError, SimControls, baseline_params, epsilon_max,
                    validate)
from .simulate import (MetaSamples, empirical_meta, empirical_moment, run_full_fading,
                       run_semi_analytic)

__version__ = "0.1.0"
