"""Simulation tools for interleaved fusion-based quantum computing.

Fusion graphs and their interleaving schedules, hardware netlists, the
delay-loss erasure model, syndrome graphs, a peeling decoder and Monte Carlo
threshold estimation.
"""

from .decoder import DecodeError, TrialOutcome, peel_decode, run_trial, sample_erasure, sample_errors, syndrome_of
from .experiment import PointResult, SweepResult, SweepSpec, estimate_rate, run_sweep
from .fitting import CurveFit, FitError, ThresholdError, ThresholdEstimate, find_threshold, fit_curve
from .fusion_graph import FusionEdge, FusionGraph, Port, build_cubic, slices
from .noise import (
    DirectionalErasure, NoiseParams, directional_erasure, encoded_fusion_erasure,
    per_bin_loss, physical_fusion_erasure, qubit_loss,
)
from .scheduler import (
    HardwareNetlist, Scheme, assign_coordinates, build_netlist, classify_fusion,
    delay_requirements, estimate_time, interleaving_ratio, validate,
)
from .syndrome import SyndromeGraph, build_syndrome_graphs, membrane_parity

__version__ = "0.1.0"
