"""IRS-aided spectrum sensing with weighted energy detection."""
__version__ = "0.1.0"

from .analytic import (AnalyticParams, analytic_pfa, mean_statistic_bounds, pmd_upper_bound,
                       q_func, q_inv, threshold_for_pfa)
from .channel import (ChannelRealization, GainLawParams, Geometry, PathLossModel, path_gain,
                      sample_channels, sample_gain_law)
from .codebook import ReflectionCodebook, effective_channels, optimal_phases, random_codebook
from .detect import (DetectionOutcome, DetectorConfig, Scheme, WeightVector, decide, genie_weights,
                     practical_weights, sc_statistic, wed_statistic)
from .errors import InvalidInputError, OutOfRegimeError
from .frame import FrameLayout, Hypothesis, synthesize_block_energies, synthesize_raw_frame
from .mc import (RocCurve, ScenarioConfig, SweepResult, pdf_histogram, roc_sweep, run_trial,
                 simulate, sweep_alpha, sweep_blocks)
