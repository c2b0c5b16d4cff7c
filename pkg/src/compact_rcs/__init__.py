"""Compact-range RCS measurement chain.

Mie-series PEC sphere reference, scattering-center simulation, software range
gating, sphere calibration, and AIC-based selection of RCS statistics.
"""
from .calibration import (CalibrationReference, RcsPattern, apply_calibration, average_rcs,
                          build_calibration, pattern_from_scan)
from .errors import (CompactRcsError, DegenerateFitError, DegenerateReferenceError, DomainError,
                     FitFailureError, FormatError, InsufficientDataError, NoModelError, StageError)
from .gating import (TimeProfile, background_subtract, range_gate, to_frequency_domain, to_time_domain,
                     tukey_window)
from .kernels import BACKEND
from .mie import (ScatteringRegion, SphereSpec, classify_region, riccati_hankel2_sequence,
                  sphere_rcs_exact, sphere_rcs_optical, sphere_rcs_rayleigh)
from .pipeline import PipelineConfig, RunReport, run_pipeline
from .scatter import (ChamberArtifacts, ScanGeometry, ScatteringCenter, SweepConfig, TargetModel,
                      coherent_rcs, synth_scan, synth_sweep)
from .stats import (FitResult, ModelRanking, RcsSamples, aic, fit_gev, fit_lognormal, fit_rayleigh,
                    select_model)
from .sweeps import AzimuthScan, FrequencySweep

__version__ = "0.1.0"
