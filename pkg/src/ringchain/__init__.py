"""Spectra of periodic chains of magnetic rings with an
orientation-preferring vertex coupling: bands, gaps, flat bands, the
negative spectrum and the probability that a random energy is in the
spectrum."""

__version__ = "0.1.0"

from .kernels import BACKEND
from .model import (ChainSpec, DispersionSolution, EnergySign, SpectralCoefficients,
                    SpectralPoint, SpecialFunctions, Variant, coefficient_arrays,
                    coefficients, coefficients_loose, coefficients_merged,
                    coefficients_tight, discriminant, dispersion_theta,
                    special_functions)
from .bands import (Band, BandKind, FlatBandHit, FlatBandPrediction, FlatMechanism,
                    GapClosing, NegativeBandCountError, ScanResolutionWarning,
                    asymptotic_negative_point, detect_flat_bands, exceptional_flux,
                    find_negative_bands, gap_closing_search, predict_flat_bands,
                    scan_bands)
from .oracle import (CellSystem, EquivalenceReport, build_cell_system, determinant,
                     equivalence_report, oracle_theta_roots)
from .probability import (ProbabilityEstimate, ProbabilityMethod, UniversalityReport,
                          asymptotic_indicator, closed_form_probability,
                          merged_first_octant_integral, periodic_probability,
                          scan_probability, torus_condition_value, torus_probability,
                          universality_check)

__all__ = [
    "BACKEND", "Band", "BandKind", "CellSystem", "ChainSpec", "DispersionSolution",
    "EnergySign", "EquivalenceReport", "FlatBandHit", "FlatBandPrediction",
    "FlatMechanism", "GapClosing", "NegativeBandCountError", "ProbabilityEstimate",
    "ProbabilityMethod", "ScanResolutionWarning", "SpectralCoefficients",
    "SpectralPoint", "SpecialFunctions", "UniversalityReport", "Variant",
    "asymptotic_indicator", "asymptotic_negative_point", "build_cell_system",
    "closed_form_probability", "coefficient_arrays", "coefficients",
    "coefficients_loose", "coefficients_merged", "coefficients_tight",
    "detect_flat_bands", "determinant", "discriminant", "dispersion_theta",
    "equivalence_report", "exceptional_flux", "find_negative_bands",
    "gap_closing_search", "merged_first_octant_integral", "oracle_theta_roots",
    "periodic_probability", "predict_flat_bands", "scan_bands", "scan_probability",
    "special_functions", "torus_condition_value", "torus_probability",
    "universality_check",
]
