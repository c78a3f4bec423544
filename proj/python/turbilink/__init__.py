"""Two-photon spatial entanglement through weak Kolmogorov turbulence."""

from ._core import (
    AngleDistribution,
    ConsistencyError,
    DomainError,
    EntanglementScan,
    EprReport,
    NumericalError,
    OamSpectrum,
    PhysicalSetup,
    PropagatedMoments,
    TruncationError,
    TurbulenceChannel,
    ZInterval,
    coherence_length,
    conditional_angle_stats,
    conditional_oam_distribution,
    conditional_oam_uncertainty,
    cross_spectral_density,
    derive_setup,
    epr_report,
    laguerre_poly,
    propagated_moments,
    purity,
    scan_entanglement,
    spatial_correlation,
)


def reference_setup():
    """355 nm pump, 507 um waist, 1 mm crystal, 50 cm collimating lens."""
    return derive_setup(355e-9, 507e-6, 1e-3, 0.5)


__all__ = [name for name in dir() if not name.startswith("_")]
