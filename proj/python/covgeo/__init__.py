"""Covariate Fisher information geometry: scores, cFIM, projections, KL checks,
CRLB benchmarks and spectral-gap manifold tests."""

from ._covgeo import (
    CovgeoError,
    DensityModel,
    IntegrationSpec,
    ParseError,
    SingularMetric,
    ZeroTangent,
    analytic_score,
    asymmetry_check,
    cfim,
    check_invertibility,
    efficiency_benchmark,
    expectation,
    fd_score,
    fisher_rao_distance,
    generate_manifold_data,
    gentropy_via_kl,
    kde_score,
    kl_derivatives,
    kl_divergence,
    mh_test,
    project,
    quadrature_cfim,
    run_cli,
    sample,
    spectrum,
)

__all__ = [name for name in dir() if not name.startswith("_")]
