"""Wright-type Poisson distribution, Mittag-Leffler and Wright series."""

from ._wright_poisson import (
    CheckRow,
    CountData,
    DegenerateDataError,
    DomainError,
    FitProfile,
    FitResult,
    MomentReport,
    NonConvergenceError,
    ParseError,
    SeriesControl,
    SeriesResult,
    WrightPoisson,
    fit_full,
    fit_m,
    load_counts,
    log_gamma,
    log_likelihood,
    mittag_leffler,
    mittag_leffler2,
    mittag_leffler3,
    parse_counts,
    pochhammer,
    reciprocal_gamma,
    run_checks,
    wright_series,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
