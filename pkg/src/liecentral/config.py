"""Documented defaults for the liecentral engine."""

SERVICE_NAME = "liecentral"

DEFAULT_SEED = 1729
DEFAULT_TRIALS = 5
RANK_COEFFICIENT_BOUND = 10**6
DEFAULT_MONOMIAL_CEILING = 50_000
DEFAULT_SAMPLES = 100
DEFAULT_LOG_LEVEL = "INFO"

MAX_CATALOG_N = 9
