"""Power studies: rejection fractions and minimal distinguishing sample sizes."""

from discretegof.power.core import (
    CSV_COLUMNS,
    MinimalM,
    PowerConfig,
    PowerPoint,
    minimal_m,
    power_at,
    power_rows,
    write_power_csv,
)
from discretegof.power.experiments import (
    EXPERIMENTS,
    Experiment,
    Setup,
    catalog_experiment,
    spike_centre,
    spiked,
)

__all__ = [
    "CSV_COLUMNS",
    "EXPERIMENTS",
    "Experiment",
    "MinimalM",
    "PowerConfig",
    "PowerPoint",
    "Setup",
    "catalog_experiment",
    "minimal_m",
    "power_at",
    "power_rows",
    "spike_centre",
    "spiked",
    "write_power_csv",
]
