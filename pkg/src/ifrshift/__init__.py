"""Age-shifted infection-fatality projections."""

from .agebin import (
    AgeBin,
    BinnedCountTable,
    Partition,
    RebinMode,
    expand_single_years,
    is_coarsening,
    rebin,
    shift_and_clamp,
    validate_partition,
)
from .fileio import bundled, load_demographics, load_lethality, load_scenario, run_scenario
from .finalsize import attack_rate
from .projection import (
    ComparisonTable,
    DeathTable,
    LethalityTable,
    Scenario,
    Summary,
    compare_scenarios,
    project_deaths,
    summarize,
    waning_scenario,
)
from .reporting import relabel_bins, render_table

__version__ = "0.1.0"
