"""Ecological diversity and evenness metrics for topical discussion networks.

Contributors are treated as species and their contributions as
individuals. The package computes Shannon, Brillouin, Simpson, McIntosh
and Smith-Wilson E_var over contributor frequency tables, extracts
top-fraction subpopulations, and tests richness dependence with Pearson
correlation.
"""

__version__ = "0.1.0"

from tdndiv.errors import (  # noqa: E402
    DegenerateCorrelation,
    DegenerateSeries,
    DuplicateId,
    EmptyTable,
    InsufficientN,
    InvalidCount,
    InvalidSpec,
    LengthMismatch,
    MalformedRecord,
    ParseError,
    TdnError,
    UndefinedForSingleton,
)
from tdndiv.freqtable import (  # noqa: E402
    FrequencyTable,
    Mode,
    Subsample,
    SubsampleSpec,
    TableSummary,
    from_counts,
    merge,
    merge_all,
    summary,
    top_fraction,
)
from tdndiv.metrics import (  # noqa: E402
    MetricSuite,
    brillouin_h,
    e_var,
    mcintosh_e,
    shannon_h,
    shannon_j,
    simpson_lambda,
    suite,
)
from tdndiv.stats import (  # noqa: E402
    CorrelationResult,
    correlate_metric_vs_richness,
    fisher_ci,
    pearson_r,
    r_p_value,
)
