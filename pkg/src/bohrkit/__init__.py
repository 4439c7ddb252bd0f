"""bohrkit: exact Bohr sets, local uniformity norms, configuration counting,
and a certified density-increment engine over the integers."""

from .bohr import (
    BohrSet,
    BohrSpec,
    BudgetExceeded,
    DilationSearch,
    RegularityCertificate,
    enumerate_bohr,
    exact_density,
    find_regular_alpha,
    find_regular_dilation,
    infer_dilation,
    membership_mask,
    regularity_certificate,
    spec_from_dict,
)
from .functions import BoundedFunction, read_values_file
from .gowers import (
    FourierScan,
    InverseCheck,
    U2Report,
    check_inverse_theorem,
    inverse_average,
    local_fourier_scan,
    u2_fourth_correlation,
    u2_fourth_direct,
    u2_norm,
    u2_report,
)
from .increment import (
    ConstantTable,
    EngineLimits,
    IncrementOutcome,
    RunResult,
    StepRecord,
    fourier_increment,
    recheck_run,
    run,
)
from .patterns import (
    Configuration,
    CountingBoundReport,
    DichotomyOutcome,
    FinderResult,
    FunctionFamily,
    PreconditionError,
    VonNeumannReport,
    behrend_set,
    check_counting_bound,
    check_von_neumann,
    count_configurations,
    count_patterns_exact,
    count_T_s,
    count_three_aps_direct,
    count_three_aps_fft,
    dichotomy,
    find_configuration,
    find_configuration_restricted,
    random_set,
    verify_configuration,
)
from .reports import canonical_json, emit_report, parse_report, write_trace
from .sumfree import (
    EmbedResult,
    EmbeddingSearch,
    FreimanMap,
    check_freiman_isomorphic,
    find_configuration_via_embedding,
    find_sumfree_subset,
    is_sumfree_with_respect_to,
    ruzsa_embed,
)

__version__ = "0.1.0"

__all__ = [
    "BohrSet",
    "BohrSpec",
    "BoundedFunction",
    "BudgetExceeded",
    "Configuration",
    "ConstantTable",
    "CountingBoundReport",
    "DichotomyOutcome",
    "DilationSearch",
    "EmbedResult",
    "EmbeddingSearch",
    "EngineLimits",
    "FinderResult",
    "FourierScan",
    "FreimanMap",
    "FunctionFamily",
    "IncrementOutcome",
    "InverseCheck",
    "PreconditionError",
    "RegularityCertificate",
    "RunResult",
    "StepRecord",
    "U2Report",
    "VonNeumannReport",
    "behrend_set",
    "canonical_json",
    "check_counting_bound",
    "check_freiman_isomorphic",
    "check_inverse_theorem",
    "check_von_neumann",
    "count_T_s",
    "count_configurations",
    "count_patterns_exact",
    "count_three_aps_direct",
    "count_three_aps_fft",
    "dichotomy",
    "emit_report",
    "enumerate_bohr",
    "exact_density",
    "find_configuration",
    "find_configuration_restricted",
    "find_configuration_via_embedding",
    "find_regular_alpha",
    "find_regular_dilation",
    "find_sumfree_subset",
    "fourier_increment",
    "infer_dilation",
    "inverse_average",
    "is_sumfree_with_respect_to",
    "local_fourier_scan",
    "membership_mask",
    "parse_report",
    "random_set",
    "read_values_file",
    "recheck_run",
    "regularity_certificate",
    "ruzsa_embed",
    "run",
    "spec_from_dict",
    "u2_fourth_correlation",
    "u2_fourth_direct",
    "u2_norm",
    "u2_report",
    "verify_configuration",
    "write_trace",
]
