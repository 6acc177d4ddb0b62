"""Worst-case CLT and functional-CLT machinery with verified Prokhorov rates.

The package models distributional ambiguity as a finite *scenario family* of
classical laws; an adversary re-picking the law adaptively generates a
sublinear (worst-case) expectation.  The library builds the constructive
counterparts of the convergence theory for such models:

* :mod:`robustclt.scenarios`  - scenario families, moment envelopes, truncated moments
* :mod:`robustclt.kernels`    - the compact smoothing density and its exact remainders
* :mod:`robustclt.fields`     - smoothed set-probability fields and adaptive selectors
* :mod:`robustclt.paths`      - broken lines: partial-sum and Wiener interpolants
* :mod:`robustclt.adversary`  - worst-case expectations by backward dynamic programming
* :mod:`robustclt.prokhorov`  - exact empirical Lévy-Prokhorov distances via max flow
* :mod:`robustclt.bounds`     - every explicit-constant rate-bound evaluator
* :mod:`robustclt.harness`    - batch experiments, reports, negative controls

See the demos/ directory for narrative walk-throughs of each capability and
``robustclt --help`` for the batch CLI.
"""

__version__ = "0.1.0"

from .adversary import (
    DiagnosticWarning,
    GridValueFunction,
    default_grid,
    mollified_indicator,
    nested_upper_expectation_bruteforce,
    upper_expectation_dp,
    upper_probability,
)
from .bounds import (
    abs_moment_normal,
    c2,
    classical_fclt_bound,
    cor1_bound,
    cor2_bound,
    kp_lower,
    maximal_ineq_bound,
    pi_bar_bound,
    thm1_b22_bound,
    thm1_bound,
    thm2_bound,
)
from .fields import (
    AdaptiveRules,
    ConstantRules,
    GaussianSetField,
    NuGaussianSetField,
    NuSetField,
    SelectorParams,
    SmoothField,
    alpha_selector,
    beta_selector,
    choose_smoothing_params,
    smoothed_indicator_field,
    taylor_error_field,
)
from .harness import (
    ExperimentConfig,
    emit_report,
    estimate_delta_floor,
    gaussian_set_probability,
    run_classical_fclt_experiment,
    run_thm1_experiment,
    run_verify_lemmas,
)
from .kernels import (
    CompactKernel,
    GaussianKernel,
    g_eval,
    gaussian_third_deriv_l1,
    taylor_error_g,
    taylor_error_g_l1,
    taylor_error_g_l1_bound,
)
from .paths import (
    BrokenLine,
    PathSample,
    basis_e,
    bridge_exceedance_mc,
    build_sn_adaptive,
    build_sn_classical,
    refine_wiener,
    sample_sn_classical,
    simulate_wiener_broken,
    simulate_wiener_sample,
    sup_norm_distance,
)
from .prokhorov import (
    DeficiencyReport,
    EmpiricalMeasure,
    bruteforce_one_sided,
    bruteforce_prokhorov,
    deficiency,
    deficiency_bruteforce,
    distance_matrix,
    one_sided_prokhorov,
    prokhorov_distance,
    read_atoms_csv,
)
from .report import ExperimentReport
from .scenarios import (
    DiscreteLaw,
    GaussianLaw,
    MomentEnvelope,
    QuadratureError,
    ScenarioFamily,
    ScenarioLaw,
    TwoPointLaw,
    UniformLaw,
    gamma_p,
    gamma_p_sup,
    lower_expectation,
    moment_envelope,
    parse_family,
    parse_law,
    upper_expectation,
)
from .sets import IntervalUnionSet
