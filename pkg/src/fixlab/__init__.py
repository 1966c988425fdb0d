"""Fixed-point iteration laboratory over ordered hyperbolic metric spaces.

The package splits into: geometric space instances (``geodesic``), partial
orders on them (``order``), a catalog of self-maps with class-property
checkers (``mappings``), the iteration schemes and their trace diagnostics
(``schemes``), discretised integral equations (``integral``), and a CLI
(``cli``) that ties the pieces together and defines the file formats.
"""

from .geodesic import (
    ModulusQuery,
    Space,
    broken_disk,
    check_axioms,
    euclidean,
    hilbert_modulus,
    l2_grid,
    modulus_sampled,
    poincare_disk,
)
from .integral import (
    GridFunction,
    IntegralProblem,
    KernelSpec,
    QuadratureGrid,
    apply_operator,
    build_grid,
    check_kernel_conditions,
    default_problem,
    l2_norm,
    refine_check,
    solve_picard,
    solve_thakur,
)
from .mappings import MappingSpec, from_catalog, run_property_suite
from .order import OrderRel, check_interval_convexity, comparable, leq, order_for
from .report import PropertyReport, Witness
from .schemes import (
    IterationTrace,
    SchemeParams,
    StepRecord,
    asymptotic_center_estimate,
    asymptotic_radius,
    check_fejer_monotone,
    check_residual_decay,
    dist_to_fixed_set,
    run_scheme,
    step_mann,
    step_thakur,
)

__version__ = "0.1.0"
