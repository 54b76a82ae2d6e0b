"""kdv5lab: a numerical laboratory for fifth-order dispersive models.

Simulates the fifth-order equations of KdV type on a periodic domain and
checks, by quadrature on manufactured and simulated data, the weighted
energy identities and inequalities behind propagation-of-regularity and
persistence-of-decay results for this family.
"""

__version__ = "1.0.0"

from .cutoffs import (  # noqa: F401
    ContractViolation,
    CutoffSpec,
    certify_inequalities,
    eval_cutoff,
    ratio_third,
    rho,
    rho_ratio_closed,
)
from .spectral import (  # noqa: F401
    Field,
    Grid,
    SupportViolationError,
    WeightFunction,
    band_limited_random,
    derivative,
    export_csv,
    integrate,
    load_field,
    save_field,
    sobolev_norm,
    weighted_integral,
)
from .models import (  # noqa: F401
    Model,
    Monomial,
    catalog,
    eval_rhs,
    general_c,
    water_wave,
)
from .solver import (  # noqa: F401
    BlowUpError,
    SolverConfig,
    Trajectory,
    kdv_soliton,
    linear_exact,
    reflect,
    simulate,
    step,
)
from .functionals import (  # noqa: F401
    IdentityResidual,
    SmoothingAccumulator,
    WeightedFunctional,
    check_dyadic_decay,
    check_energy_lemma,
    check_identity,
    check_linfty_trick,
    check_sob2,
    evaluate,
    make_identity_field,
)
from .experiments import (  # noqa: F401
    RunManifest,
    bootstrap_schedule,
    build_data,
    load_config,
    nu_degree,
    parse_config,
    report_csv,
    run_bootstrap,
    run_decay,
    run_propagation,
)
