"""ramanujan_lab: exact and high-precision verification of Ramanujan-like
series for 1/pi^m, their supercongruences and the terminating hypergeometric
identities behind them.

    >>> from ramanujan_lab import get_entry, a_supercongruence
    >>> a_supercongruence(get_entry("T1.3"), 3).valuation
    4
"""

from .catalog import (
    SeriesEntry,
    builtin_catalog,
    get_entry,
    half_index,
    load,
    loads,
    dumps,
    save,
    select,
    validate,
)
from .congruence import (
    CongruenceReport,
    a_partial_sum,
    a_supercongruence,
    a_term,
    admissibility,
    b_supercongruence,
    b_term,
    propose_eps0,
    scan,
    shift_identity_check,
)
from .errors import *  # noqa: F401,F403
from .exact import (
    INF,
    check_pochhammer_identity,
    congruent,
    fundamental_discriminant,
    kronecker,
    morley_holds,
    pochhammer,
    reduce_mod,
    vp,
    wolstenholme_holds,
)
from .identities import (
    IDENTITIES,
    RecurrenceFit,
    certify_same_recurrence,
    eval_identity,
    fit_first_order,
)
from .numerics import (
    FourierCoefficients,
    GaussianRational,
    HPComplex,
    HPReal,
    SemiTerminatingConstant,
    bilateral_sum,
    discriminant_extract,
    gamma_hp,
    levin_u,
    r0_closed_form,
    rational_reconstruct,
    solve_fourier,
    sum_unilateral,
)
from .report import Record, emit_report

__version__ = "0.1.0"
