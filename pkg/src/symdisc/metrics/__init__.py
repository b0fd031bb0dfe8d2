"""Invariant functions and metrics of the symmetrized polydisc."""

from .appendix_c import (
    LIPSCHITZ,
    BoxLedger,
    CaratheodoryBound,
    CertifiedMaximum,
    appendixC_abs,
    appendixC_g,
    appendixC_table_row,
    caratheodory_gamma2_G3_lower,
    certified_max_bb,
    grid_search_appendixC,
    verify_certificate,
)
from .circle import (
    CircleMaximum,
    circle_max,
    circle_sup_f,
    denominator_zero_in_disc,
    f_lambda,
    in_Gn_by_circle,
    m_Gn,
    m_Gn_full,
    rho_n,
)
from .discs import ProductCheck, blaschke_eval, f_B_disc, l_disc_poles, m_disc, product_property_check
from .extremal import (
    C0_CLOSED,
    C_STAR,
    E2Sandwich,
    M_n,
    NonconvexWitness,
    PolyDisc,
    TorusMaximum,
    boundary_check,
    boundary_points_odd,
    boundary_polynomials_odd,
    c_equality,
    check_disc_in_Gn,
    e2_sandwich,
    extremal_disc_ek,
    f_c,
    g_of_c,
    gamma3_e2_upper,
    gn_torus,
    kappa_ek_upper,
    m_nc_bound,
    m_nc_lower,
    max_gn_torus,
    min_m_nc_lower,
    r3,
    s4,
    slice_point,
    witness_n3,
    witness_n4,
)
from .pick import PickProblem, is_psd, np_solvable, np_solvable_circle

__all__ = [name for name in dir() if not name.startswith("_")]
