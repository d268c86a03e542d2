//! Constructors for the classified half-supersymmetric backgrounds.

mod group;
mod instanton;
mod string;
mod verify;

pub use group::{
    adjoint_inverse, build_half_bps_su2, build_product_group_background, sl2r_forms, sl2r_su2_constants,
    structure_constant_self_duality, structure_constants, su2_generator, su2_maurer_cartan, Fibre, GroupBundle,
    InstantonBackgroundSpec, BASE_SLOTS, FIBRE_FRAME, SL2R_SLOTS, SU2_SLOTS,
};
pub use instanton::{
    build_bpst_connection, chern_number, curvature_from_potential, gauss_legendre, half_bps_h, levi3, star4, thooft,
    thooft_bar, AsdConnection, Bpst, Thooft,
};
pub use string::{build_string_background, transverse, HarmonicSpec, StringBackground, StringBackgroundSpec};

pub(crate) use verify::sweep;
pub use verify::{
    close_h_residual, fineqn_report, fineqn_residual_fixed, fineqn_terms, jacobi_residual, lift_base_points,
    point_residuals, row_spinors, shell_points, verify_fineqn, verify_product_group, verify_string,
    verify_su2_instanton, PointResiduals, Tolerances,
};
