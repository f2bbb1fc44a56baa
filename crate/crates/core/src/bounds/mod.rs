//! Analytic side of the game: the integer system, its normalization and
//! exact maximizer, the count transform, the LP closed forms and the
//! competitive ratios.

pub mod lp;
pub mod ratio;
pub mod system;

pub use lp::{
    admissible_m, bal_bounds, dual_closed_form, dual_is_exact, dual_objective, dual_rows, f_value, lp_value,
    partial_product, primal_closed_form, primal_is_exact, primal_rows, strong_duality_check, BalBounds,
    DualSolution, PrimalSolution, PsiSystem,
};
pub use ratio::{
    competitive_ratio, infinite_product, ratio_infinity, ratio_matches_f, truncated_product, LimitReport,
    RatioResult,
};
pub use system::{
    max_sum_exact, normalize_solution, optimal_x0, psi_inverse, psi_objective, psi_satisfied, psi_transform,
    validate_solution, AdversarySolution, MaxSum,
};

/// Formats an exact rational as `p/q` (or `p` when integral).
pub fn format_rational(r: &num_rational::BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Converts an exact rational to the nearest `f64`.
pub fn rational_to_f64(r: &num_rational::BigRational) -> f64 {
    ratio::to_f64(r)
}
