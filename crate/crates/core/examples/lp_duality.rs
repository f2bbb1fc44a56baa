//! Closed-form primal and dual solutions of the relaxed system, checked in
//! exact rational arithmetic, and the bracket they give on the game value.
//!
//!     cargo run --example lp_duality -- 12 3 3

use lazymatch::bounds::{
    bal_bounds, dual_closed_form, dual_is_exact, dual_objective, format_rational, max_sum_exact,
    primal_closed_form, primal_is_exact, primal_rows, PsiSystem,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<i64>());
    let n = args.next().unwrap_or(Ok(12))?;
    let m = args.next().unwrap_or(Ok(3))? as usize;
    let x0 = args.next().unwrap_or(Ok(3))?;

    let sys = PsiSystem::new(n, m, x0)?;
    let primal = primal_closed_form(&sys);
    let dual = dual_closed_form(m)?;
    let show = |v: &[num_rational::BigRational]| v.iter().map(format_rational).collect::<Vec<_>>().join(", ");
    println!("n = {n}, m = {m}, x0 = {x0}");
    println!("y  = [{}]", show(&primal.y));
    println!("P(y) = [{}]  exact: {}", show(&primal_rows(&primal.y)), primal_is_exact(&sys, &primal));
    println!("z  = [{}]  exact: {}", show(&dual.z), dual_is_exact(&dual));
    println!(
        "primal objective {}  dual objective {}",
        format_rational(&primal.objective()),
        format_rational(&dual_objective(&sys, &dual))
    );

    println!();
    println!("{:>5} {:>5} {:>6} {:>6} {:>6}", "n", "alpha", "lower", "exact", "upper");
    for alpha in 1..=4 {
        for n in [10i64, 50, 200, 1000] {
            let b = bal_bounds(n, alpha)?;
            let exact = n - max_sum_exact(n, alpha)?.best_sum;
            println!("{n:>5} {alpha:>5} {:>6} {exact:>6} {:>6}", b.lower, b.upper);
        }
    }
    Ok(())
}
