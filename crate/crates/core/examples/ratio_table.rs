//! Exact competitive ratios for small α and the limit as α grows.
//!
//!     cargo run --example ratio_table -- 12

use lazymatch::bounds::{competitive_ratio, format_rational, ratio_infinity, ratio_matches_f};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let top: usize = std::env::args().nth(1).map_or(Ok(10), |s| s.parse())?;
    for alpha in 1..=top {
        let r = competitive_ratio(alpha)?;
        let exact = format_rational(&r.exact);
        println!("alpha = {alpha:>3}  ratio = {exact:<28} ~ {:.6}  (agrees with F: {})", r.float(), ratio_matches_f(alpha));
    }
    for terms in [10, 100, 1_000, 10_000, 100_000] {
        let lim = ratio_infinity(terms)?;
        println!(
            "limit with {terms:>6} factors: {:.8}  (analytic {:.8}, gap {:.2e})",
            lim.truncated_ratio, lim.ratio, lim.difference
        );
    }
    Ok(())
}
