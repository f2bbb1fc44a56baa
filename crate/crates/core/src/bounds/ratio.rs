//! Competitive ratios: exact for finite α, and the α → ∞ limit.

use std::f64::consts::PI;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use super::lp::{frac, partial_product};
use crate::error::BoundsError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioResult {
    pub alpha: usize,
    pub exact: BigRational,
}

impl RatioResult {
    pub fn float(&self) -> f64 {
        to_f64(&self.exact)
    }
}

/// `1 − α/(1+α) · ∏_{i=1}^{α−1} (i + i²)/(1 + i + i²)`.
pub fn competitive_ratio(alpha: usize) -> Result<RatioResult, BoundsError> {
    if alpha < 1 {
        return Err(BoundsError::InvalidParameters("alpha must be at least 1".into()));
    }
    let a = alpha as i64;
    let exact = BigRational::one() - frac(a, 1 + a) * partial_product(alpha);
    Ok(RatioResult { alpha, exact })
}

pub(crate) fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // numerator/denominator too large for direct conversion
        let scale = r.denom().bits().max(r.numer().bits()).saturating_sub(1000);
        let num = (r.numer() >> scale).to_f64().unwrap_or(f64::NAN);
        let den = (r.denom() >> scale).to_f64().unwrap_or(f64::NAN);
        num / den
    })
}

/// `π / cosh(√3·π/2)`, the value of the infinite product.
pub fn infinite_product() -> f64 {
    PI / (3f64.sqrt() * PI / 2.0).cosh()
}

/// Floating-point `∏_{i=1}^{terms} (i + i²)/(1 + i + i²)`.
pub fn truncated_product(terms: u64) -> f64 {
    (1..=terms).fold(1.0f64, |acc, i| {
        let i = i as f64;
        acc * (1.0 - 1.0 / (1.0 + i + i * i))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitReport {
    pub terms: u64,
    pub truncated_product: f64,
    pub analytic_product: f64,
    /// `|truncated − analytic|`.
    pub difference: f64,
    /// `1 − analytic`.
    pub ratio: f64,
    /// `1 − truncated`.
    pub truncated_ratio: f64,
}

/// The α → ∞ ratio `1 − π/cosh(√3π/2)`, alongside the truncated product
/// with `terms` factors.
pub fn ratio_infinity(terms: u64) -> Result<LimitReport, BoundsError> {
    if terms < 1 {
        return Err(BoundsError::InvalidParameters("need at least one product term".into()));
    }
    let truncated = truncated_product(terms);
    let analytic = infinite_product();
    Ok(LimitReport {
        terms,
        truncated_product: truncated,
        analytic_product: analytic,
        difference: (truncated - analytic).abs(),
        ratio: 1.0 - analytic,
        truncated_ratio: 1.0 - truncated,
    })
}

/// Checks `competitive_ratio(α) = 1 − F(1/(1+α), 1+α)` exactly.
pub fn ratio_matches_f(alpha: usize) -> bool {
    let a = alpha as i64;
    let via_f = BigRational::one()
        - super::lp::f_value(&frac(1, 1 + a), alpha + 1).expect("m >= 2");
    competitive_ratio(alpha).is_ok_and(|r| r.exact == via_f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_alpha_values() {
        assert_eq!(competitive_ratio(1).unwrap().exact, frac(1, 2));
        assert_eq!(competitive_ratio(2).unwrap().exact, frac(5, 9));
        assert_eq!(competitive_ratio(3).unwrap().exact, frac(4, 7));
        assert!((competitive_ratio(2).unwrap().float() - 0.556).abs() < 5e-4);
        assert!((competitive_ratio(3).unwrap().float() - 0.571).abs() < 5e-4);
        assert!(competitive_ratio(0).is_err());
    }

    #[test]
    fn limit_value() {
        let r = ratio_infinity(10_000).unwrap();
        assert!((r.analytic_product - 0.4118).abs() < 1e-4);
        assert!((r.ratio - 0.5881).abs() < 1e-4);
        assert!(r.difference < 1e-4);
    }

    #[test]
    fn monotone_towards_limit() {
        let limit = 1.0 - infinite_product();
        let mut prev = competitive_ratio(1).unwrap().exact;
        for alpha in 2..=50 {
            let cur = competitive_ratio(alpha).unwrap().exact;
            assert!(cur > prev, "α = {alpha}");
            assert!(to_f64(&cur) < limit);
            prev = cur;
        }
        assert!(limit - to_f64(&prev) < 1e-2);
    }

    #[test]
    fn agrees_with_f() {
        for alpha in 1..=100 {
            assert!(ratio_matches_f(alpha), "α = {alpha}");
        }
    }
}
