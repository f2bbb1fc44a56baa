//! LP relaxation of the count system Ψ_{n,m}(x0), solved in closed form.
//!
//! Primal: maximize `Σ (j−1)·y_j` subject to
//! `P_i(y) = Σ_{j=i..m} (1 + (j−1)i)·y_j ≤ n − i·x0` and `y ≥ 0`.
//! Dual: minimize `Σ (n − i·x0)·z_i` subject to
//! `D_j(z) = Σ_{i=1..j} (1 + (j−1)i)·z_i ≥ j − 1` and `z ≥ 0`.
//!
//! Both equality systems are triangular with unique solutions given by
//! short recurrences; both are nonnegative, so complementary slackness makes
//! them optimal. All arithmetic is exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::bounds::system::optimal_x0;
use crate::error::BoundsError;

pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub(crate) fn frac(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Parameters of Ψ_{n,m}(x0); requires `m ≥ 1`, `x0 ≥ 0`, `n − m·x0 ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsiSystem {
    pub n: i64,
    pub m: usize,
    pub x0: i64,
}

impl PsiSystem {
    pub fn new(n: i64, m: usize, x0: i64) -> Result<Self, BoundsError> {
        if m < 1 {
            return Err(BoundsError::InvalidParameters("m must be at least 1".into()));
        }
        if x0 < 0 {
            return Err(BoundsError::InvalidParameters(format!("x0 = {x0} is negative")));
        }
        if n - m as i64 * x0 < 0 {
            return Err(BoundsError::InvalidParameters(format!("n − m·x0 = {} < 0", n - m as i64 * x0)));
        }
        Ok(Self { n, m, x0 })
    }

    /// Right-hand side `n − i·x0` of primal row `i`.
    pub fn rhs(&self, i: usize) -> i64 {
        self.n - i as i64 * self.x0
    }
}

/// Coefficient `1 + (j−1)·i` shared by both systems.
fn coeff(i: usize, j: usize) -> i64 {
    1 + (j as i64 - 1) * i as i64
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimalSolution {
    /// `y[j − 1] = y_j` for `j = 1..m`.
    pub y: Vec<BigRational>,
    /// `y0 = x0 + Σ (j−1)·y_j`, from the product formula.
    pub y0: BigRational,
}

impl PrimalSolution {
    pub fn objective(&self) -> BigRational {
        let (den, num) = over_common_denominator(&self.y);
        let sum = num.iter().enumerate().fold(BigInt::zero(), |acc, (j, v)| acc + v * j as i64);
        BigRational::new(sum, den)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualSolution {
    /// `z[i − 1] = z_i` for `i = 1..m`.
    pub z: Vec<BigRational>,
}

/// `P_i(y)` for `i = 1..m`.
pub fn primal_rows(y: &[BigRational]) -> Vec<BigRational> {
    let m = y.len();
    let (den, num) = over_common_denominator(y);
    (1..=m)
        .map(|i| {
            let sum = (i..=m).fold(BigInt::zero(), |acc, j| acc + &num[j - 1] * coeff(i, j));
            BigRational::new(sum, den.clone())
        })
        .collect()
}

/// `D_j(z)` for `j = 1..m`.
pub fn dual_rows(z: &[BigRational]) -> Vec<BigRational> {
    let m = z.len();
    let (den, num) = over_common_denominator(z);
    (1..=m)
        .map(|j| {
            let sum = (1..=j).fold(BigInt::zero(), |acc, i| acc + &num[i - 1] * coeff(i, j));
            BigRational::new(sum, den.clone())
        })
        .collect()
}

/// `v_i = num_i / den` with `den` the lcm of the denominators.
fn over_common_denominator(v: &[BigRational]) -> (BigInt, Vec<BigInt>) {
    let den = v.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let num = v.iter().map(|r| r.numer() * (&den / r.denom())).collect();
    (den, num)
}

/// Solves `P_i(y) = n − i·x0` for `i = 1..m` by the backward recurrence
/// `y_i = y_{i+1}·(i+1)² / (1 − i + i²)` started from `y_m` and `y_{m−1}`.
pub fn primal_closed_form(sys: &PsiSystem) -> PrimalSolution {
    let m = sys.m;
    let mut y = vec![BigRational::zero(); m];
    if m == 1 {
        y[0] = rat(sys.n - sys.x0);
    } else {
        let mi = m as i64;
        y[m - 1] = frac(sys.n - mi * sys.x0, 1 + mi * (mi - 1));
        y[m - 2] = (rat(sys.x0) + &y[m - 1] * rat(mi - 1)) / rat(1 + (mi - 1) * (mi - 2));
        for i in (1..m - 1).rev() {
            let ii = i as i64;
            y[i - 1] = &y[i] * frac((ii + 1) * (ii + 1), 1 - ii + ii * ii);
        }
    }
    let y0 = lp_value(sys);
    let sol = PrimalSolution { y, y0 };
    debug_assert!(primal_is_exact(sys, &sol));
    sol
}

/// Checks `P_i(y) = n − i·x0` exactly, `y ≥ 0`, and `y0 = x0 + Σ (j−1)·y_j`.
pub fn primal_is_exact(sys: &PsiSystem, sol: &PrimalSolution) -> bool {
    sol.y.len() == sys.m
        && sol.y.iter().all(|v| !v.is_negative())
        && primal_rows(&sol.y).iter().enumerate().all(|(i, p)| *p == rat(sys.rhs(i + 1)))
        && sol.y0 == rat(sys.x0) + sol.objective()
}

/// Solves `D_j(z) = j − 1`: `z1 = 0`, `z2 = 1/3`,
/// `z_{j+1} = z_j·(j−1)² / (1 + j + j²)`.
pub fn dual_closed_form(m: usize) -> Result<DualSolution, BoundsError> {
    if m < 1 {
        return Err(BoundsError::InvalidParameters("m must be at least 1".into()));
    }
    let mut z = vec![BigRational::zero(); m];
    if m >= 2 {
        z[1] = frac(1, 3);
    }
    for j in 2..m {
        let jj = j as i64;
        z[j] = &z[j - 1] * frac((jj - 1) * (jj - 1), 1 + jj + jj * jj);
    }
    let sol = DualSolution { z };
    debug_assert!(dual_is_exact(&sol));
    Ok(sol)
}

/// Checks `D_j(z) = j − 1` exactly and `z ≥ 0`.
pub fn dual_is_exact(sol: &DualSolution) -> bool {
    sol.z.iter().all(|v| !v.is_negative())
        && dual_rows(&sol.z).iter().enumerate().all(|(j, d)| *d == rat(j as i64))
}

pub fn dual_objective(sys: &PsiSystem, sol: &DualSolution) -> BigRational {
    let (den, num) = over_common_denominator(&sol.z);
    let sum = num.iter().enumerate().fold(BigInt::zero(), |acc, (i, z)| acc + z * sys.rhs(i + 1));
    BigRational::new(sum, den)
}

/// Primal and dual objectives coincide exactly.
pub fn strong_duality_check(sys: &PsiSystem) -> bool {
    let primal = primal_closed_form(sys);
    let dual = dual_closed_form(sys.m).expect("m >= 1 by construction");
    primal.objective() == dual_objective(sys, &dual)
}

/// `∏_{i=1}^{m−1} (i + i²) / (1 + i + i²)`.
pub fn partial_product(m: usize) -> BigRational {
    (1..m as i64).fold(BigRational::one(), |acc, i| acc * frac(i + i * i, 1 + i + i * i))
}

/// `F(z, m) = ((m−1) + z) / m · ∏_{i=1}^{m−1} (i + i²)/(1 + i + i²)`.
pub fn f_value(z: &BigRational, m: usize) -> Result<BigRational, BoundsError> {
    if m < 1 {
        return Err(BoundsError::InvalidParameters("m must be at least 1".into()));
    }
    Ok((rat(m as i64 - 1) + z) / rat(m as i64) * partial_product(m))
}

/// LP optimum plus `x0`: `y0 = ((m−1)·n + x0)/m · ∏ … = n·F(x0/n, m)`.
pub fn lp_value(sys: &PsiSystem) -> BigRational {
    let m = sys.m as i64;
    frac((m - 1) * sys.n + sys.x0, m) * partial_product(sys.m)
}

/// Values of `m` the analysis ranges over: `1..=⌊n/x0⌋`, or `1..=n` when
/// `x0 = 0`.
pub fn admissible_m(n: i64, x0: i64) -> std::ops::RangeInclusive<usize> {
    let hi = if x0 > 0 { n / x0 } else { n };
    1..=hi.max(1) as usize
}

/// Integer bracket on the worst case of BALANCE for a game of size `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalBounds {
    pub n: i64,
    pub alpha: i64,
    pub x0: i64,
    /// `n − ⌊max_m y0(m)⌋`.
    pub lower: i64,
    /// `n − max_m (x0 + Σ (j−1)·⌊y_j⌋)`.
    pub upper: i64,
    /// `m` attaining the LP maximum.
    pub lp_m: usize,
    pub lp_max: BigRational,
    /// Floored counts `⌊y_j⌋` of the best rounded solution.
    pub rounded_y: Vec<i64>,
}

/// LP lower bound and rounded-solution upper bound on `bal(α, n)`.
pub fn bal_bounds(n: i64, alpha: i64) -> Result<BalBounds, BoundsError> {
    if n < 1 || alpha < 1 {
        return Err(BoundsError::InvalidParameters(format!("need n >= 1 and alpha >= 1, got n = {n}, alpha = {alpha}")));
    }
    let x0 = optimal_x0(n, alpha);
    let mut lp_best: Option<(usize, BigRational)> = None;
    let mut rounded_best: Option<(i64, Vec<i64>)> = None;
    for m in admissible_m(n, x0) {
        let sys = PsiSystem::new(n, m, x0)?;
        let sol = primal_closed_form(&sys);
        if lp_best.as_ref().is_none_or(|(_, v)| sol.y0 > *v) {
            lp_best = Some((m, sol.y0.clone()));
        }
        let v: Vec<i64> = sol.y.iter().map(floor_i64).collect();
        let value = super::system::psi_objective(x0, &v);
        if rounded_best.as_ref().is_none_or(|(b, _)| value > *b) {
            rounded_best = Some((value, v));
        }
    }
    let (lp_m, lp_max) = lp_best.expect("admissible range is nonempty");
    let (rounded, rounded_y) = rounded_best.expect("admissible range is nonempty");
    Ok(BalBounds {
        n,
        alpha,
        x0,
        lower: n - floor_i64(&lp_max),
        upper: n - rounded,
        lp_m,
        lp_max,
        rounded_y,
    })
}

pub(crate) fn floor_i64(r: &BigRational) -> i64 {
    r.numer().div_floor(r.denom()).to_i64().expect("fits in i64")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::system::{max_sum_exact, psi_inverse, psi_satisfied, validate_solution};

    fn sys(n: i64, m: usize, x0: i64) -> PsiSystem {
        PsiSystem::new(n, m, x0).unwrap()
    }

    #[test]
    fn primal_examples() {
        let p = primal_closed_form(&sys(18, 3, 6));
        assert_eq!(p.y, vec![rat(8), rat(2), rat(0)]);
        assert_eq!(primal_rows(&p.y), vec![rat(12), rat(6), rat(0)]);
        assert_eq!(p.y0, rat(8));

        let p = primal_closed_form(&sys(12, 3, 3));
        assert_eq!(p.y, vec![frac(36, 7), frac(9, 7), frac(3, 7)]);
        assert_eq!(primal_rows(&p.y), vec![rat(9), rat(6), rat(3)]);

        for n in [1, 5, 40] {
            let p = primal_closed_form(&sys(n, 1, 0));
            assert_eq!(p.y, vec![rat(n)]);
        }
        assert_eq!(primal_closed_form(&sys(9, 1, 4)).y, vec![rat(5)]);
    }

    #[test]
    fn psi_system_validation() {
        assert!(PsiSystem::new(18, 0, 6).is_err());
        assert!(PsiSystem::new(18, 4, 6).is_err());
        assert!(PsiSystem::new(18, 2, -1).is_err());
    }

    #[test]
    fn dual_examples() {
        assert_eq!(dual_closed_form(2).unwrap().z, vec![rat(0), frac(1, 3)]);
        assert_eq!(dual_rows(&dual_closed_form(2).unwrap().z), vec![rat(0), rat(1)]);
        assert_eq!(dual_closed_form(1).unwrap().z, vec![rat(0)]);
        assert_eq!(dual_closed_form(3).unwrap().z[2], frac(1, 21));
        assert!(dual_closed_form(0).is_err());
    }

    #[test]
    fn duality_examples() {
        let s = sys(18, 3, 6);
        assert_eq!(primal_closed_form(&s).objective(), rat(2));
        assert_eq!(dual_objective(&s, &dual_closed_form(3).unwrap()), rat(2));
        assert!(strong_duality_check(&s));
        assert!(strong_duality_check(&sys(12, 3, 3)));
        for x0 in 0..5 {
            let s = sys(20, 1, x0);
            assert_eq!(primal_closed_form(&s).objective(), rat(0));
            assert!(strong_duality_check(&s));
        }
    }

    #[test]
    fn f_examples() {
        assert_eq!(f_value(&frac(1, 3), 3).unwrap(), frac(4, 9));
        assert_eq!(f_value(&frac(1, 4), 4).unwrap(), frac(3, 7));
        for z in [frac(0, 1), frac(2, 5), frac(7, 3)] {
            assert_eq!(f_value(&z, 1).unwrap(), z);
        }
    }

    #[test]
    fn lp_value_is_n_times_f() {
        for (n, m, x0) in [(18, 3, 6), (12, 3, 3), (100, 7, 9), (50, 4, 0)] {
            let s = sys(n, m, x0);
            assert_eq!(lp_value(&s), rat(n) * f_value(&frac(x0, n), m).unwrap());
        }
    }

    #[test]
    fn bal_bound_examples() {
        let b = bal_bounds(18, 2).unwrap();
        assert_eq!((b.lower, b.upper), (10, 10));
        let b = bal_bounds(9, 2).unwrap();
        assert_eq!((b.lower, b.upper), (5, 5));
        let b = bal_bounds(1, 1).unwrap();
        assert_eq!((b.lower, b.upper), (1, 1));
    }

    #[test]
    fn bal_bounds_bracket_exact_value() {
        for n in 1..=40 {
            for alpha in 1..=5 {
                let b = bal_bounds(n, alpha).unwrap();
                let exact = n - max_sum_exact(n, alpha).unwrap().best_sum;
                assert!(b.lower <= exact && exact <= b.upper, "n={n} α={alpha}: {} <= {exact} <= {}", b.lower, b.upper);
                assert!(psi_satisfied(n, b.x0, &b.rounded_y));
                assert!(validate_solution(n, alpha, &psi_inverse(b.x0, &b.rounded_y)));
            }
        }
    }
}
