//! The birth-death chain followed by the token count on one side of a cut
//! under triadic median dynamics: with `x` of `n` tokens on a side, a round
//! adds one with probability `3x²(n−x)/n³` and removes one with probability
//! `3x(n−x)²/n³`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;

use super::AnalyticsError;
use crate::rng::SimRng;

/// Solve exactly in rationals up to this size; above it, in `f64`.
pub const EXACT_LIMIT: u64 = 200;

fn check(n: u64, x: u64) -> Result<(), AnalyticsError> {
    if n == 0 || x > n {
        Err(AnalyticsError::OutOfRange(format!("state {x} of an urn with {n} tokens")))
    } else {
        Ok(())
    }
}

/// `(p_up, p_down, p_stay)` from state `x`.
pub fn urn_transition(n: u64, x: u64) -> Result<(f64, f64, f64), AnalyticsError> {
    check(n, x)?;
    let (nf, xf) = (n as f64, x as f64);
    let n3 = nf * nf * nf;
    let up = 3.0 * xf * xf * (nf - xf) / n3;
    let down = 3.0 * xf * (nf - xf) * (nf - xf) / n3;
    let stay = (xf.powi(3) + (nf - xf).powi(3)) / n3;
    Ok((up, down, stay))
}

/// `(1/2)^{n−1} Σ_{j=1}^{x0} C(n−1, j−1)`, exactly.
pub fn urn_closed_form_exact(n: u64, x0: u64) -> Result<BigRational, AnalyticsError> {
    check(n, x0)?;
    let mut sum = BigInt::zero();
    let mut binom = BigInt::one();
    for j in 1..=x0 {
        sum += &binom;
        // C(n−1, j) from C(n−1, j−1)
        binom = binom * BigInt::from(n - j) / BigInt::from(j);
    }
    Ok(BigRational::new(sum, BigInt::one() << (n - 1)))
}

pub fn urn_closed_form(n: u64, x0: u64) -> Result<f64, AnalyticsError> {
    Ok(urn_closed_form_exact(n, x0)?.to_f64().unwrap_or(f64::NAN))
}

#[derive(Debug, Clone, Serialize)]
pub struct AbsorptionResult {
    pub n: u64,
    /// Probability of absorbing at `n`, per start state `0..=n`.
    pub hit_n: Vec<f64>,
    /// Expected rounds to absorption, per start state.
    pub expected_time: Vec<f64>,
    /// Exact values, present when `n ≤ EXACT_LIMIT`.
    #[serde(skip)]
    pub exact: Option<ExactAbsorption>,
}

#[derive(Debug, Clone)]
pub struct ExactAbsorption {
    pub hit_n: Vec<BigRational>,
    pub expected_time: Vec<BigRational>,
}

impl AbsorptionResult {
    pub fn max_expected_time(&self) -> f64 {
        self.expected_time.iter().copied().fold(0.0, f64::max)
    }
}

/// Solves the first-step equations. Dividing by the move probability
/// `3x(n−x)/n²` gives, for interior `x`,
///
/// `x·h(x+1) − n·h(x) + (n−x)·h(x−1) = 0` with `h(0) = 0`, `h(n) = 1`, and
/// `x·τ(x+1) − n·τ(x) + (n−x)·τ(x−1) = −n³/(3x(n−x))` with `τ(0) = τ(n) = 0`,
///
/// both tridiagonal and solved by forward elimination and back substitution.
pub fn absorption_solver(n: u64) -> Result<AbsorptionResult, AnalyticsError> {
    check(n, 0)?;
    if n <= EXACT_LIMIT {
        let exact = solve_exact(n);
        let to_f = |v: &Vec<BigRational>| v.iter().map(|r| r.to_f64().unwrap_or(f64::NAN)).collect();
        Ok(AbsorptionResult {
            n,
            hit_n: to_f(&exact.hit_n),
            expected_time: to_f(&exact.expected_time),
            exact: Some(exact),
        })
    } else {
        let (hit_n, expected_time) = solve_f64(n);
        Ok(AbsorptionResult { n, hit_n, expected_time, exact: None })
    }
}

/// Thomas elimination over interior states `1..n` for rows
/// `lower(x)·u(x−1) + diag(x)·u(x) + upper(x)·u(x+1) = rhs(x)`, with the
/// boundary values `u(0)`, `u(n)` fixed.
fn thomas<T: Num + Clone>(
    n: u64,
    lower: impl Fn(u64) -> T,
    diag: impl Fn(u64) -> T,
    upper: impl Fn(u64) -> T,
    rhs: impl Fn(u64) -> T,
    (u0, un): (T, T),
) -> Vec<T> {
    let m = n.saturating_sub(1) as usize;
    // row i is reduced to u(x) + c[i]·u(x+1) = d[i]
    let mut c: Vec<T> = Vec::with_capacity(m);
    let mut d: Vec<T> = Vec::with_capacity(m);
    for x in 1..n {
        let mut r = rhs(x);
        if x == 1 {
            r = r - lower(x) * u0.clone();
        }
        let up = if x + 1 == n {
            r = r - upper(x) * un.clone();
            T::zero()
        } else {
            upper(x)
        };
        let (denom, r) = match (c.last(), d.last()) {
            (Some(cp), Some(dp)) => (diag(x) - lower(x) * cp.clone(), r - lower(x) * dp.clone()),
            _ => (diag(x), r),
        };
        c.push(up / denom.clone());
        d.push(r / denom);
    }
    let mut u = vec![T::zero(); n as usize + 1];
    u[0] = u0;
    u[n as usize] = un;
    for i in (0..m).rev() {
        u[i + 1] = d[i].clone() - c[i].clone() * u[i + 2].clone();
    }
    u
}

fn solve_exact(n: u64) -> ExactAbsorption {
    let q = |v: u64| BigRational::from_integer(BigInt::from(v));
    let n3 = BigInt::from(n).pow(3);
    let hit_n =
        thomas(n, |x| q(n - x), |_| -q(n), q, |_| BigRational::zero(), (BigRational::zero(), BigRational::one()));
    let expected_time = thomas(
        n,
        |x| q(n - x),
        |_| -q(n),
        q,
        |x| -BigRational::new(n3.clone(), BigInt::from(3 * x * (n - x))),
        (BigRational::zero(), BigRational::zero()),
    );
    ExactAbsorption { hit_n, expected_time }
}

fn solve_f64(n: u64) -> (Vec<f64>, Vec<f64>) {
    let nf = n as f64;
    let hit = thomas(n, |x| (n - x) as f64, |_| -nf, |x| x as f64, |_| 0.0, (0.0, 1.0));
    let time = thomas(
        n,
        |x| (n - x) as f64,
        |_| -nf,
        |x| x as f64,
        |x| -nf.powi(3) / (3.0 * (x * (n - x)) as f64),
        (0.0, 0.0),
    );
    (hit, time)
}

/// Runs the chain from `x0` to absorption, returning whether it absorbed at
/// `n` and the number of rounds taken.
pub fn simulate_urn(n: u64, x0: u64, rng: &mut SimRng) -> Result<(bool, u64), AnalyticsError> {
    check(n, x0)?;
    let mut x = x0;
    let mut t = 0;
    while x != 0 && x != n {
        let (up, down, _) = urn_transition(n, x)?;
        let u: f64 = rng.random();
        if u < up {
            x += 1;
        } else if u < up + down {
            x -= 1;
        }
        t += 1;
    }
    Ok((x == n, t))
}
