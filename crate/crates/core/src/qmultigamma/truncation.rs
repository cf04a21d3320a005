//! Certified truncation lengths.
//!
//! Every omitted log-factor is majorized with `|log(1 - w)| <= |w| / (1 - |w|)`
//! and the binomial-weighted geometric sums are evaluated in closed form by
//! [`geometric_tail`].

use crate::combinatorics::{gen_binom, geometric_tail};
use crate::error::{Error, Result};
use crate::qcore::{smallest_terms, ComplexValue, QParam};

/// Bound on `sum_{n > N} |log-factor_n|` of the defining product of
/// `log G_r(z + 1; q)`, for `r >= 1` and `Re z > -1`.
///
/// The `n`-th factor contributes
/// `binom(n+r-2, r-1) (|log(1 - q^{z+n})| + |log(1 - q^n)|) + |g_r(z, n)| |log(1 - q^n)|`.
pub fn product_tail_bound(r: u32, z: ComplexValue, qp: &QParam, big_n: u64) -> f64 {
    debug_assert!(r >= 1);
    let q = qp.q();
    let x = z.re;
    let nf = big_n as f64;
    let plain = 1.0 / (1.0 - qp.pow_real(nf + 1.0));
    let shifted = qp.pow_real(x) / (1.0 - qp.pow_real(x + nf + 1.0));
    let mut bound = geometric_tail(r - 1, big_n, q) * (shifted + plain);
    for m in 1..r {
        let c = gen_binom(z, r - m).norm();
        if c > 0.0 {
            bound += c * geometric_tail(m - 1, big_n, q) * plain;
        }
    }
    bound
}

/// Bound on the omitted tail of the Euler-type product after `N` factors,
/// which equals the defect of the Gauss-type partial product at `N`.
///
/// Each Euler log-factor is minus the degree-`r` Newton-interpolation
/// remainder of `log G_{r-1}(z + n; q)` in `z`. Expanding
/// `log(1 - q^s) = -sum_k q^{ks} / k` and bounding the remainder of each
/// exponential `q^{kz}` by `B = 1 + sum_{m=0}^{r} |binom(z, m)|` (valid for
/// `Re z >= 0`) gives
/// `|tail| <= B q^{N+1} / ((1 - q^{N+1}) (1 - q)^r)`.
pub fn euler_tail_bound(r: u32, z: ComplexValue, qp: &QParam, big_n: u64) -> f64 {
    let b = 1.0 + (0..=r).map(|m| gen_binom(z, m).norm()).sum::<f64>();
    let head = qp.pow_real(big_n as f64 + 1.0);
    b * head / ((1.0 - head) * qp.one_minus_q().powi(r as i32))
}

fn check_domain(r: u32, z: ComplexValue, tol: f64) -> Result<()> {
    if r == 0 {
        return Err(Error::Domain(
            "truncation is only defined for r >= 1".into(),
        ));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain(format!("tol must be positive, got {tol}")));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite argument {z}")));
    }
    Ok(())
}

/// Smallest `N` whose [`product_tail_bound`] is at most `tol`, with that bound.
pub fn truncation_length(
    r: u32,
    z: ComplexValue,
    qp: &QParam,
    tol: f64,
    max_terms: usize,
) -> Result<(u64, f64)> {
    check_domain(r, z, tol)?;
    if z.re <= -1.0 {
        return Err(Error::Domain(format!(
            "defining product needs Re z > -1, got {z}"
        )));
    }
    smallest_terms(|n| product_tail_bound(r, z, qp, n), tol, max_terms)
}

/// Smallest `N` whose [`euler_tail_bound`] is at most `tol`; the partial
/// length used by the Gauss-type and Euler-type forms.
pub fn gauss_truncation_length(
    r: u32,
    z: ComplexValue,
    qp: &QParam,
    tol: f64,
    max_terms: usize,
) -> Result<(u64, f64)> {
    check_domain(r, z, tol)?;
    if z.re < 0.0 {
        return Err(Error::Domain(format!(
            "Gauss and Euler forms need Re z >= 0, got {z}"
        )));
    }
    smallest_terms(|n| euler_tail_bound(r, z, qp, n), tol, max_terms)
}
