use crate::combinatorics::geometric_tail;
use crate::error::{Error, Result};
use crate::qcore::{choose_terms, Precision, QParam};

/// Bound on the tail `k > K` of the log-derivative series at real `z >= 0`.
///
/// The sum over `n` is done exactly, leaving terms `k^r y^k / (1 - q^k)^r`
/// with `y = q^{z+1}`. For `k > K`, `k^r <= r! binom(k + r - 1, r)` and
/// `(1 - q^k)^{-r} <= (1 - q^{K+1})^{-r}`.
pub fn log_qmg_deriv_tail_bound(r: u32, z: f64, qp: &QParam, big_k: u64) -> f64 {
    let y = qp.pow_real(z + 1.0);
    let r_fact: f64 = (1..=r).map(f64::from).product();
    let scale = (-qp.log_q()).powi(r as i32 + 1);
    let denom = (1.0 - qp.pow_real(big_k as f64 + 1.0)).powi(r as i32);
    scale * r_fact * geometric_tail(r, big_k, y) / denom
}

/// The `(r+1)`-th derivative of `log G_r(z + 1; q)` at real `z >= 0`:
///
/// ```text
/// (-log q)^{r+1} sum_{n>=1} sum_{k>=1} binom(n+r-2, r-1) k^r q^{(z+n)k}
/// ```
///
/// The inner sum over `n` is `q^{(z+1)k} / (1 - q^k)^r`. Every term is
/// positive, so the result is strictly positive.
pub fn log_qmg_deriv(r: u32, z: f64, qp: &QParam, prec: &Precision) -> Result<f64> {
    if r == 0 {
        return Err(Error::Domain("log-derivative series needs r >= 1".into()));
    }
    if z.is_nan() || z < 0.0 || !z.is_finite() {
        return Err(Error::Domain(format!(
            "log-derivative series needs real z >= 0, got {z}"
        )));
    }
    let (big_k, _) = choose_terms(|k| log_qmg_deriv_tail_bound(r, z, qp, k), prec, prec.tol)?;
    let ri = r as i32;
    let mut sum = 0.0;
    // smallest terms first
    for k in (1..=big_k).rev() {
        let kf = k as f64;
        let one_minus_qk = -(kf * qp.log_q()).exp_m1();
        let term = kf.powi(ri) * qp.pow_real((z + 1.0) * kf) / one_minus_qk.powi(ri);
        sum += term;
    }
    Ok((-qp.log_q()).powi(ri + 1) * sum)
}
