//! Gauss-type and Euler-type expressions for `G_r(z + 1; q)`:
//!
//! ```text
//! G_r(z+1) = lim_N  prod_{k=1}^{N} G_{r-1}(k) / G_{r-1}(z+k)  *  prod_{m=1}^{r} G_{r-m}(N+1)^{binom(z, m)}
//! G_r(z+1) = prod_{n>=1} G_{r-1}(n) / G_{r-1}(z+n)  *  prod_{m=1}^{r} (G_{r-m}(n+1) / G_{r-m}(n))^{binom(z, m)}
//! ```
//!
//! Both serve as cross-checks of the defining product. Values of `G` at
//! positive integers come from the exact finite product; values at `z + k`
//! come from the defining product. The Euler partial product after `N`
//! factors telescopes to the Gauss partial product at `N`, so one tail bound
//! ([`euler_tail_bound`]) certifies both.

use crate::combinatorics::binom_table;
use crate::error::{Error, Result};
use crate::qcore::{
    choose_terms, log_q_number_checked, rounding_allowance, ComplexValue, EvalResult, LogSum,
    Method, Precision, QParam,
};
use crate::qmultigamma::{euler_tail_bound, log_qmg_integer_closed_parts, log_qmg_product_tol};

/// A Gauss-type partial product at a fixed `N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussPartial {
    pub n: u64,
    pub value: ComplexValue,
    pub log_value: ComplexValue,
    /// Bound on the distance of `log_value` from the limit: the Gauss defect
    /// at `N`, the truncation bounds of the inner products and a rounding
    /// allowance.
    pub tail_bound: f64,
}

fn check_args(r: u32, z: ComplexValue) -> Result<()> {
    if r == 0 {
        return Err(Error::Domain("Gauss and Euler forms need r >= 1".into()));
    }
    if z.re.is_nan() || z.re < 0.0 || !z.im.is_finite() {
        return Err(Error::Domain(format!(
            "Gauss and Euler forms need Re z >= 0, got {z}"
        )));
    }
    Ok(())
}

/// `log G_s(w; q)` for `Re w > 1`, with its truncation bound.
fn log_g_shifted(
    s: u32,
    w: ComplexValue,
    qp: &QParam,
    prec: &Precision,
    tol: f64,
) -> Result<(ComplexValue, f64)> {
    if s == 0 {
        return Ok((log_q_number_checked(qp, w, w)?, 0.0));
    }
    let p = log_qmg_product_tol(s, w - 1.0, qp, prec, tol)?;
    Ok((p.log_sum, p.tail_bound))
}

/// `log G_s(j; q)` for integer `j >= 1`, with the summed magnitude of the
/// terms of its finite product.
fn log_g_integer(s: u32, j: u64, qp: &QParam) -> (f64, f64) {
    log_qmg_integer_closed_parts(s, j - 1, qp)
}

/// Gauss-type partial product for `G_r(z + 1; q)` at `N`.
pub fn qmg_gauss(
    r: u32,
    z: ComplexValue,
    qp: &QParam,
    big_n: u64,
    prec: &Precision,
) -> Result<GaussPartial> {
    check_args(r, z)?;
    if big_n == 0 {
        return Err(Error::Domain("Gauss form needs N >= 1".into()));
    }
    let inner_tol = prec.tol / (2.0 * big_n as f64);
    let mut acc = LogSum::default();
    let mut inner_bound = 0.0;
    // magnitudes hidden inside the closed-form values
    let mut hidden = 0.0;
    for k in 1..=big_n {
        let (l, mag) = log_g_integer(r - 1, k, qp);
        acc.add_real(l);
        hidden += mag;
        let (l, b) = log_g_shifted(r - 1, z + k as f64, qp, prec, inner_tol)?;
        acc.add(-l);
        inner_bound += b;
    }
    let zb = binom_table(z, r);
    for m in 1..=r {
        let (l, mag) = log_g_integer(r - m, big_n + 1, qp);
        acc.add(zb[m as usize] * l);
        hidden += zb[m as usize].norm() * mag;
    }
    let log_value = acc.value();
    let value = log_value.exp();
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::Range { log_value });
    }
    Ok(GaussPartial {
        n: big_n,
        value,
        log_value,
        tail_bound: euler_tail_bound(r, z, qp, big_n)
            + inner_bound
            + acc.rounding_allowance()
            + rounding_allowance(hidden),
    })
}

/// Partial length for the Gauss and Euler forms: the defect bound gets half
/// of `prec.tol`, the inner products share the other half.
pub fn gauss_terms(r: u32, z: ComplexValue, qp: &QParam, prec: &Precision) -> Result<u64> {
    check_args(r, z)?;
    let (n, _) = choose_terms(|n| euler_tail_bound(r, z, qp, n), prec, 0.5 * prec.tol)?;
    Ok(n)
}

/// Gauss-type form at the controller-chosen `N`, packaged as an [`EvalResult`].
pub fn qmg_gauss_certified(
    r: u32,
    z: ComplexValue,
    qp: &QParam,
    prec: &Precision,
) -> Result<EvalResult> {
    let n = gauss_terms(r, z, qp, prec)?;
    let g = qmg_gauss(r, z, qp, n, prec)?;
    EvalResult::from_log(g.log_value, n as usize, g.tail_bound, Method::Gauss, 0)
}

/// Euler-type product for `G_r(z + 1; q)`, truncated once the tail is
/// certified below `prec.tol`.
pub fn qmg_euler(r: u32, z: ComplexValue, qp: &QParam, prec: &Precision) -> Result<EvalResult> {
    check_args(r, z)?;
    let (big_n, defect) = choose_terms(|n| euler_tail_bound(r, z, qp, n), prec, 0.5 * prec.tol)?;
    let inner_tol = prec.tol / (2.0 * big_n as f64);

    // integer_logs[s][j] = (log G_s(j), magnitude) for j = 1..=N+1 (index 0 unused)
    let integer_logs: Vec<Vec<(f64, f64)>> = (0..r)
        .map(|s| {
            let mut row = vec![(0.0, 0.0); big_n as usize + 2];
            for j in 1..=big_n + 1 {
                row[j as usize] = log_g_integer(s, j, qp);
            }
            row
        })
        .collect();
    let zb = binom_table(z, r);

    let mut acc = LogSum::default();
    let mut inner_bound = 0.0;
    // every factor is a small difference of large logs; its rounding error
    // scales with the size of the pieces, not of the factor
    let mut pieces = 0.0;
    for n in 1..=big_n {
        let n = n as usize;
        let (shifted, b) = log_g_shifted(r - 1, z + n as f64, qp, prec, inner_tol)?;
        inner_bound += b;
        let (own, own_mag) = integer_logs[(r - 1) as usize][n];
        let mut factor = ComplexValue::new(own, 0.0) - shifted;
        pieces += own_mag + shifted.norm();
        for m in 1..=r {
            let row = &integer_logs[(r - m) as usize];
            let w = zb[m as usize];
            factor += w * (row[n + 1].0 - row[n].0);
            pieces += w.norm() * (row[n + 1].1 + row[n].1);
        }
        acc.add(factor);
    }
    EvalResult::from_log(
        acc.value(),
        big_n as usize,
        defect + inner_bound + acc.rounding_allowance() + rounding_allowance(pieces),
        Method::Euler,
        0,
    )
}
