//! The q-analogue of the multiple gamma functions `G_r(z; q)`.
//!
//! For `r >= 1` and `Re z > 0`,
//!
//! ```text
//! G_r(z+1; q) = (1-q)^{-binom(z, r)} prod_{n>=1} ((1-q^{z+n}) / (1-q^n))^{(-1)^r binom(n+r-2, r-1)} (1-q^n)^{g_r(z, n)}
//! ```
//!
//! with `G_0(z+1; q) = [z+1]`. The product converges for `Re z > -1` and is
//! evaluated there directly; further left the functional equation
//! `G_r(z+1; q) = G_{r-1}(z; q) G_r(z; q)` is applied backwards.
//!
//! Singular points: every `G_r` is built from q-numbers `[z + j]`, which
//! vanish on the lattice `z = -j + 2 pi i m / log q`. Depending on the parity
//! of `r` the function has a pole or a zero there; in both cases the log is
//! singular and [`Error::Pole`] is raised.

mod deriv;
mod truncation;

pub use deriv::{log_qmg_deriv, log_qmg_deriv_tail_bound};
pub use truncation::{
    euler_tail_bound, gauss_truncation_length, product_tail_bound, truncation_length,
};

use crate::combinatorics::{binom_int, binom_table, factor_exponent, g_exponent_with};
use crate::error::{Error, Result};
use crate::qcore::{
    choose_terms, expm1_complex, log1p_complex, log_one_minus_qpow_int, log_q_number_checked,
    q_pow, rounding_allowance, ComplexValue, EvalResult, LogSum, Method, Precision, QParam,
};

/// Truncated log of the defining product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogProduct {
    pub log_sum: ComplexValue,
    pub terms_used: usize,
    /// Upper bound on the omitted log-factors plus a rounding allowance.
    pub tail_bound: f64,
}

/// `log G_r(z + 1; q)` from the defining product, for `r >= 1`, `Re z > -1`.
pub fn log_qmg_product(
    r: u32,
    z: ComplexValue,
    qp: &QParam,
    prec: &Precision,
) -> Result<LogProduct> {
    log_qmg_product_tol(r, z, qp, prec, prec.tol)
}

pub(crate) fn log_qmg_product_tol(
    r: u32,
    z: ComplexValue,
    qp: &QParam,
    prec: &Precision,
    tol: f64,
) -> Result<LogProduct> {
    if r == 0 {
        return Err(Error::Domain(
            "the defining product starts at r = 1; G_0 is the q-number".into(),
        ));
    }
    if z.re.is_nan() || z.re <= -1.0 || !z.im.is_finite() {
        return Err(Error::Domain(format!(
            "defining product needs Re z > -1, got {z}"
        )));
    }
    let (big_n, tail_bound) = choose_terms(|n| product_tail_bound(r, z, qp, n), prec, tol)?;
    let sign = if r.is_multiple_of(2) { 1.0 } else { -1.0 };
    let zb = binom_table(z, r);

    // q^z - 1
    let shift_factor = expm1_complex(z * qp.log_q());

    let mut acc = LogSum::default();
    acc.add(-zb[r as usize] * qp.log_one_minus_q());
    for n in 1..=big_n {
        let u = q_pow(qp, z + n as f64);
        if (ComplexValue::new(1.0, 0.0) - u).norm() < crate::qcore::POLE_THRESHOLD {
            return Err(Error::Pole {
                at: qp.nearest_lattice_point(z),
            });
        }
        let log_plain = log_one_minus_qpow_int(qp, n);
        // log((1 - q^{z+n}) / (1 - q^n)), small for large n
        let nf = n as f64;
        let ratio = qp.pow_real(nf) * shift_factor / -(nf * qp.log_q()).exp_m1();
        let log_ratio = log1p_complex(-ratio);
        let a = sign * factor_exponent(r, n);
        acc.add(log_ratio * a);
        acc.add(g_exponent_with(r, &zb, n) * log_plain);
    }
    Ok(LogProduct {
        log_sum: acc.value(),
        terms_used: big_n as usize,
        tail_bound: tail_bound + acc.rounding_allowance(),
    })
}

/// `log G_r(N + 1; q)` from the finite closed form
/// `(1-q)^{-binom(N, r)} prod_{n=1}^{N} (1-q^n)^{binom(N-n, r-1)}`.
///
/// `r = 0` gives `log [N + 1]`.
pub fn log_qmg_integer_closed(r: u32, big_n: u64, qp: &QParam) -> f64 {
    log_qmg_integer_closed_parts(r, big_n, qp).0
}

/// [`log_qmg_integer_closed`] together with the summed magnitude of its terms.
pub(crate) fn log_qmg_integer_closed_parts(r: u32, big_n: u64, qp: &QParam) -> (f64, f64) {
    let mut acc = LogSum::default();
    if r == 0 {
        acc.add_real(log_one_minus_qpow_int(qp, big_n + 1));
        acc.add_real(-qp.log_one_minus_q());
    } else {
        acc.add_real(-binom_int(big_n as i64, r) * qp.log_one_minus_q());
        for n in 1..=big_n {
            let e = binom_int((big_n - n) as i64, r - 1);
            if e != 0.0 {
                acc.add_real(e * log_one_minus_qpow_int(qp, n));
            }
        }
    }
    (acc.value().re, acc.magnitude())
}

/// `G_r(N + 1; q)` from the finite closed form; no truncation involved.
pub fn qmg_integer_closed(r: u32, big_n: u64, qp: &QParam) -> ComplexValue {
    ComplexValue::new(log_qmg_integer_closed(r, big_n, qp).exp(), 0.0)
}

/// `G_r(z; q)`.
///
/// `r = 0` is the q-number `[z]`. For `Re z > 0` the defining product at
/// `z - 1` is used; otherwise the argument is shifted right past `Re z = 1`.
pub fn qmg(r: u32, z: ComplexValue, qp: &QParam, prec: &Precision) -> Result<EvalResult> {
    if r == 0 {
        let log = log_q_number_checked(qp, z, z)?;
        return EvalResult::from_log(log, 0, 0.0, Method::Closed, 0);
    }
    if z.re > 0.0 {
        let p = log_qmg_product(r, z - 1.0, qp, prec)?;
        return EvalResult::from_log(p.log_sum, p.terms_used, p.tail_bound, Method::Product, 0);
    }
    qmg_recurrence(r, z, qp, prec, 0)
}

/// `G_r(z; q)` through `G_r(z) = G_r(z + k) / prod_{j<k} G_{r-1}(z + j)`,
/// taking at least `min_steps` shifts.
///
/// All levels are tabulated bottom-up: `log G_s(z + j)` for `j < k` follows
/// from `log G_s(z + j + 1) - log G_{s-1}(z + j)`, so each level needs one
/// direct product at `z + k` and `k` functional-equation steps.
pub fn qmg_recurrence(
    r: u32,
    z: ComplexValue,
    qp: &QParam,
    prec: &Precision,
    min_steps: usize,
) -> Result<EvalResult> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite argument {z}")));
    }
    if r == 0 {
        return qmg(0, z, qp, prec);
    }
    let needed = if z.re > 1.0 {
        0
    } else {
        (1.0 - z.re).floor() as usize + 1
    };
    let k = needed.max(min_steps);
    if k == 0 {
        let p = log_qmg_product(r, z - 1.0, qp, prec)?;
        return EvalResult::from_log(p.log_sum, p.terms_used, p.tail_bound, Method::Product, 0);
    }
    let steps = k.saturating_mul(r as usize);
    if steps > prec.max_continuation_steps {
        return Err(Error::Budget(format!(
            "{steps} continuation steps needed, limit {}",
            prec.max_continuation_steps
        )));
    }

    // level 0: log [z + j]
    let mut below: Vec<ComplexValue> = (0..k)
        .map(|j| log_q_number_checked(qp, z + j as f64, z))
        .collect::<Result<_>>()?;

    let mut terms = 0usize;
    let mut bound = 0.0;
    let mut magnitude = 0.0;
    let mut top = ComplexValue::new(0.0, 0.0);
    for s in 1..=r {
        // errors at level s reach the result C(k + r - s - 1, r - s) times
        let weight = binom_int((k + (r - s) as usize) as i64 - 1, r - s).max(1.0);
        let tol = prec.tol / (f64::from(r) * weight);
        let p = log_qmg_product_tol(s, z + (k as f64 - 1.0), qp, prec, tol)?;
        terms += p.terms_used;
        bound += weight * p.tail_bound;

        let mut level = vec![ComplexValue::new(0.0, 0.0); k];
        let mut cur = p.log_sum;
        for j in (0..k).rev() {
            cur -= below[j];
            level[j] = cur;
            magnitude += cur.norm() + below[j].norm();
        }
        top = cur;
        below = level;
    }
    let bound = bound + rounding_allowance(magnitude);
    EvalResult::from_log(top, terms, bound, Method::Recurrence, steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{q_gamma, q_number};

    fn c(re: f64, im: f64) -> ComplexValue {
        ComplexValue::new(re, im)
    }

    fn qp(q: f64) -> QParam {
        QParam::new(q).unwrap()
    }

    #[test]
    fn normalization_at_one() {
        let prec = Precision::default();
        for q in [0.2, 0.5, 0.9] {
            for r in 1..=5 {
                let p = log_qmg_product(r, c(0.0, 0.0), &qp(q), &prec).unwrap();
                assert!(p.log_sum.norm() < 1e-12, "r={r} q={q}: {}", p.log_sum);
                let g = qmg(r, c(1.0, 0.0), &qp(q), &prec).unwrap();
                assert!(g.log_value.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn r2_at_two_is_one() {
        let p = log_qmg_product(2, c(2.0, 0.0), &qp(0.5), &Precision::default()).unwrap();
        assert!((p.log_sum.exp() - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn r1_matches_q_gamma() {
        let prec = Precision::default();
        for z in [c(0.3, 0.0), c(1.7, -0.9), c(4.2, 2.5), c(-0.4, 0.3)] {
            let p = log_qmg_product(1, z, &qp(0.6), &prec).unwrap();
            let g = q_gamma(&qp(0.6), z, &prec).unwrap();
            assert!((p.log_sum - g.log_value).norm() < 1e-12);
        }
    }

    #[test]
    fn g2_at_four_is_one_and_a_half() {
        let g = qmg(2, c(4.0, 0.0), &qp(0.5), &Precision::default()).unwrap();
        assert!((g.value - c(1.5, 0.0)).norm() < 1e-12);
        assert!((qmg_integer_closed(2, 3, &qp(0.5)) - c(1.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn r0_is_q_number() {
        let prec = Precision::default();
        for z in [c(2.0, 0.0), c(0.4, 1.1), c(-3.3, 0.2)] {
            let g = qmg(0, z, &qp(0.5), &prec).unwrap();
            assert!((g.value - q_number(&qp(0.5), z)).norm() < 1e-14);
        }
    }

    #[test]
    fn closed_form_examples() {
        let p = qp(0.5);
        assert!((qmg_integer_closed(1, 3, &p) - c(2.625, 0.0)).norm() < 1e-14);
        for q in [0.1, 0.5, 0.9] {
            assert!((qmg_integer_closed(2, 2, &qp(q)) - c(1.0, 0.0)).norm() < 1e-14);
            for r in 0..6 {
                let v = qmg_integer_closed(r, 0, &qp(q));
                assert!((v - c(1.0, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn recurrence_agrees_with_direct_product() {
        let prec = Precision::default();
        let p = qp(0.5);
        for r in 1..=4 {
            let z = c(2.3, 0.8);
            let direct = qmg(r, z, &p, &prec).unwrap();
            let shifted = qmg_recurrence(r, z, &p, &prec, 1).unwrap();
            assert_eq!(direct.method, Method::Product);
            assert_eq!(shifted.method, Method::Recurrence);
            assert_eq!(shifted.continuation_steps, r as usize);
            assert!(shifted.tail_bound <= prec.tol);
            let rel = (direct.value - shifted.value).norm() / direct.value.norm();
            assert!(rel < 1e-10, "r={r}: {rel}");
        }
    }

    #[test]
    fn singular_lattice_points() {
        let prec = Precision::default();
        let p = qp(0.5);
        let period = 2.0 * std::f64::consts::PI / p.log_q();
        for r in 1..=3 {
            for z in [c(0.0, 0.0), c(-2.0, 0.0), c(-1.0, period)] {
                match qmg(r, z, &p, &prec) {
                    Err(Error::Pole { at }) => assert!((at - z).norm() < 1e-9),
                    other => panic!("r={r} z={z}: expected pole, got {other:?}"),
                }
            }
        }
    }

    #[test]
    fn continuation_budget() {
        let prec = Precision::new(1e-12, 200_000, 10).unwrap();
        let err = qmg(3, c(-20.5, 0.0), &qp(0.5), &prec).unwrap_err();
        assert!(matches!(err, Error::Budget(_)));
    }

    #[test]
    fn large_values_report_range_error() {
        let err = qmg(4, c(60.0, 0.0), &qp(0.9), &Precision::default()).unwrap_err();
        assert!(matches!(err, Error::Range { .. }));
    }
}
