//! Base q-arithmetic: q-powers, q-numbers, the q-gamma function and the
//! log-domain helpers shared by the other evaluators.
//!
//! Products are accumulated as sums of principal-branch logarithms of their
//! factors and exponentiated once at the end. The branch of every returned
//! `log_value` is therefore the factorwise principal-log sum, which is a
//! continuous branch on the region where the product converges.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::combinatorics::geometric_tail;
use crate::error::{Error, Result};

/// A complex number in double precision.
pub type ComplexValue = Complex64;

/// Largest accepted base. Truncation lengths grow like `1 / (1 - q)`.
pub const MAX_Q: f64 = 1.0 - 1e-6;

/// A factor `1 - q^w` smaller than this in magnitude is treated as a pole.
pub const POLE_THRESHOLD: f64 = 1e-13;

/// Tolerances below this cannot be told apart from rounding noise and are
/// rejected as an exhausted budget.
pub const MIN_TOL: f64 = 1e-20;

/// The base `q`, with `log q`, `1 - q` and `log(1 - q)` cached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QParam {
    q: f64,
    log_q: f64,
    one_minus_q: f64,
    log_one_minus_q: f64,
}

impl QParam {
    pub fn new(q: f64) -> Result<Self> {
        if !(q > 0.0 && q <= MAX_Q) {
            return Err(Error::Domain(format!(
                "q must lie in (0, {MAX_Q}], got {q}"
            )));
        }
        Ok(Self {
            q,
            log_q: q.ln(),
            one_minus_q: 1.0 - q,
            log_one_minus_q: (-q).ln_1p(),
        })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn log_q(&self) -> f64 {
        self.log_q
    }

    pub fn one_minus_q(&self) -> f64 {
        self.one_minus_q
    }

    /// `log(1 - q)`, always negative.
    pub fn log_one_minus_q(&self) -> f64 {
        self.log_one_minus_q
    }

    /// `q^x` for real `x`.
    pub fn pow_real(&self, x: f64) -> f64 {
        (x * self.log_q).exp()
    }

    /// Nearest point `l + 2*pi*i*m / log q` of the singular lattice.
    pub fn nearest_lattice_point(&self, z: ComplexValue) -> ComplexValue {
        let period = 2.0 * PI / self.log_q.abs();
        ComplexValue::new(z.re.round(), (z.im / period).round() * period)
    }
}

/// Evaluation budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Precision {
    /// Target absolute error on the log of the result.
    pub tol: f64,
    /// Cap on the number of factors of any single truncated product.
    pub max_terms: usize,
    /// Cap on the number of functional-equation applications.
    pub max_continuation_steps: usize,
    /// Multiplier on every controller-chosen term count. `2` re-evaluates
    /// with doubled truncation, which is how soundness of the reported tail
    /// bounds is checked.
    pub oversample: usize,
}

impl Precision {
    pub fn new(tol: f64, max_terms: usize, max_continuation_steps: usize) -> Result<Self> {
        if tol.is_nan() || tol <= 0.0 || !tol.is_finite() {
            return Err(Error::Domain(format!("tol must be positive, got {tol}")));
        }
        if max_terms == 0 {
            return Err(Error::Domain("max_terms must be at least 1".into()));
        }
        if max_continuation_steps == 0 {
            return Err(Error::Domain(
                "max_continuation_steps must be at least 1".into(),
            ));
        }
        Ok(Self {
            tol,
            max_terms,
            max_continuation_steps,
            oversample: 1,
        })
    }

    pub fn with_tol(self, tol: f64) -> Self {
        Self { tol, ..self }
    }

    pub fn oversampled(self, factor: usize) -> Self {
        Self {
            oversample: factor.max(1),
            ..self
        }
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_terms: 200_000,
            max_continuation_steps: 10_000,
            oversample: 1,
        }
    }
}

/// Which expression produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Product,
    Gauss,
    Euler,
    Recurrence,
    Closed,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Product => "product",
            Method::Gauss => "gauss",
            Method::Euler => "euler",
            Method::Recurrence => "recurrence",
            Method::Closed => "closed",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A value together with its log and the diagnostics of the evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: ComplexValue,
    /// The factorwise principal-log branch; `value == exp(log_value)`.
    pub log_value: ComplexValue,
    pub terms_used: usize,
    /// Bound on the absolute error of `log_value`: the certified truncation
    /// bound plus an allowance for floating-point rounding.
    pub tail_bound: f64,
    pub method: Method,
    pub continuation_steps: usize,
}

impl EvalResult {
    pub(crate) fn from_log(
        log_value: ComplexValue,
        terms_used: usize,
        tail_bound: f64,
        method: Method,
        continuation_steps: usize,
    ) -> Result<Self> {
        if !(log_value.re.is_finite() && log_value.im.is_finite()) {
            return Err(Error::Domain(format!("non-finite log value {log_value}")));
        }
        let value = log_value.exp();
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::Range { log_value });
        }
        Ok(Self {
            value,
            log_value,
            terms_used,
            tail_bound,
            method,
            continuation_steps,
        })
    }
}

/// Neumaier-compensated running sum of complex terms.
///
/// Also tracks the total magnitude of the terms, from which
/// [`LogSum::rounding_allowance`] bounds the floating-point error of the
/// terms and of the sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct LogSum {
    re: f64,
    im: f64,
    re_c: f64,
    im_c: f64,
    magnitude: f64,
}

/// Allowance for floating-point error in a sum of terms whose magnitudes add
/// up to `magnitude`, each computed to a few ulps.
pub(crate) fn rounding_allowance(magnitude: f64) -> f64 {
    4.0 * f64::EPSILON * magnitude
}

fn neumaier(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

impl LogSum {
    pub(crate) fn add(&mut self, v: ComplexValue) {
        neumaier(&mut self.re, &mut self.re_c, v.re);
        neumaier(&mut self.im, &mut self.im_c, v.im);
        self.magnitude += v.norm();
    }

    pub(crate) fn add_real(&mut self, x: f64) {
        neumaier(&mut self.re, &mut self.re_c, x);
        self.magnitude += x.abs();
    }

    pub(crate) fn value(&self) -> ComplexValue {
        ComplexValue::new(self.re + self.re_c, self.im + self.im_c)
    }

    /// Sum of the magnitudes of all terms added so far.
    pub(crate) fn magnitude(&self) -> f64 {
        self.magnitude
    }

    pub(crate) fn rounding_allowance(&self) -> f64 {
        rounding_allowance(self.magnitude + self.value().norm())
    }
}

/// `q^z = exp(z log q)`.
pub fn q_pow(qp: &QParam, z: ComplexValue) -> ComplexValue {
    (z * qp.log_q).exp()
}

/// `exp(w) - 1` without cancellation for small `w`.
pub(crate) fn expm1_complex(w: ComplexValue) -> ComplexValue {
    let (s, c) = w.im.sin_cos();
    let half_sin = (0.5 * w.im).sin();
    let re = w.re.exp_m1() * c - 2.0 * half_sin * half_sin;
    let im = w.re.exp() * s;
    ComplexValue::new(re, im)
}

/// Principal `log(1 + u)` without cancellation for small `u`.
pub(crate) fn log1p_complex(u: ComplexValue) -> ComplexValue {
    let a = u.re;
    let b = u.im;
    let re = 0.5 * (2.0 * a + a * a + b * b).ln_1p();
    let im = b.atan2(1.0 + a);
    ComplexValue::new(re, im)
}

/// The q-number `[z] = (1 - q^z) / (1 - q)`.
pub fn q_number(qp: &QParam, z: ComplexValue) -> ComplexValue {
    -expm1_complex(z * qp.log_q) / qp.one_minus_q
}

/// `log|v| + i arg(v)` with `arg` in `(-pi, pi]`.
pub fn principal_log(v: ComplexValue) -> Result<ComplexValue> {
    if v.re == 0.0 && v.im == 0.0 {
        return Err(Error::Domain("logarithm of zero".into()));
    }
    let mut l = v.ln();
    if l.im == -PI {
        l.im = PI;
    }
    Ok(l)
}

/// `log(1 - q^w)` on the principal branch, for `Re w > 0`.
pub(crate) fn log_one_minus_qpow(qp: &QParam, w: ComplexValue) -> ComplexValue {
    log1p_complex(-q_pow(qp, w))
}

/// `log(1 - q^n)` for integer `n >= 1`.
pub(crate) fn log_one_minus_qpow_int(qp: &QParam, n: u64) -> f64 {
    (-qp.pow_real(n as f64)).ln_1p()
}

/// Principal log of the q-number `[w]`, raising `Pole` when `1 - q^w`
/// vanishes. `at` gives the argument reported in the error.
pub(crate) fn log_q_number_checked(
    qp: &QParam,
    w: ComplexValue,
    at: ComplexValue,
) -> Result<ComplexValue> {
    let numer = -expm1_complex(w * qp.log_q);
    if numer.norm() < POLE_THRESHOLD {
        return Err(Error::Pole {
            at: qp.nearest_lattice_point(at),
        });
    }
    Ok(principal_log(numer)? - qp.log_one_minus_q)
}

/// Smallest term count whose tail bound meets `tol`.
///
/// Doubles from 16 until the bound drops below `tol`, then bisects back to
/// the smallest admissible count. `bound` must be non-increasing.
pub(crate) fn smallest_terms(
    bound: impl Fn(u64) -> f64,
    tol: f64,
    max_terms: usize,
) -> Result<(u64, f64)> {
    if tol.is_nan() || tol < MIN_TOL {
        return Err(Error::Budget(format!(
            "tolerance {tol:e} is below the certifiable floor {MIN_TOL:e}"
        )));
    }
    let max_terms = max_terms as u64;
    let mut lo = 0u64;
    let mut hi = 16u64.min(max_terms);
    loop {
        let b = bound(hi);
        if b <= tol {
            break;
        }
        if hi >= max_terms {
            return Err(Error::Budget(format!(
                "tail bound {b:e} still above tol {tol:e} at max_terms = {max_terms}"
            )));
        }
        lo = hi;
        hi = (hi * 2).min(max_terms);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if bound(mid) <= tol {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let hi = hi.max(1);
    Ok((hi, bound(hi)))
}

/// Applies `prec.oversample` to a controller choice and recomputes the bound.
pub(crate) fn choose_terms(
    bound: impl Fn(u64) -> f64,
    prec: &Precision,
    tol: f64,
) -> Result<(u64, f64)> {
    let (n, b) = smallest_terms(&bound, tol, prec.max_terms)?;
    if prec.oversample > 1 {
        let n = n * prec.oversample as u64;
        Ok((n, bound(n)))
    } else {
        Ok((n, b))
    }
}

/// Tail bound of the q-gamma product `sum_{n > N} |log(1 - q^{z+n})| + |log(1 - q^n)|`
/// for `x = Re z > -1`, using `|log(1 - w)| <= |w| / (1 - |w|)`.
fn q_gamma_tail(qp: &QParam, x: f64, big_n: u64) -> f64 {
    let q = qp.q();
    let t = geometric_tail(0, big_n, q);
    let shifted = qp.pow_real(x) / (1.0 - qp.pow_real(x + big_n as f64 + 1.0));
    let plain = 1.0 / (1.0 - qp.pow_real(big_n as f64 + 1.0));
    t * (shifted + plain)
}

/// Tail bound of the Gauss and Euler forms of the q-gamma function, valid for
/// `Re z >= 0`.
fn q_gamma_euler_tail(qp: &QParam, z: ComplexValue, big_n: u64) -> f64 {
    let q = qp.q();
    let b = 2.0 + z.norm();
    let head = qp.pow_real(big_n as f64 + 1.0);
    b * head / ((1.0 - head) * (1.0 - q))
}

fn log_q_gamma_product(
    qp: &QParam,
    z: ComplexValue,
    prec: &Precision,
    tol: f64,
) -> Result<(ComplexValue, u64, f64)> {
    let x = z.re;
    let (big_n, bound) = choose_terms(|n| q_gamma_tail(qp, x, n), prec, tol)?;
    let shift_factor = expm1_complex(z * qp.log_q);
    let mut acc = LogSum::default();
    acc.add(-z * qp.log_one_minus_q);
    for n in 1..=big_n {
        let w = z + n as f64;
        let u = q_pow(qp, w);
        if (ComplexValue::new(1.0, 0.0) - u).norm() < POLE_THRESHOLD {
            return Err(Error::Pole {
                at: qp.nearest_lattice_point(z),
            });
        }
        // log((1 - q^{z+n}) / (1 - q^n)) = log(1 - q^n (q^z - 1) / (1 - q^n))
        let nf = n as f64;
        let ratio = qp.pow_real(nf) * shift_factor / -(nf * qp.log_q).exp_m1();
        acc.add(-log1p_complex(-ratio));
    }
    Ok((acc.value(), big_n, bound + acc.rounding_allowance()))
}

/// The q-gamma function `Gamma(z + 1; q)` from its defining product
/// `(1-q)^{-z} prod_n ((1 - q^{z+n}) / (1 - q^n))^{-1}`.
///
/// For `Re z <= -1` the argument is first shifted right with
/// `Gamma(w + 1; q) = [w] Gamma(w; q)`.
pub fn q_gamma(qp: &QParam, z: ComplexValue, prec: &Precision) -> Result<EvalResult> {
    if z.re > -1.0 {
        let (log, n, bound) = log_q_gamma_product(qp, z, prec, prec.tol)?;
        return EvalResult::from_log(log, n as usize, bound, Method::Product, 0);
    }
    let k = (-1.0 - z.re).floor() as usize + 1;
    if k > prec.max_continuation_steps {
        return Err(Error::Budget(format!(
            "{k} continuation steps needed, limit {}",
            prec.max_continuation_steps
        )));
    }
    let shifted = z + k as f64;
    let (log, n, bound) = log_q_gamma_product(qp, shifted, prec, prec.tol)?;
    let mut acc = LogSum::default();
    acc.add(log);
    for j in 1..=k {
        acc.add(-log_q_number_checked(qp, z + j as f64, z)?);
    }
    let bound = bound + acc.rounding_allowance();
    EvalResult::from_log(acc.value(), n as usize, bound, Method::Recurrence, k)
}

/// Gauss-type partial product for `Gamma(z + 1; q)` at a fixed `N`:
/// `[1]...[N] / ([z+1]...[z+N]) [N+1]^z`.
pub fn q_gamma_gauss(qp: &QParam, z: ComplexValue, big_n: u64) -> Result<EvalResult> {
    if z.re < 0.0 {
        return Err(Error::Domain(format!(
            "Gauss form needs Re z >= 0, got {z}"
        )));
    }
    if big_n == 0 {
        return Err(Error::Domain("Gauss form needs N >= 1".into()));
    }
    let mut acc = LogSum::default();
    for k in 1..=big_n {
        acc.add_real(log_one_minus_qpow_int(qp, k) - qp.log_one_minus_q);
        acc.add(-(log_one_minus_qpow(qp, z + k as f64) - qp.log_one_minus_q));
    }
    let log_last = log_one_minus_qpow_int(qp, big_n + 1) - qp.log_one_minus_q;
    acc.add(z * log_last);
    EvalResult::from_log(
        acc.value(),
        big_n as usize,
        q_gamma_euler_tail(qp, z, big_n) + acc.rounding_allowance(),
        Method::Gauss,
        0,
    )
}

/// Euler-type product for `Gamma(z + 1; q)`:
/// `prod_n ([n+1]/[n])^z ([z+n]/[n])^{-1}`.
pub fn q_gamma_euler(qp: &QParam, z: ComplexValue, prec: &Precision) -> Result<EvalResult> {
    if z.re < 0.0 {
        return Err(Error::Domain(format!(
            "Euler form needs Re z >= 0, got {z}"
        )));
    }
    let (big_n, bound) = choose_terms(|n| q_gamma_euler_tail(qp, z, n), prec, prec.tol)?;
    let mut acc = LogSum::default();
    let mut log_n = log_one_minus_qpow_int(qp, 1) - qp.log_one_minus_q;
    for n in 1..=big_n {
        let log_next = log_one_minus_qpow_int(qp, n + 1) - qp.log_one_minus_q;
        let log_zn = log_one_minus_qpow(qp, z + n as f64) - qp.log_one_minus_q;
        acc.add(z * (log_next - log_n) - (log_zn - log_n));
        log_n = log_next;
    }
    let bound = bound + acc.rounding_allowance();
    EvalResult::from_log(acc.value(), big_n as usize, bound, Method::Euler, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexValue {
        ComplexValue::new(re, im)
    }

    fn qp(q: f64) -> QParam {
        QParam::new(q).unwrap()
    }

    #[test]
    fn qparam_rejects_out_of_range() {
        for q in [0.0, -0.5, 1.0, 1.5, f64::NAN, 1.0 - 1e-7] {
            assert!(QParam::new(q).is_err(), "q = {q}");
        }
        let p = qp(0.3);
        assert!(p.log_q() < 0.0);
        assert!((p.log_q().exp() - 0.3).abs() <= f64::EPSILON);
    }

    #[test]
    fn precision_validation() {
        assert!(Precision::new(0.0, 10, 10).is_err());
        assert!(Precision::new(1e-9, 0, 10).is_err());
        assert!(Precision::new(1e-9, 10, 0).is_err());
        assert!(Precision::new(1e-9, 10, 10).is_ok());
    }

    #[test]
    fn q_pow_examples() {
        assert!((q_pow(&qp(0.5), c(1.0, 0.0)) - c(0.5, 0.0)).norm() < 1e-16);
        assert_eq!(q_pow(&qp(0.5), c(0.0, 0.0)), c(1.0, 0.0));
        assert!((q_pow(&qp(0.25), c(0.5, 0.0)) - c(0.5, 0.0)).norm() < 1e-16);
        let z = c(0.7, 2.3);
        assert!((q_pow(&qp(0.4), z).norm() - 0.4f64.powf(0.7)).abs() < 1e-15);
    }

    #[test]
    fn q_number_examples() {
        for q in [0.1, 0.5, 0.9] {
            assert!((q_number(&qp(q), c(1.0, 0.0)) - c(1.0, 0.0)).norm() < 1e-15);
            assert_eq!(q_number(&qp(q), c(0.0, 0.0)), c(0.0, 0.0));
        }
        assert!((q_number(&qp(0.5), c(2.0, 0.0)) - c(1.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn principal_log_examples() {
        assert_eq!(principal_log(c(1.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert!((principal_log(c(-1.0, 0.0)).unwrap() - c(0.0, PI)).norm() < 1e-16);
        assert!((principal_log(c(-1.0, -0.0)).unwrap() - c(0.0, PI)).norm() < 1e-16);
        assert!((principal_log(c(std::f64::consts::E, 0.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-16);
        assert!(matches!(principal_log(c(0.0, 0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn log1p_complex_small_argument() {
        let u = c(1e-12, -3e-13);
        let l = log1p_complex(u);
        // log(1+u) = u - u^2/2 + ...
        let series = u - u * u / 2.0;
        assert!((l - series).norm() < 1e-27);
    }

    #[test]
    fn q_gamma_examples() {
        let p = qp(0.5);
        let prec = Precision::default();
        assert!((q_gamma(&p, c(0.0, 0.0), &prec).unwrap().value - c(1.0, 0.0)).norm() < 1e-14);
        assert!((q_gamma(&p, c(1.0, 0.0), &prec).unwrap().value - c(1.0, 0.0)).norm() < 1e-12);
        // Gamma(3; q) = [2][1] by repeated application of the functional equation
        let oracle = q_number(&p, c(2.0, 0.0)) * q_number(&p, c(1.0, 0.0));
        assert!((q_gamma(&p, c(2.0, 0.0), &prec).unwrap().value - oracle).norm() < 1e-12);
    }

    #[test]
    fn q_gamma_pole_and_continuation() {
        let p = qp(0.5);
        let prec = Precision::default();
        // Gamma(z + 1) has poles at z = -1, -2, ...
        for z in [c(-1.0, 0.0), c(-3.0, 0.0), c(-2.0, 2.0 * PI / p.log_q())] {
            match q_gamma(&p, z, &prec) {
                Err(Error::Pole { at }) => assert!((at - z).norm() < 1e-12, "{at} vs {z}"),
                other => panic!("expected pole at {z}, got {other:?}"),
            }
        }
        let z = c(-2.5, 0.3);
        let left = q_gamma(&p, z, &prec).unwrap();
        assert_eq!(left.method, Method::Recurrence);
        assert_eq!(left.continuation_steps, 2);
        let right = q_gamma(&p, z + 1.0, &prec).unwrap();
        let lhs = right.value;
        let rhs = q_number(&p, z + 1.0) * left.value;
        assert!((lhs - rhs).norm() / lhs.norm() < 1e-12);
    }

    #[test]
    fn q_gamma_budget_errors() {
        let p = qp(0.5);
        let prec = Precision::default().with_tol(1e-30);
        assert!(matches!(
            q_gamma(&p, c(1.0, 0.0), &prec),
            Err(Error::Budget(_))
        ));
        let prec = Precision::new(1e-12, 8, 10).unwrap();
        assert!(matches!(
            q_gamma(&p, c(1.0, 0.0), &prec),
            Err(Error::Budget(_))
        ));
        let prec = Precision::new(1e-12, 1000, 3).unwrap();
        assert!(matches!(
            q_gamma(&p, c(-10.5, 0.0), &prec),
            Err(Error::Budget(_))
        ));
    }

    #[test]
    fn smallest_terms_is_minimal() {
        let bound = |n: u64| 0.5f64.powi(n as i32);
        let (n, b) = smallest_terms(bound, 1e-12, 1000).unwrap();
        assert!(b <= 1e-12);
        assert!(bound(n - 1) > 1e-12);
        assert_eq!(n, 40);
        let (n, _) = smallest_terms(bound, 1.0, 1000).unwrap();
        assert_eq!(n, 1);
    }

    #[test]
    fn gauss_and_euler_forms_match_product() {
        let p = qp(0.5);
        let prec = Precision::default();
        let z = c(1.3, 0.7);
        let prod = q_gamma(&p, z, &prec).unwrap();
        let euler = q_gamma_euler(&p, z, &prec).unwrap();
        let (n, _) =
            smallest_terms(|n| q_gamma_euler_tail(&p, z, n), prec.tol, prec.max_terms).unwrap();
        let gauss = q_gamma_gauss(&p, z, n).unwrap();
        assert!((prod.value - euler.value).norm() < 1e-11);
        assert!((prod.value - gauss.value).norm() < 1e-11);
        assert!(euler.tail_bound <= prec.tol);
    }
}
