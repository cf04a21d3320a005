//! Evaluation of the q-analogues `G_r(z; q)` of the multiple gamma functions,
//! for `0 < q < 1`, with certified truncation of every infinite product.
//!
//! ```
//! use qmg_core::{evaluate, ComplexValue, MethodChoice, Precision, QParam};
//!
//! let q = QParam::new(0.5).unwrap();
//! let g = evaluate(2, ComplexValue::new(3.0, 0.0), &q, &Precision::default(), MethodChoice::Auto).unwrap();
//! assert!((g.value.re - 1.5).abs() < 1e-12);
//! ```

pub mod altforms;
pub mod combinatorics;
pub mod error;
pub mod eval;
pub mod qcore;
pub mod qmultigamma;

pub use altforms::{gauss_terms, qmg_euler, qmg_gauss, qmg_gauss_certified, GaussPartial};
pub use combinatorics::{binom_int, g_exponent, gen_binom};
pub use error::{Error, Result};
pub use eval::{evaluate, MethodChoice};
pub use qcore::{
    principal_log, q_gamma, q_gamma_euler, q_gamma_gauss, q_number, q_pow, ComplexValue,
    EvalResult, Method, Precision, QParam, MAX_Q, MIN_TOL, POLE_THRESHOLD,
};
pub use qmultigamma::{
    euler_tail_bound, log_qmg_deriv, log_qmg_integer_closed, log_qmg_product, product_tail_bound,
    qmg, qmg_integer_closed, qmg_recurrence, truncation_length, LogProduct,
};
