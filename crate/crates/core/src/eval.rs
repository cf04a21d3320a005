//! Single entry point that evaluates `G_r(z + 1; q)` with a chosen method.

use std::fmt;
use std::str::FromStr;

use crate::altforms::{qmg_euler, qmg_gauss_certified};
use crate::error::{Error, Result};
use crate::qcore::{ComplexValue, EvalResult, Method, Precision, QParam};
use crate::qmultigamma::{log_qmg_integer_closed, log_qmg_product, qmg, qmg_recurrence};

/// Method requested by the caller. `Auto` picks the cheapest applicable one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MethodChoice {
    #[default]
    Auto,
    Product,
    Gauss,
    Euler,
    Recurrence,
    Closed,
}

impl MethodChoice {
    pub const ALL: [MethodChoice; 6] = [
        MethodChoice::Auto,
        MethodChoice::Product,
        MethodChoice::Gauss,
        MethodChoice::Euler,
        MethodChoice::Recurrence,
        MethodChoice::Closed,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MethodChoice::Auto => "auto",
            MethodChoice::Product => "product",
            MethodChoice::Gauss => "gauss",
            MethodChoice::Euler => "euler",
            MethodChoice::Recurrence => "recurrence",
            MethodChoice::Closed => "closed",
        }
    }
}

impl fmt::Display for MethodChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MethodChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::Domain(format!("unknown method '{s}'")))
    }
}

/// `Some(N)` when `z` is exactly the non-negative integer `N`.
fn as_nonneg_integer(z: ComplexValue) -> Option<u64> {
    if z.im == 0.0 && z.re >= 0.0 && z.re.fract() == 0.0 && z.re < 9.0e15 {
        Some(z.re as u64)
    } else {
        None
    }
}

fn shift_pole(err: Error, by: f64) -> Error {
    match err {
        Error::Pole { at } => Error::Pole { at: at + by },
        other => other,
    }
}

/// `G_r(z + 1; q)`.
///
/// Singular points are reported in `z` coordinates.
pub fn evaluate(
    r: u32,
    z: ComplexValue,
    qp: &QParam,
    prec: &Precision,
    choice: MethodChoice,
) -> Result<EvalResult> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite argument {z}")));
    }
    let w = z + 1.0;
    match choice {
        _ if r == 0 && choice != MethodChoice::Closed => {
            qmg(0, w, qp, prec).map_err(|e| shift_pole(e, -1.0))
        }
        MethodChoice::Auto => match as_nonneg_integer(z) {
            Some(n) if n <= 100_000 => closed(r, n, qp),
            _ => qmg(r, w, qp, prec).map_err(|e| shift_pole(e, -1.0)),
        },
        MethodChoice::Product => {
            let p = log_qmg_product(r, z, qp, prec)?;
            EvalResult::from_log(p.log_sum, p.terms_used, p.tail_bound, Method::Product, 0)
        }
        MethodChoice::Recurrence => {
            qmg_recurrence(r, w, qp, prec, 1).map_err(|e| shift_pole(e, -1.0))
        }
        MethodChoice::Gauss => qmg_gauss_certified(r, z, qp, prec),
        MethodChoice::Euler => qmg_euler(r, z, qp, prec),
        MethodChoice::Closed => match as_nonneg_integer(z) {
            Some(n) => closed(r, n, qp),
            None => Err(Error::Domain(format!(
                "closed form needs a non-negative integer argument, got {z}"
            ))),
        },
    }
}

fn closed(r: u32, n: u64, qp: &QParam) -> Result<EvalResult> {
    let log = log_qmg_integer_closed(r, n, qp);
    EvalResult::from_log(
        ComplexValue::new(log, 0.0),
        n as usize,
        0.0,
        Method::Closed,
        0,
    )
}
