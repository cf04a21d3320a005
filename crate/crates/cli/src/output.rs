use std::fmt::Write as _;

use qmg_core::{ComplexValue, EvalResult};
use serde::Serialize;

/// The JSON record printed by `eval`.
#[derive(Debug, Serialize)]
pub struct Record {
    pub re: f64,
    pub im: f64,
    pub log_re: f64,
    pub log_im: f64,
    pub terms_used: usize,
    pub tail_bound: f64,
    pub method: &'static str,
    pub continuation_steps: usize,
}

impl From<&EvalResult> for Record {
    fn from(e: &EvalResult) -> Self {
        Self {
            re: e.value.re,
            im: e.value.im,
            log_re: e.log_value.re,
            log_im: e.log_value.im,
            terms_used: e.terms_used,
            tail_bound: e.tail_bound,
            method: e.method.as_str(),
            continuation_steps: e.continuation_steps,
        }
    }
}

pub const RECORD_HEADER: &str =
    "re,im,log_re,log_im,terms_used,tail_bound,method,continuation_steps";

impl Record {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            num(self.re),
            num(self.im),
            num(self.log_re),
            num(self.log_im),
            self.terms_used,
            num(self.tail_bound),
            self.method,
            self.continuation_steps
        )
    }
}

/// One grid row. `value` is `None` at singular points and `log` is `None`
/// when nothing finite is known.
#[derive(Debug, Clone, Serialize)]
pub struct GridRow {
    pub z_re: f64,
    pub z_im: f64,
    #[serde(rename = "G_re")]
    pub g_re: Option<f64>,
    #[serde(rename = "G_im")]
    pub g_im: Option<f64>,
    pub log_re: Option<f64>,
    pub log_im: Option<f64>,
    pub terms_used: Option<usize>,
}

pub const GRID_HEADER: &str = "z_re,z_im,G_re,G_im,log_re,log_im,terms_used";

impl GridRow {
    pub fn new(
        z: ComplexValue,
        value: Option<ComplexValue>,
        log: Option<ComplexValue>,
        terms_used: Option<usize>,
    ) -> Self {
        Self {
            z_re: z.re,
            z_im: z.im,
            g_re: value.map(|v| v.re),
            g_im: value.map(|v| v.im),
            log_re: log.map(|v| v.re),
            log_im: log.map(|v| v.im),
            terms_used,
        }
    }

    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| num(v.unwrap_or(f64::NAN));
        let mut line = String::new();
        write!(
            line,
            "{},{},{},{},{},{},",
            num(self.z_re),
            num(self.z_im),
            opt(self.g_re),
            opt(self.g_im),
            opt(self.log_re),
            opt(self.log_im)
        )
        .unwrap();
        match self.terms_used {
            Some(n) => write!(line, "{n}").unwrap(),
            None => line.push_str("nan"),
        }
        line
    }
}

/// Shortest round-trip decimal; non-finite values as `nan`, `inf`, `-inf`.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qmg_core::Method;

    #[test]
    fn json_key_order() {
        let e = EvalResult {
            value: ComplexValue::new(1.5, 0.0),
            log_value: ComplexValue::new(1.5f64.ln(), 0.0),
            terms_used: 3,
            tail_bound: 0.0,
            method: Method::Closed,
            continuation_steps: 0,
        };
        let json = Record::from(&e).to_json();
        let keys = [
            "\"re\"",
            "\"im\"",
            "\"log_re\"",
            "\"log_im\"",
            "\"terms_used\"",
            "\"tail_bound\"",
            "\"method\"",
            "\"continuation_steps\"",
        ];
        let positions: Vec<usize> = keys.iter().map(|k| json.find(k).unwrap()).collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]), "{json}");
        assert!(json.starts_with("{\"re\":1.5,\"im\":0.0,"), "{json}");
    }

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02e23] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(num(f64::NAN), "nan");
        assert_eq!(num(f64::NEG_INFINITY), "-inf");
    }

    #[test]
    fn pole_row_is_nan() {
        let row = GridRow::new(ComplexValue::new(-1.0, 0.0), None, None, None);
        assert_eq!(row.to_csv(), "-1,0,nan,nan,nan,nan,nan");
    }
}
