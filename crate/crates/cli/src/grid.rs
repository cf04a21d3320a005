use qmg_core::{evaluate, ComplexValue, Error, MethodChoice, Precision, QParam};
use rayon::prelude::*;

use crate::exit::Exit;
use crate::output::GridRow;

/// `steps` points from `start` to `end`, both included.
pub fn grid_points(start: ComplexValue, end: ComplexValue, steps: u64) -> Vec<ComplexValue> {
    if steps == 1 {
        return vec![start];
    }
    let last = (steps - 1) as f64;
    (0..steps)
        .map(|i| {
            if i == steps - 1 {
                end
            } else {
                start + (end - start) * (i as f64 / last)
            }
        })
        .collect()
}

/// Evaluates every point in parallel; rows come back in grid order together
/// with the most severe exit condition seen.
pub fn run_grid(
    r: u32,
    qp: &QParam,
    prec: &Precision,
    method: MethodChoice,
    points: &[ComplexValue],
) -> (Vec<GridRow>, Exit, Vec<String>) {
    let results: Vec<_> = points
        .par_iter()
        .map(|&z| (z, evaluate(r, z, qp, prec, method)))
        .collect();
    let mut exit = Exit::Ok;
    let mut notes = Vec::new();
    let rows = results
        .into_iter()
        .map(|(z, res)| match res {
            Ok(e) => GridRow::new(z, Some(e.value), Some(e.log_value), Some(e.terms_used)),
            Err(err) => {
                exit = exit.max(Exit::from_error(&err));
                notes.push(format!("z = {z}: {err}"));
                let log = match err {
                    Error::Range { log_value } => Some(log_value),
                    _ => None,
                };
                GridRow::new(z, None, log, None)
            }
        })
        .collect();
    (rows, exit, notes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexValue {
        ComplexValue::new(re, im)
    }

    #[test]
    fn endpoints_are_included() {
        let pts = grid_points(c(1.0, 0.0), c(5.0, 2.0), 5);
        assert_eq!(pts.len(), 5);
        assert_eq!(pts[0], c(1.0, 0.0));
        assert_eq!(pts[4], c(5.0, 2.0));
        assert_eq!(pts[2], c(3.0, 1.0));
        assert_eq!(grid_points(c(2.0, 0.0), c(9.0, 0.0), 1), vec![c(2.0, 0.0)]);
    }

    #[test]
    fn pole_rows_do_not_abort_the_grid() {
        let qp = QParam::new(0.5).unwrap();
        let pts = grid_points(c(-3.0, 0.0), c(1.0, 0.0), 5);
        let (rows, exit, notes) = run_grid(2, &qp, &Precision::default(), MethodChoice::Auto, &pts);
        assert_eq!(exit, Exit::Pole);
        assert_eq!(rows.len(), 5);
        assert_eq!(notes.len(), 3);
        assert!(rows[0].g_re.is_none() && rows[2].g_re.is_none());
        assert!(rows[3].g_re.is_some() && rows[4].g_re.is_some());
    }
}
