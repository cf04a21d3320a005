//! The invariant suite behind `qmg check`.

use qmg_core::{
    binom_int, evaluate, g_exponent, gen_binom, log_qmg_deriv, log_qmg_integer_closed,
    log_qmg_product, q_gamma, q_gamma_euler, q_gamma_gauss, q_number, qmg, qmg_euler, qmg_gauss,
    qmg_gauss_certified, qmg_recurrence, ComplexValue, Error, EvalResult, MethodChoice, Precision,
    QParam,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::exit::Exit;

type Result<T> = std::result::Result<T, Error>;

const QS: [f64; 3] = [0.2, 0.5, 0.9];

/// How an observed statistic is compared with its threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    AtMost,
    Above,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Outcome {
    pub observed: f64,
    pub threshold: f64,
    pub bound: Bound,
}

impl Outcome {
    fn at_most(observed: f64, threshold: f64) -> Self {
        Self {
            observed,
            threshold,
            bound: Bound::AtMost,
        }
    }

    pub fn passed(&self) -> bool {
        match self.bound {
            Bound::AtMost => self.observed <= self.threshold,
            Bound::Above => self.observed > self.threshold,
        }
    }
}

pub struct Family {
    pub name: &'static str,
    run: fn(&mut ChaCha8Rng, &Precision) -> Result<Outcome>,
}

pub struct Report {
    pub name: &'static str,
    pub outcome: Result<Outcome>,
}

impl Report {
    pub fn line(&self) -> String {
        match &self.outcome {
            Ok(o) => {
                let op = match o.bound {
                    Bound::AtMost => "<=",
                    Bound::Above => "> ",
                };
                let status = if o.passed() { "PASS" } else { "FAIL" };
                format!(
                    "{:<28} {:>11.3e} {op} {:<9.1e} {status}",
                    self.name, o.observed, o.threshold
                )
            }
            Err(e) => format!("{:<28} ERROR {e}", self.name),
        }
    }

    pub fn exit(&self) -> Exit {
        match &self.outcome {
            Ok(o) if o.passed() => Exit::Ok,
            Ok(_) => Exit::Invariant,
            Err(e @ (Error::Budget(_) | Error::Range { .. })) => Exit::from_error(e),
            Err(_) => Exit::Invariant,
        }
    }
}

pub fn families() -> Vec<Family> {
    vec![
        Family {
            name: "q_number_shift",
            run: q_number_shift,
        },
        Family {
            name: "q_gamma_functional_eq",
            run: q_gamma_functional_eq,
        },
        Family {
            name: "q_gamma_factorial",
            run: q_gamma_factorial,
        },
        Family {
            name: "q_gamma_three_forms",
            run: q_gamma_three_forms,
        },
        Family {
            name: "binom_pascal",
            run: binom_pascal,
        },
        Family {
            name: "g_difference",
            run: g_difference,
        },
        Family {
            name: "binomial_sum_identity",
            run: binomial_sum_identity,
        },
        Family {
            name: "exponent_sum_identity",
            run: exponent_sum_identity,
        },
        Family {
            name: "functional_equation",
            run: functional_equation,
        },
        Family {
            name: "normalization",
            run: normalization,
        },
        Family {
            name: "integer_closed_form",
            run: integer_closed_form,
        },
        Family {
            name: "reduction",
            run: reduction,
        },
        Family {
            name: "continuation",
            run: continuation,
        },
        Family {
            name: "log_convexity",
            run: log_convexity,
        },
        Family {
            name: "three_way_agreement",
            run: three_way_agreement,
        },
        Family {
            name: "gauss_convergence",
            run: gauss_convergence,
        },
        Family {
            name: "telescoping",
            run: telescoping,
        },
        Family {
            name: "truncation_soundness",
            run: truncation_soundness,
        },
    ]
}

/// Runs every family, each on its own ChaCha stream of `seed`.
pub fn run_all(seed: u64, prec: &Precision) -> Vec<Report> {
    families()
        .into_par_iter()
        .enumerate()
        .map(|(i, f)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            Report {
                name: f.name,
                outcome: (f.run)(&mut rng, prec),
            }
        })
        .collect()
}

fn c(re: f64, im: f64) -> ComplexValue {
    ComplexValue::new(re, im)
}

fn qp(q: f64) -> QParam {
    QParam::new(q).expect("fixed q values are valid")
}

fn right_half(rng: &mut ChaCha8Rng, count: usize) -> Vec<ComplexValue> {
    (0..count)
        .map(|_| c(rng.random_range(0.1..5.0), rng.random_range(-3.0..3.0)))
        .collect()
}

fn anywhere(rng: &mut ChaCha8Rng, count: usize) -> Vec<ComplexValue> {
    (0..count)
        .map(|_| c(rng.random_range(-6.0..6.0), rng.random_range(-4.0..4.0)))
        .collect()
}

fn rel(a: ComplexValue, b: ComplexValue) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}

fn rel1(a: ComplexValue, b: ComplexValue) -> f64 {
    (a - b).norm() / a.norm().max(1.0)
}

fn binom_c(n: i64, k: u32) -> ComplexValue {
    c(binom_int(n, k), 0.0)
}

fn q_number_shift(rng: &mut ChaCha8Rng, _: &Precision) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for q in QS {
        let p = qp(q);
        for z in right_half(rng, 200) {
            let lhs = q_number(&p, z + 1.0) - q_number(&p, z) * q;
            worst = worst.max((lhs - 1.0).norm());
        }
    }
    Ok(Outcome::at_most(worst, 1e-14))
}

fn q_gamma_functional_eq(rng: &mut ChaCha8Rng, prec: &Precision) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for q in QS {
        let p = qp(q);
        for z in right_half(rng, 200) {
            let next = q_gamma(&p, z, prec)?.value;
            let here = q_gamma(&p, z - 1.0, prec)?.value;
            worst = worst.max(rel(next, q_number(&p, z) * here));
        }
    }
    Ok(Outcome::at_most(worst, 1e-10))
}

fn q_gamma_factorial(_: &mut ChaCha8Rng, prec: &Precision) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for q in QS {
        let p = qp(q);
        let mut fact = c(1.0, 0.0);
        for n in 1..=30u32 {
            fact *= q_number(&p, c(f64::from(n), 0.0));
            worst = worst.max(rel(q_gamma(&p, c(f64::from(n), 0.0), prec)?.value, fact));
        }
    }
    Ok(Outcome::at_most(worst, 1e-12))
}

fn q_gamma_three_forms(rng: &mut ChaCha8Rng, prec: &Precision) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for q in QS {
        let p = qp(q);
        for z in right_half(rng, 30) {
            let a = q_gamma(&p, z, prec)?.value;
            let e = q_gamma_euler(&p, z, prec)?;
            let g = q_gamma_gauss(&p, z, e.terms_used as u64)?.value;
            worst = worst
                .max(rel(a, e.value))
                .max(rel(a, g))
                .max(rel(e.value, g));
        }
    }
    Ok(Outcome::at_most(worst, 1e-9))
}

fn binom_pascal(rng: &mut ChaCha8Rng, _: &Precision) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for z in anywhere(rng, 100) {
        for k in 1..=8 {
            let lhs = gen_binom(z, k);
            worst = worst.max(rel1(lhs, gen_binom(z - 1.0, k) + gen_binom(z - 1.0, k - 1)));
        }
    }
    Ok(Outcome::at_most(worst, 1e-12))
}

fn g_difference(rng: &mut ChaCha8Rng, _: &Precision) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for z in anywhere(rng, 100) {
        for r in 2..=5u32 {
            let sign = if r % 2 == 1 { 1.0 } else { -1.0 };
            for n in 1..=20u64 {
                let lhs = g_exponent(r, z, n) - g_exponent(r, z - 1.0, n);
                let rhs = g_exponent(r - 1, z - 1.0, n)
                    - binom_c(n as i64 + i64::from(r) - 3, r - 2) * sign;
                worst = worst.max(rel1(lhs, rhs));
            }
        }
    }
    Ok(Outcome::at_most(worst, 1e-12))
}

fn binomial_sum_identity(rng: &mut ChaCha8Rng, _: &Precision) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for z in anywhere(rng, 50) {
        for r in 2..=5u32 {
            for big_n in 1..=15i64 {
                let lhs: ComplexValue = (1..r)
                    .map(|m| gen_binom(z, m) * binom_int(big_n, r - m))
                    .sum();
                let rhs: ComplexValue = (1..=big_n)
                    .map(|n| gen_binom(z + (n - 1) as f64, r - 1) - binom_c(n - 1, r - 1))
                    .sum();
                worst = worst.max(rel1(lhs, rhs));
            }
        }
    }
    Ok(Outcome::at_most(worst, 1e-12))
}

fn exponent_sum_identity(rng: &mut ChaCha8Rng, _: &Precision) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for z in anywhere(rng, 20) {
        for r in 2..=4u32 {
            for big_n in 1..=10u64 {
                for n in 1..=10u64 {
                    // the m = r + 1 term has lower index -1 and vanishes
                    let first: ComplexValue = (1..=r)
                        .map(|m| binom_c(big_n as i64 - n as i64, r - m) * gen_binom(z, m))
                        .sum();
                    let second: ComplexValue = (1..=big_n)
                        .map(|k| {
                            let shift = (k - 1) as f64;
                            g_exponent(r, z + shift, n) - g_exponent(r, c(shift, 0.0), n)
                        })
                        .sum();
                    worst = worst.max(rel1(g_exponent(r + 1, z, n), first - second));
                }
            }
        }
    }
    Ok(Outcome::at_most(worst, 1e-12))
}

fn functional_equation(rng: &mut ChaCha8Rng, prec: &Precision) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for q in QS {
        let p = qp(q);
        let zs = right_half(rng, 100);
        for r in 1..=4 {
            for &z in &zs {
                let next = qmg(r, z + 1.0, &p, prec)?.value;
                let lower = qmg(r - 1, z, &p, prec)?.value;
                let here = qmg(r, z, &p, prec)?.value;
                worst = worst.max(rel(next, lower * here));
            }
        }
    }
    Ok(Outcome::at_most(worst, 1e-10))
}

fn normalization(_: &mut ChaCha8Rng, prec: &Precision) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for q in QS {
        for r in 0..=5 {
            worst = worst.max(qmg(r, c(1.0, 0.0), &qp(q), prec)?.log_value.norm());
        }
    }
    Ok(Outcome::at_most(worst, 1e-12))
}

fn integer_closed_form(_: &mut ChaCha8Rng, prec: &Precision) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for q in [0.1, 0.5, 0.9] {
        let p = qp(q);
        for r in 1..=4 {
            for n in 1..=20u64 {
                // relative error of G is the absolute error of log G
                let direct = log_qmg_product(r, c(n as f64, 0.0), &p, prec)?.log_sum;
                worst = worst.max((direct - log_qmg_integer_closed(r, n, &p)).norm());
            }
        }
    }
    Ok(Outcome::at_most(worst, 1e-11))
}

fn reduction(rng: &mut ChaCha8Rng, prec: &Precision) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for q in QS {
        let p = qp(q);
        for z in right_half(rng, 100) {
            worst = worst.max(rel1(
                qmg(1, z + 1.0, &p, prec)?.value,
                q_gamma(&p, z, prec)?.value,
            ));
            worst = worst.max(rel1(qmg(0, z, &p, prec)?.value, q_number(&p, z)));
        }
    }
    Ok(Outcome::at_most(worst, 1e-12))
}

fn continuation(rng: &mut ChaCha8Rng, prec: &Precision) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for q in QS {
        let p = qp(q);
        for z in right_half(rng, 30) {
            let w = z + 1.0;
            for r in 1..=4 {
                let direct = qmg(r, w, &p, prec)?.value;
                let stepped = qmg_recurrence(r, w, &p, prec, 1)?.value;
                worst = worst.max(rel(direct, stepped));
            }
        }
    }
    Ok(Outcome::at_most(worst, 1e-10))
}

fn log_convexity(_: &mut ChaCha8Rng, prec: &Precision) -> Result<Outcome> {
    let mut least = f64::INFINITY;
    for q in QS {
        for r in 1..=4 {
            for i in 0..=20 {
                least = least.min(log_qmg_deriv(r, 0.5 * f64::from(i), &qp(q), prec)?);
            }
        }
    }
    Ok(Outcome {
        observed: least,
        threshold: 0.0,
        bound: Bound::Above,
    })
}

fn three_way_agreement(rng: &mut ChaCha8Rng, prec: &Precision) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for q in [0.3, 0.7] {
        let p = qp(q);
        let zs: Vec<_> = (0..30)
            .map(|_| c(rng.random_range(0.1..4.0), rng.random_range(-3.0..3.0)))
            .collect();
        for z in zs {
            for r in 1..=3 {
                let a = evaluate(r, z, &p, prec, MethodChoice::Product)?.value;
                let g = qmg_gauss_certified(r, z, &p, prec)?.value;
                let e = qmg_euler(r, z, &p, prec)?.value;
                worst = worst.max(rel(a, g)).max(rel(a, e)).max(rel(g, e));
            }
        }
    }
    Ok(Outcome::at_most(worst, 1e-8))
}

fn gauss_convergence(rng: &mut ChaCha8Rng, prec: &Precision) -> Result<Outcome> {
    // largest defect(2N) / defect(N); below 1 means every doubling helped
    let mut worst = 0.0f64;
    for q in [0.3, 0.7] {
        let p = qp(q);
        for z in right_half(rng, 10) {
            for r in 1..=3 {
                let exact = log_qmg_product(r, z, &p, prec)?.log_sum.exp();
                let mut last = (qmg_gauss(r, z, &p, 2, prec)?.value - exact).norm();
                for n in [4u64, 8, 16] {
                    let d = (qmg_gauss(r, z, &p, n, prec)?.value - exact).norm();
                    worst = worst.max(d / last);
                    last = d;
                }
            }
        }
    }
    Ok(Outcome {
        observed: worst,
        threshold: 1.0,
        bound: Bound::AtMost,
    })
}

fn telescoping(rng: &mut ChaCha8Rng, _: &Precision) -> Result<Outcome> {
    let q: f64 = 0.5;
    let mut worst = 0.0f64;
    for z in right_half(rng, 4) {
        let log_ratio = |j: u64| {
            let num = c(1.0, 0.0) - ((z + j as f64) * q.ln()).exp();
            (num / (1.0 - q.powi(j as i32))).ln()
        };
        for r in [2u32, 3] {
            let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
            let single: ComplexValue = (1..400u64)
                .map(|j| log_ratio(j) * (sign * binom_int(j as i64 + i64::from(r) - 2, r - 1)))
                .sum();
            let mut double = c(0.0, 0.0);
            for k in 1..=120u64 {
                for n in 1..=120u64 {
                    let w = sign * binom_int(n as i64 + i64::from(r) - 3, r - 2);
                    double += log_ratio(n + k - 1) * w;
                }
            }
            worst = worst.max((single.exp() - double.exp()).norm());
        }
    }
    Ok(Outcome::at_most(worst, 1e-8))
}

/// `|log value at 2N - log value at N| / tail_bound`, maximized.
fn doubling_ratio(
    eval: impl Fn(&Precision) -> Result<EvalResult>,
    prec: &Precision,
) -> Result<f64> {
    let once = eval(prec)?;
    let twice = eval(&prec.oversampled(2))?;
    let moved = (once.log_value - twice.log_value).norm();
    Ok(if moved == 0.0 {
        0.0
    } else {
        moved / once.tail_bound
    })
}

fn truncation_soundness(rng: &mut ChaCha8Rng, prec: &Precision) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for q in QS {
        let p = qp(q);
        for z in right_half(rng, 10) {
            worst = worst.max(doubling_ratio(|pr| q_gamma(&p, z, pr), prec)?);
            for r in 1..=4 {
                for m in [
                    MethodChoice::Product,
                    MethodChoice::Recurrence,
                    MethodChoice::Euler,
                ] {
                    worst = worst.max(doubling_ratio(|pr| evaluate(r, z, &p, pr, m), prec)?);
                }
                let left = z - 4.0;
                worst = worst.max(doubling_ratio(
                    |pr| evaluate(r, left, &p, pr, MethodChoice::Auto),
                    prec,
                )?);
            }
        }
    }
    Ok(Outcome::at_most(worst, 1.0))
}
