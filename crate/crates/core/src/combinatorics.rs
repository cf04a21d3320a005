//! Generalized binomial coefficients and the exponent polynomials `g_r(z, n)`
//! of the defining product.
//!
//! `gen_binom` takes any complex upper argument through the falling factorial
//! `z (z - 1) ... (z - k + 1) / k!`. Negative integer upper arguments and the
//! convention `binom(n, k) = 0` for `0 <= n < k` fall out of that product
//! without special cases.

use crate::qcore::ComplexValue;

fn factorial(k: u32) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * f64::from(i))
}

/// Generalized binomial coefficient `binom(z, k)` for complex `z`.
pub fn gen_binom(z: ComplexValue, k: u32) -> ComplexValue {
    let mut prod = ComplexValue::new(1.0, 0.0);
    for i in 0..k {
        prod *= z - f64::from(i);
    }
    prod / factorial(k)
}

/// `binom(x, k)` for a real upper argument.
pub fn gen_binom_real(x: f64, k: u32) -> f64 {
    let mut prod = 1.0;
    for i in 0..k {
        prod *= x - f64::from(i);
    }
    prod / factorial(k)
}

/// `binom(n, k)` for integer `n`, including negative `n`.
///
/// Exact integer arithmetic while it fits in `u128`, then a running product
/// of ratios, so it stays finite far beyond the range where `n!` overflows.
pub fn binom_int(n: i64, k: u32) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if n >= 0 && (n as u64) < u64::from(k) {
        return 0.0;
    }
    if n < 0 {
        // binom(-m, k) = (-1)^k binom(m + k - 1, k)
        let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        return sign * binom_int(-n + i64::from(k) - 1, k);
    }
    let k_eff = u64::from(k).min(n as u64 - u64::from(k));
    let n = n as u64;
    // exact while it fits; acc * (n - k + i) is always divisible by i
    let mut exact: u128 = 1;
    for i in 1..=k_eff {
        match exact.checked_mul(u128::from(n - k_eff + i)) {
            Some(p) => exact = p / u128::from(i),
            None => return binom_float(n as f64, k_eff),
        }
    }
    exact as f64
}

fn binom_float(n: f64, k: u64) -> f64 {
    let mut acc = 1.0;
    for i in 1..=k {
        let i = i as f64;
        acc = acc * (n - k as f64 + i) / i;
    }
    acc
}

/// Magnitude of the defining-product exponent of `(1 - q^{z+n}) / (1 - q^n)`,
/// i.e. `binom(n + r - 2, r - 1)`; the sign is `(-1)^r`.
pub fn factor_exponent(r: u32, n: u64) -> f64 {
    debug_assert!(r >= 1);
    binom_int(n as i64 + i64::from(r) - 2, r - 1)
}

/// `g_r(z, n) = sum_{m=1}^{r-1} (-1)^{m-1} binom(z, r-m) binom(n+m-2, m-1)`,
/// with `g_1 = 0`.
pub fn g_exponent(r: u32, z: ComplexValue, n: u64) -> ComplexValue {
    let mut acc = ComplexValue::new(0.0, 0.0);
    for m in 1..r {
        let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
        acc += gen_binom(z, r - m) * (sign * binom_int(n as i64 + i64::from(m) - 2, m - 1));
    }
    acc
}

/// `g_r(z, n)` with the `binom(z, r - m)` factors supplied by the caller.
///
/// `zbinoms[j] = binom(z, j)` for `j = 0..r`. Used in the product loops where
/// the same `z` is paired with many `n`.
pub(crate) fn g_exponent_with(r: u32, zbinoms: &[ComplexValue], n: u64) -> ComplexValue {
    let mut acc = ComplexValue::new(0.0, 0.0);
    for m in 1..r {
        let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
        acc += zbinoms[(r - m) as usize] * (sign * binom_int(n as i64 + i64::from(m) - 2, m - 1));
    }
    acc
}

/// `binom(z, j)` for `j = 0..=k`.
pub(crate) fn binom_table(z: ComplexValue, k: u32) -> Vec<ComplexValue> {
    (0..=k).map(|j| gen_binom(z, j)).collect()
}

/// Closed form of `sum_{n > big_n} binom(n + j - 1, j) x^n` for `0 <= x < 1`.
///
/// Splitting a multiset of size `j` drawn from `big_n + k` items gives
/// `binom(big_n + k + j - 1, j) = sum_i binom(big_n + j - i - 1, j - i) binom(k + i - 1, i)`,
/// and `sum_{k >= 1} binom(k + i - 1, i) x^k = x / (1 - x)^{i + 1}`.
pub fn geometric_tail(j: u32, big_n: u64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let one_minus = 1.0 - x;
    let head = x.powf(big_n as f64);
    if head == 0.0 {
        return 0.0;
    }
    let mut acc = 0.0;
    let mut denom = one_minus;
    for i in 0..=j {
        let c = binom_int(big_n as i64 + i64::from(j - i) - 1, j - i);
        acc += c * x / denom;
        denom *= one_minus;
    }
    head * acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexValue {
        ComplexValue::new(re, im)
    }

    #[test]
    fn gen_binom_examples() {
        assert_eq!(gen_binom(c(3.0, 0.0), 2), c(3.0, 0.0));
        assert_eq!(gen_binom(c(1.7, -2.0), 0), c(1.0, 0.0));
        assert!((gen_binom(c(0.5, 0.0), 2) - c(-0.125, 0.0)).norm() < 1e-16);
    }

    #[test]
    fn gen_binom_negative_integer_upper() {
        for n in 1..8i64 {
            for k in 0..7u32 {
                let expect =
                    if k % 2 == 0 { 1.0 } else { -1.0 } * binom_int(n + i64::from(k) - 1, k);
                let got = gen_binom(c(-n as f64, 0.0), k);
                assert!((got.re - expect).abs() < 1e-9 * expect.abs().max(1.0));
                assert_eq!(binom_int(-n, k), expect);
            }
        }
    }

    #[test]
    fn combinatorial_zero_below_k() {
        for n in 0..5 {
            for k in (n + 1)..8 {
                assert_eq!(gen_binom(c(n as f64, 0.0), k), c(0.0, 0.0));
                assert_eq!(binom_int(i64::from(n), k), 0.0);
            }
        }
    }

    #[test]
    fn binom_int_matches_pascal_triangle() {
        let mut row = vec![1.0f64];
        for n in 1..60i64 {
            let mut next = vec![1.0; row.len() + 1];
            for i in 1..row.len() {
                next[i] = row[i - 1] + row[i];
            }
            row = next;
            for (k, expect) in row.iter().enumerate() {
                let got = binom_int(n, k as u32);
                // the oracle's own sums round once they pass 2^53
                assert!((got - expect).abs() <= 1e-15 * expect, "n={n} k={k}");
                if *expect < 9.0e15 {
                    assert_eq!(got, *expect, "n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn g_exponent_examples() {
        assert_eq!(g_exponent(1, c(2.7, 1.0), 5), c(0.0, 0.0));
        assert_eq!(g_exponent(3, c(0.0, 0.0), 4), c(0.0, 0.0));
        let z = c(1.3, -0.4);
        for n in 1..10 {
            assert!((g_exponent(2, z, n) - z).norm() < 1e-15);
        }
    }

    #[test]
    fn geometric_tail_matches_brute_force() {
        for &x in &[0.1f64, 0.5, 0.9] {
            for j in 0..5u32 {
                for big_n in [0u64, 1, 7, 40] {
                    let brute: f64 = (big_n + 1..big_n + 4000)
                        .map(|n| binom_int(n as i64 + i64::from(j) - 1, j) * x.powi(n as i32))
                        .sum();
                    let closed = geometric_tail(j, big_n, x);
                    assert!(
                        (closed - brute).abs() <= 1e-12 * brute.abs().max(1e-300),
                        "x={x} j={j} N={big_n}: {closed} vs {brute}"
                    );
                }
            }
        }
    }
}
