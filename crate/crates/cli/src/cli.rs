use clap::{Args, Parser, Subcommand, ValueEnum};
use qmg_core::{ComplexValue, MethodChoice, Precision, QParam};

const ABOUT: &str =
    "Evaluate the q-analogues G_r(z; q) of the multiple gamma functions (0 < q < 1).";

const LONG_ABOUT: &str = "\
Evaluate the q-analogues G_r(z; q) of the multiple gamma functions (0 < q < 1).

Every command reports G_r(z + 1; q) for the given z. The hierarchy is

  G_0(z + 1; q) = [z + 1] = (1 - q^{z+1}) / (1 - q)
  G_r(z + 1; q) = G_{r-1}(z; q) G_r(z; q),   G_r(1; q) = 1
  G_1(z + 1; q) = Gamma(z + 1; q) = (1-q)^{-z} prod_n (1-q^n) / (1-q^{z+n})

Infinite products are truncated with a certified tail bound and evaluated in
the log domain. Exit codes: 0 success, 1 invariant failure, 2 bad arguments,
3 singular point, 4 budget exhausted or value out of range.";

const EVAL_ABOUT: &str = "\
Evaluate G_r(z + 1; q) at one point and print a JSON record.

Methods:
  product     (1-q)^{-binom(z,r)} prod_{n>=1} ((1-q^{z+n})/(1-q^n))^{(-1)^r binom(n+r-2,r-1)} (1-q^n)^{g_r(z,n)}
              with g_r(z,n) = sum_{m=1}^{r-1} (-1)^{m-1} binom(z,r-m) binom(n+m-2,m-1); needs Re z > -1
  gauss       lim_N prod_{k=1}^{N} G_{r-1}(k)/G_{r-1}(z+k) * prod_{m=1}^{r} G_{r-m}(N+1)^{binom(z,m)}; needs Re z >= 0
  euler       prod_{n>=1} G_{r-1}(n)/G_{r-1}(z+n) * prod_{m=1}^{r} (G_{r-m}(n+1)/G_{r-m}(n))^{binom(z,m)}; needs Re z >= 0
  recurrence  G_r(w) = G_r(w+k) / prod_{j<k} G_{r-1}(w+j), then the product at w+k
  closed      G_r(N+1) = (1-q)^{-binom(N,r)} prod_{n=1}^{N} (1-q^n)^{binom(N-n,r-1)} for integer N >= 0
  auto        closed for integer z >= 1, product where it converges, recurrence elsewhere";

const GRID_ABOUT: &str = "\
Evaluate G_r(z + 1; q) at `steps` equally spaced points from z-start to z-end
(both included) and print CSV with header z_re,z_im,G_re,G_im,log_re,log_im,terms_used.
Singular points produce a row of nan values and exit code 3 at the end.
See `eval --help` for the formulas behind each method.";

const CHECK_ABOUT: &str = "\
Run the invariant suite on seeded random samples and print one line per
family with the largest observed residual and its threshold. Families cover
the q-number and q-gamma identities, the binomial identities of the product
exponents, the functional equation G_r(z+1) = G_{r-1}(z) G_r(z), the
normalization G_r(1) = 1, the integer closed form, log-convexity of order
r+1, agreement of the product, Gauss and Euler forms, and truncation soundness.";

#[derive(Debug, Parser)]
#[command(name = "qmg", version, about = ABOUT, long_about = LONG_ABOUT)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    #[command(about = "Evaluate at one point (JSON)", long_about = EVAL_ABOUT)]
    Eval(EvalArgs),
    #[command(about = "Tabulate along a line segment (CSV)", long_about = GRID_ABOUT)]
    Grid(GridArgs),
    #[command(about = "Run the invariant suite", long_about = CHECK_ABOUT)]
    Check(CheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    Product,
    Gauss,
    Euler,
    Recurrence,
    Closed,
}

impl From<MethodArg> for MethodChoice {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auto => MethodChoice::Auto,
            MethodArg::Product => MethodChoice::Product,
            MethodArg::Gauss => MethodChoice::Gauss,
            MethodArg::Euler => MethodChoice::Euler,
            MethodArg::Recurrence => MethodChoice::Recurrence,
            MethodArg::Closed => MethodChoice::Closed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Order r >= 0 of the hierarchy
    #[arg(long)]
    pub r: u32,
    /// Base q, 0 < q <= 1 - 1e-6
    #[arg(long)]
    pub q: f64,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    pub method: MethodArg,
    #[command(flatten)]
    pub budget: Budget,
}

#[derive(Debug, Clone, Args)]
pub struct Budget {
    /// Target bound on the truncation error of log G
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Largest number of product factors or series terms
    #[arg(long, default_value_t = 200_000)]
    pub max_terms: usize,
}

impl Budget {
    pub fn precision(&self) -> Result<Precision, String> {
        Precision::new(
            self.tol,
            self.max_terms,
            Precision::default().max_continuation_steps,
        )
        .map_err(|e| e.to_string())
    }
}

impl Common {
    pub fn qparam(&self) -> Result<QParam, String> {
        QParam::new(self.q).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub common: Common,
    /// Argument as RE or RE,IM; the value reported is G_r(z + 1; q)
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub z: ComplexValue,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[command(flatten)]
    pub common: Common,
    /// First grid point, RE or RE,IM
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub z_start: ComplexValue,
    /// Last grid point, RE or RE,IM
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub z_end: ComplexValue,
    /// Number of points, endpoints included
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub steps: u64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub output: OutputFormat,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    /// Seed for the random samples
    #[arg(long, default_value_t = 20_240_601)]
    pub seed: u64,
    #[command(flatten)]
    pub budget: Budget,
}

/// Parses `RE` or `RE,IM`.
pub fn parse_complex(s: &str) -> Result<ComplexValue, String> {
    let mut parts = s.split(',');
    let re = parts.next().unwrap_or("");
    let im = parts.next();
    if parts.next().is_some() {
        return Err(format!("expected RE or RE,IM, got '{s}'"));
    }
    let num = |t: &str| {
        let v: f64 = t
            .trim()
            .parse()
            .map_err(|_| format!("'{t}' is not a number"))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("'{t}' is not finite"))
        }
    };
    Ok(ComplexValue::new(
        num(re)?,
        im.map(num).transpose()?.unwrap_or(0.0),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_flag_syntax() {
        assert_eq!(parse_complex("3").unwrap(), ComplexValue::new(3.0, 0.0));
        assert_eq!(
            parse_complex("-1.5,2").unwrap(),
            ComplexValue::new(-1.5, 2.0)
        );
        assert_eq!(
            parse_complex(" 0.5 , -1e-3").unwrap(),
            ComplexValue::new(0.5, -1e-3)
        );
        assert!(parse_complex("1,2,3").is_err());
        assert!(parse_complex("x").is_err());
        assert!(parse_complex("nan").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn clap_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
