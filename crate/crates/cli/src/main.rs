mod check;
mod cli;
mod exit;
mod grid;
mod output;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use qmg_core::{evaluate, Error, MethodChoice};

use crate::cli::{CheckArgs, Cli, Command, EvalArgs, GridArgs, OutputFormat};
use crate::exit::Exit;
use crate::output::{Record, GRID_HEADER, RECORD_HEADER};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exit = match cli.command {
        Command::Eval(args) => run_eval(&args),
        Command::Grid(args) => run_grid(&args),
        Command::Check(args) => run_check(&args),
    };
    ExitCode::from(exit.code() as u8)
}

fn bad_args(msg: &str) -> Exit {
    eprintln!("error: {msg}");
    Exit::Args
}

fn report_error(err: &Error) -> Exit {
    match err {
        Error::Pole { at } => eprintln!("error: singular point at z = {at}"),
        Error::Range { log_value } => eprintln!(
            "error: value out of double range; log G = {},{}",
            output::num(log_value.re),
            output::num(log_value.im)
        ),
        other => eprintln!("error: {other}"),
    }
    Exit::from_error(err)
}

fn run_eval(args: &EvalArgs) -> Exit {
    let (qp, prec) = match (args.common.qparam(), args.common.budget.precision()) {
        (Ok(qp), Ok(prec)) => (qp, prec),
        (Err(e), _) | (_, Err(e)) => return bad_args(&e),
    };
    let method = MethodChoice::from(args.common.method);
    match evaluate(args.common.r, args.z, &qp, &prec, method) {
        Ok(res) => {
            let rec = Record::from(&res);
            match args.output {
                OutputFormat::Json => println!("{}", rec.to_json()),
                OutputFormat::Csv => println!("{RECORD_HEADER}\n{}", rec.to_csv()),
            }
            Exit::Ok
        }
        Err(err) => report_error(&err),
    }
}

fn run_grid(args: &GridArgs) -> Exit {
    let (qp, prec) = match (args.common.qparam(), args.common.budget.precision()) {
        (Ok(qp), Ok(prec)) => (qp, prec),
        (Err(e), _) | (_, Err(e)) => return bad_args(&e),
    };
    let points = grid::grid_points(args.z_start, args.z_end, args.steps);
    let method = MethodChoice::from(args.common.method);
    let (rows, exit, notes) = grid::run_grid(args.common.r, &qp, &prec, method, &points);

    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let written = match args.output {
        OutputFormat::Csv => {
            let mut res = writeln!(out, "{GRID_HEADER}");
            for row in &rows {
                res = res.and_then(|_| writeln!(out, "{}", row.to_csv()));
            }
            res
        }
        OutputFormat::Json => writeln!(
            out,
            "{}",
            serde_json::to_string(&rows).expect("rows serialize")
        ),
    };
    if written.and_then(|_| out.flush()).is_err() {
        return Exit::Args;
    }
    for note in notes {
        eprintln!("warning: {note}");
    }
    exit
}

fn run_check(args: &CheckArgs) -> Exit {
    let prec = match args.budget.precision() {
        Ok(p) => p,
        Err(e) => return bad_args(&e),
    };
    println!("seed {}  tol {:e}", args.seed, prec.tol);
    let reports = check::run_all(args.seed, &prec);
    let mut exit = Exit::Ok;
    for rep in &reports {
        println!("{}", rep.line());
        exit = exit.max(rep.exit());
    }
    let failed = reports.iter().filter(|r| r.exit() != Exit::Ok).count();
    if failed == 0 {
        println!("all {} families passed", reports.len());
    } else {
        println!("{failed} of {} families failed", reports.len());
    }
    exit
}
