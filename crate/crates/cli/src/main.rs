//! `redideal`: enumerate, classify, reduce and verify reduced ideals of real
//! quadratic fields.
//!
//! Exit codes: 0 success, 2 input error, 3 mathematical-property failure.
//! Exact values are printed as integer strings ("p q r" for a field element
//! `(p + q sqrt(D)) / r`, "num/den" for rationals); floating-point values
//! carry an `approx_` prefix.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use redideal::classifier::{b_criterion, classify, closed_form_is_onereduced, cone_oracle};
use redideal::field::{FieldCtx, Int, QElem, Rat};
use redideal::ideal::{enumerate_reduced, IdealForm, Module2};
use redideal::lattice::Metric;
use redideal::reducer::reduce_ideal;
use redideal::sweep;

#[derive(Parser)]
#[command(name = "redideal", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the reduced ideals of one discriminant
    Enumerate(EnumerateArgs),
    /// Decide 1-reducedness for one ideal or all ideals of a discriminant
    Classify(ClassifyArgs),
    /// Reduce a (module, metric) pair to a 1-reduced ideal
    Reduce(ReduceArgs),
    /// Check every property on every ideal in a discriminant range
    Verify(RangeArgs),
    /// Per-discriminant counting statistics as CSV
    Stats(RangeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    All,
    Closed,
    Bcrit,
    Cone,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    disc: i64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    disc: i64,
    /// Restrict to one ideal, given as "a,b"
    #[arg(long)]
    ideal: Option<String>,
    #[arg(long, value_enum, default_value_t = Method::All)]
    method: Method,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(long)]
    disc: i64,
    /// Input ideal as "a,b"
    #[arg(long)]
    ideal: String,
    /// Metric weights "u1,u2" as positive rationals (e.g. "3/2,1")
    #[arg(long, default_value = "1,1")]
    metric: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct RangeArgs {
    #[arg(long)]
    disc_from: i64,
    #[arg(long)]
    disc_to: i64,
    #[arg(long)]
    fundamental_only: bool,
    /// Worker threads for the sweep (default: all cores)
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

/// Input problems exit with 2, mathematical-property failures with 3.
enum Failure {
    Input(String),
    Math(String),
}

fn main() -> ExitCode {
    // die quietly on closed pipes (e.g. `redideal enumerate ... | head`)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Enumerate(a) => cmd_enumerate(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Reduce(a) => cmd_reduce(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Stats(a) => cmd_stats(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Math(msg)) => {
            eprintln!("property failure: {msg}");
            ExitCode::from(3)
        }
    }
}

fn ctx_for(disc: i64) -> Result<FieldCtx, Failure> {
    FieldCtx::new(disc).map_err(|e| Failure::Input(format!("discriminant {disc}: {e}")))
}

fn parse_pair(s: &str, what: &str) -> Result<(String, String), Failure> {
    match s.split_once(',') {
        Some((x, y)) => Ok((x.trim().to_string(), y.trim().to_string())),
        None => Err(Failure::Input(format!("{what} must be two comma-separated values, got {s:?}"))),
    }
}

fn parse_ideal(ctx: &FieldCtx, s: &str) -> Result<IdealForm, Failure> {
    let (a, b) = parse_pair(s, "--ideal")?;
    let a: Int = a.parse().map_err(|_| Failure::Input(format!("bad integer {a:?}")))?;
    let b: Int = b.parse().map_err(|_| Failure::Input(format!("bad integer {b:?}")))?;
    IdealForm::new(ctx, a, b).map_err(|e| Failure::Input(e.to_string()))
}

fn parse_rat(s: &str) -> Result<Rat, Failure> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: Int = num.parse().map_err(|_| Failure::Input(format!("bad rational {s:?}")))?;
    let den: Int = den.parse().map_err(|_| Failure::Input(format!("bad rational {s:?}")))?;
    if den == Int::from(0) {
        return Err(Failure::Input(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(num, den))
}

fn parse_metric(s: &str) -> Result<Metric, Failure> {
    let (u1, u2) = parse_pair(s, "--metric")?;
    let u1 = parse_rat(&u1)?;
    let u2 = parse_rat(&u2)?;
    Metric::rational(&u1 * &u1, &u2 * &u2).map_err(|e| Failure::Input(e.to_string()))
}

fn qelem_str(x: &QElem) -> String {
    format!("{} {} {}", x.p(), x.q(), x.r())
}

fn rat_str(x: &Rat) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

fn print_records(format: Format, header: &str, records: &[(Value, String)]) {
    match format {
        Format::Json => {
            for (v, _) in records {
                println!("{v}");
            }
        }
        Format::Csv => {
            println!("{header}");
            for (_, row) in records {
                println!("{row}");
            }
        }
        Format::Text => {
            for (v, _) in records {
                let obj = v.as_object().expect("records are objects");
                let line: Vec<String> =
                    obj.iter().map(|(k, val)| format!("{k}={val}")).collect();
                println!("{}", line.join(" "));
            }
        }
    }
}

fn cmd_enumerate(args: EnumerateArgs) -> Result<(), Failure> {
    let ctx = ctx_for(args.disc)?;
    let records: Vec<(Value, String)> = enumerate_reduced(&ctx)
        .iter()
        .map(|i| {
            let f = i.f();
            let v = json!({
                "disc": args.disc,
                "a": i.a().to_string(),
                "b": i.b().to_string(),
                "c": i.c().to_string(),
                "approx_f": f.approx(),
            });
            let row = format!("{},{},{},{},{}", args.disc, i.a(), i.b(), i.c(), f.approx());
            (v, row)
        })
        .collect();
    print_records(args.format, "disc,a,b,c,approx_f", &records);
    Ok(())
}

fn classify_record(disc: i64, ideal: &IdealForm, method: Method) -> Result<(Value, String), Failure> {
    let (v, row) = match method {
        Method::Closed => {
            let r = closed_form_is_onereduced(ideal);
            (
                json!({"disc": disc, "a": ideal.a().to_string(), "b": ideal.b().to_string(),
                       "method": "closed", "one_reduced": r}),
                format!("{disc},{},{},closed,{r}", ideal.a(), ideal.b()),
            )
        }
        Method::Bcrit => {
            let r = b_criterion(ideal);
            (
                json!({"disc": disc, "a": ideal.a().to_string(), "b": ideal.b().to_string(),
                       "method": "bcrit", "one_reduced": r.one_reduced,
                       "bmin4": qelem_str(&r.bmin4), "bmax4": qelem_str(&r.bmax4)}),
                format!("{disc},{},{},bcrit,{}", ideal.a(), ideal.b(), r.one_reduced),
            )
        }
        Method::Cone => {
            let r = cone_oracle(ideal);
            (
                json!({"disc": disc, "a": ideal.a().to_string(), "b": ideal.b().to_string(),
                       "method": "cone", "one_reduced": r.is_feasible()}),
                format!("{disc},{},{},cone,{}", ideal.a(), ideal.b(), r.is_feasible()),
            )
        }
        Method::All => {
            let rec = classify(ideal).map_err(|e| Failure::Math(e.to_string()))?;
            let witness = rec.witness_ratio.as_ref().map(rat_str);
            (
                json!({"disc": disc, "a": ideal.a().to_string(), "b": ideal.b().to_string(),
                       "one_reduced": rec.one_reduced(),
                       "closed_form": rec.closed_form,
                       "b_criterion": rec.b_criterion,
                       "cone_oracle": rec.cone_oracle,
                       "bmin4": qelem_str(&rec.bmin4),
                       "bmax4": qelem_str(&rec.bmax4),
                       "witness_ratio": witness,
                       "boundary": rec.boundary}),
                format!(
                    "{disc},{},{},{},{},{},{},{}",
                    ideal.a(),
                    ideal.b(),
                    rec.one_reduced(),
                    rec.closed_form,
                    rec.b_criterion,
                    rec.cone_oracle,
                    rec.boundary
                ),
            )
        }
    };
    Ok((v, row))
}

fn cmd_classify(args: ClassifyArgs) -> Result<(), Failure> {
    let ctx = ctx_for(args.disc)?;
    let ideals = match &args.ideal {
        Some(s) => vec![parse_ideal(&ctx, s)?],
        None => enumerate_reduced(&ctx),
    };
    let mut records = Vec::new();
    for i in &ideals {
        records.push(classify_record(args.disc, i, args.method)?);
    }
    let header = match args.method {
        Method::All => "disc,a,b,one_reduced,closed_form,b_criterion,cone_oracle,boundary",
        _ => "disc,a,b,method,one_reduced",
    };
    print_records(args.format, header, &records);
    let one_reduced = records
        .iter()
        .filter(|(v, _)| v["one_reduced"] == json!(true))
        .count();
    match args.format {
        Format::Json => println!(
            "{}",
            json!({"summary": {"reduced": ideals.len(), "one_reduced": one_reduced}})
        ),
        _ => println!("reduced={} one_reduced={}", ideals.len(), one_reduced),
    }
    Ok(())
}

fn cmd_reduce(args: ReduceArgs) -> Result<(), Failure> {
    let ctx = ctx_for(args.disc)?;
    let ideal = parse_ideal(&ctx, &args.ideal)?;
    let metric = parse_metric(&args.metric)?;
    let module: Module2 = ideal.module();
    let res = reduce_ideal(&module, &metric).map_err(|e| match e {
        redideal::reducer::ReduceError::DegenerateModule => Failure::Input(e.to_string()),
        _ => Failure::Math(e.to_string()),
    })?;
    let v = json!({
        "disc": args.disc,
        "a": ideal.a().to_string(),
        "b": ideal.b().to_string(),
        "chosen_f": qelem_str(&res.chosen),
        "output_disc": res.output.ctx().disc().to_string(),
        "output_a": res.output.a().to_string(),
        "output_b": res.output.b().to_string(),
        "approx_distance": res.distance,
    });
    let row = format!(
        "{},{},{},{},{},{},{},{}",
        args.disc,
        ideal.a(),
        ideal.b(),
        qelem_str(&res.chosen).replace(' ', ";"),
        res.output.ctx().disc(),
        res.output.a(),
        res.output.b(),
        res.distance
    );
    print_records(
        args.format,
        "disc,a,b,chosen_f,output_disc,output_a,output_b,approx_distance",
        &[(v, row)],
    );
    Ok(())
}

fn check_range(args: &RangeArgs) -> Result<Vec<i64>, Failure> {
    let discs = sweep::valid_discs(args.disc_from, args.disc_to, args.fundamental_only);
    if args.disc_from > args.disc_to || discs.is_empty() {
        return Err(Failure::Input(format!(
            "no valid discriminants in [{}, {}]",
            args.disc_from, args.disc_to
        )));
    }
    Ok(discs)
}

fn cmd_verify(args: RangeArgs) -> Result<(), Failure> {
    check_range(&args)?;
    let report = sweep::verify_range(args.disc_from, args.disc_to, args.fundamental_only, args.jobs);
    let not_one = report.ideals - report.one_reduced;
    match args.format {
        Format::Json => {
            for f in &report.failures {
                println!(
                    "{}",
                    json!({"disc": f.disc, "a": f.a, "b": f.b, "kind": format!("{:?}", f.kind),
                           "what": f.what})
                );
            }
            println!(
                "{}",
                json!({"summary": {"discs": report.discs, "ideals": report.ideals,
                       "one_reduced": report.one_reduced, "not_one_reduced": not_one,
                       "failures": report.failures.len()}})
            );
        }
        _ => {
            for f in &report.failures {
                println!("failure: {f}");
            }
            println!(
                "discs={} ideals={} one_reduced={} not_one_reduced={} failures={}",
                report.discs,
                report.ideals,
                report.one_reduced,
                not_one,
                report.failures.len()
            );
        }
    }
    if report.failures.is_empty() {
        Ok(())
    } else {
        let f = &report.failures[0];
        Err(Failure::Math(format!("first reproducer: {f}")))
    }
}

fn cmd_stats(args: RangeArgs) -> Result<(), Failure> {
    check_range(&args)?;
    let stats = sweep::stats_range(args.disc_from, args.disc_to, args.fundamental_only, args.jobs);
    let header = "disc,n_reduced,n_one_reduced,n_not_one_reduced,max_inverse_norm,bound_sqrt_disc_over_3";
    let records: Vec<(Value, String)> = stats
        .iter()
        .map(|s| {
            let not_one = s.n_reduced - s.n_one_reduced;
            let bound = s.bound_sqrt_disc_over_3();
            let v = json!({
                "disc": s.disc,
                "n_reduced": s.n_reduced,
                "n_one_reduced": s.n_one_reduced,
                "n_not_one_reduced": not_one,
                "max_inverse_norm": s.max_inverse_norm.to_string(),
                "approx_bound_sqrt_disc_over_3": bound,
            });
            let row = format!(
                "{},{},{},{},{},{}",
                s.disc, s.n_reduced, s.n_one_reduced, not_one, s.max_inverse_norm, bound
            );
            (v, row)
        })
        .collect();
    match args.format {
        Format::Json | Format::Csv => print_records(args.format, header, &records),
        // stats are a table by nature; text mirrors the CSV layout
        Format::Text => print_records(Format::Csv, header, &records),
    }
    Ok(())
}
