use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use wittlab::fields::{
    parse_element, parse_tower, residue_unit, square_class, valuation, Tower, ValuationSpec,
};
use wittlab::forms::{
    clifford_invariant, conic_kernel_membership, discriminant, is_isometric, is_isotropic, pfister,
    represents, similarity_factor_check, springer_residues, witt_decompose, QuadraticForm, Status,
    Verdict,
};
use wittlab::hermitian::{
    e1_invariant, e2_invariant, e2_trivial, generic_sum_residues, is_split, iso_base, iso_generic,
    morita_transfer, QuaternionAlgebra,
};
use wittlab::scenarios::{
    parse, parse_form, parse_involution, run_example1, run_example1_control, run_example2,
    K0Choice, Parsed, Report,
};
use wittlab::{Error, Result};

#[derive(Parser)]
#[command(
    name = "wittlab",
    version,
    about = "Exact quadratic-form and involution calculus over field towers"
)]
struct Cli {
    /// Write the machine-readable result (report or verdict) to this path.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and print an element, form, involution or generic sum in canonical form.
    Eval {
        #[arg(long)]
        field: String,
        expr: String,
    },
    /// Run a single operation.
    Check {
        #[arg(long)]
        field: String,
        #[arg(long)]
        op: String,
        #[arg(long, num_args = 0.., allow_hyphen_values = true)]
        args: Vec<String>,
    },
    /// Replay a worked example.
    Scenario {
        #[command(subcommand)]
        which: Which,
    },
}

#[derive(Subcommand)]
enum Which {
    Example1 {
        /// Qb: k₀ = Q(b), c = 2.  lbc: k₀ = Q(b,c).
        #[arg(long, default_value = "Qb")]
        k0: String,
        /// Run with c = 1, so that both involutions coincide.
        #[arg(long)]
        control: bool,
    },
    Example2,
}

/// Output of a single `check`.
enum Outcome {
    Text(String),
    Verdict(Verdict),
}

fn arity(args: &[String], n: usize, op: &str) -> Result<()> {
    if args.len() == n {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{op} takes {n} argument(s), got {}",
            args.len()
        )))
    }
}

fn form(s: &str, f: &Tower) -> Result<QuadraticForm> {
    parse_form(s, f)?
        .to_form()?
        .ok_or_else(|| Error::InvalidArgument(format!("`{s}` is not a form with explicit entries")))
}

fn run_check(f: &Tower, op: &str, args: &[String]) -> Result<Outcome> {
    use Outcome::*;
    let el = |s: &str| parse_element(s, f);
    let a = args;
    Ok(match op {
        "normalize" => {
            arity(a, 1, op)?;
            Text(el(&a[0])?.to_string())
        }
        "square_class" => {
            arity(a, 1, op)?;
            Text(square_class(&el(&a[0])?)?.rep.to_string())
        }
        "valuation" => {
            arity(a, 2, op)?;
            Text(valuation(&el(&a[0])?, &ValuationSpec::new(&a[1]))?.to_string())
        }
        "residue_unit" => {
            arity(a, 2, op)?;
            Text(residue_unit(&el(&a[0])?, &ValuationSpec::new(&a[1]))?.to_string())
        }
        "pfister" => {
            let slots = a.iter().map(|s| el(s)).collect::<Result<Vec<_>>>()?;
            Text(pfister(f, &slots)?.to_string())
        }
        "discriminant" => {
            arity(a, 1, op)?;
            Text(discriminant(&form(&a[0], f)?)?.rep.to_string())
        }
        "clifford_invariant" => {
            arity(a, 1, op)?;
            Text(clifford_invariant(&form(&a[0], f)?).simplify()?.to_string())
        }
        "witt_decompose" => {
            arity(a, 1, op)?;
            Text(witt_decompose(&form(&a[0], f)?)?.to_string())
        }
        "springer_residues" => {
            arity(a, 2, op)?;
            let r = springer_residues(&form(&a[0], f)?, &ValuationSpec::new(&a[1]))?;
            Text(format!("first: {}\nsecond: {}", r.first, r.second))
        }
        "is_isotropic" => {
            arity(a, 1, op)?;
            Verdict(is_isotropic(&form(&a[0], f)?)?)
        }
        "is_isometric" => {
            arity(a, 2, op)?;
            Verdict(is_isometric(&form(&a[0], f)?, &form(&a[1], f)?)?)
        }
        "represents" => {
            arity(a, 2, op)?;
            Verdict(represents(&form(&a[0], f)?, &el(&a[1])?)?)
        }
        "similarity_factor_check" => {
            arity(a, 2, op)?;
            Verdict(similarity_factor_check(&form(&a[0], f)?, &el(&a[1])?)?)
        }
        "conic_kernel_membership" => {
            arity(a, 3, op)?;
            Verdict(conic_kernel_membership(
                &form(&a[0], f)?,
                &el(&a[1])?,
                &el(&a[2])?,
            )?)
        }
        "is_split" => {
            arity(a, 2, op)?;
            Verdict(is_split(&QuaternionAlgebra::new(
                &el(&a[0])?,
                &el(&a[1])?,
            )?)?)
        }
        "morita_transfer" => {
            arity(a, 1, op)?;
            let s = parse_involution(&a[0], f)?;
            Text(morita_transfer(&s, &s.algebra.conic_field()?)?.to_string())
        }
        "e1_invariant" => {
            arity(a, 1, op)?;
            Text(e1_invariant(&parse_involution(&a[0], f)?)?.rep.to_string())
        }
        "e2_invariant" => {
            arity(a, 1, op)?;
            Text(
                e2_invariant(&parse_involution(&a[0], f)?)?
                    .simplify()?
                    .to_string(),
            )
        }
        "e2_trivial" => {
            arity(a, 1, op)?;
            Verdict(e2_trivial(&parse_involution(&a[0], f)?)?)
        }
        "iso_generic" => {
            arity(a, 3, op)?;
            let s = parse_involution(&a[0], f)?;
            let s2 = parse_involution(&a[1], f)?;
            let fq = s.algebra.conic_field()?;
            Verdict(iso_generic(&s, &s2, &parse_element(&a[2], &fq)?, &fq)?)
        }
        "iso_base" => {
            arity(a, 2, op)?;
            Verdict(iso_base(
                &parse_involution(&a[0], f)?,
                &parse_involution(&a[1], f)?,
                &[],
            )?)
        }
        "generic_sum_residues" => {
            arity(a, 2, op)?;
            let Parsed::GenericSum(g) = parse(&a[0], f)? else {
                return Err(Error::InvalidArgument("expected gsum(h1, h2, t)".into()));
            };
            let e: i64 = a[1]
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad integer `{}`", a[1])))?;
            let r = generic_sum_residues(&g, e)?;
            let mut out = format!(
                "first: {}\nsecond: {}\nramified: {}",
                r.pair.first, r.pair.second, r.ramified
            );
            for o in &r.obligations {
                out.push_str(&format!("\nobligation: {}", o.statement));
            }
            Text(out)
        }
        _ => return Err(Error::InvalidArgument(format!("unknown op `{op}`"))),
    })
}

fn write_json<T: Serialize>(path: &Option<PathBuf>, value: &T) -> Result<()> {
    if let Some(p) = path {
        let s = serde_json::to_string_pretty(value).expect("serializable");
        std::fs::write(p, s + "\n")
            .map_err(|e| Error::InvalidArgument(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn scenario(which: &Which) -> Result<Report> {
    match which {
        Which::Example1 { control: true, .. } => run_example1_control(),
        Which::Example1 { k0, .. } => run_example1(K0Choice::parse(k0)?),
        Which::Example2 => run_example2(),
    }
}

/// Print to stdout; a closed pipe is not an error.
fn out(s: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{s}");
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.cmd {
        Cmd::Eval { field, expr } => {
            let f = parse_tower(field)?;
            out(&parse(expr, &f)?.to_string());
            Ok(0)
        }
        Cmd::Check { field, op, args } => {
            let f = parse_tower(field)?;
            match run_check(&f, op, args)? {
                Outcome::Text(t) => {
                    out(&t);
                    write_json(&cli.json, &t)?;
                    Ok(0)
                }
                Outcome::Verdict(v) => {
                    out(&serde_json::to_string_pretty(&v).expect("serializable"));
                    write_json(&cli.json, &v)?;
                    Ok(if v.status == Status::Reduced { 2 } else { 0 })
                }
            }
        }
        Cmd::Scenario { which } => {
            let r = scenario(which)?;
            out(r.summary().trim_end());
            if let Some(d) = r.elapsed {
                eprintln!("elapsed: {:.3} s", d.as_secs_f64());
            }
            write_json(&cli.json, &r)?;
            Ok(r.exit_code() as u8)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
