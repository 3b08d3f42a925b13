//! The `adic` command line.
//!
//! Exit status: 0 on success, 2 when the command line or an input literal
//! does not parse, 1 when the operation itself fails.

use std::ffi::OsString;
use std::io::Write;

use adic_core::dynsys::{all_partitions, FinSystem, PartitionChain, PeriodicPartition};
use adic_core::odometer::Cylinder;
use adic_core::projection::{max_odometer_factor, project};
use adic_core::{AdicInt, Supernatural};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

// `json!` objects serialize with keys in alphabetical order.

use crate::formats::{self, ParseError};
use crate::report::FactorMapReport;

#[derive(Debug, Parser)]
#[command(name = "adic", version, about = "Periodic partitions, supernatural numbers and odometer factors")]
pub struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Supernatural number arithmetic.
    #[command(subcommand)]
    Sn(SnCommand),
    /// Period set and its supernatural number.
    Ess(SystemArg),
    /// Every periodic partition of a given length, by exhaustive search.
    Oracle {
        #[command(flatten)]
        system: SystemArg,
        length: usize,
    },
    /// Compatibility of periodic partitions.
    #[command(subcommand)]
    Compat(CompatCommand),
    /// Regular sequences of periodic partitions.
    #[command(subcommand)]
    Chain(ChainCommand),
    /// Factor map onto an odometer, as a JSON report.
    Project {
        #[command(flatten)]
        system: SystemArg,
        /// Target levels, e.g. `2,4,12`.
        #[arg(required_unless_present = "max", conflicts_with = "max")]
        levels: Option<String>,
        /// Project onto the largest odometer factor.
        #[arg(long)]
        max: bool,
        /// Working depth for `--max`.
        #[arg(long, requires = "max")]
        depth: Option<usize>,
    },
    /// Odometer arithmetic at finite depth.
    #[command(subcommand)]
    Odo(OdoCommand),
}

#[derive(Debug, Args)]
pub struct SystemArg {
    /// Permutation in cycle notation, e.g. `(0 1 2)(3 4 5)`.
    pub system: String,
    /// Number of points; points missing from every cycle are fixed.
    #[arg(long)]
    pub size: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum SnCommand {
    Mul { a: String, b: String },
    Gcd { a: String, b: String },
    Lcm { a: String, b: String },
    /// Divisibility order.
    Leq { a: String, b: String },
    /// Supernatural number of the divisors of `n`.
    Phi0 { n: u64 },
    /// Supernatural number of the divisors of a set.
    PhiSet {
        #[arg(required = true)]
        values: Vec<u64>,
    },
    /// Whether `n` lies in the regular set of `a`.
    Contains { a: String, n: u64 },
    /// Regular sequence approaching `a`.
    Seq {
        a: String,
        depth: usize,
        /// Only use primes up to this bound (needed for `;default=inf`).
        #[arg(long)]
        horizon: Option<u64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum CompatCommand {
    /// Whether two partitions are compatible.
    Check {
        #[command(flatten)]
        system: SystemArg,
        first: String,
        second: String,
    },
    /// A partition of length `m` compatible with the given one.
    Make {
        #[command(flatten)]
        system: SystemArg,
        partition: String,
        m: usize,
    },
    /// Every partition of length `m` compatible with the given one.
    Enumerate {
        #[command(flatten)]
        system: SystemArg,
        partition: String,
        m: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum ChainCommand {
    /// Coherent chain with the given lengths, e.g. `2,4,12`.
    Build {
        #[command(flatten)]
        system: SystemArg,
        lengths: String,
    },
    /// Insert a level of length `m`.
    Extend {
        #[command(flatten)]
        system: SystemArg,
        chain: String,
        m: usize,
    },
    Validate {
        #[command(flatten)]
        system: SystemArg,
        chain: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum OdoCommand {
    Add { base: String, x: String, y: String },
    Neg { base: String, x: String },
    /// `x + t e`, one step by default.
    Translate {
        base: String,
        x: String,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        by: i64,
    },
    Metric { base: String, x: String, y: String },
    /// Truncation points of the cylinder `{a : a_level = residue}`.
    Cylinder { base: String, level: usize, residue: u64 },
    /// The odometer at a level (default: full depth) as a cycle.
    Truncate { base: String, level: Option<usize> },
    /// Image of an integer.
    FromInt {
        base: String,
        #[arg(allow_hyphen_values = true)]
        z: i64,
    },
}

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Domain(#[from] adic_core::Error),
}

/// Runs the command line `args` (program name first) and returns the exit
/// status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(rendered.as_bytes()) } else { out.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match execute(&cli) {
        Ok(text) => {
            let _ = writeln!(out, "{text}");
            0
        }
        Err(Failure::Parse(e)) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
        Err(Failure::Domain(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("values serialize")
}

fn system(arg: &SystemArg) -> Result<FinSystem, ParseError> {
    formats::parse_system(&arg.system, arg.size)
}

fn sn(a: &str) -> Result<Supernatural, ParseError> {
    formats::parse_supernatural(a)
}

fn execute(cli: &Cli) -> Result<String, Failure> {
    let json = cli.json;
    let literal = |s: Supernatural| if json { to_json(&json!({ "result": s.to_string() })) } else { s.to_string() };
    let flag = |b: bool| if json { to_json(&json!({ "result": b })) } else { b.to_string() };
    Ok(match &cli.command {
        Command::Sn(cmd) => match cmd {
            SnCommand::Mul { a, b } => literal(sn(a)?.mul(&sn(b)?)),
            SnCommand::Gcd { a, b } => literal(sn(a)?.gcd(&sn(b)?)),
            SnCommand::Lcm { a, b } => literal(sn(a)?.lcm(&sn(b)?)),
            SnCommand::Leq { a, b } => flag(sn(a)?.leq(&sn(b)?)),
            SnCommand::Phi0 { n } => literal(Supernatural::phi0(*n)?),
            SnCommand::PhiSet { values } => literal(Supernatural::phi_of_set(values)?),
            SnCommand::Contains { a, n } => flag(sn(a)?.contains(*n)?),
            SnCommand::Seq { a, depth, horizon } => {
                let a = sn(a)?;
                let seq = match horizon {
                    Some(h) => a.regular_sequence_with_horizon(*depth, *h)?,
                    None => a.regular_sequence(*depth)?,
                };
                if json {
                    to_json(&json!({ "result": seq.terms() }))
                } else {
                    join(seq.terms())
                }
            }
        },
        Command::Ess(arg) => {
            let s = system(arg)?;
            let ess = s.ess_periods();
            if json {
                to_json(&json!({ "gcd": ess.gcd, "periods": ess.periods, "phi": ess.phi.to_string() }))
            } else {
                format!("periods: {}\nphi: {}", join(&ess.periods), ess.phi)
            }
        }
        Command::Oracle { system: arg, length } => {
            let s = system(arg)?;
            let all = all_partitions(&s, *length)?;
            let blocks: Vec<Vec<Vec<usize>>> = all.iter().map(PeriodicPartition::blocks).collect();
            if json {
                to_json(&json!({ "count": blocks.len(), "partitions": blocks }))
            } else {
                lines(all.iter().map(formats::partition_json), "no partitions")
            }
        }
        Command::Compat(cmd) => compat(cmd, json)?,
        Command::Chain(cmd) => chain(cmd, json)?,
        Command::Project { system: arg, levels, max, depth } => {
            let s = system(arg)?;
            let map = if *max {
                max_odometer_factor(&s, *depth)?
            } else {
                let base = formats::parse_base(levels.as_deref().expect("required unless --max"))?;
                project(&s, &base)?
            };
            FactorMapReport::new(&map).to_json()
        }
        Command::Odo(cmd) => odo(cmd, json)?,
    })
}

fn compat(cmd: &CompatCommand, json: bool) -> Result<String, Failure> {
    Ok(match cmd {
        CompatCommand::Check { system: arg, first, second } => {
            let s = system(arg)?;
            let p = formats::parse_partition(&s, first)?;
            let q = formats::parse_partition(&s, second)?;
            let ok = p.is_compatible(&q)?;
            if json {
                to_json(&json!({ "compatible": ok }))
            } else {
                ok.to_string()
            }
        }
        CompatCommand::Make { system: arg, partition, m } => {
            let s = system(arg)?;
            let p = formats::parse_partition(&s, partition)?;
            formats::partition_json(&p.make_compatible(*m)?)
        }
        CompatCommand::Enumerate { system: arg, partition, m } => {
            let s = system(arg)?;
            let p = formats::parse_partition(&s, partition)?;
            let family = p.enumerate_compatible(*m)?;
            if json {
                let members: Vec<_> = family
                    .members
                    .iter()
                    .map(|m| json!({
                        "shifts": m.shifts,
                        "phase": m.phase,
                        "class": m.class,
                        "partition": m.partition.blocks()
                    }))
                    .collect();
                to_json(&json!({ "class_count": family.class_count, "members": members }))
            } else {
                let mut text = format!("classes: {}", family.class_count);
                for m in &family.members {
                    let shifts: Vec<u64> = m.shifts.iter().map(|&t| t as u64).collect();
                    text.push_str(&format!(
                        "\nclass {} shifts {} phase {} {}",
                        m.class,
                        join(&shifts),
                        m.phase,
                        formats::partition_json(&m.partition)
                    ));
                }
                text
            }
        }
    })
}

fn chain(cmd: &ChainCommand, json: bool) -> Result<String, Failure> {
    Ok(match cmd {
        ChainCommand::Build { system: arg, lengths } => {
            let s = system(arg)?;
            let lengths = formats::parse_lengths(lengths)?;
            formats::chain_json(&PartitionChain::build(&s, &lengths)?)
        }
        ChainCommand::Extend { system: arg, chain, m } => {
            let s = system(arg)?;
            let c = parse_chain_domain(&s, chain)?;
            formats::chain_json(&c.extend(*m)?)
        }
        ChainCommand::Validate { system: arg, chain } => {
            let s = system(arg)?;
            let c = parse_chain_domain(&s, chain)?;
            if json {
                to_json(&json!({ "valid": true, "coherent": c.is_coherent(), "lengths": c.lengths() }))
            } else {
                format!(
                    "valid chain, lengths {}, {}",
                    join(&c.lengths()),
                    if c.is_coherent() { "coherent" } else { "not coherent" }
                )
            }
        }
    })
}

// A chain whose levels are individually well formed but fail the chain
// conditions is a domain failure, not a parse failure.
fn parse_chain_domain<'a>(s: &'a FinSystem, text: &str) -> Result<PartitionChain<'a>, Failure> {
    let levels: Vec<Vec<Vec<usize>>> = serde_json::from_str(text).map_err(ParseError::from)?;
    let partitions = levels
        .iter()
        .map(|b| PeriodicPartition::from_blocks(s, b).map_err(ParseError::from))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PartitionChain::new(partitions)?)
}

fn odo(cmd: &OdoCommand, json: bool) -> Result<String, Failure> {
    let point = |a: AdicInt| if json { to_json(&json!({ "result": a.residues() })) } else { a.to_string() };
    Ok(match cmd {
        OdoCommand::Add { base, x, y } => {
            let base = formats::parse_base(base)?;
            let (x, y) = (formats::parse_adic(&base, x)?, formats::parse_adic(&base, y)?);
            point(x.add(&y)?)
        }
        OdoCommand::Neg { base, x } => {
            let base = formats::parse_base(base)?;
            point(formats::parse_adic(&base, x)?.neg())
        }
        OdoCommand::Translate { base, x, by } => {
            let base = formats::parse_base(base)?;
            point(formats::parse_adic(&base, x)?.translate_by(*by))
        }
        OdoCommand::Metric { base, x, y } => {
            let base = formats::parse_base(base)?;
            let (x, y) = (formats::parse_adic(&base, x)?, formats::parse_adic(&base, y)?);
            let d = x.metric(&y)?;
            if json {
                to_json(&json!({ "distance": d.value.to_string(), "agrees_to_depth": d.agrees_to_depth }))
            } else if d.agrees_to_depth {
                format!("{} (agree to working depth)", d.value)
            } else {
                d.value.to_string()
            }
        }
        OdoCommand::Cylinder { base, level, residue } => {
            let base = formats::parse_base(base)?;
            let members = Cylinder::new(&base, *level, *residue)?.members();
            if json {
                to_json(&json!({ "members": members }))
            } else {
                join(&members)
            }
        }
        OdoCommand::Truncate { base, level } => {
            let base = formats::parse_base(base)?;
            let s = base.truncate(level.unwrap_or(base.depth()))?;
            if json {
                to_json(&json!({ "size": s.size(), "cycles": s.cycles() }))
            } else {
                s.to_string()
            }
        }
        OdoCommand::FromInt { base, z } => {
            let base = formats::parse_base(base)?;
            point(AdicInt::from_integer(&base, *z))
        }
    })
}

fn join(values: &[u64]) -> String {
    values.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

fn lines(items: impl Iterator<Item = String>, empty: &str) -> String {
    let items: Vec<String> = items.collect();
    if items.is_empty() {
        empty.to_string()
    } else {
        items.join("\n")
    }
}
