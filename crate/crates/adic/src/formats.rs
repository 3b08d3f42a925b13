//! Text and JSON formats.
//!
//! * supernatural literals: `2^3*3^inf`, `1`, `;default=inf`, `5;default=inf`
//! * base sequences: `2,4,8`; residue vectors: `[1,1,5]`
//! * systems in cycle notation: `(0 1 2)(3 4 5)`
//! * partitions: JSON arrays of ascending point arrays; chains: JSON arrays
//!   of partitions
//!
//! Values print back through their `Display` impls (or [`partition_json`],
//! [`chain_json`]) and parse to equal values.

use adic_core::dynsys::{FinSystem, PartitionChain, PeriodicPartition};
use adic_core::supernat::Tail;
use adic_core::{AdicInt, BaseSequence, Exponent, RegularSeq, Supernatural};

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("{0}")]
    Syntax(String),
    #[error(transparent)]
    Invalid(#[from] adic_core::Error),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

fn syntax(msg: impl Into<String>) -> ParseError {
    ParseError::Syntax(msg.into())
}

fn number<T: std::str::FromStr>(s: &str, what: &str) -> Result<T, ParseError> {
    let s = s.trim();
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(syntax(format!("expected {what}, found {s:?}")));
    }
    s.parse().map_err(|_| syntax(format!("{what} out of range: {s}")))
}

pub fn parse_supernatural(s: &str) -> Result<Supernatural, ParseError> {
    let (body, tail) = match s.split_once(';') {
        Some((body, suffix)) => {
            let value = suffix
                .trim()
                .strip_prefix("default")
                .and_then(|r| r.trim_start().strip_prefix('='))
                .ok_or_else(|| syntax(format!("expected ;default=0|inf, found {suffix:?}")))?;
            let tail = match value.trim() {
                "0" => Tail::Zero,
                "inf" => Tail::Infinite,
                other => return Err(syntax(format!("default must be 0 or inf, found {other:?}"))),
            };
            (body.trim(), tail)
        }
        None => (s.trim(), Tail::Zero),
    };
    let mut factors = Vec::new();
    if body == "1" || (body.is_empty() && s.contains(';')) {
        return Ok(Supernatural::from_factors(factors, tail)?);
    }
    for factor in body.split('*') {
        let (p, e) = match factor.split_once('^') {
            Some((p, e)) => {
                let e = match e.trim() {
                    "inf" => Exponent::Infinite,
                    e => Exponent::Finite(number(e, "exponent")?),
                };
                (p, e)
            }
            None => (factor, Exponent::Finite(1)),
        };
        factors.push((number(p, "prime")?, e));
    }
    Ok(Supernatural::from_factors(factors, tail)?)
}

fn comma_list(s: &str) -> Result<Vec<u64>, ParseError> {
    s.split(',').map(|t| number(t, "level")).collect()
}

pub fn parse_base(s: &str) -> Result<BaseSequence, ParseError> {
    Ok(BaseSequence::new(comma_list(s)?)?)
}

pub fn parse_lengths(s: &str) -> Result<RegularSeq, ParseError> {
    Ok(RegularSeq::new(comma_list(s)?)?)
}

pub fn parse_adic(base: &BaseSequence, s: &str) -> Result<AdicInt, ParseError> {
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| syntax(format!("expected [r1,...,rK], found {s:?}")))?;
    let residues = inner.split(',').map(|t| number(t, "residue")).collect::<Result<Vec<u64>, _>>()?;
    Ok(AdicInt::from_residues(base, residues)?)
}

/// Parses cycle notation. Points missing from every cycle are fixed; without
/// an explicit `size` the system has `max point + 1` points.
pub fn parse_system(s: &str, size: Option<usize>) -> Result<FinSystem, ParseError> {
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut current: Option<Vec<usize>> = None;
    let mut token = String::new();
    let flush = |token: &mut String, current: &mut Option<Vec<usize>>| -> Result<(), ParseError> {
        if token.is_empty() {
            return Ok(());
        }
        let cycle = current.as_mut().ok_or_else(|| syntax(format!("point {token} outside parentheses")))?;
        cycle.push(number(token, "point")?);
        token.clear();
        Ok(())
    };
    for c in s.chars() {
        match c {
            '(' => {
                if current.is_some() {
                    return Err(syntax("nested parenthesis"));
                }
                current = Some(Vec::new());
            }
            ')' => {
                flush(&mut token, &mut current)?;
                let cycle = current.take().ok_or_else(|| syntax("unbalanced ')'"))?;
                if cycle.is_empty() {
                    return Err(syntax("empty cycle"));
                }
                cycles.push(cycle);
            }
            c if c.is_ascii_digit() => token.push(c),
            c if c.is_whitespace() || c == ',' => flush(&mut token, &mut current)?,
            c => return Err(syntax(format!("unexpected character {c:?}"))),
        }
    }
    if current.is_some() {
        return Err(syntax("unclosed '('"));
    }
    let size = match size {
        Some(n) => n,
        None => cycles.iter().flatten().max().map(|&m| m + 1).ok_or_else(|| syntax("no points"))?,
    };
    Ok(FinSystem::from_cycles(size, &cycles)?)
}

pub fn parse_blocks(s: &str) -> Result<Vec<Vec<usize>>, ParseError> {
    Ok(serde_json::from_str(s)?)
}

pub fn parse_partition<'a>(system: &'a FinSystem, s: &str) -> Result<PeriodicPartition<'a>, ParseError> {
    Ok(PeriodicPartition::from_blocks(system, &parse_blocks(s)?)?)
}

pub fn parse_chain<'a>(system: &'a FinSystem, s: &str) -> Result<PartitionChain<'a>, ParseError> {
    let levels: Vec<Vec<Vec<usize>>> = serde_json::from_str(s)?;
    let partitions = levels
        .iter()
        .map(|blocks| PeriodicPartition::from_blocks(system, blocks))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PartitionChain::new(partitions)?)
}

pub fn partition_json(p: &PeriodicPartition<'_>) -> String {
    serde_json::to_string(&p.blocks()).expect("integer arrays serialize")
}

pub fn chain_json(chain: &PartitionChain<'_>) -> String {
    let levels: Vec<Vec<Vec<usize>>> = chain.levels().iter().map(|p| p.blocks()).collect();
    serde_json::to_string(&levels).expect("integer arrays serialize")
}
