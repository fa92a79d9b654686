//! Line-oriented family files.
//!
//! ```text
//! # anything after '#' is ignored
//! p=7
//! 1 1 -1 0
//! 2 4 1 0
//! ```
//!
//! Coefficients may be negative and are reduced mod `p`.

use std::fmt::Write as _;

use super::{AffineEquation, EquationFamily};
use crate::error::{Error, Result};
use crate::fpcore::PrimeField;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

pub fn parse_family(text: &str) -> Result<EquationFamily> {
    let mut field: Option<PrimeField> = None;
    let mut equations = Vec::new();
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some(f) = field else {
            let value = line
                .strip_prefix("p=")
                .or_else(|| line.strip_prefix("p ="))
                .ok_or_else(|| parse_err(lineno, "expected header `p=<prime>`"))?;
            let p: u64 = value
                .trim()
                .parse()
                .map_err(|_| parse_err(lineno, format!("bad modulus `{}`", value.trim())))?;
            field = Some(PrimeField::new(p).map_err(|_| parse_err(lineno, format!("{p} is not an odd prime")))?);
            continue;
        };
        let nums: Vec<i64> = line
            .split_whitespace()
            .map(|tok| tok.parse::<i64>().map_err(|_| parse_err(lineno, format!("bad integer `{tok}`"))))
            .collect::<Result<_>>()?;
        let [a, b, c, d] = nums[..] else {
            return Err(parse_err(lineno, format!("expected 4 coefficients, found {}", nums.len())));
        };
        let eq = AffineEquation::from_signed(f, a, b, c, d).map_err(|e| match e {
            Error::ZeroCoefficient => parse_err(lineno, "coefficients a, b, c must be nonzero mod p"),
            other => other,
        })?;
        equations.push(eq);
        lines.push(lineno);
    }
    let field = field.ok_or_else(|| parse_err(0, "missing header `p=<prime>`"))?;
    EquationFamily::with_labels(field, equations, |i| lines[i])
}

pub fn write_family(family: &EquationFamily) -> String {
    let mut out = format!("p={}\n", family.field().p());
    for eq in family.equations() {
        let _ = writeln!(out, "{} {} {} {}", eq.a, eq.b, eq.c, eq.d);
    }
    out
}
