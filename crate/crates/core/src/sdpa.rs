//! SDPA sparse format (`.dat-s`).
//!
//! SDPA states the constraint as `sum_i F_i x_i - F_0 >= 0`, so a pencil
//! `A_0 + sum_i z_i A_i` is written with `F_0 = -A_0` and `F_i = A_i`.
//! Values use the shortest representation that round-trips exactly.

use std::fmt::Write as _;

use thiserror::Error;

use crate::linalg::SymMatrix;
use crate::sdp::{PencilProblem, SdpError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SdpaError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Pencil(#[from] SdpError),
}

pub fn export_sdpa(p: &PencilProblem) -> String {
    let mut out = String::new();
    let m = p.num_vars();
    let _ = writeln!(out, "{m}");
    let _ = writeln!(out, "{}", p.blocks().len());
    let sizes: Vec<String> = p.blocks().iter().map(|s| s.to_string()).collect();
    let _ = writeln!(out, "{}", sizes.join(" "));
    let obj: Vec<String> = p.objective().iter().map(|c| format!("{c}")).collect();
    let _ = writeln!(out, "{}", obj.join(" "));
    let neg = p.constant().scale(-1.0);
    for (matno, a) in std::iter::once(&neg).chain(p.coeffs()).enumerate() {
        let mut start = 0;
        for (b, &size) in p.blocks().iter().enumerate() {
            for i in 0..size {
                for j in i..size {
                    let v = a.get(start + i, start + j);
                    if v != 0.0 {
                        let _ = writeln!(out, "{matno} {} {} {} {v}", b + 1, i + 1, j + 1);
                    }
                }
            }
            start += size;
        }
    }
    out
}

/// Reads a file written by [`export_sdpa`] back into a pencil.
pub fn parse_sdpa(text: &str) -> Result<PencilProblem, SdpaError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split(['"', '*']).next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let err = |line: usize, msg: &str| SdpaError::Parse {
        line,
        msg: msg.to_string(),
    };
    let mut next = |what: &str| lines.next().ok_or_else(|| err(0, &format!("missing {what}")));

    let (ln, l) = next("variable count")?;
    let m: usize = l.parse().map_err(|_| err(ln, "bad variable count"))?;
    let (ln, l) = next("block count")?;
    let nb: usize = l.parse().map_err(|_| err(ln, "bad block count"))?;
    let (ln, l) = next("block sizes")?;
    let sizes = l
        .split([' ', ',', '{', '}', '(', ')', '\t'])
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<i64>().map(|v| v.unsigned_abs() as usize))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| err(ln, "bad block sizes"))?;
    if sizes.len() != nb {
        return Err(err(ln, "block size count does not match"));
    }
    // with no variables the objective line is blank and was filtered out
    let obj = if m == 0 {
        Vec::new()
    } else {
        let (ln, l) = next("objective")?;
        let obj = l
            .split([' ', ',', '{', '}', '(', ')', '\t'])
            .filter(|s| !s.is_empty())
            .map(str::parse::<f64>)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| err(ln, "bad objective"))?;
        if obj.len() != m {
            return Err(err(ln, "objective length does not match"));
        }
        obj
    };
    let n: usize = sizes.iter().sum();
    let offsets: Vec<usize> = sizes
        .iter()
        .scan(0, |acc, s| {
            let o = *acc;
            *acc += s;
            Some(o)
        })
        .collect();
    let mut mats = vec![SymMatrix::zeros(n); m + 1];
    for (ln, l) in lines {
        let f: Vec<&str> = l.split_whitespace().collect();
        if f.len() != 5 {
            return Err(err(ln, "expected five fields"));
        }
        let idx = |s: &str| s.parse::<usize>().map_err(|_| err(ln, "bad index"));
        let (matno, blk, i, j) = (idx(f[0])?, idx(f[1])?, idx(f[2])?, idx(f[3])?);
        let v: f64 = f[4].parse().map_err(|_| err(ln, "bad value"))?;
        if matno > m || blk == 0 || blk > nb || i == 0 || j == 0 || i > sizes[blk - 1] || j > sizes[blk - 1] {
            return Err(err(ln, "index out of range"));
        }
        let o = offsets[blk - 1];
        mats[matno].set(o + i - 1, o + j - 1, v);
    }
    let constant = mats[0].scale(-1.0);
    let coeffs = mats.split_off(1);
    Ok(PencilProblem::new(constant, coeffs)?
        .with_objective(obj)?
        .with_blocks(sizes)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_only_identity() {
        let p = PencilProblem::new(SymMatrix::identity(2), vec![]).unwrap();
        let text = export_sdpa(&p);
        let entries: Vec<&str> = text.lines().skip(4).collect();
        assert_eq!(entries, vec!["0 1 1 1 -1", "0 1 2 2 -1"]);
        assert!(text.starts_with("0\n1\n2\n"));
        let back = parse_sdpa(&text).unwrap();
        assert_eq!(back.constant(), p.constant());
    }

    #[test]
    fn round_trip_is_exact() {
        let a0 = SymMatrix::from_rows(&[vec![0.1, 1.0 / 3.0], vec![1.0 / 3.0, -2.5e-17]]);
        let a1 = SymMatrix::from_rows(&[vec![std::f64::consts::PI, 0.0], vec![0.0, 1e300]]);
        let p = PencilProblem::new(a0, vec![a1])
            .unwrap()
            .with_objective(vec![0.7])
            .unwrap();
        let back = parse_sdpa(&export_sdpa(&p)).unwrap();
        assert_eq!(back.constant(), p.constant());
        assert_eq!(back.coeffs(), p.coeffs());
        assert_eq!(back.objective(), p.objective());
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_sdpa("1\n1\n2\n0\n0 1 3 1 1.0\n").is_err());
        assert!(parse_sdpa("x\n").is_err());
    }
}
