//! The textual `.circ` netlist format.
//!
//! ```text
//! # comment
//! circuit <m> <n>
//! v <id> <gate>      one per vertex, in sequence order; gate is and|or|not|fork|in<i>|out<j>
//! e <src> <dst>      one per edge, in sequence order
//! ```
//!
//! Vertex ids in a file may be any distinct non-negative integers; they are
//! renumbered to sequence positions on read. Writing always uses positions.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::circuit::{Circuit, Gate};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct NetlistError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> NetlistError {
    NetlistError {
        line,
        message: message.into(),
    }
}

pub fn parse_gate(s: &str) -> Option<Gate> {
    match s {
        "and" => Some(Gate::And),
        "or" => Some(Gate::Or),
        "not" => Some(Gate::Not),
        "fork" => Some(Gate::Fork),
        _ => {
            if let Some(i) = s.strip_prefix("in") {
                i.parse().ok().filter(|&i| i >= 1).map(Gate::Input)
            } else if let Some(j) = s.strip_prefix("out") {
                j.parse().ok().filter(|&j| j >= 1).map(Gate::Output)
            } else {
                None
            }
        }
    }
}

/// Parses a netlist. The result is not validated; call [`Circuit::validate`].
pub fn parse(text: &str) -> Result<Circuit, NetlistError> {
    let mut header: Option<(usize, usize)> = None;
    let mut gates = Vec::new();
    let mut ids: HashMap<u64, usize> = HashMap::new();
    let mut edges = Vec::new();

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("");
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        let number = |s: &str| s.parse::<u64>().map_err(|_| err(line, format!("expected a number, found {s:?}")));
        match (header, fields[0]) {
            (None, "circuit") => {
                if fields.len() != 3 {
                    return Err(err(line, "expected `circuit <m> <n>`"));
                }
                header = Some((number(fields[1])? as usize, number(fields[2])? as usize));
            }
            (None, _) => return Err(err(line, "expected `circuit <m> <n>` header")),
            (Some(_), "circuit") => return Err(err(line, "duplicate header")),
            (Some(_), "v") => {
                if fields.len() != 3 {
                    return Err(err(line, "expected `v <id> <gate>`"));
                }
                if !edges.is_empty() {
                    return Err(err(line, "vertex declared after the edge list"));
                }
                let id = number(fields[1])?;
                let gate = parse_gate(fields[2]).ok_or_else(|| err(line, format!("unknown gate {:?}", fields[2])))?;
                if ids.insert(id, gates.len()).is_some() {
                    return Err(err(line, format!("duplicate vertex id {id}")));
                }
                gates.push(gate);
            }
            (Some(_), "e") => {
                if fields.len() != 3 {
                    return Err(err(line, "expected `e <src> <dst>`"));
                }
                let lookup = |s: &str| -> Result<usize, NetlistError> {
                    let id = number(s)?;
                    ids.get(&id).copied().ok_or_else(|| err(line, format!("undeclared vertex id {id}")))
                };
                edges.push((lookup(fields[1])?, lookup(fields[2])?));
            }
            (Some(_), other) => return Err(err(line, format!("unknown record {other:?}"))),
        }
    }

    let (m, n) = header.ok_or_else(|| err(0, "missing `circuit <m> <n>` header"))?;
    Ok(Circuit::from_parts(m, n, gates, edges))
}

/// Canonical rendering; `parse(&write(c)) == c` for every circuit.
pub fn write(c: &Circuit) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "circuit {} {}", c.inputs(), c.outputs());
    for (v, g) in c.gates().iter().enumerate() {
        let _ = writeln!(s, "v {v} {g}");
    }
    for (src, dst) in c.edges() {
        let _ = writeln!(s, "e {src} {dst}");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_comments_and_arbitrary_ids() {
        let text = "# not gate\ncircuit 1 1\nv 10 in1\nv 20 not # negation\nv 30 out1\n\ne 10 20\ne 20 30\n";
        let c = parse(text).unwrap();
        assert_eq!(c.gates(), &[Gate::Input(1), Gate::Not, Gate::Output(1)]);
        assert_eq!(c.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(write(&c), "circuit 1 1\nv 0 in1\nv 1 not\nv 2 out1\ne 0 1\ne 1 2\n");
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(parse("circuit 1 1\nv 0 nand\n").unwrap_err().line, 2);
        assert_eq!(parse("v 0 in1\n").unwrap_err().line, 1);
        assert_eq!(parse("circuit 1 1\nv 0 in1\ne 0 5\n").unwrap_err().line, 3);
        assert_eq!(parse("circuit 1 1\nv 0 in1\nv 0 out1\n").unwrap_err().line, 3);
        assert!(parse("").is_err());
        assert!(parse_gate("in0").is_none());
    }

    #[test]
    fn invalid_circuits_still_parse() {
        let c = parse("circuit 1 1\nv 0 in1\nv 1 and\nv 2 out1\ne 0 1\ne 1 2\n").unwrap();
        assert!(!c.validate().is_ok());
    }
}
