//! Plain-text instance and solution files.
//!
//! Instance: blank lines and `#` comments are ignored; the first line is
//! `M K T_dl P0 eps_obj`, followed by M rows of K nonnegative weights. The
//! adjacency uses the default per-user relative threshold.

use std::io::{BufRead, Write};

use super::bnb::MilpSolution;
use super::graph::{BeamGraph, MilpInstance, DEFAULT_RELATIVE_THRESHOLD};
use crate::error::{Error, Result};

fn parse<T: std::str::FromStr>(tok: &str, what: &str) -> Result<T> {
    tok.parse().map_err(|_| Error::Format(format!("cannot parse {what} from {tok:?}")))
}

pub fn read_instance<R: BufRead>(r: R) -> Result<MilpInstance> {
    let mut lines = Vec::new();
    for line in r.lines() {
        let line = line?;
        let body = line.split('#').next().unwrap_or("").trim().to_string();
        if !body.is_empty() {
            lines.push(body);
        }
    }
    let header: Vec<&str> = lines.first().ok_or_else(|| Error::Format("empty instance".into()))?.split_whitespace().collect();
    if header.len() != 5 {
        return Err(Error::Format(format!("header needs 5 fields, found {}", header.len())));
    }
    let nb: usize = parse(header[0], "M")?;
    let nu: usize = parse(header[1], "K")?;
    let t_dl: usize = parse(header[2], "T_dl")?;
    let p0: f64 = parse(header[3], "P0")?;
    let eps: f64 = parse(header[4], "eps_obj")?;
    if lines.len() != nb + 1 {
        return Err(Error::Format(format!("expected {nb} weight rows, found {}", lines.len() - 1)));
    }
    let mut weights = Vec::with_capacity(nb * nu);
    for (m, row) in lines[1..].iter().enumerate() {
        let vals = row.split_whitespace().map(|t| parse::<f64>(t, "weight")).collect::<Result<Vec<_>>>()?;
        if vals.len() != nu {
            return Err(Error::Format(format!("row {m} has {} weights, expected {nu}", vals.len())));
        }
        weights.extend(vals);
    }
    let graph = BeamGraph::with_relative_threshold(nb, nu, weights, DEFAULT_RELATIVE_THRESHOLD)?;
    MilpInstance::with_epsilon(graph, t_dl, p0, eps)
}

pub fn write_instance<W: Write>(w: &mut W, inst: &MilpInstance) -> Result<()> {
    let g = &inst.graph;
    writeln!(w, "# M K T_dl P0 eps_obj")?;
    writeln!(w, "{} {} {} {:e} {:e}", g.num_beams(), g.num_users(), inst.t_dl, inst.p0, inst.epsilon_obj)?;
    for m in 0..g.num_beams() {
        let row: Vec<String> = (0..g.num_users()).map(|k| format!("{:e}", g.weight(m, k))).collect();
        writeln!(w, "{}", row.join(" "))?;
    }
    Ok(())
}

fn join(v: &[usize]) -> String {
    v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
}

/// `key value...` lines: objective, matching, optimality, gap, nodes, beams,
/// users and matched `beam:user` pairs (0-based).
pub fn write_solution<W: Write>(w: &mut W, sol: &MilpSolution) -> Result<()> {
    let nu = sol.y.len();
    let pairs: Vec<String> = sol
        .z
        .iter()
        .enumerate()
        .filter(|(_, v)| **v > 0.5)
        .map(|(i, _)| format!("{}:{}", i / nu, i % nu))
        .collect();
    writeln!(w, "objective {:.12}", sol.objective)?;
    writeln!(w, "matching {}", sol.matching_size)?;
    writeln!(w, "proven_optimal {}", sol.proven_optimal)?;
    writeln!(w, "gap {:e}", sol.gap)?;
    writeln!(w, "nodes {}", sol.nodes)?;
    writeln!(w, "beams {}", join(&sol.selected_beams()))?;
    writeln!(w, "users {}", join(&sol.selected_users()))?;
    writeln!(w, "pairs {}", pairs.join(" "))?;
    Ok(())
}
