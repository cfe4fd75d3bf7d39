//! Plain-text serialization for instances and matrices.
//!
//! The format is line oriented; numbers use 17 significant digits so every
//! `f64` round-trips exactly.
//!
//! ```text
//! latent-bandit-instance v1
//! users <N>
//! arms <M>
//! clusters <C>
//! nu <float>
//! noise <kind> <sigma>
//! cluster_of <c_0> <c_1> ... <c_{N-1}>
//! matrix X <C> <M>
//! <row 0>
//! ...
//! matrix P <N> <M>
//! <row 0>
//! ...
//! ```
//!
//! Lines starting with `#` are comments. A standalone matrix uses the same
//! `matrix <name> <rows> <cols>` block, optionally preceded by `row_index`
//! and `col_index` lines naming the global indices of a submatrix.

use std::io::{BufRead, Write};

use super::{Instance, NoiseKind, NoiseModel};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

const HEADER: &str = "latent-bandit-instance v1";

/// Formats a float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_matrix<W: Write>(w: &mut W, name: &str, m: &Matrix) -> Result<()> {
    writeln!(w, "matrix {name} {} {}", m.nrows(), m.ncols())?;
    for row in m.row_iter() {
        let line: Vec<String> = row.iter().map(|&x| fmt_f64(x)).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    Ok(())
}

/// Writes a submatrix together with the global indices of its rows and columns.
pub fn write_indexed_matrix<W: Write>(
    w: &mut W,
    name: &str,
    rows: &[usize],
    cols: &[usize],
    m: &Matrix,
) -> Result<()> {
    writeln!(w, "row_index {}", join(rows))?;
    writeln!(w, "col_index {}", join(cols))?;
    write_matrix(w, name, m)
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

pub fn write_instance<W: Write>(w: &mut W, inst: &Instance) -> Result<()> {
    writeln!(w, "{HEADER}")?;
    writeln!(w, "users {}", inst.num_users())?;
    writeln!(w, "arms {}", inst.num_arms())?;
    writeln!(w, "clusters {}", inst.num_clusters())?;
    writeln!(w, "nu {}", fmt_f64(inst.nu()))?;
    let noise = inst.noise();
    writeln!(w, "noise {} {}", noise.kind.as_str(), fmt_f64(noise.sigma))?;
    writeln!(w, "cluster_of {}", join(inst.cluster_of()))?;
    write_matrix(w, "X", inst.cluster_rows())?;
    write_matrix(w, "P", inst.rewards())?;
    Ok(())
}

pub fn instance_to_string(inst: &Instance) -> String {
    let mut buf = Vec::new();
    write_instance(&mut buf, inst).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

struct Lines<R> {
    inner: std::io::Lines<R>,
    line: usize,
}

impl<R: BufRead> Lines<R> {
    fn next_content(&mut self) -> Result<Option<(usize, String)>> {
        for l in self.inner.by_ref() {
            self.line += 1;
            let l = l?;
            let t = l.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            return Ok(Some((self.line, t.to_string())));
        }
        Ok(None)
    }

    fn expect(&mut self, what: &str) -> Result<(usize, String)> {
        self.next_content()?
            .ok_or_else(|| Error::parse(self.line, format!("unexpected end of input, expected {what}")))
    }

    fn keyed(&mut self, key: &str) -> Result<(usize, Vec<String>)> {
        let (n, l) = self.expect(key)?;
        let mut parts = l.split_whitespace();
        if parts.next() != Some(key) {
            return Err(Error::parse(n, format!("expected `{key}`, found `{l}`")));
        }
        Ok((n, parts.map(str::to_string).collect()))
    }
}

fn parse_num<T: std::str::FromStr>(line: usize, s: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::parse(line, format!("cannot parse `{s}` as a number")))
}

fn single<T: std::str::FromStr>(line: usize, parts: &[String]) -> Result<T> {
    match parts {
        [x] => parse_num(line, x),
        _ => Err(Error::parse(line, "expected exactly one value")),
    }
}

fn read_matrix_block<R: BufRead>(lines: &mut Lines<R>, name: &str) -> Result<Matrix> {
    let (n, parts) = lines.keyed("matrix")?;
    if parts.len() != 3 || parts[0] != name {
        return Err(Error::parse(n, format!("expected `matrix {name} <rows> <cols>`")));
    }
    let rows: usize = parse_num(n, &parts[1])?;
    let cols: usize = parse_num(n, &parts[2])?;
    let mut m = Matrix::zeros(rows, cols);
    for i in 0..rows {
        let (ln, l) = lines.expect("matrix row")?;
        let values: Vec<&str> = l.split_whitespace().collect();
        if values.len() != cols {
            return Err(Error::parse(ln, format!("expected {cols} values, found {}", values.len())));
        }
        for (j, v) in values.iter().enumerate() {
            m[(i, j)] = parse_num(ln, v)?;
        }
    }
    Ok(m)
}

pub fn read_instance<R: BufRead>(r: R) -> Result<Instance> {
    let mut lines = Lines {
        inner: r.lines(),
        line: 0,
    };
    let (n, header) = lines.expect("header")?;
    if header != HEADER {
        return Err(Error::parse(n, format!("expected `{HEADER}`")));
    }
    let (n, p) = lines.keyed("users")?;
    let users: usize = single(n, &p)?;
    let (n, p) = lines.keyed("arms")?;
    let arms: usize = single(n, &p)?;
    let (n, p) = lines.keyed("clusters")?;
    let clusters: usize = single(n, &p)?;
    let (n, p) = lines.keyed("nu")?;
    let nu: f64 = single(n, &p)?;
    let (n, p) = lines.keyed("noise")?;
    let noise = match p.as_slice() {
        [kind, sigma] => NoiseModel {
            kind: NoiseKind::parse(kind).ok_or_else(|| Error::parse(n, format!("unknown noise `{kind}`")))?,
            sigma: parse_num(n, sigma)?,
        },
        _ => return Err(Error::parse(n, "expected `noise <kind> <sigma>`")),
    };
    let (n, p) = lines.keyed("cluster_of")?;
    let cluster_of = p
        .iter()
        .map(|s| parse_num(n, s))
        .collect::<Result<Vec<usize>>>()?;
    let x = read_matrix_block(&mut lines, "X")?;
    let pm = read_matrix_block(&mut lines, "P")?;
    if pm.shape() != (users, arms) || x.shape() != (clusters, arms) {
        return Err(Error::parse(lines.line, "matrix shapes disagree with header"));
    }
    Instance::new(pm, cluster_of, x, nu, noise)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{generate_rcs_instance, RowDistribution};

    #[test]
    fn instance_text_round_trip_is_exact() {
        let inst = generate_rcs_instance(7, 5, 2, 0.01, RowDistribution::Gaussian { mean: 0.0, std: 1.0 }, 4)
            .unwrap()
            .with_noise(NoiseModel::uniform(0.5));
        let text = instance_to_string(&inst);
        let back = read_instance(text.as_bytes()).unwrap();
        assert_eq!(back, inst);
        assert_eq!(instance_to_string(&back), text);
    }

    #[test]
    fn truncated_input_reports_line() {
        let inst = generate_rcs_instance(3, 2, 1, 0.0, RowDistribution::Uniform { lo: 0.0, hi: 1.0 }, 0).unwrap();
        let text = instance_to_string(&inst);
        let cut: String = text.lines().take(9).collect::<Vec<_>>().join("\n");
        assert!(matches!(read_instance(cut.as_bytes()), Err(Error::Parse { .. })));
    }
}
