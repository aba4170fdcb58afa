use std::io::{BufRead, Write};

use crate::error::{Error, Result};

use super::MultiGraph;
use crate::generators::ExponentialProcess;

/// First line of a graph file: `n m method seed`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphHeader {
    pub n: usize,
    pub m: usize,
    pub method: String,
    pub seed: u64,
}

/// Writes the header and one `a b multiplicity` line per distinct edge.
pub fn write_graph<W: Write>(mut out: W, header: &GraphHeader, g: &MultiGraph) -> Result<()> {
    writeln!(out, "{} {} {} {}", g.n(), g.m(), header.method, header.seed)?;
    for (a, b, k) in g.edges() {
        writeln!(out, "{a} {b} {k}")?;
    }
    out.flush()?;
    Ok(())
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| parse_err(line, format!("bad {what} {tok:?}")))
}

/// Reads a graph file written by [`write_graph`]. Blank lines are ignored.
pub fn read_graph<R: BufRead>(input: R) -> Result<(GraphHeader, MultiGraph)> {
    let mut header = None;
    let mut edges = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let mut toks = line.split_whitespace();
        let Some(first) = toks.next() else { continue };
        let mut toks = std::iter::once(first).chain(toks);
        if header.is_none() {
            let n = field(toks.next(), lineno, "n")?;
            let m = field(toks.next(), lineno, "m")?;
            let method: String = field(toks.next(), lineno, "method")?;
            let seed = field(toks.next(), lineno, "seed")?;
            header = Some(GraphHeader { n, m, method, seed });
        } else {
            let a: u32 = field(toks.next(), lineno, "endpoint")?;
            let b: u32 = field(toks.next(), lineno, "endpoint")?;
            let k: u32 = field(toks.next(), lineno, "multiplicity")?;
            edges.push((a, b, k));
        }
        if toks.next().is_some() {
            return Err(parse_err(lineno, "trailing fields"));
        }
    }
    let header = header.ok_or_else(|| parse_err(1, "empty graph file"))?;
    let g = MultiGraph::from_weighted_edges(header.n, header.m, &edges)?;
    Ok((header, g))
}

/// Writes the increments `w_1, ..., w_len`, one per line, in shortest
/// round-trip form so that [`read_process`] rebuilds identical sums.
pub fn write_process<W: Write>(mut out: W, p: &ExponentialProcess) -> Result<()> {
    for w in p.increments() {
        writeln!(out, "{w:?}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_process<R: BufRead>(input: R) -> Result<ExponentialProcess> {
    let mut increments = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        increments.push(t.parse::<f64>().map_err(|_| parse_err(i + 1, format!("bad increment {t:?}")))?);
    }
    ExponentialProcess::from_increments(increments)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let g = MultiGraph::from_edges(3, 2, &[(1, 1), (1, 2), (2, 1), (2, 1), (3, 3), (3, 3)]).unwrap();
        let h = GraphHeader { n: 3, m: 2, method: "exp".into(), seed: 17 };
        let mut buf = Vec::new();
        write_graph(&mut buf, &h, &g).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text, "3 2 exp 17\n1 1 1\n1 2 3\n3 3 2\n");
        let (h2, g2) = read_graph(&buf[..]).unwrap();
        assert_eq!(h, h2);
        assert_eq!(g, g2);
    }

    #[test]
    fn bad_files_report_the_line() {
        let err = read_graph(&b"2 1 exp 0\n1 1 1\n1 x 1\n"[..]).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        assert!(read_graph(&b"2 1 exp 0\n1 1 1\n"[..]).is_err());
        assert!(read_graph(&b""[..]).is_err());
    }

    #[test]
    fn process_round_trip() {
        let p = ExponentialProcess::sample(50, &mut crate::rng::stream(3)).unwrap();
        let mut buf = Vec::new();
        write_process(&mut buf, &p).unwrap();
        assert_eq!(read_process(&buf[..]).unwrap(), p);
        assert!(matches!(read_process(&b"1.0\nx\n"[..]), Err(Error::Parse { line: 2, .. })));
    }
}
