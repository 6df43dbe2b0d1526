//! Plain-text edge lists.
//!
//! ```text
//! # optional comments
//! n=3
//! 0,1
//! 1,2
//! ```
//!
//! The `n=<count>` header must precede the edges; each edge line is
//! `pledger,lender` with 0-based indices.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::RehypoNetwork;
use crate::error::{Error, Result};

pub fn parse_edge_list(text: &str, origin: &Path) -> Result<RehypoNetwork> {
    let err = |line: usize, message: String| Error::Parse {
        path: origin.to_path_buf(),
        line,
        message,
    };
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(count) = line.strip_prefix("n=") {
            if n.is_some() {
                return Err(err(lineno, "repeated n= header".into()));
            }
            let count = count
                .trim()
                .parse()
                .map_err(|e| err(lineno, format!("bad bank count: {e}")))?;
            n = Some(count);
            continue;
        }
        if n.is_none() {
            return Err(err(lineno, "edge before n= header".into()));
        }
        let (a, b) = line
            .split_once(',')
            .ok_or_else(|| err(lineno, format!("expected `pledger,lender`, got `{line}`")))?;
        let parse = |s: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|e| err(lineno, format!("bad index `{}`: {e}", s.trim())))
        };
        edges.push((parse(a)?, parse(b)?));
    }
    let n = n.ok_or_else(|| err(0, "missing n= header".into()))?;
    RehypoNetwork::from_edges(n, edges)
}

pub fn write_edge_list(net: &RehypoNetwork) -> String {
    let mut out = format!("n={}\n", net.n());
    for (j, i) in net.edges() {
        let _ = writeln!(out, "{j},{i}");
    }
    out
}

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<RehypoNetwork> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_edge_list(&text, path)
}

pub fn save_edge_list(net: &RehypoNetwork, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, write_edge_list(net)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<RehypoNetwork> {
        parse_edge_list(s, Path::new("<mem>"))
    }

    #[test]
    fn parses_comments_and_blank_lines() {
        let net = parse("# chain\nn=3\n\n0,1 # first\n 1 , 2\n").unwrap();
        assert_eq!(net.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn header_required() {
        assert!(matches!(parse("0,1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse(""), Err(Error::Parse { line: 0, .. })));
    }

    #[test]
    fn malformed_lines() {
        assert!(matches!(
            parse("n=3\n0;1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(parse("n=3\n0,x\n"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse("n=2\n0,5\n"),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("net.txt");
        let net = RehypoNetwork::from_edges(4, [(0, 1), (3, 2), (1, 0)]).unwrap();
        save_edge_list(&net, &path).unwrap();
        assert_eq!(load_edge_list(&path).unwrap(), net);
    }

    #[test]
    fn missing_file_is_io_error() {
        assert!(matches!(
            load_edge_list("/definitely/not/here.txt"),
            Err(Error::Io { .. })
        ));
    }
}
