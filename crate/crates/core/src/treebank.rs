//! Line-oriented treebank files: one bracketed sentence tree per line.

use crate::tree::{ParseTree, TreeError};
use std::fs;
use std::io::Write;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TreebankError {
    #[error("{path}:{line}: {source}")]
    Parse { path: String, line: usize, source: TreeError },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

/// Parses treebank text; blank lines are skipped.
pub fn parse_treebank(text: &str, path: &str) -> Result<Vec<ParseTree>, TreebankError> {
    let mut trees = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let tree = ParseTree::parse_bracketed(line).map_err(|source| TreebankError::Parse {
            path: path.to_string(),
            line: i + 1,
            source,
        })?;
        trees.push(tree);
    }
    Ok(trees)
}

pub fn read_treebank(path: &Path) -> Result<Vec<ParseTree>, TreebankError> {
    let text = fs::read_to_string(path).map_err(|source| TreebankError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_treebank(&text, &path.display().to_string())
}

pub fn write_treebank(path: &Path, trees: &[ParseTree]) -> Result<(), TreebankError> {
    let mut out = fs::File::create(path).map_err(|source| TreebankError::Io {
        path: path.display().to_string(),
        source,
    })?;
    for tree in trees {
        writeln!(out, "{}", tree.serialize_bracketed()).map_err(|source| TreebankError::Io {
            path: path.display().to_string(),
            source,
        })?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_through_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("tiny.tb");
        let trees = vec![
            ParseTree::parse_bracketed("(8 (23 is) (23 true))").unwrap(),
            ParseTree::parse_bracketed("(23 x)").unwrap(),
        ];
        write_treebank(&path, &trees).unwrap();
        assert_eq!(read_treebank(&path).unwrap(), trees);
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_treebank("(23 x)\n\n(99 y)\n", "test.tb").unwrap_err();
        match err {
            TreebankError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected error {other:?}"),
        }
    }
}
