//! Game documents: a canonical JSON representation of games (and their
//! optional class parameters), plus the line-oriented graph format for the
//! hardness gadget.
//!
//! Rational literals are integers or `"p/q"` strings; floats are rejected so
//! no value ever passes through a lossy representation. Rendering is
//! deterministic and `parse(render(doc)) == doc`.

use serde::{Deserialize, Serialize};

use crate::classes::gadget::{BipartiteGraph, GraphError};
use crate::classes::tcg::TcgSpec;
use crate::game::{GameError, NormalFormGame};
use crate::rational::Rational;

/// The class tag of a document, controlling which analyzer `analyze` runs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ClassTag {
    Raw,
    Gptg,
    Coordination,
    Tcg(TcgSpec),
}

/// A serializable two-player game with labelled strategies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameDocument {
    pub name: String,
    pub s1: Vec<String>,
    pub s2: Vec<String>,
    pub u1: Vec<Vec<Rational>>,
    pub u2: Vec<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<ClassTag>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DocumentError {
    #[error("{0}")]
    Syntax(String),
    #[error("invalid game: {0}")]
    Invalid(#[from] GameError),
}

impl GameDocument {
    pub fn from_game(name: &str, game: &NormalFormGame, class: Option<ClassTag>) -> Self {
        GameDocument {
            name: name.to_string(),
            s1: game.s1_labels().to_vec(),
            s2: game.s2_labels().to_vec(),
            u1: (0..game.n_rows())
                .map(|r| (0..game.n_cols()).map(|c| game.u1(r, c).clone()).collect())
                .collect(),
            u2: (0..game.n_rows())
                .map(|r| (0..game.n_cols()).map(|c| game.u2(r, c).clone()).collect())
                .collect(),
            class,
        }
    }

    pub fn to_game(&self) -> Result<NormalFormGame, GameError> {
        NormalFormGame::new(self.s1.clone(), self.s2.clone(), self.u1.clone(), self.u2.clone())
    }
}

/// Parses a game document from JSON text. Errors carry the position for
/// syntax problems and name the violation for structural ones; rationals are
/// normalized to lowest terms by construction.
pub fn parse_game(text: &str) -> Result<GameDocument, DocumentError> {
    let doc: GameDocument = serde_json::from_str(text).map_err(|e| {
        DocumentError::Syntax(format!("line {}, column {}: {e}", e.line(), e.column()))
    })?;
    doc.to_game()?;
    Ok(doc)
}

/// Renders a document as pretty-printed JSON with a trailing newline.
/// Output is byte-identical across runs for identical documents.
pub fn render_game(doc: &GameDocument) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("document serializes");
    text.push('\n');
    text
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphParseError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Parses the line-oriented graph format: a header `a_count b_count`
/// followed by one `a b` edge per line (0-indexed). Blank lines and `#`
/// comments are skipped.
pub fn parse_graph(text: &str, k: usize) -> Result<BipartiteGraph, GraphParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (number, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let parse = |field: Option<&str>| -> Result<usize, GraphParseError> {
            field
                .ok_or_else(|| GraphParseError::Malformed {
                    line: number + 1,
                    reason: "expected two integers".into(),
                })?
                .parse()
                .map_err(|_| GraphParseError::Malformed {
                    line: number + 1,
                    reason: "expected two integers".into(),
                })
        };
        let a = parse(fields.next())?;
        let b = parse(fields.next())?;
        if fields.next().is_some() {
            return Err(GraphParseError::Malformed {
                line: number + 1,
                reason: "expected exactly two integers".into(),
            });
        }
        if header.is_none() {
            header = Some((a, b));
        } else {
            edges.push((a, b));
        }
    }
    let (a_count, b_count) = header.ok_or(GraphParseError::Malformed {
        line: 0,
        reason: "missing `a_count b_count` header".into(),
    })?;
    Ok(BipartiteGraph::new(a_count, b_count, edges, k)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::tg;
    use crate::rat;

    const TG_JSON: &str = r#"{
        "name": "TG",
        "s1": ["T", "WO"],
        "s2": ["C", "D"],
        "u1": [[20, -100], [0, 0]],
        "u2": [[20, 100], [0, 0]]
    }"#;

    #[test]
    fn parse_trust_game_document() {
        let doc = parse_game(TG_JSON).unwrap();
        assert_eq!(doc.to_game().unwrap(), tg());
    }

    #[test]
    fn rationals_normalize_on_parse() {
        let doc = parse_game(
            r#"{"name":"x","s1":["a"],"s2":["b"],"u1":[["3/6"]],"u2":[["-2/4"]]}"#,
        )
        .unwrap();
        assert_eq!(doc.u1[0][0], rat!(1 / 2));
        assert_eq!(doc.u2[0][0], rat!(-1 / 2));
    }

    #[test]
    fn ragged_matrix_is_rejected_naming_the_row() {
        let err = parse_game(
            r#"{"name":"x","s1":["a","b"],"s2":["l","r"],"u1":[[1,2],[3]],"u2":[[1,2],[3,4]]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("row 1"), "got: {err}");
    }

    #[test]
    fn floats_are_rejected_with_position() {
        let err = parse_game(
            r#"{"name":"x","s1":["a"],"s2":["b"],"u1":[[0.5]],"u2":[[1]]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, DocumentError::Syntax(_)));
        assert!(err.to_string().contains("p/q"), "got: {err}");
    }

    #[test]
    fn round_trip_identity() {
        let doc = parse_game(TG_JSON).unwrap();
        let rendered = render_game(&doc);
        assert_eq!(parse_game(&rendered).unwrap(), doc);
        // Determinism: rendering twice is byte-identical.
        assert_eq!(rendered, render_game(&doc));
    }

    #[test]
    fn class_tags_round_trip() {
        let doc = GameDocument::from_game("PTG", &crate::catalog::ptg(), Some(ClassTag::Gptg));
        let rendered = render_game(&doc);
        let parsed = parse_game(&rendered).unwrap();
        assert_eq!(parsed.class, Some(ClassTag::Gptg));

        let tcg_doc = GameDocument::from_game(
            "DTG",
            &crate::classes::tcg::make_tcg(&crate::catalog::dtg_spec()).unwrap(),
            Some(ClassTag::Tcg(crate::catalog::dtg_spec())),
        );
        let parsed = parse_game(&render_game(&tcg_doc)).unwrap();
        assert_eq!(parsed, tcg_doc);
    }

    #[test]
    fn graph_parsing() {
        let graph = parse_graph("2 2\n0 0\n0 1\n1 0\n1 1\n", 2).unwrap();
        assert!(graph.has_balanced_complete_subgraph());
        let graph = parse_graph("# disjoint edges\n2 2\n0 0\n1 1\n", 2).unwrap();
        assert!(!graph.has_balanced_complete_subgraph());
        assert!(parse_graph("2\n", 2).is_err());
        assert!(parse_graph("2 2\n0 5\n", 2).is_err());
    }
}
