//! Hierarchical trustworthiness ontologies.
//!
//! An ontology is a rooted tree of characteristics. Branch nodes aggregate
//! their children; leaf nodes bind to a column of a [`ScoreMatrix`].
//!
//! Two JSON layouts are accepted:
//!
//! ```text
//! nested: {"name": "trust", "children": [{"name": "privacy", "criterion": "Privacy"}, ...]}
//! flat:   {"root": "trust", "nodes": {"trust": {"children": ["privacy"]},
//!                                     "privacy": {"criterion": "Privacy"}}}
//! ```
//!
//! Any node may carry a `"strategy"` override.

use std::collections::{BTreeMap, HashSet};

use serde::Deserialize;

use crate::aggregate::StrategySpec;
use crate::error::{Error, Result};
use crate::matrix::ScoreMatrix;

pub const DEFAULT_ROOT: &str = "trustworthiness";

#[derive(Clone, Debug, PartialEq)]
pub enum NodeKind {
    Branch(Vec<OntologyNode>),
    Leaf { criterion: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct OntologyNode {
    pub name: String,
    pub kind: NodeKind,
    pub strategy_override: Option<StrategySpec>,
}

impl OntologyNode {
    pub fn leaf(name: impl Into<String>, criterion: impl Into<String>) -> Self {
        OntologyNode {
            name: name.into(),
            kind: NodeKind::Leaf {
                criterion: criterion.into(),
            },
            strategy_override: None,
        }
    }

    pub fn branch(name: impl Into<String>, children: Vec<OntologyNode>) -> Self {
        OntologyNode {
            name: name.into(),
            kind: NodeKind::Branch(children),
            strategy_override: None,
        }
    }

    pub fn with_strategy(mut self, strategy: StrategySpec) -> Self {
        self.strategy_override = Some(strategy);
        self
    }

    /// Single-level tree: one leaf per matrix column under a root branch.
    pub fn flat(matrix: &ScoreMatrix) -> Self {
        Self::branch(
            DEFAULT_ROOT,
            matrix
                .criterion_ids()
                .iter()
                .map(|c| Self::leaf(c.clone(), c.clone()))
                .collect(),
        )
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self.kind, NodeKind::Leaf { .. })
    }

    pub fn children(&self) -> &[OntologyNode] {
        match &self.kind {
            NodeKind::Branch(children) => children,
            NodeKind::Leaf { .. } => &[],
        }
    }

    /// Number of branch levels on the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        match &self.kind {
            NodeKind::Leaf { .. } => 0,
            NodeKind::Branch(children) => 1 + children.iter().map(Self::depth).max().unwrap_or(0),
        }
    }

    /// Criterion ids bound by the leaves, in depth-first order.
    pub fn criteria(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_criteria(&mut out);
        out
    }

    fn collect_criteria<'a>(&'a self, out: &mut Vec<&'a str>) {
        match &self.kind {
            NodeKind::Leaf { criterion } => out.push(criterion),
            NodeKind::Branch(children) => children.iter().for_each(|c| c.collect_criteria(out)),
        }
    }

    /// Checks the structural invariants and that every leaf binds a column
    /// of `matrix`.
    pub fn validate(&self, matrix: &ScoreMatrix) -> Result<()> {
        match &self.kind {
            NodeKind::Leaf { criterion } => {
                if matrix.criterion_index(criterion).is_none() {
                    return Err(Error::DanglingCriterion(criterion.clone()));
                }
            }
            NodeKind::Branch(children) => {
                if children.is_empty() {
                    return Err(Error::EmptyBranch(self.name.clone()));
                }
                let mut names = HashSet::new();
                for child in children {
                    if !names.insert(child.name.as_str()) {
                        return Err(Error::DuplicateSibling(child.name.clone()));
                    }
                    child.validate(matrix)?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NestedNode {
    name: String,
    #[serde(default)]
    children: Option<Vec<NestedNode>>,
    #[serde(default)]
    criterion: Option<String>,
    #[serde(default)]
    strategy: Option<StrategySpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FlatDocument {
    root: String,
    nodes: BTreeMap<String, FlatNode>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FlatNode {
    #[serde(default)]
    children: Option<Vec<String>>,
    #[serde(default)]
    criterion: Option<String>,
    #[serde(default)]
    strategy: Option<StrategySpec>,
}

fn malformed(path: &str, message: impl Into<String>) -> Error {
    Error::MalformedDocument {
        path: path.to_string(),
        message: message.into(),
    }
}

fn json_error(e: serde_json::Error) -> Error {
    malformed(
        &format!("ontology (line {}, column {})", e.line(), e.column()),
        e.to_string(),
    )
}

fn node_kind(
    path: &str,
    children: Option<Vec<OntologyNode>>,
    criterion: Option<String>,
) -> Result<NodeKind> {
    match (children, criterion) {
        (Some(children), None) => Ok(NodeKind::Branch(children)),
        (None, Some(criterion)) => Ok(NodeKind::Leaf { criterion }),
        (Some(_), Some(_)) => Err(malformed(path, "node has both children and criterion")),
        (None, None) => Err(malformed(path, "node needs children or criterion")),
    }
}

fn from_nested(raw: NestedNode, path: &str) -> Result<OntologyNode> {
    let path = format!("{path}/{}", raw.name);
    let children = raw
        .children
        .map(|cs| {
            cs.into_iter()
                .map(|c| from_nested(c, &path))
                .collect::<Result<Vec<_>>>()
        })
        .transpose()?;
    Ok(OntologyNode {
        kind: node_kind(&path, children, raw.criterion)?,
        name: raw.name,
        strategy_override: raw.strategy,
    })
}

fn from_flat(doc: &mut FlatDocument) -> Result<OntologyNode> {
    fn build(
        name: &str,
        nodes: &mut BTreeMap<String, FlatNode>,
        on_path: &mut Vec<String>,
        used: &mut HashSet<String>,
    ) -> Result<OntologyNode> {
        if on_path.iter().any(|n| n == name) {
            return Err(Error::Cycle(name.to_string()));
        }
        if !used.insert(name.to_string()) {
            return Err(malformed(
                &format!("nodes.{name}"),
                "node referenced by more than one parent",
            ));
        }
        let node = nodes
            .remove(name)
            .ok_or_else(|| Error::DanglingNode(name.to_string()))?;
        on_path.push(name.to_string());
        let children = match node.children {
            Some(names) => {
                let mut built = Vec::with_capacity(names.len());
                for child in &names {
                    if on_path.iter().any(|n| n == child) {
                        return Err(Error::Cycle(child.clone()));
                    }
                    built.push(build(child, nodes, on_path, used)?);
                }
                Some(built)
            }
            None => None,
        };
        on_path.pop();
        Ok(OntologyNode {
            kind: node_kind(&format!("nodes.{name}"), children, node.criterion)?,
            name: name.to_string(),
            strategy_override: node.strategy,
        })
    }

    let root = doc.root.clone();
    build(&root, &mut doc.nodes, &mut Vec::new(), &mut HashSet::new())
}

/// Parses an ontology document and validates it against `matrix`.
pub fn load_ontology(document: &str, matrix: &ScoreMatrix) -> Result<OntologyNode> {
    let value: serde_json::Value = serde_json::from_str(document).map_err(json_error)?;
    let root = if value.get("root").is_some() {
        let mut doc: FlatDocument = serde_json::from_value(value).map_err(json_error)?;
        from_flat(&mut doc)?
    } else {
        let raw: NestedNode = serde_json::from_value(value).map_err(json_error)?;
        from_nested(raw, "")?
    };
    if root.is_leaf() {
        return Err(malformed(&root.name, "root must be a branch"));
    }
    root.validate(matrix)?;
    Ok(root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::load_matrix;

    fn matrix() -> ScoreMatrix {
        load_matrix("model,a,b,c\nx,1,2,3\ny,3,2,1\n", None).unwrap()
    }

    #[test]
    fn nested_document_loads() {
        let doc = r#"{"name": "t", "children": [
            {"name": "ab", "children": [{"name": "a", "criterion": "a"}, {"name": "b", "criterion": "b"}]},
            {"name": "c", "criterion": "c"}]}"#;
        let root = load_ontology(doc, &matrix()).unwrap();
        assert_eq!(root.depth(), 2);
        assert_eq!(root.criteria(), vec!["a", "b", "c"]);
    }

    #[test]
    fn flat_document_loads() {
        let doc = r#"{"root": "t", "nodes": {
            "t": {"children": ["ab", "c"]},
            "ab": {"children": ["a", "b"]},
            "a": {"criterion": "a"}, "b": {"criterion": "b"}, "c": {"criterion": "c"}}}"#;
        let root = load_ontology(doc, &matrix()).unwrap();
        assert_eq!(root.depth(), 2);
    }

    #[test]
    fn dangling_criterion() {
        let doc = r#"{"name": "t", "children": [{"name": "s", "criterion": "speed"}]}"#;
        assert_eq!(
            load_ontology(doc, &matrix()),
            Err(Error::DanglingCriterion("speed".into()))
        );
    }

    #[test]
    fn cycle_is_detected() {
        let doc = r#"{"root": "t", "nodes": {
            "t": {"children": ["u"]}, "u": {"children": ["t"]}}}"#;
        assert_eq!(load_ontology(doc, &matrix()), Err(Error::Cycle("t".into())));
        let self_loop = r#"{"root": "t", "nodes": {"t": {"children": ["t"]}}}"#;
        assert_eq!(load_ontology(self_loop, &matrix()), Err(Error::Cycle("t".into())));
    }

    #[test]
    fn empty_branch_is_rejected() {
        let doc = r#"{"name": "t", "children": []}"#;
        assert_eq!(load_ontology(doc, &matrix()), Err(Error::EmptyBranch("t".into())));
    }

    #[test]
    fn duplicate_siblings_are_rejected() {
        let doc = r#"{"name": "t", "children": [{"name": "a", "criterion": "a"}, {"name": "a", "criterion": "b"}]}"#;
        assert_eq!(load_ontology(doc, &matrix()), Err(Error::DuplicateSibling("a".into())));
    }

    #[test]
    fn flat_tree_has_one_leaf_per_column() {
        let root = OntologyNode::flat(&matrix());
        assert_eq!(root.depth(), 1);
        assert_eq!(root.children().len(), 3);
        root.validate(&matrix()).unwrap();
    }
}
