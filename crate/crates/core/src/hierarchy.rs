//! Rooted ordered trees and their ingestion formats.
//!
//! Nodes live in a flat arena indexed by [`NodeId`]. Ids are assigned in
//! pre-order, so the root is always `NodeId(0)` and iterating ids in order
//! walks the tree depth-first with children in document order.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::HierarchyError;

pub const MAX_NODES: usize = 100_000;
pub const MAX_DEPTH: usize = 64;

/// Path separator used by the CSV format and by [`TreeNode::path`].
pub const SEPARATOR: char = '/';

// Objects and arrays alternate, so a depth-64 tree nests 129 levels; the
// slack covers extra structured fields callers attach to nodes.
const MAX_JSON_NESTING: usize = 2 * MAX_DEPTH + 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub usize);

impl NodeId {
    pub const ROOT: NodeId = NodeId(0);

    pub fn index(self) -> usize {
        self.0
    }
}

/// Nested `{"name": .., "children": [..]}` description of a tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<NodeSpec>,
}

impl NodeSpec {
    pub fn new(name: impl Into<String>, children: Vec<NodeSpec>) -> Self {
        Self {
            name: name.into(),
            children,
        }
    }

    pub fn leaf(name: impl Into<String>) -> Self {
        Self::new(name, Vec::new())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeNode {
    pub id: NodeId,
    pub name: String,
    /// Slash-joined names from the root, root included.
    pub path: String,
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
    pub depth: usize,
    pub height: usize,
    pub leaf_count: usize,
    /// Number of nodes in the sub-tree, the node itself included.
    pub node_count: usize,
}

impl TreeNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

/// How the distance between two nodes is read off their common ancestor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceVariant {
    /// Larger of the two depths below the common ancestor.
    #[default]
    Max,
    /// Path length through the common ancestor.
    Sum,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hierarchy {
    nodes: Vec<TreeNode>,
    path_index: BTreeMap<String, NodeId>,
    max_depth: usize,
}

impl Hierarchy {
    pub fn from_spec(spec: &NodeSpec) -> Result<Self, HierarchyError> {
        let mut nodes = Vec::new();
        let mut path_index = BTreeMap::new();
        push_node(spec, None, 0, String::new(), &mut nodes, &mut path_index)?;
        let max_depth = nodes.iter().map(|n| n.depth).max().unwrap_or(0);
        Ok(Self {
            nodes,
            path_index,
            max_depth,
        })
    }

    pub fn root(&self) -> &TreeNode {
        &self.nodes[0]
    }

    pub fn node(&self, id: NodeId) -> &TreeNode {
        &self.nodes[id.0]
    }

    pub fn get(&self, id: NodeId) -> Option<&TreeNode> {
        self.nodes.get(id.0)
    }

    /// All nodes in pre-order.
    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn max_depth(&self) -> usize {
        self.max_depth
    }

    pub fn lookup(&self, path: &str) -> Option<NodeId> {
        self.path_index.get(path).copied()
    }

    pub fn leaves(&self) -> impl Iterator<Item = &TreeNode> {
        self.nodes.iter().filter(|n| n.is_leaf())
    }

    pub fn children(&self, id: NodeId) -> impl Iterator<Item = &TreeNode> {
        self.nodes[id.0].children.iter().map(|c| &self.nodes[c.0])
    }

    /// The depth-1 ancestor of `id` (the node itself at depth 1), `None` for the root.
    pub fn top_level_ancestor(&self, id: NodeId) -> Option<NodeId> {
        let mut cur = self.get(id)?;
        if cur.depth == 0 {
            return None;
        }
        while cur.depth > 1 {
            cur = &self.nodes[cur.parent?.0];
        }
        Some(cur.id)
    }

    pub fn lowest_common_ancestor(&self, u: NodeId, v: NodeId) -> Result<NodeId, HierarchyError> {
        let mut a = self.get(u).ok_or(HierarchyError::ForeignNode(u.0))?;
        let mut b = self.get(v).ok_or(HierarchyError::ForeignNode(v.0))?;
        while a.depth > b.depth {
            a = &self.nodes[a.parent.expect("non-root has parent").0];
        }
        while b.depth > a.depth {
            b = &self.nodes[b.parent.expect("non-root has parent").0];
        }
        while a.id != b.id {
            a = &self.nodes[a.parent.expect("non-root has parent").0];
            b = &self.nodes[b.parent.expect("non-root has parent").0];
        }
        Ok(a.id)
    }

    /// Depth below the closest common ancestor (larger of the two sides).
    pub fn tree_distance(&self, u: NodeId, v: NodeId) -> Result<usize, HierarchyError> {
        self.tree_distance_with(u, v, DistanceVariant::Max)
    }

    pub fn tree_distance_with(
        &self,
        u: NodeId,
        v: NodeId,
        variant: DistanceVariant,
    ) -> Result<usize, HierarchyError> {
        let lca = self.node(self.lowest_common_ancestor(u, v)?).depth;
        let du = self.nodes[u.0].depth - lca;
        let dv = self.nodes[v.0].depth - lca;
        Ok(match variant {
            DistanceVariant::Max => du.max(dv),
            DistanceVariant::Sum => du + dv,
        })
    }

    pub fn to_spec(&self) -> NodeSpec {
        fn build(h: &Hierarchy, id: NodeId) -> NodeSpec {
            let node = h.node(id);
            NodeSpec::new(
                node.name.clone(),
                node.children.iter().map(|&c| build(h, c)).collect(),
            )
        }
        build(self, NodeId::ROOT)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_spec()).expect("tree serializes")
    }
}

fn push_node(
    spec: &NodeSpec,
    parent: Option<NodeId>,
    depth: usize,
    parent_path: String,
    nodes: &mut Vec<TreeNode>,
    path_index: &mut BTreeMap<String, NodeId>,
) -> Result<NodeId, HierarchyError> {
    if depth > MAX_DEPTH {
        return Err(HierarchyError::TooDeep { limit: MAX_DEPTH });
    }
    if nodes.len() >= MAX_NODES {
        return Err(HierarchyError::TooLarge { limit: MAX_NODES });
    }
    validate_name(&spec.name)?;
    let path = if parent.is_none() {
        spec.name.clone()
    } else {
        format!("{parent_path}{SEPARATOR}{}", spec.name)
    };
    let id = NodeId(nodes.len());
    if path_index.insert(path.clone(), id).is_some() {
        return Err(HierarchyError::DuplicateSibling(path));
    }
    nodes.push(TreeNode {
        id,
        name: spec.name.clone(),
        path: path.clone(),
        parent,
        children: Vec::with_capacity(spec.children.len()),
        depth,
        height: 0,
        leaf_count: 1,
        node_count: 1,
    });
    let mut height = 0;
    let mut leaves = 0;
    let mut count = 1;
    for child in &spec.children {
        let cid = push_node(child, Some(id), depth + 1, path.clone(), nodes, path_index)?;
        let c = &nodes[cid.0];
        height = height.max(c.height + 1);
        leaves += c.leaf_count;
        count += c.node_count;
        nodes[id.0].children.push(cid);
    }
    let node = &mut nodes[id.0];
    if !spec.children.is_empty() {
        node.height = height;
        node.leaf_count = leaves;
    }
    node.node_count = count;
    Ok(id)
}

fn validate_name(name: &str) -> Result<(), HierarchyError> {
    if name.is_empty() {
        return Err(HierarchyError::Malformed("empty node name".into()));
    }
    if name.contains(SEPARATOR) {
        return Err(HierarchyError::Malformed(format!(
            "node name {name:?} contains '{SEPARATOR}'"
        )));
    }
    Ok(())
}

/// Rejects JSON documents nested deeper than `limit` before handing them to
/// the recursive deserializer.
pub(crate) fn check_json_nesting(text: &str, limit: usize) -> Result<(), HierarchyError> {
    let mut depth = 0usize;
    let mut in_string = false;
    let mut escaped = false;
    for byte in text.bytes() {
        if in_string {
            match byte {
                _ if escaped => escaped = false,
                b'\\' => escaped = true,
                b'"' => in_string = false,
                _ => {}
            }
            continue;
        }
        match byte {
            b'"' => in_string = true,
            b'{' | b'[' => {
                depth += 1;
                if depth > limit {
                    return Err(HierarchyError::TooDeep { limit: MAX_DEPTH });
                }
            }
            b'}' | b']' => depth = depth.saturating_sub(1),
            _ => {}
        }
    }
    Ok(())
}

/// Deserializes a JSON document whose nesting may exceed serde_json's
/// default recursion limit, after bounding it with [`check_json_nesting`].
pub fn from_json_guarded<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, HierarchyError> {
    check_json_nesting(text, MAX_JSON_NESTING)?;
    let mut de = serde_json::Deserializer::from_str(text);
    de.disable_recursion_limit();
    let value = T::deserialize(&mut de).map_err(|e| HierarchyError::Malformed(e.to_string()))?;
    de.end().map_err(|e| HierarchyError::Malformed(e.to_string()))?;
    Ok(value)
}

pub fn parse_nested_json(text: &str) -> Result<Hierarchy, HierarchyError> {
    let spec: NodeSpec = from_json_guarded(text)?;
    Hierarchy::from_spec(&spec)
}

struct CsvNode {
    name: String,
    children: Vec<usize>,
    by_name: HashMap<String, usize>,
}

/// One slash-separated path per line. Blank lines are skipped.
pub fn parse_path_csv(text: &str) -> Result<Hierarchy, HierarchyError> {
    let mut arena: Vec<CsvNode> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() {
            continue;
        }
        let segments: Vec<&str> = line.split(SEPARATOR).collect();
        if segments.iter().any(|s| s.is_empty()) {
            return Err(HierarchyError::EmptySegment(line_no));
        }
        if segments.len() > MAX_DEPTH + 1 {
            return Err(HierarchyError::TooDeep { limit: MAX_DEPTH });
        }
        match arena.first() {
            None => arena.push(CsvNode {
                name: segments[0].to_string(),
                children: Vec::new(),
                by_name: HashMap::new(),
            }),
            Some(root) if root.name != segments[0] => {
                return Err(HierarchyError::InconsistentRoot {
                    line: line_no,
                    expected: root.name.clone(),
                    found: segments[0].to_string(),
                })
            }
            Some(_) => {}
        }
        let mut cur = 0;
        for seg in &segments[1..] {
            cur = match arena[cur].by_name.get(*seg) {
                Some(&next) => next,
                None => {
                    if arena.len() >= MAX_NODES {
                        return Err(HierarchyError::TooLarge { limit: MAX_NODES });
                    }
                    let next = arena.len();
                    arena.push(CsvNode {
                        name: seg.to_string(),
                        children: Vec::new(),
                        by_name: HashMap::new(),
                    });
                    arena[cur].children.push(next);
                    arena[cur].by_name.insert(seg.to_string(), next);
                    next
                }
            };
        }
    }
    if arena.is_empty() {
        return Err(HierarchyError::Empty);
    }
    fn build(arena: &[CsvNode], idx: usize) -> NodeSpec {
        let n = &arena[idx];
        NodeSpec::new(n.name.clone(), n.children.iter().map(|&c| build(arena, c)).collect())
    }
    Hierarchy::from_spec(&build(&arena, 0))
}
