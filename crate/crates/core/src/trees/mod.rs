//! Binary trees indexed by `{-1,1}^{<d}`, subtree embeddings, the tree
//! Ramsey extraction, the threshold/tree converters and witness verifiers.
//!
//! Nodes are stored in heap level order: the node at level `t` reached by
//! directions with bit pattern `p` (read left to right, `0` for `-1`) has index
//! `2^t - 1 + p`. The children of node `i` are `2i+1` (direction `-1`) and
//! `2i+2` (direction `+1`). A branch of a depth-`d` tree is a number
//! `b < 2^d` whose bits, most significant first, are its directions.

mod convert;
mod ramsey;
mod verify;

pub use convert::{
    gamma_threshold_from_spread, gamma_threshold_from_tree, ramsey_depth, rs_from_gamma, tree_from_rs_threshold,
    SpreadWitness,
};
pub use ramsey::{monochromatic_subtree, ones_subtree};
pub use verify::{
    verify_graph_witness, verify_online_value, verify_online_witness, verify_seq_shatter, verify_set_shatter,
    verify_spread_shatter, verify_threshold,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TreeFile<T>", into = "TreeFile<T>")]
#[serde(bound(serialize = "T: Serialize + Clone", deserialize = "T: Deserialize<'de>"))]
pub struct BinaryTree<T> {
    depth: usize,
    nodes: Vec<T>,
}

#[derive(Serialize, Deserialize)]
pub struct TreeFile<T> {
    depth: usize,
    nodes: Vec<T>,
}

impl<T> TryFrom<TreeFile<T>> for BinaryTree<T> {
    type Error = Error;
    fn try_from(f: TreeFile<T>) -> Result<Self> {
        BinaryTree::new(f.depth, f.nodes)
    }
}

impl<T> From<BinaryTree<T>> for TreeFile<T> {
    fn from(t: BinaryTree<T>) -> Self {
        TreeFile { depth: t.depth, nodes: t.nodes }
    }
}

/// Number of nodes of a depth-`d` tree.
pub fn node_count(depth: usize) -> usize {
    (1usize << depth) - 1
}

/// Level of heap index `i`.
pub fn level(i: usize) -> usize {
    (usize::BITS - 1 - (i + 1).leading_zeros()) as usize
}

pub fn child(i: usize, dir: i8) -> usize {
    if dir < 0 {
        2 * i + 1
    } else {
        2 * i + 2
    }
}

/// Direction bits of node `i` relative to the root: `(level, pattern)`.
pub fn position(i: usize) -> (usize, usize) {
    let l = level(i);
    (l, i + 1 - (1 << l))
}

/// Direction taken at level `t` by branch `b` of a depth-`d` tree.
pub fn branch_dir(d: usize, b: usize, t: usize) -> i8 {
    if b >> (d - 1 - t) & 1 == 1 {
        1
    } else {
        -1
    }
}

/// Node visited at level `t` by branch `b` of a depth-`d` tree.
pub fn branch_node(d: usize, b: usize, t: usize) -> usize {
    (1 << t) - 1 + (b >> (d - t))
}

/// Whether `desc` lies in the subtree rooted at `anc` (inclusive).
pub fn is_descendant(desc: usize, anc: usize) -> bool {
    let (la, pa) = position(anc);
    let (ld, pd) = position(desc);
    ld >= la && pd >> (ld - la) == pa
}

/// Last common node of two distinct branches, and the direction of `b0` there.
pub fn split_node(d: usize, b0: usize, b1: usize) -> (usize, i8) {
    debug_assert!(b0 != b1);
    let diff = b0 ^ b1;
    let t = d - 1 - (usize::BITS - 1 - diff.leading_zeros()) as usize;
    (branch_node(d, b0, t), branch_dir(d, b0, t))
}

impl<T> BinaryTree<T> {
    pub fn new(depth: usize, nodes: Vec<T>) -> Result<Self> {
        if depth >= usize::BITS as usize - 1 || nodes.len() != node_count(depth) {
            return Err(Error::ShapeMismatch(format!(
                "depth {depth} tree needs {} nodes, got {}",
                if depth < 63 { node_count(depth) } else { usize::MAX },
                nodes.len()
            )));
        }
        Ok(BinaryTree { depth, nodes })
    }

    pub fn from_fn(depth: usize, f: impl FnMut(usize) -> T) -> Self {
        BinaryTree { depth, nodes: (0..node_count(depth)).map(f).collect() }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn get(&self, i: usize) -> &T {
        &self.nodes[i]
    }

    pub fn set(&mut self, i: usize, v: T) {
        self.nodes[i] = v;
    }

    /// Value at the node addressed by a direction string.
    pub fn at(&self, addr: &[i8]) -> &T {
        let i = addr.iter().fold(0, |i, &d| child(i, d));
        &self.nodes[i]
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> BinaryTree<U> {
        BinaryTree { depth: self.depth, nodes: self.nodes.iter().map(f).collect() }
    }

    pub fn n_branches(&self) -> usize {
        1 << self.depth
    }
}

impl<T: Clone> BinaryTree<T> {
    pub fn filled(depth: usize, v: T) -> Self {
        BinaryTree { depth, nodes: vec![v; node_count(depth)] }
    }
}

/// Embedding of a depth-`d'` tree into a depth-`d` tree. `map[u]` is the
/// target heap index of source heap index `u`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubtreeEmbedding {
    pub source_depth: usize,
    pub target_depth: usize,
    pub map: Vec<usize>,
}

impl SubtreeEmbedding {
    pub fn identity(depth: usize, target_depth: usize) -> Self {
        SubtreeEmbedding { source_depth: depth, target_depth, map: (0..node_count(depth)).collect() }
    }

    /// Checks that every child lands in the matching side of its parent's image.
    pub fn is_valid(&self) -> bool {
        if self.map.len() != node_count(self.source_depth) {
            return false;
        }
        let n = node_count(self.target_depth);
        if self.map.iter().any(|&t| t >= n) {
            return false;
        }
        (0..self.map.len()).all(|u| {
            [-1i8, 1].iter().all(|&dir| {
                let c = child(u, dir);
                c >= self.map.len() || is_descendant(self.map[c], child(self.map[u], dir))
            })
        })
    }

    /// A target branch extending the image of source branch `b`.
    pub fn branch_image(&self, b: usize) -> usize {
        let d = self.source_depth;
        let dt = self.target_depth;
        if d == 0 {
            return 0;
        }
        let last = self.map[branch_node(d, b, d - 1)];
        let dir = branch_dir(d, b, d - 1);
        // continue leftmost below the chosen child of the last image node
        let c = child(last, dir);
        let (l, p) = position(c);
        if l >= dt {
            let (l, p) = position(last);
            let bit = if dir > 0 { 1 } else { 0 };
            return ((p << 1) | bit) << (dt - l - 1);
        }
        p << (dt - l)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heap_indexing() {
        assert_eq!(level(0), 0);
        assert_eq!(level(2), 1);
        assert_eq!(level(6), 2);
        assert_eq!(position(5), (2, 2));
        assert_eq!(branch_node(3, 0b101, 0), 0);
        assert_eq!(branch_node(3, 0b101, 1), 2);
        assert_eq!(branch_node(3, 0b101, 2), 5);
        assert_eq!(branch_dir(3, 0b101, 1), -1);
        assert!(is_descendant(5, 2));
        assert!(!is_descendant(5, 1));
        assert_eq!(split_node(3, 0b100, 0b111), (2, -1));
        assert_eq!(split_node(3, 0b011, 0b100), (0, -1));
    }

    #[test]
    fn addressing() {
        let t = BinaryTree::from_fn(3, |i| i);
        assert_eq!(*t.at(&[]), 0);
        assert_eq!(*t.at(&[1, -1]), 5);
        assert!(BinaryTree::new(2, vec![0, 1]).is_err());
    }

    #[test]
    fn embeddings() {
        assert!(SubtreeEmbedding::identity(2, 3).is_valid());
        // root -> 0, left child -> 3 (left-left), right child -> 2
        let e = SubtreeEmbedding { source_depth: 2, target_depth: 3, map: vec![0, 3, 2] };
        assert!(e.is_valid());
        let bad = SubtreeEmbedding { source_depth: 2, target_depth: 3, map: vec![0, 2, 1] };
        assert!(!bad.is_valid());
        // source branch 0b01 (left then right) maps below node 3 going right
        assert_eq!(e.branch_image(0b01), 0b001);
        assert_eq!(e.branch_image(0b11), 0b110);
    }

    #[test]
    fn serde_checks_shape() {
        let t = BinaryTree::from_fn(2, |i| i as u32);
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(serde_json::from_str::<BinaryTree<u32>>(&s).unwrap(), t);
        assert!(serde_json::from_str::<BinaryTree<u32>>(r#"{"depth":2,"nodes":[1]}"#).is_err());
    }
}
