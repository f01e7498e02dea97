//! Monochromatic and all-ones subtree extraction.

use super::{branch_node, child, node_count, position, BinaryTree, SubtreeEmbedding};
use crate::error::{Error, Result};

/// Heap-order map of a tree whose root goes to `root` and whose two
/// subtrees are given by `left` and `right` (both of depth `depth - 1`).
fn join(root: usize, left: &[usize], right: &[usize], depth: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(node_count(depth));
    out.push(root);
    for l in 1..depth {
        let half = 1usize << (l - 1);
        let base = half - 1;
        out.extend_from_slice(&left[base..base + half]);
        out.extend_from_slice(&right[base..base + half]);
    }
    out
}

fn mono(t: &BinaryTree<usize>, node: usize, needs: &mut [usize]) -> (usize, Vec<usize>) {
    let c = *t.get(node);
    if needs[c] == 1 {
        return (c, vec![node]);
    }
    needs[c] -= 1;
    let (lc, lm) = mono(t, child(node, -1), needs);
    if lc != c {
        needs[c] += 1;
        return (lc, lm);
    }
    let (rc, rm) = mono(t, child(node, 1), needs);
    needs[c] += 1;
    if rc != c {
        return (rc, rm);
    }
    (c, join(node, &lm, &rm, needs[c]))
}

/// Finds a color `i` and a subtree of depth `depths[i]` all of whose nodes
/// carry color `i`. Colors are `0..depths.len()`.
pub fn monochromatic_subtree(t: &BinaryTree<usize>, depths: &[usize]) -> Result<(usize, SubtreeEmbedding)> {
    let k = depths.len();
    if k == 0 || depths.contains(&0) {
        return Err(Error::OutOfRange("need at least one color and positive depths".into()));
    }
    if let Some(&c) = t.nodes().iter().find(|&&c| c >= k) {
        return Err(Error::OutOfRange(format!("color {c} with only {k} colors")));
    }
    let need = depths.iter().sum::<usize>() + 1 - k;
    if t.depth() < need {
        return Err(Error::DepthTooSmall { have: t.depth(), need });
    }
    let mut needs = depths.to_vec();
    let (c, map) = mono(t, 0, &mut needs);
    Ok((c, SubtreeEmbedding { source_depth: depths[c], target_depth: t.depth(), map }))
}

fn ones_rec(t: &BinaryTree<bool>, root: usize, want: usize) -> Vec<usize> {
    if want == 0 {
        return vec![];
    }
    // shallowest labelled node below root, leftmost on ties
    let (l0, p0) = position(root);
    let mut u = None;
    'levels: for l in l0..t.depth() {
        let span = 1usize << (l - l0);
        for p in p0 * span..(p0 + 1) * span {
            let i = (1usize << l) - 1 + p;
            if *t.get(i) {
                u = Some(i);
                break 'levels;
            }
        }
    }
    let u = u.expect("branch counts guarantee a labelled node");
    let left = ones_rec(t, child(u, -1), want - 1);
    let right = ones_rec(t, child(u, 1), want - 1);
    join(u, &left, &right, want)
}

/// Embeds a depth-`want` tree into the nodes labelled `true`, provided
/// every branch carries at least `want` of them.
pub fn ones_subtree(t: &BinaryTree<bool>, want: usize) -> Result<SubtreeEmbedding> {
    let d = t.depth();
    for b in 0..1usize << d {
        let ones = (0..d).filter(|&l| *t.get(branch_node(d, b, l))).count();
        if ones < want {
            return Err(Error::BranchDeficient { branch: b, ones, need: want });
        }
    }
    Ok(SubtreeEmbedding { source_depth: want, target_depth: d, map: ones_rec(t, 0, want) })
}
