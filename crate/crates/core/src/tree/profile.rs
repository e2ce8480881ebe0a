use super::BinaryTree;
use crate::error::{Error, Result};
use crate::rmq::SparseTable;

/// Depths `h` and left-depths `h_L` of the nodes of a tree, listed in inorder,
/// with range-minimum queries over both.
///
/// Indices are 0-based here: position `i` is the `(i+1)`-th node in inorder.
#[derive(Clone, Debug)]
pub struct HeightProfile {
    h: Vec<u32>,
    h_left: Vec<u32>,
    h_min: SparseTable<u32>,
    h_left_min: SparseTable<u32>,
}

impl HeightProfile {
    pub fn new(tree: &BinaryTree) -> Result<Self> {
        if tree.is_empty() {
            return Err(Error::EmptyTree);
        }
        let (depth, left_depth) = tree.depths();
        let pos = tree.inorder_positions();
        let mut h = vec![0u32; tree.len()];
        let mut h_left = vec![0u32; tree.len()];
        for v in 0..tree.len() {
            h[pos[v]] = depth[v];
            h_left[pos[v]] = left_depth[v];
        }
        let h_min = SparseTable::new(&h);
        let h_left_min = SparseTable::new(&h_left);
        Ok(Self {
            h,
            h_left,
            h_min,
            h_left_min,
        })
    }

    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }

    pub fn h(&self) -> &[u32] {
        &self.h
    }

    pub fn h_left(&self) -> &[u32] {
        &self.h_left
    }

    /// `min h(l)` over inorder positions `l` in `[i, j]`.
    pub fn h_range_min(&self, i: usize, j: usize) -> u32 {
        self.h_min.min(i, j)
    }

    /// `min h_L(l)` over `[i, j]`; equals `h_L` of the last common ancestor
    /// of the nodes at positions `i` and `j`.
    pub fn h_left_range_min(&self, i: usize, j: usize) -> u32 {
        self.h_left_min.min(i, j)
    }

    /// `n^{-1/2} h_L(floor(n x) + 1)` sampled at the inorder positions.
    pub fn normalized_left(&self) -> Vec<f64> {
        let s = (self.len() as f64).sqrt();
        self.h_left.iter().map(|&v| v as f64 / s).collect()
    }

    /// Sum of the left-depths, which equals the number of 12-occurrences.
    pub fn left_height_sum(&self) -> u64 {
        self.h_left.iter().map(|&v| v as u64).sum()
    }
}
