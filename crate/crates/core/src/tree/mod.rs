//! Binary trees and the bijection with 132-avoiding permutations.
//!
//! The root of `T(π)` corresponds to the maximum of `π`; its left and right
//! subtrees are the trees of the parts of `π` before and after the maximum.
//! Reading the labels in inorder recovers `π`.

mod counting;
mod profile;

pub use counting::{count_occurrences_tree, subpattern_closure, OccurrenceCounter};
pub use profile::HeightProfile;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::perm::Permutation;

const NONE: u32 = u32::MAX;

/// A rooted binary tree stored as child-index arrays.
///
/// Nodes are always numbered in preorder (root = 0), so two trees are equal
/// exactly when they have the same shape, and every child has a larger
/// index than its parent.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BinaryTree {
    left: Vec<u32>,
    right: Vec<u32>,
}

impl BinaryTree {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn single() -> Self {
        Self {
            left: vec![NONE],
            right: vec![NONE],
        }
    }

    /// Tree with the given left and right subtrees under a new root.
    pub fn join(left: &BinaryTree, right: &BinaryTree) -> Self {
        let n = 1 + left.len() + right.len();
        let mut l = Vec::with_capacity(n);
        let mut r = Vec::with_capacity(n);
        let shift = |v: u32, by: usize| if v == NONE { NONE } else { v + by as u32 };
        l.push(if left.is_empty() { NONE } else { 1 });
        r.push(if right.is_empty() {
            NONE
        } else {
            1 + left.len() as u32
        });
        for i in 0..left.len() {
            l.push(shift(left.left[i], 1));
            r.push(shift(left.right[i], 1));
        }
        let off = 1 + left.len();
        for i in 0..right.len() {
            l.push(shift(right.left[i], off));
            r.push(shift(right.right[i], off));
        }
        Self { left: l, right: r }
    }

    /// Builds a tree from arbitrary child links and renumbers it in preorder.
    pub fn from_links(
        root: Option<usize>,
        left: &[Option<usize>],
        right: &[Option<usize>],
    ) -> Self {
        let Some(root) = root else {
            return Self::empty();
        };
        let mut new_left = Vec::with_capacity(left.len());
        let mut new_right = Vec::with_capacity(left.len());
        // (old id, slot in the parent to patch)
        let mut stack: Vec<(usize, Option<(usize, bool)>)> = vec![(root, None)];
        while let Some((old, slot)) = stack.pop() {
            let id = new_left.len();
            new_left.push(NONE);
            new_right.push(NONE);
            if let Some((parent, is_left)) = slot {
                if is_left {
                    new_left[parent] = id as u32;
                } else {
                    new_right[parent] = id as u32;
                }
            }
            if let Some(r) = right[old] {
                stack.push((r, Some((id, false))));
            }
            if let Some(l) = left[old] {
                stack.push((l, Some((id, true))));
            }
        }
        Self {
            left: new_left,
            right: new_right,
        }
    }

    /// A path of `n` nodes in which every node is the left child of its parent.
    pub fn left_chain(n: usize) -> Self {
        let left = (0..n)
            .map(|i| if i + 1 < n { i as u32 + 1 } else { NONE })
            .collect();
        Self {
            left,
            right: vec![NONE; n],
        }
    }

    /// A path of `n` nodes in which every node is the right child of its parent.
    pub fn right_chain(n: usize) -> Self {
        let right = (0..n)
            .map(|i| if i + 1 < n { i as u32 + 1 } else { NONE })
            .collect();
        Self {
            left: vec![NONE; n],
            right,
        }
    }

    pub fn len(&self) -> usize {
        self.left.len()
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty()
    }

    pub fn root(&self) -> Option<usize> {
        (!self.is_empty()).then_some(0)
    }

    pub fn left(&self, node: usize) -> Option<usize> {
        let c = self.left[node];
        (c != NONE).then_some(c as usize)
    }

    pub fn right(&self, node: usize) -> Option<usize> {
        let c = self.right[node];
        (c != NONE).then_some(c as usize)
    }

    /// Subtree sizes, indexed by node.
    pub fn subtree_sizes(&self) -> Vec<usize> {
        let n = self.len();
        let mut size = vec![1usize; n];
        for i in (0..n).rev() {
            if let Some(l) = self.left(i) {
                size[i] += size[l];
            }
            if let Some(r) = self.right(i) {
                size[i] += size[r];
            }
        }
        size
    }

    /// Root's left and right subtrees as standalone trees.
    pub fn split(&self) -> Option<(BinaryTree, BinaryTree)> {
        self.root()?;
        let sizes = self.subtree_sizes();
        let extract = |start: Option<usize>| -> BinaryTree {
            let Some(s) = start else {
                return BinaryTree::empty();
            };
            let end = s + sizes[s];
            let sh = |v: u32| if v == NONE { NONE } else { v - s as u32 };
            BinaryTree {
                left: self.left[s..end].iter().map(|&v| sh(v)).collect(),
                right: self.right[s..end].iter().map(|&v| sh(v)).collect(),
            }
        };
        Some((extract(self.left(0)), extract(self.right(0))))
    }

    /// Inorder position (0-based) of every node.
    pub fn inorder_positions(&self) -> Vec<usize> {
        let sizes = self.subtree_sizes();
        let mut start = vec![0usize; self.len()];
        let mut pos = vec![0usize; self.len()];
        for i in 0..self.len() {
            let ls = self.left(i).map_or(0, |l| sizes[l]);
            pos[i] = start[i] + ls;
            if let Some(l) = self.left(i) {
                start[l] = start[i];
            }
            if let Some(r) = self.right(i) {
                start[r] = start[i] + ls + 1;
            }
        }
        pos
    }

    /// Nested-parentheses form: `.` is the empty tree, `(LR)` a node.
    pub fn to_parens(&self) -> String {
        enum Step {
            Node(usize),
            Close,
            Empty,
        }
        let mut out = String::with_capacity(3 * self.len() + 1);
        let mut stack = vec![self.root().map_or(Step::Empty, Step::Node)];
        while let Some(step) = stack.pop() {
            match step {
                Step::Empty => out.push('.'),
                Step::Close => out.push(')'),
                Step::Node(i) => {
                    out.push('(');
                    stack.push(Step::Close);
                    stack.push(self.right(i).map_or(Step::Empty, Step::Node));
                    stack.push(self.left(i).map_or(Step::Empty, Step::Node));
                }
            }
        }
        out
    }

    pub fn parse_parens(text: &str) -> Result<Self> {
        let err = |reason: &str| Error::Parse {
            text: text.to_string(),
            reason: reason.into(),
        };
        let mut left = Vec::new();
        let mut right = Vec::new();
        // (node, children seen so far)
        let mut stack: Vec<(usize, u8)> = Vec::new();
        let mut done = false;
        for c in text.chars().filter(|c| !c.is_whitespace()) {
            if done {
                return Err(err("trailing characters"));
            }
            match c {
                '(' | '.' => {
                    let child = if c == '(' {
                        left.push(NONE);
                        right.push(NONE);
                        Some(left.len() - 1)
                    } else {
                        None
                    };
                    if let Some((parent, seen)) = stack.last_mut() {
                        if *seen == 2 {
                            return Err(err("node with more than two children"));
                        }
                        if let Some(ch) = child {
                            if *seen == 0 {
                                left[*parent] = ch as u32;
                            } else {
                                right[*parent] = ch as u32;
                            }
                        }
                        *seen += 1;
                    } else if child.is_none() {
                        done = true;
                    }
                    if let Some(ch) = child {
                        stack.push((ch, 0));
                    }
                }
                ')' => match stack.pop() {
                    Some((_, 2)) => {
                        if stack.is_empty() {
                            done = true;
                        }
                    }
                    _ => return Err(err("unbalanced or incomplete node")),
                },
                _ => return Err(err("unexpected character")),
            }
        }
        if !done {
            return Err(err("incomplete tree"));
        }
        Ok(Self { left, right })
    }

    /// Depth `h(v)` and left-depth `h_L(v)` of every node.
    pub fn depths(&self) -> (Vec<u32>, Vec<u32>) {
        let n = self.len();
        let mut h = vec![0u32; n];
        let mut hl = vec![0u32; n];
        for i in 0..n {
            if let Some(l) = self.left(i) {
                h[l] = h[i] + 1;
                hl[l] = hl[i] + 1;
            }
            if let Some(r) = self.right(i) {
                h[r] = h[i] + 1;
                hl[r] = hl[i];
            }
        }
        (h, hl)
    }
}

impl fmt::Display for BinaryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_parens())
    }
}

impl fmt::Debug for BinaryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryTree({})", self.to_parens())
    }
}

impl FromStr for BinaryTree {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse_parens(s)
    }
}

/// The tree of a 132-avoiding permutation (its max-rooted Cartesian tree).
pub fn perm_to_tree(pi: &Permutation) -> Result<BinaryTree> {
    if pi.contains_132() {
        return Err(Error::Contains132(pi.to_string()));
    }
    let w = pi.as_slice();
    let n = w.len();
    let mut left: Vec<Option<usize>> = vec![None; n];
    let mut right: Vec<Option<usize>> = vec![None; n];
    let mut stack: Vec<usize> = Vec::new();
    for i in 0..n {
        let mut last = None;
        while let Some(&top) = stack.last() {
            if w[top] < w[i] {
                last = stack.pop();
            } else {
                break;
            }
        }
        left[i] = last;
        if let Some(&top) = stack.last() {
            right[top] = Some(i);
        }
        stack.push(i);
    }
    Ok(BinaryTree::from_links(
        stack.first().copied(),
        &left,
        &right,
    ))
}

/// Inverse of [`perm_to_tree`].
pub fn tree_to_perm(tree: &BinaryTree) -> Permutation {
    let n = tree.len();
    let sizes = tree.subtree_sizes();
    let pos = tree.inorder_positions();
    let mut top = vec![0u32; n];
    let mut word = vec![0u32; n];
    if n > 0 {
        top[0] = n as u32;
    }
    for i in 0..n {
        word[pos[i]] = top[i];
        let ls = tree.left(i).map_or(0, |l| sizes[l]);
        // the left part of the permutation takes the larger labels
        if let Some(l) = tree.left(i) {
            top[l] = top[i] - 1;
        }
        if let Some(r) = tree.right(i) {
            top[r] = top[i] - 1 - ls as u32;
        }
    }
    Permutation::new(word).expect("labels form a permutation")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::avoiders_132;
    use std::collections::HashSet;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn single_node() {
        assert_eq!(perm_to_tree(&p("1")).unwrap(), BinaryTree::single());
        assert_eq!(tree_to_perm(&BinaryTree::single()), p("1"));
        assert_eq!(tree_to_perm(&BinaryTree::empty()), Permutation::empty());
    }

    #[test]
    fn decreasing_is_right_chain() {
        for n in 1..=9 {
            let t = perm_to_tree(&Permutation::decreasing(n)).unwrap();
            assert_eq!(t, BinaryTree::right_chain(n));
            assert_eq!(tree_to_perm(&t), Permutation::decreasing(n));
        }
    }

    #[test]
    fn tree_of_213() {
        let t = perm_to_tree(&p("213")).unwrap();
        let (l, r) = t.split().unwrap();
        assert!(r.is_empty());
        assert_eq!(l, perm_to_tree(&p("21")).unwrap());
        assert_eq!(t.to_parens(), "((.(..)).)");
    }

    #[test]
    fn rejects_132() {
        assert!(matches!(
            perm_to_tree(&p("1432")),
            Err(Error::Contains132(_))
        ));
    }

    #[test]
    fn bijection_small_n() {
        let catalan = [1usize, 1, 2, 5, 14, 42, 132, 429, 1430];
        for (n, &count) in catalan.iter().enumerate() {
            let mut seen = HashSet::new();
            for pi in avoiders_132(n) {
                let t = perm_to_tree(&pi).unwrap();
                assert_eq!(t.len(), n);
                assert_eq!(tree_to_perm(&t), pi);
                assert!(seen.insert(t));
            }
            assert_eq!(seen.len(), count);
        }
    }

    #[test]
    fn parens_round_trip() {
        for n in 0..=6 {
            for pi in avoiders_132(n) {
                let t = perm_to_tree(&pi).unwrap();
                let s = t.to_parens();
                assert_eq!(BinaryTree::parse_parens(&s).unwrap(), t);
            }
        }
        assert_eq!(BinaryTree::parse_parens(".").unwrap(), BinaryTree::empty());
        for bad in ["", "(", "(.)", "(...)", "(..)(..)", "x", "(..).", ")"] {
            assert!(BinaryTree::parse_parens(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn join_and_split_are_inverse() {
        let a: BinaryTree = "((..)(.(..)))".parse().unwrap();
        let b: BinaryTree = "(.(..))".parse().unwrap();
        let j = BinaryTree::join(&a, &b);
        assert_eq!(j.len(), a.len() + b.len() + 1);
        assert_eq!(j.split().unwrap(), (a, b));
    }

    #[test]
    fn from_links_canonicalizes() {
        // root 0 with left child 2 and right child 1
        let t = BinaryTree::from_links(Some(0), &[Some(2), None, None], &[Some(1), None, None]);
        assert_eq!(t.to_parens(), "((..)(..))");
    }
}
