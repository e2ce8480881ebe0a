//! Sparse-table range-minimum queries: O(n log n) build, O(1) query.

/// Range-minimum structure over a borrowed-then-owned copy of the data.
#[derive(Clone, Debug)]
pub struct SparseTable<T> {
    // levels[j][i] = min(values[i .. i + 2^j])
    levels: Vec<Vec<T>>,
}

impl<T: Copy + PartialOrd> SparseTable<T> {
    pub fn new(values: &[T]) -> Self {
        let n = values.len();
        let mut levels = vec![values.to_vec()];
        let mut width = 1;
        while 2 * width <= n {
            let prev = levels.last().unwrap();
            let next: Vec<T> = (0..=n - 2 * width)
                .map(|i| min2(prev[i], prev[i + width]))
                .collect();
            levels.push(next);
            width *= 2;
        }
        Self { levels }
    }

    pub fn len(&self) -> usize {
        self.levels[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels[0].is_empty()
    }

    /// Minimum over the inclusive 0-based range `[i, j]`.
    ///
    /// Panics if `i > j` or `j` is out of bounds.
    pub fn min(&self, i: usize, j: usize) -> T {
        assert!(
            i <= j && j < self.len(),
            "bad range [{i}, {j}] for length {}",
            self.len()
        );
        let span = j - i + 1;
        let level = (usize::BITS - 1 - span.leading_zeros()) as usize;
        let row = &self.levels[level];
        min2(row[i], row[j + 1 - (1 << level)])
    }
}

fn min2<T: PartialOrd>(a: T, b: T) -> T {
    if b < a {
        b
    } else {
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small() {
        let t = SparseTable::new(&[3, 1, 4, 1, 5, 9, 2, 6]);
        assert_eq!(t.min(0, 0), 3);
        assert_eq!(t.min(0, 7), 1);
        assert_eq!(t.min(4, 7), 2);
        assert_eq!(t.min(5, 5), 9);
    }

    proptest! {
        #[test]
        fn matches_scan(v in proptest::collection::vec(-50i32..50, 1..70), a in 0usize..70, b in 0usize..70) {
            let t = SparseTable::new(&v);
            let (i, j) = (a.min(b) % v.len(), a.max(b) % v.len());
            let (i, j) = (i.min(j), i.max(j));
            prop_assert_eq!(t.min(i, j), *v[i..=j].iter().min().unwrap());
        }
    }
}
