//! Compensated summation and running product moments.

use num_traits::Float;

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Compensated<F> {
    sum: F,
    carry: F,
}

impl<F: Float> Compensated<F> {
    pub fn new() -> Self {
        Self {
            sum: F::zero(),
            carry: F::zero(),
        }
    }

    pub fn add(&mut self, x: F) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry = self.carry + ((self.sum - t) + x);
        } else {
            self.carry = self.carry + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: &Self) {
        self.add(other.sum);
        self.add(other.carry);
    }

    pub fn value(&self) -> F {
        self.sum + self.carry
    }
}

impl<F: Float> FromIterator<F> for Compensated<F> {
    fn from_iter<I: IntoIterator<Item = F>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Running sums of `x_i`, `x_i x_j` and `(x_i x_j)^2` over observations of a
/// fixed-width vector, enough for means, second moments, covariances and the
/// standard errors of all of them.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductMoments<F> {
    width: usize,
    count: u64,
    first: Vec<Compensated<F>>,
    // upper triangle, row-major, i <= j
    second: Vec<Compensated<F>>,
    fourth: Vec<Compensated<F>>,
}

impl<F: Float> ProductMoments<F> {
    pub fn new(width: usize) -> Self {
        let pairs = width * (width + 1) / 2;
        Self {
            width,
            count: 0,
            first: vec![Compensated::new(); width],
            second: vec![Compensated::new(); pairs],
            fourth: vec![Compensated::new(); pairs],
        }
    }

    fn pair(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        i * self.width - i * (i + 1) / 2 + j
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn push(&mut self, x: &[F]) {
        assert_eq!(x.len(), self.width, "observation width");
        self.count += 1;
        let mut k = 0;
        for i in 0..self.width {
            self.first[i].add(x[i]);
            for j in i..self.width {
                let p = x[i] * x[j];
                self.second[k].add(p);
                self.fourth[k].add(p * p);
                k += 1;
            }
        }
    }

    pub fn merge(&mut self, other: &Self) {
        assert_eq!(self.width, other.width, "merge width");
        self.count += other.count;
        for (a, b) in self.first.iter_mut().zip(&other.first) {
            a.merge(b);
        }
        for (a, b) in self.second.iter_mut().zip(&other.second) {
            a.merge(b);
        }
        for (a, b) in self.fourth.iter_mut().zip(&other.fourth) {
            a.merge(b);
        }
    }

    fn n(&self) -> F {
        F::from(self.count).expect("count fits in a float")
    }

    pub fn mean(&self, i: usize) -> F {
        self.first[i].value() / self.n()
    }

    /// `E[x_i x_j]` estimate.
    pub fn product_mean(&self, i: usize, j: usize) -> F {
        self.second[self.pair(i, j)].value() / self.n()
    }

    /// Unbiased covariance of `x_i` and `x_j`.
    pub fn covariance(&self, i: usize, j: usize) -> F {
        let n = self.n();
        if self.count < 2 {
            return F::nan();
        }
        (self.second[self.pair(i, j)].value() - n * self.mean(i) * self.mean(j)) / (n - F::one())
    }

    pub fn variance(&self, i: usize) -> F {
        self.covariance(i, i)
    }

    /// Standard error of [`ProductMoments::mean`].
    pub fn mean_se(&self, i: usize) -> F {
        (self.variance(i) / self.n()).sqrt()
    }

    /// Standard error of [`ProductMoments::product_mean`].
    pub fn product_mean_se(&self, i: usize, j: usize) -> F {
        let n = self.n();
        if self.count < 2 {
            return F::nan();
        }
        let k = self.pair(i, j);
        let m = self.second[k].value() / n;
        let var = (self.fourth[k].value() - n * m * m) / (n - F::one());
        (var.max(F::zero()) / n).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn compensation_recovers_lost_bits() {
        let mut acc = Compensated::<f64>::new();
        acc.add(1.0);
        for _ in 0..10 {
            acc.add(1e-16);
        }
        acc.add(-1.0);
        assert!((acc.value() - 1e-15).abs() < 1e-30);
        let naive: f64 = [1.0, 1e100, 1.0, -1e100].iter().sum();
        let comp: Compensated<f64> = [1.0, 1e100, 1.0, -1e100].into_iter().collect();
        assert_eq!(naive, 0.0);
        assert_eq!(comp.value(), 2.0);
    }

    #[test]
    fn moments_of_small_sample() {
        let mut m = ProductMoments::<f64>::new(2);
        for x in [[1.0, 2.0], [2.0, 4.0], [3.0, 6.0], [4.0, 8.0]] {
            m.push(&x);
        }
        assert_eq!(m.count(), 4);
        assert!((m.mean(0) - 2.5).abs() < 1e-15);
        assert!((m.variance(0) - 5.0 / 3.0).abs() < 1e-14);
        assert!((m.covariance(0, 1) - 10.0 / 3.0).abs() < 1e-14);
        assert!((m.product_mean(1, 0) - 15.0).abs() < 1e-14);
        assert!((m.mean_se(0) - (5.0 / 12.0f64).sqrt()).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn merge_matches_single_pass(
            xs in proptest::collection::vec((-100.0f64..100.0, -1.0f64..1.0), 2..40),
            cut in 0usize..40,
        ) {
            let cut = cut.min(xs.len());
            let mut all = ProductMoments::new(2);
            let mut a = ProductMoments::new(2);
            let mut b = ProductMoments::new(2);
            for (k, &(x, y)) in xs.iter().enumerate() {
                all.push(&[x, y]);
                if k < cut { a.push(&[x, y]) } else { b.push(&[x, y]) }
            }
            a.merge(&b);
            for (i, j) in [(0, 0), (0, 1), (1, 1)] {
                prop_assert!((a.product_mean(i, j) - all.product_mean(i, j)).abs() < 1e-9);
                prop_assert!((a.covariance(i, j) - all.covariance(i, j)).abs() < 1e-8);
            }
        }
    }
}
