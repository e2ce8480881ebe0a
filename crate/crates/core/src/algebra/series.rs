use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{int, Coeff};
use crate::error::{Error, Result};
use crate::{LaurentPoly, Natural, Rational};

/// Power series `c_0 + c_1 x + ... + c_K x^K`, exact through order `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series<T> {
    coeffs: Vec<T>,
}

impl<T: Coeff> Series<T> {
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![T::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = T::one();
        s
    }

    /// Pads with zeros or truncates to the given order.
    pub fn from_coeffs(mut coeffs: Vec<T>, order: usize) -> Self {
        coeffs.resize(order + 1, T::zero());
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn scale(&self, c: &T) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|v| v.clone() * c.clone()).collect(),
        }
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(self.coeffs.clone(), order)
    }

    /// `self / x`; fails unless the constant term vanishes.
    pub fn div_x(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Consistency(
                "series division by x is not exact".into(),
            ));
        }
        let order = self.order().saturating_sub(1);
        Ok(Self::from_coeffs(self.coeffs[1..].to_vec(), order))
    }
}

impl<T: Coeff> Add for &Series<T> {
    type Output = Series<T>;
    fn add(self, rhs: &Series<T>) -> Series<T> {
        let order = self.order().min(rhs.order());
        Series {
            coeffs: (0..=order)
                .map(|i| self.coeffs[i].clone() + rhs.coeffs[i].clone())
                .collect(),
        }
    }
}

impl<T: Coeff> Sub for &Series<T> {
    type Output = Series<T>;
    fn sub(self, rhs: &Series<T>) -> Series<T> {
        let order = self.order().min(rhs.order());
        Series {
            coeffs: (0..=order)
                .map(|i| self.coeffs[i].clone() - rhs.coeffs[i].clone())
                .collect(),
        }
    }
}

impl<T: Coeff> Mul for &Series<T> {
    type Output = Series<T>;
    fn mul(self, rhs: &Series<T>) -> Series<T> {
        let order = self.order().min(rhs.order());
        let mut coeffs = vec![T::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Series { coeffs }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    /// `(1-4x)^{+m/2}`
    Positive,
    /// `(1-4x)^{-m/2}`
    Negative,
}

/// `(1-4x)^{±m/2}` through order `order`, by the generalized binomial theorem.
pub fn binomial_series(m: u32, sign: Sign, order: usize) -> Series<Rational> {
    let a = match sign {
        Sign::Positive => Rational::new(BigInt::from(m), BigInt::from(2)),
        Sign::Negative => Rational::new(-BigInt::from(m), BigInt::from(2)),
    };
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut c = Rational::one();
    for j in 0..=order {
        coeffs.push(c.clone());
        // binom(a, j+1) (-4)^{j+1} = binom(a, j) (-4)^j * (a - j) / (j + 1) * (-4)
        c = c * (a.clone() - int(j as i64)) * int(-4) / int(j as i64 + 1);
    }
    Series { coeffs }
}

/// `(1 - 2x - sqrt(1-4x)) / (2x)` through order `order`.
pub fn catalan_prefactor(order: usize) -> Result<Series<Rational>> {
    let root = binomial_series(1, Sign::Positive, order + 1);
    let mut linear = Series::zero(order + 1);
    linear.coeffs[0] = int(1);
    linear.coeffs[1] = int(-2);
    let numerator = &linear - &root;
    // the numerator starts at 2x^2, so both the x- and x^0-coefficients vanish
    if !numerator.coeff(1).is_zero() {
        return Err(Error::Consistency(
            "prefactor numerator has a linear term".into(),
        ));
    }
    Ok(numerator.div_x()?.scale(&Rational::new(1.into(), 2.into())))
}

fn check_negative(f: &LaurentPoly) -> Result<()> {
    match f.max_exp() {
        Some(e) if e >= 0 => Err(Error::NonNegativeExponent(e)),
        _ => Ok(()),
    }
}

/// Series of `sum_n C_n z_n x^n` from `f(d) = E_d Z`, substituting
/// `d = sqrt(1-4x)` termwise and multiplying by the Catalan prefactor.
pub fn gf_from_ed(f: &LaurentPoly, order: usize) -> Result<Series<Rational>> {
    check_negative(f)?;
    let mut total = Series::zero(order);
    if f.is_zero() {
        return Ok(total);
    }
    let prefactor = catalan_prefactor(order)?;
    for (e, c) in f.terms() {
        let term = binomial_series((-e) as u32, Sign::Negative, order).scale(c);
        total = &total + &term;
    }
    Ok(&total * &prefactor)
}

/// The single coefficient `[x^n]` of [`gf_from_ed`], in `O(n)` per term of `f`.
/// Uses `(1 - 2x - sqrt(1-4x)) / (2x) = sum_{i>=1} C_i x^i`.
pub fn gf_coefficient(f: &LaurentPoly, n: usize) -> Result<Rational> {
    check_negative(f)?;
    if n == 0 || f.is_zero() {
        return Ok(Rational::zero());
    }
    let cat: Vec<BigInt> = catalan_sequence(n).into_iter().map(BigInt::from).collect();
    let mut total = Rational::zero();
    for (e, c) in f.terms() {
        let b = inverse_root_power((-e) as u32, n - 1);
        let acc: BigInt = (1..=n).map(|i| &b[n - i] * &cat[i]).sum();
        total += Rational::from_integer(acc) * c;
    }
    Ok(total)
}

/// Coefficients of `(1-4x)^{-m/2}` through `x^order`; all are integers,
/// with `b_{j+1} = b_j * 2 (m + 2j) / (j + 1)`.
fn inverse_root_power(m: u32, order: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(order + 1);
    let mut b = BigInt::one();
    for j in 0..=order {
        out.push(b.clone());
        b = b * BigInt::from(2 * (m as u64 + 2 * j as u64)) / BigInt::from(j as u64 + 1);
    }
    out
}

/// `C(2n, n) / (n + 1)`.
pub fn catalan(n: usize) -> Natural {
    catalan_sequence(n).pop().expect("sequence is nonempty")
}

fn catalan_sequence(n: usize) -> Vec<Natural> {
    let mut out = Vec::with_capacity(n + 1);
    let mut c = Natural::one();
    for i in 0..=n {
        out.push(c.clone());
        c = c * Natural::from(2 * (2 * i + 1)) / Natural::from(i + 2);
    }
    out
}
