use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::{int, rat, to_f64};
use crate::error::{Error, Result};
use crate::Rational;

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// `Γ(twice / 2)` as `(q, s)` meaning `q * sqrt(pi)^s`.
///
/// Defined at every positive integer and every half-integer; the poles at
/// `0, -1, -2, ...` are errors.
pub fn gamma_half(twice: i64) -> Result<(Rational, bool)> {
    if twice <= 0 && twice % 2 == 0 {
        return Err(Error::InvalidArgument(format!(
            "Gamma has a pole at {}",
            twice / 2
        )));
    }
    if twice < 0 {
        // Γ(x) = Γ(x + 1) / x
        let (q, s) = gamma_half(twice + 2)?;
        return Ok((q / rat(twice, 2), s));
    }
    if twice % 2 == 0 {
        let j = twice / 2;
        let f = (1..j).fold(int(1), |acc, i| acc * int(i));
        return Ok((f, false));
    }
    // Γ(j + 1/2) = (2j)! / (4^j j!) sqrt(pi) = prod_{i<j} (i + 1/2) sqrt(pi)
    let j = (twice - 1) / 2;
    let q = (0..j).fold(int(1), |acc, i| acc * rat(2 * i + 1, 2));
    Ok((q, true))
}

/// An exact constant `q * sqrt(pi)^s`, optionally tagged with a growth
/// exponent `n^e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicConstant {
    pub coeff: Rational,
    pub sqrt_pi: bool,
    pub n_exponent: Rational,
}

impl SymbolicConstant {
    pub fn new(coeff: Rational, sqrt_pi: bool, n_exponent: Rational) -> Self {
        Self {
            coeff,
            sqrt_pi,
            n_exponent,
        }
    }

    pub fn rational(coeff: Rational) -> Self {
        Self::new(coeff, false, Rational::zero())
    }

    /// Constant of `E Z(T_n) ~ C n^{(d+1)/2}` when `E_d Z` has leading term
    /// `a d^{-d}`: `C = a sqrt(pi) / Γ(d/2)`.
    pub fn singularity_transfer(a: &Rational, inverse_degree: u32) -> Result<Self> {
        if inverse_degree == 0 {
            return Err(Error::InvalidArgument(
                "transfer needs a pole of order at least 1".into(),
            ));
        }
        let (g, g_sqrt_pi) = gamma_half(inverse_degree as i64)?;
        Ok(Self::new(
            a.clone() / g,
            !g_sqrt_pi,
            rat(inverse_degree as i64 + 1, 2),
        ))
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.coeff) * if self.sqrt_pi { SQRT_PI } else { 1.0 }
    }

    /// The same value without the `n^e` tag.
    pub fn value(&self) -> Self {
        Self::new(self.coeff.clone(), self.sqrt_pi, Rational::zero())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.sqrt_pi != other.sqrt_pi || self.n_exponent != other.n_exponent {
            return Err(Error::Unsupported(format!(
                "cannot add {self} and {other} exactly"
            )));
        }
        Ok(Self::new(
            &self.coeff + &other.coeff,
            self.sqrt_pi,
            self.n_exponent.clone(),
        ))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(&self.coeff * c, self.sqrt_pi, self.n_exponent.clone())
    }

    /// `value * other_value` as an element of `Q + Q pi` when it lands there.
    pub fn product(&self, other: &Self) -> Result<PiAffine> {
        let c = &self.coeff * &other.coeff;
        match (self.sqrt_pi, other.sqrt_pi) {
            (false, false) => Ok(PiAffine::new(c, Rational::zero())),
            (true, true) => Ok(PiAffine::new(Rational::zero(), c)),
            _ => Err(Error::Unsupported(
                "product has an odd power of sqrt(pi)".into(),
            )),
        }
    }

    /// Value only, e.g. `sqrt(pi)/8`, `3*sqrt(pi)/4`, `5/6`.
    pub fn value_string(&self) -> String {
        if !self.sqrt_pi {
            return self.coeff.to_string();
        }
        let numer = self.coeff.numer();
        let denom = self.coeff.denom();
        let mut out = String::new();
        if numer.is_negative() {
            out.push('-');
        }
        let abs = numer.abs();
        if abs.is_zero() {
            return "0".into();
        }
        if !abs.is_one() {
            out.push_str(&format!("{abs}*"));
        }
        out.push_str("sqrt(pi)");
        if !denom.is_one() {
            out.push_str(&format!("/{denom}"));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "exact": self.value_string(),
            "coeff": self.coeff.to_string(),
            "sqrt_pi": self.sqrt_pi,
            "n_exponent": self.n_exponent.to_string(),
            "decimal": self.to_f64(),
        })
    }
}

impl fmt::Display for SymbolicConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.value_string())?;
        if !self.n_exponent.is_zero() {
            write!(f, " * n^{{{}}}", self.n_exponent)?;
        }
        Ok(())
    }
}

/// `a + b pi`, closed under addition and rational scaling; used for exact
/// variances such as `(10 - 3 pi) / 12`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiAffine {
    pub a: Rational,
    pub b: Rational,
}

impl PiAffine {
    pub fn new(a: Rational, b: Rational) -> Self {
        Self { a, b }
    }

    pub fn from_constant(c: &SymbolicConstant) -> Result<Self> {
        if c.sqrt_pi {
            return Err(Error::Unsupported(
                "sqrt(pi) is not of the form a + b*pi".into(),
            ));
        }
        Ok(Self::new(c.coeff.clone(), Rational::zero()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(&self.a * c, &self.b * c)
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.a) + to_f64(&self.b) * std::f64::consts::PI
    }
}

impl Add for &PiAffine {
    type Output = PiAffine;
    fn add(self, rhs: &PiAffine) -> PiAffine {
        PiAffine::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl Sub for &PiAffine {
    type Output = PiAffine;
    fn sub(self, rhs: &PiAffine) -> PiAffine {
        PiAffine::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl Mul<&Rational> for &PiAffine {
    type Output = PiAffine;
    fn mul(self, rhs: &Rational) -> PiAffine {
        self.scale(rhs)
    }
}

impl fmt::Display for PiAffine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}*pi", self.b),
            (false, false) => {
                let sign = if self.b.is_negative() { "-" } else { "+" };
                write!(f, "{} {} {}*pi", self.a, sign, self.b.abs())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_values() {
        assert_eq!(gamma_half(2).unwrap(), (int(1), false));
        assert_eq!(gamma_half(8).unwrap(), (int(6), false));
        assert_eq!(gamma_half(1).unwrap(), (int(1), true));
        assert_eq!(gamma_half(3).unwrap(), (rat(1, 2), true));
        assert_eq!(gamma_half(5).unwrap(), (rat(3, 4), true));
        assert_eq!(gamma_half(-1).unwrap(), (int(-2), true));
        assert_eq!(gamma_half(-3).unwrap(), (rat(4, 3), true));
        assert!(gamma_half(0).is_err());
        assert!(gamma_half(-4).is_err());
        // Γ(j + 1/2) = (2j)! / (4^j j!) sqrt(pi)
        for j in 0..8i64 {
            let f = |m: i64| (1..=m).fold(int(1), |a, i| a * int(i));
            let expect = f(2 * j) / (f(j) * (0..j).fold(int(1), |a, _| a * int(4)));
            assert_eq!(gamma_half(2 * j + 1).unwrap(), (expect, true));
        }
    }

    #[test]
    fn gamma_recurrence() {
        for t in -7i64..20 {
            if t <= 0 && t % 2 == 0 || (t + 2 <= 0 && (t + 2) % 2 == 0) {
                continue;
            }
            let (a, s) = gamma_half(t).unwrap();
            let (b, s2) = gamma_half(t + 2).unwrap();
            assert_eq!(s, s2);
            assert_eq!(b, a * rat(t, 2));
        }
    }

    #[test]
    fn transfer_examples() {
        // 1/2 d^-2 gives sqrt(pi)/2 n^{3/2}
        let c = SymbolicConstant::singularity_transfer(&rat(1, 2), 2).unwrap();
        assert_eq!(c, SymbolicConstant::new(rat(1, 2), true, rat(3, 2)));
        assert_eq!(c.to_string(), "sqrt(pi)/2 * n^{3/2}");
        // 1/4 d^-3 gives 1/2 n^2
        let c = SymbolicConstant::singularity_transfer(&rat(1, 4), 3).unwrap();
        assert_eq!(c.to_string(), "1/2 * n^{2}");
        assert!(SymbolicConstant::singularity_transfer(&rat(1, 4), 0).is_err());
    }

    #[test]
    fn rendering_and_arithmetic() {
        let a = SymbolicConstant::new(rat(3, 4), true, int(0));
        assert_eq!(a.to_string(), "3*sqrt(pi)/4");
        assert_eq!(
            SymbolicConstant::new(rat(-1, 8), true, int(0)).to_string(),
            "-sqrt(pi)/8"
        );
        assert!((a.to_f64() - 0.75 * std::f64::consts::PI.sqrt()).abs() < 1e-15);
        let b = SymbolicConstant::new(rat(1, 4), true, int(0));
        assert_eq!(a.checked_add(&b).unwrap().coeff, int(1));
        assert!(a.checked_add(&SymbolicConstant::rational(int(1))).is_err());
        let sq = b.product(&b).unwrap();
        assert_eq!(sq, PiAffine::new(int(0), rat(1, 16)));
        assert!(a.product(&SymbolicConstant::rational(int(1))).is_err());
    }

    #[test]
    fn variance_of_area_limit() {
        // 5/6 - (sqrt(pi)/2)^2 = (10 - 3 pi) / 12
        let m2 = PiAffine::from_constant(&SymbolicConstant::rational(rat(5, 6))).unwrap();
        let m1 = SymbolicConstant::new(rat(1, 2), true, int(0));
        let var = &m2 - &m1.product(&m1).unwrap();
        assert_eq!(var, PiAffine::new(rat(10, 12), rat(-3, 12)));
        assert_eq!(var.to_string(), "5/6 - 1/4*pi");
        assert!((var.to_f64() - (10.0 - 3.0 * std::f64::consts::PI) / 12.0).abs() < 1e-15);
    }
}
