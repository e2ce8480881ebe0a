//! Scalar recursions for the joint limit moments of `(Lambda_s, Lambda_12)`
//! with `s = 123` (alpha), `s = 213` (beta) and `s = 231` or `312` (gamma).
//!
//! `E Lambda_s^k Lambda_12^l = k! l! sqrt(pi) / (2^{w-2} Γ((w-1)/2)) * t_{k,l}`
//! with `w = 4k + 3l` for alpha and `w = 5k + 3l` otherwise.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::algebra::{gamma_half, int, rat, SymbolicConstant};
use crate::error::{Error, Result};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Alpha,
    Beta,
    Gamma,
}

impl Family {
    /// Pattern whose powers pair with `12` in this family.
    pub fn pattern(self) -> &'static str {
        match self {
            Family::Alpha => "123",
            Family::Beta => "213",
            Family::Gamma => "231",
        }
    }

    pub fn weight(self, k: usize, l: usize) -> i64 {
        let a = if self == Family::Alpha { 4 } else { 5 };
        (a * k + 3 * l) as i64
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Alpha => "alpha",
            Family::Beta => "beta",
            Family::Gamma => "gamma",
        })
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "alpha" | "a" | "123" => Ok(Family::Alpha),
            "beta" | "b" | "213" => Ok(Family::Beta),
            "gamma" | "c" | "g" | "231" | "312" => Ok(Family::Gamma),
            _ => Err(Error::Parse {
                text: s.into(),
                reason: "expected alpha, beta or gamma".into(),
            }),
        }
    }
}

/// `t_{k,l}` for `0 <= k <= k_max`, `0 <= l <= l_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentTable {
    pub family: Family,
    values: Vec<Vec<Rational>>,
}

impl MomentTable {
    pub fn get(&self, k: usize, l: usize) -> &Rational {
        &self.values[k][l]
    }

    pub fn k_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn l_max(&self) -> usize {
        self.values[0].len() - 1
    }

    /// `E Lambda_s^k Lambda_12^l` from the table entry.
    pub fn moment(&self, k: usize, l: usize) -> Result<SymbolicConstant> {
        Ok(tmom3_prefactor(self.family, k, l)?.scale(self.get(k, l)))
    }
}

/// `k! l! sqrt(pi) / (2^{w-2} Γ((w-1)/2))`, tagged with `n^{w/2}`.
pub fn tmom3_prefactor(family: Family, k: usize, l: usize) -> Result<SymbolicConstant> {
    let w = family.weight(k, l);
    let fact = |n: usize| (1..=n as i64).fold(int(1), |a, i| a * int(i));
    let (g, g_sqrt_pi) = gamma_half(w - 1)?;
    let pow2 = if w >= 2 {
        (0..w - 2).fold(int(1), |a, _| a * int(2))
    } else {
        (0..2 - w).fold(int(1), |a, _| a / int(2))
    };
    let coeff = fact(k) * fact(l) / (pow2 * g);
    Ok(SymbolicConstant::new(coeff, !g_sqrt_pi, rat(w, 2)))
}

/// `E Lambda_s^k Lambda_12^l` via the recursion for `family`.
pub fn tmom3_constant(family: Family, k: usize, l: usize) -> Result<SymbolicConstant> {
    tmom3_table(family, k, l)?.moment(k, l)
}

fn binomial(n: usize, r: usize) -> Rational {
    (0..r).fold(int(1), |a, i| a * int((n - i) as i64) / int(i as i64 + 1))
}

pub fn tmom3_table(family: Family, k_max: usize, l_max: usize) -> Result<MomentTable> {
    // (k, l) refers to entries with the same or smaller k + l and second
    // index up to k + l, so fill the triangle k + l <= k_max + l_max
    let top = k_max + l_max;
    let mut full = vec![vec![Rational::zero(); top + 1]; k_max + 1];
    full[0][0] = rat(-1, 2);
    for total in 1..=top {
        // within a total degree, gamma refers to smaller k only
        for k in 0..=k_max.min(total) {
            full[k][total - k] = entry(family, &full, k, total - k);
        }
    }
    let t = full
        .into_iter()
        .map(|row| row.into_iter().take(l_max + 1).collect())
        .collect();
    Ok(MomentTable { family, values: t })
}

fn entry(family: Family, t: &[Vec<Rational>], k: usize, l: usize) -> Rational {
    let w = family.weight(k, l);
    let at = |a: usize, b: usize| -> Rational { t[a][b].clone() };
    let mut v = Rational::zero();
    match family {
        Family::Alpha => {
            if k >= 1 {
                v += int(l as i64 + 1) * at(k - 1, l + 1);
            }
            if l >= 1 {
                v += int(2 * (w - 4)) * at(k, l - 1);
            }
        }
        Family::Beta => {
            if k >= 1 {
                v += int(2 * (w - 6) * (w - 4)) * at(k - 1, l);
            }
            if l >= 1 {
                v += int(2 * (w - 4)) * at(k, l - 1);
            }
        }
        Family::Gamma => {
            if l >= 1 {
                v += int(2 * (w - 4)) * at(k, l - 1);
            }
            for i in 0..=k {
                for j in 0..=l {
                    let base = rat(5 * i as i64 + 3 * j as i64 - 1, 2);
                    let mut ratio = int(1);
                    for m in 0..=k - i {
                        if m > 0 {
                            // Γ(x + m) / Γ(x) = prod_{r < m} (x + r)
                            ratio *= &base + int(m as i64 - 1);
                        }
                        if (i, j, m) == (0, 0, 0) || (i, j, m) == (k, l, 0) {
                            continue;
                        }
                        let pow4 = (0..m).fold(int(1), |a, _| a * int(4));
                        let c = pow4 * &ratio * binomial(l - j + m, m);
                        v += c * at(i, j) * at(k - i - m, l - j + m);
                    }
                }
            }
            return v;
        }
    }
    for i in 0..=k {
        for j in 0..=l {
            if i + j == 0 || i + j == k + l {
                continue;
            }
            v += at(i, j) * at(k - i, l - j);
        }
    }
    v
}
