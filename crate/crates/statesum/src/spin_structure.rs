//! Spin structures on closed orientable surfaces, represented by their quadratic forms
//! on `H_1(Sigma_g; Z_2)`.
//!
//! Classes are bit vectors in the symplectic basis `(a_1, b_1, ..., a_g, b_g)`.

use crate::error::{Error, Result};

/// Parity `P(s) = (-1)^{arf}` of a spin structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// `+1` for even, `-1` for odd.
    pub fn sign(self) -> i64 {
        match self {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }

    pub fn from_sign(s: i64) -> Option<Parity> {
        match s {
            1 => Some(Parity::Even),
            -1 => Some(Parity::Odd),
            _ => None,
        }
    }
}

impl std::fmt::Display for Parity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

impl std::str::FromStr for Parity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            _ => Err(Error::invalid(format!("parity must be even or odd, got {s:?}"))),
        }
    }
}

/// Quadratic refinement of the intersection form, stored by its values on the basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadraticForm {
    values: Vec<u8>,
}

impl QuadraticForm {
    /// `values = (q(a_1), q(b_1), ..., q(a_g), q(b_g))`, each 0 or 1.
    pub fn new(values: Vec<u8>) -> Result<Self> {
        if !values.len().is_multiple_of(2) {
            return Err(Error::invalid("quadratic form needs an even number of basis values"));
        }
        if values.iter().any(|&v| v > 1) {
            return Err(Error::invalid("quadratic form values must be bits"));
        }
        Ok(QuadraticForm { values })
    }

    pub fn genus(&self) -> usize {
        self.values.len() / 2
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    /// `q(x)`, extended from the basis by `q(x+y) = q(x) + q(y) + x.y`.
    pub fn value(&self, x: &[u8]) -> u8 {
        let mut acc = 0u8;
        for (xi, qi) in x.iter().zip(&self.values) {
            acc ^= xi & qi;
        }
        for k in 0..self.genus() {
            acc ^= x[2 * k] & x[2 * k + 1];
        }
        acc
    }

    /// Arf invariant as `+1` / `-1`.
    pub fn arf(&self) -> i8 {
        arf(self)
    }

    pub fn parity(&self) -> Parity {
        if self.arf() == 1 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Standard intersection form `x.y` mod 2.
pub fn intersection(x: &[u8], y: &[u8]) -> u8 {
    let mut acc = 0u8;
    for k in 0..x.len() / 2 {
        acc ^= (x[2 * k] & y[2 * k + 1]) ^ (x[2 * k + 1] & y[2 * k]);
    }
    acc
}

/// `2^{-g} sum_x (-1)^{q(x)}`. The sum factorises over handles since `q` is a sum of
/// per-handle quadratic forms; each handle contributes `+-2`.
pub fn arf(q: &QuadraticForm) -> i8 {
    let mut sign = 1i8;
    for k in 0..q.genus() {
        let (qa, qb) = (q.values[2 * k], q.values[2 * k + 1]);
        let mut s = 0i32;
        for xa in 0..2u8 {
            for xb in 0..2u8 {
                let v = (xa & qa) ^ (xb & qb) ^ (xa & xb);
                s += if v == 0 { 1 } else { -1 };
            }
        }
        debug_assert!(s == 2 || s == -2);
        sign *= (s / 2) as i8;
    }
    sign
}

pub const CENSUS_MAX_GENUS: usize = 8;

/// Numbers of even and odd spin structures on `Sigma_g`.
pub fn parity_census(g: usize) -> Result<(u64, u64)> {
    if g > CENSUS_MAX_GENUS {
        return Err(Error::invalid(format!("census limited to genus <= {CENSUS_MAX_GENUS}")));
    }
    let (mut even, mut odd) = (0, 0);
    for bits in 0u64..1 << (2 * g) {
        let values = (0..2 * g).map(|i| ((bits >> i) & 1) as u8).collect();
        match (QuadraticForm { values }).parity() {
            Parity::Even => even += 1,
            Parity::Odd => odd += 1,
        }
    }
    Ok((even, odd))
}

/// Curl decorations on the standard diagram read as `q` on the generators.
pub fn immersion_to_parity(curl_flags: &[u8]) -> Result<Parity> {
    Ok(QuadraticForm::new(curl_flags.to_vec())?.parity())
}
