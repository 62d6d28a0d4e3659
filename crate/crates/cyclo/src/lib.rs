//! Exact arithmetic in cyclotomic fields.
//!
//! An element of `Q(zeta_N)` is stored as rational coefficients in the power
//! basis `1, zeta, ..., zeta^(phi(N)-1)` reduced modulo the cyclotomic
//! polynomial `Phi_N`. Elements with different conductors are combined by
//! lifting both operands to the least common multiple.

mod scalar;
mod table;

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Rem, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use scalar::Scalar;
use table::table;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse scalar `{0}`")]
    Parse(String),
}

/// Element of `Q(zeta_N)`.
#[derive(Clone)]
pub struct Cyclo {
    n: u32,
    c: Vec<BigRational>,
}

fn lcm(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

impl Cyclo {
    pub fn from_rational(r: BigRational) -> Self {
        Cyclo { n: 1, c: vec![r] }
    }

    pub fn from_int(i: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(i)))
    }

    /// `p/q` as a scalar; panics when `q == 0`.
    pub fn ratio(p: i64, q: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// Builds `sum c_k zeta_N^k` from arbitrary-length coefficients.
    pub fn from_coeffs(n: u32, coeffs: &[BigRational]) -> Self {
        assert!(n > 0, "conductor must be positive");
        let mut acc = Cyclo::zero();
        for (k, ck) in coeffs.iter().enumerate() {
            if ck.is_zero() {
                continue;
            }
            acc += &(Cyclo::root_of_unity(n, k as i64) * Cyclo::from_rational(ck.clone()));
        }
        acc
    }

    /// `zeta_order^power` with `zeta_m = exp(2 pi i / m)`.
    pub fn root_of_unity(order: u32, power: i64) -> Self {
        assert!(order > 0, "order must be positive");
        let p = power.rem_euclid(order as i64) as u32;
        if order == 1 || p == 0 {
            return Cyclo::one();
        }
        if order == 2 {
            return Cyclo::from_int(-1);
        }
        if order % 4 == 2 {
            // zeta_{2m} = -zeta_m^{(m+1)/2} for odd m.
            let m = order / 2;
            let e = (p as u64 * (m as u64).div_ceil(2)) % m as u64;
            let base = Cyclo::root_of_unity(m, e as i64);
            return if p % 2 == 1 { -base } else { base };
        }
        let t = table(order);
        let c = t.power(p).iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect();
        Cyclo { n: order, c }.normalized()
    }

    /// The imaginary unit `zeta_4`.
    pub fn i() -> Self {
        Cyclo::root_of_unity(4, 1)
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_rational(&self) -> bool {
        self.n == 1
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if self.n == 1 {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    fn normalized(mut self) -> Self {
        if self.n != 1 && self.c[1..].iter().all(|x| x.is_zero()) {
            self.n = 1;
            self.c.truncate(1);
        }
        self
    }

    /// Coefficients after embedding into `Q(zeta_l)`; `l` must be a multiple of the conductor.
    fn lifted(&self, l: u32) -> Vec<BigRational> {
        let t = table(l);
        if l == self.n {
            return self.c.clone();
        }
        let step = l / self.n;
        let mut out = vec![BigRational::zero(); t.phi()];
        for (k, ck) in self.c.iter().enumerate() {
            if ck.is_zero() {
                continue;
            }
            let e = (k as u32 * step) % l;
            for (o, &v) in out.iter_mut().zip(t.power(e)) {
                if v != 0 {
                    *o += ck * BigRational::from_integer(BigInt::from(v));
                }
            }
        }
        out
    }

    fn from_exponents(l: u32, acc: Vec<BigRational>) -> Self {
        let t = table(l);
        let mut out = vec![BigRational::zero(); t.phi()];
        for (e, a) in acc.into_iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (o, &v) in out.iter_mut().zip(t.power(e as u32)) {
                if v != 0 {
                    *o += &a * BigRational::from_integer(BigInt::from(v));
                }
            }
        }
        Cyclo { n: l, c: out }.normalized()
    }

    fn combine(&self, rhs: &Cyclo, sub: bool) -> Cyclo {
        if self.n == rhs.n {
            let c = self
                .c
                .iter()
                .zip(&rhs.c)
                .map(|(a, b)| if sub { a - b } else { a + b })
                .collect();
            return Cyclo { n: self.n, c }.normalized();
        }
        let l = lcm(self.n, rhs.n);
        let a = self.lifted(l);
        let b = rhs.lifted(l);
        let c = a.iter().zip(&b).map(|(x, y)| if sub { x - y } else { x + y }).collect();
        Cyclo { n: l, c }.normalized()
    }

    fn product(&self, rhs: &Cyclo) -> Cyclo {
        if self.n == 1 {
            return rhs.scale(&self.c[0]);
        }
        if rhs.n == 1 {
            return self.scale(&rhs.c[0]);
        }
        let l = lcm(self.n, rhs.n);
        let (sa, sb) = (l / self.n, l / rhs.n);
        let mut acc = vec![BigRational::zero(); l as usize];
        for (i, ci) in self.c.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            for (j, dj) in rhs.c.iter().enumerate() {
                if dj.is_zero() {
                    continue;
                }
                let e = ((i as u32 * sa + j as u32 * sb) % l) as usize;
                acc[e] += ci * dj;
            }
        }
        Cyclo::from_exponents(l, acc)
    }

    fn scale(&self, r: &BigRational) -> Cyclo {
        if r.is_zero() {
            return Cyclo::zero();
        }
        Cyclo { n: self.n, c: self.c.iter().map(|x| x * r).collect() }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inverse(&self) -> Option<Cyclo> {
        if self.is_zero() {
            return None;
        }
        if self.n == 1 {
            return Some(Cyclo::from_rational(self.c[0].recip()));
        }
        // Solve M y = e_0 where column j of M is self * zeta^j.
        let phi = self.c.len();
        let mut m: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); phi + 1]; phi];
        for j in 0..phi {
            let col = self.product(&Cyclo::root_of_unity(self.n, j as i64)).lifted_or_self(self.n);
            for (i, v) in col.into_iter().enumerate() {
                m[i][j] = v;
            }
        }
        m[0][phi] = BigRational::one();
        for col in 0..phi {
            let piv = (col..phi).find(|&r| !m[r][col].is_zero())?;
            m.swap(col, piv);
            let inv = m[col][col].recip();
            for v in m[col].iter_mut() {
                *v *= &inv;
            }
            for r in 0..phi {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for k in col..=phi {
                        let d = &f * &m[col][k];
                        m[r][k] -= d;
                    }
                }
            }
        }
        let y: Vec<BigRational> = m.into_iter().map(|row| row[phi].clone()).collect();
        Some(Cyclo { n: self.n, c: y }.normalized())
    }

    fn lifted_or_self(&self, l: u32) -> Vec<BigRational> {
        if self.n == 1 {
            let mut v = vec![BigRational::zero(); table(l).phi()];
            v[0] = self.c[0].clone();
            v
        } else {
            self.lifted(l)
        }
    }

    /// Complex conjugation `zeta -> zeta^-1`.
    pub fn conj(&self) -> Cyclo {
        if self.n == 1 {
            return self.clone();
        }
        let t = table(self.n);
        let mut out = vec![BigRational::zero(); t.phi()];
        for (k, ck) in self.c.iter().enumerate() {
            if ck.is_zero() {
                continue;
            }
            let e = (self.n - k as u32) % self.n;
            for (o, &v) in out.iter_mut().zip(t.power(e)) {
                if v != 0 {
                    *o += ck * BigRational::from_integer(BigInt::from(v));
                }
            }
        }
        Cyclo { n: self.n, c: out }.normalized()
    }

    /// Integer power; negative exponents invert (panics on zero base).
    pub fn pow(&self, e: i64) -> Cyclo {
        let base = if e < 0 { self.inverse().expect("zero to a negative power") } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Cyclo::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        acc
    }

    /// Complex approximation `(re, im)`; for display only.
    pub fn approx(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, ck) in self.c.iter().enumerate() {
            let v = ck.to_f64().unwrap_or(f64::NAN);
            let th = 2.0 * std::f64::consts::PI * k as f64 / self.n as f64;
            re += v * th.cos();
            im += v * th.sin();
        }
        (re, im)
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let (re, im) = self.approx();
        let fmt = |x: f64| -> String {
            if x == 0.0 {
                return "0".to_string();
            }
            let s = format!("{:.*e}", digits.saturating_sub(1), x);
            let v: f64 = s.parse().unwrap_or(x);
            let mag = v.abs().log10().floor() as i32;
            if (-5..15).contains(&mag) {
                let prec = (digits as i32 - 1 - mag).max(0) as usize;
                let t = format!("{:.*}", prec, v);
                if t.contains('.') {
                    t.trim_end_matches('0').trim_end_matches('.').to_string()
                } else {
                    t
                }
            } else {
                s
            }
        };
        let tol = 1e-12 * (re.abs().max(im.abs()).max(1.0));
        if self.n == 1 || im.abs() <= tol {
            fmt(re)
        } else if re.abs() <= tol {
            format!("{}i", fmt(im))
        } else {
            let sign = if im < 0.0 { "-" } else { "+" };
            format!("{}{}{}i", fmt(re), sign, fmt(im.abs()))
        }
    }

    /// Sign of a rational value.
    pub fn rational_sign(&self) -> Option<Ordering> {
        self.to_rational().map(|r| {
            if r.is_positive() {
                Ordering::Greater
            } else if r.is_negative() {
                Ordering::Less
            } else {
                Ordering::Equal
            }
        })
    }
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n == 1 {
            return write!(f, "{}", self.c[0]);
        }
        write!(f, "cyclo({})[", self.n)?;
        for (k, ck) in self.c.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", ck)?;
        }
        write!(f, "]")
    }
}

fn parse_rational(s: &str) -> Result<BigRational, ScalarError> {
    let s = s.trim();
    let err = || ScalarError::Parse(s.to_string());
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| err())?;
            let q: BigInt = q.trim().parse().map_err(|_| err())?;
            if q.is_zero() {
                return Err(ScalarError::DivisionByZero);
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| err())?)),
    }
}

impl FromStr for Cyclo {
    type Err = ScalarError;

    /// Accepts `p/q`, `p`, or `cyclo(N)[c0,c1,...]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let err = || ScalarError::Parse(s.to_string());
        if let Some(rest) = t.strip_prefix("cyclo(") {
            let (n, rest) = rest.split_once(')').ok_or_else(err)?;
            let n: u32 = n.trim().parse().map_err(|_| err())?;
            if n == 0 {
                return Err(err());
            }
            let body = rest.trim().strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(err)?;
            let coeffs = if body.trim().is_empty() {
                Vec::new()
            } else {
                body.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>()?
            };
            let phi = table::totient(n) as usize;
            if coeffs.len() == phi && n % 4 != 2 && n > 2 {
                return Ok(Cyclo { n, c: coeffs }.normalized());
            }
            return Ok(Cyclo::from_coeffs(n, &coeffs));
        }
        Ok(Cyclo::from_rational(parse_rational(t)?))
    }
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        if self.n == other.n {
            return self.c == other.c;
        }
        let l = lcm(self.n, other.n);
        self.lifted_or_self(l) == other.lifted_or_self(l)
    }
}

impl Eq for Cyclo {}

impl Zero for Cyclo {
    fn zero() -> Self {
        Cyclo::from_rational(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }
}

impl One for Cyclo {
    fn one() -> Self {
        Cyclo::from_rational(BigRational::one())
    }
}

impl From<i64> for Cyclo {
    fn from(v: i64) -> Self {
        Cyclo::from_int(v)
    }
}

impl From<BigRational> for Cyclo {
    fn from(v: BigRational) -> Self {
        Cyclo::from_rational(v)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a> $tr<&'a Cyclo> for &'a Cyclo {
            type Output = Cyclo;
            fn $m(self, rhs: &'a Cyclo) -> Cyclo {
                let f: fn(&Cyclo, &Cyclo) -> Cyclo = $body;
                f(self, rhs)
            }
        }
        impl $tr<Cyclo> for Cyclo {
            type Output = Cyclo;
            fn $m(self, rhs: Cyclo) -> Cyclo {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Cyclo> for Cyclo {
            type Output = Cyclo;
            fn $m(self, rhs: &'a Cyclo) -> Cyclo {
                (&self).$m(rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.combine(b, false));
forward_binop!(Sub, sub, |a, b| a.combine(b, true));
forward_binop!(Mul, mul, |a, b| a.product(b));
forward_binop!(Div, div, |a, b| a.product(&b.inverse().expect("division by zero")));
// Exact division in a field leaves no remainder.
forward_binop!(Rem, rem, |_, b| {
    assert!(!b.is_zero(), "division by zero");
    Cyclo::zero()
});

impl Neg for Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        Cyclo { n: self.n, c: self.c.into_iter().map(|x| -x).collect() }
    }
}

impl Neg for &Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        -self.clone()
    }
}

impl<'a> AddAssign<&'a Cyclo> for Cyclo {
    fn add_assign(&mut self, rhs: &'a Cyclo) {
        if self.n == rhs.n {
            for (a, b) in self.c.iter_mut().zip(&rhs.c) {
                *a += b;
            }
            if self.n != 1 {
                *self = std::mem::replace(self, Cyclo::zero()).normalized();
            }
        } else {
            *self = self.combine(rhs, false);
        }
    }
}

impl AddAssign for Cyclo {
    fn add_assign(&mut self, rhs: Cyclo) {
        *self += &rhs;
    }
}

impl<'a> SubAssign<&'a Cyclo> for Cyclo {
    fn sub_assign(&mut self, rhs: &'a Cyclo) {
        *self = self.combine(rhs, true);
    }
}

impl SubAssign for Cyclo {
    fn sub_assign(&mut self, rhs: Cyclo) {
        *self -= &rhs;
    }
}

impl<'a> MulAssign<&'a Cyclo> for Cyclo {
    fn mul_assign(&mut self, rhs: &'a Cyclo) {
        *self = self.product(rhs);
    }
}

impl MulAssign for Cyclo {
    fn mul_assign(&mut self, rhs: Cyclo) {
        *self = self.product(&rhs);
    }
}

impl Sum for Cyclo {
    fn sum<I: Iterator<Item = Cyclo>>(iter: I) -> Cyclo {
        iter.fold(Cyclo::zero(), |mut a, b| {
            a += &b;
            a
        })
    }
}

impl<'a> Sum<&'a Cyclo> for Cyclo {
    fn sum<I: Iterator<Item = &'a Cyclo>>(iter: I) -> Cyclo {
        iter.fold(Cyclo::zero(), |mut a, b| {
            a += b;
            a
        })
    }
}

impl Product for Cyclo {
    fn product<I: Iterator<Item = Cyclo>>(iter: I) -> Cyclo {
        iter.fold(Cyclo::one(), |a, b| a * b)
    }
}
