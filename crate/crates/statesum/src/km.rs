//! Involutions `*` on Frobenius algebras: the data for unoriented state sums.
//!
//! Conventions: `star[a][b] = S_a^b` is the matrix of `*` (row `a` holds `e_a^*`), and
//! `S^{ab}` is recovered through `S_a^b = B_{ac} S^{cb}`.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use cyclo::Scalar;

use crate::algebra::{Algebra, BlockKind, Element, Ring};
use crate::error::{Error, Result};
use crate::frobenius::Frobenius;
use crate::linalg::{self, Matrix};
use crate::report::Report;

#[derive(Debug, Clone, PartialEq)]
pub enum InvolutionKind<K> {
    /// Matrix transpose (group inverse on group blocks).
    Transpose,
    /// Conjugate transpose on `M_n(C_R)` blocks (`= transpose` on real blocks).
    Hermitian,
    /// Quaternionic conjugate transpose on `M_n(H_R)` blocks.
    Quaternionic,
    /// Linear extension of `h -> h^{-1}` on group blocks.
    GroupInverse,
    /// `a -> s a^base s^{-1}`.
    Conjugated { s: Element<K>, base: Box<InvolutionKind<K>> },
}

#[derive(Debug)]
pub struct InvolutionData<K> {
    frobenius: Frobenius<K>,
    s: Matrix<K>,
    star: Matrix<K>,
    mu: Option<K>,
}

impl<K: Scalar> Clone for InvolutionData<K> {
    fn clone(&self) -> Self {
        InvolutionData { frobenius: self.frobenius.clone(), s: self.s.clone(), star: self.star.clone(), mu: self.mu.clone() }
    }
}

impl<K: Scalar> InvolutionData<K> {
    /// Involution from the matrix of `*`; every axiom is verified.
    pub fn from_star(frobenius: Frobenius<K>, star: Matrix<K>) -> Result<Self> {
        let n = frobenius.dim();
        if star.len() != n || star.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: star.len() });
        }
        let s = linalg::mat_mul(frobenius.b(), &star);
        let rep = check_axioms(&frobenius, &star, &s);
        if let Some(bad) = rep.failures().next() {
            return Err(Error::NotAnInvolution(format!("{} {}", bad.name, bad.detail).trim().to_string()));
        }
        Ok(InvolutionData { frobenius, s, star, mu: Some(K::one()) })
    }

    /// Involution from `S^{ab}`.
    pub fn from_s(frobenius: Frobenius<K>, s: Matrix<K>) -> Result<Self> {
        let star = linalg::mat_mul(frobenius.binv(), &s);
        InvolutionData::from_star(frobenius, star)
    }

    pub fn frobenius(&self) -> &Frobenius<K> {
        &self.frobenius
    }

    /// `S^{ab}`.
    pub fn s_matrix(&self) -> &Matrix<K> {
        &self.s
    }

    /// `S_a^b`.
    pub fn star_matrix(&self) -> &Matrix<K> {
        &self.star
    }

    /// For conjugated involutions `s = mu s^base`, when `mu` lies in the scalar field.
    pub fn mu(&self) -> Option<&K> {
        self.mu.as_ref()
    }

    pub fn apply(&self, x: &[K]) -> Element<K> {
        linalg::vec_mat(x, &self.star)
    }

    /// `w = R sum e_a e_b e_c e_d S^{ac} S^{bd}`.
    pub fn w_element(&self) -> Element<K> {
        let f = &self.frobenius;
        let a = f.algebra();
        let n = a.dim();
        // f_a = sum_c S^{ac} e_c
        let fa = &self.s;
        let mut out = a.zero();
        for x in 0..n {
            if fa[x].iter().all(|c| c.is_zero()) {
                continue;
            }
            for y in 0..n {
                if fa[y].iter().all(|c| c.is_zero()) {
                    continue;
                }
                let t = a.mul(&a.mul(&a.mul(&a.basis(x), &a.basis(y)), &fa[x]), &fa[y]);
                for (o, v) in out.iter_mut().zip(t) {
                    *o += &v;
                }
            }
        }
        out.into_iter().map(|c| c * f.r().clone()).collect()
    }

    /// `Z(Sigma^k) = R eps(w^k)` for the connected sum of `k` projective planes.
    pub fn nonorientable_invariant(&self, k: usize) -> Result<K> {
        if k == 0 {
            return Err(Error::invalid("non-orientable genus must be positive"));
        }
        self.frobenius.require_special()?;
        let a = self.frobenius.algebra();
        let w = self.w_element();
        Ok(self.frobenius.r().clone() * self.frobenius.epsilon(&a.pow(&w, k)))
    }

    /// Per block: `gamma` with `w 1_i = c 1_i`, `gamma = sign(c)`; `None` when `w` is not
    /// a rational multiple of the block unit.
    pub fn gamma(&self) -> Vec<Option<i8>> {
        let a = self.frobenius.algebra();
        let w = self.w_element();
        (0..a.blocks().len())
            .map(|i| {
                let u = a.block_unit(i);
                let wi = a.mul(&w, &u);
                let k = u.iter().position(|x| !x.is_zero())?;
                let c = wi[k].clone() * u[k].inverse()?;
                let scaled: Element<K> = u.iter().map(|x| x.clone() * c.clone()).collect();
                if scaled != wi {
                    return None;
                }
                let q = c.as_rational()?;
                Some(if q.is_zero() {
                    0
                } else if q.is_positive() {
                    1
                } else {
                    -1
                })
            })
            .collect()
    }

    /// `w z = w^3` and `w` central.
    pub fn verify_w_identities(&self) -> Report {
        let f = &self.frobenius;
        let a = f.algebra();
        let w = self.w_element();
        let z = f.z_element();
        let mut rep = Report::new();
        rep.push("w z = w^3", a.mul(&w, &z) == a.pow(&w, 3), "");
        rep.push("w central", a.is_central(&w), "");
        rep
    }
}

/// Standard involution of the requested kind, built blockwise and fully verified.
pub fn standard_involution<K: Scalar>(f: &Frobenius<K>, kind: &InvolutionKind<K>) -> Result<InvolutionData<K>> {
    let a = f.algebra();
    match kind {
        InvolutionKind::Conjugated { s, base } => {
            if s.len() != a.dim() {
                return Err(Error::DimensionMismatch { expected: a.dim(), got: s.len() });
            }
            let star0 = base_star(a, base)?;
            let s_inv = a.inverse_element(s)?;
            let star: Matrix<K> =
                (0..a.dim()).map(|x| a.mul(&a.mul(s, &linalg::vec_mat(&a.basis(x), &star0)), &s_inv)).collect();
            let mut data = InvolutionData::from_star(f.clone(), star)?;
            let s_base = linalg::vec_mat(s, &star0);
            data.mu = proportionality(s, &s_base);
            Ok(data)
        }
        _ => InvolutionData::from_star(f.clone(), base_star(a, kind)?),
    }
}

/// `mu` with `x = mu y`, if any.
fn proportionality<K: Scalar>(x: &[K], y: &[K]) -> Option<K> {
    let k = y.iter().position(|c| !c.is_zero())?;
    let mu = x[k].clone() * y[k].inverse()?;
    x.iter().zip(y).all(|(p, q)| *p == mu.clone() * q.clone()).then_some(mu)
}

fn base_star<K: Scalar>(a: &Algebra<K>, kind: &InvolutionKind<K>) -> Result<Matrix<K>> {
    let dim = a.dim();
    let mut star = linalg::zeros(dim, dim);
    let unsupported = |what: &str| Err(Error::NotAnInvolution(format!("{kind:?} is not available on {what} blocks")));
    for blk in a.blocks() {
        let off = blk.offset;
        match &blk.kind {
            BlockKind::Matrix { n, ring } => {
                let n = *n;
                let negate_imaginary = match (kind, ring) {
                    (InvolutionKind::Transpose, Ring::R | Ring::CR | Ring::C) => false,
                    (InvolutionKind::Hermitian, Ring::R) => false,
                    (InvolutionKind::Hermitian, Ring::CR) => true,
                    (InvolutionKind::Quaternionic, Ring::HR) => true,
                    (InvolutionKind::Hermitian, Ring::C) => {
                        return unsupported("M_n(C) (the conjugate transpose is antilinear)")
                    }
                    _ => return unsupported(&format!("{ring:?} matrix")),
                };
                for w in 0..ring.units() {
                    let sign = if w > 0 && negate_imaginary { -K::one() } else { K::one() };
                    for l in 0..n {
                        for m in 0..n {
                            let from = off + Algebra::<K>::matrix_unit_index(n, w, l, m);
                            let to = off + Algebra::<K>::matrix_unit_index(n, w, m, l);
                            star[from][to] = sign.clone();
                        }
                    }
                }
            }
            BlockKind::Pauli { n } => {
                let n = *n;
                if *kind != InvolutionKind::Transpose {
                    return unsupported("clock-and-shift");
                }
                // (X^a Y^b)^tr = Y^{-b} X^a = xi^{ab} X^a Y^{-b}
                let xi = K::root_of_unity(n as u32, 1).ok_or(Error::MissingRootOfUnity(n as u32))?;
                for x in 0..n {
                    for y in 0..n {
                        let to = x * n + (n - y) % n;
                        star[off + x * n + y][off + to] = xi.powi(((x * y) % n) as i64).expect("unit");
                    }
                }
            }
            BlockKind::Group { group } => {
                if !matches!(kind, InvolutionKind::Transpose | InvolutionKind::GroupInverse) {
                    return unsupported("group");
                }
                for h in 0..group.order() {
                    star[off + h][off + group.inv(h)] = K::one();
                }
            }
            BlockKind::Raw => return unsupported("raw"),
        }
    }
    Ok(star)
}

/// Every condition making `S` an involution datum: the anti-homomorphism law, `** = id`,
/// `S^{ab} = S^{ba}`, `eps o * = eps` and `*(1) = 1`.
pub fn check_axioms<K: Scalar>(f: &Frobenius<K>, star: &Matrix<K>, s: &Matrix<K>) -> Report {
    let a = f.algebra();
    let n = a.dim();
    let apply = |x: &[K]| linalg::vec_mat(x, star);
    let mut rep = Report::new();
    let mut bad = Vec::new();
    for g in 0..n {
        for h in 0..n {
            // e_g^* e_h^* = (e_h e_g)^*
            let lhs = a.mul(&star[g], &star[h]);
            let rhs = apply(&a.mul(&a.basis(h), &a.basis(g)));
            if lhs != rhs {
                bad.push((g, h));
            }
        }
    }
    rep.push("anti-homomorphism", bad.is_empty(), summary(&bad));
    rep.push("involutive", linalg::mat_mul(star, star) == linalg::identity(n), "");
    let asym: Vec<(usize, usize)> =
        (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|&(x, y)| s[x][y] != s[y][x]).collect();
    rep.push("S symmetric", asym.is_empty(), summary(&asym));
    let eps_ok = (0..n).all(|x| f.epsilon(&star[x]) == f.eps()[x]);
    rep.push("eps o * = eps", eps_ok, "");
    rep.push("unit preserved", apply(a.unit()) == a.unit(), "");
    rep
}

/// Checks of the unoriented moves for raw `S^{ab}` (possibly invalid data).
pub fn verify_unoriented_moves<K: Scalar>(f: &Frobenius<K>, s: &Matrix<K>) -> Report {
    let star = linalg::mat_mul(f.binv(), s);
    check_axioms(f, &star, s)
}

fn summary(v: &[(usize, usize)]) -> String {
    if v.is_empty() {
        return String::new();
    }
    let shown: Vec<String> = v.iter().take(5).map(|t| format!("{t:?}")).collect();
    format!("{} failing pairs, e.g. {}", v.len(), shown.join(" "))
}

/// Congruence class representative of an invertible symmetric or antisymmetric matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormalForm {
    /// `diag(1^p, (-1)^q)`.
    Eta { p: usize, q: usize },
    /// Block diagonal with `half` copies of `[[0, 1], [-1, 0]]`.
    Omega { half: usize },
}

/// `eta(p, q) = diag(1, ..., 1, -1, ..., -1)`.
pub fn eta(p: usize, q: usize) -> Matrix<BigRational> {
    let mut m = linalg::identity(p + q);
    for i in p..p + q {
        m[i][i] = -BigRational::one();
    }
    m
}

pub fn omega(half: usize) -> Matrix<BigRational> {
    let mut m = linalg::zeros(2 * half, 2 * half);
    for k in 0..half {
        m[2 * k][2 * k + 1] = BigRational::one();
        m[2 * k + 1][2 * k] = -BigRational::one();
    }
    m
}

/// Working copy for congruence transformations `a = t s t^tr`.
struct Congruence {
    a: Matrix<BigRational>,
    t: Matrix<BigRational>,
}

impl Congruence {
    fn new(s: &Matrix<BigRational>) -> Self {
        Congruence { a: s.clone(), t: linalg::identity(s.len()) }
    }

    /// Row and column `i += f * (row and column j)`.
    fn add(&mut self, i: usize, j: usize, f: &BigRational) {
        let n = self.a.len();
        for k in 0..n {
            let v = self.a[j][k].clone() * f;
            self.a[i][k] += v;
        }
        for k in 0..n {
            let v = self.a[k][j].clone() * f;
            self.a[k][i] += v;
        }
        for k in 0..n {
            let v = self.t[j][k].clone() * f;
            self.t[i][k] += v;
        }
    }

    fn swap(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
        self.t.swap(i, j);
    }

    fn scale(&mut self, i: usize, f: &BigRational) {
        for x in self.a[i].iter_mut() {
            *x *= f;
        }
        for row in self.a.iter_mut() {
            row[i] *= f;
        }
        for x in self.t[i].iter_mut() {
            *x *= f;
        }
    }
}

/// Rational congruence diagonalisation of an invertible symmetric `s`: returns `(t, d)`
/// with `t s t^tr = diag(d)`; the signs of `d` give the class `eta(p, q)`.
pub fn diagonalize_symmetric(s: &Matrix<BigRational>) -> Result<(Matrix<BigRational>, Vec<BigRational>)> {
    let n = s.len();
    if *s != linalg::transpose(s) {
        return Err(Error::invalid("matrix is not symmetric"));
    }
    let mut c = Congruence::new(s);
    for k in 0..n {
        if c.a[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !c.a[j][j].is_zero()) {
                c.swap(k, j);
            } else if let Some(j) = (k + 1..n).find(|&j| !c.a[k][j].is_zero()) {
                c.add(k, j, &BigRational::one());
            } else {
                return Err(Error::NotInvertible);
            }
        }
        let p = c.a[k][k].clone();
        for i in k + 1..n {
            if !c.a[i][k].is_zero() {
                let f = -(c.a[i][k].clone() / &p);
                c.add(i, k, &f);
            }
        }
    }
    let d = (0..n).map(|i| c.a[i][i].clone()).collect();
    Ok((c.t, d))
}

/// Rational symplectic reduction of an invertible antisymmetric `s`: `t s t^tr = Omega`.
pub fn reduce_antisymmetric(s: &Matrix<BigRational>) -> Result<Matrix<BigRational>> {
    let n = s.len();
    let neg: Matrix<BigRational> = s.iter().map(|r| r.iter().map(|x| -x.clone()).collect()).collect();
    if neg != linalg::transpose(s) {
        return Err(Error::invalid("matrix is not antisymmetric"));
    }
    if n % 2 == 1 {
        return Err(Error::NotInvertible);
    }
    let mut c = Congruence::new(s);
    for k in (0..n).step_by(2) {
        let j = (k + 1..n).find(|&j| !c.a[k][j].is_zero()).ok_or(Error::NotInvertible)?;
        c.swap(k + 1, j);
        let f = c.a[k][k + 1].recip();
        c.scale(k + 1, &f);
        for i in k + 2..n {
            let (aik, aik1) = (c.a[i][k].clone(), c.a[i][k + 1].clone());
            if !aik1.is_zero() {
                c.add(i, k, &-aik1);
            }
            if !aik.is_zero() {
                c.add(i, k + 1, &aik);
            }
        }
    }
    debug_assert_eq!(c.a, omega(n / 2));
    Ok(c.t)
}

/// Class of `s` under `s -> t s t^tr` over the reals.
pub fn normal_form(s: &Matrix<BigRational>) -> Result<NormalForm> {
    if *s == linalg::transpose(s) {
        let (_, d) = diagonalize_symmetric(s)?;
        let p = d.iter().filter(|x| x.is_positive()).count();
        Ok(NormalForm::Eta { p, q: d.len() - p })
    } else {
        reduce_antisymmetric(s)?;
        Ok(NormalForm::Omega { half: s.len() / 2 })
    }
}
