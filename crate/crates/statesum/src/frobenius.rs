//! Frobenius data `(A, eps, R)` and the tensors derived from it.

use std::sync::{Arc, OnceLock};

use cyclo::Scalar;

use crate::algebra::{Algebra, BlockKind, Element};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::report::Report;

/// Standard choices of Frobenius form.
#[derive(Debug, Clone, PartialEq)]
pub enum Family<K> {
    /// `x = R (+) |D_i| n_i 1_i` on matrix blocks, `R|H| delta` on group blocks.
    Fhk,
    /// `eps(a) = (Re) Tr(x a)` through the defining matrix representation.
    FromElement(Element<K>),
    /// `eps(h) = R |H| delta_{h,1}`.
    Group,
}

#[derive(Debug)]
pub struct Frobenius<K> {
    algebra: Arc<Algebra<K>>,
    eps: Vec<K>,
    r: K,
    binv: Matrix<K>,
    b: Matrix<K>,
    b_pairs: Vec<(usize, usize, K)>,
    sigma: Matrix<K>,
    c3: OnceLock<Vec<K>>,
}

impl<K: Scalar> Clone for Frobenius<K> {
    fn clone(&self) -> Self {
        Frobenius {
            algebra: self.algebra.clone(),
            eps: self.eps.clone(),
            r: self.r.clone(),
            binv: self.binv.clone(),
            b: self.b.clone(),
            b_pairs: self.b_pairs.clone(),
            sigma: self.sigma.clone(),
            c3: OnceLock::new(),
        }
    }
}

impl<K: Scalar> Frobenius<K> {
    /// Frobenius data from the covector `eps(e_a)`. Specialness is not required here.
    pub fn new(algebra: Arc<Algebra<K>>, eps: Vec<K>, r: K) -> Result<Self> {
        let n = algebra.dim();
        if eps.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: eps.len() });
        }
        if r.is_zero() {
            return Err(Error::ZeroAmplitude);
        }
        let mut binv = linalg::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                let mut v = K::zero();
                for (d, c) in algebra.basis_product(a, b) {
                    v += &(c.clone() * eps[*d].clone());
                }
                binv[a][b] = v;
            }
        }
        let b = linalg::inverse(&binv)
            .map_err(|k| Error::Degenerate { kernel: k.iter().map(|x| x.to_string()).collect() })?;
        let mut b_pairs = Vec::new();
        for (i, row) in b.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    b_pairs.push((i, j, x.clone()));
                }
            }
        }
        // sigma_b^d = sum_a Binv[a][b] B[a][d]
        let sigma = linalg::mat_mul(&linalg::transpose(&binv), &b);
        Ok(Frobenius { algebra, eps, r, binv, b, b_pairs, sigma, c3: OnceLock::new() })
    }

    pub fn standard(algebra: Arc<Algebra<K>>, family: &Family<K>, r: K) -> Result<Self> {
        match family {
            Family::Fhk => Frobenius::fhk(algebra, r),
            Family::Group => Frobenius::group_form(algebra, r),
            Family::FromElement(x) => Frobenius::from_element(algebra, x, r),
        }
    }

    pub fn fhk(algebra: Arc<Algebra<K>>, r: K) -> Result<Self> {
        let mut eps = algebra.zero();
        for b in algebra.blocks() {
            match &b.kind {
                BlockKind::Matrix { n, ring } => {
                    let v = r.clone() * K::from_i64((ring.units() * n) as i64);
                    for l in 0..*n {
                        eps[b.offset + Algebra::<K>::matrix_unit_index(*n, 0, l, l)] = v.clone();
                    }
                }
                BlockKind::Pauli { n } => eps[b.offset] = r.clone() * K::from_i64((n * n) as i64),
                BlockKind::Group { group } => {
                    eps[b.offset + group.unit()] = r.clone() * K::from_i64(group.order() as i64);
                }
                BlockKind::Raw => {
                    return Err(Error::invalid("fhk form needs matrix or group blocks; supply eps directly"))
                }
            }
        }
        Frobenius::new(algebra, eps, r)
    }

    pub fn group_form(algebra: Arc<Algebra<K>>, r: K) -> Result<Self> {
        if algebra.blocks().iter().any(|b| !matches!(b.kind, BlockKind::Group { .. })) {
            return Err(Error::invalid("group form needs a group algebra (or sums of them)"));
        }
        Frobenius::fhk(algebra, r)
    }

    /// `eps(a) = Tr(x a)` (real part on real division-ring blocks). Requires `x`
    /// invertible and the result special.
    pub fn from_element(algebra: Arc<Algebra<K>>, x: &[K], r: K) -> Result<Self> {
        if x.len() != algebra.dim() {
            return Err(Error::DimensionMismatch { expected: algebra.dim(), got: x.len() });
        }
        let tr = algebra
            .trace_covector()
            .ok_or_else(|| Error::invalid("from_element needs matrix blocks with a defining representation"))?;
        if linalg::inverse(&algebra.left_matrix(x)).is_err() {
            return Err(Error::NotInvertible);
        }
        let eps: Vec<K> = (0..algebra.dim())
            .map(|a| {
                let xa = algebra.mul(x, &algebra.basis(a));
                dot(&tr, &xa)
            })
            .collect();
        let f = Frobenius::new(algebra, eps, r)?;
        f.require_special()?;
        Ok(f)
    }

    pub fn algebra(&self) -> &Arc<Algebra<K>> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn eps(&self) -> &[K] {
        &self.eps
    }

    pub fn r(&self) -> &K {
        &self.r
    }

    /// `B^{-1}_{ab} = eps(e_a e_b)`.
    pub fn binv(&self) -> &Matrix<K> {
        &self.binv
    }

    /// `B^{ab}`, inverse of `binv`.
    pub fn b(&self) -> &Matrix<K> {
        &self.b
    }

    /// Nonzero entries `(a, b, B^{ab})`, i.e. `B = sum u_alpha (x) v_alpha`.
    pub fn b_pairs(&self) -> &[(usize, usize, K)] {
        &self.b_pairs
    }

    pub fn epsilon(&self, x: &[K]) -> K {
        dot(&self.eps, x)
    }

    pub fn form(&self, x: &[K], y: &[K]) -> K {
        self.epsilon(&self.algebra.mul(x, y))
    }

    /// `C_{abc} = eps((e_a e_b) e_c)` as a flat array indexed `(a*n + b)*n + c`.
    pub fn c3(&self) -> &[K] {
        self.c3.get_or_init(|| {
            let n = self.dim();
            let mut out = vec![K::zero(); n * n * n];
            for a in 0..n {
                for b in 0..n {
                    for (d, c) in self.algebra.basis_product(a, b) {
                        for e in 0..n {
                            if !self.binv[*d][e].is_zero() {
                                out[(a * n + b) * n + e] += &(c.clone() * self.binv[*d][e].clone());
                            }
                        }
                    }
                }
            }
            out
        })
    }

    /// `m(B) = sum B^{ab} e_a e_b`.
    pub fn m_of_b(&self) -> Element<K> {
        let mut out = self.algebra.zero();
        for (a, b, x) in &self.b_pairs {
            for (d, c) in self.algebra.basis_product(*a, *b) {
                out[*d] += &(x.clone() * c.clone());
            }
        }
        out
    }

    pub fn is_special(&self) -> bool {
        let v: Element<K> = self.m_of_b().into_iter().map(|x| x * self.r.clone()).collect();
        v == self.algebra.one()
    }

    pub fn require_special(&self) -> Result<()> {
        if self.is_special() {
            Ok(())
        } else {
            Err(Error::NotSpecial)
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.binv == linalg::transpose(&self.binv)
    }

    /// Nakayama automorphism: row `b` holds the coordinates of `sigma(e_b)`.
    pub fn nakayama(&self) -> &Matrix<K> {
        &self.sigma
    }

    pub fn apply_sigma(&self, x: &[K]) -> Element<K> {
        linalg::vec_mat(x, &self.sigma)
    }

    pub fn nakayama_inverse(&self) -> Matrix<K> {
        linalg::inverse(&self.sigma).expect("Nakayama map is invertible")
    }

    /// `eps(xy) = eps(sigma(y) x)` on basis pairs and `sigma` multiplicative.
    pub fn check_nakayama(&self) -> Report {
        let n = self.dim();
        let a = &self.algebra;
        let mut rep = Report::new();
        let mut law = true;
        let mut auto = true;
        for x in 0..n {
            for y in 0..n {
                let (ex, ey) = (a.basis(x), a.basis(y));
                if self.form(&ex, &ey) != self.form(&self.apply_sigma(&ey), &ex) {
                    law = false;
                }
                let lhs = self.apply_sigma(&a.mul(&ex, &ey));
                let rhs = a.mul(&self.apply_sigma(&ex), &self.apply_sigma(&ey));
                if lhs != rhs {
                    auto = false;
                }
            }
        }
        rep.push("nakayama law", law, "");
        rep.push("nakayama automorphism", auto, "");
        rep
    }

    pub fn sigma_squared_is_identity(&self) -> bool {
        linalg::mat_mul(&self.sigma, &self.sigma) == linalg::identity(self.dim())
    }

    /// `B_{ca} B^{cb} = B_{ac} B^{bc}` for all `a, b`.
    pub fn spherical_condition(&self) -> bool {
        let lhs = linalg::mat_mul(&linalg::transpose(&self.binv), &self.b);
        let rhs = linalg::mat_mul(&self.binv, &linalg::transpose(&self.b));
        lhs == rhs
    }

    /// Whether the space splits into vectors with `B^{-1} v = B^{-1,tr} v` and `B^{-1} v = -B^{-1,tr} v`.
    pub fn binv_splits(&self) -> bool {
        let n = self.dim();
        let t = linalg::transpose(&self.binv);
        let diff: Matrix<K> = (0..n)
            .map(|i| (0..n).map(|j| self.binv[i][j].clone() - t[i][j].clone()).collect())
            .collect();
        let sum: Matrix<K> = (0..n)
            .map(|i| (0..n).map(|j| self.binv[i][j].clone() + t[i][j].clone()).collect())
            .collect();
        let plus = linalg::nullspace(&diff, n);
        let minus = linalg::nullspace(&sum, n);
        let mut all = plus.clone();
        all.extend(minus.iter().cloned());
        plus.len() + minus.len() == n && linalg::rank(&all) == n
    }

    /// `C_{abc} B^{cd} = B^{de} C_{eab}` exhaustively.
    pub fn check_bc_equation(&self) -> bool {
        let n = self.dim();
        let c = self.c3();
        for a in 0..n {
            for b in 0..n {
                for d in 0..n {
                    let mut lhs = K::zero();
                    let mut rhs = K::zero();
                    for e in 0..n {
                        let x = &c[(a * n + b) * n + e];
                        if !x.is_zero() && !self.b[e][d].is_zero() {
                            lhs += &(x.clone() * self.b[e][d].clone());
                        }
                        let y = &c[(e * n + a) * n + b];
                        if !y.is_zero() && !self.b[d][e].is_zero() {
                            rhs += &(self.b[d][e].clone() * y.clone());
                        }
                    }
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `C_{abc} = C_{bca}` exhaustively.
    pub fn c_is_cyclic(&self) -> bool {
        let n = self.dim();
        let c = self.c3();
        (0..n).all(|a| (0..n).all(|b| (0..n).all(|d| c[(a * n + b) * n + d] == c[(b * n + d) * n + a])))
    }

    /// `sum_beta u_beta x v_beta`.
    pub fn sandwich(&self, x: &[K]) -> Element<K> {
        let a = &self.algebra;
        let mut out = a.zero();
        for (u, v, c) in &self.b_pairs {
            let t = a.mul(&a.mul(&a.basis(*u), x), &a.basis(*v));
            for (o, ti) in out.iter_mut().zip(t) {
                if !ti.is_zero() {
                    *o += &(c.clone() * ti);
                }
            }
        }
        out
    }

    /// Punctured-torus element `z = sum u_alpha u_beta v_alpha v_beta`.
    pub fn z_element(&self) -> Element<K> {
        let a = &self.algebra;
        let mut out = a.zero();
        for (u, v, c) in &self.b_pairs {
            // u_alpha * (sum_beta u_beta v_alpha v_beta)
            let inner = self.sandwich(&a.basis(*v));
            let t = a.mul(&a.basis(*u), &inner);
            for (o, ti) in out.iter_mut().zip(t) {
                if !ti.is_zero() {
                    *o += &(c.clone() * ti);
                }
            }
        }
        out
    }

    /// `R eps(z^g)`; `R eps(1)` for the sphere.
    pub fn closed_genus_invariant(&self, g: usize) -> Result<K> {
        self.require_special()?;
        let z = self.z_element();
        Ok(self.r.clone() * self.epsilon(&self.algebra.pow(&z, g)))
    }

    /// Separability idempotent `t = R sum B^{ab} e_a (x) e_b`: `x t = t x` and `m(t) = 1`.
    pub fn verify_separability(&self) -> Report {
        let a = &self.algebra;
        let n = self.dim();
        let mut rep = Report::new();
        let mut bimodule = true;
        for x in 0..n {
            // left: sum B^{ab} (e_x e_a) (x) e_b ; right: sum B^{ab} e_a (x) (e_b e_x)
            let mut left = vec![vec![K::zero(); n]; n];
            let mut right = vec![vec![K::zero(); n]; n];
            for (p, q, c) in &self.b_pairs {
                for (d, k) in a.basis_product(x, *p) {
                    left[*d][*q] += &(c.clone() * k.clone());
                }
                for (d, k) in a.basis_product(*q, x) {
                    right[*p][*d] += &(c.clone() * k.clone());
                }
            }
            if left != right {
                bimodule = false;
            }
        }
        rep.push("x t = t x", bimodule, "");
        rep.push("m(t) = 1", self.is_special(), "");
        rep
    }
}

pub(crate) fn dot<K: Scalar>(a: &[K], b: &[K]) -> K {
    let mut acc = K::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += &(x.clone() * y.clone());
        }
    }
    acc
}
