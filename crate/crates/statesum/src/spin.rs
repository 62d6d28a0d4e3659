//! Spin state sums: crossings `lambda: A (x) A -> A (x) A`, the curl map, the cylinder
//! projectors and the punctured-torus elements `eta` and `chi`.
//!
//! `lambda(e_i (x) e_j) = sum lambda_{ij}^{kl} e_k (x) e_l`, stored sparsely per input pair.
//! `B = sum_alpha u_alpha (x) v_alpha` runs over [`Frobenius::b_pairs`].

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use cyclo::Scalar;

use crate::algebra::{Algebra, Element, Grading, Ring};
use crate::error::{Error, Result};
use crate::frobenius::Frobenius;
use crate::group::{AbelianGroup, FiniteGroup};
use crate::linalg::{self, Matrix};
use crate::report::Report;
use crate::spin_structure::Parity;

type Terms<K> = Vec<(usize, usize, K)>;
type Tensor2<K> = HashMap<(usize, usize), K>;
type Tensor3<K> = HashMap<(usize, usize, usize), K>;

/// A crossing on Frobenius data. Axioms are checked lazily and cached.
#[derive(Debug)]
pub struct CrossingData<K> {
    frobenius: Frobenius<K>,
    lambda: Vec<Terms<K>>,
    phi: Matrix<K>,
    axioms: OnceLock<std::result::Result<(), String>>,
    preferred: OnceLock<PreferredElements<K>>,
    eta_chi: OnceLock<std::result::Result<(Element<K>, Element<K>), String>>,
}

impl<K: Scalar> Clone for CrossingData<K> {
    fn clone(&self) -> Self {
        CrossingData {
            frobenius: self.frobenius.clone(),
            lambda: self.lambda.clone(),
            phi: self.phi.clone(),
            axioms: OnceLock::new(),
            preferred: OnceLock::new(),
            eta_chi: OnceLock::new(),
        }
    }
}

/// Outcome of [`verify_crossing_axioms`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingReport {
    pub axioms: Report,
    /// Whether the curl map is the identity (Reidemeister I holds).
    pub curl_free: bool,
}

/// `eta_1, eta_2, eta_3` differ by where the curl sits; `chi` carries curls on both loops.
#[derive(Debug, Clone, PartialEq)]
pub struct PreferredElements<K> {
    pub eta1: Element<K>,
    pub eta2: Element<K>,
    pub eta3: Element<K>,
    pub chi: Element<K>,
}

impl<K: Scalar> CrossingData<K> {
    /// Crossing from sparse components `lambda[i * n + j] = [(k, l, lambda_{ij}^{kl})]`.
    pub fn new(frobenius: Frobenius<K>, lambda: Vec<Terms<K>>) -> Result<Self> {
        let n = frobenius.dim();
        if lambda.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, got: lambda.len() });
        }
        if lambda.iter().flatten().any(|(k, l, _)| *k >= n || *l >= n) {
            return Err(Error::invalid("crossing component index out of range"));
        }
        let lambda = lambda.into_iter().map(compact2).collect();
        let mut x = CrossingData {
            frobenius,
            lambda,
            phi: Vec::new(),
            axioms: OnceLock::new(),
            preferred: OnceLock::new(),
            eta_chi: OnceLock::new(),
        };
        x.phi = x.right_curl();
        Ok(x)
    }

    /// Crossing from a dense array indexed `((i * n + j) * n + k) * n + l`.
    pub fn from_dense(frobenius: Frobenius<K>, dense: &[K]) -> Result<Self> {
        let n = frobenius.dim();
        if dense.len() != n * n * n * n {
            return Err(Error::DimensionMismatch { expected: n * n * n * n, got: dense.len() });
        }
        let lambda = (0..n * n)
            .map(|ij| {
                (0..n * n)
                    .filter(|kl| !dense[ij * n * n + kl].is_zero())
                    .map(|kl| (kl / n, kl % n, dense[ij * n * n + kl].clone()))
                    .collect()
            })
            .collect();
        CrossingData::new(frobenius, lambda)
    }

    /// `a (x) b -> b (x) a`.
    pub fn canonical(frobenius: Frobenius<K>) -> Self {
        let n = frobenius.dim();
        let lambda = (0..n * n).map(|ij| vec![(ij % n, ij / n, K::one())]).collect();
        CrossingData::new(frobenius, lambda).expect("swap is well formed")
    }

    /// Crossing on `A1 (+) A2`: each summand keeps its crossing, mixed pairs are swapped.
    pub fn direct_sum(x1: &CrossingData<K>, x2: &CrossingData<K>) -> Result<Self> {
        let (f1, f2) = (&x1.frobenius, &x2.frobenius);
        if f1.r() != f2.r() {
            return Err(Error::invalid("direct sum needs equal face amplitudes R"));
        }
        let algebra = Arc::new(Algebra::direct_sum(f1.algebra(), f2.algebra()));
        let mut eps = f1.eps().to_vec();
        eps.extend(f2.eps().iter().cloned());
        let f = Frobenius::new(algebra, eps, f1.r().clone())?;
        let (d1, d2) = (f1.dim(), f2.dim());
        let n = d1 + d2;
        let mut lambda = vec![Vec::new(); n * n];
        for i in 0..n {
            for j in 0..n {
                lambda[i * n + j] = match (i < d1, j < d1) {
                    (true, true) => x1.lambda[i * d1 + j].clone(),
                    (false, false) => x2.lambda[(i - d1) * d2 + (j - d1)]
                        .iter()
                        .map(|(k, l, v)| (k + d1, l + d1, v.clone()))
                        .collect(),
                    _ => vec![(j, i, K::one())],
                };
            }
        }
        CrossingData::new(f, lambda)
    }

    pub fn frobenius(&self) -> &Frobenius<K> {
        &self.frobenius
    }

    pub fn dim(&self) -> usize {
        self.frobenius.dim()
    }

    /// Nonzero components of `lambda(e_i (x) e_j)`.
    pub fn terms(&self, i: usize, j: usize) -> &[(usize, usize, K)] {
        &self.lambda[i * self.dim() + j]
    }

    pub fn component(&self, i: usize, j: usize, k: usize, l: usize) -> K {
        self.terms(i, j).iter().find(|(a, b, _)| *a == k && *b == l).map_or_else(K::zero, |t| t.2.clone())
    }

    /// All nonzero components as `(i, j, k, l, value)`, in index order.
    pub fn sparse_components(&self) -> Vec<(usize, usize, usize, usize, K)> {
        let n = self.dim();
        let mut out = Vec::new();
        for ij in 0..n * n {
            for (k, l, v) in &self.lambda[ij] {
                out.push((ij / n, ij % n, *k, *l, v.clone()));
            }
        }
        out
    }

    /// Curl map `phi`; row `a` holds `phi(e_a)`.
    pub fn curl_map(&self) -> &Matrix<K> {
        &self.phi
    }

    pub fn apply_phi(&self, x: &[K]) -> Element<K> {
        linalg::vec_mat(x, &self.phi)
    }

    /// `phi(e_a) = B^{mn} lambda_{am}^{pq} B_{qn} e_p`.
    fn right_curl(&self) -> Matrix<K> {
        let n = self.dim();
        let binv = self.frobenius.binv();
        let mut phi = linalg::zeros(n, n);
        for (a, row) in phi.iter_mut().enumerate() {
            for (m, nn, bmn) in self.frobenius.b_pairs() {
                for (p, q, v) in self.terms(a, *m) {
                    let w = &binv[*q][*nn];
                    if !w.is_zero() {
                        row[*p] += &(bmn.clone() * v.clone() * w.clone());
                    }
                }
            }
        }
        phi
    }

    /// The mirror curl `e_a -> B^{mn} lambda_{na}^{pq} B_{mp} e_q`; equal to `phi` iff the
    /// ribbon condition holds.
    pub fn left_curl_map(&self) -> Matrix<K> {
        let n = self.dim();
        let binv = self.frobenius.binv();
        let mut phi = linalg::zeros(n, n);
        for (a, row) in phi.iter_mut().enumerate() {
            for (m, nn, bmn) in self.frobenius.b_pairs() {
                for (p, q, v) in self.terms(*nn, a) {
                    let w = &binv[*m][*p];
                    if !w.is_zero() {
                        row[*q] += &(bmn.clone() * v.clone() * w.clone());
                    }
                }
            }
        }
        phi
    }

    pub fn is_curl_free(&self) -> bool {
        self.phi == linalg::identity(self.dim())
    }

    /// Runs the full axiom check once; later calls reuse the result.
    pub fn require_axioms(&self) -> Result<()> {
        self.axioms
            .get_or_init(|| {
                let rep = verify_crossing_axioms(self);
                let first = rep.axioms.failures().next().map(|c| format!("{} {}", c.name, c.detail).trim().to_string());
                match first {
                    None => Ok(()),
                    Some(m) => Err(m),
                }
            })
            .clone()
            .map_err(Error::Axiom)
    }

    /// `m(lambda(e_y (x) w))`.
    fn lambda_product(&self, y: usize, w: &[K]) -> Element<K> {
        let a = self.frobenius.algebra();
        let mut out = a.zero();
        for (x, wx) in w.iter().enumerate() {
            if wx.is_zero() {
                continue;
            }
            for (k, l, v) in self.terms(y, x) {
                for (d, c) in a.basis_product(*k, *l) {
                    out[*d] += &(wx.clone() * v.clone() * c.clone());
                }
            }
        }
        out
    }

    /// Matrix of `p`: row `a` holds `sum m(lambda(e_a (x) u_alpha)) v_alpha`.
    pub fn projector_p(&self) -> Matrix<K> {
        let n = self.dim();
        (0..n).map(|i| self.cylinder(i, false)).collect()
    }

    /// Matrix of `n`: as `p` with the curl on the loop leg of `B`.
    pub fn projector_n(&self) -> Matrix<K> {
        let n = self.dim();
        (0..n).map(|i| self.cylinder(i, true)).collect()
    }

    fn cylinder(&self, i: usize, curl: bool) -> Element<K> {
        let a = self.frobenius.algebra();
        let mut out = a.zero();
        for (u, v, c) in self.frobenius.b_pairs() {
            let w = if curl { self.phi[*u].clone() } else { a.basis(*u) };
            let t = a.mul(&self.lambda_product(i, &w), &a.basis(*v));
            axpy(&mut out, c, &t);
        }
        out
    }

    /// Basis of `Z_lambda(A) = {a : b a = m lambda(b (x) a) for all b}`.
    pub fn z_lambda(&self) -> Vec<Element<K>> {
        self.twisted_center(false)
    }

    /// Basis of `{a : b a = m lambda(phi(b) (x) a) for all b}`.
    pub fn z_bar_lambda(&self) -> Vec<Element<K>> {
        self.twisted_center(true)
    }

    fn twisted_center(&self, curl: bool) -> Vec<Element<K>> {
        let a = self.frobenius.algebra();
        let n = self.dim();
        let mut rows = Vec::new();
        for b in 0..n {
            let left = if curl { self.phi[b].clone() } else { a.basis(b) };
            let mut eqs: Matrix<K> = linalg::zeros(n, n);
            for x in 0..n {
                for (d, c) in a.basis_product(b, x) {
                    eqs[*d][x] += c;
                }
                for (y, ly) in left.iter().enumerate() {
                    if ly.is_zero() {
                        continue;
                    }
                    for (k, l, v) in self.terms(y, x) {
                        for (d, c) in a.basis_product(*k, *l) {
                            eqs[*d][x] -= &(ly.clone() * v.clone() * c.clone());
                        }
                    }
                }
            }
            rows.extend(eqs.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())));
        }
        linalg::nullspace(&rows, n)
    }

    /// `sum_{alpha,beta} L_alpha m(lambda(v_alpha (x) W_beta)) v_beta` with `L = phi(u)` when
    /// `outer` and `W = phi(u)` when `inner`.
    fn handle_element(&self, outer: bool, inner: bool) -> Element<K> {
        let a = self.frobenius.algebra();
        let lift = |u: usize| if outer { self.phi[u].clone() } else { a.basis(u) };
        self.handle_with(self.frobenius.b_pairs(), &lift, &|x, y| a.mul(x, y), inner)
    }

    /// Handle contraction with the outer copy of `B` replaced by `outer_pairs`, the outer leg
    /// lifted by `outer_lift` and joined to the rest by `join`.
    pub(crate) fn handle_with(
        &self,
        outer_pairs: &[(usize, usize, K)],
        outer_lift: &dyn Fn(usize) -> Element<K>,
        join: &dyn Fn(&Element<K>, &Element<K>) -> Element<K>,
        inner: bool,
    ) -> Element<K> {
        let a = self.frobenius.algebra();
        let n = self.dim();
        let pairs = self.frobenius.b_pairs();
        let lift = |u: usize| if inner { self.phi[u].clone() } else { a.basis(u) };
        // t[y] = sum_beta c_beta m(lambda(e_y (x) W_beta)) v_beta
        let mut t: Vec<Option<Element<K>>> = vec![None; n];
        let mut out = a.zero();
        for (u, v, c) in outer_pairs {
            if t[*v].is_none() {
                let mut acc = a.zero();
                for (ub, vb, cb) in pairs {
                    let m = self.lambda_product(*v, &lift(*ub));
                    axpy(&mut acc, cb, &a.mul(&m, &a.basis(*vb)));
                }
                t[*v] = Some(acc);
            }
            let term = join(&outer_lift(*u), t[*v].as_ref().expect("filled"));
            axpy(&mut out, c, &term);
        }
        out
    }

    /// The four punctured-torus contractions, without any axiom check.
    pub fn preferred_elements(&self) -> &PreferredElements<K> {
        self.preferred.get_or_init(|| PreferredElements {
            eta1: self.handle_element(false, false),
            eta2: self.handle_element(true, false),
            eta3: self.handle_element(false, true),
            chi: self.handle_element(true, true),
        })
    }

    /// `(eta, chi)` after checking the axioms, `eta_1 = eta_2 = eta_3`, centrality,
    /// membership in `Z_lambda(A)` and `eta^2 = chi^2`.
    pub fn eta_chi(&self) -> Result<(Element<K>, Element<K>)> {
        self.require_axioms()?;
        self.eta_chi.get_or_init(|| self.checked_eta_chi()).clone().map_err(Error::Axiom)
    }

    fn checked_eta_chi(&self) -> std::result::Result<(Element<K>, Element<K>), String> {
        let pe = self.preferred_elements();
        let a = self.frobenius.algebra();
        if pe.eta1 != pe.eta2 || pe.eta1 != pe.eta3 {
            return Err("eta_1, eta_2, eta_3 disagree".into());
        }
        for (name, x) in [("eta", &pe.eta1), ("chi", &pe.chi)] {
            if !a.is_central(x) {
                return Err(format!("{name} is not central"));
            }
            if !self.in_z_lambda(x) {
                return Err(format!("{name} is not in Z_lambda(A)"));
            }
        }
        if a.mul(&pe.eta1, &pe.eta1) != a.mul(&pe.chi, &pe.chi) {
            return Err("eta^2 != chi^2".into());
        }
        Ok((pe.eta1.clone(), pe.chi.clone()))
    }

    fn in_z_lambda(&self, x: &[K]) -> bool {
        let a = self.frobenius.algebra();
        (0..self.dim()).all(|b| a.mul(&a.basis(b), x) == self.lambda_product(b, x))
    }

    /// `R eps(eta^g)` (even) or `R eps(chi eta^{g-1})` (odd), `g >= 1`.
    pub fn spin_invariant(&self, g: usize, parity: Parity) -> Result<K> {
        if g == 0 {
            return Err(Error::invalid("spin invariant needs genus >= 1; the sphere has one spin structure"));
        }
        self.frobenius.require_special()?;
        let (eta, chi) = self.eta_chi()?;
        let a = self.frobenius.algebra();
        let x = match parity {
            Parity::Even => a.pow(&eta, g),
            Parity::Odd => a.mul(&chi, &a.pow(&eta, g - 1)),
        };
        Ok(self.frobenius.r().clone() * self.frobenius.epsilon(&x))
    }

    /// Evaluates the standard diagram with curls `(q(a_i), q(b_i))` on each handle; handle
    /// `i` contributes `eta_1, eta_2, eta_3` or `chi` for flags `00, 10, 01, 11`.
    pub fn spin_invariant_with_curls(&self, curl_flags: &[u8]) -> Result<K> {
        if curl_flags.is_empty() || !curl_flags.len().is_multiple_of(2) || curl_flags.iter().any(|&b| b > 1) {
            return Err(Error::invalid("curl flags must be 2g bits with g >= 1"));
        }
        self.frobenius.require_special()?;
        self.require_axioms()?;
        let pe = self.preferred_elements();
        let a = self.frobenius.algebra();
        let mut x = a.one();
        for h in curl_flags.chunks(2) {
            let e = match (h[0], h[1]) {
                (0, 0) => &pe.eta1,
                (1, 0) => &pe.eta2,
                (0, 1) => &pe.eta3,
                _ => &pe.chi,
            };
            x = a.mul(&x, e);
        }
        Ok(self.frobenius.r().clone() * self.frobenius.epsilon(&x))
    }
}

/// Checks the crossing axioms exhaustively on basis tensors, together with the derived
/// properties of the curl map.
pub fn verify_crossing_axioms<K: Scalar>(x: &CrossingData<K>) -> CrossingReport {
    let f = &x.frobenius;
    let a = f.algebra();
    let n = x.dim();
    let binv = f.binv();
    let mut rep = Report::new();

    // compatibility with B: sum_p lambda_{cb}^{pq} B_{ap} = sum_p lambda_{ac}^{qp} B_{pb}
    let mut bad = None;
    'b1: for c in 0..n {
        let mut lhs: Tensor3<K> = HashMap::new();
        let mut rhs: Tensor3<K> = HashMap::new();
        for b in 0..n {
            for (p, q, v) in x.terms(c, b) {
                for aa in 0..n {
                    if !binv[aa][*p].is_zero() {
                        add3(&mut lhs, (aa, b, *q), v.clone() * binv[aa][*p].clone());
                    }
                }
            }
        }
        for aa in 0..n {
            for (q, p, v) in x.terms(aa, c) {
                for (b, w) in binv[*p].iter().enumerate() {
                    if !w.is_zero() {
                        add3(&mut rhs, (aa, b, *q), v.clone() * w.clone());
                    }
                }
            }
        }
        if let Some(k) = first_difference(&lhs, &rhs) {
            bad = Some(format!("at (a, b, c, q) = ({}, {}, {c}, {})", k.0, k.1, k.2));
            break 'b1;
        }
    }
    rep.push("compatibility with B", bad.is_none(), bad.unwrap_or_default());

    // compatibility with C, both orientations of the multiplication vertex
    let mut bad = None;
    'b2: for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut lhs: Tensor2<K> = HashMap::new();
                for (d, c) in a.basis_product(j, k) {
                    for (p, q, v) in x.terms(i, *d) {
                        add2(&mut lhs, (*p, *q), c.clone() * v.clone());
                    }
                }
                let t = x.l23(&x.l12(&single3(i, j, k)));
                let rhs = m12(a, &t);
                if first_difference(&lhs, &rhs).is_some() {
                    bad = Some(format!("lambda(a (x) bc) at basis ({i}, {j}, {k})"));
                    break 'b2;
                }
                let mut lhs: Tensor2<K> = HashMap::new();
                for (d, c) in a.basis_product(i, j) {
                    for (p, q, v) in x.terms(*d, k) {
                        add2(&mut lhs, (*p, *q), c.clone() * v.clone());
                    }
                }
                let t = x.l12(&x.l23(&single3(i, j, k)));
                let rhs = m23(a, &t);
                if first_difference(&lhs, &rhs).is_some() {
                    bad = Some(format!("lambda(ab (x) c) at basis ({i}, {j}, {k})"));
                    break 'b2;
                }
            }
        }
    }
    rep.push("compatibility with C", bad.is_none(), bad.unwrap_or_default());

    let mut bad = None;
    'r2: for i in 0..n {
        for j in 0..n {
            let mut t: Tensor2<K> = HashMap::new();
            for (m, nn, v) in x.terms(i, j) {
                for (k, l, w) in x.terms(*m, *nn) {
                    add2(&mut t, (*k, *l), v.clone() * w.clone());
                }
            }
            let mut id = HashMap::new();
            id.insert((i, j), K::one());
            if first_difference(&t, &id).is_some() {
                bad = Some(format!("at basis ({i}, {j})"));
                break 'r2;
            }
        }
    }
    rep.push("Reidemeister II", bad.is_none(), bad.unwrap_or_default());

    let mut bad = None;
    'r3: for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let s = single3(i, j, k);
                let lhs = x.l12(&x.l23(&x.l12(&s)));
                let rhs = x.l23(&x.l12(&x.l23(&s)));
                if first_difference(&lhs, &rhs).is_some() {
                    bad = Some(format!("at basis ({i}, {j}, {k})"));
                    break 'r3;
                }
            }
        }
    }
    rep.push("Reidemeister III", bad.is_none(), bad.unwrap_or_default());

    let ribbon = x.left_curl_map() == x.phi;
    rep.push("the ribbon condition", ribbon, if ribbon { "" } else { "left and right curls differ" });

    let phi = &x.phi;
    let id = linalg::identity(n);
    rep.push("phi^2 = id", linalg::mat_mul(phi, phi) == id, "");
    let mut auto = x.apply_phi(a.unit()) == a.unit();
    for i in 0..n {
        for j in 0..n {
            if !auto {
                break;
            }
            let lhs = x.apply_phi(&a.mul(&a.basis(i), &a.basis(j)));
            auto = lhs == a.mul(&phi[i], &phi[j]);
        }
    }
    rep.push("phi automorphism", auto, "");
    let bb = linalg::mat_mul(&linalg::mat_mul(&linalg::transpose(phi), f.b()), phi);
    rep.push("phi compatible with B", &bb == f.b(), "");
    let mut slide = true;
    'c4: for i in 0..n {
        for j in 0..n {
            // lambda(phi(a) (x) b) = (id (x) phi) lambda(a (x) b), and the mirror statement
            let mut l1: Tensor2<K> = HashMap::new();
            for (y, py) in phi[i].iter().enumerate() {
                if !py.is_zero() {
                    for (k, l, v) in x.terms(y, j) {
                        add2(&mut l1, (*k, *l), py.clone() * v.clone());
                    }
                }
            }
            let mut l2: Tensor2<K> = HashMap::new();
            for (y, py) in phi[j].iter().enumerate() {
                if !py.is_zero() {
                    for (k, l, v) in x.terms(i, y) {
                        add2(&mut l2, (*k, *l), py.clone() * v.clone());
                    }
                }
            }
            let mut r1: Tensor2<K> = HashMap::new();
            let mut r2: Tensor2<K> = HashMap::new();
            for (k, l, v) in x.terms(i, j) {
                for (z, pz) in phi[*l].iter().enumerate() {
                    if !pz.is_zero() {
                        add2(&mut r1, (*k, z), v.clone() * pz.clone());
                    }
                }
                for (z, pz) in phi[*k].iter().enumerate() {
                    if !pz.is_zero() {
                        add2(&mut r2, (z, *l), v.clone() * pz.clone());
                    }
                }
            }
            if first_difference(&l1, &r1).is_some() || first_difference(&l2, &r2).is_some() {
                slide = false;
                break 'c4;
            }
        }
    }
    rep.push("phi compatible with lambda", slide, "");
    CrossingReport { axioms: rep, curl_free: x.is_curl_free() }
}

impl<K: Scalar> CrossingData<K> {
    fn l12(&self, t: &Tensor3<K>) -> Tensor3<K> {
        let mut out = HashMap::new();
        for ((i, j, k), c) in t {
            for (p, q, v) in self.terms(*i, *j) {
                add3(&mut out, (*p, *q, *k), c.clone() * v.clone());
            }
        }
        out
    }

    fn l23(&self, t: &Tensor3<K>) -> Tensor3<K> {
        let mut out = HashMap::new();
        for ((i, j, k), c) in t {
            for (p, q, v) in self.terms(*j, *k) {
                add3(&mut out, (*i, *p, *q), c.clone() * v.clone());
            }
        }
        out
    }
}

fn single3<K: Scalar>(i: usize, j: usize, k: usize) -> Tensor3<K> {
    let mut t = HashMap::new();
    t.insert((i, j, k), K::one());
    t
}

fn m12<K: Scalar>(a: &Algebra<K>, t: &Tensor3<K>) -> Tensor2<K> {
    let mut out = HashMap::new();
    for ((i, j, k), c) in t {
        for (d, m) in a.basis_product(*i, *j) {
            add2(&mut out, (*d, *k), c.clone() * m.clone());
        }
    }
    out
}

fn m23<K: Scalar>(a: &Algebra<K>, t: &Tensor3<K>) -> Tensor2<K> {
    let mut out = HashMap::new();
    for ((i, j, k), c) in t {
        for (d, m) in a.basis_product(*j, *k) {
            add2(&mut out, (*i, *d), c.clone() * m.clone());
        }
    }
    out
}

fn add2<K: Scalar>(t: &mut Tensor2<K>, key: (usize, usize), v: K) {
    *t.entry(key).or_insert_with(K::zero) += &v;
}

fn add3<K: Scalar>(t: &mut Tensor3<K>, key: (usize, usize, usize), v: K) {
    *t.entry(key).or_insert_with(K::zero) += &v;
}

fn first_difference<Q: Copy + Eq + std::hash::Hash, K: Scalar>(x: &HashMap<Q, K>, y: &HashMap<Q, K>) -> Option<Q> {
    let zero = K::zero();
    for (k, v) in x {
        if y.get(k).unwrap_or(&zero) != v {
            return Some(*k);
        }
    }
    for (k, v) in y {
        if x.get(k).unwrap_or(&zero) != v {
            return Some(*k);
        }
    }
    None
}

fn compact2<K: Scalar>(terms: Terms<K>) -> Terms<K> {
    let mut out: Terms<K> = Vec::new();
    for (k, l, v) in terms {
        match out.iter_mut().find(|(a, b, _)| *a == k && *b == l) {
            Some(slot) => slot.2 += &v,
            None => out.push((k, l, v)),
        }
    }
    out.retain(|t| !t.2.is_zero());
    out.sort_by_key(|t| (t.0, t.1));
    out
}

fn axpy<K: Scalar>(out: &mut [K], c: &K, x: &[K]) {
    for (o, xi) in out.iter_mut().zip(x) {
        if !xi.is_zero() {
            *o += &(c.clone() * xi.clone());
        }
    }
}

// ---------------------------------------------------------------------------
// Bicharacters

/// Bicharacter on `Z_{n1} x ... x Z_{np}`, given by its values on generator pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct Bicharacter<K> {
    group: AbelianGroup,
    values: Matrix<K>,
}

impl<K: Scalar> Bicharacter<K> {
    /// Checks `v_ij^{n_i} = v_ij^{n_j} = 1` and `v_ij v_ji = 1`.
    pub fn new(group: AbelianGroup, values: Matrix<K>) -> Result<Self> {
        let p = group.rank();
        if values.len() != p || values.iter().any(|r| r.len() != p) {
            return Err(Error::DimensionMismatch { expected: p, got: values.len() });
        }
        let orders = group.orders();
        for i in 0..p {
            for j in 0..p {
                let v = &values[i][j];
                for n in [orders[i], orders[j]] {
                    if v.powi(n as i64) != Some(K::one()) {
                        return Err(Error::invalid(format!(
                            "bicharacter value ({i}, {j}) is not a root of unity of order dividing {n}"
                        )));
                    }
                }
                if v.clone() * values[j][i].clone() != K::one() {
                    return Err(Error::invalid(format!("bicharacter values ({i}, {j}) and ({j}, {i}) are not inverse")));
                }
            }
        }
        Ok(Bicharacter { group, values })
    }

    pub fn trivial(group: AbelianGroup) -> Self {
        let p = group.rank();
        Bicharacter { group, values: vec![vec![K::one(); p]; p] }
    }

    /// Diagonal `v_ii = signs[i]`, off-diagonal `1`.
    pub fn from_signs(group: AbelianGroup, signs: &[i64]) -> Result<Self> {
        let p = group.rank();
        if signs.len() != p {
            return Err(Error::DimensionMismatch { expected: p, got: signs.len() });
        }
        let mut values = vec![vec![K::one(); p]; p];
        for (i, &s) in signs.iter().enumerate() {
            values[i][i] = K::from_i64(s);
        }
        Bicharacter::new(group, values)
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn values(&self) -> &Matrix<K> {
        &self.values
    }

    /// `lambda~(h, l) = prod_{ij} v_ij^{alpha_i beta_j}` for group indices `h`, `l`.
    pub fn eval(&self, h: usize, l: usize) -> K {
        let (x, y) = (self.group.residues(h), self.group.residues(l));
        let orders = self.group.orders();
        let mut acc = K::one();
        for (i, xi) in x.iter().enumerate() {
            for (j, yj) in y.iter().enumerate() {
                let g = gcd(orders[i], orders[j]) as u64;
                let e = (*xi as u64 * *yj as u64) % g;
                if e != 0 {
                    acc = acc * self.values[i][j].powi(e as i64).expect("root of unity");
                }
            }
        }
        acc
    }

    /// Indices `i` with `lambda~(r_i, r_i) = -1`.
    pub fn sign_set(&self) -> Vec<usize> {
        let m1 = -K::one();
        (0..self.group.rank()).filter(|&i| self.values[i][i] == m1).collect()
    }

    /// `N_I = prod_{i not in I} n_i`.
    pub fn n_i(&self) -> u64 {
        let set = self.sign_set();
        self.group.orders().iter().enumerate().filter(|(i, _)| !set.contains(i)).map(|(_, &n)| n as u64).product()
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().flatten().all(|v| v.is_one())
    }
}

impl<K: Scalar> std::fmt::Display for Bicharacter<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let orders: Vec<String> = self.group.orders().iter().map(|n| format!("Z{n}")).collect();
        let rows: Vec<String> = self
            .values
            .iter()
            .map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", "))
            .collect();
        let g = if orders.is_empty() { "1".to_string() } else { orders.join("x") };
        write!(f, "{g}[{}]", rows.join("; "))
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub const DEFAULT_MAX_ORDER: u32 = 12;

fn check_orders(group: &AbelianGroup, max_order: u32) -> Result<()> {
    if let Some(n) = group.orders().iter().find(|&&n| n > max_order) {
        return Err(Error::invalid(format!("cyclic factor Z{n} exceeds the bound {max_order}")));
    }
    Ok(())
}

fn root<K: Scalar>(order: u32, power: i64) -> Result<K> {
    K::root_of_unity(order, power).ok_or(Error::MissingRootOfUnity(order))
}

/// All bicharacters on `group` (multiplicative, root-of-unity generator values,
/// `lambda~(r_i, r_j) lambda~(r_j, r_i) = 1`).
pub fn bicharacters<K: Scalar>(group: &AbelianGroup, max_order: u32) -> Result<Vec<Bicharacter<K>>> {
    check_orders(group, max_order)?;
    let p = group.rank();
    let orders = group.orders();
    // per free slot: list of (value at (i,j), value at (j,i))
    let mut slots: Vec<((usize, usize), Vec<(K, K)>)> = Vec::new();
    for i in 0..p {
        let mut diag = vec![(K::one(), K::one())];
        if orders[i].is_multiple_of(2) {
            diag.push((-K::one(), -K::one()));
        }
        slots.push(((i, i), diag));
        for j in i + 1..p {
            let g = gcd(orders[i], orders[j]);
            let opts = (0..g as i64).map(|e| Ok((root(g, e)?, root(g, -e)?))).collect::<Result<Vec<_>>>()?;
            slots.push(((i, j), opts));
        }
    }
    let mut out = Vec::new();
    for choice in cartesian(&slots.iter().map(|s| s.1.len()).collect::<Vec<_>>()) {
        let mut values = vec![vec![K::one(); p]; p];
        for (((i, j), opts), &c) in slots.iter().zip(&choice) {
            values[*i][*j] = opts[c].0.clone();
            values[*j][*i] = opts[c].1.clone();
        }
        out.push(Bicharacter::new(group.clone(), values)?);
    }
    Ok(out)
}

/// Generator-value matrices satisfying multiplicativity and the order conditions only
/// (no reciprocity), e.g. three on `Z_3`.
pub fn bicharacters_e12<K: Scalar>(group: &AbelianGroup, max_order: u32) -> Result<Vec<Matrix<K>>> {
    check_orders(group, max_order)?;
    let p = group.rank();
    let orders = group.orders();
    let mut opts: Vec<Vec<K>> = Vec::new();
    for i in 0..p {
        for j in 0..p {
            let g = gcd(orders[i], orders[j]);
            opts.push((0..g as i64).map(|e| root(g, e)).collect::<Result<Vec<_>>>()?);
        }
    }
    let mut out = Vec::new();
    for choice in cartesian(&opts.iter().map(Vec::len).collect::<Vec<_>>()) {
        let flat: Vec<K> = choice.iter().zip(&opts).map(|(&c, o)| o[c].clone()).collect();
        out.push(flat.chunks(p.max(1)).take(p).map(|r| r.to_vec()).collect());
    }
    Ok(out)
}

fn cartesian(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &s in sizes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..s).map(move |c| {
                    let mut v = prefix.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
    }
    out
}

/// `lambda(a_h (x) b_j) = lambda~(h, j) b_j (x) a_h` on a graded Frobenius algebra.
///
/// Requires, for every grade pair `(h, j)` that is not orthogonal under `eps`,
/// `lambda~(h, l) = lambda~(l, j)` for all `l`, and `sigma^2 = id`.
pub fn bicharacter_crossing<K: Scalar>(f: &Frobenius<K>, bc: &Bicharacter<K>) -> Result<CrossingData<K>> {
    let grading = f.algebra().grading().ok_or_else(|| Error::Grading("algebra carries no grading".into()))?;
    if grading.group.orders() != bc.group().orders() {
        return Err(Error::Grading(format!(
            "grading group {:?} does not match bicharacter group {:?}",
            grading.group.orders(),
            bc.group().orders()
        )));
    }
    if !f.sigma_squared_is_identity() {
        return Err(Error::Axiom("D2: Nakayama automorphism does not square to the identity".into()));
    }
    let order = grading.group.order();
    let table: Vec<Vec<K>> = (0..order).map(|h| (0..order).map(|l| bc.eval(h, l)).collect()).collect();
    let n = f.dim();
    let g = &grading.grades;
    let mut seen = vec![vec![false; order]; order];
    for a in 0..n {
        for b in 0..n {
            let (h, j) = (g[a], g[b]);
            if f.binv()[a][b].is_zero() || seen[h][j] {
                continue;
            }
            seen[h][j] = true;
            if (0..order).any(|l| table[h][l] != table[l][j]) {
                return Err(Error::Axiom(format!(
                    "D1: grades {:?} and {:?} pair nontrivially but lambda~({:?}, l) != lambda~(l, {:?})",
                    grading.group.residues(h),
                    grading.group.residues(j),
                    grading.group.residues(h),
                    grading.group.residues(j)
                )));
            }
        }
    }
    let lambda = (0..n * n).map(|ij| vec![(ij % n, ij / n, table[g[ij / n]][g[ij % n]].clone())]).collect();
    let x = CrossingData::new(f.clone(), lambda)?;
    x.require_axioms()?;
    Ok(x)
}

/// `Z_2` grading of `M_n(k)` into block-diagonal (`p + (n-p)`) and block-off-diagonal parts.
pub fn block_grading(n: usize, p: usize) -> Result<Grading> {
    if p == 0 || p >= n {
        return Err(Error::invalid("block grading needs 0 < p < n"));
    }
    let grades = (0..n * n).map(|i| usize::from((i / n < p) != (i % n < p))).collect();
    Ok(Grading { group: AbelianGroup::cyclic(2), grades })
}

/// Grading of `M_n(C_R)` by `Z_2` (`{1, i}`) or `M_n(H_R)` by `Z_2 x Z_2` (`{1, i, j, k}`).
pub fn division_ring_grading(n: usize, ring: Ring) -> Result<Grading> {
    let nn = n * n;
    match ring {
        Ring::CR => Ok(Grading { group: AbelianGroup::cyclic(2), grades: (0..2 * nn).map(|i| i / nn).collect() }),
        Ring::HR => {
            let group = AbelianGroup::new(vec![2, 2])?;
            // i -> r_1, j -> r_2, k -> r_1 r_2
            let of_unit = [group.index(&[0, 0]), group.index(&[1, 0]), group.index(&[0, 1]), group.index(&[1, 1])];
            Ok(Grading { group, grades: (0..4 * nn).map(|i| of_unit[i / nn]).collect() })
        }
        Ring::R | Ring::C => Err(Error::invalid("only C_R and H_R blocks carry a division-ring grading")),
    }
}

// ---------------------------------------------------------------------------
// Non-abelian group algebras

/// `H = Z_c x K` with `Z_c` central, generated by `generators` (element, order), and
/// `complement` the elements of `K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CenterDecomposition {
    pub generators: Vec<(usize, u32)>,
    pub complement: Vec<usize>,
}

struct Decomposed {
    center: AbelianGroup,
    /// Center grade of each element of `H`.
    grades: Vec<usize>,
    complement: FiniteGroup,
}

fn decompose(h: &FiniteGroup, dec: &CenterDecomposition) -> Result<Decomposed> {
    let bad = |m: String| Error::InconsistentCenterDecomposition(m);
    let center = h.center();
    for &(g, n) in &dec.generators {
        if g >= h.order() || !center.contains(&g) {
            return Err(bad(format!("generator {g} is not central")));
        }
        if h.element_order(g) != n as usize {
            return Err(bad(format!("generator {g} has order {}, not {n}", h.element_order(g))));
        }
    }
    let zc = AbelianGroup::new(dec.generators.iter().map(|g| g.1).collect())?;
    let mut zc_elems = Vec::with_capacity(zc.order());
    for idx in 0..zc.order() {
        let mut x = h.unit();
        for (r, (g, _)) in zc.residues(idx).iter().zip(&dec.generators) {
            for _ in 0..*r {
                x = h.mul(x, *g);
            }
        }
        zc_elems.push(x);
    }
    let mut sorted = zc_elems.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != zc_elems.len() {
        return Err(bad("central generators are not independent".into()));
    }
    let (complement, _) = h.subgroup(&dec.complement).map_err(|_| bad("complement is not a subgroup".into()))?;
    if zc.order() * complement.order() != h.order() {
        return Err(bad(format!(
            "|Z_c| |K| = {} x {} does not equal |H| = {}",
            zc.order(),
            complement.order(),
            h.order()
        )));
    }
    let mut grades = vec![usize::MAX; h.order()];
    for (zi, &z) in zc_elems.iter().enumerate() {
        for &k in &dec.complement {
            let x = h.mul(z, k);
            if grades[x] != usize::MAX {
                return Err(bad("Z_c and K intersect nontrivially".into()));
            }
            grades[x] = zi;
        }
    }
    Ok(Decomposed { center: zc, grades, complement })
}

/// `kH` graded by the central factor `Z_c` of `H = Z_c x K`.
pub fn center_graded_algebra<K: Scalar>(h: &FiniteGroup, dec: &CenterDecomposition) -> Result<Algebra<K>> {
    let d = decompose(h, dec)?;
    Algebra::group(h).with_grading(Grading { group: d.center, grades: d.grades })
}

/// Closed form for `kH`, `H = Z_c x K`, with the bicharacter `-1` on the central
/// generators listed in `i_choice` and trivial otherwise:
/// `P(s)^{|I|} R^{2-2g} 2^{-|I| g} |Z_c| sum_{j in Irr K} (dim j)^{2-2g}`.
///
/// A sign generator of order `n` contributes `sum_{a,b} (-1)^{ab} = n^2 / 2` to `eta`, hence
/// the `2^{-|I| g}`; for `n = 2` this is `N_I^g |Z_c|^{-g}`.
pub fn non_abelian_group_invariant<K: Scalar>(
    h: &FiniteGroup,
    dec: &CenterDecomposition,
    i_choice: &[usize],
    r: &K,
    g: usize,
    parity: Parity,
) -> Result<K> {
    let d = decompose(h, dec)?;
    let orders = d.center.orders();
    let mut seen = vec![false; orders.len()];
    for &i in i_choice {
        if i >= orders.len() || seen[i] {
            return Err(Error::invalid(format!("invalid central generator index {i}")));
        }
        if orders[i] % 2 != 0 {
            return Err(Error::invalid(format!("generator {i} has odd order; lambda~(r, r) = -1 impossible")));
        }
        seen[i] = true;
    }
    // sum_j (dim j)^{2-2g} is the invariant of kK with R = 1
    let kk = Arc::new(Algebra::<K>::group(&d.complement));
    let dims = Frobenius::group_form(kk, K::one())?.closed_genus_invariant(g)?;
    let g = g as i64;
    let sign = if i_choice.len() % 2 == 1 && parity == Parity::Odd { -K::one() } else { K::one() };
    let pw = |x: K, e: i64| x.powi(e).ok_or(Error::ZeroAmplitude);
    Ok(sign
        * pw(r.clone(), 2 - 2 * g)?
        * pw(K::from_i64(2), -(i_choice.len() as i64) * g)?
        * K::from_i64(d.center.order() as i64)
        * dims)
}

// ---------------------------------------------------------------------------
// Crossing search on kZ_n

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// Direct sums of abelian group algebras with all bicharacters per summand.
    Ansatz,
    /// Exhaustive solution of the axioms over `{0} u mu_4`.
    Full,
}

/// One invariant-level family of crossings.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossingFamily<K> {
    pub description: String,
    pub eta: Element<K>,
    pub chi: Element<K>,
    /// `(Z(even), Z(odd))` for `g = 1, 2, 3` at `R = 1`.
    pub invariants: Vec<(K, K)>,
    pub distinguishes_parity: bool,
}

pub const ANSATZ_MAX: usize = 12;
pub const FULL_MAX: usize = 2;
const SEARCH_GENERA: usize = 3;

/// Crossings on `kZ_n` with the group form at `R = 1`, deduplicated by their
/// partition functions; parity-blind families first, then by description.
pub fn crossing_search_cyclic<K: Scalar>(n: usize, mode: SearchMode, cap: u128) -> Result<Vec<CrossingFamily<K>>> {
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    let mut fams = match mode {
        SearchMode::Ansatz => {
            if n > ANSATZ_MAX {
                return Err(Error::invalid(format!("ansatz search supports n <= {ANSATZ_MAX}")));
            }
            ansatz_search(n, cap)?
        }
        SearchMode::Full => {
            if n > FULL_MAX {
                return Err(Error::invalid(format!("full search supports n <= {FULL_MAX}")));
            }
            full_search(n, cap)?
        }
    };
    fams.sort_by(|a, b| (a.distinguishes_parity, &a.description).cmp(&(b.distinguishes_parity, &b.description)));
    Ok(fams)
}

fn invariants_of<K: Scalar>(x: &CrossingData<K>) -> Result<Vec<(K, K)>> {
    (1..=SEARCH_GENERA)
        .map(|g| Ok((x.spin_invariant(g, Parity::Even)?, x.spin_invariant(g, Parity::Odd)?)))
        .collect()
}

fn family<K: Scalar>(description: String, eta: Element<K>, chi: Element<K>, invariants: Vec<(K, K)>) -> CrossingFamily<K> {
    let distinguishes_parity = invariants.iter().any(|(e, o)| e != o);
    CrossingFamily { description, eta, chi, invariants, distinguishes_parity }
}

fn push_unique<K: Scalar>(out: &mut Vec<CrossingFamily<K>>, f: CrossingFamily<K>) {
    if !out.iter().any(|g| g.invariants == f.invariants) {
        out.push(f);
    }
}

/// Abelian groups of order `m` as invariant-factor lists `d_1 | d_2 | ...`.
pub fn abelian_groups_of_order(m: usize) -> Vec<AbelianGroup> {
    fn rec(rem: usize, prev: usize, cur: &mut Vec<u32>, out: &mut Vec<AbelianGroup>) {
        if rem == 1 {
            out.push(AbelianGroup::new(cur.clone()).expect("positive orders"));
            return;
        }
        for d in (2..=rem).filter(|d| d % prev == 0 && rem.is_multiple_of(*d)) {
            cur.push(d as u32);
            rec(rem / d, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, 1, &mut Vec::new(), &mut out);
    out
}

fn ansatz_search<K: Scalar>(n: usize, cap: u128) -> Result<Vec<CrossingFamily<K>>> {
    // invariant-distinct summand options per size
    let mut options: Vec<Vec<CrossingFamily<K>>> = vec![Vec::new(); n + 1];
    for (m, opts) in options.iter_mut().enumerate().skip(1) {
        for group in abelian_groups_of_order(m) {
            let f = Frobenius::group_form(Arc::new(Algebra::abelian(&group)), K::one())?;
            for bc in bicharacters::<K>(&group, DEFAULT_MAX_ORDER)? {
                let x = bicharacter_crossing(&f, &bc)?;
                let (eta, chi) = x.eta_chi()?;
                push_unique(opts, family(format!("{bc}"), eta, chi, invariants_of(&x)?));
            }
        }
    }
    let mut out = Vec::new();
    let mut work: u128 = 0;
    let mut stack: Vec<(usize, usize)> = Vec::new();
    ansatz_combine(n, n, usize::MAX, &options, &mut stack, &mut out, &mut work, cap)?;
    Ok(out)
}

/// Multisets of summands with sizes summing to `rem`, non-increasing in `(size, option)`.
#[allow(clippy::too_many_arguments)]
fn ansatz_combine<K: Scalar>(
    rem: usize,
    max_size: usize,
    max_opt: usize,
    options: &[Vec<CrossingFamily<K>>],
    stack: &mut Vec<(usize, usize)>,
    out: &mut Vec<CrossingFamily<K>>,
    work: &mut u128,
    cap: u128,
) -> Result<()> {
    if rem == 0 {
        *work += 1;
        if *work > cap {
            return Err(Error::ResourceCap { needed: *work, cap });
        }
        let parts: Vec<&CrossingFamily<K>> = stack.iter().map(|&(m, o)| &options[m][o]).collect();
        let mut inv = parts[0].invariants.clone();
        for p in &parts[1..] {
            for (acc, v) in inv.iter_mut().zip(&p.invariants) {
                acc.0 += &v.0;
                acc.1 += &v.1;
            }
        }
        let description = parts.iter().map(|p| p.description.clone()).collect::<Vec<_>>().join(" + ");
        let eta = parts.iter().flat_map(|p| p.eta.iter().cloned()).collect();
        let chi = parts.iter().flat_map(|p| p.chi.iter().cloned()).collect();
        push_unique(out, family(description, eta, chi, inv));
        return Ok(());
    }
    for m in (1..=rem.min(max_size)).rev() {
        let top = if m == max_size { max_opt } else { options[m].len() - 1 };
        for o in (0..=top.min(options[m].len() - 1)).rev() {
            stack.push((m, o));
            ansatz_combine(rem - m, m, o, options, stack, out, work, cap)?;
            stack.pop();
        }
    }
    Ok(())
}

fn full_search<K: Scalar>(n: usize, cap: u128) -> Result<Vec<CrossingFamily<K>>> {
    let f = Frobenius::group_form(Arc::new(Algebra::cyclic(n)), K::one())?;
    let idx = |i: usize, j: usize, k: usize, l: usize| ((i * n + j) * n + k) * n + l;
    let neg = |x: usize| (n - x) % n;
    let total = n * n * n * n;
    // orbits of (i, j, k, l) -> (-k, i, l, -j)
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let (a, b) = (find(&mut parent, idx(i, j, k, l)), find(&mut parent, idx(neg(k), i, l, neg(j))));
                    parent[a] = b;
                }
            }
        }
    }
    let mut fixed: HashMap<usize, K> = HashMap::new();
    for j in 0..n {
        for k in 0..n {
            for l in 0..n {
                let v = if l == 0 && j == k { K::one() } else { K::zero() };
                let r = find(&mut parent, idx(0, j, k, l));
                if let Some(w) = fixed.get(&r) {
                    if *w != v {
                        return Ok(Vec::new());
                    }
                }
                fixed.insert(r, v);
            }
        }
    }
    let mut free: Vec<usize> = (0..total).map(|x| find(&mut parent, x)).filter(|r| !fixed.contains_key(r)).collect();
    free.sort_unstable();
    free.dedup();
    let mut cands = vec![K::zero()];
    for e in 0..4 {
        if let Some(z) = K::root_of_unity(4, e) {
            if !cands.contains(&z) {
                cands.push(z);
            }
        }
    }
    let leaves = (cands.len() as u128).checked_pow(free.len() as u32).unwrap_or(u128::MAX);
    if leaves > cap {
        return Err(Error::ResourceCap { needed: leaves, cap });
    }
    let roots: Vec<usize> = (0..total).map(|x| find(&mut parent, x)).collect();
    let mut out = Vec::new();
    let mut assign: HashMap<usize, K> = fixed;
    full_backtrack(&f, n, &roots, &free, &cands, &mut assign, &mut out)?;
    Ok(out)
}

fn full_backtrack<K: Scalar>(
    f: &Frobenius<K>,
    n: usize,
    roots: &[usize],
    free: &[usize],
    cands: &[K],
    assign: &mut HashMap<usize, K>,
    out: &mut Vec<CrossingFamily<K>>,
) -> Result<()> {
    if !partial_r2_ok(n, roots, assign) {
        return Ok(());
    }
    let Some((&slot, rest)) = free.split_first() else {
        let dense: Vec<K> = roots.iter().map(|r| assign[r].clone()).collect();
        let x = CrossingData::from_dense(f.clone(), &dense)?;
        if x.require_axioms().is_err() {
            return Ok(());
        }
        let (eta, chi) = x.eta_chi()?;
        let mut free_vals: Vec<String> = Vec::new();
        for (pos, r) in roots.iter().enumerate() {
            if !assign[r].is_zero() && pos / (n * n * n) != 0 {
                let (i, j, k, l) = (pos / (n * n * n), pos / (n * n) % n, pos / n % n, pos % n);
                free_vals.push(format!("l[{i}{j}][{k}{l}]={}", assign[r]));
            }
        }
        let description = format!("kZ{n} full: {}", if free_vals.is_empty() { "-".into() } else { free_vals.join(" ") });
        push_unique(out, family(description, eta, chi, invariants_of(&x)?));
        return Ok(());
    };
    for c in cands {
        assign.insert(slot, c.clone());
        full_backtrack(f, n, roots, rest, cands, assign, out)?;
    }
    assign.remove(&slot);
    Ok(())
}

/// Reidemeister II on every input pair whose needed components are already assigned.
fn partial_r2_ok<K: Scalar>(n: usize, roots: &[usize], assign: &HashMap<usize, K>) -> bool {
    let get = |i: usize, j: usize, k: usize, l: usize| assign.get(&roots[((i * n + j) * n + k) * n + l]);
    for i in 0..n {
        for j in 0..n {
            let mut ok = true;
            let mut row = Vec::new();
            for m in 0..n {
                for q in 0..n {
                    match get(i, j, m, q) {
                        Some(v) => row.push((m, q, v.clone())),
                        None => ok = false,
                    }
                }
            }
            if !ok {
                continue;
            }
            for k in 0..n {
                for l in 0..n {
                    let mut acc = K::zero();
                    let mut complete = true;
                    for (m, q, v) in &row {
                        if v.is_zero() {
                            continue;
                        }
                        match get(*m, *q, k, l) {
                            Some(w) => acc += &(v.clone() * w.clone()),
                            None => complete = false,
                        }
                    }
                    let want = if i == k && j == l { K::one() } else { K::zero() };
                    if complete && acc != want {
                        return false;
                    }
                }
            }
        }
    }
    true
}
