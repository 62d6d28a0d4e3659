//! Spherical defect lines: A-A bimodules with pairings, and their insertion into a spin
//! state sum as one generating loop.

use cyclo::Scalar;

use crate::algebra::Element;
use crate::error::{Error, Result};
use crate::frobenius::Frobenius;
use crate::linalg::{self, Matrix};
use crate::report::Report;
use crate::spin::CrossingData;
use crate::spin_structure::Parity;

/// Bimodule `V` with basis `e_alpha`, actions given on basis vectors and pairings
/// `P^{-1}, Q^{-1}: V x V -> K`.
#[derive(Debug, Clone)]
pub struct BimoduleData<K: Scalar> {
    frobenius: Frobenius<K>,
    dim_v: usize,
    /// `left[a]` row `alpha`: coordinates of `e_a . e_alpha`.
    left: Vec<Matrix<K>>,
    /// `right[a]` row `alpha`: coordinates of `e_alpha . e_a`.
    right: Vec<Matrix<K>>,
    p_inv: Matrix<K>,
    q_inv: Matrix<K>,
    p: Matrix<K>,
    q: Matrix<K>,
    sign: K,
    regular: bool,
}

impl<K: Scalar> BimoduleData<K> {
    pub fn new(
        frobenius: Frobenius<K>,
        left: Vec<Matrix<K>>,
        right: Vec<Matrix<K>>,
        p_inv: Matrix<K>,
        q_inv: Matrix<K>,
        sign: K,
    ) -> Result<Self> {
        let n = frobenius.dim();
        let dim_v = p_inv.len();
        if dim_v == 0 {
            return Err(Error::invalid("bimodule must be nonzero"));
        }
        for acts in [&left, &right] {
            if acts.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: acts.len() });
            }
            for m in acts {
                check_square(m, dim_v)?;
            }
        }
        check_square(&p_inv, dim_v)?;
        check_square(&q_inv, dim_v)?;
        if sign != K::one() && sign != -K::one() {
            return Err(Error::invalid("defect sign must be +1 or -1"));
        }
        let p = linalg::inverse(&p_inv).map_err(|_| Error::invalid("P^{-1} is degenerate"))?;
        let q = linalg::inverse(&q_inv).map_err(|_| Error::invalid("Q^{-1} is degenerate"))?;
        Ok(BimoduleData { frobenius, dim_v, left, right, p_inv, q_inv, p, q, sign, regular: false })
    }

    /// `V = A` with multiplication as both actions and `P^{-1} = Q^{-1} = B^{-1}`.
    /// Needs `sigma^2 = id`.
    pub fn regular(frobenius: Frobenius<K>, sign: K) -> Result<Self> {
        if !frobenius.sigma_squared_is_identity() {
            return Err(Error::Axiom("regular defect needs sigma^2 = id".into()));
        }
        let mut v = Self::regular_unchecked(frobenius, sign)?;
        v.regular = true;
        Ok(v)
    }

    /// The regular bimodule data without the `sigma^2 = id` requirement; only useful for
    /// [`verify_bimodule`].
    pub fn regular_unchecked(frobenius: Frobenius<K>, sign: K) -> Result<Self> {
        let a = frobenius.algebra().clone();
        let n = a.dim();
        let left = (0..n).map(|x| (0..n).map(|y| a.mul(&a.basis(x), &a.basis(y))).collect()).collect();
        let right = (0..n).map(|x| (0..n).map(|y| a.mul(&a.basis(y), &a.basis(x))).collect()).collect();
        let binv = frobenius.binv().clone();
        Self::new(frobenius, left, right, binv.clone(), binv, sign)
    }

    pub fn frobenius(&self) -> &Frobenius<K> {
        &self.frobenius
    }

    pub fn dim(&self) -> usize {
        self.dim_v
    }

    pub fn sign(&self) -> &K {
        &self.sign
    }

    pub fn is_regular(&self) -> bool {
        self.regular
    }

    /// `x . v` for `x` in `A`.
    pub fn act_left(&self, x: &[K], v: &[K]) -> Vec<K> {
        self.act(&self.left, x, v)
    }

    /// `v . x` for `x` in `A`.
    pub fn act_right(&self, v: &[K], x: &[K]) -> Vec<K> {
        self.act(&self.right, x, v)
    }

    fn act(&self, table: &[Matrix<K>], x: &[K], v: &[K]) -> Vec<K> {
        let mut out = vec![K::zero(); self.dim_v];
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (i, c) in linalg::vec_mat(v, &table[a]).into_iter().enumerate() {
                out[i] += &(c * xa.clone());
            }
        }
        out
    }

    fn pair(m: &Matrix<K>, v: &[K], w: &[K]) -> K {
        linalg::vec_mat(v, m).iter().zip(w).fold(K::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
    }

    /// `mu(v, w) = sum Q^{-1}(v, w . e_a) B^{ab} e_b`.
    pub fn mu(&self, v: &[K], w: &[K]) -> Element<K> {
        let f = &self.frobenius;
        let alg = f.algebra();
        let n = f.dim();
        let coeffs: Vec<K> = (0..n).map(|a| Self::pair(&self.q_inv, v, &self.act_right(w, &alg.basis(a)))).collect();
        linalg::vec_mat(&coeffs, f.b())
    }
}

fn check_square<K>(m: &Matrix<K>, d: usize) -> Result<()> {
    if m.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: m.len() });
    }
    if let Some(r) = m.iter().find(|r| r.len() != d) {
        return Err(Error::DimensionMismatch { expected: d, got: r.len() });
    }
    Ok(())
}

fn unit_vec<K: Scalar>(d: usize, i: usize) -> Vec<K> {
    let mut v = vec![K::zero(); d];
    v[i] = K::one();
    v
}

/// Bimodule axioms, pairing invariance and the spherical defect condition.
pub fn verify_bimodule<K: Scalar>(v: &BimoduleData<K>) -> Report {
    let f = &v.frobenius;
    let alg = f.algebra();
    let n = f.dim();
    let d = v.dim_v;
    let sigma_inv = f.nakayama_inverse();
    let mut rep = Report::new();

    let (mut left_assoc, mut right_assoc, mut compat) = (true, true, true);
    let (mut units, mut p_inv_ok, mut q_inv_ok) = (true, true, true);
    let one = alg.one();
    for i in 0..d {
        let e = unit_vec::<K>(d, i);
        if v.act_left(&one, &e) != e || v.act_right(&e, &one) != e {
            units = false;
        }
    }
    for x in 0..n {
        let ex = alg.basis(x);
        for y in 0..n {
            let ey = alg.basis(y);
            let xy = alg.mul(&ex, &ey);
            // sigma(e_x) . v . e_y and e_y . w . sigma^{-1}(e_x) as matrices on V
            let sx = f.apply_sigma(&ex);
            let sinv_x = linalg::vec_mat(&ex, &sigma_inv);
            let mut m_p = Vec::with_capacity(d);
            let mut n_p = Vec::with_capacity(d);
            let mut m_q = Vec::with_capacity(d);
            let mut n_q = Vec::with_capacity(d);
            for i in 0..d {
                let e = unit_vec::<K>(d, i);
                if left_assoc && v.act_left(&ex, &v.act_left(&ey, &e)) != v.act_left(&xy, &e) {
                    left_assoc = false;
                }
                if right_assoc && v.act_right(&v.act_right(&e, &ex), &ey) != v.act_right(&e, &xy) {
                    right_assoc = false;
                }
                if compat && v.act_left(&ex, &v.act_right(&e, &ey)) != v.act_right(&v.act_left(&ex, &e), &ey) {
                    compat = false;
                }
                m_p.push(v.act_right(&v.act_left(&sx, &e), &ey));
                n_p.push(v.act_right(&v.act_left(&ey, &e), &ex));
                m_q.push(v.act_right(&v.act_left(&ex, &e), &ey));
                n_q.push(v.act_right(&v.act_left(&ey, &e), &sinv_x));
            }
            // P^{-1}(sigma(x) v y, w) = P^{-1}(v, y w x)
            if p_inv_ok && linalg::mat_mul(&m_p, &v.p_inv) != linalg::mat_mul(&v.p_inv, &linalg::transpose(&n_p)) {
                p_inv_ok = false;
            }
            // Q^{-1}(x v y, w) = Q^{-1}(v, y w sigma^{-1}(x))
            if q_inv_ok && linalg::mat_mul(&m_q, &v.q_inv) != linalg::mat_mul(&v.q_inv, &linalg::transpose(&n_q)) {
                q_inv_ok = false;
            }
        }
    }
    rep.push("left action associative", left_assoc, "");
    rep.push("right action associative", right_assoc, "");
    rep.push("actions commute", compat, "");
    rep.push("unit acts trivially", units, "");
    rep.push("P^{-1} invariance", p_inv_ok, "");
    rep.push("Q^{-1} invariance", q_inv_ok, "");

    let lhs = linalg::mat_mul(&linalg::transpose(&v.q), &v.p_inv);
    let rhs = linalg::mat_mul(&v.p, &linalg::transpose(&v.q_inv));
    rep.push("spherical defect condition", lhs == rhs, "");
    rep
}

/// `(eta_V, rho_V, chi_V)`: one loop of the handle carries the defect, the other the algebra;
/// `rho_V` has a curl on the defect loop and `chi_V` curls on both.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefectElements<K> {
    pub eta: Element<K>,
    pub rho: Element<K>,
    pub chi: Element<K>,
}

pub fn defect_preferred_elements<K: Scalar>(v: &BimoduleData<K>, x: &CrossingData<K>) -> Result<DefectElements<K>> {
    let f = x.frobenius();
    if f.dim() != v.frobenius.dim() || f.eps() != v.frobenius.eps() || f.r() != v.frobenius.r() {
        return Err(Error::invalid("defect and crossing use different Frobenius data"));
    }
    if !v.regular {
        return Err(Error::invalid("defect handle elements are implemented for the regular bimodule only"));
    }
    let rep = verify_bimodule(v);
    if let Some(c) = rep.failures().next() {
        return Err(Error::Axiom(format!("defect: {}", c.name)));
    }
    let (eta, chi) = x.eta_chi()?;
    let alg = f.algebra();
    let d = v.dim_v;

    let pairs: Vec<(usize, usize, K)> = (0..d)
        .flat_map(|i| (0..d).map(move |j| (i, j)))
        .filter(|&(i, j)| !v.p[i][j].is_zero())
        .map(|(i, j)| (i, j, v.p[i][j].clone()))
        .collect();
    let join = |l: &Element<K>, r: &Element<K>| v.mu(l, r);
    let plain = |u: usize| unit_vec::<K>(d, u);
    let curled = |u: usize| x.apply_phi(&unit_vec::<K>(d, u)).into_iter().map(|c| c * v.sign.clone()).collect();

    let out = DefectElements {
        eta: x.handle_with(&pairs, &plain, &join, false),
        rho: x.handle_with(&pairs, &curled, &join, false),
        chi: x.handle_with(&pairs, &curled, &join, true),
    };
    let scaled = |e: &Element<K>| -> Element<K> { e.iter().map(|c| c.clone() * v.sign.clone()).collect() };
    if out.eta != eta || out.rho != scaled(&eta) || out.chi != scaled(&chi) {
        return Err(Error::Axiom("defect handle elements disagree with the closed-loop elements".into()));
    }
    if ![&out.eta, &out.rho, &out.chi].iter().all(|e| alg.is_central(e)) {
        return Err(Error::Axiom("defect handle elements are not central".into()));
    }
    Ok(out)
}

/// Genus-`g` spin invariant with the defect on one generating loop of the first handle.
/// `loop_curls` is the number of curls (0 or 1) on that loop when the handle is even;
/// an odd first handle always uses `chi_V`.
pub fn generating_loop_invariant<K: Scalar>(
    v: &BimoduleData<K>,
    x: &CrossingData<K>,
    g: usize,
    parity: Parity,
    loop_curls: u8,
) -> Result<K> {
    if g == 0 {
        return Err(Error::invalid("a generating loop needs genus >= 1"));
    }
    if loop_curls > 1 {
        return Err(Error::invalid("loop curls must be 0 or 1"));
    }
    let f = x.frobenius();
    f.require_special()?;
    let de = defect_preferred_elements(v, x)?;
    let (eta, chi) = x.eta_chi()?;
    let alg = f.algebra();
    let odd = parity == Parity::Odd;
    let first = if odd && g == 1 {
        de.chi
    } else if loop_curls == 1 {
        de.rho
    } else {
        de.eta
    };
    let rest = if odd && g >= 2 { alg.mul(&chi, &alg.pow(&eta, g - 2)) } else { alg.pow(&eta, g - 1) };
    Ok(f.r().clone() * f.epsilon(&alg.mul(&first, &rest)))
}
