//! Finite-dimensional associative algebras given by structure constants.
//!
//! `e_a e_b = sum_d c[a][b][d] e_d`; constants are stored sparsely per basis pair.
//! Elements are plain coefficient vectors of length `dim`.

use cyclo::Scalar;

use crate::error::{Error, Result};
use crate::group::{quaternion_unit_mul, AbelianGroup, FiniteGroup};
use crate::linalg::{self, Matrix};

/// Division ring of a matrix block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ring {
    /// Real matrices.
    R,
    /// Complex numbers regarded as a real algebra, basis `{1, i}`.
    CR,
    /// Quaternions regarded as a real algebra, basis `{1, i, j, k}`.
    HR,
    /// Complex matrices over `Q(i)`.
    C,
}

impl Ring {
    /// Real dimension of the division ring (`1` for `C`, which is a ground-field block).
    pub fn units(self) -> usize {
        match self {
            Ring::R | Ring::C => 1,
            Ring::CR => 2,
            Ring::HR => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BlockKind {
    Matrix { n: usize, ring: Ring },
    /// `M_n(C)` in the clock-and-shift basis `X^a Y^b`.
    Pauli { n: usize },
    Group { group: FiniteGroup },
    Raw,
}

/// A two-sided ideal summand of the algebra with its own unit.
#[derive(Debug, Clone, PartialEq)]
pub struct Block<K> {
    pub kind: BlockKind,
    pub offset: usize,
    pub dim: usize,
    /// Unit of the block in local coordinates.
    pub unit: Vec<K>,
}

/// Grading by a finite abelian group: basis element `a` lies in `A_{grades[a]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grading {
    pub group: AbelianGroup,
    pub grades: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Algebra<K> {
    labels: Vec<String>,
    mult: Vec<Vec<Vec<(usize, K)>>>,
    unit: Vec<K>,
    grading: Option<Grading>,
    blocks: Vec<Block<K>>,
}

pub type Element<K> = Vec<K>;

impl<K: Scalar> Algebra<K> {
    /// Algebra from sparse structure constants `mult[a][b] = [(d, c_ab^d)]`. Not validated;
    /// call [`Algebra::validate`] (non-associative data is allowed for negative tests).
    pub fn from_structure(labels: Vec<String>, mult: Vec<Vec<Vec<(usize, K)>>>, unit: Vec<K>) -> Result<Self> {
        let dim = labels.len();
        if dim == 0 {
            return Err(Error::invalid("algebra must have positive dimension"));
        }
        if mult.len() != dim || mult.iter().any(|r| r.len() != dim) {
            return Err(Error::invalid("structure constants must be dim x dim"));
        }
        if mult.iter().flatten().flatten().any(|(d, _)| *d >= dim) {
            return Err(Error::invalid("structure constant index out of range"));
        }
        if unit.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: unit.len() });
        }
        let mult = mult
            .into_iter()
            .map(|row| row.into_iter().map(|terms| compact(terms)).collect())
            .collect();
        let blocks = vec![Block { kind: BlockKind::Raw, offset: 0, dim, unit: unit.clone() }];
        Ok(Algebra { labels, mult, unit, grading: None, blocks })
    }

    /// Dense constructor: `c[a][b][d]`.
    pub fn from_dense(labels: Vec<String>, c: Vec<Vec<Vec<K>>>, unit: Vec<K>) -> Result<Self> {
        let mult = c
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|v| v.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect())
                    .collect()
            })
            .collect();
        Algebra::from_structure(labels, mult, unit)
    }

    /// `M_n(D)`; `Ring::C` gives complex matrices with rational structure constants.
    pub fn matrix(n: usize, ring: Ring) -> Self {
        assert!(n >= 1, "matrix size must be positive");
        let u = ring.units();
        let dim = u * n * n;
        let idx = |w: usize, l: usize, m: usize| (w * n + l) * n + m;
        let mut labels = vec![String::new(); dim];
        let mut mult = vec![vec![Vec::new(); dim]; dim];
        let unit_names = ["", "i*", "j*", "k*"];
        for w in 0..u {
            for l in 0..n {
                for m in 0..n {
                    labels[idx(w, l, m)] = format!("{}e[{},{}]", unit_names[w], l + 1, m + 1);
                }
            }
        }
        for w1 in 0..u {
            for w2 in 0..u {
                let (s, w3) = match ring {
                    Ring::R | Ring::C => (1, 0),
                    Ring::CR => {
                        if w1 == 1 && w2 == 1 {
                            (-1, 0)
                        } else {
                            (1, w1 + w2)
                        }
                    }
                    Ring::HR => quaternion_unit_mul(w1, w2),
                };
                for l in 0..n {
                    for m in 0..n {
                        for k in 0..n {
                            mult[idx(w1, l, m)][idx(w2, m, k)].push((idx(w3, l, k), K::from_i64(s)));
                        }
                    }
                }
            }
        }
        let mut unit = vec![K::zero(); dim];
        for l in 0..n {
            unit[idx(0, l, l)] = K::one();
        }
        let blocks = vec![Block { kind: BlockKind::Matrix { n, ring }, offset: 0, dim, unit: unit.clone() }];
        Algebra { labels, mult, unit, grading: None, blocks }
    }

    /// Group algebra `kH` with `e_h e_l = e_{hl}`; graded by `H` when abelian.
    pub fn group(g: &FiniteGroup) -> Self {
        let grading = g.is_abelian().then(|| {
            let (ab, map) = AbelianGroup::decompose(g).expect("abelian");
            let mut grades = vec![0; g.order()];
            for (idx, &elem) in map.iter().enumerate() {
                grades[elem] = idx;
            }
            Grading { group: ab, grades }
        });
        let labels = (0..g.order()).map(|h| format!("g{h}")).collect();
        Algebra::group_with(g, labels, grading)
    }

    fn group_with(g: &FiniteGroup, labels: Vec<String>, grading: Option<Grading>) -> Self {
        let n = g.order();
        let mult = (0..n).map(|a| (0..n).map(|b| vec![(g.mul(a, b), K::one())]).collect()).collect();
        let mut unit = vec![K::zero(); n];
        unit[g.unit()] = K::one();
        let blocks = vec![Block { kind: BlockKind::Group { group: g.clone() }, offset: 0, dim: n, unit: unit.clone() }];
        Algebra { labels, mult, unit, grading, blocks }
    }

    pub fn group_algebra(table: Vec<Vec<usize>>, unit: usize) -> Result<Self> {
        Ok(Algebra::group(&FiniteGroup::from_table(table, unit)?))
    }

    /// `kZ_n` with basis `r^0, ..., r^{n-1}`.
    pub fn cyclic(n: usize) -> Self {
        let g = AbelianGroup::cyclic(n as u32);
        let labels = (0..n).map(|k| format!("r^{k}")).collect();
        Algebra::group_with(&g.to_finite_group(), labels, Some(Grading { group: g, grades: (0..n).collect() }))
    }

    /// Abelian group algebra graded by the given normal form; basis indexed like the group.
    pub fn abelian(group: &AbelianGroup) -> Self {
        let labels = (0..group.order()).map(|h| format!("h{:?}", group.residues(h))).collect();
        let grading = Grading { group: group.clone(), grades: (0..group.order()).collect() };
        Algebra::group_with(&group.to_finite_group(), labels, Some(grading))
    }

    /// `M_n(C)` with basis `X^a Y^b` (`X` clock, `Y` shift), graded by `Z_n x Z_n`.
    pub fn pauli(n: usize) -> Result<Self> {
        let xi = K::root_of_unity(n as u32, 1).ok_or(Error::MissingRootOfUnity(n as u32))?;
        let mats: Vec<Matrix<K>> = (0..n * n).map(|ab| pauli_matrix(n, ab / n, ab % n, &xi)).collect();
        let dim = n * n;
        let mut mult = vec![vec![Vec::new(); dim]; dim];
        for p in 0..dim {
            for q in 0..dim {
                let prod = linalg::mat_mul(&mats[p], &mats[q]);
                let target = ((p / n + q / n) % n) * n + (p % n + q % n) % n;
                let coeff = ratio_of(&prod, &mats[target]);
                mult[p][q].push((target, coeff));
            }
        }
        let labels = (0..dim).map(|ab| format!("X^{}Y^{}", ab / n, ab % n)).collect();
        let mut unit = vec![K::zero(); dim];
        unit[0] = K::one();
        let group = AbelianGroup::new(vec![n as u32, n as u32])?;
        let grading = Some(Grading { group, grades: (0..dim).collect() });
        let blocks = vec![Block { kind: BlockKind::Pauli { n }, offset: 0, dim, unit: unit.clone() }];
        Ok(Algebra { labels, mult, unit, grading, blocks })
    }

    /// `A1 (+) A2`; the grading group is the product of the summands' grading groups.
    pub fn direct_sum(a1: &Algebra<K>, a2: &Algebra<K>) -> Self {
        let (d1, d2) = (a1.dim(), a2.dim());
        let dim = d1 + d2;
        let mut labels: Vec<String> = a1.labels.iter().map(|l| format!("1:{l}")).collect();
        labels.extend(a2.labels.iter().map(|l| format!("2:{l}")));
        let mut mult = vec![vec![Vec::new(); dim]; dim];
        for a in 0..d1 {
            for b in 0..d1 {
                mult[a][b] = a1.mult[a][b].clone();
            }
        }
        for a in 0..d2 {
            for b in 0..d2 {
                mult[d1 + a][d1 + b] = a2.mult[a][b].iter().map(|(d, c)| (d + d1, c.clone())).collect();
            }
        }
        let mut unit = a1.unit.clone();
        unit.extend(a2.unit.iter().cloned());
        let g1 = a1.grading.clone().unwrap_or_else(|| Grading { group: AbelianGroup::trivial(), grades: vec![0; d1] });
        let g2 = a2.grading.clone().unwrap_or_else(|| Grading { group: AbelianGroup::trivial(), grades: vec![0; d2] });
        let grading = if a1.grading.is_none() && a2.grading.is_none() {
            None
        } else {
            let group = g1.group.product(&g2.group);
            let m = g2.group.order();
            let mut grades: Vec<usize> = g1.grades.iter().map(|&h| h * m).collect();
            grades.extend(g2.grades.iter().copied());
            Some(Grading { group, grades })
        };
        let mut blocks = a1.blocks.clone();
        blocks.extend(a2.blocks.iter().cloned().map(|mut b| {
            b.offset += d1;
            b
        }));
        Algebra { labels, mult, unit, grading, blocks }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> &[K] {
        &self.unit
    }

    pub fn blocks(&self) -> &[Block<K>] {
        &self.blocks
    }

    pub fn grading(&self) -> Option<&Grading> {
        self.grading.as_ref()
    }

    /// Attaches a grading after checking `A_h A_l ⊂ A_{hl}`.
    pub fn with_grading(mut self, grading: Grading) -> Result<Self> {
        if grading.grades.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: grading.grades.len() });
        }
        if grading.grades.iter().any(|&h| h >= grading.group.order()) {
            return Err(Error::Grading("grade index out of range".into()));
        }
        self.grading = Some(grading);
        self.check_grading()?;
        Ok(self)
    }

    pub fn basis_product(&self, a: usize, b: usize) -> &[(usize, K)] {
        &self.mult[a][b]
    }

    pub fn basis(&self, a: usize) -> Element<K> {
        let mut v = vec![K::zero(); self.dim()];
        v[a] = K::one();
        v
    }

    pub fn zero(&self) -> Element<K> {
        vec![K::zero(); self.dim()]
    }

    pub fn one(&self) -> Element<K> {
        self.unit.clone()
    }

    fn check_len(&self, x: &[K]) -> Result<()> {
        if x.len() == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dim(), got: x.len() })
        }
    }

    pub fn multiply(&self, x: &[K], y: &[K]) -> Result<Element<K>> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.mul(x, y))
    }

    /// Product without length checks.
    pub fn mul(&self, x: &[K], y: &[K]) -> Element<K> {
        let mut out = self.zero();
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                let f = xa.clone() * yb.clone();
                for (d, c) in &self.mult[a][b] {
                    out[*d] += &(f.clone() * c.clone());
                }
            }
        }
        out
    }

    pub fn pow(&self, x: &[K], k: usize) -> Element<K> {
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.mul(&acc, x);
        }
        acc
    }

    /// Matrix of left multiplication by `x`: column `b` is `x e_b`.
    pub fn left_matrix(&self, x: &[K]) -> Matrix<K> {
        let cols: Vec<Element<K>> = (0..self.dim()).map(|b| self.mul(x, &self.basis(b))).collect();
        linalg::transpose(&cols)
    }

    /// Two-sided inverse of `x`, if it exists.
    pub fn inverse_element(&self, x: &[K]) -> Result<Element<K>> {
        let y = linalg::solve(&self.left_matrix(x), &self.unit).ok_or(Error::NotInvertible)?;
        if self.mul(&y, x) != self.unit {
            return Err(Error::NotInvertible);
        }
        Ok(y)
    }

    pub fn is_central(&self, x: &[K]) -> bool {
        (0..self.dim()).all(|a| {
            let e = self.basis(a);
            self.mul(x, &e) == self.mul(&e, x)
        })
    }

    /// Basis of the center `Z(A)`.
    pub fn center_basis(&self) -> Vec<Element<K>> {
        let n = self.dim();
        let mut rows = Vec::new();
        for a in 0..n {
            let mut eqs = vec![vec![K::zero(); n]; n];
            for b in 0..n {
                for (d, c) in &self.mult[b][a] {
                    eqs[*d][b] += c;
                }
                for (d, c) in &self.mult[a][b] {
                    eqs[*d][b] -= c;
                }
            }
            rows.extend(eqs.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())));
        }
        linalg::nullspace(&rows, n)
    }

    /// Exhaustive associativity check; returns the first failing basis triple.
    pub fn check_associativity(&self) -> std::result::Result<(), (usize, usize, usize)> {
        let n = self.dim();
        for a in 0..n {
            for b in 0..n {
                let ab = &self.mult[a][b];
                for c in 0..n {
                    let mut lhs = self.zero();
                    for (e, x) in ab {
                        for (d, y) in &self.mult[*e][c] {
                            lhs[*d] += &(x.clone() * y.clone());
                        }
                    }
                    let mut rhs = self.zero();
                    for (e, x) in &self.mult[b][c] {
                        for (d, y) in &self.mult[a][*e] {
                            rhs[*d] += &(x.clone() * y.clone());
                        }
                    }
                    if lhs != rhs {
                        return Err((a, b, c));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn check_unit(&self) -> std::result::Result<(), usize> {
        for a in 0..self.dim() {
            let e = self.basis(a);
            if self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e {
                return Err(a);
            }
        }
        Ok(())
    }

    pub fn check_grading(&self) -> Result<()> {
        let Some(g) = &self.grading else { return Ok(()) };
        for a in 0..self.dim() {
            for b in 0..self.dim() {
                let want = g.group.add(g.grades[a], g.grades[b]);
                for (d, _) in &self.mult[a][b] {
                    if g.grades[*d] != want {
                        return Err(Error::Grading(format!(
                            "{} * {} has a component in {} outside the product grade",
                            self.labels[a], self.labels[b], self.labels[*d]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Associativity, unit laws and grading consistency.
    pub fn validate(&self) -> Result<()> {
        self.check_associativity().map_err(|(a, b, c)| {
            Error::Axiom(format!("not associative on ({}, {}, {})", self.labels[a], self.labels[b], self.labels[c]))
        })?;
        self.check_unit().map_err(|a| Error::Axiom(format!("unit law fails on {}", self.labels[a])))?;
        self.check_grading()
    }

    /// Covector of the (real part of the) matrix trace on every matrix-type block;
    /// `None` if some block has no defining matrix representation.
    pub fn trace_covector(&self) -> Option<Vec<K>> {
        let mut t = self.zero();
        for b in &self.blocks {
            match &b.kind {
                BlockKind::Matrix { n, .. } => {
                    for l in 0..*n {
                        t[b.offset + l * n + l] = K::one();
                    }
                }
                BlockKind::Pauli { n } => t[b.offset] = K::from_i64(*n as i64),
                BlockKind::Group { .. } | BlockKind::Raw => return None,
            }
        }
        Some(t)
    }

    /// Embeds a block-local vector into the full algebra.
    pub fn embed(&self, block: usize, local: &[K]) -> Element<K> {
        let b = &self.blocks[block];
        let mut v = self.zero();
        for (i, x) in local.iter().enumerate() {
            v[b.offset + i] = x.clone();
        }
        v
    }

    /// Unit of block `i` as an element of the whole algebra.
    pub fn block_unit(&self, i: usize) -> Element<K> {
        self.embed(i, &self.blocks[i].unit)
    }

    /// Index of `w e_{lm}` inside an `n x n` matrix block (`w` a division-ring unit).
    pub fn matrix_unit_index(n: usize, w: usize, l: usize, m: usize) -> usize {
        (w * n + l) * n + m
    }
}

fn compact<K: Scalar>(terms: Vec<(usize, K)>) -> Vec<(usize, K)> {
    let mut out: Vec<(usize, K)> = Vec::new();
    for (d, c) in terms {
        if let Some(slot) = out.iter_mut().find(|(e, _)| *e == d) {
            slot.1 += &c;
        } else {
            out.push((d, c));
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out.sort_by_key(|(d, _)| *d);
    out
}

/// `X^a Y^b` with `X = diag(xi^{n-1}, ..., xi, 1)` and `Y` the cyclic shift `e_{n1} + sum e_{m,m+1}`.
pub fn pauli_matrix<K: Scalar>(n: usize, a: usize, b: usize, xi: &K) -> Matrix<K> {
    let mut x = linalg::zeros::<K>(n, n);
    for (m, row) in x.iter_mut().enumerate() {
        row[m] = xi.powi((n - 1 - m) as i64).expect("root of unity is invertible");
    }
    let mut y = linalg::zeros::<K>(n, n);
    for m in 0..n {
        y[m][(m + 1) % n] = K::one();
    }
    let mut out = linalg::identity(n);
    for _ in 0..a {
        out = linalg::mat_mul(&out, &x);
    }
    for _ in 0..b {
        out = linalg::mat_mul(&out, &y);
    }
    out
}

fn ratio_of<K: Scalar>(p: &Matrix<K>, q: &Matrix<K>) -> K {
    for (rp, rq) in p.iter().zip(q) {
        for (x, y) in rp.iter().zip(rq) {
            if !y.is_zero() {
                return x.clone() * y.inverse().expect("nonzero");
            }
        }
    }
    K::zero()
}
