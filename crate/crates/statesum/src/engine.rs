//! Brute-force partition functions by sparse tensor-network contraction, and
//! tensor-level Pachner checks.

use std::collections::HashMap;

use cyclo::Scalar;

use crate::error::{Error, Result};
use crate::frobenius::Frobenius;
use crate::linalg::Matrix;
use crate::report::Report;
use crate::surface::Triangulation;

/// Default contraction budget (scalar multiplications).
pub const DEFAULT_CAP: u128 = 100_000_000;

/// Sparse tensor whose legs are labelled by half-edge ids.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor<K> {
    pub legs: Vec<usize>,
    pub entries: HashMap<Vec<u16>, K>,
}

impl<K: Scalar> Tensor<K> {
    fn scalar(v: K) -> Self {
        let mut entries = HashMap::new();
        if !v.is_zero() {
            entries.insert(Vec::new(), v);
        }
        Tensor { legs: Vec::new(), entries }
    }

    /// Value at a full index assignment (in leg order).
    pub fn get(&self, idx: &[u16]) -> K {
        self.entries.get(idx).cloned().unwrap_or_else(K::zero)
    }

    fn shared(&self, other: &Tensor<K>) -> Vec<usize> {
        self.legs.iter().copied().filter(|l| other.legs.contains(l)).collect()
    }

    /// Multiplications needed to contract with `other` over their shared legs.
    fn cost(&self, other: &Tensor<K>) -> u128 {
        let shared = self.shared(other);
        let pa: Vec<usize> = shared.iter().map(|l| pos(&self.legs, *l)).collect();
        let pb: Vec<usize> = shared.iter().map(|l| pos(&other.legs, *l)).collect();
        let mut counts: HashMap<Vec<u16>, u128> = HashMap::new();
        for k in other.entries.keys() {
            *counts.entry(pb.iter().map(|&i| k[i]).collect()).or_default() += 1;
        }
        self.entries
            .keys()
            .map(|k| counts.get(&pa.iter().map(|&i| k[i]).collect::<Vec<_>>()).copied().unwrap_or(0))
            .sum()
    }

    fn contract(&self, other: &Tensor<K>) -> Tensor<K> {
        let shared = self.shared(other);
        let pa: Vec<usize> = shared.iter().map(|l| pos(&self.legs, *l)).collect();
        let pb: Vec<usize> = shared.iter().map(|l| pos(&other.legs, *l)).collect();
        let ra: Vec<usize> = (0..self.legs.len()).filter(|i| !pa.contains(i)).collect();
        let rb: Vec<usize> = (0..other.legs.len()).filter(|i| !pb.contains(i)).collect();
        let mut groups: HashMap<Vec<u16>, Vec<(&Vec<u16>, &K)>> = HashMap::new();
        for (k, v) in &other.entries {
            groups.entry(pb.iter().map(|&i| k[i]).collect()).or_default().push((k, v));
        }
        let mut out: HashMap<Vec<u16>, K> = HashMap::new();
        for (ka, va) in &self.entries {
            let key: Vec<u16> = pa.iter().map(|&i| ka[i]).collect();
            let Some(matches) = groups.get(&key) else { continue };
            for (kb, vb) in matches {
                let mut idx: Vec<u16> = ra.iter().map(|&i| ka[i]).collect();
                idx.extend(rb.iter().map(|&i| kb[i]));
                let prod = va.clone() * (*vb).clone();
                match out.get_mut(&idx) {
                    Some(x) => *x += &prod,
                    None => {
                        out.insert(idx, prod);
                    }
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        let mut legs: Vec<usize> = ra.iter().map(|&i| self.legs[i]).collect();
        legs.extend(rb.iter().map(|&i| other.legs[i]));
        Tensor { legs, entries: out }
    }

    /// Same tensor with legs permuted into increasing label order.
    fn sorted(self) -> Tensor<K> {
        let mut perm: Vec<usize> = (0..self.legs.len()).collect();
        perm.sort_by_key(|&i| self.legs[i]);
        let legs = perm.iter().map(|&i| self.legs[i]).collect();
        let entries = self.entries.into_iter().map(|(k, v)| (perm.iter().map(|&i| k[i]).collect(), v)).collect();
        Tensor { legs, entries }
    }
}

fn pos(v: &[usize], x: usize) -> usize {
    v.iter().position(|&y| y == x).expect("leg present")
}

#[derive(Debug, Clone)]
pub struct EvaluationReport<K> {
    /// Partition function for closed surfaces; for surfaces with boundary the
    /// sum of all entries is not meaningful and this is zero.
    pub value: K,
    /// Boundary tensor (legs = boundary half-edges in increasing order), scaled by `R^V`.
    pub boundary: Option<Tensor<K>>,
    pub contraction_order: Vec<String>,
    /// `(V, E, T)` with `V` the interior vertex count.
    pub counts: (usize, usize, usize),
    pub multiplications: u128,
}

/// `C` for a triangle with the given orientation, at side states `(x0, x1, x2)`.
fn amplitude<K: Scalar>(c3: &[K], n: usize, positive: bool, x: [usize; 3]) -> &K {
    let [a, b, c] = if positive { x } else { [x[2], x[1], x[0]] };
    &c3[(a * n + b) * n + c]
}

/// `Z = R^V sum_states prod_t C(t) prod_e (B or S)(e)`.
pub fn evaluate<K: Scalar>(
    t: &Triangulation,
    f: &Frobenius<K>,
    s: Option<&Matrix<K>>,
    cap: u128,
) -> Result<EvaluationReport<K>> {
    f.require_special()?;
    let n = f.dim();
    if n > u16::MAX as usize {
        return Err(Error::invalid("algebra dimension too large"));
    }
    let c3 = f.c3();
    let mut tensors: Vec<(String, Tensor<K>)> = Vec::new();
    for tri in 0..t.triangle_count() {
        let mut entries = HashMap::new();
        for x0 in 0..n {
            for x1 in 0..n {
                for x2 in 0..n {
                    let v = amplitude(c3, n, t.is_positive(tri), [x0, x1, x2]);
                    if !v.is_zero() {
                        entries.insert(vec![x0 as u16, x1 as u16, x2 as u16], v.clone());
                    }
                }
            }
        }
        tensors.push((format!("t{tri}"), Tensor { legs: vec![3 * tri, 3 * tri + 1, 3 * tri + 2], entries }));
    }
    for (i, g) in t.gluings().iter().enumerate() {
        let m = if g.same {
            f.b()
        } else {
            s.ok_or_else(|| Error::invalid("opposite-orientation gluing needs an S matrix"))?
        };
        if m.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: m.len() });
        }
        let mut entries = HashMap::new();
        for (x, row) in m.iter().enumerate() {
            for (y, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    entries.insert(vec![x as u16, y as u16], v.clone());
                }
            }
        }
        let legs = vec![3 * g.first.0 + g.first.1, 3 * g.second.0 + g.second.1];
        tensors.push((format!("e{i}"), Tensor { legs, entries }));
    }
    let mut order = Vec::new();
    let mut total: u128 = 0;
    while tensors.len() > 1 {
        let mut best: Option<(u128, usize, usize, usize)> = None;
        for i in 0..tensors.len() {
            for j in i + 1..tensors.len() {
                let (a, b) = (&tensors[i].1, &tensors[j].1);
                let shared = a.shared(b).len();
                if shared == 0 {
                    continue;
                }
                let rank = a.legs.len() + b.legs.len() - 2 * shared;
                let cost = a.cost(b);
                let key = (cost, rank, i, j);
                if best.is_none_or(|b| (key.0, key.1) < (b.0, b.1)) {
                    best = Some(key);
                }
            }
        }
        let (cost, i, j) = match best {
            Some((c, _, i, j)) => (c, i, j),
            None => {
                let c = tensors[0].1.entries.len() as u128 * tensors[1].1.entries.len() as u128;
                (c, 0, 1)
            }
        };
        total += cost;
        if total > cap {
            return Err(Error::ResourceCap { needed: total, cap });
        }
        let (nb, b) = tensors.remove(j);
        let (na, a) = tensors.remove(i);
        order.push(format!("{na}*{nb}"));
        tensors.push((format!("({na}*{nb})"), a.contract(&b)));
    }
    let result = tensors.pop().map(|x| x.1).unwrap_or_else(|| Tensor::scalar(K::one()));
    let v = t.count_vertices();
    let rv = f.r().powi(v as i64).expect("R is nonzero");
    let counts = (v, t.count_edges(), t.triangle_count());
    if result.legs.is_empty() {
        let value = result.get(&[]) * rv;
        Ok(EvaluationReport { value, boundary: None, contraction_order: order, counts, multiplications: total })
    } else {
        let mut b = result.sorted();
        for x in b.entries.values_mut() {
            *x = x.clone() * rv.clone();
        }
        Ok(EvaluationReport { value: K::zero(), boundary: Some(b), contraction_order: order, counts, multiplications: total })
    }
}

/// Naive state sum over every half-edge state (closed surfaces, small sizes only).
pub fn evaluate_naive<K: Scalar>(t: &Triangulation, f: &Frobenius<K>, s: Option<&Matrix<K>>) -> Result<K> {
    f.require_special()?;
    if !t.is_closed() {
        return Err(Error::invalid("naive evaluation needs a closed surface"));
    }
    let n = f.dim();
    let h = 3 * t.triangle_count();
    let states = (n as f64).powi(h as i32);
    if states > 1e6 {
        return Err(Error::ResourceCap { needed: states as u128, cap: 1_000_000 });
    }
    let gl = t.gluings();
    let mats: Vec<&Matrix<K>> = gl
        .iter()
        .map(|g| if g.same { Ok(f.b()) } else { s.ok_or_else(|| Error::invalid("missing S")) })
        .collect::<Result<_>>()?;
    let c3 = f.c3();
    let mut x = vec![0usize; h];
    let mut total = K::zero();
    loop {
        let mut prod = K::one();
        for (g, m) in gl.iter().zip(&mats) {
            let v = &m[x[3 * g.first.0 + g.first.1]][x[3 * g.second.0 + g.second.1]];
            if v.is_zero() {
                prod = K::zero();
                break;
            }
            prod = prod * v.clone();
        }
        if !prod.is_zero() {
            for tri in 0..t.triangle_count() {
                let a = amplitude(c3, n, t.is_positive(tri), [x[3 * tri], x[3 * tri + 1], x[3 * tri + 2]]);
                if a.is_zero() {
                    prod = K::zero();
                    break;
                }
                prod = prod * a.clone();
            }
            total += &prod;
        }
        // odometer
        let mut k = 0;
        loop {
            if k == h {
                let rv = f.r().powi(t.count_vertices() as i64).expect("R nonzero");
                return Ok(total * rv);
            }
            x[k] += 1;
            if x[k] < n {
                break;
            }
            x[k] = 0;
            k += 1;
        }
    }
}

/// Tensor-level Pachner checks: 2-2 (associativity of the contracted pair of
/// triangles) and 1-3 (three-triangle disk against a single triangle).
pub fn verify_pachner<K: Scalar>(f: &Frobenius<K>) -> Report {
    let a = f.algebra();
    let n = f.dim();
    let mut rep = Report::new();
    // 2-2: C_{ab}^e C_{ecd} = C_{bc}^e C_{aed} for all d  <=>  eps(((ab)c) e_d) = eps((a(bc)) e_d).
    let mut fails22 = Vec::new();
    for x in 0..n {
        for y in 0..n {
            let xy = a.mul(&a.basis(x), &a.basis(y));
            for z in 0..n {
                let ez = a.basis(z);
                let lhs = a.mul(&xy, &ez);
                let rhs = a.mul(&a.basis(x), &a.mul(&a.basis(y), &ez));
                if lhs != rhs {
                    for d in 0..n {
                        let ed = a.basis(d);
                        if f.form(&lhs, &ed) != f.form(&rhs, &ed) {
                            fails22.push((x, y, z, d));
                        }
                    }
                }
            }
        }
    }
    rep.push("pachner 2-2", fails22.is_empty(), summary(&fails22));
    // 1-3: R Tr(D_a D_b D_c) = C_abc with D_a[q][q'] = coordinate q' of sigma(e_q) e_a.
    let d: Vec<Vec<Vec<(usize, K)>>> = (0..n)
        .map(|x| {
            (0..n)
                .map(|q| {
                    let v = a.mul(&f.apply_sigma(&a.basis(q)), &a.basis(x));
                    v.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect()
                })
                .collect()
        })
        .collect();
    let c3 = f.c3();
    let mut fails13 = Vec::new();
    for x in 0..n {
        for y in 0..n {
            let dxy = sparse_mul(&d[x], &d[y], n);
            for z in 0..n {
                let mut tr = K::zero();
                for (q, row) in dxy.iter().enumerate() {
                    for (q2, v) in row {
                        if let Some((_, w)) = d[z][*q2].iter().find(|(c, _)| *c == q) {
                            tr += &(v.clone() * w.clone());
                        }
                    }
                }
                if tr * f.r().clone() != c3[(x * n + y) * n + z] {
                    fails13.push((x, y, z));
                }
            }
        }
    }
    rep.push("pachner 1-3", fails13.is_empty(), summary(&fails13));
    rep
}

fn sparse_mul<K: Scalar>(a: &[Vec<(usize, K)>], b: &[Vec<(usize, K)>], n: usize) -> Vec<Vec<(usize, K)>> {
    a.iter()
        .map(|row| {
            let mut acc = vec![K::zero(); n];
            for (k, x) in row {
                for (j, y) in &b[*k] {
                    acc[*j] += &(x.clone() * y.clone());
                }
            }
            acc.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect()
        })
        .collect()
}

fn summary<T: std::fmt::Debug>(v: &[T]) -> String {
    if v.is_empty() {
        return String::new();
    }
    let shown: Vec<String> = v.iter().take(5).map(|t| format!("{t:?}")).collect();
    format!("{} failing index tuples, e.g. {}", v.len(), shown.join(" "))
}
