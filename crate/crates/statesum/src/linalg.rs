//! Dense exact linear algebra over a [`Scalar`] field.

use cyclo::Scalar;

pub type Matrix<K> = Vec<Vec<K>>;

pub fn zeros<K: Scalar>(rows: usize, cols: usize) -> Matrix<K> {
    vec![vec![K::zero(); cols]; rows]
}

pub fn identity<K: Scalar>(n: usize) -> Matrix<K> {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = K::one();
    }
    m
}

pub fn transpose<K: Scalar>(m: &Matrix<K>) -> Matrix<K> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_mul<K: Scalar>(a: &Matrix<K>, b: &Matrix<K>) -> Matrix<K> {
    let cols = b.first().map_or(0, |r| r.len());
    let mut out = zeros(a.len(), cols);
    for (i, row) in a.iter().enumerate() {
        for (k, aik) in row.iter().enumerate() {
            if aik.is_zero() {
                continue;
            }
            for (j, bkj) in b[k].iter().enumerate() {
                if !bkj.is_zero() {
                    out[i][j] += &(aik.clone() * bkj.clone());
                }
            }
        }
    }
    out
}

pub fn mat_vec<K: Scalar>(a: &Matrix<K>, v: &[K]) -> Vec<K> {
    a.iter()
        .map(|row| {
            let mut acc = K::zero();
            for (x, y) in row.iter().zip(v) {
                if !x.is_zero() && !y.is_zero() {
                    acc += &(x.clone() * y.clone());
                }
            }
            acc
        })
        .collect()
}

/// `v^T a`, i.e. the row vector `sum_i v_i a[i][.]`.
pub fn vec_mat<K: Scalar>(v: &[K], a: &Matrix<K>) -> Vec<K> {
    let cols = a.first().map_or(0, |r| r.len());
    let mut out = vec![K::zero(); cols];
    for (vi, row) in v.iter().zip(a) {
        if vi.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(row) {
            if !x.is_zero() {
                *o += &(vi.clone() * x.clone());
            }
        }
    }
    out
}

pub fn is_zero_matrix<K: Scalar>(m: &Matrix<K>) -> bool {
    m.iter().all(|r| r.iter().all(|x| x.is_zero()))
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref<K: Scalar>(m: &mut Matrix<K>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inverse().expect("nonzero pivot");
        for x in m[r].iter_mut() {
            if !x.is_zero() {
                *x = x.clone() * inv.clone();
            }
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !p.is_zero() {
                    *x -= &(f.clone() * p.clone());
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<K: Scalar>(m: &Matrix<K>) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

/// Basis of `{x : m x = 0}` where `m` has `cols` columns.
pub fn nullspace<K: Scalar>(m: &Matrix<K>, cols: usize) -> Vec<Vec<K>> {
    let mut a: Matrix<K> = m.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![K::zero(); cols];
            v[f] = K::one();
            for (row, &pc) in a.iter().zip(&pivots) {
                v[pc] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Inverse, or a nonzero kernel vector witnessing singularity.
pub fn inverse<K: Scalar>(m: &Matrix<K>) -> Result<Matrix<K>, Vec<K>> {
    let n = m.len();
    let mut a: Matrix<K> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { K::one() } else { K::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut a);
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        let kernel = nullspace(m, n);
        return Err(kernel.into_iter().next().unwrap_or_default());
    }
    Ok(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Some solution of `m x = b`.
pub fn solve<K: Scalar>(m: &Matrix<K>, b: &[K]) -> Option<Vec<K>> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut a: Matrix<K> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut a);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![K::zero(); cols];
    for (row, &pc) in a.iter().zip(&pivots) {
        x[pc] = row[cols].clone();
    }
    Some(x)
}

/// Whether the span of `a` equals the span of `b` (as sets of vectors of equal length).
pub fn same_span<K: Scalar>(a: &[Vec<K>], b: &[Vec<K>]) -> bool {
    let ra = rank(&a.to_vec());
    let rb = rank(&b.to_vec());
    let mut both = a.to_vec();
    both.extend(b.iter().cloned());
    ra == rb && rank(&both) == ra
}
