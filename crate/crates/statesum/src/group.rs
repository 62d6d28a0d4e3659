//! Finite groups given by Cayley tables and finite abelian groups in
//! `Z_{n1} x ... x Z_{np}` normal form.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    unit: usize,
    inv: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a Cayley table: rows/columns are permutations, `unit` is neutral, associative.
    pub fn from_table(table: Vec<Vec<usize>>, unit: usize) -> Result<Self> {
        let n = table.len();
        if n == 0 || unit >= n {
            return Err(Error::invalid("empty group table or unit out of range"));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::invalid(format!("row {i} has length {} (expected {n})", row.len())));
            }
            if !is_permutation(row) {
                return Err(Error::invalid(format!("row {i} is not a permutation")));
            }
        }
        for j in 0..n {
            let col: Vec<usize> = table.iter().map(|r| r[j]).collect();
            if !is_permutation(&col) {
                return Err(Error::invalid(format!("column {j} is not a permutation")));
            }
        }
        for x in 0..n {
            if table[unit][x] != x || table[x][unit] != x {
                return Err(Error::invalid(format!("element {unit} is not a two-sided unit")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::invalid(format!("table not associative at ({a},{b},{c})")));
                    }
                }
            }
        }
        let inv = (0..n).map(|a| (0..n).find(|&b| table[a][b] == unit).expect("row is a permutation")).collect();
        Ok(FiniteGroup { table, unit, inv })
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::from_table(table, 0).expect("cyclic table is valid")
    }

    /// Direct product; element `(a, b)` has index `a * |other| + b`.
    pub fn product(&self, other: &FiniteGroup) -> Self {
        let m = other.order();
        let n = self.order() * m;
        let table = (0..n)
            .map(|x| (0..n).map(|y| self.mul(x / m, y / m) * m + other.mul(x % m, y % m)).collect())
            .collect();
        FiniteGroup::from_table(table, self.unit * m + other.unit).expect("product of groups")
    }

    /// Group of permutations of `{0..k}` with composition `(p q)(i) = p(q(i))`.
    pub fn symmetric(k: usize) -> Self {
        let perms = permutations(k);
        let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).expect("permutation listed");
        let table = perms
            .iter()
            .map(|p| perms.iter().map(|q| index(&q.iter().map(|&i| p[i]).collect())).collect())
            .collect();
        let unit = index(&(0..k).collect());
        FiniteGroup::from_table(table, unit).expect("symmetric group table")
    }

    /// Quaternion group `{±1, ±i, ±j, ±k}`, index `2*u + s` with unit `u` and sign bit `s`.
    pub fn quaternion8() -> Self {
        let table = (0..8)
            .map(|x: usize| {
                (0..8)
                    .map(|y: usize| {
                        let (s, w) = quaternion_unit_mul(x / 2, y / 2);
                        let neg = (x % 2 == 1) ^ (y % 2 == 1) ^ (s < 0);
                        2 * w + neg as usize
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(table, 0).expect("quaternion group table")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.unit {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn center(&self) -> Vec<usize> {
        let n = self.order();
        (0..n).filter(|&a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a))).collect()
    }

    /// Closure of `gens` under multiplication.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[self.unit] = true;
        let mut out = vec![self.unit];
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    pub fn is_subgroup(&self, set: &[usize]) -> bool {
        set.contains(&self.unit) && set.iter().all(|&a| set.iter().all(|&b| set.contains(&self.mul(a, self.inv(b)))))
    }

    /// Subgroup as a group of its own, with the embedding of its elements.
    pub fn subgroup(&self, set: &[usize]) -> Result<(FiniteGroup, Vec<usize>)> {
        if !self.is_subgroup(set) {
            return Err(Error::invalid("subset is not a subgroup"));
        }
        let elems: Vec<usize> = set.to_vec();
        let pos = |x: usize| elems.iter().position(|&e| e == x).expect("closed");
        let table = elems.iter().map(|&a| elems.iter().map(|&b| pos(self.mul(a, b))).collect()).collect();
        Ok((FiniteGroup::from_table(table, pos(self.unit))?, elems))
    }
}

fn is_permutation(v: &[usize]) -> bool {
    let mut seen = vec![false; v.len()];
    for &x in v {
        if x >= v.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Product of quaternion units `{1, i, j, k}` as `(sign, unit)`.
pub fn quaternion_unit_mul(a: usize, b: usize) -> (i64, usize) {
    const T: [[(i64, usize); 4]; 4] = [
        [(1, 0), (1, 1), (1, 2), (1, 3)],
        [(1, 1), (-1, 0), (1, 3), (-1, 2)],
        [(1, 2), (-1, 3), (-1, 0), (1, 1)],
        [(1, 3), (1, 2), (-1, 1), (-1, 0)],
    ];
    T[a][b]
}

/// Finite abelian group `Z_{n1} x ... x Z_{np}`; elements are residue tuples,
/// indexed in mixed radix with the last coordinate varying fastest.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    orders: Vec<u32>,
}

impl AbelianGroup {
    pub fn new(orders: Vec<u32>) -> Result<Self> {
        if orders.contains(&0) {
            return Err(Error::invalid("cyclic factor of order 0"));
        }
        Ok(AbelianGroup { orders })
    }

    pub fn trivial() -> Self {
        AbelianGroup { orders: Vec::new() }
    }

    pub fn cyclic(n: u32) -> Self {
        AbelianGroup { orders: vec![n] }
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> usize {
        self.orders.iter().map(|&n| n as usize).product()
    }

    pub fn product(&self, other: &AbelianGroup) -> AbelianGroup {
        let mut orders = self.orders.clone();
        orders.extend_from_slice(&other.orders);
        AbelianGroup { orders }
    }

    pub fn residues(&self, mut idx: usize) -> Vec<u32> {
        let mut out = vec![0; self.orders.len()];
        for (o, &n) in out.iter_mut().zip(&self.orders).rev() {
            *o = (idx % n as usize) as u32;
            idx /= n as usize;
        }
        out
    }

    pub fn index(&self, residues: &[u32]) -> usize {
        residues.iter().zip(&self.orders).fold(0, |acc, (&r, &n)| acc * n as usize + (r % n) as usize)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (x, y) = (self.residues(a), self.residues(b));
        let s: Vec<u32> = x.iter().zip(&y).zip(&self.orders).map(|((p, q), n)| (p + q) % n).collect();
        self.index(&s)
    }

    pub fn neg(&self, a: usize) -> usize {
        let x = self.residues(a);
        let s: Vec<u32> = x.iter().zip(&self.orders).map(|(p, n)| (n - p) % n).collect();
        self.index(&s)
    }

    /// The `i`-th standard generator `r_i`.
    pub fn generator(&self, i: usize) -> usize {
        let mut r = vec![0; self.orders.len()];
        r[i] = 1 % self.orders[i];
        self.index(&r)
    }

    pub fn to_finite_group(&self) -> FiniteGroup {
        let n = self.order();
        let table = (0..n).map(|a| (0..n).map(|b| self.add(a, b)).collect()).collect();
        FiniteGroup::from_table(table, 0).expect("abelian table")
    }

    /// Normal form of an abelian Cayley table: generators `g_i` (as elements of `g`)
    /// of orders `n_i` such that residues `(k_i)` map bijectively to `prod g_i^{k_i}`.
    /// Returns the group and the map from group index to table element.
    pub fn decompose(g: &FiniteGroup) -> Result<(AbelianGroup, Vec<usize>)> {
        if !g.is_abelian() {
            return Err(Error::invalid("group is not abelian"));
        }
        let n = g.order();
        if n == 1 {
            return Ok((AbelianGroup::trivial(), vec![g.unit()]));
        }
        let orders: Vec<usize> = (0..n).map(|a| g.element_order(a)).collect();
        for p in 1..=usize::BITS as usize {
            if let Some(gens) = search_generators(g, &orders, p, &mut Vec::new()) {
                let ab = AbelianGroup { orders: gens.iter().map(|&x| orders[x] as u32).collect() };
                let map = (0..n)
                    .map(|idx| {
                        let r = ab.residues(idx);
                        let mut x = g.unit();
                        for (&gi, &k) in gens.iter().zip(&r) {
                            for _ in 0..k {
                                x = g.mul(x, gi);
                            }
                        }
                        x
                    })
                    .collect();
                return Ok((ab, map));
            }
        }
        unreachable!("every finite abelian group has a generating tuple")
    }
}

fn search_generators(g: &FiniteGroup, orders: &[usize], p: usize, chosen: &mut Vec<usize>) -> Option<Vec<usize>> {
    let n = g.order();
    if chosen.len() == p {
        let prod: usize = chosen.iter().map(|&x| orders[x]).product();
        if prod != n {
            return None;
        }
        return (g.generated(chosen).len() == n).then(|| chosen.clone());
    }
    let partial: usize = chosen.iter().map(|&x| orders[x]).product();
    for x in 0..n {
        if orders[x] == 1 || !n.is_multiple_of(partial * orders[x]) {
            continue;
        }
        // Nonincreasing orders keep the normal form canonical.
        if let Some(&last) = chosen.last() {
            if orders[x] > orders[last] || (orders[x] == orders[last] && x < last) {
                continue;
            }
        }
        chosen.push(x);
        if let Some(found) = search_generators(g, orders, p, chosen) {
            return Some(found);
        }
        chosen.pop();
    }
    None
}
