//! Cached reduction tables `x^k mod Phi_n` for `0 <= k < n`.

use std::collections::HashMap;
use std::sync::{Arc, LazyLock, Mutex};

pub(crate) struct Table {
    phi: usize,
    powers: Vec<Vec<i64>>,
}

impl Table {
    pub(crate) fn phi(&self) -> usize {
        self.phi
    }

    pub(crate) fn power(&self, k: u32) -> &[i64] {
        &self.powers[k as usize % self.powers.len()]
    }
}

static TABLES: LazyLock<Mutex<HashMap<u32, Arc<Table>>>> = LazyLock::new(|| Mutex::new(HashMap::new()));

pub(crate) fn totient(n: u32) -> u32 {
    let mut m = n;
    let mut out = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if m > 1 {
        out -= out / m;
    }
    out
}

/// Integer coefficients of `Phi_n`, lowest degree first.
pub(crate) fn cyclotomic_poly(n: u32) -> Vec<i64> {
    // x^n - 1 divided by Phi_d for every proper divisor d.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = divide_exact(&num, &cyclotomic_poly(d));
        }
    }
    num
}

fn divide_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut q = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd] / den[dd];
        q[i] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[i + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

pub(crate) fn table(n: u32) -> Arc<Table> {
    if let Some(t) = TABLES.lock().expect("table cache poisoned").get(&n) {
        return t.clone();
    }
    let phi_poly = cyclotomic_poly(n);
    let phi = phi_poly.len() - 1;
    let mut powers = Vec::with_capacity(n as usize);
    let mut cur = vec![0i64; phi];
    cur[0] = 1;
    if phi == 0 {
        // n == 1 is never tabulated with phi 0; Phi_1 = x - 1 has degree 1.
        unreachable!();
    }
    for _ in 0..n {
        powers.push(cur.clone());
        // multiply by x and reduce with x^phi = -sum a_i x^i
        let top = cur[phi - 1];
        for i in (1..phi).rev() {
            cur[i] = cur[i - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for i in 0..phi {
                cur[i] -= top * phi_poly[i];
            }
        }
    }
    let t = Arc::new(Table { phi, powers });
    TABLES.lock().expect("table cache poisoned").insert(n, t.clone());
    t
}
