use std::sync::Arc;

use num_traits::{One, Zero};
use proptest::prelude::*;
use statesum::algebra::{Algebra, Ring};
use statesum::error::Error;
use statesum::frobenius::Frobenius;
use statesum::group::{AbelianGroup, FiniteGroup};
use statesum::linalg::{self, Matrix};
use statesum::spin::{
    bicharacter_crossing, bicharacters, bicharacters_e12, block_grading, center_graded_algebra,
    crossing_search_cyclic, division_ring_grading, non_abelian_group_invariant, verify_crossing_axioms, Bicharacter,
    CenterDecomposition, CrossingData, SearchMode,
};
use statesum::spin_structure::{immersion_to_parity, Parity};
use statesum::{Cyclo, Scalar};

type K = Cyclo;

fn k(n: i64) -> K {
    K::from_int(n)
}

fn pow(x: &K, e: i64) -> K {
    x.powi(e).unwrap()
}

fn sign(p: Parity) -> K {
    k(p.sign())
}

fn scalar_element(a: &Algebra<K>, c: K) -> Vec<K> {
    a.unit().iter().map(|u| u.clone() * c.clone()).collect()
}

/// `lambda~(h, l) = prod v_ij^{h_i l_j}` straight from the generator values.
fn lt(values: &Matrix<K>, h: &[u32], l: &[u32]) -> K {
    let mut acc = K::one();
    for (i, hi) in h.iter().enumerate() {
        for (j, lj) in l.iter().enumerate() {
            acc *= pow(&values[i][j], (hi * lj) as i64);
        }
    }
    acc
}

fn diag_element(n: usize, units: usize, d: &[i64]) -> Vec<K> {
    let mut v = vec![K::zero(); units * n * n];
    for (l, x) in d.iter().enumerate() {
        v[Algebra::<K>::matrix_unit_index(n, 0, l, l)] = k(*x);
    }
    v
}

fn graded_matrix(n: usize, ring: Ring, grading: statesum::algebra::Grading, x: &[i64], r: K) -> Frobenius<K> {
    let units = ring.units();
    let a = Algebra::matrix(n, ring).with_grading(grading).unwrap();
    Frobenius::from_element(Arc::new(a), &diag_element(n, units, x), r).unwrap()
}

fn group_form(g: &AbelianGroup, r: K) -> Frobenius<K> {
    Frobenius::group_form(Arc::new(Algebra::abelian(g)), r).unwrap()
}

fn signs_bc(g: &AbelianGroup, s: &[i64]) -> Bicharacter<K> {
    Bicharacter::from_signs(g.clone(), s).unwrap()
}

fn halves() -> [K; 2] {
    [K::one(), K::ratio(1, 2)]
}

/// `R p` and `R n` idempotent with images `Z_lambda`, `Z-bar_lambda`; `phi p = p phi = p`,
/// `phi n = n phi`; `Z_lambda = Z-bar_lambda` iff `phi = id`.
fn check_projectors(x: &CrossingData<K>) {
    let r = x.frobenius().r().clone();
    let scale = |m: Matrix<K>| -> Matrix<K> { m.into_iter().map(|row| row.into_iter().map(|v| v * r.clone()).collect()).collect() };
    let p = scale(x.projector_p());
    let n = scale(x.projector_n());
    let phi = x.curl_map();
    assert_eq!(linalg::mat_mul(&p, &p), p, "R p idempotent");
    assert_eq!(linalg::mat_mul(&n, &n), n, "R n idempotent");
    assert!(linalg::same_span(&row_space(&p), &x.z_lambda()));
    assert!(linalg::same_span(&row_space(&n), &x.z_bar_lambda()));
    assert_eq!(linalg::mat_mul(phi, &p), p);
    assert_eq!(linalg::mat_mul(&p, phi), p);
    assert_eq!(linalg::mat_mul(phi, &n), linalg::mat_mul(&n, phi));
    let same = linalg::same_span(&x.z_lambda(), &x.z_bar_lambda());
    assert_eq!(same, x.is_curl_free());
}

fn row_space(m: &Matrix<K>) -> Vec<Vec<K>> {
    let mut m = m.clone();
    linalg::rref(&mut m);
    m.into_iter().filter(|r| r.iter().any(|v| !v.is_zero())).collect()
}

/// `phi(a_l) = lambda~(l, l) sigma^{-1}(a_l)` on homogeneous basis elements.
fn check_graded_curl(x: &CrossingData<K>, bc: &Bicharacter<K>) {
    let f = x.frobenius();
    let grades = &f.algebra().grading().unwrap().grades;
    let sinv = f.nakayama_inverse();
    for (l, &h) in grades.iter().enumerate() {
        let c = bc.eval(h, h);
        let want: Vec<K> = sinv[l].iter().map(|v| v.clone() * c.clone()).collect();
        assert_eq!(x.curl_map()[l], want, "curl on basis {l}");
    }
}

/// Every curl decoration gives the value of its parity class.
fn check_curl_flags(x: &CrossingData<K>) {
    for g in 1..=2usize {
        for bits in 0u32..1 << (2 * g) {
            let flags: Vec<u8> = (0..2 * g).map(|i| ((bits >> i) & 1) as u8).collect();
            let p = immersion_to_parity(&flags).unwrap();
            assert_eq!(x.spin_invariant_with_curls(&flags).unwrap(), x.spin_invariant(g, p).unwrap());
        }
    }
}

#[test]
fn z2_sign_crossing_on_the_group_algebra() {
    let g = AbelianGroup::cyclic(2);
    for r in halves() {
        let f = group_form(&g, r.clone());
        let x = bicharacter_crossing(&f, &signs_bc(&g, &[-1])).unwrap();
        let rep = verify_crossing_axioms(&x);
        assert!(rep.axioms.all_passed(), "{}", rep.axioms);
        assert!(!rep.curl_free);
        assert_eq!(x.curl_map(), &vec![vec![k(1), k(0)], vec![k(0), k(-1)]]);
        let (eta, chi) = x.eta_chi().unwrap();
        let a = f.algebra();
        // eta = N_I / (R^2 |H|) with N_I = 1, |H| = 2
        assert_eq!(eta, scalar_element(a, K::ratio(1, 2) * pow(&r, -2)));
        assert_eq!(chi, eta.iter().map(|v| -v.clone()).collect::<Vec<_>>());
        check_projectors(&x);
        check_curl_flags(&x);
    }
}

#[test]
fn abelian_group_elements_match_the_bicharacter_sums() {
    let groups = [vec![2], vec![3], vec![4], vec![2, 2], vec![6], vec![2, 4]];
    for orders in groups {
        let g = AbelianGroup::new(orders).unwrap();
        let order = g.order() as i64;
        for r in halves() {
            let f = group_form(&g, r.clone());
            for bc in bicharacters::<K>(&g, 12).unwrap() {
                let x = bicharacter_crossing(&f, &bc).unwrap();
                let (eta, chi) = x.eta_chi().unwrap();
                let (mut se, mut sc) = (K::zero(), K::zero());
                for h in 0..g.order() {
                    for l in 0..g.order() {
                        let (hr, lr) = (g.residues(h), g.residues(l));
                        let v = lt(bc.values(), &hr, &lr);
                        se += &v;
                        sc += &(v * lt(bc.values(), &hr, &hr) * lt(bc.values(), &lr, &lr));
                    }
                }
                let norm = pow(&r, -2) * pow(&k(order), -2);
                let a = f.algebra();
                assert_eq!(eta, scalar_element(a, se * norm.clone()), "{bc}");
                assert_eq!(chi, scalar_element(a, sc * norm), "{bc}");
                check_graded_curl(&x, &bc);
            }
        }
    }
}

/// Sign crossings (diagonal `+-1`, off-diagonal `1`) on `kH`: every sign factor of order
/// `n` contributes `n^2 / 2` to `eta`, so `Z = P(s)^{|I|} R^{2-2g} 2^{-|I| g} |H|`. When every
/// sign factor is `Z_2` this is `P(s)^{|I|} R^{2-2g} N_I^g |H|^{1-g}`.
#[test]
fn abelian_sign_crossings_follow_the_product_formula() {
    for orders in [vec![2], vec![4], vec![2, 2], vec![6], vec![2, 4], vec![2, 3], vec![2, 2, 2]] {
        let g = AbelianGroup::new(orders.clone()).unwrap();
        let even: Vec<usize> = (0..orders.len()).filter(|&i| orders[i] % 2 == 0).collect();
        for mask in 0u32..1 << even.len() {
            let mut s = vec![1i64; orders.len()];
            for (b, &i) in even.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    s[i] = -1;
                }
            }
            let bc = signs_bc(&g, &s);
            let n_i = bc.n_i() as i64;
            let set = bc.sign_set();
            let i_card = set.len() as i64;
            let only_z2 = set.iter().all(|&i| orders[i] == 2);
            for r in halves() {
                let x = bicharacter_crossing(&group_form(&g, r.clone()), &bc).unwrap();
                for gen in 1..=3i64 {
                    for p in [Parity::Even, Parity::Odd] {
                        let z = x.spin_invariant(gen as usize, p).unwrap();
                        let want = pow(&sign(p), i_card)
                            * pow(&r, 2 - 2 * gen)
                            * pow(&k(2), -i_card * gen)
                            * k(g.order() as i64);
                        assert_eq!(z, want, "{bc} g={gen} {p}");
                        if only_z2 {
                            let stated = pow(&sign(p), i_card)
                                * pow(&r, 2 - 2 * gen)
                                * pow(&k(n_i), gen)
                                * pow(&k(g.order() as i64), 1 - gen);
                            assert_eq!(z, stated, "{bc} g={gen} {p}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn block_graded_real_matrices_do_not_see_parity() {
    let cases: [(usize, usize, Vec<i64>, K); 3] =
        [(3, 1, vec![1, 1, -1], K::one()), (3, 2, vec![1, 1, -1], K::one()), (2, 1, vec![1, 1], K::ratio(1, 2))];
    for (n, p, xd, r) in cases {
        let f = graded_matrix(n, Ring::R, block_grading(n, p).unwrap(), &xd, r.clone());
        let bc = signs_bc(&AbelianGroup::cyclic(2), &[-1]);
        let x = bicharacter_crossing(&f, &bc).unwrap();
        let (eta, chi) = x.eta_chi().unwrap();
        let tr = k(xd.iter().sum());
        assert_eq!(eta, chi);
        assert_eq!(eta, scalar_element(f.algebra(), (r.clone() * tr.clone()).inverse().unwrap()));
        for gen in 1..=3i64 {
            for par in [Parity::Even, Parity::Odd] {
                let want = pow(&r, 1 - gen) * pow(&tr, 1 - gen);
                assert_eq!(x.spin_invariant(gen as usize, par).unwrap(), want);
            }
        }
        check_graded_curl(&x, &bc);
        check_projectors(&x);
        check_curl_flags(&x);
    }
}

/// `(sum_{w,t} c(w,t)) x^2 / (4 R^2 Tr(x)^2)`, the `C_R` element before simplification.
fn complex_real_oracle(bc: &Bicharacter<K>, x2: K, r: &K, tr: &K, curls: bool) -> K {
    let mut s = K::zero();
    for w in 0..2u32 {
        for t in 0..2u32 {
            let mut c = lt(bc.values(), &[w], &[t]);
            if curls {
                c = c * lt(bc.values(), &[w], &[w]) * lt(bc.values(), &[t], &[t]);
            }
            s += &c;
        }
    }
    s * x2 * pow(&(r.clone() * tr.clone()), -2) * K::ratio(1, 4)
}

#[test]
fn complex_real_grading_flips_chi() {
    // (n, diag of x, R) with x^2 = 2 R Tr(x)
    let cases: [(usize, Vec<i64>, K); 2] = [(3, vec![2, 2, -2], K::one()), (2, vec![2, 2], K::ratio(1, 2))];
    for (n, xd, r) in cases {
        let f = graded_matrix(n, Ring::CR, division_ring_grading(n, Ring::CR).unwrap(), &xd, r.clone());
        let bc = signs_bc(&AbelianGroup::cyclic(2), &[-1]);
        let x = bicharacter_crossing(&f, &bc).unwrap();
        let (eta, chi) = x.eta_chi().unwrap();
        let tr = k(xd.iter().sum());
        let x2 = k(xd[0] * xd[0]);
        let a = f.algebra();
        assert_eq!(eta, scalar_element(a, complex_real_oracle(&bc, x2.clone(), &r, &tr, false)));
        assert_eq!(chi, scalar_element(a, complex_real_oracle(&bc, x2, &r, &tr, true)));
        assert_eq!(chi, eta.iter().map(|v| -v.clone()).collect::<Vec<_>>());
        for gen in 1..=3i64 {
            for p in [Parity::Even, Parity::Odd] {
                let want = sign(p) * pow(&r, 1 - gen) * pow(&tr, 1 - gen);
                assert_eq!(x.spin_invariant(gen as usize, p).unwrap(), want);
            }
        }
        check_graded_curl(&x, &bc);
        check_projectors(&x);
    }
}

/// Quaternion `[1, i, j, k]` coefficients.
type Quat = [i64; 4];

fn qmul(a: Quat, b: Quat) -> Quat {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

fn qconj(a: Quat) -> Quat {
    [a[0], -a[1], -a[2], -a[3]]
}

/// `sum_{w,t} c(w,t) w t w* t*` over the units, real by construction.
fn quaternion_sum(bc: &Bicharacter<K>, curls: bool) -> K {
    let units: [Quat; 4] = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];
    let grade: [[u32; 2]; 4] = [[0, 0], [1, 0], [0, 1], [1, 1]];
    let mut s = K::zero();
    for (wi, w) in units.iter().enumerate() {
        for (ti, t) in units.iter().enumerate() {
            let q = qmul(qmul(qmul(*w, *t), qconj(*w)), qconj(*t));
            assert_eq!(&q[1..], &[0, 0, 0]);
            let mut c = lt(bc.values(), &grade[wi], &grade[ti]);
            if curls {
                c = c * lt(bc.values(), &grade[wi], &grade[wi]) * lt(bc.values(), &grade[ti], &grade[ti]);
            }
            s += &(c * k(q[0]));
        }
    }
    s
}

fn check_quaternion(f: &Frobenius<K>, tr: &K, bcs: &[Bicharacter<K>]) {
    let r = f.r().clone();
    for bc in bcs {
        let x = bicharacter_crossing(f, bc).unwrap();
        let (eta, chi) = x.eta_chi().unwrap();
        // (4 R Tr x) S / (16 R^2 Tr(x)^2)
        let norm = (k(4) * r.clone() * tr.clone()).inverse().unwrap();
        let a = f.algebra();
        assert_eq!(eta, scalar_element(a, quaternion_sum(bc, false) * norm.clone()), "{bc}");
        assert_eq!(chi, scalar_element(a, quaternion_sum(bc, true) * norm), "{bc}");
        let v = bc.values();
        let key = (v[0][0].clone(), v[1][1].clone(), v[0][1].clone());
        let one = K::one();
        let m1 = -K::one();
        for gen in 1..=3i64 {
            for p in [Parity::Even, Parity::Odd] {
                let f_val = if key == (one.clone(), one.clone(), m1.clone()) {
                    pow(&k(4), gen)
                } else if [
                    (one.clone(), one.clone(), one.clone()),
                    (one.clone(), m1.clone(), one.clone()),
                    (m1.clone(), one.clone(), one.clone()),
                    (m1.clone(), m1.clone(), m1.clone()),
                ]
                .contains(&key)
                {
                    K::one()
                } else {
                    sign(p) * pow(&k(2), gen)
                };
                let want = f_val * pow(&r, 1 - gen) * pow(tr, 1 - gen);
                assert_eq!(x.spin_invariant(gen as usize, p).unwrap(), want, "{bc} g={gen} {p}");
            }
        }
        check_graded_curl(&x, bc);
        check_projectors(&x);
    }
}

#[test]
fn quaternion_klein_gradings_all_bicharacters() {
    let klein = AbelianGroup::new(vec![2, 2]).unwrap();
    let bcs = bicharacters::<K>(&klein, 12).unwrap();
    assert_eq!(bcs.len(), 8);
    // H itself: x^2 = 4 R Tr(x) with x = 4R
    for (xv, r) in [(4, K::one()), (2, K::ratio(1, 2))] {
        let f = graded_matrix(1, Ring::HR, division_ring_grading(1, Ring::HR).unwrap(), &[xv], r);
        check_quaternion(&f, &k(xv), &bcs);
    }
}

#[test]
fn quaternion_three_by_three_parity_branch() {
    let klein = AbelianGroup::new(vec![2, 2]).unwrap();
    let f = graded_matrix(3, Ring::HR, division_ring_grading(3, Ring::HR).unwrap(), &[4, 4, -4], K::one());
    let mut values = vec![vec![K::one(); 2]; 2];
    values[1][1] = k(-1);
    values[0][1] = k(-1);
    values[1][0] = k(-1);
    check_quaternion(&f, &k(4), &[Bicharacter::new(klein, values).unwrap()]);
}

#[test]
fn pauli_gradings_match_the_clock_shift_sums() {
    for n in [2usize, 3] {
        let group = AbelianGroup::new(vec![n as u32, n as u32]).unwrap();
        let xi = K::root_of_unity(n as u32, 1);
        let ni = n as i64;
        for r in halves() {
            let f = Frobenius::fhk(Arc::new(Algebra::pauli(n).unwrap()), r.clone()).unwrap();
            for bc in bicharacters::<K>(&group, 12).unwrap() {
                let x = bicharacter_crossing(&f, &bc).unwrap();
                let (eta, chi) = x.eta_chi().unwrap();
                let v = bc.values();
                let base = xi.inverse().unwrap() * v[0][1].clone();
                let (mut se, mut sc) = (K::zero(), K::zero());
                for i in 0..ni {
                    for j in 0..ni {
                        for kk in 0..ni {
                            for l in 0..ni {
                                let c = pow(&base, (i * l - j * kk).rem_euclid(ni));
                                se += &(c.clone() * pow(&v[0][0], i * kk) * pow(&v[1][1], j * l));
                                sc += &(c * pow(&v[0][0], i + i * kk + kk) * pow(&v[1][1], j + j * l + l));
                            }
                        }
                    }
                }
                let norm = pow(&r, -2) * pow(&k(ni), -4);
                let a = f.algebra();
                assert_eq!(eta, scalar_element(a, se * norm.clone()), "{bc}");
                assert_eq!(chi, scalar_element(a, sc * norm), "{bc}");
                check_graded_curl(&x, &bc);
                if v[0][1] != xi {
                    continue;
                }
                let lam = v[0][0].clone() + v[1][1].clone();
                for gen in 1..=3i64 {
                    for p in [Parity::Even, Parity::Odd] {
                        let fv = if lam == k(-2) {
                            pow(&k(ni), -2 * gen)
                        } else if lam == k(0) {
                            sign(p) * pow(&k(ni), -gen)
                        } else {
                            K::one()
                        };
                        let want = fv * pow(&r, 2 - 2 * gen) * k(ni * ni);
                        assert_eq!(x.spin_invariant(gen as usize, p).unwrap(), want, "{bc} g={gen} {p}");
                    }
                }
            }
        }
    }
}

#[test]
fn canonical_crossing_reproduces_the_oriented_invariant() {
    let fhk = |n, ring, r: K| Frobenius::fhk(Arc::new(Algebra::matrix(n, ring)), r).unwrap();
    let models = vec![
        fhk(2, Ring::R, K::one()),
        fhk(2, Ring::CR, K::ratio(1, 2)),
        fhk(1, Ring::HR, K::one()),
        fhk(2, Ring::C, K::ratio(1, 2)),
        Frobenius::group_form(Arc::new(Algebra::group(&FiniteGroup::symmetric(3))), K::one()).unwrap(),
    ];
    for f in models {
        let x = CrossingData::canonical(f.clone());
        let rep = verify_crossing_axioms(&x);
        assert!(rep.axioms.all_passed(), "{}", rep.axioms);
        assert!(rep.curl_free);
        let (eta, chi) = x.eta_chi().unwrap();
        assert_eq!(eta, chi);
        for g in 1..=3 {
            for p in [Parity::Even, Parity::Odd] {
                assert_eq!(x.spin_invariant(g, p).unwrap(), f.closed_genus_invariant(g).unwrap());
            }
        }
        check_projectors(&x);
    }
}

#[test]
fn canonical_crossing_real_blocks_trace_formula() {
    // x_i^2 = R Tr(x_i) 1_i on each real block
    let r = K::ratio(1, 2);
    let a1 = Algebra::matrix(2, Ring::R);
    let a2 = Algebra::matrix(1, Ring::R);
    let a = Arc::new(Algebra::direct_sum(&a1, &a2));
    // block 1: x = diag(1, 1) (Tr 2, x^2 = 1 = R Tr); block 2: x = 1/2 (x^2 = 1/4 = R Tr)
    let mut x = vec![K::zero(); 5];
    x[0] = k(1);
    x[3] = k(1);
    x[4] = K::ratio(1, 2);
    let f = Frobenius::from_element(a, &x, r.clone()).unwrap();
    let c = CrossingData::canonical(f);
    let traces = [k(2), K::ratio(1, 2)];
    for g in 1..=3i64 {
        let want: K = traces
            .iter()
            .map(|t| pow(&r, 1 - g) * pow(t, 1 - g))
            .fold(K::zero(), |acc, v| acc + v);
        assert_eq!(c.spin_invariant(g as usize, Parity::Odd).unwrap(), want);
        assert_eq!(c.spin_invariant(g as usize, Parity::Even).unwrap(), want);
    }
}

#[test]
fn canonical_crossing_without_sigma_squared_identity_breaks_the_ribbon_condition() {
    // x = diag(1, 2): special for R = 2/3, sigma^2 = conjugation by x^2
    let a = Arc::new(Algebra::matrix(2, Ring::R));
    let f = Frobenius::from_element(a, &diag_element(2, 1, &[1, 2]), K::ratio(2, 3)).unwrap();
    assert!(!f.sigma_squared_is_identity());
    let x = CrossingData::canonical(f.clone());
    let rep = verify_crossing_axioms(&x);
    assert_eq!(rep.axioms.passed("the ribbon condition"), Some(false));
    assert!(matches!(x.eta_chi(), Err(Error::Axiom(_))));
    // the same data, graded: D2 is rejected up front
    let graded = graded_matrix(2, Ring::R, block_grading(2, 1).unwrap(), &[1, 2], K::ratio(2, 3));
    let err = bicharacter_crossing(&graded, &signs_bc(&AbelianGroup::cyclic(2), &[-1])).unwrap_err();
    assert!(matches!(err, Error::Axiom(ref m) if m.starts_with("D2")), "{err}");
}

#[test]
fn non_orthogonal_grades_with_a_sign_bicharacter_fail_d1() {
    let g = AbelianGroup::cyclic(2);
    let a = Arc::new(Algebra::abelian(&g));
    let f = Frobenius::new(a, vec![k(2), k(1)], K::one()).unwrap();
    let err = bicharacter_crossing(&f, &signs_bc(&g, &[-1])).unwrap_err();
    assert!(matches!(err, Error::Axiom(ref m) if m.starts_with("D1")), "{err}");
    // the trivial bicharacter is the canonical crossing and survives
    assert!(bicharacter_crossing(&f, &Bicharacter::trivial(g)).is_ok());
}

#[test]
fn ungraded_algebra_is_rejected() {
    let f = Frobenius::fhk(Arc::new(Algebra::matrix(2, Ring::R)), K::one()).unwrap();
    let err = bicharacter_crossing(&f, &signs_bc(&AbelianGroup::cyclic(2), &[-1])).unwrap_err();
    assert!(matches!(err, Error::Grading(_)));
}

#[test]
fn direct_sum_elements_are_componentwise() {
    let z2 = AbelianGroup::cyclic(2);
    let x1 = bicharacter_crossing(&group_form(&z2, K::one()), &signs_bc(&z2, &[-1])).unwrap();
    let f2 = Frobenius::fhk(Arc::new(Algebra::matrix(2, Ring::R)), K::one()).unwrap();
    let x2 = CrossingData::canonical(f2);
    let x = CrossingData::direct_sum(&x1, &x2).unwrap();
    assert!(verify_crossing_axioms(&x).axioms.all_passed());
    let (e, c) = x.eta_chi().unwrap();
    let (e1, c1) = x1.eta_chi().unwrap();
    let (e2, c2) = x2.eta_chi().unwrap();
    assert_eq!(e, [e1, e2].concat());
    assert_eq!(c, [c1, c2].concat());
    for g in 1..=3 {
        for p in [Parity::Even, Parity::Odd] {
            let want = x1.spin_invariant(g, p).unwrap() + x2.spin_invariant(g, p).unwrap();
            assert_eq!(x.spin_invariant(g, p).unwrap(), want);
        }
    }
    let x3 = CrossingData::canonical(group_form(&z2, K::ratio(1, 2)));
    assert!(CrossingData::direct_sum(&x1, &x3).is_err());
}

/// Brute force over `mu_12`-valued matrices, filtered by the three conditions.
fn brute_bicharacters(orders: &[u32]) -> Vec<Matrix<K>> {
    let p = orders.len();
    let roots: Vec<K> = (0..12).map(|e| K::root_of_unity(12, e)).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; p * p];
    loop {
        let m: Matrix<K> = (0..p).map(|i| (0..p).map(|j| roots[idx[i * p + j]].clone()).collect()).collect();
        let ok = (0..p).all(|i| {
            (0..p).all(|j| {
                pow(&m[i][j], orders[i] as i64).is_one()
                    && pow(&m[i][j], orders[j] as i64).is_one()
                    && (m[i][j].clone() * m[j][i].clone()).is_one()
            })
        });
        if ok {
            out.push(m);
        }
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return out;
            }
            idx[pos] += 1;
            if idx[pos] < 12 {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

#[test]
fn bicharacter_enumeration_matches_brute_force() {
    for orders in [vec![2u32], vec![3], vec![4], vec![2, 2], vec![2, 4], vec![3, 3]] {
        let g = AbelianGroup::new(orders.clone()).unwrap();
        let ours: Vec<Matrix<K>> = bicharacters::<K>(&g, 12).unwrap().iter().map(|b| b.values().clone()).collect();
        let brute = brute_bicharacters(&orders);
        assert_eq!(ours.len(), brute.len(), "{orders:?}");
        for m in &brute {
            assert!(ours.contains(m), "{orders:?} missing {m:?}");
        }
    }
    assert_eq!(bicharacters::<K>(&AbelianGroup::cyclic(2), 12).unwrap().len(), 2);
    assert_eq!(bicharacters::<K>(&AbelianGroup::cyclic(3), 12).unwrap().len(), 1);
    assert_eq!(bicharacters::<K>(&AbelianGroup::new(vec![2, 2]).unwrap(), 12).unwrap().len(), 8);
    assert_eq!(bicharacters_e12::<K>(&AbelianGroup::cyclic(3), 12).unwrap().len(), 3);
    assert!(bicharacters::<K>(&AbelianGroup::cyclic(13), 12).is_err());
}

#[test]
fn bicharacter_validation() {
    let g = AbelianGroup::cyclic(3);
    assert!(Bicharacter::new(g.clone(), vec![vec![K::root_of_unity(3, 1)]]).is_err());
    assert!(Bicharacter::<K>::from_signs(g, &[-1]).is_err());
    let g = AbelianGroup::new(vec![2, 2]).unwrap();
    let bad = vec![vec![k(1), k(-1)], vec![k(1), k(1)]];
    assert!(Bicharacter::new(g, bad).is_err());
}

fn arb_bicharacter() -> impl Strategy<Value = Bicharacter<K>> {
    prop::sample::select(vec![vec![2u32], vec![4], vec![6], vec![2, 2], vec![2, 4], vec![3, 6]]).prop_flat_map(|orders| {
        let g = AbelianGroup::new(orders).unwrap();
        let all = bicharacters::<K>(&g, 12).unwrap();
        prop::sample::select(all)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bicharacters_are_multiplicative(bc in arb_bicharacter(), h1 in 0usize..64, h2 in 0usize..64, l in 0usize..64) {
        let g = bc.group().clone();
        let (h1, h2, l) = (h1 % g.order(), h2 % g.order(), l % g.order());
        prop_assert_eq!(bc.eval(g.add(h1, h2), l), bc.eval(h1, l) * bc.eval(h2, l));
        prop_assert_eq!(bc.eval(l, g.add(h1, h2)), bc.eval(l, h1) * bc.eval(l, h2));
        prop_assert!((bc.eval(h1, l) * bc.eval(l, h1)).is_one());
    }

    #[test]
    fn group_crossings_satisfy_the_axioms(bc in arb_bicharacter()) {
        let f = group_form(bc.group(), K::one());
        let x = bicharacter_crossing(&f, &bc).unwrap();
        let (eta, chi) = x.eta_chi().unwrap();
        let a = f.algebra();
        prop_assert_eq!(a.mul(&eta, &eta), a.mul(&chi, &chi));
        let pe = x.preferred_elements();
        prop_assert_eq!(&pe.eta1, &pe.eta2);
        prop_assert_eq!(&pe.eta1, &pe.eta3);
        check_projectors(&x);
        check_curl_flags(&x);
    }
}

#[test]
fn ansatz_search_small_orders() {
    let two = crossing_search_cyclic::<K>(2, SearchMode::Ansatz, 1 << 20).unwrap();
    assert_eq!(two.len(), 2);
    assert_eq!(two.iter().filter(|f| f.distinguishes_parity).count(), 1);
    let sign = two.iter().find(|f| f.distinguishes_parity).unwrap();
    assert_eq!(sign.chi, sign.eta.iter().map(|v| -v.clone()).collect::<Vec<_>>());

    let three = crossing_search_cyclic::<K>(3, SearchMode::Ansatz, 1 << 20).unwrap();
    assert_eq!(three.len(), 2);
    // C (+) CZ_2 with the sign crossing: Z = 1 + P(s) 2^{1-g}
    let regraded = three.iter().find(|f| f.distinguishes_parity).unwrap();
    for (g, (e, o)) in regraded.invariants.iter().enumerate() {
        let g = g as i64 + 1;
        assert_eq!(e, &(k(1) + pow(&k(2), 1 - g)));
        assert_eq!(o, &(k(1) - pow(&k(2), 1 - g)));
    }
    let trivial = three.iter().find(|f| !f.distinguishes_parity).unwrap();
    for (g, (e, _)) in trivial.invariants.iter().enumerate() {
        let _ = g;
        assert_eq!(e, &k(3));
    }
    for n in 2..=4 {
        let fams = crossing_search_cyclic::<K>(n, SearchMode::Ansatz, 1 << 20).unwrap();
        for (i, fam) in fams.iter().enumerate() {
            assert_eq!(fam.eta.len(), n);
            assert_eq!(fam.distinguishes_parity, fam.invariants.iter().any(|(e, o)| e != o));
            assert!(fams[..i].iter().all(|other| other.invariants != fam.invariants));
        }
    }
}

#[test]
fn full_search_on_z2_matches_the_ansatz() {
    let full = crossing_search_cyclic::<K>(2, SearchMode::Full, 1 << 20).unwrap();
    let ansatz = crossing_search_cyclic::<K>(2, SearchMode::Ansatz, 1 << 20).unwrap();
    let mut a: Vec<_> = full.iter().map(|f| f.invariants.clone()).collect();
    let mut b: Vec<_> = ansatz.iter().map(|f| f.invariants.clone()).collect();
    let key = |v: &Vec<(K, K)>| format!("{v:?}");
    a.sort_by_key(key);
    b.sort_by_key(key);
    assert_eq!(a, b);
    let one = crossing_search_cyclic::<K>(1, SearchMode::Full, 16).unwrap();
    assert_eq!(one.len(), 1);
}

#[test]
fn search_limits() {
    assert!(matches!(
        crossing_search_cyclic::<K>(2, SearchMode::Full, 2),
        Err(Error::ResourceCap { .. })
    ));
    assert!(crossing_search_cyclic::<K>(3, SearchMode::Full, 1 << 20).is_err());
    assert!(crossing_search_cyclic::<K>(13, SearchMode::Ansatz, 1 << 20).is_err());
}

/// `Z_2 x S_3` with central `(1, e)` and complement `{0} x S_3`.
fn z2_s3() -> (FiniteGroup, CenterDecomposition) {
    let s3 = FiniteGroup::symmetric(3);
    let h = FiniteGroup::cyclic(2).product(&s3);
    let m = s3.order();
    let dec = CenterDecomposition { generators: vec![(m + s3.unit(), 2)], complement: (0..m).collect() };
    (h, dec)
}

#[test]
fn non_abelian_formula_matches_direct_contraction() {
    let (h, dec) = z2_s3();
    for r in halves() {
        let a = Arc::new(center_graded_algebra::<K>(&h, &dec).unwrap());
        let f = Frobenius::group_form(a, r.clone()).unwrap();
        let z2 = AbelianGroup::cyclic(2);
        for (i_choice, signs) in [(vec![], vec![1]), (vec![0], vec![-1])] {
            let x = bicharacter_crossing(&f, &signs_bc(&z2, &signs)).unwrap();
            for g in 1..=3 {
                for p in [Parity::Even, Parity::Odd] {
                    let closed = non_abelian_group_invariant(&h, &dec, &i_choice, &r, g, p).unwrap();
                    assert_eq!(closed, x.spin_invariant(g, p).unwrap(), "I={i_choice:?} g={g} {p}");
                }
            }
        }
    }
}

#[test]
fn non_abelian_formula_with_an_order_four_centre() {
    let s3 = FiniteGroup::symmetric(3);
    let h = FiniteGroup::cyclic(4).product(&s3);
    let dec = CenterDecomposition { generators: vec![(6 + s3.unit(), 4)], complement: (0..6).collect() };
    let a = Arc::new(center_graded_algebra::<K>(&h, &dec).unwrap());
    let f = Frobenius::group_form(a, K::one()).unwrap();
    let x = bicharacter_crossing(&f, &signs_bc(&AbelianGroup::cyclic(4), &[-1])).unwrap();
    for g in 1..=2 {
        for p in [Parity::Even, Parity::Odd] {
            let closed = non_abelian_group_invariant(&h, &dec, &[0], &K::one(), g, p).unwrap();
            assert_eq!(closed, x.spin_invariant(g, p).unwrap(), "g={g} {p}");
        }
    }
}

#[test]
fn non_abelian_reductions() {
    // trivial centre: the oriented group invariant
    let s3 = FiniteGroup::symmetric(3);
    let dec = CenterDecomposition { generators: vec![], complement: (0..6).collect() };
    let f = Frobenius::group_form(Arc::new(Algebra::group(&s3)), K::one()).unwrap();
    for g in 0..=3 {
        let z = non_abelian_group_invariant(&s3, &dec, &[], &K::one(), g, Parity::Odd).unwrap();
        assert_eq!(z, f.closed_genus_invariant(g).unwrap());
    }
    // |I| = 0 on Z2 x S3 is the FHK value of the whole group
    let (h, dec) = z2_s3();
    let fh = Frobenius::group_form(Arc::new(Algebra::group(&h)), K::one()).unwrap();
    for g in 1..=3 {
        let z = non_abelian_group_invariant(&h, &dec, &[], &K::one(), g, Parity::Odd).unwrap();
        assert_eq!(z, fh.closed_genus_invariant(g).unwrap());
    }
}

#[test]
fn inconsistent_center_decompositions() {
    let q8 = FiniteGroup::quaternion8();
    // -1 is central of order 2 but has no complement
    let dec = CenterDecomposition { generators: vec![(1, 2)], complement: vec![0, 2, 3] };
    let err = non_abelian_group_invariant(&q8, &dec, &[0], &K::one(), 1, Parity::Even).unwrap_err();
    assert!(matches!(err, Error::InconsistentCenterDecomposition(_)));
    let (h, mut dec) = z2_s3();
    dec.generators[0].1 = 3;
    assert!(matches!(
        non_abelian_group_invariant::<K>(&h, &dec, &[], &K::one(), 1, Parity::Even),
        Err(Error::InconsistentCenterDecomposition(_))
    ));
    let (h, mut dec) = z2_s3();
    dec.generators[0].0 = 1;
    assert!(center_graded_algebra::<K>(&h, &dec).is_err());
}

#[test]
fn invalid_spin_invariant_inputs() {
    let z2 = AbelianGroup::cyclic(2);
    let x = bicharacter_crossing(&group_form(&z2, K::one()), &signs_bc(&z2, &[-1])).unwrap();
    assert!(x.spin_invariant(0, Parity::Even).is_err());
    assert!(x.spin_invariant_with_curls(&[1]).is_err());
    assert!(x.spin_invariant_with_curls(&[0, 2]).is_err());
    let f = group_form(&z2, K::one());
    assert!(CrossingData::from_dense(f.clone(), &vec![k(1); 3]).is_err());
    assert!(CrossingData::new(f, vec![vec![(5, 0, k(1))]; 4]).is_err());
}
