use std::sync::Arc;

use num_traits::{One, Zero};
use proptest::prelude::*;
use statesum::algebra::{Algebra, Ring};
use statesum::engine::{evaluate, evaluate_naive, verify_pachner, DEFAULT_CAP};
use statesum::error::Error;
use statesum::frobenius::Frobenius;
use statesum::km::{standard_involution, InvolutionKind};
use statesum::surface::Triangulation;
use statesum::{Cyclo, Scalar};

type K = Cyclo;

fn k(n: i64) -> K {
    K::from_int(n)
}

fn pow(x: &K, e: i64) -> K {
    x.powi(e).unwrap()
}

fn fhk(n: usize, ring: Ring, r: K) -> Frobenius<K> {
    Frobenius::fhk(Arc::new(Algebra::matrix(n, ring)), r).unwrap()
}

fn cyclic(m: usize, r: K) -> Frobenius<K> {
    Frobenius::group_form(Arc::new(Algebra::cyclic(m)), r).unwrap()
}

fn value(t: &Triangulation, f: &Frobenius<K>) -> K {
    evaluate(t, f, None, DEFAULT_CAP).unwrap().value
}

/// Closed-form genus-`g` values for simple matrix blocks and cyclic group algebras.
fn closed_form_matrix(n: usize, ring: Ring, r: &K, g: i64) -> K {
    let f = match ring {
        Ring::R | Ring::C => k(1),
        Ring::CR => k(2),
        Ring::HR => pow(&k(2), 2 - 2 * g),
    };
    pow(r, 2 - 2 * g) * f * pow(&k(n as i64), 2 - 2 * g)
}

#[test]
fn brute_force_matches_closed_forms() {
    let mut models: Vec<(Frobenius<K>, Box<dyn Fn(&K, i64) -> K>)> = Vec::new();
    for r in [K::one(), K::ratio(1, 2)] {
        for (n, ring) in [(1, Ring::R), (2, Ring::R), (3, Ring::R), (1, Ring::CR), (2, Ring::CR), (1, Ring::HR), (2, Ring::C), (3, Ring::C)] {
            models.push((fhk(n, ring, r.clone()), Box::new(move |r: &K, g| closed_form_matrix(n, ring, r, g))));
        }
        for m in [2usize, 3, 6] {
            models.push((cyclic(m, r.clone()), Box::new(move |r: &K, g| pow(r, 2 - 2 * g) * k(m as i64))));
        }
    }
    for (f, want) in &models {
        assert!(f.dim() <= 9);
        for g in 0..=2usize {
            let rep = evaluate(&Triangulation::genus_surface(g), f, None, DEFAULT_CAP).unwrap();
            assert_eq!(rep.value, want(f.r(), g as i64), "dim {} g {g}", f.dim());
            assert_eq!(rep.value, f.closed_genus_invariant(g).unwrap());
            assert!(rep.multiplications <= DEFAULT_CAP);
        }
    }
}

#[test]
fn sphere_and_torus_values() {
    let rep = evaluate(&Triangulation::sphere(), &fhk(2, Ring::C, K::one()), None, DEFAULT_CAP).unwrap();
    assert_eq!(rep.value, k(4));
    assert_eq!(rep.counts, (3, 3, 2));
    assert!(!rep.contraction_order.is_empty());
    for n in 1..=3 {
        for r in [K::one(), K::ratio(1, 3), k(5)] {
            assert_eq!(value(&Triangulation::genus_surface(1), &fhk(n, Ring::C, r)), k(1));
        }
    }
}

#[test]
fn fan_convention_does_not_matter() {
    let f = fhk(2, Ring::R, K::ratio(1, 2));
    for g in 1..=2 {
        assert_eq!(value(&Triangulation::genus_surface(g), &f), value(&Triangulation::genus_surface_alt(g), &f));
    }
}

#[test]
fn naive_sum_agrees_with_contraction() {
    for f in [fhk(1, Ring::CR, K::ratio(1, 2)), cyclic(3, K::ratio(1, 2)), fhk(2, Ring::R, K::one())] {
        for t in [Triangulation::sphere(), Triangulation::genus_surface(1)] {
            assert_eq!(evaluate_naive(&t, &f, None).unwrap(), value(&t, &f));
        }
    }
}

#[test]
fn global_orientation_reversal() {
    let f = fhk(2, Ring::CR, K::ratio(1, 2));
    for g in 0..=2 {
        let t = Triangulation::genus_surface(g);
        let mut flipped = t.clone();
        for tri in 0..t.triangle_count() {
            flipped = flipped.flip_triangle_orientation(tri).unwrap();
        }
        assert_eq!(flipped.opposite_count(), 0);
        assert_eq!(value(&flipped, &f), value(&t, &f));
    }
}

#[test]
fn semi_orientation_independence() {
    let f = fhk(2, Ring::R, K::ratio(1, 2));
    let inv = standard_involution(&f, &InvolutionKind::Transpose).unwrap();
    let s = inv.s_matrix();
    for t in [Triangulation::genus_surface(1), Triangulation::nonorientable_surface(2)] {
        let base = evaluate(&t, &f, Some(s), DEFAULT_CAP).unwrap().value;
        for tri in 0..t.triangle_count() {
            let flipped = t.flip_triangle_orientation(tri).unwrap();
            assert_eq!(evaluate(&flipped, &f, Some(s), DEFAULT_CAP).unwrap().value, base);
        }
    }
}

#[test]
fn evaluation_errors() {
    let f = fhk(2, Ring::R, K::one());
    let klein = Triangulation::nonorientable_surface(2);
    assert!(matches!(evaluate(&klein, &f, None, DEFAULT_CAP), Err(Error::Invalid(_))));
    assert!(matches!(
        evaluate(&Triangulation::genus_surface(2), &f, None, 10),
        Err(Error::ResourceCap { cap: 10, .. })
    ));
    let eps: Vec<K> = f.eps().iter().map(|x| x.clone() * k(2)).collect();
    let broken = Frobenius::new(f.algebra().clone(), eps, K::one()).unwrap();
    assert!(matches!(evaluate(&Triangulation::sphere(), &broken, None, DEFAULT_CAP), Err(Error::NotSpecial)));
}

#[test]
fn boundary_tensor_of_a_disk() {
    // one triangle: the boundary tensor is C itself
    let f = fhk(2, Ring::R, K::one());
    let t = Triangulation::new(vec![true], &[]).unwrap();
    let rep = evaluate(&t, &f, None, DEFAULT_CAP).unwrap();
    let b = rep.boundary.expect("open surface");
    assert_eq!(b.legs, vec![0, 1, 2]);
    let n = f.dim();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                assert_eq!(b.get(&[x as u16, y as u16, z as u16]), f.c3()[(x * n + y) * n + z]);
            }
        }
    }
}

#[test]
fn pachner_checks_on_standard_constructions() {
    let models = vec![
        fhk(3, Ring::C, K::one()),
        fhk(2, Ring::CR, K::ratio(1, 2)),
        fhk(1, Ring::HR, K::one()),
        cyclic(4, K::ratio(1, 2)),
    ];
    for f in models {
        let rep = verify_pachner(&f);
        assert!(rep.all_passed(), "{rep}");
    }
}

#[test]
fn pachner_checks_detect_broken_data() {
    let f = fhk(2, Ring::R, K::one());
    let eps: Vec<K> = f.eps().iter().map(|x| x.clone() * k(2)).collect();
    let scaled = Frobenius::new(f.algebra().clone(), eps, K::one()).unwrap();
    let rep = verify_pachner(&scaled);
    assert_eq!(rep.passed("pachner 2-2"), Some(true));
    assert_eq!(rep.passed("pachner 1-3"), Some(false));

    let rep = verify_pachner(&non_associative());
    assert_eq!(rep.passed("pachner 2-2"), Some(false));
}

/// Basis `1, x, y` with `x^2 = x`, `y^2 = y`, `xy = 1`, `yx = 0`: `(xy)x != x(yx)`.
fn non_associative() -> Frobenius<K> {
    let mult = vec![
        vec![vec![(0, k(1))], vec![(1, k(1))], vec![(2, k(1))]],
        vec![vec![(1, k(1))], vec![(1, k(1))], vec![(0, k(1))]],
        vec![vec![(2, k(1))], vec![], vec![(2, k(1))]],
    ];
    let labels = ["1", "x", "y"].map(String::from).to_vec();
    let a = Algebra::from_structure(labels, mult, vec![k(1), K::zero(), K::zero()]).unwrap();
    assert!(a.check_associativity().is_err());
    Frobenius::new(Arc::new(a), vec![K::zero(), k(1), k(1)], K::one()).unwrap()
}

fn moves(t: &Triangulation, seq: &[(u8, usize)]) -> Triangulation {
    let mut t = t.clone();
    for &(kind, pick) in seq {
        let nt = t.triangle_count();
        let next = match kind {
            0 => t.pachner_13(pick % nt),
            1 => t.pachner_22(((pick / 3) % nt, pick % 3)),
            _ => t.pachner_31((pick % (3 * nt)) / 3, pick % 3),
        };
        if let Ok(n) = next {
            t = n;
        }
    }
    t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn triangulation_independence(
        g in 0usize..=2,
        seq in prop::collection::vec((0u8..3, 0usize..64), 1..6),
        which in 0usize..3,
    ) {
        let f = match which {
            0 => fhk(2, Ring::R, K::ratio(1, 2)),
            1 => cyclic(3, K::ratio(1, 3)),
            _ => fhk(1, Ring::CR, K::one()),
        };
        let t = Triangulation::genus_surface(g);
        let moved = moves(&t, &seq);
        prop_assert_eq!(moved.euler_characteristic(), t.euler_characteristic());
        prop_assert_eq!(value(&moved, &f), f.closed_genus_invariant(g).unwrap());
    }
}
