mod common;

use bsfh_core::strands::{idem_name, strand_generators, sum_mul, tensor_join, Elem, StrandSum};
use bsfh_core::{AlgElement, Algebra, ArcDiagram, Strands};
use common::{arc, arc_diagram};
use proptest::prelude::*;
use std::collections::BTreeSet;
use std::sync::Arc;

fn set(v: &[usize]) -> BTreeSet<usize> {
    v.iter().copied().collect()
}

fn one(x: usize) -> Elem {
    [x].into_iter().collect()
}

/// Interval multiplicities of a chord set, counted directly.
fn interval_oracle(n: usize, chords: &[(usize, usize)]) -> Vec<i64> {
    let mut h = vec![0i64; n];
    for &(lo, hi) in chords {
        for slot in h.iter_mut().take(hi).skip(lo) {
            *slot += 1;
        }
    }
    h
}

#[test]
fn w4_and_v4_tables() {
    let w = Algebra::new(&arc("W4.arc")).unwrap();
    let dims: Vec<usize> = (0..=3).map(|i| w.summand(i).len()).collect();
    assert_eq!(dims, [1, 6, 7, 1]);
    let id = |a: &Algebra, n: &str| a.parse_name(n).unwrap();
    assert_eq!(w.mul_basis(id(&w, "r'1"), id(&w, "r'2")), Some(id(&w, "r'12")));
    assert_eq!(w.diff_basis(id(&w, "r''12")), one(id(&w, "r''2r''1")));
    // The only nontrivial product in A(W4, 1).
    let s1 = w.summand(1);
    let mut products = Vec::new();
    for &a in &s1 {
        for &b in &s1 {
            if !w.is_idempotent(a) && !w.is_idempotent(b) {
                if let Some(c) = w.mul_basis(a, b) {
                    products.push((w.name(a), w.name(b), w.name(c)));
                }
            }
        }
    }
    assert_eq!(products, [("r'1".to_string(), "r'2".to_string(), "r'12".to_string())]);

    let v = Algebra::new(&arc("V4.arc")).unwrap();
    let dims: Vec<usize> = (0..=3).map(|i| v.summand(i).len()).collect();
    assert_eq!(dims, [1, 5, 6, 1]);
    assert!((0..v.len()).all(|a| v.diff_basis(a).is_empty()));
    // The three idempotents of A(V4, 2) are distinct.
    let idems: Vec<String> = v.summand(2).into_iter().filter(|&a| v.is_idempotent(a)).map(|a| v.name(a)).collect();
    assert_eq!(idems, ["I12", "I13", "I23"]);
}

#[test]
fn chord_element_examples() {
    let wz = arc("W4.arc");
    let w = Algebra::new(&wz).unwrap();
    let rho2 = wz.chord(1, 2).unwrap();
    let rho12 = wz.chord(0, 2).unwrap();
    assert_eq!(w.chord_element(&[rho2], &set(&[0])).unwrap(), Some(w.parse_name("r''2").unwrap()));
    for s in [set(&[]), set(&[0]), set(&[0, 1, 2])] {
        assert_eq!(w.chord_element(&[], &s).unwrap(), Some(w.idem_id(&s)));
    }
    // s meets the pairs of the chord.
    assert!(w.chord_element(&[rho2], &set(&[1])).is_err());
    assert_eq!(w.chord_sum(&[rho12], 2), one(w.parse_name("r''12").unwrap()));
    assert_eq!(w.chord_sum(&[rho12], 1), one(w.parse_name("r'12").unwrap()));
    // Two chord pairs plus two more strands do not fit in three pairs.
    assert!(w.chord_sum(&[rho12], 3).is_empty());

    let vz = arc("V4.arc");
    let v = Algebra::new(&vz).unwrap();
    let (s1, s2) = (vz.chord(1, 2).unwrap(), vz.chord(3, 4).unwrap());
    let both = v.chord_element(&[s1, s2], &set(&[])).unwrap().unwrap();
    assert_eq!(Some(both), v.mul_basis(v.parse_name("s''2").unwrap(), v.parse_name("s''1").unwrap()));
    assert_eq!(v.name(both), "s''2s''1");
}

#[test]
fn homology_classes_match_interval_counts() {
    for name in ["W4.arc", "V4.arc"] {
        let z = arc(name);
        let a = Algebra::new(&z).unwrap();
        for id in 0..a.len() {
            let chords: Vec<(usize, usize)> = a.basis_elem(id).chords.iter().map(|c| (c.lo, c.hi)).collect();
            assert_eq!(a.hclass(id), interval_oracle(z.num_points(), &chords));
        }
    }
}

#[test]
fn summand_zero_is_the_empty_idempotent() {
    for name in ["W4.arc", "V4.arc"] {
        let a = Algebra::new(&arc(name)).unwrap();
        let s0 = a.summand(0);
        assert_eq!(s0.len(), 1);
        assert_eq!(a.name(s0[0]), "I()");
    }
}

#[test]
fn idempotents_are_orthogonal() {
    let a = Algebra::new(&arc("W4.arc")).unwrap();
    for i in a.idempotents() {
        for j in a.idempotents() {
            let p = a.mul_basis(i, j);
            assert_eq!(p, (i == j).then_some(i), "{} {}", idem_name(a.left_idem(i)), idem_name(a.left_idem(j)));
            let si = a.expand(i);
            let sj = a.expand(j);
            let strand = sum_mul(&si, &sj);
            assert_eq!(strand, if i == j { si.clone() } else { StrandSum::new() });
        }
        assert!(a.diff_basis(i).is_empty());
    }
}

#[test]
fn basis_is_closed_at_strand_level() {
    for name in ["W4.arc", "V4.arc"] {
        let a = Algebra::new(&arc(name)).unwrap();
        for x in 0..a.len() {
            let dx: StrandSum = bsfh_core::strands::sum_diff(&a.expand(x));
            let back: StrandSum = a.diff_basis(x).iter().flat_map(|&d| a.expand(d)).collect();
            assert_eq!(dx, back, "d {}", a.name(x));
            for y in 0..a.len() {
                let p = sum_mul(&a.expand(x), &a.expand(y));
                let q = a.mul_basis(x, y).map(|c| a.expand(c)).unwrap_or_default();
                assert_eq!(p, q, "{} * {}", a.name(x), a.name(y));
            }
        }
    }
}

#[test]
fn associativity_on_a_4_2() {
    let gens = strand_generators(&[4], 2);
    let mut nonzero = 0;
    for a in &gens {
        for b in &gens {
            for c in &gens {
                let l = a.mul(b).and_then(|ab| ab.mul(c));
                let r = b.mul(c).and_then(|bc| a.mul(&bc));
                assert_eq!(l, r, "{} {} {}", a, b, c);
                nonzero += usize::from(l.is_some());
            }
        }
    }
    assert!(nonzero > 0);
}

#[test]
fn d_squared_on_a_5_2() {
    for g in strand_generators(&[5], 2) {
        let one: StrandSum = [g.clone()].into_iter().collect();
        let dd = bsfh_core::strands::sum_diff(&bsfh_core::strands::sum_diff(&one));
        assert!(dd.is_empty(), "{}", g);
    }
}

#[test]
fn ambient_mismatch_is_an_error() {
    let w = Arc::new(arc("W4.arc"));
    let v = Arc::new(arc("V4.arc"));
    let x = AlgElement::zero(w);
    let y = AlgElement::zero(v);
    assert!(x.multiply(&y).is_err());
    assert!(x.add(&y).is_err());
}

#[test]
fn tensor_split_round_trips_on_w4_union_v4() {
    let wz = arc("W4.arc");
    let u = Arc::new(wz.union(&arc("V4.arc")));
    let a = Algebra::new(&u).unwrap();
    let n1 = wz.num_points();
    let mut count = 0;
    for e in a.basis(&u, 2) {
        let (l, r) = e.tensor_split(n1).unwrap();
        assert_eq!(tensor_join(&l, &r, n1), e.terms);
        count += 1;
    }
    assert!(count > 0);
    // Idempotents split into idempotents.
    let s = set(&[0, 4]);
    let e = a.to_element(&u, &one(a.idem_id(&s)));
    let (l, r) = e.tensor_split(n1).unwrap();
    assert!(l.iter().all(|t| t.0.iter().all(|(p, q)| p == q)));
    assert!(r.iter().all(|t| t.0.iter().all(|(p, q)| p == q)));
    // A sum that is not a pure tensor.
    let mut bad = e.clone();
    bad.terms.insert(Strands::new(vec![(0, 0)]));
    assert!(bad.tensor_split(n1).is_err());
}

proptest! {
    #[test]
    fn algebra_laws_on_random_diagrams(z in arc_diagram()) {
        let a = Algebra::new(&z).unwrap();
        prop_assert!(a.axiom_violations().is_empty());
        for x in 0..a.len() {
            for d in a.diff_basis(x) {
                prop_assert_eq!(a.hclass(d), a.hclass(x));
            }
            for y in 0..a.len() {
                if let Some(p) = a.mul_basis(x, y) {
                    let sum: Vec<i64> = a.hclass(x).iter().zip(a.hclass(y)).map(|(u, v)| u + v).collect();
                    prop_assert_eq!(a.hclass(p), sum);
                }
            }
        }
    }

    #[test]
    fn reversal_preserves_dimensions(z in arc_diagram()) {
        let a = Algebra::new(&z).unwrap();
        let b = Algebra::new(&z.reverse()).unwrap();
        for i in 0..=z.num_pairs {
            prop_assert_eq!(a.summand(i).len(), b.summand(i).len());
        }
    }
}

#[test]
fn degenerate_diagrams_have_no_algebra() {
    let z = ArcDiagram::parse("segment Z\npoint a\npoint b\nmatch a b\n").unwrap();
    assert!(Algebra::new(&z).is_err());
}
