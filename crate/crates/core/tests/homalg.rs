mod common;

use bsfh_core::homalg::{identity_da, trivial_algebra, CancelOrder, Kind, Structure};
use bsfh_core::invariants::{bsd, bsda};
use bsfh_core::{ops, Algebra};
use common::{arc, hd};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::sync::Arc;

fn w4() -> Arc<Algebra> {
    Algebra::new(&arc("W4.arc")).unwrap()
}

fn bsd_m1() -> Structure {
    bsd(&hd("M1.hd"), None).unwrap().structure
}

/// Adds a generator over `A(W4)` with the left idempotent of `a`.
fn gen_left_of(st: &mut Structure, name: &str, a: usize) -> usize {
    let s = st.left.left_idem(a).clone();
    st.add_gen(name, s, BTreeSet::new())
}

fn gen_right_of(st: &mut Structure, name: &str, a: usize) -> usize {
    let s = st.left.right_idem(a).clone();
    st.add_gen(name, s, BTreeSet::new())
}

#[test]
fn check_typed_reports_a_witness() {
    let alg = w4();
    let (r1, r2, r12) = (alg.parse_name("r'1").unwrap(), alg.parse_name("r'2").unwrap(), alg.parse_name("r'12").unwrap());
    assert_eq!(alg.mul_basis(r1, r2), Some(r12));
    let mut st = Structure::new("bad", alg.clone(), trivial_algebra());
    let a = gen_left_of(&mut st, "a", r1);
    let b = gen_right_of(&mut st, "b", r1);
    let c = gen_right_of(&mut st, "c", r2);
    assert_eq!(st.gens[b].left, *alg.left_idem(r2));
    // With no operations the relation holds.
    assert!(st.check_typed().unwrap().is_ok());
    st.add_term(a, vec![], r1, b);
    st.add_term(b, vec![], r2, c);
    let v = st.check_typed().unwrap().unwrap_err();
    assert_eq!(v.generator, "a");
    assert_eq!(v.terms, ["r'12 (c)"]);
}

#[test]
fn idempotent_mismatch_is_reported() {
    let alg = w4();
    let r1 = alg.parse_name("r'1").unwrap();
    let mut st = Structure::new("mismatch", alg.clone(), trivial_algebra());
    let a = gen_left_of(&mut st, "a", r1);
    let b = gen_left_of(&mut st, "b", r1);
    st.add_term(a, vec![], r1, b);
    assert!(st.check_idempotents().is_err());
}

#[test]
fn boundedness() {
    assert!(bsd_m1().is_bounded());
    let alg = w4();
    let i = alg.idempotents()[1];
    let mut st = Structure::new("loop", alg.clone(), trivial_algebra());
    let x = st.add_gen("x", alg.left_idem(i).clone(), BTreeSet::new());
    st.add_term(x, vec![], i, x);
    assert!(!st.is_bounded());
    assert!(st.reduce().is_err());
    // A DA bimodule with the same loop cannot be boxed with an unbounded structure.
    let mut da = Structure::new("daloop", alg.clone(), alg.clone());
    let y = da.add_gen("y", alg.left_idem(i).clone(), alg.left_idem(i).clone());
    da.add_term(y, vec![], i, y);
    assert!(!da.is_bounded());
    assert!(da.box_da(&st).is_err());
}

#[test]
fn identity_bimodule() {
    for name in ["W4.arc", "V4.arc"] {
        let z = arc(name);
        let id = identity_da(&z).unwrap();
        assert_eq!(id.kind(), Kind::TypeDA);
        assert!(id.check_da().is_ok());
        let alg = Algebra::new(&z).unwrap();
        assert_eq!(id.gens.len(), alg.idempotents().len());
    }
    let m1 = bsd_m1();
    let id = identity_da(&hd("M1.hd").z.reverse()).unwrap();
    let boxed = id.box_da(&m1).unwrap();
    assert!(boxed.isomorphism(&m1).is_some());
    let m3 = bsda(&hd("M3.hd"), Some(&hd("M3.hd").select_spinc("2").unwrap())).unwrap().structure;
    let twice = m3.box_da(&id).unwrap();
    assert!(twice.check_da().is_ok());
}

#[test]
fn tensor_with_zero_is_zero() {
    let m1 = bsd_m1();
    let empty_d = Structure::new("0", m1.left.clone(), trivial_algebra());
    let m3 = hd("M3.hd");
    let da = bsda(&m3, None).unwrap().structure;
    let t = da.box_da(&empty_d).unwrap();
    assert!(t.gens.is_empty() && t.num_terms() == 0);
    let empty_da = Structure::new("0", da.left.clone(), da.right.clone());
    assert!(empty_da.box_da(&m1).unwrap().gens.is_empty());
}

#[test]
fn box_rejects_mismatched_algebras() {
    let m1 = bsd_m1();
    let v4 = Algebra::new(&arc("V4.arc")).unwrap();
    let da = Structure::new("wrong", v4.clone(), v4);
    assert!(da.box_da(&m1).is_err());
    // box_tensor wants an A-infinity module on the left.
    assert!(m1.box_tensor(&m1).is_err());
}

#[test]
fn cancel_examples() {
    // Two generators with d x = y over the ground field: acyclic.
    let mut c = Structure::new("pair", trivial_algebra(), trivial_algebra());
    let x = c.add_gen("x", BTreeSet::new(), BTreeSet::new());
    let y = c.add_gen("y", BTreeSet::new(), BTreeSet::new());
    let one = c.left.idempotents()[0];
    c.add_term(x, vec![], one, y);
    let r = c.cancel(x, y).unwrap();
    assert!(r.gens.is_empty());
    assert_eq!(c.homology().unwrap(), 0);
    assert!(c.cancel(x, x).is_err());
    // A non-idempotent coefficient cannot be cancelled.
    let alg = w4();
    let r1 = alg.parse_name("r'1").unwrap();
    let mut st = Structure::new("nonidem", alg.clone(), trivial_algebra());
    let a = gen_left_of(&mut st, "a", r1);
    let b = gen_right_of(&mut st, "b", r1);
    st.add_term(a, vec![], r1, b);
    assert!(st.cancel(a, b).is_err());
    assert_eq!(st.cancellable(CancelOrder::First), None);
    // Structures with algebra inputs are refused.
    let m1a = bsfh_core::invariants::bsa(&hd("M1.hd"), None).unwrap().structure;
    assert!(m1a.cancel(0, 1).is_err());
}

#[test]
fn reduction_is_confluent_on_the_box_tensor() {
    let m3 = hd("M3.hd");
    let da = bsda(&m3, Some(&m3.select_spinc("2").unwrap())).unwrap().structure;
    let boxed = da.box_da(&bsd_m1()).unwrap();
    let first = boxed.reduce_with(CancelOrder::First).unwrap();
    let last = boxed.reduce_with(CancelOrder::Last).unwrap();
    assert!(first.isomorphism(&last).is_some());
    assert_eq!(first.gens.len(), 2);
    assert_eq!(first.cancellable(CancelOrder::First), None);
}

/// `n - 2 rank(d)` over `Z/2`, by Gaussian elimination on the matrix of `d`.
fn homology_rank_oracle(st: &Structure) -> usize {
    let n = st.gens.len();
    let mut rows: Vec<Vec<bool>> = (0..n)
        .map(|x| {
            let mut r = vec![false; n];
            for &(_, y) in st.terms(x, &[]).into_iter().flatten() {
                r[y] ^= true;
            }
            r
        })
        .collect();
    let mut rank = 0;
    for col in 0..n {
        if let Some(p) = (rank..n).find(|&i| rows[i][col]) {
            rows.swap(rank, p);
            for i in 0..n {
                if i != rank && rows[i][col] {
                    let pivot = rows[rank].clone();
                    for (a, b) in rows[i].iter_mut().zip(pivot) {
                        *a ^= b;
                    }
                }
            }
            rank += 1;
        }
    }
    n - 2 * rank
}

/// Rewrites a structure without inputs in the basis `x_i' = x_i + x_j`
/// (`x_i`, `x_j` with equal idempotents). The result is isomorphic.
fn change_basis(st: &Structure, i: usize, j: usize) -> Structure {
    let mut out = Structure::new(st.name.clone(), st.left.clone(), st.right.clone());
    for g in &st.gens {
        out.add_gen(g.name.clone(), g.left.clone(), g.right.clone());
    }
    let image = |x: usize| -> Vec<(usize, usize)> {
        let mut v = Vec::new();
        for &(a, y) in st.terms(x, &[]).into_iter().flatten() {
            v.push((a, y));
            if y == i {
                v.push((a, j));
            }
        }
        v
    };
    for x in 0..st.gens.len() {
        let mut terms = image(x);
        if x == i {
            terms.extend(image(j));
        }
        for (a, y) in terms {
            out.add_term(x, vec![], a, y);
        }
    }
    out
}

fn direct_sum(st: &mut Structure, piece: &Structure, tag: usize) {
    let base = st.gens.len();
    for g in &piece.gens {
        st.add_gen(format!("{}{}", g.name, tag), g.left.clone(), g.right.clone());
    }
    for ((x, _), terms) in &piece.ops {
        for &(a, y) in terms {
            st.add_term(base + x, vec![], a, base + y);
        }
    }
}

/// Direct sum of copies of `pieces` and acyclic pairs, scrambled by basis
/// changes, together with the sum of the reduced pieces and whether any
/// basis change was applied.
fn random_structure(rng: &mut ChaCha8Rng, pieces: &[Structure]) -> (Structure, Structure, bool) {
    let alg = pieces[0].left.clone();
    let mut st = Structure::new("random", alg.clone(), pieces[0].right.clone());
    let mut expected = st.clone();
    for k in 0..rng.gen_range(1..=3) {
        let p = &pieces[rng.gen_range(0..pieces.len())];
        direct_sum(&mut st, p, k);
        direct_sum(&mut expected, &p.reduce().unwrap(), k);
    }
    let idems = alg.idempotents();
    for k in 0..rng.gen_range(0..=3) {
        let i = idems[rng.gen_range(0..idems.len())];
        let x = st.add_gen(format!("p{}", k), alg.left_idem(i).clone(), BTreeSet::new());
        let y = st.add_gen(format!("q{}", k), alg.left_idem(i).clone(), BTreeSet::new());
        st.add_term(x, vec![], i, y);
    }
    let mut scrambled = false;
    for _ in 0..rng.gen_range(0..=8) {
        let i = rng.gen_range(0..st.gens.len());
        let j = rng.gen_range(0..st.gens.len());
        if i != j && st.gens[i].left == st.gens[j].left {
            st = change_basis(&st, i, j);
            scrambled = true;
        }
    }
    (st, expected, scrambled)
}

#[test]
fn cancellation_preserves_relations_on_random_structures() {
    let m3 = hd("M3.hd");
    let boxed = bsda(&m3, Some(&m3.select_spinc("2").unwrap())).unwrap().structure.box_da(&bsd_m1()).unwrap();
    let m2 = bsd(&hd("M2.hd"), None).unwrap().structure;
    assert!(*boxed.left == *m2.left);
    let pieces = [m2, boxed];
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let (mut cancelled, mut strict) = (0, 0);
    for _ in 0..100 {
        let (st, expected, scrambled) = random_structure(&mut rng, &pieces);
        assert!(st.check_typed().unwrap().is_ok());
        assert!(st.is_bounded());
        let mut cur = st.clone();
        while let Some((x, y)) = cur.cancellable(if rng.gen_bool(0.5) { CancelOrder::First } else { CancelOrder::Last }) {
            cur = cur.cancel(x, y).unwrap();
            let r = cur.check_typed().unwrap();
            assert!(r.is_ok(), "{}", r.unwrap_err());
            cancelled += 1;
        }
        // Reduced models agree up to a change of basis; without one, up to relabeling.
        let idems = |x: &Structure| -> Vec<BTreeSet<usize>> {
            let mut v: Vec<_> = x.gens.iter().map(|g| g.left.clone()).collect();
            v.sort();
            v
        };
        assert_eq!(idems(&cur), idems(&expected));
        assert_eq!(cur.cancellable(CancelOrder::First), None);
        if !scrambled {
            assert!(cur.isomorphism(&expected).is_some(), "{} vs {}", cur.pretty(), expected.pretty());
            strict += 1;
        }
    }
    assert!(strict > 0);
    assert!(cancelled >= 100, "{}", cancelled);
}

#[test]
fn homology_of_random_complexes() {
    let k = trivial_algebra();
    let one = k.idempotents()[0];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let mut c = Structure::new("c", k.clone(), k.clone());
        let free = rng.gen_range(0..4);
        let pairs = rng.gen_range(0..4);
        for i in 0..free {
            c.add_gen(format!("h{}", i), BTreeSet::new(), BTreeSet::new());
        }
        for i in 0..pairs {
            let x = c.add_gen(format!("x{}", i), BTreeSet::new(), BTreeSet::new());
            let y = c.add_gen(format!("y{}", i), BTreeSet::new(), BTreeSet::new());
            c.add_term(x, vec![], one, y);
        }
        for _ in 0..rng.gen_range(0..10) {
            let n = c.gens.len();
            if n < 2 {
                break;
            }
            let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if i != j {
                c = change_basis(&c, i, j);
            }
        }
        assert!(c.check_typed().unwrap().is_ok());
        assert_eq!(homology_rank_oracle(&c), free);
        assert_eq!(c.homology().unwrap(), free);
    }
}

#[test]
fn graded_homology() {
    let k = trivial_algebra();
    let one = k.idempotents()[0];
    let mut c = Structure::new("c", k.clone(), k.clone());
    for n in ["a", "b", "c"] {
        c.add_gen(n, BTreeSet::new(), BTreeSet::new());
    }
    c.add_term(0, vec![], one, 1);
    let h = c.homology_graded(&[1, 0, 0]).unwrap();
    assert_eq!(h.into_iter().collect::<Vec<_>>(), [(0, 1)]);
    assert!(c.homology_graded(&[0, 0, 0]).is_err());
    // Homology is only defined for complexes.
    assert!(bsd_m1().homology().is_err());
}

#[test]
fn ops_files_round_trip() {
    let m3 = hd("M3.hd");
    let structures = vec![
        bsd_m1(),
        bsfh_core::invariants::bsa(&hd("M1.hd"), None).unwrap().structure,
        bsda(&m3, None).unwrap().structure,
        identity_da(&arc("V4.arc")).unwrap(),
        bsfh_core::invariants::sfc(&hd("W.hd").glue(&hd("T.hd"), &[("W", "T")]).unwrap(), None).unwrap().structure,
    ];
    for st in structures {
        let text = ops::export(&st);
        let back = ops::import(&text).unwrap();
        assert_eq!(back.term_table(), st.term_table(), "{}", st.name);
        assert_eq!(back.gens, st.gens);
        assert_eq!(ops::export(&back), text);
    }
    for name in ["M1.bsd.ops", "M1.bsa.ops", "M2.bsd.ops", "M3.s2.bsda.ops", "M3.s2.box.M1.ops", "P.bsd.ops", "T.top.bsd.ops"] {
        let text = std::fs::read_to_string(common::fixture_path(name)).unwrap();
        assert_eq!(ops::export(&ops::import(&text).unwrap()), text, "{}", name);
    }
    assert!(ops::import("nonsense line\n").is_err());
}
