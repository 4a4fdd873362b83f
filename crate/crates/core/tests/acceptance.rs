//! One line per acceptance criterion; exits nonzero if any fails.

mod common;

use bsfh_core::homalg::Structure;
use bsfh_core::invariants::{bsa, bsd, bsda, sfc};
use bsfh_core::strands::axiom_violations;
use bsfh_core::{ops, Algebra, GradingCoset, GradingElement, GradingGroup, Half, Stabilizer};
use common::{arc, fixture_invariants, fixture_path, fuzz_check, hd, relation_failure};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::Instant;

type Outcome = Result<String, String>;
type Row = (String, Vec<String>, String, String);

fn ensure(cond: bool, witness: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(witness())
    }
}

fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    (1..=n)
        .flat_map(|first| {
            compositions(n - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

fn table(st: &Structure) -> BTreeSet<Row> {
    st.term_table()
}

fn row(x: &str, inputs: &[&str], a: &str, y: &str) -> Row {
    (x.into(), inputs.iter().map(|s| s.to_string()).collect(), a.into(), y.into())
}

fn fixture_ops(name: &str) -> Structure {
    ops::import(&std::fs::read_to_string(fixture_path(name)).unwrap()).unwrap()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut algebras = 0;
    for n in 1..=5 {
        for sizes in compositions(n) {
            for k in 0..=n {
                let bad = axiom_violations(&sizes, k);
                ensure(bad.is_empty(), || format!("A({:?};{}): {}", sizes, k, bad[0]))?;
                algebras += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {:.1} s", secs))?;
    Ok(format!("{} algebras in {:.2} s", algebras, secs))
}

fn criterion_2() -> Outcome {
    let w = Algebra::new(&arc("W4.arc")).unwrap();
    let v = Algebra::new(&arc("V4.arc")).unwrap();
    let dims = |a: &Algebra| (0..=a.z.num_pairs).map(|i| a.summand(i).len()).collect::<Vec<_>>();
    ensure(dims(&w) == [1, 6, 7, 1], || format!("W4 {:?}", dims(&w)))?;
    ensure(dims(&v) == [1, 5, 6, 1], || format!("V4 {:?}", dims(&v)))?;
    let id = |a: &Algebra, n: &str| a.parse_name(n).unwrap();
    ensure(w.mul_basis(id(&w, "r'1"), id(&w, "r'2")) == Some(id(&w, "r'12")), || "r'1 r'2".into())?;
    let d = w.diff_basis(id(&w, "r''12"));
    ensure(d == [id(&w, "r''2r''1")].into_iter().collect(), || w.elem_name(&d))?;
    ensure((0..v.len()).all(|a| v.diff_basis(a).is_empty()), || "V4 has a differential".into())?;
    Ok("W4 (1,6,7,1), V4 (1,5,6,1)".into())
}

fn criterion_3() -> Outcome {
    let m1 = hd("M1.hd");
    let d = bsd(&m1, None).unwrap().structure;
    ensure(table(&d) == [row("y", &[], "r''2", "x")].into(), || format!("{:?}", table(&d)))?;
    let a = bsa(&m1, None).unwrap().structure;
    ensure(table(&a) == [row("y", &["-r'2"], "I()", "x")].into(), || format!("{:?}", table(&a)))?;
    let m3 = hd("M3.hd");
    let da = |k: &str| bsda(&m3, Some(&m3.select_spinc(k).unwrap())).unwrap().structure;
    let s2 = da("2");
    let want: BTreeSet<_> = [
        row("fbh", &[], "s''2", "fch"),
        row("fbh", &["r''1"], "I12", "agh"),
        row("fgd", &[], "s''1", "fge"),
        row("fgd", &["r''2"], "I13", "fch"),
    ]
    .into();
    ensure(table(&s2) == want, || format!("{:?}", table(&s2)))?;
    ensure(table(&s2) == table(&fixture_ops("M3.s2.bsda.ops")), || "fixture differs".into())?;
    for k in ["0", "3"] {
        let s = da(k);
        ensure(s.gens.len() == 1 && s.num_terms() == 0, || format!("s{}: {}", k, s.pretty()))?;
    }
    Ok("M1 delta and m2, four operations on s2, s0 and s3 trivial".into())
}

fn criterion_4() -> Outcome {
    let m3 = hd("M3.hd");
    let da = bsda(&m3, Some(&m3.select_spinc("2").unwrap())).unwrap().structure;
    let boxed = da.box_da(&bsd(&hd("M1.hd"), None).unwrap().structure).unwrap();
    ensure(boxed.gens.len() == 4, || boxed.pretty())?;
    let want: BTreeSet<_> = [row("fbh*x", &[], "s''2", "fch*x"), row("fgd*y", &[], "I13", "fch*x"), row("fgd*y", &[], "s''1", "fge*y")].into();
    ensure(table(&boxed) == want, || boxed.pretty())?;
    let reduced = boxed.reduce().unwrap();
    let m2 = bsd(&hd("M2.hd"), None).unwrap().structure;
    ensure(reduced.isomorphism(&m2).is_some(), || reduced.pretty())?;
    Ok("4 generators, reduced box tensor isomorphic to BSD(M2)".into())
}

fn criterion_5() -> Outcome {
    let fixtures = fixture_invariants();
    for (name, h, inv) in &fixtures {
        if let Some(f) = relation_failure(&inv.structure) {
            return Err(format!("{}: {}", name, f));
        }
        let bad = inv.grading_violations(h).map_err(|e| e.to_string())?;
        ensure(bad.is_empty(), || format!("{} grading: {:?}", name, bad))?;
    }
    ensure(fixtures.len() >= 10, || format!("{} fixture structures", fixtures.len()))?;
    let rep = fuzz_check(7, 120, 80, 3);
    ensure(rep.failures.is_empty(), || rep.failures[0].clone())?;
    ensure(rep.diagrams == 200, || format!("{} diagrams", rep.diagrams))?;
    Ok(format!("{} fixture structures, {} fuzzed diagrams ({} structures, {} terms)", fixtures.len(), rep.diagrams, rep.structures, rep.terms))
}

fn criterion_6() -> Outcome {
    let w = hd("W.hd");
    let aw = bsa(&w, None).unwrap().structure;
    let mut terms = 0;
    for name in ["T", "P"] {
        let other = hd(&format!("{}.hd", name));
        let glued = w.glue(&other, &[("W", name)]).unwrap();
        let c = sfc(&glued, None).unwrap().structure;
        let b = aw.box_tensor(&bsd(&other, None).unwrap().structure).unwrap();
        let strip = |t: BTreeSet<Row>| -> BTreeSet<(String, String)> { t.into_iter().map(|(x, _, _, y)| (x.replace('*', ""), y.replace('*', ""))).collect() };
        let gens = |s: &Structure| -> BTreeSet<String> { s.gens.iter().map(|g| g.name.replace('*', "")).collect() };
        ensure(gens(&c) == gens(&b), || format!("W u {}: generators {:?} vs {:?}", name, gens(&c), gens(&b)))?;
        ensure(strip(table(&c)) == strip(table(&b)), || format!("W u {}: {} vs {}", name, c.pretty(), b.pretty()))?;
        terms += c.num_terms();
    }
    Ok(format!("W u T and W u P agree term for term ({} terms)", terms))
}

fn random_element(rng: &mut ChaCha8Rng, g: &GradingGroup) -> GradingElement {
    let n = g.z.num_points();
    let hclass = (0..n).map(|p| if g.is_interval(p) { rng.gen_range(-1..=1) } else { 0 }).collect();
    GradingElement { maslov: Half(rng.gen_range(-4..=4)), hclass }
}

fn criterion_7() -> Outcome {
    const DEPTH: usize = 8;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let groups: Vec<GradingGroup> = ["W4.arc", "V4.arc", "Zk.arc"].iter().map(|n| GradingGroup::new(Arc::new(arc(n)))).collect();
    let mut checks = 0;
    for trial in 0..300 {
        let g = &groups[trial % groups.len()];
        let gens: Vec<GradingElement> = (0..rng.gen_range(0..=2)).map(|_| random_element(&mut rng, g)).collect();
        let s = Arc::new(Stabilizer::new(g.clone(), gens.clone()));
        let x = random_element(&mut rng, g);
        let h = random_element(&mut rng, g);
        let c = GradingCoset::new(x.clone(), s.clone());
        let exact = |a: &GradingCoset, b: &GradingCoset| a.coset_equal(b).unwrap();
        let words = |a: &GradingCoset, b: &GradingCoset| a.coset_equal_within_words(b, DEPTH).unwrap();
        ensure(exact(&c, &c) && words(&c, &c), || "c ~ c".into())?;
        let mut p = g.identity();
        if !gens.is_empty() {
            for _ in 0..rng.gen_range(0..=4) {
                let q = &gens[rng.gen_range(0..gens.len())];
                p = g.mul(&p, &if rng.gen_bool(0.5) { g.inv(q) } else { q.clone() });
            }
        }
        let d = GradingCoset::new(g.mul(&p, &x), s.clone());
        ensure(exact(&c, &d) && exact(&d, &c) && words(&c, &d), || format!("g ~ p g fails for p = {:?}", p))?;
        ensure(exact(&c.act(&h), &d.act(&h)) && words(&c.act(&h), &d.act(&h)), || "right action".into())?;
        let e = GradingCoset::new(g.mul(&x, &h), s.clone());
        let (ex, wd) = (exact(&c, &e), words(&c, &e));
        ensure(ex == exact(&e, &c), || "symmetry".into())?;
        ensure(!wd || ex, || format!("word search finds {:?} but the exact test does not", h))?;
        checks += 1;
    }
    Ok(format!("{} random cosets agree with word search at depth {}", checks, DEPTH))
}

fn criterion_8() -> Outcome {
    let p = bsd(&hd("P.hd"), None).unwrap().structure;
    let t_diag = hd("T.hd");
    let t = bsd(&t_diag, Some(&t_diag.select_spinc("v").unwrap())).unwrap().structure;
    for (n, s) in [("P", &p), ("T", &t)] {
        ensure(s.gens.len() == 1 && s.num_terms() == 0, || format!("{}: {}", n, s.pretty()))?;
    }
    ensure(p.isomorphism(&t).is_some(), || "not isomorphic".into())?;
    Ok("one generator each, no differential, isomorphic".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("strands axioms exhaustive up to five points", criterion_1),
        ("W4 and V4 algebras", criterion_2),
        ("M1 and M3 invariants", criterion_3),
        ("box tensor of M3 and M1 reduces to M2", criterion_4),
        ("relations on fixtures and fuzzed diagrams", criterion_5),
        ("pairing for W u T and W u P", criterion_6),
        ("grading coset laws", criterion_7),
        ("T and P top classes", criterion_8),
    ];
    let mut failed = 0;
    for (i, (label, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS criterion {}: {} ({})", i + 1, label, detail),
            Err(w) => {
                failed += 1;
                println!("FAIL criterion {}: {}: {}", i + 1, label, w);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
