//! `bsfh verify paper-examples`: the worked examples and their pairings.

use anyhow::{Context, Result};
use bsfh_core::homalg::{identity_da, Kind, Structure};
use bsfh_core::invariants::{bsa, bsd, bsda, sfc, Invariant};
use bsfh_core::{ops, Algebra, ArcDiagram, HeegaardDiagram};
use std::collections::BTreeSet;
use std::path::Path;

type Check = std::result::Result<(), String>;

struct Suite {
    failures: usize,
}

impl Suite {
    fn record(&mut self, label: &str, r: Result<Check>) {
        match r {
            Ok(Ok(())) => println!("PASS {}", label),
            Ok(Err(w)) => {
                self.failures += 1;
                println!("FAIL {}: {}", label, w);
            }
            Err(e) => {
                self.failures += 1;
                println!("FAIL {}: error: {:#}", label, e);
            }
        }
    }
}

fn expect(cond: bool, witness: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(witness())
    }
}

fn algebra(dir: &Path, name: &str) -> Result<std::sync::Arc<Algebra>> {
    let path = dir.join(name);
    let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Algebra::new(&ArcDiagram::parse(&text)?)?)
}

fn summands(alg: &Algebra) -> Vec<usize> {
    (0..=alg.z.num_pairs).map(|i| alg.summand(i).len()).collect()
}

fn relations(st: &Structure) -> Check {
    let r = match st.kind() {
        Kind::TypeD | Kind::Complex => st.check_typed().map_err(|e| e.to_string())?,
        Kind::AInf => st.check_ainf().map_err(|e| e.to_string())?,
        Kind::TypeDA => st.check_da(),
    };
    r.map_err(|v| v.to_string())
}

/// Same generators (with idempotents) and the same terms as an `.ops` file.
fn matches_file(st: &Structure, dir: &Path, file: &str) -> Result<Check> {
    let path = dir.join(file);
    let want = ops::import(&std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?)?;
    let gens = |s: &Structure| -> BTreeSet<String> { s.gens.iter().map(|g| format!("{} {:?} {:?}", g.name, g.left, g.right)).collect() };
    if gens(st) != gens(&want) {
        return Ok(Err(format!("generators {:?}, expected {:?}", gens(st), gens(&want))));
    }
    let (got, exp) = (st.term_table(), want.term_table());
    Ok(expect(got == exp, || format!("terms {:?}, expected {:?}", got, exp)))
}

/// Term-for-term equality after renaming generators of `b`.
fn same_terms(a: &Structure, b: &Structure, rename: impl Fn(&str) -> String) -> Check {
    let ga: BTreeSet<String> = a.gens.iter().map(|g| g.name.clone()).collect();
    let gb: BTreeSet<String> = b.gens.iter().map(|g| rename(&g.name)).collect();
    if ga != gb {
        return Err(format!("generators {:?} vs {:?}", ga, gb));
    }
    let tb: BTreeSet<_> = b.term_table().into_iter().map(|(x, i, c, y)| (rename(&x), i, c, rename(&y))).collect();
    let ta = a.term_table();
    expect(ta == tb, || format!("terms {:?} vs {:?}", ta, tb))
}

fn grading(inv: &Invariant, h: &HeegaardDiagram) -> Result<Check> {
    let bad = inv.grading_violations(h)?;
    Ok(expect(bad.is_empty(), || bad.join("; ")))
}

pub fn example_suite(dir: &Path) -> Result<bool> {
    let mut s = Suite { failures: 0 };
    let load = |name: &str| HeegaardDiagram::load(&dir.join(name)).with_context(|| format!("loading {}", name));

    // Algebras.
    s.record("A(W4) summands (1,6,7,1)", algebra(dir, "W4.arc").map(|a| expect(summands(&a) == [1, 6, 7, 1], || format!("{:?}", summands(&a)))));
    s.record(
        "A(W4) r'1 r'2 = r'12",
        algebra(dir, "W4.arc").and_then(|a| {
            let (x, y, z) = (a.parse_name("r'1")?, a.parse_name("r'2")?, a.parse_name("r'12")?);
            Ok(expect(a.mul_basis(x, y) == Some(z), || format!("{:?}", a.mul_basis(x, y).map(|p| a.name(p)))))
        }),
    );
    s.record(
        "A(W4) d r''12 = r''2 r''1",
        algebra(dir, "W4.arc").and_then(|a| {
            let d = a.diff_basis(a.parse_name("r''12")?);
            let want: BTreeSet<usize> = [a.parse_name("r''2r''1")?].into_iter().collect();
            Ok(expect(d == want, || a.elem_name(&d)))
        }),
    );
    s.record("A(W4) axioms", algebra(dir, "W4.arc").map(|a| {
        let bad = a.axiom_violations();
        expect(bad.is_empty(), || bad.join("; "))
    }));
    s.record("A(V4) summands (1,5,6,1)", algebra(dir, "V4.arc").map(|a| expect(summands(&a) == [1, 5, 6, 1], || format!("{:?}", summands(&a)))));
    s.record(
        "A(V4) has no differential",
        algebra(dir, "V4.arc").map(|a| {
            let nz: Vec<String> = (0..a.len()).filter(|&i| !a.diff_basis(i).is_empty()).map(|i| a.name(i)).collect();
            expect(nz.is_empty(), || nz.join(" "))
        }),
    );

    // Invariants of M1 and M3.
    let m1 = load("M1.hd")?;
    let m2 = load("M2.hd")?;
    let m3 = load("M3.hd")?;
    let d1 = bsd(&m1, None)?;
    let a1 = bsa(&m1, None)?;
    s.record("BSD(M1)", matches_file(&d1.structure, dir, "M1.bsd.ops"));
    s.record("BSA(M1)", matches_file(&a1.structure, dir, "M1.bsa.ops"));
    let m3_class = |k: &str| -> Result<Invariant> { Ok(bsda(&m3, Some(&m3.select_spinc(k)?))?) };
    let da2 = m3_class("2")?;
    s.record("BSDA(M3, s2)", matches_file(&da2.structure, dir, "M3.s2.bsda.ops"));
    for k in 0..=3usize {
        s.record(
            &format!("s{} occupies {} arcs on the W4 side", k, k),
            m3_class(&k.to_string()).map(|i| {
                let bad: Vec<&str> = i.structure.gens.iter().filter(|g| g.right.len() != k).map(|g| g.name.as_str()).collect();
                expect(bad.is_empty(), || bad.join(" "))
            }),
        );
    }
    for k in ["0", "3"] {
        s.record(
            &format!("BSDA(M3, s{}) has one generator and no operations", k),
            m3_class(k).map(|i| expect(i.structure.gens.len() == 1 && i.structure.num_terms() == 0, || format!("{:?}", i.structure))),
        );
    }

    // Gluing M3 to M1.
    let boxed = da2.structure.box_da(&d1.structure)?;
    s.record("BSDA(M3, s2) box BSD(M1)", matches_file(&boxed, dir, "M3.s2.box.M1.ops"));
    let reduced = boxed.reduce()?;
    let d2 = bsd(&m2, None)?;
    s.record("BSD(M2)", matches_file(&d2.structure, dir, "M2.bsd.ops"));
    s.record(
        "reduced box tensor is isomorphic to BSD(M2)",
        Ok(expect(reduced.isomorphism(&d2.structure).is_some(), || reduced.pretty())),
    );
    let other_order = boxed.reduce_with(bsfh_core::homalg::CancelOrder::Last)?;
    s.record("reduction is order independent", Ok(expect(other_order.isomorphism(&reduced).is_some(), || other_order.pretty())));
    let id = identity_da(&m1.z.reverse())?;
    let id_box = id.box_da(&d1.structure)?;
    s.record("identity box BSD(M1) is isomorphic to BSD(M1)", Ok(expect(id_box.isomorphism(&d1.structure).is_some(), || id_box.pretty())));
    let glued = m3.glue(&m1, &[("W", "W")])?;
    let glued_d = bsd(&glued, None)?;
    let full_box = bsda(&m3, None)?.structure.box_da(&d1.structure)?;
    s.record("BSD(M3 u M1) equals BSDA(M3) box BSD(M1) term for term", Ok(same_terms(&glued_d.structure, &full_box, |n| n.replace('*', ""))));

    // Decomposition kernel.
    let w = load("W.hd")?;
    let t = load("T.hd")?;
    let p = load("P.hd")?;
    let dp = bsd(&p, None)?;
    let dt = bsd(&t, Some(&t.select_spinc("v")?))?;
    let lone = |i: &Invariant| expect(i.structure.gens.len() == 1 && i.structure.num_terms() == 0, || i.structure.pretty());
    s.record("BSD(P)", matches_file(&dp.structure, dir, "P.bsd.ops"));
    s.record("BSD(T, top class)", matches_file(&dt.structure, dir, "T.top.bsd.ops"));
    s.record("BSD(P) has one generator and no differential", Ok(lone(&dp)));
    s.record("BSD(T, top class) has one generator and no differential", Ok(lone(&dt)));
    s.record("BSD(P) is isomorphic to BSD(T, top class)", Ok(expect(dp.structure.isomorphism(&dt.structure).is_some(), String::new)));
    let aw = bsa(&w, None)?;
    for (name, other) in [("T", &t), ("P", &p)] {
        let g = w.glue(other, &[("W", name)])?;
        let c = sfc(&g, None)?;
        let b = aw.structure.box_tensor(&bsd(other, None)?.structure)?;
        s.record(&format!("SFC(W u {}) equals BSA(W) box BSD({}) term for term", name, name), Ok(same_terms(&c.structure, &b, |n| n.replace('*', ""))));
    }

    // Relations and gradings of everything above.
    let invs: Vec<(&str, &Invariant, &HeegaardDiagram)> =
        vec![("BSD(M1)", &d1, &m1), ("BSA(M1)", &a1, &m1), ("BSDA(M3, s2)", &da2, &m3), ("BSD(M2)", &d2, &m2), ("BSD(P)", &dp, &p), ("BSD(T)", &dt, &t), ("BSA(W)", &aw, &w), ("BSD(M3 u M1)", &glued_d, &glued)];
    for (name, inv, h) in &invs {
        s.record(&format!("{} relations", name), Ok(relations(&inv.structure)));
        s.record(&format!("{} grading law", name), grading(inv, h));
    }
    for (name, st) in [("box tensor", &boxed), ("reduced box tensor", &reduced), ("full box tensor", &full_box), ("identity bimodule", &id), ("identity box BSD(M1)", &id_box)] {
        s.record(&format!("{} relations", name), Ok(relations(st)));
    }

    println!("{} failures", s.failures);
    Ok(s.failures == 0)
}
