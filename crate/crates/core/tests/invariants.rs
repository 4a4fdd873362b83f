mod common;

use bsfh_core::invariants::{bsa, bsd, bsda, index, sfc};
use bsfh_core::{GradingElement, Half, Strands};
use common::{fixture_invariants, fixture_path, hd, hd_text, relation_failure};
use num_rational::Rational64;

fn text(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap()
}

#[test]
fn every_contribution_has_index_one_and_matching_boundary() {
    let mut seen = 0;
    for (name, h, inv) in fixture_invariants() {
        let group = h.grading_group();
        for k in &inv.contributions {
            let rho: Vec<Vec<bsfh_core::Chord>> = if k.a_inputs.is_empty() { k.d_chords.iter().map(|&c| vec![c]).collect() } else { k.a_inputs.clone() };
            let ind = index(&h, &k.domain, &k.x, &k.y, &rho);
            assert_eq!(ind, Rational64::from_integer(1), "{}", name);
            assert_eq!(k.index, ind);
            // gr(B) = lambda^(-ind + #rho) gr(rho_1) ... gr(rho_n).
            let grs: Vec<GradingElement> = rho.iter().map(|set| group.gr_strands(&Strands::new(set.iter().map(|c| (c.lo, c.hi)).collect()))).collect();
            let halves = Rational64::from_integer(2) * (Rational64::from_integer(rho.len() as i64) - ind);
            let want = group.mul(&group.lambda(Half(halves.to_integer())), &group.product(grs.iter()));
            assert_eq!(h.domain_grading(&k.domain, &k.x, &k.y), want, "{} {} -> {}", name, h.generator_name(&k.x), h.generator_name(&k.y));
            // Every domain counted is a class from x to y with nonnegative multiplicities.
            assert!(h.is_domain(&k.domain, &k.x, &k.y));
            assert!(k.domain.iter().all(|&m| m >= 0));
            seen += 1;
        }
    }
    assert!(seen >= 10, "{}", seen);
}

#[test]
fn grading_law_holds_on_every_fixture_invariant() {
    for (name, h, inv) in fixture_invariants() {
        let bad = inv.grading_violations(&h).unwrap();
        assert!(bad.is_empty(), "{}: {:?}", name, bad);
    }
}

#[test]
fn relations_hold_on_every_fixture_invariant() {
    let all = fixture_invariants();
    assert!(all.len() >= 10);
    for (name, _, inv) in all {
        assert_eq!(relation_failure(&inv.structure), None, "{}", name);
    }
}

#[test]
fn admissible_diagrams_give_bounded_structures() {
    let mut checked = 0;
    for (name, h, inv) in fixture_invariants() {
        if h.admissibility().full {
            assert!(inv.structure.is_bounded(), "{}", name);
            checked += 1;
        }
    }
    assert!(checked > 0);
}

#[test]
fn bsda_specializes_to_bsd_and_bsa() {
    let base = text("M1.hd");
    let line = "boundary W W4.arc reversed";
    assert!(base.contains(line));
    let m1 = hd("M1.hd");
    let d_only = hd_text(&base.replace(line, &format!("{} side=1", line))).unwrap();
    let a_only = hd_text(&base.replace(line, &format!("{} side=2", line))).unwrap();
    let want_d = bsd(&m1, None).unwrap().structure;
    let want_a = bsa(&m1, None).unwrap().structure;
    assert_eq!(bsda(&d_only, None).unwrap().structure.term_table(), want_d.term_table());
    assert_eq!(bsda(&a_only, None).unwrap().structure.term_table(), want_a.term_table());
    assert!(bsda(&m1, None).is_err(), "components without a side");
}

#[test]
fn examples_from_m1() {
    let m1 = hd("M1.hd");
    let d = bsd(&m1, None).unwrap();
    let x = d.structure.gen_index("x").unwrap();
    let y = d.structure.gen_index("y").unwrap();
    assert!(d.structure.delta_k(x, 1).is_empty());
    assert!(d.structure.delta_k(y, 2).is_empty());
    let dy: Vec<_> = d.structure.delta_k(y, 1).into_iter().collect();
    assert_eq!(dy.len(), 1);
    assert_eq!(d.structure.left.name(dy[0].0[0]), "r''2");
    assert_eq!(dy[0].1, x);
    let a = bsa(&m1, None).unwrap();
    let table = a.structure.term_table();
    assert_eq!(table.len(), 1);
    let (from, inputs, _, to) = table.into_iter().next().unwrap();
    assert_eq!((from.as_str(), inputs, to.as_str()), ("y", vec!["-r'2".to_string()], "x"));
}

#[test]
fn top_class_of_t_and_p_have_no_differential() {
    let t = hd("T.hd");
    let dt = bsd(&t, Some(&t.select_spinc("v").unwrap())).unwrap();
    let dp = bsd(&hd("P.hd"), None).unwrap();
    for d in [&dt, &dp] {
        assert_eq!(d.structure.gens.len(), 1);
        assert_eq!(d.structure.num_terms(), 0);
    }
    assert!(dt.structure.isomorphism(&dp.structure).is_some());
}

#[test]
fn sfc_differential_drops_maslov_by_one() {
    let mut terms = 0;
    for (name, h, inv) in fixture_invariants() {
        if !name.starts_with("sfc") {
            continue;
        }
        assert_eq!(h.z.num_points(), 0);
        for k in &inv.contributions {
            let base = &inv.generators[0];
            let gx = h.generator_grading(&k.x, base).unwrap();
            let gy = h.generator_grading(&k.y, base).unwrap();
            assert!(gx.rep.hclass.iter().all(|&v| v == 0));
            assert_eq!(gx.rep.maslov.halves() % 2, 0);
            assert!(gy.coset_equal(&gx.act(&h.grading_group().lambda(Half(-2)))).unwrap(), "{}", name);
            terms += 1;
        }
        assert!(inv.structure.check_typed().unwrap().is_ok());
    }
    assert!(terms > 0);
}

#[test]
fn sfc_rejects_bordered_diagrams() {
    assert!(sfc(&hd("M1.hd"), None).is_err());
}

#[test]
fn inadmissible_diagrams_are_rejected() {
    let annulus = "\
name annulus
edge fo kind=free from=o to=o
edge fi kind=free from=i to=i
edge a kind=alpha-circle from=av to=av curve=A
edge b kind=beta from=bv to=bv curve=B
region Out: fo+ ; a-
region Mid: a+ ; b-
region In: b+ ; fi+
";
    let h = hd_text(annulus).unwrap();
    assert!(sfc(&h, None).is_err());
    assert!(bsd(&h, None).is_err());
}

#[test]
fn disjoint_rectangles_give_a_two_chord_input() {
    let m1 = hd("M1.hd");
    let copy = hd_text(&text("M1.hd").replace("W.", "V.").replace("boundary W", "boundary V")).unwrap();
    let doubled = m1.glue(&copy, &[]).unwrap();
    assert!(doubled.check().is_ok());
    let a = bsa(&doubled, None).unwrap();
    assert_eq!(relation_failure(&a.structure), None);
    let st = &a.structure;
    // One single-chord term from each copy for each choice of the other
    // generator, plus the two rectangles together.
    assert_eq!(st.num_terms(), 5);
    let multi: Vec<_> = st.ops.iter().filter(|((_, i), _)| i.len() == 1 && st.right.basis_elem(i[0]).chords.len() == 2).collect();
    assert_eq!(multi.len(), 1);
    let ((x, _), terms) = multi[0];
    assert_eq!(st.gens[*x].name, "y,y'");
    assert_eq!(terms.iter().map(|&(_, y)| st.gens[y].name.as_str()).collect::<Vec<_>>(), ["x,x'"]);
    assert!(st.ops.keys().all(|(_, i)| i.len() <= 1), "no higher operations");
}
