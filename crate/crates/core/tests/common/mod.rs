#![allow(dead_code)]

use bsfh_core::{ArcDiagram, HeegaardDiagram};
use proptest::prelude::*;
use std::path::PathBuf;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn arc(name: &str) -> ArcDiagram {
    ArcDiagram::parse(&std::fs::read_to_string(fixture_path(name)).unwrap()).unwrap()
}

pub fn hd(name: &str) -> HeegaardDiagram {
    HeegaardDiagram::load(&fixture_path(name)).unwrap()
}

/// Parses diagram text that only uses inline boundaries.
pub fn hd_text(text: &str) -> bsfh_core::Result<HeegaardDiagram> {
    HeegaardDiagram::parse(text, &|name: &str| std::fs::read_to_string(fixture_path(name)).map_err(|e| bsfh_core::Error::Invalid(e.to_string())))
}

/// Matching labels from a seed: a shuffle of `{0,0,1,1,...}` relabeled in
/// order of first appearance.
pub fn shuffled_matching(n: usize, seed: u64) -> Vec<usize> {
    let mut labels: Vec<usize> = (0..n).map(|p| p / 2).collect();
    let mut s = seed;
    for i in (1..n).rev() {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        labels.swap(i, (s >> 33) as usize % (i + 1));
    }
    let mut map = vec![usize::MAX; n / 2];
    let mut next = 0;
    for x in labels.iter_mut() {
        if map[*x] == usize::MAX {
            map[*x] = next;
            next += 1;
        }
        *x = map[*x];
    }
    labels
}

/// Random valid arc diagrams with up to 3 segments and 6 points.
pub fn arc_diagram() -> impl Strategy<Value = ArcDiagram> {
    (1usize..=3, proptest::collection::vec(1usize..=3, 3), any::<u64>()).prop_filter_map("valid", |(l, sizes, seed)| {
        let sizes: Vec<usize> = sizes[..l].to_vec();
        let n: usize = sizes.iter().sum();
        if n % 2 == 1 || n == 0 {
            return None;
        }
        let z = ArcDiagram::from_parts(&sizes, shuffled_matching(n, seed)).ok()?;
        z.is_valid().then_some(z)
    })
}

/// Every invariant of the fixtures, labeled, with the diagram it came from.
pub fn fixture_invariants() -> Vec<(String, HeegaardDiagram, bsfh_core::invariants::Invariant)> {
    use bsfh_core::invariants::{bsa, bsd, bsda, sfc};
    let mut out = Vec::new();
    for name in ["M1.hd", "M2.hd", "P.hd", "T.hd", "W.hd"] {
        let h = hd(name);
        for c in h.spinc_partition() {
            out.push((format!("bsd {} {}", name, c.index), h.clone(), bsd(&h, Some(&c)).unwrap()));
            out.push((format!("bsa {} {}", name, c.index), h.clone(), bsa(&h, Some(&c)).unwrap()));
        }
    }
    let m3 = hd("M3.hd");
    for c in m3.spinc_partition() {
        out.push((format!("bsda M3 {}", c.index), m3.clone(), bsda(&m3, Some(&c)).unwrap()));
    }
    let w = hd("W.hd");
    for other in ["T", "P"] {
        let g = w.glue(&hd(&format!("{}.hd", other)), &[("W", other)]).unwrap();
        for c in g.spinc_partition() {
            out.push((format!("sfc W u {} {}", other, c.index), g.clone(), sfc(&g, Some(&c)).unwrap()));
        }
    }
    let glued = m3.glue(&hd("M1.hd"), &[("W", "W")]).unwrap();
    out.push(("bsd M3 u M1".into(), glued.clone(), bsd(&glued, None).unwrap()));
    out
}

/// The structure relation matching the kind of `st`, as a failure message.
pub fn relation_failure(st: &bsfh_core::homalg::Structure) -> Option<String> {
    use bsfh_core::homalg::Kind;
    let r = match st.kind() {
        Kind::TypeD | Kind::Complex => st.check_typed().unwrap(),
        Kind::AInf => st.check_ainf().unwrap(),
        Kind::TypeDA => st.check_da(),
    };
    r.err().map(|v| v.to_string())
}

#[derive(Debug, Default)]
pub struct FuzzReport {
    pub diagrams: usize,
    pub structures: usize,
    pub terms: usize,
    /// Terms with algebra inputs.
    pub input_terms: usize,
    pub failures: Vec<String>,
}

/// Computes every invariant of every spin-c class of fuzzed nice diagrams
/// and checks relations and the grading law.
pub fn fuzz_check(seed: u64, single: usize, bimodule: usize, max_betas: usize) -> FuzzReport {
    use bsfh_core::fuzz::{nice_samples, Mode};
    use bsfh_core::invariants::{bsa, bsd, bsda, Invariant};
    let mut rep = FuzzReport::default();
    for (mode, count) in [(Mode::Single, single), (Mode::Bimodule, bimodule)] {
        let samples = nice_samples(seed, count, mode, max_betas);
        assert_eq!(samples.len(), count, "fuzzer ran dry");
        for s in samples {
            rep.diagrams += 1;
            let h = &s.diagram;
            assert!(h.betas.len() <= max_betas);
            for c in h.spinc_partition() {
                let kinds: Vec<(&str, bsfh_core::Result<Invariant>)> = match mode {
                    Mode::Single => vec![("bsd", bsd(h, Some(&c))), ("bsa", bsa(h, Some(&c)))],
                    Mode::Bimodule => vec![("bsda", bsda(h, Some(&c)))],
                };
                for (kind, inv) in kinds {
                    let label = || format!("{} class {} of\n{}", kind, c.index, s.text);
                    let inv = match inv {
                        Ok(i) => i,
                        Err(e) => {
                            rep.failures.push(format!("{}: {}", label(), e));
                            continue;
                        }
                    };
                    rep.structures += 1;
                    rep.terms += inv.structure.num_terms();
                    rep.input_terms += inv.structure.ops.iter().filter(|((_, i), _)| !i.is_empty()).map(|(_, t)| t.len()).sum::<usize>();
                    if let Some(f) = relation_failure(&inv.structure) {
                        rep.failures.push(format!("{}: {}", label(), f));
                    }
                    match inv.grading_violations(h) {
                        Ok(v) if v.is_empty() => {}
                        Ok(v) => rep.failures.push(format!("{}: grading {:?}", label(), v)),
                        Err(e) => rep.failures.push(format!("{}: grading {}", label(), e)),
                    }
                }
            }
        }
    }
    rep
}
