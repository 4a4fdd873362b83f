//! Random planar Heegaard diagrams for property tests.
//!
//! The surface is a rectangle. Alpha arcs are axis-aligned polylines:
//! vertical lines from the bottom edge to the top, caps (both ends on the
//! bottom), and cups (both ends on the top). Beta circles are rectangles in a
//! middle band, laminar in height. `Z` lies on the bottom and top edges,
//! split into segments at random. Faces are traced from the rotation system
//! and the result is emitted as diagram text, so every sample goes through
//! the parser.

use crate::diagram::HeegaardDiagram;
use crate::error::{Error, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write;

const TOP: i64 = 400;

/// What kind of boundary the sample gets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// One boundary component (for type D and A-infinity structures).
    Single,
    /// Bottom edge on side 1, top edge on side 2 (for type DA bimodules).
    Bimodule,
}

/// A sample: its text and the parsed diagram.
#[derive(Clone, Debug)]
pub struct Sample {
    pub text: String,
    pub diagram: HeegaardDiagram,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Dir {
    E,
    N,
    W,
    S,
}

impl Dir {
    fn index(self) -> usize {
        self as usize
    }

    fn from_index(i: usize) -> Dir {
        [Dir::E, Dir::N, Dir::W, Dir::S][i % 4]
    }

    fn opposite(self) -> Dir {
        Dir::from_index(self.index() + 2)
    }

    fn of(a: (i64, i64), b: (i64, i64)) -> Dir {
        match ((b.0 - a.0).signum(), (b.1 - a.1).signum()) {
            (1, 0) => Dir::E,
            (-1, 0) => Dir::W,
            (0, 1) => Dir::N,
            _ => Dir::S,
        }
    }
}

struct Polyline {
    pts: Vec<(i64, i64)>,
    closed: bool,
}

impl Polyline {
    fn segments(&self) -> Vec<((i64, i64), (i64, i64))> {
        let n = self.pts.len();
        let m = if self.closed { n } else { n - 1 };
        (0..m).map(|i| (self.pts[i], self.pts[(i + 1) % n])).collect()
    }

    /// Arc-length position of a point on segment `i`.
    fn position(&self, i: usize, p: (i64, i64)) -> i64 {
        let segs = self.segments();
        let before: i64 = segs[..i].iter().map(|(a, b)| (b.0 - a.0).abs() + (b.1 - a.1).abs()).sum();
        before + (p.0 - segs[i].0 .0).abs() + (p.1 - segs[i].0 .1).abs()
    }
}

struct EdgeSpec {
    name: String,
    kind: &'static str,
    from: String,
    to: String,
    leave: Dir,
    arrive: Dir,
    curve: Option<String>,
    boundary: bool,
}

/// Random non-crossing matching of `2k` consecutive legs, as `(i, j, depth)`.
fn random_matching(rng: &mut impl Rng, start: usize, k: usize) -> Vec<(usize, usize, usize)> {
    if k == 2 && rng.gen_bool(0.5) {
        vec![(start, start + 3, 0), (start + 1, start + 2, 1)]
    } else {
        (0..k).map(|i| (start + 2 * i, start + 2 * i + 1, 0)).collect()
    }
}

/// Laminar height intervals for `n` circles: `(lo, hi, parent)`.
fn random_laminar(rng: &mut impl Rng, n: usize) -> Vec<(i64, i64, Option<usize>)> {
    let mut out: Vec<(i64, i64, Option<usize>)> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    let mut opened = 0;
    let mut t = 0;
    while opened < n || !stack.is_empty() {
        let open = opened < n && (stack.is_empty() || rng.gen_bool(0.5));
        let y = 100 + 10 * t;
        t += 1;
        if open {
            out.push((y, 0, stack.last().copied()));
            stack.push(out.len() - 1);
            opened += 1;
        } else {
            let b = stack.pop().expect("nonempty");
            out[b].1 = y;
        }
    }
    out
}

/// One attempt; `None` when the random choices do not give a valid sample.
pub fn attempt(rng: &mut impl Rng, mode: Mode, max_betas: usize) -> Option<Sample> {
    // Alpha arcs as (polyline, pair of endpoints).
    let mut alphas: Vec<Polyline> = Vec::new();
    let mut legs = 0usize;
    let x = |c: usize| 10 * c as i64 + 10;
    let add_caps = |legs: &mut usize, alphas: &mut Vec<Polyline>, cup: bool, rng: &mut ChaCha8Rng| {
        let k = rng.gen_range(1..=2);
        for (i, j, d) in random_matching(rng, *legs, k) {
            let (base, h) = if cup { (TOP, 20 + 10 * d as i64) } else { (0, 300 - 10 * d as i64) };
            alphas.push(Polyline { pts: vec![(x(i), base), (x(i), h), (x(j), h), (x(j), base)], closed: false });
        }
        *legs += 2 * k;
    };
    let mut local = ChaCha8Rng::seed_from_u64(rng.gen());
    match mode {
        Mode::Single => {
            while legs == 0 || (legs < 4 && local.gen_bool(0.6)) {
                match local.gen_range(0..4) {
                    0 | 1 => {
                        alphas.push(Polyline { pts: vec![(x(legs), 0), (x(legs), TOP)], closed: false });
                        legs += 1;
                    }
                    2 => add_caps(&mut legs, &mut alphas, false, &mut local),
                    _ => add_caps(&mut legs, &mut alphas, true, &mut local),
                }
            }
        }
        Mode::Bimodule => {
            add_caps(&mut legs, &mut alphas, false, &mut local);
            add_caps(&mut legs, &mut alphas, true, &mut local);
        }
    }
    if legs > 5 {
        return None;
    }
    // Beta rectangles spanning gaps g1 < g2 (gap g sits left of leg g).
    let nb = local.gen_range(1..=max_betas.max(1));
    let heights = random_laminar(&mut local, nb);
    let mut spans: Vec<(usize, usize, i64)> = Vec::new();
    let mut betas = Vec::new();
    for &(lo, hi, parent) in &heights {
        let (min_g, max_g, depth) = match parent {
            Some(p) => (spans[p].0, spans[p].1, spans[p].2 + 1),
            None => (0, legs, 0),
        };
        if max_g - min_g < 1 {
            return None;
        }
        let g1 = local.gen_range(min_g..max_g);
        let g2 = local.gen_range(g1 + 1..=max_g);
        spans.push((g1, g2, depth));
        let (x1, x2) = (10 * g1 as i64 + 2 + depth, 10 * g2 as i64 + 8 - depth);
        betas.push(Polyline { pts: vec![(x1, lo), (x2, lo), (x2, hi), (x1, hi)], closed: true });
    }
    // Boundary points, in boundary order: bottom eastward, top westward.
    let mut bottom: Vec<(i64, usize)> = Vec::new();
    let mut top: Vec<(i64, usize)> = Vec::new();
    for (a, pl) in alphas.iter().enumerate() {
        for &p in [pl.pts[0], *pl.pts.last().expect("nonempty")].iter() {
            if p.1 == 0 {
                bottom.push((p.0, a));
            } else {
                top.push((p.0, a));
            }
        }
    }
    bottom.sort();
    top.sort();
    top.reverse();
    let comp_of = |is_top: bool| match mode {
        Mode::Single => "Z",
        Mode::Bimodule => {
            if is_top {
                "R"
            } else {
                "L"
            }
        }
    };
    // Segments: (component, name, points as (x, alpha)).
    let mut segments: Vec<(&str, String, Vec<(i64, usize)>, bool)> = Vec::new();
    let mut seg_count: HashMap<&str, usize> = HashMap::new();
    for (is_top, pts) in [(false, &bottom), (true, &top)] {
        let comp = comp_of(is_top);
        for (i, &p) in pts.iter().enumerate() {
            if i == 0 || local.gen_bool(0.35) {
                let n = seg_count.entry(comp).or_insert(0);
                *n += 1;
                segments.push((comp, format!("S{}", n), Vec::new(), is_top));
            }
            segments.last_mut().expect("segment").2.push(p);
        }
    }
    // Point names per component, and the matching.
    let mut point_name: HashMap<(i64, bool), (String, String)> = HashMap::new();
    let mut pcount: HashMap<&str, usize> = HashMap::new();
    let mut ends_of_alpha: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for (comp, _, pts, is_top) in &segments {
        for &(px, a) in pts {
            let n = pcount.entry(comp).or_insert(0);
            *n += 1;
            let name = format!("p{}", n);
            point_name.insert((px, *is_top), (comp.to_string(), name.clone()));
            ends_of_alpha.entry(a).or_default().push(format!("{}:{}", comp, name));
        }
    }
    let mut text = String::new();
    writeln!(text, "name fuzz").ok()?;
    let comps: Vec<&str> = match mode {
        Mode::Single => vec!["Z"],
        Mode::Bimodule => vec!["L", "R"],
    };
    for (ci, comp) in comps.iter().enumerate() {
        let segs: Vec<String> = segments
            .iter()
            .filter(|s| s.0 == *comp)
            .map(|s| {
                let names: Vec<String> = s.2.iter().map(|&(px, _)| point_name[&(px, s.3)].1.clone()).collect();
                format!("{}:{}", s.1, names.join(","))
            })
            .collect();
        let mut matches = Vec::new();
        for ends in ends_of_alpha.values() {
            let (c0, p0) = ends[0].split_once(':').expect("pair");
            let (c1, p1) = ends[1].split_once(':').expect("pair");
            if c0 != c1 {
                return None;
            }
            if c0 == *comp {
                matches.push(format!("{}:{}", p0, p1));
            }
        }
        if segs.is_empty() {
            return None;
        }
        let side = if mode == Mode::Bimodule { format!(" side={}", ci + 1) } else { String::new() };
        writeln!(text, "boundary {} inline segments={} matches={}{}", comp, segs.join(";"), matches.join(","), side).ok()?;
    }
    // Vertices and edges.
    let mut edges: Vec<EdgeSpec> = Vec::new();
    let boundary_vertex = |px: i64, is_top: bool| -> String {
        let (c, n) = &point_name[&(px, is_top)];
        format!("{}.{}", c, n)
    };
    // Boundary cycle: (vertex name, is_top) in order, with segment labels.
    let mut cycle: Vec<(String, bool, Option<(String, usize)>)> = Vec::new();
    for (comp, name, pts, is_top) in &segments {
        cycle.push((format!("{}.{}.start", comp, name), *is_top, None));
        for (t, &(px, _)) in pts.iter().enumerate() {
            cycle.push((boundary_vertex(px, *is_top), *is_top, Some((format!("{}.{}", comp, name), t))));
        }
        cycle.push((format!("{}.{}.end", comp, name), *is_top, Some((format!("{}.{}", comp, name), pts.len()))));
    }
    let mut nfree = 0;
    for i in 0..cycle.len() {
        let (a, a_top, _) = &cycle[i];
        let (b, b_top, label) = &cycle[(i + 1) % cycle.len()];
        let leave = if *a_top { Dir::W } else { Dir::E };
        let arrive = if *b_top { Dir::W } else { Dir::E };
        let (name, kind) = if a.ends_with(".end") {
            nfree += 1;
            (format!("f{}", nfree), "free")
        } else {
            let (seg, t) = label.as_ref().expect("segment piece");
            (format!("{}.{}", seg, t), "z")
        };
        edges.push(EdgeSpec { name, kind, from: a.clone(), to: b.clone(), leave, arrive, curve: None, boundary: true });
    }
    // Crossings.
    let mut crossings: Vec<((i64, i64), usize, i64, usize, i64)> = Vec::new();
    for (ai, a) in alphas.iter().enumerate() {
        for (si, sa) in a.segments().into_iter().enumerate() {
            for (bi, b) in betas.iter().enumerate() {
                for (ti, sb) in b.segments().into_iter().enumerate() {
                    let (va, vb) = (sa.0 .0 == sa.1 .0, sb.0 .0 == sb.1 .0);
                    if va == vb {
                        continue;
                    }
                    let (v, h) = if va { (sa, sb) } else { (sb, sa) };
                    let (cx, cy) = (v.0 .0, h.0 .1);
                    let within = |lo: i64, hi: i64, t: i64| lo.min(hi) < t && t < lo.max(hi);
                    if within(v.0 .1, v.1 .1, cy) && within(h.0 .0, h.1 .0, cx) {
                        crossings.push(((cx, cy), ai, a.position(si, (cx, cy)), bi, b.position(ti, (cx, cy))));
                    }
                }
            }
        }
    }
    crossings.sort();
    let cname: HashMap<(i64, i64), String> = crossings.iter().enumerate().map(|(i, c)| (c.0, format!("x{}", i))).collect();
    let tangent = |pl: &Polyline, pos: i64, at_end: bool| -> Dir {
        let segs = pl.segments();
        let mut acc = 0;
        for (i, s) in segs.iter().enumerate() {
            let len = (s.1 .0 - s.0 .0).abs() + (s.1 .1 - s.0 .1).abs();
            if pos < acc + len || (at_end && i + 1 == segs.len()) {
                return Dir::of(s.0, s.1);
            }
            acc += len;
        }
        Dir::of(segs[0].0, segs[0].1)
    };
    for (ai, a) in alphas.iter().enumerate() {
        let start = a.pts[0];
        let end = *a.pts.last().expect("nonempty");
        let mut stops: Vec<(i64, String)> = vec![(0, boundary_vertex(start.0, start.1 == TOP))];
        let mut on: Vec<(i64, String)> = crossings.iter().filter(|c| c.1 == ai).map(|c| (c.2, cname[&c.0].clone())).collect();
        on.sort();
        stops.extend(on);
        let total = a.position(a.segments().len() - 1, end);
        stops.push((total, boundary_vertex(end.0, end.1 == TOP)));
        for k in 0..stops.len() - 1 {
            edges.push(EdgeSpec {
                name: format!("a{}_{}", ai + 1, k),
                kind: "alpha-arc",
                from: stops[k].1.clone(),
                to: stops[k + 1].1.clone(),
                leave: tangent(a, stops[k].0, false),
                arrive: tangent(a, stops[k + 1].0, k + 2 == stops.len()),
                curve: Some(format!("A{}", ai + 1)),
                boundary: false,
            });
        }
    }
    for (bi, b) in betas.iter().enumerate() {
        let mut on: Vec<(i64, String)> = crossings.iter().filter(|c| c.3 == bi).map(|c| (c.4, cname[&c.0].clone())).collect();
        if on.is_empty() {
            return None;
        }
        on.sort();
        for k in 0..on.len() {
            let (p, q) = (&on[k], &on[(k + 1) % on.len()]);
            edges.push(EdgeSpec {
                name: format!("b{}_{}", bi + 1, k),
                kind: "beta",
                from: p.1.clone(),
                to: q.1.clone(),
                leave: tangent(b, p.0, false),
                arrive: tangent(b, q.0, false),
                curve: Some(format!("B{}", bi + 1)),
                boundary: false,
            });
        }
    }
    for e in &edges {
        if e.kind == "z" {
            continue;
        }
        write!(text, "edge {} kind={} from={} to={}", e.name, e.kind, e.from, e.to).ok()?;
        if let Some(c) = &e.curve {
            write!(text, " {}={}", if e.kind == "beta" { "curve" } else { "arc" }, c).ok()?;
        }
        writeln!(text).ok()?;
    }
    // Faces: directed edge (index, forward); next is the first outgoing edge
    // clockwise from the reversed arrival direction.
    let start_of = |d: (usize, bool)| {
        let e = &edges[d.0];
        if d.1 {
            (e.from.clone(), e.leave)
        } else {
            (e.to.clone(), e.arrive.opposite())
        }
    };
    let end_of = |d: (usize, bool)| {
        let e = &edges[d.0];
        if d.1 {
            (e.to.clone(), e.arrive)
        } else {
            (e.from.clone(), e.leave.opposite())
        }
    };
    let mut outgoing: HashMap<String, Vec<(Dir, (usize, bool))>> = HashMap::new();
    for i in 0..edges.len() {
        for fwd in [true, false] {
            let (v, d) = start_of((i, fwd));
            outgoing.entry(v).or_default().push((d, (i, fwd)));
        }
    }
    let next = |d: (usize, bool)| -> Option<(usize, bool)> {
        let (w, a) = end_of(d);
        let r = a.opposite();
        let outs = &outgoing[&w];
        (1..=4).find_map(|k| {
            let want = Dir::from_index(r.index() + 4 - k);
            outs.iter().find(|(dd, _)| *dd == want).map(|(_, e)| *e)
        })
    };
    let mut seen = vec![[false; 2]; edges.len()];
    let mut faces: Vec<Vec<(usize, bool)>> = Vec::new();
    for i in 0..edges.len() {
        for fwd in [true, false] {
            if seen[i][usize::from(fwd)] || (edges[i].boundary && !fwd) {
                continue;
            }
            let mut cyc = Vec::new();
            let mut d = (i, fwd);
            loop {
                if seen[d.0][usize::from(d.1)] {
                    break;
                }
                if edges[d.0].boundary && !d.1 {
                    return None;
                }
                seen[d.0][usize::from(d.1)] = true;
                cyc.push(d);
                d = next(d)?;
            }
            if d != (i, fwd) {
                return None;
            }
            faces.push(cyc);
        }
    }
    // A complement component of the alphas or of the betas with no free
    // boundary gets a hole (a free boundary circle) in one of its faces.
    let mut face_of = vec![[usize::MAX; 2]; edges.len()];
    for (f, cyc) in faces.iter().enumerate() {
        for &(e, fwd) in cyc {
            face_of[e][usize::from(fwd)] = f;
        }
    }
    let mut holes: Vec<bool> = (0..faces.len()).map(|_| local.gen_bool(0.05)).collect();
    for across in ["alpha-arc", "beta"] {
        let mut comp: Vec<usize> = (0..faces.len()).collect();
        fn root(c: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while c[r] != r {
                r = c[r];
            }
            c[i] = r;
            r
        }
        for (e, ed) in edges.iter().enumerate() {
            if ed.kind == across {
                let (a, b) = (root(&mut comp, face_of[e][0]), root(&mut comp, face_of[e][1]));
                comp[a] = b;
            }
        }
        let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for f in 0..faces.len() {
            members.entry(root(&mut comp, f)).or_default().push(f);
        }
        for fs in members.values() {
            let open = fs.iter().any(|&f| holes[f] || faces[f].iter().any(|&(e, _)| edges[e].kind == "free"));
            if !open {
                holes[fs[local.gen_range(0..fs.len())]] = true;
            }
        }
    }
    let mut nhole = 0;
    for (f, cyc) in faces.iter().enumerate() {
        let sides: Vec<String> = cyc.iter().map(|&(e, fwd)| format!("{}{}", edges[e].name, if fwd { '+' } else { '-' })).collect();
        if holes[f] {
            nhole += 1;
            writeln!(text, "edge h{} kind=free from=hv{} to=hv{}", nhole, nhole, nhole).ok()?;
            writeln!(text, "region R{}: {} ; h{}+", f + 1, sides.join(" "), nhole).ok()?;
        } else {
            writeln!(text, "region R{}: {}", f + 1, sides.join(" ")).ok()?;
        }
    }
    let load = |_: &str| -> Result<String> { Err(Error::Invalid("inline only".into())) };
    let diagram = HeegaardDiagram::parse(&text, &load).ok()?;
    Some(Sample { text, diagram })
}

/// `count` random samples that are consistent, nice, provincially admissible
/// and have at least one generator, from a fixed seed.
pub fn nice_samples(seed: u64, count: usize, mode: Mode, max_betas: usize) -> Vec<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut tries = 0;
    while out.len() < count && tries < 200 * count.max(1) {
        tries += 1;
        let Some(s) = attempt(&mut rng, mode, max_betas) else { continue };
        let h = &s.diagram;
        if h.check().is_ok() && h.is_nice() && h.admissibility().provincial && !h.generators().is_empty() {
            out.push(s);
        }
    }
    out
}
