//! Bordered sutured invariants of Heegaard diagrams by counting embedded
//! polygons.
//!
//! A polygon is a connected set of non-boundary regions, each with
//! multiplicity one, whose closure is an embedded disk with convex corners.
//! Its boundary alternates between alpha runs (alpha sides, possibly leaving
//! along `Z` as Reeb chords) and beta runs. Corners are the points of the
//! initial generator (beta in, alpha out), the points of the final generator
//! (alpha in, beta out), and the chord ends. A polygon contributes when its
//! index is one and no other generator point meets its closure.
//!
//! Boundary components on the type D side are read over `A(-Z)`, those on
//! the type A side over `A(Z)`.

use crate::arc_diagram::{ArcDiagram, Chord};
use crate::diagram::{Domain, EdgeKind, Generator, HeegaardDiagram, Side, SpincClass, VertexKind};
use crate::error::{Error, Result};
use crate::grading::{GradingCoset, GradingElement, GradingGroup};
use crate::half::Half;
use crate::homalg::{trivial_algebra, Structure};
use crate::strands::{Algebra, Strands};
use num_rational::Rational64;
use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::sync::Arc;

/// Upper bound on the number of region sets examined.
const MAX_REGION_SETS: usize = 2_000_000;

/// An embedded disk cut out by the curves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polygon {
    pub regions: Vec<usize>,
    pub domain: Domain,
    /// Intersection ids of the corners on the initial generator.
    pub sources: Vec<usize>,
    /// Intersection ids of the corners on the final generator.
    pub targets: Vec<usize>,
    /// Reeb chords (global points of `Z`) along each alpha run, in boundary order.
    pub runs: Vec<Vec<Chord>>,
    /// Vertices of the closure.
    pub vertices: BTreeSet<usize>,
}

impl Polygon {
    pub fn chords(&self) -> Vec<Chord> {
        self.runs.iter().flatten().copied().collect()
    }
}

/// One counted domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contribution {
    pub x: Generator,
    pub y: Generator,
    pub domain: Domain,
    /// Chords on the type D side, in order (global points).
    pub d_chords: Vec<Chord>,
    /// Algebra inputs on the type A side, each a set of chords (global points).
    pub a_inputs: Vec<Vec<Chord>>,
    pub index: Rational64,
}

/// Which side a boundary component is read on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Role {
    D,
    A,
    Ignored,
}

/// Boundary components on one side, as one arc diagram.
#[derive(Clone, Debug)]
pub struct SideMap {
    pub arc: ArcDiagram,
    /// Global component index to (local point offset, local pair offset).
    offsets: HashMap<usize, (usize, usize)>,
}

impl SideMap {
    fn new(h: &HeegaardDiagram, comps: &[usize]) -> SideMap {
        let mut arc = ArcDiagram::empty();
        let mut offsets = HashMap::new();
        for &c in comps {
            offsets.insert(c, (arc.num_points(), arc.num_pairs));
            arc = arc.union(&h.components[c].arc);
        }
        SideMap { arc, offsets }
    }

    fn point(&self, h: &HeegaardDiagram, p: usize) -> usize {
        let c = h.component_of_point(p);
        p - h.components[c].point_offset + self.offsets[&c].0
    }

    fn pair(&self, h: &HeegaardDiagram, i: usize) -> Option<usize> {
        let c = h.component_of_pair(i);
        self.offsets.get(&c).map(|o| i - h.components[c].pair_offset + o.1)
    }

    fn chord(&self, h: &HeegaardDiagram, c: Chord) -> Chord {
        Chord { lo: self.point(h, c.lo), hi: self.point(h, c.hi) }
    }

    /// Local point to global point.
    fn global_point(&self, h: &HeegaardDiagram, p: usize) -> usize {
        let (&c, o) = self.offsets.iter().filter(|(_, o)| o.0 <= p).max_by_key(|(_, o)| o.0).expect("point on this side");
        h.components[c].point_offset + p - o.0
    }

    fn pairs(&self, h: &HeegaardDiagram, global: &BTreeSet<usize>) -> BTreeSet<usize> {
        global.iter().filter_map(|&i| self.pair(h, i)).collect()
    }

    fn all_pairs(&self) -> BTreeSet<usize> {
        (0..self.arc.num_pairs).collect()
    }

    /// Embeds an hclass over this side's points into `Gr(Z)` of the diagram.
    fn embed(&self, h: &HeegaardDiagram, g: &GradingElement) -> GradingElement {
        let mut hc = vec![0; h.z.num_points()];
        for (p, &v) in g.hclass.iter().enumerate() {
            if v != 0 {
                hc[self.global_point(h, p)] = v;
            }
        }
        GradingElement { maslov: g.maslov, hclass: hc }
    }
}

/// The result of an invariant computation.
#[derive(Clone, Debug)]
pub struct Invariant {
    pub structure: Structure,
    pub generators: Vec<Generator>,
    pub contributions: Vec<Contribution>,
    pub d_side: SideMap,
    pub a_side: SideMap,
}

fn class(kind: EdgeKind) -> u8 {
    match kind {
        EdgeKind::AlphaArc | EdgeKind::AlphaCircle => 0,
        EdgeKind::Beta => 1,
        EdgeKind::Z => 2,
        EdgeKind::Free => 3,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Turn {
    Source(usize),
    Target(usize),
    ChordStart(usize),
    ChordEnd(usize),
    Straight,
}

/// Location of every side: region, cycle, position.
fn side_locations(h: &HeegaardDiagram) -> HashMap<Side, (usize, usize, usize)> {
    let mut m = HashMap::new();
    for (r, reg) in h.regions.iter().enumerate() {
        for (c, cyc) in reg.cycles.iter().enumerate() {
            for (p, s) in cyc.iter().enumerate() {
                m.insert(*s, (r, c, p));
            }
        }
    }
    m
}

fn other_region(h: &HeegaardDiagram, s: Side) -> Option<usize> {
    let (l, r) = h.edge_regions[s.edge];
    if s.forward {
        r
    } else {
        Some(l)
    }
}

/// All embedded polygons of the diagram.
pub fn polygons(h: &HeegaardDiagram) -> Result<Vec<Polygon>> {
    let loc = side_locations(h);
    let n = h.regions.len();
    let mut adj = vec![BTreeSet::new(); n];
    for (e, edge) in h.edges.iter().enumerate() {
        if let (l, Some(r)) = h.edge_regions[e] {
            if l != r && !edge.kind.is_boundary() && !h.boundary_region[l] && !h.boundary_region[r] {
                adj[l].insert(r);
                adj[r].insert(l);
            }
        }
    }
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut queue: VecDeque<Vec<usize>> = VecDeque::new();
    for r in 0..n {
        if !h.boundary_region[r] {
            seen.insert(vec![r]);
            queue.push_back(vec![r]);
        }
    }
    let mut out = Vec::new();
    while let Some(set) = queue.pop_front() {
        if let Some(p) = analyze(h, &loc, &set) {
            out.push(p);
        }
        let members: BTreeSet<usize> = set.iter().copied().collect();
        for &r in &set {
            for &s in &adj[r] {
                if members.contains(&s) {
                    continue;
                }
                let mut next = set.clone();
                next.push(s);
                next.sort_unstable();
                if seen.insert(next.clone()) {
                    if seen.len() > MAX_REGION_SETS {
                        return Err(Error::Precondition(format!("`{}` has too many connected region sets to enumerate", h.name)));
                    }
                    queue.push_back(next);
                }
            }
        }
    }
    out.sort_by(|a, b| a.regions.cmp(&b.regions));
    Ok(out)
}

fn analyze(h: &HeegaardDiagram, loc: &HashMap<Side, (usize, usize, usize)>, set: &[usize]) -> Option<Polygon> {
    let mut in_s = vec![false; h.regions.len()];
    for &r in set {
        in_s[r] = true;
    }
    let is_bdry = |s: Side| other_region(h, s).is_none_or(|o| !in_s[o]);
    // Euler characteristic of the closure.
    let mut verts = BTreeSet::new();
    let mut edges = BTreeSet::new();
    let mut bdry: Vec<(usize, usize, usize)> = Vec::new();
    for &r in set {
        for (c, cyc) in h.regions[r].cycles.iter().enumerate() {
            for (p, &s) in cyc.iter().enumerate() {
                verts.insert(h.side_head(s));
                verts.insert(h.side_tail(s));
                edges.insert(s.edge);
                if is_bdry(s) {
                    bdry.push((r, c, p));
                }
            }
        }
    }
    let chi = verts.len() as i64 - edges.len() as i64 + set.iter().map(|&r| h.regions[r].chi).sum::<i64>();
    if chi != 1 || bdry.is_empty() {
        return None;
    }
    // Trace the boundary: from each boundary side to the next, counting slots.
    let side_at = |(r, c, p): (usize, usize, usize)| h.regions[r].cycles[c][p];
    let next = |start: (usize, usize, usize)| -> Option<((usize, usize, usize), usize)> {
        let (mut r, mut c, mut p) = start;
        let mut k = 1;
        loop {
            let cyc = &h.regions[r].cycles[c];
            let q = (p + 1) % cyc.len();
            let out = cyc[q];
            if is_bdry(out) {
                return Some(((r, c, q), k));
            }
            let rev = Side { edge: out.edge, forward: !out.forward };
            (r, c, p) = *loc.get(&rev)?;
            k += 1;
            if k > 4 * h.regions.len() + 4 {
                return None;
            }
        }
    };
    let mut cycle = vec![bdry[0]];
    let mut ks = Vec::new();
    loop {
        let (nx, k) = next(*cycle.last().expect("nonempty"))?;
        ks.push(k);
        if nx == cycle[0] {
            break;
        }
        if cycle.len() > bdry.len() {
            return None;
        }
        cycle.push(nx);
    }
    if cycle.len() != bdry.len() {
        return None;
    }
    // Classify turns; turn i sits between side i and side i+1.
    let len = cycle.len();
    let mut turn_vertices = HashSet::new();
    let mut turns = Vec::with_capacity(len);
    for i in 0..len {
        let (sin, sout) = (side_at(cycle[i]), side_at(cycle[(i + 1) % len]));
        let v = h.side_head(sin);
        if !turn_vertices.insert(v) {
            return None;
        }
        let (a, b) = (class(h.edges[sin.edge].kind), class(h.edges[sout.edge].kind));
        let k = ks[i];
        let valence = h.vertex_slots[v].len();
        let zpoint = match h.vertices[v].kind {
            VertexKind::ZPoint(p) => Some(p),
            _ => None,
        };
        let t = match (a, b) {
            (0, 1) if k == 1 => Turn::Target(h.intersection_at(v)?),
            (1, 0) if k == 1 => Turn::Source(h.intersection_at(v)?),
            (0, 2) if k == 1 => Turn::ChordStart(zpoint?),
            (2, 0) if k == 1 => Turn::ChordEnd(zpoint?),
            (2, 2) if k == valence => Turn::Straight,
            (0, 0) | (1, 1) if 2 * k == valence => Turn::Straight,
            _ => return None,
        };
        turns.push(t);
    }
    // Rotate to start at a source; runs alternate alpha and beta.
    let first = turns.iter().position(|t| matches!(t, Turn::Source(_)))?;
    turns.rotate_left(first);
    let mut sources = Vec::new();
    let mut targets = Vec::new();
    let mut runs = Vec::new();
    let mut in_alpha = false;
    let mut run = Vec::new();
    let mut open: Option<usize> = None;
    for t in turns {
        match t {
            Turn::Source(i) => {
                if in_alpha {
                    return None;
                }
                sources.push(i);
                in_alpha = true;
            }
            Turn::Target(i) => {
                if !in_alpha || open.is_some() {
                    return None;
                }
                targets.push(i);
                runs.push(std::mem::take(&mut run));
                in_alpha = false;
            }
            Turn::ChordStart(p) => {
                if !in_alpha || open.is_some() {
                    return None;
                }
                open = Some(p);
            }
            Turn::ChordEnd(q) => {
                let p = open.take()?;
                run.push(h.z.chord(p, q).ok()?);
            }
            Turn::Straight => {}
        }
    }
    if in_alpha {
        return None;
    }
    let mut domain = vec![0; h.regions.len()];
    for &r in set {
        domain[r] = 1;
    }
    Some(Polygon { regions: set.to_vec(), domain, sources, targets, runs, vertices: verts })
}

/// `ind(B, rho) = e(B) + n_x(B) + n_y(B) + |rho| + iota(rho)`, where `rho` is a
/// sequence of chord sets.
pub fn index(h: &HeegaardDiagram, domain: &Domain, x: &Generator, y: &Generator, rho: &[Vec<Chord>]) -> Rational64 {
    let group = h.grading_group();
    let grs: Vec<GradingElement> =
        rho.iter().map(|set| group.gr_strands(&Strands::new(set.iter().map(|c| (c.lo, c.hi)).collect()))).collect();
    let iota = group.product(grs.iter()).maslov;
    let (nx, ny) = h.point_measures(domain, x, y);
    h.euler_measure(domain) + nx + ny + Rational64::from_integer(rho.len() as i64) + Rational64::new(iota.halves(), 2)
}

/// The generator reached from `x` by moving the corners of the given
/// polygons, provided their closure meets `x` and the result only in corners.
fn move_generator(h: &HeegaardDiagram, valid: &HashSet<Generator>, x: &Generator, parts: &[&Polygon]) -> Option<Generator> {
    let mut y = x.clone();
    let mut corners = BTreeSet::new();
    let mut moved = 0;
    for p in parts {
        for &s in &p.sources {
            if !x.0.contains(&s) {
                return None;
            }
            corners.insert(h.intersections[s].vertex);
        }
        for &t in &p.targets {
            let b = h.intersections[t].beta;
            if !p.sources.contains(&y.0[b]) {
                return None;
            }
            y.0[b] = t;
            moved += 1;
            corners.insert(h.intersections[t].vertex);
        }
    }
    if moved != parts.iter().map(|p| p.sources.len()).sum::<usize>() || !valid.contains(&y) {
        return None;
    }
    let closure: BTreeSet<usize> = parts.iter().flat_map(|p| p.vertices.iter().copied()).collect();
    let points: BTreeSet<usize> = x.0.iter().chain(y.0.iter()).map(|&i| h.intersections[i].vertex).collect();
    if closure.intersection(&points).copied().collect::<BTreeSet<_>>() != corners {
        return None;
    }
    Some(y)
}

fn pairwise_disjoint(h: &HeegaardDiagram, ps: &[&Polygon]) -> bool {
    for i in 0..ps.len() {
        for j in i + 1..ps.len() {
            if !ps[i].vertices.is_disjoint(&ps[j].vertices) || ps[i].regions.iter().any(|r| ps[j].regions.contains(r)) {
                return false;
            }
            let betas = |p: &Polygon| p.sources.iter().map(|&s| h.intersections[s].beta).collect::<BTreeSet<_>>();
            if !betas(ps[i]).is_disjoint(&betas(ps[j])) {
                return false;
            }
        }
    }
    true
}

/// Subsets of size at least two.
fn subsets<T: Copy>(items: &[T]) -> Vec<Vec<T>> {
    let mut out = Vec::new();
    if items.len() > 20 {
        return out;
    }
    for mask in 0u32..(1u32 << items.len()) {
        if mask.count_ones() >= 2 {
            out.push((0..items.len()).filter(|i| mask & (1 << i) != 0).map(|i| items[i]).collect());
        }
    }
    out
}

fn roles(h: &HeegaardDiagram, d: &[usize], a: &[usize]) -> Vec<Role> {
    (0..h.components.len())
        .map(|c| {
            if d.contains(&c) {
                Role::D
            } else if a.contains(&c) {
                Role::A
            } else {
                Role::Ignored
            }
        })
        .collect()
}

/// All contributing domains with the given component roles.
pub fn contributions(h: &HeegaardDiagram, gens: &[Generator], roles: &[Role]) -> Result<Vec<Contribution>> {
    if !h.admissibility().provincial {
        return Err(Error::Precondition(format!("`{}` is not provincially admissible", h.name)));
    }
    let polys = polygons(h)?;
    let valid: HashSet<Generator> = h.generators().into_iter().collect();
    let in_class: HashSet<&Generator> = gens.iter().collect();
    let role_of = |c: &Chord| roles[h.component_of_point(c.lo)];
    let one = Rational64::from_integer(1);
    let mut out = Vec::new();
    for x in gens {
        let mut a_singles = Vec::new();
        for p in &polys {
            let Some(y) = move_generator(h, &valid, x, &[p]) else { continue };
            if !in_class.contains(&y) {
                continue;
            }
            let chords = p.chords();
            let seq: Vec<Vec<Chord>> = chords.iter().map(|&c| vec![c]).collect();
            let ind = index(h, &p.domain, x, &y, &seq);
            let sides: BTreeSet<Role> = chords.iter().map(role_of).collect();
            if ind != one {
                continue;
            }
            if sides.contains(&Role::Ignored) {
                continue;
            }
            if sides.len() > 1 {
                return Err(Error::Precondition(format!(
                    "an index one polygon from {} has chords on both sides",
                    h.generator_name(x)
                )));
            }
            if p.runs.iter().filter(|r| !r.is_empty()).count() > 1 {
                return Err(Error::Precondition(format!(
                    "an index one polygon from {} has chords on two alpha runs",
                    h.generator_name(x)
                )));
            }
            let on_a = sides.contains(&Role::A);
            if on_a && chords.len() == 1 {
                a_singles.push(p);
            }
            out.push(Contribution {
                x: x.clone(),
                y,
                domain: p.domain.clone(),
                d_chords: if on_a { Vec::new() } else { chords.clone() },
                a_inputs: if on_a { seq } else { Vec::new() },
                index: ind,
            });
        }
        // Disjoint unions of single-chord polygons give one multi-chord input.
        for parts in subsets(&a_singles) {
            if !pairwise_disjoint(h, &parts) {
                continue;
            }
            let Some(y) = move_generator(h, &valid, x, &parts) else { continue };
            if !in_class.contains(&y) {
                continue;
            }
            let mut domain = vec![0; h.regions.len()];
            for p in &parts {
                for (d, v) in domain.iter_mut().zip(&p.domain) {
                    *d += v;
                }
            }
            let mut set: Vec<Chord> = parts.iter().flat_map(|p| p.chords()).collect();
            set.sort();
            let rho = vec![set];
            let ind = index(h, &domain, x, &y, &rho);
            if ind == one {
                out.push(Contribution { x: x.clone(), y, domain, d_chords: Vec::new(), a_inputs: rho, index: ind });
            }
        }
    }
    Ok(out)
}

fn algebra_of(z: &ArcDiagram) -> Result<Arc<Algebra>> {
    if z.num_points() == 0 {
        Ok(trivial_algebra())
    } else {
        Algebra::new(z)
    }
}

/// The invariant with the given components on the type D and type A sides,
/// restricted to the generators of `class` when given.
pub fn invariant(h: &HeegaardDiagram, name: &str, d_comps: &[usize], a_comps: &[usize], class: Option<&SpincClass>) -> Result<Invariant> {
    let gens: Vec<Generator> = match class {
        Some(c) => c.generators.clone(),
        None => h.generators(),
    };
    let roles = roles(h, d_comps, a_comps);
    let d_side = SideMap::new(h, d_comps);
    let a_side = SideMap::new(h, a_comps);
    let d_rev = d_side.arc.reverse();
    let left = algebra_of(&d_rev)?;
    let right = algebra_of(&a_side.arc)?;
    let mut st = Structure::new(format!("{}({})", name, h.name), left.clone(), right.clone());
    let d_all = d_side.all_pairs();
    let idem_d = |g: &Generator| -> BTreeSet<usize> { d_all.difference(&d_side.pairs(h, &h.occupied(g))).copied().collect() };
    let idem_a = |g: &Generator| a_side.pairs(h, &h.occupied(g));
    let mut index = HashMap::new();
    for g in &gens {
        index.insert(g.clone(), st.add_gen(h.generator_name(g), idem_d(g), idem_a(g)));
    }
    let contribs = contributions(h, &gens, &roles)?;
    let mut kept = Vec::new();
    for c in contribs {
        // Output coefficient: product of a(-rho_i), chained from the left idempotent.
        let mut cur = idem_d(&c.x);
        let mut coeff = Some(left.idem_id(&cur));
        for &ch in &c.d_chords {
            let local = d_side.arc.reverse_chord(d_side.chord(h, ch));
            match step(&left, &cur, &[local])? {
                Some(id) => {
                    cur = left.right_idem(id).clone();
                    coeff = coeff.and_then(|a| left.mul_basis(a, id));
                }
                None => {
                    coeff = None;
                    break;
                }
            }
        }
        let Some(coeff) = coeff else { continue };
        if left.right_idem(coeff) != &idem_d(&c.y) {
            return Err(Error::Structure(format!(
                "coefficient from {} to {} ends at the wrong idempotent",
                h.generator_name(&c.x),
                h.generator_name(&c.y)
            )));
        }
        let mut cur = idem_a(&c.x);
        let mut inputs = Vec::new();
        for set in &c.a_inputs {
            let local: Vec<Chord> = set.iter().map(|&ch| a_side.chord(h, ch)).collect();
            match step(&right, &cur, &local)? {
                Some(id) => {
                    cur = right.right_idem(id).clone();
                    inputs.push(id);
                }
                None => break,
            }
        }
        if inputs.len() != c.a_inputs.len() {
            continue;
        }
        if cur != idem_a(&c.y) {
            return Err(Error::Structure(format!(
                "inputs from {} to {} end at the wrong idempotent",
                h.generator_name(&c.x),
                h.generator_name(&c.y)
            )));
        }
        st.add_term(index[&c.x], inputs, coeff, index[&c.y]);
        kept.push(c);
    }
    Ok(Invariant { structure: st, generators: gens, contributions: kept, d_side, a_side })
}

/// `a(chords, s)` with `s` the rest of the current idempotent, or zero.
fn step(alg: &Algebra, cur: &BTreeSet<usize>, chords: &[Chord]) -> Result<Option<usize>> {
    let m = &alg.z.matching;
    let starts: BTreeSet<usize> = chords.iter().map(|c| m[c.lo]).collect();
    let ends: BTreeSet<usize> = chords.iter().map(|c| m[c.hi]).collect();
    if !starts.is_subset(cur) {
        return Err(Error::Structure("a chord starts on an unoccupied pair".into()));
    }
    let s: BTreeSet<usize> = cur.difference(&starts).copied().collect();
    if !s.is_disjoint(&ends) {
        return Ok(None);
    }
    alg.chord_element(chords, &s)
}

fn sided(h: &HeegaardDiagram, side: u8) -> Vec<usize> {
    (0..h.components.len()).filter(|&c| h.components[c].side == Some(side)).collect()
}

fn all_components(h: &HeegaardDiagram) -> Vec<usize> {
    (0..h.components.len()).collect()
}

/// Type D structure: every boundary component on the type D side.
pub fn bsd(h: &HeegaardDiagram, class: Option<&SpincClass>) -> Result<Invariant> {
    invariant(h, "BSD", &all_components(h), &[], class)
}

/// A-infinity module: every boundary component on the type A side.
pub fn bsa(h: &HeegaardDiagram, class: Option<&SpincClass>) -> Result<Invariant> {
    invariant(h, "BSA", &[], &all_components(h), class)
}

/// Type DA bimodule: components marked `side=1` on the type D side, `side=2`
/// on the type A side.
pub fn bsda(h: &HeegaardDiagram, class: Option<&SpincClass>) -> Result<Invariant> {
    if h.components.iter().any(|c| c.side.is_none()) {
        return Err(Error::Invalid(format!("every boundary component of `{}` needs side=1 or side=2", h.name)));
    }
    invariant(h, "BSDA", &sided(h, 1), &sided(h, 2), class)
}

/// Sutured chain complex: provincial domains only.
pub fn sfc(h: &HeegaardDiagram, class: Option<&SpincClass>) -> Result<Invariant> {
    if h.z.num_points() > 0 {
        return Err(Error::Precondition(format!("`{}` has bordered boundary; glue it closed first", h.name)));
    }
    invariant(h, "SFC", &[], &[], class)
}

impl Invariant {
    fn coset(&self, h: &HeegaardDiagram, g: &Generator) -> Result<GradingCoset> {
        h.generator_grading(g, &self.generators[0])
    }

    /// Checks the grading law of every term:
    /// `P gr(y) Phi^-1(gr(b)) = P gr(x) gr(a_1) ... gr(a_j) lambda^(j-1)`,
    /// where `Phi^-1(m, beta) = (m, -r(beta))` pulls `Gr(-Z_D)` back to `Gr(Z_D)`.
    /// Returns a description of each failure.
    pub fn grading_violations(&self, h: &HeegaardDiagram) -> Result<Vec<String>> {
        let group = h.grading_group();
        let d_group = GradingGroup::new(Arc::new(self.d_side.arc.reverse()));
        let a_group = GradingGroup::new(Arc::new(self.a_side.arc.clone()));
        let st = &self.structure;
        let gen_of = |i: usize| h.generator_by_name(&st.gens[i].name).expect("generator names come from the diagram");
        let mut bad = Vec::new();
        for ((x, inputs), terms) in &st.ops {
            let cx = self.coset(h, &gen_of(*x))?;
            let mut rhs = group.identity();
            for &a in inputs {
                rhs = group.mul(&rhs, &self.a_side.embed(h, &a_group.gr_basis(&st.right, a)));
            }
            rhs = group.mul(&rhs, &group.lambda(Half::from_int(inputs.len() as i64 - 1)));
            let right = cx.act(&rhs);
            for &(b, y) in terms {
                let gb = d_group.reverse_element(&d_group.gr_basis(&st.left, b));
                let pulled = GradingElement { maslov: gb.maslov, hclass: gb.hclass.iter().map(|v| -v).collect() };
                let left = self.coset(h, &gen_of(y))?.act(&self.d_side.embed(h, &pulled));
                if !left.coset_equal(&right)? {
                    bad.push(format!("{} -> {} ({})", st.gens[*x].name, st.gens[y].name, st.left.name(b)));
                }
            }
        }
        Ok(bad)
    }
}
