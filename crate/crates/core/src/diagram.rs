//! Bordered sutured Heegaard diagrams encoded as combinatorial maps.
//!
//! The surface is a list of regions. Each region is a list of boundary cycles
//! of directed edges with the region on the left. The boundary of the surface
//! is oriented with the surface on its left, so `Z` and free edges occur once,
//! forward; alpha and beta edges occur once in each direction.
//!
//! `Z` edges are generated from the boundary components: segment `s` of
//! component `C` with `n` points has edges `C.s.0 .. C.s.n`, where `C.s.t`
//! runs from point `t-1` (or the segment start) to point `t` (or the end).

use crate::arc_diagram::ArcDiagram;
use crate::error::{parse_err, Error, Result};
use crate::grading::{GradingCoset, GradingElement, GradingGroup, Stabilizer};
use crate::half::Half;
use crate::linalg::{nonnegative_kernel_vector, solve_integer};
use num_rational::Rational64;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::path::Path;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeKind {
    AlphaArc,
    AlphaCircle,
    Beta,
    Z,
    Free,
}

impl EdgeKind {
    pub fn is_alpha(self) -> bool {
        matches!(self, EdgeKind::AlphaArc | EdgeKind::AlphaCircle)
    }

    pub fn is_boundary(self) -> bool {
        matches!(self, EdgeKind::Z | EdgeKind::Free)
    }

    fn keyword(self) -> &'static str {
        match self {
            EdgeKind::AlphaArc => "alpha-arc",
            EdgeKind::AlphaCircle => "alpha-circle",
            EdgeKind::Beta => "beta",
            EdgeKind::Z => "z",
            EdgeKind::Free => "free",
        }
    }

    fn parse(s: &str) -> Option<EdgeKind> {
        Some(match s {
            "alpha-arc" => EdgeKind::AlphaArc,
            "alpha-circle" => EdgeKind::AlphaCircle,
            "beta" => EdgeKind::Beta,
            "z" => EdgeKind::Z,
            "free" => EdgeKind::Free,
            _ => return None,
        })
    }
}

/// Where a boundary component's arc diagram comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArcSource {
    /// A file path, relative to the diagram file.
    File(String),
    /// Written out on the `boundary` line.
    Inline,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawBoundary {
    pub name: String,
    pub source: ArcSource,
    /// The arc diagram as loaded, before `reversed` is applied.
    pub base: ArcDiagram,
    pub reversed: bool,
    pub side: Option<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawEdge {
    pub name: String,
    pub kind: EdgeKind,
    pub from: String,
    pub to: String,
    pub curve: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawRegion {
    pub name: String,
    pub chi: Option<i64>,
    pub cycles: Vec<Vec<(String, bool)>>,
}

/// The textual content of a diagram file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawDiagram {
    pub name: String,
    pub boundaries: Vec<RawBoundary>,
    /// Non-`Z` edges, plus optional aliases of generated `Z` edges.
    pub edges: Vec<RawEdge>,
    pub regions: Vec<RawRegion>,
    pub expects: Vec<(String, String)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VertexKind {
    Interior,
    /// A point of `Z`, by global index.
    ZPoint(usize),
    /// Start of a segment, by global segment index.
    SegmentStart(usize),
    SegmentEnd(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub name: String,
    pub kind: VertexKind,
}

/// Position of a `Z` edge: component, segment within it, and piece `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ZPos {
    pub component: usize,
    pub segment: usize,
    pub t: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub kind: EdgeKind,
    pub from: usize,
    pub to: usize,
    /// Index into the alpha arcs, alpha circles or betas.
    pub curve: Option<usize>,
    pub zpos: Option<ZPos>,
    /// For `Z` edges between two points: the interval `[p, p+1]` of `Z`.
    pub interval: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Side {
    pub edge: usize,
    pub forward: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub name: String,
    pub cycles: Vec<Vec<Side>>,
    pub chi: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curve {
    pub name: String,
    pub edges: Vec<usize>,
    /// Global matched pair of an alpha arc.
    pub pair: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub name: String,
    /// Oriented as part of `Z`.
    pub arc: ArcDiagram,
    pub point_offset: usize,
    pub pair_offset: usize,
    pub segment_offset: usize,
    pub side: Option<u8>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlphaRef {
    Arc(usize),
    Circle(usize),
}

/// An alpha-beta intersection point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Intersection {
    pub vertex: usize,
    pub alpha: AlphaRef,
    pub beta: usize,
}

/// A corner slot of a region: the vertex between two consecutive sides.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Slot {
    pub region: usize,
    pub cycle: usize,
    /// Index of the incoming side; the outgoing side follows it.
    pub pos: usize,
    pub vertex: usize,
    /// Whether the boundary turns between an alpha side and a beta or `Z` side.
    pub corner: bool,
}

/// A generator: one intersection index per beta curve, in beta order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator(pub Vec<usize>);

/// Multiplicity per region.
pub type Domain = Vec<i64>;

/// `pi_2(x, y)` as a particular domain plus a basis of periodic domains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Domains {
    pub particular: Domain,
    pub periodic: Vec<Domain>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpincClass {
    pub index: usize,
    pub generators: Vec<Generator>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Admissibility {
    pub provincial: bool,
    pub full: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub problems: Vec<String>,
}

impl CheckReport {
    pub fn is_ok(&self) -> bool {
        self.problems.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct HeegaardDiagram {
    pub raw: RawDiagram,
    pub name: String,
    pub components: Vec<Component>,
    pub z: Arc<ArcDiagram>,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub regions: Vec<Region>,
    pub alpha_arcs: Vec<Curve>,
    pub alpha_circles: Vec<Curve>,
    pub betas: Vec<Curve>,
    pub intersections: Vec<Intersection>,
    /// Region on the left of each edge, and on the right for interior edges.
    pub edge_regions: Vec<(usize, Option<usize>)>,
    /// Regions containing a free edge; their multiplicity is always zero.
    pub boundary_region: Vec<bool>,
    /// Regions containing a `Z` interval.
    pub z_region: Vec<bool>,
    pub slots: Vec<Slot>,
    /// Slot ids at each vertex.
    pub vertex_slots: Vec<Vec<usize>>,
    vertex_index: HashMap<String, usize>,
    intersection_of_vertex: HashMap<usize, usize>,
}

/// The linear system of corner conditions on non-boundary regions.
struct DomainSystem {
    unknowns: Vec<usize>,
    rows: Vec<Vec<i64>>,
    /// `(vertex, alpha?)` per row.
    row_info: Vec<(usize, bool)>,
}

fn structure(msg: impl Into<String>) -> Error {
    Error::Structure(msg.into())
}

fn inline_arc(segments_text: &str, matches_text: &str) -> Result<ArcDiagram> {
    let mut text = String::new();
    for seg in segments_text.split(';').filter(|s| !s.is_empty()) {
        let (name, pts) = seg.split_once(':').ok_or_else(|| Error::Invalid(format!("bad segment `{}`", seg)))?;
        text.push_str(&format!("segment {}\n", name));
        for p in pts.split(',').filter(|p| !p.is_empty()) {
            text.push_str(&format!("point {}\n", p));
        }
    }
    for m in matches_text.split(',').filter(|s| !s.is_empty()) {
        let (a, b) = m.split_once(':').ok_or_else(|| Error::Invalid(format!("bad match `{}`", m)))?;
        text.push_str(&format!("match {} {}\n", a, b));
    }
    ArcDiagram::parse(&text)
}

fn inline_text(z: &ArcDiagram) -> String {
    let segs: Vec<String> = z
        .segments
        .iter()
        .map(|s| format!("{}:{}", s.name, z.point_names[s.start..s.start + s.len].join(",")))
        .collect();
    let matches: Vec<String> = (0..z.num_pairs)
        .map(|i| {
            let (a, b) = z.pair_points(i);
            format!("{}:{}", z.point_names[a], z.point_names[b])
        })
        .collect();
    format!("segments={} matches={}", segs.join(";"), matches.join(","))
}

impl RawDiagram {
    /// Parses a diagram; `load` resolves arc diagram file names.
    pub fn parse(text: &str, load: &dyn Fn(&str) -> Result<String>) -> Result<RawDiagram> {
        let mut raw = RawDiagram::default();
        for (ln, line_raw) in text.lines().enumerate() {
            let line = line_raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let ln = ln + 1;
            let col = line_raw.find(line).unwrap_or(0) + 1;
            let err = |msg: String| parse_err(ln, col, msg);
            let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            match kw {
                "name" => raw.name = rest.to_string(),
                "boundary" => {
                    let toks: Vec<&str> = rest.split_whitespace().collect();
                    if toks.len() < 2 {
                        return Err(err("expected `boundary <name> <file.arc>|inline ...`".into()));
                    }
                    let name = toks[0].to_string();
                    if name.contains('.') {
                        return Err(err(format!("component name `{}` contains `.`", name)));
                    }
                    let mut reversed = false;
                    let mut side = None;
                    let mut segs = None;
                    let mut matches = "";
                    for t in &toks[2..] {
                        if *t == "reversed" {
                            reversed = true;
                        } else if let Some(v) = t.strip_prefix("side=") {
                            side = Some(match v {
                                "1" => 1,
                                "2" => 2,
                                _ => return Err(err(format!("bad side `{}`", v))),
                            });
                        } else if let Some(v) = t.strip_prefix("segments=") {
                            segs = Some(v);
                        } else if let Some(v) = t.strip_prefix("matches=") {
                            matches = v;
                        } else {
                            return Err(err(format!("unknown boundary option `{}`", t)));
                        }
                    }
                    let (source, base) = if toks[1] == "inline" {
                        let segs = segs.ok_or_else(|| err("inline boundary needs `segments=`".into()))?;
                        (ArcSource::Inline, inline_arc(segs, matches).map_err(|e| err(e.to_string()))?)
                    } else {
                        let text = load(toks[1]).map_err(|e| err(format!("cannot load `{}`: {}", toks[1], e)))?;
                        (ArcSource::File(toks[1].to_string()), ArcDiagram::parse(&text).map_err(|e| err(format!("in `{}`: {}", toks[1], e)))?)
                    };
                    raw.boundaries.push(RawBoundary { name, source, base, reversed, side });
                }
                "edge" => {
                    let toks: Vec<&str> = rest.split_whitespace().collect();
                    if toks.is_empty() {
                        return Err(err("expected `edge <name> kind=... from=... to=...`".into()));
                    }
                    let mut kind = None;
                    let (mut from, mut to, mut curve) = (None, None, None);
                    for t in &toks[1..] {
                        let (k, v) = t.split_once('=').ok_or_else(|| err(format!("expected key=value, got `{}`", t)))?;
                        match k {
                            "kind" => kind = Some(EdgeKind::parse(v).ok_or_else(|| err(format!("unknown edge kind `{}`", v)))?),
                            "from" => from = Some(v.to_string()),
                            "to" => to = Some(v.to_string()),
                            "curve" | "arc" => curve = Some(v.to_string()),
                            _ => return Err(err(format!("unknown edge key `{}`", k))),
                        }
                    }
                    let kind = kind.ok_or_else(|| err("edge needs kind=".into()))?;
                    let from = from.ok_or_else(|| err("edge needs from=".into()))?;
                    let to = to.ok_or_else(|| err("edge needs to=".into()))?;
                    if matches!(kind, EdgeKind::AlphaArc | EdgeKind::AlphaCircle | EdgeKind::Beta) && curve.is_none() {
                        return Err(err(format!("{} edge needs a curve name", kind.keyword())));
                    }
                    raw.edges.push(RawEdge { name: toks[0].to_string(), kind, from, to, curve });
                }
                "region" => {
                    let (head, body) = rest.split_once(':').ok_or_else(|| err("expected `region <name>: ...`".into()))?;
                    let head: Vec<&str> = head.split_whitespace().collect();
                    if head.is_empty() {
                        return Err(err("region needs a name".into()));
                    }
                    let mut chi = None;
                    for t in &head[1..] {
                        let v = t.strip_prefix("chi=").ok_or_else(|| err(format!("unknown region option `{}`", t)))?;
                        chi = Some(v.parse().map_err(|_| err(format!("bad chi `{}`", v)))?);
                    }
                    let mut cycles = Vec::new();
                    for part in body.split(';') {
                        let mut cyc = Vec::new();
                        for t in part.split_whitespace() {
                            let (name, fwd) = if let Some(n) = t.strip_suffix('+') {
                                (n, true)
                            } else if let Some(n) = t.strip_suffix('-') {
                                (n, false)
                            } else {
                                return Err(err(format!("edge `{}` needs a sign", t)));
                            };
                            cyc.push((name.to_string(), fwd));
                        }
                        if !cyc.is_empty() {
                            cycles.push(cyc);
                        }
                    }
                    raw.regions.push(RawRegion { name: head[0].to_string(), chi, cycles });
                }
                "expect" => {
                    let (k, v) = rest.split_once(char::is_whitespace).ok_or_else(|| err("expected `expect <key> <value>`".into()))?;
                    raw.expects.push((k.to_string(), v.trim().to_string()));
                }
                other => return Err(err(format!("unknown keyword `{}`", other))),
            }
        }
        Ok(raw)
    }
}

impl fmt::Display for RawDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "name {}", self.name)?;
        for b in &self.boundaries {
            let src = match &b.source {
                ArcSource::File(p) => p.clone(),
                ArcSource::Inline => format!("inline {}", inline_text(&b.base)),
            };
            write!(f, "boundary {} {}", b.name, src)?;
            if b.reversed {
                write!(f, " reversed")?;
            }
            if let Some(s) = b.side {
                write!(f, " side={}", s)?;
            }
            writeln!(f)?;
        }
        for e in &self.edges {
            write!(f, "edge {} kind={} from={} to={}", e.name, e.kind.keyword(), e.from, e.to)?;
            if let Some(c) = &e.curve {
                write!(f, " {}={}", if e.kind == EdgeKind::AlphaArc { "arc" } else { "curve" }, c)?;
            }
            writeln!(f)?;
        }
        for r in &self.regions {
            write!(f, "region {}", r.name)?;
            if let Some(c) = r.chi {
                write!(f, " chi={}", c)?;
            }
            let cycles: Vec<String> = r
                .cycles
                .iter()
                .map(|c| c.iter().map(|(e, fwd)| format!("{}{}", e, if *fwd { '+' } else { '-' })).collect::<Vec<_>>().join(" "))
                .collect();
            writeln!(f, ": {}", cycles.join(" ; "))?;
        }
        for (k, v) in &self.expects {
            writeln!(f, "expect {} {}", k, v)?;
        }
        Ok(())
    }
}

fn class(kind: EdgeKind) -> u8 {
    match kind {
        EdgeKind::AlphaArc | EdgeKind::AlphaCircle => 0,
        EdgeKind::Beta => 1,
        EdgeKind::Z => 2,
        EdgeKind::Free => 3,
    }
}

impl HeegaardDiagram {
    /// Reads a diagram file; arc diagram paths are relative to its directory.
    pub fn load(path: &Path) -> Result<HeegaardDiagram> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {}", path.display(), e)))?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let load = move |name: &str| std::fs::read_to_string(dir.join(name)).map_err(|e| Error::Invalid(e.to_string()));
        HeegaardDiagram::build(RawDiagram::parse(&text, &load)?)
    }

    pub fn parse(text: &str, load: &dyn Fn(&str) -> Result<String>) -> Result<HeegaardDiagram> {
        HeegaardDiagram::build(RawDiagram::parse(text, load)?)
    }

    /// Builds the combinatorial map and checks the local structure.
    pub fn build(raw: RawDiagram) -> Result<HeegaardDiagram> {
        // Boundary components and Z.
        let mut components = Vec::new();
        let mut z = ArcDiagram::empty();
        let mut names = HashSet::new();
        for b in &raw.boundaries {
            if !names.insert(b.name.clone()) {
                return Err(structure(format!("duplicate boundary component `{}`", b.name)));
            }
            b.base.validate()?;
            let arc = if b.reversed { b.base.reverse() } else { b.base.clone() };
            components.push(Component {
                name: b.name.clone(),
                arc: arc.clone(),
                point_offset: z.num_points(),
                pair_offset: z.num_pairs,
                segment_offset: z.segments.len(),
                side: b.side,
            });
            z = z.union(&arc);
        }
        let mut vertices: Vec<Vertex> = Vec::new();
        let mut vertex_index: HashMap<String, usize> = HashMap::new();
        let mut edges: Vec<Edge> = Vec::new();
        let mut edge_index: HashMap<String, usize> = HashMap::new();
        let add_vertex = |vertices: &mut Vec<Vertex>, index: &mut HashMap<String, usize>, name: String, kind: VertexKind| {
            index.insert(name.clone(), vertices.len());
            vertices.push(Vertex { name, kind });
            vertices.len() - 1
        };
        for (ci, c) in components.iter().enumerate() {
            for (sj, seg) in c.arc.segments.iter().enumerate() {
                let gseg = c.segment_offset + sj;
                let mut chain = vec![add_vertex(&mut vertices, &mut vertex_index, format!("{}.{}.start", c.name, seg.name), VertexKind::SegmentStart(gseg))];
                for p in seg.start..seg.start + seg.len {
                    let name = format!("{}.{}", c.name, c.arc.point_names[p]);
                    chain.push(add_vertex(&mut vertices, &mut vertex_index, name, VertexKind::ZPoint(c.point_offset + p)));
                }
                chain.push(add_vertex(&mut vertices, &mut vertex_index, format!("{}.{}.end", c.name, seg.name), VertexKind::SegmentEnd(gseg)));
                for t in 0..=seg.len {
                    let interval = (t > 0 && t < seg.len).then(|| c.point_offset + seg.start + t - 1);
                    let name = format!("{}.{}.{}", c.name, seg.name, t);
                    edge_index.insert(name.clone(), edges.len());
                    edges.push(Edge {
                        name,
                        kind: EdgeKind::Z,
                        from: chain[t],
                        to: chain[t + 1],
                        curve: None,
                        zpos: Some(ZPos { component: ci, segment: sj, t }),
                        interval,
                    });
                }
            }
        }
        // Explicit edges.
        let mut curve_names: [Vec<String>; 3] = Default::default();
        let mut aliases: Vec<(String, usize)> = Vec::new();
        for e in &raw.edges {
            let mut resolve = |r: &str| -> Result<usize> {
                if let Some(&v) = vertex_index.get(r) {
                    return Ok(v);
                }
                if r.contains('.') {
                    return Err(structure(format!("unknown boundary vertex `{}`", r)));
                }
                Ok(add_vertex(&mut vertices, &mut vertex_index, r.to_string(), VertexKind::Interior))
            };
            let from = resolve(&e.from)?;
            let to = resolve(&e.to)?;
            if e.kind == EdgeKind::Z {
                let found = edges.iter().position(|x| x.kind == EdgeKind::Z && x.from == from && x.to == to);
                let Some(i) = found else {
                    return Err(structure(format!("z edge `{}` does not match a boundary interval", e.name)));
                };
                aliases.push((e.name.clone(), i));
                continue;
            }
            if edge_index.contains_key(&e.name) {
                return Err(structure(format!("duplicate edge `{}`", e.name)));
            }
            let curve = match e.kind {
                EdgeKind::AlphaArc | EdgeKind::AlphaCircle | EdgeKind::Beta => {
                    let list = &mut curve_names[class(e.kind) as usize + usize::from(e.kind == EdgeKind::AlphaCircle) * 2];
                    let name = e.curve.clone().expect("parser requires curve names");
                    Some(match list.iter().position(|n| *n == name) {
                        Some(i) => i,
                        None => {
                            list.push(name);
                            list.len() - 1
                        }
                    })
                }
                _ => None,
            };
            edge_index.insert(e.name.clone(), edges.len());
            edges.push(Edge { name: e.name.clone(), kind: e.kind, from, to, curve, zpos: None, interval: None });
        }
        for (a, i) in aliases {
            if edge_index.insert(a.clone(), i).is_some() {
                return Err(structure(format!("duplicate edge `{}`", a)));
            }
        }
        // Curves. Slot 0: alpha arcs, 1: betas, 2: alpha circles.
        let make_curves = |slot: usize, kind: EdgeKind| -> Vec<Curve> {
            curve_names[slot]
                .iter()
                .enumerate()
                .map(|(i, n)| Curve {
                    name: n.clone(),
                    edges: (0..edges.len()).filter(|&e| edges[e].kind == kind && edges[e].curve == Some(i)).collect(),
                    pair: None,
                })
                .collect()
        };
        let mut alpha_arcs = make_curves(0, EdgeKind::AlphaArc);
        let betas = make_curves(1, EdgeKind::Beta);
        let alpha_circles = make_curves(2, EdgeKind::AlphaCircle);
        // Regions.
        let mut regions = Vec::new();
        let mut seen_sides: HashMap<Side, usize> = HashMap::new();
        let mut region_names = HashSet::new();
        for r in &raw.regions {
            if !region_names.insert(r.name.clone()) {
                return Err(structure(format!("duplicate region `{}`", r.name)));
            }
            let mut cycles = Vec::new();
            for c in &r.cycles {
                let mut cyc = Vec::new();
                for (name, fwd) in c {
                    let &e = edge_index.get(name).ok_or_else(|| structure(format!("region `{}`: unknown edge `{}`", r.name, name)))?;
                    let s = Side { edge: e, forward: *fwd };
                    if seen_sides.insert(s, regions.len()).is_some() {
                        return Err(structure(format!("edge `{}` bounds more than one region on the same side", name)));
                    }
                    cyc.push(s);
                }
                cycles.push(cyc);
            }
            let chi = r.chi.unwrap_or(2 - cycles.len() as i64);
            regions.push(Region { name: r.name.clone(), cycles, chi });
        }
        let h = |s: &Side| if s.forward { edges[s.edge].to } else { edges[s.edge].from };
        let t = |s: &Side| if s.forward { edges[s.edge].from } else { edges[s.edge].to };
        for r in &regions {
            for c in &r.cycles {
                for i in 0..c.len() {
                    let (a, b) = (&c[i], &c[(i + 1) % c.len()]);
                    if h(a) != t(b) {
                        return Err(structure(format!(
                            "region `{}`: `{}` ends at `{}` but `{}` starts at `{}`",
                            r.name,
                            edges[a.edge].name,
                            vertices[h(a)].name,
                            edges[b.edge].name,
                            vertices[t(b)].name
                        )));
                    }
                }
            }
        }
        let mut edge_regions = Vec::new();
        for (i, e) in edges.iter().enumerate() {
            let left = seen_sides.get(&Side { edge: i, forward: true }).copied();
            let right = seen_sides.get(&Side { edge: i, forward: false }).copied();
            match (e.kind.is_boundary(), left, right) {
                (true, Some(l), None) => edge_regions.push((l, None)),
                (false, Some(l), Some(r)) => edge_regions.push((l, Some(r))),
                (true, _, _) => return Err(structure(format!("boundary edge `{}` must bound exactly one region, forward", e.name))),
                (false, _, _) => return Err(structure(format!("edge `{}` must bound exactly two region sides", e.name))),
            }
        }
        let boundary_region: Vec<bool> =
            regions.iter().map(|r| r.cycles.iter().flatten().any(|s| edges[s.edge].kind == EdgeKind::Free)).collect();
        let z_region: Vec<bool> = regions.iter().map(|r| r.cycles.iter().flatten().any(|s| edges[s.edge].interval.is_some())).collect();
        // Curve shapes.
        let degree_in = |curve: &Curve| {
            let mut d: BTreeMap<usize, usize> = BTreeMap::new();
            for &e in &curve.edges {
                *d.entry(edges[e].from).or_default() += 1;
                *d.entry(edges[e].to).or_default() += 1;
            }
            d
        };
        let connected = |curve: &Curve| {
            let mut reach: BTreeSet<usize> = BTreeSet::new();
            let Some(&e0) = curve.edges.first() else { return false };
            reach.insert(edges[e0].from);
            loop {
                let before = reach.len();
                for &e in &curve.edges {
                    if reach.contains(&edges[e].from) || reach.contains(&edges[e].to) {
                        reach.insert(edges[e].from);
                        reach.insert(edges[e].to);
                    }
                }
                if reach.len() == before {
                    break;
                }
            }
            curve.edges.iter().all(|&e| reach.contains(&edges[e].from))
        };
        for c in betas.iter().chain(alpha_circles.iter()) {
            if !connected(c) || degree_in(c).values().any(|&d| d != 2) {
                return Err(structure(format!("curve `{}` is not a simple closed curve", c.name)));
            }
            if degree_in(c).keys().any(|&v| vertices[v].kind != VertexKind::Interior) {
                return Err(structure(format!("closed curve `{}` meets the boundary", c.name)));
            }
        }
        let mut arc_of_pair = vec![None; z.num_pairs];
        for (ai, c) in alpha_arcs.iter_mut().enumerate() {
            let d = degree_in(c);
            let ends: Vec<usize> = d.iter().filter(|(_, &k)| k == 1).map(|(&v, _)| v).collect();
            if !connected(c) || ends.len() != 2 || d.values().any(|&k| k > 2) {
                return Err(structure(format!("alpha arc `{}` is not a simple arc", c.name)));
            }
            let pts: Vec<usize> = ends
                .iter()
                .filter_map(|&v| match vertices[v].kind {
                    VertexKind::ZPoint(p) => Some(p),
                    _ => None,
                })
                .collect();
            if pts.len() != 2 || z.matching[pts[0]] != z.matching[pts[1]] {
                return Err(structure(format!("alpha arc `{}` must join the two points of a matched pair", c.name)));
            }
            if d.iter().any(|(&v, &k)| k == 2 && vertices[v].kind != VertexKind::Interior) {
                return Err(structure(format!("alpha arc `{}` passes through the boundary", c.name)));
            }
            let pair = z.matching[pts[0]];
            if arc_of_pair[pair].replace(ai).is_some() {
                return Err(structure(format!("two alpha arcs for pair {}", pair + 1)));
            }
            c.pair = Some(pair);
        }
        if let Some(p) = arc_of_pair.iter().position(Option::is_none) {
            return Err(structure(format!("no alpha arc for matched pair {}", p + 1)));
        }
        // Intersections.
        let mut on_alpha: HashMap<usize, BTreeSet<AlphaRef>> = HashMap::new();
        let mut on_beta: HashMap<usize, BTreeSet<usize>> = HashMap::new();
        for e in &edges {
            for v in [e.from, e.to] {
                match e.kind {
                    EdgeKind::AlphaArc => {
                        on_alpha.entry(v).or_default().insert(AlphaRef::Arc(e.curve.expect("arc")));
                    }
                    EdgeKind::AlphaCircle => {
                        on_alpha.entry(v).or_default().insert(AlphaRef::Circle(e.curve.expect("circle")));
                    }
                    EdgeKind::Beta => {
                        on_beta.entry(v).or_default().insert(e.curve.expect("beta"));
                    }
                    _ => {}
                }
            }
        }
        let mut intersections = Vec::new();
        let mut intersection_of_vertex = HashMap::new();
        for v in 0..vertices.len() {
            let a = on_alpha.get(&v).map(|s| s.len()).unwrap_or(0);
            let b = on_beta.get(&v).map(|s| s.len()).unwrap_or(0);
            if a > 1 || b > 1 {
                return Err(structure(format!("vertex `{}` lies on two alpha or two beta curves", vertices[v].name)));
            }
            if a == 1 && b == 1 {
                intersection_of_vertex.insert(v, intersections.len());
                intersections.push(Intersection {
                    vertex: v,
                    alpha: *on_alpha[&v].iter().next().expect("one alpha"),
                    beta: *on_beta[&v].iter().next().expect("one beta"),
                });
            }
        }
        // Slots.
        let mut slots = Vec::new();
        let mut vertex_slots = vec![Vec::new(); vertices.len()];
        for (ri, r) in regions.iter().enumerate() {
            for (ci, c) in r.cycles.iter().enumerate() {
                for pos in 0..c.len() {
                    let (a, b) = (edges[c[pos].edge].kind, edges[c[(pos + 1) % c.len()].edge].kind);
                    let (ca, cb) = (class(a), class(b));
                    let corner = (ca == 0) != (cb == 0) && (ca <= 2 && cb <= 2);
                    let v = h(&c[pos]);
                    vertex_slots[v].push(slots.len());
                    slots.push(Slot { region: ri, cycle: ci, pos, vertex: v, corner });
                }
            }
        }
        Ok(HeegaardDiagram {
            name: raw.name.clone(),
            raw,
            components,
            z: Arc::new(z),
            vertices,
            edges,
            regions,
            alpha_arcs,
            alpha_circles,
            betas,
            intersections,
            edge_regions,
            boundary_region,
            z_region,
            slots,
            vertex_slots,
            vertex_index,
            intersection_of_vertex,
        })
    }

    pub fn side_head(&self, s: Side) -> usize {
        let e = &self.edges[s.edge];
        if s.forward {
            e.to
        } else {
            e.from
        }
    }

    pub fn side_tail(&self, s: Side) -> usize {
        let e = &self.edges[s.edge];
        if s.forward {
            e.from
        } else {
            e.to
        }
    }

    pub fn vertex(&self, name: &str) -> Option<usize> {
        self.vertex_index.get(name).copied()
    }

    pub fn region_index(&self, name: &str) -> Option<usize> {
        self.regions.iter().position(|r| r.name == name)
    }

    pub fn component(&self, name: &str) -> Option<usize> {
        self.components.iter().position(|c| c.name == name)
    }

    /// Intersection index of a vertex, if it is an alpha-beta intersection.
    pub fn intersection_at(&self, v: usize) -> Option<usize> {
        self.intersection_of_vertex.get(&v).copied()
    }

    /// Component owning a global point of `Z`.
    pub fn component_of_point(&self, p: usize) -> usize {
        self.components.iter().rposition(|c| c.point_offset <= p).expect("point belongs to a component")
    }

    pub fn component_of_pair(&self, i: usize) -> usize {
        self.components.iter().rposition(|c| c.pair_offset <= i && c.arc.num_pairs + c.pair_offset > i).expect("pair belongs to a component")
    }

    /// Euler characteristic of the surface.
    pub fn euler_characteristic(&self) -> i64 {
        let used: BTreeSet<usize> = self.edges.iter().flat_map(|e| [e.from, e.to]).collect();
        used.len() as i64 - self.edges.len() as i64 + self.regions.iter().map(|r| r.chi).sum::<i64>()
    }

    /// Number of convex corners of a region.
    pub fn corners(&self, r: usize) -> usize {
        self.slots.iter().filter(|s| s.region == r && s.corner).count()
    }

    /// Full consistency check: vertex links, linear independence, expectations.
    pub fn check(&self) -> CheckReport {
        let mut problems = Vec::new();
        // Vertex links.
        let mut incoming: HashMap<Side, usize> = HashMap::new();
        for (i, s) in self.slots.iter().enumerate() {
            incoming.insert(self.regions[s.region].cycles[s.cycle][s.pos], i);
        }
        let out_side = |i: usize| {
            let s = self.slots[i];
            let c = &self.regions[s.region].cycles[s.cycle];
            c[(s.pos + 1) % c.len()]
        };
        let in_side = |i: usize| {
            let s = self.slots[i];
            self.regions[s.region].cycles[s.cycle][s.pos]
        };
        let next = |i: usize| -> Option<usize> {
            let o = out_side(i);
            if self.edges[o.edge].kind.is_boundary() {
                return None;
            }
            incoming.get(&Side { edge: o.edge, forward: !o.forward }).copied()
        };
        for (v, vs) in self.vertex_slots.iter().enumerate() {
            if vs.is_empty() {
                continue;
            }
            let on_boundary = vs.iter().any(|&i| self.edges[in_side(i).edge].kind.is_boundary());
            let start = if on_boundary {
                let starts: Vec<usize> = vs.iter().copied().filter(|&i| self.edges[in_side(i).edge].kind.is_boundary()).collect();
                if starts.len() != 1 {
                    problems.push(format!("vertex `{}`: boundary passes {} times", self.vertices[v].name, starts.len()));
                    continue;
                }
                starts[0]
            } else {
                vs[0]
            };
            let mut seen = vec![start];
            let mut cur = start;
            while let Some(n) = next(cur) {
                if n == start || seen.len() > vs.len() {
                    break;
                }
                seen.push(n);
                cur = n;
            }
            if seen.len() != vs.len() {
                problems.push(format!("vertex `{}`: link is not a single {}", self.vertices[v].name, if on_boundary { "chain" } else { "cycle" }));
            }
            if self.intersection_of_vertex.contains_key(&v) {
                let mixed = vs.iter().all(|&i| self.edges[in_side(i).edge].kind.is_alpha() != self.edges[out_side(i).edge].kind.is_alpha());
                if vs.len() != 4 || !mixed {
                    problems.push(format!("intersection `{}` is not a transverse crossing", self.vertices[v].name));
                }
            }
            if let VertexKind::ZPoint(_) = self.vertices[v].kind {
                let arcs = self.edges.iter().filter(|e| e.kind == EdgeKind::AlphaArc && (e.from == v || e.to == v)).count();
                if arcs != 1 {
                    problems.push(format!("point `{}` meets {} alpha arc ends", self.vertices[v].name, arcs));
                }
            }
        }
        // Homological linear independence.
        for (label, across_alpha) in [("beta", true), ("alpha", false)] {
            let comps = self.region_components(|k| if across_alpha { k.is_alpha() } else { k == EdgeKind::Beta });
            for c in comps {
                if !c.iter().any(|&r| self.boundary_region[r]) {
                    let names: Vec<&str> = c.iter().map(|&r| self.regions[r].name.as_str()).collect();
                    problems.push(format!("component of the complement of the {} curves without free boundary: {}", if label == "beta" { "beta" } else { "alpha" }, names.join(" ")));
                }
            }
        }
        for c in &self.components {
            if let Err(e) = c.arc.validate() {
                problems.push(format!("component `{}`: {}", c.name, e));
            }
        }
        for (k, v) in &self.raw.expects {
            if let Some(p) = self.check_expectation(k, v) {
                problems.push(p);
            }
        }
        CheckReport { problems }
    }

    fn check_expectation(&self, key: &str, value: &str) -> Option<String> {
        let actual = match key {
            "generators" => self.generators().len().to_string(),
            "spinc" => self.spinc_partition().len().to_string(),
            "chi" => self.euler_characteristic().to_string(),
            "regions" => self.regions.len().to_string(),
            "nice" => if self.is_nice() { "yes" } else { "no" }.to_string(),
            "provincially-admissible" => if self.admissibility().provincial { "yes" } else { "no" }.to_string(),
            "admissible" => if self.admissibility().full { "yes" } else { "no" }.to_string(),
            "generator-names" => {
                let mut names: Vec<String> = self.generators().iter().map(|g| self.generator_name(g)).collect();
                names.sort();
                names.join(" ")
            }
            _ => return Some(format!("unknown expectation `{}`", key)),
        };
        let want = if key == "generator-names" {
            let mut v: Vec<&str> = value.split_whitespace().collect();
            v.sort();
            v.join(" ")
        } else {
            value.to_string()
        };
        (actual != want).then(|| format!("expected {} = {}, found {}", key, want, actual))
    }

    /// Connected components of regions, joined across edges of the given kinds.
    fn region_components(&self, across: impl Fn(EdgeKind) -> bool) -> Vec<Vec<usize>> {
        let n = self.regions.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut c = x;
            while p[c] != r {
                let nx = p[c];
                p[c] = r;
                c = nx;
            }
            r
        }
        for (i, e) in self.edges.iter().enumerate() {
            if across(e.kind) {
                if let (l, Some(r)) = self.edge_regions[i] {
                    let (a, b) = (find(&mut parent, l), find(&mut parent, r));
                    parent[a] = b;
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for r in 0..n {
            let root = find(&mut parent, r);
            groups.entry(root).or_default().push(r);
        }
        let mut out: Vec<Vec<usize>> = groups.into_values().collect();
        out.sort();
        out
    }

    // ---- Generators ----

    /// All generators, in lexicographic order of intersection indices per beta.
    pub fn generators(&self) -> Vec<Generator> {
        let per_beta: Vec<Vec<usize>> =
            (0..self.betas.len()).map(|b| (0..self.intersections.len()).filter(|&i| self.intersections[i].beta == b).collect()).collect();
        let mut out = Vec::new();
        let mut cur = Vec::new();
        let mut used = BTreeSet::new();
        self.gen_rec(&per_beta, &mut cur, &mut used, &mut out);
        out
    }

    fn gen_rec(&self, per_beta: &[Vec<usize>], cur: &mut Vec<usize>, used: &mut BTreeSet<AlphaRef>, out: &mut Vec<Generator>) {
        if cur.len() == per_beta.len() {
            let circles = used.iter().filter(|a| matches!(a, AlphaRef::Circle(_))).count();
            if circles == self.alpha_circles.len() {
                out.push(Generator(cur.clone()));
            }
            return;
        }
        for &i in &per_beta[cur.len()] {
            let a = self.intersections[i].alpha;
            if used.insert(a) {
                cur.push(i);
                self.gen_rec(per_beta, cur, used, out);
                cur.pop();
                used.remove(&a);
            }
        }
    }

    pub fn generator_name(&self, g: &Generator) -> String {
        let names: Vec<&str> = g.0.iter().map(|&i| self.vertices[self.intersections[i].vertex].name.as_str()).collect();
        if names.iter().all(|n| n.chars().count() == 1) {
            names.concat()
        } else {
            names.join(",")
        }
    }

    /// Finds a generator by name, with or without parentheses.
    pub fn generator_by_name(&self, name: &str) -> Option<Generator> {
        let n = name.trim().trim_start_matches('(').trim_end_matches(')');
        self.generators().into_iter().find(|g| self.generator_name(g) == n)
    }

    /// Global matched pairs whose alpha arcs are occupied.
    pub fn occupied(&self, g: &Generator) -> BTreeSet<usize> {
        g.0.iter()
            .filter_map(|&i| match self.intersections[i].alpha {
                AlphaRef::Arc(a) => self.alpha_arcs[a].pair,
                AlphaRef::Circle(_) => None,
            })
            .collect()
    }

    fn vertex_set(&self, g: &Generator) -> BTreeSet<usize> {
        g.0.iter().map(|&i| self.intersections[i].vertex).collect()
    }

    // ---- Domains ----

    fn domain_system(&self, provincial: bool) -> DomainSystem {
        let unknowns: Vec<usize> =
            (0..self.regions.len()).filter(|&r| !self.boundary_region[r] && !(provincial && self.z_region[r])).collect();
        let col: HashMap<usize, usize> = unknowns.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let n = unknowns.len();
        // Coefficient vector of each edge in the boundary of a domain.
        let coeff = |e: usize| {
            let mut c = vec![0i64; n];
            let (l, r) = self.edge_regions[e];
            if let Some(&i) = col.get(&l) {
                c[i] += 1;
            }
            if let Some(r) = r {
                if let Some(&i) = col.get(&r) {
                    c[i] -= 1;
                }
            }
            c
        };
        let mut rows = Vec::new();
        let mut row_info = Vec::new();
        for v in 0..self.vertices.len() {
            if self.vertices[v].kind != VertexKind::Interior {
                continue;
            }
            for alpha in [true, false] {
                let mut row = vec![0i64; n];
                let mut any = false;
                for (ei, e) in self.edges.iter().enumerate() {
                    let matches = if alpha { e.kind.is_alpha() } else { e.kind == EdgeKind::Beta };
                    if !matches || e.from == e.to {
                        continue;
                    }
                    let sign = if e.to == v {
                        1
                    } else if e.from == v {
                        -1
                    } else {
                        continue;
                    };
                    any = true;
                    for (x, c) in row.iter_mut().zip(coeff(ei)) {
                        *x += sign * c;
                    }
                }
                if any {
                    rows.push(row);
                    row_info.push((v, alpha));
                }
            }
        }
        DomainSystem { unknowns, rows, row_info }
    }

    fn solve_domains(&self, x: &Generator, y: &Generator, provincial: bool) -> Option<Domains> {
        let sys = self.domain_system(provincial);
        let (xs, ys) = (self.vertex_set(x), self.vertex_set(y));
        let b: Vec<i64> = sys
            .row_info
            .iter()
            .map(|&(v, alpha)| {
                let d = i64::from(ys.contains(&v)) - i64::from(xs.contains(&v));
                if alpha {
                    d
                } else {
                    -d
                }
            })
            .collect();
        let sol = solve_integer(&sys.rows, sys.unknowns.len(), &b)?;
        let expand = |v: &[i64]| {
            let mut d = vec![0i64; self.regions.len()];
            for (i, &r) in sys.unknowns.iter().enumerate() {
                d[r] = v[i];
            }
            d
        };
        Some(Domains { particular: expand(&sol.particular), periodic: sol.kernel.iter().map(|k| expand(k)).collect() })
    }

    /// `pi_2(x, y)`, or `None` when it is empty.
    pub fn domains(&self, x: &Generator, y: &Generator) -> Option<Domains> {
        self.solve_domains(x, y, false)
    }

    /// Provincial classes `pi_2^\partial(x, y)` (no multiplicity at `Z`).
    pub fn provincial_domains(&self, x: &Generator, y: &Generator) -> Option<Domains> {
        self.solve_domains(x, y, true)
    }

    /// Whether a domain satisfies the corner conditions of `pi_2(x, y)`.
    pub fn is_domain(&self, b: &Domain, x: &Generator, y: &Generator) -> bool {
        let sys = self.domain_system(false);
        if (0..self.regions.len()).any(|r| self.boundary_region[r] && b[r] != 0) {
            return false;
        }
        let (xs, ys) = (self.vertex_set(x), self.vertex_set(y));
        sys.rows.iter().zip(&sys.row_info).all(|(row, &(v, alpha))| {
            let lhs: i64 = row.iter().zip(&sys.unknowns).map(|(c, &r)| c * b[r]).sum();
            let d = i64::from(ys.contains(&v)) - i64::from(xs.contains(&v));
            lhs == if alpha { d } else { -d }
        })
    }

    /// Partition of the generators by nonemptiness of `pi_2(x, y)`.
    pub fn spinc_partition(&self) -> Vec<SpincClass> {
        let mut classes: Vec<SpincClass> = Vec::new();
        for g in self.generators() {
            match classes.iter_mut().find(|c| self.domains(&c.generators[0], &g).is_some()) {
                Some(c) => c.generators.push(g),
                None => classes.push(SpincClass { index: classes.len(), generators: vec![g] }),
            }
        }
        classes
    }

    /// Class containing a generator.
    pub fn spinc_of(&self, g: &Generator) -> Option<SpincClass> {
        self.spinc_partition().into_iter().find(|c| c.generators.contains(g))
    }

    /// Selects a class by index or by the name of one of its generators.
    pub fn select_spinc(&self, key: &str) -> Result<SpincClass> {
        let classes = self.spinc_partition();
        if let Ok(i) = key.parse::<usize>() {
            return classes.into_iter().nth(i).ok_or_else(|| Error::Invalid(format!("no spin-c class {}", i)));
        }
        let g = self.generator_by_name(key).ok_or_else(|| Error::Invalid(format!("no generator `{}`", key)))?;
        Ok(self.spinc_of(&g).expect("every generator has a class"))
    }

    /// Decides whether nonzero nonnegative periodic domains exist.
    pub fn admissibility(&self) -> Admissibility {
        let test = |provincial: bool| {
            let sys = self.domain_system(provincial);
            sys.unknowns.is_empty() || nonnegative_kernel_vector(&sys.rows, sys.unknowns.len()).is_none()
        };
        Admissibility { provincial: test(true), full: test(false) }
    }

    /// Non-boundary regions that are not bigons or rectangles.
    pub fn non_nice_regions(&self) -> Vec<String> {
        (0..self.regions.len())
            .filter(|&r| !self.boundary_region[r])
            .filter(|&r| {
                let reg = &self.regions[r];
                let c = self.corners(r);
                !(reg.cycles.len() == 1 && reg.chi == 1 && (c == 2 || c == 4))
            })
            .map(|r| self.regions[r].name.clone())
            .collect()
    }

    pub fn is_nice(&self) -> bool {
        self.non_nice_regions().is_empty()
    }

    // ---- Measures and gradings ----

    /// `e(B)`: each region contributes `chi - corners/4`.
    pub fn euler_measure(&self, b: &Domain) -> Rational64 {
        (0..self.regions.len())
            .map(|r| Rational64::from_integer(b[r]) * (Rational64::from_integer(self.regions[r].chi) - Rational64::new(self.corners(r) as i64, 4)))
            .sum()
    }

    /// Average multiplicity of `b` in the corners at vertex `v`.
    pub fn vertex_measure(&self, b: &Domain, v: usize) -> Rational64 {
        let s: i64 = self.vertex_slots[v].iter().map(|&i| b[self.slots[i].region]).sum();
        Rational64::new(s, 4)
    }

    /// `(n_x(B), n_y(B))`.
    pub fn point_measures(&self, b: &Domain, x: &Generator, y: &Generator) -> (Rational64, Rational64) {
        let n = |g: &Generator| self.vertex_set(g).into_iter().map(|v| self.vertex_measure(b, v)).sum();
        (n(x), n(y))
    }

    /// `\partial^\partial B` as a class in `H_1(Z, a)`.
    pub fn boundary_class(&self, b: &Domain) -> Vec<i64> {
        let mut h = vec![0i64; self.z.num_points()];
        for (i, e) in self.edges.iter().enumerate() {
            if let Some(p) = e.interval {
                h[p] += b[self.edge_regions[i].0];
            }
        }
        h
    }

    pub fn grading_group(&self) -> GradingGroup {
        GradingGroup::new(self.z.clone())
    }

    /// `gr(B) = (-e(B) - n_x(B) - n_y(B), \partial^\partial B)` in `Gr(Z)`.
    pub fn domain_grading(&self, b: &Domain, x: &Generator, y: &Generator) -> GradingElement {
        let (nx, ny) = self.point_measures(b, x, y);
        let m = -(self.euler_measure(b) + nx + ny);
        let halves = m * 2;
        assert!(halves.is_integer(), "domain grading is not a half-integer");
        GradingElement { maslov: Half(halves.to_integer()), hclass: self.boundary_class(b) }
    }

    /// The subgroup `P(x0)` generated by gradings of periodic domains at `x0`.
    pub fn stabilizer(&self, x0: &Generator) -> Stabilizer {
        let d = self.domains(x0, x0).expect("pi_2(x, x) contains the zero domain");
        let gens = d.periodic.iter().map(|p| self.domain_grading(p, x0, x0)).collect();
        Stabilizer::new(self.grading_group(), gens)
    }

    /// `gr(x) = P(x0) gr(B)` for `B` in `pi_2(x0, x)`.
    pub fn generator_grading(&self, x: &Generator, base: &Generator) -> Result<GradingCoset> {
        let d = self.domains(base, x).ok_or_else(|| Error::Precondition("generators lie in different spin-c classes".into()))?;
        Ok(GradingCoset::new(self.domain_grading(&d.particular, base, x), Arc::new(self.stabilizer(base))))
    }

    // ---- Gluing ----

    /// Glues along pairs `(component of self, component of other)`; each pair
    /// must be parametrized by mutually reversed arc diagrams. An empty list
    /// gives the disjoint union.
    pub fn glue(&self, other: &HeegaardDiagram, along: &[(&str, &str)]) -> Result<HeegaardDiagram> {
        glue(self, other, along)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

fn fresh(name: &str, taken: &HashSet<String>) -> String {
    let mut n = name.to_string();
    while taken.contains(&n) {
        n.push('\'');
    }
    n
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum GlueKey {
    Point(usize),
    /// Segment index and whether it is the end.
    SegEnd(usize, bool),
}

fn glue(h1: &HeegaardDiagram, h2: &HeegaardDiagram, along: &[(&str, &str)]) -> Result<HeegaardDiagram> {
    let mut glued1 = HashMap::new();
    let mut glued2 = HashMap::new();
    for &(a, b) in along {
        let c1 = h1.component(a).ok_or_else(|| Error::Invalid(format!("no component `{}` in `{}`", a, h1.name)))?;
        let c2 = h2.component(b).ok_or_else(|| Error::Invalid(format!("no component `{}` in `{}`", b, h2.name)))?;
        let (z1, z2) = (&h1.components[c1].arc, &h2.components[c2].arc);
        let lens = |z: &ArcDiagram| z.segments.iter().map(|s| s.len).collect::<Vec<_>>();
        let compatible = lens(z1) == lens(z2)
            && (0..z1.num_points()).all(|p| {
                (0..z1.num_points()).all(|q| (z1.matching[p] == z1.matching[q]) == (z2.matching[z2.reverse_point(p)] == z2.matching[z2.reverse_point(q)]))
            });
        if !compatible {
            return Err(Error::Invalid(format!("`{}` and `{}` are not parametrized by reversed arc diagrams", a, b)));
        }
        if glued1.insert(c1, c2).is_some() || glued2.insert(c2, c1).is_some() {
            return Err(Error::Invalid("a component is glued twice".into()));
        }
    }
    // Names of everything in h1 are kept; clashing names from h2 get primes.
    let mut taken: HashSet<String> = HashSet::new();
    for v in &h1.vertices {
        taken.insert(v.name.clone());
    }
    for e in &h1.edges {
        taken.insert(e.name.clone());
    }
    for r in &h1.regions {
        taken.insert(r.name.clone());
    }
    for c in h1.alpha_arcs.iter().chain(&h1.alpha_circles).chain(&h1.betas) {
        taken.insert(c.name.clone());
    }
    for c in &h1.components {
        taken.insert(c.name.clone());
    }
    let mut comp2_name = HashMap::new();
    for (ci, c) in h2.components.iter().enumerate() {
        if !glued2.contains_key(&ci) {
            let n = fresh(&c.name, &taken);
            taken.insert(n.clone());
            comp2_name.insert(ci, n);
        }
    }
    let rename2 = |n: &str, taken: &mut HashSet<String>| {
        let f = fresh(n, taken);
        taken.insert(f.clone());
        f
    };
    // Vertex names in the glued diagram.
    let mut vname1: Vec<String> = Vec::new();
    let mut identified: HashMap<(usize, GlueKey), String> = HashMap::new();
    for v in &h1.vertices {
        let n = match v.kind {
            VertexKind::Interior => v.name.clone(),
            VertexKind::ZPoint(p) => {
                let c = h1.component_of_point(p);
                if glued1.contains_key(&c) {
                    let n = rename2(&v.name.replace('.', "_"), &mut taken);
                    identified.insert((c, GlueKey::Point(p - h1.components[c].point_offset)), n.clone());
                    n
                } else {
                    v.name.clone()
                }
            }
            VertexKind::SegmentStart(s) | VertexKind::SegmentEnd(s) => {
                let c = h1.components.iter().rposition(|c| c.segment_offset <= s).expect("segment owner");
                if glued1.contains_key(&c) {
                    let n = rename2(&v.name.replace('.', "_"), &mut taken);
                    let key = GlueKey::SegEnd(s - h1.components[c].segment_offset, matches!(v.kind, VertexKind::SegmentEnd(_)));
                    identified.insert((c, key), n.clone());
                    n
                } else {
                    v.name.clone()
                }
            }
        };
        vname1.push(n);
    }
    let mut vname2: Vec<String> = Vec::new();
    for v in &h2.vertices {
        let n = match v.kind {
            VertexKind::Interior => rename2(&v.name, &mut taken),
            VertexKind::ZPoint(p) => {
                let c = h2.component_of_point(p);
                match glued2.get(&c) {
                    Some(&c1) => {
                        let comp = &h2.components[c];
                        let local = comp.arc.reverse_point(p - comp.point_offset);
                        identified[&(c1, GlueKey::Point(local))].clone()
                    }
                    None => format!("{}.{}", comp2_name[&c], v.name.split_once('.').expect("qualified").1),
                }
            }
            VertexKind::SegmentStart(s) | VertexKind::SegmentEnd(s) => {
                let c = h2.components.iter().rposition(|c| c.segment_offset <= s).expect("segment owner");
                match glued2.get(&c) {
                    Some(&c1) => {
                        let local = s - h2.components[c].segment_offset;
                        // A start of h2 meets the end of the same segment in h1.
                        let is_end_in_h1 = matches!(v.kind, VertexKind::SegmentStart(_));
                        identified[&(c1, GlueKey::SegEnd(local, is_end_in_h1))].clone()
                    }
                    None => format!("{}.{}", comp2_name[&c], v.name.split_once('.').expect("qualified").1),
                }
            }
        };
        vname2.push(n);
    }
    // Curve names; glued arcs become alpha circles named after the arc of h1.
    let circle_of_pair = |h: &HeegaardDiagram, c: usize, pair_local: usize| -> String {
        let gp = h.components[c].pair_offset + pair_local;
        h.alpha_arcs.iter().find(|a| a.pair == Some(gp)).expect("every pair has an arc").name.clone()
    };
    let mut curve2: HashMap<(EdgeKind, usize), String> = HashMap::new();
    for (i, c) in h2.alpha_arcs.iter().enumerate() {
        let comp = h2.component_of_pair(c.pair.expect("arc pair"));
        if !glued2.contains_key(&comp) {
            curve2.insert((EdgeKind::AlphaArc, i), rename2(&c.name, &mut taken));
        }
    }
    for (i, c) in h2.alpha_circles.iter().enumerate() {
        curve2.insert((EdgeKind::AlphaCircle, i), rename2(&c.name, &mut taken));
    }
    for (i, c) in h2.betas.iter().enumerate() {
        curve2.insert((EdgeKind::Beta, i), rename2(&c.name, &mut taken));
    }
    let mut raw = RawDiagram { name: format!("{}_{}", h1.name, h2.name), ..Default::default() };
    for (ci, b) in h1.raw.boundaries.iter().enumerate() {
        if !glued1.contains_key(&ci) {
            raw.boundaries.push(b.clone());
        }
    }
    for (ci, b) in h2.raw.boundaries.iter().enumerate() {
        if !glued2.contains_key(&ci) {
            let mut b = b.clone();
            b.name = comp2_name[&ci].clone();
            raw.boundaries.push(b);
        }
    }
    // Edge names; glued Z edges disappear.
    let mut ename: [Vec<Option<String>>; 2] = [Vec::new(), Vec::new()];
    for (which, h) in [(0usize, h1), (1, h2)] {
        for e in h.edges.iter() {
            let glued_comp = |c: usize| if which == 0 { glued1.contains_key(&c) } else { glued2.contains_key(&c) };
            let vn = |v: usize| if which == 0 { vname1[v].clone() } else { vname2[v].clone() };
            let name = match e.kind {
                EdgeKind::Z => {
                    let zp = e.zpos.expect("z position");
                    if glued_comp(zp.component) {
                        None
                    } else if which == 0 {
                        Some(e.name.clone())
                    } else {
                        Some(format!("{}.{}", comp2_name[&zp.component], e.name.split_once('.').expect("qualified").1))
                    }
                }
                _ => {
                    let n = if which == 0 { e.name.clone() } else { rename2(&e.name, &mut taken) };
                    let (kind, curve) = match e.kind {
                        EdgeKind::AlphaArc => {
                            let a = e.curve.expect("arc");
                            let gp = h.alpha_arcs[a].pair.expect("pair");
                            let comp = h.component_of_pair(gp);
                            if glued_comp(comp) {
                                let (c1, local) = if which == 0 {
                                    (comp, gp - h.components[comp].pair_offset)
                                } else {
                                    // Pairs correspond through the point bijection.
                                    let c2 = &h.components[comp];
                                    let p_local = c2.arc.pair_points(gp - c2.pair_offset).0;
                                    let c1 = glued2[&comp];
                                    let p1 = c2.arc.reverse_point(p_local);
                                    (c1, h1.components[c1].arc.matching[p1])
                                };
                                (EdgeKind::AlphaCircle, Some(circle_of_pair(h1, c1, local)))
                            } else if which == 0 {
                                (EdgeKind::AlphaArc, Some(h.alpha_arcs[a].name.clone()))
                            } else {
                                (EdgeKind::AlphaArc, Some(curve2[&(EdgeKind::AlphaArc, a)].clone()))
                            }
                        }
                        EdgeKind::AlphaCircle | EdgeKind::Beta => {
                            let c = e.curve.expect("curve");
                            let list = if e.kind == EdgeKind::Beta { &h.betas } else { &h.alpha_circles };
                            let cn = if which == 0 { list[c].name.clone() } else { curve2[&(e.kind, c)].clone() };
                            (e.kind, Some(cn))
                        }
                        _ => (e.kind, None),
                    };
                    raw.edges.push(RawEdge { name: n.clone(), kind, from: vn(e.from), to: vn(e.to), curve });
                    Some(n)
                }
            };
            ename[which].push(name);
        }
    }
    // Relink region boundaries across glued edges.
    let mut sides: Vec<(usize, usize, Side)> = Vec::new();
    let mut next: Vec<usize> = Vec::new();
    let mut prev: Vec<usize> = Vec::new();
    let mut side_of: HashMap<(usize, usize), usize> = HashMap::new();
    let region_base = [0usize, h1.regions.len()];
    for (which, h) in [(0usize, h1), (1, h2)] {
        for (ri, r) in h.regions.iter().enumerate() {
            for c in &r.cycles {
                let start = sides.len();
                for (i, s) in c.iter().enumerate() {
                    side_of.insert((which, s.edge), sides.len());
                    sides.push((which, region_base[which] + ri, *s));
                    next.push(start + (i + 1) % c.len());
                    prev.push(start + (i + c.len() - 1) % c.len());
                }
            }
        }
    }
    let total_regions = h1.regions.len() + h2.regions.len();
    let mut parent: Vec<usize> = (0..total_regions).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    let mut removed = vec![false; sides.len()];
    let mut glue_count = vec![0i64; total_regions];
    for (ei, e) in h1.edges.iter().enumerate() {
        let Some(zp) = e.zpos else { continue };
        let Some(&c2) = glued1.get(&zp.component) else { continue };
        let len = h1.components[zp.component].arc.segments[zp.segment].len;
        let partner = h2
            .edges
            .iter()
            .position(|f| f.zpos == Some(ZPos { component: c2, segment: zp.segment, t: len - zp.t }))
            .expect("matching segment piece");
        let s1 = side_of[&(0, ei)];
        let s2 = side_of[&(1, partner)];
        let (a, b, c, d) = (prev[s1], next[s1], prev[s2], next[s2]);
        next[a] = d;
        prev[d] = a;
        next[c] = b;
        prev[b] = c;
        removed[s1] = true;
        removed[s2] = true;
        let (r1, r2) = (find(&mut parent, sides[s1].1), find(&mut parent, sides[s2].1));
        parent[r1] = r2;
        glue_count[sides[s1].1] += 1;
    }
    let mut visited = removed.clone();
    let mut class_cycles: BTreeMap<usize, Vec<Vec<(String, bool)>>> = BTreeMap::new();
    for start in 0..sides.len() {
        if visited[start] {
            continue;
        }
        let mut cyc = Vec::new();
        let mut cur = start;
        while !visited[cur] {
            visited[cur] = true;
            let (which, _, s) = sides[cur];
            cyc.push((ename[which][s.edge].clone().expect("kept edge"), s.forward));
            cur = next[cur];
        }
        let root = find(&mut parent, sides[start].1);
        class_cycles.entry(root).or_default().push(cyc);
    }
    let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for r in 0..total_regions {
        let root = find(&mut parent, r);
        members.entry(root).or_default().push(r);
    }
    let mut region_names: Vec<String> = Vec::new();
    for r in 0..h1.regions.len() {
        region_names.push(h1.regions[r].name.clone());
    }
    for r in &h2.regions {
        region_names.push(rename2(&r.name, &mut taken));
    }
    let mut ordered: Vec<(usize, Vec<usize>)> = members.into_iter().collect();
    ordered.sort_by_key(|(_, m)| m[0]);
    for (root, m) in ordered {
        let chi = m
            .iter()
            .map(|&r| if r < h1.regions.len() { h1.regions[r].chi } else { h2.regions[r - h1.regions.len()].chi } - glue_count[r])
            .sum::<i64>();
        let name = m.iter().map(|&r| region_names[r].clone()).collect::<Vec<_>>().join("_");
        let cycles = class_cycles.remove(&root).unwrap_or_default();
        raw.regions.push(RawRegion { name, chi: Some(chi), cycles });
    }
    HeegaardDiagram::build(raw)
}
