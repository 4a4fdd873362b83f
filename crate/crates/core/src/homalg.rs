//! Type D structures, A-infinity modules, type DA bimodules and chain
//! complexes over `Z/2`, with compatibility checks, box tensor products,
//! cancellation and reduction.
//!
//! All four are stored as one [`Structure`]: a left (output) algebra, a right
//! (input) algebra, and operations
//! `delta^1_{1+j}(x, b_1, ..., b_j) = sum a (x) y`. A trivial algebra is
//! `A` of the empty arc diagram. Inputs are non-idempotent basis elements;
//! the unital operation `m_2(x, I) = x` is implicit. Products are written with
//! the left factor applied first, so the coefficient of a two-step path
//! `x -> a (x) y -> a (x) b (x) z` is `a * b`.

use crate::arc_diagram::ArcDiagram;
use crate::error::{Error, Result};
use crate::strands::{idem_name, Algebra};
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

/// A generator with its left and right idempotents (sets of matched pairs).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gen {
    pub name: String,
    pub left: BTreeSet<usize>,
    pub right: BTreeSet<usize>,
}

/// `(generator, inputs)`.
pub type Key = (usize, Vec<usize>);
/// A `Z/2` sum of `(output algebra element, generator)`.
pub type Terms = BTreeSet<(usize, usize)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    TypeD,
    AInf,
    TypeDA,
    Complex,
}

#[derive(Clone)]
pub struct Structure {
    pub name: String,
    pub left: Arc<Algebra>,
    pub right: Arc<Algebra>,
    pub gens: Vec<Gen>,
    pub ops: BTreeMap<Key, Terms>,
}

impl fmt::Debug for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Structure({}, {} generators, {} operations)", self.name, self.gens.len(), self.num_terms())
    }
}

/// A failed relation: the nonzero terms left at `(generator, inputs)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub generator: String,
    pub inputs: Vec<String>,
    pub terms: Vec<String>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at ({}", self.message, self.generator)?;
        for i in &self.inputs {
            write!(f, ", {}", i)?;
        }
        write!(f, "): {}", if self.terms.is_empty() { "-".to_string() } else { self.terms.join(" + ") })
    }
}

/// Order in which [`Structure::reduce_with`] picks arrows to cancel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CancelOrder {
    First,
    Last,
}

pub fn xor<T: Ord>(set: &mut BTreeSet<T>, t: T) {
    if !set.remove(&t) {
        set.insert(t);
    }
}

/// `A` of the empty arc diagram.
pub fn trivial_algebra() -> Arc<Algebra> {
    Algebra::new(&ArcDiagram::empty()).expect("the empty diagram is valid")
}

fn is_trivial(a: &Algebra) -> bool {
    a.z.num_points() == 0
}

impl Structure {
    pub fn new(name: impl Into<String>, left: Arc<Algebra>, right: Arc<Algebra>) -> Structure {
        Structure { name: name.into(), left, right, gens: Vec::new(), ops: BTreeMap::new() }
    }

    pub fn kind(&self) -> Kind {
        match (is_trivial(&self.left), is_trivial(&self.right)) {
            (true, true) => Kind::Complex,
            (true, false) => Kind::AInf,
            (false, true) => Kind::TypeD,
            (false, false) => Kind::TypeDA,
        }
    }

    pub fn add_gen(&mut self, name: impl Into<String>, left: BTreeSet<usize>, right: BTreeSet<usize>) -> usize {
        self.gens.push(Gen { name: name.into(), left, right });
        self.gens.len() - 1
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        let n = name.trim().trim_start_matches('(').trim_end_matches(')');
        self.gens.iter().position(|g| g.name == n)
    }

    /// Adds a term mod 2.
    pub fn add_term(&mut self, x: usize, inputs: Vec<usize>, a: usize, y: usize) {
        let key = (x, inputs);
        let e = self.ops.entry(key.clone()).or_default();
        xor(e, (a, y));
        if e.is_empty() {
            self.ops.remove(&key);
        }
    }

    pub fn terms(&self, x: usize, inputs: &[usize]) -> Option<&Terms> {
        self.ops.get(&(x, inputs.to_vec()))
    }

    pub fn num_terms(&self) -> usize {
        self.ops.values().map(|t| t.len()).sum()
    }

    /// The unit of the left algebra at a generator's left idempotent.
    pub fn left_unit(&self, x: usize) -> usize {
        self.left.idem_id(&self.gens[x].left)
    }

    fn max_inputs(&self) -> usize {
        self.ops.keys().map(|(_, s)| s.len()).max().unwrap_or(0)
    }

    /// Terms `x -> y` with no inputs.
    pub fn component(&self, x: usize, y: usize) -> Vec<usize> {
        self.terms(x, &[]).map(|t| t.iter().filter(|(_, g)| *g == y).map(|(a, _)| *a).collect()).unwrap_or_default()
    }

    // ---- Checks ----

    fn fail(&self, x: usize, inputs: &[usize], terms: &Terms, message: &str) -> Violation {
        Violation {
            generator: self.gens[x].name.clone(),
            inputs: inputs.iter().map(|&b| self.right.name(b)).collect(),
            terms: terms.iter().map(|&(a, y)| format!("{} ({})", self.left.name(a), self.gens[y].name)).collect(),
            message: message.to_string(),
        }
    }

    /// Idempotent coherence of every term.
    pub fn check_idempotents(&self) -> std::result::Result<(), Violation> {
        for ((x, inputs), terms) in &self.ops {
            let mut cur = &self.gens[*x].right;
            for &b in inputs {
                if self.right.is_idempotent(b) || self.right.left_idem(b) != cur {
                    return Err(self.fail(*x, inputs, terms, "input does not match the idempotents"));
                }
                cur = self.right.right_idem(b);
            }
            for &(a, y) in terms {
                if self.left.left_idem(a) != &self.gens[*x].left || self.left.right_idem(a) != &self.gens[y].left || &self.gens[y].right != cur {
                    return Err(self.fail(*x, inputs, &[(a, y)].into_iter().collect(), "term does not match the idempotents"));
                }
            }
        }
        Ok(())
    }

    /// The structure relation evaluated at `(x, inputs)`.
    pub fn relation(&self, x: usize, inputs: &[usize]) -> Terms {
        let mut out = Terms::new();
        let n = inputs.len();
        if let Some(ts) = self.terms(x, inputs) {
            for &(a, y) in ts {
                for d in self.left.diff_basis(a) {
                    xor(&mut out, (d, y));
                }
            }
        }
        for j in 0..=n {
            let Some(first) = self.terms(x, &inputs[..j]) else { continue };
            for &(a1, y) in first {
                let Some(second) = self.terms(y, &inputs[j..]) else { continue };
                for &(a2, z) in second {
                    if let Some(p) = self.left.mul_basis(a1, a2) {
                        xor(&mut out, (p, z));
                    }
                }
            }
        }
        for i in 0..n {
            for d in self.right.diff_basis(inputs[i]) {
                let mut s = inputs.to_vec();
                s[i] = d;
                if let Some(ts) = self.terms(x, &s) {
                    for &t in ts {
                        xor(&mut out, t);
                    }
                }
            }
        }
        for i in 0..n.saturating_sub(1) {
            if let Some(p) = self.right.mul_basis(inputs[i], inputs[i + 1]) {
                let mut s = inputs[..i].to_vec();
                s.push(p);
                s.extend_from_slice(&inputs[i + 2..]);
                if let Some(ts) = self.terms(x, &s) {
                    for &t in ts {
                        xor(&mut out, t);
                    }
                }
            }
        }
        out
    }

    /// Input sequences at which the relation can have a nonzero term.
    fn relation_candidates(&self) -> BTreeSet<Key> {
        let mut cands: BTreeSet<Key> = self.ops.keys().cloned().collect();
        for ((x, s1), terms) in &self.ops {
            for &(_, y) in terms {
                for (y2, s2) in self.ops.keys().filter(|(g, _)| *g == y) {
                    let _ = y2;
                    let mut s = s1.clone();
                    s.extend_from_slice(s2);
                    cands.insert((*x, s));
                }
            }
        }
        let inputs: BTreeSet<usize> = self.ops.keys().flat_map(|(_, s)| s.iter().copied()).collect();
        if inputs.is_empty() {
            return cands;
        }
        let mut factors: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
        let mut antiderivs: HashMap<usize, Vec<usize>> = HashMap::new();
        let nonidem: Vec<usize> = (0..self.right.len()).filter(|&b| !self.right.is_idempotent(b)).collect();
        for &c in &nonidem {
            for d in self.right.diff_basis(c) {
                if inputs.contains(&d) {
                    antiderivs.entry(d).or_default().push(c);
                }
            }
            for &d in &nonidem {
                if self.right.right_idem(c) != self.right.left_idem(d) {
                    continue;
                }
                if let Some(p) = self.right.mul_basis(c, d) {
                    if inputs.contains(&p) {
                        factors.entry(p).or_default().push((c, d));
                    }
                }
            }
        }
        for (x, s) in self.ops.keys() {
            for i in 0..s.len() {
                for &c in antiderivs.get(&s[i]).into_iter().flatten() {
                    let mut t = s.clone();
                    t[i] = c;
                    cands.insert((*x, t));
                }
                for &(c, d) in factors.get(&s[i]).into_iter().flatten() {
                    let mut t = s[..i].to_vec();
                    t.push(c);
                    t.push(d);
                    t.extend_from_slice(&s[i + 1..]);
                    cands.insert((*x, t));
                }
            }
        }
        cands
    }

    /// Checks idempotents and the structure relation: `d^2 = 0` for complexes,
    /// type D compatibility, the A-infinity relations, or the DA relations.
    pub fn check(&self) -> std::result::Result<(), Violation> {
        self.check_idempotents()?;
        let cands: Vec<(usize, Vec<usize>)> = self.relation_candidates().into_iter().collect();
        let bad = cands.par_iter().map(|(x, s)| (x, s, self.relation(*x, s))).find_first(|(_, _, r)| !r.is_empty());
        match bad {
            Some((x, s, r)) => Err(self.fail(*x, s, &r, "structure relation fails")),
            None => Ok(()),
        }
    }

    fn expect_kind(&self, kinds: &[Kind]) -> Result<()> {
        if kinds.contains(&self.kind()) {
            Ok(())
        } else {
            Err(Error::Ambient(format!("`{}` is a {:?}, expected one of {:?}", self.name, self.kind(), kinds)))
        }
    }

    /// Type D compatibility.
    pub fn check_typed(&self) -> Result<std::result::Result<(), Violation>> {
        self.expect_kind(&[Kind::TypeD, Kind::Complex])?;
        if self.max_inputs() > 0 {
            return Err(Error::Ambient("a type D structure takes no algebra inputs".into()));
        }
        Ok(self.check())
    }

    /// The A-infinity relations.
    pub fn check_ainf(&self) -> Result<std::result::Result<(), Violation>> {
        self.expect_kind(&[Kind::AInf, Kind::Complex])?;
        Ok(self.check())
    }

    /// The DA relations.
    pub fn check_da(&self) -> std::result::Result<(), Violation> {
        self.check()
    }

    // ---- Boundedness ----

    /// `delta_k(x)`: sequences of `k` coefficients and the final generator.
    pub fn delta_k(&self, x: usize, k: usize) -> BTreeSet<(Vec<usize>, usize)> {
        let mut cur: BTreeSet<(Vec<usize>, usize)> = [(Vec::new(), x)].into_iter().collect();
        for _ in 0..k {
            let mut next = BTreeSet::new();
            for (seq, y) in &cur {
                for &(a, z) in self.terms(*y, &[]).into_iter().flatten() {
                    let mut s = seq.clone();
                    s.push(a);
                    xor(&mut next, (s, z));
                }
            }
            cur = next;
        }
        cur
    }

    /// Whether iterated operations vanish eventually. Structures with a
    /// trivial output algebra are bounded. An acyclic term graph is bounded;
    /// otherwise `delta_n` is computed for `n` the number of generators, since
    /// a nilpotent matrix over a free algebra has `D^n = 0`.
    pub fn is_bounded(&self) -> bool {
        if is_trivial(&self.left) || self.term_graph_is_acyclic() {
            return true;
        }
        self.max_inputs() == 0 && (0..self.gens.len()).all(|x| self.delta_k(x, self.gens.len()).is_empty())
    }

    fn term_graph_is_acyclic(&self) -> bool {
        let n = self.gens.len();
        let mut adj = vec![BTreeSet::new(); n];
        for ((x, _), terms) in &self.ops {
            for &(_, y) in terms {
                adj[*x].insert(y);
            }
        }
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state = vec![0u8; n];
        fn dfs(v: usize, adj: &[BTreeSet<usize>], state: &mut [u8]) -> bool {
            state[v] = 1;
            for &w in &adj[v] {
                if state[w] == 1 || (state[w] == 0 && !dfs(w, adj, state)) {
                    return false;
                }
            }
            state[v] = 2;
            true
        }
        (0..n).all(|v| state[v] != 0 || dfs(v, &adj, &mut state))
    }

    // ---- Tensor products ----

    /// `self (box) other`; the right algebra of `self` must be the left
    /// algebra of `other`.
    pub fn box_da(&self, other: &Structure) -> Result<Structure> {
        if *self.right != *other.left {
            return Err(Error::Ambient(format!("`{}` and `{}` do not share the middle algebra", self.name, other.name)));
        }
        if !self.is_bounded() && !other.is_bounded() {
            return Err(Error::Precondition("both factors are unbounded".into()));
        }
        let mut out = Structure::new(format!("{}*{}", self.name, other.name), self.left.clone(), other.right.clone());
        let mut index = HashMap::new();
        for (i, x) in self.gens.iter().enumerate() {
            for (j, y) in other.gens.iter().enumerate() {
                if x.right == y.left {
                    index.insert((i, j), out.add_gen(format!("{}*{}", x.name, y.name), x.left.clone(), y.right.clone()));
                }
            }
        }
        let limit = self.max_inputs().max(1);
        let mut by_gen: HashMap<usize, Vec<(&Vec<usize>, &Terms)>> = HashMap::new();
        for ((g, s), t) in &other.ops {
            by_gen.entry(*g).or_default().push((s, t));
        }
        let mut pairs: Vec<(usize, usize)> = index.keys().copied().collect();
        pairs.sort();
        for (i, j) in pairs {
            let src = index[&(i, j)];
            let mut stack: Vec<(usize, Vec<usize>, Vec<usize>)> = vec![(j, Vec::new(), Vec::new())];
            while let Some((y, cs, bs)) = stack.pop() {
                self.close_box(i, y, &cs, &bs, &index, src, &mut out);
                let has_idem = bs.iter().any(|&b| other.left.is_idempotent(b));
                if bs.len() >= limit || has_idem {
                    continue;
                }
                for (chunk, terms) in by_gen.get(&y).into_iter().flatten() {
                    for &(b, y2) in terms.iter() {
                        if other.left.is_idempotent(b) && !bs.is_empty() {
                            continue;
                        }
                        let mut c2 = cs.clone();
                        c2.extend_from_slice(chunk);
                        let mut b2 = bs.clone();
                        b2.push(b);
                        stack.push((y2, c2, b2));
                    }
                }
            }
        }
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn close_box(&self, x: usize, y: usize, cs: &[usize], bs: &[usize], index: &HashMap<(usize, usize), usize>, src: usize, out: &mut Structure) {
        if bs.is_empty() {
            if !cs.is_empty() {
                return;
            }
            for &(a, x2) in self.terms(x, &[]).into_iter().flatten() {
                if let Some(&t) = index.get(&(x2, y)) {
                    out.add_term(src, Vec::new(), a, t);
                }
            }
            return;
        }
        if bs.len() == 1 && self.right.is_idempotent(bs[0]) {
            if let Some(&t) = index.get(&(x, y)) {
                out.add_term(src, cs.to_vec(), self.left_unit(x), t);
            }
            return;
        }
        for &(a, x2) in self.terms(x, bs).into_iter().flatten() {
            if let Some(&t) = index.get(&(x2, y)) {
                out.add_term(src, cs.to_vec(), a, t);
            }
        }
    }

    /// `M (box) N` for an A-infinity module and a type D structure.
    pub fn box_tensor(&self, other: &Structure) -> Result<Structure> {
        self.expect_kind(&[Kind::AInf, Kind::Complex])?;
        other.expect_kind(&[Kind::TypeD, Kind::Complex])?;
        self.box_da(other)
    }

    // ---- Cancellation ----

    /// Cancels the arrow `from -> to`, whose coefficient must be exactly an
    /// idempotent. Only for structures without algebra inputs.
    pub fn cancel(&self, from: usize, to: usize) -> Result<Structure> {
        if self.max_inputs() > 0 {
            return Err(Error::Precondition("cancellation needs a structure without algebra inputs".into()));
        }
        if from == to {
            return Err(Error::Precondition("cannot cancel a loop".into()));
        }
        let comp = self.component(from, to);
        if comp.len() != 1 || !self.left.is_idempotent(comp[0]) {
            return Err(Error::Precondition(format!(
                "the coefficient of ({}) in d({}) is not an idempotent",
                self.gens[to].name, self.gens[from].name
            )));
        }
        let keep: Vec<usize> = (0..self.gens.len()).filter(|&g| g != from && g != to).collect();
        let remap: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let mut out = Structure::new(self.name.clone(), self.left.clone(), self.right.clone());
        for &g in &keep {
            let gen = &self.gens[g];
            out.add_gen(gen.name.clone(), gen.left.clone(), gen.right.clone());
        }
        let from_terms: Vec<(usize, usize)> =
            self.terms(from, &[]).into_iter().flatten().copied().filter(|&(_, v)| v != from && v != to).collect();
        for &u in &keep {
            for &(a, v) in self.terms(u, &[]).into_iter().flatten() {
                if let Some(&nv) = remap.get(&v) {
                    out.add_term(remap[&u], Vec::new(), a, nv);
                } else if v == to {
                    for &(b, w) in &from_terms {
                        if let Some(p) = self.left.mul_basis(a, b) {
                            out.add_term(remap[&u], Vec::new(), p, remap[&w]);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// The next cancellable arrow in the given order.
    pub fn cancellable(&self, order: CancelOrder) -> Option<(usize, usize)> {
        let mut all = Vec::new();
        for ((x, s), terms) in &self.ops {
            if !s.is_empty() {
                continue;
            }
            for &(a, y) in terms {
                if y != *x && self.left.is_idempotent(a) && self.component(*x, y).len() == 1 {
                    all.push((*x, y));
                }
            }
        }
        match order {
            CancelOrder::First => all.first().copied(),
            CancelOrder::Last => all.last().copied(),
        }
    }

    /// Cancels until no idempotent arrow remains.
    pub fn reduce_with(&self, order: CancelOrder) -> Result<Structure> {
        if !self.is_bounded() {
            return Err(Error::Precondition(format!("`{}` is unbounded", self.name)));
        }
        let mut cur = self.clone();
        while let Some((x, y)) = cur.cancellable(order) {
            cur = cur.cancel(x, y)?;
        }
        Ok(cur)
    }

    pub fn reduce(&self) -> Result<Structure> {
        self.reduce_with(CancelOrder::First)
    }

    /// Rank of the homology of a chain complex over `Z/2`.
    pub fn homology(&self) -> Result<usize> {
        self.expect_kind(&[Kind::Complex])?;
        Ok(self.reduce()?.gens.len())
    }

    /// Homology ranks per integer grading; `d` must lower the grading by one.
    pub fn homology_graded(&self, grading: &[i64]) -> Result<BTreeMap<i64, usize>> {
        self.expect_kind(&[Kind::Complex])?;
        for ((x, _), terms) in &self.ops {
            for &(_, y) in terms {
                if grading[y] != grading[*x] - 1 {
                    return Err(Error::Precondition(format!("d({}) does not drop the grading by one", self.gens[*x].name)));
                }
            }
        }
        let reduced = self.reduce()?;
        let mut out = BTreeMap::new();
        for g in &reduced.gens {
            let i = self.gen_index(&g.name).expect("reduction keeps names");
            *out.entry(grading[i]).or_insert(0) += 1;
        }
        Ok(out)
    }

    // ---- Isomorphism ----

    /// A bijection `self.gens -> other.gens` carrying operations to operations.
    pub fn isomorphism(&self, other: &Structure) -> Option<Vec<usize>> {
        if self.gens.len() != other.gens.len() || *self.left != *other.left || *self.right != *other.right || self.num_terms() != other.num_terms() {
            return None;
        }
        let sig = |s: &Structure, g: usize| {
            let out: usize = s.ops.iter().filter(|((x, _), _)| *x == g).map(|(_, t)| t.len()).sum();
            let inc: usize = s.ops.values().flat_map(|t| t.iter()).filter(|(_, y)| *y == g).count();
            (s.gens[g].left.clone(), s.gens[g].right.clone(), out, inc)
        };
        let sa: Vec<_> = (0..self.gens.len()).map(|g| sig(self, g)).collect();
        let sb: Vec<_> = (0..other.gens.len()).map(|g| sig(other, g)).collect();
        let mut map = vec![usize::MAX; self.gens.len()];
        let mut used = vec![false; other.gens.len()];
        fn rec<T: PartialEq>(i: usize, a: &Structure, b: &Structure, sa: &[T], sb: &[T], map: &mut [usize], used: &mut [bool]) -> bool {
            if i == map.len() {
                return a.ops.iter().all(|((x, s), t)| {
                    let mapped: Terms = t.iter().map(|&(c, y)| (c, map[y])).collect();
                    b.ops.get(&(map[*x], s.clone())) == Some(&mapped)
                });
            }
            for j in 0..used.len() {
                if !used[j] && sa[i] == sb[j] {
                    used[j] = true;
                    map[i] = j;
                    if rec(i + 1, a, b, sa, sb, map, used) {
                        return true;
                    }
                    used[j] = false;
                }
            }
            false
        }
        rec(0, self, other, &sa, &sb, &mut map, &mut used).then_some(map)
    }

    /// Every term as `(generator, input names, coefficient name, output
    /// generator)`, for comparing structures over separately built algebras.
    pub fn term_table(&self) -> BTreeSet<(String, Vec<String>, String, String)> {
        let mut out = BTreeSet::new();
        for ((x, inputs), terms) in &self.ops {
            let ins: Vec<String> = inputs.iter().map(|&b| self.right.name(b)).collect();
            for &(a, y) in terms {
                out.insert((self.gens[*x].name.clone(), ins.clone(), self.left.name(a), self.gens[y].name.clone()));
            }
        }
        out
    }

    // ---- Printing ----

    fn gen_label(&self, g: usize) -> String {
        format!("({})", self.gens[g].name)
    }

    fn coefficient(&self, a: usize) -> Option<String> {
        if is_trivial(&self.left) {
            None
        } else {
            Some(self.left.name(a))
        }
    }

    /// Operation table in the notation `d (y) = r''2 (x)` / `m2 ((y), a) = (x)`.
    pub fn pretty(&self) -> String {
        let mut s = String::new();
        let names: Vec<String> = (0..self.gens.len()).map(|g| self.gen_label(g)).collect();
        s.push_str(&format!("generators: {}\n", names.join(" ")));
        for ((x, inputs), terms) in &self.ops {
            let rhs: Vec<String> = terms
                .iter()
                .map(|&(a, y)| match self.coefficient(a) {
                    Some(c) => format!("{} {}", c, self.gen_label(y)),
                    None => self.gen_label(y),
                })
                .collect();
            let lhs = match self.kind() {
                Kind::TypeD | Kind::Complex if inputs.is_empty() => format!("d {}", self.gen_label(*x)),
                _ if inputs.is_empty() => format!("m1 {}", self.gen_label(*x)),
                _ => {
                    let ins: Vec<String> = inputs.iter().map(|&b| self.right.name(b)).collect();
                    format!("m{} ({}, {})", inputs.len() + 1, self.gen_label(*x), ins.join(", "))
                }
            };
            s.push_str(&format!("{} = {}\n", lhs, rhs.join(" + ")));
        }
        s
    }
}

/// The identity type DA bimodule over `A(Z)`: one generator per idempotent,
/// with `m_2(I_s, a) = a (x) I_t`.
pub fn identity_da(z: &ArcDiagram) -> Result<Structure> {
    let alg = Algebra::new(z)?;
    let mut out = Structure::new("Id", alg.clone(), alg.clone());
    let mut by_idem = HashMap::new();
    for i in alg.idempotents() {
        let s = alg.left_idem(i).clone();
        by_idem.insert(s.clone(), out.add_gen(idem_name(&s), s.clone(), s));
    }
    for a in 0..alg.len() {
        if alg.is_idempotent(a) {
            continue;
        }
        let (s, t) = (by_idem[alg.left_idem(a)], by_idem[alg.right_idem(a)]);
        out.add_term(s, vec![a], a, t);
    }
    Ok(out)
}
