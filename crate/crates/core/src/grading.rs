//! The grading group `Gr(Z)`, its reduced subgroup, grading reductions and
//! grading cosets.
//!
//! A homology class in `H_1(Z, a)` is a `Vec<i64>` indexed by point: entry `p`
//! is the multiplicity of the interval `[p, p+1]`, which is always zero for the
//! last point of a segment.

use crate::arc_diagram::ArcDiagram;
use crate::error::{Error, Result};
use crate::half::Half;
use crate::linalg::{integer_kernel, solve_integer};
use crate::strands::{AlgElement, Algebra, Strands};
use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

/// `(maslov, hclass)` in `Gr(Z)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GradingElement {
    pub maslov: Half,
    pub hclass: Vec<i64>,
}

impl fmt::Display for GradingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h: Vec<String> = self.hclass.iter().map(|x| x.to_string()).collect();
        write!(f, "({}; {})", self.maslov, h.join(","))
    }
}

/// `Gr(Z)` for a fixed arc diagram.
#[derive(Clone, Debug, PartialEq)]
pub struct GradingGroup {
    pub z: Arc<ArcDiagram>,
}

impl GradingGroup {
    pub fn new(z: Arc<ArcDiagram>) -> GradingGroup {
        GradingGroup { z }
    }

    fn n(&self) -> usize {
        self.z.num_points()
    }

    /// Whether `[p, p+1]` is an interval of a segment.
    pub fn is_interval(&self, p: usize) -> bool {
        p + 1 < self.n() && self.z.same_segment(p, p + 1)
    }

    pub fn identity(&self) -> GradingElement {
        GradingElement { maslov: Half::ZERO, hclass: vec![0; self.n()] }
    }

    /// `lambda^t` for a half-integer `t`.
    pub fn lambda(&self, t: Half) -> GradingElement {
        GradingElement { maslov: t, hclass: vec![0; self.n()] }
    }

    /// `m(p, alpha)`: the average multiplicity of `alpha` on the two sides of point `p`.
    pub fn m(&self, p: usize, alpha: &[i64]) -> Half {
        let mut halves = 0;
        if p > 0 && self.is_interval(p - 1) {
            halves += alpha[p - 1];
        }
        if self.is_interval(p) {
            halves += alpha[p];
        }
        Half(halves)
    }

    /// `m` of a 0-chain given as a coefficient per point.
    pub fn m_chain(&self, chain: &[i64], alpha: &[i64]) -> Half {
        chain.iter().enumerate().map(|(p, &c)| self.m(p, alpha).scale(c)).sum()
    }

    /// The boundary 0-chain of `alpha`, per point.
    pub fn boundary(&self, alpha: &[i64]) -> Vec<i64> {
        let mut d = vec![0; self.n()];
        for p in 0..self.n() {
            if self.is_interval(p) {
                d[p + 1] += alpha[p];
                d[p] -= alpha[p];
            }
        }
        d
    }

    /// `L(alpha, beta) = m(boundary alpha, beta)`.
    pub fn l(&self, alpha: &[i64], beta: &[i64]) -> Half {
        self.m_chain(&self.boundary(alpha), beta)
    }

    pub fn mul(&self, g: &GradingElement, h: &GradingElement) -> GradingElement {
        GradingElement {
            maslov: g.maslov + h.maslov + self.l(&g.hclass, &h.hclass),
            hclass: g.hclass.iter().zip(&h.hclass).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn product<'a>(&self, items: impl IntoIterator<Item = &'a GradingElement>) -> GradingElement {
        items.into_iter().fold(self.identity(), |acc, g| self.mul(&acc, g))
    }

    /// `(a, alpha)^{-1} = (-a + L(alpha, alpha), -alpha)`.
    pub fn inv(&self, g: &GradingElement) -> GradingElement {
        GradingElement { maslov: -g.maslov + self.l(&g.hclass, &g.hclass), hclass: g.hclass.iter().map(|a| -a).collect() }
    }

    pub fn pow(&self, g: &GradingElement, k: i64) -> GradingElement {
        let base = if k < 0 { self.inv(g) } else { g.clone() };
        let mut out = self.identity();
        for _ in 0..k.unsigned_abs() {
            out = self.mul(&out, &base);
        }
        out
    }

    /// Maslov part of the commutator `g h g^{-1} h^{-1}`, which is central.
    pub fn commutator(&self, g: &GradingElement, h: &GradingElement) -> Half {
        self.l(&g.hclass, &h.hclass) - self.l(&h.hclass, &g.hclass)
    }

    /// `gr(a) = (inv(a) - m(S, [a]), [a])` for a single strand diagram.
    pub fn gr_strands(&self, a: &Strands) -> GradingElement {
        let hclass = a.hclass(self.n());
        let m: Half = a.sources().iter().map(|&s| self.m(s, &hclass)).sum();
        GradingElement { maslov: Half::from_int(a.inv() as i64) - m, hclass }
    }

    /// Grading of a homogeneous nonzero element.
    pub fn gr_element(&self, x: &AlgElement) -> Result<GradingElement> {
        let mut it = x.terms.iter().map(|t| self.gr_strands(t));
        let first = it.next().ok_or_else(|| Error::Invalid("the zero element has no grading".into()))?;
        if it.any(|g| g != first) {
            return Err(Error::Invalid("inhomogeneous element".into()));
        }
        Ok(first)
    }

    /// Grading of a basis element of `A(Z)`.
    pub fn gr_basis(&self, alg: &Algebra, id: usize) -> GradingElement {
        self.gr_strands(&alg.representative(id))
    }

    /// `partial'`: the image of `alpha` in `H_0(E)`, per matched pair.
    pub fn boundary_prime(&self, alpha: &[i64]) -> Vec<i64> {
        let mut d = vec![0; self.z.num_pairs];
        for p in 0..self.n() {
            if self.is_interval(p) {
                d[self.z.matching[p + 1]] += alpha[p];
                d[self.z.matching[p]] -= alpha[p];
            }
        }
        d
    }

    /// Whether `g` lies in the reduced group (homological part in `ker partial'`).
    pub fn is_reduced(&self, g: &GradingElement) -> bool {
        self.boundary_prime(&g.hclass).iter().all(|&x| x == 0)
    }

    /// Signed intersection number of two classes in `ker partial'`, read as
    /// curves in `F(Z)`: the arc of each pair is pushed off so that it leaves
    /// the lower point upwards and the upper point downwards. `F(Z)` is oriented
    /// so that the commutator of `(0, alpha)` and `(0, beta)` is `lambda^{2 #(alpha . beta)}`.
    pub fn intersection(&self, alpha: &[i64], beta: &[i64]) -> Half {
        debug_assert!(self.boundary_prime(alpha).iter().all(|&x| x == 0));
        debug_assert!(self.boundary_prime(beta).iter().all(|&x| x == 0));
        let db = self.boundary(beta);
        let mut total = 0i64;
        for p in 0..self.n() {
            if db[p] == 0 {
                continue;
            }
            let lower = self.z.pair_points(self.z.matching[p]).0 == p;
            let side = if lower {
                if self.is_interval(p) {
                    alpha[p]
                } else {
                    0
                }
            } else if p > 0 && self.is_interval(p - 1) {
                alpha[p - 1]
            } else {
                0
            };
            total += db[p] * side;
        }
        Half::from_int(-total)
    }

    /// Index of the interval `[p, p+1]` in the reversed diagram.
    fn reverse_interval(&self, p: usize) -> usize {
        self.z.reverse_point(p + 1)
    }

    /// The anti-isomorphism `Gr(Z) -> Gr(-Z)` fixing both components.
    pub fn reverse_element(&self, g: &GradingElement) -> GradingElement {
        let mut h = vec![0; self.n()];
        for p in 0..self.n() {
            if self.is_interval(p) {
                h[self.reverse_interval(p)] = g.hclass[p];
            }
        }
        GradingElement { maslov: g.maslov, hclass: h }
    }

    /// The group of the reversed diagram.
    pub fn reversed(&self) -> GradingGroup {
        GradingGroup::new(Arc::new(self.z.reverse()))
    }

    /// Embeds `Gr` of a sub-diagram whose points start at `offset`.
    pub fn embed(&self, g: &GradingElement, offset: usize) -> GradingElement {
        let mut h = vec![0; self.n()];
        h[offset..offset + g.hclass.len()].copy_from_slice(&g.hclass);
        GradingElement { maslov: g.maslov, hclass: h }
    }
}

/// A grading reduction: base idempotents and the choices `r(I)`.
#[derive(Clone, Debug)]
pub struct GradingReduction {
    pub group: GradingGroup,
    /// Connected component of each matched pair in `F(Z)`.
    pub pair_component: Vec<usize>,
    num_components: usize,
}

impl GradingReduction {
    /// The standard reduction: in each component the base idempotent occupies
    /// the lowest-numbered pairs, and `r(I)` follows shortest paths in the pair graph.
    pub fn new(group: GradingGroup) -> GradingReduction {
        let z = &group.z;
        let k = z.num_pairs;
        let mut comp = vec![usize::MAX; k];
        let mut next = 0;
        for start in 0..k {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = next;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for (w, _, _) in Self::neighbours(&group, u) {
                    if comp[w] == usize::MAX {
                        comp[w] = next;
                        queue.push_back(w);
                    }
                }
            }
            next += 1;
        }
        GradingReduction { group, pair_component: comp, num_components: next }
    }

    /// Edges of the pair graph at `u`: `(neighbour, interval, sign)`.
    fn neighbours(group: &GradingGroup, u: usize) -> Vec<(usize, usize, i64)> {
        let z = &group.z;
        let mut out = Vec::new();
        for p in 0..z.num_points() {
            if !group.is_interval(p) {
                continue;
            }
            let (a, b) = (z.matching[p], z.matching[p + 1]);
            if a == u {
                out.push((b, p, 1));
            }
            if b == u {
                out.push((a, p, -1));
            }
        }
        out
    }

    fn counts(&self, s: &BTreeSet<usize>) -> Vec<usize> {
        let mut c = vec![0; self.num_components];
        for &i in s {
            c[self.pair_component[i]] += 1;
        }
        c
    }

    /// Base idempotent of the component of `s`.
    pub fn base(&self, s: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut need = self.counts(s);
        let mut out = BTreeSet::new();
        for i in 0..self.group.z.num_pairs {
            let c = self.pair_component[i];
            if need[c] > 0 {
                need[c] -= 1;
                out.insert(i);
            }
        }
        out
    }

    /// A class whose `partial'` is `e_w - e_u`.
    fn path(&self, u: usize, w: usize) -> Vec<i64> {
        let n = self.group.z.num_points();
        let mut prev: Vec<Option<(usize, usize, i64)>> = vec![None; self.group.z.num_pairs];
        let mut seen = vec![false; self.group.z.num_pairs];
        seen[u] = true;
        let mut queue = VecDeque::from([u]);
        while let Some(v) = queue.pop_front() {
            if v == w {
                break;
            }
            for (x, p, sign) in Self::neighbours(&self.group, v) {
                if !seen[x] {
                    seen[x] = true;
                    prev[x] = Some((v, p, sign));
                    queue.push_back(x);
                }
            }
        }
        let mut h = vec![0; n];
        let mut v = w;
        while v != u {
            let (from, p, sign) = prev[v].expect("pairs in one component are connected");
            h[p] += sign;
            v = from;
        }
        h
    }

    /// `r(I)`, with zero Maslov part.
    pub fn r(&self, s: &BTreeSet<usize>) -> GradingElement {
        let base = self.base(s);
        let mut h = vec![0; self.group.z.num_points()];
        for c in 0..self.num_components {
            let from: Vec<usize> = base.difference(s).copied().filter(|&i| self.pair_component[i] == c).collect();
            let to: Vec<usize> = s.difference(&base).copied().filter(|&i| self.pair_component[i] == c).collect();
            for (&u, &w) in from.iter().zip(&to) {
                for (slot, x) in h.iter_mut().zip(self.path(u, w)) {
                    *slot += x;
                }
            }
        }
        GradingElement { maslov: Half::ZERO, hclass: h }
    }

    /// `r(I_s) g r(I_e)^{-1}`.
    pub fn reduce(&self, g: &GradingElement, start: &BTreeSet<usize>, end: &BTreeSet<usize>) -> Result<GradingElement> {
        if self.counts(start) != self.counts(end) {
            return Err(Error::Precondition("idempotents lie in different components".into()));
        }
        let gr = &self.group;
        let out = gr.mul(&gr.mul(&self.r(start), g), &gr.inv(&self.r(end)));
        debug_assert!(gr.is_reduced(&out));
        Ok(out)
    }

    /// The reduced grading of a basis element of `A(Z)`.
    pub fn reduce_basis(&self, alg: &Algebra, id: usize) -> GradingElement {
        let g = self.group.gr_basis(alg, id);
        self.reduce(&g, alg.left_idem(id), alg.right_idem(id)).expect("basis elements preserve components")
    }
}

/// A finitely generated subgroup `P` of `Gr(Z)` with a membership test.
#[derive(Clone, Debug)]
pub struct Stabilizer {
    pub group: GradingGroup,
    pub gens: Vec<GradingElement>,
    /// Positive generator (in halves) of the Maslov parts of elements of `P`
    /// with zero homology; zero when there are none besides the identity.
    central_halves: i64,
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl Stabilizer {
    pub fn new(group: GradingGroup, gens: Vec<GradingElement>) -> Stabilizer {
        let n = group.z.num_points();
        let mut g = 0;
        for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                g = gcd(g, group.commutator(&gens[i], &gens[j]).halves());
            }
        }
        let rows: Vec<Vec<i64>> = (0..n).map(|p| gens.iter().map(|x| x.hclass[p]).collect()).collect();
        for k in integer_kernel(&rows, gens.len()) {
            g = gcd(g, Self::ordered_power(&group, &gens, &k).maslov.halves());
        }
        Stabilizer { group, gens, central_halves: g }
    }

    /// `p_1^{c_1} ... p_m^{c_m}`.
    fn ordered_power(group: &GradingGroup, gens: &[GradingElement], c: &[i64]) -> GradingElement {
        let mut out = group.identity();
        for (g, &k) in gens.iter().zip(c) {
            out = group.mul(&out, &group.pow(g, k));
        }
        out
    }

    pub fn contains(&self, g: &GradingElement) -> bool {
        let n = self.group.z.num_points();
        let rows: Vec<Vec<i64>> = (0..n).map(|p| self.gens.iter().map(|x| x.hclass[p]).collect()).collect();
        let Some(sol) = solve_integer(&rows, self.gens.len(), &g.hclass) else { return false };
        let q = Self::ordered_power(&self.group, &self.gens, &sol.particular);
        let d = self.group.mul(g, &self.group.inv(&q));
        debug_assert!(d.hclass.iter().all(|&x| x == 0));
        let h = d.maslov.halves();
        if self.central_halves == 0 {
            h == 0
        } else {
            h % self.central_halves == 0
        }
    }

    /// Brute-force membership: searches products of at most `depth` factors `p_i^{+-1}`.
    pub fn contains_within_words(&self, g: &GradingElement, depth: usize) -> bool {
        let gr = &self.group;
        let mut letters = Vec::new();
        for p in &self.gens {
            letters.push(p.clone());
            letters.push(gr.inv(p));
        }
        let mut seen: HashSet<GradingElement> = HashSet::new();
        let mut frontier = vec![gr.identity()];
        seen.insert(gr.identity());
        if *g == gr.identity() {
            return true;
        }
        for _ in 0..depth {
            let mut next = Vec::new();
            for w in &frontier {
                for l in &letters {
                    let x = gr.mul(w, l);
                    if x == *g {
                        return true;
                    }
                    if seen.insert(x.clone()) {
                        next.push(x);
                    }
                }
            }
            frontier = next;
        }
        false
    }

    pub fn same_as(&self, other: &Stabilizer) -> bool {
        self.group == other.group && self.gens == other.gens
    }
}

/// A right coset `P g`.
#[derive(Clone, Debug)]
pub struct GradingCoset {
    pub rep: GradingElement,
    pub stabilizer: Arc<Stabilizer>,
}

impl GradingCoset {
    pub fn new(rep: GradingElement, stabilizer: Arc<Stabilizer>) -> GradingCoset {
        GradingCoset { rep, stabilizer }
    }

    /// `P g h`.
    pub fn act(&self, h: &GradingElement) -> GradingCoset {
        GradingCoset { rep: self.stabilizer.group.mul(&self.rep, h), stabilizer: self.stabilizer.clone() }
    }

    fn quotient(&self, other: &GradingCoset) -> Result<GradingElement> {
        if !self.stabilizer.same_as(&other.stabilizer) {
            return Err(Error::Precondition("cosets of different subgroups".into()));
        }
        let gr = &self.stabilizer.group;
        Ok(gr.mul(&other.rep, &gr.inv(&self.rep)))
    }

    /// `P g = P g'` iff `g' g^{-1}` lies in `P`.
    pub fn coset_equal(&self, other: &GradingCoset) -> Result<bool> {
        Ok(self.stabilizer.contains(&self.quotient(other)?))
    }

    /// [`GradingCoset::coset_equal`] decided by bounded word search.
    pub fn coset_equal_within_words(&self, other: &GradingCoset, depth: usize) -> Result<bool> {
        Ok(self.stabilizer.contains_within_words(&self.quotient(other)?, depth))
    }
}
