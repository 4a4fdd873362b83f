//! Strands algebras.
//!
//! [`Strands`] is a single strand diagram `(S, T, phi)` stored as sorted
//! `(s, phi(s))` pairs over global point indices. [`StrandSum`] is a Z/2 sum of
//! diagrams. [`Algebra`] is `A(Z)` for an arc diagram, with the canonical basis
//! of elements `a(rho, s)` indexed by `usize` ids; [`Elem`] is a Z/2 sum of ids.

use crate::arc_diagram::{ArcDiagram, Chord};
use crate::error::{Error, Result};
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Strands(pub Vec<(usize, usize)>);

impl Strands {
    pub fn new(mut pairs: Vec<(usize, usize)>) -> Strands {
        pairs.sort();
        Strands(pairs)
    }

    pub fn idempotent(points: &[usize]) -> Strands {
        Strands::new(points.iter().map(|&p| (p, p)).collect())
    }

    pub fn sources(&self) -> Vec<usize> {
        self.0.iter().map(|&(s, _)| s).collect()
    }

    pub fn targets(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.0.iter().map(|&(_, t)| t).collect();
        t.sort();
        t
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inv(&self) -> usize {
        let v = &self.0;
        let mut n = 0;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                if v[i].1 > v[j].1 {
                    n += 1;
                }
            }
        }
        n
    }

    /// `self * other`: defined when targets of `self` equal sources of `other`
    /// and inversions add.
    pub fn mul(&self, other: &Strands) -> Option<Strands> {
        if self.targets() != other.sources() {
            return None;
        }
        let psi: HashMap<usize, usize> = other.0.iter().copied().collect();
        let prod = Strands::new(self.0.iter().map(|&(s, t)| (s, psi[&t])).collect());
        (prod.inv() == self.inv() + other.inv()).then_some(prod)
    }

    /// Resolutions of single crossings that drop the inversion count by exactly one.
    pub fn differential(&self) -> Vec<Strands> {
        let v = &self.0;
        let inv = self.inv();
        let mut out = Vec::new();
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                if v[i].1 > v[j].1 {
                    let mut w = v.clone();
                    w[i].1 = v[j].1;
                    w[j].1 = v[i].1;
                    let r = Strands(w);
                    if r.inv() + 1 == inv {
                        out.push(r);
                    }
                }
            }
        }
        out
    }

    /// Every resolution of a crossing, with no condition on the inversion count.
    pub fn differential_all_resolutions(&self) -> Vec<Strands> {
        let v = &self.0;
        let mut out = Vec::new();
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                if v[i].1 > v[j].1 {
                    let mut w = v.clone();
                    w[i].1 = v[j].1;
                    w[j].1 = v[i].1;
                    out.push(Strands(w));
                }
            }
        }
        out
    }

    /// Multiplicity of each elementary interval `[p, p+1]`, indexed by `p`.
    pub fn hclass(&self, num_points: usize) -> Vec<i64> {
        let mut h = vec![0i64; num_points];
        for &(s, t) in &self.0 {
            for slot in h.iter_mut().take(t).skip(s) {
                *slot += 1;
            }
        }
        h
    }
}

impl fmt::Display for Strands {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(s, t)| format!("{}->{}", s + 1, t + 1)).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

pub type StrandSum = BTreeSet<Strands>;

pub fn xor_insert<T: Ord>(set: &mut BTreeSet<T>, x: T) {
    if !set.remove(&x) {
        set.insert(x);
    }
}

pub fn sum_mul(a: &StrandSum, b: &StrandSum) -> StrandSum {
    let mut out = StrandSum::new();
    for x in a {
        for y in b {
            if let Some(p) = x.mul(y) {
                xor_insert(&mut out, p);
            }
        }
    }
    out
}

pub fn sum_diff(a: &StrandSum) -> StrandSum {
    let mut out = StrandSum::new();
    for x in a {
        for d in x.differential() {
            xor_insert(&mut out, d);
        }
    }
    out
}

pub fn sum_add(a: &StrandSum, b: &StrandSum) -> StrandSum {
    a.symmetric_difference(b).cloned().collect()
}

/// All generators of `A(n_1, ..., n_l; k)`: `k` strands, each moving weakly
/// upward inside its segment.
pub fn strand_generators(seg_sizes: &[usize], k: usize) -> Vec<Strands> {
    let mut seg_end = Vec::new();
    let mut start = 0;
    for &n in seg_sizes {
        for _ in 0..n {
            seg_end.push(start + n);
        }
        start += n;
    }
    let n = seg_end.len();
    let mut out = Vec::new();
    fn rec(p: usize, n: usize, k: usize, seg_end: &[usize], used: &mut Vec<bool>, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Strands>) {
        if cur.len() == k {
            out.push(Strands::new(cur.clone()));
            return;
        }
        if p == n || n - p < k - cur.len() {
            return;
        }
        rec(p + 1, n, k, seg_end, used, cur, out);
        for t in p..seg_end[p] {
            if !used[t] {
                used[t] = true;
                cur.push((p, t));
                rec(p + 1, n, k, seg_end, used, cur, out);
                cur.pop();
                used[t] = false;
            }
        }
    }
    rec(0, n, k, &seg_end, &mut vec![false; n], &mut Vec::new(), &mut out);
    out
}

/// Exhaustive check of `d^2 = 0`, the Leibniz rule and associativity on all
/// generators of `A(n_1, ..., n_l; k)`. One line per violation.
pub fn axiom_violations(seg_sizes: &[usize], k: usize) -> Vec<String> {
    let gens = strand_generators(seg_sizes, k);
    let one = |x: &Strands| -> StrandSum { [x.clone()].into_iter().collect() };
    let mut by_sources: HashMap<Vec<usize>, Vec<&Strands>> = HashMap::new();
    for g in &gens {
        by_sources.entry(g.sources()).or_default().push(g);
    }
    let empty = Vec::new();
    gens.par_iter()
        .flat_map_iter(|a| {
            let mut out = Vec::new();
            let da = sum_diff(&one(a));
            if !sum_diff(&da).is_empty() {
                out.push(format!("d^2 {} != 0", a));
            }
            for b in by_sources.get(&a.targets()).unwrap_or(&empty) {
                let ab = sum_mul(&one(a), &one(b));
                let rhs = sum_add(&sum_mul(&da, &one(b)), &sum_mul(&one(a), &sum_diff(&one(b))));
                if sum_diff(&ab) != rhs {
                    out.push(format!("Leibniz {} {}", a, b));
                }
                for c in by_sources.get(&b.targets()).unwrap_or(&empty) {
                    let l = sum_mul(&ab, &one(c));
                    let r = sum_mul(&one(a), &sum_mul(&one(b), &one(c)));
                    if l != r {
                        out.push(format!("associativity {} {} {}", a, b, c));
                    }
                }
            }
            out
        })
        .collect()
}

/// A basis element `a(chords, s)` of `A(Z)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Basis {
    pub chords: Vec<Chord>,
    pub s: BTreeSet<usize>,
}

impl Basis {
    pub fn idempotent(s: BTreeSet<usize>) -> Basis {
        Basis { chords: vec![], s }
    }

    pub fn is_idempotent(&self) -> bool {
        self.chords.is_empty()
    }

    /// Number of strands (the summand index).
    pub fn summand(&self) -> usize {
        self.chords.len() + self.s.len()
    }
}

/// Z/2 sum of basis ids of an [`Algebra`].
pub type Elem = BTreeSet<usize>;

pub fn elem_add(a: &Elem, b: &Elem) -> Elem {
    a.symmetric_difference(b).copied().collect()
}

/// `A(Z)` with its canonical basis and cached structure constants.
pub struct Algebra {
    pub z: ArcDiagram,
    basis: Vec<Basis>,
    index: HashMap<Basis, usize>,
    left: Vec<BTreeSet<usize>>,
    right: Vec<BTreeSet<usize>>,
    mul_cache: Mutex<HashMap<(usize, usize), Option<usize>>>,
    diff_cache: Mutex<HashMap<usize, Elem>>,
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Algebra({} points, {} basis elements)", self.z.num_points(), self.basis.len())
    }
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Algebra) -> bool {
        self.z.segments == other.z.segments && self.z.matching == other.z.matching
    }
}

/// Sets of chords with distinct start pairs and distinct end pairs.
fn chord_sets(z: &ArcDiagram) -> Vec<Vec<Chord>> {
    let chords = z.all_chords();
    let mut out = Vec::new();
    fn rec(i: usize, chords: &[Chord], z: &ArcDiagram, cur: &mut Vec<Chord>, lo: &mut BTreeSet<usize>, hi: &mut BTreeSet<usize>, out: &mut Vec<Vec<Chord>>) {
        if i == chords.len() {
            out.push(cur.clone());
            return;
        }
        rec(i + 1, chords, z, cur, lo, hi, out);
        let c = chords[i];
        let (ml, mh) = (z.matching[c.lo], z.matching[c.hi]);
        if !lo.contains(&ml) && !hi.contains(&mh) {
            lo.insert(ml);
            hi.insert(mh);
            cur.push(c);
            rec(i + 1, chords, z, cur, lo, hi, out);
            cur.pop();
            lo.remove(&ml);
            hi.remove(&mh);
        }
    }
    rec(0, &chords, z, &mut Vec::new(), &mut BTreeSet::new(), &mut BTreeSet::new(), &mut out);
    out
}

fn subsets(items: &[usize]) -> Vec<BTreeSet<usize>> {
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << items.len()) {
        out.push(items.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x).collect());
    }
    out
}

impl Algebra {
    /// Builds `A(Z)`; refuses degenerate diagrams.
    pub fn new(z: &ArcDiagram) -> Result<Arc<Algebra>> {
        z.validate()?;
        let mut basis = Vec::new();
        for chords in chord_sets(z) {
            let used: BTreeSet<usize> = chords.iter().flat_map(|c| [z.matching[c.lo], z.matching[c.hi]]).collect();
            let free: Vec<usize> = (0..z.num_pairs).filter(|i| !used.contains(i)).collect();
            for s in subsets(&free) {
                basis.push(Basis { chords: chords.clone(), s });
            }
        }
        basis.sort_by(|a, b| (a.summand(), a.chords.len(), &a.s, &a.chords).cmp(&(b.summand(), b.chords.len(), &b.s, &b.chords)));
        let index = basis.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
        let left = basis.iter().map(|b| b.s.iter().copied().chain(b.chords.iter().map(|c| z.matching[c.lo])).collect()).collect();
        let right = basis.iter().map(|b| b.s.iter().copied().chain(b.chords.iter().map(|c| z.matching[c.hi])).collect()).collect();
        Ok(Arc::new(Algebra {
            z: z.clone(),
            basis,
            index,
            left,
            right,
            mul_cache: Mutex::new(HashMap::new()),
            diff_cache: Mutex::new(HashMap::new()),
        }))
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis_elem(&self, id: usize) -> &Basis {
        &self.basis[id]
    }

    pub fn id_of(&self, b: &Basis) -> Option<usize> {
        self.index.get(b).copied()
    }

    pub fn idem_id(&self, s: &BTreeSet<usize>) -> usize {
        self.index[&Basis::idempotent(s.clone())]
    }

    /// Pairs of the left idempotent `I(M(rho^-) u s)`.
    pub fn left_idem(&self, id: usize) -> &BTreeSet<usize> {
        &self.left[id]
    }

    /// Pairs of the right idempotent `I(M(rho^+) u s)`.
    pub fn right_idem(&self, id: usize) -> &BTreeSet<usize> {
        &self.right[id]
    }

    pub fn is_idempotent(&self, id: usize) -> bool {
        self.basis[id].is_idempotent()
    }

    /// Exhaustive check of `d^2 = 0`, the Leibniz rule and associativity on
    /// the basis. One line per violation.
    pub fn axiom_violations(&self) -> Vec<String> {
        let n = self.len();
        let mut by_left: HashMap<&BTreeSet<usize>, Vec<usize>> = HashMap::new();
        for b in 0..n {
            by_left.entry(&self.left[b]).or_default().push(b);
        }
        let one = |x: usize| -> Elem { [x].into_iter().collect() };
        let empty = Vec::new();
        (0..n)
            .into_par_iter()
            .flat_map_iter(|a| {
                let mut out = Vec::new();
                let da = self.diff_basis(a);
                if !self.diff(&da).is_empty() {
                    out.push(format!("d^2 {} != 0", self.name(a)));
                }
                for &b in by_left.get(&self.right[a]).unwrap_or(&empty) {
                    let ab = self.mul(&one(a), &one(b));
                    let rhs = elem_add(&self.mul(&da, &one(b)), &self.mul(&one(a), &self.diff_basis(b)));
                    if self.diff(&ab) != rhs {
                        out.push(format!("Leibniz {} {}", self.name(a), self.name(b)));
                    }
                    for &c in by_left.get(&self.right[b]).unwrap_or(&empty) {
                        if self.mul(&ab, &one(c)) != self.mul(&one(a), &self.mul(&one(b), &one(c))) {
                            out.push(format!("associativity {} {} {}", self.name(a), self.name(b), self.name(c)));
                        }
                    }
                }
                out
            })
            .collect()
    }

    /// Ids of the basis elements with `i` strands.
    pub fn summand(&self, i: usize) -> Vec<usize> {
        (0..self.basis.len()).filter(|&id| self.basis[id].summand() == i).collect()
    }

    /// All idempotent ids.
    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.basis.len()).filter(|&id| self.is_idempotent(id)).collect()
    }

    /// The strand diagrams of `a(rho, s)`: one per section of `s`.
    pub fn expand(&self, id: usize) -> StrandSum {
        let b = &self.basis[id];
        let moving: Vec<(usize, usize)> = b.chords.iter().map(|c| (c.lo, c.hi)).collect();
        let s: Vec<usize> = b.s.iter().copied().collect();
        let mut out = StrandSum::new();
        for mask in 0u64..(1u64 << s.len()) {
            let mut v = moving.clone();
            for (j, &pair) in s.iter().enumerate() {
                let (p, q) = self.z.pair_points(pair);
                let pt = if mask >> j & 1 == 0 { p } else { q };
                v.push((pt, pt));
            }
            out.insert(Strands::new(v));
        }
        out
    }

    /// One strand diagram of `a(rho, s)` (the lowest section).
    pub fn representative(&self, id: usize) -> Strands {
        self.expand(id).into_iter().next().expect("nonempty")
    }

    /// Writes a sum of strand diagrams in the canonical basis; errors if it is not in `A(Z)`.
    pub fn decompose(&self, sum: &StrandSum) -> Result<Elem> {
        let mut groups: BTreeMap<Basis, usize> = BTreeMap::new();
        for st in sum {
            let mut chords = Vec::new();
            let mut s = BTreeSet::new();
            let mut seen_lo = BTreeSet::new();
            let mut seen_hi = BTreeSet::new();
            for &(a, b) in &st.0 {
                if !seen_lo.insert(self.z.matching[a]) || !seen_hi.insert(self.z.matching[b]) {
                    return Err(Error::Invalid(format!("{} is not matched-injective", st)));
                }
                if a == b {
                    s.insert(self.z.matching[a]);
                } else {
                    chords.push(Chord { lo: a, hi: b });
                }
            }
            chords.sort();
            *groups.entry(Basis { chords, s }).or_default() += 1;
        }
        let mut out = Elem::new();
        for (b, count) in groups {
            if count != 1usize << b.s.len() {
                return Err(Error::Invalid("sum is not a union of full section sums".into()));
            }
            let id = self.id_of(&b).ok_or_else(|| Error::Invalid("strand group outside the basis".into()))?;
            out.insert(id);
        }
        Ok(out)
    }

    /// Product of two basis elements (a basis element or zero).
    pub fn mul_basis(&self, a: usize, b: usize) -> Option<usize> {
        if self.right[a] != self.left[b] {
            return None;
        }
        if self.is_idempotent(a) {
            return Some(b);
        }
        if self.is_idempotent(b) {
            return Some(a);
        }
        if let Some(r) = self.mul_cache.lock().expect("cache").get(&(a, b)) {
            return *r;
        }
        let prod = self.decompose(&sum_mul(&self.expand(a), &self.expand(b))).expect("A(Z) is closed under products");
        assert!(prod.len() <= 1, "product of basis elements is a basis element or zero");
        let r = prod.into_iter().next();
        self.mul_cache.lock().expect("cache").insert((a, b), r);
        r
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let mut out = Elem::new();
        for &x in a {
            for &y in b {
                if let Some(p) = self.mul_basis(x, y) {
                    xor_insert(&mut out, p);
                }
            }
        }
        out
    }

    pub fn diff_basis(&self, a: usize) -> Elem {
        if self.is_idempotent(a) {
            return Elem::new();
        }
        if let Some(r) = self.diff_cache.lock().expect("cache").get(&a) {
            return r.clone();
        }
        let d = self.decompose(&sum_diff(&self.expand(a))).expect("A(Z) is closed under the differential");
        self.diff_cache.lock().expect("cache").insert(a, d.clone());
        d
    }

    pub fn diff(&self, a: &Elem) -> Elem {
        let mut out = Elem::new();
        for &x in a {
            for y in self.diff_basis(x) {
                xor_insert(&mut out, y);
            }
        }
        out
    }

    /// `a(chords, s)` as a basis id. Zero (`None`) when the chords are not
    /// completable; error when `s` meets the chord pairs.
    pub fn chord_element(&self, chords: &[Chord], s: &BTreeSet<usize>) -> Result<Option<usize>> {
        let used: BTreeSet<usize> = chords.iter().flat_map(|c| [self.z.matching[c.lo], self.z.matching[c.hi]]).collect();
        if !s.is_disjoint(&used) {
            return Err(Error::Invalid("completion meets the pairs of the chords".into()));
        }
        let mut sorted = chords.to_vec();
        sorted.sort();
        sorted.dedup();
        Ok(self.id_of(&Basis { chords: sorted, s: s.clone() }))
    }

    /// `a_p(rho)`: sum over all `p`-completions.
    pub fn chord_sum(&self, chords: &[Chord], p: usize) -> Elem {
        let mut sorted = chords.to_vec();
        sorted.sort();
        sorted.dedup();
        (0..self.basis.len()).filter(|&id| self.basis[id].chords == sorted && self.basis[id].summand() == p).collect()
    }

    /// Homology class of a basis element in `H_1(Z, a)`.
    pub fn hclass(&self, id: usize) -> Vec<i64> {
        let mut h = vec![0i64; self.z.num_points()];
        for c in &self.basis[id].chords {
            for slot in h.iter_mut().take(c.hi).skip(c.lo) {
                *slot += 1;
            }
        }
        h
    }

    /// Name of a basis element: alias, idempotent `I13`, or `a(lo-hi,...|pairs)`.
    pub fn name(&self, id: usize) -> String {
        let b = &self.basis[id];
        for a in &self.z.aliases {
            if a.chords == b.chords && a.completion == b.s {
                return a.name.clone();
            }
        }
        if b.is_idempotent() {
            return idem_name(&b.s);
        }
        let chords: Vec<String> = b.chords.iter().map(|c| format!("{}-{}", self.z.point_names[c.lo], self.z.point_names[c.hi])).collect();
        let pairs: Vec<String> = b.s.iter().map(|i| (i + 1).to_string()).collect();
        if pairs.is_empty() {
            format!("a({})", chords.join(","))
        } else {
            format!("a({}|{})", chords.join(","), pairs.join(" "))
        }
    }

    /// Inverse of [`Algebra::name`].
    pub fn parse_name(&self, text: &str) -> Result<usize> {
        let t = text.trim();
        if let Some(a) = self.z.aliases.iter().find(|a| a.name == t) {
            return self
                .id_of(&Basis { chords: a.chords.clone(), s: a.completion.clone() })
                .ok_or_else(|| Error::Invalid(format!("alias `{}` is not a basis element", t)));
        }
        if let Some(s) = parse_idem_name(t) {
            if s.iter().any(|&i| i >= self.z.num_pairs) {
                return Err(Error::Invalid(format!("idempotent `{}` out of range", t)));
            }
            return Ok(self.idem_id(&s));
        }
        let inner = t
            .strip_prefix("a(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Invalid(format!("unknown algebra element `{}`", t)))?;
        let line = format!("alias _ {}", inner);
        let a = self.z.parse_alias(&line)?;
        self.chord_element(&a.chords, &a.completion)?.ok_or_else(|| Error::Invalid(format!("`{}` is zero", t)))
    }

    /// Splits a basis element of `A(Z1 u Z2)` into its factors, given the sizes of `Z1`.
    pub fn tensor_split_basis(&self, id: usize, points1: usize, pairs1: usize) -> (Basis, Basis) {
        let b = &self.basis[id];
        let mut l = Basis { chords: vec![], s: BTreeSet::new() };
        let mut r = Basis { chords: vec![], s: BTreeSet::new() };
        for c in &b.chords {
            if c.hi < points1 {
                l.chords.push(*c);
            } else {
                r.chords.push(Chord { lo: c.lo - points1, hi: c.hi - points1 });
            }
        }
        for &i in &b.s {
            if i < pairs1 {
                l.s.insert(i);
            } else {
                r.s.insert(i - pairs1);
            }
        }
        (l, r)
    }
}

pub fn idem_name(s: &BTreeSet<usize>) -> String {
    if s.is_empty() {
        "I()".to_string()
    } else if s.iter().all(|&i| i < 9) {
        format!("I{}", s.iter().map(|i| (i + 1).to_string()).collect::<String>())
    } else {
        format!("I({})", s.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(","))
    }
}

pub fn parse_idem_name(t: &str) -> Option<BTreeSet<usize>> {
    let rest = t.strip_prefix('I')?;
    if let Some(inner) = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        let mut s = BTreeSet::new();
        for tok in inner.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let i: usize = tok.parse().ok()?;
            if i == 0 {
                return None;
            }
            s.insert(i - 1);
        }
        return Some(s);
    }
    if rest.is_empty() || !rest.chars().all(|c| c.is_ascii_digit() && c != '0') {
        return None;
    }
    Some(rest.chars().map(|c| c.to_digit(10).expect("digit") as usize - 1).collect())
}

/// An element of `A(Z)` as a sum of strand diagrams, tied to its arc diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgElement {
    pub ambient: Arc<ArcDiagram>,
    pub terms: StrandSum,
}

impl AlgElement {
    pub fn zero(ambient: Arc<ArcDiagram>) -> AlgElement {
        AlgElement { ambient, terms: StrandSum::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_ambient(&self, o: &AlgElement) -> Result<()> {
        if Arc::ptr_eq(&self.ambient, &o.ambient) || self.ambient == o.ambient {
            Ok(())
        } else {
            Err(Error::Ambient("elements live over different arc diagrams".into()))
        }
    }

    pub fn add(&self, o: &AlgElement) -> Result<AlgElement> {
        self.same_ambient(o)?;
        Ok(AlgElement { ambient: self.ambient.clone(), terms: sum_add(&self.terms, &o.terms) })
    }

    pub fn multiply(&self, o: &AlgElement) -> Result<AlgElement> {
        self.same_ambient(o)?;
        Ok(AlgElement { ambient: self.ambient.clone(), terms: sum_mul(&self.terms, &o.terms) })
    }

    pub fn differential(&self) -> AlgElement {
        AlgElement { ambient: self.ambient.clone(), terms: sum_diff(&self.terms) }
    }

    /// Homology class, if the element is homogeneous (zero gives `None`).
    pub fn hclass(&self) -> Result<Option<Vec<i64>>> {
        let n = self.ambient.num_points();
        let mut classes = self.terms.iter().map(|t| t.hclass(n));
        let Some(first) = classes.next() else { return Ok(None) };
        if classes.any(|c| c != first) {
            return Err(Error::Invalid("inhomogeneous element".into()));
        }
        Ok(Some(first))
    }

    /// Splits an element over `Z1 u Z2` into a pure tensor, given the point count of `Z1`.
    pub fn tensor_split(&self, points1: usize) -> Result<(StrandSum, StrandSum)> {
        let mut left = StrandSum::new();
        let mut right = StrandSum::new();
        for t in &self.terms {
            let (l, r): (Vec<(usize, usize)>, Vec<(usize, usize)>) = t.0.iter().partition(|&&(s, _)| s < points1);
            left.insert(Strands(l));
            right.insert(Strands(r.into_iter().map(|(s, t)| (s - points1, t - points1)).collect()));
        }
        if left.len() * right.len() != self.terms.len() {
            return Err(Error::Invalid("element is not a pure tensor".into()));
        }
        let rebuilt = tensor_join(&left, &right, points1);
        if rebuilt != self.terms {
            return Err(Error::Invalid("element is not a pure tensor".into()));
        }
        Ok((left, right))
    }
}

/// Inverse of [`AlgElement::tensor_split`].
pub fn tensor_join(left: &StrandSum, right: &StrandSum, points1: usize) -> StrandSum {
    let mut out = StrandSum::new();
    for l in left {
        for r in right {
            let mut v = l.0.clone();
            v.extend(r.0.iter().map(|&(s, t)| (s + points1, t + points1)));
            out.insert(Strands::new(v));
        }
    }
    out
}

impl Algebra {
    /// An element of the canonical basis as a strand sum over the shared diagram.
    pub fn to_element(&self, ambient: &Arc<ArcDiagram>, e: &Elem) -> AlgElement {
        let mut terms = StrandSum::new();
        for &id in e {
            for t in self.expand(id) {
                xor_insert(&mut terms, t);
            }
        }
        AlgElement { ambient: ambient.clone(), terms }
    }

    /// All basis elements with `i` strands, as strand sums.
    pub fn basis(&self, ambient: &Arc<ArcDiagram>, i: usize) -> Vec<AlgElement> {
        self.summand(i).into_iter().map(|id| self.to_element(ambient, &[id].into_iter().collect())).collect()
    }

    pub fn elem_name(&self, e: &Elem) -> String {
        if e.is_empty() {
            return "0".to_string();
        }
        e.iter().map(|&id| self.name(id)).collect::<Vec<_>>().join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossing_resolution() {
        let x = Strands::new(vec![(0, 3), (1, 2)]);
        assert_eq!(x.inv(), 1);
        assert_eq!(x.differential(), vec![Strands::new(vec![(0, 2), (1, 3)])]);
    }

    #[test]
    fn generator_counts() {
        // A(2;1): 1->1, 1->2, 2->2.
        assert_eq!(strand_generators(&[2], 1).len(), 3);
        assert_eq!(strand_generators(&[1, 1], 2).len(), 1);
    }

    #[test]
    fn idem_names_round_trip() {
        let s: BTreeSet<usize> = [0, 2].into_iter().collect();
        assert_eq!(idem_name(&s), "I13");
        assert_eq!(parse_idem_name("I13"), Some(s.clone()));
        assert_eq!(parse_idem_name("I(1,3)"), Some(s));
        assert_eq!(parse_idem_name("I()"), Some(BTreeSet::new()));
    }
}
