//! Arc diagrams: oriented segments with marked points and a 2-to-1 matching.
//!
//! Points carry global 0-based indices in segment order, so the points of a
//! segment form a contiguous block. Matched pairs are 0-based internally and
//! printed 1-based.

use crate::error::{parse_err, Error, Result};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Segment {
    pub name: String,
    /// Global index of the first point.
    pub start: usize,
    pub len: usize,
}

/// A Reeb chord from point `lo` to point `hi` (global indices, same segment, `lo < hi`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Chord {
    pub lo: usize,
    pub hi: usize,
}

/// A named algebra element `a(chords, s)` used for printing and parsing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alias {
    pub name: String,
    pub chords: Vec<Chord>,
    pub completion: BTreeSet<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ArcDiagram {
    pub segments: Vec<Segment>,
    pub point_names: Vec<String>,
    /// Pair index of each point.
    pub matching: Vec<usize>,
    pub num_pairs: usize,
    pub aliases: Vec<Alias>,
}

impl ArcDiagram {
    /// The empty diagram (no segments, no points).
    pub fn empty() -> ArcDiagram {
        ArcDiagram { segments: vec![], point_names: vec![], matching: vec![], num_pairs: 0, aliases: vec![] }
    }

    /// Builds a diagram from segment sizes and a pair label per point; checks the matching only.
    pub fn from_parts(seg_sizes: &[usize], matching: Vec<usize>) -> Result<ArcDiagram> {
        let total: usize = seg_sizes.iter().sum();
        if total != matching.len() {
            return Err(Error::Matching(format!("{} points but {} labels", total, matching.len())));
        }
        let mut segments = Vec::new();
        let mut start = 0;
        for (j, &len) in seg_sizes.iter().enumerate() {
            segments.push(Segment { name: format!("Z{}", j + 1), start, len });
            start += len;
        }
        let point_names = (0..total).map(|p| format!("a{}", p + 1)).collect();
        let num_pairs = matching.iter().map(|&m| m + 1).max().unwrap_or(0);
        let d = ArcDiagram { segments, point_names, matching, num_pairs, aliases: vec![] };
        d.check_matching()?;
        Ok(d)
    }

    pub fn num_points(&self) -> usize {
        self.matching.len()
    }

    pub fn segment_of(&self, p: usize) -> usize {
        self.segments.iter().position(|s| p >= s.start && p < s.start + s.len).expect("point out of range")
    }

    /// The two points of a pair, in increasing order.
    pub fn pair_points(&self, i: usize) -> (usize, usize) {
        let v: Vec<usize> = (0..self.num_points()).filter(|&p| self.matching[p] == i).collect();
        (v[0], v[1])
    }

    /// The other point of the pair containing `p`.
    pub fn partner(&self, p: usize) -> usize {
        let (a, b) = self.pair_points(self.matching[p]);
        if a == p {
            b
        } else {
            a
        }
    }

    pub fn same_segment(&self, p: usize, q: usize) -> bool {
        self.segment_of(p) == self.segment_of(q)
    }

    pub fn point_index(&self, name: &str) -> Option<usize> {
        let mut it = self.point_names.iter().enumerate().filter(|(_, n)| n.as_str() == name);
        let first = it.next()?.0;
        if it.next().is_some() {
            return None;
        }
        Some(first)
    }

    pub fn chord(&self, lo: usize, hi: usize) -> Result<Chord> {
        if lo >= hi || hi >= self.num_points() || !self.same_segment(lo, hi) {
            return Err(Error::Invalid(format!("no chord from point {} to point {}", lo + 1, hi + 1)));
        }
        Ok(Chord { lo, hi })
    }

    /// All Reeb chords, ordered by (lo, hi).
    pub fn all_chords(&self) -> Vec<Chord> {
        let mut out = Vec::new();
        for s in &self.segments {
            for lo in s.start..s.start + s.len {
                for hi in lo + 1..s.start + s.len {
                    out.push(Chord { lo, hi });
                }
            }
        }
        out
    }

    fn check_matching(&self) -> Result<()> {
        let mut count = vec![0usize; self.num_pairs];
        for &m in &self.matching {
            if m >= self.num_pairs {
                return Err(Error::Matching(format!("pair {} out of range", m + 1)));
            }
            count[m] += 1;
        }
        for (i, c) in count.iter().enumerate() {
            if *c != 2 {
                return Err(Error::Matching(format!("pair {} has {} points", i + 1, c)));
            }
        }
        Ok(())
    }

    /// Closed components of the surgered 1-manifold, each reported as the sorted list
    /// of pairs whose points bound it. Empty iff the diagram is non-degenerate.
    pub fn closed_components(&self) -> Vec<Vec<usize>> {
        // Interval t of segment j (t = 0..=len) gets id base_j + t.
        let mut base = Vec::new();
        let mut n = 0;
        for s in &self.segments {
            base.push(n);
            n += s.len + 1;
        }
        let mut uf: Vec<usize> = (0..n).collect();
        fn find(uf: &mut [usize], mut x: usize) -> usize {
            while uf[x] != x {
                uf[x] = uf[uf[x]];
                x = uf[x];
            }
            x
        }
        let below = |p: usize| {
            let j = self.segment_of(p);
            base[j] + (p - self.segments[j].start)
        };
        for i in 0..self.num_pairs {
            let (p, q) = self.pair_points(i);
            for (a, b) in [(below(p) + 1, below(q)), (below(p), below(q) + 1)] {
                let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
                uf[ra] = rb;
            }
        }
        let mut open = BTreeSet::new();
        for (j, s) in self.segments.iter().enumerate() {
            open.insert(find(&mut uf, base[j]));
            open.insert(find(&mut uf, base[j] + s.len));
        }
        let mut closed: std::collections::BTreeMap<usize, BTreeSet<usize>> = Default::default();
        for p in 0..self.num_points() {
            let r = find(&mut uf, below(p));
            if !open.contains(&r) {
                closed.entry(r).or_default().insert(self.matching[p]);
            }
            let r = find(&mut uf, below(p) + 1);
            if !open.contains(&r) {
                closed.entry(r).or_default().insert(self.matching[p]);
            }
        }
        closed.into_values().map(|s| s.into_iter().collect()).collect()
    }

    /// Structural and non-degeneracy check.
    pub fn validate(&self) -> Result<()> {
        self.check_matching()?;
        let closed = self.closed_components();
        if closed.is_empty() {
            Ok(())
        } else {
            Err(Error::Degenerate(closed))
        }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Image of point `p` in the reversed diagram.
    pub fn reverse_point(&self, p: usize) -> usize {
        let s = &self.segments[self.segment_of(p)];
        s.start + (s.start + s.len - 1 - p)
    }

    /// The chord `-rho` of the reversed diagram.
    pub fn reverse_chord(&self, c: Chord) -> Chord {
        Chord { lo: self.reverse_point(c.hi), hi: self.reverse_point(c.lo) }
    }

    /// Orientation reversal: same segments, reversed point order in each segment.
    /// Aliases are carried over as `-name`.
    pub fn reverse(&self) -> ArcDiagram {
        let n = self.num_points();
        let mut point_names = vec![String::new(); n];
        let mut matching = vec![0; n];
        for p in 0..n {
            let q = self.reverse_point(p);
            point_names[q] = self.point_names[p].clone();
            matching[q] = self.matching[p];
        }
        let aliases = self
            .aliases
            .iter()
            .map(|a| {
                let name = match a.name.strip_prefix('-') {
                    Some(rest) => rest.to_string(),
                    None => format!("-{}", a.name),
                };
                let mut chords: Vec<Chord> = a.chords.iter().map(|&c| self.reverse_chord(c)).collect();
                chords.sort();
                Alias { name, chords, completion: a.completion.clone() }
            })
            .collect();
        ArcDiagram { segments: self.segments.clone(), point_names, matching, num_pairs: self.num_pairs, aliases }
    }

    /// Disjoint union; points and pairs of `other` are offset.
    pub fn union(&self, other: &ArcDiagram) -> ArcDiagram {
        let po = self.num_points();
        let mo = self.num_pairs;
        let mut segments = self.segments.clone();
        for s in &other.segments {
            segments.push(Segment { name: s.name.clone(), start: s.start + po, len: s.len });
        }
        let mut point_names = self.point_names.clone();
        point_names.extend(other.point_names.iter().cloned());
        let mut matching = self.matching.clone();
        matching.extend(other.matching.iter().map(|m| m + mo));
        let mut aliases = self.aliases.clone();
        for a in &other.aliases {
            aliases.push(Alias {
                name: a.name.clone(),
                chords: a.chords.iter().map(|c| Chord { lo: c.lo + po, hi: c.hi + po }).collect(),
                completion: a.completion.iter().map(|i| i + mo).collect(),
            });
        }
        ArcDiagram { segments, point_names, matching, num_pairs: mo + other.num_pairs, aliases }
    }

    /// Parses the text format: `segment`, `point`, `match`, and `alias` lines.
    ///
    /// `alias <name> <lo>-<hi>[,<lo>-<hi>...] [| <pair> ...]` names `a(chords, s)`;
    /// pairs are numbered from 1 in the order of the `match` lines.
    pub fn parse(text: &str) -> Result<ArcDiagram> {
        let mut segments: Vec<Segment> = Vec::new();
        let mut point_names: Vec<String> = Vec::new();
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        let mut alias_lines: Vec<(usize, String)> = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let col = raw.find(line).unwrap_or(0) + 1;
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks[0] {
                "segment" => {
                    if toks.len() != 2 {
                        return Err(parse_err(ln + 1, col, "expected `segment <name>`"));
                    }
                    segments.push(Segment { name: toks[1].to_string(), start: point_names.len(), len: 0 });
                }
                "point" => {
                    if toks.len() != 2 {
                        return Err(parse_err(ln + 1, col, "expected `point <name>`"));
                    }
                    let Some(seg) = segments.last_mut() else {
                        return Err(parse_err(ln + 1, col, "point before any segment"));
                    };
                    if point_names.iter().any(|n| n == toks[1]) {
                        return Err(parse_err(ln + 1, col, format!("duplicate point `{}`", toks[1])));
                    }
                    seg.len += 1;
                    point_names.push(toks[1].to_string());
                }
                "match" => {
                    if toks.len() != 3 {
                        return Err(parse_err(ln + 1, col, "expected `match <a> <b>`"));
                    }
                    let find = |n: &str| point_names.iter().position(|x| x == n);
                    let (Some(a), Some(b)) = (find(toks[1]), find(toks[2])) else {
                        return Err(parse_err(ln + 1, col, "unknown point in match"));
                    };
                    if a == b {
                        return Err(parse_err(ln + 1, col, "a point cannot match itself"));
                    }
                    pairs.push((a, b));
                }
                "alias" => alias_lines.push((ln + 1, line.to_string())),
                other => return Err(parse_err(ln + 1, col, format!("unknown keyword `{}`", other))),
            }
        }
        let n = point_names.len();
        let mut matching = vec![usize::MAX; n];
        for (i, &(a, b)) in pairs.iter().enumerate() {
            for p in [a, b] {
                if matching[p] != usize::MAX {
                    return Err(Error::Matching(format!("point `{}` matched twice", point_names[p])));
                }
                matching[p] = i;
            }
        }
        if let Some(p) = matching.iter().position(|&m| m == usize::MAX) {
            return Err(Error::Matching(format!("point `{}` is unmatched", point_names[p])));
        }
        let mut d = ArcDiagram { segments, point_names, matching, num_pairs: pairs.len(), aliases: vec![] };
        for (ln, line) in alias_lines {
            let a = d.parse_alias(&line).map_err(|e| parse_err(ln, 1, e.to_string()))?;
            d.aliases.push(a);
        }
        Ok(d)
    }

    /// Parses the body of an `alias` line (keyword included).
    pub fn parse_alias(&self, line: &str) -> Result<Alias> {
        let rest = line.trim().strip_prefix("alias").ok_or_else(|| Error::Invalid("expected alias".into()))?;
        let (lhs, comp) = match rest.split_once('|') {
            Some((l, r)) => (l, r),
            None => (rest, ""),
        };
        let toks: Vec<&str> = lhs.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(Error::Invalid("expected `alias <name> <chords> [| pairs]`".into()));
        }
        let mut chords = Vec::new();
        for c in toks[1].split(',') {
            let (a, b) = c.split_once('-').ok_or_else(|| Error::Invalid(format!("bad chord `{}`", c)))?;
            let pa = self.point_index(a).ok_or_else(|| Error::Invalid(format!("unknown point `{}`", a)))?;
            let pb = self.point_index(b).ok_or_else(|| Error::Invalid(format!("unknown point `{}`", b)))?;
            chords.push(self.chord(pa, pb)?);
        }
        chords.sort();
        let mut completion = BTreeSet::new();
        for t in comp.split_whitespace() {
            let i: usize = t.parse().map_err(|_| Error::Invalid(format!("bad pair `{}`", t)))?;
            if i == 0 || i > self.num_pairs {
                return Err(Error::Invalid(format!("pair {} out of range", i)));
            }
            completion.insert(i - 1);
        }
        Ok(Alias { name: toks[0].to_string(), chords, completion })
    }
}

impl fmt::Display for ArcDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.segments {
            writeln!(f, "segment {}", s.name)?;
            for p in s.start..s.start + s.len {
                writeln!(f, "point {}", self.point_names[p])?;
            }
        }
        for i in 0..self.num_pairs {
            let (a, b) = self.pair_points(i);
            writeln!(f, "match {} {}", self.point_names[a], self.point_names[b])?;
        }
        for a in &self.aliases {
            let chords: Vec<String> = a.chords.iter().map(|c| format!("{}-{}", self.point_names[c.lo], self.point_names[c.hi])).collect();
            write!(f, "alias {} {}", a.name, chords.join(","))?;
            if !a.completion.is_empty() {
                let pairs: Vec<String> = a.completion.iter().map(|i| (i + 1).to_string()).collect();
                write!(f, " | {}", pairs.join(" "))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_pair_on_one_segment_is_degenerate() {
        let d = ArcDiagram::from_parts(&[2], vec![0, 0]).unwrap();
        assert_eq!(d.validate(), Err(Error::Degenerate(vec![vec![0]])));
    }

    #[test]
    fn reverse_maps_chords() {
        let d = ArcDiagram::from_parts(&[3, 1, 1, 1], vec![0, 1, 2, 2, 1, 0]).unwrap();
        let r = d.reverse();
        assert_eq!(r.point_names[0], "a3");
        let c = d.reverse_chord(Chord { lo: 0, hi: 1 });
        assert_eq!((r.point_names[c.lo].as_str(), r.point_names[c.hi].as_str()), ("a2", "a1"));
        assert_eq!(r.reverse(), d);
    }
}
