//! Text export and import of structures.
//!
//! ```text
//! structure BSD(M1)
//! left
//! segment Z1
//! ...
//! end
//! right
//! end
//! gen x I13 I()
//! m1 y | -> r''2 x
//! m2 y | -r'2 -> I() x
//! ```
//!
//! Operation lines read `m<k> <gen> | <inputs ...> -> <output> <gen>`, one
//! term per line. Blank lines and lines starting with `#` are ignored.

use crate::arc_diagram::ArcDiagram;
use crate::error::{parse_err, Result};
use crate::homalg::{trivial_algebra, Structure};
use crate::strands::{idem_name, parse_idem_name, Algebra};
use std::fmt::Write;
use std::sync::Arc;

/// Serializes a structure; the output is deterministic.
pub fn export(st: &Structure) -> String {
    let mut s = String::new();
    writeln!(s, "structure {}", st.name).expect("write to string");
    for (label, alg) in [("left", &st.left), ("right", &st.right)] {
        writeln!(s, "{}", label).expect("write to string");
        s.push_str(&alg.z.to_string());
        writeln!(s, "end").expect("write to string");
    }
    for g in &st.gens {
        writeln!(s, "gen {} {} {}", g.name, idem_name(&g.left), idem_name(&g.right)).expect("write to string");
    }
    for ((x, inputs), terms) in &st.ops {
        let ins: Vec<String> = inputs.iter().map(|&b| st.right.name(b)).collect();
        for &(a, y) in terms {
            let mut line = format!("m{} {} |", inputs.len() + 1, st.gens[*x].name);
            for i in &ins {
                line.push(' ');
                line.push_str(i);
            }
            writeln!(s, "{} -> {} {}", line, st.left.name(a), st.gens[y].name).expect("write to string");
        }
    }
    s
}

/// Splits on whitespace, keeping parenthesized groups together.
fn tokens(line: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0i32;
    for ch in line.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if ch.is_whitespace() && depth <= 0 {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
        } else {
            cur.push(ch);
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn algebra(text: &str, line: usize) -> Result<Arc<Algebra>> {
    if text.trim().is_empty() {
        return Ok(trivial_algebra());
    }
    let z = ArcDiagram::parse(text).map_err(|e| parse_err(line, 1, e.to_string()))?;
    if z.num_points() == 0 {
        Ok(trivial_algebra())
    } else {
        Algebra::new(&z)
    }
}

/// Parses the output of [`export`].
pub fn import(text: &str) -> Result<Structure> {
    let lines: Vec<&str> = text.lines().collect();
    let mut name = String::new();
    let mut blocks: [Option<Arc<Algebra>>; 2] = [None, None];
    let mut st: Option<Structure> = None;
    let mut i = 0;
    while i < lines.len() {
        let ln = i + 1;
        let line = lines[i].trim();
        i += 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(n) = line.strip_prefix("structure ") {
            name = n.trim().to_string();
            continue;
        }
        if line == "left" || line == "right" {
            let start = i;
            while i < lines.len() && lines[i].trim() != "end" {
                i += 1;
            }
            if i == lines.len() {
                return Err(parse_err(ln, 1, format!("`{}` block has no `end`", line)));
            }
            let alg = algebra(&lines[start..i].join("\n"), start + 1)?;
            i += 1;
            blocks[usize::from(line == "right")] = Some(alg);
            continue;
        }
        let st = st.get_or_insert_with(|| {
            let [l, r] = &blocks;
            Structure::new(name.clone(), l.clone().unwrap_or_else(trivial_algebra), r.clone().unwrap_or_else(trivial_algebra))
        });
        let toks = tokens(line);
        if toks[0] == "gen" {
            if toks.len() != 4 {
                return Err(parse_err(ln, 1, "expected `gen <name> <left idempotent> <right idempotent>`"));
            }
            let idem = |t: &str, alg: &Algebra| {
                parse_idem_name(t)
                    .filter(|s| s.iter().all(|&p| p < alg.z.num_pairs))
                    .ok_or_else(|| parse_err(ln, 1, format!("bad idempotent `{}`", t)))
            };
            let (l, r) = (idem(&toks[2], &st.left)?, idem(&toks[3], &st.right)?);
            if st.gen_index(&toks[1]).is_some() {
                return Err(parse_err(ln, 1, format!("duplicate generator `{}`", toks[1])));
            }
            st.add_gen(toks[1].clone(), l, r);
            continue;
        }
        let k: usize = toks[0]
            .strip_prefix('m')
            .and_then(|k| k.parse().ok())
            .filter(|&k| k >= 1)
            .ok_or_else(|| parse_err(ln, 1, format!("unknown line `{}`", line)))?;
        let bar = toks.iter().position(|t| t == "|");
        let arrow = toks.iter().position(|t| t == "->");
        let (Some(bar), Some(arrow)) = (bar, arrow) else {
            return Err(parse_err(ln, 1, "expected `m<k> <gen> | <inputs> -> <output> <gen>`"));
        };
        if bar != 2 || arrow < bar || arrow + 3 != toks.len() || arrow - bar - 1 != k - 1 {
            return Err(parse_err(ln, 1, "expected `m<k> <gen> | <inputs> -> <output> <gen>` with k-1 inputs"));
        }
        let gen = |t: &str| st.gen_index(t).ok_or_else(|| parse_err(ln, 1, format!("unknown generator `{}`", t)));
        let x = gen(&toks[1])?;
        let y = gen(&toks[arrow + 2])?;
        let mut inputs = Vec::new();
        for t in &toks[bar + 1..arrow] {
            inputs.push(st.right.parse_name(t).map_err(|e| parse_err(ln, 1, e.to_string()))?);
        }
        let a = st.left.parse_name(&toks[arrow + 1]).map_err(|e| parse_err(ln, 1, e.to_string()))?;
        st.add_term(x, inputs, a, y);
    }
    Ok(st.unwrap_or_else(|| {
        let [l, r] = blocks;
        Structure::new(name, l.unwrap_or_else(trivial_algebra), r.unwrap_or_else(trivial_algebra))
    }))
}
