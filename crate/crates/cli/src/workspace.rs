//! Loaded diagrams and computed structures, keyed by path or operand string.

use anyhow::{bail, Context, Result};
use bsfh_core::homalg::Structure;
use bsfh_core::invariants::{self, Invariant};
use bsfh_core::{ops, HeegaardDiagram};
use clap::ValueEnum;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::rc::Rc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum InvariantKind {
    Bsd,
    Bsa,
    Bsda,
    Sfc,
}

impl InvariantKind {
    pub fn parse(s: &str) -> Result<InvariantKind> {
        <InvariantKind as ValueEnum>::from_str(s, false).map_err(|_| anyhow::anyhow!("unknown invariant `{}`", s))
    }
}

#[derive(Default)]
pub struct Workspace {
    diagrams: BTreeMap<PathBuf, Rc<HeegaardDiagram>>,
    invariants: BTreeMap<(InvariantKind, PathBuf, Option<String>), Rc<Invariant>>,
}

impl Workspace {
    pub fn diagram(&mut self, path: &Path) -> Result<Rc<HeegaardDiagram>> {
        if let Some(h) = self.diagrams.get(path) {
            return Ok(h.clone());
        }
        let h = Rc::new(HeegaardDiagram::load(path).with_context(|| format!("loading {}", path.display()))?);
        self.diagrams.insert(path.to_path_buf(), h.clone());
        Ok(h)
    }

    pub fn invariant(&mut self, kind: InvariantKind, path: &Path, spinc: Option<&str>) -> Result<Rc<Invariant>> {
        let key = (kind, path.to_path_buf(), spinc.map(str::to_string));
        if let Some(i) = self.invariants.get(&key) {
            return Ok(i.clone());
        }
        let h = self.diagram(path)?;
        let class = spinc.map(|k| h.select_spinc(k)).transpose()?;
        let f = match kind {
            InvariantKind::Bsd => invariants::bsd,
            InvariantKind::Bsa => invariants::bsa,
            InvariantKind::Bsda => invariants::bsda,
            InvariantKind::Sfc => invariants::sfc,
        };
        let inv = Rc::new(f(&h, class.as_ref())?);
        self.invariants.insert(key, inv.clone());
        Ok(inv)
    }

    /// A structure from an `.ops` file or from `<kind>:<diagram>[@<spinc>]`.
    pub fn structure(&mut self, operand: &str) -> Result<Structure> {
        if operand.ends_with(".ops") {
            let text = std::fs::read_to_string(operand).with_context(|| format!("reading {}", operand))?;
            return Ok(ops::import(&text)?);
        }
        let Some((kind, rest)) = operand.split_once(':') else {
            bail!("expected an .ops file or `<kind>:<diagram>[@<spinc>]`, got `{}`", operand);
        };
        let (path, spinc) = match rest.rsplit_once('@') {
            Some((p, s)) => (p, Some(s)),
            None => (rest, None),
        };
        Ok(self.invariant(InvariantKind::parse(kind)?, Path::new(path), spinc)?.structure.clone())
    }
}
