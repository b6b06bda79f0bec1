use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use super::{Monomial, PolyError, VarTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockKind {
    Lex,
    /// Weighted degree first, then reverse lexicographic tie-break.
    Grevlex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Block {
    kind: BlockKind,
    /// Variable indices, most significant first.
    vars: Vec<usize>,
    weights: Vec<u32>,
}

impl Block {
    fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self.kind {
            BlockKind::Lex => {
                for &v in &self.vars {
                    match a.exp(v).cmp(&b.exp(v)) {
                        Ordering::Equal => {}
                        o => return o,
                    }
                }
                Ordering::Equal
            }
            BlockKind::Grevlex => {
                let wd = |m: &Monomial| -> u64 {
                    self.vars
                        .iter()
                        .zip(&self.weights)
                        .map(|(&v, &w)| m.exp(v) as u64 * w as u64)
                        .sum()
                };
                match wd(a).cmp(&wd(b)) {
                    Ordering::Equal => {}
                    o => return o,
                }
                for &v in self.vars.iter().rev() {
                    match a.exp(v).cmp(&b.exp(v)) {
                        Ordering::Equal => {}
                        o => return o.reverse(),
                    }
                }
                Ordering::Equal
            }
        }
    }
}

/// A monomial order: a sequence of blocks compared in turn.
///
/// Plain lex and grevlex are single-block orders. Block orders put every
/// variable of an earlier block above all of a later one, which makes them
/// elimination orders for the leading blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialOrder {
    nvars: usize,
    blocks: Vec<Block>,
}

impl MonomialOrder {
    /// Lexicographic with the table's variable order.
    pub fn lex(vt: &VarTable) -> Self {
        Self::single(vt, BlockKind::Lex, (0..vt.len()).collect())
    }

    /// Weighted graded reverse lexicographic with the table's variable order.
    pub fn grevlex(vt: &VarTable) -> Self {
        Self::single(vt, BlockKind::Grevlex, (0..vt.len()).collect())
    }

    /// Single-block order ranking `first` (in that order) above the remaining
    /// variables, which keep table order.
    pub fn ranked(vt: &VarTable, kind: BlockKind, first: &[&str]) -> Result<Self, PolyError> {
        let mut vars = Vec::with_capacity(vt.len());
        for n in first {
            let i = vt.require(n)?;
            if vars.contains(&i) {
                return Err(PolyError::Order(format!("`{n}` ranked twice")));
            }
            vars.push(i);
        }
        let rest: Vec<usize> = (0..vt.len()).filter(|i| !vars.contains(i)).collect();
        vars.extend(rest);
        Ok(Self::single(vt, kind, vars))
    }

    /// Block order. Variables not mentioned form a trailing grevlex block.
    pub fn block(vt: &VarTable, blocks: &[(BlockKind, Vec<&str>)]) -> Result<Self, PolyError> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for (kind, names) in blocks {
            let mut vars = Vec::new();
            for n in names {
                let i = vt.require(n)?;
                if !seen.insert(i) {
                    return Err(PolyError::Order(format!("`{n}` appears in two blocks")));
                }
                vars.push(i);
            }
            if !vars.is_empty() {
                out.push(Self::make_block(vt, *kind, vars));
            }
        }
        let rest: Vec<usize> = (0..vt.len()).filter(|i| !seen.contains(i)).collect();
        if !rest.is_empty() {
            out.push(Self::make_block(vt, BlockKind::Grevlex, rest));
        }
        Ok(MonomialOrder {
            nvars: vt.len(),
            blocks: out,
        })
    }

    /// Grevlex block on `eliminate` above a grevlex block on the rest.
    pub fn elimination(vt: &VarTable, eliminate: &[&str]) -> Result<Self, PolyError> {
        Self::block(vt, &[(BlockKind::Grevlex, eliminate.to_vec())])
    }

    fn make_block(vt: &VarTable, kind: BlockKind, vars: Vec<usize>) -> Block {
        let weights = vars.iter().map(|&v| vt.weight(v)).collect();
        Block {
            kind,
            vars,
            weights,
        }
    }

    fn single(vt: &VarTable, kind: BlockKind, vars: Vec<usize>) -> Self {
        MonomialOrder {
            nvars: vt.len(),
            blocks: vec![Self::make_block(vt, kind, vars)],
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        for blk in &self.blocks {
            match blk.cmp(a, b) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        Ordering::Equal
    }

    /// A key whose lexicographic order agrees with [`cmp`](Self::cmp), for
    /// use in ordered containers.
    pub fn sort_key(&self, m: &Monomial) -> Vec<u64> {
        let mut key = Vec::with_capacity(self.nvars + self.blocks.len());
        for blk in &self.blocks {
            match blk.kind {
                BlockKind::Lex => key.extend(blk.vars.iter().map(|&v| m.exp(v) as u64)),
                BlockKind::Grevlex => {
                    let wd = blk
                        .vars
                        .iter()
                        .zip(&blk.weights)
                        .map(|(&v, &w)| m.exp(v) as u64 * w as u64)
                        .sum();
                    key.push(wd);
                    key.extend(blk.vars.iter().rev().map(|&v| u64::MAX - m.exp(v) as u64));
                }
            }
        }
        key
    }

    /// Variables from most to least significant.
    pub fn ranking(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().flat_map(|b| b.vars.iter().copied())
    }

    /// True when every monomial involving a variable of `vars` is larger than
    /// every monomial free of them.
    pub fn eliminates(&self, vars: &BTreeSet<usize>) -> bool {
        if vars.is_empty() {
            return true;
        }
        let mut acc = BTreeSet::new();
        for blk in &self.blocks {
            let steps: Vec<Vec<usize>> = match blk.kind {
                BlockKind::Lex => blk.vars.iter().map(|&v| vec![v]).collect(),
                BlockKind::Grevlex => vec![blk.vars.clone()],
            };
            for step in steps {
                acc.extend(step);
                if !acc.is_subset(vars) {
                    return false;
                }
                if acc == *vars {
                    return true;
                }
            }
        }
        false
    }

    pub fn describe(&self, vt: &VarTable) -> String {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                let names: Vec<&str> = b.vars.iter().map(|&v| vt.name(v)).collect();
                let k = match b.kind {
                    BlockKind::Lex => "lex",
                    BlockKind::Grevlex => "grevlex",
                };
                format!("{k}({})", names.join(","))
            })
            .collect();
        if parts.len() == 1 {
            parts.into_iter().next().unwrap()
        } else {
            format!("block({})", parts.join(" > "))
        }
    }
}

impl fmt::Display for BlockKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BlockKind::Lex => "lex",
            BlockKind::Grevlex => "grevlex",
        })
    }
}
