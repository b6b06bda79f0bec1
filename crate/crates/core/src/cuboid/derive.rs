//! Mechanical derivation of the factor equations: expand a product of
//! elementary symbols, rewrite with cuboid identities, decompose back into
//! elementary symbols, and eliminate previously derived symbols.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::{CuboidError, CuboidSystem, FactorEquation, FactorId};
use crate::exactnum::Rational;
use crate::poly::{Monomial, Polynomial, RewriteRule, RewriteSystem};

/// Oriented consequences of the cuboid equations used to rewrite expansions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleSet {
    /// `x1^2 -> L^2 - x2^2 - x3^2`
    SumX,
    /// `d1^2 -> 2*L^2 - d2^2 - d3^2`
    SumD,
    /// `x_i^2 -> L^2 - d_i^2`
    XRight,
    /// `x_i^2 -> (d_j^2 + d_k^2 - d_i^2)/2`
    XLeft,
    /// `d_i^2 -> x_j^2 + x_k^2`
    DLeft,
    /// `d_i^2 -> L^2 - x_i^2`
    DRight,
}

impl RuleSet {
    fn rules(self) -> Vec<(String, String)> {
        let cyc = [(1, 2, 3), (2, 3, 1), (3, 1, 2)];
        match self {
            RuleSet::SumX => vec![("x1^2".into(), "L^2 - x2^2 - x3^2".into())],
            RuleSet::SumD => vec![("d1^2".into(), "2*L^2 - d2^2 - d3^2".into())],
            _ => cyc
                .iter()
                .map(|&(i, j, k)| match self {
                    RuleSet::XRight => (format!("x{i}^2"), format!("L^2 - d{i}^2")),
                    RuleSet::XLeft => (
                        format!("x{i}^2"),
                        format!("1/2*d{j}^2 + 1/2*d{k}^2 - 1/2*d{i}^2"),
                    ),
                    RuleSet::DLeft => (format!("d{i}^2"), format!("x{j}^2 + x{k}^2")),
                    RuleSet::DRight => (format!("d{i}^2"), format!("L^2 - x{i}^2")),
                    RuleSet::SumX | RuleSet::SumD => unreachable!(),
                })
                .collect(),
        }
    }

    fn system(self, sys: &CuboidSystem) -> RewriteSystem {
        RewriteSystem::new(
            self.rules()
                .into_iter()
                .map(|(lhs, rhs)| {
                    let lhs_p = sys.parse(&lhs).expect("rule text");
                    let m = lhs_p.terms().next().expect("monomial").0.clone();
                    RewriteRule::new(lhs.clone(), m, sys.parse(&rhs).expect("rule text"))
                })
                .collect(),
        )
    }
}

impl fmt::Display for RuleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RuleSet::SumX => "x1^2 -> L^2 - x2^2 - x3^2",
            RuleSet::SumD => "d1^2 -> 2*L^2 - d2^2 - d3^2",
            RuleSet::XRight => "x_i^2 -> L^2 - d_i^2",
            RuleSet::XLeft => "x_i^2 -> (d_j^2 + d_k^2 - d_i^2)/2",
            RuleSet::DLeft => "d_i^2 -> x_j^2 + x_k^2",
            RuleSet::DRight => "d_i^2 -> L^2 - x_i^2",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepKind {
    Expand,
    Rewrite(RuleSet),
    Decompose,
    /// target minus the decomposition
    Relation,
    /// Substitutes each symbol by its solution from the named equation.
    Eliminate(Vec<(String, FactorId)>),
    /// Rewrites a monomial using the named equation solved for it.
    ReduceBy(String, FactorId),
    /// Combination of two equations cancelling a monomial.
    Combine(FactorId, FactorId, String),
    Normalize,
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepKind::Expand => f.write_str("expand elementary symbols"),
            StepKind::Rewrite(r) => write!(f, "rewrite {r}"),
            StepKind::Decompose => f.write_str("decompose into elementary symbols"),
            StepKind::Relation => f.write_str("subtract decomposition from target"),
            StepKind::Eliminate(subs) => {
                let parts: Vec<String> = subs
                    .iter()
                    .map(|(v, id)| format!("{v} using {id}"))
                    .collect();
                write!(f, "eliminate {}", parts.join(", "))
            }
            StepKind::ReduceBy(m, id) => write!(f, "rewrite {m} using {id}"),
            StepKind::Combine(a, b, m) => write!(f, "combine {a} and {b} cancelling {m}"),
            StepKind::Normalize => f.write_str("normalize"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DerivationStep {
    pub kind: StepKind,
    pub poly: Polynomial,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DerivationTrace {
    /// Source expression, or the combined equations.
    pub target: String,
    pub steps: Vec<DerivationStep>,
    pub result: FactorEquation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceExport {
    pub target: String,
    pub steps: Vec<StepExport>,
    pub result_id: FactorId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepExport {
    pub rule: String,
    pub poly: String,
}

/// Recipe for one equation.
#[derive(Clone, Debug)]
pub(crate) enum Recipe {
    Pipeline {
        target: &'static str,
        rules: RuleSet,
        eliminate: &'static [(&'static str, FactorId)],
        reduce_by: Option<(&'static str, FactorId)>,
    },
    Combine {
        left: FactorId,
        right: FactorId,
        cancel: &'static str,
    },
}

const ELIMINATE_ALL: &[(&str, FactorId)] = &[
    ("E02", FactorId::F2),
    ("E20", FactorId::F1),
    ("E03", FactorId::F4),
    ("E30", FactorId::F3),
];

pub(crate) fn recipe(id: FactorId) -> Recipe {
    use FactorId::*;
    match id {
        F1 => Recipe::Pipeline {
            target: "E10^2",
            rules: RuleSet::SumX,
            eliminate: &[],
            reduce_by: None,
        },
        F2 => Recipe::Pipeline {
            target: "E01^2",
            rules: RuleSet::SumD,
            eliminate: &[],
            reduce_by: None,
        },
        F3 => Recipe::Pipeline {
            target: "E10^3",
            rules: RuleSet::XRight,
            eliminate: &[("E02", F2)],
            reduce_by: None,
        },
        F4 => Recipe::Pipeline {
            target: "E01^3",
            rules: RuleSet::DLeft,
            eliminate: &[("E20", F1)],
            reduce_by: None,
        },
        F5 => Recipe::Pipeline {
            target: "E20^2",
            rules: RuleSet::XRight,
            eliminate: &[("E02", F2), ("E20", F1), ("E03", F4)],
            reduce_by: None,
        },
        F6 => Recipe::Pipeline {
            target: "E02^2",
            rules: RuleSet::DRight,
            eliminate: &[("E02", F2), ("E20", F1), ("E30", F3)],
            reduce_by: None,
        },
        L1 => Recipe::Combine {
            left: F5,
            right: F6,
            cancel: "E11^2",
        },
        L2 => Recipe::Combine {
            left: F5,
            right: F6,
            cancel: "E10*E12",
        },
        F7 => Recipe::Pipeline {
            target: "E20*E30",
            rules: RuleSet::XRight,
            eliminate: ELIMINATE_ALL,
            reduce_by: Some(("E11^2", L2)),
        },
        F8 => Recipe::Pipeline {
            target: "E02*E03",
            rules: RuleSet::DRight,
            eliminate: ELIMINATE_ALL,
            reduce_by: Some(("E11^2", L2)),
        },
    }
}

fn monomial(sys: &CuboidSystem, text: &str) -> Monomial {
    let p = sys.parse(text).expect("monomial text");
    let m = p.terms().next().expect("non-zero").0.clone();
    m
}

/// `var = -rest/c` from `rel = c*var + rest` with `c` constant and `rest`
/// free of `var`.
pub(crate) fn solve_for(rel: &Polynomial, var: &str) -> Result<Polynomial, CuboidError> {
    let vt = rel.var_table();
    let v = vt.require(var)?;
    let fail = |reason: &str| CuboidError::NotSolvable {
        var: var.to_string(),
        reason: reason.to_string(),
    };
    let unit = Monomial::var(vt.len(), v, 1);
    let c = rel.coeff(&unit);
    if c.is_zero() {
        return Err(fail("no constant-coefficient linear term"));
    }
    if rel.terms().any(|(m, _)| m.exp(v) > 0 && *m != unit) {
        return Err(fail(
            "appears non-linearly or with a non-constant coefficient",
        ));
    }
    let rest = rel - &Polynomial::term(vt, unit, c.clone());
    Ok(rest.scale(&-c.inv().map_err(crate::poly::PolyError::from)?))
}

struct Ctx<'a> {
    sys: &'a CuboidSystem,
    id: FactorId,
}

impl Ctx<'_> {
    fn fail(&self, step: &StepKind, detail: impl Into<String>) -> CuboidError {
        CuboidError::Pipeline {
            id: self.id,
            step: step.to_string(),
            detail: detail.into(),
        }
    }

    fn source<'b>(
        &self,
        known: &'b BTreeMap<FactorId, Polynomial>,
        step: &StepKind,
        id: FactorId,
    ) -> Result<&'b Polynomial, CuboidError> {
        known
            .get(&id)
            .ok_or_else(|| self.fail(step, format!("{id} has not been derived yet")))
    }

    /// Computes the state after `kind` from the state before it.
    fn apply(
        &self,
        kind: &StepKind,
        target: &Polynomial,
        prev: &Polynomial,
        known: &BTreeMap<FactorId, Polynomial>,
    ) -> Result<Polynomial, CuboidError> {
        let sys = self.sys;
        Ok(match kind {
            StepKind::Expand => sys.multisym().expand_in_matrix_vars(prev)?,
            StepKind::Rewrite(r) => r.system(sys).reduce(prev),
            StepKind::Decompose => {
                let d = sys
                    .multisym()
                    .decompose(prev)
                    .map_err(|e| self.fail(kind, e.to_string()))?;
                if sys.multisym().expand_in_matrix_vars(&d)? != *prev {
                    return Err(self.fail(kind, "decomposition does not expand back to its input"));
                }
                d
            }
            StepKind::Relation => target - prev,
            StepKind::Eliminate(subs) => {
                let mut bindings = BTreeMap::new();
                for (var, id) in subs {
                    let rel = self.source(known, kind, *id)?;
                    let value = solve_for(rel, var)?;
                    bindings.insert(sys.var_table().require(var)?, value);
                }
                prev.substitute_indices(&bindings)
            }
            StepKind::ReduceBy(m, id) => {
                let rel = self.source(known, kind, *id)?;
                let rule = RewriteRule::from_relation(m.clone(), rel, &monomial(sys, m))?;
                RewriteSystem::new(vec![rule]).reduce(prev)
            }
            StepKind::Combine(a, b, m) => {
                let (pa, pb) = (self.source(known, kind, *a)?, self.source(known, kind, *b)?);
                let mono = monomial(sys, m);
                let (ca, cb) = (pa.coeff(&mono), pb.coeff(&mono));
                if ca.is_zero() && cb.is_zero() {
                    return Err(self.fail(kind, format!("neither equation contains {m}")));
                }
                &pa.scale(&cb) - &pb.scale(&ca)
            }
            StepKind::Normalize => sys.normalize(prev),
        })
    }
}

fn plan(recipe: &Recipe) -> (String, Vec<StepKind>) {
    match recipe {
        Recipe::Pipeline {
            target,
            rules,
            eliminate,
            reduce_by,
        } => {
            let mut steps = vec![
                StepKind::Expand,
                StepKind::Rewrite(*rules),
                StepKind::Decompose,
                StepKind::Relation,
            ];
            if !eliminate.is_empty() {
                steps.push(StepKind::Eliminate(
                    eliminate
                        .iter()
                        .map(|(v, id)| (v.to_string(), *id))
                        .collect(),
                ));
            }
            if let Some((m, id)) = reduce_by {
                steps.push(StepKind::ReduceBy(m.to_string(), *id));
            }
            steps.push(StepKind::Normalize);
            (target.to_string(), steps)
        }
        Recipe::Combine {
            left,
            right,
            cancel,
        } => (
            format!("{left}, {right}"),
            vec![
                StepKind::Combine(*left, *right, cancel.to_string()),
                StepKind::Normalize,
            ],
        ),
    }
}

fn target_poly(sys: &CuboidSystem, target: &str) -> Polynomial {
    // combination targets name equations, not expressions
    sys.parse(target)
        .unwrap_or_else(|_| Polynomial::zero(sys.var_table()))
}

pub(crate) fn run(
    sys: &CuboidSystem,
    id: FactorId,
    target: &str,
    kinds: Vec<StepKind>,
    known: &BTreeMap<FactorId, Polynomial>,
) -> Result<DerivationTrace, CuboidError> {
    let ctx = Ctx { sys, id };
    let t = target_poly(sys, target);
    let mut state = t.clone();
    let mut steps = Vec::with_capacity(kinds.len());
    for kind in kinds {
        state = ctx.apply(&kind, &t, &state, known)?;
        steps.push(DerivationStep {
            kind,
            poly: state.clone(),
        });
    }
    Ok(DerivationTrace {
        target: target.to_string(),
        steps,
        result: FactorEquation { id, lhs: state },
    })
}

pub(crate) fn derive_one(
    sys: &CuboidSystem,
    id: FactorId,
    known: &BTreeMap<FactorId, Polynomial>,
) -> Result<DerivationTrace, CuboidError> {
    let (target, kinds) = plan(&recipe(id));
    run(sys, id, &target, kinds, known)
}

/// Derives all ten equations in catalog order; later recipes use earlier results.
pub(crate) fn derive_all(sys: &CuboidSystem) -> Result<Vec<DerivationTrace>, CuboidError> {
    let mut known = BTreeMap::new();
    let mut out = Vec::new();
    for id in FactorId::ALL {
        let trace = derive_one(sys, id, &known)?;
        known.insert(id, trace.result.lhs.clone());
        out.push(trace);
    }
    Ok(out)
}

impl DerivationTrace {
    /// Recomputes every step from the target and checks each recorded state.
    /// `known` supplies the equations used by eliminations.
    pub fn replay(
        &self,
        sys: &CuboidSystem,
        known: &BTreeMap<FactorId, Polynomial>,
    ) -> Result<bool, CuboidError> {
        let ctx = Ctx {
            sys,
            id: self.result.id,
        };
        let t = target_poly(sys, &self.target);
        let mut state = t.clone();
        for step in &self.steps {
            state = ctx.apply(&step.kind, &t, &state, known)?;
            if state != step.poly {
                return Ok(false);
            }
        }
        Ok(state == self.result.lhs)
    }

    pub fn export(&self, sys: &CuboidSystem) -> TraceExport {
        TraceExport {
            target: self.target.clone(),
            steps: self
                .steps
                .iter()
                .map(|s| StepExport {
                    rule: s.kind.to_string(),
                    poly: sys.format(&s.poly),
                })
                .collect(),
            result_id: self.result.id,
        }
    }
}

/// Main-branch result and alternative-branch result for one equation.
pub(crate) fn branch_pair(
    sys: &CuboidSystem,
    id: FactorId,
    known: &BTreeMap<FactorId, Polynomial>,
    skip_elimination: bool,
) -> Result<(Polynomial, Polynomial), CuboidError> {
    let main = derive_one(sys, id, known)?.result.lhs;
    let (target, alt_rules) = match id {
        FactorId::F3 => ("E10^3", RuleSet::XLeft),
        FactorId::F4 => ("E01^3", RuleSet::DRight),
        _ => {
            return Err(CuboidError::UnknownId(format!(
                "{id} has no alternative branch"
            )))
        }
    };
    let (_, kinds) = plan(&recipe(id));
    let kinds = kinds
        .into_iter()
        .filter(|k| !(skip_elimination && matches!(k, StepKind::Eliminate(_))))
        .map(|k| match k {
            StepKind::Rewrite(_) => StepKind::Rewrite(alt_rules),
            k => k,
        })
        .collect();
    let alt = run(sys, id, target, kinds, known)?.result.lhs;
    Ok((main, alt))
}

pub(crate) fn branch_equivalence(sys: &CuboidSystem) -> Result<bool, CuboidError> {
    let mut known = BTreeMap::new();
    for id in [FactorId::F1, FactorId::F2] {
        known.insert(id, derive_one(sys, id, &known)?.result.lhs);
    }
    let mut ok = true;
    for id in [FactorId::F3, FactorId::F4] {
        let (a, b) = branch_pair(sys, id, &known, false)?;
        ok &= a == b;
    }
    Ok(ok)
}

/// Rational `(a, b)` with `target = a*left + b*right`, if one exists.
pub fn linear_combination(
    left: &Polynomial,
    right: &Polynomial,
    target: &Polynomial,
) -> Option<(Rational, Rational)> {
    let mut monos: Vec<&Monomial> = left
        .terms()
        .chain(right.terms())
        .chain(target.terms())
        .map(|(m, _)| m)
        .collect();
    monos.sort();
    monos.dedup();
    let rows = monos
        .iter()
        .map(|m| vec![left.coeff(m), right.coeff(m), target.coeff(m)])
        .collect();
    let x = crate::linalg::solve_augmented(rows, 2)?;
    let (a, b) = (x[0].clone(), x[1].clone());
    (&(&left.scale(&a) + &right.scale(&b)) == target).then_some((a, b))
}
