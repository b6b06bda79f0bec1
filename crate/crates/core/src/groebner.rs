//! Buchberger's algorithm over ℚ, normal forms, membership and elimination.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::exactnum::Rational;
use crate::poly::{Monomial, MonomialOrder, PolyError, Polynomial, VarTable};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GroebnerError {
    #[error("zero polynomial where a non-zero one is required")]
    ZeroPolynomial,
    #[error("work budget exceeded after {pairs} pair reductions (basis size {basis_size})")]
    BudgetExceeded { pairs: u64, basis_size: usize },
    #[error("the monomial order does not eliminate {0}")]
    OrderDoesNotEliminate(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// An ideal given by generators, together with the order used to compute it.
#[derive(Clone, Debug)]
pub struct Ideal {
    generators: Vec<Polynomial>,
    order: MonomialOrder,
    vt: Arc<VarTable>,
}

impl Ideal {
    pub fn new(
        vt: &Arc<VarTable>,
        generators: Vec<Polynomial>,
        order: MonomialOrder,
    ) -> Result<Self, GroebnerError> {
        for g in &generators {
            if g.is_zero() {
                return Err(GroebnerError::ZeroPolynomial);
            }
            if !Arc::ptr_eq(g.var_table(), vt) && **g.var_table() != **vt {
                return Err(PolyError::VarTableMismatch.into());
            }
        }
        if order.nvars() != vt.len() {
            return Err(PolyError::Order(
                "order and table disagree on the number of variables".into(),
            )
            .into());
        }
        Ok(Ideal {
            generators,
            order,
            vt: vt.clone(),
        })
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn var_table(&self) -> &Arc<VarTable> {
        &self.vt
    }
}

/// Counters from a Buchberger run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RunStats {
    pub pairs_reduced: u64,
    pub pairs_pruned: u64,
    pub zero_reductions: u64,
}

#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    pub elements: Vec<Polynomial>,
    pub order: MonomialOrder,
    pub reduced: bool,
    pub stats: RunStats,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisExport {
    pub order: String,
    pub elements: Vec<String>,
}

impl GroebnerBasis {
    pub fn normal_form(&self, p: &Polynomial) -> Polynomial {
        normal_form(p, &self.elements, &self.order)
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.normal_form(p).is_zero()
    }

    /// Checks that every S-polynomial reduces to zero.
    pub fn satisfies_criterion(&self) -> bool {
        is_groebner_basis(&self.elements, &self.order)
    }

    /// Monic elements whose terms avoid every other element's leading term.
    pub fn is_reduced(&self) -> bool {
        let lts: Vec<&Monomial> = self
            .elements
            .iter()
            .filter_map(|g| g.leading_term(&self.order))
            .map(|t| t.0)
            .collect();
        self.elements.iter().enumerate().all(|(i, g)| {
            g.leading_term(&self.order).is_some_and(|(_, c)| c.is_one())
                && g.terms().all(|(m, _)| {
                    lts.iter()
                        .enumerate()
                        .all(|(j, lt)| j == i || !lt.divides(m))
                })
        })
    }

    pub fn export(&self) -> BasisExport {
        let vt = self.elements.first().map(|g| g.var_table().clone());
        BasisExport {
            order: vt.map(|vt| self.order.describe(&vt)).unwrap_or_default(),
            elements: self
                .elements
                .iter()
                .map(|g| g.format(&self.order))
                .collect(),
        }
    }
}

fn leading(p: &Polynomial, order: &MonomialOrder) -> Result<(Monomial, Rational), GroebnerError> {
    p.leading_term(order)
        .map(|(m, c)| (m.clone(), c.clone()))
        .ok_or(GroebnerError::ZeroPolynomial)
}

pub fn s_polynomial(
    f: &Polynomial,
    g: &Polynomial,
    order: &MonomialOrder,
) -> Result<Polynomial, GroebnerError> {
    if !f.same_table(g) {
        return Err(PolyError::VarTableMismatch.into());
    }
    let (mf, cf) = leading(f, order)?;
    let (mg, cg) = leading(g, order)?;
    let l = mf.lcm(&mg);
    let uf = mf.quotient_of(&l).expect("lcm is a multiple");
    let ug = mg.quotient_of(&l).expect("lcm is a multiple");
    let a = f.mul_monomial(&uf, &cf.inv().map_err(PolyError::from)?);
    let b = g.mul_monomial(&ug, &cg.inv().map_err(PolyError::from)?);
    Ok(&a - &b)
}

/// Result of multivariate division: `p = sum quotients[i] * basis[i] + remainder`.
#[derive(Clone, Debug)]
pub struct Division {
    pub quotients: Vec<Polynomial>,
    pub remainder: Polynomial,
    /// Number of reduction steps charged to each divisor.
    pub steps: Vec<usize>,
}

/// Fully reduced remainder of `p` on division by `basis`. Zero elements of
/// `basis` are ignored. Divisors are tried in list order, largest term first.
pub fn normal_form(p: &Polynomial, basis: &[Polynomial], order: &MonomialOrder) -> Polynomial {
    reduce_impl(p, basis, order, false).remainder
}

/// Like [`normal_form`], also recording quotients.
pub fn divide(p: &Polynomial, basis: &[Polynomial], order: &MonomialOrder) -> Division {
    reduce_impl(p, basis, order, true)
}

fn reduce_impl(
    p: &Polynomial,
    basis: &[Polynomial],
    order: &MonomialOrder,
    record: bool,
) -> Division {
    struct Divisor {
        index: usize,
        lt: Monomial,
        inv_lc: Rational,
        tail: Vec<(Monomial, Rational)>,
    }
    let divisors: Vec<Divisor> = basis
        .iter()
        .enumerate()
        .filter_map(|(index, g)| {
            let (lt, lc) = g.leading_term(order)?;
            let tail = g
                .terms()
                .filter(|(m, _)| *m != lt)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect();
            Some(Divisor {
                index,
                lt: lt.clone(),
                inv_lc: lc.inv().expect("stored coefficients are non-zero"),
                tail,
            })
        })
        .collect();

    let mut quotients: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); basis.len()];
    let mut steps = vec![0; basis.len()];
    let mut work: BTreeMap<Vec<u64>, (Monomial, Rational)> = p
        .terms()
        .map(|(m, c)| (order.sort_key(m), (m.clone(), c.clone())))
        .collect();
    let mut rem = Vec::new();
    while let Some((_, (m, c))) = work.pop_last() {
        let Some(d) = divisors.iter().find(|d| d.lt.divides(&m)) else {
            rem.push((m, c));
            continue;
        };
        let q = d.lt.quotient_of(&m).expect("divides");
        let f = &c * &d.inv_lc;
        for (t, a) in &d.tail {
            let tm = t.mul(&q);
            let delta = -(&f * a);
            let key = order.sort_key(&tm);
            match work.get_mut(&key) {
                Some(slot) => {
                    slot.1 += &delta;
                    if slot.1.is_zero() {
                        work.remove(&key);
                    }
                }
                None => {
                    work.insert(key, (tm, delta));
                }
            }
        }
        steps[d.index] += 1;
        if record {
            quotients[d.index].push((q, f));
        }
    }
    let vt = p.var_table();
    Division {
        quotients: quotients
            .into_iter()
            .map(|q| Polynomial::from_terms(vt, q))
            .collect(),
        remainder: Polynomial::from_terms(vt, rem),
        steps,
    }
}

pub fn is_groebner_basis(elements: &[Polynomial], order: &MonomialOrder) -> bool {
    for i in 0..elements.len() {
        for j in i + 1..elements.len() {
            match s_polynomial(&elements[i], &elements[j], order) {
                Ok(s) if normal_form(&s, elements, order).is_zero() => {}
                _ => return false,
            }
        }
    }
    true
}

pub fn buchberger(ideal: &Ideal) -> Result<GroebnerBasis, GroebnerError> {
    buchberger_bounded(ideal, DEFAULT_BUDGET)
}

/// Buchberger with the normal selection strategy, the coprime and chain
/// criteria, and a cap on the number of pair reductions.
pub fn buchberger_bounded(ideal: &Ideal, budget: u64) -> Result<GroebnerBasis, GroebnerError> {
    let order = &ideal.order;
    let mut g: Vec<Polynomial> = Vec::new();
    let mut lts: Vec<Monomial> = Vec::new();
    let mut stats = RunStats::default();

    let mut pending: BTreeSet<(u32, usize, usize)> = BTreeSet::new();
    let mut live: BTreeSet<(usize, usize)> = BTreeSet::new();
    let add = |h: Polynomial,
               g: &mut Vec<Polynomial>,
               lts: &mut Vec<Monomial>,
               pending: &mut BTreeSet<(u32, usize, usize)>,
               live: &mut BTreeSet<(usize, usize)>| {
        let h = h.monic(order);
        let lt = h.leading_term(order).expect("non-zero").0.clone();
        let j = g.len();
        for (i, lti) in lts.iter().enumerate() {
            pending.insert((lti.lcm(&lt).degree(), i, j));
            live.insert((i, j));
        }
        g.push(h);
        lts.push(lt);
    };

    for f in &ideal.generators {
        let r = normal_form(f, &g, order);
        if !r.is_zero() {
            add(r, &mut g, &mut lts, &mut pending, &mut live);
        }
    }

    while let Some(entry) = pending.pop_first() {
        let (_, i, j) = entry;
        live.remove(&(i, j));
        if lts[i].coprime(&lts[j]) || chain_criterion(i, j, &lts, &live) {
            stats.pairs_pruned += 1;
            continue;
        }
        if stats.pairs_reduced >= budget {
            return Err(GroebnerError::BudgetExceeded {
                pairs: stats.pairs_reduced,
                basis_size: g.len(),
            });
        }
        stats.pairs_reduced += 1;
        let s = s_polynomial(&g[i], &g[j], order)?;
        let r = normal_form(&s, &g, order);
        if r.is_zero() {
            stats.zero_reductions += 1;
        } else {
            add(r, &mut g, &mut lts, &mut pending, &mut live);
        }
    }

    let elements = reduce_basis(g, order);
    Ok(GroebnerBasis {
        elements,
        order: order.clone(),
        reduced: true,
        stats,
    })
}

fn pair(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Some third element's leading term divides the lcm, and both of its pairs
/// with `i` and `j` are already settled.
fn chain_criterion(i: usize, j: usize, lts: &[Monomial], live: &BTreeSet<(usize, usize)>) -> bool {
    let l = lts[i].lcm(&lts[j]);
    (0..lts.len()).any(|k| {
        k != i
            && k != j
            && lts[k].divides(&l)
            && !live.contains(&pair(i, k))
            && !live.contains(&pair(j, k))
    })
}

/// Minimal, interreduced, monic, sorted by descending leading term.
fn reduce_basis(g: Vec<Polynomial>, order: &MonomialOrder) -> Vec<Polynomial> {
    let lt = |p: &Polynomial| p.leading_term(order).expect("non-zero").0.clone();
    let mut minimal: Vec<Polynomial> = Vec::new();
    for (i, p) in g.iter().enumerate() {
        let m = lt(p);
        let redundant = g.iter().enumerate().any(|(k, q)| {
            let mq = lt(q);
            k != i && mq.divides(&m) && (mq != m || k < i)
        });
        if !redundant {
            minimal.push(p.clone());
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Polynomial> = minimal
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i)
            .map(|(_, q)| q.clone())
            .collect();
        out.push(normal_form(&minimal[i], &others, order).monic(order));
    }
    out.sort_by(|a, b| order.cmp(&lt(b), &lt(a)));
    out
}

pub fn ideal_membership(p: &Polynomial, ideal: &Ideal) -> Result<bool, GroebnerError> {
    Ok(buchberger(ideal)?.contains(p))
}

/// Elements of the reduced basis involving only `keep` variables. The
/// ideal's order must eliminate every other variable.
pub fn elimination_ideal(
    ideal: &Ideal,
    keep: &BTreeSet<usize>,
) -> Result<Vec<Polynomial>, GroebnerError> {
    elimination_ideal_bounded(ideal, keep, DEFAULT_BUDGET)
}

pub fn elimination_ideal_bounded(
    ideal: &Ideal,
    keep: &BTreeSet<usize>,
    budget: u64,
) -> Result<Vec<Polynomial>, GroebnerError> {
    let drop: BTreeSet<usize> = (0..ideal.vt.len()).filter(|i| !keep.contains(i)).collect();
    if !ideal.order.eliminates(&drop) {
        let names: Vec<&str> = drop.iter().map(|&i| ideal.vt.name(i)).collect();
        return Err(GroebnerError::OrderDoesNotEliminate(names.join(",")));
    }
    let gb = buchberger_bounded(ideal, budget)?;
    Ok(gb
        .elements
        .into_iter()
        .filter(|g| g.variables().iter().all(|v| keep.contains(v)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::BlockKind;
    use proptest::prelude::*;

    fn xyz() -> Arc<VarTable> {
        Arc::new(VarTable::plain(&["x", "y", "z"]).unwrap())
    }

    fn p(vt: &Arc<VarTable>, s: &str) -> Polynomial {
        Polynomial::parse(s, vt).unwrap()
    }

    fn ideal(vt: &Arc<VarTable>, gens: &[&str], order: MonomialOrder) -> Ideal {
        Ideal::new(vt, gens.iter().map(|s| p(vt, s)).collect(), order).unwrap()
    }

    #[test]
    fn s_polynomial_examples() {
        let vt = xyz();
        let lex = MonomialOrder::lex(&vt);
        let s = s_polynomial(&p(&vt, "x^2 - 1"), &p(&vt, "x*y - 1"), &lex).unwrap();
        assert_eq!(s, p(&vt, "x - y"));
        let f = p(&vt, "x^2 + y");
        assert!(s_polynomial(&f, &f, &lex).unwrap().is_zero());
        assert_eq!(
            s_polynomial(&f, &Polynomial::zero(&vt), &lex),
            Err(GroebnerError::ZeroPolynomial)
        );
        let (f, g) = (p(&vt, "x^2 + z"), p(&vt, "y^2 - z"));
        let s = s_polynomial(&f, &g, &lex).unwrap();
        assert!(normal_form(&s, &[f, g], &lex).is_zero());
    }

    #[test]
    fn normal_form_examples() {
        let vt = xyz();
        let lex = MonomialOrder::lex(&vt);
        let gb = [p(&vt, "x - y"), p(&vt, "y^2 - 1")];
        assert_eq!(
            normal_form(&p(&vt, "x^2*y - 1"), &gb, &lex),
            p(&vt, "y - 1")
        );
        assert!(normal_form(&gb[1], &gb, &lex).is_zero());
        assert_eq!(normal_form(&p(&vt, "1"), &[p(&vt, "x")], &lex), p(&vt, "1"));
        let f = p(&vt, "x^3*y + x*y^2 - 4");
        let d = divide(&f, &gb, &lex);
        let mut back = d.remainder.clone();
        for (q, g) in d.quotients.iter().zip(&gb) {
            back = &back + &(q * g);
        }
        assert_eq!(back, f);
    }

    #[test]
    fn textbook_basis() {
        let vt = xyz();
        let gb = buchberger(&ideal(
            &vt,
            &["x^2 - 1", "x*y - 1"],
            MonomialOrder::lex(&vt),
        ))
        .unwrap();
        assert_eq!(gb.elements, vec![p(&vt, "x - y"), p(&vt, "y^2 - 1")]);
        assert!(gb.satisfies_criterion());
        assert!(gb.is_reduced());
        let gb = buchberger(&ideal(&vt, &["x - 1"], MonomialOrder::lex(&vt))).unwrap();
        assert_eq!(gb.elements, vec![p(&vt, "x - 1")]);
    }

    #[test]
    fn membership_examples() {
        let vt = xyz();
        let lex = MonomialOrder::lex(&vt);
        assert!(ideal_membership(
            &p(&vt, "x - y"),
            &ideal(&vt, &["x^2 - 1", "x*y - 1"], lex.clone())
        )
        .unwrap());
        assert!(!ideal_membership(&p(&vt, "1"), &ideal(&vt, &["x", "y"], lex)).unwrap());
    }

    #[test]
    fn zero_generators_are_rejected() {
        let vt = xyz();
        let r = Ideal::new(&vt, vec![Polynomial::zero(&vt)], MonomialOrder::lex(&vt));
        assert!(matches!(r, Err(GroebnerError::ZeroPolynomial)));
    }

    fn rational_t(num: i64, den: i64) -> Point {
        let t = Rational::from_ints(num, den).unwrap();
        Point(vec![t.clone(), t.pow(2), t.pow(3)])
    }

    struct Point(Vec<Rational>);

    fn eval_exact(f: &Polynomial, pt: &Point) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in f.terms() {
            let mut t = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                t = &t * &pt.0[i].pow(e);
            }
            acc += &t;
        }
        acc
    }

    #[test]
    fn twisted_cubic_elimination() {
        let vt = xyz();
        let order = MonomialOrder::elimination(&vt, &["x"]).unwrap();
        let id = ideal(&vt, &["x^2 - y", "x^3 - z"], order);
        let kept = elimination_ideal(&id, &BTreeSet::from([1, 2])).unwrap();
        let target = p(&vt, "y^3 - z^2");
        assert!(kept.iter().any(|g| *g == target || *g == -&target));
        for k in 1..=20 {
            let pt = rational_t(k * 7 - 60, k + 2);
            for g in &kept {
                assert!(eval_exact(g, &pt).is_zero());
            }
        }
    }

    #[test]
    fn elimination_edge_cases() {
        let vt = xyz();
        let lex = MonomialOrder::lex(&vt);
        let id = ideal(&vt, &["x^2 - y", "x^3 - z"], lex.clone());
        let all = elimination_ideal(&id, &BTreeSet::from([0, 1, 2])).unwrap();
        assert_eq!(all, buchberger(&id).unwrap().elements);
        let only_x = ideal(&vt, &["x"], lex);
        assert!(elimination_ideal(&only_x, &BTreeSet::from([1, 2]))
            .unwrap()
            .is_empty());
        let gr = ideal(&vt, &["x^2 - y"], MonomialOrder::grevlex(&vt));
        assert!(matches!(
            elimination_ideal(&gr, &BTreeSet::from([1, 2])),
            Err(GroebnerError::OrderDoesNotEliminate(_))
        ));
    }

    #[test]
    fn budget_is_enforced() {
        let vt = xyz();
        let id = ideal(
            &vt,
            &["x^3 - 2*x*y", "x^2*y - 2*y^2 + x"],
            MonomialOrder::grevlex(&vt),
        );
        match buchberger_bounded(&id, 1) {
            Err(GroebnerError::BudgetExceeded { pairs: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
        let gb = buchberger(&id).unwrap();
        assert!(gb.satisfies_criterion());
        assert!(gb.is_reduced());
    }

    #[test]
    fn block_orders_work() {
        let vt = xyz();
        let order = MonomialOrder::block(
            &vt,
            &[
                (BlockKind::Lex, vec!["z"]),
                (BlockKind::Grevlex, vec!["x", "y"]),
            ],
        )
        .unwrap();
        let gb = buchberger(&ideal(&vt, &["z - x*y", "x^2 - y^2", "z^2 - 1"], order)).unwrap();
        assert!(gb.satisfies_criterion());
        assert!(gb.is_reduced());
    }

    fn arb_small() -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
        prop::collection::vec((prop::collection::vec(0u32..3, 3), -3i64..=3), 1..4)
    }

    fn build(vt: &Arc<VarTable>, t: &[(Vec<u32>, i64)]) -> Polynomial {
        Polynomial::from_terms(
            vt,
            t.iter()
                .map(|(e, c)| (Monomial::from_exps(e.clone()), Rational::from(*c))),
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn membership_is_sound(f in arb_small(), g in arb_small(), a in arb_small(), b in arb_small()) {
            let vt = xyz();
            let (f, g) = (build(&vt, &f), build(&vt, &g));
            prop_assume!(!f.is_zero() && !g.is_zero());
            let id = Ideal::new(&vt, vec![f.clone(), g.clone()], MonomialOrder::grevlex(&vt)).unwrap();
            let gb = match buchberger_bounded(&id, 20_000) {
                Ok(gb) => gb,
                Err(_) => return Ok(()),
            };
            prop_assert!(gb.satisfies_criterion());
            prop_assert!(gb.is_reduced());
            let comb = &(&build(&vt, &a) * &f) + &(&build(&vt, &b) * &g);
            prop_assert!(gb.contains(&comb));
            // permuted input gives the same reduced basis
            let swapped = Ideal::new(&vt, vec![g, f], MonomialOrder::grevlex(&vt)).unwrap();
            prop_assert_eq!(buchberger_bounded(&swapped, 20_000).unwrap().elements, gb.elements);
        }
    }
}
