//! The perfect cuboid system: a 2×3 matrix of edges and face diagonals, the
//! space diagonal `L`, and the nine elementary multisymmetric symbols.

use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::exactnum::Rational;
use crate::groebner::{self, GroebnerError};
use crate::linalg;
use crate::multisym::{ElementaryBasisElement, Multisym, MultisymError};
use crate::poly::{
    BlockKind, Monomial, MonomialOrder, PolyError, Polynomial, RewriteRule, RewriteSystem, VarTable,
};

mod catalog;
mod derive;
mod numeric;

pub use catalog::{catalog_from_json, catalog_to_json, CatalogEntry, FactorEquation, FactorId};
pub use derive::{
    linear_combination, DerivationStep, DerivationTrace, RuleSet, StepKind, TraceExport,
};
pub use numeric::{NumericReport, Sampler};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CuboidError {
    #[error("derivation of {id} failed at step `{step}`: {detail}")]
    Pipeline {
        id: FactorId,
        step: String,
        detail: String,
    },
    #[error("cannot solve for `{var}`: {reason}")]
    NotSolvable { var: String, reason: String },
    #[error("unknown factor equation `{0}`")]
    UnknownId(String),
    #[error("catalog format: {0}")]
    Catalog(String),
    #[error(transparent)]
    Multisym(#[from] MultisymError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
}

/// Symbols in display precedence; the normalization order ranks them first.
pub const DISPLAY_RANKING: [&str; 10] = [
    "E10", "E20", "E30", "E01", "E02", "E03", "E21", "E11", "E12", "L",
];

const GENERATORS: [&str; 6] = [
    "x1^2 + x2^2 - d3^2",
    "d3^2 + x3^2 - L^2",
    "x2^2 + x3^2 - d1^2",
    "d1^2 + x1^2 - L^2",
    "x3^2 + x1^2 - d2^2",
    "d2^2 + x2^2 - L^2",
];

const REDUCTION_BASIS: [&str; 4] = [
    "d1^2 - L^2 + x1^2",
    "d2^2 - L^2 + x2^2",
    "d3^2 - L^2 + x3^2",
    "L^2 - x1^2 - x2^2 - x3^2",
];

/// Row `k` expresses reduction-basis element `k` over the six generators.
const CERTIFICATES: [[i64; 6]; 4] = [
    [0, 0, 0, 1, 0, 0],
    [0, 0, 0, 0, 0, 1],
    [0, 1, 0, 0, 0, 0],
    [-1, -1, 0, 0, 0, 0],
];

pub struct CuboidSystem {
    vt: Arc<VarTable>,
    generators: Vec<Polynomial>,
    reduction_basis: Vec<Polynomial>,
    certificates: Vec<Vec<Rational>>,
    multisym: Multisym,
    display_order: MonomialOrder,
    /// Ranks d1,d2,d3,L first so the basis leads with d_i^2 and L^2.
    reduction_order: MonomialOrder,
    rewriting: RewriteSystem,
}

/// Outcome of a membership check against the cuboid ideal.
#[derive(Clone, Debug)]
pub struct Verification {
    pub member: bool,
    /// Expansion of the input into x, d, L.
    pub expanded: Polynomial,
    pub remainder: Polynomial,
    pub certificate: Certificate,
}

/// `expanded = sum generator_cofactors[j] * generator[j] + remainder`.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub basis_cofactors: Vec<Polynomial>,
    pub generator_cofactors: Vec<Polynomial>,
    /// (rule, number of applications) in basis order.
    pub rule_applications: Vec<(String, usize)>,
}

impl CuboidSystem {
    pub fn new() -> Self {
        let vt = Arc::new(
            VarTable::builder()
                .matrix(&[&["x1", "x2", "x3"], &["d1", "d2", "d3"]])
                .invariant("L")
                .elementaries()
                .build()
                .expect("fixed layout"),
        );
        let parse = |s: &str| Polynomial::parse(s, &vt).expect("fixed expression");
        let generators: Vec<Polynomial> = GENERATORS.iter().map(|s| parse(s)).collect();
        let reduction_basis: Vec<Polynomial> = REDUCTION_BASIS.iter().map(|s| parse(s)).collect();
        let certificates = CERTIFICATES
            .iter()
            .map(|row| row.iter().map(|&c| Rational::from(c)).collect())
            .collect();
        let multisym = Multisym::new(&vt).expect("table carries every elementary symbol");
        let display_order =
            MonomialOrder::ranked(&vt, BlockKind::Grevlex, &DISPLAY_RANKING).expect("known names");
        let reduction_order = MonomialOrder::ranked(
            &vt,
            BlockKind::Grevlex,
            &["d1", "d2", "d3", "L", "x1", "x2", "x3"],
        )
        .expect("known names");
        let rules = ["d1", "d2", "d3", "L"]
            .iter()
            .zip(&reduction_basis)
            .map(|(v, rel)| {
                let pivot = Monomial::var(vt.len(), vt.index_of(v).expect("known"), 2);
                RewriteRule::from_relation(format!("{v}^2"), rel, &pivot).expect("unit pivot")
            })
            .collect();
        CuboidSystem {
            vt,
            generators,
            reduction_basis,
            certificates,
            multisym,
            display_order,
            reduction_order,
            rewriting: RewriteSystem::new(rules),
        }
    }

    /// Process-wide instance.
    pub fn shared() -> &'static CuboidSystem {
        static SYSTEM: OnceLock<CuboidSystem> = OnceLock::new();
        SYSTEM.get_or_init(CuboidSystem::new)
    }

    pub fn var_table(&self) -> &Arc<VarTable> {
        &self.vt
    }

    pub fn parse(&self, text: &str) -> Result<Polynomial, PolyError> {
        Polynomial::parse(text, &self.vt)
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn reduction_basis(&self) -> &[Polynomial] {
        &self.reduction_basis
    }

    pub fn certificates(&self) -> &[Vec<Rational>] {
        &self.certificates
    }

    pub fn multisym(&self) -> &Multisym {
        &self.multisym
    }

    pub fn display_order(&self) -> &MonomialOrder {
        &self.display_order
    }

    pub fn reduction_order(&self) -> &MonomialOrder {
        &self.reduction_order
    }

    pub fn rewriting(&self) -> &RewriteSystem {
        &self.rewriting
    }

    pub fn format(&self, p: &Polynomial) -> String {
        p.format(&self.display_order)
    }

    /// Integer coefficients, content 1, positive leading coefficient under
    /// the display order.
    pub fn normalize(&self, p: &Polynomial) -> Polynomial {
        p.primitive(&self.display_order)
    }

    pub fn elementaries(&self) -> Vec<ElementaryBasisElement> {
        self.multisym.elementaries().cloned().collect()
    }

    /// Normal form modulo the cuboid ideal: no `d_i` or `L` exponent reaches 2.
    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        self.rewriting.reduce(p)
    }

    /// Checks `stated = sum_j certificates[k][j] * generators[j]` for every
    /// reduction-basis element.
    pub fn certificates_hold(&self) -> bool {
        self.reduction_basis
            .iter()
            .zip(&self.certificates)
            .all(|(r, row)| {
                let combo = row
                    .iter()
                    .zip(&self.generators)
                    .fold(Polynomial::zero(&self.vt), |acc, (c, g)| &acc + &g.scale(c));
                combo == *r
            })
    }

    /// Membership of `p` (elementary symbols are expanded first) in the
    /// ideal of the six generators.
    pub fn verify(&self, p: &Polynomial) -> Verification {
        let expanded = self.multisym.substitute_elementaries(p);
        let division = groebner::divide(&expanded, &self.reduction_basis, &self.reduction_order);
        let generator_cofactors = (0..self.generators.len())
            .map(|j| {
                division
                    .quotients
                    .iter()
                    .zip(&self.certificates)
                    .fold(Polynomial::zero(&self.vt), |acc, (q, row)| {
                        &acc + &q.scale(&row[j])
                    })
            })
            .collect();
        let rule_applications = self
            .rewriting
            .rules
            .iter()
            .zip(&division.steps)
            .map(|(r, &n)| (r.name.clone(), n))
            .collect();
        Verification {
            member: division.remainder.is_zero(),
            expanded,
            remainder: division.remainder,
            certificate: Certificate {
                basis_cofactors: division.quotients,
                generator_cofactors,
                rule_applications,
            },
        }
    }

    pub fn verify_factor_equation(&self, f: &FactorEquation) -> Verification {
        self.verify(&f.lhs)
    }

    /// The nine expansions together with `L` and `1` are linearly independent.
    pub fn elementary_rank(&self) -> (usize, usize) {
        let mut polys: Vec<Polynomial> = self
            .multisym
            .elementaries()
            .map(|e| e.polynomial.clone())
            .collect();
        polys.push(Polynomial::var(&self.vt, "L").expect("known"));
        polys.push(Polynomial::one(&self.vt));
        let mut monos: Vec<Monomial> = polys
            .iter()
            .flat_map(|p| p.terms().map(|(m, _)| m.clone()))
            .collect();
        monos.sort();
        monos.dedup();
        let rows = polys
            .iter()
            .map(|p| monos.iter().map(|m| p.coeff(m)).collect())
            .collect();
        (linalg::rank(rows), polys.len())
    }
}

impl Default for CuboidSystem {
    fn default() -> Self {
        Self::new()
    }
}

impl Certificate {
    /// Re-expands the generator combination and compares with `v.expanded`.
    pub fn check(&self, sys: &CuboidSystem, expanded: &Polynomial, remainder: &Polynomial) -> bool {
        let combo = self
            .generator_cofactors
            .iter()
            .zip(sys.generators())
            .fold(remainder.clone(), |acc, (q, g)| &acc + &(q * g));
        combo == *expanded
    }
}

pub fn cuboid_generators() -> Vec<Polynomial> {
    CuboidSystem::shared().generators().to_vec()
}

pub fn cuboid_elementaries() -> Vec<ElementaryBasisElement> {
    CuboidSystem::shared().elementaries()
}

pub fn reduce_cuboid(p: &Polynomial) -> Polynomial {
    CuboidSystem::shared().reduce(p)
}

pub fn verify_factor_equation(f: &FactorEquation) -> Verification {
    CuboidSystem::shared().verify_factor_equation(f)
}

pub fn factor_catalog() -> Vec<FactorEquation> {
    catalog::factor_catalog(CuboidSystem::shared())
}

pub fn derive_factor_equations() -> Result<Vec<DerivationTrace>, CuboidError> {
    derive::derive_all(CuboidSystem::shared())
}

pub fn derivation_branch_equivalence() -> Result<bool, CuboidError> {
    derive::branch_equivalence(CuboidSystem::shared())
}

pub fn numeric_residual(sample_count: usize, seed: u64) -> NumericReport {
    numeric::numeric_residual(
        CuboidSystem::shared(),
        &factor_catalog(),
        sample_count,
        seed,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    fn sys() -> &'static CuboidSystem {
        CuboidSystem::shared()
    }

    fn p(s: &str) -> Polynomial {
        sys().parse(s).unwrap()
    }

    #[test]
    fn generators_in_row_major_order() {
        let g = cuboid_generators();
        assert_eq!(g.len(), 6);
        assert_eq!(g[0], p("x1^2 + x2^2 - d3^2"));
        assert_eq!(g[3], p("d1^2 + x1^2 - L^2"));
    }

    #[test]
    fn generator_basis_equivalence() {
        for g in sys().generators() {
            assert!(reduce_cuboid(g).is_zero(), "{g}");
        }
        assert!(sys().certificates_hold());
        let lts: Vec<Monomial> = sys()
            .reduction_basis()
            .iter()
            .map(|r| r.leading_term(sys().reduction_order()).unwrap().0.clone())
            .collect();
        for v in ["d1", "d2", "d3", "L"] {
            assert!(lts.contains(&p(&format!("{v}^2")).terms().next().unwrap().0.clone()));
        }
        for i in 0..lts.len() {
            for j in i + 1..lts.len() {
                assert!(lts[i].coprime(&lts[j]));
            }
        }
    }

    #[test]
    fn elementary_expansions() {
        let e = cuboid_elementaries();
        let names: Vec<&str> = e.iter().map(|e| e.e_variable.as_str()).collect();
        assert_eq!(
            names,
            ["E10", "E20", "E30", "E01", "E02", "E03", "E21", "E11", "E12"]
        );
        let by = |n: &str| {
            e.iter()
                .find(|e| e.e_variable == n)
                .unwrap()
                .polynomial
                .clone()
        };
        assert_eq!(by("E21"), p("x1*x2*d3 + x2*x3*d1 + x3*x1*d2"));
        assert_eq!(by("E01"), p("d1 + d2 + d3"));
        assert_eq!(by("E11").len(), 6);
        assert_eq!(sys().elementary_rank(), (11, 11));
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(
            reduce_cuboid(&p("d1^2 + d2^2 + d3^2")),
            p("2*x1^2 + 2*x2^2 + 2*x3^2")
        );
        assert!(reduce_cuboid(&p("x1^2 + x2^2 + x3^2 - L^2")).is_zero());
        assert_eq!(
            reduce_cuboid(&p("d1^2*d2^2")),
            p("(x2^2 + x3^2)*(x1^2 + x3^2)")
        );
    }

    #[test]
    fn rewriting_is_confluent() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let vars = ["x1", "x2", "x3", "d1", "d2", "d3", "L"];
        use rand::Rng;
        for _ in 0..100 {
            let mut q = Polynomial::zero(sys().var_table());
            for _ in 0..rng.random_range(1..6) {
                let mut t = Polynomial::constant(
                    sys().var_table(),
                    Rational::from(rng.random_range(-4..=4)),
                );
                for v in vars {
                    t = &t * &p(v).pow(rng.random_range(0..4));
                }
                q = &q + &t;
            }
            let nf = reduce_cuboid(&q);
            for _ in 0..3 {
                assert_eq!(sys().rewriting().reduce_randomized(&q, &mut rng), nf);
            }
            assert_eq!(sys().verify(&q).remainder, nf);
            for (m, _) in nf.terms() {
                for v in ["d1", "d2", "d3", "L"] {
                    assert!(m.exp(sys().var_table().index_of(v).unwrap()) < 2);
                }
            }
        }
    }

    #[test]
    fn verification_certificates() {
        let v = sys().verify(&p("E10^2 - 2*E20 - L^2"));
        assert!(v.member);
        assert!(v.certificate.check(sys(), &v.expanded, &v.remainder));
        let v = sys().verify(&p("E10^2 - 2*E20 - 3*L^2"));
        assert!(!v.member);
        assert_eq!(v.remainder, p("-2*x1^2 - 2*x2^2 - 2*x3^2"));
        assert_eq!(v.remainder, reduce_cuboid(&p("-2*L^2")));
        assert!(v.certificate.check(sys(), &v.expanded, &v.remainder));
        assert!(sys().verify(&p("x1^2 + x2^2 - d3^2")).member);
    }

    #[test]
    fn reduction_basis_is_already_groebner() {
        let order = sys().reduction_order();
        let basis = sys().reduction_basis();
        assert!(groebner::is_groebner_basis(basis, order));
        let ideal = groebner::Ideal::new(sys().var_table(), basis.to_vec(), order.clone()).unwrap();
        let gb = groebner::buchberger(&ideal).unwrap();
        assert_eq!(gb.stats.pairs_reduced, 0);
        let leads = |v: &[Polynomial]| -> BTreeSet<Monomial> {
            v.iter()
                .map(|g| g.leading_term(order).unwrap().0.clone())
                .collect()
        };
        assert_eq!(leads(&gb.elements), leads(basis));
        // only the tails change, by interreducing L^2
        let vt = sys().var_table();
        let expected: BTreeSet<String> = basis
            .iter()
            .map(|b| {
                let lead = Polynomial::term(vt, b.leading_term(order).unwrap().0.clone(), 1.into());
                let tail = groebner::normal_form(&b.checked_sub(&lead).unwrap(), basis, order);
                lead.checked_add(&tail).unwrap().format(order)
            })
            .collect();
        let got: BTreeSet<String> = gb.elements.iter().map(|g| g.format(order)).collect();
        assert_eq!(got, expected);
    }
}
