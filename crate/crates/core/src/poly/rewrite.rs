//! Term rewriting by monomial rules `m -> r`.

use std::collections::HashMap;

use rand::Rng;

use super::{Monomial, PolyError, Polynomial};
use crate::exactnum::Rational;

/// Replaces any occurrence of `lhs` (as a divisor of a term) by `rhs`.
#[derive(Clone, Debug)]
pub struct RewriteRule {
    pub name: String,
    pub lhs: Monomial,
    pub rhs: Polynomial,
}

impl RewriteRule {
    pub fn new(name: impl Into<String>, lhs: Monomial, rhs: Polynomial) -> Self {
        RewriteRule {
            name: name.into(),
            lhs,
            rhs,
        }
    }

    /// Orients the relation `relation = 0` as `pivot -> ...`: the pivot
    /// monomial is solved for in terms of the remaining terms.
    pub fn from_relation(
        name: impl Into<String>,
        relation: &Polynomial,
        pivot: &Monomial,
    ) -> Result<Self, PolyError> {
        let c = relation.coeff(pivot);
        let inv = c.inv()?;
        let vt = relation.var_table();
        let rest = relation - &Polynomial::term(vt, pivot.clone(), c);
        Ok(Self::new(name, pivot.clone(), rest.scale(&-inv)))
    }

    /// The relation `lhs - rhs` this rule encodes.
    pub fn relation(&self) -> Polynomial {
        &Polynomial::term(self.rhs.var_table(), self.lhs.clone(), Rational::one()) - &self.rhs
    }

    fn apply_to(&self, m: &Monomial, c: &Rational) -> Option<Polynomial> {
        self.lhs
            .quotient_of(m)
            .map(|q| self.rhs.mul_monomial(&q, c))
    }
}

/// Ordered list of rewrite rules. Rules are assumed terminating.
#[derive(Clone, Debug, Default)]
pub struct RewriteSystem {
    pub rules: Vec<RewriteRule>,
}

const MAX_STEPS: usize = 1_000_000;

impl RewriteSystem {
    pub fn new(rules: Vec<RewriteRule>) -> Self {
        RewriteSystem { rules }
    }

    pub fn is_reducible(&self, m: &Monomial) -> bool {
        self.rules.iter().any(|r| r.lhs.divides(m))
    }

    /// Normal form, rewriting each monomial with the first applicable rule.
    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        let mut memo: HashMap<Monomial, Polynomial> = HashMap::new();
        let mut out = Polynomial::zero(p.var_table());
        for (m, c) in p.terms() {
            let nf = self.reduce_monomial(m, p, &mut memo, 0);
            out = &out + &nf.scale(c);
        }
        out
    }

    fn reduce_monomial(
        &self,
        m: &Monomial,
        p: &Polynomial,
        memo: &mut HashMap<Monomial, Polynomial>,
        depth: usize,
    ) -> Polynomial {
        if let Some(r) = memo.get(m) {
            return r.clone();
        }
        assert!(depth < 10_000, "rewrite system does not terminate");
        let one = Rational::one();
        let result = match self.rules.iter().find_map(|r| r.apply_to(m, &one)) {
            None => Polynomial::term(p.var_table(), m.clone(), one),
            Some(step) => {
                let mut acc = Polynomial::zero(p.var_table());
                for (t, c) in step.terms() {
                    let nf = self.reduce_monomial(t, p, memo, depth + 1);
                    acc = &acc + &nf.scale(c);
                }
                acc
            }
        };
        memo.insert(m.clone(), result.clone());
        result
    }

    /// Normal form reached by applying rules to randomly chosen reducible
    /// terms with randomly chosen applicable rules. Agrees with
    /// [`reduce`](Self::reduce) exactly when the system is confluent.
    pub fn reduce_randomized<R: Rng>(&self, p: &Polynomial, rng: &mut R) -> Polynomial {
        let mut cur = p.clone();
        for _ in 0..MAX_STEPS {
            let reducible: Vec<(&Monomial, &Rational)> =
                cur.terms().filter(|(m, _)| self.is_reducible(m)).collect();
            if reducible.is_empty() {
                return cur;
            }
            let (m, c) = reducible[rng.random_range(0..reducible.len())];
            let applicable: Vec<&RewriteRule> =
                self.rules.iter().filter(|r| r.lhs.divides(m)).collect();
            let rule = applicable[rng.random_range(0..applicable.len())];
            let replacement = rule.apply_to(m, c).expect("rule divides term");
            let removed = Polynomial::term(cur.var_table(), m.clone(), c.clone());
            cur = &(&cur - &removed) + &replacement;
        }
        panic!("rewrite system does not terminate");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::tests::cuboid_table;
    use crate::poly::Polynomial;

    #[test]
    fn rule_from_relation() {
        let vt = cuboid_table();
        let rel = Polynomial::parse("2*x1^2 + x2^2 - L^2", &vt).unwrap();
        let pivot = Polynomial::parse("x1^2", &vt)
            .unwrap()
            .terms()
            .next()
            .unwrap()
            .0
            .clone();
        let rule = RewriteRule::from_relation("r", &rel, &pivot).unwrap();
        assert_eq!(
            rule.rhs,
            Polynomial::parse("1/2*L^2 - 1/2*x2^2", &vt).unwrap()
        );
        assert_eq!(rule.relation().scale(&Rational::from(2)), rel);
        let x3 = Polynomial::parse("x3^2", &vt)
            .unwrap()
            .terms()
            .next()
            .unwrap()
            .0
            .clone();
        assert!(RewriteRule::from_relation("bad", &rel, &x3).is_err());
    }

    #[test]
    fn reduce_applies_rules_to_exhaustion() {
        let vt = cuboid_table();
        let x1sq = Polynomial::parse("x1^2", &vt)
            .unwrap()
            .terms()
            .next()
            .unwrap()
            .0
            .clone();
        let sys = RewriteSystem::new(vec![RewriteRule::new(
            "x1",
            x1sq,
            Polynomial::parse("L^2 - d1^2", &vt).unwrap(),
        )]);
        let p = Polynomial::parse("x1^3 + x1^4", &vt).unwrap();
        let expect = Polynomial::parse("L^2*x1 - d1^2*x1 + (L^2-d1^2)*(L^2-d1^2)", &vt).unwrap();
        assert_eq!(sys.reduce(&p), expect);
    }
}
