//! Floating-point spot checks on real cuboids.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{CuboidSystem, FactorEquation, FactorId};
use crate::poly::CompiledPoly;

/// Draws real cuboids: edges uniform in `[0.1, 10]`, diagonals from
/// Pythagoras, elementary symbols from their expansions.
pub struct Sampler<'a> {
    sys: &'a CuboidSystem,
    rng: ChaCha8Rng,
    elementaries: Vec<(usize, CompiledPoly)>,
    idx: [usize; 7],
}

impl<'a> Sampler<'a> {
    pub fn new(sys: &'a CuboidSystem, seed: u64) -> Self {
        let vt = sys.var_table();
        let elementaries = sys
            .multisym()
            .elementaries()
            .map(|e| {
                let v = vt.index_of(&e.e_variable).expect("symbol in table");
                (v, CompiledPoly::new(&e.polynomial, sys.display_order()))
            })
            .collect();
        let idx = ["x1", "x2", "x3", "d1", "d2", "d3", "L"].map(|n| vt.index_of(n).expect("known"));
        Sampler {
            sys,
            rng: ChaCha8Rng::seed_from_u64(seed),
            elementaries,
            idx,
        }
    }

    /// Values of every table variable at the cuboid with edges `x`.
    pub fn point(&self, x: [f64; 3]) -> Vec<f64> {
        let mut values = vec![0.0; self.sys.var_table().len()];
        let [a, b, c] = x;
        let d = [
            (b * b + c * c).sqrt(),
            (c * c + a * a).sqrt(),
            (a * a + b * b).sqrt(),
        ];
        let l = (a * a + b * b + c * c).sqrt();
        for (slot, v) in self.idx.iter().zip([a, b, c, d[0], d[1], d[2], l]) {
            values[*slot] = v;
        }
        for (v, e) in &self.elementaries {
            values[*v] = e.eval(&values);
        }
        values
    }

    pub fn sample(&mut self) -> Vec<f64> {
        let x = [0; 3].map(|_| self.rng.random_range(0.1..=10.0));
        self.point(x)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NumericReport {
    pub samples: usize,
    pub seed: u64,
    /// Maximum relative residual per equation, catalog order.
    pub residuals: Vec<(FactorId, f64)>,
}

impl NumericReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.1).fold(0.0, f64::max)
    }

    pub fn passes(&self, tolerance: f64) -> bool {
        self.residuals.iter().all(|r| r.1 < tolerance)
    }
}

pub(crate) fn numeric_residual(
    sys: &CuboidSystem,
    eqs: &[FactorEquation],
    samples: usize,
    seed: u64,
) -> NumericReport {
    let compiled: Vec<CompiledPoly> = eqs
        .iter()
        .map(|f| CompiledPoly::new(&f.lhs, sys.display_order()))
        .collect();
    let mut max = vec![0.0f64; eqs.len()];
    let mut sampler = Sampler::new(sys, seed);
    for _ in 0..samples.max(1) {
        let values = sampler.sample();
        for (m, c) in max.iter_mut().zip(&compiled) {
            *m = m.max(c.relative_residual(&values));
        }
    }
    NumericReport {
        samples: samples.max(1),
        seed,
        residuals: eqs.iter().map(|f| f.id).zip(max).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cuboid::catalog::factor_catalog;

    fn sys() -> &'static CuboidSystem {
        CuboidSystem::shared()
    }

    #[test]
    fn integer_edges_give_exact_first_equation() {
        let s = Sampler::new(sys(), 0);
        let v = s.point([1.0, 2.0, 2.0]);
        let vt = sys().var_table();
        assert_eq!(v[vt.index_of("E10").unwrap()], 5.0);
        assert_eq!(v[vt.index_of("E20").unwrap()], 8.0);
        assert_eq!(v[vt.index_of("L").unwrap()], 3.0);
        let cat = factor_catalog(sys());
        let f1 = CompiledPoly::new(&cat[0].lhs, sys().display_order());
        assert_eq!(f1.eval(&v), 0.0);
        let f2 = CompiledPoly::new(&cat[1].lhs, sys().display_order());
        assert!(f2.relative_residual(&v) < 1e-14);
    }

    #[test]
    fn degenerate_point_vanishes() {
        let v = Sampler::new(sys(), 0).point([0.0; 3]);
        for f in factor_catalog(sys()) {
            assert_eq!(
                CompiledPoly::new(&f.lhs, sys().display_order()).eval(&v),
                0.0
            );
        }
    }

    #[test]
    fn catalog_vanishes_on_samples() {
        let r = numeric_residual(sys(), &factor_catalog(sys()), 200, 42);
        assert!(r.passes(1e-9), "{r:?}");
        assert_eq!(r, numeric_residual(sys(), &factor_catalog(sys()), 200, 42));
        let tampered = vec![FactorEquation {
            id: FactorId::F1,
            lhs: sys().parse("E10^2 - 2*E20 - 3*L^2").unwrap(),
        }];
        assert!(!numeric_residual(sys(), &tampered, 5, 1).passes(1e-3));
    }
}
