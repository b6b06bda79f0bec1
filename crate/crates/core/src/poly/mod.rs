//! Sparse multivariate polynomials over [`Rational`].
//!
//! A [`Polynomial`] is a map from exponent vectors to non-zero coefficients,
//! tied to a shared [`VarTable`]. Term storage order is an implementation
//! detail; every user-visible listing goes through a [`MonomialOrder`].

mod order;
mod parse;
mod rewrite;
mod vartable;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

use crate::exactnum::{ExactError, Integer, Rational};

pub use order::{BlockKind, MonomialOrder};
pub use parse::{parse, ParseError};
pub use rewrite::{RewriteRule, RewriteSystem};
pub use vartable::{
    elementary_indices, elementary_name, RowDegree, VarKind, VarTable, VarTableBuilder,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolyError {
    #[error("polynomials belong to different variable tables")]
    VarTableMismatch,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{0}` has no value")]
    UnboundVariable(String),
    #[error("polynomial is not row-homogeneous; offending terms: {}", .offending.join(", "))]
    NotRowHomogeneous { offending: Vec<String> },
    #[error("invalid variable layout: {0}")]
    Layout(String),
    #[error("invalid monomial order: {0}")]
    Order(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Exponent vector, one entry per variable of the governing table.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn from_exps(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn var(nvars: usize, i: usize, e: u32) -> Self {
        let mut v = vec![0; nvars];
        v[i] = e;
        Monomial(v)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        self.divides(other)
            .then(|| Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect()))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(|(i, _)| i)
    }

    fn render(&self, vt: &VarTable, ranking: &[usize]) -> String {
        let parts: Vec<String> = ranking
            .iter()
            .filter(|&&v| self.0[v] > 0)
            .map(|&v| match self.0[v] {
                1 => vt.name(v).to_string(),
                e => format!("{}^{e}", vt.name(v)),
            })
            .collect();
        parts.join("*")
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Sparse polynomial with exact rational coefficients.
#[derive(Clone)]
pub struct Polynomial {
    vt: Arc<VarTable>,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.same_table(other) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(vt: &Arc<VarTable>) -> Self {
        Polynomial {
            vt: vt.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vt: &Arc<VarTable>, c: Rational) -> Self {
        Self::term(vt, Monomial::one(vt.len()), c)
    }

    pub fn one(vt: &Arc<VarTable>) -> Self {
        Self::constant(vt, Rational::one())
    }

    pub fn term(vt: &Arc<VarTable>, m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero(vt);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn var(vt: &Arc<VarTable>, name: &str) -> Result<Self, PolyError> {
        let i = vt.require(name)?;
        Ok(Self::var_index(vt, i))
    }

    pub fn var_index(vt: &Arc<VarTable>, i: usize) -> Self {
        Self::term(vt, Monomial::var(vt.len(), i, 1), Rational::one())
    }

    /// Builds a polynomial from possibly repeated, possibly zero terms.
    pub fn from_terms(
        vt: &Arc<VarTable>,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Self {
        let mut p = Self::zero(vt);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub fn parse(text: &str, vt: &Arc<VarTable>) -> Result<Self, PolyError> {
        Ok(parse(text, vt)?)
    }

    pub fn var_table(&self) -> &Arc<VarTable> {
        &self.vt
    }

    pub fn same_table(&self, other: &Polynomial) -> bool {
        Arc::ptr_eq(&self.vt, &other.vt) || *self.vt == *other.vt
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Number of terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient of a monomial given as `name^exp` pairs.
    pub fn coeff_of(&self, vars: &[(&str, u32)]) -> Result<Rational, PolyError> {
        let mut m = Monomial::one(self.vt.len());
        for (n, e) in vars {
            m.0[self.vt.require(n)?] += e;
        }
        Ok(self.coeff(&m))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Variables occurring in some term.
    pub fn variables(&self) -> Vec<usize> {
        let mut used = vec![false; self.vt.len()];
        for m in self.terms.keys() {
            for v in m.support() {
                used[v] = true;
            }
        }
        (0..used.len()).filter(|&i| used[i]).collect()
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: &Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.same_table(other) {
            Ok(())
        } else {
            Err(PolyError::VarTableMismatch)
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), &-c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(other)?;
        let mut out = Polynomial::zero(&self.vt);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.vt);
        }
        Polynomial {
            vt: self.vt.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.vt);
        }
        Polynomial {
            vt: self.vt.clone(),
            terms: self.terms.iter().map(|(t, x)| (t.mul(m), x * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut result = Polynomial::one(&self.vt);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Terms sorted from largest to smallest under `order`.
    pub fn sorted_terms(&self, order: &MonomialOrder) -> Vec<(&Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| order.cmp(b.0, a.0));
        v
    }

    pub fn leading_term(&self, order: &MonomialOrder) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    /// Scales so the leading coefficient is one.
    pub fn monic(&self, order: &MonomialOrder) -> Polynomial {
        match self.leading_term(order) {
            Some((_, c)) => self.scale(&c.inv().expect("stored coefficients are non-zero")),
            None => self.clone(),
        }
    }

    /// Integer coefficients with content 1 and a positive leading coefficient.
    pub fn primitive(&self, order: &MonomialOrder) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let den = self
            .terms
            .values()
            .fold(Integer::one(), |acc, c| acc.lcm(&c.denom()));
        let cleared = self.scale(&Rational::from(den));
        let content = cleared
            .terms
            .values()
            .fold(Integer::zero(), |acc, c| acc.gcd(&c.numer()));
        let mut factor =
            Rational::new(Integer::one(), content).expect("content of a non-zero polynomial");
        let lead_negative = cleared
            .leading_term(order)
            .is_some_and(|(_, c)| c.is_negative());
        if lead_negative {
            factor = -factor;
        }
        cleared.scale(&factor)
    }

    /// Simultaneous substitution of variables by polynomials.
    pub fn substitute(
        &self,
        bindings: &HashMap<String, Polynomial>,
    ) -> Result<Polynomial, PolyError> {
        let mut by_index = BTreeMap::new();
        for (name, value) in bindings {
            let i = self.vt.require(name)?;
            self.check(value)?;
            by_index.insert(i, value.clone());
        }
        Ok(self.substitute_indices(&by_index))
    }

    /// Like [`substitute`](Self::substitute) with variables given by index.
    /// Every binding must live on this polynomial's table.
    pub fn substitute_indices(&self, bindings: &BTreeMap<usize, Polynomial>) -> Polynomial {
        if bindings.is_empty() {
            return self.clone();
        }
        let mut powers: HashMap<(usize, u32), Polynomial> = HashMap::new();
        let mut out = Polynomial::zero(&self.vt);
        for (m, c) in &self.terms {
            let mut kept = m.clone();
            let mut acc = Polynomial::term(&self.vt, Monomial::one(self.vt.len()), c.clone());
            for (&v, value) in bindings {
                let e = m.0[v];
                if e == 0 {
                    continue;
                }
                kept.0[v] = 0;
                let pw = powers.entry((v, e)).or_insert_with(|| value.pow(e));
                acc = &acc * pw;
            }
            for (t, x) in acc.terms {
                out.add_term(t.mul(&kept), &x);
            }
        }
        out
    }

    /// Per-row degree of a monomial. Matrix variables count towards their
    /// row, elementary symbols contribute their multi-index, invariant
    /// variables contribute nothing.
    pub fn row_degrees(vt: &VarTable, m: &Monomial) -> Vec<u32> {
        let mut d = vec![0; vt.rows()];
        for v in m.support() {
            match vt.row_degree_of(v) {
                Some(RowDegree::Row(r)) => d[r] += m.0[v],
                Some(RowDegree::Index(a)) => {
                    for (slot, x) in d.iter_mut().zip(a) {
                        *slot += x * m.0[v];
                    }
                }
                None => {}
            }
        }
        d
    }

    /// The common row-degree vector of all terms.
    pub fn multidegree(&self) -> Result<Vec<u32>, PolyError> {
        let mut groups: BTreeMap<Vec<u32>, Vec<&Monomial>> = BTreeMap::new();
        for m in self.terms.keys() {
            groups
                .entry(Self::row_degrees(&self.vt, m))
                .or_default()
                .push(m);
        }
        match groups.len() {
            0 => Ok(vec![0; self.vt.rows()]),
            1 => Ok(groups.into_keys().next().unwrap()),
            _ => {
                // Report every term outside the most populated degree class.
                let main = groups
                    .iter()
                    .max_by_key(|(_, ms)| ms.len())
                    .map(|(k, _)| k.clone())
                    .unwrap();
                let ranking: Vec<usize> = (0..self.vt.len()).collect();
                let offending = groups
                    .iter()
                    .filter(|(k, _)| **k != main)
                    .flat_map(|(_, ms)| ms.iter().map(|m| render_mono(&self.vt, m, &ranking)))
                    .collect();
                Err(PolyError::NotRowHomogeneous { offending })
            }
        }
    }

    /// Splits into row-homogeneous parts, sorted by row-degree vector.
    pub fn homogeneous_components(&self) -> Vec<(Vec<u32>, Polynomial)> {
        let mut groups: BTreeMap<Vec<u32>, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            groups
                .entry(Self::row_degrees(&self.vt, m))
                .or_insert_with(|| Polynomial::zero(&self.vt))
                .terms
                .insert(m.clone(), c.clone());
        }
        groups.into_iter().collect()
    }

    /// Deterministic text form: terms descending under `order`, variables
    /// inside a term listed by the order's ranking.
    pub fn format(&self, order: &MonomialOrder) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let ranking: Vec<usize> = order.ranking().collect();
        let mut out = String::new();
        for (k, (m, c)) in self.sorted_terms(order).into_iter().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let a = c.abs();
            let mono = m.render(&self.vt, &ranking);
            if mono.is_empty() {
                out.push_str(&a.to_string());
            } else if a.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{a}*{mono}"));
            }
        }
        out
    }

    /// Double-precision value at a point given by name.
    pub fn eval_float(
        &self,
        point: &HashMap<String, f64>,
        order: &MonomialOrder,
    ) -> Result<f64, PolyError> {
        let mut values = vec![f64::NAN; self.vt.len()];
        for v in self.variables() {
            let name = self.vt.name(v);
            values[v] = *point
                .get(name)
                .ok_or_else(|| PolyError::UnboundVariable(name.to_string()))?;
        }
        Ok(CompiledPoly::new(self, order).eval(&values))
    }
}

fn render_mono(vt: &VarTable, m: &Monomial, ranking: &[usize]) -> String {
    let s = m.render(vt, ranking);
    if s.is_empty() {
        "1".into()
    } else {
        s
    }
}

/// Polynomial lowered to `f64` terms in a fixed summation order.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    terms: Vec<(f64, Vec<(usize, i32)>)>,
}

impl CompiledPoly {
    pub fn new(p: &Polynomial, order: &MonomialOrder) -> Self {
        let terms = p
            .sorted_terms(order)
            .into_iter()
            .map(|(m, c)| {
                let factors = m.support().map(|v| (v, m.exp(v) as i32)).collect();
                (c.to_f64(), factors)
            })
            .collect();
        CompiledPoly { terms }
    }

    /// Values of the individual terms, in summation order.
    pub fn term_values<'a>(&'a self, values: &'a [f64]) -> impl Iterator<Item = f64> + 'a {
        self.terms
            .iter()
            .map(move |(c, fs)| fs.iter().fold(*c, |acc, &(v, e)| acc * values[v].powi(e)))
    }

    pub fn eval(&self, values: &[f64]) -> f64 {
        self.term_values(values).sum()
    }

    /// `|p(x)| / (1 + sum |term|)`.
    pub fn relative_residual(&self, values: &[f64]) -> f64 {
        let (sum, abs) = self
            .term_values(values)
            .fold((0.0, 0.0), |(s, a), t| (s + t, a + t.abs()));
        sum.abs() / (1.0 + abs)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format(&MonomialOrder::grevlex(&self.vt)))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

macro_rules! poly_binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        /// Panics when the operands live on different variable tables; use
        /// the `checked_*` method to get an error instead.
        impl $tr<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: &Polynomial) -> Polynomial {
                self.$checked(rhs)
                    .expect("polynomial operands on the same variable table")
            }
        }
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
poly_binop!(Add, add, checked_add);
poly_binop!(Sub, sub, checked_sub);
poly_binop!(Mul, mul, checked_mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

pub fn poly_add(a: &Polynomial, b: &Polynomial) -> Result<Polynomial, PolyError> {
    a.checked_add(b)
}

pub fn poly_mul(a: &Polynomial, b: &Polynomial) -> Result<Polynomial, PolyError> {
    a.checked_mul(b)
}

pub fn poly_pow(a: &Polynomial, k: u32) -> Polynomial {
    a.pow(k)
}
