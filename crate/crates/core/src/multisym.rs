//! Column action of the symmetric group on a matrix of variables,
//! symmetrization, elementary multisymmetric polynomials, and a constructive
//! decomposition into elementary symbols.
//!
//! Decomposition works one graded piece at a time: for a row-homogeneous
//! component of multidegree `d`, every product of elementary symbols whose
//! multi-indices sum to `d` is expanded, and the exact linear system for the
//! coefficients is put in reduced row-echelon form. The elementary
//! polynomials are not algebraically independent once there is more than one
//! row, so the system can be underdetermined; free unknowns are set to zero,
//! with candidates ordered by descending grevlex so that pivots favour the
//! larger products.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use thiserror::Error;

use crate::exactnum::{Integer, Rational};
use crate::linalg;
use crate::poly::{
    elementary_indices, elementary_name, Monomial, MonomialOrder, PolyError, Polynomial, VarKind,
    VarTable,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MultisymError {
    #[error("variable table has no matrix layout")]
    NoMatrix,
    #[error("permutation acts on {got} columns but the matrix has {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("invalid permutation image {0:?}")]
    NotAPermutation(Vec<usize>),
    #[error("multi-index {parts:?} has |alpha| > {n}")]
    MultiIndex { parts: Vec<u32>, n: usize },
    #[error("polynomial is not multisymmetric: not fixed by {witness}")]
    NotMultisymmetric { witness: ColumnAction },
    #[error("expected a polynomial in elementary and invariant variables, found `{0}`")]
    NotOverElementaries(String),
    #[error("variable table has no elementary symbol for {0}")]
    MissingElementary(String),
    #[error("graded system for multidegree {0:?} has no solution")]
    Inconsistent(Vec<u32>),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `alpha = [alpha_1, .., alpha_m]` with `|alpha| <= n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    parts: Vec<u32>,
    n: usize,
}

impl MultiIndex {
    pub fn new(parts: Vec<u32>, n: usize) -> Result<Self, MultisymError> {
        if parts.iter().sum::<u32>() as usize > n {
            return Err(MultisymError::MultiIndex { parts, n });
        }
        Ok(MultiIndex { parts, n })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn bound(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// `alpha! = alpha_0! * alpha_1! * .. * alpha_m!`, where
    /// `alpha_0 = n - |alpha|` counts the columns `x^alpha` leaves empty.
    /// Without the `alpha_0` factor `(n!/alpha!) S(x^alpha)` would not have
    /// unit coefficients when `|alpha| < n - 1` (e.g. `2*(x1+x2+x3)` for `[1,0]`).
    pub fn factorial(&self) -> Integer {
        let empty = self.n - self.size() as usize;
        self.parts
            .iter()
            .fold(factorial(empty), |acc, &a| &acc * &factorial(a as usize))
    }

    /// Number of monomials in `e_alpha`, `n! / alpha!`.
    pub fn term_count(&self) -> Integer {
        factorial(self.n)
            .checked_div_exact(&self.factorial())
            .expect("non-zero factorial")
    }
}

pub(crate) fn factorial(k: usize) -> Integer {
    (1..=k as i64).fold(Integer::one(), |acc, i| &acc * &Integer::from(i))
}

/// Column permutation `j -> image[j]` (zero-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColumnAction {
    image: Vec<usize>,
}

impl ColumnAction {
    pub fn new(image: Vec<usize>) -> Result<Self, MultisymError> {
        let mut seen = vec![false; image.len()];
        for &j in &image {
            if j >= image.len() || seen[j] {
                return Err(MultisymError::NotAPermutation(image));
            }
            seen[j] = true;
        }
        Ok(ColumnAction { image })
    }

    /// From a one-based image vector such as `[2, 3, 1]`.
    pub fn from_one_based(image: &[usize]) -> Result<Self, MultisymError> {
        let zero_based = image.iter().map(|&j| j.wrapping_sub(1)).collect();
        Self::new(zero_based)
    }

    pub fn identity(n: usize) -> Self {
        ColumnAction {
            image: (0..n).collect(),
        }
    }

    /// Swaps columns `a` and `b` (zero-based).
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut image: Vec<usize> = (0..n).collect();
        image.swap(a, b);
        ColumnAction { image }
    }

    pub fn size(&self) -> usize {
        self.image.len()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn all(n: usize) -> impl Iterator<Item = ColumnAction> {
        (0..n).permutations(n).map(|image| ColumnAction { image })
    }
}

/// Cycle notation with one-based columns, e.g. `(1 2)`; identity is `()`.
impl fmt::Display for ColumnAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.image.len()];
        let mut any = false;
        for start in 0..self.image.len() {
            if seen[start] || self.image[start] == start {
                continue;
            }
            let mut cycle = vec![start + 1];
            seen[start] = true;
            let mut j = self.image[start];
            while j != start {
                seen[j] = true;
                cycle.push(j + 1);
                j = self.image[j];
            }
            write!(f, "({})", cycle.iter().join(" "))?;
            any = true;
        }
        if !any {
            f.write_str("()")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ElementaryBasisElement {
    pub multi_index: MultiIndex,
    /// Expansion in the matrix variables.
    pub polynomial: Polynomial,
    /// Name of the abstract symbol, e.g. `E21`.
    pub e_variable: String,
}

fn require_matrix(vt: &VarTable) -> Result<(), MultisymError> {
    if vt.has_matrix() {
        Ok(())
    } else {
        Err(MultisymError::NoMatrix)
    }
}

/// Applies `sigma` to every matrix variable; other variables stay fixed.
pub fn apply_permutation(
    p: &Polynomial,
    sigma: &ColumnAction,
) -> Result<Polynomial, MultisymError> {
    let vt = p.var_table();
    require_matrix(vt)?;
    if sigma.size() != vt.cols() {
        return Err(MultisymError::SizeMismatch {
            expected: vt.cols(),
            got: sigma.size(),
        });
    }
    let target: Vec<usize> = (0..vt.len())
        .map(|v| match vt.kind(v) {
            VarKind::Matrix { row, col } => vt.at(*row, sigma.image[*col]),
            _ => v,
        })
        .collect();
    Ok(Polynomial::from_terms(
        vt,
        p.terms().map(|(m, c)| {
            let mut e = vec![0; vt.len()];
            for v in m.support() {
                e[target[v]] = m.exp(v);
            }
            (Monomial::from_exps(e), c.clone())
        }),
    ))
}

/// `(1/n!) * sum over sigma of sigma(q)`.
pub fn symmetrize(q: &Polynomial) -> Result<Polynomial, MultisymError> {
    let vt = q.var_table();
    require_matrix(vt)?;
    let n = vt.cols();
    let mut acc = Polynomial::zero(vt);
    for sigma in ColumnAction::all(n) {
        acc = &acc + &apply_permutation(q, &sigma)?;
    }
    let inv = Rational::new(Integer::one(), factorial(n)).expect("n! > 0");
    Ok(acc.scale(&inv))
}

/// First adjacent transposition that moves `p`, if any.
pub fn symmetry_witness(p: &Polynomial) -> Result<Option<ColumnAction>, MultisymError> {
    let vt = p.var_table();
    require_matrix(vt)?;
    let n = vt.cols();
    for j in 0..n.saturating_sub(1) {
        let sigma = ColumnAction::transposition(n, j, j + 1);
        if apply_permutation(p, &sigma)? != *p {
            return Ok(Some(sigma));
        }
    }
    Ok(None)
}

pub fn is_multisymmetric(p: &Polynomial) -> Result<bool, MultisymError> {
    Ok(symmetry_witness(p)?.is_none())
}

/// `x^alpha`: `alpha_1` variables of row 1 from the first columns, the next
/// `alpha_2` columns from row 2, and so on.
pub fn monomial_x_alpha(
    vt: &Arc<VarTable>,
    alpha: &MultiIndex,
) -> Result<Polynomial, MultisymError> {
    require_matrix(vt)?;
    if alpha.parts.len() != vt.rows() || alpha.n != vt.cols() {
        return Err(MultisymError::MultiIndex {
            parts: alpha.parts.clone(),
            n: vt.cols(),
        });
    }
    let mut e = vec![0; vt.len()];
    let mut col = 0;
    for (row, &a) in alpha.parts.iter().enumerate() {
        for _ in 0..a {
            e[vt.at(row, col)] += 1;
            col += 1;
        }
    }
    Ok(Polynomial::term(
        vt,
        Monomial::from_exps(e),
        Rational::one(),
    ))
}

/// `e_alpha = (n!/alpha!) * S(x^alpha)`.
pub fn elementary(
    vt: &Arc<VarTable>,
    alpha: &MultiIndex,
) -> Result<ElementaryBasisElement, MultisymError> {
    let xa = monomial_x_alpha(vt, alpha)?;
    let scale = Rational::new(factorial(vt.cols()), alpha.factorial()).expect("alpha! > 0");
    let polynomial = symmetrize(&xa)?.scale(&scale);
    Ok(ElementaryBasisElement {
        multi_index: alpha.clone(),
        polynomial,
        e_variable: elementary_name(&alpha.parts),
    })
}

/// Every `e_alpha` with `0 < |alpha| <= n`, in the table's symbol order.
pub fn enumerate_elementary(
    vt: &Arc<VarTable>,
) -> Result<Vec<ElementaryBasisElement>, MultisymError> {
    require_matrix(vt)?;
    elementary_indices(vt.rows(), vt.cols())
        .into_iter()
        .map(|parts| elementary(vt, &MultiIndex::new(parts, vt.cols())?))
        .collect()
}

/// [`enumerate_elementary`] on a fresh generic `m x n` table.
pub fn enumerate_elementary_mn(
    m: usize,
    n: usize,
) -> Result<Vec<ElementaryBasisElement>, MultisymError> {
    enumerate_elementary(&Arc::new(VarTable::generic_matrix(m, n)?))
}

/// Decomposition and expansion against the elementary symbols of one table.
#[derive(Clone, Debug)]
pub struct Multisym {
    vt: Arc<VarTable>,
    /// (symbol variable index, element)
    elementaries: Vec<(usize, ElementaryBasisElement)>,
    order: MonomialOrder,
}

impl Multisym {
    /// Requires a matrix layout and an elementary symbol for every multi-index.
    pub fn new(vt: &Arc<VarTable>) -> Result<Self, MultisymError> {
        let elementaries = enumerate_elementary(vt)?
            .into_iter()
            .map(|e| {
                vt.elementary_var(e.multi_index.parts())
                    .map(|v| (v, e.clone()))
                    .ok_or_else(|| MultisymError::MissingElementary(e.e_variable.clone()))
            })
            .collect::<Result<_, _>>()?;
        Ok(Multisym {
            vt: vt.clone(),
            elementaries,
            order: MonomialOrder::grevlex(vt),
        })
    }

    pub fn var_table(&self) -> &Arc<VarTable> {
        &self.vt
    }

    pub fn elementaries(&self) -> impl Iterator<Item = &ElementaryBasisElement> {
        self.elementaries.iter().map(|(_, e)| e)
    }

    pub fn elementary_by_name(&self, name: &str) -> Option<&ElementaryBasisElement> {
        self.elementaries().find(|e| e.e_variable == name)
    }

    /// Replaces every elementary symbol by its expansion; other variables
    /// pass through.
    pub fn substitute_elementaries(&self, q: &Polynomial) -> Polynomial {
        let bindings: BTreeMap<usize, Polynomial> = self
            .elementaries
            .iter()
            .map(|(v, e)| (*v, e.polynomial.clone()))
            .collect();
        q.substitute_indices(&bindings)
    }

    /// Expansion of a polynomial in elementary and invariant variables.
    pub fn expand_in_matrix_vars(&self, q: &Polynomial) -> Result<Polynomial, MultisymError> {
        if !q.same_table(&Polynomial::zero(&self.vt)) {
            return Err(PolyError::VarTableMismatch.into());
        }
        if let Some(v) = q
            .variables()
            .into_iter()
            .find(|&v| self.vt.is_matrix_var(v))
        {
            return Err(MultisymError::NotOverElementaries(
                self.vt.name(v).to_string(),
            ));
        }
        Ok(self.substitute_elementaries(q))
    }

    /// Writes a multisymmetric `p` as a polynomial in elementary symbols and
    /// invariant variables. Elementary symbols already present in `p` are
    /// expanded first.
    pub fn decompose(&self, p: &Polynomial) -> Result<Polynomial, MultisymError> {
        if !p.same_table(&Polynomial::zero(&self.vt)) {
            return Err(PolyError::VarTableMismatch.into());
        }
        let p = self.substitute_elementaries(p);
        if let Some(witness) = symmetry_witness(&p)? {
            return Err(MultisymError::NotMultisymmetric { witness });
        }
        let vt = &self.vt;
        // Group by (row multidegree, invariant part).
        let mut groups: BTreeMap<(Vec<u32>, Monomial), Polynomial> = BTreeMap::new();
        for (m, c) in p.terms() {
            let mut inv = vec![0; vt.len()];
            let mut mat = vec![0; vt.len()];
            for v in m.support() {
                if vt.is_matrix_var(v) {
                    mat[v] = m.exp(v);
                } else {
                    inv[v] = m.exp(v);
                }
            }
            let mat = Monomial::from_exps(mat);
            let deg = Polynomial::row_degrees(vt, &mat);
            let entry = groups
                .entry((deg, Monomial::from_exps(inv)))
                .or_insert_with(|| Polynomial::zero(vt));
            *entry = &*entry + &Polynomial::term(vt, mat, c.clone());
        }
        let mut cache = ProductCache::default();
        let mut out = Polynomial::zero(vt);
        for ((deg, inv), part) in groups {
            let d = self.decompose_homogeneous(&deg, &part, &mut cache)?;
            out = &out + &d.mul_monomial(&inv, &Rational::one());
        }
        Ok(out)
    }

    /// Products of elementary symbols with multi-indices summing to `deg`,
    /// as symbol monomials, sorted descending.
    fn candidates(&self, deg: &[u32]) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut exps = vec![0u32; self.vt.len()];
        self.collect_candidates(0, deg.to_vec(), &mut exps, &mut out);
        out.sort_by(|a, b| self.order.cmp(b, a));
        out
    }

    fn collect_candidates(
        &self,
        start: usize,
        rest: Vec<u32>,
        exps: &mut Vec<u32>,
        out: &mut Vec<Monomial>,
    ) {
        if rest.iter().all(|&r| r == 0) {
            out.push(Monomial::from_exps(exps.clone()));
            return;
        }
        for k in start..self.elementaries.len() {
            let (v, e) = &self.elementaries[k];
            let a = e.multi_index.parts();
            if a.iter().zip(&rest).all(|(x, r)| x <= r) {
                let next: Vec<u32> = rest.iter().zip(a).map(|(r, x)| r - x).collect();
                exps[*v] += 1;
                self.collect_candidates(k, next, exps, out);
                exps[*v] -= 1;
            }
        }
    }

    fn expand_product(&self, m: &Monomial, cache: &mut ProductCache) -> Polynomial {
        if let Some(p) = cache.products.get(m) {
            return p.clone();
        }
        let result = match self.elementaries.iter().find(|(v, _)| m.exp(*v) > 0) {
            None => Polynomial::one(&self.vt),
            Some((v, e)) => {
                let mut smaller = m.exps().to_vec();
                smaller[*v] -= 1;
                let rest = self.expand_product(&Monomial::from_exps(smaller), cache);
                &rest * &e.polynomial
            }
        };
        cache.products.insert(m.clone(), result.clone());
        result
    }

    fn decompose_homogeneous(
        &self,
        deg: &[u32],
        part: &Polynomial,
        cache: &mut ProductCache,
    ) -> Result<Polynomial, MultisymError> {
        if deg.iter().all(|&d| d == 0) {
            return Ok(part.clone());
        }
        let cands = self.candidates(deg);
        let expansions: Vec<Polynomial> = cands
            .iter()
            .map(|c| self.expand_product(c, cache))
            .collect();
        let mut row_of: HashMap<&Monomial, usize> = HashMap::new();
        let mut monos: Vec<&Monomial> = Vec::new();
        for p in expansions.iter().chain(std::iter::once(part)) {
            for (m, _) in p.terms() {
                row_of.entry(m).or_insert_with(|| {
                    monos.push(m);
                    monos.len() - 1
                });
            }
        }
        let ncols = cands.len();
        let mut rows = vec![vec![Rational::zero(); ncols + 1]; monos.len()];
        for (j, p) in expansions.iter().enumerate() {
            for (m, c) in p.terms() {
                rows[row_of[m]][j] = c.clone();
            }
        }
        for (m, c) in part.terms() {
            rows[row_of[m]][ncols] = c.clone();
        }
        let x = linalg::solve_augmented(rows, ncols)
            .ok_or_else(|| MultisymError::Inconsistent(deg.to_vec()))?;
        Ok(Polynomial::from_terms(&self.vt, cands.into_iter().zip(x)))
    }
}

#[derive(Default)]
struct ProductCache {
    products: HashMap<Monomial, Polynomial>,
}
