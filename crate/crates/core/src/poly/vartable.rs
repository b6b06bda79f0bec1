use std::collections::HashMap;
use std::fmt;

use super::PolyError;

/// Role a variable plays under the column action.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum VarKind {
    /// Entry `(row, col)` of the variable matrix, zero-based.
    Matrix { row: usize, col: usize },
    /// Fixed by every column permutation and carries no row degree (e.g. `L`).
    Invariant,
    /// Abstract symbol standing for the elementary multisymmetric polynomial
    /// with the given multi-index. Fixed by the action.
    Elementary(Vec<u32>),
}

/// Ordered table of variable names with an optional matrix layout.
#[derive(Clone, PartialEq, Eq)]
pub struct VarTable {
    names: Vec<String>,
    kinds: Vec<VarKind>,
    rows: usize,
    cols: usize,
    grid: Vec<Vec<usize>>,
    index: HashMap<String, usize>,
}

impl fmt::Debug for VarTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VarTable")
            .field("names", &self.names)
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .finish()
    }
}

impl VarTable {
    pub fn builder() -> VarTableBuilder {
        VarTableBuilder::default()
    }

    /// Table of free variables without a matrix layout; all flagged invariant.
    pub fn plain(names: &[&str]) -> Result<Self, PolyError> {
        names
            .iter()
            .fold(Self::builder(), |b, n| b.invariant(n))
            .build()
    }

    /// `m x n` matrix named `x{i}_{j}` (1-based) plus all elementary symbols.
    pub fn generic_matrix(m: usize, n: usize) -> Result<Self, PolyError> {
        let names: Vec<Vec<String>> = (1..=m)
            .map(|i| (1..=n).map(|j| format!("x{i}_{j}")).collect())
            .collect();
        let rows: Vec<Vec<&str>> = names
            .iter()
            .map(|r| r.iter().map(String::as_str).collect())
            .collect();
        let rows: Vec<&[&str]> = rows.iter().map(Vec::as_slice).collect();
        Self::builder().matrix(&rows).elementaries().build()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn kind(&self, i: usize) -> &VarKind {
        &self.kinds[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<usize, PolyError> {
        self.index_of(name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))
    }

    /// Number of matrix rows `m` (0 without a layout).
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of matrix columns `n` (0 without a layout).
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn has_matrix(&self) -> bool {
        self.rows > 0
    }

    /// Variable index at matrix position `(row, col)`.
    pub fn at(&self, row: usize, col: usize) -> usize {
        self.grid[row][col]
    }

    pub fn is_matrix_var(&self, i: usize) -> bool {
        matches!(self.kinds[i], VarKind::Matrix { .. })
    }

    pub fn elementary_vars(&self) -> impl Iterator<Item = (usize, &[u32])> {
        self.kinds.iter().enumerate().filter_map(|(i, k)| match k {
            VarKind::Elementary(a) => Some((i, a.as_slice())),
            _ => None,
        })
    }

    pub fn elementary_var(&self, alpha: &[u32]) -> Option<usize> {
        self.elementary_vars()
            .find(|(_, a)| *a == alpha)
            .map(|(i, _)| i)
    }

    /// Grading weight: 1 for matrix and invariant variables, `|alpha|` for
    /// elementary symbols.
    pub fn weight(&self, i: usize) -> u32 {
        match &self.kinds[i] {
            VarKind::Elementary(a) => a.iter().sum(),
            _ => 1,
        }
    }

    /// Contribution of variable `i` to the row grading.
    pub fn row_degree_of(&self, i: usize) -> Option<RowDegree<'_>> {
        match &self.kinds[i] {
            VarKind::Matrix { row, .. } => Some(RowDegree::Row(*row)),
            VarKind::Elementary(a) => Some(RowDegree::Index(a)),
            VarKind::Invariant => None,
        }
    }
}

pub enum RowDegree<'a> {
    Row(usize),
    Index(&'a [u32]),
}

/// Canonical name of an elementary symbol: `E21` for two rows with
/// single-digit parts, `E[a1,...,am]` otherwise.
pub fn elementary_name(alpha: &[u32]) -> String {
    if alpha.len() == 2 && alpha.iter().all(|&a| a <= 9) {
        format!("E{}{}", alpha[0], alpha[1])
    } else {
        let parts: Vec<String> = alpha.iter().map(u32::to_string).collect();
        format!("E[{}]", parts.join(","))
    }
}

/// All multi-indices with `0 < |alpha| <= n` for `m` rows.
///
/// Single-row indices come first, row by row with increasing degree; mixed
/// indices follow, sorted by `(alpha_m, .., alpha_2)` ascending and then
/// `alpha_1` descending. For `m = 2, n = 3` this is
/// `E10 E20 E30 E01 E02 E03 E21 E11 E12`.
pub fn elementary_indices(m: usize, n: usize) -> Vec<Vec<u32>> {
    let mut pure = Vec::new();
    for row in 0..m {
        for k in 1..=n as u32 {
            let mut a = vec![0; m];
            a[row] = k;
            pure.push(a);
        }
    }
    let mut mixed = Vec::new();
    let mut cur = vec![0u32; m];
    collect_indices(&mut cur, 0, n as u32, &mut mixed);
    mixed.retain(|a| a.iter().filter(|&&x| x > 0).count() > 1);
    mixed.sort_by(|a, b| {
        let ka: Vec<u32> = a[1..].iter().rev().copied().collect();
        let kb: Vec<u32> = b[1..].iter().rev().copied().collect();
        ka.cmp(&kb).then(b[0].cmp(&a[0]))
    });
    pure.extend(mixed);
    pure
}

fn collect_indices(cur: &mut Vec<u32>, pos: usize, budget: u32, out: &mut Vec<Vec<u32>>) {
    if pos == cur.len() {
        if cur.iter().any(|&a| a > 0) {
            out.push(cur.clone());
        }
        return;
    }
    for a in 0..=budget {
        cur[pos] = a;
        collect_indices(cur, pos + 1, budget - a, out);
    }
    cur[pos] = 0;
}

fn valid_identifier(name: &str) -> bool {
    let (base, bracket) = match name.find('[') {
        Some(i) => (&name[..i], Some(&name[i..])),
        None => (name, None),
    };
    let mut chars = base.chars();
    let head_ok = chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_');
    let base_ok = head_ok && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
    let bracket_ok = bracket.is_none_or(|b| {
        b.len() > 2
            && b.ends_with(']')
            && b[1..b.len() - 1]
                .split(',')
                .all(|p| !p.is_empty() && p.bytes().all(|c| c.is_ascii_digit()))
    });
    base_ok && bracket_ok
}

#[derive(Default)]
pub struct VarTableBuilder {
    names: Vec<String>,
    kinds: Vec<VarKind>,
    rows: usize,
    cols: usize,
    elementaries: bool,
    error: Option<PolyError>,
}

impl VarTableBuilder {
    /// Lays out matrix variables; each inner slice is one row.
    pub fn matrix(mut self, rows: &[&[&str]]) -> Self {
        if self.rows > 0 {
            self.error = Some(PolyError::Layout("matrix declared twice".into()));
            return self;
        }
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) || cols == 0 {
            self.error = Some(PolyError::Layout(
                "matrix rows must be non-empty and equally long".into(),
            ));
            return self;
        }
        for (i, row) in rows.iter().enumerate() {
            for (j, name) in row.iter().enumerate() {
                self.names.push(name.to_string());
                self.kinds.push(VarKind::Matrix { row: i, col: j });
            }
        }
        self.rows = rows.len();
        self.cols = cols;
        self
    }

    pub fn invariant(mut self, name: &str) -> Self {
        self.names.push(name.to_string());
        self.kinds.push(VarKind::Invariant);
        self
    }

    /// Appends one elementary symbol per multi-index, in
    /// [`elementary_indices`] order.
    pub fn elementaries(mut self) -> Self {
        self.elementaries = true;
        self
    }

    pub fn build(mut self) -> Result<VarTable, PolyError> {
        if let Some(e) = self.error {
            return Err(e);
        }
        if self.elementaries {
            if self.rows == 0 {
                return Err(PolyError::Layout(
                    "elementary symbols need a matrix layout".into(),
                ));
            }
            for a in elementary_indices(self.rows, self.cols) {
                self.names.push(elementary_name(&a));
                self.kinds.push(VarKind::Elementary(a));
            }
        }
        let mut index = HashMap::new();
        for (i, n) in self.names.iter().enumerate() {
            if !valid_identifier(n) {
                return Err(PolyError::Layout(format!(
                    "`{n}` is not a valid identifier"
                )));
            }
            if index.insert(n.clone(), i).is_some() {
                return Err(PolyError::Layout(format!("duplicate variable `{n}`")));
            }
        }
        let mut grid = vec![vec![0; self.cols]; self.rows];
        for (i, k) in self.kinds.iter().enumerate() {
            if let VarKind::Matrix { row, col } = k {
                grid[*row][*col] = i;
            }
        }
        Ok(VarTable {
            names: self.names,
            kinds: self.kinds,
            rows: self.rows,
            cols: self.cols,
            grid,
            index,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cuboid_style_table() {
        let vt = VarTable::builder()
            .matrix(&[&["x1", "x2", "x3"], &["d1", "d2", "d3"]])
            .invariant("L")
            .elementaries()
            .build()
            .unwrap();
        let names: Vec<&str> = vt.names().iter().map(String::as_str).collect();
        assert_eq!(
            names,
            [
                "x1", "x2", "x3", "d1", "d2", "d3", "L", "E10", "E20", "E30", "E01", "E02", "E03",
                "E21", "E11", "E12"
            ]
        );
        assert_eq!(vt.at(1, 2), vt.index_of("d3").unwrap());
        assert_eq!(vt.weight(vt.index_of("E21").unwrap()), 3);
        assert_eq!(vt.weight(vt.index_of("L").unwrap()), 1);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(VarTable::plain(&["x", "x"]).is_err());
        assert!(VarTable::plain(&["1x"]).is_err());
        assert!(VarTable::builder()
            .matrix(&[&["a", "b"], &["c"]])
            .build()
            .is_err());
        assert!(VarTable::builder()
            .invariant("L")
            .elementaries()
            .build()
            .is_err());
    }

    #[test]
    fn bracketed_names_for_other_shapes() {
        assert_eq!(elementary_name(&[1, 0, 2]), "E[1,0,2]");
        assert_eq!(elementary_name(&[3]), "E[3]");
        let vt = VarTable::generic_matrix(1, 3).unwrap();
        assert!(vt.index_of("E[2]").is_some());
        assert_eq!(elementary_indices(1, 3).len(), 3);
        assert_eq!(elementary_indices(1, 1).len(), 1);
        // m=3, n=2: all alpha in N^3 with 0 < |alpha| <= 2.
        assert_eq!(elementary_indices(3, 2).len(), 9);
    }
}
