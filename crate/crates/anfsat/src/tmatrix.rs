//! Ternary matrices: tables over an ordered set of variables whose rows are
//! cubes (`0`, `1` or neutral `.` per column). A matrix denotes the union of
//! its rows, extended over any variables it does not mention.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num_bigint::BigUint;
use thiserror::Error;

use crate::cnf::Clause;

/// Number of non-neutral columns up to which `reduce` canonicalizes exactly
/// by way of the minterm expansion.
pub const EXACT_REDUCE_COLUMNS: usize = 16;
/// Largest variable count for which model sets are materialized.
pub const ENUMERATION_CUTOFF: usize = 26;
/// Column limit for the exhaustive minimum-decomposition search.
pub const DECOMPOSITION_SEARCH_COLUMNS: usize = 5;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("columns must be strictly increasing variable indices starting at 1")]
    BadColumns,
    #[error("row {row} has {got} cells, expected {expected}")]
    RowWidth { row: usize, got: usize, expected: usize },
    #[error("invalid cell character `{0}`")]
    BadCell(char),
    #[error("variable {var} is outside 1..={n}")]
    ColumnOutOfRange { var: u32, n: usize },
    #[error("target variable set does not contain column {0}")]
    NotASuperset(u32),
    #[error("{n} variables exceeds the enumeration cutoff {cutoff}")]
    CutoffExceeded { n: usize, cutoff: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cell {
    Zero,
    One,
    Neutral,
}

impl Cell {
    pub fn from_bit(b: bool) -> Cell {
        if b {
            Cell::One
        } else {
            Cell::Zero
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Cell::Zero => '0',
            Cell::One => '1',
            Cell::Neutral => '.',
        }
    }

    pub fn from_char(c: char) -> Result<Cell, MatrixError> {
        match c {
            '0' => Ok(Cell::Zero),
            '1' => Ok(Cell::One),
            '.' | '·' => Ok(Cell::Neutral),
            other => Err(MatrixError::BadCell(other)),
        }
    }

    fn admits(self, b: bool) -> bool {
        match self {
            Cell::Neutral => true,
            Cell::Zero => !b,
            Cell::One => b,
        }
    }

    fn meet(self, other: Cell) -> Option<Cell> {
        match (self, other) {
            (Cell::Neutral, x) | (x, Cell::Neutral) => Some(x),
            (a, b) if a == b => Some(a),
            _ => None,
        }
    }
}

pub type Row = Vec<Cell>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TernaryMatrix {
    columns: Vec<u32>,
    rows: Vec<Row>,
}

impl TernaryMatrix {
    pub fn new(columns: Vec<u32>, rows: Vec<Row>) -> Result<Self, MatrixError> {
        if columns.first() == Some(&0) || columns.windows(2).any(|w| w[0] >= w[1]) {
            return Err(MatrixError::BadColumns);
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != columns.len() {
                return Err(MatrixError::RowWidth {
                    row: i,
                    got: r.len(),
                    expected: columns.len(),
                });
            }
        }
        Ok(TernaryMatrix { columns, rows })
    }

    /// Builds a matrix from rows written as strings of `0`, `1` and `.`.
    pub fn from_strings(columns: Vec<u32>, rows: &[&str]) -> Result<Self, MatrixError> {
        let rows = rows
            .iter()
            .map(|s| s.chars().map(Cell::from_char).collect::<Result<Row, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        TernaryMatrix::new(columns, rows)
    }

    /// The matrix with no rows (no satisfying assignment).
    pub fn empty(columns: Vec<u32>) -> Result<Self, MatrixError> {
        TernaryMatrix::new(columns, Vec::new())
    }

    /// The seven satisfying assignments of a clause over its three variables.
    pub fn clause_matrix(c: &Clause) -> TernaryMatrix {
        let lits = c.sorted_lits();
        let columns = lits.iter().map(|l| l.var).collect();
        let mut rows = Vec::with_capacity(7);
        for code in 0u8..8 {
            let bits = [code >> 2 & 1 == 1, code >> 1 & 1 == 1, code & 1 == 1];
            if lits.iter().zip(bits).any(|(l, b)| l.is_satisfied_by(b)) {
                rows.push(bits.iter().map(|&b| Cell::from_bit(b)).collect());
            }
        }
        TernaryMatrix { columns, rows }
    }

    pub fn columns(&self) -> &[u32] {
        &self.columns
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Pads the matrix with neutral columns so that it ranges over `vars`.
    pub fn extend(&self, vars: &[u32]) -> Result<TernaryMatrix, MatrixError> {
        let mut target: Vec<u32> = vars.to_vec();
        target.sort_unstable();
        target.dedup();
        if target.first() == Some(&0) {
            return Err(MatrixError::BadColumns);
        }
        let mut index = Vec::with_capacity(target.len());
        for &v in &target {
            index.push(self.columns.binary_search(&v).ok());
        }
        for &c in &self.columns {
            if target.binary_search(&c).is_err() {
                return Err(MatrixError::NotASuperset(c));
            }
        }
        let rows = self
            .rows
            .iter()
            .map(|r| index.iter().map(|i| i.map_or(Cell::Neutral, |i| r[i])).collect())
            .collect();
        Ok(TernaryMatrix {
            columns: target,
            rows,
        })
    }

    /// Canonical form: pairwise disjoint rows, merged to a fixpoint, sorted.
    ///
    /// The result depends only on the set of assignments denoted by the
    /// matrix. Columns that are neutral in every row stay neutral; the rest
    /// are expanded to single assignments and then merged in passes, each
    /// pass merging every pair of rows that differ only in one chosen column.
    /// The column with the most mergeable pairs goes first (ties go to the
    /// higher variable), and counts are refreshed after every pass.
    ///
    /// With more than [`EXACT_REDUCE_COLUMNS`] non-neutral columns the rows
    /// are split into disjoint cubes instead of being expanded; the result
    /// is still a disjoint, merged, sorted cover of the same set, but two
    /// different covers of one set need not map to the same rows.
    pub fn reduce(&self) -> TernaryMatrix {
        let width = self.columns.len();
        let cylinder: Vec<bool> = (0..width)
            .map(|j| self.rows.iter().all(|r| r[j] == Cell::Neutral))
            .collect();
        let active: Vec<usize> = (0..width).filter(|&j| !cylinder[j]).collect();
        let projected: Vec<Row> = self
            .rows
            .iter()
            .map(|r| active.iter().map(|&j| r[j]).collect())
            .collect();

        let mut work = if active.len() <= EXACT_REDUCE_COLUMNS {
            expand_minterms(&projected, active.len())
        } else {
            make_disjoint(&projected)
        };
        merge_passes(&mut work, active.len());

        let mut rows: Vec<Row> = work
            .into_iter()
            .map(|r| {
                let mut full = vec![Cell::Neutral; width];
                for (k, &j) in active.iter().enumerate() {
                    full[j] = r[k];
                }
                full
            })
            .collect();
        if self.rows.is_empty() {
            rows.clear();
        }
        rows.sort();
        TernaryMatrix {
            columns: self.columns.clone(),
            rows,
        }
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.reduce()
    }

    /// Union of the two assignment sets, in canonical form.
    pub fn disjoin(&self, other: &TernaryMatrix) -> TernaryMatrix {
        let (a, b) = self.aligned(other);
        let mut rows = a.rows;
        rows.extend(b.rows);
        TernaryMatrix {
            columns: a.columns,
            rows,
        }
        .reduce()
    }

    /// Intersection of the two assignment sets, in canonical form: every
    /// pair of rows contributes its cell-wise meet when the rows are
    /// compatible.
    pub fn conjoin(&self, other: &TernaryMatrix) -> TernaryMatrix {
        let (a, b) = self.aligned(other);
        let mut rows = Vec::new();
        for r in &a.rows {
            for s in &b.rows {
                if let Some(m) = r.iter().zip(s).map(|(x, y)| x.meet(*y)).collect() {
                    rows.push(m);
                }
            }
        }
        TernaryMatrix {
            columns: a.columns,
            rows,
        }
        .reduce()
    }

    fn aligned(&self, other: &TernaryMatrix) -> (TernaryMatrix, TernaryMatrix) {
        let mut vars = self.columns.clone();
        vars.extend_from_slice(&other.columns);
        vars.sort_unstable();
        vars.dedup();
        (
            self.extend(&vars).expect("superset by construction"),
            other.extend(&vars).expect("superset by construction"),
        )
    }

    /// Splits the canonical form into blocks, one per row, each block being
    /// a single full row over the columns that row fixes.
    pub fn block_decompose(&self) -> Vec<TernaryMatrix> {
        self.reduce()
            .rows
            .iter()
            .map(|r| row_block(&self.columns, r))
            .collect()
    }

    /// Every way of writing the matrix as a disjoint union of the fewest
    /// possible cubes, each cube given as a block. Limited to
    /// [`DECOMPOSITION_SEARCH_COLUMNS`] columns.
    pub fn minimum_block_decompositions(&self) -> Result<Vec<Vec<TernaryMatrix>>, MatrixError> {
        let k = self.columns.len();
        if k > DECOMPOSITION_SEARCH_COLUMNS {
            return Err(MatrixError::CutoffExceeded {
                n: k,
                cutoff: DECOMPOSITION_SEARCH_COLUMNS,
            });
        }
        let target = self.point_mask();
        let cubes: Vec<(Row, u64)> = all_cubes(k)
            .into_iter()
            .map(|c| {
                let mask = cube_points(&c);
                (c, mask)
            })
            .filter(|(_, m)| m & !target == 0)
            .collect();
        let mut best: Option<usize> = None;
        let mut found: Vec<Vec<usize>> = Vec::new();
        let mut stack = Vec::new();
        exact_covers(target, &cubes, &mut stack, &mut best, &mut found);
        Ok(found
            .into_iter()
            .map(|cover| {
                cover
                    .into_iter()
                    .map(|i| row_block(&self.columns, &cubes[i].0))
                    .collect()
            })
            .collect())
    }

    /// Bitmask over the `2^k` points of the matrix's own columns (at most 6),
    /// point bit `j` holding the value of column `j`.
    fn point_mask(&self) -> u64 {
        let mut m = 0u64;
        for r in &self.rows {
            m |= cube_points(r);
        }
        m
    }

    /// Number of assignments of `x_1..x_n` the matrix denotes.
    pub fn count_models(&self, n: usize) -> Result<BigUint, MatrixError> {
        self.check_range(n)?;
        let free_outside = (n - self.columns.len()) as u64;
        let mut total = BigUint::from(0u32);
        for r in make_disjoint(&self.rows) {
            let neutral = r.iter().filter(|c| **c == Cell::Neutral).count() as u64;
            total += BigUint::from(1u32) << (neutral + free_outside);
        }
        Ok(total)
    }

    /// All denoted assignments of `x_1..x_n` as codes (bit `i - 1` is `x_i`).
    pub fn enumerate_models(&self, n: usize) -> Result<BTreeSet<u64>, MatrixError> {
        self.check_range(n)?;
        if n > ENUMERATION_CUTOFF {
            return Err(MatrixError::CutoffExceeded {
                n,
                cutoff: ENUMERATION_CUTOFF,
            });
        }
        Ok((0..1u64 << n).filter(|&code| self.contains_code(code)).collect())
    }

    pub fn contains_code(&self, code: u64) -> bool {
        self.rows.iter().any(|r| {
            r.iter()
                .zip(&self.columns)
                .all(|(c, &v)| c.admits(code >> (v - 1) & 1 == 1))
        })
    }

    fn check_range(&self, n: usize) -> Result<(), MatrixError> {
        match self.columns.last() {
            Some(&v) if v as usize > n => Err(MatrixError::ColumnOutOfRange { var: v, n }),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for TernaryMatrix {
    /// Header of variable names, then one line per row with `.` for neutral.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.columns.iter().map(|v| format!("x{v}")).collect();
        writeln!(f, "{}", names.join(" "))?;
        for r in &self.rows {
            let cells: Vec<String> = r
                .iter()
                .zip(&names)
                .map(|(c, name)| format!("{:<w$}", c.as_char(), w = name.len()))
                .collect();
            writeln!(f, "{}", cells.join(" ").trim_end())?;
        }
        Ok(())
    }
}

fn row_block(columns: &[u32], r: &[Cell]) -> TernaryMatrix {
    let (cols, cells): (Vec<u32>, Row) = columns
        .iter()
        .zip(r)
        .filter(|(_, c)| **c != Cell::Neutral)
        .map(|(&v, &c)| (v, c))
        .unzip();
    TernaryMatrix {
        columns: cols,
        rows: vec![cells],
    }
}

fn expand_minterms(rows: &[Row], width: usize) -> Vec<Row> {
    let mut codes: HashSet<u64> = HashSet::new();
    for r in rows {
        let mut base = 0u64;
        let mut free = Vec::new();
        for (j, c) in r.iter().enumerate() {
            match c {
                Cell::One => base |= 1 << j,
                Cell::Neutral => free.push(j),
                Cell::Zero => {}
            }
        }
        for sub in 0u64..1 << free.len() {
            let mut code = base;
            for (k, &j) in free.iter().enumerate() {
                code |= (sub >> k & 1) << j;
            }
            codes.insert(code);
        }
    }
    let mut codes: Vec<u64> = codes.into_iter().collect();
    codes.sort_unstable();
    codes
        .into_iter()
        .map(|code| (0..width).map(|j| Cell::from_bit(code >> j & 1 == 1)).collect())
        .collect()
}

/// `r` minus `s` as disjoint cubes.
fn cube_difference(r: &[Cell], s: &[Cell]) -> Vec<Row> {
    let disjoint = r
        .iter()
        .zip(s)
        .any(|(a, b)| a.meet(*b).is_none());
    if disjoint {
        return vec![r.to_vec()];
    }
    let mut out = Vec::new();
    let mut cur = r.to_vec();
    for j in 0..r.len() {
        if cur[j] == Cell::Neutral && s[j] != Cell::Neutral {
            let mut piece = cur.clone();
            piece[j] = if s[j] == Cell::Zero { Cell::One } else { Cell::Zero };
            out.push(piece);
            cur[j] = s[j];
        }
    }
    out
}

/// Splits overlapping rows so that every assignment is covered exactly once.
fn make_disjoint(rows: &[Row]) -> Vec<Row> {
    let mut out: Vec<Row> = Vec::new();
    for r in rows {
        let mut pieces = vec![r.clone()];
        for s in &out {
            pieces = pieces.iter().flat_map(|p| cube_difference(p, s)).collect();
            if pieces.is_empty() {
                break;
            }
        }
        out.extend(pieces);
    }
    out
}

fn merge_passes(rows: &mut Vec<Row>, width: usize) {
    loop {
        let present: HashSet<&Row> = rows.iter().collect();
        let mut best: Option<(usize, usize)> = None;
        for j in 0..width {
            let count = rows
                .iter()
                .filter(|r| r[j] == Cell::Zero && present.contains(&flipped(r, j)))
                .count();
            if count > 0 && best.is_none_or(|(_, c)| count >= c) {
                best = Some((j, count));
            }
        }
        let Some((j, _)) = best else { break };
        let present: HashSet<Row> = rows.iter().cloned().collect();
        let mut next = Vec::with_capacity(rows.len());
        for r in rows.iter() {
            match r[j] {
                Cell::Zero if present.contains(&flipped(r, j)) => {
                    let mut m = r.clone();
                    m[j] = Cell::Neutral;
                    next.push(m);
                }
                Cell::One if present.contains(&flipped(r, j)) => {}
                _ => next.push(r.clone()),
            }
        }
        *rows = next;
    }
}

fn flipped(r: &[Cell], j: usize) -> Row {
    let mut s = r.to_vec();
    s[j] = match s[j] {
        Cell::Zero => Cell::One,
        Cell::One => Cell::Zero,
        Cell::Neutral => Cell::Neutral,
    };
    s
}

fn all_cubes(k: usize) -> Vec<Row> {
    let mut cubes = vec![Vec::new()];
    for _ in 0..k {
        cubes = cubes
            .into_iter()
            .flat_map(|c: Row| {
                [Cell::Zero, Cell::One, Cell::Neutral].map(|x| {
                    let mut d = c.clone();
                    d.push(x);
                    d
                })
            })
            .collect();
    }
    cubes
}

fn cube_points(r: &[Cell]) -> u64 {
    let mut m = 0u64;
    for p in 0..1u64 << r.len() {
        if r.iter().enumerate().all(|(j, c)| c.admits(p >> j & 1 == 1)) {
            m |= 1 << p;
        }
    }
    m
}

/// Collects every exact cover of `remaining` by disjoint cubes whose size
/// equals the smallest cover size seen so far. Cubes are chosen in index
/// order at the lowest uncovered point, so each cover is produced once.
fn exact_covers(
    remaining: u64,
    cubes: &[(Row, u64)],
    stack: &mut Vec<usize>,
    best: &mut Option<usize>,
    found: &mut Vec<Vec<usize>>,
) {
    if remaining == 0 {
        let size = stack.len();
        match *best {
            Some(b) if size > b => {}
            Some(b) if size == b => found.push(stack.clone()),
            _ => {
                *best = Some(size);
                found.clear();
                found.push(stack.clone());
            }
        }
        return;
    }
    if best.is_some_and(|b| stack.len() >= b) {
        return;
    }
    let low = remaining & remaining.wrapping_neg();
    for (i, (_, mask)) in cubes.iter().enumerate() {
        if mask & low != 0 && mask & !remaining == 0 {
            stack.push(i);
            exact_covers(remaining & !mask, cubes, stack, best, found);
            stack.pop();
        }
    }
}
