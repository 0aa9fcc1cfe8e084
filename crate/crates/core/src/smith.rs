//! Smith normal form of integer matrices.
//!
//! Elimination runs in two phases. Unit entries are pivoted away first on a
//! sparse representation (boundary matrices of order complexes are mostly
//! ±1), then whatever is left is reduced densely with the smallest nonzero
//! entry as pivot. Ties go to the smallest (row, column).
//!
//! [`smith_normal_form`] first tries checked `i64` arithmetic and redoes the
//! whole computation with big integers if any operation would overflow.
//! [`smith_normal_form_i64`] stops at the first overflow and reports it.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    /// Panics if the rows have different lengths.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        IntMatrix { rows: rows.len(), cols, data: rows.concat() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: i64) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// `self * rhs` computed exactly; `None` if the shapes disagree.
    pub fn mul_exact(&self, rhs: &IntMatrix) -> Option<Vec<Vec<i128>>> {
        if self.cols != rhs.rows {
            return None;
        }
        let mut out = vec![vec![0i128; rhs.cols]; self.rows];
        for (i, row) in out.iter_mut().enumerate() {
            for k in 0..self.cols {
                let a = i128::from(self.get(i, k));
                if a == 0 {
                    continue;
                }
                for (j, cell) in row.iter_mut().enumerate() {
                    *cell += a * i128::from(rhs.get(k, j));
                }
            }
        }
        Some(out)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|r| self.row(r))).finish()
    }
}

/// Nonzero diagonal of the Smith normal form, in divisibility order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub invariant_factors: Vec<BigInt>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    /// Factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors.iter().filter(|d| !d.is_one()).cloned().collect()
    }

    pub fn is_divisibility_chain(&self) -> bool {
        self.invariant_factors.iter().all(|d| d.is_positive())
            && self.invariant_factors.windows(2).all(|w| Zero::is_zero(&(&w[1] % &w[0])))
    }
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum SmithError {
    #[error("64-bit arithmetic overflow during elimination")]
    Overflow,
}

/// Smith normal form, exact for every input.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    smith_normal_form_i64(m).unwrap_or_else(|_| smith_normal_form_big(m))
}

/// Smith normal form in checked 64-bit arithmetic.
pub fn smith_normal_form_i64(m: &IntMatrix) -> Result<SmithForm, SmithError> {
    let factors = reduce::<i64>(m).ok_or(SmithError::Overflow)?;
    Ok(SmithForm { invariant_factors: factors.into_iter().map(BigInt::from).collect() })
}

/// Smith normal form in arbitrary precision.
pub fn smith_normal_form_big(m: &IntMatrix) -> SmithForm {
    SmithForm { invariant_factors: reduce::<BigInt>(m).expect("big integers never overflow") }
}

/// Ring operations elimination needs. Fallible ops return `None` on overflow.
trait Entry: Clone + Eq + fmt::Debug + Sized {
    fn from_i64(x: i64) -> Self;
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn cmp_abs(&self, other: &Self) -> Ordering;
    /// `self - q * b`.
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self>;
    fn add(&self, b: &Self) -> Option<Self>;
    fn mul(&self, b: &Self) -> Option<Self>;
    /// Truncating quotient.
    fn quot(&self, b: &Self) -> Option<Self>;
    fn divides(&self, other: &Self) -> bool;
    fn abs(&self) -> Option<Self>;
}

impl Entry for i64 {
    fn from_i64(x: i64) -> Self {
        x
    }
    fn zero() -> Self {
        0
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn cmp_abs(&self, other: &Self) -> Ordering {
        self.unsigned_abs().cmp(&other.unsigned_abs())
    }
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        self.checked_sub(q.checked_mul(*b)?)
    }
    fn add(&self, b: &Self) -> Option<Self> {
        self.checked_add(*b)
    }
    fn mul(&self, b: &Self) -> Option<Self> {
        self.checked_mul(*b)
    }
    fn quot(&self, b: &Self) -> Option<Self> {
        self.checked_div(*b)
    }
    fn divides(&self, other: &Self) -> bool {
        // |self| >= 1 here; i64::MIN % -1 is the only overflow and divides.
        *self == -1 || other % self == 0
    }
    fn abs(&self) -> Option<Self> {
        self.checked_abs()
    }
}

impl Entry for BigInt {
    fn from_i64(x: i64) -> Self {
        BigInt::from(x)
    }
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.magnitude().is_one()
    }
    fn cmp_abs(&self, other: &Self) -> Ordering {
        self.magnitude().cmp(other.magnitude())
    }
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        Some(self - q * b)
    }
    fn add(&self, b: &Self) -> Option<Self> {
        Some(self + b)
    }
    fn mul(&self, b: &Self) -> Option<Self> {
        Some(self * b)
    }
    fn quot(&self, b: &Self) -> Option<Self> {
        Some(self / b)
    }
    fn divides(&self, other: &Self) -> bool {
        other.is_multiple_of(self)
    }
    fn abs(&self) -> Option<Self> {
        Some(Signed::abs(self))
    }
}

/// Invariant factors of `m`, or `None` on overflow.
fn reduce<T: Entry>(m: &IntMatrix) -> Option<Vec<T>> {
    let mut sparse = Sparse::<T>::new(m);
    let units = sparse.eliminate_units()?;
    let mut rest = dense_factors(sparse.into_dense())?;
    let mut out = vec![T::from_i64(1); units];
    out.append(&mut rest);
    Some(out)
}

struct Sparse<T> {
    rows: Vec<BTreeMap<usize, T>>,
    col_rows: Vec<BTreeSet<usize>>,
}

impl<T: Entry> Sparse<T> {
    fn new(m: &IntMatrix) -> Self {
        let mut rows = vec![BTreeMap::new(); m.rows()];
        let mut col_rows = vec![BTreeSet::new(); m.cols()];
        for (r, row) in rows.iter_mut().enumerate() {
            for (c, holders) in col_rows.iter_mut().enumerate() {
                let x = m.get(r, c);
                if x != 0 {
                    row.insert(c, T::from_i64(x));
                    holders.insert(r);
                }
            }
        }
        Sparse { rows, col_rows }
    }

    /// Pivots on ±1 entries until none remain; returns how many were used.
    fn eliminate_units(&mut self) -> Option<usize> {
        let mut count = 0;
        loop {
            let mut progress = false;
            for col in 0..self.col_rows.len() {
                let pivot_row = self.col_rows[col].iter().copied().find(|&r| self.rows[r][&col].is_unit());
                if let Some(row) = pivot_row {
                    self.pivot_unit(row, col)?;
                    count += 1;
                    progress = true;
                }
            }
            if !progress {
                return Some(count);
            }
        }
    }

    /// Clears column `col` with row `row` (whose entry there is ±1), then
    /// drops both. Column operations would clear the rest of the row
    /// without touching any other row, so they are skipped.
    fn pivot_unit(&mut self, row: usize, col: usize) -> Option<()> {
        let pivot_row = std::mem::take(&mut self.rows[row]);
        let unit = pivot_row[&col].clone();
        let targets: Vec<usize> = self.col_rows[col].iter().copied().filter(|&r| r != row).collect();
        for r in targets {
            // unit is its own inverse
            let q = self.rows[r][&col].mul(&unit)?;
            for (&c, value) in &pivot_row {
                let current = self.rows[r].get(&c).cloned().unwrap_or_else(T::zero);
                let updated = current.sub_mul(&q, value)?;
                if updated.is_zero() {
                    self.rows[r].remove(&c);
                    self.col_rows[c].remove(&r);
                } else {
                    self.rows[r].insert(c, updated);
                    self.col_rows[c].insert(r);
                }
            }
        }
        for &c in pivot_row.keys() {
            self.col_rows[c].remove(&row);
        }
        debug_assert!(self.col_rows[col].is_empty());
        Some(())
    }

    /// Remaining nonzero rows and columns as a dense matrix.
    fn into_dense(self) -> Vec<Vec<T>> {
        let cols: Vec<usize> = (0..self.col_rows.len()).filter(|&c| !self.col_rows[c].is_empty()).collect();
        self.rows
            .into_iter()
            .filter(|r| !r.is_empty())
            .map(|r| cols.iter().map(|c| r.get(c).cloned().unwrap_or_else(T::zero)).collect())
            .collect()
    }
}

fn dense_factors<T: Entry>(mut a: Vec<Vec<T>>) -> Option<Vec<T>> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut factors = Vec::new();
    for t in 0..m.min(n) {
        let Some((pi, pj)) = smallest_in(&a, t..m, t..n) else { break };
        a.swap(t, pi);
        swap_cols(&mut a, t, pj);
        loop {
            // Bring the smallest entry of row t / column t to the corner.
            let col_min = smallest_in(&a, t..m, t..t + 1);
            let row_min = smallest_in(&a, t..t + 1, t..n);
            let (pi, pj) = match (col_min, row_min) {
                (Some(x), Some(y)) => {
                    if a[y.0][y.1].cmp_abs(&a[x.0][x.1]) == Ordering::Less {
                        y
                    } else {
                        x
                    }
                }
                (Some(x), None) | (None, Some(x)) => x,
                (None, None) => unreachable!("corner is nonzero"),
            };
            a.swap(t, pi);
            swap_cols(&mut a, t, pj);

            let p = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..m {
                if !a[i][t].is_zero() {
                    let q = a[i][t].quot(&p)?;
                    let (upper, lower) = a.split_at_mut(i);
                    for (x, y) in lower[0][t..].iter_mut().zip(&upper[t][t..]) {
                        *x = x.sub_mul(&q, y)?;
                    }
                    clean &= a[i][t].is_zero();
                }
            }
            for j in t + 1..n {
                if !a[t][j].is_zero() {
                    let q = a[t][j].quot(&p)?;
                    for row in a.iter_mut().skip(t) {
                        row[j] = row[j].sub_mul(&q, &row[t])?;
                    }
                    clean &= a[t][j].is_zero();
                }
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !p.divides(&a[i][j])));
            match offender {
                Some(i) => {
                    let (upper, lower) = a.split_at_mut(i);
                    for (x, y) in upper[t][t..].iter_mut().zip(&lower[0][t..]) {
                        *x = x.add(y)?;
                    }
                }
                None => break,
            }
        }
        factors.push(a[t][t].abs()?);
    }
    Some(factors)
}

fn smallest_in<T: Entry>(
    a: &[Vec<T>],
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            if a[i][j].is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if a[i][j].cmp_abs(&a[bi][bj]) != Ordering::Less => {}
                _ => best = Some((i, j)),
            }
            if a[i][j].is_unit() {
                return best;
            }
        }
    }
    best
}

fn swap_cols<T>(a: &mut [Vec<T>], x: usize, y: usize) {
    if x != y {
        for row in a.iter_mut() {
            row.swap(x, y);
        }
    }
}
