//! Exact linear algebra over the scalar field: reduced row echelon form,
//! right-nullspace bases, and membership of a vector in a span.
//!
//! Everything here is deterministic: the reduced echelon form of a row space
//! is unique, so the outputs depend only on the input and the column order.

use crate::scalar::Scalar;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected vectors of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// A sparse row: strictly increasing column indices, no zero entries.
pub(crate) type SparseRow = Vec<(usize, Scalar)>;

pub(crate) fn sparse_from_dense(dense: &[Scalar]) -> SparseRow {
    dense
        .iter()
        .enumerate()
        .filter(|(_, s)| !s.is_zero())
        .map(|(j, s)| (j, s.clone()))
        .collect()
}

fn entry_at(row: &SparseRow, col: usize) -> Option<&Scalar> {
    row.binary_search_by_key(&col, |(j, _)| *j)
        .ok()
        .map(|k| &row[k].1)
}

/// dst -= factor * src
fn row_sub_scaled(dst: &SparseRow, factor: &Scalar, src: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let (mut a, mut b) = (0, 0);
    while a < dst.len() || b < src.len() {
        match (dst.get(a), src.get(b)) {
            (Some((ja, va)), Some((jb, vb))) if ja == jb => {
                let v = va - &(factor * vb);
                if !v.is_zero() {
                    out.push((*ja, v));
                }
                a += 1;
                b += 1;
            }
            (Some((ja, va)), Some((jb, _))) if ja < jb => {
                out.push((*ja, va.clone()));
                a += 1;
            }
            (Some(_), Some((jb, vb))) | (None, Some((jb, vb))) => {
                let v = -&(factor * vb);
                if !v.is_zero() {
                    out.push((*jb, v));
                }
                b += 1;
            }
            (Some((ja, va)), None) => {
                out.push((*ja, va.clone()));
                a += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Incremental reduced-row-echelon accumulator.
///
/// Rows are inserted one at a time and kept fully inter-reduced, so after any
/// number of insertions the pivot rows are exactly the RREF of the span of
/// everything inserted so far.
#[derive(Default)]
pub(crate) struct Rref {
    /// pivot column -> row with leading 1 at that column
    pivots: BTreeMap<usize, SparseRow>,
}

impl Rref {
    pub fn new() -> Self {
        Rref::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn insert(&mut self, mut row: SparseRow) {
        while let Some(col) = row
            .iter()
            .map(|(j, _)| *j)
            .find(|j| self.pivots.contains_key(j))
        {
            let factor = entry_at(&row, col).unwrap().clone();
            row = row_sub_scaled(&row, &factor, &self.pivots[&col]);
        }
        let Some((lead_col, lead_val)) = row.first().cloned() else {
            return;
        };
        if !lead_val.is_one() {
            let inv = lead_val.checked_inv().unwrap();
            for (_, v) in row.iter_mut() {
                *v = &*v * &inv;
            }
        }
        let cols_to_fix: Vec<usize> = self
            .pivots
            .iter()
            .filter(|(_, r)| entry_at(r, lead_col).is_some())
            .map(|(c, _)| *c)
            .collect();
        for c in cols_to_fix {
            let factor = entry_at(&self.pivots[&c], lead_col).unwrap().clone();
            let fixed = row_sub_scaled(&self.pivots[&c], &factor, &row);
            self.pivots.insert(c, fixed);
        }
        self.pivots.insert(lead_col, row);
    }

    pub fn pivot_cols(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    pub fn pivot_row(&self, col: usize) -> &SparseRow {
        &self.pivots[&col]
    }

    /// Basis of the right nullspace on `cols` columns, one vector per free
    /// column in ascending order, each scaled so its first nonzero entry is 1.
    pub fn kernel(&self, cols: usize) -> Vec<Vec<Scalar>> {
        let mut basis = Vec::new();
        for free in 0..cols {
            if self.pivots.contains_key(&free) {
                continue;
            }
            let mut v = vec![Scalar::zero(); cols];
            v[free] = Scalar::one();
            for (&pc, row) in &self.pivots {
                if let Some(e) = entry_at(row, free) {
                    v[pc] = -e;
                }
            }
            let lead = v
                .iter()
                .find(|s| !s.is_zero())
                .cloned()
                .expect("kernel vector has a unit entry");
            if !lead.is_one() {
                let inv = lead.checked_inv().unwrap();
                for s in v.iter_mut() {
                    *s = &*s * &inv;
                }
            }
            basis.push(v);
        }
        basis
    }
}

/// A dense matrix of exact scalars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            entries: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(
            rows.iter().all(|r| r.len() == ncols),
            "ragged matrix rows"
        );
        ExactMatrix {
            rows: nrows,
            cols: ncols,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(Scalar::zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.rref().rank()
    }

    fn rref(&self) -> Rref {
        let mut rref = Rref::new();
        for r in 0..self.rows {
            rref.insert(sparse_from_dense(self.row(r)));
        }
        rref
    }
}

/// Exact basis of `{v : m·v = 0}`.
pub fn kernel_basis(m: &ExactMatrix) -> Vec<Vec<Scalar>> {
    m.rref().kernel(m.cols())
}

/// Exact coefficients `c` with `Σ c_j·generators[j] = target`, or `None`
/// when the target is outside the span. Free coefficients are set to zero.
pub fn solve_in_span(
    target: &[Scalar],
    generators: &[Vec<Scalar>],
) -> Result<Option<Vec<Scalar>>, LinalgError> {
    let n = target.len();
    for g in generators {
        if g.len() != n {
            return Err(LinalgError::DimensionMismatch {
                expected: n,
                got: g.len(),
            });
        }
    }
    let mut rref = Rref::new();
    for j in 0..n {
        let mut row: SparseRow = Vec::new();
        for (k, g) in generators.iter().enumerate() {
            if !g[j].is_zero() {
                row.push((k, g[j].clone()));
            }
        }
        if !target[j].is_zero() {
            row.push((generators.len(), target[j].clone()));
        }
        rref.insert(row);
    }
    if rref.pivot_cols().any(|c| c == generators.len()) {
        return Ok(None);
    }
    let mut coeffs = vec![Scalar::zero(); generators.len()];
    for c in rref.pivot_cols().collect::<Vec<_>>() {
        if let Some(e) = entry_at(rref.pivot_row(c), generators.len()) {
            coeffs[c] = e.clone();
        }
    }
    Ok(Some(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn kernel_of_zero_matrix_is_standard_basis() {
        let m = ExactMatrix::zeros(2, 3);
        let basis = kernel_basis(&m);
        assert_eq!(basis.len(), 3);
        for (k, v) in basis.iter().enumerate() {
            for (j, e) in v.iter().enumerate() {
                assert_eq!(e, &s(if j == k { 1 } else { 0 }));
            }
        }
    }

    #[test]
    fn kernel_of_single_relation() {
        let m = ExactMatrix::from_rows(vec![vec![s(1), s(1)]]);
        let basis = kernel_basis(&m);
        assert_eq!(basis, vec![vec![s(1), s(-1)]]);
    }

    #[test]
    fn duplicate_row_adds_no_rank() {
        let m = ExactMatrix::from_rows(vec![
            vec![s(1), s(2), s(3)],
            vec![s(2), s(4), s(6)],
        ]);
        let basis = kernel_basis(&m);
        assert_eq!(basis.len(), 2);
        assert_eq!(m.rank(), 1);
        for v in &basis {
            assert!(m.mul_vec(v).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn kernel_is_deterministic() {
        let m = ExactMatrix::from_rows(vec![
            vec![s(0), s(1), s(4), s(-1)],
            vec![s(2), s(0), s(2), s(2)],
            vec![s(2), s(1), s(6), s(1)],
        ]);
        let a = kernel_basis(&m);
        let b = kernel_basis(&m);
        assert_eq!(a, b);
        assert_eq!(a.len() + m.rank(), m.cols());
    }

    #[test]
    fn span_solve_zero_target() {
        let gens = vec![vec![s(1), s(0)], vec![s(0), s(2)]];
        let c = solve_in_span(&[s(0), s(0)], &gens).unwrap().unwrap();
        assert_eq!(c, vec![s(0), s(0)]);
    }

    #[test]
    fn span_solve_picks_out_generator() {
        let gens = vec![vec![s(1), s(3), s(0)], vec![s(0), s(1), s(1)]];
        let c = solve_in_span(&[s(1), s(3), s(0)], &gens).unwrap().unwrap();
        assert_eq!(c, vec![s(1), s(0)]);
    }

    #[test]
    fn span_solve_two_by_two() {
        let gens = vec![vec![s(1), s(0)], vec![s(0), s(2)]];
        let c = solve_in_span(&[s(1), s(1)], &gens).unwrap().unwrap();
        assert_eq!(c, vec![s(1), Scalar::from_ratio(1, 2)]);
    }

    #[test]
    fn span_solve_detects_outsiders() {
        let gens = vec![vec![s(1), s(0)]];
        assert_eq!(solve_in_span(&[s(0), s(1)], &gens).unwrap(), None);
    }

    #[test]
    fn span_solve_rejects_ragged_input() {
        let gens = vec![vec![s(1)]];
        assert!(matches!(
            solve_in_span(&[s(1), s(0)], &gens),
            Err(LinalgError::DimensionMismatch { .. })
        ));
    }
}
