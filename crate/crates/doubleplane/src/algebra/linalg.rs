use super::field::{FieldElement, FieldSpec};

/// In-place reduced row echelon form; returns the pivot column of each pivot
/// row. Exact over any `FieldSpec`.
pub fn rref(field: &FieldSpec, mat: &mut Vec<Vec<FieldElement>>) -> Vec<usize> {
    let nrows = mat.len();
    let ncols = mat.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == nrows {
            break;
        }
        let Some(pr) = (row..nrows).find(|&r| !field.is_zero(&mat[r][col])) else {
            continue;
        };
        mat.swap(row, pr);
        let inv = field.inv(&mat[row][col]).unwrap();
        for c in col..ncols {
            mat[row][c] = field.mul(&mat[row][c], &inv);
        }
        for r in 0..nrows {
            if r != row && !field.is_zero(&mat[r][col]) {
                let factor = mat[r][col].clone();
                for c in col..ncols {
                    let t = field.mul(&factor, &mat[row][c]);
                    mat[r][c] = field.sub(&mat[r][c], &t);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Basis of the null space of the matrix (rows are equations).
pub fn kernel_basis(field: &FieldSpec, mat: &[Vec<FieldElement>], ncols: usize) -> Vec<Vec<FieldElement>> {
    let mut m: Vec<Vec<FieldElement>> = mat.to_vec();
    let pivots = rref(field, &mut m);
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![field.zero(); ncols];
        v[free] = field.one();
        for (prow, &pcol) in pivots.iter().enumerate() {
            // x_pcol = -sum over free columns of coefficient * x_free
            v[pcol] = field.neg(&m[prow][free]);
        }
        basis.push(v);
    }
    basis
}

/// Solve A x = b exactly; None when inconsistent. Free variables are set to
/// zero, so the solution is deterministic.
pub fn solve(field: &FieldSpec, a: &[Vec<FieldElement>], b: &[FieldElement]) -> Option<Vec<FieldElement>> {
    let nrows = a.len();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<FieldElement>> = Vec::with_capacity(nrows);
    for (row, rhs) in a.iter().zip(b.iter()) {
        let mut r = row.clone();
        r.push(rhs.clone());
        aug.push(r);
    }
    let pivots = rref(field, &mut aug);
    if pivots.last() == Some(&ncols) {
        return None; // pivot in the constants column
    }
    let mut x = vec![field.zero(); ncols];
    for (prow, &pcol) in pivots.iter().enumerate() {
        x[pcol] = aug[prow][ncols].clone();
    }
    Some(x)
}
