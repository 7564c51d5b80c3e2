use super::mat::Mat;
use super::ModuleInvariants;
use crate::ring::Elem;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum LinalgError {
    #[error("ring {0} not supported by smith normal form; use the groebner path")]
    UnsupportedRing(String),
    #[error("composition d_out * d_in is nonzero")]
    CompositionNonzero,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Invertible transforms bringing a matrix to diagonal form:
/// `left * m * right = diag` with a divisibility chain on the diagonal.
#[derive(Debug, Clone)]
pub struct SnfResult {
    pub left: Mat,
    pub diag: Mat,
    pub right: Mat,
    pub right_inv: Mat,
    /// number of nonzero diagonal entries
    pub rank: usize,
}

impl SnfResult {
    pub fn diagonal_entries(&self) -> Vec<Elem> {
        let n = self.diag.rows.min(self.diag.cols);
        (0..n).map(|i| self.diag.at(i, i).clone()).collect()
    }
}

pub fn smith_normal_form(m: &Mat) -> Result<SnfResult, LinalgError> {
    if !m.core.supports_snf() {
        return Err(LinalgError::UnsupportedRing(m.core.to_string()));
    }
    let core = m.core.clone();
    let mut a = m.clone();
    let mut left = Mat::identity(&core, m.rows);
    let mut right = Mat::identity(&core, m.cols);
    let mut right_inv = Mat::identity(&core, m.cols);

    let n = m.rows.min(m.cols);
    let mut t = 0;
    while t < n {
        // pivot: nonzero entry of smallest size in the remaining block
        let mut pivot: Option<(usize, usize, u64)> = None;
        for i in t..m.rows {
            for j in t..m.cols {
                if !a.at(i, j).is_zero() {
                    let s = core.size_hint(a.at(i, j));
                    if pivot.is_none_or(|(_, _, ps)| s < ps) {
                        pivot = Some((i, j, s));
                    }
                }
            }
        }
        let Some((pi, pj, _)) = pivot else { break };
        a.swap_rows(t, pi);
        left.swap_rows(t, pi);
        a.swap_cols(t, pj);
        right.swap_cols(t, pj);
        right_inv.swap_rows(t, pj);

        loop {
            let mut touched = false;
            // clear column t
            for i in t + 1..m.rows {
                if a.at(i, t).is_zero() {
                    continue;
                }
                touched = true;
                let p = a.at(t, t).clone();
                let q = a.at(i, t).clone();
                if core.divides(&p, &q) {
                    let c = core.div_exact(&q, &p).neg();
                    a.add_row_multiple(i, t, &c);
                    left.add_row_multiple(i, t, &c);
                } else {
                    let (g, s, u) = core.gcd_bezout(&p, &q);
                    let pg = core.div_exact(&p, &g);
                    let qg = core.div_exact(&q, &g);
                    // [[s, u], [-q/g, p/g]] has determinant 1
                    a.row_block_op(t, i, &s, &u, &qg.neg(), &pg);
                    left.row_block_op(t, i, &s, &u, &qg.neg(), &pg);
                }
            }
            // clear row t
            for j in t + 1..m.cols {
                if a.at(t, j).is_zero() {
                    continue;
                }
                touched = true;
                let p = a.at(t, t).clone();
                let q = a.at(t, j).clone();
                if core.divides(&p, &q) {
                    let c = core.div_exact(&q, &p).neg();
                    a.add_col_multiple(j, t, &c);
                    right.add_col_multiple(j, t, &c);
                    // inverse: row op on right_inv
                    right_inv.add_row_multiple(t, j, &c.neg());
                } else {
                    let (g, s, u) = core.gcd_bezout(&p, &q);
                    let pg = core.div_exact(&p, &g);
                    let qg = core.div_exact(&q, &g);
                    a.col_block_op(t, j, &s, &u, &qg.neg(), &pg);
                    right.col_block_op(t, j, &s, &u, &qg.neg(), &pg);
                    // inverse of [[s, -q/g], [u, p/g]] (columns) is
                    // [[p/g, q/g], [-u, s]] acting on rows
                    right_inv.row_block_op(t, j, &pg, &qg, &u.neg(), &s);
                }
            }
            let col_clear = (t + 1..m.rows).all(|i| a.at(i, t).is_zero());
            let row_clear = (t + 1..m.cols).all(|j| a.at(t, j).is_zero());
            if col_clear && row_clear {
                break;
            }
            if !touched {
                break;
            }
        }

        // enforce divisibility of the remaining block by the pivot
        let p = a.at(t, t).clone();
        let mut offender = None;
        'scan: for i in t + 1..m.rows {
            for j in t + 1..m.cols {
                if !a.at(i, j).is_zero() && !core.divides(&p, a.at(i, j)) {
                    offender = Some(i);
                    break 'scan;
                }
            }
        }
        if let Some(i) = offender {
            let one = core.one();
            a.add_row_multiple(t, i, &one);
            left.add_row_multiple(t, i, &one);
            continue; // redo this pivot with the new row content
        }

        // normalize pivot to its canonical associate
        let (unit, assoc) = core.canonical_associate(a.at(t, t));
        if !unit.is_zero() && a.at(t, t) != &assoc {
            let uinv = core.invert(&unit);
            a.scale_row(t, &uinv);
            left.scale_row(t, &uinv);
        }
        t += 1;
    }

    let rank = (0..n).take_while(|&i| !a.at(i, i).is_zero()).count();
    Ok(SnfResult {
        left,
        diag: a,
        right,
        right_inv,
        rank,
    })
}

/// Basis of the kernel of `m` as the columns of the returned matrix.
pub fn kernel_basis(m: &Mat) -> Result<Mat, LinalgError> {
    let snf = smith_normal_form(m)?;
    let free = (snf.rank..m.cols).collect::<Vec<_>>();
    let all_rows = (0..m.cols).collect::<Vec<_>>();
    Ok(snf.right.submatrix(&all_rows, &free))
}

/// Invariants of ker(d_out) / im(d_in).
///
/// `d_in`: C_{i+1} -> C_i and `d_out`: C_i -> C_{i-1}, both over the same
/// PID core, with d_out * d_in = 0.
pub fn homology_invariants(d_in: &Mat, d_out: &Mat) -> Result<ModuleInvariants, LinalgError> {
    let (pres, _) = super::presented::homology_presentation(d_in, d_out)?;
    Ok(pres)
}

/// Is `v` in the column span of `l`?
pub fn in_image(l: &Mat, v: &[Elem]) -> Result<bool, LinalgError> {
    if v.len() != l.rows {
        return Err(LinalgError::DimensionMismatch(format!(
            "vector length {} vs {} rows",
            v.len(),
            l.rows
        )));
    }
    let core = l.core.clone();
    let snf = smith_normal_form(l)?;
    // v in im(l) iff left*v is divisible entrywise by the diagonal
    let mut w = vec![core.zero(); l.rows];
    for (i, wi) in w.iter_mut().enumerate() {
        for k in 0..l.rows {
            *wi = wi.add(&snf.left.at(i, k).mul(&v[k]));
        }
    }
    for (i, wi) in w.iter().enumerate() {
        if i < snf.rank {
            if !core.divides(snf.diag.at(i, i), wi) {
                return Ok(false);
            }
        } else if !wi.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}
