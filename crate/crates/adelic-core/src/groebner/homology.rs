use super::module::{module_groebner, module_membership, syzygies, ModVec};
use super::GroebnerError;
use crate::linalg::Mat;
use crate::ring::{BPoly, Elem, FieldSpec, Scalar};
use serde::Serialize;

/// Homology of a matrix pair over k[x,y]: a zero/nonzero verdict and, for
/// homogeneous inputs, the dimensions of the graded pieces up to the cap.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroebnerHomology {
    pub is_zero: bool,
    /// dim_k H_d for d = 0..=cap, present only for homogeneous inputs
    pub hilbert: Option<Vec<usize>>,
}

fn columns_as_vectors(m: &Mat) -> Vec<ModVec> {
    (0..m.cols)
        .map(|j| {
            ModVec(
                (0..m.rows)
                    .map(|i| match m.at(i, j) {
                        Elem::Bi(p) => p.clone(),
                        _ => panic!("bivariate matrix expected"),
                    })
                    .collect(),
            )
        })
        .collect()
}

fn field_of(m: &Mat) -> FieldSpec {
    match &m.core {
        crate::ring::CoreRing::BiPoly { coeff } => coeff.clone(),
        _ => panic!("bivariate core expected"),
    }
}

/// ker(d_out)/im(d_in) over k[x,y]: zero iff every syzygy of the columns of
/// d_out lies in the column module of d_in.
pub fn groebner_homology(
    d_in: &Mat,
    d_out: &Mat,
    degree_cap: u32,
) -> Result<GroebnerHomology, GroebnerError> {
    let field = field_of(d_out);
    if d_in.rows != d_out.cols {
        return Err(GroebnerError::CompositionNonzero);
    }
    // exact composition check
    if !d_out.mul(d_in).is_zero() {
        return Err(GroebnerError::CompositionNonzero);
    }

    let in_cols = columns_as_vectors(d_in);
    let image_gb = module_groebner(&in_cols, degree_cap)?;

    let is_zero = if d_out.rows == 0 {
        // kernel is everything: cokernel of d_in
        (0..d_out.cols).all(|i| {
            let mut e = ModVec::zero(&field, d_out.cols.max(1));
            if d_out.cols > 0 {
                e.0[i] = BPoly::constant(Scalar::one(&field));
            }
            module_membership(&e, &image_gb)
        })
    } else {
        let out_cols = columns_as_vectors(d_out);
        let kernel_gens = syzygies(&out_cols, degree_cap)?;
        kernel_gens
            .iter()
            .all(|s| module_membership(s, &image_gb))
    };

    let hilbert = if is_zero {
        None
    } else {
        hilbert_fingerprint(d_in, d_out, degree_cap)
    };

    Ok(GroebnerHomology { is_zero, hilbert })
}

/// Graded dimensions of ker(d_out)/im(d_in) for homogeneous matrices with a
/// consistent shift system; None when inhomogeneous.
fn hilbert_fingerprint(d_in: &Mat, d_out: &Mat, cap: u32) -> Option<Vec<usize>> {
    let field = field_of(d_out);
    let middle = d_out.cols;
    // infer shifts: middle starts at 0-shifts; entries must be homogeneous
    let mid_shifts = vec![0i64; middle];
    let tgt_shifts = infer_shifts(d_out, &mid_shifts, true)?;
    let src_shifts = infer_shifts(d_in, &mid_shifts, false)?;
    let mut dims = vec![];
    for d in 0..=cap as i64 {
        let mid_basis = graded_basis(&mid_shifts, d);
        let out_mat = graded_matrix(d_out, &tgt_shifts, &mid_shifts, d, &field);
        let in_mat = graded_matrix(d_in, &mid_shifts, &src_shifts, d, &field);
        let rank_out = scalar_rank(out_mat, &field);
        let rank_in = scalar_rank(in_mat, &field);
        dims.push(mid_basis.len() - rank_out - rank_in);
    }
    Some(dims)
}

/// Shifts of the other side of a homogeneous matrix. `rows_from_cols` picks
/// whether we derive row shifts (target) or column shifts (source).
fn infer_shifts(m: &Mat, mid: &[i64], rows_from_cols: bool) -> Option<Vec<i64>> {
    let n = if rows_from_cols { m.rows } else { m.cols };
    let mut shifts = vec![None; n];
    for i in 0..m.rows {
        for j in 0..m.cols {
            let p = match m.at(i, j) {
                Elem::Bi(p) => p,
                _ => return None,
            };
            if p.is_zero() {
                continue;
            }
            if !p.is_homogeneous() {
                return None;
            }
            let deg = p.total_degree().unwrap() as i64;
            let (idx, val) = if rows_from_cols {
                // entry: row i gets col shift + deg... degree of map component:
                // source generator degree mid[j]; target gen degree = mid[j] - deg
                (i, mid[j] - deg)
            } else {
                (j, mid[i] + deg)
            };
            match shifts[idx] {
                None => shifts[idx] = Some(val),
                Some(v) if v == val => {}
                _ => return None,
            }
        }
    }
    Some(shifts.into_iter().map(|s| s.unwrap_or(0)).collect())
}

/// Monomial basis of the degree-d piece of a shifted free module: list of
/// (component, monomial).
fn graded_basis(shifts: &[i64], d: i64) -> Vec<(usize, (u32, u32))> {
    let mut out = vec![];
    for (c, s) in shifts.iter().enumerate() {
        let rem = d - s;
        if rem < 0 {
            continue;
        }
        for a in 0..=rem as u32 {
            out.push((c, (a, rem as u32 - a)));
        }
    }
    out
}

fn graded_matrix(
    m: &Mat,
    tgt_shifts: &[i64],
    src_shifts: &[i64],
    d: i64,
    field: &FieldSpec,
) -> Vec<Vec<Scalar>> {
    let src = graded_basis(src_shifts, d);
    let tgt = graded_basis(tgt_shifts, d);
    let mut rows = vec![vec![Scalar::zero(field); src.len()]; tgt.len()];
    for (sj, (c, mono)) in src.iter().enumerate() {
        for i in 0..m.rows {
            let p = match m.at(i, *c) {
                Elem::Bi(p) => p,
                _ => continue,
            };
            for (pm, coeff) in &p.terms {
                let shifted = (pm.0 + mono.0, pm.1 + mono.1);
                if let Some(ti) = tgt
                    .iter()
                    .position(|(tc, tm)| *tc == i && *tm == shifted)
                {
                    rows[ti][sj] = rows[ti][sj].add(coeff);
                }
            }
        }
    }
    rows
}

fn scalar_rank(mut m: Vec<Vec<Scalar>>, field: &FieldSpec) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        if row >= rows {
            break;
        }
        let pivot = (row..rows).find(|&i| !m[i][col].is_zero());
        let Some(p) = pivot else { continue };
        m.swap(row, p);
        let inv = m[row][col].inv();
        for j in col..cols {
            m[row][j] = m[row][j].mul(&inv);
        }
        for i in 0..rows {
            if i != row && !m[i][col].is_zero() {
                let c = m[i][col].clone();
                for j in col..cols {
                    let s = m[row][j].mul(&c);
                    m[i][j] = m[i][j].sub(&s);
                }
            }
        }
        row += 1;
        rank += 1;
    }
    let _ = field;
    rank
}
