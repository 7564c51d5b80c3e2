use super::*;
use crate::ring::{CoreRing, Elem};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

pub(crate) fn zz() -> CoreRing {
    CoreRing::Integers
}

pub(crate) fn zz_at(ps: &[i64]) -> CoreRing {
    CoreRing::IntegersLocalized {
        primes: ps.iter().map(|p| BigInt::from(*p)).collect(),
    }
}

pub(crate) fn int_mat(core: &CoreRing, rows: &[&[i64]]) -> Mat {
    Mat::from_rows(
        core,
        rows.iter()
            .map(|r| r.iter().map(|n| core.from_i64(*n)).collect())
            .collect(),
    )
}

/// Brute-force oracle: invariant factors from gcds of k x k minors.
pub(crate) fn minor_gcd_invariants(m: &Mat) -> Vec<BigInt> {
    let ints: Vec<Vec<BigInt>> = (0..m.rows)
        .map(|i| {
            (0..m.cols)
                .map(|j| match m.at(i, j) {
                    Elem::Int(n) => n.clone(),
                    _ => panic!("oracle needs integer entries"),
                })
                .collect()
        })
        .collect();
    let n = m.rows.min(m.cols);
    let mut dk_prev = BigInt::from(1);
    let mut out = vec![];
    for k in 1..=n {
        let mut g = BigInt::zero();
        for rows in combinations(m.rows, k) {
            for cols in combinations(m.cols, k) {
                let det = minor_det(&ints, &rows, &cols);
                g = g.gcd(&det);
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(&g / &dk_prev);
        dk_prev = g;
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn minor_det(m: &[Vec<BigInt>], rows: &[usize], cols: &[usize]) -> BigInt {
    // cofactor expansion; minors stay tiny
    if rows.len() == 1 {
        return m[rows[0]][cols[0]].clone();
    }
    let mut det = BigInt::zero();
    for (i, &r) in rows.iter().enumerate() {
        let sub_rows: Vec<usize> = rows
            .iter()
            .copied()
            .filter(|&x| x != r)
            .collect();
        let term = &m[r][cols[0]] * minor_det(m, &sub_rows, &cols[1..]);
        if i % 2 == 0 {
            det += term;
        } else {
            det -= term;
        }
    }
    det
}

fn snf_invariant_ints(m: &Mat) -> Vec<BigInt> {
    let snf = smith_normal_form(m).unwrap();
    snf.diagonal_entries()
        .into_iter()
        .filter(|d| !d.is_zero())
        .map(|d| match d {
            Elem::Int(n) => n,
            _ => panic!(),
        })
        .collect()
}

fn check_transform_identity(m: &Mat) {
    let snf = smith_normal_form(m).unwrap();
    assert_eq!(snf.left.mul(m).mul(&snf.right), snf.diag);
    assert!(snf.right.mul(&snf.right_inv).is_identity());
}

#[test]
fn snf_two_three_gives_one_six() {
    let core = zz();
    let m = int_mat(&core, &[&[2, 0], &[0, 3]]);
    // oracle computed first: d1 = gcd of entries = 1, d2 = det = 6
    assert_eq!(
        minor_gcd_invariants(&m),
        vec![BigInt::from(1), BigInt::from(6)]
    );
    assert_eq!(snf_invariant_ints(&m), minor_gcd_invariants(&m));
    check_transform_identity(&m);
}

#[test]
fn snf_local_uniformizer_stays_diagonal() {
    let core = zz_at(&[5]);
    let m = int_mat(&core, &[&[5]]);
    let snf = smith_normal_form(&m).unwrap();
    assert_eq!(snf.diagonal_entries(), vec![core.from_i64(5)]);
    assert!(!core.is_unit(&snf.diagonal_entries()[0]));
}

#[test]
fn snf_over_field_normalizes_rank() {
    let core = CoreRing::Rationals;
    let m = int_mat(&core, &[&[2, 4], &[0, 0]]);
    let snf = smith_normal_form(&m).unwrap();
    assert_eq!(snf.rank, 1);
    assert_eq!(snf.diag.at(0, 0), &core.one());
    assert!(snf.diag.at(1, 1).is_zero());
    check_transform_identity(&m);
}

#[test]
fn snf_idempotent_on_its_diagonal() {
    let core = zz();
    let m = int_mat(&core, &[&[4, 6, 2], &[6, 12, 6], &[2, 6, 12]]);
    let d1 = smith_normal_form(&m).unwrap().diag;
    let d2 = smith_normal_form(&d1).unwrap().diag;
    assert_eq!(d1, d2);
}

#[test]
fn snf_matches_minor_gcd_oracle_on_seeded_matrices() {
    let mut state = 0x243f6a8885a308d3u64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let core = zz();
    for _ in 0..60 {
        let rows = 1 + (next() % 4) as usize;
        let cols = 1 + (next() % 4) as usize;
        let entries: Vec<Vec<Elem>> = (0..rows)
            .map(|_| {
                (0..cols)
                    .map(|_| core.from_i64((next() % 19) as i64 - 9))
                    .collect()
            })
            .collect();
        let m = Mat::from_rows(&core, entries);
        let expect = minor_gcd_invariants(&m);
        assert_eq!(snf_invariant_ints(&m), expect, "matrix:\n{m}");
        check_transform_identity(&m);
    }
}

#[test]
fn snf_localized_core_respects_unit_content() {
    // 6 = 2*3 is a unit multiple of 2 in ZZ_(2)
    let core = zz_at(&[2]);
    let m = int_mat(&core, &[&[6, 0], &[0, 4]]);
    let snf = smith_normal_form(&m).unwrap();
    assert_eq!(
        snf.diagonal_entries(),
        vec![core.from_i64(2), core.from_i64(4)]
    );
    check_transform_identity(&m);
}

#[test]
fn snf_rejects_bivariate_core() {
    let core = CoreRing::BiPoly {
        coeff: crate::ring::FieldSpec::Rationals,
    };
    let m = Mat::zero(&core, 1, 1);
    assert!(matches!(
        smith_normal_form(&m),
        Err(LinalgError::UnsupportedRing(_))
    ));
}

#[test]
fn homology_cokernel_of_two() {
    // d_in = [[2]] : R -> R, d_out = 0: H = Z/2
    let core = zz();
    let d_in = int_mat(&core, &[&[2]]);
    let d_out = Mat::zero(&core, 0, 1);
    let h = homology_invariants(&d_in, &d_out).unwrap();
    assert_eq!(h.free_rank, 0);
    assert_eq!(h.torsion, vec![core.from_i64(2)]);
}

#[test]
fn homology_identity_case_over_rationals() {
    let core = CoreRing::Rationals;
    let d_in = Mat::zero(&core, 1, 0);
    let d_out = Mat::zero(&core, 0, 1);
    let h = homology_invariants(&d_in, &d_out).unwrap();
    assert_eq!(h, ModuleInvariants::free(1));
}

#[test]
fn homology_rejects_nonzero_composition() {
    let core = zz();
    let d_in = int_mat(&core, &[&[1]]);
    let d_out = int_mat(&core, &[&[1]]);
    assert_eq!(
        homology_invariants(&d_in, &d_out),
        Err(LinalgError::CompositionNonzero)
    );
}

#[test]
fn homology_middle_of_koszul_pair_is_free() {
    // 0 -> R ->(2 -3)^T R^2 ->(3 2) R -> 0 over ZZ: middle H = 0
    let core = zz();
    let d_in = int_mat(&core, &[&[2], &[-3]]);
    let d_out = int_mat(&core, &[&[3, 2]]);
    let h = homology_invariants(&d_in, &d_out).unwrap();
    assert!(h.is_zero(), "got {h}");
}

#[test]
fn kernel_basis_spans_kernel() {
    let core = zz();
    let m = int_mat(&core, &[&[2, 4, 6], &[1, 2, 3]]);
    let k = kernel_basis(&m).unwrap();
    assert_eq!(k.cols, 2);
    assert!(m.mul(&k).is_zero());
}

#[test]
fn image_invariants_of_submodule() {
    // In Z^2 / <(4,0),(0,9)> the submodule generated by (2,0) is Z/2... times 2:
    // (2,0) has order 2 in Z/4 x Z/9? 2*(2,0) = (4,0) = 0, so Z/2.
    let core = zz();
    let rels = int_mat(&core, &[&[4, 0], &[0, 9]]);
    let gens = int_mat(&core, &[&[2], &[0]]);
    let inv = image_invariants(&gens, &rels).unwrap();
    assert_eq!(inv.free_rank, 0);
    assert_eq!(inv.torsion, vec![core.from_i64(2)]);
}

#[test]
fn induced_map_tracks_multiplication() {
    // H_0 of [Z ->2 Z] is Z/2; the chain map multiplication-by-3 induces
    // an isomorphism, multiplication-by-2 induces zero.
    let core = zz();
    let d_in = int_mat(&core, &[&[2]]);
    let d_out = Mat::zero(&core, 0, 1);
    let (_, pres) = presented::homology_presentation(&d_in, &d_out).unwrap();
    let triple = Mat::scalar_diag(&core, 1, &core.from_i64(3));
    let double = Mat::scalar_diag(&core, 1, &core.from_i64(2));
    let m3 = induced_map_on_homology(&triple, &pres, &pres);
    let m2 = induced_map_on_homology(&double, &pres, &pres);
    let img3 = image_invariants(&m3, &pres.relations).unwrap();
    let img2 = image_invariants(&m2, &pres.relations).unwrap();
    assert_eq!(img3.torsion, vec![core.from_i64(2)]);
    assert!(img2.is_zero());
}
