use super::{BoundedComplex, ComplexError, ComplexMap};
use crate::expr::RingExpr;
use crate::linalg::Mat;
use crate::ring::CoreRing;

/// Shift by n: (C[n])_k = C_{k-n}, differentials twisted by (-1)^n.
pub fn shift(c: &BoundedComplex, n: i64) -> BoundedComplex {
    let diffs = if n % 2 == 0 {
        c.diffs.clone()
    } else {
        c.diffs.iter().map(|d| d.neg()).collect()
    };
    BoundedComplex {
        carrier: c.carrier.clone(),
        core: c.core.clone(),
        min_deg: c.min_deg + n,
        ranks: c.ranks.clone(),
        diffs,
    }
}

pub fn direct_sum(a: &BoundedComplex, b: &BoundedComplex) -> Result<BoundedComplex, ComplexError> {
    let (a, b, carrier, core) = unify(a, b)?;
    if a.is_zero_object() {
        return Ok(b.trimmed());
    }
    if b.is_zero_object() {
        return Ok(a.trimmed());
    }
    let min = a.min_deg.min(b.min_deg);
    let max = a.max_deg().max(b.max_deg());
    let mut ranks = vec![];
    let mut diffs = vec![];
    for deg in min..=max {
        ranks.push(a.rank_at(deg) + b.rank_at(deg));
    }
    for deg in min..max {
        diffs.push(a.diff_into(deg).direct_sum(&b.diff_into(deg)));
    }
    BoundedComplex::new(carrier, core, min, ranks, diffs)
}

/// Join two carriers over the same base: the more localized one wins.
/// Errors when neither refines the other.
pub fn unify(
    a: &BoundedComplex,
    b: &BoundedComplex,
) -> Result<(BoundedComplex, BoundedComplex, RingExpr, CoreRing), ComplexError> {
    let mismatch = || {
        ComplexError::CarrierMismatch(a.carrier.to_string(), b.carrier.to_string())
    };
    if a.core == b.core {
        let carrier = join_carrier(&a.carrier, &b.carrier).ok_or_else(mismatch)?;
        return Ok((a.clone(), b.clone(), carrier, a.core.clone()));
    }
    if let Some(a2) = a.base_changed(&b.core) {
        let carrier = join_carrier(&b.carrier, &a.carrier).ok_or_else(mismatch)?;
        return Ok((a2, b.clone(), carrier, b.core.clone()));
    }
    if let Some(b2) = b.base_changed(&a.core) {
        let carrier = join_carrier(&a.carrier, &b.carrier).ok_or_else(mismatch)?;
        return Ok((a.clone(), b2, carrier, a.core.clone()));
    }
    Err(mismatch())
}

/// Prefer the carrier with the deeper localization/completion context.
fn join_carrier(a: &RingExpr, b: &RingExpr) -> Option<RingExpr> {
    if a == b {
        return Some(a.clone());
    }
    let (la, lb) = (a.local_core()?, b.local_core()?);
    if la.completed_at.len() >= lb.completed_at.len()
        && la.localized_at.len() >= lb.localized_at.len()
    {
        Some(a.clone())
    } else {
        Some(b.clone())
    }
}

/// Tensor product: total complex of the bicomplex with the standard sign
/// twist (-1)^p on the left degree.
pub fn tensor(a: &BoundedComplex, b: &BoundedComplex) -> Result<BoundedComplex, ComplexError> {
    let (a, b, carrier, core) = unify(a, b)?;
    if a.is_zero_object() || b.is_zero_object() {
        return Ok(BoundedComplex::zero(carrier, core));
    }
    let min = a.min_deg + b.min_deg;
    let max = a.max_deg() + b.max_deg();
    // blocks of degree n: (p, q = n - p), p ascending over a's degrees
    let blocks_at = |n: i64| -> Vec<(i64, i64)> {
        (a.min_deg..=a.max_deg())
            .map(|p| (p, n - p))
            .filter(|(p, q)| a.rank_at(*p) > 0 && b.rank_at(*q) > 0)
            .collect()
    };
    let mut ranks = vec![];
    for n in min..=max {
        ranks.push(
            blocks_at(n)
                .iter()
                .map(|(p, q)| a.rank_at(*p) * b.rank_at(*q))
                .sum(),
        );
    }
    let mut diffs = vec![];
    for n in min..max {
        // d: T_{n+1} -> T_n
        let src = blocks_at(n + 1);
        let dst = blocks_at(n);
        let rows: usize = dst.iter().map(|(p, q)| a.rank_at(*p) * b.rank_at(*q)).sum();
        let cols: usize = src.iter().map(|(p, q)| a.rank_at(*p) * b.rank_at(*q)).sum();
        let mut m = Mat::zero(&core, rows, cols);
        let dst_offset = |p: i64, q: i64| -> usize {
            let mut off = 0;
            for (dp, dq) in &dst {
                if (*dp, *dq) == (p, q) {
                    return off;
                }
                off += a.rank_at(*dp) * b.rank_at(*dq);
            }
            unreachable!("missing destination block")
        };
        let mut col_off = 0;
        for (p, q) in &src {
            let (ra, rb) = (a.rank_at(*p), b.rank_at(*q));
            // d_a (x) id: (p, q) -> (p-1, q)
            if a.rank_at(p - 1) > 0 && rb > 0 {
                let da = a.diff_into(p - 1);
                let block = da.kronecker(&Mat::identity(&core, rb));
                let ro = dst_offset(p - 1, *q);
                copy_block(&mut m, &block, ro, col_off);
            }
            // (-1)^p id (x) d_b: (p, q) -> (p, q-1)
            if b.rank_at(q - 1) > 0 && ra > 0 {
                let db = b.diff_into(q - 1);
                let sign = if p.rem_euclid(2) == 0 { 1 } else { -1 };
                let block = Mat::identity(&core, ra).kronecker(&db);
                let block = if sign < 0 { block.neg() } else { block };
                let ro = dst_offset(*p, q - 1);
                copy_block(&mut m, &block, ro, col_off);
            }
            col_off += ra * rb;
        }
        diffs.push(m);
    }
    BoundedComplex::new(carrier, core, min, ranks, diffs).map(|c| c.trimmed())
}

fn copy_block(into: &mut Mat, block: &Mat, row_off: usize, col_off: usize) {
    for i in 0..block.rows {
        for j in 0..block.cols {
            let existing = into.at(row_off + i, col_off + j).add(block.at(i, j));
            into.set(row_off + i, col_off + j, existing);
        }
    }
}

/// Internal Hom out of a finite free complex:
/// Hom(A, B)_n = sum_p Hom(A_p, B_{p+n}), (df)(a) = d(f a) - (-1)^n f(da).
pub fn hom_complex(a: &BoundedComplex, b: &BoundedComplex) -> Result<BoundedComplex, ComplexError> {
    let (a, b, carrier, core) = unify(a, b)?;
    if a.is_zero_object() || b.is_zero_object() {
        return Ok(BoundedComplex::zero(carrier, core));
    }
    let min = b.min_deg - a.max_deg();
    let max = b.max_deg() - a.min_deg;
    let blocks_at = |n: i64| -> Vec<i64> {
        (a.min_deg..=a.max_deg())
            .filter(|p| a.rank_at(*p) > 0 && b.rank_at(p + n) > 0)
            .collect()
    };
    let rank_of = |p: i64, n: i64| a.rank_at(p) * b.rank_at(p + n);
    let mut ranks = vec![];
    for n in min..=max {
        ranks.push(blocks_at(n).iter().map(|p| rank_of(*p, n)).sum());
    }
    let mut diffs = vec![];
    for n in min..max {
        // d: Hom_{n+1} -> Hom_n
        let src = blocks_at(n + 1);
        let dst = blocks_at(n);
        let rows: usize = dst.iter().map(|p| rank_of(*p, n)).sum();
        let cols: usize = src.iter().map(|p| rank_of(*p, n + 1)).sum();
        let mut m = Mat::zero(&core, rows, cols);
        let dst_offset = |p: i64| -> Option<usize> {
            let mut off = 0;
            for dp in &dst {
                if *dp == p {
                    return Some(off);
                }
                off += rank_of(*dp, n);
            }
            None
        };
        // basis of Hom(A_p, B_{p+n}): matrix units E_{ij}, index i*rank(A_p)+j
        let mut col_off = 0;
        for p in &src {
            let (ra, rb) = (a.rank_at(*p), b.rank_at(p + n + 1));
            for i in 0..rb {
                for j in 0..ra {
                    let col = col_off + i * ra + j;
                    // d_B o f : block p of Hom_n
                    if let Some(ro) = dst_offset(*p) {
                        let db = b.diff_into(p + n);
                        for k in 0..db.rows {
                            let v = db.at(k, i).clone();
                            if !v.is_zero() {
                                let row = ro + k * ra + j;
                                let cur = m.at(row, col).add(&v);
                                m.set(row, col, cur);
                            }
                        }
                    }
                    // -(-1)^(n+1) f o d_A : block p+1 of Hom_n
                    if let Some(ro) = dst_offset(p + 1) {
                        let da = a.diff_into(*p);
                        let ra_next = a.rank_at(p + 1);
                        let sign_pos = (n + 1).rem_euclid(2) == 0;
                        for l in 0..da.cols.min(ra_next) {
                            let v = da.at(j, l).clone();
                            if v.is_zero() {
                                continue;
                            }
                            let v = if sign_pos { v.neg() } else { v };
                            let row = ro + i * ra_next + l;
                            let cur = m.at(row, col).add(&v);
                            m.set(row, col, cur);
                        }
                    }
                }
            }
            col_off += ra * rb;
        }
        diffs.push(m);
    }
    BoundedComplex::new(carrier, core, min, ranks, diffs).map(|c| c.trimmed())
}

/// Dual complex: Hom into the unit.
pub fn dual(a: &BoundedComplex) -> Result<BoundedComplex, ComplexError> {
    let unit = BoundedComplex::unit(a.carrier.clone(), a.core.clone());
    hom_complex(a, &unit)
}

/// Tensor of two degreewise chain maps (no sign twists: both have degree
/// zero). Component blocks are Kronecker products following the block
/// layout of `tensor`.
pub fn tensor_maps(
    f: &super::ComplexMap,
    g: &super::ComplexMap,
) -> Result<super::ComplexMap, ComplexError> {
    let src = tensor(&f.source, &g.source)?;
    let dst = tensor(&f.target, &g.target)?;
    let core = dst.core.clone();
    let blocks = |a: &BoundedComplex, b: &BoundedComplex, n: i64| -> Vec<(i64, i64)> {
        (a.min_deg..=a.max_deg())
            .map(|p| (p, n - p))
            .filter(|(p, q)| a.rank_at(*p) > 0 && b.rank_at(*q) > 0)
            .collect()
    };
    let mut comps = vec![];
    for n in src.min_deg..=src.max_deg() {
        let src_blocks = blocks(&f.source, &g.source, n);
        let dst_blocks = blocks(&f.target, &g.target, n);
        let rows: usize = dst_blocks
            .iter()
            .map(|(p, q)| f.target.rank_at(*p) * g.target.rank_at(*q))
            .sum();
        let cols: usize = src_blocks
            .iter()
            .map(|(p, q)| f.source.rank_at(*p) * g.source.rank_at(*q))
            .sum();
        let mut m = Mat::zero(&core, rows, cols);
        let mut col_off = 0;
        for (p, q) in &src_blocks {
            let block = f.component(*p).kronecker(&g.component(*q));
            // destination offset of block (p, q)
            let mut row_off = 0;
            let mut placed = false;
            for (dp, dq) in &dst_blocks {
                if (dp, dq) == (p, q) {
                    placed = true;
                    break;
                }
                row_off += f.target.rank_at(*dp) * g.target.rank_at(*dq);
            }
            if placed {
                for i in 0..block.rows {
                    for j in 0..block.cols {
                        m.set(row_off + i, col_off + j, block.at(i, j).clone());
                    }
                }
            }
            col_off += f.source.rank_at(*p) * g.source.rank_at(*q);
        }
        comps.push((n, m));
    }
    super::ComplexMap::new(src, dst, comps, None)
}

/// Mapping cone: cone(f)_n = A_{n-1} + B_n with d = [[-d_A, 0], [f, d_B]].
pub fn cone(f: &ComplexMap) -> Result<BoundedComplex, ComplexError> {
    let a = &f.source;
    let b = &f.target;
    let core = b.core.clone();
    let carrier = b.carrier.clone();
    let min = (a.min_deg + 1).min(b.min_deg);
    let max = (a.max_deg() + 1).max(b.max_deg());
    let mut ranks = vec![];
    for n in min..=max {
        ranks.push(a.rank_at(n - 1) + b.rank_at(n));
    }
    let mut diffs = vec![];
    for n in min..max {
        // d: cone_{n+1} = A_n + B_{n+1} -> cone_n = A_{n-1} + B_n
        let a_src = a.rank_at(n);
        let b_src = b.rank_at(n + 1);
        let a_dst = a.rank_at(n - 1);
        let b_dst = b.rank_at(n);
        let mut m = Mat::zero(&core, a_dst + b_dst, a_src + b_src);
        let da = a.diff_into(n - 1);
        for i in 0..a_dst {
            for j in 0..a_src {
                m.set(i, j, da.at(i, j).neg());
            }
        }
        let fc = f.component(n);
        for i in 0..b_dst {
            for j in 0..a_src {
                m.set(a_dst + i, j, fc.at(i, j).clone());
            }
        }
        let db = b.diff_into(n);
        for i in 0..b_dst {
            for j in 0..b_src {
                m.set(a_dst + i, a_src + j, db.at(i, j).clone());
            }
        }
        diffs.push(m);
    }
    BoundedComplex::new(carrier, core, min, ranks, diffs).map(|c| c.trimmed())
}
