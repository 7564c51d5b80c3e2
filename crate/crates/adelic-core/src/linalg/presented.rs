use super::mat::Mat;
use super::snf::{smith_normal_form, LinalgError};
use super::ModuleInvariants;
use crate::ring::Elem;

/// A homology module presented in a chosen kernel basis: H = R^g / im(relations),
/// with `kernel_basis` lifting the generators into the chain group.
#[derive(Debug, Clone)]
pub struct HomologyPresentation {
    /// columns lift the g generators into C_i
    pub kernel_basis: Mat,
    /// rows of V^-1 picking kernel coordinates out of a chain vector
    pub coords: Mat,
    /// g x s relation matrix
    pub relations: Mat,
}

impl HomologyPresentation {
    pub fn generators(&self) -> usize {
        self.kernel_basis.cols
    }

    pub fn invariants(&self) -> Result<ModuleInvariants, LinalgError> {
        invariants_of_cokernel(&self.relations)
    }

    /// Kernel coordinates of a chain vector known to be a cycle.
    pub fn coords_of(&self, v: &[Elem]) -> Vec<Elem> {
        let core = &self.coords.core;
        (0..self.coords.rows)
            .map(|i| {
                let mut acc = core.zero();
                for (k, vk) in v.iter().enumerate() {
                    acc = acc.add(&self.coords.at(i, k).mul(vk));
                }
                acc
            })
            .collect()
    }
}

/// Presentation and invariants of ker(d_out)/im(d_in).
pub fn homology_presentation(
    d_in: &Mat,
    d_out: &Mat,
) -> Result<(ModuleInvariants, HomologyPresentation), LinalgError> {
    if d_in.rows != d_out.cols {
        return Err(LinalgError::DimensionMismatch(format!(
            "d_in is {}x{}, d_out is {}x{}",
            d_in.rows, d_in.cols, d_out.rows, d_out.cols
        )));
    }
    if !d_out.mul(d_in).is_zero() {
        return Err(LinalgError::CompositionNonzero);
    }
    let core = d_out.core.clone();
    let snf = smith_normal_form(d_out)?;
    let kernel_cols: Vec<usize> = (snf.rank..d_out.cols).collect();
    let all_rows: Vec<usize> = (0..d_out.cols).collect();
    let kernel_basis = snf.right.submatrix(&all_rows, &kernel_cols);
    let coords = snf
        .right_inv
        .submatrix(&kernel_cols, &all_rows);
    // express im(d_in) in kernel coordinates
    let w = snf.right_inv.mul(d_in);
    // rows below rank must vanish because d_out * d_in = 0
    for i in 0..snf.rank {
        for j in 0..d_in.cols {
            debug_assert!(
                w.at(i, j).is_zero(),
                "image not contained in kernel coordinates"
            );
        }
    }
    let krows: Vec<usize> = (snf.rank..d_out.cols).collect();
    let wcols: Vec<usize> = (0..d_in.cols).collect();
    let relations = w.submatrix(&krows, &wcols);
    let invariants = invariants_of_cokernel(&relations)?;
    let _ = core;
    Ok((
        invariants,
        HomologyPresentation {
            kernel_basis,
            coords,
            relations,
        },
    ))
}

/// Invariants of coker(relations): R^rows / column span.
pub fn invariants_of_cokernel(relations: &Mat) -> Result<ModuleInvariants, LinalgError> {
    let core = relations.core.clone();
    let snf = smith_normal_form(relations)?;
    let mut torsion = vec![];
    for d in snf.diagonal_entries() {
        if d.is_zero() || core.is_unit(&d) {
            continue;
        }
        torsion.push(d);
    }
    Ok(ModuleInvariants {
        free_rank: relations.rows - snf.rank,
        torsion,
    })
}

/// Matrix of the map induced on homology by a chain-map component `f`.
///
/// The result maps generator coordinates of `src` to generator coordinates
/// of `dst` (valid modulo dst.relations).
pub fn induced_map_on_homology(
    f: &Mat,
    src: &HomologyPresentation,
    dst: &HomologyPresentation,
) -> Mat {
    let lifted = f.mul(&src.kernel_basis);
    dst.coords.mul(&lifted)
}

/// Invariants of the submodule of coker(relations) generated by the given
/// coordinate columns.
pub fn image_invariants(
    gens: &Mat,
    relations: &Mat,
) -> Result<ModuleInvariants, LinalgError> {
    // S = <gens> in R^k / im(relations) is R^c / N where
    // N = { a : gens*a in im(relations) }, the a-projection of ker[gens | relations]
    let stacked = gens.hstack(relations);
    let ker = super::snf::kernel_basis(&stacked)?;
    let arows: Vec<usize> = (0..gens.cols).collect();
    let kcols: Vec<usize> = (0..ker.cols).collect();
    let n = ker.submatrix(&arows, &kcols);
    invariants_of_cokernel(&n)
}
