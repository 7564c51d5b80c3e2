use super::GroebnerError;
use crate::ring::{BPoly, Mono};

fn mono_lcm(a: &Mono, b: &Mono) -> Mono {
    (a.0.max(b.0), a.1.max(b.1))
}

fn mono_div(a: &Mono, b: &Mono) -> Mono {
    (a.0 - b.0, a.1 - b.1)
}

/// Multivariate division: remainder of f by the set g under degree-lex.
pub fn normal_form(f: &BPoly, basis: &[BPoly]) -> BPoly {
    let field = f.field.clone();
    let mut rem = BPoly::zero(&field);
    let mut work = f.clone();
    'outer: while let Some((lt, lc)) = work.leading_term() {
        let lc = lc.clone();
        for g in basis {
            if g.is_zero() {
                continue;
            }
            let (glt, glc) = g.leading_term().unwrap();
            if BPoly::monomial_divides(&glt, &lt) {
                let c = lc.div(glc);
                work = work.sub(&g.mul_monomial(mono_div(&lt, &glt), &c));
                continue 'outer;
            }
        }
        // leading term irreducible: move it to the remainder
        rem = rem.add(&BPoly::monomial(&field, lt, lc.clone()));
        work = work.sub(&BPoly::monomial(&field, lt, lc));
    }
    rem
}

fn s_polynomial(f: &BPoly, g: &BPoly) -> BPoly {
    let (flt, flc) = f.leading_term().unwrap();
    let (glt, glc) = g.leading_term().unwrap();
    let l = mono_lcm(&flt, &glt);
    let a = f.mul_monomial(mono_div(&l, &flt), &flc.clone().inv());
    let b = g.mul_monomial(mono_div(&l, &glt), &glc.clone().inv());
    a.sub(&b)
}

/// Buchberger's algorithm; returns a reduced Groebner basis.
pub fn buchberger(gens: &[BPoly], degree_cap: u32) -> Result<Vec<BPoly>, GroebnerError> {
    let mut basis: Vec<BPoly> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.monic())
        .collect();
    if basis.is_empty() {
        return Ok(vec![]);
    }
    let mut pairs: Vec<(usize, usize)> = vec![];
    for i in 0..basis.len() {
        for j in 0..i {
            pairs.push((j, i));
        }
    }
    while let Some((i, j)) = pairs.pop() {
        let (flt, _) = basis[i].leading_term().unwrap();
        let (glt, _) = basis[j].leading_term().unwrap();
        // coprime leading monomials: S-polynomial reduces to zero
        if flt.0.min(glt.0) == 0 && flt.1.min(glt.1) == 0 {
            continue;
        }
        let s = s_polynomial(&basis[i], &basis[j]);
        let r = normal_form(&s, &basis);
        if r.is_zero() {
            continue;
        }
        if r.total_degree().unwrap_or(0) > degree_cap {
            return Err(GroebnerError::DegreeBoundExceeded(degree_cap));
        }
        let r = r.monic();
        for k in 0..basis.len() {
            pairs.push((k, basis.len()));
        }
        basis.push(r);
    }
    Ok(reduce_basis(&basis))
}

/// Self-reduce a Groebner basis: minimal, monic, fully reduced tails.
pub fn reduce_basis(basis: &[BPoly]) -> Vec<BPoly> {
    let mut min: Vec<BPoly> = vec![];
    for (i, g) in basis.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let (glt, _) = g.leading_term().unwrap();
        let dominated = basis.iter().enumerate().any(|(j, h)| {
            if i == j || h.is_zero() {
                return false;
            }
            let (hlt, _) = h.leading_term().unwrap();
            BPoly::monomial_divides(&hlt, &glt) && (hlt != glt || j < i)
        });
        if !dominated {
            min.push(g.monic());
        }
    }
    let mut out = vec![];
    for i in 0..min.len() {
        let others: Vec<BPoly> = min
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, h)| h.clone())
            .collect();
        let r = normal_form(&min[i], &others);
        if !r.is_zero() {
            out.push(r.monic());
        }
    }
    out.sort_by(|a, b| {
        let (alt, _) = a.leading_term().unwrap();
        let (blt, _) = b.leading_term().unwrap();
        crate::ring::deglex_cmp(&alt, &blt)
    });
    out
}

/// Ideal membership via normal form against a Groebner basis.
pub fn ideal_membership(f: &BPoly, gb: &[BPoly]) -> bool {
    normal_form(f, gb).is_zero()
}

/// Intersection of ideals for the shapes this engine certifies: pairwise
/// comaximal ideals (intersection = product) and principal ideals (lcm).
pub fn ideal_intersection(
    ideals: &[Vec<BPoly>],
    degree_cap: u32,
) -> Result<Option<Vec<BPoly>>, GroebnerError> {
    match ideals.len() {
        0 => return Ok(None),
        1 => return Ok(Some(ideals[0].clone())),
        _ => {}
    }
    // all principal with irreducible generators: intersection is the lcm
    if ideals.iter().all(|i| i.len() == 1) {
        let field = ideals[0][0].field.clone();
        let mut acc = BPoly::constant(crate::ring::Scalar::one(&field));
        for i in ideals {
            let f = i[0].monic();
            if !crate::ring::bivariate_divides(&f, &acc) {
                acc = acc.mul(&f);
            }
        }
        return Ok(Some(vec![acc.monic()]));
    }
    // pairwise comaximal: intersection = product
    for a in 0..ideals.len() {
        for b in 0..a {
            let mut sum: Vec<BPoly> = ideals[a].clone();
            sum.extend(ideals[b].clone());
            let gb = buchberger(&sum, degree_cap)?;
            let is_unit_ideal = gb.len() == 1 && gb[0].is_constant();
            if !is_unit_ideal {
                return Ok(None);
            }
        }
    }
    let mut products = vec![BPoly::constant(crate::ring::Scalar::one(
        &ideals[0][0].field,
    ))];
    for ideal in ideals {
        let mut next = vec![];
        for p in &products {
            for g in ideal {
                next.push(p.mul(g));
            }
        }
        products = next;
    }
    Ok(Some(buchberger(&products, degree_cap)?))
}
