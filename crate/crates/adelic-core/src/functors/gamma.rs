use super::{coerce_to_core, FunctorError, KoszulData};
use crate::complex::{homology_table, BoundedComplex, HomologyEntry};
use crate::linalg::ModuleInvariants;
use crate::ring::{CoreRing, Elem};
use serde::Serialize;

/// Derived torsion of one homological degree: the prime-primary part of the
/// homology there, plus divisible content fed from the degree above,
/// reported structurally as copies of R[1/g]/R.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaDegree {
    pub degree: i64,
    pub torsion: ModuleInvariants,
    /// number of copies of the cokernel of the localization unit
    pub divisible_rank: usize,
    pub divisible_shape: String,
}

/// Structural homology of the stable Koszul complex on a prime, tensored
/// with a finitely generated complex. Degrees are homological; the
/// cohomological reading is H^k = H_{-k}.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaReport {
    pub prime: String,
    pub degrees: Vec<GammaDegree>,
    pub acyclic: bool,
}

impl GammaReport {
    pub fn degree(&self, d: i64) -> Option<&GammaDegree> {
        self.degrees.iter().find(|g| g.degree == d)
    }
}

/// Derived torsion at a prime, computed structurally from the two-term
/// localization representation: in each degree the torsion part is the
/// prime-primary homology there and the divisible part is the free rank
/// one degree up. Supported for single-generator primes over PID cores;
/// the zero ideal gives the identity.
pub fn gamma(data: &KoszulData, m: &BoundedComplex) -> Result<GammaReport, FunctorError> {
    data.verify()?;
    let p = &data.prime;
    let table = homology_table(m)?;
    if p.is_zero_ideal() {
        // torsion at the generic point is the identity functor
        let degrees = table
            .entries
            .iter()
            .map(|(deg, e)| GammaDegree {
                degree: *deg,
                torsion: match e {
                    HomologyEntry::Invariants(i) => i.clone(),
                    HomologyEntry::Fingerprint(_) => ModuleInvariants::zero(),
                },
                divisible_rank: 0,
                divisible_shape: String::new(),
            })
            .collect::<Vec<_>>();
        let acyclic = degrees
            .iter()
            .all(|g| g.torsion.is_zero() && g.divisible_rank == 0);
        return Ok(GammaReport {
            prime: p.key(),
            degrees,
            acyclic,
        });
    }
    if data.generators.len() != 1 || matches!(m.core, CoreRing::BiPoly { .. }) {
        return Err(FunctorError::NotFinitelyGenerated);
    }
    let g = coerce_to_core(&data.generators[0], &m.core);
    if m.core.is_unit(&g) {
        // inverting a unit changes nothing: the torsion functor vanishes
        return Ok(GammaReport {
            prime: p.key(),
            degrees: vec![],
            acyclic: true,
        });
    }
    let (_, g) = m.core.canonical_associate(&g);
    let shape = format!("R[1/{}]/R over {}", g, m.core);

    let rank_at = |deg: i64| -> usize {
        match table.entries.iter().find(|(d, _)| *d == deg) {
            Some((_, HomologyEntry::Invariants(i))) => i.free_rank,
            _ => 0,
        }
    };
    let mut degrees = vec![];
    let lo = m.min_deg - 1;
    let hi = m.max_deg();
    for deg in lo..=hi {
        let torsion = match table.entries.iter().find(|(d, _)| *d == deg) {
            Some((_, HomologyEntry::Invariants(i))) => primary_part(&m.core, i, &g),
            _ => ModuleInvariants::zero(),
        };
        let divisible_rank = rank_at(deg + 1);
        if torsion.is_zero() && divisible_rank == 0 {
            continue;
        }
        degrees.push(GammaDegree {
            degree: deg,
            torsion,
            divisible_rank,
            divisible_shape: shape.clone(),
        });
    }
    let acyclic = degrees.is_empty();
    Ok(GammaReport {
        prime: p.key(),
        degrees,
        acyclic,
    })
}

/// g-primary part of invariants: each torsion factor keeps only its g-part.
fn primary_part(core: &CoreRing, inv: &ModuleInvariants, g: &Elem) -> ModuleInvariants {
    let mut torsion = vec![];
    for t in &inv.torsion {
        let part = g_part(core, t, g);
        if !core.is_unit(&part) && !part.is_zero() {
            torsion.push(part);
        }
    }
    ModuleInvariants {
        free_rank: 0,
        torsion,
    }
}

/// The part of a torsion factor supported on the primes of g: divide out
/// everything sharing no factor with g, i.e. t / (prime-to-g part).
fn g_part(core: &CoreRing, t: &Elem, g: &Elem) -> Elem {
    use num_integer::Integer;
    match (t, g) {
        (Elem::Int(n), Elem::Int(p)) => {
            let mut prime_to_g = n.clone();
            let mut shared = prime_to_g.gcd(p);
            while num_traits::Signed::abs(&shared) > num_bigint::BigInt::from(1) {
                prime_to_g /= &shared;
                shared = prime_to_g.gcd(p);
            }
            Elem::Int(n / prime_to_g)
        }
        (Elem::Rat(q), Elem::Rat(p)) => {
            let n = q.numer().clone();
            let pn = p.numer().clone();
            let mut prime_to_g = n.clone();
            let mut shared = prime_to_g.gcd(&pn);
            while num_traits::Signed::abs(&shared) > num_bigint::BigInt::from(1) {
                prime_to_g /= &shared;
                shared = prime_to_g.gcd(&pn);
            }
            core.from_bigint(&(&n / &prime_to_g))
        }
        (Elem::Uni(f), Elem::Uni(p)) => {
            let mut prime_to_g = f.clone();
            let mut shared = prime_to_g.gcd(p);
            while shared.degree().unwrap_or(0) > 0 {
                prime_to_g = prime_to_g.divrem(&shared).0;
                shared = prime_to_g.gcd(p);
            }
            Elem::Uni(f.divrem(&prime_to_g).0)
        }
        (Elem::UniFrac { num, den }, Elem::UniFrac { num: pn, .. }) => {
            let mut prime_to_g = num.clone();
            let mut shared = prime_to_g.gcd(pn);
            while shared.degree().unwrap_or(0) > 0 {
                prime_to_g = prime_to_g.divrem(&shared).0;
                shared = prime_to_g.gcd(pn);
            }
            Elem::UniFrac {
                num: num.divrem(&prime_to_g).0,
                den: den.clone(),
            }
        }
        _ => core.one(),
    }
}
