use super::elem::Elem;
use super::poly::{BPoly, UPoly};
use super::scalar::is_prime_u64;
use super::BaseRing;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PrimeError {
    #[error("generator {0} is not prime")]
    NotPrime(String),
    #[error("cannot certify irreducibility of {0}")]
    IrreducibilityUndecided(String),
    #[error("cannot certify maximality of ({0}, {1})")]
    MaximalityUndecided(String, String),
    #[error("height {given} inconsistent with generators (expect {expect})")]
    HeightMismatch { given: u32, expect: u32 },
    #[error("generators not valid for ring {0}")]
    BadGenerators(String),
}

/// A verified prime ideal of a base ring, given by explicit generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlgPrime {
    pub ring: BaseRing,
    pub gens: Vec<Elem>,
    pub height: u32,
}

impl AlgPrime {
    /// The zero ideal.
    pub fn zero_ideal(ring: BaseRing) -> Self {
        AlgPrime {
            ring,
            gens: vec![],
            height: 0,
        }
    }

    /// Construct and verify a prime from generators.
    pub fn new(ring: BaseRing, gens: Vec<Elem>, height: u32) -> Result<Self, PrimeError> {
        if gens.is_empty() {
            if height != 0 {
                return Err(PrimeError::HeightMismatch {
                    given: height,
                    expect: 0,
                });
            }
            return Ok(AlgPrime {
                ring,
                gens,
                height,
            });
        }
        match &ring {
            BaseRing::Integers => {
                if gens.len() != 1 || height != 1 {
                    return Err(PrimeError::BadGenerators(ring.to_string()));
                }
                let n = match &gens[0] {
                    Elem::Int(n) => n.abs(),
                    _ => return Err(PrimeError::BadGenerators(ring.to_string())),
                };
                let small: u64 = n
                    .to_u64_digits()
                    .1
                    .first()
                    .copied()
                    .filter(|_| n.bits() <= 63)
                    .ok_or_else(|| PrimeError::NotPrime(n.to_string()))?;
                if !is_prime_u64(small) {
                    return Err(PrimeError::NotPrime(n.to_string()));
                }
                Ok(AlgPrime {
                    ring,
                    gens: vec![Elem::Int(n)],
                    height,
                })
            }
            BaseRing::Rationals | BaseRing::PrimeField { .. } => {
                Err(PrimeError::BadGenerators(ring.to_string()))
            }
            BaseRing::UnivariatePoly { .. } => {
                if gens.len() != 1 || height != 1 {
                    return Err(PrimeError::BadGenerators(ring.to_string()));
                }
                let f = match &gens[0] {
                    Elem::Uni(f) => f.monic(),
                    _ => return Err(PrimeError::BadGenerators(ring.to_string())),
                };
                match f.is_irreducible() {
                    Some(true) => Ok(AlgPrime {
                        ring,
                        gens: vec![Elem::Uni(f)],
                        height,
                    }),
                    Some(false) => Err(PrimeError::NotPrime(f.to_string())),
                    None => Err(PrimeError::IrreducibilityUndecided(f.to_string())),
                }
            }
            BaseRing::BivariatePoly { .. } => match gens.len() {
                1 => {
                    if height != 1 {
                        return Err(PrimeError::HeightMismatch {
                            given: height,
                            expect: 1,
                        });
                    }
                    let f = match &gens[0] {
                        Elem::Bi(f) => f.monic(),
                        _ => return Err(PrimeError::BadGenerators(ring.to_string())),
                    };
                    match bivariate_irreducible(&f) {
                        Some(true) => Ok(AlgPrime {
                            ring,
                            gens: vec![Elem::Bi(f)],
                            height,
                        }),
                        Some(false) => Err(PrimeError::NotPrime(f.to_string())),
                        None => Err(PrimeError::IrreducibilityUndecided(f.to_string())),
                    }
                }
                2 => {
                    if height != 2 {
                        return Err(PrimeError::HeightMismatch {
                            given: height,
                            expect: 2,
                        });
                    }
                    let (a, b) = match (&gens[0], &gens[1]) {
                        (Elem::Bi(a), Elem::Bi(b)) => (a.monic(), b.monic()),
                        _ => return Err(PrimeError::BadGenerators(ring.to_string())),
                    };
                    let shape = MaximalShape::recognize(&a, &b)
                        .or_else(|| MaximalShape::recognize(&b, &a))
                        .ok_or_else(|| {
                            PrimeError::MaximalityUndecided(a.to_string(), b.to_string())
                        })?;
                    Ok(AlgPrime {
                        ring,
                        gens: vec![Elem::Bi(shape.univ_gen.clone()), Elem::Bi(shape.linear_gen.clone())],
                        height,
                    })
                }
                _ => Err(PrimeError::BadGenerators(ring.to_string())),
            },
        }
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    /// Ideal membership `e in p`, decidable for all certified prime shapes.
    pub fn contains(&self, e: &Elem) -> bool {
        if self.is_zero_ideal() {
            return e.is_zero();
        }
        match &self.ring {
            BaseRing::Integers => match (&self.gens[0], e) {
                (Elem::Int(p), Elem::Int(n)) => (n % p).is_zero(),
                (Elem::Int(p), Elem::Rat(q)) => (q.numer() % p).is_zero(),
                _ => false,
            },
            BaseRing::UnivariatePoly { .. } => match (&self.gens[0], e) {
                (Elem::Uni(f), Elem::Uni(g)) => f.divides(g),
                (Elem::Uni(f), Elem::UniFrac { num, .. }) => f.divides(num),
                _ => false,
            },
            BaseRing::BivariatePoly { .. } => {
                let g = match e {
                    Elem::Bi(g) => g.clone(),
                    Elem::Uni(u) => BPoly::from_upoly_x(u),
                    _ => return false,
                };
                if self.height == 1 {
                    match &self.gens[0] {
                        Elem::Bi(f) => bivariate_divides(f, &g),
                        _ => false,
                    }
                } else {
                    let (a, b) = match (&self.gens[0], &self.gens[1]) {
                        (Elem::Bi(a), Elem::Bi(b)) => (a.clone(), b.clone()),
                        _ => return false,
                    };
                    let shape = MaximalShape::recognize(&a, &b)
                        .or_else(|| MaximalShape::recognize(&b, &a))
                        .expect("verified at construction");
                    shape.contains(&g)
                }
            }
            _ => false,
        }
    }

    /// Algebraic containment of ideals: every generator of `other` lies in `self`.
    pub fn contains_prime(&self, other: &AlgPrime) -> bool {
        other.gens.iter().all(|g| self.contains(g))
    }

    /// Canonical display key, e.g. "(0)", "(2)", "(x,y)".
    pub fn key(&self) -> String {
        if self.gens.is_empty() {
            "(0)".to_string()
        } else {
            let gs: Vec<String> = self.gens.iter().map(|g| g.to_string()).collect();
            format!("({})", gs.join(","))
        }
    }
}

impl fmt::Display for AlgPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.key())
    }
}

/// A maximal ideal of k[x,y] in certified shape (p(v), w - h(v)) with p
/// irreducible univariate in v.
struct MaximalShape {
    univ_gen: BPoly,
    linear_gen: BPoly,
    /// variable of the univariate generator: 'x' or 'y'
    var: char,
    p: UPoly,
    h: UPoly,
}

impl MaximalShape {
    fn recognize(univ: &BPoly, lin: &BPoly) -> Option<MaximalShape> {
        let (var, p) = univ.as_univariate()?;
        if p.is_irreducible() != Some(true) {
            return None;
        }
        // lin must be w - h(v) where w is the other variable
        let (w_deg, v_of): (u32, Box<dyn Fn(&super::poly::Mono) -> (u32, u32)>) = match var {
            'x' => (
                lin.degree_y().unwrap_or(0),
                Box::new(|m: &super::poly::Mono| (m.1, m.0)),
            ),
            _ => (
                lin.degree_x().unwrap_or(0),
                Box::new(|m: &super::poly::Mono| (m.0, m.1)),
            ),
        };
        if w_deg != 1 {
            return None;
        }
        let field = lin.field.clone();
        let mut w_coeff = UPoly::zero(&field); // coefficient of w, poly in v
        let mut c_part = UPoly::zero(&field); // w-free part, poly in v
        for (m, c) in &lin.terms {
            let (wd, vd) = v_of(m);
            let mono = UPoly::monomial(&field, vd as usize, c.clone());
            match wd {
                0 => c_part = c_part.add(&mono),
                1 => w_coeff = w_coeff.add(&mono),
                _ => return None,
            }
        }
        // need w-coefficient a nonzero constant (normalize to w - h)
        if !w_coeff.is_constant() || w_coeff.is_zero() {
            return None;
        }
        let inv = w_coeff.leading().unwrap().clone().inv();
        let h = c_part.scale(&inv).neg();
        Some(MaximalShape {
            univ_gen: univ.clone(),
            linear_gen: lin.clone(),
            var,
            p: p.monic(),
            h,
        })
    }

    /// Membership: substitute w = h(v), reduce mod p(v).
    fn contains(&self, g: &BPoly) -> bool {
        let field = g.field.clone();
        let mut acc = UPoly::zero(&field);
        for (m, c) in &g.terms {
            let (vd, wd) = match self.var {
                'x' => (m.0, m.1),
                _ => (m.1, m.0),
            };
            let mut t = UPoly::monomial(&field, vd as usize, c.clone());
            for _ in 0..wd {
                t = t.mul(&self.h);
            }
            acc = acc.add(&t);
        }
        acc.divrem(&self.p).1.is_zero()
    }
}

/// Divisibility in k[x,y] by single-divisor multivariate division.
pub fn bivariate_divides(f: &BPoly, g: &BPoly) -> bool {
    if g.is_zero() {
        return true;
    }
    if f.is_zero() {
        return false;
    }
    let (flt, flc) = f.leading_term().unwrap();
    let flc = flc.clone();
    let mut rem = g.clone();
    loop {
        let Some((rlt, rlc)) = rem.leading_term() else {
            return true;
        };
        if !BPoly::monomial_divides(&flt, &rlt) {
            return false;
        }
        let c = rlc.div(&flc);
        let m = (rlt.0 - flt.0, rlt.1 - flt.1);
        rem = rem.sub(&f.mul_monomial(m, &c));
    }
}

/// Exact quotient in k[x,y]; panics if not divisible.
pub fn bivariate_div_exact(g: &BPoly, f: &BPoly) -> BPoly {
    let field = g.field.clone();
    let mut quot = BPoly::zero(&field);
    let (flt, flc) = f.leading_term().expect("division by zero");
    let flc = flc.clone();
    let mut rem = g.clone();
    while let Some((rlt, rlc)) = rem.leading_term() {
        assert!(
            BPoly::monomial_divides(&flt, &rlt),
            "inexact bivariate division"
        );
        let c = rlc.div(&flc);
        let m = (rlt.0 - flt.0, rlt.1 - flt.1);
        quot = quot.add(&BPoly::monomial(&field, m, c.clone()));
        rem = rem.sub(&f.mul_monomial(m, &c));
    }
    quot
}

/// Irreducibility in k[x,y] for the shapes this engine certifies:
/// single variables, univariate irreducibles, and polynomials linear in
/// one variable with coprime content.
fn bivariate_irreducible(f: &BPoly) -> Option<bool> {
    if f.is_zero() || f.is_constant() {
        return Some(false);
    }
    if let Some((_, u)) = f.as_univariate() {
        return u.is_irreducible();
    }
    let field = f.field.clone();
    // linear in one variable: f = a(v) * w + b(v); irreducible iff gcd(a, b) = 1
    for var in ['x', 'y'] {
        let wdeg = match var {
            'x' => f.degree_y().unwrap_or(0),
            _ => f.degree_x().unwrap_or(0),
        };
        if wdeg != 1 {
            continue;
        }
        let mut a = UPoly::zero(&field);
        let mut b = UPoly::zero(&field);
        for (m, c) in &f.terms {
            let (vd, wd) = match var {
                'x' => (m.0, m.1),
                _ => (m.1, m.0),
            };
            let t = UPoly::monomial(&field, vd as usize, c.clone());
            if wd == 1 {
                a = a.add(&t);
            } else {
                b = b.add(&t);
            }
        }
        let g = a.gcd(&b);
        return Some(g.degree() == Some(0));
    }
    None
}

/// Convenience: the integer prime (n) of ZZ.
pub fn int_prime(n: i64) -> AlgPrime {
    AlgPrime::new(BaseRing::Integers, vec![Elem::Int(BigInt::from(n))], 1)
        .expect("not a prime integer")
}

impl AlgPrime {
    /// Generators as big integers, for integer primes.
    pub fn int_gen(&self) -> Option<BigInt> {
        match self.gens.first() {
            Some(Elem::Int(n)) => Some(n.clone()),
            _ => None,
        }
    }

    /// Generator as a univariate polynomial, for k[x] primes.
    pub fn uni_gen(&self) -> Option<UPoly> {
        match self.gens.first() {
            Some(Elem::Uni(f)) => Some(f.clone()),
            _ => None,
        }
    }

    /// Generators usable in Koszul complexes over the base core.
    pub fn koszul_gens(&self) -> Vec<Elem> {
        self.gens.clone()
    }
}

