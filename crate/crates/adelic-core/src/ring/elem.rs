use super::poly::{BPoly, UPoly};
use super::scalar::{FieldSpec, Scalar};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// The ring a matrix lives over: a PID core or the bivariate polynomial ring.
///
/// Localized cores carry the primes of the localization; their elements are
/// fractions with denominators outside every listed prime.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CoreRing {
    Integers,
    IntegersLocalized { primes: Vec<BigInt> },
    Rationals,
    PrimeField { p: u64 },
    UniPoly { coeff: FieldSpec },
    UniPolyLocalized { coeff: FieldSpec, primes: Vec<UPoly> },
    /// The fraction field k(x), i.e. the univariate ring localized at (0).
    UniFunctionField { coeff: FieldSpec },
    BiPoly { coeff: FieldSpec },
}

impl CoreRing {
    pub fn is_field(&self) -> bool {
        matches!(
            self,
            CoreRing::Rationals | CoreRing::PrimeField { .. } | CoreRing::UniFunctionField { .. }
        )
    }

    pub fn supports_snf(&self) -> bool {
        !matches!(self, CoreRing::BiPoly { .. })
    }

    pub fn zero(&self) -> Elem {
        match self {
            CoreRing::Integers => Elem::Int(BigInt::zero()),
            CoreRing::IntegersLocalized { .. } | CoreRing::Rationals => {
                Elem::Rat(BigRational::zero())
            }
            CoreRing::PrimeField { p } => Elem::Fp { p: *p, a: 0 },
            CoreRing::UniPoly { coeff } => Elem::Uni(UPoly::zero(coeff)),
            CoreRing::UniPolyLocalized { coeff, .. } | CoreRing::UniFunctionField { coeff } => {
                Elem::UniFrac {
                    num: UPoly::zero(coeff),
                    den: UPoly::constant(Scalar::one(coeff)),
                }
            }
            CoreRing::BiPoly { coeff } => Elem::Bi(BPoly::zero(coeff)),
        }
    }

    pub fn one(&self) -> Elem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Elem {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> Elem {
        match self {
            CoreRing::Integers => Elem::Int(n.clone()),
            CoreRing::IntegersLocalized { .. } | CoreRing::Rationals => {
                Elem::Rat(BigRational::from(n.clone()))
            }
            CoreRing::PrimeField { p } => {
                match Scalar::from_int(&FieldSpec::PrimeField { p: *p }, n) {
                    Scalar::Fp { p, a } => Elem::Fp { p, a },
                    _ => unreachable!(),
                }
            }
            CoreRing::UniPoly { coeff } => Elem::Uni(UPoly::constant(Scalar::from_int(coeff, n))),
            CoreRing::UniPolyLocalized { coeff, .. } | CoreRing::UniFunctionField { coeff } => {
                Elem::UniFrac {
                    num: UPoly::constant(Scalar::from_int(coeff, n)),
                    den: UPoly::constant(Scalar::one(coeff)),
                }
            }
            CoreRing::BiPoly { coeff } => Elem::Bi(BPoly::constant(Scalar::from_int(coeff, n))),
        }
    }

    /// Localize this core further at the given integer/polynomial primes.
    pub fn localized_at_primes(&self, int_primes: &[BigInt], poly_primes: &[UPoly]) -> CoreRing {
        match self {
            CoreRing::Integers | CoreRing::IntegersLocalized { .. } => {
                if int_primes.is_empty() {
                    CoreRing::Rationals
                } else {
                    let mut primes = int_primes.to_vec();
                    primes.sort();
                    primes.dedup();
                    CoreRing::IntegersLocalized { primes }
                }
            }
            CoreRing::UniPoly { coeff }
            | CoreRing::UniPolyLocalized { coeff, .. }
            | CoreRing::UniFunctionField { coeff } => {
                if poly_primes.is_empty() {
                    CoreRing::UniFunctionField {
                        coeff: coeff.clone(),
                    }
                } else {
                    let mut primes: Vec<UPoly> = poly_primes.iter().map(|f| f.monic()).collect();
                    primes.sort_by_key(|f| f.to_string());
                    primes.dedup();
                    CoreRing::UniPolyLocalized {
                        coeff: coeff.clone(),
                        primes,
                    }
                }
            }
            other => other.clone(),
        }
    }
}

impl fmt::Display for CoreRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreRing::Integers => write!(f, "ZZ"),
            CoreRing::IntegersLocalized { primes } => {
                let ps: Vec<String> = primes.iter().map(|p| p.to_string()).collect();
                write!(f, "ZZ_({})", ps.join(",("))
            }
            CoreRing::Rationals => write!(f, "QQ"),
            CoreRing::PrimeField { p } => write!(f, "GF({p})"),
            CoreRing::UniPoly { coeff } => write!(f, "{coeff}[x]"),
            CoreRing::UniPolyLocalized { coeff, primes } => {
                let ps: Vec<String> = primes.iter().map(|p| p.to_string()).collect();
                write!(f, "{coeff}[x]_({})", ps.join("),("))
            }
            CoreRing::UniFunctionField { coeff } => write!(f, "{coeff}(x)"),
            CoreRing::BiPoly { coeff } => write!(f, "{coeff}[x,y]"),
        }
    }
}

/// An exact element of a core ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Elem {
    Int(BigInt),
    Rat(BigRational),
    Fp { p: u64, a: u64 },
    Uni(UPoly),
    UniFrac { num: UPoly, den: UPoly },
    Bi(BPoly),
}

impl Elem {
    pub fn is_zero(&self) -> bool {
        match self {
            Elem::Int(n) => n.is_zero(),
            Elem::Rat(q) => q.is_zero(),
            Elem::Fp { a, .. } => *a == 0,
            Elem::Uni(p) => p.is_zero(),
            Elem::UniFrac { num, .. } => num.is_zero(),
            Elem::Bi(p) => p.is_zero(),
        }
    }

    pub fn add(&self, other: &Elem) -> Elem {
        match (self, other) {
            (Elem::Int(a), Elem::Int(b)) => Elem::Int(a + b),
            (Elem::Rat(a), Elem::Rat(b)) => Elem::Rat(a + b),
            (Elem::Fp { p, a }, Elem::Fp { p: q, a: b }) => {
                assert_eq!(p, q);
                Elem::Fp {
                    p: *p,
                    a: ((*a as u128 + *b as u128) % *p as u128) as u64,
                }
            }
            (Elem::Uni(a), Elem::Uni(b)) => Elem::Uni(a.add(b)),
            (
                Elem::UniFrac { num: a, den: b },
                Elem::UniFrac { num: c, den: d },
            ) => normalize_unifrac(a.mul(d).add(&c.mul(b)), b.mul(d)),
            (Elem::Bi(a), Elem::Bi(b)) => Elem::Bi(a.add(b)),
            _ => panic!("mismatched element kinds in add"),
        }
    }

    pub fn neg(&self) -> Elem {
        match self {
            Elem::Int(a) => Elem::Int(-a),
            Elem::Rat(a) => Elem::Rat(-a),
            Elem::Fp { p, a } => Elem::Fp {
                p: *p,
                a: if *a == 0 { 0 } else { p - a },
            },
            Elem::Uni(a) => Elem::Uni(a.neg()),
            Elem::UniFrac { num, den } => Elem::UniFrac {
                num: num.neg(),
                den: den.clone(),
            },
            Elem::Bi(a) => Elem::Bi(a.neg()),
        }
    }

    pub fn sub(&self, other: &Elem) -> Elem {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Elem) -> Elem {
        match (self, other) {
            (Elem::Int(a), Elem::Int(b)) => Elem::Int(a * b),
            (Elem::Rat(a), Elem::Rat(b)) => Elem::Rat(a * b),
            (Elem::Fp { p, a }, Elem::Fp { p: q, a: b }) => {
                assert_eq!(p, q);
                Elem::Fp {
                    p: *p,
                    a: ((*a as u128 * *b as u128) % *p as u128) as u64,
                }
            }
            (Elem::Uni(a), Elem::Uni(b)) => Elem::Uni(a.mul(b)),
            (
                Elem::UniFrac { num: a, den: b },
                Elem::UniFrac { num: c, den: d },
            ) => normalize_unifrac(a.mul(c), b.mul(d)),
            (Elem::Bi(a), Elem::Bi(b)) => Elem::Bi(a.mul(b)),
            _ => panic!("mismatched element kinds in mul"),
        }
    }
}

fn normalize_unifrac(num: UPoly, den: UPoly) -> Elem {
    assert!(!den.is_zero(), "zero denominator");
    if num.is_zero() {
        return Elem::UniFrac {
            num: UPoly::zero(&den.field),
            den: UPoly::constant(Scalar::one(&den.field)),
        };
    }
    let g = num.gcd(&den);
    let num = num.divrem(&g).0;
    let den = den.divrem(&g).0;
    // make denominator monic
    let lead = den.leading().unwrap().clone();
    let inv = lead.inv();
    Elem::UniFrac {
        num: num.scale(&inv),
        den: den.scale(&inv),
    }
}

/// p-adic valuation of a nonzero integer.
pub fn int_valuation(n: &BigInt, p: &BigInt) -> u64 {
    assert!(!n.is_zero());
    let mut v = 0u64;
    let mut m = n.abs();
    while (&m % p).is_zero() {
        m /= p;
        v += 1;
    }
    v
}

/// f-adic valuation of a nonzero polynomial.
pub fn poly_valuation(g: &UPoly, f: &UPoly) -> u64 {
    assert!(!g.is_zero());
    let mut v = 0u64;
    let mut m = g.clone();
    loop {
        let (q, r) = m.divrem(f);
        if r.is_zero() {
            m = q;
            v += 1;
        } else {
            return v;
        }
    }
}

impl CoreRing {
    /// Does `e` denote a valid element of this core (denominator certified)?
    pub fn validate(&self, e: &Elem) -> bool {
        match (self, e) {
            (CoreRing::Integers, Elem::Int(_)) => true,
            (CoreRing::Rationals, Elem::Rat(_)) => true,
            (CoreRing::IntegersLocalized { primes }, Elem::Rat(q)) => {
                primes.iter().all(|p| !(q.denom() % p).is_zero())
            }
            (CoreRing::PrimeField { p }, Elem::Fp { p: q, .. }) => p == q,
            (CoreRing::UniPoly { coeff }, Elem::Uni(f)) => f.field == *coeff,
            (CoreRing::UniPolyLocalized { coeff, primes }, Elem::UniFrac { num, den }) => {
                num.field == *coeff
                    && den.field == *coeff
                    && !den.is_zero()
                    && primes.iter().all(|f| !f.divides(den))
            }
            (CoreRing::UniFunctionField { coeff }, Elem::UniFrac { num, den }) => {
                num.field == *coeff && den.field == *coeff && !den.is_zero()
            }
            (CoreRing::BiPoly { coeff }, Elem::Bi(f)) => f.field == *coeff,
            _ => false,
        }
    }

    pub fn is_unit(&self, e: &Elem) -> bool {
        if e.is_zero() {
            return false;
        }
        match (self, e) {
            (CoreRing::Integers, Elem::Int(n)) => n.abs().is_one(),
            (CoreRing::Rationals, Elem::Rat(_)) => true,
            (CoreRing::IntegersLocalized { primes }, Elem::Rat(q)) => {
                primes.iter().all(|p| !(q.numer() % p).is_zero())
            }
            (CoreRing::PrimeField { .. }, Elem::Fp { .. }) => true,
            (CoreRing::UniPoly { .. }, Elem::Uni(f)) => f.is_constant(),
            (CoreRing::UniPolyLocalized { primes, .. }, Elem::UniFrac { num, .. }) => {
                primes.iter().all(|f| !f.divides(num))
            }
            (CoreRing::UniFunctionField { .. }, Elem::UniFrac { .. }) => true,
            (CoreRing::BiPoly { .. }, Elem::Bi(f)) => f.is_constant(),
            _ => panic!("element does not belong to core {self}"),
        }
    }

    /// Write `e = unit * assoc` with `assoc` the canonical associate.
    ///
    /// Canonical associates: non-negative integers, products of the
    /// localized primes, monic polynomials, 1 in fields.
    pub fn canonical_associate(&self, e: &Elem) -> (Elem, Elem) {
        if e.is_zero() {
            return (self.one(), self.zero());
        }
        match (self, e) {
            (CoreRing::Integers, Elem::Int(n)) => {
                let assoc = n.abs();
                let unit = if n.is_negative() { -1 } else { 1 };
                (Elem::Int(BigInt::from(unit)), Elem::Int(assoc))
            }
            (CoreRing::IntegersLocalized { primes }, Elem::Rat(q)) => {
                let mut assoc = BigInt::one();
                for p in primes {
                    let v = int_valuation(q.numer(), p);
                    assoc *= p.pow(v as u32);
                }
                let assoc = BigRational::from(assoc);
                let unit = q / &assoc;
                (Elem::Rat(unit), Elem::Rat(assoc))
            }
            (CoreRing::UniPoly { .. }, Elem::Uni(f)) => {
                let lead = f.leading().unwrap().clone();
                (
                    Elem::Uni(UPoly::constant(lead.clone())),
                    Elem::Uni(f.scale(&lead.inv())),
                )
            }
            (CoreRing::UniPolyLocalized { coeff, primes }, Elem::UniFrac { num, den }) => {
                let mut assoc = UPoly::constant(Scalar::one(coeff));
                for f in primes {
                    let v = poly_valuation(num, f);
                    for _ in 0..v {
                        assoc = assoc.mul(f);
                    }
                }
                let unit_num = num.divrem(&assoc).0;
                (
                    normalize_unifrac(unit_num, den.clone()),
                    Elem::UniFrac {
                        num: assoc,
                        den: UPoly::constant(Scalar::one(coeff)),
                    },
                )
            }
            // fields: the element itself is the unit
            _ => (e.clone(), self.one()),
        }
    }

    /// Pivot-size hint for SNF: smaller is better.
    pub fn size_hint(&self, e: &Elem) -> u64 {
        match e {
            Elem::Int(n) => n.bits(),
            Elem::Rat(q) => q.numer().bits(),
            Elem::Fp { .. } => 1,
            Elem::Uni(f) => f.degree().map_or(0, |d| d as u64 + 1),
            Elem::UniFrac { num, .. } => num.degree().map_or(0, |d| d as u64 + 1),
            Elem::Bi(f) => f.total_degree().map_or(0, |d| d as u64 + 1),
        }
    }

    pub fn divides(&self, a: &Elem, b: &Elem) -> bool {
        if a.is_zero() {
            return b.is_zero();
        }
        if b.is_zero() {
            return true;
        }
        match self {
            CoreRing::Integers => match (a, b) {
                (Elem::Int(a), Elem::Int(b)) => (b % a).is_zero(),
                _ => panic!("bad elements"),
            },
            CoreRing::Rationals
            | CoreRing::PrimeField { .. }
            | CoreRing::UniFunctionField { .. } => true,
            CoreRing::IntegersLocalized { primes } => match (a, b) {
                (Elem::Rat(a), Elem::Rat(b)) => primes.iter().all(|p| {
                    let va = int_valuation(a.numer(), p);
                    let vb = int_valuation(b.numer(), p);
                    va <= vb
                }),
                _ => panic!("bad elements"),
            },
            CoreRing::UniPoly { .. } => match (a, b) {
                (Elem::Uni(a), Elem::Uni(b)) => a.divides(b),
                _ => panic!("bad elements"),
            },
            CoreRing::UniPolyLocalized { primes, .. } => match (a, b) {
                (Elem::UniFrac { num: na, .. }, Elem::UniFrac { num: nb, .. }) => {
                    primes.iter().all(|f| {
                        poly_valuation(na, f) <= poly_valuation(nb, f)
                    })
                }
                _ => panic!("bad elements"),
            },
            CoreRing::BiPoly { .. } => panic!("divisibility in k[x,y] requires the groebner path"),
        }
    }

    /// Exact division b / a; panics if a does not divide b.
    pub fn div_exact(&self, b: &Elem, a: &Elem) -> Elem {
        assert!(!a.is_zero(), "division by zero");
        if b.is_zero() {
            return self.zero();
        }
        match (b, a) {
            (Elem::Int(b), Elem::Int(a)) => {
                let (q, r) = b.div_rem(a);
                assert!(r.is_zero(), "inexact division");
                Elem::Int(q)
            }
            (Elem::Rat(b), Elem::Rat(a)) => Elem::Rat(b / a),
            (Elem::Fp { p, a: b }, Elem::Fp { a, .. }) => {
                let inv = Scalar::Fp { p: *p, a: *a }.inv();
                match (Scalar::Fp { p: *p, a: *b }).mul(&inv) {
                    Scalar::Fp { p, a } => Elem::Fp { p, a },
                    _ => unreachable!(),
                }
            }
            (Elem::Uni(b), Elem::Uni(a)) => {
                let (q, r) = b.divrem(a);
                assert!(r.is_zero(), "inexact division");
                Elem::Uni(q)
            }
            (Elem::UniFrac { num: nb, den: db }, Elem::UniFrac { num: na, den: da }) => {
                normalize_unifrac(nb.mul(da), db.mul(na))
            }
            _ => panic!("mismatched element kinds in div_exact"),
        }
    }

    /// Extended gcd: (g, s, t) with s*a + t*b = g, g the canonical associate.
    pub fn gcd_bezout(&self, a: &Elem, b: &Elem) -> (Elem, Elem, Elem) {
        if a.is_zero() {
            let (u, g) = self.canonical_associate(b);
            let uinv = self.inv_unit(&u);
            return (g, self.zero(), uinv);
        }
        if b.is_zero() {
            let (u, g) = self.canonical_associate(a);
            let uinv = self.inv_unit(&u);
            return (g, uinv, self.zero());
        }
        match self {
            CoreRing::Integers => match (a, b) {
                (Elem::Int(a), Elem::Int(b)) => {
                    let eg = a.extended_gcd(b);
                    (Elem::Int(eg.gcd), Elem::Int(eg.x), Elem::Int(eg.y))
                }
                _ => panic!("bad elements"),
            },
            CoreRing::Rationals
            | CoreRing::PrimeField { .. }
            | CoreRing::UniFunctionField { .. } => {
                // fields: gcd is 1 via a alone
                (self.one(), self.inv_unit(a), self.zero())
            }
            CoreRing::IntegersLocalized { primes } => match (a, b) {
                (Elem::Rat(ra), Elem::Rat(rb)) => {
                    let mut ga = BigInt::one();
                    let mut gb = BigInt::one();
                    let mut g = BigInt::one();
                    for p in primes {
                        let va = int_valuation(ra.numer(), p);
                        let vb = int_valuation(rb.numer(), p);
                        g *= p.pow(va.min(vb) as u32);
                        ga *= p.pow((va - va.min(vb)) as u32);
                        gb *= p.pow((vb - va.min(vb)) as u32);
                    }
                    // ga, gb coprime integers: bezout them
                    let eg = ga.extended_gcd(&gb);
                    debug_assert!(eg.gcd.is_one());
                    // a = ua * g * ga, b = ub * g * gb with ua, ub units
                    let ua = ra / BigRational::from(&g * &ga);
                    let ub = rb / BigRational::from(&g * &gb);
                    let s = BigRational::from(eg.x) / ua;
                    let t = BigRational::from(eg.y) / ub;
                    (Elem::Rat(BigRational::from(g)), Elem::Rat(s), Elem::Rat(t))
                }
                _ => panic!("bad elements"),
            },
            CoreRing::UniPoly { .. } => match (a, b) {
                (Elem::Uni(a), Elem::Uni(b)) => {
                    let (g, s, t) = a.extended_gcd(b);
                    (Elem::Uni(g), Elem::Uni(s), Elem::Uni(t))
                }
                _ => panic!("bad elements"),
            },
            CoreRing::UniPolyLocalized { coeff, primes } => match (a, b) {
                (Elem::UniFrac { num: na, den: da }, Elem::UniFrac { num: nb, den: db }) => {
                    let one = UPoly::constant(Scalar::one(coeff));
                    let mut ga = one.clone();
                    let mut gb = one.clone();
                    let mut g = one.clone();
                    for f in primes {
                        let va = poly_valuation(na, f);
                        let vb = poly_valuation(nb, f);
                        let m = va.min(vb);
                        for _ in 0..m {
                            g = g.mul(f);
                        }
                        for _ in 0..va - m {
                            ga = ga.mul(f);
                        }
                        for _ in 0..vb - m {
                            gb = gb.mul(f);
                        }
                    }
                    let (gg, u, v) = ga.extended_gcd(&gb);
                    debug_assert_eq!(gg.degree(), Some(0));
                    let ua = normalize_unifrac(na.clone(), da.mul(&g).mul(&ga));
                    let ub = normalize_unifrac(nb.clone(), db.mul(&g).mul(&gb));
                    let s = self.div_exact(
                        &Elem::UniFrac {
                            num: u,
                            den: one.clone(),
                        },
                        &ua,
                    );
                    let t = self.div_exact(
                        &Elem::UniFrac {
                            num: v,
                            den: one.clone(),
                        },
                        &ub,
                    );
                    (
                        Elem::UniFrac { num: g, den: one },
                        s,
                        t,
                    )
                }
                _ => panic!("bad elements"),
            },
            CoreRing::BiPoly { .. } => panic!("gcd in k[x,y] requires the groebner path"),
        }
    }

    fn inv_unit(&self, u: &Elem) -> Elem {
        assert!(self.is_unit(u), "not a unit in {self}");
        match u {
            Elem::Int(n) => Elem::Int(n.clone()), // +-1 is its own inverse
            Elem::Rat(q) => Elem::Rat(q.recip()),
            Elem::Fp { p, a } => match (Scalar::Fp { p: *p, a: *a }).inv() {
                Scalar::Fp { p, a } => Elem::Fp { p, a },
                _ => unreachable!(),
            },
            Elem::Uni(f) => {
                let c = f.leading().unwrap().clone().inv();
                Elem::Uni(UPoly::constant(c))
            }
            Elem::UniFrac { num, den } => normalize_unifrac(den.clone(), num.clone()),
            Elem::Bi(f) => {
                let (_, c) = f.leading_term().unwrap();
                Elem::Bi(BPoly::constant(c.clone().inv()))
            }
        }
    }

    /// Multiplicative inverse of a unit.
    pub fn invert(&self, u: &Elem) -> Elem {
        self.inv_unit(u)
    }

    /// Base change into a further-localized core (always injective and flat
    /// for the cores we form). Returns None when `e` makes no sense there.
    pub fn base_change(&self, e: &Elem, to: &CoreRing) -> Option<Elem> {
        if self == to {
            return Some(e.clone());
        }
        match (self, to) {
            (CoreRing::Integers, CoreRing::IntegersLocalized { .. })
            | (CoreRing::Integers, CoreRing::Rationals) => match e {
                Elem::Int(n) => Some(Elem::Rat(BigRational::from(n.clone()))),
                _ => None,
            },
            (CoreRing::IntegersLocalized { .. }, CoreRing::Rationals) => Some(e.clone()),
            (CoreRing::IntegersLocalized { .. }, CoreRing::IntegersLocalized { primes }) => {
                match e {
                    Elem::Rat(q) if primes.iter().all(|p| !(q.denom() % p).is_zero()) => {
                        Some(e.clone())
                    }
                    _ => None,
                }
            }
            (CoreRing::UniPoly { .. }, CoreRing::UniPolyLocalized { coeff, .. })
            | (CoreRing::UniPoly { .. }, CoreRing::UniFunctionField { coeff }) => match e {
                Elem::Uni(f) => Some(Elem::UniFrac {
                    num: f.clone(),
                    den: UPoly::constant(Scalar::one(coeff)),
                }),
                _ => None,
            },
            (CoreRing::UniPolyLocalized { .. }, CoreRing::UniFunctionField { .. }) => {
                Some(e.clone())
            }
            (CoreRing::UniPolyLocalized { .. }, CoreRing::UniPolyLocalized { .. }) => {
                if to.validate(e) {
                    Some(e.clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Int(n) => write!(f, "{n}"),
            Elem::Rat(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Elem::Fp { a, .. } => write!(f, "{a}"),
            Elem::Uni(p) => write!(f, "{p}"),
            Elem::UniFrac { num, den } => {
                if den.is_constant() && den.leading().is_some_and(|c| c.is_one()) {
                    write!(f, "{num}")
                } else {
                    write!(f, "({num})/({den})")
                }
            }
            Elem::Bi(p) => write!(f, "{p}"),
        }
    }
}

impl Serialize for Elem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Serialize, Deserialize)]
struct CoreRingWire {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    coeff: Option<FieldSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    primes: Option<Vec<String>>,
}

impl Serialize for CoreRing {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let wire = match self {
            CoreRing::Integers => CoreRingWire {
                kind: "integers".into(),
                coeff: None,
                primes: None,
            },
            CoreRing::IntegersLocalized { primes } => CoreRingWire {
                kind: "integers_localized".into(),
                coeff: None,
                primes: Some(primes.iter().map(|p| p.to_string()).collect()),
            },
            CoreRing::Rationals => CoreRingWire {
                kind: "rationals".into(),
                coeff: None,
                primes: None,
            },
            CoreRing::PrimeField { p } => CoreRingWire {
                kind: "prime_field".into(),
                coeff: Some(FieldSpec::PrimeField { p: *p }),
                primes: None,
            },
            CoreRing::UniPoly { coeff } => CoreRingWire {
                kind: "uni_poly".into(),
                coeff: Some(coeff.clone()),
                primes: None,
            },
            CoreRing::UniPolyLocalized { coeff, primes } => CoreRingWire {
                kind: "uni_poly_localized".into(),
                coeff: Some(coeff.clone()),
                primes: Some(primes.iter().map(|p| p.to_string()).collect()),
            },
            CoreRing::UniFunctionField { coeff } => CoreRingWire {
                kind: "uni_function_field".into(),
                coeff: Some(coeff.clone()),
                primes: None,
            },
            CoreRing::BiPoly { coeff } => CoreRingWire {
                kind: "bi_poly".into(),
                coeff: Some(coeff.clone()),
                primes: None,
            },
        };
        wire.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CoreRing {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let wire = CoreRingWire::deserialize(d)?;
        let coeff = wire.coeff.clone().unwrap_or(FieldSpec::Rationals);
        let core = match wire.kind.as_str() {
            "integers" => CoreRing::Integers,
            "rationals" => CoreRing::Rationals,
            "prime_field" => match coeff {
                FieldSpec::PrimeField { p } => CoreRing::PrimeField { p },
                _ => return Err(D::Error::custom("prime_field requires a prime modulus")),
            },
            "uni_poly" => CoreRing::UniPoly { coeff },
            "uni_function_field" => CoreRing::UniFunctionField { coeff },
            "bi_poly" => CoreRing::BiPoly { coeff },
            "integers_localized" => {
                let mut primes = vec![];
                for s in wire.primes.unwrap_or_default() {
                    let n: BigInt = s
                        .parse()
                        .map_err(|_| D::Error::custom("bad integer prime"))?;
                    primes.push(n);
                }
                CoreRing::IntegersLocalized { primes }
            }
            "uni_poly_localized" => {
                let mut primes = vec![];
                for s in wire.primes.unwrap_or_default() {
                    match super::parse::parse_elem(&s, &CoreRing::UniPoly { coeff: coeff.clone() })
                    {
                        Ok(Elem::Uni(f)) => primes.push(f),
                        _ => return Err(D::Error::custom("bad polynomial prime")),
                    }
                }
                CoreRing::UniPolyLocalized { coeff, primes }
            }
            other => return Err(D::Error::custom(format!("unknown core ring '{other}'"))),
        };
        Ok(core)
    }
}
