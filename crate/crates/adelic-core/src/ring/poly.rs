use super::scalar::{FieldSpec, Scalar};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Univariate polynomial in `x`, dense ascending coefficients, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UPoly {
    pub field: FieldSpec,
    pub coeffs: Vec<Scalar>,
}

impl UPoly {
    pub fn zero(field: &FieldSpec) -> Self {
        UPoly {
            field: field.clone(),
            coeffs: vec![],
        }
    }

    pub fn constant(c: Scalar) -> Self {
        let field = c.field();
        let mut p = UPoly {
            field,
            coeffs: vec![c],
        };
        p.trim();
        p
    }

    pub fn from_coeffs(field: &FieldSpec, coeffs: Vec<Scalar>) -> Self {
        let mut p = UPoly {
            field: field.clone(),
            coeffs,
        };
        p.trim();
        p
    }

    pub fn monomial(field: &FieldSpec, deg: usize, c: Scalar) -> Self {
        let mut coeffs = vec![Scalar::zero(field); deg];
        coeffs.push(c);
        Self::from_coeffs(field, coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let a = self
                .coeffs
                .get(i)
                .cloned()
                .unwrap_or_else(|| Scalar::zero(&self.field));
            let b = other
                .coeffs
                .get(i)
                .cloned()
                .unwrap_or_else(|| Scalar::zero(&self.field));
            coeffs.push(a.add(&b));
        }
        UPoly::from_coeffs(&self.field, coeffs)
    }

    pub fn neg(&self) -> UPoly {
        UPoly {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero(&self.field);
        }
        let mut coeffs =
            vec![Scalar::zero(&self.field); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        UPoly::from_coeffs(&self.field, coeffs)
    }

    pub fn scale(&self, c: &Scalar) -> UPoly {
        UPoly::from_coeffs(
            &self.field,
            self.coeffs.iter().map(|a| a.mul(c)).collect(),
        )
    }

    /// Euclidean division: returns (quotient, remainder).
    pub fn divrem(&self, divisor: &UPoly) -> (UPoly, UPoly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let mut quot = UPoly::zero(&self.field);
        let dlead = divisor.leading().unwrap().clone();
        let ddeg = divisor.degree().unwrap();
        while let Some(rdeg) = rem.degree() {
            if rdeg < ddeg {
                break;
            }
            let c = rem.leading().unwrap().div(&dlead);
            let m = UPoly::monomial(&self.field, rdeg - ddeg, c);
            quot = quot.add(&m);
            rem = rem.sub(&m.mul(divisor));
        }
        (quot, rem)
    }

    pub fn divides(&self, other: &UPoly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.divrem(self).1.is_zero()
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: returns (g, u, v) with u*self + v*other = g, g monic.
    pub fn extended_gcd(&self, other: &UPoly) -> (UPoly, UPoly, UPoly) {
        let one = UPoly::constant(Scalar::one(&self.field));
        let zero = UPoly::zero(&self.field);
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (one.clone(), zero.clone());
        let (mut t0, mut t1) = (zero, one);
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            (r0, r1) = (r1, r);
            (s0, s1) = (s1.clone(), s0.sub(&q.mul(&s1)));
            (t0, t1) = (t1.clone(), t0.sub(&q.mul(&t1)));
        }
        if let Some(lead) = r0.leading().cloned() {
            let inv = lead.inv();
            (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
        } else {
            (r0, s0, t0)
        }
    }

    pub fn monic(&self) -> UPoly {
        match self.leading() {
            Some(l) if !l.is_one() => self.scale(&l.inv()),
            _ => self.clone(),
        }
    }

    pub fn eval(&self, at: &Scalar) -> Scalar {
        let mut acc = Scalar::zero(&self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(at).add(c);
        }
        acc
    }

    /// Irreducibility over the coefficient field, where decidable.
    ///
    /// Degree <= 1 and low-degree cases are complete; over GF(p) the
    /// Rabin test is complete for any degree. Over the rationals,
    /// degree >= 4 returns `None` when no certificate is found.
    pub fn is_irreducible(&self) -> Option<bool> {
        let deg = self.degree()?;
        if deg == 0 {
            return Some(false);
        }
        if deg == 1 {
            return Some(true);
        }
        match &self.field {
            FieldSpec::PrimeField { p } => Some(self.is_irreducible_fp(*p)),
            FieldSpec::Rationals => {
                if deg <= 3 {
                    // reducible iff it has a root
                    Some(!self.has_rational_root())
                } else if self.has_rational_root() {
                    Some(false)
                } else {
                    None
                }
            }
        }
    }

    fn has_rational_root(&self) -> bool {
        use num_bigint::BigInt;
        use num_rational::BigRational;
        use num_traits::{One, Signed, Zero};
        // clear denominators to a primitive integer polynomial
        let mut den = BigInt::one();
        for c in &self.coeffs {
            if let Scalar::Q(q) = c {
                den = num_integer::Integer::lcm(&den, q.denom());
            }
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| match c {
                Scalar::Q(q) => (q * BigRational::from(den.clone())).to_integer(),
                _ => unreachable!(),
            })
            .collect();
        let a0 = ints.first().cloned().unwrap_or_else(BigInt::zero);
        let an = ints.last().cloned().unwrap();
        if a0.is_zero() {
            return true; // root at 0
        }
        let ps = small_divisors(&a0.abs());
        let qs = small_divisors(&an.abs());
        for p in &ps {
            for q in &qs {
                for sign in [1i32, -1] {
                    let cand = Scalar::Q(
                        BigRational::new(p.clone(), q.clone()) * BigInt::from(sign),
                    );
                    if self.eval(&cand).is_zero() {
                        return true;
                    }
                }
            }
        }
        false
    }

    fn is_irreducible_fp(&self, p: u64) -> bool {
        // Rabin: f irreducible of degree n iff x^(p^n) == x mod f and
        // gcd(x^(p^(n/q)) - x, f) = 1 for each prime q | n.
        let n = self.degree().unwrap();
        let f = self.monic();
        let x = UPoly::monomial(&self.field, 1, Scalar::one(&self.field));
        let frob = |k: u32| -> UPoly {
            // x^(p^k) mod f by repeated p-th powering
            let mut acc = x.clone();
            for _ in 0..k {
                acc = poly_pow_mod(&acc, p, &f);
            }
            acc
        };
        let top = frob(n as u32);
        if !top.sub(&x).divrem(&f).1.is_zero() {
            return false;
        }
        let mut m = n;
        let mut qs = vec![];
        let mut d = 2;
        while d * d <= m {
            if m % d == 0 {
                qs.push(d);
                while m % d == 0 {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            qs.push(m);
        }
        for q in qs {
            let g = frob((n / q) as u32).sub(&x).gcd(&f);
            if g.degree() != Some(0) {
                return false;
            }
        }
        true
    }
}

fn poly_pow_mod(base: &UPoly, mut e: u64, modulus: &UPoly) -> UPoly {
    let field = base.field.clone();
    let mut acc = UPoly::constant(Scalar::one(&field));
    let mut b = base.divrem(modulus).1;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&b).divrem(modulus).1;
        }
        b = b.mul(&b).divrem(modulus).1;
        e >>= 1;
    }
    acc
}

fn small_divisors(n: &num_bigint::BigInt) -> Vec<num_bigint::BigInt> {
    use num_bigint::BigInt;
    use num_traits::Zero;
    let mut out = vec![];
    let mut d = BigInt::from(1);
    // bounded scan; scenario constants are small
    let bound = BigInt::from(100_000u32);
    while &d * &d <= *n && d <= bound {
        if (n % &d).is_zero() {
            out.push(d.clone());
            out.push(n / &d);
        }
        d += 1;
    }
    out.push(n.clone());
    out.sort();
    out.dedup();
    out
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let s = c.to_string();
            let (neg, mag) = match s.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, s),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if mag != "1" {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Exponent pair for a bivariate monomial `x^a * y^b`.
pub type Mono = (u32, u32);

/// Degree-lex comparison with x > y: total degree first, then x-exponent.
pub fn deglex_cmp(a: &Mono, b: &Mono) -> Ordering {
    let (da, db) = (a.0 + a.1, b.0 + b.1);
    da.cmp(&db).then(a.0.cmp(&b.0))
}

/// Sparse bivariate polynomial in `x, y` over a coefficient field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BPoly {
    pub field: FieldSpec,
    /// map monomial -> nonzero coefficient
    pub terms: BTreeMap<Mono, Scalar>,
}

impl BPoly {
    pub fn zero(field: &FieldSpec) -> Self {
        BPoly {
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Scalar) -> Self {
        let field = c.field();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((0, 0), c);
        }
        BPoly { field, terms }
    }

    pub fn monomial(field: &FieldSpec, m: Mono, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        BPoly {
            field: field.clone(),
            terms,
        }
    }

    pub fn var_x(field: &FieldSpec) -> Self {
        Self::monomial(field, (1, 0), Scalar::one(field))
    }

    pub fn var_y(field: &FieldSpec) -> Self {
        Self::monomial(field, (0, 1), Scalar::one(field))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| *m == (0, 0))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(a, b)| a + b).max()
    }

    /// Leading term under degree-lex with x > y.
    pub fn leading_term(&self) -> Option<(Mono, &Scalar)> {
        self.terms
            .iter()
            .max_by(|(m, _), (n, _)| deglex_cmp(m, n))
            .map(|(m, c)| (*m, c))
    }

    fn insert_add(&mut self, m: Mono, c: Scalar) {
        match self.terms.get(&m) {
            Some(old) => {
                let s = old.add(&c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    self.terms.insert(m, s);
                }
            }
            None => {
                if !c.is_zero() {
                    self.terms.insert(m, c);
                }
            }
        }
    }

    pub fn add(&self, other: &BPoly) -> BPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_add(*m, c.clone());
        }
        out
    }

    pub fn neg(&self) -> BPoly {
        BPoly {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &BPoly) -> BPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &BPoly) -> BPoly {
        let mut out = BPoly::zero(&self.field);
        for (m, c) in &self.terms {
            for (n, d) in &other.terms {
                out.insert_add((m.0 + n.0, m.1 + n.1), c.mul(d));
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> BPoly {
        if c.is_zero() {
            return BPoly::zero(&self.field);
        }
        BPoly {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (*m, a.mul(c)))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: Mono, c: &Scalar) -> BPoly {
        if c.is_zero() {
            return BPoly::zero(&self.field);
        }
        BPoly {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .map(|(n, a)| ((n.0 + m.0, n.1 + m.1), a.mul(c)))
                .collect(),
        }
    }

    /// Is every term divisible by the monomial `m`?
    pub fn monomial_divides(m: &Mono, n: &Mono) -> bool {
        m.0 <= n.0 && m.1 <= n.1
    }

    pub fn monic(&self) -> BPoly {
        match self.leading_term() {
            Some((_, c)) if !c.is_one() => self.scale(&c.clone().inv()),
            _ => self.clone(),
        }
    }

    /// View as univariate in x (coefficients in y) for content computations.
    pub fn degree_x(&self) -> Option<u32> {
        self.terms.keys().map(|(a, _)| *a).max()
    }

    pub fn degree_y(&self) -> Option<u32> {
        self.terms.keys().map(|(_, b)| *b).max()
    }

    pub fn from_upoly_x(p: &UPoly) -> BPoly {
        let mut out = BPoly::zero(&p.field);
        for (i, c) in p.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out.terms.insert((i as u32, 0), c.clone());
            }
        }
        out
    }

    pub fn from_upoly_y(p: &UPoly) -> BPoly {
        let mut out = BPoly::zero(&p.field);
        for (i, c) in p.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out.terms.insert((0, i as u32), c.clone());
            }
        }
        out
    }

    /// If the polynomial only involves one variable, return it as univariate.
    pub fn as_univariate(&self) -> Option<(char, UPoly)> {
        let dx = self.degree_x().unwrap_or(0);
        let dy = self.degree_y().unwrap_or(0);
        if dx > 0 && dy > 0 {
            return None;
        }
        let var = if dy > 0 { 'y' } else { 'x' };
        let deg = dx.max(dy) as usize;
        let mut coeffs = vec![Scalar::zero(&self.field); deg + 1];
        for ((a, b), c) in &self.terms {
            coeffs[(*a + *b) as usize] = c.clone();
        }
        Some((var, UPoly::from_coeffs(&self.field, coeffs)))
    }

    /// True if every nonzero term has the same total degree.
    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|(a, b)| a + b);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }
}

impl fmt::Display for BPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Mono, &Scalar)> = self.terms.iter().collect();
        terms.sort_by(|(m, _), (n, _)| deglex_cmp(n, m));
        let mut first = true;
        for (m, c) in terms {
            let s = c.to_string();
            let (neg, mag) = match s.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, s),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut parts: Vec<String> = vec![];
            if *m == (0, 0) || mag != "1" {
                parts.push(mag);
            }
            match m.0 {
                0 => {}
                1 => parts.push("x".into()),
                a => parts.push(format!("x^{a}")),
            }
            match m.1 {
                0 => {}
                1 => parts.push("y".into()),
                b => parts.push(format!("y^{b}")),
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}
