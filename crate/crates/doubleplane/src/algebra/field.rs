use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;
use std::cmp::Ordering;
use std::fmt;

use crate::error::Error;
use crate::Result;

/// An exact base field: Q, F_p, or F_{p^k} presented over F_p by a monic
/// irreducible modulus. Extension towers are always flattened, so `Ext` is
/// the only extension shape and two specs are equal iff their data agree.
///
/// Arithmetic lives on the spec (context style): elements are plain data and
/// every operation takes the owning spec. Mixing elements of different specs
/// is a programming error and panics.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    Prime { p: u64 },
    Ext { p: u64, k: u32, modulus: Vec<u64> },
}

/// An element of some `FieldSpec`. Representations are canonical: reduced
/// fraction with positive denominator, residue in [0, p), or a coefficient
/// vector of length k reduced mod p.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldElement {
    Rat(BigRational),
    Fp(u64),
    Ext(Vec<u64>),
}

pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn addmod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

pub(crate) fn submod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + (p - b)
    }
}

pub(crate) fn powmod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        e >>= 1;
    }
    acc
}

/// Modular inverse in F_p; the input must be nonzero mod p.
pub(crate) fn invmod(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    assert!(r0 == 1, "invmod of a noninvertible element");
    (s0.rem_euclid(p as i128)) as u64
}

/// Deterministic Miller-Rabin, valid for every u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// Dense polynomial helpers over F_p on raw u64 vectors (coeff i of x^i,
// trailing zeros allowed on input, outputs trimmed). These back the Ext
// arithmetic so extension elements never box into FieldElement internally.
mod fppoly {
    use super::{invmod, mulmod, submod};

    pub fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    pub fn rem(mut a: Vec<u64>, m: &[u64], p: u64) -> Vec<u64> {
        // m monic
        trim(&mut a);
        let dm = m.len() - 1;
        while a.len() > dm {
            let lead = *a.last().unwrap();
            let shift = a.len() - 1 - dm;
            if lead != 0 {
                for i in 0..=dm {
                    let t = mulmod(lead, m[i], p);
                    a[shift + i] = submod(a[shift + i], t, p);
                }
            }
            a.pop();
            trim(&mut a);
        }
        a
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                out[i + j] = super::addmod(out[i + j], mulmod(ai, bj, p), p);
            }
        }
        trim(&mut out);
        out
    }

    /// Inverse of a mod m (m monic, gcd(a, m) = 1) by extended Euclid.
    pub fn invert(a: &[u64], m: &[u64], p: u64) -> Option<Vec<u64>> {
        let mut r0 = m.to_vec();
        let mut r1 = rem(a.to_vec(), m, p);
        let mut s0: Vec<u64> = vec![];
        let mut s1: Vec<u64> = vec![1];
        while !r1.is_empty() {
            let (q, r) = divrem(&r0, &r1, p);
            let qs1 = mul(&q, &s1, p);
            let s2 = sub(&s0, &qs1, p);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
        }
        if r0.len() != 1 {
            return None;
        }
        let c = invmod(r0[0], p);
        let mut out: Vec<u64> = s0.iter().map(|&x| mulmod(x, c, p)).collect();
        out = rem(out, m, p);
        Some(out)
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut out = vec![0u64; n];
        for i in 0..n {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            out[i] = submod(x, y, p);
        }
        trim(&mut out);
        out
    }

    pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
        let mut r = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        let binv = invmod(b[db], p);
        if r.len() <= db {
            return (vec![], r);
        }
        let mut q = vec![0u64; r.len() - db];
        while r.len() > db {
            let lead = mulmod(*r.last().unwrap(), binv, p);
            let shift = r.len() - 1 - db;
            q[shift] = lead;
            if lead != 0 {
                for i in 0..=db {
                    let t = mulmod(lead, b[i], p);
                    r[shift + i] = submod(r[shift + i], t, p);
                }
            }
            r.pop();
            trim(&mut r);
        }
        trim(&mut q);
        (q, r)
    }
}

impl FieldSpec {
    pub fn rationals() -> Self {
        FieldSpec::Rationals
    }

    /// The prime field F_p. Primality is checked deterministically.
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec::Prime { p })
    }

    /// Extension constructor with a caller-supplied modulus given as raw
    /// coefficients over F_p (constant first, monic). Irreducibility is the
    /// caller's burden; `factor::extension_field` is the validated path.
    pub(crate) fn ext_unchecked(p: u64, modulus: Vec<u64>) -> Self {
        debug_assert!(modulus.last() == Some(&1) && modulus.len() >= 3);
        let k = (modulus.len() - 1) as u32;
        FieldSpec::Ext { p, k, modulus }
    }

    /// Characteristic: 0 for Q.
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime { p } | FieldSpec::Ext { p, .. } => *p,
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self, FieldSpec::Rationals)
    }

    /// Extension degree over the prime field (1 for F_p, 0 for Q).
    pub fn extension_degree(&self) -> u32 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime { .. } => 1,
            FieldSpec::Ext { k, .. } => *k,
        }
    }

    /// Field order q = p^k for finite fields.
    pub fn order(&self) -> Option<BigUint> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::Prime { p } => Some(BigUint::from(*p)),
            FieldSpec::Ext { p, k, .. } => Some(BigUint::from(*p).pow(*k)),
        }
    }

    /// Field order as u64 when it fits.
    pub fn order_u64(&self) -> Option<u64> {
        self.order().and_then(|q| u64::try_from(&q).ok())
    }

    pub fn zero(&self) -> FieldElement {
        match self {
            FieldSpec::Rationals => FieldElement::Rat(BigRational::zero()),
            FieldSpec::Prime { .. } => FieldElement::Fp(0),
            FieldSpec::Ext { k, .. } => FieldElement::Ext(vec![0; *k as usize]),
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_u64(1)
    }

    pub fn from_u64(&self, n: u64) -> FieldElement {
        match self {
            FieldSpec::Rationals => FieldElement::Rat(BigRational::from(BigInt::from(n))),
            FieldSpec::Prime { p } => FieldElement::Fp(n % p),
            FieldSpec::Ext { p, k, .. } => {
                let mut v = vec![0; *k as usize];
                v[0] = n % p;
                FieldElement::Ext(v)
            }
        }
    }

    pub fn from_i64(&self, n: i64) -> FieldElement {
        if n >= 0 {
            self.from_u64(n as u64)
        } else {
            self.neg(&self.from_u64(n.unsigned_abs()))
        }
    }

    pub fn from_rational(&self, r: BigRational) -> Result<FieldElement> {
        match self {
            FieldSpec::Rationals => Ok(FieldElement::Rat(r)),
            _ => {
                let p = BigInt::from(self.characteristic());
                let den = r.denom().mod_floor(&p);
                if den.is_zero() {
                    return Err(Error::CoefficientNotInField(format!(
                        "denominator of {r} vanishes mod {}",
                        self.characteristic()
                    )));
                }
                let num = r.numer().mod_floor(&p);
                let num = u64::try_from(&num.to_biguint().unwrap()).unwrap();
                let den = u64::try_from(&den.to_biguint().unwrap()).unwrap();
                let p = self.characteristic();
                Ok(self.from_u64(mulmod(num, invmod(den, p), p)))
            }
        }
    }

    /// The generator of an extension field (the class of t); for F_p this is
    /// absent.
    pub fn generator(&self) -> Option<FieldElement> {
        match self {
            FieldSpec::Ext { k, .. } => {
                let mut v = vec![0; *k as usize];
                v[1] = 1;
                Some(FieldElement::Ext(v))
            }
            _ => None,
        }
    }

    pub fn is_zero(&self, a: &FieldElement) -> bool {
        match a {
            FieldElement::Rat(r) => r.is_zero(),
            FieldElement::Fp(x) => *x == 0,
            FieldElement::Ext(v) => v.iter().all(|&c| c == 0),
        }
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        match (self, a, b) {
            (FieldSpec::Rationals, FieldElement::Rat(x), FieldElement::Rat(y)) => {
                FieldElement::Rat(x + y)
            }
            (FieldSpec::Prime { p }, FieldElement::Fp(x), FieldElement::Fp(y)) => {
                FieldElement::Fp(addmod(*x, *y, *p))
            }
            (FieldSpec::Ext { p, .. }, FieldElement::Ext(x), FieldElement::Ext(y)) => {
                FieldElement::Ext(
                    x.iter()
                        .zip(y.iter())
                        .map(|(&u, &v)| addmod(u, v, *p))
                        .collect(),
                )
            }
            _ => panic!("field/element mismatch in add"),
        }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        match (self, a) {
            (FieldSpec::Rationals, FieldElement::Rat(x)) => FieldElement::Rat(-x),
            (FieldSpec::Prime { p }, FieldElement::Fp(x)) => {
                FieldElement::Fp(if *x == 0 { 0 } else { p - x })
            }
            (FieldSpec::Ext { p, .. }, FieldElement::Ext(v)) => FieldElement::Ext(
                v.iter()
                    .map(|&c| if c == 0 { 0 } else { p - c })
                    .collect(),
            ),
            _ => panic!("field/element mismatch in neg"),
        }
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        match (self, a, b) {
            (FieldSpec::Rationals, FieldElement::Rat(x), FieldElement::Rat(y)) => {
                FieldElement::Rat(x * y)
            }
            (FieldSpec::Prime { p }, FieldElement::Fp(x), FieldElement::Fp(y)) => {
                FieldElement::Fp(mulmod(*x, *y, *p))
            }
            (FieldSpec::Ext { p, k, modulus }, FieldElement::Ext(x), FieldElement::Ext(y)) => {
                let prod = fppoly::mul(x, y, *p);
                let mut red = fppoly::rem(prod, modulus, *p);
                red.resize(*k as usize, 0);
                FieldElement::Ext(red)
            }
            _ => panic!("field/element mismatch in mul"),
        }
    }

    /// Multiplicative inverse; None for zero.
    pub fn inv(&self, a: &FieldElement) -> Option<FieldElement> {
        if self.is_zero(a) {
            return None;
        }
        Some(match (self, a) {
            (FieldSpec::Rationals, FieldElement::Rat(x)) => FieldElement::Rat(x.recip()),
            (FieldSpec::Prime { p }, FieldElement::Fp(x)) => FieldElement::Fp(invmod(*x, *p)),
            (FieldSpec::Ext { p, k, modulus }, FieldElement::Ext(v)) => {
                let mut inv = fppoly::invert(v, modulus, *p)
                    .expect("modulus is irreducible, nonzero elements invert");
                inv.resize(*k as usize, 0);
                FieldElement::Ext(inv)
            }
            _ => panic!("field/element mismatch in inv"),
        })
    }

    /// Division; panics on a zero divisor (use `inv` to probe).
    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let binv = self.inv(b).expect("division by zero");
        self.mul(a, &binv)
    }

    pub fn pow(&self, a: &FieldElement, e: u64) -> FieldElement {
        let mut acc = self.one();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Power with a big exponent (field orders overflow u64 quickly).
    pub fn pow_big(&self, a: &FieldElement, e: &BigUint) -> FieldElement {
        let mut acc = self.one();
        let mut base = a.clone();
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                acc = self.mul(&acc, &base);
            }
            if i + 1 < bits {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Total ordering on canonical representations: rationals numerically,
    /// finite-field elements as the integer Σ c_i p^i. Used wherever a
    /// canonical choice among field elements is needed.
    pub fn cmp_elems(&self, a: &FieldElement, b: &FieldElement) -> Ordering {
        match (a, b) {
            (FieldElement::Rat(x), FieldElement::Rat(y)) => x.cmp(y),
            (FieldElement::Fp(x), FieldElement::Fp(y)) => x.cmp(y),
            (FieldElement::Ext(x), FieldElement::Ext(y)) => {
                x.iter().rev().cmp(y.iter().rev())
            }
            _ => panic!("field/element mismatch in cmp_elems"),
        }
    }

    /// Euler's criterion over finite fields; over Q, exact square testing on
    /// reduced fractions. Zero counts as a square everywhere.
    pub fn is_square(&self, a: &FieldElement) -> bool {
        if self.is_zero(a) {
            return true;
        }
        match self {
            FieldSpec::Rationals => {
                let FieldElement::Rat(r) = a else { unreachable!() };
                if r.is_negative() {
                    return false;
                }
                let num = r.numer().to_biguint().unwrap();
                let den = r.denom().to_biguint().unwrap();
                is_perfect_square(&num) && is_perfect_square(&den)
            }
            _ => {
                if self.characteristic() == 2 {
                    return true;
                }
                let q = self.order().unwrap();
                let e = (&q - 1u32) >> 1;
                self.pow_big(a, &e) == self.one()
            }
        }
    }

    /// Square root with the canonically smaller of the two roots; None when
    /// the element is not a square.
    pub fn sqrt(&self, a: &FieldElement) -> Option<FieldElement> {
        if self.is_zero(a) {
            return Some(self.zero());
        }
        match self {
            FieldSpec::Rationals => {
                let FieldElement::Rat(r) = a else { unreachable!() };
                if r.is_negative() {
                    return None;
                }
                let num = r.numer().to_biguint().unwrap();
                let den = r.denom().to_biguint().unwrap();
                let ns = exact_sqrt(&num)?;
                let ds = exact_sqrt(&den)?;
                Some(FieldElement::Rat(BigRational::new(
                    BigInt::from(ns),
                    BigInt::from(ds),
                )))
            }
            _ => {
                let p = self.characteristic();
                if p == 2 {
                    // Frobenius is bijective: sqrt(a) = a^(q/2).
                    let q = self.order().unwrap();
                    return Some(self.pow_big(a, &(&q >> 1)));
                }
                if !self.is_square(a) {
                    return None;
                }
                let r = if self.order_u64().is_some_and(|q| q < 1000) {
                    self.sqrt_by_exhaustion(a)?
                } else {
                    self.tonelli_shanks(a)?
                };
                let r2 = self.neg(&r);
                Some(if self.cmp_elems(&r, &r2) == Ordering::Greater {
                    r2
                } else {
                    r
                })
            }
        }
    }

    fn sqrt_by_exhaustion(&self, a: &FieldElement) -> Option<FieldElement> {
        self.iter_elements()
            .find(|x| &self.mul(x, x) == a)
    }

    fn tonelli_shanks(&self, a: &FieldElement) -> Option<FieldElement> {
        let q = self.order().unwrap();
        let qm1 = &q - 1u32;
        let e = qm1.trailing_zeros().unwrap();
        let s = &qm1 >> e;
        if e == 1 {
            // q ≡ 3 mod 4: direct formula.
            return Some(self.pow_big(a, &((&q + 1u32) >> 2)));
        }
        // Deterministic nonsquare: first in enumeration order.
        let z = self
            .iter_elements()
            .find(|x| !self.is_zero(x) && !self.is_square(x))?;
        let mut m = e;
        let mut c = self.pow_big(&z, &s);
        let mut t = self.pow_big(a, &s);
        let mut r = self.pow_big(a, &((&s + 1u32) >> 1));
        let one = self.one();
        while t != one {
            let mut i = 0u64;
            let mut t2 = t.clone();
            while t2 != one {
                t2 = self.mul(&t2, &t2);
                i += 1;
                if i >= m {
                    return None;
                }
            }
            let mut b = c.clone();
            for _ in 0..(m - i - 1) {
                b = self.mul(&b, &b);
            }
            m = i;
            c = self.mul(&b, &b);
            t = self.mul(&t, &c);
            r = self.mul(&r, &b);
        }
        Some(r)
    }

    /// All field elements in canonical order (finite fields only).
    pub fn iter_elements(&self) -> Box<dyn Iterator<Item = FieldElement> + '_> {
        match self {
            FieldSpec::Rationals => panic!("cannot enumerate Q"),
            FieldSpec::Prime { p } => Box::new((0..*p).map(FieldElement::Fp)),
            FieldSpec::Ext { p, k, .. } => {
                let p = *p;
                let k = *k as usize;
                let mut v = vec![0u64; k];
                let mut done = false;
                Box::new(std::iter::from_fn(move || {
                    if done {
                        return None;
                    }
                    let out = FieldElement::Ext(v.clone());
                    // Odometer increment, most significant digit last so the
                    // order matches cmp_elems.
                    let mut i = 0;
                    loop {
                        if i == k {
                            done = true;
                            break;
                        }
                        v[i] += 1;
                        if v[i] < p {
                            break;
                        }
                        v[i] = 0;
                        i += 1;
                    }
                    Some(out)
                }))
            }
        }
    }

    /// A uniformly random element (finite fields only).
    pub fn rand_elem<R: Rng>(&self, rng: &mut R) -> FieldElement {
        match self {
            FieldSpec::Rationals => panic!("cannot sample Q uniformly"),
            FieldSpec::Prime { p } => FieldElement::Fp(rng.random_range(0..*p)),
            FieldSpec::Ext { p, k, .. } => {
                FieldElement::Ext((0..*k).map(|_| rng.random_range(0..*p)).collect())
            }
        }
    }

    /// Raw coefficient vector over F_p (length k; length 1 for F_p itself).
    pub fn to_prime_vec(&self, a: &FieldElement) -> Vec<u64> {
        match a {
            FieldElement::Fp(x) => vec![*x],
            FieldElement::Ext(v) => v.clone(),
            FieldElement::Rat(_) => panic!("to_prime_vec over Q"),
        }
    }

    pub fn from_prime_vec(&self, v: &[u64]) -> FieldElement {
        match self {
            FieldSpec::Prime { p } => FieldElement::Fp(v.first().copied().unwrap_or(0) % p),
            FieldSpec::Ext { p, k, .. } => {
                let mut w = vec![0u64; *k as usize];
                for (i, &c) in v.iter().enumerate() {
                    w[i] = c % p;
                }
                FieldElement::Ext(w)
            }
            FieldSpec::Rationals => panic!("from_prime_vec over Q"),
        }
    }

    /// Canonical text for an element: decimal residue, reduced fraction, or a
    /// polynomial in the generator t.
    pub fn render(&self, a: &FieldElement) -> String {
        match a {
            FieldElement::Rat(r) => r.to_string(),
            FieldElement::Fp(x) => x.to_string(),
            FieldElement::Ext(v) => {
                let mut parts: Vec<String> = Vec::new();
                for (i, &c) in v.iter().enumerate().rev() {
                    if c == 0 {
                        continue;
                    }
                    let part = match (i, c) {
                        (0, c) => c.to_string(),
                        (1, 1) => "t".to_string(),
                        (1, c) => format!("{c}*t"),
                        (i, 1) => format!("t^{i}"),
                        (i, c) => format!("{c}*t^{i}"),
                    };
                    parts.push(part);
                }
                if parts.is_empty() {
                    "0".to_string()
                } else {
                    parts.join(" + ")
                }
            }
        }
    }

    /// Canonical text for the field itself, e.g. "Q", "F13", "F13^2".
    pub fn render_spec(&self) -> String {
        match self {
            FieldSpec::Rationals => "Q".to_string(),
            FieldSpec::Prime { p } => format!("F{p}"),
            FieldSpec::Ext { p, k, .. } => format!("F{p}^{k}"),
        }
    }

    /// The modulus as canonical text (extensions only).
    pub fn render_modulus(&self) -> Option<String> {
        match self {
            FieldSpec::Ext { k, modulus, .. } => {
                let mut parts: Vec<String> = Vec::new();
                for i in (0..=*k as usize).rev() {
                    let c = modulus[i];
                    if c == 0 {
                        continue;
                    }
                    let part = match (i, c) {
                        (0, c) => c.to_string(),
                        (1, 1) => "t".to_string(),
                        (1, c) => format!("{c}*t"),
                        (i, 1) => format!("t^{i}"),
                        (i, c) => format!("{c}*t^{i}"),
                    };
                    parts.push(part);
                }
                Some(parts.join(" + "))
            }
            _ => None,
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render_spec())
    }
}

fn exact_sqrt(n: &BigUint) -> Option<BigUint> {
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

fn is_perfect_square(n: &BigUint) -> bool {
    exact_sqrt(n).is_some()
}
