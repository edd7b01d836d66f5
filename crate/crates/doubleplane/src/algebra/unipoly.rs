use num_bigint::BigUint;
use rand::Rng;
use std::cmp::Ordering;
use std::fmt;

use super::field::{FieldElement, FieldSpec};
use crate::error::Error;
use crate::Result;

/// Dense univariate polynomial over a `FieldSpec`. Coefficient i belongs to
/// x^i; the highest stored coefficient is nonzero, so the zero polynomial has
/// an empty vector and `degree()` is None rather than a -1 sentinel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    pub field: FieldSpec,
    coeffs: Vec<FieldElement>,
}

impl UniPoly {
    pub fn new(field: FieldSpec, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        UniPoly { field, coeffs }
    }

    pub fn zero(field: FieldSpec) -> Self {
        UniPoly { field, coeffs: vec![] }
    }

    pub fn constant(field: FieldSpec, c: FieldElement) -> Self {
        UniPoly::new(field, vec![c])
    }

    pub fn one(field: FieldSpec) -> Self {
        let c = field.one();
        UniPoly::constant(field, c)
    }

    /// c * x^n
    pub fn monomial(field: FieldSpec, c: FieldElement, n: usize) -> Self {
        let mut coeffs = vec![field.zero(); n + 1];
        coeffs[n] = c;
        UniPoly::new(field, coeffs)
    }

    pub fn from_i64_coeffs(field: &FieldSpec, coeffs: &[i64]) -> Self {
        UniPoly::new(
            field.clone(),
            coeffs.iter().map(|&c| field.from_i64(c)).collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Degree of a nonzero polynomial; panics on zero.
    pub fn deg(&self) -> usize {
        self.degree().expect("degree of the zero polynomial")
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn lc(&self) -> FieldElement {
        self.coeffs.last().cloned().expect("lc of the zero polynomial")
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.field.add(&self.coeff(i), &other.coeff(i)));
        }
        UniPoly::new(self.field.clone(), out)
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| self.field.neg(c)).collect(),
        }
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(self.field.clone());
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if self.field.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let t = self.field.mul(a, b);
                out[i + j] = self.field.add(&out[i + j], &t);
            }
        }
        UniPoly::new(self.field.clone(), out)
    }

    pub fn scale(&self, c: &FieldElement) -> UniPoly {
        UniPoly::new(
            self.field.clone(),
            self.coeffs.iter().map(|a| self.field.mul(a, c)).collect(),
        )
    }

    /// Multiply by x^n.
    pub fn shift_up(&self, n: usize) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); n];
        coeffs.extend(self.coeffs.iter().cloned());
        UniPoly { field: self.field.clone(), coeffs }
    }

    pub fn pow(&self, e: usize) -> UniPoly {
        let mut acc = UniPoly::one(self.field.clone());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Quotient and remainder; the divisor must be nonzero.
    pub fn divrem(&self, b: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!b.is_zero(), "division by the zero polynomial");
        let f = &self.field;
        let db = b.deg();
        if self.degree().map_or(true, |da| da < db) {
            return (UniPoly::zero(f.clone()), self.clone());
        }
        let binv = f.inv(&b.lc()).unwrap();
        let mut r = self.coeffs.clone();
        let mut q = vec![f.zero(); r.len() - db];
        while r.len() > db && !r.is_empty() {
            let lead = f.mul(r.last().unwrap(), &binv);
            if !f.is_zero(&lead) {
                let shift = r.len() - 1 - db;
                q[shift] = lead.clone();
                for i in 0..=db {
                    let t = f.mul(&lead, &b.coeff(i));
                    r[shift + i] = f.sub(&r[shift + i], &t);
                }
            }
            r.pop();
            while r.last().is_some_and(|c| f.is_zero(c)) {
                r.pop();
            }
        }
        (
            UniPoly::new(f.clone(), q),
            UniPoly::new(f.clone(), r),
        )
    }

    pub fn rem(&self, b: &UniPoly) -> UniPoly {
        self.divrem(b).1
    }

    /// Exact division; panics if the remainder is nonzero.
    pub fn div_exact(&self, b: &UniPoly) -> UniPoly {
        let (q, r) = self.divrem(b);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(&self.lc()).unwrap();
        self.scale(&inv)
    }

    /// Monic gcd; gcd(f, 0) = monic(f), gcd(0, 0) = 0.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero(self.field.clone());
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for i in 1..self.coeffs.len() {
            let n = self.field.from_u64(i as u64);
            out.push(self.field.mul(&self.coeffs[i], &n));
        }
        UniPoly::new(self.field.clone(), out)
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = self.field.add(&self.field.mul(&acc, x), c);
        }
        acc
    }

    /// f(x + a) by iterated Horner over the shifted variable.
    pub fn shift(&self, a: &FieldElement) -> UniPoly {
        let f = self.field.clone();
        let x_plus_a = UniPoly::new(f.clone(), vec![a.clone(), f.one()]);
        let mut acc = UniPoly::zero(f.clone());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&x_plus_a).add(&UniPoly::constant(f.clone(), c.clone()));
        }
        acc
    }

    /// Composition f(g(x)).
    pub fn compose(&self, g: &UniPoly) -> UniPoly {
        let f = self.field.clone();
        let mut acc = UniPoly::zero(f.clone());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&UniPoly::constant(f.clone(), c.clone()));
        }
        acc
    }

    /// (self * other) mod m.
    pub fn mul_mod(&self, other: &UniPoly, m: &UniPoly) -> UniPoly {
        self.mul(other).rem(m)
    }

    /// self^e mod m with a big exponent.
    pub fn pow_mod_big(&self, e: &BigUint, m: &UniPoly) -> UniPoly {
        let mut acc = UniPoly::one(self.field.clone()).rem(m);
        let mut base = self.rem(m);
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                acc = acc.mul_mod(&base, m);
            }
            if i + 1 < bits {
                base = base.mul_mod(&base, m);
            }
        }
        acc
    }

    /// Map coefficients into another field.
    pub fn map_coeffs<F>(&self, target: &FieldSpec, f: F) -> UniPoly
    where
        F: Fn(&FieldElement) -> FieldElement,
    {
        UniPoly::new(target.clone(), self.coeffs.iter().map(f).collect())
    }

    pub fn rand<R: Rng>(field: &FieldSpec, deg: usize, rng: &mut R) -> UniPoly {
        let mut coeffs: Vec<FieldElement> =
            (0..=deg).map(|_| field.rand_elem(rng)).collect();
        // Force the exact degree.
        while field.is_zero(&coeffs[deg]) {
            coeffs[deg] = field.rand_elem(rng);
        }
        UniPoly::new(field.clone(), coeffs)
    }

    /// Canonical ordering: by degree, then coefficients from the top down.
    pub fn cmp_canonical(&self, other: &UniPoly) -> Ordering {
        let da = self.coeffs.len();
        let db = other.coeffs.len();
        if da != db {
            return da.cmp(&db);
        }
        for i in (0..da).rev() {
            let c = self.field.cmp_elems(&self.coeffs[i], &other.coeffs[i]);
            if c != Ordering::Equal {
                return c;
            }
        }
        Ordering::Equal
    }

    /// Square-free decomposition: pairwise-coprime monic square-free factors
    /// with exponents, whose weighted product equals self up to the leading
    /// constant. Correct in characteristic zero and p (p-th-power descent).
    pub fn squarefree_decomposition(&self) -> Result<Vec<(UniPoly, u64)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut out = self.sfd_inner(1)?;
        out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp_canonical(&b.0)));
        Ok(out)
    }

    fn sfd_inner(&self, outer: u64) -> Result<Vec<(UniPoly, u64)>> {
        let f = self.monic();
        if f.deg() == 0 {
            return Ok(vec![]);
        }
        let p = self.field.characteristic();
        let deriv = f.derivative();
        let mut out: Vec<(UniPoly, u64)> = Vec::new();
        let mut c;
        if deriv.is_zero() {
            c = f.clone();
        } else {
            c = f.gcd(&deriv);
            let mut w = f.div_exact(&c);
            let mut i = 1u64;
            while w.deg() > 0 {
                let y = w.gcd(&c);
                let z = w.div_exact(&y);
                if z.deg() > 0 {
                    out.push((z, i * outer));
                }
                // y divides c: it is exactly the part of c still shared
                // with the remaining square-free kernel.
                c = c.div_exact(&y);
                w = y;
                i += 1;
            }
        }
        if !c.is_zero() && c.deg() > 0 {
            // c collects the factors whose exponent is divisible by p; take
            // the p-th root (perfect field) and recurse.
            debug_assert!(p > 0);
            let root = c.pth_root();
            out.extend(root.sfd_inner(outer * p)?);
        }
        Ok(out)
    }

    /// p-th root of a polynomial that is a p-th power: keep exponents
    /// divisible by p, map each coefficient a to a^(q/p).
    fn pth_root(&self) -> UniPoly {
        let p = self.field.characteristic();
        assert!(p > 0);
        let q = self.field.order().unwrap();
        let e = &q / p; // q/p = p^(k-1)
        let d = self.deg();
        debug_assert_eq!(d % p as usize, 0);
        let mut out = Vec::with_capacity(d / p as usize + 1);
        for i in (0..=d).step_by(p as usize) {
            out.push(self.field.pow_big(&self.coeff(i), &e));
        }
        UniPoly::new(self.field.clone(), out)
    }

    /// The (exponent, degree) multiset of the square-free strata, sorted.
    pub fn squarefree_strata(&self) -> Result<Vec<(u64, u64)>> {
        let mut strata: Vec<(u64, u64)> = self
            .squarefree_decomposition()?
            .into_iter()
            .map(|(g, e)| (e, g.deg() as u64))
            .collect();
        strata.sort_unstable();
        Ok(strata)
    }

    /// If self = c * h^2 with h monic, return (c, h). Checked by a final
    /// exact multiplication, so the top-down matching can never err silently.
    pub fn poly_sqrt(&self) -> Result<Option<(FieldElement, UniPoly)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let fld = &self.field;
        let d = self.deg();
        if d % 2 != 0 {
            return Ok(None);
        }
        let m = d / 2;
        let c = self.lc();
        let g = self.monic();
        let h = if fld.characteristic() == 2 {
            // In characteristic 2 a square has only even exponents and
            // square coefficients (always extractable: Frobenius is onto).
            let mut coeffs = Vec::with_capacity(m + 1);
            for i in 0..=m {
                coeffs.push(fld.sqrt(&g.coeff(2 * i)).unwrap());
            }
            UniPoly::new(fld.clone(), coeffs)
        } else {
            let two_inv = fld.inv(&fld.from_u64(2)).unwrap();
            let mut coeffs = vec![fld.zero(); m + 1];
            coeffs[m] = fld.one();
            let mut h = UniPoly::new(fld.clone(), coeffs);
            for j in 1..=m {
                let idx = m - j;
                let sq = h.mul(&h);
                let cur = sq.coeff(m + idx);
                let want = g.coeff(m + idx);
                let b = fld.mul(&fld.sub(&want, &cur), &two_inv);
                if !fld.is_zero(&b) {
                    h = h.add(&UniPoly::monomial(fld.clone(), b, idx));
                }
            }
            h
        };
        if h.mul(&h).scale(&c) == *self {
            Ok(Some((c, h)))
        } else {
            Ok(None)
        }
    }

    /// Canonical text with the given variable name.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let f = &self.field;
        let one = f.one();
        let mut parts: Vec<String> = Vec::new();
        for i in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[i];
            if f.is_zero(c) {
                continue;
            }
            let cs = f.render(c);
            let needs_parens = cs.contains('+') || cs.contains('*') || cs.contains('^');
            let cs = if needs_parens { format!("({cs})") } else { cs };
            let part = match i {
                0 => cs,
                1 if *c == one => var.to_string(),
                1 => format!("{cs}*{var}"),
                _ if *c == one => format!("{var}^{i}"),
                _ => format!("{cs}*{var}^{i}"),
            };
            parts.push(part);
        }
        parts.join(" + ")
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("x"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    fn f13() -> FieldSpec {
        FieldSpec::prime(13).unwrap()
    }

    #[test]
    fn divrem_reconstructs() {
        let f = f13();
        let a = UniPoly::from_i64_coeffs(&f, &[1, 0, 3, 5, 2]);
        let b = UniPoly::from_i64_coeffs(&f, &[2, 1, 1]);
        let (q, r) = a.divrem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap_or(0) < b.deg());
    }

    #[test]
    fn gcd_of_products() {
        let f = f13();
        let g = UniPoly::from_i64_coeffs(&f, &[-1, 1]); // x - 1
        let h = UniPoly::from_i64_coeffs(&f, &[-2, 1]); // x - 2
        let k = UniPoly::from_i64_coeffs(&f, &[1, 1]); // x + 1
        let a = g.mul(&h);
        let b = g.mul(&k);
        assert_eq!(a.gcd(&b), g.monic());
        assert_eq!(h.gcd(&k).deg(), 0);
    }

    #[test]
    fn squarefree_decomposition_char0() {
        // (y-1)^2 (y-2) -> [((y-2),1), ((y-1),2)]
        let f = q();
        let y1 = UniPoly::from_i64_coeffs(&f, &[-1, 1]);
        let y2 = UniPoly::from_i64_coeffs(&f, &[-2, 1]);
        let prod = y1.mul(&y1).mul(&y2);
        let dec = prod.squarefree_decomposition().unwrap();
        assert_eq!(dec, vec![(y2.clone(), 1), (y1.clone(), 2)]);
        // y^3 -> [(y, 3)]
        let y = UniPoly::from_i64_coeffs(&f, &[0, 1]);
        let dec = y.pow(3).squarefree_decomposition().unwrap();
        assert_eq!(dec, vec![(y, 3)]);
    }

    #[test]
    fn squarefree_decomposition_char_p_powers() {
        // Over F_5: (x+1)^5 (x+2)^2 exercises the p-th-root branch.
        let f = FieldSpec::prime(5).unwrap();
        let a = UniPoly::from_i64_coeffs(&f, &[1, 1]);
        let b = UniPoly::from_i64_coeffs(&f, &[2, 1]);
        let prod = a.pow(5).mul(&b.pow(2));
        let dec = prod.squarefree_decomposition().unwrap();
        assert_eq!(dec, vec![(b, 2), (a, 5)]);
    }

    #[test]
    fn squarefree_over_f7_irreducible_quadratic() {
        // y^2 + 1 over F_7 has no root (squares mod 7 are {0,1,2,4}), and
        // gcd(f, f') = 1, so the decomposition is a single stratum.
        let f = FieldSpec::prime(7).unwrap();
        let g = UniPoly::from_i64_coeffs(&f, &[1, 0, 1]);
        for x in 0..7 {
            assert!(!f.is_zero(&g.eval(&f.from_u64(x))), "root found at {x}");
        }
        let dec = g.squarefree_decomposition().unwrap();
        assert_eq!(dec, vec![(g, 1)]);
    }

    #[test]
    fn sfd_reconstructs_random_products() {
        use rand::SeedableRng;
        let f = f13();
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(7);
        for _ in 0..30 {
            let n_parts = rng.random_range(1..4usize);
            let mut prod = UniPoly::one(f.clone());
            for _ in 0..n_parts {
                let d = rng.random_range(1..3usize);
                let e = rng.random_range(1..4usize);
                prod = prod.mul(&UniPoly::rand(&f, d, &mut rng).pow(e));
            }
            let dec = prod.squarefree_decomposition().unwrap();
            let mut rebuilt = UniPoly::one(f.clone());
            for (g, e) in &dec {
                rebuilt = rebuilt.mul(&g.pow(*e as usize));
                assert_eq!(*g, g.monic());
                assert!(g.gcd(&g.derivative()).deg() == 0 || g.derivative().is_zero());
            }
            assert_eq!(rebuilt.scale(&prod.lc()), prod);
            // Pairwise coprime.
            for i in 0..dec.len() {
                for j in 0..i {
                    assert_eq!(dec[i].0.gcd(&dec[j].0).deg(), 0);
                }
            }
        }
    }

    #[test]
    fn poly_sqrt_examples() {
        let f = q();
        // y^2 + 2y + 1 = (y+1)^2
        let g = UniPoly::from_i64_coeffs(&f, &[1, 2, 1]);
        let (c, h) = g.poly_sqrt().unwrap().unwrap();
        assert_eq!(c, f.one());
        assert_eq!(h, UniPoly::from_i64_coeffs(&f, &[1, 1]));
        // y^2 + 1 is not c*h^2 over Q
        let g = UniPoly::from_i64_coeffs(&f, &[1, 0, 1]);
        assert!(g.poly_sqrt().unwrap().is_none());
        // 4y^4 over F_13 -> (4, y^2)
        let f = f13();
        let g = UniPoly::from_i64_coeffs(&f, &[0, 0, 0, 0, 4]);
        let (c, h) = g.poly_sqrt().unwrap().unwrap();
        assert_eq!(c, f.from_u64(4));
        assert_eq!(h, UniPoly::from_i64_coeffs(&f, &[0, 0, 1]));
    }

    #[test]
    fn shift_and_compose() {
        let f = f13();
        let g = UniPoly::from_i64_coeffs(&f, &[1, 2, 3]);
        let shifted = g.shift(&f.from_u64(5));
        for x in 0..13u64 {
            let lhs = shifted.eval(&f.from_u64(x));
            let rhs = g.eval(&f.from_u64((x + 5) % 13));
            assert_eq!(lhs, rhs);
        }
    }
}
