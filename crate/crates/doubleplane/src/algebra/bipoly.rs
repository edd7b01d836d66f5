use super::field::{FieldElement, FieldSpec};
use super::unipoly::UniPoly;
use crate::error::Error;
use crate::Result;

/// Bivariate polynomial as a dense vector over the outer variable: coeffs[i]
/// is the k[x] coefficient of outer^i. Trailing zeros are trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiPoly {
    pub field: FieldSpec,
    coeffs: Vec<UniPoly>,
}

impl BiPoly {
    pub fn new(field: FieldSpec, mut coeffs: Vec<UniPoly>) -> Self {
        for c in &coeffs {
            assert!(c.field == field);
        }
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        BiPoly { field, coeffs }
    }

    pub fn zero(field: FieldSpec) -> Self {
        BiPoly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn from_inner(u: UniPoly) -> Self {
        BiPoly::new(u.field.clone(), vec![u])
    }

    pub fn outer_monomial(field: FieldSpec, c: UniPoly, k: usize) -> Self {
        let mut coeffs = vec![UniPoly::zero(field.clone()); k];
        coeffs.push(c);
        BiPoly::new(field, coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree_outer(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn deg_outer(&self) -> usize {
        self.degree_outer().expect("degree of zero polynomial")
    }

    pub fn deg_inner(&self) -> usize {
        self.coeffs
            .iter()
            .filter_map(|c| c.degree())
            .max()
            .unwrap_or(0)
    }

    pub fn coeff_outer(&self, i: usize) -> UniPoly {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| UniPoly::zero(self.field.clone()))
    }

    pub fn coeffs_outer(&self) -> &[UniPoly] {
        &self.coeffs
    }

    pub fn lc_outer(&self) -> UniPoly {
        self.coeffs.last().expect("lc of zero polynomial").clone()
    }

    pub fn add(&self, other: &BiPoly) -> BiPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff_outer(i).add(&other.coeff_outer(i)));
        }
        BiPoly::new(self.field.clone(), out)
    }

    pub fn neg(&self) -> BiPoly {
        BiPoly::new(
            self.field.clone(),
            self.coeffs.iter().map(|c| c.neg()).collect(),
        )
    }

    pub fn sub(&self, other: &BiPoly) -> BiPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &BiPoly) -> BiPoly {
        if self.is_zero() || other.is_zero() {
            return BiPoly::zero(self.field.clone());
        }
        let mut out =
            vec![UniPoly::zero(self.field.clone()); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        BiPoly::new(self.field.clone(), out)
    }

    pub fn mul_inner(&self, u: &UniPoly) -> BiPoly {
        BiPoly::new(
            self.field.clone(),
            self.coeffs.iter().map(|c| c.mul(u)).collect(),
        )
    }

    pub fn mul_elem(&self, e: &FieldElement) -> BiPoly {
        BiPoly::new(
            self.field.clone(),
            self.coeffs.iter().map(|c| c.scale(e)).collect(),
        )
    }

    pub fn mul_outer_pow(&self, k: usize) -> BiPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![UniPoly::zero(self.field.clone()); k];
        coeffs.extend(self.coeffs.iter().cloned());
        BiPoly::new(self.field.clone(), coeffs)
    }

    /// Coefficient-wise exact division by a nonzero k[x] polynomial.
    pub fn div_exact_inner(&self, u: &UniPoly) -> BiPoly {
        BiPoly::new(
            self.field.clone(),
            self.coeffs.iter().map(|c| c.div_exact(u)).collect(),
        )
    }

    /// The restriction outer = 0.
    pub fn restrict_outer_zero(&self) -> UniPoly {
        self.coeff_outer(0)
    }

    /// Exact division by the outer variable; the constant coefficient must
    /// vanish.
    pub fn div_outer_once(&self) -> BiPoly {
        assert!(self.coeff_outer(0).is_zero());
        if self.is_zero() {
            return self.clone();
        }
        BiPoly::new(self.field.clone(), self.coeffs[1..].to_vec())
    }

    /// Substitute a field value for the outer variable.
    pub fn eval_outer(&self, b: &FieldElement) -> UniPoly {
        let mut acc = UniPoly::zero(self.field.clone());
        for c in self.coeffs.iter().rev() {
            acc = acc.scale(b).add(c);
        }
        acc
    }

    /// Substitute a field value for the inner variable; the result is a
    /// univariate polynomial in the outer variable.
    pub fn eval_inner(&self, a: &FieldElement) -> UniPoly {
        UniPoly::new(
            self.field.clone(),
            self.coeffs.iter().map(|c| c.eval(a)).collect(),
        )
    }

    pub fn eval_point(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.eval_inner(a).eval(b)
    }

    /// F(x + a, outer + b).
    pub fn translate(&self, a: &FieldElement, b: &FieldElement) -> BiPoly {
        let shifted: Vec<UniPoly> = self.coeffs.iter().map(|c| c.shift(a)).collect();
        let n = shifted.len();
        // Binomial coefficients built additively in the field itself, so
        // they stay exact at any degree and any characteristic.
        let mut pascal: Vec<Vec<FieldElement>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = vec![self.field.one(); i + 1];
            for j in 1..i {
                row[j] = self.field.add(&pascal[i - 1][j - 1], &pascal[i - 1][j]);
            }
            pascal.push(row);
        }
        let mut out = vec![UniPoly::zero(self.field.clone()); n];
        for (j, slot) in out.iter_mut().enumerate() {
            let mut acc = UniPoly::zero(self.field.clone());
            let mut bpow = self.field.one();
            for i in j..n {
                if i > j {
                    bpow = self.field.mul(&bpow, b);
                }
                let coef = self.field.mul(&pascal[i][j], &bpow);
                acc = acc.add(&shifted[i].scale(&coef));
            }
            *slot = acc;
        }
        BiPoly::new(self.field.clone(), out)
    }

    pub fn map_coeffs<F>(&self, target: &FieldSpec, f: F) -> BiPoly
    where
        F: Fn(&FieldElement) -> FieldElement,
    {
        BiPoly::new(
            target.clone(),
            self.coeffs
                .iter()
                .map(|c| c.map_coeffs(target, &f))
                .collect(),
        )
    }

    pub fn derivative_outer(&self) -> BiPoly {
        if self.coeffs.len() <= 1 {
            return BiPoly::zero(self.field.clone());
        }
        let out: Vec<UniPoly> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(&self.field.from_u64(i as u64)))
            .collect();
        BiPoly::new(self.field.clone(), out)
    }

    pub fn derivative_inner(&self) -> BiPoly {
        BiPoly::new(
            self.field.clone(),
            self.coeffs.iter().map(|c| c.derivative()).collect(),
        )
    }

    /// Exact division: self = q * d with no remainder; panics otherwise.
    pub fn div_exact(&self, d: &BiPoly) -> BiPoly {
        assert!(!d.is_zero());
        if self.is_zero() {
            return self.clone();
        }
        if d.deg_outer() == 0 {
            return self.div_exact_inner(&d.coeff_outer(0));
        }
        let mut r = self.clone();
        let mut q = vec![
            UniPoly::zero(self.field.clone());
            self.deg_outer() - d.deg_outer() + 1
        ];
        let dlc = d.lc_outer();
        while !r.is_zero() && r.deg_outer() >= d.deg_outer() {
            let shift = r.deg_outer() - d.deg_outer();
            let c = r.lc_outer().div_exact(&dlc);
            q[shift] = c.clone();
            r = r.sub(&d.mul_inner(&c).mul_outer_pow(shift));
        }
        assert!(r.is_zero(), "division is not exact");
        BiPoly::new(self.field.clone(), q)
    }

    /// Content: the monic gcd of the inner coefficients.
    pub fn content(&self) -> UniPoly {
        let mut g = UniPoly::zero(self.field.clone());
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        g
    }

    pub fn primitive_part(&self) -> BiPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.div_exact_inner(&self.content())
    }

    pub fn render(&self, inner: &str, outer: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = c.render(inner);
            let p = match i {
                0 => cs,
                _ => {
                    let ov = if i == 1 {
                        outer.to_string()
                    } else {
                        format!("{outer}^{i}")
                    };
                    if cs == "1" {
                        ov
                    } else {
                        format!("({cs})*{ov}")
                    }
                }
            };
            parts.push(p);
        }
        parts.join(" + ")
    }
}

/// Pseudo-division in the outer variable: lc(b)^(da-db+1) a = q b + r with
/// deg_outer r < deg_outer b. Requires deg_outer a >= deg_outer b >= 0 and b
/// nonzero.
pub fn pseudo_divrem(a: &BiPoly, b: &BiPoly) -> (BiPoly, BiPoly) {
    assert!(!b.is_zero());
    let da = a.deg_outer();
    let db = b.deg_outer();
    assert!(da >= db);
    let d = b.lc_outer();
    let mut r = a.clone();
    let mut q = BiPoly::zero(a.field.clone());
    let mut e = (da - db + 1) as i64;
    while !r.is_zero() && r.deg_outer() >= db {
        let s = r.lc_outer();
        let shift = r.deg_outer() - db;
        q = q
            .mul_inner(&d)
            .add(&BiPoly::outer_monomial(a.field.clone(), s.clone(), shift));
        r = r.mul_inner(&d).sub(&b.mul_inner(&s).mul_outer_pow(shift));
        e -= 1;
    }
    let adj = d.pow(e as usize);
    (q.mul_inner(&adj), r.mul_inner(&adj))
}

/// Resultant with respect to the outer variable, by the subresultant
/// polynomial remainder sequence. Exact over any field of coefficients,
/// with all interior divisions exact.
pub fn res_outer(fa: &BiPoly, fb: &BiPoly) -> Result<UniPoly> {
    let field = fa.field.clone();
    if fa.is_zero() || fb.is_zero() {
        return Ok(UniPoly::zero(field));
    }
    let da = fa.deg_outer();
    let db = fb.deg_outer();
    if da == 0 && db == 0 {
        return Err(Error::BothConstantInVariable);
    }
    if da == 0 {
        return Ok(fa.coeff_outer(0).pow(db));
    }
    if db == 0 {
        return Ok(fb.coeff_outer(0).pow(da));
    }
    let (mut a, mut b, mut negative) = if da < db {
        (fb.clone(), fa.clone(), (da * db) % 2 == 1)
    } else {
        (fa.clone(), fb.clone(), false)
    };
    let ca = a.content();
    let cb = b.content();
    a = a.div_exact_inner(&ca);
    b = b.div_exact_inner(&cb);
    let mut t = ca.pow(b.deg_outer()).mul(&cb.pow(a.deg_outer()));
    let mut g = UniPoly::one(field.clone());
    let mut h = UniPoly::one(field.clone());
    loop {
        let delta = a.deg_outer() - b.deg_outer();
        if a.deg_outer() % 2 == 1 && b.deg_outer() % 2 == 1 {
            negative = !negative;
        }
        let (_, r) = pseudo_divrem(&a, &b);
        a = b;
        let divisor = g.mul(&h.pow(delta));
        b = if r.is_zero() {
            BiPoly::zero(field.clone())
        } else {
            r.div_exact_inner(&divisor)
        };
        g = a.lc_outer();
        h = if delta == 0 {
            h
        } else {
            g.pow(delta).div_exact(&h.pow(delta - 1))
        };
        if b.is_zero() {
            return Ok(UniPoly::zero(field));
        }
        if b.deg_outer() == 0 {
            break;
        }
    }
    let da = a.deg_outer();
    let lcb = b.coeff_outer(0);
    let hh = if da == 0 {
        h
    } else {
        lcb.pow(da).div_exact(&h.pow(da - 1))
    };
    let res = t.mul(&hh);
    if negative {
        t = res.neg();
    } else {
        t = res;
    }
    Ok(t)
}

/// Full bivariate gcd: the content gcd times the primitive-part gcd from the
/// primitive remainder sequence in the outer variable, scaled so the leading
/// coefficient of the outer-leading coefficient is 1.
pub fn gcd_outer(fa: &BiPoly, fb: &BiPoly) -> BiPoly {
    if fa.is_zero() {
        return normalize_gcd(fb.clone());
    }
    if fb.is_zero() {
        return normalize_gcd(fa.clone());
    }
    let cont = fa.content().gcd(&fb.content());
    let (mut a, mut b) = (fa.primitive_part(), fb.primitive_part());
    if a.deg_outer() < b.deg_outer() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_zero() {
        if b.deg_outer() == 0 {
            // A primitive constant-in-outer remainder means the primitive
            // parts are coprime in the outer variable.
            return normalize_gcd(BiPoly::from_inner(cont));
        }
        let (_, r) = pseudo_divrem(&a, &b);
        a = b;
        b = r.primitive_part();
    }
    normalize_gcd(a.mul_inner(&cont))
}

fn normalize_gcd(g: BiPoly) -> BiPoly {
    if g.is_zero() {
        return g;
    }
    let lc = g.lc_outer().lc();
    let inv = g.field.inv(&lc).expect("leading coefficient is nonzero");
    g.mul_elem(&inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn fp(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    fn upoly(f: &FieldSpec, c: &[i64]) -> UniPoly {
        UniPoly::from_i64_coeffs(f, c)
    }

    // z - x and z + x as outer-z bivariates.
    fn z_minus_x(f: &FieldSpec) -> BiPoly {
        BiPoly::new(f.clone(), vec![upoly(f, &[0, -1]), upoly(f, &[1])])
    }

    fn z_plus_x(f: &FieldSpec) -> BiPoly {
        BiPoly::new(f.clone(), vec![upoly(f, &[0, 1]), upoly(f, &[1])])
    }

    #[test]
    fn resultant_frozen_values() {
        for f in [fp(13), FieldSpec::Rationals] {
            // Res_z(z - x, z + x) = 2x
            let r = res_outer(&z_minus_x(&f), &z_plus_x(&f)).unwrap();
            assert_eq!(r, upoly(&f, &[0, 2]));
            // Res_z(z^2 + 1, z - x) = x^2 + 1
            let a = BiPoly::new(
                f.clone(),
                vec![upoly(&f, &[1]), upoly(&f, &[]), upoly(&f, &[1])],
            );
            let r = res_outer(&a, &z_minus_x(&f)).unwrap();
            assert_eq!(r, upoly(&f, &[1, 0, 1]));
            // Res_z(z, z) = 0
            let z = BiPoly::new(f.clone(), vec![upoly(&f, &[]), upoly(&f, &[1])]);
            assert!(res_outer(&z, &z).unwrap().is_zero());
            // Both constant in z: rejected.
            let c = BiPoly::from_inner(upoly(&f, &[1, 1]));
            assert!(matches!(
                res_outer(&c, &c),
                Err(Error::BothConstantInVariable)
            ));
        }
    }

    #[test]
    fn resultant_swap_sign() {
        let f = fp(13);
        let a = z_minus_x(&f);
        // Res(A, B) = (-1)^(deg A * deg B) Res(B, A).
        // Degrees 1 and 2: no sign change.
        let b = BiPoly::new(
            f.clone(),
            vec![upoly(&f, &[0, 0, 1]), upoly(&f, &[3, 1]), upoly(&f, &[2])],
        );
        let r1 = res_outer(&a, &b).unwrap();
        let r2 = res_outer(&b, &a).unwrap();
        assert_eq!(r1, r2);
        // Degrees 1 and 1: the sign flips.
        let c = BiPoly::new(f.clone(), vec![upoly(&f, &[0, 0, 1]), upoly(&f, &[3, 1])]);
        let r3 = res_outer(&a, &c).unwrap();
        let r4 = res_outer(&c, &a).unwrap();
        assert_eq!(r3, r4.neg());
    }

    // Classical scalar resultant over a field, by the Euclidean remainder
    // chain with leading-coefficient bookkeeping. Independent of the
    // subresultant code path.
    fn scalar_resultant(f: &UniPoly, g: &UniPoly) -> FieldElement {
        let field = f.field.clone();
        if f.is_zero() || g.is_zero() {
            return field.zero();
        }
        let mut a = f.clone();
        let mut b = g.clone();
        let mut res = field.one();
        let mut neg = false;
        if a.deg() < b.deg() {
            if a.deg() * b.deg() % 2 == 1 {
                neg = !neg;
            }
            std::mem::swap(&mut a, &mut b);
        }
        loop {
            if b.deg() == 0 {
                res = field.mul(&res, &field.pow(&b.coeff(0), a.deg() as u64));
                break;
            }
            let r = a.rem(&b);
            if r.is_zero() {
                return field.zero();
            }
            if a.deg() * b.deg() % 2 == 1 {
                neg = !neg;
            }
            res = field.mul(
                &res,
                &field.pow(&b.lc(), (a.deg() - r.deg()) as u64),
            );
            a = b;
            b = r;
        }
        if neg {
            field.neg(&res)
        } else {
            res
        }
    }

    fn interpolate(field: &FieldSpec, pts: &[(FieldElement, FieldElement)]) -> UniPoly {
        // Newton divided differences.
        let n = pts.len();
        let mut coef: Vec<FieldElement> = pts.iter().map(|(_, y)| y.clone()).collect();
        for j in 1..n {
            for i in (j..n).rev() {
                let num = field.sub(&coef[i], &coef[i - 1]);
                let den = field.sub(&pts[i].0, &pts[i - j].0);
                coef[i] = field.div(&num, &den);
            }
        }
        let mut poly = UniPoly::zero(field.clone());
        for i in (0..n).rev() {
            let lin = UniPoly::new(
                field.clone(),
                vec![field.neg(&pts[i].0), field.one()],
            );
            poly = poly.mul(&lin).add(&UniPoly::constant(field.clone(), coef[i].clone()));
        }
        poly
    }

    // Independent oracle: evaluate at many inner points where both outer
    // leading coefficients survive, take scalar resultants, interpolate.
    fn res_by_evaluation(a: &BiPoly, b: &BiPoly) -> UniPoly {
        let field = a.field.clone();
        let bound = b.deg_outer() * a.deg_inner() + a.deg_outer() * b.deg_inner() + 1;
        let lca = a.lc_outer();
        let lcb = b.lc_outer();
        let mut pts = Vec::new();
        let mut x = 0u64;
        while pts.len() < bound {
            let v = field.from_u64(x);
            x += 1;
            if field.is_zero(&lca.eval(&v)) || field.is_zero(&lcb.eval(&v)) {
                continue;
            }
            let fa = a.eval_inner(&v);
            let fb = b.eval_inner(&v);
            pts.push((v, scalar_resultant(&fa, &fb)));
        }
        interpolate(&field, &pts)
    }

    #[test]
    fn resultant_matches_evaluation_oracle() {
        let f = fp(10007);
        let mut rng = ChaCha12Rng::seed_from_u64(424242);
        for _ in 0..25 {
            let mk = |rng: &mut ChaCha12Rng, dz: usize, dx: usize| {
                let coeffs: Vec<UniPoly> =
                    (0..=dz).map(|_| UniPoly::rand(&f, dx, rng)).collect();
                BiPoly::new(f.clone(), coeffs)
            };
            let a = mk(&mut rng, 3, 2);
            let b = mk(&mut rng, 2, 3);
            let direct = res_outer(&a, &b).unwrap();
            let sampled = res_by_evaluation(&a, &b);
            assert_eq!(direct, sampled);
        }
    }

    #[test]
    fn resultant_is_multiplicative() {
        let f = fp(10007);
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..10 {
            let mk = |rng: &mut ChaCha12Rng, dz: usize| {
                let coeffs: Vec<UniPoly> =
                    (0..=dz).map(|_| UniPoly::rand(&f, 2, rng)).collect();
                BiPoly::new(f.clone(), coeffs)
            };
            let a = mk(&mut rng, 2);
            let c = mk(&mut rng, 1);
            let b = mk(&mut rng, 2);
            let lhs = res_outer(&a.mul(&c), &b).unwrap();
            let rhs = res_outer(&a, &b).unwrap().mul(&res_outer(&c, &b).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn resultant_vanishes_iff_common_factor() {
        let f = fp(13);
        let a = z_minus_x(&f);
        let b = z_plus_x(&f);
        let prod = a.mul(&b);
        assert!(res_outer(&prod, &a).unwrap().is_zero());
        let r = res_outer(&prod, &z_minus_x(&fp(13)).translate(&f.from_u64(0), &f.from_u64(1)))
            .unwrap();
        assert!(!r.is_zero());
    }

    #[test]
    fn pseudo_division_identity() {
        let f = fp(13);
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for _ in 0..20 {
            let mk = |rng: &mut ChaCha12Rng, dz: usize, dx: usize| {
                let coeffs: Vec<UniPoly> =
                    (0..=dz).map(|_| UniPoly::rand(&f, dx, rng)).collect();
                BiPoly::new(f.clone(), coeffs)
            };
            let a = mk(&mut rng, 4, 2);
            let b = mk(&mut rng, 2, 2);
            let (q, r) = pseudo_divrem(&a, &b);
            let e = a.deg_outer() - b.deg_outer() + 1;
            let lhs = a.mul_inner(&b.lc_outer().pow(e));
            assert_eq!(lhs, q.mul(&b).add(&r));
            assert!(r.is_zero() || r.deg_outer() < b.deg_outer());
        }
    }

    #[test]
    fn bivariate_gcd_extracts_common_factor() {
        let f = fp(13);
        let common = z_minus_x(&f);
        let a = common.mul(&BiPoly::new(
            f.clone(),
            vec![upoly(&f, &[1, 0, 1]), upoly(&f, &[1])],
        ));
        let b = common.mul(&BiPoly::new(
            f.clone(),
            vec![upoly(&f, &[-5]), upoly(&f, &[1])],
        ));
        let g = gcd_outer(&a, &b);
        assert_eq!(g, common);
        // Coprime pair: gcd is a constant.
        let g = gcd_outer(&z_minus_x(&f), &z_plus_x(&f));
        assert_eq!(g.degree_outer(), Some(0));
        assert_eq!(g.deg_inner(), 0);
    }

    #[test]
    fn translate_matches_pointwise() {
        let f = fp(13);
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let coeffs: Vec<UniPoly> = (0..=3).map(|_| UniPoly::rand(&f, 3, &mut rng)).collect();
        let a = BiPoly::new(f.clone(), coeffs);
        let (da, db) = (f.from_u64(4), f.from_u64(9));
        let t = a.translate(&da, &db);
        for x in 0..13u64 {
            for z in 0..13u64 {
                let (xe, ze) = (f.from_u64(x), f.from_u64(z));
                let lhs = t.eval_point(&xe, &ze);
                let rhs = a.eval_point(&f.add(&xe, &da), &f.add(&ze, &db));
                assert_eq!(lhs, rhs);
            }
        }
    }
}
