use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use super::field::{is_prime_u64, FieldElement, FieldSpec};
use super::linalg;
use super::unipoly::UniPoly;
use crate::error::Error;
use crate::Result;

/// Complete factorization over a finite field: monic irreducibles with
/// multiplicities, canonically sorted, times the leading constant of the
/// input. The seed drives the equal-degree splitting; the canonical sort
/// makes the output independent of it.
pub fn uni_factor(f: &UniPoly, seed: u64) -> Result<Vec<(UniPoly, u64)>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.field.is_finite() {
        return Err(Error::FieldNotFinite);
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut out: Vec<(UniPoly, u64)> = Vec::new();
    for (g, e) in f.squarefree_decomposition()? {
        for (h, d) in distinct_degree_split(&g) {
            for irred in equal_degree_split(&h, d, &mut rng) {
                out.push((irred, e));
            }
        }
    }
    out.sort_by(|a, b| {
        a.0.deg()
            .cmp(&b.0.deg())
            .then_with(|| a.0.cmp_canonical(&b.0))
    });
    Ok(out)
}

/// Split a monic square-free polynomial into (product, d) parts where each
/// product collects the irreducible factors of degree exactly d.
fn distinct_degree_split(g: &UniPoly) -> Vec<(UniPoly, usize)> {
    let field = &g.field;
    let q = field.order().unwrap();
    let x = UniPoly::monomial(field.clone(), field.one(), 1);
    let mut g = g.monic();
    let mut h = x.rem(&g);
    let mut out = Vec::new();
    let mut d = 0usize;
    while g.deg() >= 2 * (d + 1) {
        d += 1;
        h = h.pow_mod_big(&q, &g);
        let w = h.sub(&x).gcd(&g);
        if w.deg() > 0 {
            out.push((w.clone(), d));
            g = g.div_exact(&w);
            h = h.rem(&g);
        }
    }
    if g.deg() > 0 {
        out.push((g.clone(), g.deg()));
    }
    out
}

/// Cantor-Zassenhaus equal-degree splitting of a monic square-free product
/// of degree-d irreducibles.
fn equal_degree_split<R: Rng>(h: &UniPoly, d: usize, rng: &mut R) -> Vec<UniPoly> {
    let field = &h.field;
    if h.deg() == d {
        return vec![h.monic()];
    }
    let q = field.order().unwrap();
    let one = UniPoly::one(field.clone());
    loop {
        let deg = rng.random_range(1..h.deg());
        let r = UniPoly::rand(field, deg, rng);
        let g = if field.characteristic() == 2 {
            // Trace map: r + r^2 + r^4 + ... over F_2 splits in char 2.
            let rounds = q.bits() as usize - 1; // k for q = 2^k
            let mut t = r.rem(h);
            let mut acc = t.clone();
            for _ in 0..(rounds * d).max(1) - 1 {
                t = t.mul_mod(&t, h);
                acc = acc.add(&t).rem(h);
            }
            acc.gcd(h)
        } else {
            let e = (q.pow(d as u32) - 1u32) >> 1;
            let s = r.pow_mod_big(&e, h);
            s.sub(&one).gcd(h)
        };
        if g.deg() > 0 && g.deg() < h.deg() {
            let rest = h.div_exact(&g);
            let mut out = equal_degree_split(&g, d, rng);
            out.extend(equal_degree_split(&rest, d, rng));
            return out;
        }
    }
}

/// Irreducibility over a finite field: x^(q^n) = x mod f together with
/// gcd(x^(q^(n/l)) - x, f) = 1 for every prime l dividing n.
pub fn is_irreducible(f: &UniPoly) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.field.is_finite() {
        return Err(Error::FieldNotFinite);
    }
    let n = f.deg();
    if n == 0 {
        return Ok(false);
    }
    if n == 1 {
        return Ok(true);
    }
    let field = &f.field;
    let q = field.order().unwrap();
    let f = f.monic();
    let x = UniPoly::monomial(field.clone(), field.one(), 1);
    // iterates[i] = x^(q^(i+1)) mod f
    let mut iterates = Vec::with_capacity(n);
    let mut h = x.rem(&f);
    for _ in 0..n {
        h = h.pow_mod_big(&q, &f);
        iterates.push(h.clone());
    }
    if iterates[n - 1] != x.rem(&f) {
        return Ok(false);
    }
    for l in prime_divisors(n as u64) {
        let idx = n / l as usize;
        let g = iterates[idx - 1].sub(&x).gcd(&f);
        if g.deg() > 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The canonical modulus for F_{p^n}: x^n + c where the digit string of the
/// smallest counter value m = sum c_i p^i makes the polynomial irreducible.
/// Deterministic, so residue fields are comparable across runs.
pub(crate) fn canonical_modulus(p: u64, n: u32) -> Vec<u64> {
    let fp = FieldSpec::Prime { p };
    let n = n as usize;
    let mut m = 0u128;
    loop {
        let mut coeffs = vec![0u64; n + 1];
        let mut rest = m;
        for c in coeffs.iter_mut().take(n) {
            *c = (rest % p as u128) as u64;
            rest /= p as u128;
        }
        assert!(rest == 0, "no irreducible found within the digit budget");
        coeffs[n] = 1;
        let poly = UniPoly::new(
            fp.clone(),
            coeffs.iter().map(|&c| FieldElement::Fp(c)).collect(),
        );
        if is_irreducible(&poly).unwrap() {
            return coeffs;
        }
        m += 1;
    }
}

/// The canonical extension field F_{p^k}. For k = 1 this is F_p.
pub fn extension_field(p: u64, k: u32) -> Result<FieldSpec> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    if k <= 1 {
        return Ok(FieldSpec::Prime { p });
    }
    Ok(FieldSpec::ext_unchecked(p, canonical_modulus(p, k)))
}

/// Extension of F_p by an explicit monic irreducible modulus.
pub fn extension_with_modulus(p: u64, modulus: &UniPoly) -> Result<FieldSpec> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    if modulus.field != (FieldSpec::Prime { p }) {
        return Err(Error::BadFieldSpec(
            "modulus must live over F_p".to_string(),
        ));
    }
    if modulus.is_zero() || modulus.deg() < 2 || modulus.lc() != modulus.field.one() {
        return Err(Error::NotIrreducible);
    }
    if !is_irreducible(modulus)? {
        return Err(Error::NotIrreducible);
    }
    let coeffs: Vec<u64> = modulus
        .coeffs()
        .iter()
        .map(|c| match c {
            FieldElement::Fp(x) => *x,
            _ => unreachable!(),
        })
        .collect();
    Ok(FieldSpec::ext_unchecked(p, coeffs))
}

/// A field homomorphism from a finite field into an extension, carried by
/// the image of the generator. `lift` is the partial inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub from: FieldSpec,
    pub to: FieldSpec,
    gen_image: Option<FieldElement>,
}

impl Embedding {
    pub fn identity(f: &FieldSpec) -> Self {
        Embedding {
            from: f.clone(),
            to: f.clone(),
            gen_image: None,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.from == self.to
    }

    pub fn apply(&self, a: &FieldElement) -> FieldElement {
        if self.from == self.to {
            return a.clone();
        }
        let coeffs = self.from.to_prime_vec(a);
        match &self.gen_image {
            None => {
                // Prime field into extension: constants map to constants.
                self.to.from_u64(coeffs[0])
            }
            Some(g) => {
                let mut acc = self.to.zero();
                for &c in coeffs.iter().rev() {
                    acc = self.to.mul(&acc, g);
                    acc = self.to.add(&acc, &self.to.from_u64(c));
                }
                acc
            }
        }
    }

    pub fn apply_poly(&self, f: &UniPoly) -> UniPoly {
        f.map_coeffs(&self.to, |c| self.apply(c))
    }

    /// Preimage when `a` lies in the embedded subfield.
    pub fn lift(&self, a: &FieldElement) -> Option<FieldElement> {
        if self.from == self.to {
            return Some(a.clone());
        }
        let k = self.from.extension_degree() as usize;
        let n = self.to.extension_degree() as usize;
        let p = FieldSpec::Prime {
            p: self.from.characteristic(),
        };
        // Columns: images of the from-basis 1, g, ..., g^(k-1) as F_p vectors.
        let mut cols: Vec<Vec<u64>> = Vec::with_capacity(k);
        let mut power = self.to.one();
        let gen_img = match &self.gen_image {
            Some(g) => g.clone(),
            None => self.to.one(),
        };
        for i in 0..k {
            if i > 0 {
                power = self.to.mul(&power, &gen_img);
            }
            let mut v = self.to.to_prime_vec(&power);
            v.resize(n, 0);
            cols.push(v);
        }
        let rows: Vec<Vec<FieldElement>> = (0..n)
            .map(|r| (0..k).map(|c| p.from_u64(cols[c][r])).collect())
            .collect();
        let mut target = self.to.to_prime_vec(a);
        target.resize(n, 0);
        let b: Vec<FieldElement> = target.iter().map(|&x| p.from_u64(x)).collect();
        let x = linalg::solve(&p, &rows, &b)?;
        let vec: Vec<u64> = x
            .iter()
            .map(|e| match e {
                FieldElement::Fp(v) => *v,
                _ => unreachable!(),
            })
            .collect();
        let candidate = self.from.from_prime_vec(&vec);
        // solve() ignores redundant rows only when consistent; verify.
        if self.apply(&candidate) == *a {
            Some(candidate)
        } else {
            None
        }
    }
}

/// All roots of f in its own (finite) field, canonically sorted.
pub fn all_roots(f: &UniPoly) -> Result<Vec<FieldElement>> {
    let factors = uni_factor(f, 0)?;
    let field = &f.field;
    let mut roots: Vec<FieldElement> = factors
        .iter()
        .filter(|(g, _)| g.deg() == 1)
        .map(|(g, _)| field.neg(&g.coeff(0)))
        .collect();
    roots.sort_by(|a, b| field.cmp_elems(a, b));
    Ok(roots)
}

/// Adjoin a root of an irreducible polynomial to a finite field. The result
/// is always flattened: an extension of F_{p^k} by a degree-r modulus comes
/// back as the canonical F_{p^(k r)} together with the embedding of the old
/// field and a designated root (the canonically smallest one).
pub fn adjoin_root(
    field: &FieldSpec,
    m: &UniPoly,
) -> Result<(FieldSpec, Embedding, FieldElement)> {
    if !field.is_finite() {
        return Err(Error::RationalsUnsupported);
    }
    if m.is_zero() || m.degree() == Some(0) {
        return Err(Error::NotIrreducible);
    }
    if m.field != *field {
        return Err(Error::Internal(
            "adjoin_root: modulus lives over a different field".to_string(),
        ));
    }
    let r = m.deg();
    if r == 1 {
        let mm = m.monic();
        let root = field.neg(&mm.coeff(0));
        return Ok((field.clone(), Embedding::identity(field), root));
    }
    if !is_irreducible(m)? {
        return Err(Error::NotIrreducible);
    }
    let p = field.characteristic();
    let k = field.extension_degree();
    let n = k * r as u32;
    let target = extension_field(p, n)?;
    let embedding = embed_into(field, &target)?;
    let m_big = embedding.apply_poly(m);
    let roots = all_roots(&m_big)?;
    let root = roots
        .into_iter()
        .next()
        .ok_or_else(|| Error::Internal("irreducible modulus failed to split in the flattened extension".to_string()))?;
    Ok((target, embedding, root))
}

/// The canonical embedding of one finite field into a larger one (the
/// subfield degree must divide the big degree). The generator maps to the
/// canonically smallest root of its minimal polynomial.
pub fn embed_into(from: &FieldSpec, to: &FieldSpec) -> Result<Embedding> {
    if from == to {
        return Ok(Embedding::identity(from));
    }
    let p = from.characteristic();
    if p != to.characteristic() || p == 0 {
        return Err(Error::Internal(
            "embed_into requires finite fields of equal characteristic".to_string(),
        ));
    }
    let k = from.extension_degree();
    let n = to.extension_degree();
    if k == 0 || n % k != 0 {
        return Err(Error::Internal(format!(
            "no embedding of F_{p}^{k} into F_{p}^{n}"
        )));
    }
    if k == 1 {
        return Ok(Embedding {
            from: from.clone(),
            to: to.clone(),
            gen_image: None,
        });
    }
    let FieldSpec::Ext { modulus, .. } = from else {
        unreachable!()
    };
    let m_in_to = UniPoly::new(
        to.clone(),
        modulus.iter().map(|&c| to.from_u64(c)).collect(),
    );
    let roots = all_roots(&m_in_to)?;
    let g = roots.into_iter().next().ok_or_else(|| {
        Error::Internal("subfield modulus failed to split in the big field".to_string())
    })?;
    Ok(Embedding {
        from: from.clone(),
        to: to.clone(),
        gen_image: Some(g),
    })
}

/// Exact rational roots of a nonzero polynomial over Q, via modular root
/// finding, quadratic Hensel lifting, rational reconstruction, and exact
/// verification. Complete: every rational root reduces to a root mod the
/// chosen prime, and every candidate is checked by evaluation.
pub fn rational_roots(f: &UniPoly) -> Result<Vec<BigRational>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let field = &f.field;
    assert!(*field == FieldSpec::Rationals);
    // Clear denominators and make primitive.
    let mut den_lcm = BigInt::one();
    for c in f.coeffs() {
        let FieldElement::Rat(r) = c else { unreachable!() };
        den_lcm = den_lcm.lcm(r.denom());
    }
    let mut z: Vec<BigInt> = f
        .coeffs()
        .iter()
        .map(|c| {
            let FieldElement::Rat(r) = c else { unreachable!() };
            r.numer() * (&den_lcm / r.denom())
        })
        .collect();
    let content = z
        .iter()
        .fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !content.is_one() && !content.is_zero() {
        for c in z.iter_mut() {
            *c /= &content;
        }
    }
    let mut roots: Vec<BigRational> = Vec::new();
    // Factor out x^v.
    let v = z.iter().position(|c| !c.is_zero()).unwrap();
    if v > 0 {
        roots.push(BigRational::zero());
        z.drain(..v);
    }
    if z.len() <= 1 {
        roots.sort();
        return Ok(roots);
    }
    // Work on the square-free part so roots mod p stay simple.
    let zq = UniPoly::new(
        FieldSpec::Rationals,
        z.iter()
            .map(|c| FieldElement::Rat(BigRational::from(c.clone())))
            .collect(),
    );
    let sf = zq.div_exact(&zq.gcd(&zq.derivative()));
    let mut den_lcm = BigInt::one();
    for c in sf.coeffs() {
        let FieldElement::Rat(r) = c else { unreachable!() };
        den_lcm = den_lcm.lcm(r.denom());
    }
    let g: Vec<BigInt> = sf
        .coeffs()
        .iter()
        .map(|c| {
            let FieldElement::Rat(r) = c else { unreachable!() };
            r.numer() * (&den_lcm / r.denom())
        })
        .collect();
    let lc = g.last().unwrap().clone();
    let height = g.iter().map(|c| c.abs()).max().unwrap();
    let bound_num = &lc.abs() + &height; // |a| <= |lc| + max|c_i| for a/b in lowest terms
    let bound_den = lc.abs();
    // A prime where g stays square-free with unit leading coefficient.
    let mut p = 1_000_003u64;
    let gp = loop {
        while !is_prime_u64(p) {
            p += 2;
        }
        let fp = FieldSpec::Prime { p };
        if (&lc % BigInt::from(p)).is_zero() {
            p += 2;
            continue;
        }
        let gp = UniPoly::new(
            fp.clone(),
            g.iter()
                .map(|c| {
                    let m = c.mod_floor(&BigInt::from(p));
                    fp.from_u64(u64::try_from(&m.to_biguint().unwrap()).unwrap())
                })
                .collect(),
        );
        if gp.gcd(&gp.derivative()).degree() == Some(0) {
            break gp;
        }
        p += 2;
    };
    let target: BigInt = BigInt::from(2) * &bound_num * &bound_den + 1;
    for r0 in all_roots(&gp)? {
        let FieldElement::Fp(r0) = r0 else { unreachable!() };
        // Quadratic Hensel lift of the simple root r0.
        let mut modulus = BigInt::from(p);
        let mut r = BigInt::from(r0);
        while modulus < target {
            modulus = &modulus * &modulus;
            let gr = eval_int(&g, &r).mod_floor(&modulus);
            let dgr = eval_int(&deriv_int(&g), &r).mod_floor(&modulus);
            let Some(inv) = mod_inverse(&dgr, &modulus) else {
                break; // derivative not invertible at this precision: no simple lift
            };
            r = (&r - gr * inv).mod_floor(&modulus);
        }
        if modulus < target {
            continue;
        }
        if let Some((a, b)) = rational_reconstruct(&r, &modulus, &bound_num, &bound_den) {
            let cand = BigRational::new(a, b);
            if eval_rat(&z, &cand).is_zero() {
                roots.push(cand);
            }
        }
    }
    roots.sort();
    roots.dedup();
    Ok(roots)
}

fn eval_int(c: &[BigInt], x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for ci in c.iter().rev() {
        acc = acc * x + ci;
    }
    acc
}

fn deriv_int(c: &[BigInt]) -> Vec<BigInt> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(i, ci)| ci * BigInt::from(i))
        .collect()
}

fn eval_rat(c: &[BigInt], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for ci in c.iter().rev() {
        acc = acc * x + BigRational::from(ci.clone());
    }
    acc
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Find a/b with a = r b mod m, |a| <= bound_num, 0 < b <= bound_den, by the
/// half-extended Euclidean algorithm.
fn rational_reconstruct(
    r: &BigInt,
    m: &BigInt,
    bound_num: &BigInt,
    bound_den: &BigInt,
) -> Option<(BigInt, BigInt)> {
    let (mut r0, mut r1) = (m.clone(), r.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while &r1 > bound_num {
        let q = &r0 / &r1;
        (r0, r1) = (r1.clone(), r0 - &q * &r1);
        (t0, t1) = (t1.clone(), t0 - &q * &t1);
    }
    if t1.is_zero() {
        return None;
    }
    let (a, b) = if t1.is_negative() {
        (-r1, -t1)
    } else {
        (r1, t1)
    };
    if b.is_positive() && &b <= bound_den && a.gcd(&b).is_one() {
        Some((a, b))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f13() -> FieldSpec {
        FieldSpec::prime(13).unwrap()
    }

    #[test]
    fn factor_quadratics_over_f13() {
        // y^2 - 1 = (y + 1)(y + 12); y^2 - 2 irreducible (2 is a nonresidue).
        let f = f13();
        let g = UniPoly::from_i64_coeffs(&f, &[-1, 0, 1]);
        let factors = uni_factor(&g, 0).unwrap();
        assert_eq!(
            factors,
            vec![
                (UniPoly::from_i64_coeffs(&f, &[1, 1]), 1),
                (UniPoly::from_i64_coeffs(&f, &[12, 1]), 1),
            ]
        );
        let g = UniPoly::from_i64_coeffs(&f, &[-2, 0, 1]);
        let factors = uni_factor(&g, 0).unwrap();
        assert_eq!(factors, vec![(g.monic(), 1)]);
        assert!(is_irreducible(&g).unwrap());
    }

    #[test]
    fn factor_with_multiplicity_over_f5() {
        let f = FieldSpec::prime(5).unwrap();
        let g = UniPoly::from_i64_coeffs(&f, &[-1, 1]); // y - 1
        let sq = g.mul(&g);
        let factors = uni_factor(&sq, 0).unwrap();
        assert_eq!(factors, vec![(UniPoly::from_i64_coeffs(&f, &[4, 1]), 2)]);
    }

    #[test]
    fn factor_output_is_seed_independent() {
        use rand::SeedableRng;
        let f = f13();
        let mut rng = ChaCha12Rng::seed_from_u64(99);
        for _ in 0..10 {
            let g = UniPoly::rand(&f, 6, &mut rng);
            let a = uni_factor(&g, 1).unwrap();
            let b = uni_factor(&g, 2).unwrap();
            assert_eq!(a, b);
            // Product reconstructs.
            let mut prod = UniPoly::constant(f.clone(), g.lc());
            for (h, e) in &a {
                prod = prod.mul(&h.pow(*e as usize));
            }
            assert_eq!(prod, g);
        }
    }

    #[test]
    fn canonical_moduli_are_frozen() {
        // p = 7, n = 2: x^2 is reducible, x^2 + 1 has no root mod 7.
        assert_eq!(canonical_modulus(7, 2), vec![1, 0, 1]);
        // p = 13, n = 2: -1 = 5^2 kills x^2 + 1; -2 is a nonresidue.
        assert_eq!(canonical_modulus(13, 2), vec![2, 0, 1]);
    }

    #[test]
    fn adjoin_root_of_quadratic() {
        let f = f13();
        let m = UniPoly::from_i64_coeffs(&f, &[-2, 0, 1]); // y^2 - 2
        let (ext, emb, root) = adjoin_root(&f, &m).unwrap();
        assert_eq!(ext.extension_degree(), 2);
        let img = emb.apply_poly(&m);
        assert!(ext.is_zero(&img.eval(&root)));
        // Canonical root is the smaller of the two.
        let other = ext.neg(&root);
        assert!(ext.cmp_elems(&root, &other) != std::cmp::Ordering::Greater);
        // Lift round-trips on the subfield.
        let a = f.from_u64(9);
        assert_eq!(emb.lift(&emb.apply(&a)), Some(a));
        // The root itself does not lift.
        assert_eq!(emb.lift(&root), None);
    }

    #[test]
    fn adjoin_linear_modulus_is_identity() {
        let f = f13();
        let m = UniPoly::from_i64_coeffs(&f, &[-5, 1]);
        let (ext, emb, root) = adjoin_root(&f, &m).unwrap();
        assert_eq!(ext, f);
        assert!(emb.is_identity());
        assert_eq!(root, f.from_u64(5));
    }

    #[test]
    fn tower_flattening() {
        // Adjoin a quadratic over F_13^2: the result is F_13^4 over F_13.
        let f = f13();
        let m = UniPoly::from_i64_coeffs(&f, &[-2, 0, 1]);
        let (ext2, _, _) = adjoin_root(&f, &m).unwrap();
        // An irreducible quadratic over F_13^2: x^2 - t where t generates.
        let t = ext2.generator().unwrap();
        let m2 = UniPoly::new(
            ext2.clone(),
            vec![ext2.neg(&t), ext2.zero(), ext2.one()],
        );
        if is_irreducible(&m2).unwrap() {
            let (ext4, emb, root) = adjoin_root(&ext2, &m2).unwrap();
            assert_eq!(ext4.extension_degree(), 4);
            assert_eq!(emb.from, ext2);
            let img = emb.apply_poly(&m2);
            assert!(ext4.is_zero(&img.eval(&root)));
        } else {
            // t might be a square in F_13^2; x^2 - (t+1) etc. must eventually work.
            let mut shift = 1u64;
            loop {
                let c = ext2.add(&t, &ext2.from_u64(shift));
                let m2 = UniPoly::new(
                    ext2.clone(),
                    vec![ext2.neg(&c), ext2.zero(), ext2.one()],
                );
                if is_irreducible(&m2).unwrap() {
                    let (ext4, emb, root) = adjoin_root(&ext2, &m2).unwrap();
                    assert_eq!(ext4.extension_degree(), 4);
                    let img = emb.apply_poly(&m2);
                    assert!(ext4.is_zero(&img.eval(&root)));
                    break;
                }
                shift += 1;
            }
        }
    }

    #[test]
    fn embedding_is_homomorphic() {
        let f = f13();
        let ext = extension_field(13, 4).unwrap();
        let emb = embed_into(&f, &ext).unwrap();
        for a in 0..13u64 {
            for b in 0..13u64 {
                let x = f.from_u64(a);
                let y = f.from_u64(b);
                assert_eq!(
                    emb.apply(&f.mul(&x, &y)),
                    ext.mul(&emb.apply(&x), &emb.apply(&y))
                );
                assert_eq!(
                    emb.apply(&f.add(&x, &y)),
                    ext.add(&emb.apply(&x), &emb.apply(&y))
                );
            }
        }
    }

    #[test]
    fn subfield_embedding_2_into_4() {
        let e2 = extension_field(13, 2).unwrap();
        let e4 = extension_field(13, 4).unwrap();
        let emb = embed_into(&e2, &e4).unwrap();
        let t = e2.generator().unwrap();
        // Homomorphism on a sample of pairs including the generator.
        let samples = [e2.from_u64(7), t.clone(), e2.mul(&t, &t), e2.add(&t, &e2.one())];
        for x in &samples {
            for y in &samples {
                assert_eq!(
                    emb.apply(&e2.mul(x, y)),
                    e4.mul(&emb.apply(x), &emb.apply(y))
                );
            }
        }
        assert_eq!(emb.lift(&emb.apply(&t)), Some(t));
    }

    #[test]
    fn rational_roots_exact() {
        let q = FieldSpec::Rationals;
        // (x - 2)(x + 3/5)(x^2 + 1) * x
        let a = UniPoly::from_i64_coeffs(&q, &[-2, 1]);
        let b = UniPoly::new(
            q.clone(),
            vec![
                FieldElement::Rat(BigRational::new(3.into(), 5.into())),
                FieldElement::Rat(BigRational::one()),
            ],
        );
        let c = UniPoly::from_i64_coeffs(&q, &[1, 0, 1]);
        let x = UniPoly::from_i64_coeffs(&q, &[0, 1]);
        let f = a.mul(&b).mul(&c).mul(&x);
        let roots = rational_roots(&f).unwrap();
        assert_eq!(
            roots,
            vec![
                BigRational::new((-3).into(), 5.into()),
                BigRational::zero(),
                BigRational::from(BigInt::from(2)),
            ]
        );
        // No rational roots.
        let roots = rational_roots(&c).unwrap();
        assert!(roots.is_empty());
    }
}
