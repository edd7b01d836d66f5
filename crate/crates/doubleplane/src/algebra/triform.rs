use std::collections::BTreeMap;

use super::bipoly::BiPoly;
use super::field::{FieldElement, FieldSpec};
use super::unipoly::UniPoly;

/// Which projective coordinate a chart or convention refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
    Z,
}

/// A homogeneous form in x, y, z. Terms are kept sparse; the degree is part
/// of the value so the zero form of each degree is distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriForm {
    pub field: FieldSpec,
    degree: u32,
    terms: BTreeMap<(u32, u32, u32), FieldElement>,
}

impl TriForm {
    pub fn zero(field: FieldSpec, degree: u32) -> Self {
        TriForm {
            field,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(field: FieldSpec, coeff: FieldElement, e: (u32, u32, u32)) -> Self {
        let mut t = TriForm::zero(field, e.0 + e.1 + e.2);
        if !t.field.is_zero(&coeff) {
            t.terms.insert(e, coeff);
        }
        t
    }

    pub fn from_terms(
        field: FieldSpec,
        degree: u32,
        terms: impl IntoIterator<Item = ((u32, u32, u32), FieldElement)>,
    ) -> Self {
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            assert!(e.0 + e.1 + e.2 == degree, "inhomogeneous term");
            if field.is_zero(&c) {
                continue;
            }
            map.entry(e)
                .and_modify(|v: &mut FieldElement| *v = field.add(v, &c))
                .or_insert(c);
        }
        map.retain(|_, v| !field.is_zero(v));
        TriForm {
            field,
            degree,
            terms: map,
        }
    }

    pub fn from_i64_terms(field: &FieldSpec, degree: u32, terms: &[(u32, u32, u32, i64)]) -> Self {
        TriForm::from_terms(
            field.clone(),
            degree,
            terms
                .iter()
                .map(|&(a, b, c, v)| ((a, b, c), field.from_i64(v))),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeff(&self, e: (u32, u32, u32)) -> FieldElement {
        self.terms
            .get(&e)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Terms in descending graded lex order with x > y > z.
    pub fn terms_desc(&self) -> impl Iterator<Item = ((u32, u32, u32), &FieldElement)> {
        self.terms.iter().rev().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add(&self, other: &TriForm) -> TriForm {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        assert!(self.degree == other.degree, "degree mismatch in add");
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let cur = terms.entry(*e).or_insert_with(|| self.field.zero());
            *cur = self.field.add(cur, c);
        }
        terms.retain(|_, v| !self.field.is_zero(v));
        TriForm {
            field: self.field.clone(),
            degree: self.degree,
            terms,
        }
    }

    pub fn neg(&self) -> TriForm {
        TriForm {
            field: self.field.clone(),
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, self.field.neg(c)))
                .collect(),
        }
    }

    pub fn sub(&self, other: &TriForm) -> TriForm {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &FieldElement) -> TriForm {
        if self.field.is_zero(k) {
            return TriForm::zero(self.field.clone(), self.degree);
        }
        TriForm {
            field: self.field.clone(),
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, self.field.mul(c, k)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &TriForm) -> TriForm {
        let mut out = TriForm::zero(self.field.clone(), self.degree + other.degree);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = (e1.0 + e2.0, e1.1 + e2.1, e1.2 + e2.2);
                let c = self.field.mul(c1, c2);
                let cur = out.terms.entry(e).or_insert_with(|| self.field.zero());
                *cur = self.field.add(cur, &c);
            }
        }
        out.terms.retain(|_, v| !self.field.is_zero(v));
        out
    }

    pub fn pow(&self, e: u32) -> TriForm {
        let mut acc = TriForm::monomial(self.field.clone(), self.field.one(), (0, 0, 0));
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, p: &[FieldElement; 3]) -> FieldElement {
        let mut acc = self.field.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, &k) in p.iter().zip([e.0, e.1, e.2].iter()) {
                if k > 0 {
                    t = self.field.mul(&t, &self.field.pow(v, k as u64));
                }
            }
            acc = self.field.add(&acc, &t);
        }
        acc
    }

    pub fn partial(&self, var: Var) -> TriForm {
        if self.degree == 0 {
            return TriForm::zero(self.field.clone(), 0);
        }
        let mut out = TriForm::zero(self.field.clone(), self.degree - 1);
        for (e, c) in &self.terms {
            let (k, ne) = match var {
                Var::X => (e.0, (e.0.wrapping_sub(1), e.1, e.2)),
                Var::Y => (e.1, (e.0, e.1.wrapping_sub(1), e.2)),
                Var::Z => (e.2, (e.0, e.1, e.2.wrapping_sub(1))),
            };
            if k == 0 {
                continue;
            }
            let nc = self.field.mul(c, &self.field.from_u64(k as u64));
            if self.field.is_zero(&nc) {
                continue;
            }
            let cur = out.terms.entry(ne).or_insert_with(|| self.field.zero());
            *cur = self.field.add(cur, &nc);
        }
        out.terms.retain(|_, v| !self.field.is_zero(v));
        out
    }

    pub fn partials(&self) -> [TriForm; 3] {
        [
            self.partial(Var::X),
            self.partial(Var::Y),
            self.partial(Var::Z),
        ]
    }

    /// Substitute each variable by a row of the matrix applied to (x, y, z):
    /// the result G satisfies G(P) = F(m P) for every point P.
    pub fn apply_linear(&self, m: &[[FieldElement; 3]; 3]) -> TriForm {
        let field = self.field.clone();
        let lin = |row: &[FieldElement; 3]| -> TriForm {
            TriForm::from_terms(
                field.clone(),
                1,
                [
                    ((1, 0, 0), row[0].clone()),
                    ((0, 1, 0), row[1].clone()),
                    ((0, 0, 1), row[2].clone()),
                ],
            )
        };
        let forms = [lin(&m[0]), lin(&m[1]), lin(&m[2])];
        // Cache powers of each linear form up to the largest exponent used.
        let mut maxes = [0u32; 3];
        for e in self.terms.keys() {
            maxes[0] = maxes[0].max(e.0);
            maxes[1] = maxes[1].max(e.1);
            maxes[2] = maxes[2].max(e.2);
        }
        let powers: Vec<Vec<TriForm>> = forms
            .iter()
            .zip(maxes.iter())
            .map(|(f, &m)| {
                let mut v = vec![TriForm::monomial(field.clone(), field.one(), (0, 0, 0))];
                for i in 1..=m as usize {
                    v.push(v[i - 1].mul(f));
                }
                v
            })
            .collect();
        let mut out = TriForm::zero(field.clone(), self.degree);
        for (e, c) in &self.terms {
            let t = powers[0][e.0 as usize]
                .mul(&powers[1][e.1 as usize])
                .mul(&powers[2][e.2 as usize])
                .scale(c);
            out = out.add(&t);
        }
        out
    }

    /// Dehomogenize by setting one variable to 1. Conventions:
    /// y = 1 gives inner x, outer z; z = 1 gives inner x, outer y;
    /// x = 1 gives inner y, outer z.
    pub fn dehomogenize(&self, set_one: Var) -> BiPoly {
        let field = self.field.clone();
        let mut buckets: BTreeMap<u32, BTreeMap<u32, FieldElement>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let (inner, outer) = match set_one {
                Var::Y => (e.0, e.2),
                Var::Z => (e.0, e.1),
                Var::X => (e.1, e.2),
            };
            buckets
                .entry(outer)
                .or_default()
                .insert(inner, c.clone());
        }
        let deg_outer = buckets.keys().next_back().copied().unwrap_or(0);
        let mut coeffs = Vec::with_capacity(deg_outer as usize + 1);
        for o in 0..=deg_outer {
            let inner_map = buckets.remove(&o).unwrap_or_default();
            let deg_inner = inner_map.keys().next_back().copied().unwrap_or(0);
            let mut cs = vec![field.zero(); deg_inner as usize + 1];
            for (i, c) in inner_map {
                cs[i as usize] = c;
            }
            coeffs.push(UniPoly::new(field.clone(), cs));
        }
        BiPoly::new(field, coeffs)
    }

    pub fn map_coeffs<F>(&self, target: &FieldSpec, f: F) -> TriForm
    where
        F: Fn(&FieldElement) -> FieldElement,
    {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let nc = f(c);
            if !target.is_zero(&nc) {
                terms.insert(*e, nc);
            }
        }
        TriForm {
            field: target.clone(),
            degree: self.degree,
            terms,
        }
    }

    /// Substitute binary forms for the three variables; the result is a
    /// binary form of degree deg(self) * e where all three substituted forms
    /// have degree e.
    pub fn compose_binary(&self, p: &[BinForm; 3]) -> BinForm {
        let field = self.field.clone();
        let e = p[0].degree();
        assert!(p.iter().all(|q| q.degree() == e));
        let mut maxes = [0u32; 3];
        for ex in self.terms.keys() {
            maxes[0] = maxes[0].max(ex.0);
            maxes[1] = maxes[1].max(ex.1);
            maxes[2] = maxes[2].max(ex.2);
        }
        let powers: Vec<Vec<BinForm>> = p
            .iter()
            .zip(maxes.iter())
            .map(|(f, &m)| {
                let mut v = vec![BinForm::one(field.clone())];
                for i in 1..=m as usize {
                    v.push(v[i - 1].mul(f));
                }
                v
            })
            .collect();
        let mut out = BinForm::zero(field.clone(), self.degree * e);
        for (ex, c) in &self.terms {
            let t = powers[0][ex.0 as usize]
                .mul(&powers[1][ex.1 as usize])
                .mul(&powers[2][ex.2 as usize])
                .scale(c);
            out = out.add(&t);
        }
        out
    }

    /// Scale so the first nonzero coefficient in descending graded lex order
    /// is 1. The zero form is returned unchanged.
    pub fn normalize_leading(&self) -> TriForm {
        match self.terms_desc().next() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = self.field.inv(c).expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    /// Canonical text rendering, parseable by the form grammar.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (e, c) in self.terms_desc() {
            let cs = self.field.render(c);
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
            if out.is_empty() {
                if neg {
                    out.push_str("- ");
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut monos = Vec::new();
            for (name, &k) in ["x", "y", "z"].iter().zip([e.0, e.1, e.2].iter()) {
                match k {
                    0 => {}
                    1 => monos.push(name.to_string()),
                    _ => monos.push(format!("{name}^{k}")),
                }
            }
            if monos.is_empty() {
                out.push_str(&mag);
            } else if mag == "1" {
                out.push_str(&monos.join("*"));
            } else {
                out.push_str(&mag);
                out.push('*');
                out.push_str(&monos.join("*"));
            }
        }
        out
    }
}

impl std::fmt::Display for TriForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// A binary form in (t, u): coeffs[i] multiplies t^i u^(degree - i).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinForm {
    pub field: FieldSpec,
    coeffs: Vec<FieldElement>,
}

impl BinForm {
    pub fn new(field: FieldSpec, degree: u32, mut coeffs: Vec<FieldElement>) -> Self {
        coeffs.resize(degree as usize + 1, field.zero());
        BinForm { field, coeffs }
    }

    pub fn zero(field: FieldSpec, degree: u32) -> Self {
        let coeffs = vec![field.zero(); degree as usize + 1];
        BinForm { field, coeffs }
    }

    pub fn one(field: FieldSpec) -> Self {
        let coeffs = vec![field.one()];
        BinForm { field, coeffs }
    }

    /// The linear form a t + b u.
    pub fn linear(field: FieldSpec, a: FieldElement, b: FieldElement) -> Self {
        BinForm {
            field,
            coeffs: vec![b, a],
        }
    }

    pub fn degree(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.field.is_zero(c))
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs[i].clone()
    }

    pub fn add(&self, other: &BinForm) -> BinForm {
        assert!(self.degree() == other.degree());
        BinForm {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(other.coeffs.iter())
                .map(|(a, b)| self.field.add(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, k: &FieldElement) -> BinForm {
        BinForm {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| self.field.mul(c, k)).collect(),
        }
    }

    pub fn mul(&self, other: &BinForm) -> BinForm {
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if self.field.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = self.field.add(&out[i + j], &self.field.mul(a, b));
            }
        }
        BinForm {
            field: self.field.clone(),
            coeffs: out,
        }
    }

    pub fn eval(&self, t: &FieldElement, u: &FieldElement) -> FieldElement {
        let d = self.degree() as usize;
        let mut acc = self.field.zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            let term = self.field.mul(
                c,
                &self.field.mul(
                    &self.field.pow(t, i as u64),
                    &self.field.pow(u, (d - i) as u64),
                ),
            );
            acc = self.field.add(&acc, &term);
        }
        acc
    }

    /// Dehomogenize at u = 1: the polynomial in t plus the vanishing order
    /// at the point at infinity (1 : 0).
    pub fn to_unipoly(&self) -> (UniPoly, u32) {
        let poly = UniPoly::new(self.field.clone(), self.coeffs.clone());
        let defect = match poly.degree() {
            None => self.degree(),
            Some(d) => self.degree() - d as u32,
        };
        (poly, defect)
    }
}
