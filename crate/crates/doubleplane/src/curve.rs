use std::sync::OnceLock;

use rand::Rng;

use crate::algebra::bipoly::{gcd_outer, BiPoly};
use crate::algebra::factor::{embed_into, extension_field, Embedding};
use crate::algebra::linalg;
use crate::algebra::triform::{BinForm, TriForm, Var};
use crate::algebra::unipoly::UniPoly;
use crate::algebra::{FieldElement, FieldSpec};
use crate::error::{internal_check, Error};
use crate::Result;

/// A projective point with coordinates normalized so the first nonzero one
/// is 1. Equality is therefore projective equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjPoint {
    pub field: FieldSpec,
    coords: [FieldElement; 3],
}

impl ProjPoint {
    pub fn new(field: FieldSpec, coords: [FieldElement; 3]) -> Self {
        Self::try_new(field, coords).expect("projective point needs a nonzero coordinate")
    }

    pub fn try_new(field: FieldSpec, coords: [FieldElement; 3]) -> Option<Self> {
        let lead = coords.iter().find(|c| !field.is_zero(c))?;
        let inv = field.inv(lead).unwrap();
        let coords = [
            field.mul(&coords[0], &inv),
            field.mul(&coords[1], &inv),
            field.mul(&coords[2], &inv),
        ];
        Some(ProjPoint { field, coords })
    }

    pub fn from_i64(field: &FieldSpec, coords: [i64; 3]) -> Self {
        ProjPoint::new(
            field.clone(),
            [
                field.from_i64(coords[0]),
                field.from_i64(coords[1]),
                field.from_i64(coords[2]),
            ],
        )
    }

    pub fn coords(&self) -> &[FieldElement; 3] {
        &self.coords
    }

    pub fn map<F>(&self, target: &FieldSpec, f: F) -> ProjPoint
    where
        F: Fn(&FieldElement) -> FieldElement,
    {
        ProjPoint::new(
            target.clone(),
            [f(&self.coords[0]), f(&self.coords[1]), f(&self.coords[2])],
        )
    }

    pub fn render(&self) -> String {
        format!(
            "({} : {} : {})",
            self.field.render(&self.coords[0]),
            self.field.render(&self.coords[1]),
            self.field.render(&self.coords[2])
        )
    }
}

impl std::fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// A closed point of the projective plane over a base field: a Galois orbit
/// of geometric points. Stored over the minimal residue field (a canonical
/// extension of the base) with the canonically smallest orbit representative,
/// so equal closed points compare equal structurally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedPoint {
    pub base: FieldSpec,
    pub field: FieldSpec,
    pub embedding: Embedding,
    pub point: ProjPoint,
    pub degree: u32,
}

impl ClosedPoint {
    /// Build from coordinates in any extension L of the base; the point is
    /// cut down to its minimal field of definition and canonicalized.
    pub fn new(base: &FieldSpec, ext: &FieldSpec, coords: [FieldElement; 3]) -> Result<Self> {
        let point = ProjPoint::try_new(ext.clone(), coords)
            .ok_or_else(|| Error::Internal("closed point with all-zero coordinates".into()))?;
        if !base.is_finite() {
            internal_check!(
                *ext == FieldSpec::Rationals,
                "rational base requires rational coordinates"
            );
            return Ok(ClosedPoint {
                base: base.clone(),
                field: ext.clone(),
                embedding: Embedding::identity(base),
                point,
                degree: 1,
            });
        }
        let q = base.order().unwrap();
        let rel = ext.extension_degree() / base.extension_degree();
        // Minimal j with all coordinates fixed by the j-th power of the
        // q-Frobenius; orbit collected along the way.
        let mut orbit = vec![point.clone()];
        let mut cur = point.clone();
        let mut n = rel;
        for j in 1..=rel {
            cur = cur.map(ext, |c| ext.pow_big(c, &q));
            if cur == point {
                n = j;
                break;
            }
            orbit.push(cur.clone());
        }
        internal_check!(rel % n == 0, "Frobenius orbit length must divide [L:k]");
        drop(orbit);
        let p = base.characteristic();
        let min_field = extension_field(p, base.extension_degree() * n)?;
        let point = if min_field == *ext {
            point
        } else {
            let emb = embed_into(&min_field, ext)?;
            let lift = |c: &FieldElement| {
                emb.lift(c).ok_or_else(|| {
                    Error::Internal("coordinate fixed by Frobenius fails to lift".into())
                })
            };
            let coords = [
                lift(&point.coords()[0])?,
                lift(&point.coords()[1])?,
                lift(&point.coords()[2])?,
            ];
            ProjPoint::new(min_field.clone(), coords)
        };
        let field = min_field;
        // Canonical representative within the minimal field.
        let qbig = base.order().unwrap();
        let mut best = point.clone();
        let mut cur = point;
        for _ in 1..n {
            cur = cur.map(&field, |c| field.pow_big(c, &qbig));
            if cmp_coords(&field, cur.coords(), best.coords()) == std::cmp::Ordering::Less {
                best = cur.clone();
            }
        }
        Ok(ClosedPoint {
            base: base.clone(),
            embedding: embed_into(base, &field)?,
            field,
            point: best,
            degree: n as u32,
        })
    }

    pub fn rational(field: &FieldSpec, point: ProjPoint) -> Self {
        assert!(point.field == *field);
        ClosedPoint {
            base: field.clone(),
            field: field.clone(),
            embedding: Embedding::identity(field),
            point,
            degree: 1,
        }
    }

    /// Evaluate a form over the base field at this point.
    pub fn eval_form(&self, f: &TriForm) -> FieldElement {
        assert!(f.field == self.base);
        let lifted = f.map_coeffs(&self.field, |c| self.embedding.apply(c));
        lifted.eval(self.point.coords())
    }

    pub fn render(&self) -> String {
        if self.degree == 1 {
            self.point.render()
        } else {
            format!(
                "{} over {}",
                self.point.render(),
                self.field.render_spec()
            )
        }
    }
}

impl std::fmt::Display for ClosedPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.render())
    }
}

pub(crate) fn cmp_coords(
    field: &FieldSpec,
    a: &[FieldElement; 3],
    b: &[FieldElement; 3],
) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        let o = field.cmp_elems(x, y);
        if o != std::cmp::Ordering::Equal {
            return o;
        }
    }
    std::cmp::Ordering::Equal
}

/// Deterministic ordering of closed points over one base field: by residue
/// degree, then by coordinates.
pub fn cmp_closed_points(a: &ClosedPoint, b: &ClosedPoint) -> std::cmp::Ordering {
    a.degree.cmp(&b.degree).then_with(|| {
        for (x, y) in a.point.coords().iter().zip(b.point.coords().iter()) {
            let o = if a.field.is_finite() {
                let vx = a.field.to_prime_vec(x);
                let vy = b.field.to_prime_vec(y);
                vx.iter().rev().cmp(vy.iter().rev())
            } else {
                a.field.cmp_elems(x, y)
            };
            if o != std::cmp::Ordering::Equal {
                return o;
            }
        }
        std::cmp::Ordering::Equal
    })
}

/// An invertible linear change of coordinates, with its inverse cached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordChange {
    pub field: FieldSpec,
    m: [[FieldElement; 3]; 3],
    minv: [[FieldElement; 3]; 3],
}

impl CoordChange {
    pub fn identity(field: &FieldSpec) -> Self {
        let mut m = mat3_zero(field);
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = field.one();
        }
        CoordChange {
            field: field.clone(),
            minv: m.clone(),
            m,
        }
    }

    pub fn from_matrix(field: &FieldSpec, m: [[FieldElement; 3]; 3]) -> Result<Self> {
        let minv = mat3_inv(field, &m)
            .ok_or_else(|| Error::Internal("singular coordinate change".into()))?;
        Ok(CoordChange {
            field: field.clone(),
            m,
            minv,
        })
    }

    pub fn random<R: Rng>(field: &FieldSpec, rng: &mut R) -> Self {
        loop {
            let m = [
                [
                    field.rand_elem(rng),
                    field.rand_elem(rng),
                    field.rand_elem(rng),
                ],
                [
                    field.rand_elem(rng),
                    field.rand_elem(rng),
                    field.rand_elem(rng),
                ],
                [
                    field.rand_elem(rng),
                    field.rand_elem(rng),
                    field.rand_elem(rng),
                ],
            ];
            if let Some(minv) = mat3_inv(field, &m) {
                return CoordChange {
                    field: field.clone(),
                    m,
                    minv,
                };
            }
        }
    }

    /// F goes to F o m, whose zero set is the preimage of V(F) under m.
    pub fn apply_form(&self, f: &TriForm) -> TriForm {
        f.apply_linear(&self.m)
    }

    pub fn matrix(&self) -> &[[FieldElement; 3]; 3] {
        &self.m
    }

    pub fn inverse_matrix(&self) -> &[[FieldElement; 3]; 3] {
        &self.minv
    }

    /// Send a point of V(F o m) to the corresponding point of V(F).
    pub fn to_original(&self, p: &ProjPoint) -> ProjPoint {
        ProjPoint::new(self.field.clone(), mat3_apply(&self.field, &self.m, p.coords()))
    }
}

pub(crate) fn mat3_zero(field: &FieldSpec) -> [[FieldElement; 3]; 3] {
    std::array::from_fn(|_| std::array::from_fn(|_| field.zero()))
}

pub(crate) fn mat3_apply(
    field: &FieldSpec,
    m: &[[FieldElement; 3]; 3],
    v: &[FieldElement; 3],
) -> [FieldElement; 3] {
    std::array::from_fn(|i| {
        let mut acc = field.zero();
        for j in 0..3 {
            acc = field.add(&acc, &field.mul(&m[i][j], &v[j]));
        }
        acc
    })
}

pub(crate) fn mat3_det(field: &FieldSpec, m: &[[FieldElement; 3]; 3]) -> FieldElement {
    let f = field;
    let term = |a: &FieldElement, b: &FieldElement, c: &FieldElement| f.mul(&f.mul(a, b), c);
    let mut det = term(&m[0][0], &m[1][1], &m[2][2]);
    det = f.add(&det, &term(&m[0][1], &m[1][2], &m[2][0]));
    det = f.add(&det, &term(&m[0][2], &m[1][0], &m[2][1]));
    det = f.sub(&det, &term(&m[0][2], &m[1][1], &m[2][0]));
    det = f.sub(&det, &term(&m[0][0], &m[1][2], &m[2][1]));
    det = f.sub(&det, &term(&m[0][1], &m[1][0], &m[2][2]));
    det
}

pub(crate) fn mat3_inv(
    field: &FieldSpec,
    m: &[[FieldElement; 3]; 3],
) -> Option<[[FieldElement; 3]; 3]> {
    let det = mat3_det(field, m);
    let dinv = field.inv(&det)?;
    let f = field;
    let cof = |r: usize, c: usize| {
        let rs: Vec<usize> = (0..3).filter(|&i| i != r).collect();
        let cs: Vec<usize> = (0..3).filter(|&j| j != c).collect();
        let minor = f.sub(
            &f.mul(&m[rs[0]][cs[0]], &m[rs[1]][cs[1]]),
            &f.mul(&m[rs[0]][cs[1]], &m[rs[1]][cs[0]]),
        );
        if (r + c) % 2 == 0 {
            minor
        } else {
            f.neg(&minor)
        }
    };
    let mut inv = mat3_zero(field);
    for (i, row) in inv.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            // Adjugate transpose.
            *v = f.mul(&cof(j, i), &dinv);
        }
    }
    Some(inv)
}

/// Smoothness verdict with witnesses. `proven` is false only on the
/// sampling-based paths over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmoothnessReport {
    pub smooth: bool,
    pub proven: bool,
    pub singular_points: Vec<ClosedPoint>,
}

impl SmoothnessReport {
    fn smooth() -> Self {
        SmoothnessReport {
            smooth: true,
            proven: true,
            singular_points: Vec::new(),
        }
    }
}

/// A reduced plane curve of positive degree.
#[derive(Debug, Clone)]
pub struct PlaneCurve {
    pub field: FieldSpec,
    form: TriForm,
    smooth_cache: OnceLock<Result<SmoothnessReport>>,
}

impl PartialEq for PlaneCurve {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.form.normalize_leading() == other.form.normalize_leading()
    }
}

impl PlaneCurve {
    pub fn new(form: TriForm) -> Result<Self> {
        if form.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if form.degree() == 0 {
            return Err(Error::ConstantForm);
        }
        Ok(PlaneCurve {
            field: form.field.clone(),
            form,
            smooth_cache: OnceLock::new(),
        })
    }

    pub fn form(&self) -> &TriForm {
        &self.form
    }

    pub fn degree(&self) -> u32 {
        self.form.degree()
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        assert!(p.field == self.field);
        self.field.is_zero(&self.form.eval(p.coords()))
    }

    pub fn contains_closed(&self, p: &ClosedPoint) -> bool {
        assert!(p.base == self.field);
        p.field.is_zero(&p.eval_form(&self.form))
    }

    /// The tangent line at a smooth rational point of the curve.
    pub fn tangent_line(&self, p: &ProjPoint) -> Result<TriForm> {
        if !self.contains(p) {
            return Err(Error::PointNotOnCurve);
        }
        let [fx, fy, fz] = self.form.partials();
        let c = [fx.eval(p.coords()), fy.eval(p.coords()), fz.eval(p.coords())];
        if c.iter().all(|v| self.field.is_zero(v)) {
            return Err(Error::SingularPoint);
        }
        Ok(TriForm::from_terms(
            self.field.clone(),
            1,
            [
                ((1, 0, 0), c[0].clone()),
                ((0, 1, 0), c[1].clone()),
                ((0, 0, 1), c[2].clone()),
            ],
        ))
    }

    /// Restriction of the defining form to the line t P0 + u P1 as a binary
    /// form in (t, u).
    pub fn restrict_to_line(&self, p0: &ProjPoint, p1: &ProjPoint) -> BinForm {
        let lin = |i: usize| {
            BinForm::linear(
                self.field.clone(),
                p0.coords()[i].clone(),
                p1.coords()[i].clone(),
            )
        };
        self.form.compose_binary(&[lin(0), lin(1), lin(2)])
    }

    pub fn is_smooth(&self) -> Result<SmoothnessReport> {
        self.smooth_cache
            .get_or_init(|| self.compute_smoothness())
            .clone()
    }

    fn compute_smoothness(&self) -> Result<SmoothnessReport> {
        let d = self.form.degree();
        let p = self.field.characteristic();
        if p > 0 && (d as u64) % p == 0 {
            return Err(Error::CharacteristicDividesDegree { p, d: d as u64 });
        }
        if d == 1 {
            return Ok(SmoothnessReport::smooth());
        }
        self.check_reduced()?;
        if d == 2 {
            return self.conic_smoothness();
        }
        if self.field.is_finite() {
            self.smoothness_finite()
        } else {
            self.smoothness_rationals()
        }
    }

    /// Reject forms with a repeated factor. The form is split as y^a G with
    /// y not dividing G; G is square-free iff its y=1 dehomogenization g has
    /// gcd(g, g_x, g_z) constant, since an irreducible factor over a perfect
    /// field cannot have both partials zero.
    fn check_reduced(&self) -> Result<()> {
        let a = self
            .form
            .terms_desc()
            .map(|(e, _)| e.1)
            .min()
            .expect("nonzero form");
        if a >= 2 {
            return Err(Error::NonReduced {
                component: "y".to_string(),
            });
        }
        let g = self.form.dehomogenize(Var::Y);
        let d1 = gcd_outer(&g, &g.derivative_outer());
        let d2 = gcd_outer(&d1, &g.derivative_inner());
        if d2.degree_outer() != Some(0) || d2.deg_inner() != 0 {
            return Err(Error::NonReduced {
                component: d2.render("x", "z"),
            });
        }
        Ok(())
    }

    /// Conic smoothness in characteristic other than 2: the rank of the
    /// symmetric Gram matrix. Rank 3 is smooth, rank 2 is a pair of distinct
    /// lines with one singular point, rank below 2 was already rejected as
    /// non-reduced.
    fn conic_smoothness(&self) -> Result<SmoothnessReport> {
        let f = &self.field;
        let two_inv = f.inv(&f.from_u64(2)).expect("characteristic is not 2");
        let half = |c: FieldElement| f.mul(&c, &two_inv);
        let m = [
            [
                self.form.coeff((2, 0, 0)),
                half(self.form.coeff((1, 1, 0))),
                half(self.form.coeff((1, 0, 1))),
            ],
            [
                half(self.form.coeff((1, 1, 0))),
                self.form.coeff((0, 2, 0)),
                half(self.form.coeff((0, 1, 1))),
            ],
            [
                half(self.form.coeff((1, 0, 1))),
                half(self.form.coeff((0, 1, 1))),
                self.form.coeff((0, 0, 2)),
            ],
        ];
        let mut rows: Vec<Vec<FieldElement>> = m.iter().map(|r| r.to_vec()).collect();
        let pivots = linalg::rref(f, &mut rows);
        match pivots.len() {
            3 => Ok(SmoothnessReport::smooth()),
            2 => {
                let kernel = linalg::kernel_basis(f, &rows, 3);
                internal_check!(kernel.len() == 1, "rank-2 Gram matrix has a line kernel");
                let v = &kernel[0];
                let pt = ProjPoint::new(f.clone(), [v[0].clone(), v[1].clone(), v[2].clone()]);
                internal_check!(self.contains(&pt), "Gram kernel point lies on the conic");
                Ok(SmoothnessReport {
                    smooth: false,
                    proven: true,
                    singular_points: vec![ClosedPoint::rational(f, pt)],
                })
            }
            _ => Err(Error::Internal(
                "rank <= 1 conic should have been caught as non-reduced".into(),
            )),
        }
    }

    /// Full singular-locus computation over a finite field. With p not
    /// dividing d, Euler's identity puts every common zero of the partials
    /// on the curve, so the singular locus is V(Fx, Fy, Fz).
    fn smoothness_finite(&self) -> Result<SmoothnessReport> {
        let parts = self.form.partials();
        let nonzero: Vec<&TriForm> = parts.iter().filter(|f| !f.is_zero()).collect();
        internal_check!(
            nonzero.len() >= 2,
            "a reduced curve with p not dividing d has at least two nonzero partials"
        );
        let a = nonzero[0];
        let b = nonzero[1];
        let rest: Vec<&TriForm> = nonzero[2..].to_vec();
        let d = form_gcd(a, b)?;
        let mut candidates: Vec<ClosedPoint> = Vec::new();
        if d.degree() == 0 {
            candidates.extend(pair_points(a, b)?);
        } else {
            // V(A) meet V(B) = V(D) union (V(A/D) meet V(B/D)).
            internal_check!(
                !rest.is_empty(),
                "two proportional-partial curve must have a third constraint"
            );
            let c = rest[0];
            let dc = form_gcd(&d, c)?;
            internal_check!(
                dc.degree() == 0,
                "singular locus of a reduced curve is finite"
            );
            candidates.extend(pair_points(&d, c)?);
            let a1 = form_div_exact(a, &d)?;
            let b1 = form_div_exact(b, &d)?;
            if a1.degree() > 0 && b1.degree() > 0 {
                let g1 = form_gcd(&a1, &b1)?;
                internal_check!(g1.degree() == 0, "cofactors after gcd split are coprime");
                candidates.extend(pair_points(&a1, &b1)?);
            }
        }
        let mut singular: Vec<ClosedPoint> = Vec::new();
        for pt in candidates {
            let all_vanish = parts
                .iter()
                .all(|g| g.is_zero() || pt.field.is_zero(&pt.eval_form(g)));
            if !all_vanish {
                continue;
            }
            internal_check!(
                pt.field.is_zero(&pt.eval_form(&self.form)),
                "Euler identity puts singular candidates on the curve"
            );
            if !singular.contains(&pt) {
                singular.push(pt);
            }
        }
        if singular.is_empty() {
            Ok(SmoothnessReport::smooth())
        } else {
            singular.sort_by(cmp_closed_points);
            Ok(SmoothnessReport {
                smooth: false,
                proven: true,
                singular_points: singular,
            })
        }
    }

    /// Over the rationals: exact rational singular points first; if none,
    /// a verdict through reduction modulo a large prime. A smooth reduction
    /// of the same degree certifies smoothness (the discriminant is an
    /// integer polynomial in the coefficients and commutes with reduction).
    /// Repeated singular reductions without a rational witness are reported
    /// as not smooth but unproven.
    fn smoothness_rationals(&self) -> Result<SmoothnessReport> {
        let exact = self.rational_singular_points()?;
        if !exact.is_empty() {
            return Ok(SmoothnessReport {
                smooth: false,
                proven: true,
                singular_points: exact,
            });
        }
        let d = self.form.degree() as u64;
        let mut singular_votes = 0u32;
        let mut tried = 0u32;
        let mut p = 1_000_003u64;
        while tried < 6 {
            while !crate::algebra::field::is_prime_u64(p) || d % p == 0 {
                p += 2;
            }
            let fp = FieldSpec::Prime { p };
            let reduced = reduce_form_mod_p(&self.form, &fp);
            p += 2;
            let Some(rf) = reduced else { continue };
            if rf.is_zero() {
                continue;
            }
            tried += 1;
            let curve = PlaneCurve::new(rf)?;
            match curve.is_smooth() {
                Ok(rep) if rep.smooth => return Ok(SmoothnessReport::smooth()),
                Ok(_) => {
                    singular_votes += 1;
                    if singular_votes >= 3 {
                        return Ok(SmoothnessReport {
                            smooth: false,
                            proven: false,
                            singular_points: Vec::new(),
                        });
                    }
                }
                Err(Error::NonReduced { .. }) => {
                    singular_votes += 1;
                    if singular_votes >= 3 {
                        return Ok(SmoothnessReport {
                            smooth: false,
                            proven: false,
                            singular_points: Vec::new(),
                        });
                    }
                }
                Err(e) => return Err(e),
            }
        }
        Ok(SmoothnessReport {
            smooth: false,
            proven: false,
            singular_points: Vec::new(),
        })
    }

    /// Exact rational points of the singular locus. Complete for rational
    /// points: a rational singular point (x0:y0:z0) with y0 nonzero forces
    /// x0/y0 to be a rational root of the chart-y eliminant of any pair of
    /// partials (the resultant lies in the elimination ideal), and the y0=0
    /// points are covered by the chart-x eliminant and the direct check at
    /// (0:0:1).
    fn rational_singular_points(&self) -> Result<Vec<ClosedPoint>> {
        let q = &self.field;
        let parts = self.form.partials();
        let nonzero: Vec<&TriForm> = parts.iter().filter(|f| !f.is_zero()).collect();
        internal_check!(nonzero.len() >= 2, "reduced char-0 curve has two nonzero partials");
        let mut out: Vec<ClosedPoint> = Vec::new();
        // Direct check at (0:0:1).
        let origin = ProjPoint::from_i64(q, [0, 0, 1]);
        if parts
            .iter()
            .all(|g| g.is_zero() || q.is_zero(&g.eval(origin.coords())))
        {
            out.push(ClosedPoint::rational(q, origin));
        }
        for chart in [Var::Y, Var::X] {
            let mut elim: Option<UniPoly> = None;
            'pairs: for i in 0..nonzero.len() {
                for j in (i + 1)..nonzero.len() {
                    let da = nonzero[i].dehomogenize(chart);
                    let db = nonzero[j].dehomogenize(chart);
                    match crate::algebra::bipoly::res_outer(&da, &db) {
                        Ok(r) if !r.is_zero() => {
                            elim = Some(r);
                            break 'pairs;
                        }
                        Ok(_) => continue,
                        Err(Error::BothConstantInVariable) => continue,
                        Err(e) => return Err(e),
                    }
                }
            }
            let Some(r) = elim else { continue };
            for root in crate::algebra::factor::rational_roots(&r)? {
                let t = FieldElement::Rat(root);
                // Chart y: candidate (t : 1 : z); chart x: (1 : t : z).
                let fiber: Vec<UniPoly> = nonzero
                    .iter()
                    .map(|g| {
                        let de = g.dehomogenize(chart);
                        de.eval_inner(&t)
                    })
                    .collect();
                let mut w: Option<UniPoly> = None;
                for f in &fiber {
                    if f.is_zero() {
                        continue;
                    }
                    w = Some(match w {
                        None => f.clone(),
                        Some(prev) => prev.gcd(f),
                    });
                }
                let Some(w) = w else {
                    return Err(Error::Internal(
                        "all partials vanish on a line; curve cannot be reduced".into(),
                    ));
                };
                if w.degree() == Some(0) {
                    continue;
                }
                for z0 in crate::algebra::factor::rational_roots(&w)? {
                    let ze = FieldElement::Rat(z0);
                    let coords = match chart {
                        Var::Y => [t.clone(), q.one(), ze],
                        Var::X => [q.one(), t.clone(), ze],
                        Var::Z => unreachable!(),
                    };
                    let pt = ProjPoint::new(q.clone(), coords);
                    let is_sing = parts
                        .iter()
                        .all(|g| g.is_zero() || q.is_zero(&g.eval(pt.coords())));
                    if is_sing && q.is_zero(&self.form.eval(pt.coords())) {
                        let cp = ClosedPoint::rational(q, pt);
                        if !out.contains(&cp) {
                            out.push(cp);
                        }
                    }
                }
            }
        }
        out.sort_by(cmp_closed_points);
        Ok(out)
    }

    /// A random rational point on the curve, optionally avoiding a second
    /// curve, found by slicing with random lines.
    pub fn sample_point<R: Rng>(
        &self,
        rng: &mut R,
        avoid: Option<&PlaneCurve>,
        max_tries: u64,
    ) -> Result<ProjPoint> {
        if !self.field.is_finite() {
            return Err(Error::RationalsUnsupported);
        }
        for _ in 0..max_tries {
            let p0 = random_point(&self.field, rng);
            let p1 = random_point(&self.field, rng);
            if p0 == p1 {
                continue;
            }
            let restricted = self.restrict_to_line(&p0, &p1);
            let (poly, defect) = restricted.to_unipoly();
            // The parameter point (1:0) of t P0 + u P1 is P0 itself.
            if defect > 0 && avoid.map_or(true, |c| !c.contains(&p0)) {
                return Ok(p0);
            }
            if poly.is_zero() {
                continue;
            }
            for root in crate::algebra::factor::all_roots(&poly)? {
                let pt = line_point(&self.field, &p0, &p1, &root);
                let Some(pt) = pt else { continue };
                if avoid.map_or(true, |c| !c.contains(&pt)) {
                    return Ok(pt);
                }
            }
        }
        Err(Error::ExhaustedAttempts(max_tries))
    }
}

pub(crate) fn random_point<R: Rng>(field: &FieldSpec, rng: &mut R) -> ProjPoint {
    loop {
        let coords = [
            field.rand_elem(rng),
            field.rand_elem(rng),
            field.rand_elem(rng),
        ];
        if let Some(p) = ProjPoint::try_new(field.clone(), coords) {
            return p;
        }
    }
}

/// The point t P0 + u P1 with u = 1 at parameter t.
pub(crate) fn line_point(
    field: &FieldSpec,
    p0: &ProjPoint,
    p1: &ProjPoint,
    t: &FieldElement,
) -> Option<ProjPoint> {
    let coords: [FieldElement; 3] = std::array::from_fn(|i| {
        field.add(&field.mul(t, &p0.coords()[i]), &p1.coords()[i])
    });
    ProjPoint::try_new(field.clone(), coords)
}

/// Closed points common to two coprime forms, through the certified
/// intersection machinery; multiplicities are dropped.
fn pair_points(a: &TriForm, b: &TriForm) -> Result<Vec<ClosedPoint>> {
    let pts = crate::intersect::raw_points(a, b, 0x5e1f)?;
    Ok(pts.into_iter().map(|(p, _)| p).collect())
}

/// Gcd of two forms: the common y-power times the homogenization of the
/// bivariate gcd in the y = 1 chart.
pub(crate) fn form_gcd(a: &TriForm, b: &TriForm) -> Result<TriForm> {
    internal_check!(!a.is_zero() && !b.is_zero(), "form_gcd needs nonzero forms");
    let ay = a.terms_desc().map(|(e, _)| e.1).min().unwrap();
    let by = b.terms_desc().map(|(e, _)| e.1).min().unwrap();
    let m = ay.min(by);
    let g = gcd_outer(&a.dehomogenize(Var::Y), &b.dehomogenize(Var::Y));
    let mut form = homogenize_y(&g);
    if m > 0 {
        form = form.mul(&TriForm::from_i64_terms(&a.field, m, &[(0, m, 0, 1)]));
    }
    Ok(form)
}

/// Exact division of forms, verified by multiplying back.
pub(crate) fn form_div_exact(a: &TriForm, d: &TriForm) -> Result<TriForm> {
    let ay = a.terms_desc().map(|(e, _)| e.1).min().unwrap();
    let dy = d.terms_desc().map(|(e, _)| e.1).min().unwrap();
    internal_check!(dy <= ay, "divisor has too many factors of y");
    let q = a.dehomogenize(Var::Y).div_exact(&d.dehomogenize(Var::Y));
    let mut form = homogenize_y(&q);
    let extra = ay - dy;
    if extra > 0 {
        form = form.mul(&TriForm::from_i64_terms(&a.field, extra, &[(0, extra, 0, 1)]));
    }
    // Pad with y to restore the full degree if the quotient came out low.
    internal_check!(
        form.degree() + d.degree() <= a.degree(),
        "quotient degree exceeds expectation"
    );
    let pad = a.degree() - d.degree() - form.degree();
    if pad > 0 {
        form = form.mul(&TriForm::from_i64_terms(&a.field, pad, &[(0, pad, 0, 1)]));
    }
    internal_check!(d.mul(&form) == *a, "form division must be exact");
    Ok(form)
}

/// Homogenize a bivariate polynomial in the y = 1 chart: x^i z^k goes to
/// x^i y^(D-i-k) z^k with D the maximal total degree.
pub(crate) fn homogenize_y(b: &BiPoly) -> TriForm {
    let field = b.field.clone();
    if b.is_zero() {
        return TriForm::zero(field, 0);
    }
    let mut total = 0u32;
    for (k, c) in b.coeffs_outer().iter().enumerate() {
        if let Some(di) = c.degree() {
            total = total.max((k + di) as u32);
        }
    }
    let mut terms = Vec::new();
    for (k, c) in b.coeffs_outer().iter().enumerate() {
        for (i, coef) in c.coeffs().iter().enumerate() {
            if field.is_zero(coef) {
                continue;
            }
            let e = (i as u32, total - i as u32 - k as u32, k as u32);
            terms.push((e, coef.clone()));
        }
    }
    TriForm::from_terms(field, total, terms)
}

/// Reduce a rational form modulo p; None when a denominator vanishes.
pub(crate) fn reduce_form_mod_p(f: &TriForm, fp: &FieldSpec) -> Option<TriForm> {
    let mut terms = Vec::new();
    for (e, c) in f.terms_desc() {
        let FieldElement::Rat(r) = c else {
            return None;
        };
        match fp.from_rational(r.clone()) {
            Ok(v) => terms.push((e, v)),
            Err(_) => return None,
        }
    }
    Some(TriForm::from_terms(fp.clone(), f.degree(), terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_form;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn f13() -> FieldSpec {
        FieldSpec::prime(13).unwrap()
    }

    #[test]
    fn point_normalization() {
        let f = f13();
        let a = ProjPoint::from_i64(&f, [2, 4, 6]);
        let b = ProjPoint::from_i64(&f, [1, 2, 3]);
        assert_eq!(a, b);
        let c = ProjPoint::from_i64(&f, [0, 5, 10]);
        assert_eq!(c.coords()[1], f.one());
        assert!(ProjPoint::try_new(f.clone(), [f.zero(), f.zero(), f.zero()]).is_none());
    }

    #[test]
    fn closed_point_minimizes_and_canonicalizes() {
        let f = f13();
        let e2 = extension_field(13, 2).unwrap();
        // Coordinates actually in F_13, handed over in F_13^2: cut down.
        let emb = embed_into(&f, &e2).unwrap();
        let pt = ClosedPoint::new(
            &f,
            &e2,
            [emb.apply(&f.from_u64(3)), emb.apply(&f.one()), e2.zero()],
        )
        .unwrap();
        assert_eq!(pt.degree, 1);
        assert_eq!(pt.field, f);
        // A genuine quadratic point: (r : 1 : 0) with r^2 = 2.
        let m = UniPoly::from_i64_coeffs(&f, &[-2, 0, 1]);
        let (ext, _, root) = crate::algebra::factor::adjoin_root(&f, &m).unwrap();
        let p1 = ClosedPoint::new(&f, &ext, [root.clone(), ext.one(), ext.zero()]).unwrap();
        assert_eq!(p1.degree, 2);
        // Its conjugate lands on the same canonical representative.
        let conj = ext.neg(&root);
        let p2 = ClosedPoint::new(&f, &ext, [conj, ext.one(), ext.zero()]).unwrap();
        assert_eq!(p1, p2);
    }

    #[test]
    fn coord_change_round_trip() {
        let f = f13();
        let mut rng = ChaCha12Rng::seed_from_u64(17);
        let ch = CoordChange::random(&f, &mut rng);
        let form = parse_form(&f, "x^3 + 2*y^3 + z^3 + x*y*z").unwrap();
        let moved = ch.apply_form(&form);
        for _ in 0..20 {
            let p = random_point(&f, &mut rng);
            let q = ch.to_original(&p);
            assert_eq!(
                f.is_zero(&moved.eval(p.coords())),
                f.is_zero(&form.eval(q.coords()))
            );
        }
        // Inverse matrix really inverts.
        let prod = mat3_apply(&f, ch.matrix(), &[f.one(), f.zero(), f.zero()]);
        let back = mat3_apply(&f, ch.inverse_matrix(), &prod);
        assert_eq!(ProjPoint::new(f.clone(), back), ProjPoint::from_i64(&f, [1, 0, 0]));
    }

    #[test]
    fn curve_constructor_rejects_degenerates() {
        let f = f13();
        assert!(matches!(
            PlaneCurve::new(TriForm::zero(f.clone(), 2)),
            Err(Error::ZeroPolynomial)
        ));
        assert!(matches!(
            PlaneCurve::new(parse_form(&f, "7").unwrap()),
            Err(Error::ConstantForm)
        ));
    }

    #[test]
    fn smooth_conic_and_line_pair() {
        let f = f13();
        let smooth = PlaneCurve::new(parse_form(&f, "x*z - y^2").unwrap()).unwrap();
        let rep = smooth.is_smooth().unwrap();
        assert!(rep.smooth && rep.proven);
        // x^2 - y^2 = (x-y)(x+y): singular exactly at (0:0:1).
        let cross = PlaneCurve::new(parse_form(&f, "x^2 - y^2").unwrap()).unwrap();
        let rep = cross.is_smooth().unwrap();
        assert!(!rep.smooth && rep.proven);
        assert_eq!(rep.singular_points.len(), 1);
        assert_eq!(
            rep.singular_points[0].point,
            ProjPoint::from_i64(&f, [0, 0, 1])
        );
        // Double line is non-reduced.
        let dbl = PlaneCurve::new(parse_form(&f, "x^2 + 2*x*y + y^2").unwrap()).unwrap();
        assert!(matches!(dbl.is_smooth(), Err(Error::NonReduced { .. })));
    }

    #[test]
    fn characteristic_divides_degree_is_refused() {
        let f = f13();
        let c = PlaneCurve::new(parse_form(&f, "x^13 + y^13 + z^13").unwrap()).unwrap();
        assert!(matches!(
            c.is_smooth(),
            Err(Error::CharacteristicDividesDegree { p: 13, d: 13 })
        ));
    }

    #[test]
    fn fermat_quartic_is_smooth_mod_13() {
        let f = f13();
        let c = PlaneCurve::new(parse_form(&f, "x^4 - y^4 - z^4").unwrap()).unwrap();
        let rep = c.is_smooth().unwrap();
        assert!(rep.smooth && rep.proven);
    }

    #[test]
    fn nodal_cubic_singular_at_origin_chart() {
        let f = f13();
        // y^2 z = x^3 + x^2 z has a node at (0:0:1).
        let c = PlaneCurve::new(parse_form(&f, "y^2*z - x^3 - x^2*z").unwrap()).unwrap();
        let rep = c.is_smooth().unwrap();
        assert!(!rep.smooth && rep.proven);
        assert_eq!(rep.singular_points.len(), 1);
        assert_eq!(rep.singular_points[0].degree, 1);
        assert_eq!(
            rep.singular_points[0].point,
            ProjPoint::from_i64(&f, [0, 0, 1])
        );
    }

    #[test]
    fn quartic_with_two_singular_points() {
        let f = f13();
        // y^2 z^2 - x^4 - x^2 z^2: gradient vanishes exactly at (0:0:1)
        // and (0:1:0), both rational.
        let c = PlaneCurve::new(
            parse_form(&f, "y^2*z^2 - x^4 - x^2*z^2").unwrap(),
        )
        .unwrap();
        let rep = c.is_smooth().unwrap();
        assert!(!rep.smooth && rep.proven);
        assert_eq!(rep.singular_points.len(), 2);
        for p in &rep.singular_points {
            assert_eq!(p.degree, 1);
            for g in c.form().partials() {
                assert!(g.is_zero() || p.field.is_zero(&p.eval_form(&g)));
            }
        }
    }

    #[test]
    fn rational_smoothness_verdicts() {
        let q = FieldSpec::Rationals;
        let smooth = PlaneCurve::new(parse_form(&q, "x^4 - y^4 - z^4").unwrap()).unwrap();
        let rep = smooth.is_smooth().unwrap();
        assert!(rep.smooth && rep.proven);
        let nodal = PlaneCurve::new(parse_form(&q, "y^2*z - x^3 - x^2*z").unwrap()).unwrap();
        let rep = nodal.is_smooth().unwrap();
        assert!(!rep.smooth && rep.proven);
        assert_eq!(rep.singular_points.len(), 1);
        assert_eq!(
            rep.singular_points[0].point,
            ProjPoint::from_i64(&q, [0, 0, 1])
        );
    }

    #[test]
    fn tangent_line_of_conic() {
        let f = f13();
        let c = PlaneCurve::new(parse_form(&f, "x*z - y^2").unwrap()).unwrap();
        let p = ProjPoint::from_i64(&f, [0, 0, 1]);
        let t = c.tangent_line(&p).unwrap();
        // Gradient of xz - y^2 at (0,0,1) is (1, 0, 0): tangent x = 0.
        assert_eq!(t, parse_form(&f, "x").unwrap());
        let off = ProjPoint::from_i64(&f, [1, 1, 2]);
        assert!(matches!(c.tangent_line(&off), Err(Error::PointNotOnCurve)));
    }

    #[test]
    fn sampling_avoids_second_curve() {
        let f = f13();
        let c = PlaneCurve::new(parse_form(&f, "x*z - y^2").unwrap()).unwrap();
        let avoid = PlaneCurve::new(parse_form(&f, "x").unwrap()).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        for _ in 0..10 {
            let p = c.sample_point(&mut rng, Some(&avoid), 200).unwrap();
            assert!(c.contains(&p));
            assert!(!avoid.contains(&p));
        }
    }

    #[test]
    fn form_gcd_and_division() {
        let f = f13();
        let a = parse_form(&f, "x^2 - y^2").unwrap();
        let b = parse_form(&f, "x^2 + 2*x*y + y^2").unwrap();
        let g = form_gcd(&a, &b).unwrap();
        assert_eq!(g.degree(), 1);
        let q = form_div_exact(&a, &g).unwrap();
        assert_eq!(g.mul(&q), a);
        // y-power handling.
        let c = parse_form(&f, "x*y^2").unwrap();
        let d = parse_form(&f, "y^2*z").unwrap();
        let g = form_gcd(&c, &d).unwrap();
        assert_eq!(g.normalize_leading(), parse_form(&f, "y^2").unwrap());
    }
}
