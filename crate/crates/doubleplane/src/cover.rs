use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::algebra::factor::{adjoin_root, embed_into, uni_factor};
use crate::algebra::linalg::kernel_basis;
use crate::algebra::triform::BinForm;
use crate::algebra::unipoly::UniPoly;
use crate::algebra::{FieldElement, FieldSpec, TriForm};
use crate::curve::{form_gcd, random_point, ClosedPoint, PlaneCurve, ProjPoint};
use crate::error::{internal_check, Error};
use crate::intersect::mult_at_point;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitMode {
    ExactParametrized,
    MonteCarlo,
    LocalModel,
}

/// Outcome of a splitting probe. The preimage of C in the double plane
/// branched over B is reducible exactly when the restricted branch form is a
/// square in the function field of C; the variants grade how much of that
/// was established and over which field.
#[derive(Debug, Clone)]
pub enum SplitOutcome {
    /// The pulled-back branch form is scale · half² with scale a square, so
    /// the preimage splits over the base field.
    RationalSplit {
        scale: FieldElement,
        scale_root: FieldElement,
        half: UniPoly,
    },
    /// scale · half² with scale a nonsquare: the two halves are conjugate
    /// over the quadratic extension adjoining √scale.
    SplitAfterQuadraticConstantTwist {
        nonsquare_constant: FieldElement,
        half: UniPoly,
    },
    /// A point on C, off B, whose branch value is a certified nonsquare in
    /// its residue field: the preimage is irreducible over that field.
    NonSquareWitness {
        point: ClosedPoint,
        value: FieldElement,
    },
    /// Monte Carlo only: every sampled branch value was a square.
    AllSamplesSquare { samples: u64 },
    /// No qualifying sample was requested.
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct SplitReport {
    pub mode: SplitMode,
    pub outcome: SplitOutcome,
    pub samples: u64,
    pub seed: u64,
    pub field: FieldSpec,
}

/// The local analytic model of an even-order contact: at a contact of order
/// 2l the preimage has two branches u ∓ v^l meeting with multiplicity
/// exactly l. Returns the two branch forms (chart z = 1, u = y, v = x) and
/// their verified local multiplicity.
pub fn local_split_model(field: &FieldSpec, l: u32) -> Result<(TriForm, TriForm, u64)> {
    assert!(l >= 1);
    if field.characteristic() == 2 {
        return Err(Error::BadCharacteristic {
            p: 2,
            reason: "the two local branches collapse in characteristic 2".into(),
        });
    }
    let minus = TriForm::from_i64_terms(
        field,
        l,
        &[(0, 1, l - 1, 1), (l, 0, 0, -1)],
    );
    let plus = TriForm::from_i64_terms(field, l, &[(0, 1, l - 1, 1), (l, 0, 0, 1)]);
    let product = TriForm::from_i64_terms(
        field,
        2 * l,
        &[(0, 2, 2 * l - 2, 1), (2 * l, 0, 0, -1)],
    );
    internal_check!(
        minus.mul(&plus) == product,
        "branch product must be u^2 - v^(2l)"
    );
    let origin = ClosedPoint::rational(field, ProjPoint::from_i64(field, [0, 0, 1]));
    let m = mult_at_point(&minus, &plus, &origin)?;
    internal_check!(
        m == Some(l as u64),
        "local branches of an order-2l contact meet with multiplicity l"
    );
    Ok((minus, plus, l as u64))
}

/// Exact splitting test for rational C: a line, or a smooth conic with a
/// rational point. C is parametrized by binary forms, the branch form is
/// pulled back to one variable, and an exact square-root attempt decides
/// the outcome. No sampling is involved except in the witness search after
/// a failed square root.
pub fn split_exact_parametrized(
    b: &PlaneCurve,
    c: &PlaneCurve,
    seed: u64,
) -> Result<SplitReport> {
    let field = b.field.clone();
    assert!(c.field == field);
    if field.characteristic() == 2 {
        return Err(Error::BadCharacteristic {
            p: 2,
            reason: "branch data needs odd or zero characteristic".into(),
        });
    }
    if b.degree() != 2 * c.degree() {
        return Err(Error::DegreeMismatch {
            deg_b: b.degree() as u64,
            deg_c: c.degree() as u64,
        });
    }
    if c.degree() > 2 {
        return Err(Error::NotAConic);
    }
    if c.degree() == 2 && !c.is_smooth()?.smooth {
        return Err(Error::CNotSmooth);
    }
    let xs = parametrize_rational_curve(c)?;
    let bf = b.form().compose_binary(&xs);
    if bf.is_zero() {
        return Err(Error::CommonComponent {
            gcd: c.form().render(),
        });
    }
    let (f, defect) = bf.to_unipoly();
    let outcome = if defect % 2 == 0 {
        match f.poly_sqrt()? {
            Some((scale, half)) => match field.sqrt(&scale) {
                Some(scale_root) => SplitOutcome::RationalSplit {
                    scale,
                    scale_root,
                    half,
                },
                None => SplitOutcome::SplitAfterQuadraticConstantTwist {
                    nonsquare_constant: scale,
                    half,
                },
            },
            None => nonsquare_value_witness(&field, b.form(), &f, &xs, seed)?,
        }
    } else {
        nonsquare_value_witness(&field, b.form(), &f, &xs, seed)?
    };
    Ok(SplitReport {
        mode: SplitMode::ExactParametrized,
        outcome,
        samples: 0,
        seed,
        field,
    })
}

/// Parametrize a line or a smooth conic with a rational point by three
/// binary forms of degree 1 or 2. The composition with the defining form
/// is verified to vanish identically.
fn parametrize_rational_curve(c: &PlaneCurve) -> Result<[BinForm; 3]> {
    let field = c.field.clone();
    let form = c.form();
    let xs: [BinForm; 3] = if c.degree() == 1 {
        let row = vec![
            form.coeff((1, 0, 0)),
            form.coeff((0, 1, 0)),
            form.coeff((0, 0, 1)),
        ];
        let basis = kernel_basis(&field, &[row], 3);
        internal_check!(basis.len() == 2, "a line has a two-dimensional kernel");
        std::array::from_fn(|i| {
            BinForm::linear(field.clone(), basis[0][i].clone(), basis[1][i].clone())
        })
    } else {
        let p0 = rational_point_on_conic(c)?;
        let j = p0
            .coords()
            .iter()
            .position(|x| !field.is_zero(x))
            .unwrap();
        let (a, bb) = match j {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let basis_vec = |i: usize| -> [FieldElement; 3] {
            std::array::from_fn(|k| if k == i { field.one() } else { field.zero() })
        };
        let ea = basis_vec(a);
        let eb = basis_vec(bb);
        let q = |v: &[FieldElement; 3]| form.eval(v);
        let addv = |x: &[FieldElement; 3], y: &[FieldElement; 3]| -> [FieldElement; 3] {
            std::array::from_fn(|k| field.add(&x[k], &y[k]))
        };
        // Polar form by evaluation, valid in any odd characteristic.
        let bil = |x: &[FieldElement; 3], y: &[FieldElement; 3]| {
            field.sub(&field.sub(&q(&addv(x, y)), &q(x)), &q(y))
        };
        let p0c = p0.coords().clone();
        // Q(t ea + u eb) as a binary quadratic.
        let qm = BinForm::new(
            field.clone(),
            2,
            vec![q(&eb), bil(&ea, &eb), q(&ea)],
        );
        // Polar of P0 against the moving point.
        let bpm = BinForm::linear(field.clone(), bil(&p0c, &ea), bil(&p0c, &eb));
        let minus_one = field.neg(&field.one());
        std::array::from_fn(|i| {
            let mi = BinForm::linear(
                field.clone(),
                if i == a { field.one() } else { field.zero() },
                if i == bb { field.one() } else { field.zero() },
            );
            qm.scale(&p0c[i])
                .add(&bpm.mul(&mi).scale(&minus_one))
        })
    };
    let check = form.compose_binary(&xs);
    internal_check!(check.is_zero(), "parametrization must land on the curve");
    Ok(xs)
}

/// First rational point on a smooth conic, by deterministic scan. Finite
/// fields always have one; over the rationals the scan is height-bounded
/// and failure is reported as NoRationalPoint.
fn rational_point_on_conic(c: &PlaneCurve) -> Result<ProjPoint> {
    let field = &c.field;
    if field.is_finite() {
        for a in field.iter_elements() {
            for b in field.iter_elements() {
                let p = ProjPoint::new(field.clone(), [field.one(), a.clone(), b]);
                if c.contains(&p) {
                    return Ok(p);
                }
            }
        }
        for b in field.iter_elements() {
            let p = ProjPoint::new(field.clone(), [field.zero(), field.one(), b]);
            if c.contains(&p) {
                return Ok(p);
            }
        }
        let p = ProjPoint::from_i64(field, [0, 0, 1]);
        if c.contains(&p) {
            return Ok(p);
        }
        return Err(Error::Internal(
            "a smooth conic over a finite field has rational points".into(),
        ));
    }
    let mut heights: Vec<FieldElement> = Vec::new();
    for num in -8i64..=8 {
        for den in 1i64..=8 {
            let r = field.div(&field.from_i64(num), &field.from_i64(den));
            if !heights.contains(&r) {
                heights.push(r);
            }
        }
    }
    for a in &heights {
        for b in &heights {
            let p = ProjPoint::new(field.clone(), [field.one(), a.clone(), b.clone()]);
            if c.contains(&p) {
                return Ok(p);
            }
        }
    }
    for b in &heights {
        let p = ProjPoint::new(field.clone(), [field.zero(), field.one(), b.clone()]);
        if c.contains(&p) {
            return Ok(p);
        }
    }
    let p = ProjPoint::from_i64(field, [0, 0, 1]);
    if c.contains(&p) {
        return Ok(p);
    }
    Err(Error::NoRationalPoint)
}

/// Hunt for a parameter value whose branch value is a nonsquare, scanning
/// the base field and then odd-degree scalar extensions (odd extensions
/// preserve nonsquareness, even ones destroy it). The returned value is
/// re-evaluated at the stored point representative and re-certified by the
/// Euler criterion.
fn nonsquare_value_witness(
    base: &FieldSpec,
    b_form: &TriForm,
    f: &UniPoly,
    xs: &[BinForm; 3],
    _seed: u64,
) -> Result<SplitOutcome> {
    if !base.is_finite() {
        for t0 in rational_scan_values(base) {
            let v = f.eval(&t0);
            if base.is_zero(&v) || base.is_square(&v) {
                continue;
            }
            let coords: [FieldElement; 3] =
                std::array::from_fn(|i| xs[i].eval(&t0, &base.one()));
            let point = ClosedPoint::rational(base, ProjPoint::new(base.clone(), coords));
            let value = point.eval_form(b_form);
            internal_check!(
                !base.is_square(&value),
                "squareness class survives projective rescaling"
            );
            return Ok(SplitOutcome::NonSquareWitness { point, value });
        }
        return Err(Error::ExhaustedAttempts(200));
    }
    let mut attempts = 0u64;
    for ext_deg in [1u32, 3, 5] {
        let bk = if ext_deg == 1 {
            base.clone()
        } else {
            crate::algebra::factor::extension_field(
                base.characteristic(),
                base.extension_degree() * ext_deg,
            )?
        };
        let emb = embed_into(base, &bk)?;
        let fk = f.map_coeffs(&bk, |c| emb.apply(c));
        for t0 in bk.iter_elements().take(100_000) {
            attempts += 1;
            let v = fk.eval(&t0);
            if bk.is_zero(&v) || bk.is_square(&v) {
                continue;
            }
            // Parametrizing forms at (t0 : 1), coefficients embedded into
            // the extension.
            let coords: [FieldElement; 3] = std::array::from_fn(|i| {
                let mut acc = bk.zero();
                for k in 0..=xs[i].degree() as usize {
                    let term = bk.mul(&emb.apply(&xs[i].coeff(k)), &bk.pow(&t0, k as u64));
                    acc = bk.add(&acc, &term);
                }
                acc
            });
            let point = ClosedPoint::new(base, &bk, coords)?;
            let value = point.eval_form(b_form);
            let pf = &point.field;
            internal_check!(!pf.is_square(&value), "witness value must stay nonsquare");
            let ord = pf.order().unwrap();
            let e = (&ord - 1u32) >> 1;
            internal_check!(
                pf.pow_big(&value, &e) == pf.neg(&pf.one()),
                "Euler criterion re-check on the witness value"
            );
            return Ok(SplitOutcome::NonSquareWitness { point, value });
        }
    }
    Err(Error::ExhaustedAttempts(attempts))
}

fn rational_scan_values(field: &FieldSpec) -> Vec<FieldElement> {
    let mut out = Vec::new();
    for num in 0i64..=100 {
        for sign in [1i64, -1] {
            let v = field.from_i64(sign * num);
            if !out.contains(&v) {
                out.push(v);
            }
        }
    }
    out
}

/// Monte Carlo splitting probe over a finite field: sample closed points on
/// C off B by slicing with random rational lines, and test squareness of
/// the branch value in each residue field. Residue fields of even degree
/// over the base are skipped unless `include_even_degree` is set, since
/// constant-twist classes trivialize there. One-sided: AllSamplesSquare is
/// evidence at heuristic confidence 1 - 2^-n, never proof.
pub fn split_monte_carlo(
    b: &PlaneCurve,
    c: &PlaneCurve,
    n_samples: u64,
    seed: u64,
    include_even_degree: bool,
) -> Result<SplitReport> {
    let field = b.field.clone();
    assert!(c.field == field);
    if !field.is_finite() {
        return Err(Error::FieldNotFinite);
    }
    if field.characteristic() == 2 {
        return Err(Error::BadCharacteristic {
            p: 2,
            reason: "branch data needs odd characteristic".into(),
        });
    }
    if !b.is_smooth()?.smooth {
        return Err(Error::BNotSmooth);
    }
    if !c.is_smooth()?.smooth {
        return Err(Error::CNotSmooth);
    }
    let g = form_gcd(b.form(), c.form())?;
    if g.degree() > 0 {
        return Err(Error::CommonComponent { gcd: g.render() });
    }
    if n_samples == 0 {
        return Ok(SplitReport {
            mode: SplitMode::MonteCarlo,
            outcome: SplitOutcome::Inconclusive,
            samples: 0,
            seed,
            field,
        });
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut samples = 0u64;
    let max_draws = 60 * n_samples + 40;
    for draw in 0..max_draws {
        let p0 = random_point(&field, &mut rng);
        let p1 = random_point(&field, &mut rng);
        if p0 == p1 {
            continue;
        }
        let restricted = c.restrict_to_line(&p0, &p1);
        let (poly, _) = restricted.to_unipoly();
        if poly.is_zero() {
            continue;
        }
        let factors = uni_factor(&poly, seed ^ (draw.wrapping_mul(0x9e3779b9)))?;
        for (h, _) in factors {
            let k = h.deg() as u32;
            if !include_even_degree && k % 2 == 0 {
                continue;
            }
            let (lf, emb, t0) = adjoin_root(&field, &h)?;
            let coords: [FieldElement; 3] = std::array::from_fn(|i| {
                lf.add(
                    &lf.mul(&t0, &emb.apply(&p0.coords()[i])),
                    &emb.apply(&p1.coords()[i]),
                )
            });
            let point = ClosedPoint::new(&field, &lf, coords)?;
            let value = point.eval_form(b.form());
            if point.field.is_zero(&value) {
                continue;
            }
            samples += 1;
            if !point.field.is_square(&value) {
                let pf = &point.field;
                let ord = pf.order().unwrap();
                let e = (&ord - 1u32) >> 1;
                internal_check!(
                    pf.pow_big(&value, &e) == pf.neg(&pf.one()),
                    "Euler criterion re-check on the sampled witness"
                );
                return Ok(SplitReport {
                    mode: SplitMode::MonteCarlo,
                    outcome: SplitOutcome::NonSquareWitness { point, value },
                    samples,
                    seed,
                    field,
                });
            }
            if samples == n_samples {
                return Ok(SplitReport {
                    mode: SplitMode::MonteCarlo,
                    outcome: SplitOutcome::AllSamplesSquare { samples },
                    samples,
                    seed,
                    field,
                });
            }
        }
    }
    if samples == 0 {
        return Err(Error::ZeroSamplesPossible);
    }
    Ok(SplitReport {
        mode: SplitMode::MonteCarlo,
        outcome: SplitOutcome::AllSamplesSquare { samples },
        samples,
        seed,
        field,
    })
}
