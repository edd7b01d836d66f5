use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::algebra::{FieldElement, FieldSpec, TriForm};
use crate::curve::{form_gcd, PlaneCurve, ProjPoint};
use crate::error::{internal_check, Error};
use crate::ulrich::{ulrich_criterion, UlrichCertificate, Verdict};
use crate::Result;

/// How an instance was produced, with enough data to reproduce it.
#[derive(Debug, Clone)]
pub enum Construction {
    Fermat { s: u32 },
    TangentLine { point: ProjPoint },
    Squared { q: TriForm, h: TriForm, tries: u64 },
}

/// A certified instance: a smooth branch curve B of degree 2s, a smooth
/// curve C of degree s everywhere evenly tangent to it, and the
/// certificate that says so.
#[derive(Debug, Clone)]
pub struct InstanceBundle {
    pub b: PlaneCurve,
    pub c: PlaneCurve,
    pub certificate: UlrichCertificate,
    pub construction: Construction,
    pub seed: u64,
}

/// The Fermat forms x^(2s) - y^(2s) - z^(2s) and x^s - y^s - z^s over any
/// field, without certification.
pub fn fermat_forms(s: u32, field: &FieldSpec) -> (TriForm, TriForm) {
    let b = TriForm::from_i64_terms(
        field,
        2 * s,
        &[(2 * s, 0, 0, 1), (0, 2 * s, 0, -1), (0, 0, 2 * s, -1)],
    );
    let c = TriForm::from_i64_terms(field, s, &[(s, 0, 0, 1), (0, s, 0, -1), (0, 0, s, -1)]);
    (b, c)
}

/// The Fermat instance for even s: B and C intersect in 2s geometric
/// points, at each of which they are tangent to order exactly s. With
/// p ≡ 1 (mod s) all contact points are rational; otherwise they come in
/// Frobenius orbits, which are accepted unless rational points were
/// demanded.
pub fn fermat_pair(
    s: u32,
    field: &FieldSpec,
    require_rational_points: bool,
    seed: u64,
) -> Result<InstanceBundle> {
    if s == 0 || s % 2 != 0 {
        return Err(Error::OddS(s as u64));
    }
    if !field.is_finite() {
        return Err(Error::FieldNotFinite);
    }
    let p = field.characteristic();
    if (2 * s as u64) % p == 0 {
        return Err(Error::BadCharacteristic {
            p,
            reason: "the characteristic divides 2s".into(),
        });
    }
    if require_rational_points && p % s as u64 != 1 {
        return Err(Error::RootsOfUnityMissing {
            p,
            order: s as u64,
        });
    }
    let (bf, cf) = fermat_forms(s, field);
    let b = PlaneCurve::new(bf)?;
    let c = PlaneCurve::new(cf)?;
    let certificate = ulrich_criterion(&b, &c, seed)?;
    internal_check!(
        certificate.verdict == Verdict::Exists,
        "the Fermat pair is everywhere evenly tangent"
    );
    let geometric: u64 = certificate
        .report
        .records
        .iter()
        .map(|r| r.point.degree as u64)
        .sum();
    internal_check!(
        geometric == 2 * s as u64,
        "the Fermat pair has 2s geometric contact points"
    );
    internal_check!(
        certificate.report.records.iter().all(|r| r.order == s as u64),
        "each Fermat contact has order s"
    );
    if require_rational_points {
        internal_check!(
            certificate.report.records.iter().all(|r| r.point.degree == 1),
            "with p = 1 mod s every contact point is rational"
        );
    }
    Ok(InstanceBundle {
        b,
        c,
        certificate,
        construction: Construction::Fermat { s },
        seed,
    })
}

/// The degree-one instance: a smooth conic with its tangent line at a
/// rational point. The certificate has a single order-2 record at P.
pub fn tangent_line_instance(
    b: &PlaneCurve,
    p: &ProjPoint,
    seed: u64,
) -> Result<InstanceBundle> {
    if b.degree() != 2 {
        return Err(Error::NotAConic);
    }
    if !b.is_smooth()?.smooth {
        return Err(Error::BNotSmooth);
    }
    let tangent = b.tangent_line(p)?;
    let c = PlaneCurve::new(tangent)?;
    let certificate = ulrich_criterion(b, &c, seed)?;
    internal_check!(
        certificate.verdict == Verdict::Exists,
        "a tangent line is evenly tangent at its point of contact"
    );
    internal_check!(
        certificate.report.records.len() == 1
            && certificate.report.records[0].order == 2
            && certificate.report.records[0].point.degree == 1
            && certificate.report.records[0].point.point == *p,
        "the tangent line meets the conic only at P, to order 2"
    );
    Ok(InstanceBundle {
        b: b.clone(),
        c,
        certificate,
        construction: Construction::TangentLine { point: p.clone() },
        seed,
    })
}

/// The branch form of the squared construction, B = Q² - F_C · H. Its
/// restriction to C is Q²|_C, so every contact order with C is even by
/// construction; only smoothness needs luck.
pub fn squared_branch_form(c_form: &TriForm, q: &TriForm, h: &TriForm) -> TriForm {
    q.mul(q).sub(&c_form.mul(h))
}

/// Search for a smooth branch curve of the form Q² - F_C · H with Q, H
/// random forms of the same degree as C. Every smooth hit is automatically
/// everywhere evenly tangent to C; the certificate is still computed and
/// hard-checked. Fully determined by (seed, max_tries, field, C).
pub fn squared_construction(
    c: &PlaneCurve,
    seed: u64,
    max_tries: u64,
) -> Result<InstanceBundle> {
    let field = c.field.clone();
    if !field.is_finite() {
        return Err(Error::FieldNotFinite);
    }
    if !c.is_smooth()?.smooth {
        return Err(Error::CNotSmooth);
    }
    let s = c.degree();
    let p = field.characteristic();
    if (2 * s as u64) % p == 0 {
        return Err(Error::CharacteristicDividesDegree { p, d: 2 * s as u64 });
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    for tries in 1..=max_tries {
        let q = random_form(&field, s, &mut rng);
        if form_gcd(&q, c.form())?.degree() > 0 {
            continue;
        }
        let h = random_form(&field, s, &mut rng);
        let bf = squared_branch_form(c.form(), &q, &h);
        if bf.is_zero() {
            continue;
        }
        let Ok(b) = PlaneCurve::new(bf) else { continue };
        match b.is_smooth() {
            Ok(report) if report.smooth => {}
            Ok(_) => continue,
            Err(Error::NonReduced { .. }) => continue,
            Err(e) => return Err(e),
        }
        let certificate = ulrich_criterion(&b, c, seed ^ tries)?;
        internal_check!(
            certificate.verdict == Verdict::Exists,
            "B = Q^2 - F_C H meets C in even orders by construction"
        );
        return Ok(InstanceBundle {
            b,
            c: c.clone(),
            certificate,
            construction: Construction::Squared { q, h, tries },
            seed,
        });
    }
    Err(Error::ExhaustedTries(max_tries))
}

/// A random form of the given degree with every monomial drawn uniformly;
/// resampled if all coefficients are zero.
fn random_form(field: &FieldSpec, degree: u32, rng: &mut ChaCha12Rng) -> TriForm {
    loop {
        let mut terms: Vec<((u32, u32, u32), FieldElement)> = Vec::new();
        for i in 0..=degree {
            for j in 0..=(degree - i) {
                let k = degree - i - j;
                terms.push(((i, j, k), field.rand_elem(rng)));
            }
        }
        let f = TriForm::from_terms(field.clone(), degree, terms);
        if !f.is_zero() {
            return f;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_form;
    use crate::cover::{split_monte_carlo, SplitOutcome};

    #[test]
    fn fermat_s2_over_f13() {
        let f = FieldSpec::prime(13).unwrap();
        let bundle = fermat_pair(2, &f, true, 0).unwrap();
        assert_eq!(bundle.certificate.d_sigma_d, Some(4));
        assert_eq!(bundle.certificate.genus_d, Some(0));
        assert_eq!(bundle.certificate.report.records.len(), 4);
        assert_eq!(bundle.certificate.report.total, 8);
    }

    #[test]
    fn fermat_rejects_odd_s() {
        let f = FieldSpec::prime(13).unwrap();
        assert!(matches!(fermat_pair(3, &f, false, 0), Err(Error::OddS(3))));
    }

    #[test]
    fn fermat_rejects_bad_characteristic() {
        let f = FieldSpec::prime(2).unwrap();
        assert!(matches!(
            fermat_pair(2, &f, false, 0),
            Err(Error::BadCharacteristic { p: 2, .. })
        ));
    }

    #[test]
    fn fermat_missing_roots_of_unity() {
        // 7 is not 1 mod 4, so the order-4 contact points are irrational.
        let f = FieldSpec::prime(7).unwrap();
        assert!(matches!(
            fermat_pair(4, &f, true, 0),
            Err(Error::RootsOfUnityMissing { p: 7, order: 4 })
        ));
        // Accepted by default: orbits over extensions.
        let bundle = fermat_pair(4, &f, false, 0).unwrap();
        assert_eq!(bundle.certificate.d_sigma_d, Some(16));
        let geometric: u64 = bundle
            .certificate
            .report
            .records
            .iter()
            .map(|r| r.point.degree as u64)
            .sum();
        assert_eq!(geometric, 8);
        assert!(bundle
            .certificate
            .report
            .records
            .iter()
            .any(|r| r.point.degree > 1));
    }

    #[test]
    fn tangent_line_at_two_points() {
        let f = FieldSpec::prime(13).unwrap();
        let b = PlaneCurve::new(parse_form(&f, "x*z - y^2").unwrap()).unwrap();
        let p = ProjPoint::from_i64(&f, [1, 0, 0]);
        let bundle = tangent_line_instance(&b, &p, 0).unwrap();
        assert_eq!(bundle.c.form(), &parse_form(&f, "z").unwrap());
        assert_eq!(bundle.certificate.d_sigma_d, Some(1));
        let p2 = ProjPoint::from_i64(&f, [0, 0, 1]);
        let bundle2 = tangent_line_instance(&b, &p2, 0).unwrap();
        assert_eq!(bundle2.c.form(), &parse_form(&f, "x").unwrap());
    }

    #[test]
    fn tangent_line_rejects_off_curve_point() {
        let f = FieldSpec::prime(13).unwrap();
        let b = PlaneCurve::new(parse_form(&f, "x*z - y^2").unwrap()).unwrap();
        let p = ProjPoint::from_i64(&f, [1, 1, 0]);
        assert!(matches!(
            tangent_line_instance(&b, &p, 0),
            Err(Error::PointNotOnCurve)
        ));
        let cubic = PlaneCurve::new(parse_form(&f, "x^3 - y^3 - z^3").unwrap()).unwrap();
        let p3 = ProjPoint::from_i64(&f, [1, 1, 0]);
        assert!(matches!(
            tangent_line_instance(&cubic, &p3, 0),
            Err(Error::NotAConic)
        ));
    }

    #[test]
    fn squared_construction_line_base() {
        let f = FieldSpec::prime(13).unwrap();
        let c = PlaneCurve::new(parse_form(&f, "x").unwrap()).unwrap();
        let bundle = squared_construction(&c, 1, 50).unwrap();
        assert_eq!(bundle.b.degree(), 2);
        assert_eq!(bundle.certificate.d_sigma_d, Some(1));
        let mc = split_monte_carlo(&bundle.b, &bundle.c, 20, 5, false).unwrap();
        assert!(matches!(mc.outcome, SplitOutcome::AllSamplesSquare { .. }));
    }

    #[test]
    fn squared_construction_conic_base() {
        let f = FieldSpec::prime(13).unwrap();
        let c = PlaneCurve::new(parse_form(&f, "x^2 - y^2 - z^2").unwrap()).unwrap();
        let bundle = squared_construction(&c, 2, 50).unwrap();
        assert_eq!(bundle.b.degree(), 4);
        assert_eq!(bundle.certificate.d_sigma_d, Some(4));
        let Construction::Squared { tries, .. } = &bundle.construction else {
            panic!("wrong construction tag");
        };
        assert!(*tries <= 50);
    }

    #[test]
    fn squared_construction_is_deterministic() {
        let f = FieldSpec::prime(13).unwrap();
        let c = PlaneCurve::new(parse_form(&f, "x^2 - y^2 - z^2").unwrap()).unwrap();
        let b1 = squared_construction(&c, 9, 50).unwrap();
        let b2 = squared_construction(&c, 9, 50).unwrap();
        assert_eq!(b1.b, b2.b);
        let (Construction::Squared { q: q1, .. }, Construction::Squared { q: q2, .. }) =
            (&b1.construction, &b2.construction)
        else {
            panic!("wrong construction tag");
        };
        assert_eq!(q1, q2);
    }
}
