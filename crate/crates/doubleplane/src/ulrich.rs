use crate::curve::{ClosedPoint, PlaneCurve};
use crate::error::{internal_check, Error};
use crate::intersect::{intersect_curves, intersect_curves_q, Provenance};
use crate::Result;

/// Contact taxonomy at a single closed point: order 1 is transversal,
/// order 2 a simple tangent, order r > 2 a tangent of order r.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContactLabel {
    Transversal,
    SimpleTangent,
    TangentOfOrder(u64),
}

impl ContactLabel {
    pub fn from_order(m: u64) -> Self {
        match m {
            0 => unreachable!("contact records have positive order"),
            1 => ContactLabel::Transversal,
            2 => ContactLabel::SimpleTangent,
            r => ContactLabel::TangentOfOrder(r),
        }
    }
}

/// One contact point of a pair of curves.
#[derive(Debug, Clone)]
pub struct ContactRecord {
    pub point: ClosedPoint,
    pub order: u64,
    pub label: ContactLabel,
}

impl ContactRecord {
    pub fn is_even(&self) -> bool {
        self.order % 2 == 0
    }
}

/// Full contact classification of a pair of smooth curves.
#[derive(Debug, Clone)]
pub struct TangencyReport {
    pub records: Vec<ContactRecord>,
    /// Σ order · residue degree = product of the degrees.
    pub total: u64,
    pub all_even: bool,
    pub provenance: Provenance,
}

/// Classify every contact point of two smooth curves without a common
/// component. Orders are reported per closed point; multiplying by the
/// residue degree recovers the geometric count.
pub fn classify_tangency(b: &PlaneCurve, c: &PlaneCurve, seed: u64) -> Result<TangencyReport> {
    gate_smooth(b, c)?;
    let i = intersect_curves(b, c, seed)?;
    let records: Vec<ContactRecord> = i
        .points
        .into_iter()
        .map(|(point, order)| ContactRecord {
            label: ContactLabel::from_order(order),
            point,
            order,
        })
        .collect();
    let all_even = records.iter().all(|r| r.is_even());
    Ok(TangencyReport {
        records,
        total: i.total,
        all_even,
        provenance: i.provenance,
    })
}

fn gate_smooth(b: &PlaneCurve, c: &PlaneCurve) -> Result<()> {
    if !b.is_smooth()?.smooth {
        return Err(Error::BNotSmooth);
    }
    if !c.is_smooth()?.smooth {
        return Err(Error::CNotSmooth);
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Exists,
    NotExists,
}

/// Certificate for the even-contact criterion on a pair (B, C) with
/// deg B = 2s and deg C = s. When every contact order is even the double
/// plane branched over B carries a line bundle with the stated invariants,
/// and the certificate carries their exact values.
#[derive(Debug, Clone)]
pub struct UlrichCertificate {
    pub s: u32,
    pub verdict: Verdict,
    /// Half the contact cycle degree, Σ (order/2) · residue degree.
    /// Equals s² whenever the verdict is Exists.
    pub d_sigma_d: Option<u64>,
    /// (s − 1)(s − 2)/2, the genus of the halved divisor's curve class.
    pub genus_d: Option<u64>,
    /// The bundle never comes alone; its partner corresponds to the
    /// conjugate half of the pulled-back cycle.
    pub pair_note: bool,
    /// True when every contact order is exactly 2.
    pub divisor_reduced: Option<bool>,
    pub report: TangencyReport,
}

/// Decide the even-contact criterion. B must have degree 2s, C degree s,
/// both smooth. Exists means every intersection point of B and C has even
/// contact order; the derived invariants are then hard-asserted, never
/// approximated.
pub fn ulrich_criterion(b: &PlaneCurve, c: &PlaneCurve, seed: u64) -> Result<UlrichCertificate> {
    let deg_b = b.degree();
    let deg_c = c.degree();
    if deg_b != 2 * deg_c {
        return Err(Error::DegreeMismatch {
            deg_b: deg_b as u64,
            deg_c: deg_c as u64,
        });
    }
    let s = deg_c;
    let report = classify_tangency(b, c, seed)?;
    if !report.all_even {
        return Ok(UlrichCertificate {
            s,
            verdict: Verdict::NotExists,
            d_sigma_d: None,
            genus_d: None,
            pair_note: true,
            divisor_reduced: None,
            report,
        });
    }
    let d_sigma_d: u64 = report
        .records
        .iter()
        .map(|r| (r.order / 2) * r.point.degree as u64)
        .sum();
    internal_check!(
        d_sigma_d == (s as u64) * (s as u64),
        "half of an even contact cycle of a (2s, s) pair has degree s^2"
    );
    internal_check!(
        report.total == 2 * (s as u64) * (s as u64),
        "contact total must be 2 s^2"
    );
    let genus_d = genus_of_halved_class(s);
    let divisor_reduced = report.records.iter().all(|r| r.order == 2);
    Ok(UlrichCertificate {
        s,
        verdict: Verdict::Exists,
        d_sigma_d: Some(d_sigma_d),
        genus_d: Some(genus_d),
        pair_note: true,
        divisor_reduced: Some(divisor_reduced),
        report,
    })
}

/// (s − 1)(s − 2)/2.
pub fn genus_of_halved_class(s: u32) -> u64 {
    let s = s as u64;
    (s - 1).saturating_mul(s.saturating_sub(2)) / 2
}

/// Membership of C in the family of degree-s curves everywhere evenly
/// tangent to B: true exactly when the criterion verdict is Exists.
pub fn is_everywhere_evenly_tangent(
    b: &PlaneCurve,
    c: &PlaneCurve,
    seed: u64,
) -> Result<bool> {
    Ok(ulrich_criterion(b, c, seed)?.verdict == Verdict::Exists)
}

/// Parity certificate over the rationals. The verdict comes from the
/// multiplicity strata of the intersection cycle, which are sampled in
/// independent coordinate frames rather than certified point by point, so
/// the certificate is flagged Monte Carlo. Rational contact points and
/// their multiplicities are exact.
#[derive(Debug, Clone)]
pub struct ParityCertificate {
    pub s: u32,
    pub verdict: Verdict,
    pub d_sigma_d: Option<u64>,
    pub genus_d: Option<u64>,
    pub strata: Vec<(u64, u64)>,
    pub rational_contacts: Vec<(ClosedPoint, u64)>,
    pub monte_carlo: bool,
    pub provenance: Provenance,
}

/// The even-contact criterion over the rationals, in parity-strata mode.
pub fn parity_criterion(b: &PlaneCurve, c: &PlaneCurve, seed: u64) -> Result<ParityCertificate> {
    let deg_b = b.degree();
    let deg_c = c.degree();
    if deg_b != 2 * deg_c {
        return Err(Error::DegreeMismatch {
            deg_b: deg_b as u64,
            deg_c: deg_c as u64,
        });
    }
    let s = deg_c;
    gate_smooth(b, c)?;
    let i = intersect_curves_q(b, c, seed)?;
    let all_even = i.strata.iter().all(|(e, _)| e % 2 == 0)
        && i.rational_points.iter().all(|(_, m)| m % 2 == 0);
    let (verdict, d_sigma_d, genus_d) = if all_even {
        let half: u64 = i.strata.iter().map(|(e, d)| (e / 2) * d).sum();
        internal_check!(
            half == (s as u64) * (s as u64),
            "half of an even contact cycle has degree s^2"
        );
        (
            Verdict::Exists,
            Some(half),
            Some(genus_of_halved_class(s)),
        )
    } else {
        (Verdict::NotExists, None, None)
    };
    Ok(ParityCertificate {
        s,
        verdict,
        d_sigma_d,
        genus_d,
        strata: i.strata,
        rational_contacts: i.rational_points,
        monte_carlo: i.monte_carlo,
        provenance: i.provenance,
    })
}
