use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::algebra::bipoly::{res_outer, BiPoly};
use crate::algebra::linalg;
use crate::algebra::triform::Var;
use crate::algebra::{FieldElement, FieldSpec, TriForm};
use crate::curve::{cmp_closed_points, ClosedPoint, PlaneCurve};
use crate::error::{internal_check, Error};
use crate::intersect::raw_points;
use crate::ulrich::{ulrich_criterion, TangencyReport, Verdict};
use crate::Result;

/// A smooth conic everywhere evenly tangent to the fixed quartic, together
/// with its contact divisor and the half-divisor that names its family.
#[derive(Debug, Clone)]
pub struct TangentConicRecord {
    pub conic: PlaneCurve,
    pub divisor: TangencyReport,
    pub half_divisor: Vec<(ClosedPoint, u64)>,
}

/// Tangent conics grouped by linear equivalence of their half-divisors.
#[derive(Debug, Clone)]
pub struct FamilyPartition {
    pub families: Vec<Vec<TangentConicRecord>>,
    pub count: usize,
}

#[derive(Debug, Clone)]
pub struct HuntOptions {
    pub allow_large_field: bool,
    pub seed: u64,
}

impl Default for HuntOptions {
    fn default() -> Self {
        HuntOptions {
            allow_large_field: false,
            seed: 0,
        }
    }
}

const ENUMERATION_MAX_Q: u64 = 31;

/// Monomial order used for conic coefficient vectors throughout this module.
const CONIC_EXPONENTS: [(u32, u32, u32); 6] = [
    (2, 0, 0),
    (1, 1, 0),
    (1, 0, 1),
    (0, 2, 0),
    (0, 1, 1),
    (0, 0, 2),
];

/// Every smooth conic everywhere evenly tangent to B, found by exhausting
/// all (q^6 - 1)/(q - 1) conics up to scalar. A candidate is kept only if
/// its full tangency certificate comes back all-even; the quick screen in
/// between is rigorous in the reject direction.
pub fn enumerate_tangent_conics(
    b: &PlaneCurve,
    options: &HuntOptions,
) -> Result<Vec<TangentConicRecord>> {
    let field = b.field.clone();
    if !field.is_finite() {
        return Err(Error::FieldNotFinite);
    }
    let p = field.characteristic();
    if p == 2 {
        return Err(Error::BadCharacteristic {
            p,
            reason: "conic smoothness is a rank condition only in odd characteristic".into(),
        });
    }
    if b.degree() != 4 {
        return Err(Error::DegreeMismatch {
            deg_b: b.degree() as u64,
            deg_c: 2,
        });
    }
    if !b.is_smooth()?.smooth {
        return Err(Error::BNotSmooth);
    }
    let q_big = field.order().unwrap();
    let q = match q_big.to_u64() {
        Some(q) if q <= ENUMERATION_MAX_Q || options.allow_large_field => q,
        Some(q) => {
            return Err(Error::FieldTooLarge {
                q,
                max: ENUMERATION_MAX_Q,
            })
        }
        None => {
            return Err(Error::FieldTooLarge {
                q: u64::MAX,
                max: ENUMERATION_MAX_Q,
            })
        }
    };
    let elems: Vec<FieldElement> = field.iter_elements().collect();
    internal_check!(elems.len() as u64 == q, "element enumeration must cover the field");

    // Screens in three coordinate charts; each needs the permuted B to miss
    // (0:0:1) (true in all charts for any smooth B meeting the degree gate
    // or not; checked per chart).
    let charts: Vec<ScreenChart> = [[0usize, 1, 2], [2, 1, 0], [0, 2, 1]]
        .iter()
        .map(|perm| {
            let pb = permute_form(b.form(), *perm);
            ScreenChart {
                perm: *perm,
                b_center_ok: !field.is_zero(&pb.coeff((0, 0, 4))),
                b_dehom: pb.dehomogenize(Var::Y),
            }
        })
        .collect();
    // Conic coefficient index whose nonvanishing puts the conic off the
    // center of each chart: z^2, x^2, y^2.
    let center_coeff_idx = [5usize, 0, 3];

    let total: u64 = (0..6u32).map(|lead| q.pow(5 - lead)).sum();
    let results: Vec<Option<TangentConicRecord>> = (0..total)
        .into_par_iter()
        .map(|idx| {
            let coeffs = decode_candidate(&field, &elems, q, idx);
            if !conic_is_smooth(&field, &coeffs) {
                return Ok(None);
            }
            let chart = charts.iter().enumerate().find(|(ci, ch)| {
                ch.b_center_ok && !field.is_zero(&coeffs[center_coeff_idx[*ci]])
            });
            let form = TriForm::from_terms(
                field.clone(),
                2,
                CONIC_EXPONENTS.iter().copied().zip(coeffs.iter().cloned()),
            );
            if let Some((_, ch)) = chart {
                let moved = permute_form(&form, ch.perm);
                let r = res_outer(&ch.b_dehom, &moved.dehomogenize(Var::Y))?;
                internal_check!(!r.is_zero(), "a smooth conic shares no component with B");
                if r.deg() == 8 && r.poly_sqrt()?.is_none() {
                    // Both curves miss the chart center and the resultant has
                    // full degree, so each of its root orders is the sum of
                    // the intersection multiplicities in that fiber. A
                    // non-square resultant therefore proves an odd contact.
                    return Ok(None);
                }
            }
            let seed = options.seed ^ idx.wrapping_mul(0x9e3779b97f4a7c15);
            tangent_conic_record(b, &PlaneCurve::new(form)?, seed)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(results.into_iter().flatten().collect())
}

struct ScreenChart {
    perm: [usize; 3],
    b_center_ok: bool,
    b_dehom: BiPoly,
}

/// Certify one conic against B. Returns None when the contact pattern is
/// not everywhere even.
pub fn tangent_conic_record(
    b: &PlaneCurve,
    conic: &PlaneCurve,
    seed: u64,
) -> Result<Option<TangentConicRecord>> {
    let cert = ulrich_criterion(b, conic, seed)?;
    if cert.verdict != Verdict::Exists {
        return Ok(None);
    }
    internal_check!(
        cert.d_sigma_d == Some(4),
        "a tangent conic re-certifies with half-divisor degree 4"
    );
    let half_divisor: Vec<(ClosedPoint, u64)> = cert
        .report
        .records
        .iter()
        .map(|r| (r.point.clone(), r.order / 2))
        .collect();
    Ok(Some(TangentConicRecord {
        conic: conic.clone(),
        divisor: cert.report,
        half_divisor,
    }))
}

fn decode_candidate(
    field: &FieldSpec,
    elems: &[FieldElement],
    q: u64,
    mut idx: u64,
) -> [FieldElement; 6] {
    let mut lead = 0usize;
    let mut block = q.pow(5);
    while idx >= block {
        idx -= block;
        lead += 1;
        block /= q;
    }
    let mut coeffs: [FieldElement; 6] = std::array::from_fn(|_| field.zero());
    coeffs[lead] = field.one();
    for pos in (lead + 1)..6 {
        let place = q.pow(5 - pos as u32);
        coeffs[pos] = elems[(idx / place) as usize].clone();
        idx %= place;
    }
    coeffs
}

/// Rank of the Gram matrix is 3 iff the conic is smooth (odd characteristic).
fn conic_is_smooth(field: &FieldSpec, c: &[FieldElement; 6]) -> bool {
    let two = field.from_i64(2);
    let m = [
        [field.mul(&two, &c[0]), c[1].clone(), c[2].clone()],
        [c[1].clone(), field.mul(&two, &c[3]), c[4].clone()],
        [c[2].clone(), c[4].clone(), field.mul(&two, &c[5])],
    ];
    let minor = |a: &FieldElement, b: &FieldElement, c2: &FieldElement, d: &FieldElement| {
        field.sub(&field.mul(a, d), &field.mul(b, c2))
    };
    let det = field.add(
        &field.sub(
            &field.mul(&m[0][0], &minor(&m[1][1], &m[1][2], &m[2][1], &m[2][2])),
            &field.mul(&m[0][1], &minor(&m[1][0], &m[1][2], &m[2][0], &m[2][2])),
        ),
        &field.mul(&m[0][2], &minor(&m[1][0], &m[1][1], &m[2][0], &m[2][1])),
    );
    !field.is_zero(&det)
}

fn permute_form(f: &TriForm, perm: [usize; 3]) -> TriForm {
    TriForm::from_terms(
        f.field.clone(),
        f.degree(),
        f.terms_desc().map(|(e, c)| {
            let old = [e.0, e.1, e.2];
            let mut ne = [0u32; 3];
            for i in 0..3 {
                ne[perm[i]] = old[i];
            }
            ((ne[0], ne[1], ne[2]), c.clone())
        }),
    )
}

/// Whether two tangent conics lie in one family: their half-divisors are
/// linearly equivalent on B iff some conic cuts exactly d1 + d2 on B, which
/// is a finite linear system. A found interpolant is re-verified point by
/// point, so a true answer is certified; a false answer rests on the kernel
/// being empty over the base field, which suffices because the conditions
/// are Galois-stable.
pub fn same_family(
    r1: &TangentConicRecord,
    r2: &TangentConicRecord,
    b: &PlaneCurve,
    seed: u64,
) -> Result<bool> {
    let field = b.field.clone();
    for r in [r1, r2] {
        for (pt, _) in &r.half_divisor {
            let on_b = pt.field.is_zero(&pt.eval_form(b.form()));
            let on_c = pt.field.is_zero(&pt.eval_form(r.conic.form()));
            if !on_b || !on_c {
                return Err(Error::DifferentBranchCurves);
            }
        }
    }
    let divisor = merge_divisors(&r1.half_divisor, &r2.half_divisor);
    let e = field.extension_degree() as usize;
    let p = field.characteristic();
    let fp = FieldSpec::prime(p)?;

    let mut rows: Vec<Vec<FieldElement>> = Vec::new();
    for (pt, m) in &divisor {
        let lf = pt.field.clone();
        let d = lf.extension_degree() as usize;
        let series = branch_series(b, pt, *m as usize)?;
        let mono: Vec<Vec<FieldElement>> = CONIC_EXPONENTS
            .iter()
            .map(|&(a, bb, c)| {
                series_mul(
                    &lf,
                    &series_mul(
                        &lf,
                        &series_pow(&lf, &series[0], a, *m as usize),
                        &series_pow(&lf, &series[1], bb, *m as usize),
                        *m as usize,
                    ),
                    &series_pow(&lf, &series[2], c, *m as usize),
                    *m as usize,
                )
            })
            .collect();
        for k in 0..*m as usize {
            for r in 0..d {
                let mut row = Vec::with_capacity(6 * e);
                for s in mono.iter() {
                    for i in 0..e {
                        let basis = base_basis_elem(&field, i);
                        let prod = lf.mul(&s[k], &pt.embedding.apply(&basis));
                        row.push(FieldElement::Fp(fp_coord(&prod, r)));
                    }
                }
                rows.push(row);
            }
        }
    }
    let kernel = linalg::kernel_basis(&fp, &rows, 6 * e);
    let Some(sol) = kernel.first() else {
        return Ok(false);
    };
    let mut terms = Vec::new();
    for (j, exps) in CONIC_EXPONENTS.iter().enumerate() {
        let coords: Vec<u64> = (0..e).map(|i| fp_coord(&sol[j * e + i], 0)).collect();
        terms.push((*exps, base_from_coords(&field, &coords)));
    }
    let interpolant = TriForm::from_terms(field.clone(), 2, terms);
    internal_check!(!interpolant.is_zero(), "kernel vectors are nonzero");
    let cut = raw_points(b.form(), &interpolant, seed)?;
    internal_check!(
        cut == divisor,
        "the interpolating conic must cut exactly d1 + d2 on B"
    );
    Ok(true)
}

fn merge_divisors(
    a: &[(ClosedPoint, u64)],
    b: &[(ClosedPoint, u64)],
) -> Vec<(ClosedPoint, u64)> {
    let mut all: Vec<(ClosedPoint, u64)> = a.iter().chain(b.iter()).cloned().collect();
    all.sort_by(|x, y| cmp_closed_points(&x.0, &y.0));
    let mut out: Vec<(ClosedPoint, u64)> = Vec::new();
    for (pt, m) in all {
        match out.last_mut() {
            Some(last) if last.0 == pt => last.1 += m,
            _ => out.push((pt, m)),
        }
    }
    out
}

/// Truncated power-series parametrization of B's branch at a smooth closed
/// point, as series for the three homogeneous coordinates in a local
/// parameter t. Length n, coefficients in the residue field.
fn branch_series(
    b: &PlaneCurve,
    pt: &ClosedPoint,
    n: usize,
) -> Result<[Vec<FieldElement>; 3]> {
    let lf = pt.field.clone();
    let bl = b.form().map_coeffs(&lf, |c| pt.embedding.apply(c));
    let coords = pt.point.coords();
    let chart = (0..3)
        .find(|&i| !lf.is_zero(&coords[i]))
        .expect("projective point has a nonzero coordinate");
    let (a1, a2) = match chart {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let vars = [Var::X, Var::Y, Var::Z];
    let part_at = |v: usize| bl.partial(vars[v]).eval(coords);
    let (dep, ind) = if !lf.is_zero(&part_at(a2)) {
        (a2, a1)
    } else {
        (a1, a2)
    };
    let fv = part_at(dep);
    internal_check!(
        !lf.is_zero(&fv),
        "B is smooth, so some affine partial at the point is nonzero"
    );
    let fv_inv = lf.inv(&fv).unwrap();

    let mut series: [Vec<FieldElement>; 3] = std::array::from_fn(|_| vec![lf.zero(); n.max(1)]);
    series[chart][0] = lf.one();
    series[ind][0] = coords[ind].clone();
    if n > 1 {
        series[ind][1] = lf.one();
    }
    series[dep][0] = coords[dep].clone();
    for k in 1..n {
        // f(series) vanishes mod t^k by induction; the t^k coefficient is
        // linear in the next dependent coefficient with slope fv.
        let g = compose_series(&lf, &bl, &series, k + 1);
        series[dep][k] = lf.mul(&lf.neg(&g[k]), &fv_inv);
    }
    let check = compose_series(&lf, &bl, &series, n.max(1));
    internal_check!(
        check.iter().all(|c| lf.is_zero(c)),
        "branch lifting must kill the curve equation to the working order"
    );
    Ok(series)
}

fn compose_series(
    lf: &FieldSpec,
    f: &TriForm,
    s: &[Vec<FieldElement>; 3],
    len: usize,
) -> Vec<FieldElement> {
    let mut acc = vec![lf.zero(); len];
    for ((a, b, c), coeff) in f.terms_desc() {
        let term = series_mul(
            lf,
            &series_mul(
                lf,
                &series_pow(lf, &s[0], a, len),
                &series_pow(lf, &s[1], b, len),
                len,
            ),
            &series_pow(lf, &s[2], c, len),
            len,
        );
        for (slot, v) in acc.iter_mut().zip(term.iter()) {
            *slot = lf.add(slot, &lf.mul(coeff, v));
        }
    }
    acc
}

fn series_mul(
    lf: &FieldSpec,
    a: &[FieldElement],
    b: &[FieldElement],
    len: usize,
) -> Vec<FieldElement> {
    let mut out = vec![lf.zero(); len];
    for (i, ai) in a.iter().enumerate().take(len) {
        if lf.is_zero(ai) {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(len - i) {
            out[i + j] = lf.add(&out[i + j], &lf.mul(ai, bj));
        }
    }
    out
}

fn series_pow(lf: &FieldSpec, s: &[FieldElement], e: u32, len: usize) -> Vec<FieldElement> {
    let mut out = vec![lf.zero(); len];
    out[0] = lf.one();
    for _ in 0..e {
        out = series_mul(lf, &out, s, len);
    }
    out
}

fn fp_coord(elem: &FieldElement, i: usize) -> u64 {
    match elem {
        FieldElement::Fp(x) => {
            if i == 0 {
                *x
            } else {
                0
            }
        }
        FieldElement::Ext(v) => v.get(i).copied().unwrap_or(0),
        FieldElement::Rat(_) => unreachable!("finite fields only"),
    }
}

fn base_basis_elem(field: &FieldSpec, i: usize) -> FieldElement {
    let e = field.extension_degree() as usize;
    if e == 1 {
        field.one()
    } else {
        let mut v = vec![0u64; e];
        v[i] = 1;
        FieldElement::Ext(v)
    }
}

fn base_from_coords(field: &FieldSpec, coords: &[u64]) -> FieldElement {
    if field.extension_degree() == 1 {
        FieldElement::Fp(coords[0])
    } else {
        FieldElement::Ext(coords.to_vec())
    }
}

/// Partition the records into families with a union-find over same_family,
/// testing each record against one representative per class. The relation
/// is audited for transitivity on sampled triples and on every record that
/// matches a representative (a second match would witness a violation).
pub fn classify_families(
    records: &[TangentConicRecord],
    b: &PlaneCurve,
    seed: u64,
) -> Result<FamilyPartition> {
    let n = records.len();
    let mut uf = UnionFind::new(n);
    let mut reps: Vec<usize> = Vec::new();
    for i in 0..n {
        let mut matched: Vec<usize> = Vec::new();
        for &r in &reps {
            let pair_seed = seed.wrapping_add(((i as u64) << 20) | r as u64);
            if same_family(&records[i], &records[r], b, pair_seed)? {
                matched.push(r);
            }
        }
        match matched.len() {
            0 => reps.push(i),
            1 => uf.union(i, matched[0]),
            _ => {
                return Err(Error::TransitivityViolation {
                    a: i,
                    b: matched[0],
                    c: matched[1],
                })
            }
        }
    }
    if n >= 3 {
        let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0xa0d17);
        for _ in 0..24 {
            let i = rng.random_range(0..n);
            let j = rng.random_range(0..n);
            let k = rng.random_range(0..n);
            if i == j || j == k || i == k {
                continue;
            }
            let ab = same_family(&records[i], &records[j], b, seed ^ 1)?;
            let bc = same_family(&records[j], &records[k], b, seed ^ 2)?;
            let ac = same_family(&records[i], &records[k], b, seed ^ 3)?;
            if (ab && bc && !ac) || (ab && ac && !bc) || (bc && ac && !ab) {
                return Err(Error::TransitivityViolation { a: i, b: j, c: k });
            }
        }
    }
    let mut fam_of: BTreeMap<usize, usize> = BTreeMap::new();
    let mut families: Vec<Vec<TangentConicRecord>> = Vec::new();
    for (i, rec) in records.iter().enumerate() {
        let root = uf.find(i);
        let fi = *fam_of.entry(root).or_insert_with(|| {
            families.push(Vec::new());
            families.len() - 1
        });
        families[fi].push(rec.clone());
    }
    let count = families.len();
    internal_check!(count <= 63, "a smooth quartic carries at most 63 families");
    Ok(FamilyPartition { families, count })
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}
