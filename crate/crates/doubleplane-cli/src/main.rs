//! Command-line front end for the doubleplane library.
//!
//! Subcommands wrap the library one-to-one, echo the request, and emit a
//! certificate as JSON (default) or text. Identical requests produce
//! byte-identical JSON up to the timings block. Exit codes: 0 success,
//! 2 bad input, 3 failed mathematical precondition, 4 internal assertion.

use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use doubleplane::algebra::{parse_field_spec, parse_form, parse_forms_file, FieldSpec, TriForm};
use doubleplane::construct::{
    fermat_pair, squared_construction, tangent_line_instance, Construction, InstanceBundle,
};
use doubleplane::cover::{split_exact_parametrized, split_monte_carlo, SplitMode, SplitOutcome};
use doubleplane::curve::{ClosedPoint, PlaneCurve, ProjPoint};
use doubleplane::error::ExitClass;
use doubleplane::hunt::{classify_families, enumerate_tangent_conics, HuntOptions};
use doubleplane::intersect::Provenance;
use doubleplane::ulrich::{
    classify_tangency, parity_criterion, ulrich_criterion, ContactLabel, ContactRecord,
    TangencyReport, UlrichCertificate, Verdict,
};
use doubleplane::Error;

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "doubleplane", version, about = "Even tangency of plane curves, double-cover splitting, and tangent-conic hunts, with exact certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify every contact point of C against B.
    CheckTangency(PairArgs),
    /// Decide the even-contact criterion and report the bundle invariants.
    VerifyUlrich(PairArgs),
    /// Produce a certified instance by one of the known constructions.
    Construct {
        #[command(subcommand)]
        kind: ConstructCmd,
    },
    /// Probe whether the double cover branched over B splits over C.
    SplitTest(SplitArgs),
    /// Exhaust smooth conics evenly tangent to a quartic and group them
    /// into linear-equivalence families.
    HuntConics(HuntArgs),
}

#[derive(clap::Args)]
struct PairArgs {
    /// Branch curve form, inline or @name from --forms.
    #[arg(long = "B", value_name = "FORM")]
    b: String,
    /// Section curve form, inline or @name from --forms.
    #[arg(long = "C", value_name = "FORM")]
    c: String,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(clap::Args)]
struct SplitArgs {
    #[arg(long = "B", value_name = "FORM")]
    b: String,
    #[arg(long = "C", value_name = "FORM")]
    c: String,
    /// exact needs deg C <= 2 and a rational point on C.
    #[arg(long, value_enum, default_value_t = ModeArg::MonteCarlo)]
    mode: ModeArg,
    /// Sample count for monte-carlo mode.
    #[arg(long = "n", value_name = "N", default_value_t = 40)]
    samples: u64,
    /// Keep samples whose residue field has even degree over the base.
    #[arg(long)]
    include_even_degree: bool,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(clap::Args)]
struct HuntArgs {
    /// Quartic branch curve form.
    #[arg(long = "B", value_name = "FORM")]
    b: String,
    /// Lift the field-size guard on the exhaustive enumeration.
    #[arg(long)]
    allow_large_field: bool,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Fermat pair x^2s - y^2s - z^2s, x^s - y^s - z^s for even s.
    Fermat {
        #[arg(long = "s", value_name = "S")]
        s: u32,
        /// Insist that all contact points are rational (needs p = 1 mod s).
        #[arg(long)]
        require_rational_points: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Branch curve Q^2 - F_C * H over a given smooth C.
    Squared {
        #[arg(long = "C", value_name = "FORM")]
        c: String,
        #[arg(long, value_name = "N", default_value_t = 50)]
        max_tries: u64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// A smooth conic with its tangent line at a rational point.
    TangentLine {
        #[arg(long = "B", value_name = "FORM")]
        b: String,
        /// Point on the conic, as colon-separated integers "1:0:0".
        #[arg(long, value_name = "P")]
        point: String,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(clap::Args)]
struct CommonArgs {
    /// Field: Q, F<p>, or F<p>^<k>.
    #[arg(long, value_name = "SPEC")]
    field: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// File of named forms, one "name = form" per line, for @name inputs.
    #[arg(long, value_name = "FILE")]
    forms: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    MonteCarlo,
}

#[derive(Serialize, Clone)]
struct RequestEcho {
    subcommand: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    b: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    c: Option<String>,
    field: String,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    s: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    point: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_tries: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    require_rational_points: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    include_even_degree: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    allow_large_field: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    forms: Option<String>,
    format: String,
}

impl RequestEcho {
    fn new(subcommand: &str, common: &CommonArgs) -> Self {
        RequestEcho {
            subcommand: subcommand.to_string(),
            b: None,
            c: None,
            field: common.field.clone(),
            seed: common.seed,
            s: None,
            point: None,
            mode: None,
            samples: None,
            max_tries: None,
            require_rational_points: None,
            include_even_degree: None,
            allow_large_field: None,
            forms: common.forms.clone(),
            format: match common.format {
                Format::Json => "json".to_string(),
                Format::Text => "text".to_string(),
            },
        }
    }
}

#[derive(Serialize)]
struct FieldInfo {
    spec: String,
    characteristic: u64,
    degree: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    modulus: Option<String>,
}

impl FieldInfo {
    fn of(field: &FieldSpec) -> Self {
        FieldInfo {
            spec: field.render_spec(),
            characteristic: field.characteristic(),
            degree: field.extension_degree(),
            modulus: field.render_modulus(),
        }
    }
}

#[derive(Serialize)]
struct ProvenanceInfo {
    seed: u64,
    coord_changes: u32,
    extensions: Vec<String>,
}

impl ProvenanceInfo {
    fn of(p: &Provenance) -> Self {
        ProvenanceInfo {
            seed: p.seed,
            coord_changes: p.coord_changes,
            extensions: p.extensions.clone(),
        }
    }
    fn bare(seed: u64) -> Self {
        ProvenanceInfo {
            seed,
            coord_changes: 0,
            extensions: Vec::new(),
        }
    }
}

#[derive(Serialize)]
struct Timings {
    total_ms: u64,
}

#[derive(Serialize)]
struct ErrorInfo {
    code: &'static str,
    class: &'static str,
    message: String,
}

#[derive(Serialize)]
struct Document {
    schema_version: u32,
    tool_version: &'static str,
    request: RequestEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    field: Option<FieldInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<Payload>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<ErrorInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    provenance: Option<ProvenanceInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timings: Option<Timings>,
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum Payload {
    Tangency(TangencyJson),
    Ulrich(UlrichJson),
    Parity(ParityJson),
    Split(SplitJson),
    Instance(InstanceJson),
    Hunt(HuntJson),
}

#[derive(Serialize)]
struct ContactJson {
    point: String,
    degree: u32,
    order: u64,
    label: String,
}

impl ContactJson {
    fn of(r: &ContactRecord) -> Self {
        let label = match r.label {
            ContactLabel::Transversal => "transversal".to_string(),
            ContactLabel::SimpleTangent => "simple-tangent".to_string(),
            ContactLabel::TangentOfOrder(m) => format!("tangent-of-order-{m}"),
        };
        ContactJson {
            point: r.point.render(),
            degree: r.point.degree,
            order: r.order,
            label,
        }
    }
}

#[derive(Serialize)]
struct TangencyJson {
    records: Vec<ContactJson>,
    total: u64,
    all_even: bool,
}

impl TangencyJson {
    fn of(t: &TangencyReport) -> Self {
        TangencyJson {
            records: t.records.iter().map(ContactJson::of).collect(),
            total: t.total,
            all_even: t.all_even,
        }
    }
}

#[derive(Serialize)]
struct UlrichJson {
    s: u32,
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    d_sigma_d: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    genus_d: Option<u64>,
    pair_note: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    divisor_reduced: Option<bool>,
    tangency: TangencyJson,
}

impl UlrichJson {
    fn of(c: &UlrichCertificate) -> Self {
        UlrichJson {
            s: c.s,
            verdict: verdict_str(c.verdict),
            d_sigma_d: c.d_sigma_d,
            genus_d: c.genus_d,
            pair_note: c.pair_note,
            divisor_reduced: c.divisor_reduced,
            tangency: TangencyJson::of(&c.report),
        }
    }
}

#[derive(Serialize)]
struct ParityJson {
    s: u32,
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    d_sigma_d: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    genus_d: Option<u64>,
    strata: Vec<(u64, u64)>,
    rational_contacts: Vec<PointMultJson>,
    monte_carlo: bool,
}

#[derive(Serialize)]
struct PointMultJson {
    point: String,
    degree: u32,
    multiplicity: u64,
}

impl PointMultJson {
    fn of(p: &ClosedPoint, m: u64) -> Self {
        PointMultJson {
            point: p.render(),
            degree: p.degree,
            multiplicity: m,
        }
    }
}

#[derive(Serialize)]
struct SplitJson {
    mode: &'static str,
    samples: u64,
    outcome: OutcomeJson,
}

#[derive(Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
enum OutcomeJson {
    RationalSplit {
        scale: String,
        scale_root: String,
        half: String,
    },
    SplitAfterQuadraticConstantTwist {
        nonsquare_constant: String,
        half: String,
    },
    NonSquareWitness {
        point: String,
        degree: u32,
        value: String,
    },
    AllSamplesSquare {
        samples: u64,
    },
    Inconclusive,
}

impl OutcomeJson {
    fn of(o: &SplitOutcome, base: &FieldSpec) -> Self {
        match o {
            SplitOutcome::RationalSplit {
                scale,
                scale_root,
                half,
            } => OutcomeJson::RationalSplit {
                scale: base.render(scale),
                scale_root: base.render(scale_root),
                half: half.render("t"),
            },
            SplitOutcome::SplitAfterQuadraticConstantTwist {
                nonsquare_constant,
                half,
            } => OutcomeJson::SplitAfterQuadraticConstantTwist {
                nonsquare_constant: base.render(nonsquare_constant),
                half: half.render("t"),
            },
            SplitOutcome::NonSquareWitness { point, value } => OutcomeJson::NonSquareWitness {
                point: point.render(),
                degree: point.degree,
                value: point.field.render(value),
            },
            SplitOutcome::AllSamplesSquare { samples } => OutcomeJson::AllSamplesSquare {
                samples: *samples,
            },
            SplitOutcome::Inconclusive => OutcomeJson::Inconclusive,
        }
    }
}

#[derive(Serialize)]
struct InstanceJson {
    s: u32,
    b: String,
    c: String,
    construction: ConstructionJson,
    certificate: UlrichJson,
    seed: u64,
}

#[derive(Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
enum ConstructionJson {
    Fermat { s: u32 },
    TangentLine { point: String },
    Squared { q: String, h: String, tries: u64 },
}

impl InstanceJson {
    fn of(bundle: &InstanceBundle) -> Self {
        let construction = match &bundle.construction {
            Construction::Fermat { s } => ConstructionJson::Fermat { s: *s },
            Construction::TangentLine { point } => ConstructionJson::TangentLine {
                point: point.render(),
            },
            Construction::Squared { q, h, tries } => ConstructionJson::Squared {
                q: q.render(),
                h: h.render(),
                tries: *tries,
            },
        };
        InstanceJson {
            s: bundle.certificate.s,
            b: bundle.b.form().render(),
            c: bundle.c.form().render(),
            construction,
            certificate: UlrichJson::of(&bundle.certificate),
            seed: bundle.seed,
        }
    }
}

#[derive(Serialize)]
struct HuntJson {
    conics: usize,
    count: usize,
    families: Vec<FamilyJson>,
}

#[derive(Serialize)]
struct FamilyJson {
    size: usize,
    members: Vec<MemberJson>,
}

#[derive(Serialize)]
struct MemberJson {
    conic: String,
    contacts: Vec<ContactJson>,
    half_divisor: Vec<PointMultJson>,
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Exists => "exists",
        Verdict::NotExists => "not-exists",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let (request, format, outcome) = dispatch(cli.command);
    match outcome {
        Ok((field, payload, provenance)) => {
            let doc = Document {
                schema_version: SCHEMA_VERSION,
                tool_version: env!("CARGO_PKG_VERSION"),
                request,
                field: Some(field),
                result: Some(payload),
                error: None,
                provenance,
                timings: Some(Timings {
                    total_ms: started.elapsed().as_millis() as u64,
                }),
            };
            match format {
                Format::Json => write_stdout(&serde_json::to_string_pretty(&doc).unwrap()),
                Format::Text => write_stdout(&render_text(&doc)),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let class = e.exit_class();
            let info = ErrorInfo {
                code: error_code(&e),
                class: match class {
                    ExitClass::Input => "input",
                    ExitClass::Precondition => "precondition",
                    ExitClass::Internal => "internal",
                },
                message: e.to_string(),
            };
            let doc = Document {
                schema_version: SCHEMA_VERSION,
                tool_version: env!("CARGO_PKG_VERSION"),
                request,
                field: None,
                result: None,
                error: Some(info),
                provenance: None,
                timings: None,
            };
            match format {
                Format::Json => write_stdout(&serde_json::to_string_pretty(&doc).unwrap()),
                Format::Text => {
                    use std::io::Write;
                    let _ = writeln!(std::io::stderr(), "error: {e}");
                }
            }
            ExitCode::from(match class {
                ExitClass::Input => 2u8,
                ExitClass::Precondition => 3u8,
                ExitClass::Internal => 4u8,
            })
        }
    }
}

/// Print a line, exiting quietly if the reader has gone away.
fn write_stdout(s: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if writeln!(out, "{s}").is_err() || out.flush().is_err() {
        std::process::exit(0);
    }
}

type Outcome = Result<(FieldInfo, Payload, Option<ProvenanceInfo>), Error>;

fn dispatch(command: Command) -> (RequestEcho, Format, Outcome) {
    match command {
        Command::CheckTangency(args) => {
            let mut req = RequestEcho::new("check-tangency", &args.common);
            req.b = Some(args.b.clone());
            req.c = Some(args.c.clone());
            let format = args.common.format;
            let out = run_check_tangency(&args);
            (req, format, out)
        }
        Command::VerifyUlrich(args) => {
            let mut req = RequestEcho::new("verify-ulrich", &args.common);
            req.b = Some(args.b.clone());
            req.c = Some(args.c.clone());
            let format = args.common.format;
            let out = run_verify_ulrich(&args);
            (req, format, out)
        }
        Command::SplitTest(args) => {
            let mut req = RequestEcho::new("split-test", &args.common);
            req.b = Some(args.b.clone());
            req.c = Some(args.c.clone());
            req.mode = Some(
                match args.mode {
                    ModeArg::Exact => "exact",
                    ModeArg::MonteCarlo => "monte-carlo",
                }
                .to_string(),
            );
            req.samples = Some(args.samples);
            if args.include_even_degree {
                req.include_even_degree = Some(true);
            }
            let format = args.common.format;
            let out = run_split_test(&args);
            (req, format, out)
        }
        Command::HuntConics(args) => {
            let mut req = RequestEcho::new("hunt-conics", &args.common);
            req.b = Some(args.b.clone());
            if args.allow_large_field {
                req.allow_large_field = Some(true);
            }
            let format = args.common.format;
            let out = run_hunt(&args);
            (req, format, out)
        }
        Command::Construct { kind } => match kind {
            ConstructCmd::Fermat {
                s,
                require_rational_points,
                common,
            } => {
                let mut req = RequestEcho::new("construct fermat", &common);
                req.s = Some(s);
                if require_rational_points {
                    req.require_rational_points = Some(true);
                }
                let format = common.format;
                let out = run_construct_fermat(s, require_rational_points, &common);
                (req, format, out)
            }
            ConstructCmd::Squared {
                c,
                max_tries,
                common,
            } => {
                let mut req = RequestEcho::new("construct squared", &common);
                req.c = Some(c.clone());
                req.max_tries = Some(max_tries);
                let format = common.format;
                let out = run_construct_squared(&c, max_tries, &common);
                (req, format, out)
            }
            ConstructCmd::TangentLine { b, point, common } => {
                let mut req = RequestEcho::new("construct tangent-line", &common);
                req.b = Some(b.clone());
                req.point = Some(point.clone());
                let format = common.format;
                let out = run_construct_tangent_line(&b, &point, &common);
                (req, format, out)
            }
        },
    }
}

fn load_forms(field: &FieldSpec, common: &CommonArgs) -> Result<Vec<(String, TriForm)>, Error> {
    let Some(path) = &common.forms else {
        return Ok(Vec::new());
    };
    let text = std::fs::read_to_string(path).map_err(|e| Error::Syntax {
        position: 0,
        message: format!("cannot read {path}: {e}"),
    })?;
    parse_forms_file(field, &text)
}

fn resolve_form(
    field: &FieldSpec,
    input: &str,
    named: &[(String, TriForm)],
) -> Result<TriForm, Error> {
    if let Some(name) = input.strip_prefix('@') {
        return named
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, f)| f.clone())
            .ok_or_else(|| Error::Syntax {
                position: 0,
                message: format!("no form named {name:?} (pass --forms FILE)"),
            });
    }
    parse_form(field, input)
}

fn curve_input(
    field: &FieldSpec,
    input: &str,
    named: &[(String, TriForm)],
) -> Result<PlaneCurve, Error> {
    PlaneCurve::new(resolve_form(field, input, named)?)
}

fn parse_point(field: &FieldSpec, input: &str) -> Result<ProjPoint, Error> {
    let trimmed = input
        .trim()
        .trim_start_matches('(')
        .trim_end_matches(')');
    let parts: Vec<&str> = trimmed.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Syntax {
            position: 0,
            message: format!("point {input:?} is not of the form a:b:c"),
        });
    }
    let mut coords = [0i64; 3];
    for (i, part) in parts.iter().enumerate() {
        coords[i] = part.trim().parse().map_err(|_| Error::Syntax {
            position: 0,
            message: format!("point coordinate {part:?} is not an integer"),
        })?;
    }
    if coords.iter().all(|&c| c == 0) {
        return Err(Error::Syntax {
            position: 0,
            message: "point coordinates are all zero".to_string(),
        });
    }
    Ok(ProjPoint::from_i64(field, coords))
}

fn run_check_tangency(args: &PairArgs) -> Outcome {
    let field = parse_field_spec(&args.common.field)?;
    let named = load_forms(&field, &args.common)?;
    let b = curve_input(&field, &args.b, &named)?;
    let c = curve_input(&field, &args.c, &named)?;
    let report = classify_tangency(&b, &c, args.common.seed)?;
    let prov = ProvenanceInfo::of(&report.provenance);
    Ok((
        FieldInfo::of(&field),
        Payload::Tangency(TangencyJson::of(&report)),
        Some(prov),
    ))
}

fn run_verify_ulrich(args: &PairArgs) -> Outcome {
    let field = parse_field_spec(&args.common.field)?;
    let named = load_forms(&field, &args.common)?;
    let b = curve_input(&field, &args.b, &named)?;
    let c = curve_input(&field, &args.c, &named)?;
    if field.is_finite() {
        let cert = ulrich_criterion(&b, &c, args.common.seed)?;
        let prov = ProvenanceInfo::of(&cert.report.provenance);
        Ok((
            FieldInfo::of(&field),
            Payload::Ulrich(UlrichJson::of(&cert)),
            Some(prov),
        ))
    } else {
        let cert = parity_criterion(&b, &c, args.common.seed)?;
        let prov = ProvenanceInfo::of(&cert.provenance);
        let payload = ParityJson {
            s: cert.s,
            verdict: verdict_str(cert.verdict),
            d_sigma_d: cert.d_sigma_d,
            genus_d: cert.genus_d,
            strata: cert.strata.clone(),
            rational_contacts: cert
                .rational_contacts
                .iter()
                .map(|(p, m)| PointMultJson::of(p, *m))
                .collect(),
            monte_carlo: cert.monte_carlo,
        };
        Ok((FieldInfo::of(&field), Payload::Parity(payload), Some(prov)))
    }
}

fn run_split_test(args: &SplitArgs) -> Outcome {
    let field = parse_field_spec(&args.common.field)?;
    let named = load_forms(&field, &args.common)?;
    let b = curve_input(&field, &args.b, &named)?;
    let c = curve_input(&field, &args.c, &named)?;
    let report = match args.mode {
        ModeArg::Exact => split_exact_parametrized(&b, &c, args.common.seed)?,
        ModeArg::MonteCarlo => split_monte_carlo(
            &b,
            &c,
            args.samples,
            args.common.seed,
            args.include_even_degree,
        )?,
    };
    let payload = SplitJson {
        mode: match report.mode {
            SplitMode::ExactParametrized => "exact-parametrized",
            SplitMode::MonteCarlo => "monte-carlo",
            SplitMode::LocalModel => "local-model",
        },
        samples: report.samples,
        outcome: OutcomeJson::of(&report.outcome, &field),
    };
    Ok((
        FieldInfo::of(&field),
        Payload::Split(payload),
        Some(ProvenanceInfo::bare(report.seed)),
    ))
}

fn run_hunt(args: &HuntArgs) -> Outcome {
    let field = parse_field_spec(&args.common.field)?;
    let named = load_forms(&field, &args.common)?;
    let b = curve_input(&field, &args.b, &named)?;
    let options = HuntOptions {
        allow_large_field: args.allow_large_field,
        seed: args.common.seed,
    };
    let records = enumerate_tangent_conics(&b, &options)?;
    let partition = classify_families(&records, &b, args.common.seed)?;
    let families = partition
        .families
        .iter()
        .map(|members| FamilyJson {
            size: members.len(),
            members: members
                .iter()
                .map(|r| MemberJson {
                    conic: r.conic.form().render(),
                    contacts: r.divisor.records.iter().map(ContactJson::of).collect(),
                    half_divisor: r
                        .half_divisor
                        .iter()
                        .map(|(p, m)| PointMultJson::of(p, *m))
                        .collect(),
                })
                .collect(),
        })
        .collect();
    let payload = HuntJson {
        conics: records.len(),
        count: partition.count,
        families,
    };
    Ok((
        FieldInfo::of(&field),
        Payload::Hunt(payload),
        Some(ProvenanceInfo::bare(args.common.seed)),
    ))
}

fn run_construct_fermat(s: u32, require_rational_points: bool, common: &CommonArgs) -> Outcome {
    let field = parse_field_spec(&common.field)?;
    let bundle = fermat_pair(s, &field, require_rational_points, common.seed)?;
    bundle_outcome(&field, &bundle)
}

fn run_construct_squared(c: &str, max_tries: u64, common: &CommonArgs) -> Outcome {
    let field = parse_field_spec(&common.field)?;
    let named = load_forms(&field, common)?;
    let c = curve_input(&field, c, &named)?;
    let bundle = squared_construction(&c, common.seed, max_tries)?;
    bundle_outcome(&field, &bundle)
}

fn run_construct_tangent_line(b: &str, point: &str, common: &CommonArgs) -> Outcome {
    let field = parse_field_spec(&common.field)?;
    let named = load_forms(&field, common)?;
    let b = curve_input(&field, b, &named)?;
    let p = parse_point(&field, point)?;
    let bundle = tangent_line_instance(&b, &p, common.seed)?;
    bundle_outcome(&field, &bundle)
}

fn bundle_outcome(field: &FieldSpec, bundle: &InstanceBundle) -> Outcome {
    let prov = ProvenanceInfo::of(&bundle.certificate.report.provenance);
    Ok((
        FieldInfo::of(field),
        Payload::Instance(InstanceJson::of(bundle)),
        Some(prov),
    ))
}

fn error_code(e: &Error) -> &'static str {
    use Error::*;
    match e {
        Syntax { .. } => "Syntax",
        Inhomogeneous(..) => "Inhomogeneous",
        ZeroPolynomial => "ZeroPolynomial",
        ConstantForm => "ConstantForm",
        CoefficientNotInField(..) => "CoefficientNotInField",
        BadFieldSpec(..) => "BadFieldSpec",
        NotPrime(..) => "NotPrime",
        NotIrreducible => "NotIrreducible",
        RationalsUnsupported => "RationalsUnsupported",
        FieldNotFinite => "FieldNotFinite",
        BothConstantInVariable => "BothConstantInVariable",
        CharacteristicDividesDegree { .. } => "CharacteristicDividesDegree",
        BadCharacteristic { .. } => "BadCharacteristic",
        NonReduced { .. } => "NonReduced",
        PointNotOnCurve => "PointNotOnCurve",
        SingularPoint => "SingularPoint",
        ExhaustedAttempts(..) => "ExhaustedAttempts",
        CommonComponent { .. } => "CommonComponent",
        GoodPositionFailed { .. } => "GoodPositionFailed",
        FieldTooSmall => "FieldTooSmall",
        BNotSmooth => "BNotSmooth",
        CNotSmooth => "CNotSmooth",
        DegreeMismatch { .. } => "DegreeMismatch",
        OddS(..) => "OddS",
        RootsOfUnityMissing { .. } => "RootsOfUnityMissing",
        NotAConic => "NotAConic",
        ExhaustedTries(..) => "ExhaustedTries",
        NoRationalPoint => "NoRationalPoint",
        ZeroSamplesPossible => "ZeroSamplesPossible",
        FieldTooLarge { .. } => "FieldTooLarge",
        TransitivityViolation { .. } => "TransitivityViolation",
        DifferentBranchCurves => "DifferentBranchCurves",
        Internal(..) => "Internal",
    }
}

fn render_text(doc: &Document) -> String {
    let mut out = String::new();
    let req = &doc.request;
    out.push_str(&format!("{} over {}\n", req.subcommand, req.field));
    let Some(result) = &doc.result else {
        return out;
    };
    match result {
        Payload::Tangency(t) => push_tangency_text(&mut out, t),
        Payload::Ulrich(u) => {
            out.push_str(&format!(
                "verdict: {}  (s = {}, d_sigma_d = {}, genus = {})\n",
                u.verdict,
                u.s,
                opt(u.d_sigma_d),
                opt(u.genus_d)
            ));
            push_tangency_text(&mut out, &u.tangency);
        }
        Payload::Parity(p) => {
            out.push_str(&format!(
                "verdict: {}  (s = {}, d_sigma_d = {}, genus = {}, monte carlo: {})\n",
                p.verdict,
                p.s,
                opt(p.d_sigma_d),
                opt(p.genus_d),
                p.monte_carlo
            ));
            let strata: Vec<String> = p
                .strata
                .iter()
                .map(|(e, d)| format!("order {e} x degree {d}"))
                .collect();
            out.push_str(&format!("strata: {}\n", strata.join(", ")));
            for c in &p.rational_contacts {
                out.push_str(&format!("  {}  multiplicity {}\n", c.point, c.multiplicity));
            }
        }
        Payload::Split(s) => {
            out.push_str(&format!("mode: {}\n", s.mode));
            let line = match &s.outcome {
                OutcomeJson::RationalSplit { half, .. } => {
                    format!("split over the base field, half = {half}")
                }
                OutcomeJson::SplitAfterQuadraticConstantTwist { half, .. } => {
                    format!("split after a quadratic constant twist, half = {half}")
                }
                OutcomeJson::NonSquareWitness { point, value, .. } => {
                    format!("does not split: nonsquare value {value} at {point}")
                }
                OutcomeJson::AllSamplesSquare { samples } => {
                    format!("all {samples} sampled branch values are squares")
                }
                OutcomeJson::Inconclusive => "inconclusive".to_string(),
            };
            out.push_str(&line);
            out.push('\n');
        }
        Payload::Instance(i) => {
            out.push_str(&format!("B = {}\nC = {}\n", i.b, i.c));
            out.push_str(&format!(
                "verdict: {}  (s = {}, d_sigma_d = {}, genus = {})\n",
                i.certificate.verdict,
                i.s,
                opt(i.certificate.d_sigma_d),
                opt(i.certificate.genus_d)
            ));
            push_tangency_text(&mut out, &i.certificate.tangency);
        }
        Payload::Hunt(h) => {
            out.push_str(&format!(
                "tangent conics: {}, families: {}\n",
                h.conics, h.count
            ));
            for (i, f) in h.families.iter().enumerate() {
                out.push_str(&format!("family {}: {} member(s)\n", i + 1, f.size));
                for m in &f.members {
                    out.push_str(&format!("  {}\n", m.conic));
                }
            }
        }
    }
    out.pop();
    out
}

fn push_tangency_text(out: &mut String, t: &TangencyJson) {
    out.push_str(&format!(
        "contacts: {}, total multiplicity {}, all even: {}\n",
        t.records.len(),
        t.total,
        if t.all_even { "yes" } else { "no" }
    ));
    for r in &t.records {
        out.push_str(&format!(
            "  {}  degree {}  order {}  {}\n",
            r.point, r.degree, r.order, r.label
        ));
    }
}

fn opt(v: Option<u64>) -> String {
    match v {
        Some(x) => x.to_string(),
        None => "-".to_string(),
    }
}
