use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dlcodes::bundle_codes::{
    build_code_2a4_proxy_with, build_code_a2_with, check_hypotheses, CodeSpec, HypothesisPolicy,
    RankTwoBundleSpec,
};
use dlcodes::code::LinearCode;
use dlcodes::dl_surfaces::{
    a2_points, divisor_data_from_count, surface_point_count, z_points, FamilyTag, SurfaceFamily,
};
use dlcodes::mindist::{self, WeightReport};
use dlcodes::params::{
    corollary_2a4_params, corollary_a2_params, corollary_a2_params_for, general_bound,
    twisted_a4_dimension, BoundInputs, ParamError, ParamReport, Provenance, Tagged, REPORT_SCHEMA,
};
use dlcodes::projgeom::{enumerate_projective, points_to_text};
use dlcodes::rr_spaces::LineBundleA2;
use dlcodes::Field;

#[derive(Parser)]
#[command(name = "dlcodes", version, about = "Codes from rank-two bundles on Deligne-Lusztig surfaces")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the parameter report (n, k, d lower bound) as JSON.
    Params(ParamsArgs),
    /// Enumerate rational points and print counts as JSON.
    Enumerate(EnumerateArgs),
    /// Build a generator matrix and its column-label sidecar.
    Build(BuildArgs),
    /// Rank and minimum weight of a matrix file.
    Analyze(AnalyzeArgs),
    /// Check the two worked examples end to end.
    VerifyExamples(VerifyArgs),
}

#[derive(Args, Clone)]
struct BundleArgs {
    #[arg(long)]
    family: FamilyTag,
    #[arg(long)]
    q: u64,
    #[arg(long)]
    b: u32,
    /// A2: degrees of the two summands, e.g. `3,3`.
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<u32>>,
    /// A2: multiplicity rows separated by `;`, e.g. `1,1,1;1,1,1`.
    #[arg(long)]
    m: Option<String>,
    /// A2: point indices receiving the multiplicities (default: the first ones).
    #[arg(long = "at", value_delimiter = ',')]
    at: Option<Vec<usize>>,
    /// 2A4: degrees t1,t2.
    #[arg(long, value_delimiter = ',')]
    t: Option<Vec<u32>>,
}

#[derive(Args)]
struct ParamsArgs {
    #[command(flatten)]
    bundle: BundleArgs,
    #[arg(long, default_value_t = 0)]
    a: u32,
    #[arg(long = "c1-w1", default_value_t = 0, allow_hyphen_values = true)]
    c1_w1: i64,
    #[arg(long = "dj-di", allow_hyphen_values = true)]
    dj_di: Option<i64>,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    family: FamilyTag,
    #[arg(long)]
    q: u64,
    /// Write the point file (base points of the plane, or points of Z).
    #[arg(long)]
    points_out: Option<PathBuf>,
    /// A2 only: write one `base;line` label per surface point.
    #[arg(long)]
    surface_out: Option<PathBuf>,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    bundle: BundleArgs,
    #[arg(long)]
    out: PathBuf,
    /// Label sidecar path (default: `<out>.labels`).
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Build even when the hypotheses fail; failures are recorded in the summary.
    #[arg(long)]
    allow_hypothesis_failure: bool,
}

#[derive(Copy, Clone, ValueEnum)]
enum MethodArg {
    Auto,
    Exhaustive,
    Sampled,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    labels: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    bound: Option<i128>,
    /// Include the full weight distribution (exhaustive only).
    #[arg(long)]
    distribution: bool,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    /// Maximum number of codewords to enumerate.
    #[arg(long, env = mindist::BUDGET_ENV, default_value_t = mindist::DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long, default_value_t = mindist::DEFAULT_TRIALS)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 2)]
    q: u64,
    #[arg(long, env = mindist::BUDGET_ENV, default_value_t = mindist::DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long, default_value_t = 2000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Skip the proxy construction for the second example.
    #[arg(long)]
    skip_proxy: bool,
}

/// Exit code 2: bad input or I/O. Exit code 1: a checked claim failed.
struct Failure {
    code: u8,
    msg: String,
}

fn bad<E: std::fmt::Display>(e: E) -> Failure {
    Failure { code: 2, msg: e.to_string() }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Params(a) => cmd_params(a),
        Cmd::Enumerate(a) => cmd_enumerate(a),
        Cmd::Build(a) => cmd_build(a),
        Cmd::Analyze(a) => cmd_analyze(a),
        Cmd::VerifyExamples(a) => cmd_verify(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.msg.is_empty() {
                eprintln!("error: {}", f.msg);
            }
            ExitCode::from(f.code)
        }
    }
}

fn print_json<T: serde::Serialize>(v: &T) -> CmdResult {
    let s = serde_json::to_string_pretty(v).map_err(bad)?;
    match writeln!(std::io::stdout().lock(), "{s}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(bad(e)),
        _ => Ok(()),
    }
}

fn write_file(path: &Path, text: &str) -> CmdResult {
    fs::write(path, text).map_err(|e| bad(format!("{}: {e}", path.display())))
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))
}

fn parse_rows(text: &str) -> Result<Vec<Vec<u32>>, Failure> {
    text.split(';')
        .map(|row| {
            row.split(',')
                .filter(|c| !c.trim().is_empty())
                .map(|c| c.trim().parse::<u32>().map_err(|_| bad(format!("bad multiplicity {c:?}"))))
                .collect()
        })
        .collect()
}

fn a2_spec(args: &BundleArgs) -> Result<CodeSpec, Failure> {
    let n = args.n.as_ref().ok_or_else(|| bad("A2 bundles need --n"))?;
    if n.len() != 2 {
        return Err(bad("--n takes two degrees"));
    }
    let rows = match &args.m {
        Some(m) => parse_rows(m)?,
        None => vec![Vec::new(), Vec::new()],
    };
    if rows.len() != 2 {
        return Err(bad("--m takes two rows separated by ';'"));
    }
    let q = args.q;
    let (v1, v2, labels) = match &args.at {
        Some(at) => {
            if rows.iter().any(|r| r.len() > at.len()) {
                return Err(bad("--m has more entries than --at lists points"));
            }
            (
                LineBundleA2::at_points(q, n[0], at, &rows[0]).map_err(bad)?,
                LineBundleA2::at_points(q, n[1], at, &rows[1]).map_err(bad)?,
                at.clone(),
            )
        }
        None => (
            LineBundleA2::with_leading(q, n[0], &rows[0]).map_err(bad)?,
            LineBundleA2::with_leading(q, n[1], &rows[1]).map_err(bad)?,
            Vec::new(),
        ),
    };
    let bundle = RankTwoBundleSpec::a2(q, v1, v2).map_err(bad)?.with_labels(labels);
    Ok(CodeSpec::new(bundle, args.b))
}

fn a4_spec(args: &BundleArgs) -> Result<CodeSpec, Failure> {
    let t = args.t.as_ref().ok_or_else(|| bad("2A4 bundles need --t"))?;
    if t.len() != 2 {
        return Err(bad("--t takes two degrees"));
    }
    let bundle = RankTwoBundleSpec::twisted_a4(args.q, t[0], t[1]).map_err(bad)?;
    Ok(CodeSpec::new(bundle, args.b))
}

fn cmd_params(args: ParamsArgs) -> CmdResult {
    let bundle = &args.bundle;
    let report: ParamReport = match bundle.family {
        FamilyTag::A2 if bundle.n.is_some() => corollary_a2_params_for(&a2_spec(bundle)?).map_err(bad)?,
        FamilyTag::TwistedA4 if bundle.t.is_some() => {
            let spec = a4_spec(bundle)?;
            let t = bundle.t.as_ref().unwrap();
            match corollary_2a4_params(bundle.q, bundle.b, t[0], t[1]) {
                Ok(r) => r,
                Err(ParamError::HypothesisViolation(_)) => {
                    let mut r = general_bound(&BoundInputs::new(FamilyTag::TwistedA4, bundle.q, bundle.b))
                        .map_err(bad)?;
                    r.k = Tagged::flagged(
                        twisted_a4_dimension(bundle.q, bundle.b, t[0], t[1]),
                        Provenance::ClosedForm,
                        "formula unverified",
                    );
                    r.hypotheses = check_hypotheses(&spec).checks;
                    r
                }
                Err(e) => return Err(bad(e)),
            }
        }
        family => {
            let mut inputs = BoundInputs::new(family, bundle.q, bundle.b);
            inputs.a = args.a;
            inputs.c1_w1 = args.c1_w1;
            inputs.dj_dot_di = args.dj_di;
            general_bound(&inputs).map_err(bad)?
        }
    };
    print_json(&report)
}

fn cmd_enumerate(args: EnumerateArgs) -> CmdResult {
    let fam = SurfaceFamily::new(args.family, args.q).map_err(bad)?;
    let field = fam.eval_field().map_err(bad)?;
    let count = surface_point_count(&fam).map_err(bad)?;
    let divisors = divisor_data_from_count(&fam, count).map_err(bad)?;
    let prov: Provenance = count.provenance.into();

    let (points, kind) = if args.family == FamilyTag::A2 {
        (enumerate_projective(2, &field).map_err(bad)?, "plane")
    } else {
        (z_points(&fam).map_err(bad)?, "z")
    };
    if let Some(path) = &args.points_out {
        write_file(path, &points_to_text(&field, &points))?;
    }
    let mut summary = json!({
        "schema": REPORT_SCHEMA,
        "report": "enumerate",
        "family": args.family.to_string(),
        "q": args.q,
        "field": field.descriptor(),
        "point_set": kind,
        "base_points": Tagged::known(points.len() as i128, Provenance::Constructed),
        "surface_points": Tagged::known(count.value as i128, prov),
        "components": Tagged::known(divisors.b_component_count as i128, prov),
        "points_per_component": Tagged::known(divisors.points_per_component as i128, Provenance::ClosedForm),
    });
    if args.family == FamilyTag::A2 {
        let surface = a2_points(args.q, &field).map_err(bad)?;
        summary["surface_points_enumerated"] = json!(Tagged::known(surface.len() as i128, Provenance::Constructed));
        if let Some(path) = &args.surface_out {
            let text: String = surface.iter().map(|p| p.label(&field) + "\n").collect();
            write_file(path, &text)?;
        }
    } else if args.surface_out.is_some() {
        return Err(bad("--surface-out is only available for A2"));
    }
    print_json(&summary)
}

fn cmd_build(args: BuildArgs) -> CmdResult {
    let policy = if args.allow_hypothesis_failure { HypothesisPolicy::Record } else { HypothesisPolicy::Enforce };
    let bundle = &args.bundle;
    let fam = SurfaceFamily::new(bundle.family, bundle.q).map_err(bad)?;
    let field = fam.eval_field().map_err(bad)?;
    let mut extra = serde_json::Map::new();
    let code = match bundle.family {
        FamilyTag::A2 => build_code_a2_with(&a2_spec(bundle)?, &field, policy).map_err(bad)?,
        FamilyTag::TwistedA4 => {
            let proxy = build_code_2a4_proxy_with(&a4_spec(bundle)?, &field, policy).map_err(bad)?;
            extra.insert("z_points".into(), json!(Tagged::known(proxy.z_point_count as i128, Provenance::Constructed)));
            extra.insert(
                "candidate_rows".into(),
                json!(Tagged::known(proxy.candidate_rows as i128, Provenance::Constructed)),
            );
            proxy.code
        }
        other => return Err(bad(format!("no code construction for family {other}"))),
    };
    let labels_path = args.labels.clone().unwrap_or_else(|| {
        let mut p = args.out.clone().into_os_string();
        p.push(".labels");
        PathBuf::from(p)
    });
    write_file(&args.out, &code.matrix_to_text())?;
    write_file(&labels_path, &code.labels_to_text())?;
    let mut summary = json!({
        "schema": REPORT_SCHEMA,
        "report": "build",
        "family": bundle.family.to_string(),
        "q": bundle.q,
        "b": bundle.b,
        "field": field.descriptor(),
        "n": Tagged::known(code.n() as i128, Provenance::Constructed),
        "k": Tagged::known(code.k() as i128, Provenance::Constructed),
        "matrix": args.out.display().to_string(),
        "labels": labels_path.display().to_string(),
        "provenance": code.provenance,
    });
    summary.as_object_mut().unwrap().extend(extra);
    print_json(&summary)
}

fn analyze_code(code: &LinearCode, args: &AnalyzeArgs) -> Result<WeightReport, Failure> {
    let exhaustive = match args.method {
        MethodArg::Exhaustive => true,
        MethodArg::Sampled => false,
        MethodArg::Auto => {
            mindist::projective_message_count(code.field().q() as u64, code.k()) <= args.budget as u128
        }
    };
    if args.distribution && !exhaustive {
        return Err(bad("--distribution needs exhaustive enumeration (raise --budget)"));
    }
    let report = if exhaustive {
        mindist::exact_min_distance(code, args.budget, args.distribution)
    } else {
        mindist::sampled_min_weight(code, args.trials, args.seed)
    }
    .map_err(bad)?;
    Ok(match args.bound {
        Some(b) => report.with_bound(b),
        None => report,
    })
}

fn cmd_analyze(args: AnalyzeArgs) -> CmdResult {
    let text = read_file(&args.matrix)?;
    let mut code = LinearCode::parse_matrix(&text)
        .map_err(|e| bad(format!("{}: {e}", args.matrix.display())))?;
    if let Some(path) = &args.labels {
        code = code
            .with_labels_text(&read_file(path)?)
            .map_err(|e| bad(format!("{}: {e}", path.display())))?;
    }
    let report = analyze_code(&code, &args)?;
    print_json(&report)?;
    match report.verified_bound {
        Some(b) if !b.passed => Err(Failure {
            code: 1,
            msg: format!("minimum weight {} is below the bound {}", report.min_weight, b.bound),
        }),
        _ => Ok(()),
    }
}

struct Claims(Vec<Value>);

impl Claims {
    fn push(&mut self, name: &str, expected: Value, observed: Value, status: &str, detail: String) {
        eprintln!("{:<8} {name}: {detail}", status.to_uppercase());
        self.0.push(json!({
            "name": name,
            "expected": expected,
            "observed": observed,
            "status": status,
            "detail": detail,
        }));
    }

    fn check(&mut self, name: &str, expected: Value, observed: Value, ok: bool, detail: String) {
        self.push(name, expected, observed, if ok { "pass" } else { "fail" }, detail);
    }

    fn failed(&self) -> usize {
        self.0.iter().filter(|c| c["status"] == "fail").count()
    }
}

fn cmd_verify(args: VerifyArgs) -> CmdResult {
    if args.q != 2 {
        return Err(bad("the worked examples are stated for q = 2"));
    }
    let q = args.q;
    let mut claims = Claims(Vec::new());

    // first example: A2, V1 = V2 = O(3H - B1 - B2 - B3), b = 1
    let ones = [1u32, 1, 1];
    let params = corollary_a2_params(q, 1, [3, 3], [&ones, &ones]).map_err(bad)?;
    let triple = [params.n_value(), params.k.value.unwrap_or(-1), params.d_value()];
    claims.check(
        "A2 formulas",
        json!([63, 14, 42]),
        json!(triple),
        triple == [63, 14, 42] && params.hypotheses_hold(),
        format!("(n, k, d_lower) = {triple:?}"),
    );
    let field = Field::canonical(2, 1).map_err(bad)?;
    let v = LineBundleA2::with_leading(q, 3, &ones).map_err(bad)?;
    let spec = CodeSpec::new(RankTwoBundleSpec::a2(q, v.clone(), v).map_err(bad)?, 1);
    match build_code_a2_with(&spec, &field, HypothesisPolicy::Enforce) {
        Ok(code) => {
            claims.check("A2 length", json!(63), json!(code.n()), code.n() == 63, format!("n = {}", code.n()));
            claims.check("A2 dimension", json!(14), json!(code.k()), code.k() == 14, format!("rank = {}", code.k()));
            let report = mindist::exact_min_distance(&code, args.budget, true).map_err(bad)?;
            let d = report.min_weight;
            let low: Vec<String> = report
                .distribution
                .as_ref()
                .map(|dist| dist.iter().filter(|(w, _)| **w > 0).take(4).map(|(w, c)| format!("{w}:{c}")).collect())
                .unwrap_or_default();
            claims.check(
                "A2 minimum distance",
                json!(">= 42"),
                json!(d),
                d >= 42,
                format!("exhaustive d = {d} over {} codewords; lowest weights {}", 1u64 << code.k(), low.join(" ")),
            );
        }
        Err(e) => claims.check("A2 construction", json!("code"), json!(e.to_string()), false, e.to_string()),
    }

    // second example: 2A4, t1 = t2 = 4, b = 2
    let params = corollary_2a4_params(q, 2, 4, 4).map_err(bad)?;
    let triple = [params.n_value(), params.k.value.unwrap_or(-1), params.d_value()];
    claims.check(
        "2A4 formulas",
        json!([7425, 1107, 4455]),
        json!(triple),
        triple == [7425, 1107, 4455],
        format!("(n, k, d_lower) = {triple:?}"),
    );
    if !args.skip_proxy {
        let field4 = Field::canonical(2, 2).map_err(bad)?;
        let spec = CodeSpec::new(RankTwoBundleSpec::twisted_a4(q, 4, 4).map_err(bad)?, 2);
        let proxy = build_code_2a4_proxy_with(&spec, &field4, HypothesisPolicy::Enforce).map_err(bad)?;
        claims.check(
            "2A4 proxy rank",
            json!("<= 1107"),
            json!(proxy.rank),
            proxy.rank <= 1107,
            format!(
                "rank {} of {} candidate rows on #Z(F4) = {} points, n = {}",
                proxy.rank,
                proxy.candidate_rows,
                proxy.z_point_count,
                proxy.code.n()
            ),
        );
        claims.push(
            "2A4 Z count",
            json!(1485),
            json!(proxy.z_point_count),
            "recorded",
            format!("#Z(F4) = {} against #S2 = {}", proxy.z_point_count, proxy.surface_point_count),
        );
        let sampled = mindist::sampled_min_weight(&proxy.code, args.trials, args.seed).map_err(bad)?;
        let analog = proxy.code.n() as i64 - proxy.z_point_count as i64 * 2;
        claims.push(
            "2A4 proxy sampled weight",
            json!(4455),
            json!(sampled.min_weight),
            "recorded",
            format!(
                "min weight {} over {} samples (seed {}); the bound 4455 exceeds the proxy length {}; n - #Z*b = {analog}",
                sampled.min_weight,
                args.trials,
                args.seed,
                proxy.code.n()
            ),
        );
    }

    let failed = claims.failed();
    print_json(&json!({
        "schema": REPORT_SCHEMA,
        "report": "verify-examples",
        "q": q,
        "claims": claims.0,
        "failed": failed,
    }))?;
    if failed > 0 {
        return Err(Failure { code: 1, msg: format!("{failed} claim(s) failed") });
    }
    Ok(())
}

