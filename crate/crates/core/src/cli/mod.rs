//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage, parse or domain
//! error, 3 internal oracle mismatch.

mod output;

pub use output::{CheckRecord, Degree, Document, Format, Meta};

use crate::cyclotomic::CycRing;
use crate::error::{Error, Result};
use crate::hikita::{circuits, hikita_match, kahler_relations, scalar_pcurvature, trace_relations, HypertoricData};
use crate::qdiff::{cohomological_expand, verify_main_theorem, verify_properties, zeta_field, Check, Normalizer, Status};
use crate::quasimap::{EquatorRule, Engine, Insertions, P2Twist, TargetSpec};
use crate::symbolic::{chi_oracle_refined, chi_projective, LaurentPoly, Mat};
use clap::{Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::{json, Map, Value};
use std::ffi::OsString;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_ORACLE: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TwistArg {
    Qd,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    PowerOperation,
    ChernRoot,
}

#[derive(Debug, Parser)]
#[command(name = "qadams", version, about = "Quantum Adams operators and p-curvature for T*P^{n-1}")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Framing rank: the target is T*P^{n-1}.
    #[arg(long, global = true, default_value_t = 2)]
    pub n: usize,
    /// Cyclic order; `q` is a primitive k-th root of unity after specialization.
    #[arg(long, global = true, default_value_t = 2)]
    pub k: u32,
    /// Truncation degree in z.
    #[arg(long = "deg", global = true, default_value_t = 2)]
    pub deg: u32,
    /// Laurent expression in x, h, a_i and q.
    #[arg(long, global = true, default_value = "x")]
    pub insertion: String,
    #[arg(long = "p2-twist", global = true, value_enum, default_value_t = TwistArg::Qd)]
    pub p2_twist: TwistArg,
    #[arg(long = "equator-rule", global = true, value_enum, default_value_t = RuleArg::PowerOperation)]
    pub equator_rule: RuleArg,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (0 uses every core).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// Seed for the randomized oracle checks.
    #[arg(long, global = true, env = "QK_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quantum Adams operator of the insertion at q = zeta_k.
    Adams,
    /// p-curvature of the Kähler shift at q = zeta_k.
    Pcurv,
    /// Kähler shift operator of L^power over Z[q]/(q^k - 1).
    Shift {
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        power: i32,
    },
    /// Main identity and operator properties, degree by degree.
    Verify {
        /// Skip additivity, iteration and constancy.
        #[arg(long)]
        theorem_only: bool,
    },
    /// Circuits and matched Kähler and trace relations of an abelian hypertoric pair.
    Hikita {
        /// `(a_1,...,a_n)` for a single column or `r_1;...;r_n` with comma-separated rows.
        #[arg(long, conflicts_with = "matrix_file")]
        matrix: Option<String>,
        /// File holding `n r` followed by the n*r entries row by row, or the inline syntax.
        #[arg(long)]
        matrix_file: Option<PathBuf>,
    },
    /// w-adic valuations of M_{L,zeta} - Id near a = h = 1 for prime k.
    Limit,
    /// Cross-check the pushforward against the independent fixed-point oracle.
    Oracle {
        /// Random classes compared per run.
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
}

/// Outcome of a run: the document and the exit code.
pub struct Outcome {
    pub document: Document,
    pub code: i32,
}

/// Parse arguments, run, emit, and return the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    let result = match rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs).build() {
        Ok(pool) => pool.install(|| run(&cfg)),
        Err(e) => Err(Error::Domain(format!("thread pool: {e}"))),
    };
    match result {
        Ok(out) => {
            for c in out.document.checks.iter().filter(|c| c.status == Status::Fail) {
                eprintln!("FAIL {} {}: {}", c.name, c.params, c.witness.as_deref().unwrap_or(""));
            }
            match emit(&cfg, &out.document) {
                Ok(()) => out.code,
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_USAGE
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::OracleMismatch(_) => EXIT_ORACLE,
        _ => EXIT_USAGE,
    }
}

fn emit(cfg: &RunConfig, doc: &Document) -> Result<()> {
    let text = doc.render(cfg.format);
    match &cfg.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Run one subcommand without emitting anything.
pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    match &cfg.command {
        Command::Adams => cmd_adams(cfg),
        Command::Pcurv => cmd_pcurv(cfg),
        Command::Shift { power } => cmd_shift(cfg, *power),
        Command::Verify { theorem_only } => cmd_verify(cfg, *theorem_only),
        Command::Hikita { matrix, matrix_file } => cmd_hikita(cfg, matrix.as_deref(), matrix_file.as_ref()),
        Command::Limit => cmd_limit(cfg),
        Command::Oracle { samples } => cmd_oracle(cfg, *samples),
    }
}

fn twist(cfg: &RunConfig) -> P2Twist {
    match cfg.p2_twist {
        TwistArg::Qd => P2Twist::Qd,
        TwistArg::None => P2Twist::None,
    }
}

fn rule(cfg: &RunConfig) -> EquatorRule {
    match cfg.equator_rule {
        RuleArg::PowerOperation => EquatorRule::PowerOperation,
        RuleArg::ChernRoot => EquatorRule::ChernRoot,
    }
}

fn engine(cfg: &RunConfig) -> Result<Engine> {
    Ok(Engine::full(TargetSpec::new(cfg.n, cfg.k)?).with_twist(twist(cfg)).with_rule(rule(cfg)))
}

fn meta(cfg: &RunConfig, command: &str, extra: &[(&str, Value)]) -> Meta {
    let mut toggles = Map::new();
    toggles.insert("p2_twist".into(), json!(twist(cfg).name()));
    toggles.insert("equator_rule".into(), json!(rule(cfg).name()));
    for (key, v) in extra {
        toggles.insert((*key).into(), v.clone());
    }
    Meta {
        command: command.into(),
        n: Some(cfg.n),
        k: Some(cfg.k),
        d: Some(cfg.deg),
        toggles,
        version: env!("CARGO_PKG_VERSION"),
    }
}

fn check(name: &str, params: String, ok: bool, witness: Option<String>) -> Check {
    Check { name: name.into(), params, status: if ok { Status::Pass } else { Status::Fail }, witness: if ok { None } else { witness } }
}

fn first_mismatch(a: &Mat, b: &Mat) -> Option<String> {
    a.first_difference(b).map(|(i, j)| format!("entry ({},{}): {} vs {}", i + 1, j + 1, a.get(i, j), b.get(i, j)))
}

pub fn cmd_adams(cfg: &RunConfig) -> Result<Outcome> {
    let e = engine(cfg)?;
    let tau = e.parse_insertion(&cfg.insertion)?;
    let op = Normalizer::new(&e, cfg.deg)?.quantum_adams(&tau)?;
    let mut doc = Document::new(meta(cfg, "adams", &[("insertion", json!(cfg.insertion))]));
    doc.push_series(&op.series);
    // The z^0 term must agree with the fixed-point classical operator.
    let field = zeta_field(e.ring())?;
    let classical = e.classical_matrix(&Insertions::at_equator(&e, tau))?.reduce_to(&field)?;
    if let Some(w) = first_mismatch(op.series.coeff(0), &classical) {
        return Err(Error::OracleMismatch(format!("degree-zero Adams operator: {w}")));
    }
    Ok(Outcome { document: doc, code: EXIT_OK })
}

pub fn cmd_pcurv(cfg: &RunConfig) -> Result<Outcome> {
    let e = engine(cfg)?;
    let op = Normalizer::new(&e, cfg.deg)?.p_curvature()?;
    let mut doc = Document::new(meta(cfg, "pcurv", &[]));
    doc.push_series(&op.series);
    Ok(Outcome { document: doc, code: EXIT_OK })
}

pub fn cmd_shift(cfg: &RunConfig, power: i32) -> Result<Outcome> {
    let e = engine(cfg)?;
    let op = Normalizer::new(&e, cfg.deg)?.kahler_shift(power)?;
    let mut doc = Document::new(meta(cfg, "shift", &[("power", json!(power))]));
    doc.push_series(&op.series);
    Ok(Outcome { document: doc, code: EXIT_OK })
}

pub fn cmd_verify(cfg: &RunConfig, theorem_only: bool) -> Result<Outcome> {
    let e = engine(cfg)?;
    let mut report = verify_main_theorem(&e, cfg.deg)?;
    if !theorem_only {
        report.extend(verify_properties(&e, cfg.deg)?);
    }
    let mut doc = Document::new(meta(cfg, "verify", &[]));
    doc.push_checks(&report.checks);
    let code = if report.all_pass() { EXIT_OK } else { EXIT_VERIFY };
    Ok(Outcome { document: doc, code })
}

/// Read a hypertoric matrix from inline syntax or from a file with an `n r` header.
pub fn read_matrix(inline: Option<&str>, file: Option<&PathBuf>) -> Result<HypertoricData> {
    match (inline, file) {
        (Some(s), None) => HypertoricData::parse(s),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            parse_matrix_file(&text)
        }
        _ => Err(Error::Parse("give exactly one of --matrix and --matrix-file".into())),
    }
}

pub fn parse_matrix_file(text: &str) -> Result<HypertoricData> {
    if text.contains([',', ';', '(']) {
        return HypertoricData::parse(text);
    }
    let nums: Vec<i64> = text
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad matrix entry '{t}'"))))
        .collect::<Result<_>>()?;
    let (&[n, r], rest) = nums.split_at(2.min(nums.len())) else {
        return Err(Error::Parse("matrix file needs an 'n r' header".into()));
    };
    if n <= 0 || r <= 0 || rest.len() as i64 != n * r {
        return Err(Error::Degenerate(format!("header says {n} x {r} but {} entries follow", rest.len())));
    }
    HypertoricData::new(rest.chunks(r as usize).map(|c| c.to_vec()).collect())
}

pub fn cmd_hikita(cfg: &RunConfig, inline: Option<&str>, file: Option<&PathBuf>) -> Result<Outcome> {
    let data = read_matrix(inline, file)?;
    let circs = circuits(&data)?;
    let kahler = kahler_relations(&data)?;
    let trace = trace_relations(&data)?;
    let report = hikita_match(&kahler, &trace, Some(cfg.k))?;
    let mut doc = Document::new(Meta {
        command: "hikita".into(),
        n: Some(data.n()),
        k: Some(cfg.k),
        d: None,
        toggles: Map::new(),
        version: env!("CARGO_PKG_VERSION"),
    });
    let params = format!("n={} rank={}", data.n(), data.rank());
    doc.push_checks(&[
        check("hikita_match", params.clone(), report.matched, Some(format!("bijection {:?}", report.bijection))),
        check(
            "hikita_match_at_zeta",
            format!("{params} k={}", cfg.k),
            report.at_zeta == Some(true),
            Some("relations differ at q = zeta_k".into()),
        ),
    ]);
    if data.n() == 1 {
        let s = scalar_pcurvature(&trace, cfg.k)?;
        let one = crate::symbolic::FactoredRatFunc::one(trace.registry(), &CycRing::full(cfg.k));
        doc.push_checks(&[check("scalar_p_curvature_is_one", format!("k={}", cfg.k), s.equals(&one), Some(s.to_string()))]);
    }
    let circ_json: Vec<Value> = circs
        .iter()
        .map(|c| {
            json!({
                "support": c.support.iter().map(|i| i + 1).collect::<Vec<_>>(),
                "positive": c.positive.iter().map(|i| i + 1).collect::<Vec<_>>(),
                "negative": c.negative.iter().map(|i| i + 1).collect::<Vec<_>>(),
                "vector": c.vector,
                "class": c.class,
            })
        })
        .collect();
    let strings = |ps: &[LaurentPoly]| ps.iter().map(|p| json!(p.to_string())).collect::<Vec<_>>();
    doc.extra.insert("circuits".into(), Value::Array(circ_json));
    doc.extra.insert("kahler_relations".into(), Value::Array(strings(kahler.relations())));
    doc.extra.insert("trace_relations".into(), Value::Array(strings(trace.relations())));
    doc.extra.insert(
        "dictionary".into(),
        Value::Array(report.dictionary.iter().map(|(a, b)| json!(format!("{a} -> {b}"))).collect()),
    );
    let code = if doc.all_pass() { EXIT_OK } else { EXIT_VERIFY };
    Ok(Outcome { document: doc, code })
}

pub fn cmd_limit(cfg: &RunConfig) -> Result<Outcome> {
    let e = engine(cfg)?;
    let report = cohomological_expand(&e, cfg.deg)?;
    let p = report.p as i64;
    let mut doc = Document::new(meta(cfg, "limit", &[]));
    let low: Vec<String> = report
        .entries
        .iter()
        .filter(|x| x.valuation.is_some_and(|v| v < p))
        .map(|x| format!("d={} ({},{}) valuation {}", x.d, x.i, x.j, x.valuation.unwrap_or_default()))
        .collect();
    doc.push_checks(&[check(
        "valuation_at_least_p",
        format!("n={} p={p} D={}", cfg.n, cfg.deg),
        low.is_empty(),
        Some(low.join("; ")),
    )]);
    // One matrix of valuations per degree; "inf" marks a vanishing entry.
    for d in 0..=cfg.deg as usize {
        let mut matrix = vec![vec![String::new(); cfg.n]; cfg.n];
        for x in report.entries.iter().filter(|x| x.d == d) {
            matrix[x.i - 1][x.j - 1] = x.valuation.map_or("inf".into(), |v| v.to_string());
        }
        doc.degrees.push(Degree { d, matrix });
    }
    let code = if doc.all_pass() { EXIT_OK } else { EXIT_VERIFY };
    Ok(Outcome { document: doc, code })
}

/// A random class `sum c * a^e * h^f * L^g` on the engine's registry.
fn random_class(e: &Engine, rng: &mut StdRng) -> LaurentPoly {
    let reg = e.registry();
    let ring = e.ring();
    let mut p = LaurentPoly::zero(reg, ring);
    for _ in 0..rng.gen_range(1..=4) {
        let mut m = vec![0; reg.len()];
        m[e.l_index()] = rng.gen_range(-3..=4);
        m[e.h_index()] = rng.gen_range(-1..=1);
        m[e.a_index(rng.gen_range(0..e.spec().n))] = rng.gen_range(-1..=1);
        let c = ring.from_int(rng.gen_range(-3..=3)).mul(&ring.q_pow(rng.gen_range(0..ring.k() as i64)));
        p = p.add(&LaurentPoly::term(reg, c, m));
    }
    p
}

pub fn cmd_oracle(cfg: &RunConfig, samples: usize) -> Result<Outcome> {
    let e = engine(cfg)?;
    let n = e.spec().n;
    let params = format!("n={} k={}", cfg.n, cfg.k);
    let mut doc = Document::new(meta(cfg, "oracle", &[("seed", json!(cfg.seed)), ("samples", json!(samples))]));

    let g0 = e.gluing_inverse()?;
    let id = Mat::identity(n, e.registry(), e.ring());
    let b0 = e.degree_zero_matrix(&Insertions::trivial(&e))?.mul(&g0).cancel();
    doc.push_checks(&[check("gluing_inverse", params.clone(), b0.equals(&id), first_mismatch(&b0, &id))]);

    for d in 1..=cfg.deg {
        for (label, ins) in [("1", Insertions::trivial(&e)), ("x", Insertions::at_equator(&e, e.x()))] {
            let fast = e.bare_matrix(d, &ins)?;
            let weights = e.fixed_point_weights(d);
            let classes = e.bare_classes(d, &ins)?;
            let mut witness = None;
            for (t, c) in classes.iter().enumerate() {
                let slow = chi_oracle_refined(&weights, c, e.l_index())?;
                if !slow.equals(fast.get(t / n, t % n)) {
                    witness = Some(format!("entry ({},{}): {} vs {}", t / n + 1, t % n + 1, fast.get(t / n, t % n), slow));
                    break;
                }
            }
            doc.push_checks(&[check("bare_matrix_pushforward", format!("{params} d={d} tau={label}"), witness.is_none(), witness)]);
        }
    }

    let mut rng = StdRng::seed_from_u64(cfg.seed);
    let mut bad = None;
    for s in 0..samples {
        let d = rng.gen_range(1..=2);
        let class = random_class(&e, &mut rng);
        let weights = e.fixed_point_weights(d);
        let a = chi_projective(&weights, &class, e.l_index())?;
        let b = chi_oracle_refined(&weights, &class, e.l_index())?;
        if !a.equals(&b) {
            bad = Some(format!("sample {s}: class {class}"));
            break;
        }
    }
    doc.push_checks(&[check("random_pushforward", format!("{params} seed={}", cfg.seed), bad.is_none(), bad)]);
    let code = if doc.all_pass() { EXIT_OK } else { EXIT_ORACLE };
    Ok(Outcome { document: doc, code })
}
