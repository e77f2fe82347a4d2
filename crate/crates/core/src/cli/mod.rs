//! Command-line front end: subject loading, dispatch and report output.

pub mod document;
pub mod report;

use crate::algebroid::{Algebroid, Section};
use crate::check::{sampled_check, Check};
use crate::chern::{chern_report, ChernSource};
use crate::connections::{
    curvature_skew_check, kahler_report, koszul_check, levi_civita, levi_civita_complex_frame, metric_compat_check,
    sectional_curvature, torsion_free_check, Metric,
};
use crate::constructions::{direct_product, flatness_check, fixture, projector_restriction, prolong, BASE_NAMES};
use crate::expr::{parse_with_coords, Sampling, Scalar};
use crate::jstruct::{integrability_report, matched_pair, nijenhuis, ComplexFrame, EndoField};
use crate::prodgeom::{product_geometry, ConstantCheck, HermitianData};
use clap::{Parser, Subcommand, ValueEnum};
use document::Document;
use report::{entries, Report, Subject};
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Exit codes.
pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT_INVALID: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "algebroid", version, about = "Symbolic checks for almost complex Lie algebroids")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for sampled zero tests.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Sample points per zero test.
    #[arg(long, global = true, default_value_t = 8)]
    pub samples: usize,
    /// Include wall-clock time in the report.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SourceArg {
    Iphi,
    Block,
    Both,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Structure equations: anchor morphism, antisymmetry, Jacobi.
    Validate { subject: String },
    /// Nijenhuis tensor by two independent computations.
    Nijenhuis { subject: String },
    /// The five integrability statements and their agreement.
    NnReport { subject: String },
    /// Matched-pair identities of the type decomposition (requires N = 0).
    MatchedPair { subject: String },
    /// Levi-Civita connection with torsion, metric and Koszul checks.
    LeviCivita {
        subject: String,
        /// Also build it on the adapted complex frame.
        #[arg(long)]
        complex_frame: bool,
    },
    /// Curvature of the Levi-Civita connection.
    Curvature { subject: String },
    /// Sectional curvature of a plane.
    Sectional {
        subject: String,
        /// Comma-separated components of the first section.
        #[arg(long)]
        direction: String,
        /// Second section; defaults to J applied to the first.
        #[arg(long)]
        with: Option<String>,
    },
    /// Hermitian, integrability, closedness and Kähler status.
    KahlerReport { subject: String },
    /// Trace forms of the Chern connection curvature.
    Chern {
        subject: String,
        #[arg(long, default_value_t = 1)]
        order: usize,
        #[arg(long, value_enum, default_value_t = SourceArg::Both)]
        source: SourceArg,
    },
    /// Product connection, second fundamental forms and Gauss/Weingarten.
    SecondFundamental { subject: String },
    /// Identities linking the second fundamental form with N, dΦ and J.
    IdentitySuite { subject: String },
    /// The prolongation over the bundle itself.
    Prolong { subject: String },
    /// Direct product with another subject.
    Product { subject: String, other: String },
    /// Restriction through a projector read from a file.
    Restrict {
        subject: String,
        #[arg(long)]
        projector: PathBuf,
    },
    /// The fixture catalog.
    Fixtures {
        #[arg(long)]
        list: bool,
    },
    /// A subject in the document format.
    Emit { subject: String },
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Input(String),
    Precondition(String),
}

impl Failure {
    fn pre(e: impl std::fmt::Display) -> Failure {
        Failure::Precondition(e.to_string())
    }

    fn input(e: impl std::fmt::Display) -> Failure {
        Failure::Input(e.to_string())
    }
}

struct Loaded {
    doc: Document,
    subject: Subject,
}

impl Loaded {
    fn alg(&self) -> &Algebroid {
        &self.doc.algebroid
    }

    fn j(&self) -> Result<EndoField, Failure> {
        let m = self.doc.j.clone().ok_or_else(|| Failure::pre("subject declares no J"))?;
        let j = EndoField::new(m).map_err(Failure::input)?;
        j.require_almost_complex().map_err(Failure::pre)?;
        Ok(j)
    }

    fn metric(&self) -> Result<Metric, Failure> {
        let m = self.doc.metric.clone().ok_or_else(|| Failure::pre("subject declares no metric"))?;
        Metric::new(m).map_err(Failure::pre)
    }
}

/// A document path if one exists, otherwise a fixture name.
fn load(subject: &str) -> Result<Loaded, Failure> {
    let path = Path::new(subject);
    let (doc, source) = if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{subject}: {e}")))?;
        let doc = document::parse(&text).map_err(|e| Failure::Input(format!("{subject}: {e}")))?;
        (doc, format!("file:{subject}"))
    } else {
        let f = fixture(subject).map_err(Failure::input)?;
        (Document::from_fixture(&f), "fixture".to_string())
    };
    let subject = Subject {
        name: doc.name.clone(),
        source,
        rank: doc.algebroid.rank(),
        coords: doc.algebroid.chart().coords().to_vec(),
    };
    Ok(Loaded { doc, subject })
}

/// Parses and runs one command line; `args[0]` is the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_PASS,
                _ => EXIT_INPUT_INVALID,
            };
            let text = e.render().to_string();
            return if code == EXIT_PASS {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let color = std::env::var("ALG_COLOR").map(|v| v == "1").unwrap_or(false);
    run_cli(&cli, color)
}

pub fn run_cli(cli: &Cli, color: bool) -> Outcome {
    let sampling = Sampling {
        samples: cli.samples,
        seed: cli.seed,
        ..Sampling::default()
    };
    if let Command::Emit { subject } = &cli.command {
        if cli.format == Format::Text {
            return match load(subject) {
                Ok(l) => Outcome {
                    code: EXIT_PASS,
                    stdout: l.doc.emit(),
                    stderr: String::new(),
                },
                Err(f) => failure_outcome(f),
            };
        }
    }
    let start = Instant::now();
    match dispatch(&cli.command, &sampling) {
        Ok(mut rep) => {
            if cli.timing {
                rep.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
            }
            let stdout = match cli.format {
                Format::Json => serde_json::to_string_pretty(&rep).expect("report serializes") + "\n",
                Format::Text => rep.to_text(color),
            };
            Outcome {
                code: if rep.passed() { EXIT_PASS } else { EXIT_CHECK_FAILED },
                stdout,
                stderr: String::new(),
            }
        }
        Err(f) => failure_outcome(f),
    }
}

fn failure_outcome(f: Failure) -> Outcome {
    let (code, msg) = match f {
        Failure::Input(m) => (EXIT_INPUT_INVALID, format!("input error: {m}\n")),
        Failure::Precondition(m) => (EXIT_PRECONDITION, format!("precondition unmet: {m}\n")),
    };
    Outcome {
        code,
        stdout: String::new(),
        stderr: msg,
    }
}

fn dispatch(cmd: &Command, sp: &Sampling) -> Result<Report, Failure> {
    match cmd {
        Command::Validate { subject } => {
            let l = load(subject)?;
            let mut rep = Report::new("validate", Some(l.subject.clone()), sp);
            let v = l.alg().validate();
            rep.check(&v.anchor_morphism, sp);
            rep.check(&v.antisymmetry, sp);
            rep.check(&v.jacobi, sp);
            if let Ok(g) = l.alg().generic_rank(sp.seed) {
                rep.value("anchor_generic_rank", g.rank);
            }
            Ok(rep)
        }
        Command::Nijenhuis { subject } => {
            let l = load(subject)?;
            let j = l.j()?;
            let n = nijenhuis(l.alg().structure(), &j).map_err(Failure::pre)?;
            let mut rep = Report::new("nijenhuis", Some(l.subject.clone()), sp);
            rep.check(&n.agreement, sp);
            rep.check(&n.antisymmetry, sp);
            rep.value("integrable", n.integrable());
            let r = n.tensor.rank();
            let mut items = Vec::new();
            for c in 0..r {
                for a in 0..r {
                    for b in 0..r {
                        items.push((vec![c, a, b], n.tensor.get(c, a, b)));
                    }
                }
            }
            rep.tensor("N", entries(items));
            Ok(rep)
        }
        Command::NnReport { subject } => {
            let l = load(subject)?;
            let j = l.j()?;
            let nn = integrability_report(l.alg().structure(), &j).map_err(Failure::pre)?;
            let mut rep = Report::new("nn-report", Some(l.subject.clone()), sp);
            rep.claim("statuses_agree", nn.consistent);
            let items: Vec<_> = nn
                .items
                .iter()
                .map(|it| serde_json::json!({"statement": it.statement, "holds": it.holds}))
                .collect();
            rep.value("statements", items);
            rep.value("integrable", nn.integrable);
            Ok(rep)
        }
        Command::MatchedPair { subject } => {
            let l = load(subject)?;
            let j = l.j()?;
            let st = l.alg().structure();
            let n = nijenhuis(st, &j).map_err(Failure::pre)?;
            if !n.integrable() {
                return Err(Failure::pre("J is not integrable; the matched pair needs N = 0"));
            }
            let mp = matched_pair(st, &j).map_err(Failure::pre)?;
            let mut rep = Report::new("matched-pair", Some(l.subject.clone()), sp);
            for c in [
                &mp.e10_algebroid,
                &mp.e01_algebroid,
                &mp.anchor_compatibility,
                &mp.module_e01,
                &mp.module_e10,
            ] {
                rep.check(c, sp);
            }
            Ok(rep)
        }
        Command::LeviCivita { subject, complex_frame } => {
            let l = load(subject)?;
            let g = l.metric()?;
            let st = l.alg().structure();
            let lc = levi_civita(st, &g).map_err(Failure::pre)?;
            let mut rep = Report::new("levi-civita", Some(l.subject.clone()), sp);
            rep.check(&torsion_free_check(&lc), sp);
            rep.check(&metric_compat_check(&lc, &g).map_err(Failure::pre)?, sp);
            rep.check(&koszul_check(&lc, &g).map_err(Failure::pre)?, sp);
            rep.tensor("Gamma", gamma_entries(&lc));
            if *complex_frame {
                let j = l.j()?;
                let frame = ComplexFrame::adapted(st, &j).map_err(Failure::pre)?;
                let clc = levi_civita_complex_frame(st, &j, &g, &frame).map_err(Failure::pre)?;
                rep.check(&clc.transform_agreement, sp);
                rep.check(&clc.conjugation, sp);
                let families: Vec<bool> = clc.formula_families.iter().map(Check::passed).collect();
                rep.value("printed_families_hold", families);
                if let Some(k) = &clc.kahler {
                    rep.value("kahler_coefficients_hold", k.passed());
                }
                rep.tensor("Gamma_complex", gamma_entries(&clc.connection));
            }
            Ok(rep)
        }
        Command::Curvature { subject } => {
            let l = load(subject)?;
            let g = l.metric()?;
            let lc = levi_civita(l.alg().structure(), &g).map_err(Failure::pre)?;
            let curv = lc.curvature();
            let mut rep = Report::new("curvature", Some(l.subject.clone()), sp);
            rep.check(&curv.antisymmetry(), sp);
            let skew = curvature_skew_check(&lc, &g, sp.samples, sp.seed, sp.tol).map_err(Failure::pre)?;
            if skew.points > 0 {
                rep.numeric(&skew);
            } else {
                rep.value("orthonormal_skew", "skipped: metric not positive at samples");
            }
            let r = curv.rank();
            let mut items = Vec::new();
            for d in 0..r {
                for a in 0..r {
                    for b in a + 1..r {
                        for c in 0..r {
                            items.push((vec![d, a, b, c], curv.get(d, a, b, c)));
                        }
                    }
                }
            }
            rep.tensor("R", entries(items));
            Ok(rep)
        }
        Command::Sectional { subject, direction, with } => {
            let l = load(subject)?;
            let g = l.metric()?;
            let coords = l.alg().chart().coords().to_vec();
            let r = l.alg().rank();
            let s1 = parse_section(direction, &coords, r)?;
            let s2 = match with {
                Some(t) => parse_section(t, &coords, r)?,
                None => l.j()?.apply(&s1),
            };
            let lc = levi_civita(l.alg().structure(), &g).map_err(Failure::pre)?;
            let k = sectional_curvature(&lc.curvature(), &g, &s1, &s2).map_err(Failure::pre)?;
            let mut rep = Report::new("sectional", Some(l.subject.clone()), sp);
            rep.value("K", k.to_string());
            rep.value("constant", k.is_constant());
            Ok(rep)
        }
        Command::KahlerReport { subject } => {
            let l = load(subject)?;
            let (j, g) = (l.j()?, l.metric()?);
            let kr = kahler_report(l.alg().structure(), &j, &g).map_err(Failure::pre)?;
            let mut rep = Report::new("kahler-report", Some(l.subject.clone()), sp);
            rep.check(&kr.hermitian, sp);
            rep.check(&kr.vii5.residual, sp);
            rep.claim("levi_civita_equivalence", kr.equivalence_holds);
            rep.value("integrable", kr.integrable);
            rep.value("closed", kr.closed);
            rep.value("levi_civita_almost_complex", kr.levi_civita_almost_complex.passed());
            rep.value("almost_kahler", kr.almost_kahler);
            rep.value("kahler", kr.kahler);
            let class = if kr.kahler {
                "kahler"
            } else if kr.integrable {
                "hermitian"
            } else if kr.almost_kahler {
                "almost_kahler"
            } else {
                "almost_hermitian"
            };
            rep.value("classification", class);
            rep.tensor("Phi", entries(kr.fundamental_form.components().map(|(i, v)| (i.clone(), v))));
            rep.tensor("dPhi", entries(kr.d_phi.components().map(|(i, v)| (i.clone(), v))));
            Ok(rep)
        }
        Command::Chern { subject, order, source } => {
            let l = load(subject)?;
            let (j, g) = (l.j()?, l.metric()?);
            if *order == 0 {
                return Err(Failure::input("order must be at least 1"));
            }
            let st = l.alg().structure();
            let data = HermitianData::new(st, &j, &g).map_err(Failure::pre)?;
            let product = crate::prodgeom::product_connection(&data).map_err(Failure::pre)?;
            let cr = chern_report(&product.connection, &j, &data.frame, *order).map_err(Failure::pre)?;
            let mut rep = Report::new("chern", Some(l.subject.clone()), sp);
            rep.check(&cr.block_pattern, sp);
            rep.check(&cr.restricted_agreement, sp);
            for o in &cr.orders {
                let k = o.order;
                let sources: &[ChernSource] = match source {
                    SourceArg::Iphi => &[ChernSource::Iphi],
                    SourceArg::Block => &[ChernSource::Block],
                    SourceArg::Both => &[ChernSource::Iphi, ChernSource::Block],
                };
                if *source == SourceArg::Both {
                    rep.check_as(&format!("chern_trace_equality_{k}"), &o.equality, sp);
                }
                let mut closed = Check::new(format!("chern_closed_{k}"));
                for f in &o.closed.failures {
                    let tag = f.at.first().copied().unwrap_or(0);
                    let wanted = if tag == 0 { ChernSource::Iphi } else { ChernSource::Block };
                    if sources.contains(&wanted) {
                        closed.record(&f.at, f.value.clone());
                    }
                }
                closed.evaluated = closed.evaluated.max(o.closed.evaluated);
                rep.check(&closed, sp);
                for s in sources {
                    let (key, w) = match s {
                        ChernSource::Iphi => (format!("trace_iphi_{k}"), &o.trace_iphi),
                        ChernSource::Block => (format!("half_trace_block_{k}"), &o.half_trace_block),
                    };
                    rep.tensor(&key, entries(w.components().map(|(i, v)| (i.clone(), v))));
                }
                rep.value(&format!("vanishes_{k}"), o.vanishes);
                if let Some(c) = &o.factor {
                    rep.value(&format!("iphi_over_block_{k}"), c.to_string());
                }
            }
            Ok(rep)
        }
        Command::SecondFundamental { subject } => {
            let l = load(subject)?;
            let (j, g) = (l.j()?, l.metric()?);
            let pg = product_geometry(l.alg().structure(), &j, &g).map_err(Failure::pre)?;
            let mut rep = Report::new("second-fundamental", Some(l.subject.clone()), sp);
            let p = &pg.product;
            for c in [
                &p.projection_form,
                &p.parallel_p10,
                &p.parallel_p01,
                &p.parallel_h,
                &p.torsion_projector,
                &p.torsion_dj,
                &p.torsion_local,
            ] {
                rep.check(c, sp);
            }
            let s = &pg.second;
            for c in [
                &s.two_forms,
                &s.gauss,
                &s.weingarten_equation,
                &s.weingarten_forms,
                &s.local_b,
                &s.local_w,
            ] {
                rep.check(c, sp);
            }
            rep.value("b_vanishes", s.is_zero());
            rep.value("minimal", pg.mean.minimal);
            rep.tensor("B", tensor3_entries(&s.b));
            rep.tensor("W", tensor3_entries(&s.w));
            rep.tensor("H", entries(pg.mean.h.0.iter().enumerate().map(|(k, v)| (vec![k], v))));
            Ok(rep)
        }
        Command::IdentitySuite { subject } => {
            let l = load(subject)?;
            let (j, g) = (l.j()?, l.metric()?);
            let pg = product_geometry(l.alg().structure(), &j, &g).map_err(Failure::pre)?;
            let id = &pg.identities;
            let mut rep = Report::new("identity-suite", Some(l.subject.clone()), sp);
            rep.check(&id.im_re, sp);
            rep.check(&id.j_anti_invariance, sp);
            rep.check(&id.isotropy, sp);
            rep.check_as("weingarten_duality", &pg.duality.real_frame, sp);
            rep.check_as("weingarten_duality_complex_frame", &pg.duality.complex_frame, sp);
            for (key, cc) in [
                ("nijenhuis_formula", &id.nijenhuis_formula),
                ("dphi_formula", &id.dphi_formula),
                ("nijenhuis_from_alt", &id.nijenhuis_from_alt),
            ] {
                constant_entry(&mut rep, key, cc, sp);
            }
            rep.claim("vanishing_equivalence", id.vanishing_equivalence);
            rep.claim("symmetry_equivalence", id.symmetry_equivalence);
            rep.value("integrable", id.integrable);
            rep.value("totally_geodesic", id.totally_geodesic);
            rep.value("totally_umbilical", id.totally_umbilical);
            rep.value("minimal", id.minimal);
            Ok(rep)
        }
        Command::Prolong { subject } => {
            let l = load(subject)?;
            let pro = prolong(l.alg()).map_err(Failure::pre)?;
            let mut rep = Report::new("prolong", Some(l.subject.clone()), sp);
            let v = pro.algebroid.validate();
            rep.check(&v.anchor_morphism, sp);
            rep.check(&v.antisymmetry, sp);
            rep.check(&v.jacobi, sp);
            let r = l.alg().rank();
            let sections: Vec<Section> = (0..r).map(|a| Section::basis(r, a)).collect();
            let mut functions = vec![Scalar::one()];
            for c in l.alg().chart().coords() {
                functions.push(parse_with_coords(c, l.alg().chart().coords()).map_err(Failure::input)?);
            }
            rep.check(&pro.lift_laws(&sections, &functions).map_err(Failure::pre)?, sp);
            if let Ok(j) = l.j() {
                rep.check(&pro.complete_j_checks(&j).map_err(Failure::pre)?, sp);
            }
            rep.value("rank", pro.algebroid.rank());
            rep.value("coords", pro.algebroid.chart().coords());
            rep.tensor("C", bracket_entries(&pro.algebroid));
            Ok(rep)
        }
        Command::Product { subject, other } => {
            let (l1, l2) = (load(subject)?, load(other)?);
            let name = format!("product({},{})", l1.doc.name, l2.doc.name);
            let prod = direct_product(l1.alg(), l2.alg(), &name).map_err(Failure::pre)?;
            let mut rep = Report::new("product", Some(l1.subject.clone()), sp);
            let v = prod.algebroid.validate();
            rep.check(&v.anchor_morphism, sp);
            rep.check(&v.antisymmetry, sp);
            rep.check(&v.jacobi, sp);
            let first: Vec<Section> = (0..l1.alg().rank()).map(|a| Section::basis(l1.alg().rank(), a)).collect();
            let second: Vec<Section> = (0..l2.alg().rank()).map(|a| Section::basis(l2.alg().rank(), a)).collect();
            rep.check(&prod.injection_check(&first, &second).map_err(Failure::pre)?, sp);
            rep.value("other", l2.subject.name.clone());
            rep.value("rank", prod.algebroid.rank());
            rep.value("coords", prod.algebroid.chart().coords());
            rep.value("renamed", &prod.renamed);
            rep.tensor("C", bracket_entries(&prod.algebroid));
            Ok(rep)
        }
        Command::Restrict { subject, projector } => {
            let l = load(subject)?;
            let text = std::fs::read_to_string(projector)
                .map_err(|e| Failure::Input(format!("{}: {e}", projector.display())))?;
            let alg = l.alg();
            let coords = alg.chart().coords().to_vec();
            let p = document::parse_projector(&text, &coords, alg.rank(), alg.labels())
                .map_err(|e| Failure::Input(format!("{}: {e}", projector.display())))?;
            let ambient_j = match &l.doc.j {
                Some(m) => Some(EndoField::new(m.clone()).map_err(Failure::input)?),
                None => None,
            };
            let anchor = alg.structure().anchor_rows().to_vec();
            let pr = projector_restriction(alg.chart().clone(), p, anchor, ambient_j).map_err(Failure::pre)?;
            let mut rep = Report::new("restrict", Some(l.subject.clone()), sp);
            let v = pr.algebroid.validate();
            rep.check(&v.anchor_morphism, sp);
            rep.check(&v.antisymmetry, sp);
            rep.check(&v.jacobi, sp);
            let flat = flatness_check(&pr).map_err(Failure::pre)?;
            let r = pr.algebroid.rank();
            let mut residuals = Vec::new();
            for a in 0..r {
                for b in a + 1..r {
                    let res = pr
                        .flatness_residual(&Section::basis(r, a), &Section::basis(r, b))
                        .map_err(Failure::pre)?;
                    residuals.extend(res.0);
                }
            }
            let numeric = sampled_check("flatness_numeric", &residuals, &coords, sp.samples, sp.seed, sp.tol)
                .map_err(Failure::input)?;
            rep.numeric(&numeric);
            rep.value("flatness_structurally_zero", flat.passed());
            if let Some(c) = pr.commutes_with_j {
                rep.value("projector_commutes_with_j", c);
            }
            if let Some(j) = &pr.j {
                if j.require_almost_complex().is_ok() {
                    let n = nijenhuis(pr.algebroid.structure(), j).map_err(Failure::pre)?;
                    rep.value("restricted_j_integrable", n.integrable());
                }
            }
            rep.tensor("C", bracket_entries(&pr.algebroid));
            Ok(rep)
        }
        Command::Fixtures { list: _ } => {
            let mut rep = Report::new("fixtures", None, sp);
            rep.value("fixtures", BASE_NAMES);
            rep.value("composites", ["prolong(<name>)", "product(<name>,<name>)"]);
            Ok(rep)
        }
        Command::Emit { subject } => {
            let l = load(subject)?;
            let mut rep = Report::new("emit", Some(l.subject.clone()), sp);
            rep.value("document", l.doc.emit());
            Ok(rep)
        }
    }
}

fn constant_entry(rep: &mut Report, key: &str, cc: &ConstantCheck, sp: &Sampling) {
    rep.check(&cc.observed_residual, sp);
    rep.value(
        key,
        serde_json::json!({
            "printed_constant": cc.printed.to_string(),
            "printed_constant_holds": cc.printed_residual.passed(),
            "observed_constant": cc.observed.as_ref().map(Scalar::to_string),
            "both_sides_zero": cc.both_sides_zero,
        }),
    );
}

fn parse_section(text: &str, coords: &[String], rank: usize) -> Result<Section, Failure> {
    let comps: Vec<Scalar> = text
        .split(',')
        .map(|p| parse_with_coords(p.trim(), coords))
        .collect::<Result<_, _>>()
        .map_err(Failure::input)?;
    if comps.len() != rank {
        return Err(Failure::Input(format!(
            "section needs {rank} components, found {}",
            comps.len()
        )));
    }
    Ok(Section(comps))
}

fn gamma_entries(conn: &crate::connections::Connection) -> Vec<report::TensorEntry> {
    let r = conn.rank();
    let mut items = Vec::new();
    for c in 0..r {
        for a in 0..r {
            for b in 0..r {
                items.push((vec![c, a, b], conn.gamma(c, a, b)));
            }
        }
    }
    entries(items)
}

fn tensor3_entries(t: &crate::connections::Tensor3) -> Vec<report::TensorEntry> {
    let r = t.rank();
    let mut items = Vec::new();
    for c in 0..r {
        for a in 0..r {
            for b in 0..r {
                items.push((vec![c, a, b], t.get(c, a, b)));
            }
        }
    }
    entries(items)
}

fn bracket_entries(alg: &Algebroid) -> Vec<report::TensorEntry> {
    let st = alg.structure();
    let r = st.rank();
    let mut items = Vec::new();
    for c in 0..r {
        for a in 0..r {
            for b in a + 1..r {
                items.push((vec![c, a, b], st.c(c, a, b)));
            }
        }
    }
    entries(items)
}
