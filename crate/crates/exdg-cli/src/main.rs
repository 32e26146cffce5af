//! Command-line front end: loads a named fixture, runs one inspection or
//! verification command, and emits a deterministic table, JSON document,
//! or DOT graph. Exit codes: 0 success, 1 verification failure, 2 input
//! error.

use clap::{Parser, Subcommand, ValueEnum};
use exdg_core::algebra::Algebra;
use exdg_core::complex::{GradedMap, ProjComplex};
use exdg_core::exact::{
    ambient_exact, exactness_verdict, homotopy_cokernel, homotopy_kernel, homotopy_pullback,
    is_pullback, pushout_completion, SubcategorySpec, TestSet,
};
use exdg_core::ext::{
    ar_quiver, decompose_by_hom, defect_of, ext_group, is_split, realize, substructure_lattice,
    verify_axioms, AxiomOptions, ProbeSet,
};
use exdg_core::field::Scalar;
use exdg_core::fixture::{resolve, FixtureData, PathFixture, SuperFixture};
use exdg_core::h3::{HComplex3, HCospan, MorObject};
use exdg_core::homcx::HomView;
use exdg_core::module::{dual_module, is_reflexive, proj_dim_leq, RightModule};
use exdg_core::sv::{
    sv_hom_dim, sv_homotopy_cokernel, sv_homotopy_kernel, sv_is_conflation, sv_stable_check, SvMap,
};
use exdg_core::FieldSpec;
use serde_json::{json, Value};
use std::sync::Arc;

#[derive(Parser)]
#[command(
    name = "exdg",
    version,
    about = "Inspect bounded complexes of projectives over a path algebra: \
             homotopy exactness, kernels, extension groups, almost-split \
             structure, and the stable super-vector-space model."
)]
struct Cli {
    /// Built-in fixture name or path to a fixture file.
    #[arg(long, global = true)]
    fixture: Option<String>,

    /// Output form; dot is available for ar-quiver and lattice.
    #[arg(long, global = true, value_enum, default_value_t = EmitKind::Table)]
    emit: EmitKind,

    /// Seed for every sampling command.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Sampling budget; each command has its own default.
    #[arg(long, global = true)]
    samples: Option<usize>,

    /// Report elapsed time on stderr.
    #[arg(long, global = true)]
    timings: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the algebra basis and probes (or the super objects and maps).
    Basis,
    /// Graded hom dimensions between two named objects.
    Hom { x: String, y: String },
    /// Check a named triple for homotopy short exactness.
    CheckHses {
        seq: String,
        /// Also require exactness in the ambient unrestricted category.
        #[arg(long)]
        ambient: bool,
    },
    /// Homotopy kernel of a map (TRIPLE.f, TRIPLE.j, or id:PROBE).
    Hkernel { map: String },
    /// Homotopy cokernel of a map.
    Hcokernel { map: String },
    /// Complete a cospan "MAP,MAP" to a homotopy-cartesian square.
    Pullback { cospan: String },
    /// Push a named triple out along a map on its first term: "TRIPLE,MAP".
    Pushout { span: String },
    /// Dimension of the extension group E(C, A) of two probes.
    Egroup { c: String, a: String },
    /// Realize a class of E(C, A) as a conflation A >-> B ->> C.
    Realize {
        c: String,
        a: String,
        /// Comma-separated coordinates in the basis of E(C, A).
        #[arg(long)]
        delta: String,
    },
    /// Defect table of a class of E(C, A) over the probe list.
    Defect {
        c: String,
        a: String,
        /// Comma-separated coordinates in the basis of E(C, A).
        #[arg(long)]
        delta: String,
    },
    /// Almost-split conflations and irreducible arrows on the probe list.
    ArQuiver,
    /// Lattice of exact substructures with sampled closure certificates.
    Lattice,
    /// Run the extriangulated-axiom checks on the fixture.
    VerifyAxioms,
    /// Properties of a named simple module.
    Module {
        m: String,
        /// Report projective dimension, dual dimension, and reflexivity.
        #[arg(long)]
        props: bool,
    },
    /// Homotopy kernel of a named degree-zero super map.
    SvHkernel { map: String },
    /// Homotopy cokernel of a named degree-zero super map.
    SvHcokernel { map: String },
    /// Exhaustive + sampled stability check of the super model.
    StableCheck,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Basis => "basis",
            Command::Hom { .. } => "hom",
            Command::CheckHses { .. } => "check-hses",
            Command::Hkernel { .. } => "hkernel",
            Command::Hcokernel { .. } => "hcokernel",
            Command::Pullback { .. } => "pullback",
            Command::Pushout { .. } => "pushout",
            Command::Egroup { .. } => "egroup",
            Command::Realize { .. } => "realize",
            Command::Defect { .. } => "defect",
            Command::ArQuiver => "ar-quiver",
            Command::Lattice => "lattice",
            Command::VerifyAxioms => "verify-axioms",
            Command::Module { .. } => "module",
            Command::SvHkernel { .. } => "sv-hkernel",
            Command::SvHcokernel { .. } => "sv-hcokernel",
            Command::StableCheck => "stable-check",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EmitKind {
    Table,
    Json,
    Dot,
}

/// An input error (exit 2), distinct from a failed verification (exit 1).
struct InputError(String);

type CmdResult = Result<Outcome, InputError>;

/// What a command produced: table lines, the same data as JSON, an
/// optional graph form, and whether every requested check passed.
struct Outcome {
    lines: Vec<String>,
    json: Value,
    dot: Option<String>,
    ok: bool,
}

impl Outcome {
    fn render(&self, emit: EmitKind) -> Result<String, InputError> {
        match emit {
            EmitKind::Table => Ok(self.lines.join("\n")),
            EmitKind::Json => Ok(serde_json::to_string_pretty(&self.json).expect("serializable")),
            EmitKind::Dot => self.dot.clone().ok_or_else(|| {
                InputError("dot output is only available for ar-quiver and lattice".into())
            }),
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // Help and version requests are successes, usage errors are not.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let start = std::time::Instant::now();
    let name = cli.command.name();
    let code = match run(&cli) {
        Ok(out) => match out.render(cli.emit) {
            Ok(text) => {
                println!("{text}");
                if out.ok {
                    0
                } else {
                    1
                }
            }
            Err(InputError(msg)) => {
                eprintln!("error: {msg}");
                2
            }
        },
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    };
    if cli.timings {
        eprintln!("timing: {} finished in {} ms", name, start.elapsed().as_millis());
    }
    std::process::exit(code);
}

fn run(cli: &Cli) -> CmdResult {
    let fixture_name = cli
        .fixture
        .as_deref()
        .ok_or_else(|| InputError("pass --fixture NAME (or a path to a fixture file)".into()))?;
    let data = resolve(fixture_name).map_err(InputError)?;
    match data {
        FixtureData::PathAlgebra(fix) => run_path(cli, &fix),
        FixtureData::Super(fix) => run_super(cli, &fix),
    }
}

// ---- shared formatting ---------------------------------------------------

fn field_name(f: FieldSpec) -> String {
    match f {
        FieldSpec::Rationals => "Q".into(),
        FieldSpec::Prime(p) => format!("F{p}"),
    }
}

fn scalars_text(v: &[Scalar]) -> String {
    let body: Vec<String> = v.iter().map(|s| s.to_string()).collect();
    format!("[{}]", body.join(", "))
}

fn parse_coords(alg: &Algebra, spec: &str, want: usize) -> Result<Vec<Scalar>, InputError> {
    let parts: Vec<&str> = if spec.trim().is_empty() {
        Vec::new()
    } else {
        spec.split(',').collect()
    };
    if parts.len() != want {
        return Err(InputError(format!(
            "--delta needs {want} comma-separated coordinates, found {}",
            parts.len()
        )));
    }
    parts
        .iter()
        .map(|p| {
            alg.field
                .parse(p.trim())
                .map_err(|e| InputError(format!("--delta: {e}")))
        })
        .collect()
}

/// Describes a complex degree by degree, e.g. "{ -1: P1, 0: P2+P1 }".
fn complex_desc(alg: &Algebra, x: &ProjComplex) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let degs: Vec<String> = (x.lo..=x.hi)
        .filter(|&n| !x.term(n).is_empty())
        .map(|n| {
            let parts: Vec<String> = x
                .term(n)
                .iter()
                .map(|&v| format!("P{}", alg.quiver.vertices[v]))
                .collect();
            format!("{}: {}", n, parts.join("+"))
        })
        .collect();
    format!("{{ {} }}", degs.join(", "))
}

/// Names a complex by its probe label when it is literally one of the
/// fixture's probes, otherwise describes it degree by degree.
fn object_name(fix: &PathFixture, x: &Arc<ProjComplex>) -> String {
    for (label, p) in &fix.probes {
        if Arc::ptr_eq(p, x) || **p == **x {
            return label.clone();
        }
    }
    complex_desc(&fix.algebra, x)
}

/// Renders a multiplicity vector over the probe labels, e.g. "P2 (+) S2".
fn decomposition_name(fix: &PathFixture, mults: &[usize]) -> String {
    let parts: Vec<String> = mults
        .iter()
        .zip(&fix.probes)
        .filter(|(&m, _)| m > 0)
        .map(|(&m, (label, _))| {
            if m == 1 {
                label.clone()
            } else {
                format!("{m}x{label}")
            }
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" (+) ")
    }
}

fn decomposition_json(fix: &PathFixture, mults: &[usize]) -> Value {
    let entries: Vec<Value> = mults
        .iter()
        .zip(&fix.probes)
        .filter(|(&m, _)| m > 0)
        .map(|(&m, (label, _))| json!({ "label": label, "multiplicity": m }))
        .collect();
    Value::Array(entries)
}

fn triple_desc(fix: &PathFixture, t: &HComplex3) -> String {
    format!(
        "{} >-> {} ->> {}",
        object_name(fix, &t.a0),
        object_name(fix, &t.a1),
        object_name(fix, &t.a2)
    )
}

// ---- path-algebra plumbing -----------------------------------------------

struct PathContext {
    sub: SubcategorySpec,
    test: TestSet,
    probes: ProbeSet,
}

fn path_context(fix: &PathFixture) -> PathContext {
    let (lo, hi) = fix.amplitude;
    let degrees: Vec<i32> = (lo..=hi).collect();
    PathContext {
        sub: SubcategorySpec::Amplitude(lo, hi),
        test: TestSet::stalks(&fix.algebra, &degrees),
        probes: fix.probe_set(),
    }
}

fn need_probe(fix: &PathFixture, label: &str) -> Result<Arc<ProjComplex>, InputError> {
    fix.probe(label).cloned().ok_or_else(|| {
        let names: Vec<&str> = fix.probes.iter().map(|(l, _)| l.as_str()).collect();
        InputError(format!("unknown probe {label:?} (probes: {})", names.join(", ")))
    })
}

fn need_triple(fix: &PathFixture, label: &str) -> Result<Arc<HComplex3>, InputError> {
    fix.triple(label).cloned().ok_or_else(|| {
        let names: Vec<&str> = fix.triples.iter().map(|(l, _)| l.as_str()).collect();
        if names.is_empty() {
            InputError(format!("unknown triple {label:?}: this fixture declares none"))
        } else {
            InputError(format!("unknown triple {label:?} (triples: {})", names.join(", ")))
        }
    })
}

/// Resolves "TRIPLE.f", "TRIPLE.j", or "id:PROBE" to a closed chain map.
fn resolve_map(fix: &PathFixture, spec: &str) -> Result<(String, GradedMap), InputError> {
    if let Some(p) = spec.strip_prefix("id:") {
        let probe = need_probe(fix, p)?;
        return Ok((spec.to_string(), GradedMap::identity(&fix.algebra, probe)));
    }
    let Some((tname, leg)) = spec.rsplit_once('.') else {
        return Err(InputError(format!(
            "map reference {spec:?} must be TRIPLE.f, TRIPLE.j, or id:PROBE"
        )));
    };
    let t = need_triple(fix, tname)?;
    match leg {
        "f" => Ok((spec.to_string(), t.f.clone())),
        "j" => Ok((spec.to_string(), t.j.clone())),
        "h" => Err(InputError(
            "the homotopy leg has degree -1 and is not a chain map; use .f or .j".into(),
        )),
        other => Err(InputError(format!(
            "unknown leg {other:?} in {spec:?}; use .f or .j"
        ))),
    }
}

fn map_desc(fix: &PathFixture, name: &str, m: &GradedMap) -> String {
    format!("map {} : {} -> {}", name, object_name(fix, &m.src), object_name(fix, &m.tgt))
}

// ---- path-algebra commands -----------------------------------------------

fn run_path(cli: &Cli, fix: &PathFixture) -> CmdResult {
    let ctx = path_context(fix);
    match &cli.command {
        Command::Basis => path_basis(fix),
        Command::Hom { x, y } => path_hom(fix, x, y),
        Command::CheckHses { seq, ambient } => path_check(fix, &ctx, seq, *ambient),
        Command::Hkernel { map } => path_hkernel(fix, &ctx, map),
        Command::Hcokernel { map } => path_hcokernel(fix, &ctx, map),
        Command::Pullback { cospan } => path_pullback(fix, &ctx, cospan),
        Command::Pushout { span } => path_pushout(fix, &ctx, span),
        Command::Egroup { c, a } => path_egroup(fix, c, a),
        Command::Realize { c, a, delta } => path_realize(fix, &ctx, c, a, delta),
        Command::Defect { c, a, delta } => path_defect(fix, &ctx, c, a, delta),
        Command::ArQuiver => path_ar_quiver(fix, &ctx),
        Command::Lattice => path_lattice(fix, &ctx, cli.samples.unwrap_or(60), cli.seed),
        Command::VerifyAxioms => path_axioms(fix, &ctx, cli.samples.unwrap_or(100), cli.seed),
        Command::Module { m, props } => path_module(fix, m, *props),
        Command::SvHkernel { .. } | Command::SvHcokernel { .. } | Command::StableCheck => {
            Err(InputError(format!(
                "{} needs a super fixture (try --fixture supervect)",
                cli.command.name()
            )))
        }
    }
}

fn path_basis(fix: &PathFixture) -> CmdResult {
    let alg = &fix.algebra;
    let mut lines = vec![format!(
        "fixture {}: path algebra over {}, dimension {}",
        fix.name,
        field_name(alg.field),
        alg.dim
    )];
    let mut basis_json = Vec::new();
    for p in &alg.basis {
        let src = &alg.quiver.vertices[p.source];
        let tgt = &alg.quiver.vertices[p.target];
        let shown = p.display(&alg.quiver);
        lines.push(format!("  {shown} : {src} -> {tgt}"));
        basis_json.push(json!({ "path": shown, "source": src, "target": tgt }));
    }
    let probe_names: Vec<&str> = fix.probes.iter().map(|(l, _)| l.as_str()).collect();
    lines.push(format!("probes: {}", probe_names.join(" ")));
    Ok(Outcome {
        lines,
        json: json!({
            "command": "basis",
            "fixture": fix.name,
            "field": field_name(alg.field),
            "dimension": alg.dim,
            "basis": basis_json,
            "probes": probe_names,
        }),
        dot: None,
        ok: true,
    })
}

fn path_hom(fix: &PathFixture, x: &str, y: &str) -> CmdResult {
    let alg = &fix.algebra;
    let cx = need_probe(fix, x)?;
    let cy = need_probe(fix, y)?;
    let view = HomView::new(cx, cy);
    let (lo, hi) = view.degree_window();
    let mut lines = vec![format!("Hom({x}, {y})")];
    let mut rows = Vec::new();
    for n in lo..=hi {
        let dim = view.dim(alg, n);
        if dim == 0 {
            continue;
        }
        let h = view.cohomology_dim(alg, n);
        lines.push(format!("  deg {n}: dim {dim}, cohomology {h}"));
        rows.push(json!({ "deg": n, "dim": dim, "cohomology": h }));
    }
    if rows.is_empty() {
        lines.push("  zero in every degree".into());
    }
    Ok(Outcome {
        lines,
        json: json!({ "command": "hom", "x": x, "y": y, "degrees": rows }),
        dot: None,
        ok: true,
    })
}

fn path_check(fix: &PathFixture, ctx: &PathContext, seq: &str, with_ambient: bool) -> CmdResult {
    let alg = &fix.algebra;
    let t = need_triple(fix, seq)?;
    let verdict = exactness_verdict(alg, &t, &ctx.test);
    let conflation = verdict.is_exact();
    let mut lines = vec![
        format!("triple {}: {}", seq, triple_desc(fix, &t)),
        format!("restricted left exact: {}", verdict.left.ok),
        format!("restricted right exact: {}", verdict.right.ok),
        format!("conflation: {conflation}"),
    ];
    let mut ok = conflation;
    let mut ambient_field = Value::Null;
    if with_ambient {
        let amb = ambient_exact(alg, &t);
        lines.push(format!("ambient exact: {amb}"));
        ambient_field = Value::Bool(amb);
        ok = ok && amb;
    }
    Ok(Outcome {
        lines,
        json: json!({
            "command": "check-hses",
            "triple": seq,
            "left_exact": verdict.left.ok,
            "right_exact": verdict.right.ok,
            "conflation": conflation,
            "ambient_exact": ambient_field,
        }),
        dot: None,
        ok,
    })
}

fn path_hkernel(fix: &PathFixture, ctx: &PathContext, spec: &str) -> CmdResult {
    let alg = &fix.algebra;
    let (name, g) = resolve_map(fix, spec)?;
    let mor = MorObject::new(alg, g);
    let mut lines = vec![map_desc(fix, &name, &mor.f)];
    match homotopy_kernel(alg, &mor, &ctx.sub, &ctx.test) {
        Some(trip) => {
            let mults = decompose_by_hom(alg, &trip.a0, &ctx.probes);
            let shown = match &mults {
                Some(m) => decomposition_name(fix, m),
                None => "(no decomposition over the probe list)".into(),
            };
            lines.push(format!("homotopy kernel: {}", complex_desc(alg, &trip.a0)));
            lines.push(format!("decomposes as: {shown}"));
            lines.push("kernel triple certified: true".into());
            Ok(Outcome {
                lines,
                json: json!({
                    "command": "hkernel",
                    "map": name,
                    "kernel": complex_desc(alg, &trip.a0),
                    "decomposition": mults.as_deref().map(|m| decomposition_json(fix, m)),
                    "certified": true,
                }),
                dot: None,
                ok: true,
            })
        }
        None => {
            lines.push("homotopy kernel: none within the amplitude window".into());
            Ok(Outcome {
                lines,
                json: json!({ "command": "hkernel", "map": name, "kernel": Value::Null }),
                dot: None,
                ok: false,
            })
        }
    }
}

fn path_hcokernel(fix: &PathFixture, ctx: &PathContext, spec: &str) -> CmdResult {
    let alg = &fix.algebra;
    let op = alg.opposite();
    let (name, f) = resolve_map(fix, spec)?;
    let mor = MorObject::new(alg, f);
    let mut lines = vec![map_desc(fix, &name, &mor.f)];
    match homotopy_cokernel(alg, &op, &mor, &ctx.sub, &ctx.test) {
        Some(trip) => {
            let mults = decompose_by_hom(alg, &trip.a2, &ctx.probes);
            let shown = match &mults {
                Some(m) => decomposition_name(fix, m),
                None => "(no decomposition over the probe list)".into(),
            };
            lines.push(format!("homotopy cokernel: {}", complex_desc(alg, &trip.a2)));
            lines.push(format!("decomposes as: {shown}"));
            lines.push("cokernel triple certified: true".into());
            Ok(Outcome {
                lines,
                json: json!({
                    "command": "hcokernel",
                    "map": name,
                    "cokernel": complex_desc(alg, &trip.a2),
                    "decomposition": mults.as_deref().map(|m| decomposition_json(fix, m)),
                    "certified": true,
                }),
                dot: None,
                ok: true,
            })
        }
        None => {
            lines.push("homotopy cokernel: none within the amplitude window".into());
            Ok(Outcome {
                lines,
                json: json!({ "command": "hcokernel", "map": name, "cokernel": Value::Null }),
                dot: None,
                ok: false,
            })
        }
    }
}

fn path_pullback(fix: &PathFixture, ctx: &PathContext, cospan: &str) -> CmdResult {
    let alg = &fix.algebra;
    let Some((s1, s2)) = cospan.split_once(',') else {
        return Err(InputError(
            "pullback needs a cospan \"MAP,MAP\" of two maps with one target".into(),
        ));
    };
    let (n1, left) = resolve_map(fix, s1.trim())?;
    let (n2, right) = resolve_map(fix, s2.trim())?;
    if *left.tgt != *right.tgt {
        return Err(InputError(format!(
            "cospan legs must share a target: {} ends at {}, {} ends at {}",
            n1,
            object_name(fix, &left.tgt),
            n2,
            object_name(fix, &right.tgt)
        )));
    }
    let mut lines = vec![
        format!("cospan: {} ; {}", map_desc(fix, &n1, &left), map_desc(fix, &n2, &right)),
    ];
    match homotopy_pullback(alg, &HCospan::new(alg, left, right), &ctx.sub, &ctx.test) {
        Some(sq) => {
            let cartesian = is_pullback(alg, &sq, &ctx.test);
            let mults = decompose_by_hom(alg, &sq.x00, &ctx.probes);
            let shown = match &mults {
                Some(m) => decomposition_name(fix, m),
                None => "(no decomposition over the probe list)".into(),
            };
            lines.push(format!("pullback corner: {}", complex_desc(alg, &sq.x00)));
            lines.push(format!("decomposes as: {shown}"));
            lines.push(format!("square is cartesian: {cartesian}"));
            Ok(Outcome {
                lines,
                json: json!({
                    "command": "pullback",
                    "cospan": [n1, n2],
                    "corner": complex_desc(alg, &sq.x00),
                    "decomposition": mults.as_deref().map(|m| decomposition_json(fix, m)),
                    "cartesian": cartesian,
                }),
                dot: None,
                ok: cartesian,
            })
        }
        None => {
            lines.push("no homotopy pullback within the amplitude window".into());
            Ok(Outcome {
                lines,
                json: json!({ "command": "pullback", "cospan": [n1, n2], "corner": Value::Null }),
                dot: None,
                ok: false,
            })
        }
    }
}

fn path_pushout(fix: &PathFixture, ctx: &PathContext, span: &str) -> CmdResult {
    let alg = &fix.algebra;
    let op = alg.opposite();
    let Some((tname, mspec)) = span.split_once(',') else {
        return Err(InputError(
            "pushout needs \"TRIPLE,MAP\": a triple and a map out of its first term".into(),
        ));
    };
    let t = need_triple(fix, tname.trim())?;
    let (mname, a) = resolve_map(fix, mspec.trim())?;
    if *a.src != *t.a0 {
        return Err(InputError(format!(
            "the map must start at the triple's first term {}, but {} starts at {}",
            object_name(fix, &t.a0),
            mname,
            object_name(fix, &a.src)
        )));
    }
    let mut lines = vec![
        format!("triple {}: {}", tname.trim(), triple_desc(fix, &t)),
        format!("along {}", map_desc(fix, &mname, &a)),
    ];
    match pushout_completion(alg, &op, &t, &a, &ctx.sub, &ctx.test) {
        Ok((xp, _)) => {
            let split = is_split(alg, &xp);
            let mults = decompose_by_hom(alg, &xp.a1, &ctx.probes);
            let shown = match &mults {
                Some(m) => decomposition_name(fix, m),
                None => "(no decomposition over the probe list)".into(),
            };
            lines.push(format!("pushed-out conflation: {}", triple_desc(fix, &xp)));
            lines.push(format!("middle decomposes as: {shown}"));
            lines.push(format!("split: {split}"));
            Ok(Outcome {
                lines,
                json: json!({
                    "command": "pushout",
                    "triple": tname.trim(),
                    "along": mname,
                    "result": triple_desc(fix, &xp),
                    "middle_decomposition": mults.as_deref().map(|m| decomposition_json(fix, m)),
                    "split": split,
                }),
                dot: None,
                ok: true,
            })
        }
        Err(e) => {
            lines.push(format!("pushout failed: {e}"));
            Ok(Outcome {
                lines,
                json: json!({ "command": "pushout", "triple": tname.trim(), "error": e }),
                dot: None,
                ok: false,
            })
        }
    }
}

fn path_egroup(fix: &PathFixture, c: &str, a: &str) -> CmdResult {
    let alg = &fix.algebra;
    let cc = need_probe(fix, c)?;
    let ca = need_probe(fix, a)?;
    let group = ext_group(alg, &cc, &ca);
    Ok(Outcome {
        lines: vec![format!("E({c}, {a}): dimension {}", group.dim())],
        json: json!({ "command": "egroup", "c": c, "a": a, "dim": group.dim() }),
        dot: None,
        ok: true,
    })
}

fn path_realize(
    fix: &PathFixture,
    ctx: &PathContext,
    c: &str,
    a: &str,
    delta: &str,
) -> CmdResult {
    let alg = &fix.algebra;
    let cc = need_probe(fix, c)?;
    let ca = need_probe(fix, a)?;
    let group = ext_group(alg, &cc, &ca);
    let coords = parse_coords(alg, delta, group.dim())?;
    let class = group.from_coords(alg, &coords);
    let mut lines = vec![format!("class {} in E({c}, {a})", scalars_text(&coords))];
    match realize(alg, &class, &ctx.sub, &ctx.test) {
        Ok(conf) => {
            let split = is_split(alg, &conf.triple);
            let mults = decompose_by_hom(alg, &conf.triple.a1, &ctx.probes);
            let shown = match &mults {
                Some(m) => decomposition_name(fix, m),
                None => "(no decomposition over the probe list)".into(),
            };
            let round_trip = conf
                .class
                .as_ref()
                .map(|r| scalars_text(&group.coords(alg, r)));
            let matches = conf.class.as_ref().map(|r| r.eq_class(alg, &class));
            lines.push(format!("conflation: {}", triple_desc(fix, &conf.triple)));
            lines.push(format!("middle decomposes as: {shown}"));
            lines.push(format!("restricted conflation: {}", conf.verdict.is_exact()));
            lines.push(format!("ambient exact: {}", conf.ambient));
            lines.push(format!("split: {split}"));
            match (&round_trip, matches) {
                (Some(rt), Some(m)) => {
                    lines.push(format!("class round-trip: {rt} ({})", if m { "matches" } else { "MISMATCH" }))
                }
                _ => lines.push("class round-trip: unavailable".into()),
            }
            let ok = conf.verdict.is_exact() && matches.unwrap_or(false);
            Ok(Outcome {
                lines,
                json: json!({
                    "command": "realize",
                    "c": c,
                    "a": a,
                    "delta": scalars_text(&coords),
                    "conflation": triple_desc(fix, &conf.triple),
                    "middle_decomposition": mults.as_deref().map(|m| decomposition_json(fix, m)),
                    "restricted_conflation": conf.verdict.is_exact(),
                    "ambient_exact": conf.ambient,
                    "split": split,
                    "round_trip_matches": matches,
                }),
                dot: None,
                ok,
            })
        }
        Err(e) => {
            lines.push(format!("realization failed: {e}"));
            Ok(Outcome {
                lines,
                json: json!({ "command": "realize", "c": c, "a": a, "error": e }),
                dot: None,
                ok: false,
            })
        }
    }
}

fn path_defect(fix: &PathFixture, ctx: &PathContext, c: &str, a: &str, delta: &str) -> CmdResult {
    let alg = &fix.algebra;
    let cc = need_probe(fix, c)?;
    let ca = need_probe(fix, a)?;
    let group = ext_group(alg, &cc, &ca);
    let coords = parse_coords(alg, delta, group.dim())?;
    let class = group.from_coords(alg, &coords);
    let table = defect_of(alg, &class, &ctx.probes, &ctx.sub, &ctx.test)
        .map_err(|e| InputError(format!("defect of the class: {e}")))?;
    let support: Vec<&str> = table
        .support()
        .into_iter()
        .map(|i| ctx.probes.labels[i].as_str())
        .collect();
    let entries: Vec<Value> = table
        .entries
        .iter()
        .map(|(label, d)| json!({ "probe": label, "defect": d }))
        .collect();
    Ok(Outcome {
        lines: vec![
            format!("class {} in E({c}, {a})", scalars_text(&coords)),
            format!("defect: {}", table.render()),
            format!("total: {}", table.total()),
            format!("support: {{{}}}", support.join(",")),
        ],
        json: json!({
            "command": "defect",
            "c": c,
            "a": a,
            "delta": scalars_text(&coords),
            "entries": entries,
            "total": table.total(),
            "support": support,
        }),
        dot: None,
        ok: true,
    })
}

fn path_ar_quiver(fix: &PathFixture, ctx: &PathContext) -> CmdResult {
    let alg = &fix.algebra;
    let quiver = ar_quiver(alg, &ctx.probes, &ctx.sub, &ctx.test)
        .map_err(|e| InputError(format!("almost-split structure: {e}")))?;
    let labels = &quiver.labels;
    let projectives: Vec<&str> = labels
        .iter()
        .enumerate()
        .filter(|(i, _)| quiver.projective[*i])
        .map(|(_, l)| l.as_str())
        .collect();
    let mut lines = vec![
        format!("objects: {}", labels.join(" ")),
        format!("projective: {}", projectives.join(" ")),
        "almost-split conflations:".into(),
    ];
    let mut seq_json = Vec::new();
    for seq in &quiver.sequences {
        let middle = decomposition_name(fix, &seq.middle);
        lines.push(format!(
            "  {} >-> {} ->> {}",
            labels[seq.a_index], middle, labels[seq.c_index]
        ));
        seq_json.push(json!({
            "a": labels[seq.a_index],
            "middle": decomposition_json(fix, &seq.middle),
            "c": labels[seq.c_index],
        }));
    }
    let arrows = quiver.arrows();
    lines.push("arrows:".into());
    let mut arrow_json = Vec::new();
    for &(from, to, mult) in &arrows {
        let suffix = if mult > 1 { format!(" (x{mult})") } else { String::new() };
        lines.push(format!("  {} -> {}{}", labels[from], labels[to], suffix));
        arrow_json.push(json!({ "from": labels[from], "to": labels[to], "mult": mult }));
    }

    let mut dot = String::from("digraph ar_quiver {\n  rankdir=LR;\n  node [shape=box];\n");
    for l in labels {
        dot.push_str(&format!("  \"{l}\";\n"));
    }
    for &(from, to, mult) in &arrows {
        for _ in 0..mult {
            dot.push_str(&format!("  \"{}\" -> \"{}\";\n", labels[from], labels[to]));
        }
    }
    for seq in &quiver.sequences {
        dot.push_str(&format!(
            "  \"{}\" -> \"{}\" [style=dashed,constraint=false];\n",
            labels[seq.c_index], labels[seq.a_index]
        ));
    }
    dot.push('}');

    Ok(Outcome {
        lines,
        json: json!({
            "command": "ar-quiver",
            "objects": labels,
            "projective": projectives,
            "sequences": seq_json,
            "arrows": arrow_json,
        }),
        dot: Some(dot),
        ok: true,
    })
}

fn path_lattice(fix: &PathFixture, ctx: &PathContext, samples: usize, seed: u64) -> CmdResult {
    let alg = &fix.algebra;
    let lattice = substructure_lattice(alg, &ctx.probes, &ctx.sub, &ctx.test, samples, seed)
        .map_err(|e| InputError(format!("substructure lattice: {e}")))?;
    let nonproj: Vec<&str> = lattice
        .nonprojectives
        .iter()
        .map(|&i| ctx.probes.labels[i].as_str())
        .collect();
    let mut ok = true;
    let mut lines = vec![
        format!("non-projective probes: {}", nonproj.join(" ")),
        format!("substructures: {}", lattice.nodes.len()),
    ];
    let mut node_json = Vec::new();
    for node in &lattice.nodes {
        let total: usize = node.ext_dims.iter().map(|row| row.iter().sum::<usize>()).sum();
        let state = if node.failures.is_empty() { "certified" } else { "FAILED" };
        ok &= node.failures.is_empty();
        lines.push(format!(
            "  {} : total extension dimension {}, {} with {} samples",
            node.label, total, state, node.checked
        ));
        for f in &node.failures {
            lines.push(format!("    {f}"));
        }
        node_json.push(json!({
            "label": node.label,
            "total_ext_dim": total,
            "checked": node.checked,
            "failures": node.failures,
        }));
    }
    lines.push(format!("hasse edges: {}", lattice.hasse.len()));
    let mut edge_json = Vec::new();
    for &(lo, hi) in &lattice.hasse {
        lines.push(format!(
            "  {} < {}",
            lattice.nodes[lo].label, lattice.nodes[hi].label
        ));
        edge_json.push(json!([lattice.nodes[lo].label, lattice.nodes[hi].label]));
    }

    let mut dot = String::from("digraph substructures {\n  rankdir=BT;\n  node [shape=box];\n");
    for (i, node) in lattice.nodes.iter().enumerate() {
        dot.push_str(&format!("  n{} [label=\"{}\"];\n", i, node.label));
    }
    for &(lo, hi) in &lattice.hasse {
        dot.push_str(&format!("  n{lo} -> n{hi};\n"));
    }
    dot.push('}');

    Ok(Outcome {
        lines,
        json: json!({
            "command": "lattice",
            "nonprojective": nonproj,
            "nodes": node_json,
            "hasse": edge_json,
            "seed": seed,
            "samples_per_node": samples,
        }),
        dot: Some(dot),
        ok,
    })
}

fn path_axioms(fix: &PathFixture, ctx: &PathContext, samples: usize, seed: u64) -> CmdResult {
    let alg = &fix.algebra;
    let op = alg.opposite();
    let opts = AxiomOptions { samples, seed, support: None };
    let report = verify_axioms(alg, &op, &ctx.probes, &ctx.sub, &ctx.test, &opts);
    let ok = report.all_ok();
    let mut lines = vec![format!("seed {seed}, samples {samples}")];
    lines.extend(report.render().lines().map(str::to_string));
    lines.push(if ok { "all checks passed".into() } else { "CHECKS FAILED".into() });
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| json!({ "name": c.name, "passed": c.passed, "attempted": c.attempted }))
        .collect();
    Ok(Outcome {
        lines,
        json: json!({
            "command": "verify-axioms",
            "seed": seed,
            "samples": samples,
            "checks": checks,
            "failures": report.failures,
            "all_ok": ok,
        }),
        dot: None,
        ok,
    })
}

fn path_module(fix: &PathFixture, mname: &str, props: bool) -> CmdResult {
    let alg = &fix.algebra;
    let v = fix.module_vertex(mname).ok_or_else(|| {
        let names: Vec<&str> = fix.modules.iter().map(|(l, _)| l.as_str()).collect();
        if names.is_empty() {
            InputError(format!("unknown module {mname:?}: this fixture declares none"))
        } else {
            InputError(format!("unknown module {mname:?} (modules: {})", names.join(", ")))
        }
    })?;
    let m = RightModule::simple(alg, v);
    let mut lines = vec![format!(
        "module {}: simple at vertex {}",
        mname, alg.quiver.vertices[v]
    )];
    let mut json_doc = json!({
        "command": "module",
        "module": mname,
        "vertex": alg.quiver.vertices[v],
    });
    if props {
        let pd = (0..=4).find(|&n| proj_dim_leq(alg, &m, n));
        let op = alg.opposite();
        let (dual, _) = dual_module(alg, &op, &m);
        let dual_pd = (0..=4).find(|&n| proj_dim_leq(&op, &dual, n));
        let refl = is_reflexive(alg, &m);
        let show = |d: Option<usize>| d.map_or(">4".to_string(), |n| n.to_string());
        lines.push(format!(
            "pd={} dual-pd={} reflexive={}",
            show(pd),
            show(dual_pd),
            refl
        ));
        let obj = json_doc.as_object_mut().expect("object");
        obj.insert("pd".into(), json!(pd));
        obj.insert("dual_pd".into(), json!(dual_pd));
        obj.insert("reflexive".into(), json!(refl));
    }
    Ok(Outcome { lines, json: json_doc, dot: None, ok: true })
}

// ---- super commands ------------------------------------------------------

fn need_sv_map(fix: &SuperFixture, label: &str) -> Result<SvMap, InputError> {
    fix.map(label).cloned().ok_or_else(|| {
        let names: Vec<&str> = fix.maps.iter().map(|(l, _)| l.as_str()).collect();
        InputError(format!("unknown map {label:?} (maps: {})", names.join(", ")))
    })
}

fn sv_map_desc(fix: &SuperFixture, name: &str, m: &SvMap) -> String {
    let label_of = |o: &exdg_core::sv::SvObject| {
        for (l, x) in &fix.objects {
            if x == o {
                return l.clone();
            }
        }
        o.label()
    };
    format!(
        "map {} : {} -> {}, degree {}",
        name,
        label_of(&m.src),
        label_of(&m.tgt),
        m.deg
    )
}

fn run_super(cli: &Cli, fix: &SuperFixture) -> CmdResult {
    match &cli.command {
        Command::Basis => sv_basis(fix),
        Command::Hom { x, y } => sv_hom(fix, x, y),
        Command::SvHkernel { map } => sv_kernel_cmd(fix, map, true),
        Command::SvHcokernel { map } => sv_kernel_cmd(fix, map, false),
        Command::StableCheck => sv_stable_cmd(fix, cli.samples.unwrap_or(2), cli.seed),
        other => Err(InputError(format!(
            "{} needs a path-algebra fixture (this one is the super model)",
            other.name()
        ))),
    }
}

fn sv_basis(fix: &SuperFixture) -> CmdResult {
    let mut lines = vec![format!(
        "fixture {}: super vector spaces over {}, sweep bound {}",
        fix.name,
        field_name(fix.field),
        fix.max_dim
    )];
    let mut objects = Vec::new();
    for (l, o) in &fix.objects {
        lines.push(format!("object {} = {}", l, o.label()));
        objects.push(json!({ "label": l, "even": o.even, "odd": o.odd }));
    }
    let mut maps = Vec::new();
    for (l, m) in &fix.maps {
        lines.push(sv_map_desc(fix, l, m));
        maps.push(json!({
            "label": l,
            "src": m.src.label(),
            "tgt": m.tgt.label(),
            "deg": m.deg,
        }));
    }
    Ok(Outcome {
        lines,
        json: json!({
            "command": "basis",
            "fixture": fix.name,
            "field": field_name(fix.field),
            "max_dim": fix.max_dim,
            "objects": objects,
            "maps": maps,
        }),
        dot: None,
        ok: true,
    })
}

fn sv_hom(fix: &SuperFixture, x: &str, y: &str) -> CmdResult {
    let ox = fix
        .object(x)
        .ok_or_else(|| InputError(format!("unknown object {x:?}")))?;
    let oy = fix
        .object(y)
        .ok_or_else(|| InputError(format!("unknown object {y:?}")))?;
    let mut lines = vec![format!("Hom({x}, {y})")];
    let mut rows = Vec::new();
    for n in -3..=2 {
        let dim = sv_hom_dim(ox, oy, n);
        if dim == 0 {
            continue;
        }
        lines.push(format!("  deg {n}: dim {dim}, cohomology {dim}"));
        rows.push(json!({ "deg": n, "dim": dim, "cohomology": dim }));
    }
    lines.push("  (2-periodic in degrees below zero; zero above degree one)".into());
    Ok(Outcome {
        lines,
        json: json!({ "command": "hom", "x": x, "y": y, "degrees": rows }),
        dot: None,
        ok: true,
    })
}

fn sv_kernel_cmd(fix: &SuperFixture, map: &str, kernel: bool) -> CmdResult {
    let g = need_sv_map(fix, map)?;
    if g.deg != 0 {
        return Err(InputError(format!(
            "homotopy (co)kernels act on degree-zero maps; {map} has degree {}",
            g.deg
        )));
    }
    let (trip, obj, what) = if kernel {
        let t = sv_homotopy_kernel(&g);
        let o = t.a().clone();
        (t, o, "kernel")
    } else {
        let t = sv_homotopy_cokernel(&g);
        let o = t.c().clone();
        (t, o, "cokernel")
    };
    let certified = sv_is_conflation(&trip);
    Ok(Outcome {
        lines: vec![
            sv_map_desc(fix, map, &g),
            format!("homotopy {what}: {}", obj.label()),
            format!("conflation certified: {certified}"),
        ],
        json: json!({
            "command": if kernel { "sv-hkernel" } else { "sv-hcokernel" },
            "map": map,
            what: obj.label(),
            "certified": certified,
        }),
        dot: None,
        ok: certified,
    })
}

fn sv_stable_cmd(fix: &SuperFixture, samples: usize, seed: u64) -> CmdResult {
    let report = sv_stable_check(fix.field, fix.max_dim, samples, seed);
    let ok = report.all_ok();
    let mut lines = vec![format!(
        "stable check over {}, dims <= {}, {} samples per pair, seed {}",
        field_name(fix.field),
        fix.max_dim,
        samples,
        seed
    )];
    lines.extend(report.render().lines().map(str::to_string));
    lines.push(if ok { "all checks passed".into() } else { "CHECKS FAILED".into() });
    Ok(Outcome {
        lines,
        json: json!({
            "command": "stable-check",
            "field": field_name(fix.field),
            "max_dim": fix.max_dim,
            "samples_per_pair": samples,
            "seed": seed,
            "objects": report.objects,
            "maps_checked": report.maps_checked,
            "kernels_certified": report.kernels_certified,
            "cokernels_certified": report.cokernels_certified,
            "triples_checked": report.triples_checked,
            "exact_triples": report.exact_triples,
            "mismatched_sides": report.mismatched_sides,
            "failures": report.failures,
            "all_ok": ok,
        }),
        dot: None,
        ok,
    })
}
