use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fdoa_core::identities::{run_suite, IDENTITY_NAMES};
use fdoa_core::maps::{alpha, beta, p_point, CremonaSetup};
use fdoa_core::model::{
    build_h, build_p, build_q1_in, build_q1_q2, build_q2_in, build_qtilde, build_quadric_q,
    cauchy_schwarz_ok,
};
use fdoa_core::singularities::{
    base_points_h, base_points_v, hc_singularities, pencil_components, singular_points_y,
    v_singularities, z_cap_g, z_singularities, DegenerateCase, SingularReport,
};
use fdoa_core::tracer::{
    emit_csv, emit_svg, equal_velocity_alpha, trace, validate_a0, Branch, TraceConfig,
};
use fdoa_core::{Error, Frame, ProjPoint, Scenario};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "fdoa",
    version,
    about = "Exact and numerical tools for two-sensor FDOA curves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the exact identity suite over seeded random scenarios.
    CheckIdentities {
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Corrupt one coefficient of the named identity (negative control).
        #[arg(long, value_name = "IDENTITY")]
        inject_fault: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Singular points of HC_F, V and Z as JSON lines.
    Singularities {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Trace the real curve, classify branches and write SVG/CSV.
    Trace {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Equal-velocity sweep `start:end:step` over alpha = d / v (v = 1).
        #[arg(long, value_name = "START:END:STEP")]
        alpha_sweep: Option<String>,
        #[arg(long, num_args = 4, allow_hyphen_values = true, value_names = ["Y1MIN", "Y1MAX", "Y2MIN", "Y2MAX"])]
        window: Option<Vec<f64>>,
        #[arg(long, default_value_t = 512)]
        grid: usize,
        #[arg(long, default_value_t = 3)]
        refine_depth: u32,
        #[arg(long, default_value_t = 1e-10)]
        zero_tol: f64,
        /// Write CSV (without --svg, only CSV is written).
        #[arg(long)]
        csv: bool,
        /// Write SVG (without --csv, only SVG is written).
        #[arg(long)]
        svg: bool,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Canonical text of the named polynomials and fixture tables.
    Dump {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct ScenarioArgs {
    /// File of `key=value` lines (v11, v12, v21, v22, d).
    #[arg(long, value_name = "FILE", conflicts_with_all = ["v11", "v12", "v21", "v22", "d"])]
    scenario: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    v11: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    v12: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    v21: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    v22: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    d: Option<String>,
}

impl ScenarioArgs {
    fn is_given(&self) -> bool {
        self.scenario.is_some()
            || [&self.v11, &self.v12, &self.v21, &self.v22, &self.d]
                .iter()
                .any(|v| v.is_some())
    }

    fn load(&self) -> Result<Scenario, Error> {
        if let Some(p) = &self.scenario {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
            return Scenario::parse(&text);
        }
        let mut text = String::new();
        for (k, v) in [
            ("v11", &self.v11),
            ("v12", &self.v12),
            ("v21", &self.v21),
            ("v22", &self.v22),
            ("d", &self.d),
        ] {
            let v = v
                .as_deref()
                .ok_or_else(|| Error::ScenarioParse(format!("missing --{k}")))?;
            let _ = writeln!(text, "{k}={v}");
        }
        Scenario::parse(&text)
    }
}

/// Outcome of a subcommand: 0 success, 1 verification failure, 2 usage error.
enum Outcome {
    Ok,
    VerificationFailed(String),
    Usage(String),
}

impl From<Error> for Outcome {
    fn from(e: Error) -> Self {
        match e {
            Error::ScenarioParse(_)
            | Error::InvalidConfig(_)
            | Error::Io(_)
            | Error::NonRealScenario => Outcome::Usage(e.to_string()),
            other => Outcome::VerificationFailed(other.to_string()),
        }
    }
}

struct Sink {
    lines: Vec<String>,
}

impl Sink {
    fn new() -> Self {
        Self { lines: Vec::new() }
    }

    fn push(&mut self, v: serde_json::Value) {
        self.lines.push(v.to_string());
    }

    fn finish(self, out: Option<&Path>, file: &str) -> Result<(), Error> {
        let text: String = self.lines.iter().map(|l| format!("{l}\n")).collect();
        print!("{text}");
        if let Some(dir) = out {
            write_file(&dir.join(file), &text)?;
        }
        Ok(())
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Error> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| Error::Io(e.to_string()))?;
    }
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn check_identities(n: usize, seed: u64, inject: Option<&str>, out: Option<&Path>) -> Outcome {
    if let Some(name) = inject {
        if !IDENTITY_NAMES.contains(&name) {
            return Outcome::Usage(format!(
                "unknown identity {name:?}; known: {}",
                IDENTITY_NAMES.join(", ")
            ));
        }
    }
    let report = run_suite(n, seed, None, inject);
    let mut sink = Sink::new();
    for r in &report.results {
        sink.push(serde_json::to_value(r).expect("serializable"));
    }
    let failed = report.failed_identities();
    sink.push(json!({
        "summary": true,
        "seed": seed,
        "scenarios": n,
        "checks": report.results.len(),
        "passed": report.all_passed(),
        "failed_identities": failed,
    }));
    if let Err(e) = sink.finish(out, "identities.jsonl") {
        return e.into();
    }
    match report.first_failure() {
        None => Outcome::Ok,
        Some(f) => Outcome::VerificationFailed(format!(
            "identity {} failed on scenario {}: {}",
            f.identity, f.scenario_index, f.detail
        )),
    }
}

fn push_report(sink: &mut Sink, name: &str, r: Result<SingularReport, Error>) {
    match r {
        Ok(rep) => {
            for l in rep.to_json_lines() {
                sink.push(l);
            }
            sink.push(json!({"variety": rep.variety, "count": rep.len(), "genus": rep.genus, "notes": rep.notes}));
        }
        Err(e) => sink.push(json!({"variety": name, "error": e.to_string()})),
    }
}

fn singularities(s: &Scenario, out: Option<&Path>) -> Outcome {
    let mut sink = Sink::new();
    let degenerate = s.equal_velocity_v().and_then(|v| {
        if v.is_zero() {
            Some(DegenerateCase::VZero)
        } else if s.d.is_zero() {
            Some(DegenerateCase::DZero)
        } else {
            None
        }
    });
    if let Some(case) = degenerate {
        match pencil_components(s, case) {
            Ok(dec) => {
                for c in &dec.components {
                    let real: Vec<String> = c
                        .real_points()
                        .map(|v| v.iter().map(ProjPoint::canonical_text).collect())
                        .unwrap_or_default();
                    sink.push(json!({
                        "component": c.name,
                        "variety": c.variety,
                        "frame": c.frame.to_string(),
                        "equations": c.equations.iter().map(|e| e.to_text()).collect::<Vec<_>>(),
                        "real_points": real,
                    }));
                }
                for (name, ok) in &dec.cover_identities {
                    sink.push(json!({"cover_identity": name, "holds": ok}));
                }
                if !dec.covers() {
                    let _ = sink.finish(out, "singularities.jsonl");
                    return Outcome::VerificationFailed("a cover identity failed".into());
                }
            }
            Err(e) => sink.push(json!({"decomposition": "error", "error": e.to_string()})),
        }
    } else {
        push_report(&mut sink, "HC_F", hc_singularities(s));
        push_report(&mut sink, "V", v_singularities(s));
        push_report(&mut sink, "Z", z_singularities(s));
        match z_cap_g(s) {
            Ok(g) => sink.push(json!({
                "variety": "Z cap G",
                "count": g.count(),
                "exact": g.is_exact(),
                "points": g.exact_points().iter().map(ProjPoint::canonical_text).collect::<Vec<_>>(),
            })),
            Err(e) => sink.push(json!({"variety": "Z cap G", "error": e.to_string()})),
        }
    }
    match sink.finish(out, "singularities.jsonl") {
        Ok(()) => Outcome::Ok,
        Err(e) => e.into(),
    }
}

fn parse_sweep(text: &str) -> Result<Vec<f64>, Error> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || Error::InvalidConfig(format!("alpha sweep {text:?} must be START:END:STEP"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    let (a, b, step) = (nums[0], nums[1], nums[2]);
    if step.is_nan() || step <= 0.0 || b < a {
        return Err(bad());
    }
    let count = ((b - a) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| a + i as f64 * step).collect())
}

struct TraceOpts {
    cfg: TraceConfig,
    csv: bool,
    svg: bool,
    out: PathBuf,
}

fn trace_one(s: &Scenario, tag: &str, opts: &TraceOpts, sink: &mut Sink) -> Result<bool, Error> {
    let r = trace(s, &opts.cfg)?;
    let app = r.branch(Branch::App);
    let validation = validate_a0(s, app);
    std::fs::create_dir_all(&opts.out).map_err(|e| Error::Io(e.to_string()))?;
    let mut files = Vec::new();
    if opts.svg {
        let p = opts.out.join(format!("trace{tag}.svg"));
        emit_svg(&r.branches, opts.cfg.window, &p)?;
        files.push(p.display().to_string());
    }
    if opts.csv {
        let p = opts.out.join(format!("trace{tag}.csv"));
        emit_csv(&r.branches, &p)?;
        files.push(p.display().to_string());
    }
    let counts: serde_json::Map<String, serde_json::Value> = r
        .branches
        .iter()
        .map(|b| (b.label.label().to_string(), json!(b.vertex_count())))
        .collect();
    let bounded: serde_json::Map<String, serde_json::Value> = r
        .touches_boundary
        .iter()
        .map(|(b, t)| (b.label().to_string(), json!(!t)))
        .collect();
    let (ok, max_dev, err) = match &validation {
        Ok(rep) => (true, Some(rep.max_deviation), None),
        Err(Error::ValidationFailure { max_deviation, .. }) => (
            false,
            Some(*max_deviation),
            validation.as_ref().err().map(|e| e.to_string()),
        ),
        Err(e) => (false, None, Some(e.to_string())),
    };
    sink.push(json!({
        "scenario": s.to_json(),
        "alpha": app.alpha,
        "cauchy_schwarz": cauchy_schwarz_ok(s).ok(),
        "vertices": counts,
        "bounded_in_window": bounded,
        "max_h_residual": r.max_residual,
        "rejected_crossings": r.rejected,
        "max_fdoa_deviation_app": max_dev,
        "a0_valid": ok,
        "error": err,
        "files": files,
    }));
    Ok(ok)
}

fn run_trace(scen: &ScenarioArgs, sweep: Option<&str>, opts: TraceOpts) -> Outcome {
    let mut jobs: Vec<(Scenario, String)> = Vec::new();
    if let Some(sw) = sweep {
        let alphas = match parse_sweep(sw) {
            Ok(a) => a,
            Err(e) => return e.into(),
        };
        for a in alphas {
            match equal_velocity_alpha(a) {
                Ok(s) => jobs.push((s, format!("_alpha_{a}"))),
                Err(e) => return e.into(),
            }
        }
    } else {
        match scen.load() {
            Ok(s) => jobs.push((s, String::new())),
            Err(e) => return Outcome::Usage(e.to_string()),
        }
    }
    if let Err(e) = opts.cfg.validate() {
        return e.into();
    }
    let mut sink = Sink::new();
    let mut failures = Vec::new();
    for (s, tag) in &jobs {
        match trace_one(s, tag, &opts, &mut sink) {
            Ok(true) => {}
            Ok(false) => failures.push(format!("A++ validation failed for {s}")),
            Err(e) => {
                let _ = sink.finish(None, "");
                return e.into();
            }
        }
    }
    if let Err(e) = sink.finish(None, "") {
        return e.into();
    }
    if failures.is_empty() {
        Outcome::Ok
    } else {
        Outcome::VerificationFailed(failures.join("; "))
    }
}

fn dump_text(s: &Scenario) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "# scenario\n{s}\n");
    let (q1, q2) = build_q1_q2();
    let _ = writeln!(t, "# Q1 [ORIGINAL]\n{}\n", q1.to_text());
    let _ = writeln!(t, "# Q2 [ORIGINAL]\n{}\n", q2.to_text());
    for f in [Frame::W, Frame::Z] {
        let _ = writeln!(t, "# Q [{f}]\n{}\n", build_quadric_q(f).to_text());
        let _ = writeln!(t, "# Q1 [{f}]\n{}\n", build_q1_in(f).to_text());
        let _ = writeln!(t, "# Q2 [{f}]\n{}\n", build_q2_in(f).to_text());
    }
    for f in [Frame::Original, Frame::W, Frame::Z] {
        let _ = writeln!(t, "# Qtilde [{f}]\n{}\n", build_qtilde(s, f).to_text());
    }
    let _ = writeln!(t, "# P [U]\n{}\n", build_p(s).to_text());
    let _ = writeln!(t, "# h [PLANE]\n{}\n", build_h(s).to_text());
    match CremonaSetup::both(s) {
        Ok(setups) => {
            for c in setups {
                let _ = writeln!(t, "# Vtilde [Q] t = {}\n{}\n", c.t, c.v_tilde().to_text());
            }
        }
        Err(e) => {
            let _ = writeln!(t, "# Vtilde\nunavailable: {e}\n");
        }
    }
    let _ = writeln!(t, "# singular points of Y [W]");
    for (j, p) in singular_points_y().iter().enumerate() {
        let _ = writeln!(t, "p{} {}", j + 1, p.canonical_text());
    }
    let _ = writeln!(t, "\n# base points of H [Z]");
    for p in base_points_h() {
        let _ = writeln!(t, "{}", p.canonical_text());
    }
    let _ = writeln!(t, "\n# base points of V [U]");
    for p in base_points_v() {
        let _ = writeln!(t, "{}", p.canonical_text());
    }
    let _ = writeln!(t, "\n# map fixtures");
    for c in [[1i64, 1, 1], [1, 2, 3], [2, -1, 1], [1, 0, 0]] {
        let u = ProjPoint::from_ints(Frame::U, &c);
        let b = beta(&u).map(|r| {
            r.image()
                .map(ProjPoint::canonical_text)
                .unwrap_or_else(|| "undefined".into())
        });
        let _ = writeln!(
            t,
            "beta {} -> {}",
            u.canonical_text(),
            b.unwrap_or_else(|e| e.to_string())
        );
    }
    for j in 1..=4 {
        let p = p_point(j);
        let a = alpha(&p).map(|r| {
            r.image()
                .map(ProjPoint::canonical_text)
                .unwrap_or_else(|| "undefined".into())
        });
        let _ = writeln!(t, "alpha p{j} -> {}", a.unwrap_or_else(|e| e.to_string()));
    }
    t
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::CheckIdentities {
            n,
            seed,
            inject_fault,
            out,
        } => check_identities(n, seed, inject_fault.as_deref(), out.as_deref()),
        Command::Singularities { scenario, out } => match scenario.load() {
            Ok(s) => singularities(&s, out.as_deref()),
            Err(e) => Outcome::Usage(e.to_string()),
        },
        Command::Trace {
            scenario,
            alpha_sweep,
            window,
            grid,
            refine_depth,
            zero_tol,
            csv,
            svg,
            out,
        } => {
            if alpha_sweep.is_some() && scenario.is_given() {
                Outcome::Usage("--alpha-sweep cannot be combined with a scenario".into())
            } else {
                let mut cfg = TraceConfig {
                    grid: (grid, grid),
                    refine_depth,
                    zero_tol,
                    ..TraceConfig::default()
                };
                if let Some(w) = window {
                    cfg.window = (w[0], w[1], w[2], w[3]);
                }
                let (csv, svg) = if !csv && !svg {
                    (true, true)
                } else {
                    (csv, svg)
                };
                run_trace(
                    &scenario,
                    alpha_sweep.as_deref(),
                    TraceOpts { cfg, csv, svg, out },
                )
            }
        }
        Command::Dump { scenario, out } => match scenario.load() {
            Ok(s) => {
                let text = dump_text(&s);
                print!("{text}");
                match out {
                    Some(dir) => match write_file(&dir.join("dump.txt"), &text) {
                        Ok(()) => Outcome::Ok,
                        Err(e) => e.into(),
                    },
                    None => Outcome::Ok,
                }
            }
            Err(e) => Outcome::Usage(e.to_string()),
        },
    };
    let _ = std::io::stdout().flush();
    match outcome {
        Outcome::Ok => ExitCode::SUCCESS,
        Outcome::VerificationFailed(msg) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Outcome::Usage(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
