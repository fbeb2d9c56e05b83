use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anick::bar_oracle::{bar_cohomology, finite_basis, DEFAULT_ROW_CAP};
use anick::chains::enumerate_chains;
use anick::conformal::{check_associativity, weyl_iso_check};
use anick::hochschild::{cohomology, validate_bimodule};
use anick::morse::validate_matching;
use anick::resolution::{build_resolution, check_composition};
use anick::weyl::{
    coboundary_witness, differential_report, generic_cocycle_relations, heisenberg_fixture, shorthand, w1_presentation,
    PeirceType,
};
use anick::{FiniteBimodule, QPresentation, Resolution};
use clap::{Args, Parser, Subcommand};

/// Anick resolutions, Hochschild cohomology and the W1 / Cend_k showcases.
#[derive(Parser, Debug)]
#[command(name = "anick", version)]
struct Cli {
    /// Suppress progress messages on stderr (results are always printed).
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the Anick chains V^(n), one per line.
    Chains {
        #[arg(long)]
        degree: usize,
        presentation: PathBuf,
    },
    /// Print the Anick differential δ_n on every chain of V^(n-1).
    Diff {
        #[arg(long)]
        degree: usize,
        presentation: PathBuf,
    },
    /// Build δ_1..δ_N, verify every composition and the matching.
    CheckResolution {
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        presentation: PathBuf,
        /// Write the resolution as JSON.
        #[arg(long)]
        export: Option<PathBuf>,
        /// Re-check a previously exported resolution instead of building one.
        #[arg(long)]
        load: Option<PathBuf>,
    },
    /// dim H^n(A, M) from the Anick complex.
    Cohomology {
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
        presentation: PathBuf,
        #[command(flatten)]
        module: ModuleArg,
    },
    /// Compare Anick-complex cohomology with the normalized bar complex.
    OracleCompare {
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        presentation: PathBuf,
        #[command(flatten)]
        module: ModuleArg,
        /// Largest number of bar-cochain rows the oracle may build per degree.
        #[arg(long, default_value_t = DEFAULT_ROW_CAP)]
        row_cap: usize,
    },
    /// Run the W1 and U(H3) pipeline end to end.
    WeylDemo,
    /// Check A+(Cend_k) ≅ M_k(W1) on a monomial window.
    ConformalCheck {
        #[arg(long, default_value_t = 1)]
        rank: usize,
        #[arg(long, default_value_t = 6)]
        window: u32,
    },
}

#[derive(Args, Debug)]
struct ModuleArg {
    /// Bimodule JSON file.
    #[arg(long, conflicts_with = "regular")]
    bimodule: Option<PathBuf>,
    /// Use the regular bimodule of a finite-dimensional algebra.
    #[arg(long)]
    regular: bool,
}

/// Input problems exit with 2, failed mathematical checks with 1.
enum Failure {
    Input(String),
    Check(String),
}

type Outcome = Result<String, Failure>;

fn input<E: std::fmt::Display>(what: impl std::fmt::Display) -> impl FnOnce(E) -> Failure {
    move |e| Failure::Input(format!("{what}: {e}"))
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(input(path.display()))
}

fn load_presentation(path: &Path) -> Result<QPresentation, Failure> {
    QPresentation::from_json_str(&read(path)?).map_err(input(path.display()))
}

fn load_module(pres: &QPresentation, arg: &ModuleArg) -> Result<(String, FiniteBimodule), Failure> {
    let m = match (&arg.bimodule, arg.regular) {
        (Some(path), _) => {
            let m = FiniteBimodule::from_json_str(&read(path)?, pres.alphabet()).map_err(input(path.display()))?;
            (path.display().to_string(), m)
        }
        (None, true) => {
            let alg = finite_basis(pres).map_err(input("regular bimodule"))?;
            ("regular".to_string(), alg.regular_bimodule(pres))
        }
        (None, false) => ("trivial 1-dim".to_string(), FiniteBimodule::trivial(pres.alphabet(), 1)),
    };
    validate_bimodule(&m.1, pres).map_err(input(&m.0))?;
    Ok(m)
}

struct Progress(bool);

impl Progress {
    fn say(&self, msg: impl std::fmt::Display) {
        if !self.0 {
            eprintln!("{msg}");
        }
    }
}

fn resolution(pres: &QPresentation, n: usize, progress: &Progress) -> Result<Resolution, Failure> {
    progress.say(format_args!("building resolution to degree {n}"));
    build_resolution(pres, n).map_err(|e| Failure::Check(e.to_string()))
}

fn chains(degree: usize, path: &Path) -> Outcome {
    let pres = load_presentation(path)?;
    let mut out = String::new();
    for c in enumerate_chains(&pres, degree) {
        writeln!(out, "{}", c.display(pres.alphabet())).unwrap();
    }
    Ok(out)
}

fn diff(degree: usize, path: &Path, progress: &Progress) -> Outcome {
    if degree == 0 {
        return Err(Failure::Input("--degree must be at least 1".into()));
    }
    let pres = load_presentation(path)?;
    let res = resolution(&pres, degree, progress)?;
    let a = pres.alphabet();
    let mut out = String::new();
    for (c, d) in res.slice(degree).expect("built").iter() {
        writeln!(out, "δ_{degree}{} = {}", c.display(a), d.display(a)).unwrap();
    }
    Ok(out)
}

fn check_resolution(max_degree: usize, path: &Path, export: Option<&Path>, load: Option<&Path>, progress: &Progress) -> Outcome {
    let pres = load_presentation(path)?;
    let res = match load {
        Some(file) => Resolution::from_json_str(&pres, &read(file)?).map_err(input(file.display()))?,
        None => resolution(&pres, max_degree, progress)?,
    };
    let a = pres.alphabet();
    let mut out = String::new();
    writeln!(out, "presentation {}", pres.content_hash()).unwrap();
    for s in res.slices() {
        writeln!(out, "|V^({})| = {}", s.degree() - 1, s.basis().len()).unwrap();
    }
    let mut ok = true;
    for n in 1..res.max_degree() {
        let report = check_composition(&pres, res.slice(n + 1).expect("slice"), res.slice(n).expect("slice"));
        let bad: Vec<String> = report.nonzero().map(|(c, r)| format!("{} -> {}", c.display(a), r.display(a))).collect();
        writeln!(out, "δ_{n}δ_{}: {} chains, {} nonzero residues", n + 1, report.residues.len(), bad.len()).unwrap();
        for b in &bad {
            writeln!(out, "  {b}").unwrap();
        }
        ok &= bad.is_empty();
    }
    progress.say("validating the Morse matching");
    match validate_matching(&pres, res.max_degree()) {
        Ok(r) => writeln!(out, "matching: {} vertices, {} critical, acyclic", r.vertices, r.critical).unwrap(),
        Err(e) => {
            writeln!(out, "matching: {e}").unwrap();
            ok = false;
        }
    }
    if let Some(file) = export {
        std::fs::write(file, res.to_json_string(a)).map_err(input(file.display()))?;
        writeln!(out, "exported {}", file.display()).unwrap();
    }
    if ok {
        Ok(out)
    } else {
        Err(Failure::Check(out))
    }
}

fn cohomology_cmd(max_degree: usize, path: &Path, module: &ModuleArg, progress: &Progress) -> Outcome {
    let pres = load_presentation(path)?;
    let (name, m) = load_module(&pres, module)?;
    let res = resolution(&pres, max_degree + 1, progress)?;
    let report = cohomology(&res, &m, max_degree).map_err(|e| Failure::Check(e.to_string()))?;
    let mut out = format!("M = {name} (dim {})\n", m.dim());
    for (n, d) in report.dims.iter().enumerate() {
        writeln!(out, "dim H^{n} = {d}   (dim C^{n} = {}, rank Δ^{n} = {})", report.cochain_dims[n], report.ranks[n]).unwrap();
    }
    Ok(out)
}

fn oracle_compare(max_degree: usize, path: &Path, module: &ModuleArg, row_cap: usize, progress: &Progress) -> Outcome {
    let pres = load_presentation(path)?;
    let (name, m) = load_module(&pres, module)?;
    let alg = finite_basis(&pres).map_err(input(path.display()))?;
    let res = resolution(&pres, max_degree + 1, progress)?;
    let anick = cohomology(&res, &m, max_degree).map_err(|e| Failure::Check(e.to_string()))?.dims;
    progress.say("running the bar-complex oracle");
    let bar = bar_cohomology(&alg, &m, max_degree, row_cap).map_err(|e| Failure::Check(e.to_string()))?;
    let mut out = format!("M = {name}, dim A = {}\n", alg.dim());
    writeln!(out, "anick: {anick:?}").unwrap();
    writeln!(out, "bar:   {bar:?}").unwrap();
    if anick == bar {
        writeln!(out, "agree for n = 0..{max_degree}").unwrap();
        Ok(out)
    } else {
        writeln!(out, "DISAGREE").unwrap();
        Err(Failure::Check(out))
    }
}

fn weyl_demo(progress: &Progress) -> Outcome {
    let w1 = w1_presentation();
    let a = w1.alphabet();
    let res = resolution(&w1, 4, progress)?;
    let mut out = String::from("== W1: qp = pq + e, pe = p, qe = q, eq = q, ep = p, ee = e (q > p > e)\n");
    for s in res.slices() {
        writeln!(out, "|V^({})| = {}", s.degree() - 1, s.basis().len()).unwrap();
    }
    for n in [3, 4] {
        writeln!(out, "\n== δ_{n}").unwrap();
        for (c, d) in res.slice(n).expect("built").iter() {
            writeln!(out, "δ_{n}{} = {}", shorthand(c, a), d.display(a)).unwrap();
        }
    }
    let report = differential_report(&w1, &res).map_err(|e| Failure::Check(e.to_string()))?;
    writeln!(out, "\n== comparison with the reference tables\n{report}").unwrap();
    let mut ok = report.compositions_vanish();

    writeln!(out, "== generic 3-cocycles and coboundary certificates").unwrap();
    let mut certified = 0;
    for ty in PeirceType::ALL {
        let cert = generic_cocycle_relations(&w1, &res, ty).and_then(|sol| {
            write!(out, "{sol}").unwrap();
            coboundary_witness(&w1, &res, &sol)
        });
        match cert {
            Ok(c) if c.is_exact() => {
                write!(out, "{c}").unwrap();
                certified += 1;
            }
            Ok(c) => write!(out, "{c}").unwrap(),
            Err(e) => writeln!(out, "type {ty}: {e}").unwrap(),
        }
    }

    progress.say("checking U(H3)");
    let h = heisenberg_fixture().map_err(|e| Failure::Check(e.to_string()))?;
    let ha = h.presentation.alphabet();
    writeln!(out, "\n== U(H3): xy = yx + z, xz = zx, yz = zy").unwrap();
    writeln!(out, "|V^(k)| for k = 0..3: {:?}", h.chain_counts).unwrap();
    writeln!(out, "δ_3[x|y|z] = {}", h.delta3_xyz.display(ha)).unwrap();
    writeln!(out, "reference formula: {}", if h.delta3_matches_printed() { "MATCH" } else { "DISCREPANCY" }).unwrap();
    writeln!(out, "left restriction vs Chevalley-Eilenberg: {}", if h.ce_agrees() { "equal" } else { "DIFFERENT" }).unwrap();
    ok &= h.delta3_matches_printed() && h.ce_agrees() && h.counts_are_binomial();

    writeln!(out, "\n{certified}/4 coboundary certificates OK").unwrap();
    if ok && certified == 4 {
        Ok(out)
    } else {
        Err(Failure::Check(out))
    }
}

fn conformal_check(rank: usize, window: u32, progress: &Progress) -> Outcome {
    if rank == 0 {
        return Err(Failure::Input("--rank must be at least 1".into()));
    }
    if window < 2 {
        return Err(Failure::Input("--window must be at least 2".into()));
    }
    let w1 = w1_presentation();
    progress.say(format_args!("checking rank {rank}, window {window}"));
    let cert = weyl_iso_check(&w1, window, rank).map_err(|e| Failure::Check(e.to_string()))?;
    let mut out = cert.to_string();
    let triples = check_associativity(5).map_err(|e| Failure::Check(e.to_string()))?;
    writeln!(out, "associativity: {triples} monomial triples of total degree <= 5").unwrap();
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let progress = Progress(cli.quiet);
    let outcome = match &cli.command {
        Command::Chains { degree, presentation } => chains(*degree, presentation),
        Command::Diff { degree, presentation } => diff(*degree, presentation, &progress),
        Command::CheckResolution { max_degree, presentation, export, load } => {
            check_resolution(*max_degree, presentation, export.as_deref(), load.as_deref(), &progress)
        }
        Command::Cohomology { max_degree, presentation, module } => cohomology_cmd(*max_degree, presentation, module, &progress),
        Command::OracleCompare { max_degree, presentation, module, row_cap } => {
            oracle_compare(*max_degree, presentation, module, *row_cap, &progress)
        }
        Command::WeylDemo => weyl_demo(&progress),
        Command::ConformalCheck { rank, window } => conformal_check(*rank, *window, &progress),
    };
    match outcome {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Check(msg)) => {
            print!("{msg}");
            eprintln!("check failed");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
