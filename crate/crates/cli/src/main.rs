mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use orbring_core::datum::{load_resolution, SkeletonDoc};
use orbring_core::hkr::{self, IsoCandidate};
use orbring_core::verify::{self, Suite};
use orbring_core::{FiniteAlgebra, InvariantRing, OrbifoldDatum, ProductTable, StringyRing, Theory};

#[derive(Parser)]
#[command(
    name = "orbring",
    version,
    about = "Stringy and orbifold product rings from finite corpus data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run check suites on a datum.
    Check {
        path: PathBuf,
        /// Restrict product checks to one theory (default: both).
        #[arg(long, value_parser = parse_theory)]
        theory: Option<Theory>,
        /// Suites to run, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "all", value_parser = parse_suite)]
        suite: Vec<SuiteArg>,
        #[arg(long)]
        json: bool,
    },
    /// Print the structure constants of the stringy product.
    Table {
        path: PathBuf,
        #[arg(long, value_parser = parse_theory, default_value = "chow")]
        theory: Theory,
        /// Print the invariant subring instead.
        #[arg(long)]
        invariant_only: bool,
        #[arg(long)]
        json: bool,
    },
    /// List the age of every twisted-sector component.
    Ages {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Compare the orbifold ring with a resolution-side ring.
    Compare {
        path: PathBuf,
        /// Map skeleton pairing orbifold and resolution generators.
        #[arg(long)]
        map: Option<PathBuf>,
        /// Resolution algebra; defaults to the datum's own resolution block.
        #[arg(long)]
        resolution: Option<PathBuf>,
        /// Match generators by degree when no skeleton is available.
        #[arg(long, conflicts_with = "map")]
        auto: bool,
        #[arg(long, value_parser = parse_theory, default_value = "chow")]
        theory: Theory,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone)]
enum SuiteArg {
    All,
    One(Suite),
}

fn parse_theory(s: &str) -> Result<Theory, String> {
    s.parse().map_err(|e: orbring_core::Error| e.to_string())
}

fn parse_suite(s: &str) -> Result<SuiteArg, String> {
    if s == "all" {
        return Ok(SuiteArg::All);
    }
    s.parse()
        .map(SuiteArg::One)
        .map_err(|e: orbring_core::Error| e.to_string())
}

/// Input that could not be read or built; reported with exit code 2.
struct LoadError(String);

impl<E: std::fmt::Display> From<E> for LoadError {
    fn from(e: E) -> Self {
        LoadError(e.to_string())
    }
}

type Outcome = Result<bool, LoadError>;

fn load(path: &Path) -> Result<Arc<OrbifoldDatum>, LoadError> {
    OrbifoldDatum::load(path)
        .map(Arc::new)
        .map_err(|e| LoadError(format!("{}: {e}", path.display())))
}

fn check(path: &Path, theory: Option<Theory>, suites: &[SuiteArg], json: bool) -> Outcome {
    let d = load(path)?;
    let mut chosen: Vec<Suite> = Vec::new();
    for s in suites {
        let add: &[Suite] = match s {
            SuiteArg::All => &Suite::ALL,
            SuiteArg::One(s) => std::slice::from_ref(s),
        };
        for s in add {
            if !chosen.contains(s) {
                chosen.push(*s);
            }
        }
    }
    chosen.sort();
    let reports = verify::run(&d, &chosen, theory);
    if json {
        println!("{}", render::check_json(&d, &reports));
    } else {
        print!("{}", render::check_text(&d, &reports));
    }
    Ok(verify::all_passed(&reports))
}

fn ring_table(d: Arc<OrbifoldDatum>, theory: Theory, invariant: bool) -> Result<ProductTable, LoadError> {
    let ring = StringyRing::new(d, theory)?;
    Ok(if invariant {
        InvariantRing::new(&ring)?.table().clone()
    } else {
        ring.table().clone()
    })
}

fn table(path: &Path, theory: Theory, invariant: bool, json: bool) -> Outcome {
    let d = load(path)?;
    let name = d.name.clone();
    let t = ring_table(d, theory, invariant)?;
    let title = format!(
        "{} {} ring of {name}",
        theory,
        if invariant { "orbifold" } else { "stringy" }
    );
    if json {
        println!("{}", render::table_json(&title, &t));
    } else {
        print!("{}", render::table_text(&title, &t));
    }
    Ok(true)
}

fn ages(path: &Path, json: bool) -> Outcome {
    let d = load(path)?;
    let rows = render::age_rows(&d)?;
    if json {
        println!("{}", render::ages_json(&d, &rows));
    } else {
        print!("{}", render::ages_text(&rows));
    }
    Ok(true)
}

struct CompareArgs<'a> {
    map: Option<&'a Path>,
    resolution: Option<&'a Path>,
    auto: bool,
    theory: Theory,
    json: bool,
}

fn compare(path: &Path, a: CompareArgs) -> Outcome {
    let d = load(path)?;
    let alg: Arc<FiniteAlgebra> = match (a.resolution, &d.resolution) {
        (Some(p), _) => load_resolution(p).map_err(|e| LoadError(format!("{}: {e}", p.display())))?,
        (None, Some(r)) => r.clone(),
        (None, None) => return Err(LoadError("no resolution given and the datum has none".into())),
    };
    let skeleton: Option<SkeletonDoc> = match a.map {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| LoadError(format!("{}: {e}", p.display())))?;
            Some(serde_json::from_str(&text).map_err(|e| LoadError(format!("{}: {e}", p.display())))?)
        }
        None if a.auto => None,
        None => d.iso_skeleton.clone(),
    };
    let name = d.name.clone();
    let orb = ring_table(d, a.theory, true)?;
    let res = ProductTable::from_algebra(&alg);
    let dims = hkr::compare_graded_dims(&orb, &res);
    // A map can only be built once the dimensions agree.
    let map = match (&skeleton, a.auto && dims.is_match()) {
        (Some(s), _) if dims.is_match() => Some(IsoCandidate::from_skeleton(s, &orb, &res)?),
        (None, true) => Some(IsoCandidate::auto(&orb, &res)?),
        _ => None,
    };
    let report = hkr::compare(&orb, &res, map.as_ref())?;
    if a.json {
        println!("{}", render::compare_json(&name, &report));
    } else {
        print!("{}", render::compare_text(&name, &report));
    }
    Ok(match report.verdict {
        hkr::Verdict::Iso { .. } => true,
        hkr::Verdict::DimsOnly => report.dims.is_match(),
        _ => false,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Check {
            path,
            theory,
            suite,
            json,
        } => check(path, *theory, suite, *json),
        Command::Table {
            path,
            theory,
            invariant_only,
            json,
        } => table(path, *theory, *invariant_only, *json),
        Command::Ages { path, json } => ages(path, *json),
        Command::Compare {
            path,
            map,
            resolution,
            auto,
            theory,
            json,
        } => compare(
            path,
            CompareArgs {
                map: map.as_deref(),
                resolution: resolution.as_deref(),
                auto: *auto,
                theory: *theory,
                json: *json,
            },
        ),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(LoadError(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
