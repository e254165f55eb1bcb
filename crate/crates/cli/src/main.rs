use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use prymkit::cover::{parse_tower_file, write_cover, write_tower, GluedCover, GluedTower, Loaded};
use prymkit::delpezzo;
use prymkit::f2::{self, fano, SymplecticF2};
use prymkit::polygonal::{bigonal, local_tags, tetragonal, trigonal_forward, trigonal_inverse, Construction};
use prymkit::suites::{run_suite, SuiteConfig, SUITES};

/// Largest genus `f2 --enumerate-theta` will enumerate.
const MAX_THETA_GENUS: usize = 8;

#[derive(Parser)]
#[command(name = "prymkit", version, about = "Monodromy-level polygonal constructions and their combinatorics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect tower files.
    Cover {
        #[command(subcommand)]
        command: CoverCommand,
    },
    /// Run a polygonal construction on a tower file.
    Construct {
        #[arg(long, value_enum)]
        kind: Kind,
        input: PathBuf,
        /// Output files are PREFIX.tower (or PREFIX.0.tower, PREFIX.1.tower) and PREFIX.tags.
        #[arg(short = 'o', long = "output")]
        prefix: PathBuf,
    },
    /// Run a named verification suite.
    Verify {
        /// A suite name, or "all".
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Random cases per check; defaults to the suite's own count.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        cases: Option<u64>,
    },
    /// Census of lines on a blow-up of the plane in general points.
    Lines {
        #[arg(long, value_parser = clap::value_parser!(u64).range(0..=6))]
        blowups: u64,
        /// Lines of the nodal cubic.
        #[arg(long)]
        nodal: bool,
        /// Planes and rulings of the Segre cubic.
        #[arg(long)]
        segre: bool,
        /// Write the incidence graph in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Quadratic forms on a symplectic F2 space.
    F2 {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        enumerate_theta: bool,
    },
    /// Labelings of the Fano plane.
    Diagram {
        #[arg(long)]
        fano_solve: bool,
        /// Only labelings with at least one T point.
        #[arg(long)]
        require_t: bool,
    },
}

#[derive(Subcommand)]
enum CoverCommand {
    /// Degree, genera, connectivity, étale-ness and degeneration type.
    Info { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Bigonal,
    Trigonal,
    TrigonalInverse,
    Tetragonal,
}

/// Input or usage errors exit with 2; failed checks exit with 1.
enum Failure {
    Checks,
    Usage(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

impl From<std::fmt::Error> for Failure {
    fn from(e: std::fmt::Error) -> Self {
        Failure::Usage(e.into())
    }
}

impl From<prymkit::error::Error> for Failure {
    fn from(e: prymkit::error::Error) -> Self {
        Failure::Usage(e.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let result = match cli.command {
        Command::Cover { command: CoverCommand::Info { file } } => cover_info(&file, &mut out),
        Command::Construct { kind, input, prefix } => construct(kind, &input, &prefix, &mut out),
        Command::Verify { suite, seed, cases } => verify(&suite, seed, cases, &mut out),
        Command::Lines { blowups, nodal, segre, dot } => {
            lines(blowups as usize, nodal, segre, dot.as_deref(), &mut out)
        }
        Command::F2 { genus, enumerate_theta } => theta(genus, enumerate_theta, &mut out),
        Command::Diagram { fano_solve, require_t } => diagram(fano_solve, require_t, &mut out),
    };
    // a closed pipe downstream is not an error
    let _ = io::stdout().lock().write_all(out.as_bytes());
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn load(path: &Path) -> anyhow::Result<Loaded> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file = parse_tower_file(&text).with_context(|| format!("loading {}", path.display()))?;
    file.load().with_context(|| format!("loading {}", path.display()))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn describe_curve(name: &str, c: &GluedCover) -> String {
    let mut genera = c.cover().component_genera();
    genera.sort_unstable();
    let genera: Vec<String> = genera.iter().map(i64::to_string).collect();
    format!(
        "{name}: degree {}, components {}, component genera [{}], nodes {}",
        c.cover().degree(),
        c.connected_components(),
        genera.join(", "),
        c.nodes().len()
    )
}

fn cover_info(path: &Path, out: &mut String) -> Result<(), Failure> {
    match load(path)? {
        Loaded::Cover(c) => {
            writeln!(out, "cover of degree {} over a base of genus {}", c.cover().degree(), c.cover().base().genus())?;
            writeln!(out, "genus C={}, connected: {}", c.arithmetic_genus(), yes(c.is_connected()))?;
            writeln!(out, "{}", describe_curve("C", &c))?;
        }
        Loaded::Tower(t) => {
            let (down, up) = (t.downstairs(), t.upstairs());
            let tower = t.tower();
            writeln!(out, "tower of degree {} over a base of genus {}", tower.degree(), tower.base().genus())?;
            writeln!(
                out,
                "genus C={}, genus C~={}, etale: {}",
                down.arithmetic_genus(),
                up.arithmetic_genus(),
                yes(tower.is_etale_double())
            )?;
            writeln!(out, "connected: C {}, C~ {}", yes(down.is_connected()), yes(up.is_connected()))?;
            writeln!(out, "{}", describe_curve("C", &down))?;
            writeln!(out, "{}", describe_curve("C~", &up))?;
            writeln!(out, "ramification points of C~ -> C: {}", tower.ramified_points().len())?;
            if !t.nodes().is_empty() {
                let a = t.is_allowable();
                let ty = t.degeneration_type().map_or_else(|| "mixed".to_string(), |d| d.to_string());
                writeln!(out, "allowable: {}, type: {ty}", yes(a.allowable))?;
                writeln!(out, "reason: {}", a.reason)?;
                let types: Vec<String> = t.node_types().iter().map(ToString::to_string).collect();
                writeln!(out, "node types: {}", types.join(" "))?;
            }
        }
    }
    Ok(())
}

fn expect_tower(loaded: Loaded, kind: &str) -> anyhow::Result<GluedTower> {
    match loaded {
        Loaded::Tower(t) => Ok(t),
        Loaded::Cover(_) => bail!("{kind} needs a tower file with signs"),
    }
}

fn tag_report(construction: Construction, t: &GluedTower) -> anyhow::Result<String> {
    let mut out = String::new();
    for (label, tag) in t.tower().base().labels().iter().zip(local_tags(construction, t)?) {
        writeln!(out, "{label}: {tag}")?;
    }
    Ok(out)
}

fn write_file(path: &Path, text: &str, out: &mut String) -> anyhow::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    writeln!(out, "wrote {}", path.display())?;
    Ok(())
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn tower_text(t: &GluedTower) -> String {
    write_tower(t.tower(), t.nodes())
}

fn construct(kind: Kind, input: &Path, prefix: &Path, out: &mut String) -> Result<(), Failure> {
    let loaded = load(input)?;
    let (outputs, report) = match kind {
        Kind::Bigonal => {
            let t = expect_tower(loaded, "bigonal")?;
            let out = bigonal(&t)?;
            (vec![tower_text(&out)], tag_report(Construction::Bigonal, &t)?)
        }
        Kind::Trigonal => {
            let t = expect_tower(loaded, "trigonal")?;
            let x = trigonal_forward(&t)?;
            (vec![write_cover(x.cover(), x.nodes())], tag_report(Construction::Trigonal, &t)?)
        }
        Kind::TrigonalInverse => {
            let x = match loaded {
                Loaded::Cover(c) if c.nodes().is_empty() => c.cover().clone(),
                Loaded::Cover(_) => return Err(anyhow!("trigonal-inverse needs a smooth cover").into()),
                Loaded::Tower(_) => return Err(anyhow!("trigonal-inverse needs a cover file without signs").into()),
            };
            let t = trigonal_inverse(&x)?;
            (vec![tower_text(&t)], tag_report(Construction::Trigonal, &t)?)
        }
        Kind::Tetragonal => {
            let t = expect_tower(loaded, "tetragonal")?;
            let (a, b) = tetragonal(&t)?;
            (vec![tower_text(&a), tower_text(&b)], tag_report(Construction::Tetragonal, &t)?)
        }
    };
    if outputs.len() == 1 {
        write_file(&with_suffix(prefix, ".tower"), &outputs[0], out)?;
    } else {
        for (i, text) in outputs.iter().enumerate() {
            write_file(&with_suffix(prefix, &format!(".{i}.tower")), text, out)?;
        }
    }
    write_file(&with_suffix(prefix, ".tags"), &report, out)?;
    write!(out, "{report}")?;
    Ok(())
}

fn verify(suite: &str, seed: u64, cases: Option<u64>, out: &mut String) -> Result<(), Failure> {
    let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite] };
    if suite != "all" && !SUITES.contains(&suite) {
        return Err(anyhow!("unknown suite {suite:?}; known: all, {}", SUITES.join(", ")).into());
    }
    let cases = cases.map(usize::try_from).transpose().map_err(|_| anyhow!("--cases is too large"))?;
    let config = SuiteConfig { seed, cases };
    let mut failed = false;
    for name in names {
        let start = Instant::now();
        let report = run_suite(name, &config)?;
        write!(out, "{report}")?;
        eprintln!("{name}: wall time {:.3}s", start.elapsed().as_secs_f64());
        failed |= !report.passed();
    }
    if failed {
        Err(Failure::Checks)
    } else {
        Ok(())
    }
}

fn lines(r: usize, nodal: bool, segre: bool, dot: Option<&Path>, out: &mut String) -> Result<(), Failure> {
    let ls = delpezzo::lines(r)?;
    writeln!(out, "blowups {r}: {} lines", ls.len())?;
    let names: Vec<String> = ls.iter().map(ToString::to_string).collect();
    writeln!(out, "lines: {}", names.join(" "))?;
    if r >= 5 {
        let (weyl, stab) = delpezzo::weyl_orders(r)?;
        let g = delpezzo::incidence_graph(r)?;
        let degrees: std::collections::BTreeSet<usize> = g.degrees().into_iter().collect();
        writeln!(out, "weyl group order {weyl}, line stabilizer {stab}")?;
        let degrees: Vec<String> = degrees.iter().map(usize::to_string).collect();
        writeln!(out, "incidence degrees {}", degrees.join(","))?;
        if let Some((v, k, l, m)) = g.strongly_regular_parameters() {
            writeln!(out, "strongly regular ({v},{k},{l},{m})")?;
        }
        if let Some(path) = dot {
            write_file(path, &g.to_dot(&format!("lines{r}")), out)?;
        }
    } else if dot.is_some() {
        return Err(anyhow!("--dot needs --blowups 5 or 6").into());
    }
    if r == 6 {
        writeln!(out, "tritangents {}", delpezzo::tritangents().len())?;
        writeln!(out, "double-sixes {}", delpezzo::double_sixes().len())?;
    }
    if (nodal || segre) && r != 6 {
        return Err(anyhow!("--nodal and --segre need --blowups 6").into());
    }
    if nodal {
        let n = delpezzo::nodal_specialize();
        writeln!(
            out,
            "nodal cubic: {} doubled lines, {} single lines, {} conflicts",
            n.doubled(),
            n.singles(),
            n.conflicts.len()
        )?;
        for (a, b) in &n.edges {
            writeln!(out, "  {a} meets {b}")?;
        }
    }
    if segre {
        let s = delpezzo::segre_structure()?;
        writeln!(
            out,
            "segre cubic: {} objects, {} incidences, {} ruling triples, {} plane triples",
            s.objects.len(),
            s.incidences.len(),
            s.ruling_triples.len(),
            s.plane_triples.len()
        )?;
        writeln!(
            out,
            "pentagon: {} components, {} nodes, arithmetic genus {}",
            s.pentagon.cover().components().len(),
            s.pentagon.nodes().len(),
            s.pentagon.arithmetic_genus()
        )?;
        writeln!(
            out,
            "wheel: components {}, triple point through {:?}",
            s.wheel.components.join(", "),
            s.wheel.triple_point
        )?;
    }
    Ok(())
}

fn theta(genus: usize, enumerate: bool, out: &mut String) -> Result<(), Failure> {
    if genus == 0 || genus > MAX_THETA_GENUS {
        return Err(anyhow!("--genus must be in 1..={MAX_THETA_GENUS}").into());
    }
    let (even, odd) = f2::parity_counts(genus);
    writeln!(out, "genus {genus}: {} theta characteristics, even {even}, odd {odd}", even + odd)?;
    if enumerate {
        let s = SymplecticF2::standard(genus);
        let forms = f2::all_forms(&s);
        let odd_seen = forms.iter().filter(|q| q.arf() == 1).count() as u64;
        let even_seen = forms.len() as u64 - odd_seen;
        writeln!(out, "enumerated {} forms: even {even_seen}, odd {odd_seen}", forms.len())?;
        if (even_seen, odd_seen) != (even, odd) {
            return Err(Failure::Checks);
        }
    }
    Ok(())
}

fn diagram(fano_solve: bool, require_t: bool, out: &mut String) -> Result<(), Failure> {
    if !fano_solve {
        return Err(anyhow!("nothing to do; pass --fano-solve").into());
    }
    let sols = fano::fano_solve(require_t);
    for d in &sols {
        writeln!(out, "{}", fano::describe(d))?;
    }
    let orbits = fano::orbits(&sols);
    for (i, orbit) in orbits.iter().enumerate() {
        writeln!(out, "orbit {}: {} labelings", i + 1, orbit.len())?;
    }
    writeln!(out, "solutions={} orbits={}", sols.len(), orbits.len())?;
    Ok(())
}
