use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C;
use serde::Serialize;
use serde_json::{json, Value};

use orbitchar::compact_char::weyl_character;
use orbitchar::eigendist::LocalExpression;
use orbitchar::fixed_point::{coefficient_table, discrete_series_expression, induced_expression};
use orbitchar::lie_core::{build_root_system, Weight};
use orbitchar::orbit_geom::{conormal_circle_cycle, dlogf_graph_cycle, omega_orbit_cycle, Cycle};
use orbitchar::real_structure::{CartanElement, OrbitLabel, StandardSheafDescriptor};
use orbitchar::suite::{self, SeriesCase, SCHEMA};
use orbitchar::testfn::TestFunction;

const CSV_HELP: &str = "CSV columns: u,v (cycle parameters); base_re,base_im,fiber_re,fiber_im \
(cotangent point in the z chart, empty on orbit sheets); x_re,x_im,y_re,y_im,z_re,z_im \
(entries of the coadjoint value [[x,y],[z,-x]]); density_re,density_im (integrand form on \
(d/du,d/dv) before orientation); orientation (+1 or -1).";

#[derive(Parser)]
#[command(
    name = "orbitchar",
    version,
    about = "Characters of SU(2), compact groups and SL(2,R)"
)]
struct Cli {
    /// Worker threads for parallel quadrature.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the JSON report to a file instead of stdout; for `cycles dump`
    /// the CSV destination.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Keep wall-clock `runtime_ms` fields in reports.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Character values.
    #[command(subcommand)]
    Char(CharCmd),
    /// Fixed-point coefficient table of a standard sheaf.
    Coeffs(CoeffsArgs),
    /// Verification suites; exit code 2 when a tolerance is missed.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Cycle samples.
    #[command(subcommand)]
    Cycles(CyclesCmd),
}

#[derive(Subcommand)]
enum CharCmd {
    /// Weyl character of a compact group at a torus point.
    Weyl {
        #[arg(long = "type")]
        type_label: String,
        /// Highest weight in fundamental-weight coordinates, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        /// Torus coordinates, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
        #[arg(long)]
        json: bool,
    },
    /// Discrete series of SL(2,R) with parameter `-k`.
    Ds {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value = "upper")]
        sheaf: String,
        #[command(flatten)]
        at: AtArgs,
    },
    /// Principal series of SL(2,R).
    Ps {
        /// Complex parameter, e.g. `0`, `0.5i`, `1+2i`.
        #[arg(long, allow_hyphen_values = true)]
        nu: String,
        #[arg(long, default_value = "+1", allow_hyphen_values = true)]
        chif: String,
        #[command(flatten)]
        at: AtArgs,
    },
}

#[derive(Args)]
struct AtArgs {
    #[arg(long, value_enum)]
    cartan: CartanArg,
    /// Angle on the compact Cartan.
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    /// Parameter `s` on the split Cartan.
    #[arg(long, allow_hyphen_values = true)]
    s: Option<f64>,
    /// Sign of the split component.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    eps: i8,
    /// Print the Lie algebra value at `theta J` or `s H` instead.
    #[arg(long)]
    algebra: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum CartanArg {
    Compact,
    Split,
}

#[derive(Args)]
struct CoeffsArgs {
    #[arg(long)]
    sheaf: String,
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
    #[arg(long, default_value = "+1", allow_hyphen_values = true)]
    chif: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    Ds,
    Ps,
}

impl From<CaseArg> for SeriesCase {
    fn from(c: CaseArg) -> Self {
        match c {
            CaseArg::Ds => SeriesCase::Ds,
            CaseArg::Ps => SeriesCase::Ps,
        }
    }
}

#[derive(Args)]
struct BatteryArgs {
    /// Number of gaussian test functions.
    #[arg(long, default_value_t = 5)]
    battery: usize,
    #[arg(long, default_value_t = 5)]
    seed: u64,
}

impl BatteryArgs {
    fn functions(&self) -> Vec<TestFunction> {
        TestFunction::battery(self.battery, self.seed)
    }
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Pointwise Kirillov formula on SU(2).
    Kirillov {
        #[arg(long, default_value = "0..5")]
        m: String,
        #[arg(long, default_value_t = 50)]
        grid: usize,
    },
    /// Discrete series against orbit-sheet integrals.
    Rossmann {
        #[arg(long, default_value = "1..3")]
        k: String,
        #[command(flatten)]
        battery: BatteryArgs,
    },
    /// Character pairings against characteristic-cycle integrals.
    IntegralFormula {
        #[arg(long, value_enum)]
        case: CaseArg,
        #[command(flatten)]
        battery: BatteryArgs,
    },
    /// Pullback of the orbit form under the twisted moment map.
    #[command(visible_alias = "prop33")]
    Pullback {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Eigendistribution residuals.
    Eigen {
        #[arg(long, value_enum)]
        case: CaseArg,
        #[command(flatten)]
        battery: BatteryArgs,
    },
    /// Coherent continuation checks.
    Coherent {
        /// Also run eigen checks on three translates (slow).
        #[arg(long)]
        eigen: bool,
    },
    /// `d log f` graph geometry.
    Geometry {
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Fixed points of regular Cartan elements on the projective line.
    Covering {
        #[arg(long, default_value_t = 300)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum CyclesCmd {
    #[command(after_help = CSV_HELP)]
    /// Write cycle samples as CSV.
    Dump {
        #[arg(long, value_enum)]
        cycle: CycleArg,
        /// Parameter `l`; defaults to -1 for sheets and 0.5i for the conormal cycle.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        /// Fibre radius.
        #[arg(long, default_value_t = 4.0)]
        r: f64,
        /// Samples per parameter direction.
        #[arg(long, default_value_t = 16)]
        n: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CycleArg {
    Conormal,
    Dlogf,
    Orbit,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Run(String),
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn run_err(e: impl std::fmt::Display) -> Failure {
    Failure::Run(e.to_string())
}

fn parse_complex(s: &str) -> Result<C, Failure> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if let Ok(x) = t.parse::<f64>() {
        return Ok(C::new(x, 0.0));
    }
    let body = t
        .strip_suffix('i')
        .ok_or_else(|| usage(format!("cannot parse complex number `{s}`")))?;
    let split = body
        .char_indices()
        .skip(1)
        .filter(|&(i, c)| (c == '+' || c == '-') && !body[..i].ends_with(['e', 'E']))
        .map(|(i, _)| i)
        .last();
    let bad = || usage(format!("cannot parse complex number `{s}`"));
    let im = |p: &str| -> Result<f64, Failure> {
        match p {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => p.parse().map_err(|_| bad()),
        }
    };
    match split {
        Some(i) => Ok(C::new(
            body[..i].parse().map_err(|_| bad())?,
            im(&body[i..])?,
        )),
        None => Ok(C::new(0.0, im(body)?)),
    }
}

fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, Failure> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| usage(format!("bad list entry `{p}`")))
        })
        .collect()
}

/// `a..b` (inclusive), a single value or a comma list.
fn parse_range(s: &str) -> Result<Vec<u32>, Failure> {
    if let Some((a, b)) = s.split_once("..") {
        let a: u32 = a
            .trim()
            .parse()
            .map_err(|_| usage(format!("bad range `{s}`")))?;
        let b: u32 = b
            .trim()
            .parse()
            .map_err(|_| usage(format!("bad range `{s}`")))?;
        if a > b {
            return Err(usage(format!("empty range `{s}`")));
        }
        return Ok((a..=b).collect());
    }
    parse_list(s)
}

fn parse_chif(s: &str) -> Result<i8, Failure> {
    match s.trim() {
        "+1" | "1" => Ok(1),
        "-1" => Ok(-1),
        _ => Err(usage(format!("chi_F must be +1 or -1, got `{s}`"))),
    }
}

fn fmt_real(x: f64) -> String {
    let r = (x * 1e10).round() / 1e10;
    let r = if r == 0.0 { 0.0 } else { r };
    format!("{r:?}")
}

fn fmt_value(z: C) -> String {
    if fmt_real(z.im) == "0.0" {
        fmt_real(z.re)
    } else {
        format!(
            "{}{}{}i",
            fmt_real(z.re),
            if z.im < 0.0 { "-" } else { "+" },
            fmt_real(z.im.abs())
        )
    }
}

fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("runtime_ms");
            m.values_mut().for_each(strip_timing);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

struct Output {
    json_out: Option<PathBuf>,
    timing: bool,
}

impl Output {
    fn emit(
        &self,
        command: &str,
        pass: Option<bool>,
        report: impl Serialize,
    ) -> Result<(), Failure> {
        let mut report = serde_json::to_value(report).map_err(run_err)?;
        if !self.timing {
            strip_timing(&mut report);
        }
        let mut doc = json!({ "schema": SCHEMA, "command": command });
        if let Some(p) = pass {
            doc["pass"] = json!(p);
        }
        doc["report"] = report;
        let text = serde_json::to_string_pretty(&doc).map_err(run_err)? + "\n";
        match &self.json_out {
            Some(p) => std::fs::write(p, text).map_err(run_err),
            None => std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(run_err),
        }
    }
}

fn char_value(
    e: &LocalExpression,
    at: &AtArgs,
    out: &Output,
    command: &str,
) -> Result<(), Failure> {
    let (t, zeta) = match at.cartan {
        CartanArg::Compact => {
            let th = at
                .theta
                .ok_or_else(|| usage("--theta is required on the compact Cartan"))?;
            (CartanElement::Compact { theta: th }, [0.0, th, -th])
        }
        CartanArg::Split => {
            let s =
                at.s.ok_or_else(|| usage("--s is required on the split Cartan"))?;
            if at.eps != 1 && at.eps != -1 {
                return Err(usage("--eps must be 1 or -1"));
            }
            (CartanElement::Split { eps: at.eps, s }, [s, 0.0, 0.0])
        }
    };
    let group = e.evaluate_group(t).map_err(run_err)?;
    let algebra = if matches!(t, CartanElement::Split { eps: -1, .. }) {
        None
    } else {
        Some(e.evaluate_algebra(zeta).map_err(run_err)?)
    };
    if at.json {
        let pair = |z: C| [z.re, z.im];
        return out.emit(
            command,
            None,
            json!({ "element": t, "group": pair(group), "algebra": algebra.map(pair), "expression": e }),
        );
    }
    let v = if at.algebra {
        algebra.ok_or_else(|| usage("no Lie algebra value on the eps = -1 component"))?
    } else {
        group
    };
    println!("{}", fmt_value(v));
    Ok(())
}

fn run_char(cmd: CharCmd, out: &Output) -> Result<bool, Failure> {
    match cmd {
        CharCmd::Weyl {
            type_label,
            lambda,
            theta,
            json,
        } => {
            let rs = build_root_system(&type_label).map_err(usage)?;
            let lam = Weight::from_ints(&parse_list::<i64>(&lambda)?);
            let th: Vec<f64> = parse_list(&theta)?;
            let v = weyl_character(&rs, &lam, &th).map_err(usage)?;
            if json {
                out.emit("char weyl", None, json!({ "type": type_label, "lambda": lam, "theta": th, "value": [v.re, v.im] }))?;
            } else {
                println!("{}", fmt_value(v));
            }
        }
        CharCmd::Ds { k, sheaf, at } => {
            let label: OrbitLabel = sheaf.parse().map_err(usage)?;
            if k == 0 {
                return Err(usage("--k must be positive"));
            }
            let e = discrete_series_expression(label, C::new(-f64::from(k), 0.0)).map_err(usage)?;
            char_value(&e, &at, out, "char ds")?;
        }
        CharCmd::Ps { nu, chif, at } => {
            let e = induced_expression(parse_chif(&chif)?, parse_complex(&nu)?).map_err(usage)?;
            char_value(&e, &at, out, "char ps")?;
        }
    }
    Ok(true)
}

fn run_verify(cmd: VerifyCmd, out: &Output) -> Result<bool, Failure> {
    let (name, pass, report) = match cmd {
        VerifyCmd::Kirillov { m, grid } => {
            let r = suite::kirillov_suite(&parse_range(&m)?, grid).map_err(run_err)?;
            ("verify kirillov", r.pass, serde_json::to_value(r))
        }
        VerifyCmd::Rossmann { k, battery } => {
            let ks = parse_range(&k)?;
            if ks.contains(&0) {
                return Err(usage("--k must be positive"));
            }
            let r = suite::rossmann_suite(&ks, &battery.functions()).map_err(run_err)?;
            ("verify rossmann", r.pass, serde_json::to_value(r))
        }
        VerifyCmd::IntegralFormula { case, battery } => {
            let r = suite::integral_formula_suite(case.into(), &battery.functions())
                .map_err(run_err)?;
            ("verify integral-formula", r.pass, serde_json::to_value(r))
        }
        VerifyCmd::Pullback { samples, seed } => {
            let r = suite::pullback_suite(samples, seed);
            ("verify pullback", r.pass, serde_json::to_value(r))
        }
        VerifyCmd::Eigen { case, battery } => {
            let r = suite::eigen_suite(case.into(), &battery.functions()).map_err(run_err)?;
            ("verify eigen", r.pass, serde_json::to_value(r))
        }
        VerifyCmd::Coherent { eigen } => {
            let bat = if eigen {
                TestFunction::battery(3, 7)
            } else {
                Vec::new()
            };
            let r = suite::coherent_suite(&bat).map_err(run_err)?;
            ("verify coherent", r.pass, serde_json::to_value(r))
        }
        VerifyCmd::Geometry { k, samples } => {
            if k == 0 {
                return Err(usage("--k must be positive"));
            }
            let r = suite::geometry_suite(k, samples).map_err(run_err)?;
            ("verify geometry", r.pass, serde_json::to_value(r))
        }
        VerifyCmd::Covering { samples, seed } => {
            let r = suite::covering_suite(samples, seed);
            ("verify covering", r.pass, serde_json::to_value(r))
        }
    };
    out.emit(name, Some(pass), report.map_err(run_err)?)?;
    Ok(pass)
}

#[derive(Serialize)]
struct CsvRow {
    u: f64,
    v: f64,
    base_re: Option<f64>,
    base_im: Option<f64>,
    fiber_re: Option<f64>,
    fiber_im: Option<f64>,
    x_re: f64,
    x_im: f64,
    y_re: f64,
    y_im: f64,
    z_re: f64,
    z_im: f64,
    density_re: f64,
    density_im: f64,
    orientation: f64,
}

fn dump_cycle(cycle: &Cycle, r: f64, n: usize, path: &Path) -> Result<usize, Failure> {
    let mut w = csv::Writer::from_writer(File::create(path).map_err(run_err)?);
    let samples = cycle.samples(r, n, n);
    for s in &samples {
        let p = s
            .point
            .and_then(|p| p.to_chart(orbitchar::orbit_geom::Chart::Z));
        let y = s.value;
        w.serialize(CsvRow {
            u: s.params[0],
            v: s.params[1],
            base_re: p.map(|p| p.base.re),
            base_im: p.map(|p| p.base.im),
            fiber_re: p.map(|p| p.fiber.re),
            fiber_im: p.map(|p| p.fiber.im),
            x_re: y[(0, 0)].re,
            x_im: y[(0, 0)].im,
            y_re: y[(0, 1)].re,
            y_im: y[(0, 1)].im,
            z_re: y[(1, 0)].re,
            z_im: y[(1, 0)].im,
            density_re: s.density.re,
            density_im: s.density.im,
            orientation: cycle.orientation,
        })
        .map_err(run_err)?;
    }
    w.flush().map_err(run_err)?;
    Ok(samples.len())
}

fn run_cycles(cmd: CyclesCmd, path: Option<PathBuf>, out: &Output) -> Result<bool, Failure> {
    let CyclesCmd::Dump {
        cycle,
        lambda,
        r,
        n,
    } = cmd;
    let path = path.ok_or_else(|| usage("cycles dump needs --out <file.csv>"))?;
    if r.is_nan() || r <= 0.0 || n == 0 {
        return Err(usage("--r must be positive and --n at least 1"));
    }
    let up = OrbitLabel::UpperHalfPlane;
    let cyc = match cycle {
        CycleArg::Conormal => {
            conormal_circle_cycle(parse_complex(lambda.as_deref().unwrap_or("0.5i"))?)
        }
        CycleArg::Dlogf => dlogf_graph_cycle(up, parse_complex(lambda.as_deref().unwrap_or("-1"))?)
            .map_err(usage)?,
        CycleArg::Orbit => omega_orbit_cycle(up, parse_complex(lambda.as_deref().unwrap_or("-1"))?)
            .map_err(usage)?,
    };
    let rows = dump_cycle(&cyc, r, n, &path)?;
    out.emit(
        "cycles dump",
        None,
        json!({ "cycle": cyc, "rows": rows, "path": path.display().to_string() }),
    )?;
    Ok(true)
}

fn run(cli: Cli) -> Result<bool, Failure> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(run_err)?;
    }
    let dump = matches!(cli.command, Command::Cycles(_));
    let out = Output {
        json_out: if dump { None } else { cli.out.clone() },
        timing: cli.timing,
    };
    match cli.command {
        Command::Char(c) => run_char(c, &out),
        Command::Coeffs(a) => {
            let label: OrbitLabel = a.sheaf.parse().map_err(usage)?;
            let sheaf = StandardSheafDescriptor::new(
                label,
                parse_complex(&a.lambda)?,
                i32::from(parse_chif(&a.chif)?),
            )
            .map_err(usage)?;
            let table = coefficient_table(&sheaf).map_err(usage)?;
            out.emit("coeffs", None, json!({ "records": table }))?;
            Ok(true)
        }
        Command::Verify(v) => run_verify(v, &out),
        Command::Cycles(c) => run_cycles(c, cli.out, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Run(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("0").unwrap(), C::new(0.0, 0.0));
        assert_eq!(parse_complex("0.5i").unwrap(), C::new(0.0, 0.5));
        assert_eq!(parse_complex("1-2i").unwrap(), C::new(1.0, -2.0));
        assert_eq!(parse_complex("-i").unwrap(), C::new(0.0, -1.0));
        assert_eq!(parse_complex("1e-3+1e-2i").unwrap(), C::new(1e-3, 1e-2));
        assert!(parse_complex("abc").is_err());
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("0..3").unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(parse_range("2").unwrap(), vec![2]);
        assert_eq!(parse_range("1,4").unwrap(), vec![1, 4]);
        assert!(parse_range("3..1").is_err());
    }

    #[test]
    fn value_format() {
        assert_eq!(fmt_value(C::new(-0.9999999999999998, 0.0)), "-1.0");
        assert_eq!(fmt_value(C::new(-1e-17, 0.0)), "0.0");
        assert_eq!(fmt_value(C::new(0.5, -0.25)), "0.5-0.25i");
    }
}
