mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use farey_core::decoration::canonical_decoration;
use farey_core::example::{golden_table, log_grid, not_pinched_falsifier, qs_ratio_scan};
use farey_core::farey::farey_edges_in_window;
use farey_core::real::parse_rational;
use farey_core::shear::{check_ps_certificate, check_qs_certificate, develop, DevelopOptions, FanScanParams};
use farey_core::triangulation::{check_transitivity_bound, max_crossing, random_flips, simultaneous_flip};
use farey_core::{
    Arith, Decoration, Error, Exec, ExtRat, FlipSet, LambdaAssignment, Real, ShearFunction, Window,
    WindowTriangulation,
};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "farey", version, about = "Exact computations on the Farey triangulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Run scans on one thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Subcommand)]
enum Command {
    /// List the Farey edges inside a window.
    Farey(WindowArg),
    /// Develop a shear function into a vertex map.
    Develop {
        #[command(flatten)]
        window: WindowArg,
        #[command(flatten)]
        shear: ShearArg,
        #[command(flatten)]
        arith: ArithArg,
        /// Farey triangle fixed by the map.
        #[arg(long, num_args = 3, value_names = ["A", "B", "C"])]
        normalization: Option<Vec<String>>,
    },
    /// Fan ratio scan for the quasisymmetry certificate.
    CheckQs {
        #[command(flatten)]
        shear: ShearArg,
        #[command(flatten)]
        scan: ScanArgs,
        /// Ratio bound, e.g. 512 or 7/2.
        #[arg(long)]
        bound: String,
        #[command(flatten)]
        arith: ArithArg,
        #[arg(long)]
        assert: bool,
    },
    /// Partial-sum scan for the Penner-Sullivan certificate.
    CheckPs {
        #[command(flatten)]
        shear: ShearArg,
        #[command(flatten)]
        scan: ScanArgs,
        /// Multiplier bound `b`; passes when the sup is at most `ln b`.
        #[arg(long)]
        bound: Option<String>,
        #[command(flatten)]
        arith: ArithArg,
        #[arg(long)]
        assert: bool,
    },
    /// Apply a flip sequence, carrying lambda lengths along when given.
    Flip {
        /// Triangulation JSON (file or inline); defaults to the Farey window.
        #[arg(long)]
        triangulation: Option<String>,
        #[command(flatten)]
        window: WindowArg,
        /// Flip sequence JSON: a list of edge lists.
        #[arg(long, conflicts_with = "random")]
        flips: Option<String>,
        /// Lambda assignment JSON, or a single number for a constant assignment.
        #[arg(long)]
        lambdas: Option<String>,
        /// Apply this many random flip sets instead of `--flips`.
        #[arg(long)]
        random: Option<usize>,
        /// Largest random flip set.
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Crossing numbers between triangulations.
    Intersect {
        #[arg(long)]
        t1: String,
        #[arg(long)]
        t2: String,
        /// Also check the transitivity bound against a third triangulation.
        #[arg(long)]
        t3: Option<String>,
        #[arg(long)]
        assert: bool,
    },
    /// Golden table, case scan and falsifier table for the example.
    Example {
        #[arg(long, default_value_t = 8)]
        k_max: u32,
        /// Scan out to 16^grid_pow.
        #[arg(long, default_value_t = 5)]
        grid_pow: u32,
        /// Grid points per factor of 16.
        #[arg(long, default_value_t = 16)]
        steps: u32,
        /// Pinching bounds M for the falsifier table.
        #[arg(long, num_args = 1.., default_values = ["2", "10", "100"])]
        bound: Vec<String>,
        #[arg(long)]
        assert: bool,
    },
    /// SVG of a triangulation in the Poincare disk.
    Render {
        #[command(flatten)]
        window: WindowArg,
        /// Triangulation JSON; defaults to the Farey window.
        #[arg(long)]
        triangulation: Option<String>,
        /// Decoration JSON, or `canonical`.
        #[arg(long)]
        decoration: Option<String>,
        /// Image size in pixels.
        #[arg(long, default_value_t = 800)]
        size: u32,
    },
}

#[derive(Args)]
struct WindowArg {
    /// Largest |numerator| and largest denominator.
    #[arg(long, num_args = 2, value_names = ["NUM", "DEN"], default_values = ["16", "16"])]
    window: Vec<String>,
    /// Leave infinity out of the window.
    #[arg(long)]
    finite: bool,
}

#[derive(Args)]
struct ShearArg {
    /// Builtin rule name or shear-function JSON (file or inline).
    #[arg(long, default_value = "zero")]
    shear: String,
}

#[derive(Args)]
struct ArithArg {
    #[arg(long, conflicts_with = "float")]
    exact: bool,
    #[arg(long)]
    float: bool,
}

#[derive(Args)]
struct ScanArgs {
    /// Fan tips, e.g. `inf 0 1/2`.
    #[arg(long, alias = "fan", num_args = 1.., default_values = ["inf"])]
    tips: Vec<String>,
    /// Inclusive index range on each fan.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_hyphen_values = true, conflicts_with = "range")]
    k_range: Option<Vec<String>>,
    /// Shorthand for `--k-range -R R`; accepts powers such as 16^5.
    #[arg(long)]
    range: Option<String>,
    #[arg(long, default_value = "16")]
    n_max: String,
}

struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::DegenerateDevelopment(_) => (3, "degenerate-development"),
            Error::InvalidFlipSet(_) | Error::BoundaryEdge(_) | Error::NotQuadrilateral(_) => (4, "invalid-flip-set"),
            Error::Parse(_)
            | Error::InvalidArgument(_)
            | Error::InvalidWindow(_)
            | Error::NotFareyEdge(_)
            | Error::Crossing(_, _)
            | Error::Undefined
            | Error::EqualPoints(_)
            | Error::NonPositive(_) => (2, "schema"),
            _ => (1, "error"),
        };
        Failure {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

fn schema(msg: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        kind: "schema",
        message: msg.into(),
    }
}

fn certificate_failure(report: &Value) -> Failure {
    Failure {
        code: 5,
        kind: "certificate-failure",
        message: report.to_string(),
    }
}

type Out = Result<Output, Failure>;

enum Output {
    Json(Value),
    Text(String),
}

/// Accepts `n`, `-n` or `a^b`.
fn parse_int(s: &str) -> Result<BigInt, Failure> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let bad = || schema(format!("not an integer: {s:?}"));
    let v = match body.split_once('^') {
        Some((b, e)) => {
            let b: BigInt = b.parse().map_err(|_| bad())?;
            let e: u32 = e.parse().map_err(|_| bad())?;
            b.pow(e)
        }
        None => body.parse().map_err(|_| bad())?,
    };
    Ok(if neg { -v } else { v })
}

fn parse_i64(s: &str) -> Result<i64, Failure> {
    i64::try_from(parse_int(s)?).map_err(|_| schema(format!("{s} does not fit in 64 bits")))
}

fn parse_u64(s: &str) -> Result<u64, Failure> {
    u64::try_from(parse_int(s)?).map_err(|_| schema(format!("{s} is not a nonnegative 64-bit integer")))
}

/// Inline JSON when the argument looks like JSON, else a file path.
fn load_json(arg: &str) -> Result<Value, Failure> {
    let text = if arg.trim_start().starts_with(['{', '[']) {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| schema(format!("{arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| schema(format!("{arg}: {e}")))
}

fn parse_json<T: serde::de::DeserializeOwned>(arg: &str) -> Result<T, Failure> {
    serde_json::from_value(load_json(arg)?).map_err(|e| schema(format!("{arg}: {e}")))
}

impl WindowArg {
    fn get(&self) -> Result<Window, Failure> {
        Ok(Window::new(parse_u64(&self.window[0])?, parse_u64(&self.window[1])?, !self.finite)?)
    }
}

impl ShearArg {
    fn get(&self) -> Result<ShearFunction, Failure> {
        match ShearFunction::builtin(&self.shear) {
            Ok(s) => Ok(s),
            Err(_) if !self.shear.trim_start().starts_with(['{', '[']) && !std::path::Path::new(&self.shear).exists() => {
                Err(schema(format!("unknown shear {:?}: not a builtin rule or a file", self.shear)))
            }
            Err(_) => Ok(ShearFunction::from_json(&load_json(&self.shear)?)?),
        }
    }
}

impl ArithArg {
    fn get(&self) -> Arith {
        if self.float {
            Arith::Float
        } else {
            Arith::Exact
        }
    }
}

impl ScanArgs {
    fn get(&self) -> Result<FanScanParams, Failure> {
        let tips = self
            .tips
            .iter()
            .map(|t| t.parse::<ExtRat>())
            .collect::<Result<Vec<_>, _>>()?;
        let k_range = match (&self.k_range, &self.range) {
            (Some(r), _) => (parse_i64(&r[0])?, parse_i64(&r[1])?),
            (None, Some(r)) => {
                let r = parse_i64(r)?;
                (-r, r)
            }
            (None, None) => (-64, 64),
        };
        Ok(FanScanParams::new(tips, k_range, parse_u64(&self.n_max)?)?)
    }
}

fn load_triangulation(arg: Option<&str>, window: &WindowArg) -> Result<WindowTriangulation, Failure> {
    match arg {
        None | Some("farey") => Ok(WindowTriangulation::farey(&window.get()?)?),
        Some(a) => Ok(WindowTriangulation::from_json(&load_json(a)?)?),
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn run(cli: &Cli) -> Out {
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };
    match &cli.command {
        Command::Farey(w) => {
            let w = w.get()?;
            let edges = farey_edges_in_window(&w);
            Ok(Output::Json(json!({
                "window": to_value(&w),
                "vertices": w.vertex_count(),
                "edges": to_value(&edges),
            })))
        }
        Command::Develop {
            window,
            shear,
            arith,
            normalization,
        } => {
            let mut opts = DevelopOptions {
                arith: arith.get(),
                ..DevelopOptions::default()
            };
            if let Some(n) = normalization {
                opts.normalization = [n[0].parse()?, n[1].parse()?, n[2].parse()?];
            }
            let h = develop(&shear.get()?, &window.get()?, &opts)?;
            Ok(Output::Json(h.to_json()))
        }
        Command::CheckQs {
            shear,
            scan,
            bound,
            arith,
            assert,
        } => {
            let bound: Real = bound.parse()?;
            let rep = check_qs_certificate(&shear.get()?, &scan.get()?, &bound, arith.get(), exec)?;
            let v = to_value(&rep);
            if *assert && !rep.pass {
                return Err(certificate_failure(&v));
            }
            Ok(Output::Json(v))
        }
        Command::CheckPs {
            shear,
            scan,
            bound,
            arith,
            assert,
        } => {
            let rep = check_ps_certificate(&shear.get()?, &scan.get()?, arith.get(), exec)?;
            let mut v = to_value(&rep);
            if let Some(b) = bound {
                let b = parse_rational(b)?;
                let pass = rep.within_multiplier(&b);
                v["bound"] = json!(b.to_string());
                v["pass"] = json!(pass);
                if *assert && !pass {
                    return Err(certificate_failure(&v));
                }
            }
            Ok(Output::Json(v))
        }
        Command::Flip {
            triangulation,
            window,
            flips,
            lambdas,
            random,
            max_size,
            seed,
        } => {
            let t = load_triangulation(triangulation.as_deref(), window)?;
            let mut lams = match lambdas {
                None => None,
                Some(l) => match l.parse::<Real>() {
                    Ok(x) => Some(LambdaAssignment::constant(&t, x)?),
                    Err(_) => Some(LambdaAssignment::from_json(&load_json(l)?)?),
                },
            };
            let (t, seq) = match (flips, random) {
                (Some(f), _) => {
                    let seq: Vec<FlipSet> = parse_json(f)?;
                    let mut cur = t;
                    for d in &seq {
                        let (next, l) = simultaneous_flip(&cur, d, lams.as_ref())?;
                        cur = next;
                        lams = l;
                    }
                    (cur, seq)
                }
                (None, Some(steps)) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                    let (_, seq) = random_flips(&t, *steps, *max_size, &mut rng)?;
                    let mut cur = t;
                    for d in &seq {
                        let (next, l) = simultaneous_flip(&cur, d, lams.as_ref())?;
                        cur = next;
                        lams = l;
                    }
                    (cur, seq)
                }
                (None, None) => return Err(schema("give --flips or --random")),
            };
            let mut v = json!({ "triangulation": t.to_json(), "flips": to_value(&seq) });
            if let Some(l) = lams {
                v["lambdas"] = l.to_json();
            }
            Ok(Output::Json(v))
        }
        Command::Intersect { t1, t2, t3, assert } => {
            let a = WindowTriangulation::from_json(&load_json(t1)?)?;
            let b = WindowTriangulation::from_json(&load_json(t2)?)?;
            let mut v = to_value(&max_crossing(&a, &b, exec));
            if let Some(t3) = t3 {
                let c = WindowTriangulation::from_json(&load_json(t3)?)?;
                let rep = check_transitivity_bound(&a, &b, &c, exec);
                v["transitivity"] = to_value(&rep);
                if *assert && !rep.pass {
                    return Err(certificate_failure(&v));
                }
            }
            Ok(Output::Json(v))
        }
        Command::Example {
            k_max,
            grid_pow,
            steps,
            bound,
            assert,
        } => {
            let golden: serde_json::Map<String, Value> = golden_table(*k_max)
                .into_iter()
                .map(|(x, y)| (x.to_string(), json!(y.to_string())))
                .collect();
            let scan = qs_ratio_scan(&log_grid(*grid_pow, *steps));
            let mut falsifier = Vec::new();
            for b in bound {
                let b = parse_rational(b)?;
                let k = farey_core::example::first_failing_k(&b);
                falsifier.push(json!({
                    "bound": b.to_string(),
                    "first_failing_k": k,
                    "at_first_failure": to_value(&not_pinched_falsifier(k, &b)),
                }));
            }
            let v = json!({
                "golden_table": golden,
                "scan": to_value(&scan),
                "falsifier": falsifier,
            });
            if *assert && !scan.pass {
                return Err(certificate_failure(&v));
            }
            Ok(Output::Json(v))
        }
        Command::Render {
            window,
            triangulation,
            decoration,
            size,
        } => {
            let t = load_triangulation(triangulation.as_deref(), window)?;
            let dec: Option<Decoration> = match decoration.as_deref() {
                None => None,
                Some("canonical") => Some(canonical_decoration(t.window())),
                Some(d) => Some(Decoration::from_json(&load_json(d)?)?),
            };
            Ok(Output::Text(render::svg(&t, dec.as_ref(), *size)))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|out| {
        let text = match out {
            Output::Json(v) => serde_json::to_string_pretty(&v).expect("json") + "\n",
            Output::Text(s) => s,
        };
        match &cli.out {
            Some(p) => std::fs::write(p, text).map_err(|e| Failure {
                code: 1,
                kind: "io",
                message: format!("{}: {e}", p.display()),
            }),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let err = json!({ "error": f.kind, "exit_code": f.code, "message": f.message });
            eprintln!("{err}");
            ExitCode::from(f.code)
        }
    }
}
