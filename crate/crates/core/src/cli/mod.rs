//! `quartic` command line.
//!
//! Exit codes: 0 on success, 1 on a domain error (its stable name goes to
//! stderr), 2 on a usage error. `--config FILE` reads `key=value` lines that
//! are applied before the command-line flags, so explicit flags win.

mod config;
mod render;

use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::dynamics::{self, conserved, conserved_drift, measure_period, steps_for_cycles, Method};
use crate::error::{invalid, Error, Result};
use crate::lindstedt::{expand_with_cap, PerturbationSolution, DEFAULT_ORDER_CAP};
use crate::model::{
    self, frequency, isochronicity_first_order_quantum, isochronicity_second_order_classical,
    isochronicity_second_order_quantum, PhysicalParams, Regime, Truncation,
};
use crate::output::{fmt17, num};
use crate::separatrix::{
    amplitude_bound_physical, dw_amplitude_bound, dw_orbit_period, dw_period, dw_radicand, dw_turning_points,
    inverted_amplitude_bound, inverted_period_quadrature, inverted_special_period, inverted_special_period_signed,
    k_constant, separatrix_period_divergence, BoundReport, Well, WellSpec,
};
use crate::sweep::{Base, GridAxis, SweepConfig, Target};
use crate::validation;

use render::{render, Format};

#[derive(Debug, Parser)]
#[command(name = "quartic", version, about = "Quartic oscillator frequencies, expansions and separatrix bounds")]
struct Cli {
    /// Flat key=value file pre-seeding flags; command-line flags take precedence
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form (or Lindstedt) oscillation frequency
    #[command(args_override_self = true)]
    Freq(FreqArgs),
    /// Exact-rational Poincaré–Lindstedt expansion
    #[command(args_override_self = true)]
    Lindstedt(LindstedtArgs),
    /// Integrate x'' + s1 x + s3 x^3 = 0 from rest at x = A
    #[command(args_override_self = true)]
    Simulate(SimulateArgs),
    /// Separatrix periods, turning points and amplitude bounds
    #[command(args_override_self = true)]
    Separatrix(SeparatrixArgs),
    /// Coupling values at which the frequency stops depending on amplitude
    #[command(args_override_self = true)]
    Isochron(IsochronArgs),
    /// Evaluate a target over a one- or two-axis parameter grid (CSV)
    #[command(args_override_self = true)]
    Sweep(SweepArgs),
    /// Run the acceptance suite
    #[command(args_override_self = true)]
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RegimeArg {
    Classical,
    Quantum,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TruncationArg {
    Exact,
    FirstOrderHbar,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Rk4,
    Leapfrog,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WellArg {
    Single,
    Inverted,
    Double,
}

#[derive(Debug, Clone, Args)]
struct Physical {
    /// Mass
    #[arg(short = 'm', long = "m", default_value_t = 1.0, allow_negative_numbers = true)]
    m: f64,
    /// Harmonic angular frequency
    #[arg(short = 'w', long, default_value_t = 1.0, allow_negative_numbers = true)]
    omega: f64,
    /// Quartic coupling
    #[arg(short = 'l', long, default_value_t = 0.025, allow_negative_numbers = true)]
    lambda: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    hbar: f64,
    #[arg(long, value_enum, default_value = "classical")]
    regime: RegimeArg,
    /// How the quantum reduced nonlinearity is formed
    #[arg(long, value_enum, default_value = "exact")]
    truncation: TruncationArg,
}

impl Physical {
    fn params(&self) -> Result<PhysicalParams> {
        let regime = match self.regime {
            RegimeArg::Classical => Regime::Classical,
            RegimeArg::Quantum => Regime::Quantum,
        };
        PhysicalParams::new(self.m, self.omega, self.lambda, self.hbar, regime)
    }

    fn truncation(&self) -> Truncation {
        match self.truncation {
            TruncationArg::Exact => Truncation::Exact,
            TruncationArg::FirstOrderHbar => Truncation::FirstOrderHbar,
        }
    }
}

#[derive(Debug, Clone, Args)]
struct Output {
    /// Output format
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Also report the expressions exactly as printed where they differ
    #[arg(long)]
    paper_literal: bool,
}

#[derive(Debug, Args)]
struct FreqArgs {
    #[command(flatten)]
    phys: Physical,
    /// Oscillation amplitude
    #[arg(short = 'A', long, default_value_t = 1.0, allow_negative_numbers = true)]
    amplitude: f64,
    /// Expansion order; closed forms exist for 1 and 2, higher orders need --lindstedt
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..=64))]
    order: u32,
    /// Sum the exact-rational series in the reduced nonlinearity instead
    #[arg(long)]
    lindstedt: bool,
    #[command(flatten)]
    out: Output,
}

#[derive(Debug, Args)]
struct LindstedtArgs {
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    order: u32,
    /// Largest order accepted
    #[arg(long, default_value_t = DEFAULT_ORDER_CAP)]
    cap: u32,
    /// Include every displacement correction
    #[arg(long)]
    dump: bool,
    /// Evaluate the frequency series at this reduced nonlinearity
    #[arg(short = 'b', long = "b", allow_negative_numbers = true)]
    b: Option<f64>,
    #[arg(short = 'A', long, default_value_t = 1.0, allow_negative_numbers = true)]
    amplitude: f64,
    #[command(flatten)]
    out: Output,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    phys: Physical,
    /// Linear coefficient; overrides -b and the physical parameters
    #[arg(long, requires = "s3", allow_negative_numbers = true)]
    s1: Option<f64>,
    /// Cubic coefficient
    #[arg(long, requires = "s1", allow_negative_numbers = true)]
    s3: Option<f64>,
    /// Reduced nonlinearity; the shape comes from --well
    #[arg(short = 'b', long = "b", conflicts_with = "s1", allow_negative_numbers = true)]
    b: Option<f64>,
    #[arg(long, value_enum, default_value = "single")]
    well: WellArg,
    #[arg(short = 'A', long, default_value_t = 1.0, allow_negative_numbers = true)]
    amplitude: f64,
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
    /// Number of steps
    #[arg(long, conflicts_with = "cycles")]
    steps: Option<usize>,
    /// Approximate number of linear periods to cover (default 10)
    #[arg(long)]
    cycles: Option<f64>,
    #[arg(long, value_enum, default_value = "rk4")]
    method: MethodArg,
    /// Emit every n-th sample
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    every: u64,
    #[command(flatten)]
    out: Output,
}

#[derive(Debug, Args)]
struct SeparatrixArgs {
    #[command(flatten)]
    phys: Physical,
    #[arg(long, value_enum, default_value = "inverted")]
    well: WellArg,
    /// Reduced nonlinearity; defaults to the one implied by the physical parameters
    #[arg(short = 'b', long = "b", allow_negative_numbers = true)]
    b: Option<f64>,
    /// Value of the conserved quantity
    #[arg(short = 'E', long, allow_negative_numbers = true)]
    energy: Option<f64>,
    #[arg(short = 'A', long, allow_negative_numbers = true)]
    amplitude: Option<f64>,
    /// Lower cutoff for the zero-energy separatrix integral
    #[arg(long)]
    cutoff: Option<f64>,
    #[command(flatten)]
    out: Output,
}

#[derive(Debug, Args)]
struct IsochronArgs {
    #[command(flatten)]
    phys: Physical,
    #[arg(short = 'A', long, default_value_t = 1.0, allow_negative_numbers = true)]
    amplitude: f64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=2))]
    order: u32,
    #[command(flatten)]
    out: Output,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// freq, bound, duffing, period or dw
    #[arg(long)]
    target: Target,
    /// name=start:stop:count, once or twice
    #[arg(long, required = true)]
    grid: Vec<GridAxis>,
    #[arg(short = 'm', long = "m", default_value_t = 1.0, allow_negative_numbers = true)]
    m: f64,
    #[arg(short = 'w', long, default_value_t = 1.0, allow_negative_numbers = true)]
    omega: f64,
    #[arg(short = 'l', long, default_value_t = 0.025, allow_negative_numbers = true)]
    lambda: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    hbar: f64,
    #[arg(short = 'A', long, default_value_t = 1.0, allow_negative_numbers = true)]
    amplitude: f64,
    #[arg(short = 'b', long = "b", default_value_t = 0.1, allow_negative_numbers = true)]
    b: f64,
    #[arg(short = 'E', long, default_value_t = 1.0, allow_negative_numbers = true)]
    energy: f64,
    #[arg(long, default_value_t = 2)]
    order: u32,
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
    #[arg(long, default_value_t = 10.0)]
    cycles: f64,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    /// Machine-readable report
    #[arg(long)]
    json: bool,
}

/// What a subcommand hands back for printing.
enum Report {
    Doc(Value, Format),
    Text(String),
}

/// Parses `argv` (program name first), runs the command and returns the exit code.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let argv = match config::apply(argv, &Cli::command()) {
        Ok(a) => a,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => return usage(e, out, err),
    };
    let outcome = match cli.command {
        Command::Freq(a) => {
            if a.order > 2 && !a.lindstedt {
                let e = Cli::command().error(
                    ErrorKind::ValueValidation,
                    format!("--order {} has no closed form; only 1 and 2 do (add --lindstedt for the series)", a.order),
                );
                return usage(e, out, err);
            }
            freq(&a)
        }
        Command::Lindstedt(a) => lindstedt(&a),
        Command::Simulate(a) => simulate(&a),
        Command::Separatrix(a) => separatrix(&a),
        Command::Isochron(a) => isochron(&a),
        Command::Sweep(a) => sweep(&a),
        Command::Validate(a) => {
            let results = validation::run_all();
            let text = if a.json {
                pretty(&validation::render_json(&results))
            } else {
                validation::render_text(&results)
            };
            let _ = out.write_all(text.as_bytes());
            return if validation::all_passed(&results) { 0 } else { 1 };
        }
    };
    match outcome {
        Ok(Report::Doc(v, f)) => {
            let _ = out.write_all(render(&v, f).as_bytes());
            0
        }
        Ok(Report::Text(t)) => {
            let _ = out.write_all(t.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", e.name());
            1
        }
    }
}

fn usage(e: clap::Error, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match e.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
            let _ = write!(out, "{e}");
            0
        }
        _ => {
            let _ = write!(err, "{e}");
            2
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values always serialize") + "\n"
}

fn doc(command: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema".into(), json!(1));
    m.insert("command".into(), json!(command));
    m
}

fn error_value(e: &Error) -> Value {
    json!({ "error": e.name(), "message": e.to_string() })
}

fn or_error(r: Result<f64>) -> Value {
    match r {
        Ok(v) => num(v),
        Err(e) => error_value(&e),
    }
}

fn phys_inputs(p: &PhysicalParams) -> Value {
    json!({ "m": num(p.m), "omega": num(p.omega), "lambda": num(p.lambda), "hbar": num(p.hbar) })
}

fn bound_value(r: Result<BoundReport>, paper_literal: bool) -> Value {
    match r {
        Ok(b) => {
            let mut m = Map::new();
            m.insert("a_max".into(), num(b.a_max));
            m.insert("formula_id".into(), json!(b.formula_id));
            if paper_literal {
                if let Some(lit) = b.paper_literal_a_max {
                    m.insert("paper_literal_a_max".into(), num(lit));
                }
            }
            Value::Object(m)
        }
        Err(e) => error_value(&e),
    }
}

fn freq(a: &FreqArgs) -> Result<Report> {
    let params = a.phys.params()?;
    let mut d = doc("freq");
    d.insert("regime".into(), json!(params.regime.to_string()));
    d.insert("order".into(), json!(a.order));
    d.insert("method".into(), json!(if a.lindstedt { "lindstedt" } else { "closed_form" }));
    let mut inputs = phys_inputs(&params);
    inputs["A"] = num(a.amplitude);
    d.insert("inputs".into(), inputs);
    let reduced = model::reduce(&params, a.phys.truncation());
    let mut warnings = Vec::new();
    d.insert(
        "reduced".into(),
        match &reduced {
            Ok(r) => {
                warnings.extend(r.smallness_warning());
                json!({
                    "eps1": num(r.eps1),
                    "eps2": num(r.eps2),
                    "b": num(r.b),
                    "shape": serde_json::to_value(r.shape).expect("enum serializes"),
                })
            }
            Err(e) => error_value(e),
        },
    );
    let omega = if a.lindstedt {
        let b = reduced?.b;
        warnings.extend(PerturbationSolution::radius_warning(b, a.amplitude));
        expand_with_cap(a.order, a.order.max(DEFAULT_ORDER_CAP))?.omega_value(b, a.amplitude)
    } else {
        frequency(&params, a.amplitude, a.order)?
    };
    d.insert("Omega".into(), num(omega));
    d.insert("warnings".into(), json!(warnings));
    Ok(Report::Doc(Value::Object(d), a.out.format.unwrap_or(Format::Json)))
}

fn lindstedt(a: &LindstedtArgs) -> Result<Report> {
    let sol = expand_with_cap(a.order, a.cap)?;
    let format = a.out.format.unwrap_or(Format::Table);
    if format == Format::Table && !a.dump {
        let mut s = String::from("k  Omega_k\n");
        for (i, c) in sol.omega_corrections().iter().enumerate() {
            s.push_str(&format!("{}  {c}\n", i + 1));
        }
        if let Some(b) = a.b {
            s.push_str(&format!("Omega(b={}, A={}) = {}\n", fmt17(b), fmt17(a.amplitude), fmt17(sol.omega_value(b, a.amplitude))));
        }
        return Ok(Report::Text(s));
    }
    let mut d = doc("lindstedt");
    d.insert("order".into(), json!(a.order));
    d.insert("cap".into(), json!(a.cap));
    d.insert("verified".into(), json!(sol.verify().is_ok()));
    let dump = sol.to_dump();
    d.insert("omega_corrections".into(), serde_json::to_value(&dump.omega_corrections).expect("serializable"));
    if a.dump {
        d.insert(
            "displacement_corrections".into(),
            serde_json::to_value(&dump.displacement_corrections).expect("serializable"),
        );
    }
    if let Some(b) = a.b {
        let mut warnings = Vec::new();
        warnings.extend(PerturbationSolution::radius_warning(b, a.amplitude));
        d.insert(
            "evaluation".into(),
            json!({ "b": num(b), "A": num(a.amplitude), "Omega": num(sol.omega_value(b, a.amplitude)), "warnings": warnings }),
        );
    }
    Ok(Report::Doc(Value::Object(d), format))
}

fn simulate(a: &SimulateArgs) -> Result<Report> {
    let (s1, s3) = match (a.s1, a.s3, a.b) {
        (Some(s1), Some(s3), _) => (s1, s3),
        (_, _, Some(b)) => match a.well {
            WellArg::Single => (1.0, b),
            WellArg::Inverted => (1.0, -b),
            WellArg::Double => (-1.0, b),
        },
        _ => {
            let r = model::reduce(&a.phys.params()?, a.phys.truncation())?;
            (r.eps1, r.eps2)
        }
    };
    let method = match a.method {
        MethodArg::Rk4 => Method::Rk4,
        MethodArg::Leapfrog => Method::Leapfrog,
    };
    let steps = match a.steps {
        Some(n) => n,
        None => {
            let cycles = a.cycles.unwrap_or(10.0);
            if !(cycles > 0.0 && cycles.is_finite()) {
                return Err(invalid("cycles", format!("must be finite and > 0, got {cycles}")));
            }
            if !(a.dt > 0.0 && a.dt.is_finite()) {
                return Err(invalid("dt", format!("must be finite and > 0, got {}", a.dt)));
            }
            steps_for_cycles(s1.abs().sqrt().max(f64::MIN_POSITIVE), cycles, a.dt)
        }
    };
    let tr = dynamics::integrate(s1, s3, a.amplitude, a.dt, steps, method)?;
    let stride = a.every as usize;
    let format = a.out.format.unwrap_or(Format::Csv);
    if format == Format::Csv {
        let mut s = String::from("tau,x,p,C\n");
        for smp in tr.samples.iter().step_by(stride) {
            let c = conserved(s1, s3, smp.x, smp.p);
            s.push_str(&format!("{},{},{},{}\n", fmt17(smp.tau), fmt17(smp.x), fmt17(smp.p), fmt17(c)));
        }
        return Ok(Report::Text(s));
    }
    let mut d = doc("simulate");
    d.insert(
        "inputs".into(),
        json!({
            "s1": num(s1), "s3": num(s3), "A": num(a.amplitude), "dt": num(a.dt),
            "steps": steps, "method": serde_json::to_value(method).expect("enum serializes"),
        }),
    );
    d.insert(
        "period".into(),
        match measure_period(&tr) {
            Ok(p) => json!({
                "period": num(p.period), "omega": num(p.omega),
                "cycles_used": p.cycles_used, "uncertainty": num(p.uncertainty),
            }),
            Err(e) => error_value(&e),
        },
    );
    d.insert("conserved_drift".into(), num(conserved_drift(&tr)));
    if format == Format::Json {
        let samples: Vec<Value> = tr
            .samples
            .iter()
            .step_by(stride)
            .map(|s| json!({ "tau": num(s.tau), "x": num(s.x), "p": num(s.p), "C": num(conserved(s1, s3, s.x, s.p)) }))
            .collect();
        d.insert("samples".into(), Value::Array(samples));
    }
    Ok(Report::Doc(Value::Object(d), format))
}

fn separatrix(a: &SeparatrixArgs) -> Result<Report> {
    let params = a.phys.params()?;
    let lit = a.out.paper_literal;
    let b = match a.b {
        Some(b) => b,
        None => match params.regime {
            Regime::Classical => params.b_classical(),
            Regime::Quantum => params.b_quantum_truncated(),
        },
    };
    let well = match a.well {
        WellArg::Inverted => Well::InvertedDoubleWell,
        WellArg::Double => Well::DoubleWell,
        WellArg::Single => return Err(invalid("well", "a single well has no separatrix")),
    };
    let mut d = doc("separatrix");
    d.insert("well".into(), serde_json::to_value(well).expect("enum serializes"));
    d.insert(
        "inputs".into(),
        json!({
            "b": num(b), "E": a.energy.map_or(Value::Null, num), "A": a.amplitude.map_or(Value::Null, num),
            "cutoff": a.cutoff.map_or(Value::Null, num),
        }),
    );
    d.insert("k".into(), num(k_constant()));
    let mut periods = Map::new();
    let mut literal = Map::new();
    match well {
        Well::InvertedDoubleWell => {
            let mut bounds = Map::new();
            bounds.insert("reduced".into(), bound_value(inverted_amplitude_bound(b), lit));
            if a.b.is_none() {
                bounds.insert("physical".into(), bound_value(amplitude_bound_physical(&params), lit));
            }
            d.insert("bounds".into(), Value::Object(bounds));
            let special_energy = 0.25 / b;
            periods.insert("special_energy".into(), num(special_energy));
            if let Some(amp) = a.amplitude {
                periods.insert("special_period".into(), or_error(inverted_special_period(b, amp)));
                let energy = a.energy.unwrap_or(special_energy);
                periods.insert("quadrature_period".into(), or_error(inverted_period_quadrature(b, energy, amp)));
                literal.insert("special_period_signed".into(), or_error(inverted_special_period_signed(b, amp)));
            }
        }
        Well::DoubleWell => {
            let energy = a.energy.ok_or_else(|| invalid("E", "required for the double well"))?;
            let tp = dw_turning_points(b, energy)?;
            d.insert(
                "turning_points".into(),
                json!({
                    "k_plus": num(tp.k_plus), "k_minus": num(tp.k_minus),
                    "radicand_residual": num(tp.radicand_residual), "relative_residual": num(tp.relative_residual),
                }),
            );
            d.insert("bounds".into(), json!({ "reduced": bound_value(dw_amplitude_bound(b, energy), lit) }));
            if let Some(amp) = a.amplitude {
                periods.insert("dw_period".into(), or_error(dw_period(b, energy, amp)));
            }
            periods.insert("orbit_period".into(), or_error(dw_orbit_period(b, energy)));
            let (lp, lm) = tp.paper_literal;
            literal.insert("turning_points".into(), json!([num(lp), num(lm)]));
            literal.insert("radicand_at_root".into(), num(dw_radicand(b, energy, lp)));
        }
    }
    if let (Some(amp), Some(cut)) = (a.amplitude, a.cutoff) {
        let r = WellSpec::new(b, well, 0.0).and_then(|s| separatrix_period_divergence(&s, amp, cut));
        periods.insert("separatrix_integral".into(), or_error(r));
    }
    d.insert("periods".into(), Value::Object(periods));
    if lit {
        d.insert("paper_literal".into(), Value::Object(literal));
    }
    Ok(Report::Doc(Value::Object(d), a.out.format.unwrap_or(Format::Json)))
}

fn isochron(a: &IsochronArgs) -> Result<Report> {
    let params = a.phys.params()?;
    let mut d = doc("isochron");
    d.insert("regime".into(), json!(params.regime.to_string()));
    d.insert("order".into(), json!(a.order));
    let mut inputs = phys_inputs(&params);
    inputs["A"] = num(a.amplitude);
    if let Some(o) = inputs.as_object_mut() {
        o.remove("lambda");
        if params.regime == Regime::Classical {
            o.remove("hbar");
        }
    }
    d.insert("inputs".into(), inputs);
    let at = |l: f64| frequency(&params.with_lambda(l), a.amplitude, a.order);
    match (params.regime, a.order) {
        (Regime::Classical, 1) => {
            return Err(Error::DomainError(
                "the first-order classical frequency is amplitude-independent only at lambda = 0".into(),
            ))
        }
        (Regime::Quantum, 1) => {
            let l = isochronicity_first_order_quantum(&params)?;
            d.insert("lambda_star".into(), num(l));
            d.insert("Omega_at_root".into(), or_error(at(l)));
        }
        (Regime::Classical, _) => {
            let l = isochronicity_second_order_classical(&params, a.amplitude)?;
            d.insert("lambda_star".into(), num(l));
            d.insert("Omega_at_root".into(), or_error(at(l)));
        }
        (Regime::Quantum, _) => {
            let rep = isochronicity_second_order_quantum(&params, a.amplitude)?;
            d.insert("lambda_roots".into(), json!(rep.lambda_roots.iter().map(|&l| num(l)).collect::<Vec<_>>()));
            d.insert("discriminant".into(), num(rep.discriminant));
            d.insert("feasible".into(), json!(rep.feasible));
            d.insert(
                "relative_residuals".into(),
                json!(rep.relative_residuals.iter().map(|&r| num(r)).collect::<Vec<_>>()),
            );
            d.insert(
                "Omega_at_roots".into(),
                json!(rep.lambda_roots.iter().map(|&l| or_error(at(l))).collect::<Vec<_>>()),
            );
            if a.out.paper_literal {
                d.insert("paper_literal_discriminant".into(), num(rep.paper_literal_discriminant));
            }
        }
    }
    Ok(Report::Doc(Value::Object(d), a.out.format.unwrap_or(Format::Json)))
}

fn sweep(a: &SweepArgs) -> Result<Report> {
    let config = SweepConfig {
        target: a.target,
        axes: a.grid.clone(),
        base: Base {
            m: a.m,
            omega: a.omega,
            lambda: a.lambda,
            hbar: a.hbar,
            amplitude: a.amplitude,
            b: a.b,
            energy: a.energy,
            order: a.order,
            dt: a.dt,
            cycles: a.cycles,
        },
    };
    let rows = config.run()?;
    match a.format.unwrap_or(Format::Csv) {
        f @ (Format::Csv | Format::Table) => {
            let mut buf = Vec::new();
            config.write_csv(&rows, &mut buf).expect("writing to memory");
            let csv = String::from_utf8(buf).expect("CSV is UTF-8");
            Ok(Report::Text(if f == Format::Table { render::align_csv(&csv) } else { csv }))
        }
        f => {
            let header = config.header();
            let cols = config.target.columns();
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let mut m = Map::new();
                    let cells = r.inputs.iter().map(|v| num(*v)).chain(r.cells.iter().map(|c| match c {
                        Ok(v) => num(*v),
                        Err(_) => Value::Null,
                    }));
                    for (name, v) in header.iter().zip(cells) {
                        m.insert((*name).into(), v);
                    }
                    m.insert("error".into(), json!(r.error_label(cols)));
                    Value::Object(m)
                })
                .collect();
            let mut d = doc("sweep");
            d.insert("target".into(), json!(config.target.to_string()));
            d.insert("header".into(), json!(header));
            d.insert("rows".into(), Value::Array(rows));
            Ok(Report::Doc(Value::Object(d), f))
        }
    }
}
