//! Cartesian parameter sweeps over one or two axes.
//!
//! Points are generated in lexicographic order (first axis outermost) and
//! evaluated through [`crate::par::map_ordered`], so the emitted rows are the
//! same whether or not the rayon backend is enabled. Per-point failures are
//! recorded in the row and do not stop the sweep.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use crate::dynamics::{exact_duffing_omega, integrate, measure_period, steps_for_cycles, Method};
use crate::error::{Error, Result};
use crate::lindstedt::{expand, PerturbationSolution};
use crate::model::{frequency_classical, frequency_quantum, PhysicalParams, Regime};
use crate::output::fmt17;
use crate::par;
use crate::separatrix::{amplitude_bound_physical, dw_period, dw_turning_points};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Param {
    M,
    Omega,
    Lambda,
    Hbar,
    Amplitude,
    B,
    Energy,
}

impl Param {
    pub fn column(&self) -> &'static str {
        match self {
            Param::M => "m",
            Param::Omega => "omega",
            Param::Lambda => "lambda",
            Param::Hbar => "hbar",
            Param::Amplitude => "A",
            Param::B => "b",
            Param::Energy => "E",
        }
    }
}

impl FromStr for Param {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "m" => Param::M,
            "w" | "omega" => Param::Omega,
            "l" | "lambda" => Param::Lambda,
            "hbar" | "h" => Param::Hbar,
            "A" | "amplitude" => Param::Amplitude,
            "b" => Param::B,
            "E" | "energy" => Param::Energy,
            other => return Err(format!("unknown sweep parameter {other:?}")),
        })
    }
}

/// `name=start:stop:count`, `count` points including both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridAxis {
    pub param: Param,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl GridAxis {
    pub fn values(&self) -> Vec<f64> {
        match self.count {
            0 => Vec::new(),
            1 => vec![self.start],
            n => {
                let step = (self.stop - self.start) / (n - 1) as f64;
                (0..n)
                    .map(|i| if i == n - 1 { self.stop } else { self.start + step * i as f64 })
                    .collect()
            }
        }
    }
}

impl FromStr for GridAxis {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (name, range) = s
            .split_once('=')
            .ok_or_else(|| format!("grid spec {s:?} is not name=start:stop:count"))?;
        let parts: Vec<&str> = range.split(':').collect();
        let [start, stop, count] = parts[..] else {
            return Err(format!("grid range {range:?} is not start:stop:count"));
        };
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("bad number {t:?} in grid spec"))
        };
        Ok(GridAxis {
            param: name.trim().parse()?,
            start: num(start)?,
            stop: num(stop)?,
            count: count.trim().parse().map_err(|_| format!("bad count {count:?} in grid spec"))?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    /// Closed-form classical and quantum frequencies.
    Freq,
    /// Inverted-well amplitude bounds, classical and quantum.
    Bound,
    /// Lindstedt series against the elliptic-integral frequency.
    Duffing,
    /// RK4-measured frequency against the elliptic-integral frequency.
    Period,
    /// Double-well turning point and period.
    DoubleWell,
}

impl FromStr for Target {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "freq" => Target::Freq,
            "bound" => Target::Bound,
            "duffing" => Target::Duffing,
            "period" => Target::Period,
            "dw" | "double-well" => Target::DoubleWell,
            other => return Err(format!("unknown sweep target {other:?}")),
        })
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::Freq => "freq",
            Target::Bound => "bound",
            Target::Duffing => "duffing",
            Target::Period => "period",
            Target::DoubleWell => "dw",
        })
    }
}

impl Target {
    pub fn columns(&self) -> &'static [&'static str] {
        match self {
            Target::Freq => &["omega_cm", "omega_qm"],
            Target::Bound => &["a_max_cm", "a_max_qm"],
            Target::Duffing => &["omega_series", "omega_exact", "abs_error"],
            Target::Period => &["omega_measured", "omega_exact", "uncertainty"],
            Target::DoubleWell => &["k_plus", "a_max", "period"],
        }
    }
}

/// Values used for every parameter that is not swept.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Base {
    pub m: f64,
    pub omega: f64,
    pub lambda: f64,
    pub hbar: f64,
    pub amplitude: f64,
    pub b: f64,
    pub energy: f64,
    pub order: u32,
    pub dt: f64,
    pub cycles: f64,
}

impl Default for Base {
    fn default() -> Self {
        Base {
            m: 1.0,
            omega: 1.0,
            lambda: 0.025,
            hbar: 1.0,
            amplitude: 1.0,
            b: 0.1,
            energy: 1.0,
            order: 2,
            dt: 1e-3,
            cycles: 10.0,
        }
    }
}

impl Base {
    fn with(mut self, p: Param, v: f64) -> Self {
        match p {
            Param::M => self.m = v,
            Param::Omega => self.omega = v,
            Param::Lambda => self.lambda = v,
            Param::Hbar => self.hbar = v,
            Param::Amplitude => self.amplitude = v,
            Param::B => self.b = v,
            Param::Energy => self.energy = v,
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub target: Target,
    pub axes: Vec<GridAxis>,
    pub base: Base,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub inputs: Vec<f64>,
    pub cells: Vec<std::result::Result<f64, &'static str>>,
}

impl Row {
    pub fn error_label(&self, columns: &[&str]) -> String {
        self.cells
            .iter()
            .zip(columns)
            .filter_map(|(c, name)| c.as_ref().err().map(|e| format!("{name}:{e}")))
            .collect::<Vec<_>>()
            .join(";")
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(Error::InvalidParameter {
                name: "grid",
                reason: format!("need one or two axes, got {}", self.axes.len()),
            });
        }
        if self.axes.len() == 2 && self.axes[0].param == self.axes[1].param {
            return Err(Error::InvalidParameter {
                name: "grid",
                reason: "the two axes sweep the same parameter".into(),
            });
        }
        Ok(())
    }

    /// All grid points in lexicographic order.
    pub fn points(&self) -> Vec<Vec<f64>> {
        let mut points = vec![Vec::new()];
        for axis in &self.axes {
            let vals = axis.values();
            points = points
                .into_iter()
                .flat_map(|prefix| {
                    vals.iter().map(move |v| {
                        let mut p = prefix.clone();
                        p.push(*v);
                        p
                    })
                })
                .collect();
        }
        points
    }

    fn base_at(&self, point: &[f64]) -> Base {
        self.axes
            .iter()
            .zip(point)
            .fold(self.base, |b, (axis, v)| b.with(axis.param, *v))
    }

    pub fn run(&self) -> Result<Vec<Row>> {
        self.run_with(|pts, f| par::map_ordered(pts, f))
    }

    pub fn run_sequential(&self) -> Result<Vec<Row>> {
        self.run_with(|pts, f| par::map_sequential(pts, f))
    }

    fn run_with<M>(&self, map: M) -> Result<Vec<Row>>
    where
        M: Fn(&[Vec<f64>], &(dyn Fn(&Vec<f64>) -> Row + Sync + Send)) -> Vec<Row>,
    {
        self.validate()?;
        let series = match self.target {
            Target::Duffing => Some(expand(self.base.order)?),
            _ => None,
        };
        let points = self.points();
        let eval = |pt: &Vec<f64>| Row {
            inputs: pt.clone(),
            cells: evaluate(self.target, &self.base_at(pt), series.as_ref()),
        };
        Ok(map(&points, &eval))
    }

    pub fn header(&self) -> Vec<&'static str> {
        let mut h: Vec<&str> = self.axes.iter().map(|a| a.param.column()).collect();
        h.extend_from_slice(self.target.columns());
        h.push("error");
        h
    }

    pub fn write_csv<W: Write>(&self, rows: &[Row], out: &mut W) -> io::Result<()> {
        writeln!(out, "{}", self.header().join(","))?;
        let cols = self.target.columns();
        for row in rows {
            let mut fields: Vec<String> = row.inputs.iter().map(|v| fmt17(*v)).collect();
            fields.extend(row.cells.iter().map(|c| c.map(fmt17).unwrap_or_default()));
            fields.push(row.error_label(cols));
            writeln!(out, "{}", fields.join(","))?;
        }
        Ok(())
    }
}

fn cell(r: Result<f64>) -> std::result::Result<f64, &'static str> {
    r.map_err(|e| e.name())
}

fn evaluate(target: Target, p: &Base, series: Option<&PerturbationSolution>) -> Vec<std::result::Result<f64, &'static str>> {
    match target {
        Target::Freq => {
            let cm = PhysicalParams::new(p.m, p.omega, p.lambda, p.hbar, Regime::Classical)
                .and_then(|pp| frequency_classical(&pp, p.amplitude, p.order));
            let qm = PhysicalParams::new(p.m, p.omega, p.lambda, p.hbar, Regime::Quantum)
                .and_then(|pp| frequency_quantum(&pp, p.amplitude, p.order));
            vec![cell(cm), cell(qm)]
        }
        Target::Bound => [Regime::Classical, Regime::Quantum]
            .into_iter()
            .map(|r| {
                cell(
                    PhysicalParams::new(p.m, p.omega, p.lambda, p.hbar, r)
                        .and_then(|pp| amplitude_bound_physical(&pp))
                        .map(|rep| rep.a_max),
                )
            })
            .collect(),
        Target::Duffing => {
            let exact = exact_duffing_omega(p.b, p.amplitude);
            let s = series.expect("series expanded for the duffing target").omega_value(p.b, p.amplitude);
            let err = exact.clone().map(|e| (s - e).abs());
            vec![Ok(s), cell(exact), cell(err)]
        }
        Target::Period => {
            let exact = exact_duffing_omega(p.b, p.amplitude);
            let measured: Result<_> = exact.clone().and_then(|w| {
                let n = steps_for_cycles(w, p.cycles, p.dt);
                let tr = integrate(1.0, p.b, p.amplitude, p.dt, n, Method::Rk4)?;
                measure_period(&tr)
            });
            vec![
                cell(measured.clone().map(|m| m.omega)),
                cell(exact),
                cell(measured.map(|m| m.uncertainty)),
            ]
        }
        Target::DoubleWell => {
            let tp = dw_turning_points(p.b, p.energy);
            let k_plus = tp.map(|t| t.k_plus);
            let a_max = k_plus.clone().map(f64::sqrt);
            let period = dw_period(p.b, p.energy, p.amplitude);
            vec![cell(k_plus), cell(a_max), cell(period)]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(target: Target, axes: &[&str]) -> SweepConfig {
        SweepConfig {
            target,
            axes: axes.iter().map(|s| s.parse().unwrap()).collect(),
            base: Base::default(),
        }
    }

    #[test]
    fn grid_parsing() {
        let g: GridAxis = "lambda=0:0.08:9".parse().unwrap();
        assert_eq!(g.param, Param::Lambda);
        assert_eq!(g.values().len(), 9);
        assert_eq!(g.values()[8], 0.08);
        assert!((g.values()[1] - 0.01).abs() < 1e-17);
        assert!("lambda=0:1".parse::<GridAxis>().is_err());
        assert!("zeta=0:1:3".parse::<GridAxis>().is_err());
        assert!("A=0:x:3".parse::<GridAxis>().is_err());
        assert_eq!("A=2:5:1".parse::<GridAxis>().unwrap().values(), vec![2.0]);
    }

    #[test]
    fn quantum_below_classical() {
        let c = cfg(Target::Freq, &["lambda=0:0.08:9"]);
        let rows = c.run().unwrap();
        assert_eq!(rows.len(), 9);
        for r in &rows {
            let (cm, qm) = (r.cells[0].unwrap(), r.cells[1].unwrap());
            assert!(qm <= cm);
        }
    }

    #[test]
    fn empty_grid_gives_header_only() {
        let c = cfg(Target::Freq, &["lambda=0:0.08:0"]);
        let rows = c.run().unwrap();
        let mut buf = Vec::new();
        c.write_csv(&rows, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "lambda,omega_cm,omega_qm,error\n");
    }

    #[test]
    fn errors_recorded_per_row() {
        // b_QM truncated changes sign at lambda = 1/12
        let c = cfg(Target::Bound, &["lambda=0.05:0.15:5"]);
        let rows = c.run().unwrap();
        let cols = c.target.columns();
        assert!(rows[0].error_label(cols).is_empty());
        assert_eq!(rows[4].error_label(cols), "a_max_qm:NegativeTruncatedB");
        assert!(rows[4].cells[0].is_ok());
    }

    #[test]
    fn two_axes_lexicographic() {
        let c = cfg(Target::Freq, &["A=1:2:2", "lambda=0:0.01:3"]);
        let pts = c.points();
        assert_eq!(pts, vec![
            vec![1.0, 0.0], vec![1.0, 0.005], vec![1.0, 0.01],
            vec![2.0, 0.0], vec![2.0, 0.005], vec![2.0, 0.01],
        ]);
        assert!(cfg(Target::Freq, &["A=1:2:2", "A=0:1:2"]).run().is_err());
    }

    #[test]
    fn parallel_equals_sequential() {
        let c = cfg(Target::Period, &["b=0.05:0.5:6"]);
        assert_eq!(c.run().unwrap(), c.run_sequential().unwrap());
        let d = cfg(Target::Duffing, &["b=0:0.1:5", "A=0.5:1.5:3"]);
        assert_eq!(d.run().unwrap(), d.run_sequential().unwrap());
    }
}
