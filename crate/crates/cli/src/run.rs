//! Evaluation of scenario points and CSV output.

use std::io::Write;

use rayon::prelude::*;
use uniaxial_cp::asymptotics::RegimeTag;
use uniaxial_cp::shifts::{asymptotic_shift, excited_total, ground_shift};
use uniaxial_cp::{Error, ShiftResult};

use crate::config::{Mode, Point, Scenario};

pub const CSV_HEADER: [&str; 10] = [
    "sweep_value",
    "F_par",
    "F_perp",
    "delta_E",
    "delta_E_residue_re",
    "delta_E_residue_im",
    "delta_Gamma",
    "error_estimate",
    "regime_tag",
    "status",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// Quadrature budget exhausted before the tolerance was met.
    Budget,
    /// Converged, but `Z|ω_mi|` is below the low-distance threshold for some transition.
    LowDistance,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Budget => "budget_exhausted",
            Status::LowDistance => "low_distance",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Row {
    pub sweep_value: f64,
    pub result: ShiftResult,
    pub regime_tag: &'static str,
    pub status: Status,
}

/// Evaluation failure at one point.
#[derive(Debug, thiserror::Error)]
#[error("point {index} (sweep value {value}): {source}")]
pub struct PointError {
    pub index: usize,
    pub value: f64,
    pub source: Error,
}

pub fn evaluate(s: &Scenario, mode: Mode, p: &Point) -> Result<ShiftResult, Error> {
    let downward = s.atom.transitions.iter().any(|t| t.omega_mi < 0.0);
    match mode {
        Mode::Exact if downward => excited_total(&s.atom, &p.material, &p.geometry, p.distance, &s.quad),
        Mode::Exact => ground_shift(&s.atom, &p.material, &p.geometry, p.distance, &s.quad),
        Mode::Nonretarded => {
            asymptotic_shift(&s.atom, &p.material, &p.geometry, p.distance, RegimeTag::Nonretarded, &s.quad)
        }
        Mode::RetardedAsymptotic => {
            asymptotic_shift(&s.atom, &p.material, &p.geometry, p.distance, RegimeTag::Retarded, &s.quad)
        }
    }
}

/// Evaluate every point on a pool of `threads` workers (0 = all cores); rows come back in sweep order.
pub fn run(s: &Scenario, mode: Mode, threads: usize) -> Result<Vec<Row>, PointError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool");
    pool.install(|| {
        s.points
            .par_iter()
            .enumerate()
            .map(|(index, p)| {
                let result = evaluate(s, mode, p).map_err(|source| PointError {
                    index,
                    value: p.sweep_value,
                    source,
                })?;
                let status = if !result.converged {
                    Status::Budget
                } else if result.low_distance_warning {
                    Status::LowDistance
                } else {
                    Status::Ok
                };
                Ok(Row {
                    sweep_value: p.sweep_value,
                    result,
                    regime_tag: mode.tag(),
                    status,
                })
            })
            .collect()
    })
}

fn num(v: f64) -> String {
    format!("{v:e}")
}

pub fn write_csv<W: Write>(rows: &[Row], w: W) -> csv::Result<()> {
    let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
    out.write_record(CSV_HEADER)?;
    for r in rows {
        let s = &r.result;
        out.write_record([
            num(r.sweep_value),
            num(s.f_par),
            num(s.f_perp),
            num(s.delta_e),
            num(s.delta_e_residue.re),
            num(s.delta_e_residue.im),
            num(s.delta_gamma),
            num(s.error_estimate),
            r.regime_tag.to_string(),
            r.status.as_str().to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn csv_string(rows: &[Row]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv is ASCII")
}

/// Human-readable digest of a run.
pub fn summary(s: &Scenario, mode: Mode, rows: &[Row]) -> String {
    let mut out = String::new();
    let flagged = rows.iter().filter(|r| r.status == Status::Budget).count();
    let low = rows.iter().filter(|r| r.status == Status::LowDistance).count();
    let worst = rows.iter().map(|r| r.result.error_estimate).fold(0.0, f64::max);
    out.push_str(&format!("scenario      {}\n", s.name));
    out.push_str(&format!("mode          {}\n", mode.tag()));
    out.push_str(&format!("state         {}\n", s.atom.state_label));
    out.push_str(&format!("points        {}\n", rows.len()));
    if rows.len() == 1 {
        let r = &rows[0].result;
        out.push_str(&format!("F_par         {:e}\n", r.f_par));
        out.push_str(&format!("F_perp        {:e}\n", r.f_perp));
        out.push_str(&format!("delta_E       {:e}\n", r.delta_e));
        out.push_str(&format!("residue       {:e} {:+e}i\n", r.delta_e_residue.re, r.delta_e_residue.im));
        out.push_str(&format!("delta_Gamma   {:e}\n", r.delta_gamma));
    } else if let (Some(a), Some(b)) = (rows.first(), rows.last()) {
        out.push_str(&format!("sweep         {:e} .. {:e}\n", a.sweep_value, b.sweep_value));
        let (lo, hi) = rows
            .iter()
            .map(|r| r.result.delta_e)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| (l.min(v), h.max(v)));
        out.push_str(&format!("delta_E range {lo:e} .. {hi:e}\n"));
    }
    out.push_str(&format!("max error     {worst:e}\n"));
    out.push_str(&format!("budget hits   {flagged}\n"));
    if low > 0 {
        out.push_str(&format!("low distance  {low}\n"));
    }
    out
}
