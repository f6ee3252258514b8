//! Parameter sets of the published figures, runnable as one sweep each.

use moltiming::channels::ChannelSpec;
use moltiming::detectors::DetectorKind;
use moltiming::montecarlo::{sweep, PointSpec, SweepSpec, SweepVar};

use crate::output::{Cell, Table};
use crate::presets::builtin;
use crate::CliError;

/// One curve of a figure.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub base: PointSpec,
    pub vary: SweepVar,
    pub grid: Vec<f64>,
}

/// Columns of every Monte Carlo sweep table.
pub const SWEEP_COLUMNS: [&str; 8] =
    ["param", "value", "detector", "p_hat", "ci_lo", "ci_hi", "trials", "seed"];

/// Driftless channel with Lévy scale `c`.
pub fn still(c: f64) -> ChannelSpec {
    ChannelSpec::new(1.0, 1.0 / (2.0 * c), 0.0, 1.0).expect("positive scale")
}

fn series(
    detector: DetectorKind,
    channel: ChannelSpec,
    delta: f64,
    m: usize,
    bits: u32,
    vary: SweepVar,
    grid: &[f64],
    label: String,
) -> Series {
    Series {
        label,
        base: PointSpec {
            channel,
            detector,
            delta,
            m,
            bits,
        },
        vary,
        grid: grid.to_vec(),
    }
}

/// Curves of a Monte Carlo figure (4, 5, 7 or 8).
pub fn recipe(fig: u32) -> Result<Vec<Series>, CliError> {
    use DetectorKind::*;
    let mut out = Vec::new();
    match fig {
        // error probability against Δ for c = 1 and M = 1, 2, 3
        4 => {
            let grid = [0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0];
            for det in [Fa, Ml, Linear] {
                for m in 1..=3 {
                    let label = format!("{det}:m={m}");
                    out.push(series(det, still(1.0), 1.0, m, 1, SweepVar::Delta, &grid, label));
                }
            }
        }
        // error probability against M for c = 2, Δ = 0.5
        5 => {
            let grid = [1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0, 500.0, 1000.0];
            for det in [Fa, Ml] {
                out.push(series(det, still(2.0), 0.5, 1, 1, SweepVar::M, &grid, det.to_string()));
            }
        }
        // symbol error of the Gray scheme against Δ for c = 1
        7 => {
            let grid = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 5.0, 6.0];
            for (m, bits) in [(25usize, 3u32), (90, 4), (350, 5)] {
                let label = format!("{GrayFa}:m={m},bits={bits}");
                out.push(series(GrayFa, still(1.0), 1.0, m, bits, SweepVar::Delta, &grid, label));
            }
        }
        // drift channel, Δ = 1, M = 4, λ = 1, κ = 1/v
        8 => {
            let channel = builtin()["drift-fig8"].channel()?;
            let grid = [0.2, 0.4, 0.6, 0.8, 1.0];
            for det in [IgFa, IgLinear, IgMl] {
                out.push(series(det, channel, 1.0, 4, 1, SweepVar::Velocity, &grid, det.to_string()));
            }
        }
        6 => {
            return Err(CliError::Usage(
                "figure 6 is a closed-form curve; use `required-m --fig 6`".into(),
            ))
        }
        _ => return Err(CliError::Usage(format!("no recipe for figure {fig}; use 4 to 8"))),
    }
    Ok(out)
}

/// Runs every series and collects one row per grid point. Points that fail
/// keep an empty estimate and are reported in the second return value.
pub fn run_series(series: &[Series], trials: u64, seed: u64) -> Result<(Table, Vec<String>), CliError> {
    let mut table = Table::new(&SWEEP_COLUMNS);
    let mut failures = Vec::new();
    for s in series {
        let spec = SweepSpec {
            base: s.base,
            vary: s.vary,
            grid: s.grid.clone(),
            trials,
            seed,
        };
        for point in sweep(&spec)? {
            let head: Vec<Cell> = vec![s.vary.name().into(), point.value.into(), s.label.clone().into()];
            let tail: Vec<Cell> = match &point.result {
                Ok(st) => vec![st.p_hat.into(), st.ci_lo.into(), st.ci_hi.into()],
                Err(e) => {
                    failures.push(format!("{} at {} = {}: {e}", s.label, s.vary.name(), point.value));
                    vec![Cell::Missing, Cell::Missing, Cell::Missing]
                }
            };
            let mut row = head;
            row.extend(tail);
            row.push(trials.into());
            row.push(seed.into());
            table.push(row);
        }
    }
    Ok((table, failures))
}

/// Values of `c` and the `Δ` grid of the particle-count figure.
pub const FIG6_C: [f64; 3] = [0.5, 1.0, 2.0];
pub const FIG6_DELTA: [f64; 8] = [0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0];
pub const FIG6_TARGET: f64 = 0.01;
