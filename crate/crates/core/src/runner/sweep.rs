use rayon::prelude::*;

use crate::channels::bloch_to_density;
use crate::error::{Error, Result};
use crate::metrology::{
    cfi_control, cfi_from_coupling, qfi_cascade, qfi_control, qfi_control_numeric, qfi_joint,
};
use crate::switch::{qc_closed_form, qc_numeric};
use crate::{channels, BlochVector, ControlSpec, Scalar, UnitaryParams};

use super::config::{NoiseKind, Quantity, SweepConfig};

/// One parameter point of the model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub noise: NoiseKind,
    pub p: f64,
    pub p_c: f64,
    pub xi: f64,
    pub axis: [f64; 3],
    pub probe: BlochVector,
}

impl Point {
    /// Evaluates one quantity. Pauli noise uses the closed forms where
    /// they exist; depolarizing noise goes through the numeric routes.
    pub fn evaluate(&self, quantity: Quantity) -> Result<f64> {
        let noise = self.noise.channel(self.p)?;
        let u = UnitaryParams::new(self.axis, self.xi)?;
        let c = ControlSpec::new(self.p_c)?;
        let rho = bloch_to_density(self.probe);
        let n_l = self.noise.pauli_axis().map(|a| u.component(a));
        let value = match (quantity, n_l) {
            (Quantity::Qc, Some(n_l)) => qc_closed_form(self.p, self.xi, n_l)?,
            (Quantity::Qc, None) => {
                qc_numeric(&channels::noisy_phase_channel(&noise, &u)?, &rho)?
            }
            (Quantity::FqCon, Some(n_l)) => qfi_control(&c, self.p, self.xi, n_l)?.value,
            (Quantity::FqCon, None) => qfi_control_numeric(&noise, &u, &rho, &c)?.value,
            (Quantity::FcCon, Some(n_l)) => cfi_control(&c, self.p, self.xi, n_l)?.value,
            (Quantity::FcCon, None) => {
                let h = f64::default_step();
                let q_at = |xi: f64| -> Result<f64> {
                    let ch = channels::noisy_phase_channel(&noise, &u.with_phase(xi))?;
                    qc_numeric(&ch, &rho)
                };
                let q = q_at(self.xi)?;
                let dq = (q_at(self.xi + h)? - q_at(self.xi - h)?) / (2.0 * h);
                let limit = qfi_control_numeric(&noise, &u, &rho, &c)?.value;
                cfi_from_coupling(&c, q, 1.0 - q, dq, limit)?.value
            }
            (Quantity::FqCas, _) => qfi_cascade(&noise, &u, self.probe)?.value,
            (Quantity::FqJoint, _) => qfi_joint(&noise, &u, &rho, &c)?.value,
        };
        Ok(value)
    }
}

/// One output record of a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub point: Point,
    /// `(column name, value)` in output order.
    pub values: Vec<(String, f64)>,
}

impl SweepRow {
    pub fn value(&self, column: &str) -> Option<f64> {
        self.values.iter().find(|(name, _)| name == column).map(|&(_, v)| v)
    }
}

fn in_pool<R: Send>(threads: Option<usize>, job: impl FnOnce() -> R + Send) -> Result<R> {
    match threads {
        None => Ok(job()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::Output(format!("cannot start thread pool: {e}")))?;
            Ok(pool.install(job))
        }
    }
}

fn check_finite(p: f64, values: &[(String, f64)]) -> Result<()> {
    match values.iter().find(|(_, v)| !v.is_finite()) {
        Some((name, v)) => Err(Error::GridPoint {
            p,
            source: Box::new(Error::Output(format!("{name} evaluated to {v}"))),
        }),
        None => Ok(()),
    }
}

/// Evaluates the configured quantities at every grid point, in grid order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    run_sweep_with_threads(cfg, None)
}

/// [`run_sweep`] on a dedicated pool of `threads` workers (`None`: global pool).
/// Rows are bit-identical for any thread count.
pub fn run_sweep_with_threads(cfg: &SweepConfig, threads: Option<usize>) -> Result<Vec<SweepRow>> {
    let grid = cfg.p_grid.values();
    in_pool(threads, || {
        grid.par_iter()
            .map(|&p| {
                let point = Point {
                    noise: cfg.noise,
                    p,
                    p_c: cfg.p_c,
                    xi: cfg.xi,
                    axis: cfg.axis,
                    probe: cfg.probe,
                };
                let values = cfg
                    .quantities
                    .iter()
                    .map(|&q| Ok((q.name().to_string(), point.evaluate(q)?)))
                    .collect::<Result<Vec<_>>>()
                    .map_err(|e| Error::GridPoint {
                        p,
                        source: Box::new(e),
                    })?;
                check_finite(p, &values)?;
                Ok(SweepRow { point, values })
            })
            .collect()
    })?
}

pub const FIG2_R_VALUES: [f64; 5] = [1.0, 0.8, 0.6, 0.4, 0.2];

/// Column name of the cascade QFI for probe length `r`, e.g. `fq_cas_r0_8`.
pub fn cascade_column(r: f64) -> String {
    format!("fq_cas_r{}", r).replace(['.', '-'], "_")
}

/// Control-qubit QFI at `p_c = 1/2` and cascade QFI for each probe length
/// `r` (probe `r e_z`), under bit-flip noise with rotation axis `e_y`, on
/// `steps` equally spaced noise levels in `[0, 1]`.
pub fn fig2_preset(steps: usize, r_values: &[f64], xi: f64) -> Result<Vec<SweepRow>> {
    fig2_preset_with_threads(steps, r_values, xi, None)
}

pub fn fig2_preset_with_threads(
    steps: usize,
    r_values: &[f64],
    xi: f64,
    threads: Option<usize>,
) -> Result<Vec<SweepRow>> {
    if steps < 2 {
        return Err(Error::OutOfRange {
            name: "steps",
            value: steps as f64,
            range: "[2, inf)",
        });
    }
    let probes = r_values
        .iter()
        .map(|&r| BlochVector::new(0.0, 0.0, r))
        .collect::<Result<Vec<_>>>()?;
    let last = (steps - 1) as f64;
    in_pool(threads, || {
        (0..steps)
            .into_par_iter()
            .map(|i| {
                let p = i as f64 / last;
                let mut point = Point {
                    noise: NoiseKind::Bitflip,
                    p,
                    p_c: 0.5,
                    xi,
                    axis: [0.0, 1.0, 0.0],
                    probe: BlochVector::new(0.0, 0.0, 1.0)?,
                };
                let wrap = |e| Error::GridPoint {
                    p,
                    source: Box::new(e),
                };
                let mut values = vec![("fq_con".to_string(), point.evaluate(Quantity::FqCon).map_err(wrap)?)];
                for (r, probe) in r_values.iter().zip(&probes) {
                    point.probe = *probe;
                    values.push((cascade_column(*r), point.evaluate(Quantity::FqCas).map_err(wrap)?));
                }
                point.probe = BlochVector::new(0.0, 0.0, 1.0)?;
                check_finite(p, &values)?;
                Ok(SweepRow { point, values })
            })
            .collect()
    })?
}
