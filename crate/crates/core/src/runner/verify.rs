//! Self-check suite behind the `verify` subcommand: oracle equivalences
//! and model invariants on seeded random draws.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channels::{bloch_to_density, depolarizing_channel, noisy_phase_channel, pauli_channel, PauliAxis};
use crate::error::Result;
use crate::metrology::{
    cfi_control, control_family, qfi_control, qfi_control_numeric, qfi_control_opt, qfi_numeric,
};
use crate::switch::{qc_closed_form, qc_numeric, s00, s01, switch_channel, switch_kraus_apply, switch_state};
use crate::{BlochVector, ControlSpec, UnitaryParams};

use super::sweep::{fig2_preset, FIG2_R_VALUES};

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

pub fn random_axis(rng: &mut impl Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if n > 0.1 && n <= 1.0 {
            return v.map(|a| a / n);
        }
    }
}

pub fn random_bloch(rng: &mut impl Rng) -> BlochVector {
    loop {
        let v = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        if let Ok(b) = BlochVector::from_array(v) {
            return b;
        }
    }
}

fn spread(values: &[f64]) -> f64 {
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    hi - lo
}

fn outcome(name: &'static str, worst: f64, tol: f64) -> CheckOutcome {
    CheckOutcome {
        name,
        passed: worst < tol,
        detail: format!("max deviation {worst:.3e} (tolerance {tol:.0e})"),
    }
}

fn joint_equivalence(rng: &mut ChaCha8Rng) -> Result<CheckOutcome> {
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let noise = pauli_channel(PauliAxis::ALL[rng.gen_range(0..3)], rng.gen_range(0.0..=1.0))?;
        let u = UnitaryParams::new(random_axis(rng), rng.gen_range(0.0..2.0 * PI))?;
        let ch = noisy_phase_channel(&noise, &u)?;
        let rho = bloch_to_density(random_bloch(rng));
        let c = ControlSpec::new(rng.gen_range(0.0..=1.0))?;
        let a = switch_state(&ch, &rho, &c)?.joint;
        let b = switch_kraus_apply(&ch, &rho, &c)?;
        worst = worst.max(a.matrix().max_abs_diff(b.matrix()));
    }
    Ok(outcome("joint output: block form = joint Kraus oracle", worst, 1e-12))
}

fn qc_closed_vs_numeric(rng: &mut ChaCha8Rng) -> Result<CheckOutcome> {
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let axis = PauliAxis::ALL[rng.gen_range(0..3)];
        let p = rng.gen_range(0.0..=1.0);
        let u = UnitaryParams::new(random_axis(rng), rng.gen_range(0.0..2.0 * PI))?;
        let ch = noisy_phase_channel(&pauli_channel(axis, p)?, &u)?;
        let rho = bloch_to_density(random_bloch(rng));
        let closed = qc_closed_form(p, u.phase(), u.component(axis))?;
        worst = worst.max((qc_numeric(&ch, &rho)? - closed).abs());
    }
    Ok(outcome("Q_c: Kraus trace = closed form", worst, 1e-10))
}

fn qc_probe_independence(rng: &mut ChaCha8Rng) -> Result<CheckOutcome> {
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let axis = PauliAxis::ALL[rng.gen_range(0..3)];
        let u = UnitaryParams::new(random_axis(rng), rng.gen_range(0.0..2.0 * PI))?;
        let ch = noisy_phase_channel(&pauli_channel(axis, rng.gen_range(0.0..=1.0))?, &u)?;
        let values = (0..50)
            .map(|_| qc_numeric(&ch, &bloch_to_density(random_bloch(rng))))
            .collect::<Result<Vec<_>>>()?;
        worst = worst.max(spread(&values));
    }
    Ok(outcome("Q_c independent of the probe", worst, 1e-10))
}

fn qfi_closed_vs_numeric(rng: &mut ChaCha8Rng) -> Result<CheckOutcome> {
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let axis = PauliAxis::ALL[rng.gen_range(0..3)];
        let p = rng.gen_range(0.0..=1.0);
        let c = ControlSpec::new(rng.gen_range(0.0..=1.0))?;
        let n = random_axis(rng);
        let xi = rng.gen_range(0.0..2.0 * PI);
        let noise = pauli_channel(axis, p)?;
        let rho = bloch_to_density(random_bloch(rng));
        let numeric = qfi_numeric(&control_family(&noise, n, &rho, c), xi, 1e-5)?.value;
        let closed = qfi_control(&c, p, xi, n[axis.index()])?.value;
        worst = worst.max((numeric - closed).abs());
    }
    Ok(outcome("control QFI: SLD numeric = closed form", worst, 1e-6))
}

fn measurement_optimality() -> Result<CheckOutcome> {
    let c = ControlSpec::balanced();
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        for j in 0..20 {
            let p = i as f64 / 19.0;
            let xi = 2.0 * PI * j as f64 / 20.0;
            let cfi = cfi_control(&c, p, xi, 0.0)?.value;
            let qfi = qfi_control_opt(p, xi, 0.0)?.value;
            worst = worst.max((cfi - qfi).abs());
        }
    }
    Ok(outcome("Hadamard CFI at p_c = 1/2 = optimal QFI", worst, 1e-9))
}

fn balanced_control_optimal() -> Result<CheckOutcome> {
    let mut failures = 0;
    for i in 1..20 {
        for j in 1..10 {
            let p = i as f64 / 20.0;
            let xi = j as f64 * 0.3;
            let values = (1..=19)
                .map(|k| Ok(qfi_control(&ControlSpec::new(k as f64 * 0.05)?, p, xi, 0.2)?.value))
                .collect::<Result<Vec<f64>>>()?;
            let argmax = (0..values.len()).max_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap_or(0);
            if argmax != 9 {
                failures += 1;
            }
        }
    }
    Ok(CheckOutcome {
        name: "control QFI maximal at p_c = 1/2",
        passed: failures == 0,
        detail: format!("{failures} grid points with another argmax"),
    })
}

fn degeneracy() -> Result<CheckOutcome> {
    let u = UnitaryParams::new([1.0, 0.0, 0.0], 0.7)?;
    let ch = noisy_phase_channel(&pauli_channel(PauliAxis::X, 0.3)?, &u)?;
    let rho = bloch_to_density(BlochVector::new(0.2, 0.5, -0.4)?);
    let dev = s01(&ch, &rho)?.max_abs_diff(s00(&ch, &rho)?.matrix());
    let fq = qfi_control_opt(0.3, 0.7, 1.0)?.value;
    let mut worst_flip: f64 = 0.0;
    for i in 0..=10 {
        let p = i as f64 / 10.0;
        let y = UnitaryParams::new([0.0, 1.0, 0.0], PI / 5.0)?;
        let bit = qfi_control_opt(p, PI / 5.0, y.component(PauliAxis::X))?.value;
        let phase = qfi_control_opt(p, PI / 5.0, y.component(PauliAxis::Z))?.value;
        worst_flip = worst_flip.max((bit - phase).abs());
    }
    Ok(CheckOutcome {
        name: "aligned axis: S01 = S00 and zero control QFI",
        passed: dev < 1e-12 && fq == 0.0 && worst_flip < 1e-12,
        detail: format!("|S01 - S00| = {dev:.3e}, F = {fq}, bit/phase-flip gap {worst_flip:.3e}"),
    })
}

fn cptp(rng: &mut ChaCha8Rng) -> Result<CheckOutcome> {
    let mut min_eig = f64::INFINITY;
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let p = rng.gen_range(0.0..=1.0);
        let noise = if rng.gen_bool(0.5) {
            pauli_channel(PauliAxis::ALL[rng.gen_range(0..3)], p)?
        } else {
            depolarizing_channel(p)?
        };
        let u = UnitaryParams::new(random_axis(rng), rng.gen_range(0.0..2.0 * PI))?;
        let joint = switch_channel(&noisy_phase_channel(&noise, &u)?)?;
        worst = worst.max(joint.completeness_residual());
        min_eig = min_eig.min(joint.choi()?.herm_eig()?.eigenvalues[0]);
    }
    Ok(CheckOutcome {
        name: "switch channel is CPTP",
        passed: min_eig > -1e-10 && worst < 1e-10,
        detail: format!("min Choi eigenvalue {min_eig:.3e}, completeness residual {worst:.3e}"),
    })
}

fn depolarizing_independence(rng: &mut ChaCha8Rng) -> Result<CheckOutcome> {
    let noise = depolarizing_channel(0.35)?;
    let c = ControlSpec::new(0.4)?;
    let xi = 1.1;
    let mut values = Vec::new();
    for _ in 0..20 {
        let u = UnitaryParams::new(random_axis(rng), xi)?;
        let rho = bloch_to_density(BlochVector::new(0.0, 0.0, 1.0)?);
        values.push(qfi_control_numeric(&noise, &u, &rho, &c)?.value);
    }
    let u = UnitaryParams::new([0.0, 1.0, 0.0], xi)?;
    for _ in 0..20 {
        let rho = bloch_to_density(random_bloch(rng));
        values.push(qfi_control_numeric(&noise, &u, &rho, &c)?.value);
    }
    Ok(outcome("depolarizing: control QFI independent of axis and probe", spread(&values), 1e-8))
}

fn symmetry_and_limit() -> Result<CheckOutcome> {
    let mut worst: f64 = 0.0;
    for i in 0..=20 {
        let p = i as f64 / 20.0;
        for xi in [0.3, 1.3, 2.8] {
            let a = qfi_control_opt(p, xi, 0.3)?.value;
            let b = qfi_control_opt(1.0 - p, xi, 0.3)?.value;
            worst = worst.max((a - b).abs());
        }
    }
    let (p, n_l) = (0.3, 0.0);
    let limit = qfi_control_opt(p, 0.0, n_l)?.value;
    let u = 2.0 * (1.0 - n_l * n_l) * (1.0 - p) * p;
    let noise = pauli_channel(PauliAxis::X, p)?;
    let rho = bloch_to_density(BlochVector::new(0.0, 0.0, 1.0)?);
    let numeric = qfi_numeric(
        &control_family(&noise, [0.0, 1.0, 0.0], &rho, ControlSpec::balanced()),
        1e-4,
        1e-5,
    )?
    .value;
    Ok(CheckOutcome {
        name: "p <-> 1-p symmetry and small-phase limit",
        passed: worst < 1e-12 && (limit - u).abs() < 1e-15 && (numeric - limit).abs() < 1e-4,
        detail: format!("symmetry gap {worst:.3e}, limit {limit}, numeric at 1e-4 {numeric:.8}"),
    })
}

fn fig2_claims() -> Result<Vec<CheckOutcome>> {
    let rows = fig2_preset(11, &FIG2_R_VALUES, PI / 5.0)?;
    let column = |name: &str| rows.iter().map(|r| r.value(name).unwrap_or(f64::NAN)).collect::<Vec<_>>();
    let fq_con = column("fq_con");
    let peak = (0..fq_con.len()).max_by(|&a, &b| fq_con[a].total_cmp(&fq_con[b])).unwrap_or(0);

    let mut rises = Vec::new();
    let mut crossover_failures = 0;
    for &r in &FIG2_R_VALUES {
        let name = super::sweep::cascade_column(r);
        let cas = column(&name);
        for i in 1..cas.len() {
            if cas[i] > cas[i - 1] + 1e-9 {
                rises.push(format!("r={r} p={:.1}", i as f64 / 10.0));
            }
        }
        for i in 6..=9 {
            if fq_con[i] <= cas[i] {
                crossover_failures += 1;
            }
        }
    }
    Ok(vec![
        CheckOutcome {
            name: "control QFI peaks at p = 1/2 and vanishes at p = 0, 1",
            passed: peak == 5 && fq_con[0] == 0.0 && fq_con[10] == 0.0,
            detail: format!("argmax p = {:.1}, peak {:.9}", peak as f64 / 10.0, fq_con[peak]),
        },
        CheckOutcome {
            name: "cascade QFI non-increasing in p",
            passed: rises.is_empty(),
            detail: if rises.is_empty() {
                "monotone on all five probe lengths".into()
            } else {
                format!("increases at {}", rises.join(", "))
            },
        },
        CheckOutcome {
            name: "control QFI above cascade QFI for p in 0.6..0.9",
            passed: crossover_failures == 0,
            detail: format!("{crossover_failures} failing (p, r) pairs"),
        },
    ])
}

/// Runs every check with a fixed seed.
pub fn run_checks() -> Result<Vec<CheckOutcome>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0515_71c4);
    let mut out = vec![
        joint_equivalence(&mut rng)?,
        qc_closed_vs_numeric(&mut rng)?,
        qc_probe_independence(&mut rng)?,
        qfi_closed_vs_numeric(&mut rng)?,
        measurement_optimality()?,
        balanced_control_optimal()?,
        degeneracy()?,
        cptp(&mut rng)?,
        depolarizing_independence(&mut rng)?,
        symmetry_and_limit()?,
    ];
    out.extend(fig2_claims()?);
    Ok(out)
}
