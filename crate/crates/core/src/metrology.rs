//! Fisher information about the phase `ξ`.
//!
//! Closed forms cover the control qubit under Pauli noise; everything
//! else goes through [`qfi_numeric`], the symmetric-logarithmic-derivative
//! spectral formula
//!
//! `F = Σ_{λ_j + λ_k > cutoff} 2 |⟨v_j|∂ρ|v_k⟩|² / (λ_j + λ_k)`
//!
//! with `∂ρ` from a central difference. The closed forms use analytic
//! derivatives only, so the two routes stay independent.

use crate::channels::{
    bloch_to_density, noisy_phase_channel, BlochVector, DensityOperator, KrausChannel,
    UnitaryParams,
};
use crate::error::{Error, Result};
use crate::switch::{coupling_strength, reduced_control, s00, switch_state, ControlSpec};
use crate::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FisherMethod {
    ClosedForm,
    SldNumeric,
    Classical,
}

/// A Fisher information value, never negative.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FisherResult<T> {
    pub value: T,
    pub method: FisherMethod,
}

impl<T: Scalar> FisherResult<T> {
    /// Clamps round-off negatives within the norm tolerance to zero.
    pub fn new(value: T, method: FisherMethod) -> Result<Self> {
        if value.is_nan() {
            return Err(Error::NegativeFisher(f64::NAN));
        }
        if value < T::zero() {
            if value < -T::norm_tol() {
                return Err(Error::NegativeFisher(value.as_f64()));
            }
            return Ok(Self {
                value: T::zero(),
                method,
            });
        }
        Ok(Self { value, method })
    }
}

/// A one-parameter family of states `ξ ↦ ρ_ξ`.
pub trait StateFamily<T> {
    fn state(&self, xi: T) -> Result<DensityOperator<T>>;
}

impl<T, F> StateFamily<T> for F
where
    F: Fn(T) -> Result<DensityOperator<T>>,
{
    fn state(&self, xi: T) -> Result<DensityOperator<T>> {
        self(xi)
    }
}

/// Quantum Fisher information of `family` at `xi0`, central-difference step `h`.
pub fn qfi_numeric<T: Scalar, F: StateFamily<T> + ?Sized>(
    family: &F,
    xi0: T,
    h: T,
) -> Result<FisherResult<T>> {
    if !(h > T::zero()) || !h.is_finite() {
        return Err(Error::OutOfRange {
            name: "h",
            value: h.as_f64(),
            range: "(0, inf)",
        });
    }
    let rho = family.state(xi0)?;
    let plus = family.state(xi0 + h)?;
    let minus = family.state(xi0 - h)?;
    for other in [&plus, &minus] {
        if other.dim() != rho.dim() {
            return Err(Error::DimensionMismatch {
                expected: rho.dim(),
                found: other.dim(),
            });
        }
    }
    let derivative = (plus.matrix() - minus.matrix()).scale_real(T::one() / (T::lit(2.0) * h));

    let eig = rho.matrix().herm_eig()?;
    let vectors: Vec<_> = (0..rho.dim()).map(|j| eig.eigenvectors.column(j)).collect();
    let mut total = T::zero();
    for (j, vj) in vectors.iter().enumerate() {
        for (k, vk) in vectors.iter().enumerate() {
            let denom = eig.eigenvalues[j] + eig.eigenvalues[k];
            if denom > T::sld_cutoff() {
                total += T::lit(2.0) * derivative.sandwich(vj, vk).norm_sqr() / denom;
            }
        }
    }
    FisherResult::new(total, FisherMethod::SldNumeric)
}

/// `1 − Q_c` and `Q_c` for Pauli noise, the former without cancellation.
fn coupling_terms<T: Scalar>(p: T, xi: T, n_l: T) -> Result<(T, T, T)> {
    let u = coupling_strength(p, n_l)?;
    let half = (xi / T::lit(2.0)).sin();
    let one_minus_q = T::lit(2.0) * u * half * half;
    Ok((u, T::one() - one_minus_q, one_minus_q))
}

/// `[u sin ξ]² / (1 − Q_c²)`, with its `ξ → 0` limit `u`.
fn optimal_control_value<T: Scalar>(p: T, xi: T, n_l: T) -> Result<T> {
    let (u, q, one_minus_q) = coupling_terms(p, xi, n_l)?;
    let denom = one_minus_q * (T::one() + q);
    if denom < T::norm_tol() {
        return Ok(u);
    }
    let dq = u * xi.sin();
    Ok(dq * dq / denom)
}

/// QFI of the reduced control state, `4(1−p_c)p_c [∂Q_c]² / (1 − Q_c²)`.
pub fn qfi_control<T: Scalar>(c: &ControlSpec<T>, p: T, xi: T, n_l: T) -> Result<FisherResult<T>> {
    let weight = T::lit(4.0) * (T::one() - c.p_c()) * c.p_c();
    FisherResult::new(weight * optimal_control_value(p, xi, n_l)?, FisherMethod::ClosedForm)
}

/// QFI of the control qubit at the optimal weight `p_c = 1/2`.
pub fn qfi_control_opt<T: Scalar>(p: T, xi: T, n_l: T) -> Result<FisherResult<T>> {
    FisherResult::new(optimal_control_value(p, xi, n_l)?, FisherMethod::ClosedForm)
}

/// Hadamard-basis outcome probabilities `P± = 1/2 ± √((1−p_c)p_c) Q_c`.
pub fn measure_control<T: Scalar>(c: &ControlSpec<T>, q_c: T) -> Result<(T, T)> {
    if !q_c.is_finite() || q_c.abs() > T::one() + T::structural_tol() {
        return Err(Error::OutOfRange {
            name: "q_c",
            value: q_c.as_f64(),
            range: "[-1, 1]",
        });
    }
    let half = T::lit(0.5);
    let shift = c.coherence() * q_c;
    Ok((half + shift, half - shift))
}

/// Classical Fisher information of the Hadamard measurement given
/// `Q_c`, `1 − Q_c` and `∂Q_c`.
///
/// `1 − Q_c` is taken separately so callers with an accurate value avoid
/// the cancellation near `Q_c = 1`. A zero outcome probability (only at
/// `p_c = 1/2`, `Q_c = 1`) with zero derivative returns `limit`.
pub fn cfi_from_coupling<T: Scalar>(
    c: &ControlSpec<T>,
    q_c: T,
    one_minus_q: T,
    dq: T,
    limit: T,
) -> Result<FisherResult<T>> {
    measure_control(c, q_c)?;
    let s = c.coherence();
    let half = T::lit(0.5);
    let off_centre = c.p_c() - half;
    // 1/2 − s Q = (1/2 − s) + s (1 − Q), and 1/4 − s² = (p_c − 1/2)².
    let gap = off_centre * off_centre / (half + s);
    let p_minus = gap + s * one_minus_q;
    let p_plus = half + s * q_c;
    let denom = p_minus * p_plus;
    let dp = s * dq;
    if denom <= T::zero() {
        if dp == T::zero() {
            return FisherResult::new(limit, FisherMethod::Classical);
        }
        return Err(Error::DegenerateMeasurement(p_plus.as_f64()));
    }
    FisherResult::new(dp * dp / denom, FisherMethod::Classical)
}

/// Classical Fisher information of the Hadamard measurement on the control
/// qubit under Pauli noise.
pub fn cfi_control<T: Scalar>(c: &ControlSpec<T>, p: T, xi: T, n_l: T) -> Result<FisherResult<T>> {
    let (u, q, one_minus_q) = coupling_terms(p, xi, n_l)?;
    let dq = -u * xi.sin();
    let limit = T::lit(4.0) * (T::one() - c.p_c()) * c.p_c() * u;
    cfi_from_coupling(c, q, one_minus_q, dq, limit)
}

/// `ξ ↦ reduced control state` of the switch built from `noise` and a rotation about `axis`.
pub fn control_family<'a, T: Scalar>(
    noise: &'a KrausChannel<T>,
    axis: [T; 3],
    rho: &'a DensityOperator<T>,
    c: ControlSpec<T>,
) -> impl Fn(T) -> Result<DensityOperator<T>> + 'a {
    move |xi| {
        let ch = noisy_phase_channel(noise, &UnitaryParams::new(axis, xi)?)?;
        reduced_control(&ch, rho, &c)
    }
}

/// `ξ ↦ E_ξ ∘ E_ξ (ρ)`.
pub fn cascade_family<'a, T: Scalar>(
    noise: &'a KrausChannel<T>,
    axis: [T; 3],
    rho: &'a DensityOperator<T>,
) -> impl Fn(T) -> Result<DensityOperator<T>> + 'a {
    move |xi| {
        let ch = noisy_phase_channel(noise, &UnitaryParams::new(axis, xi)?)?;
        s00(&ch, rho)
    }
}

/// `ξ ↦ joint probe-control output of the switch`.
pub fn joint_family<'a, T: Scalar>(
    noise: &'a KrausChannel<T>,
    axis: [T; 3],
    rho: &'a DensityOperator<T>,
    c: ControlSpec<T>,
) -> impl Fn(T) -> Result<DensityOperator<T>> + 'a {
    move |xi| {
        let ch = noisy_phase_channel(noise, &UnitaryParams::new(axis, xi)?)?;
        Ok(switch_state(&ch, rho, &c)?.joint)
    }
}

/// QFI of the standard cascade for probe Bloch vector `r`, numeric only.
pub fn qfi_cascade<T: Scalar>(
    noise: &KrausChannel<T>,
    u: &UnitaryParams<T>,
    r: BlochVector<T>,
) -> Result<FisherResult<T>> {
    let rho = bloch_to_density(r);
    let family = cascade_family(noise, u.axis(), &rho);
    qfi_numeric(&family, u.phase(), T::default_step())
}

/// QFI of the joint probe-control output, numeric only.
pub fn qfi_joint<T: Scalar>(
    noise: &KrausChannel<T>,
    u: &UnitaryParams<T>,
    rho: &DensityOperator<T>,
    c: &ControlSpec<T>,
) -> Result<FisherResult<T>> {
    qfi_numeric(&joint_family(noise, u.axis(), rho, *c), u.phase(), T::default_step())
}

/// QFI of the reduced control state for any noise, numeric only.
pub fn qfi_control_numeric<T: Scalar>(
    noise: &KrausChannel<T>,
    u: &UnitaryParams<T>,
    rho: &DensityOperator<T>,
    c: &ControlSpec<T>,
) -> Result<FisherResult<T>> {
    qfi_numeric(&control_family(noise, u.axis(), rho, *c), u.phase(), T::default_step())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{depolarizing_channel, pauli_channel, PauliAxis};
    use crate::qmat::Matrix;
    use crate::switch::qc_closed_form;
    use num_complex::Complex;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    // Optimal control QFI at p = 1/2, n_l = 0, ξ = π/5, evaluated in 30-digit arithmetic.
    const FQ_CON_REFERENCE: f64 = 0.474930145243892;

    fn random_axis(rng: &mut impl Rng) -> [f64; 3] {
        loop {
            let v: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            if n > 0.1 && n <= 1.0 {
                return v.map(|a| a / n);
            }
        }
    }

    fn random_bloch(rng: &mut impl Rng) -> BlochVector<f64> {
        loop {
            let v = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            if let Ok(b) = BlochVector::from_array(v) {
                return b;
            }
        }
    }

    fn bz(r: f64) -> BlochVector<f64> {
        BlochVector::new(0.0, 0.0, r).unwrap()
    }

    #[test]
    fn constant_family_has_zero_qfi() {
        let rho = bloch_to_density(BlochVector::new(0.1, 0.2, 0.3).unwrap());
        let f = |_xi: f64| Ok(rho.clone());
        assert_eq!(qfi_numeric(&f, 0.4, 1e-5).unwrap().value, 0.0);
    }

    #[test]
    fn pure_rotation_has_unit_qfi() {
        // generator n·σ/2 on a pure state with r ⟂ n: F = 4 Var = 1
        let rho = bloch_to_density(bz(1.0));
        let f = |xi: f64| {
            let u = crate::channels::rotation_unitary(&UnitaryParams::new([0.0, 1.0, 0.0], xi)?);
            DensityOperator::new(u.conjugate(rho.matrix())?)
        };
        let fi = qfi_numeric(&f, 0.3, 1e-5).unwrap();
        assert!((fi.value - 1.0).abs() < 1e-8);
        assert_eq!(fi.method, FisherMethod::SldNumeric);
    }

    #[test]
    fn qfi_numeric_rejects_bad_step() {
        let f = |_xi: f64| Ok(DensityOperator::maximally_mixed(2));
        assert!(qfi_numeric(&f, 0.0, 0.0).is_err());
        assert!(qfi_numeric(&f, 0.0, -1e-3).is_err());
    }

    #[test]
    fn qfi_numeric_rejects_changing_dimension() {
        let f = |xi: f64| Ok(DensityOperator::maximally_mixed(if xi > 0.0 { 4 } else { 2 }));
        assert!(matches!(qfi_numeric(&f, 0.0, 1e-3), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn reduced_control_family_matches_closed_form_anchor() {
        let noise = pauli_channel(PauliAxis::X, 0.5).unwrap();
        let rho = bloch_to_density(bz(1.0));
        let fam = control_family(&noise, [0.0, 1.0, 0.0], &rho, ControlSpec::balanced());
        let fi = qfi_numeric(&fam, PI / 5.0, 1e-5).unwrap();
        assert!((fi.value - FQ_CON_REFERENCE).abs() < 1e-6);
    }

    #[test]
    fn qfi_control_examples() {
        for p_c in [0.0, 1.0] {
            let c = ControlSpec::new(p_c).unwrap();
            assert_eq!(qfi_control(&c, 0.5, PI / 5.0, 0.0).unwrap().value, 0.0);
        }
        let v = qfi_control(&ControlSpec::balanced(), 0.5, PI / 5.0, 0.0).unwrap().value;
        assert!((v - FQ_CON_REFERENCE).abs() < 1e-13);
        let quarter = qfi_control(&ControlSpec::new(0.25).unwrap(), 0.5, PI / 5.0, 0.0).unwrap();
        assert!((quarter.value - 0.75 * FQ_CON_REFERENCE).abs() < 1e-13);
        assert!(qfi_control(&ControlSpec::balanced(), 1.5, 0.1, 0.0).is_err());
    }

    #[test]
    fn qfi_control_opt_examples() {
        for p in [0.0, 1.0] {
            assert_eq!(qfi_control_opt(p, PI / 5.0, 0.0).unwrap().value, 0.0);
        }
        for n_l in [1.0, -1.0] {
            assert_eq!(qfi_control_opt(0.3, PI / 5.0, n_l).unwrap().value, 0.0);
        }
        let v = qfi_control_opt(0.5, PI / 5.0, 0.0).unwrap();
        assert!((v.value - FQ_CON_REFERENCE).abs() < 1e-13);
        assert_eq!(v, qfi_control(&ControlSpec::balanced(), 0.5, PI / 5.0, 0.0).unwrap());
    }

    #[test]
    fn qfi_control_small_phase_limit() {
        let (p, n_l) = (0.3f64, 0.2f64);
        let u = 2.0 * (1.0 - n_l * n_l) * (1.0 - p) * p;
        assert!((qfi_control_opt(p, 0.0, n_l).unwrap().value - u).abs() < 1e-15);
        let near = qfi_control_opt(p, 1e-4, n_l).unwrap().value;
        assert!((near - u).abs() < 1e-6);
    }

    #[test]
    fn qfi_control_agrees_with_sld_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(30);
        for _ in 0..100 {
            let axis = PauliAxis::ALL[rng.gen_range(0..3)];
            let p = rng.gen_range(0.0..=1.0);
            let c = ControlSpec::new(rng.gen_range(0.0..=1.0)).unwrap();
            let n = random_axis(&mut rng);
            let xi = rng.gen_range(0.0..2.0 * PI);
            let noise = pauli_channel(axis, p).unwrap();
            let rho = bloch_to_density(random_bloch(&mut rng));
            let fam = control_family(&noise, n, &rho, c);
            let numeric = qfi_numeric(&fam, xi, 1e-5).unwrap().value;
            let closed = qfi_control(&c, p, xi, n[axis.index()]).unwrap().value;
            assert!((numeric - closed).abs() < 1e-6, "p={p} xi={xi} numeric={numeric} closed={closed}");
        }
    }

    #[test]
    fn balanced_control_is_optimal() {
        for &p in &[0.1, 0.3, 0.5, 0.8] {
            for &xi in &[0.2, 1.0, 2.5] {
                let values: Vec<f64> = (1..=19)
                    .map(|i| {
                        let c = ControlSpec::new(i as f64 * 0.05).unwrap();
                        qfi_control(&c, p, xi, 0.3).unwrap().value
                    })
                    .collect();
                let argmax = (0..values.len()).max_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap();
                assert_eq!(argmax, 9);
            }
        }
    }

    #[test]
    fn measure_control_examples() {
        let c = ControlSpec::balanced();
        assert_eq!(measure_control(&c, 0.0).unwrap(), (0.5, 0.5));
        assert_eq!(measure_control(&ControlSpec::new(0.0).unwrap(), 0.7).unwrap(), (0.5, 0.5));
        let (plus, minus): (f64, f64) = measure_control(&c, 0.9045085).unwrap();
        assert!((plus - 0.95225425).abs() < 1e-12);
        assert!((minus - 0.04774575).abs() < 1e-12);
        assert!(measure_control(&c, 1.5).is_err());
    }

    #[test]
    fn measure_control_matches_projection() {
        // ⟨±|ρ_con|±⟩ computed directly from the control state
        let c = ControlSpec::new(0.3).unwrap();
        let q = 0.62;
        let rho = crate::switch::control_state(&c, q).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = [Complex::new(s, 0.0), Complex::new(s, 0.0)];
        let minus = [Complex::new(s, 0.0), Complex::new(-s, 0.0)];
        let (pp, pm) = measure_control(&c, q).unwrap();
        assert!((rho.matrix().sandwich(&plus, &plus).re - pp).abs() < 1e-15);
        assert!((rho.matrix().sandwich(&minus, &minus).re - pm).abs() < 1e-15);
    }

    #[test]
    fn cfi_control_examples() {
        let balanced = cfi_control(&ControlSpec::balanced(), 0.5, PI / 5.0, 0.0).unwrap();
        assert!((balanced.value - FQ_CON_REFERENCE).abs() < 1e-12);
        assert_eq!(balanced.method, FisherMethod::Classical);
        assert_eq!(cfi_control(&ControlSpec::new(0.0).unwrap(), 0.5, PI / 5.0, 0.0).unwrap().value, 0.0);
        // Direct evaluation of (∂P+)²/((1−P+)P+) at p_c = 1/4 with a
        // finite-difference derivative of P+.
        let c = ControlSpec::new(0.25).unwrap();
        let s = (0.75f64 * 0.25).sqrt();
        let prob = |xi: f64| 0.5 + s * qc_closed_form(0.5, xi, 0.0).unwrap();
        let h = 1e-6;
        let dp = (prob(PI / 5.0 + h) - prob(PI / 5.0 - h)) / (2.0 * h);
        let p0 = prob(PI / 5.0);
        let direct = dp * dp / (p0 * (1.0 - p0));
        let v = cfi_control(&c, 0.5, PI / 5.0, 0.0).unwrap().value;
        assert!((v - direct).abs() < 1e-8);
        assert!((v - 0.167649959928).abs() < 1e-8);
        assert!(v <= qfi_control(&c, 0.5, PI / 5.0, 0.0).unwrap().value);
    }

    #[test]
    fn cfi_degenerate_outcome_is_an_error() {
        let c = ControlSpec::balanced();
        assert!(matches!(
            cfi_from_coupling(&c, 1.0, 0.0, 0.3, 0.0),
            Err(Error::DegenerateMeasurement(_))
        ));
        assert_eq!(cfi_from_coupling(&c, 1.0, 0.0, 0.0, 0.25).unwrap().value, 0.25);
    }

    #[test]
    fn cfi_never_exceeds_qfi() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..500 {
            let c = ControlSpec::new(rng.gen_range(0.0..=1.0)).unwrap();
            let p = rng.gen_range(0.0..=1.0);
            let xi = rng.gen_range(0.0..2.0 * PI);
            let n_l = rng.gen_range(-1.0..=1.0);
            let cfi = cfi_control(&c, p, xi, n_l).unwrap().value;
            let qfi = qfi_control(&c, p, xi, n_l).unwrap().value;
            assert!(cfi <= qfi + 1e-9);
        }
    }

    #[test]
    fn qfi_control_opt_peaks_at_half_noise() {
        for &xi in &[0.3, PI / 5.0, 1.5, 2.9] {
            let values: Vec<f64> = (0..=20)
                .map(|i| qfi_control_opt(i as f64 * 0.05, xi, 0.0).unwrap().value)
                .collect();
            let argmax = (0..values.len()).max_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap();
            assert_eq!(argmax, 10);
            for i in 0..=20 {
                assert!((values[i] - values[20 - i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn qfi_cascade_examples() {
        let noise = pauli_channel(PauliAxis::X, 0.0).unwrap();
        let u = UnitaryParams::new([0.0, 1.0, 0.0], PI / 5.0).unwrap();
        assert!((qfi_cascade(&noise, &u, bz(1.0)).unwrap().value - 4.0).abs() < 1e-8);
        assert!((qfi_cascade(&noise, &u, bz(0.6)).unwrap().value - 1.44).abs() < 1e-8);
        let flip = pauli_channel(PauliAxis::X, 1.0).unwrap();
        assert!(qfi_cascade(&flip, &u, bz(1.0)).unwrap().value < 1e-9);
    }

    #[test]
    fn qfi_cascade_decreases_at_low_noise() {
        // Strictly decreasing on p ∈ [0, 0.6]; beyond that the bit-flip
        // cascade σ_x U σ_x U approaches the identity and the curve has a
        // small bump before reaching zero at p = 1.
        let u = UnitaryParams::new([0.0, 1.0, 0.0], PI / 5.0).unwrap();
        for r in [0.2, 0.4, 0.6, 0.8, 1.0] {
            let values: Vec<f64> = (0..=6)
                .map(|i| {
                    let noise = pauli_channel(PauliAxis::X, i as f64 / 10.0).unwrap();
                    qfi_cascade(&noise, &u, bz(r)).unwrap().value
                })
                .collect();
            assert!(values.windows(2).all(|w| w[1] <= w[0] + 1e-9), "r={r}: {values:?}");
        }
    }

    #[test]
    fn qfi_cascade_reference_values() {
        // Independent numpy evaluation of the cascade QFI (eigh + SLD sum).
        let u = UnitaryParams::new([0.0, 1.0, 0.0], PI / 5.0).unwrap();
        let expected = [
            (0.1, 1.0, 2.504513),
            (0.5, 1.0, 0.123394),
            (0.6, 1.0, 0.098193),
            (0.7, 1.0, 0.100133),
            (0.9, 0.2, 0.001099),
        ];
        for (p, r, v) in expected {
            let noise = pauli_channel(PauliAxis::X, p).unwrap();
            let got = qfi_cascade(&noise, &u, bz(r)).unwrap().value;
            assert!((got - v).abs() < 1e-6, "p={p} r={r}: {got}");
        }
    }

    #[test]
    fn qfi_joint_examples() {
        let u = UnitaryParams::new([0.0, 1.0, 0.0], PI / 5.0).unwrap();
        let clean = pauli_channel(PauliAxis::X, 0.0).unwrap();
        let rho = bloch_to_density(bz(1.0));
        let joint = qfi_joint(&clean, &u, &rho, &ControlSpec::balanced()).unwrap().value;
        let cascade = qfi_cascade(&clean, &u, bz(1.0)).unwrap().value;
        assert!((joint - cascade).abs() < 1e-6);

        let noisy = pauli_channel(PauliAxis::X, 0.5).unwrap();
        let mixed = bloch_to_density(bz(0.0));
        let joint = qfi_joint(&noisy, &u, &mixed, &ControlSpec::balanced()).unwrap().value;
        let control = qfi_control_opt(0.5, PI / 5.0, 0.0).unwrap().value;
        assert!(joint >= control - 1e-6);

        let single = ControlSpec::new(0.0).unwrap();
        let rho = bloch_to_density(bz(0.7));
        let joint = qfi_joint(&noisy, &u, &rho, &single).unwrap().value;
        let cascade = qfi_cascade(&noisy, &u, bz(0.7)).unwrap().value;
        assert!((joint - cascade).abs() < 1e-6);
    }

    #[test]
    fn depolarizing_control_qfi_ignores_axis_and_probe() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let noise = depolarizing_channel(0.4).unwrap();
        let c = ControlSpec::new(0.4).unwrap();
        let xi = 0.9;
        let mut values = Vec::new();
        for _ in 0..10 {
            let u = UnitaryParams::new(random_axis(&mut rng), xi).unwrap();
            let rho = bloch_to_density(random_bloch(&mut rng));
            values.push(qfi_control_numeric(&noise, &u, &rho, &c).unwrap().value);
        }
        let spread = values.iter().cloned().fold(f64::MIN, f64::max) - values.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread < 1e-8, "{values:?}");
        assert!(values[0] > 0.0);
    }

    #[test]
    fn pauli_control_qfi_depends_on_axis_only_through_component() {
        let noise = pauli_channel(PauliAxis::Z, 0.35).unwrap();
        let c = ControlSpec::balanced();
        let rho = bloch_to_density(BlochVector::new(0.4, -0.1, 0.2).unwrap());
        let (t, nz) = (0.8f64.sqrt(), 0.2f64.sqrt());
        let a = UnitaryParams::new([t, 0.0, nz], 1.2).unwrap();
        let b = UnitaryParams::new([0.0, -t, nz], 1.2).unwrap();
        let fa = qfi_control_numeric(&noise, &a, &rho, &c).unwrap().value;
        let fb = qfi_control_numeric(&noise, &b, &rho, &c).unwrap().value;
        assert!((fa - fb).abs() < 1e-8);
    }

    #[test]
    fn fisher_result_clamps_small_negatives() {
        assert_eq!(FisherResult::new(-1e-13, FisherMethod::SldNumeric).unwrap().value, 0.0);
        assert!(FisherResult::new(-1e-6, FisherMethod::SldNumeric).is_err());
        assert!(FisherResult::new(f64::NAN, FisherMethod::SldNumeric).is_err());
    }

    #[test]
    fn single_precision_closed_form() {
        let v = qfi_control_opt(0.5f32, std::f32::consts::PI / 5.0, 0.0).unwrap().value;
        assert!((v as f64 - FQ_CON_REFERENCE).abs() < 1e-5);
        let m: Matrix<f32> = Matrix::identity(2);
        assert_eq!(m.dim(), 2);
    }
}
