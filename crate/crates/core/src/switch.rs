//! The quantum switch: two copies of the same noisy phase process placed
//! in a coherent superposition of both causal orders by a control qubit.
//!
//! Two routes build the joint probe-control output. [`switch_state`]
//! assembles it block by block from the superoperators `S00` and `S01`;
//! [`switch_kraus_apply`] applies the joint Kraus operators
//! `W_jk = K_j K_k ⊗ |0⟩⟨0| + K_k K_j ⊗ |1⟩⟨1|` to `ρ ⊗ |ψ_c⟩⟨ψ_c|`.
//! The two agree entrywise and are cross-checked in the test suites.

use num_complex::Complex;

use crate::channels::{DensityOperator, KrausChannel};
use crate::error::{check_probability, Error, Result};
use crate::qmat::{Matrix, Subsystem};
use crate::Scalar;

/// Weight `p_c` of the control state `√p_c |0⟩ + √(1−p_c) |1⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ControlSpec<T> {
    p_c: T,
}

impl<T: Scalar> ControlSpec<T> {
    pub fn new(p_c: T) -> Result<Self> {
        check_probability("p_c", p_c)?;
        Ok(Self { p_c })
    }

    /// Equal-weight superposition `|+⟩`.
    pub fn balanced() -> Self {
        Self { p_c: T::lit(0.5) }
    }

    pub fn p_c(&self) -> T {
        self.p_c
    }

    /// `√((1−p_c) p_c)`, the off-diagonal weight of the control state.
    pub fn coherence(&self) -> T {
        ((T::one() - self.p_c) * self.p_c).sqrt()
    }

    /// Control amplitudes `(√p_c, √(1−p_c))`.
    pub fn amplitudes(&self) -> [Complex<T>; 2] {
        [
            Complex::new(self.p_c.sqrt(), T::zero()),
            Complex::new((T::one() - self.p_c).sqrt(), T::zero()),
        ]
    }

    /// `|ψ_c⟩⟨ψ_c|`.
    pub fn density(&self) -> Matrix<T> {
        Matrix::outer(&self.amplitudes())
    }
}

/// Output of the switched channel.
#[derive(Clone, Debug)]
pub struct SwitchResult<T> {
    /// Probe ⊗ control state.
    pub joint: DensityOperator<T>,
    pub control_reduced: DensityOperator<T>,
    /// `tr S01(ρ)`.
    pub q_c: T,
}

fn check_qubit<T: Scalar>(ch: &KrausChannel<T>, rho: &DensityOperator<T>) -> Result<()> {
    for d in [ch.dim(), rho.dim()] {
        if d != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: d,
            });
        }
    }
    Ok(())
}

/// Standard cascade `E ∘ E (ρ)`.
pub fn s00<T: Scalar>(ch: &KrausChannel<T>, rho: &DensityOperator<T>) -> Result<DensityOperator<T>> {
    check_qubit(ch, rho)?;
    let once = ch.apply_raw(rho.matrix())?;
    DensityOperator::new(ch.apply_raw(&once)?)
}

/// `S01(ρ) = Σ_jk K_j K_k ρ K_j† K_k†`.
///
/// Hermitian but in general neither positive nor unit-trace.
pub fn s01<T: Scalar>(ch: &KrausChannel<T>, rho: &DensityOperator<T>) -> Result<Matrix<T>> {
    check_qubit(ch, rho)?;
    let ops = ch.operators();
    let adj: Vec<_> = ops.iter().map(Matrix::adjoint).collect();
    let mut out = Matrix::zeros(2);
    for (j, kj) in ops.iter().enumerate() {
        for (k, kk) in ops.iter().enumerate() {
            let left = &(kj * kk) * rho.matrix();
            out = &out + &(&left * &(&adj[j] * &adj[k]));
        }
    }
    Ok(out)
}

/// Joint output assembled from the block form
/// `S00 ⊗ [p_c|0⟩⟨0| + (1−p_c)|1⟩⟨1|] + S01 ⊗ √((1−p_c)p_c)(|0⟩⟨1| + |1⟩⟨0|)`.
pub fn switch_state<T: Scalar>(
    ch: &KrausChannel<T>,
    rho: &DensityOperator<T>,
    c: &ControlSpec<T>,
) -> Result<SwitchResult<T>> {
    let cascade = s00(ch, rho)?;
    let cross = s01(ch, rho)?;
    let populations = Matrix::real_diag(&[c.p_c, T::one() - c.p_c]);
    let coherences = (&Matrix::unit(2, 0, 1) + &Matrix::unit(2, 1, 0)).scale_real(c.coherence());
    let joint = &cascade.matrix().kron(&populations) + &cross.kron(&coherences);
    let joint = DensityOperator::new(joint)?;
    let control_reduced =
        DensityOperator::new(joint.matrix().partial_trace(Subsystem::Control, (2, 2))?)?;
    Ok(SwitchResult {
        joint,
        control_reduced,
        q_c: trace_real(&cross)?,
    })
}

/// Joint Kraus operators `W_jk` of the switch acting on probe ⊗ control.
pub fn switch_kraus_operators<T: Scalar>(ch: &KrausChannel<T>) -> Result<Vec<Matrix<T>>> {
    let zero = Matrix::unit(2, 0, 0);
    let one = Matrix::unit(2, 1, 1);
    let ops = ch.operators();
    let mut w = Vec::with_capacity(ops.len() * ops.len());
    for kj in ops {
        for kk in ops {
            let forward = kj.mat_mul(kk)?;
            let backward = kk.mat_mul(kj)?;
            w.push(&forward.kron(&zero) + &backward.kron(&one));
        }
    }
    Ok(w)
}

/// The switch as a channel on the probe-control pair.
pub fn switch_channel<T: Scalar>(ch: &KrausChannel<T>) -> Result<KrausChannel<T>> {
    if ch.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: ch.dim(),
        });
    }
    KrausChannel::new(switch_kraus_operators(ch)?)
}

/// Joint output computed as `Σ_jk W_jk (ρ ⊗ ρ_c) W_jk†`.
pub fn switch_kraus_apply<T: Scalar>(
    ch: &KrausChannel<T>,
    rho: &DensityOperator<T>,
    c: &ControlSpec<T>,
) -> Result<DensityOperator<T>> {
    check_qubit(ch, rho)?;
    let joint_channel = switch_channel(ch)?;
    let input = rho.matrix().kron(&c.density());
    DensityOperator::new(joint_channel.apply_raw(&input)?)
}

/// Reduced control state
/// `p_c|0⟩⟨0| + (1−p_c)|1⟩⟨1| + Q_c √((1−p_c)p_c)(|0⟩⟨1| + |1⟩⟨0|)`.
pub fn reduced_control<T: Scalar>(
    ch: &KrausChannel<T>,
    rho: &DensityOperator<T>,
    c: &ControlSpec<T>,
) -> Result<DensityOperator<T>> {
    let q_c = qc_numeric(ch, rho)?;
    control_state(c, q_c)
}

/// Control state for a given coupling `q_c`.
pub fn control_state<T: Scalar>(c: &ControlSpec<T>, q_c: T) -> Result<DensityOperator<T>> {
    let off = Complex::new(q_c * c.coherence(), T::zero());
    let mut m = Matrix::real_diag(&[c.p_c, T::one() - c.p_c]);
    m[(0, 1)] = off;
    m[(1, 0)] = off;
    DensityOperator::new(m)
}

fn check_component<T: Scalar>(n_l: T) -> Result<()> {
    if n_l.is_finite() && n_l.abs() <= T::one() + T::norm_tol() {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name: "n_l",
            value: n_l.as_f64(),
            range: "[-1, 1]",
        })
    }
}

/// `2(1 − n_ℓ²)(1 − p)p`, the amplitude of the phase dependence of `Q_c`.
pub(crate) fn coupling_strength<T: Scalar>(p: T, n_l: T) -> Result<T> {
    check_probability("p", p)?;
    check_component(n_l)?;
    let n2 = (n_l * n_l).min(T::one());
    // q ≥ 1/2 makes 1 − q exact, so p and 1 − p give bit-identical products.
    let q = p.max(T::one() - p);
    Ok(T::lit(2.0) * (T::one() - n2) * (T::one() - q) * q)
}

/// `Q_c(ξ) = 1 − 2(1 − n_ℓ²)(1 − p)p(1 − cos ξ)` for Pauli noise.
pub fn qc_closed_form<T: Scalar>(p: T, xi: T, n_l: T) -> Result<T> {
    let u = coupling_strength(p, n_l)?;
    Ok(T::one() - u * (T::one() - xi.cos()))
}

/// Analytic `∂Q_c/∂ξ = −2(1 − n_ℓ²)(1 − p)p sin ξ`.
pub fn qc_closed_form_derivative<T: Scalar>(p: T, xi: T, n_l: T) -> Result<T> {
    let u = coupling_strength(p, n_l)?;
    Ok(-u * xi.sin())
}

/// `Q_c = tr S01(ρ)` evaluated from the Kraus operators.
pub fn qc_numeric<T: Scalar>(ch: &KrausChannel<T>, rho: &DensityOperator<T>) -> Result<T> {
    trace_real(&s01(ch, rho)?)
}

fn trace_real<T: Scalar>(m: &Matrix<T>) -> Result<T> {
    let tr = m.trace();
    if !(tr.im.abs() < T::structural_tol()) {
        return Err(Error::ComplexTrace(tr.im.as_f64()));
    }
    Ok(tr.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{
        apply_channel, bloch_to_density, depolarizing_channel, noisy_phase_channel, pauli_channel,
        rotation_unitary, BlochVector, PauliAxis, UnitaryParams,
    };
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    type M = Matrix<f64>;

    fn random_bloch(rng: &mut impl Rng) -> BlochVector<f64> {
        loop {
            let v = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            if let Ok(b) = BlochVector::from_array(v) {
                return b;
            }
        }
    }

    fn random_axis(rng: &mut impl Rng) -> [f64; 3] {
        loop {
            let v: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            if n > 0.1 && n <= 1.0 {
                return v.map(|a| a / n);
            }
        }
    }

    fn bitflip(p: f64, axis: [f64; 3], xi: f64) -> KrausChannel<f64> {
        let u = UnitaryParams::new(axis, xi).unwrap();
        noisy_phase_channel(&pauli_channel(PauliAxis::X, p).unwrap(), &u).unwrap()
    }

    fn up() -> DensityOperator<f64> {
        bloch_to_density(BlochVector::new(0.0, 0.0, 1.0).unwrap())
    }

    #[test]
    fn s00_noiseless_doubles_the_phase() {
        let rho = bloch_to_density(BlochVector::new(0.6, 0.0, 0.3).unwrap());
        let u = UnitaryParams::new([0.0, 1.0, 0.0], 0.4).unwrap();
        let ch = bitflip(0.0, u.axis(), u.phase());
        let u2 = rotation_unitary(&u.with_phase(0.8));
        let expected = u2.conjugate(rho.matrix()).unwrap();
        assert!(s00(&ch, &rho).unwrap().matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn s00_full_bitflip_about_y_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        for _ in 0..20 {
            let rho = bloch_to_density(random_bloch(&mut rng));
            let ch = bitflip(1.0, [0.0, 1.0, 0.0], rng.gen_range(0.0..6.3));
            assert!(s00(&ch, &rho).unwrap().matrix().max_abs_diff(rho.matrix()) < 1e-14);
        }
    }

    #[test]
    fn s00_matches_two_channel_applications() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..50 {
            let rho = bloch_to_density(random_bloch(&mut rng));
            let ch = bitflip(rng.gen_range(0.0..1.0), random_axis(&mut rng), rng.gen_range(0.0..6.3));
            let twice = apply_channel(&ch, &apply_channel(&ch, &rho).unwrap()).unwrap();
            let out = s00(&ch, &rho).unwrap();
            assert!(out.matrix().max_abs_diff(twice.matrix()) < 1e-14);
            assert!((out.matrix().trace().re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn s01_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let rho = bloch_to_density(random_bloch(&mut rng));
        // noiseless: single Kraus operator
        let ch = bitflip(0.0, random_axis(&mut rng), 1.1);
        let single = KrausChannel::new(vec![ch.operators()[0].clone()]).unwrap();
        assert!(s01(&single, &rho).unwrap().max_abs_diff(s00(&single, &rho).unwrap().matrix()) < 1e-12);
        // axis aligned with the noise direction
        for sign in [1.0, -1.0] {
            let ch = bitflip(0.37, [sign, 0.0, 0.0], 0.9);
            assert!(s01(&ch, &rho).unwrap().max_abs_diff(s00(&ch, &rho).unwrap().matrix()) < 1e-12);
        }
        let ch = bitflip(0.5, [0.0, 1.0, 0.0], PI);
        assert!(s01(&ch, &rho).unwrap().trace().norm() < 1e-14);
    }

    #[test]
    fn s01_is_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..100 {
            let rho = bloch_to_density(random_bloch(&mut rng));
            let u = UnitaryParams::new(random_axis(&mut rng), rng.gen_range(0.0..6.3)).unwrap();
            let noise = depolarizing_channel(rng.gen_range(0.0..=1.0)).unwrap();
            let ch = noisy_phase_channel(&noise, &u).unwrap();
            assert!(s01(&ch, &rho).unwrap().hermitian_deviation() < 1e-12);
        }
    }

    #[test]
    fn switch_state_single_order_limits() {
        let rho = bloch_to_density(BlochVector::new(0.2, -0.4, 0.5).unwrap());
        let ch = bitflip(0.3, [0.0, 1.0, 0.0], 0.7);
        let cascade = s00(&ch, &rho).unwrap();
        for (p_c, level) in [(0.0, 1), (1.0, 0)] {
            let res = switch_state(&ch, &rho, &ControlSpec::new(p_c).unwrap()).unwrap();
            let expected = cascade.matrix().kron(&M::unit(2, level, level));
            assert!(res.joint.matrix().max_abs_diff(&expected) < 1e-15);
        }
    }

    #[test]
    fn switch_state_matches_kraus_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for _ in 0..200 {
            let rho = bloch_to_density(random_bloch(&mut rng));
            let ch = bitflip(rng.gen_range(0.0..=1.0), random_axis(&mut rng), rng.gen_range(0.0..6.3));
            let c = ControlSpec::new(rng.gen_range(0.0..=1.0)).unwrap();
            let res = switch_state(&ch, &rho, &c).unwrap();
            let oracle = switch_kraus_apply(&ch, &rho, &c).unwrap();
            assert!(res.joint.matrix().max_abs_diff(oracle.matrix()) < 1e-12);
            assert!((res.joint.matrix().trace().re - 1.0).abs() < 1e-12);
            let probe = res.joint.matrix().partial_trace(Subsystem::Probe, (2, 2)).unwrap();
            assert!(probe.max_abs_diff(s00(&ch, &rho).unwrap().matrix()) < 1e-12);
            assert!(res.q_c.abs() <= 1.0 + 1e-10);
        }
    }

    #[test]
    fn kraus_oracle_examples() {
        let rho = bloch_to_density(BlochVector::new(0.1, 0.7, -0.2).unwrap());
        let ch = bitflip(0.0, [0.0, 0.0, 1.0], 1.3);
        let out = switch_kraus_apply(&ch, &rho, &ControlSpec::balanced()).unwrap();
        let plus = M::identity(2).scale_real(0.5);
        let plus = &plus + &M::pauli_x().scale_real(0.5);
        let expected = s00(&ch, &rho).unwrap().matrix().kron(&plus);
        assert!(out.matrix().max_abs_diff(&expected) < 1e-15);

        let w = switch_kraus_operators(&bitflip(0.4, [0.6, 0.8, 0.0], 2.0)).unwrap();
        assert_eq!(w.len(), 4);
        let sum = w.iter().fold(M::zeros(4), |acc, k| &acc + &(&k.adjoint() * k));
        assert!(sum.max_abs_diff(&M::identity(4)) < 1e-10);
    }

    #[test]
    fn switch_channel_choi_is_positive() {
        let ch = switch_channel(&bitflip(0.3, [0.0, 1.0, 0.0], 0.6)).unwrap();
        let choi = ch.choi().unwrap();
        assert_eq!(choi.dim(), 16);
        assert!(choi.herm_eig().unwrap().eigenvalues[0] > -1e-10);
    }

    #[test]
    fn reduced_control_examples() {
        let rho = bloch_to_density(BlochVector::new(0.3, 0.3, 0.3).unwrap());
        let ch = bitflip(0.4, [0.0, 1.0, 0.0], 0.0);
        let out = reduced_control(&ch, &rho, &ControlSpec::balanced()).unwrap();
        let plus = &M::identity(2).scale_real(0.5) + &M::pauli_x().scale_real(0.5);
        assert!(out.matrix().max_abs_diff(&plus) < 1e-14);

        let ch = bitflip(0.5, [0.0, 1.0, 0.0], PI);
        let c = ControlSpec::new(0.3).unwrap();
        let out = reduced_control(&ch, &rho, &c).unwrap();
        assert!(out.matrix().max_abs_diff(&M::real_diag(&[0.3, 0.7])) < 1e-14);
    }

    #[test]
    fn reduced_control_matches_partial_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        for _ in 0..100 {
            let rho = bloch_to_density(random_bloch(&mut rng));
            let ch = bitflip(rng.gen_range(0.0..=1.0), random_axis(&mut rng), rng.gen_range(0.0..6.3));
            let c = ControlSpec::new(rng.gen_range(0.0..=1.0)).unwrap();
            let res = switch_state(&ch, &rho, &c).unwrap();
            let reduced = reduced_control(&ch, &rho, &c).unwrap();
            assert!(reduced.matrix().max_abs_diff(res.control_reduced.matrix()) < 1e-12);
            assert!((reduced.matrix().trace().re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn qc_closed_form_examples() {
        assert_eq!(qc_closed_form(0.3, 0.0, 0.2).unwrap(), 1.0);
        assert!(qc_closed_form(0.5, PI, 0.0).unwrap().abs() < 1e-15);
        // 1 - (1/2)(1 - cos(π/5))
        let v = qc_closed_form(0.5, PI / 5.0, 0.0).unwrap();
        assert!((v - 0.904508497187474).abs() < 1e-14);
        let ch = bitflip(0.5, [0.0, 1.0, 0.0], PI / 5.0);
        assert!((qc_numeric(&ch, &up()).unwrap() - v).abs() < 1e-14);
        assert!(qc_closed_form(1.5, 0.1, 0.0).is_err());
        assert!(qc_closed_form(0.5, 0.1, 1.5).is_err());
    }

    #[test]
    fn qc_numeric_examples() {
        let ch = bitflip(0.0, [0.0, 0.0, 1.0], 1.0);
        assert!((qc_numeric(&ch, &up()).unwrap() - 1.0).abs() < 1e-15);
        let ch = bitflip(0.5, [FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0], PI);
        let rho = bloch_to_density(BlochVector::new(0.3, 0.2, 0.1).unwrap());
        assert!((qc_numeric(&ch, &rho).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn qc_numeric_matches_closed_form_for_every_pauli_axis() {
        let mut rng = ChaCha8Rng::seed_from_u64(26);
        for _ in 0..300 {
            let axis = PauliAxis::ALL[rng.gen_range(0..3)];
            let p = rng.gen_range(0.0..=1.0);
            let xi = rng.gen_range(0.0..2.0 * PI);
            let u = UnitaryParams::new(random_axis(&mut rng), xi).unwrap();
            let ch = noisy_phase_channel(&pauli_channel(axis, p).unwrap(), &u).unwrap();
            let rho = bloch_to_density(random_bloch(&mut rng));
            let closed = qc_closed_form(p, xi, u.component(axis)).unwrap();
            assert!((qc_numeric(&ch, &rho).unwrap() - closed).abs() < 1e-10);
            assert!(closed.abs() <= 1.0);
        }
    }

    #[test]
    fn qc_closed_form_is_symmetric_in_p() {
        for i in 0..=20 {
            let p = i as f64 / 20.0;
            for xi in [0.3, 1.7, 3.0] {
                assert_eq!(
                    qc_closed_form(p, xi, 0.4).unwrap(),
                    qc_closed_form(1.0 - p, xi, 0.4).unwrap()
                );
            }
        }
    }

    #[test]
    fn control_spec_validation() {
        assert!(ControlSpec::new(1.5).is_err());
        assert!(ControlSpec::new(-0.01).is_err());
        assert_eq!(ControlSpec::new(0.25).unwrap().coherence(), (0.75f64 * 0.25).sqrt());
    }
}
