//! Qubit states, the phase rotation and the noise channels acting on them.

use num_complex::Complex;

use crate::error::{check_probability, Error, Result};
use crate::qmat::{channel_choi, Matrix};
use crate::Scalar;

/// Bloch vector of a qubit state, `|r| ≤ 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochVector<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Scalar> BlochVector<T> {
    /// Validates the norm. An excess of at most the norm tolerance is
    /// scaled back onto the sphere.
    pub fn new(x: T, y: T, z: T) -> Result<Self> {
        let v = Self { x, y, z };
        let norm = v.norm();
        if !norm.is_finite() || norm > T::one() + T::norm_tol() {
            return Err(Error::BlochNorm(norm.as_f64()));
        }
        if norm > T::one() {
            return Ok(Self {
                x: x / norm,
                y: y / norm,
                z: z / norm,
            });
        }
        Ok(v)
    }

    pub fn from_array(v: [T; 3]) -> Result<Self> {
        Self::new(v[0], v[1], v[2])
    }

    pub fn to_array(self) -> [T; 3] {
        [self.x, self.y, self.z]
    }

    pub fn norm(&self) -> T {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

/// Validated density operator: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator<T> {
    mat: Matrix<T>,
}

impl<T: Scalar> DensityOperator<T> {
    pub fn new(mat: Matrix<T>) -> Result<Self> {
        let tol = T::structural_tol();
        let dev = mat.hermitian_deviation();
        if !(dev < tol) {
            return Err(Error::NotHermitian(dev.as_f64()));
        }
        let tr = mat.trace();
        if !((tr.re - T::one()).abs() < tol && tr.im.abs() < tol) {
            return Err(Error::InvalidTrace(tr.re.as_f64()));
        }
        let min = mat.herm_eig()?.eigenvalues[0];
        if min < -tol {
            return Err(Error::NotPositive(min.as_f64()));
        }
        Ok(Self { mat })
    }

    /// The maximally mixed state `I/d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            mat: Matrix::identity(dim).scale_real(T::one() / T::lit(dim as f64)),
        }
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.mat
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }
}

impl<T: Scalar> AsRef<Matrix<T>> for DensityOperator<T> {
    fn as_ref(&self) -> &Matrix<T> {
        &self.mat
    }
}

/// Axis `n` and phase `ξ` of the rotation `U_ξ = exp(−i ξ n·σ / 2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitaryParams<T> {
    axis: [T; 3],
    phase: T,
}

impl<T: Scalar> UnitaryParams<T> {
    pub fn new(axis: [T; 3], phase: T) -> Result<Self> {
        let norm = axis.iter().map(|&a| a * a).sum::<T>().sqrt();
        if !norm.is_finite() || (norm - T::one()).abs() > T::norm_tol() || !phase.is_finite() {
            return Err(Error::AxisNotUnit(norm.as_f64()));
        }
        Ok(Self { axis, phase })
    }

    pub fn axis(&self) -> [T; 3] {
        self.axis
    }

    pub fn phase(&self) -> T {
        self.phase
    }

    /// Same axis, different phase.
    pub fn with_phase(&self, phase: T) -> Self {
        Self { axis: self.axis, phase }
    }

    /// Component `n_ℓ` of the axis along a Pauli direction.
    pub fn component(&self, axis: PauliAxis) -> T {
        self.axis[axis.index()]
    }
}

/// Pauli direction `ℓ` selected by a Pauli noise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub const ALL: [PauliAxis; 3] = [PauliAxis::X, PauliAxis::Y, PauliAxis::Z];

    pub fn index(self) -> usize {
        match self {
            PauliAxis::X => 0,
            PauliAxis::Y => 1,
            PauliAxis::Z => 2,
        }
    }

    pub fn matrix<T: Scalar>(self) -> Matrix<T> {
        match self {
            PauliAxis::X => Matrix::pauli_x(),
            PauliAxis::Y => Matrix::pauli_y(),
            PauliAxis::Z => Matrix::pauli_z(),
        }
    }
}

/// Ordered Kraus operators of a trace-preserving channel.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel<T> {
    kraus: Vec<Matrix<T>>,
}

impl<T: Scalar> KrausChannel<T> {
    /// Checks equal dimensions and `Σ K†K = I` within the structural tolerance.
    pub fn new(kraus: Vec<Matrix<T>>) -> Result<Self> {
        let first = kraus.first().ok_or(Error::EmptyChannel)?;
        let d = first.dim();
        let mut sum = Matrix::zeros(d);
        for k in &kraus {
            if k.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: k.dim(),
                });
            }
            sum = &sum + &k.adjoint().mat_mul(k)?;
        }
        let residual = sum.max_abs_diff(&Matrix::identity(d));
        if !(residual < T::structural_tol()) {
            return Err(Error::Incomplete(residual.as_f64()));
        }
        Ok(Self { kraus })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            kraus: vec![Matrix::identity(dim)],
        }
    }

    pub fn operators(&self) -> &[Matrix<T>] {
        &self.kraus
    }

    pub fn dim(&self) -> usize {
        self.kraus[0].dim()
    }

    pub fn len(&self) -> usize {
        self.kraus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kraus.is_empty()
    }

    /// `max |Σ K†K − I|`.
    pub fn completeness_residual(&self) -> T {
        let d = self.dim();
        let sum = self.kraus.iter().fold(Matrix::zeros(d), |acc, k| &acc + &(&k.adjoint() * k));
        sum.max_abs_diff(&Matrix::identity(d))
    }

    pub fn choi(&self) -> Result<Matrix<T>> {
        channel_choi(&self.kraus)
    }

    /// `Σ K ρ K†` on a raw operator; no validation of the result.
    pub fn apply_raw(&self, rho: &Matrix<T>) -> Result<Matrix<T>> {
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: rho.dim(),
            });
        }
        let mut out = Matrix::zeros(rho.dim());
        for k in &self.kraus {
            out = &out + &k.conjugate(rho)?;
        }
        Ok(out)
    }
}

/// `(I + r·σ)/2`.
pub fn bloch_to_density<T: Scalar>(r: BlochVector<T>) -> DensityOperator<T> {
    let half = T::lit(0.5);
    let z = |re: T, im: T| Complex::new(re * half, im * half);
    let mut m = Matrix::zeros(2);
    m[(0, 0)] = z(T::one() + r.z, T::zero());
    m[(0, 1)] = z(r.x, -r.y);
    m[(1, 0)] = z(r.x, r.y);
    m[(1, 1)] = z(T::one() - r.z, T::zero());
    // |r| ≤ 1 guarantees eigenvalues (1 ± |r|)/2 ≥ 0.
    DensityOperator { mat: m }
}

/// `r_k = tr(ρ σ_k)`.
pub fn density_to_bloch<T: Scalar>(rho: &DensityOperator<T>) -> Result<BlochVector<T>> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: rho.dim(),
        });
    }
    let m = rho.matrix();
    let comps = PauliAxis::ALL.map(|a| (m * &a.matrix()).trace().re);
    BlochVector::from_array(comps)
}

/// Closed SU(2) form `cos(ξ/2) I − i sin(ξ/2) n·σ`.
pub fn rotation_unitary<T: Scalar>(u: &UnitaryParams<T>) -> Matrix<T> {
    let half = u.phase / T::lit(2.0);
    let (s, c) = half.sin_cos();
    let [nx, ny, nz] = u.axis;
    let mut m = Matrix::zeros(2);
    m[(0, 0)] = Complex::new(c, -s * nz);
    m[(0, 1)] = Complex::new(-s * ny, -s * nx);
    m[(1, 0)] = Complex::new(s * ny, -s * nx);
    m[(1, 1)] = Complex::new(c, s * nz);
    m
}

/// Kraus set `{√(1−p) I, √p σ_ℓ}`.
pub fn pauli_channel<T: Scalar>(axis: PauliAxis, p: T) -> Result<KrausChannel<T>> {
    check_probability("p", p)?;
    Ok(KrausChannel {
        kraus: vec![
            Matrix::identity(2).scale_real((T::one() - p).sqrt()),
            axis.matrix().scale_real(p.sqrt()),
        ],
    })
}

/// Depolarizing channel `ρ ↦ (1−p)ρ + p I/2`.
pub fn depolarizing_channel<T: Scalar>(p: T) -> Result<KrausChannel<T>> {
    check_probability("p", p)?;
    let quarter = p / T::lit(4.0);
    let mut kraus = vec![Matrix::identity(2).scale_real((T::one() - T::lit(3.0) * quarter).sqrt())];
    kraus.extend(PauliAxis::ALL.iter().map(|a| a.matrix().scale_real(quarter.sqrt())));
    Ok(KrausChannel { kraus })
}

/// Kraus set `{N_m U_ξ}` of `ρ ↦ N(U_ξ ρ U_ξ†)`.
pub fn noisy_phase_channel<T: Scalar>(
    noise: &KrausChannel<T>,
    u: &UnitaryParams<T>,
) -> Result<KrausChannel<T>> {
    if noise.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: noise.dim(),
        });
    }
    let rot = rotation_unitary(u);
    let kraus = noise
        .kraus
        .iter()
        .map(|n| n.mat_mul(&rot))
        .collect::<Result<Vec<_>>>()?;
    Ok(KrausChannel { kraus })
}

/// `Σ_m K_m ρ K_m†`, validated as a density operator.
pub fn apply_channel<T: Scalar>(
    ch: &KrausChannel<T>,
    rho: &DensityOperator<T>,
) -> Result<DensityOperator<T>> {
    DensityOperator::new(ch.apply_raw(rho.matrix())?)
}
