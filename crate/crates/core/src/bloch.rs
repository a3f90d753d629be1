//! Qubit states on the Bloch ball, canonical-axis rotations, and the
//! reduction of higher-dimensional states to an effective qubit.
//!
//! A qubit density matrix is parameterized by a real vector `s` with
//! |s| <= 1 via rho = (sigma_0 + s . sigma) / 2. Pure states of any
//! dimension map onto an effective qubit spanned by the state and an
//! orthogonal partner, which always lands on the pole (0, 0, 1).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mat2::Mat2;

/// Plain 3-vector of Bloch components.
pub type Vec3 = [f64; 3];

pub(crate) fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn norm(v: Vec3) -> f64 {
    dot(v, v).sqrt()
}

/// Slack accepted on |s| before a vector is rejected as outside the ball.
pub const BLOCH_NORM_SLACK: f64 = 1e-12;

/// Tolerance for Hermiticity, unit trace, and positivity of density matrices.
pub const MATRIX_TOL: f64 = 1e-12;

/// Tolerance on orthogonality of user-supplied basis pairs.
pub const ORTHOGONALITY_TOL: f64 = 1e-10;

/// A qubit state as a real 3-vector inside the unit ball.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    x: f64,
    y: f64,
    z: f64,
}

impl BlochVector {
    /// Builds a Bloch vector, rejecting |s| > 1 + `BLOCH_NORM_SLACK` and
    /// renormalizing to exactly 1 when |s| lands inside the slack band.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let n = norm([x, y, z]);
        if !n.is_finite() || n > 1.0 + BLOCH_NORM_SLACK {
            return Err(Error::BlochNormTooLarge {
                norm: n,
                tolerance: BLOCH_NORM_SLACK,
            });
        }
        if n > 1.0 {
            return Ok(BlochVector {
                x: x / n,
                y: y / n,
                z: z / n,
            });
        }
        Ok(BlochVector { x, y, z })
    }

    pub fn zero() -> Self {
        BlochVector {
            x: 0.0,
            y: 0.0,
            z: 0.0,
        }
    }

    /// The pole state (0, 0, |s|) with the given length.
    pub fn polar(length: f64) -> Result<Self> {
        BlochVector::new(0.0, 0.0, length)
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn components(&self) -> Vec3 {
        [self.x, self.y, self.z]
    }

    pub fn norm(&self) -> f64 {
        norm(self.components())
    }

    /// rho = (sigma_0 + s . sigma) / 2.
    pub fn to_density(&self) -> DensityMatrix2 {
        let m = Mat2::new(
            Complex64::new(0.5 * (1.0 + self.z), 0.0),
            Complex64::new(0.5 * self.x, -0.5 * self.y),
            Complex64::new(0.5 * self.x, 0.5 * self.y),
            Complex64::new(0.5 * (1.0 - self.z), 0.0),
        );
        DensityMatrix2 { m }
    }
}

/// A validated qubit density matrix: Hermitian, unit trace, positive
/// semidefinite (all within `MATRIX_TOL`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix2 {
    m: Mat2,
}

impl DensityMatrix2 {
    pub fn new(m: Mat2) -> Result<Self> {
        let defect = m.hermiticity_defect();
        if defect > MATRIX_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let trace = m.trace();
        if (trace.re - 1.0).abs() > MATRIX_TOL || trace.im.abs() > MATRIX_TOL {
            return Err(Error::NonUnitTrace(trace.re));
        }
        let (min_eig, _) = m.hermitian_eigenvalues();
        if min_eig < -MATRIX_TOL {
            return Err(Error::NegativeEigenvalue(min_eig));
        }
        Ok(DensityMatrix2 { m })
    }

    pub fn from_entries(
        e00: Complex64,
        e01: Complex64,
        e10: Complex64,
        e11: Complex64,
    ) -> Result<Self> {
        DensityMatrix2::new(Mat2::new(e00, e01, e10, e11))
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.m
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.m.hermitian_eigenvalues().0
    }

    /// s_a = tr(rho sigma_a); the inverse of [`BlochVector::to_density`].
    pub fn to_bloch(&self) -> BlochVector {
        let sx = (self.m * Mat2::pauli_x()).trace().re;
        let sy = (self.m * Mat2::pauli_y()).trace().re;
        let sz = (self.m * Mat2::pauli_z()).trace().re;
        // Norm can only exceed 1 by the positivity tolerance already vetted
        // in the constructor, so renormalization is the worst case.
        BlochVector::new(sx, sy, sz).expect("density matrix maps inside the ball")
    }

    /// Born-rule probability tr(rho E) for a Hermitian effect.
    pub fn expectation(&self, effect: &Mat2) -> f64 {
        (self.m * *effect).trace().re
    }
}

/// A proper rotation of Bloch space: orthogonal with determinant +1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rotation3 {
    m: [[f64; 3]; 3],
}

impl Rotation3 {
    pub fn identity() -> Self {
        Rotation3 {
            m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    /// Validates orthogonality and unit determinant within `MATRIX_TOL`.
    pub fn new(m: [[f64; 3]; 3]) -> Result<Self> {
        let r = Rotation3 { m };
        let defect = r.orthogonality_defect();
        if defect > MATRIX_TOL {
            return Err(Error::InvalidConfig(format!(
                "matrix is not orthogonal (defect {defect})"
            )));
        }
        let det = r.determinant();
        if (det - 1.0).abs() > MATRIX_TOL {
            return Err(Error::InvalidConfig(format!(
                "matrix is not a proper rotation (det {det})"
            )));
        }
        Ok(r)
    }

    /// Rodrigues rotation by `angle` about the (normalized) `axis`.
    pub fn from_axis_angle(axis: Vec3, angle: f64) -> Result<Self> {
        let n = norm(axis);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidConfig("rotation axis must be nonzero".into()));
        }
        let u = [axis[0] / n, axis[1] / n, axis[2] / n];
        let (sin, cos) = angle.sin_cos();
        let omc = 1.0 - cos;
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let kron = if i == j { 1.0 } else { 0.0 };
                m[i][j] = cos * kron + omc * u[i] * u[j];
            }
        }
        // antisymmetric sin term: sin * [u]_x
        m[0][1] += -sin * u[2];
        m[0][2] += sin * u[1];
        m[1][0] += sin * u[2];
        m[1][2] += -sin * u[0];
        m[2][0] += -sin * u[1];
        m[2][1] += sin * u[0];
        Ok(Rotation3 { m })
    }

    pub fn apply(&self, v: Vec3) -> Vec3 {
        let mut out = [0.0; 3];
        for (o, row) in out.iter_mut().zip(&self.m) {
            *o = dot(*row, v);
        }
        out
    }

    pub fn matrix(&self) -> &[[f64; 3]; 3] {
        &self.m
    }

    pub fn determinant(&self) -> f64 {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Largest entry of |R^T R - I|.
    pub fn orthogonality_defect(&self) -> f64 {
        let m = &self.m;
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let v: f64 = m.iter().map(|row| row[i] * row[j]).sum();
                let kron = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((v - kron).abs());
            }
        }
        worst
    }
}

/// Rotates `s` onto the +z axis, returning the rotation and the canonical
/// vector (0, 0, |s|).
///
/// The rotation is built from the axis s x z; a state already on the -z
/// axis uses a half-turn about x, and s = 0 returns the identity. The
/// returned canonical vector is constructed directly from |s| so callers
/// get an exact pole state; `R s` agrees with it to floating-point
/// accuracy.
pub fn canonical_rotation(s: &BlochVector) -> (Rotation3, BlochVector) {
    let n = s.norm();
    if n == 0.0 {
        return (Rotation3::identity(), BlochVector::zero());
    }
    let unit = [s.x() / n, s.y() / n, s.z() / n];
    let axis = cross(unit, [0.0, 0.0, 1.0]);
    let axis_len = norm(axis);
    let canonical = BlochVector::polar(n).expect("|s| <= 1 by construction");
    if axis_len < 1e-15 {
        if unit[2] > 0.0 {
            return (Rotation3::identity(), canonical);
        }
        let flip = Rotation3 {
            m: [[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]],
        };
        return (flip, canonical);
    }
    let angle = unit[2].clamp(-1.0, 1.0).acos();
    let rot = Rotation3::from_axis_angle(axis, angle).expect("axis is nonzero");
    (rot, canonical)
}

/// A normalized pure state of dimension >= 2.
#[derive(Clone, Debug, PartialEq)]
pub struct PureStateVector {
    amps: Vec<Complex64>,
}

impl PureStateVector {
    /// Accepts a vector already normalized within `ORTHOGONALITY_TOL` and
    /// renormalizes it to machine precision.
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        let n = vector_norm(&amps);
        if (n - 1.0).abs() > ORTHOGONALITY_TOL {
            return Err(Error::NotNormalized(n));
        }
        PureStateVector::normalized(amps)
    }

    /// Normalizes any nonzero vector of dimension >= 2.
    pub fn normalized(amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() < 2 {
            return Err(Error::DimensionTooSmall(amps.len()));
        }
        let n = vector_norm(&amps);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized(n));
        }
        let amps = amps.into_iter().map(|a| a / n).collect();
        Ok(PureStateVector { amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// <self|other>.
    pub fn inner(&self, other: &PureStateVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Deterministic orthogonal partner: Gram-Schmidt applied to the first
    /// canonical basis vector with a non-negligible component off `self`.
    pub fn orthogonal_complement(&self) -> PureStateVector {
        let d = self.dim();
        for k in 0..d {
            let overlap = self.amps[k].conj();
            let mut v: Vec<Complex64> = (0..d)
                .map(|i| {
                    let e = if i == k {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    };
                    e - overlap * self.amps[i]
                })
                .collect();
            let n = vector_norm(&v);
            if n > 1e-6 {
                for a in v.iter_mut() {
                    *a /= n;
                }
                return PureStateVector { amps: v };
            }
        }
        unreachable!("a unit vector cannot overlap every basis vector maximally");
    }
}

fn vector_norm(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Bloch vector of `psi` in the effective qubit basis {psi, psi_perp}.
///
/// With sigma_z = |psi><psi| - |psi_perp><psi_perp| the result is the pole
/// (0, 0, 1) for every valid input; the components are still computed from
/// the overlaps rather than assumed. A supplied partner must be orthogonal
/// within `ORTHOGONALITY_TOL`; if absent, [`PureStateVector::orthogonal_complement`]
/// picks one deterministically.
pub fn embed_pure_state(
    psi: &PureStateVector,
    psi_perp: Option<&PureStateVector>,
) -> Result<BlochVector> {
    let partner = match psi_perp {
        Some(p) => {
            let overlap = psi.inner(p)?.norm();
            if overlap > ORTHOGONALITY_TOL {
                return Err(Error::NotOrthogonal(overlap));
            }
            p.clone()
        }
        None => psi.orthogonal_complement(),
    };
    // Amplitudes of |psi> in the {psi, partner} basis.
    let a = psi.inner(psi)?;
    let b = partner.inner(psi)?;
    let sx = 2.0 * (a.conj() * b).re;
    let sy = 2.0 * (a.conj() * b).im;
    let sz = a.norm_sqr() - b.norm_sqr();
    BlochVector::new(sx, sy, sz)
}

/// A d-dimensional Hermitian unit-trace matrix, used as the source for
/// two-dimensional projections.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrixN {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DensityMatrixN {
    /// Validates Hermiticity and unit trace within `MATRIX_TOL`; entries are
    /// row-major of length dim * dim.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DimensionTooSmall(dim));
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        let mut defect: f64 = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                defect = defect.max((entries[i * dim + j] - entries[j * dim + i].conj()).norm());
            }
        }
        if defect > MATRIX_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let trace: Complex64 = (0..dim).map(|i| entries[i * dim + i]).sum();
        if (trace.re - 1.0).abs() > MATRIX_TOL || trace.im.abs() > MATRIX_TOL {
            return Err(Error::NonUnitTrace(trace.re));
        }
        Ok(DensityMatrixN { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    /// <u|rho|v>.
    fn sandwich(&self, u: &PureStateVector, v: &PureStateVector) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc += u.amplitudes()[i].conj() * self.entry(i, j) * v.amplitudes()[j];
            }
        }
        acc
    }

    /// Extracts the 2x2 block on the span of the orthonormal pair (u, v),
    /// returning the Bloch vector of the renormalized block and the block's
    /// trace as the subspace weight.
    ///
    /// The weight is the probability mass the state carries on the subspace;
    /// it is reported as-is and does not enter any witness arithmetic.
    pub fn project_to_qubit(
        &self,
        u: &PureStateVector,
        v: &PureStateVector,
    ) -> Result<(BlochVector, f64)> {
        if u.dim() != self.dim || v.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: u.dim().max(v.dim()),
            });
        }
        let overlap = u.inner(v)?.norm();
        if overlap > ORTHOGONALITY_TOL {
            return Err(Error::NotOrthogonal(overlap));
        }
        let b00 = self.sandwich(u, u);
        let b01 = self.sandwich(u, v);
        let b10 = self.sandwich(v, u);
        let b11 = self.sandwich(v, v);
        let weight = (b00 + b11).re;
        if weight < MATRIX_TOL {
            return Err(Error::ZeroSubspaceWeight(weight));
        }
        let block = Mat2::new(b00 / weight, b01 / weight, b10 / weight, b11 / weight);
        let rho = DensityMatrix2::new(block)?;
        Ok((rho.to_bloch(), weight))
    }
}
