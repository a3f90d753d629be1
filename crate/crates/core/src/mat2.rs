//! Minimal complex 2x2 matrix arithmetic for qubit states and effects.

use num_complex::Complex64;
use std::ops::{Add, Mul, Sub};

/// A dense complex 2x2 matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2 {
    pub e: [[Complex64; 2]; 2],
}

impl Mat2 {
    pub const fn new(e00: Complex64, e01: Complex64, e10: Complex64, e11: Complex64) -> Self {
        Mat2 {
            e: [[e00, e01], [e10, e11]],
        }
    }

    pub fn from_real(e00: f64, e01: f64, e10: f64, e11: f64) -> Self {
        Mat2::new(
            Complex64::new(e00, 0.0),
            Complex64::new(e01, 0.0),
            Complex64::new(e10, 0.0),
            Complex64::new(e11, 0.0),
        )
    }

    pub fn zero() -> Self {
        Mat2::from_real(0.0, 0.0, 0.0, 0.0)
    }

    pub fn identity() -> Self {
        Mat2::from_real(1.0, 0.0, 0.0, 1.0)
    }

    pub fn pauli_x() -> Self {
        Mat2::from_real(0.0, 1.0, 1.0, 0.0)
    }

    pub fn pauli_y() -> Self {
        Mat2::new(
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, 0.0),
        )
    }

    pub fn pauli_z() -> Self {
        Mat2::from_real(1.0, 0.0, 0.0, -1.0)
    }

    pub fn scale(&self, f: f64) -> Self {
        let mut out = *self;
        for row in out.e.iter_mut() {
            for v in row.iter_mut() {
                *v *= f;
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        self.e[0][0] + self.e[1][1]
    }

    pub fn adjoint(&self) -> Self {
        Mat2::new(
            self.e[0][0].conj(),
            self.e[1][0].conj(),
            self.e[0][1].conj(),
            self.e[1][1].conj(),
        )
    }

    /// Largest entry of |m - m†|; zero for Hermitian matrices.
    pub fn hermiticity_defect(&self) -> f64 {
        let adj = self.adjoint();
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.e[i][j] - adj.e[i][j]).norm());
            }
        }
        worst
    }

    /// Eigenvalues (min, max) assuming the matrix is Hermitian.
    pub fn hermitian_eigenvalues(&self) -> (f64, f64) {
        let a = self.e[0][0].re;
        let d = self.e[1][1].re;
        let mean = 0.5 * (a + d);
        let radius = (0.25 * (a - d) * (a - d) + self.e[0][1].norm_sqr()).sqrt();
        (mean - radius, mean + radius)
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let mut out = self;
        for i in 0..2 {
            for j in 0..2 {
                out.e[i][j] += rhs.e[i][j];
            }
        }
        out
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        let mut out = self;
        for i in 0..2 {
            for j in 0..2 {
                out.e[i][j] -= rhs.e[i][j];
            }
        }
        out
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let mut out = Mat2::zero();
        for i in 0..2 {
            for j in 0..2 {
                out.e[i][j] = self.e[i][0] * rhs.e[0][j] + self.e[i][1] * rhs.e[1][j];
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_algebra() {
        let x = Mat2::pauli_x();
        let y = Mat2::pauli_y();
        let z = Mat2::pauli_z();
        // sigma_x sigma_y = i sigma_z
        let xy = x * y;
        let iz = z.scale(1.0);
        for i in 0..2 {
            for j in 0..2 {
                let expect = Complex64::new(0.0, 1.0) * iz.e[i][j];
                assert!((xy.e[i][j] - expect).norm() < 1e-15);
            }
        }
        for m in [x, y, z] {
            assert!(m.hermiticity_defect() < 1e-15);
            let sq = m * m;
            assert!((sq - Mat2::identity()).hermiticity_defect() < 1e-15);
            assert!((sq.e[0][0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn eigenvalues_of_projector() {
        let p = Mat2::from_real(1.0, 0.0, 0.0, 0.0);
        let (lo, hi) = p.hermitian_eigenvalues();
        assert_eq!((lo, hi), (0.0, 1.0));

        let h = Mat2::from_real(0.5, 0.5, 0.5, 0.5);
        let (lo, hi) = h.hermitian_eigenvalues();
        assert!(lo.abs() < 1e-15);
        assert!((hi - 1.0).abs() < 1e-15);
    }
}
