//! Dense complex linear algebra helpers: operator norms, matrix exponentials,
//! Hermitian checks. Desk scale (d up to a few hundred), so cubic algorithms
//! are used throughout.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

/// Spectral norm ||A||_2 = sqrt(lambda_max(A^H A)) via the Hermitian
/// eigensolver. Deterministic and accurate to machine precision at desk scale.
pub fn op_norm(a: &CMatrix) -> f64 {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0.0;
    }
    let gram = a.adjoint() * a;
    let eig = gram.symmetric_eigen();
    let lam_max = eig.eigenvalues.iter().fold(0.0f64, |m, &l| m.max(l));
    lam_max.max(0.0).sqrt()
}

/// Max-row-sum norm, used for exponential scaling decisions.
pub fn inf_norm(a: &CMatrix) -> f64 {
    (0..a.nrows())
        .map(|i| (0..a.ncols()).map(|j| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Residual of Hermitian symmetry ||A - A^H|| relative to ||A||.
pub fn hermitian_residual(a: &CMatrix) -> f64 {
    let diff = a - a.adjoint();
    let scale = inf_norm(a).max(1.0);
    inf_norm(&diff) / scale
}

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

// Scaling threshold for the order-13 Pade approximant (Higham 2005).
const THETA13: f64 = 5.371920351148152;

/// Matrix exponential by scaling and squaring with the order-13 Pade
/// approximant. A fixed order keeps the routine simple; at desk scale the
/// extra multiplications are irrelevant.
pub fn expm(a: &CMatrix) -> CMatrix {
    let d = a.nrows();
    assert_eq!(d, a.ncols(), "expm requires a square matrix");
    let norm = inf_norm(a);
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let scale = Complex64::new(0.5f64.powi(s), 0.0);
    let a1 = a * scale;

    let a2 = &a1 * &a1;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;
    let id = identity(d);

    let c = |k: usize| Complex64::new(PADE13[k], 0.0);
    let u_inner = &a6 * (&a6 * c(13) + &a4 * c(11) + &a2 * c(9))
        + &a6 * c(7)
        + &a4 * c(5)
        + &a2 * c(3)
        + &id * c(1);
    let u = &a1 * u_inner;
    let v = &a6 * (&a6 * c(12) + &a4 * c(10) + &a2 * c(8))
        + &a6 * c(6)
        + &a4 * c(4)
        + &a2 * c(2)
        + &id * c(0);

    let num = &v + &u;
    let den = &v - &u;
    let mut r = den
        .lu()
        .solve(&num)
        .expect("Pade denominator is singular; matrix exponential failed");
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

/// Parse-friendly constructor from a row-major real slice.
pub fn cmatrix_from_real(d: usize, rows: &[f64]) -> CMatrix {
    CMatrix::from_iterator(
        d,
        d,
        // from_iterator fills column-by-column; transpose the index order.
        (0..d * d).map(|k| {
            let (col, row) = (k / d, k % d);
            Complex64::new(rows[row * d + col], 0.0)
        }),
    )
}

pub fn cvector_from_real(entries: &[f64]) -> CVector {
    CVector::from_iterator(entries.len(), entries.iter().map(|&x| Complex64::new(x, 0.0)))
}

pub fn vec_norm(x: &CVector) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn op_norm_of_diagonal() {
        let a = cmatrix_from_real(2, &[-1.0, 0.0, 0.0, -4.0]);
        assert_abs_diff_eq!(op_norm(&a), 4.0, epsilon = 1e-12);
    }

    #[test]
    fn op_norm_of_rank_one() {
        // [[0,1],[0,0]] has singular values {1, 0}.
        let a = cmatrix_from_real(2, &[0.0, 1.0, 0.0, 0.0]);
        assert_abs_diff_eq!(op_norm(&a), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn expm_diagonal_matches_scalar() {
        let a = cmatrix_from_real(2, &[-1.0, 0.0, 0.0, -4.0]);
        let e = expm(&a);
        assert_abs_diff_eq!(e[(0, 0)].re, (-1.0f64).exp(), epsilon = 1e-14);
        assert_abs_diff_eq!(e[(1, 1)].re, (-4.0f64).exp(), epsilon = 1e-14);
        assert!(e[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn expm_nilpotent() {
        // exp([[0,1],[0,0]]) = [[1,1],[0,1]] exactly.
        let a = cmatrix_from_real(2, &[0.0, 1.0, 0.0, 0.0]);
        let e = expm(&a);
        assert_abs_diff_eq!(e[(0, 0)].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(e[(0, 1)].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(e[(1, 0)].re, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn expm_large_norm_scaling() {
        // exp(-50) on the diagonal forces several squaring steps.
        let a = cmatrix_from_real(2, &[-50.0, 0.0, 0.0, -30.0]);
        let e = expm(&a);
        assert_abs_diff_eq!(e[(0, 0)].re, (-50.0f64).exp(), epsilon = 1e-32);
        assert_abs_diff_eq!(e[(1, 1)].re, (-30.0f64).exp(), epsilon = 1e-22);
    }

    #[test]
    fn expm_rotation_block() {
        // exp of [[0,-t],[t,0]] is the rotation matrix.
        let t = 0.7f64;
        let a = cmatrix_from_real(2, &[0.0, -t, t, 0.0]);
        let e = expm(&a);
        assert_abs_diff_eq!(e[(0, 0)].re, t.cos(), epsilon = 1e-14);
        assert_abs_diff_eq!(e[(1, 0)].re, t.sin(), epsilon = 1e-14);
    }

    #[test]
    fn hermitian_residual_detects() {
        let h = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(-1.0, 0.0),
                Complex64::new(0.5, 0.5),
                Complex64::new(0.5, -0.5),
                Complex64::new(-2.0, 0.0),
            ],
        );
        assert!(hermitian_residual(&h) < 1e-15);
        let nh = cmatrix_from_real(2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(hermitian_residual(&nh) > 0.1);
    }
}
