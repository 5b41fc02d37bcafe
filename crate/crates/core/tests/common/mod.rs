#![allow(dead_code)]

pub mod props;

use polyspectra_core::{Complex64, MatrixPolynomial, WeightPolynomial};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `[[1,0],[0,1]]λ² + [[−2,1],[0,−4]]λ + [[1,0],[0,4]]`, eigenvalues {1, 1, 2, 2}.
pub fn example6() -> MatrixPolynomial {
    MatrixPolynomial::from_real_rows(&[
        vec![vec![1.0, 0.0], vec![0.0, 4.0]],
        vec![vec![-2.0, 1.0], vec![0.0, -4.0]],
        vec![vec![1.0, 0.0], vec![0.0, 1.0]],
    ])
    .unwrap()
}

pub fn example6_weight() -> WeightPolynomial {
    WeightPolynomial::new(vec![1.0, 1.0, 1.0]).unwrap()
}

/// Damped mass–spring system.
pub fn example7() -> MatrixPolynomial {
    MatrixPolynomial::from_real_rows(&[
        vec![vec![2.0, -1.0, 0.0], vec![-1.0, 3.0, 0.0], vec![0.0, 0.0, 10.0]],
        vec![vec![0.0, 0.0, 0.0], vec![0.0, 3.0, -1.0], vec![0.0, -1.0, 6.0]],
        vec![vec![1.0, 0.0, 0.0], vec![0.0, 2.0, 0.0], vec![0.0, 0.0, 5.0]],
    ])
    .unwrap()
}

pub fn example7_weight() -> WeightPolynomial {
    WeightPolynomial::new(vec![10.0, 6.3, 5.0]).unwrap()
}

/// `diag(λ² − 2λ, (a − λ)(λ + 2))`.
pub fn example2(a: f64) -> MatrixPolynomial {
    MatrixPolynomial::diagonal(&[
        vec![c(0.0, 0.0), c(-2.0, 0.0), c(1.0, 0.0)],
        vec![c(2.0 * a, 0.0), c(a - 2.0, 0.0), c(-1.0, 0.0)],
    ])
    .unwrap()
}

/// Fault-singleton fixture: the pencil whose two lowest surfaces meet only at 0.
pub fn example3() -> MatrixPolynomial {
    conic_pencil()
}

/// The upper-triangular pencil with `λ + 3i/4` in the corner; its coinciding
/// pair at 0 is the top one, so its lowest-pair fault set is empty.
pub fn example3_printed() -> MatrixPolynomial {
    let a = polyspectra_core::CMatrix::from_row_slice(
        3,
        3,
        &[
            c(0.0, -0.75),
            c(-1.0, 0.0),
            c(-1.0, 0.0),
            c(0.0, 0.0),
            c(1.25, 0.0),
            c(-1.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(-0.75, 0.0),
        ],
    );
    MatrixPolynomial::pencil(&a).unwrap()
}

/// Scalar `(λ − 1)²`.
pub fn example4() -> MatrixPolynomial {
    MatrixPolynomial::scalar(&[c(1.0, 0.0), c(-2.0, 0.0), c(1.0, 0.0)]).unwrap()
}

pub fn example4_weight() -> WeightPolynomial {
    WeightPolynomial::new(vec![1.0, 2.0]).unwrap()
}

/// `diag(λ² − 1, λ² − 2λ)`.
pub fn example5() -> MatrixPolynomial {
    MatrixPolynomial::diagonal(&[
        vec![c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        vec![c(0.0, 0.0), c(-2.0, 0.0), c(1.0, 0.0)],
    ])
    .unwrap()
}

/// `Iλ − A` with a double point of the two lowest singular-value surfaces at 0.
pub fn conic_pencil() -> MatrixPolynomial {
    let a = polyspectra_core::CMatrix::from_row_slice(
        3,
        3,
        &[
            c(0.75, 0.0),
            c(1.0, 0.0),
            c(1.0, 0.0),
            c(0.0, 0.0),
            c(1.25, 0.0),
            c(1.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(-0.75, 0.0),
        ],
    );
    MatrixPolynomial::pencil(&a).unwrap()
}

/// `diag(λ − 1, λ + 1)`.
pub fn disc_pair() -> MatrixPolynomial {
    MatrixPolynomial::diagonal(&[vec![c(-1.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(1.0, 0.0)]]).unwrap()
}
