use crate::matrix::Matrix;
use crate::scalar::Scalar;

const MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi eigenvalue iteration.
///
/// Sweeps over all off-diagonal pairs until the off-diagonal Frobenius norm
/// drops below `max(1e-14, 8 eps) * ||S||_F`. Returns ascending eigenvalues
/// and the matching orthonormal eigenvectors as columns.
pub(super) fn eig<T: Scalar>(mut a: Matrix<T>) -> (Vec<T>, Matrix<T>) {
    let n = a.rows();
    let mut v = Matrix::identity(n);
    let thresh = T::lit(1e-14).max(T::epsilon() * T::lit(8.0)) * a.frobenius_norm();
    let two = T::lit(2.0);

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= thresh {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == T::zero() {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (two * apq);
                let t = {
                    let t = T::one() / (theta.abs() + (theta * theta + T::one()).sqrt());
                    if theta < T::zero() {
                        -t
                    } else {
                        t
                    }
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = T::zero();
                a[(q, p)] = T::zero();
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(i, i)]
            .partial_cmp(&a[(j, j)])
            .expect("finite eigenvalues")
    });
    let eigvals = order.iter().map(|&i| a[(i, i)]).collect();
    let eigvecs = Matrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    (eigvals, eigvecs)
}

fn off_diagonal_norm<T: Scalar>(a: &Matrix<T>) -> T {
    let n = a.rows();
    let mut sum = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum = sum + a[(i, j)] * a[(i, j)];
            }
        }
    }
    sum.sqrt()
}
