//! Scalar eigen-functions with removable singularities.
//!
//! | kind | definition                                   | singular point value |
//! |------|----------------------------------------------|----------------------|
//! | `k`  | `(e^a - 1) / a`                              | `k(0) = 1`           |
//! | `m`  | `2a e^{2a} - e^{2a} + 1`                     | `m(0) = 0`           |
//! | `m1` | `m(a) / a`                                   | `m1(0) = 0`          |
//! | `m2` | `m(a) / a^2`                                 | `m2(0) = 2`          |
//! | `q`  | `(r^2 ln r^2 - r^2 + 1) / (r - 1)^2`         | `q(1) = 0`           |
//! | `w`  | same as `q` away from `r = 1`                | `w(1) = 2`           |
//!
//! `q(1) = 0` follows the pseudoinverse convention of `(R - I)^+`, while `w` is
//! the continuous extension. Within `Scalar::SERIES_RADIUS` of the singular
//! point the direct quotient is replaced by a Taylor series:
//!
//! * `k(a)  = sum_{j>=0} a^j / (j+1)!`
//! * `m2(a) = sum_{j>=2} 2^j (j-1) / j! * a^{j-2}  = 2 + 8a/3 + 2a^2 + 16a^3/15 + ...`
//! * `w(1+e) = 2 + sum_{j>=1} 4 (-1)^{j+1} / (j (j+1) (j+2)) * e^j = 2 + 2e/3 - e^2/6 + e^3/15 - ...`

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const SERIES_TERMS: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StableKind {
    K,
    M,
    M1,
    M2,
    Q,
    W,
}

impl StableKind {
    pub const ALL: [StableKind; 6] = [Self::K, Self::M, Self::M1, Self::M2, Self::Q, Self::W];

    /// Location of the removable singularity: 0 for `k, m, m1, m2`, 1 for `q, w`.
    pub fn singular_point(self) -> f64 {
        match self {
            Self::Q | Self::W => 1.0,
            _ => 0.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::K => "k",
            Self::M => "m",
            Self::M1 => "m1",
            Self::M2 => "m2",
            Self::Q => "q",
            Self::W => "w",
        }
    }
}

impl FromStr for StableKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown function id '{s}'")))
    }
}

/// Checked entry point: rejects non-finite arguments and `r <= 0` for `q`/`w`.
pub fn stable_fn<T: Scalar>(kind: StableKind, x: T) -> Result<T> {
    if !x.is_finite() {
        return Err(Error::InvalidInput(format!(
            "{}: non-finite argument",
            kind.name()
        )));
    }
    if matches!(kind, StableKind::Q | StableKind::W) && x <= T::zero() {
        return Err(Error::InvalidInput(format!(
            "{}: argument must be positive, got {x}",
            kind.name()
        )));
    }
    Ok(eval(kind, x))
}

fn eval<T: Scalar>(kind: StableKind, x: T) -> T {
    match kind {
        StableKind::K => k(x),
        StableKind::M => m(x),
        StableKind::M1 => m1(x),
        StableKind::M2 => m2(x),
        StableKind::Q => q(x),
        StableKind::W => w(x),
    }
}

#[inline]
fn near<T: Scalar>(x: T) -> bool {
    x.abs() <= T::lit(T::SERIES_RADIUS)
}

pub fn k<T: Scalar>(a: T) -> T {
    if near(a) {
        series::k(a)
    } else {
        direct::k(a)
    }
}

pub fn m<T: Scalar>(a: T) -> T {
    if near(a) {
        a * a * series::m2(a)
    } else {
        direct::m(a)
    }
}

pub fn m1<T: Scalar>(a: T) -> T {
    if near(a) {
        series::m1(a)
    } else {
        direct::m1(a)
    }
}

pub fn m2<T: Scalar>(a: T) -> T {
    if near(a) {
        series::m2(a)
    } else {
        direct::m2(a)
    }
}

/// `q(r)` for `r > 0`; exactly zero at `r == 1`.
pub fn q<T: Scalar>(r: T) -> T {
    if r == T::one() {
        T::zero()
    } else {
        w(r)
    }
}

/// `w(r)` for `r > 0`; continuous through `w(1) = 2`.
pub fn w<T: Scalar>(r: T) -> T {
    let e = r - T::one();
    if near(e) {
        series::w(r)
    } else {
        direct::w(r)
    }
}

/// `r^2 ln r^2 - r^2 + 1`, the eigen-function of `M` written in terms of
/// `r = e^a`. Equals `(r - 1)^2 w(r)` and is evaluated that way near `r = 1`.
pub fn m_of_ratio<T: Scalar>(r: T) -> T {
    let e = r - T::one();
    if near(e) {
        e * e * series::w(r)
    } else {
        direct::m_of_ratio(r)
    }
}

/// Evaluates the series expansion regardless of the distance to the
/// singular point. `q` shares the series of `w`.
pub fn series_branch<T: Scalar>(kind: StableKind, x: T) -> T {
    match kind {
        StableKind::K => series::k(x),
        StableKind::M => x * x * series::m2(x),
        StableKind::M1 => series::m1(x),
        StableKind::M2 => series::m2(x),
        StableKind::Q | StableKind::W => series::w(x),
    }
}

/// Evaluates the direct quotient regardless of the distance to the singular point.
pub fn direct_branch<T: Scalar>(kind: StableKind, x: T) -> T {
    match kind {
        StableKind::K => direct::k(x),
        StableKind::M => direct::m(x),
        StableKind::M1 => direct::m1(x),
        StableKind::M2 => direct::m2(x),
        StableKind::Q | StableKind::W => direct::w(x),
    }
}

mod direct {
    use crate::scalar::Scalar;

    pub fn k<T: Scalar>(a: T) -> T {
        a.exp_m1() / a
    }

    // 2a e^{2a} - (e^{2a} - 1) = 2a + (2a - 1)(e^{2a} - 1)
    pub fn m<T: Scalar>(a: T) -> T {
        let two_a = a + a;
        two_a + (two_a - T::one()) * two_a.exp_m1()
    }

    pub fn m1<T: Scalar>(a: T) -> T {
        m(a) / a
    }

    pub fn m2<T: Scalar>(a: T) -> T {
        m(a) / a / a
    }

    // 2 r^2 ln r - (r^2 - 1) with r = 1 + e
    pub fn m_of_ratio<T: Scalar>(r: T) -> T {
        let e = r - T::one();
        let two = T::lit(2.0);
        two * r * r * e.ln_1p() - e * (two + e)
    }

    pub fn w<T: Scalar>(r: T) -> T {
        let e = r - T::one();
        m_of_ratio(r) / (e * e)
    }
}

mod series {
    use super::SERIES_TERMS;
    use crate::scalar::Scalar;

    fn horner<T: Scalar>(coeffs: impl DoubleEndedIterator<Item = f64>, x: T) -> T {
        coeffs.rev().fold(T::zero(), |acc, c| acc * x + T::lit(c))
    }

    // 1 / (j+1)!
    fn k_coeffs() -> impl DoubleEndedIterator<Item = f64> {
        (0..SERIES_TERMS).map(|j| 1.0 / factorial(j + 1))
    }

    // 2^j (j-1) / j!, j >= 2
    fn m2_coeffs() -> impl DoubleEndedIterator<Item = f64> {
        (2..SERIES_TERMS + 2).map(|j| 2f64.powi(j as i32) * (j as f64 - 1.0) / factorial(j))
    }

    // 2, then 4 (-1)^{j+1} / (j (j+1) (j+2))
    fn w_coeffs() -> impl DoubleEndedIterator<Item = f64> {
        (0..SERIES_TERMS).map(|j| {
            if j == 0 {
                2.0
            } else {
                let jf = j as f64;
                let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
                4.0 * sign / (jf * (jf + 1.0) * (jf + 2.0))
            }
        })
    }

    fn factorial(n: usize) -> f64 {
        (1..=n).map(|i| i as f64).product()
    }

    pub fn k<T: Scalar>(a: T) -> T {
        horner(k_coeffs(), a)
    }

    pub fn m2<T: Scalar>(a: T) -> T {
        horner(m2_coeffs(), a)
    }

    pub fn m1<T: Scalar>(a: T) -> T {
        a * m2(a)
    }

    pub fn w<T: Scalar>(r: T) -> T {
        horner(w_coeffs(), r - T::one())
    }
}
