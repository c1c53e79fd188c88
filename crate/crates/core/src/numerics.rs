//! Scalar helpers and the tridiagonal solver used by every assembled system.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Bernoulli function `t / (exp(t) - 1)`, with `B(0) = 1`.
///
/// A Taylor expansion replaces the closed form for `|t| < 1e-4`, where the
/// quotient loses all significant digits.
pub fn bernoulli<T: Scalar>(t: T) -> T {
    if t.abs() < T::lit(1e-4) {
        let t2 = t * t;
        T::one() - t * T::half() + t2 / T::lit(12.0) - t2 * t2 / T::lit(720.0)
    } else if t > T::lit(700.0) {
        // exp overflows; t * exp(-t) is the limit
        t * (-t).exp()
    } else {
        t / t.exp_m1()
    }
}

/// Artificial diffusion model applied to the advective part of a BVP.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Stabilization {
    None,
    Upwind,
    #[default]
    ScharfetterGummel,
}

impl Stabilization {
    pub fn name(self) -> &'static str {
        match self {
            Stabilization::None => "none",
            Stabilization::Upwind => "up",
            Stabilization::ScharfetterGummel => "sg",
        }
    }
}

/// Stabilization function evaluated at a Peclet number.
///
/// Upwind returns `|t|`; Scharfetter-Gummel returns `t - 1 + B(2t)`, which is
/// even in `t`, nonnegative, and behaves like `t^2/3` near the origin.
pub fn stabilization_phi<T: Scalar>(kind: Stabilization, t: T) -> T {
    match kind {
        Stabilization::None => T::zero(),
        Stabilization::Upwind => t.abs(),
        Stabilization::ScharfetterGummel => {
            let t = t.abs();
            if t < T::lit(1e-2) {
                let t2 = t * t;
                t2 / T::lit(3.0) - t2 * t2 / T::lit(45.0) + T::two() * t2 * t2 * t2 / T::lit(945.0)
            } else {
                t - T::one() + bernoulli(T::two() * t)
            }
        }
    }
}

/// Local Peclet number `|v| h / (2 D)`.
#[inline]
pub fn local_peclet<T: Scalar>(v: T, h: T, d: T) -> T {
    v.abs() * h / (T::two() * d)
}

/// Tridiagonal linear system `sub[i-1] x[i-1] + diag[i] x[i] + sup[i] x[i+1] = rhs[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSystem<T> {
    pub sub: Vec<T>,
    pub diag: Vec<T>,
    pub sup: Vec<T>,
    pub rhs: Vec<T>,
}

impl<T: Scalar> TridiagonalSystem<T> {
    pub fn zeros(n: usize) -> Self {
        TridiagonalSystem {
            sub: vec![T::zero(); n.saturating_sub(1)],
            diag: vec![T::zero(); n],
            sup: vec![T::zero(); n.saturating_sub(1)],
            rhs: vec![T::zero(); n],
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Matrix-vector product, used for residual checks.
    pub fn apply(&self, x: &[T]) -> Vec<T> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut y = self.diag[i] * x[i];
                if i > 0 {
                    y += self.sub[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    y += self.sup[i] * x[i + 1];
                }
                y
            })
            .collect()
    }

    /// Row sums `A e` with `e` the vector of ones.
    pub fn row_sums(&self) -> Vec<T> {
        self.apply(&vec![T::one(); self.len()])
    }
}

/// Thomas algorithm. Fails on an exactly zero or non-finite pivot.
pub fn solve_tridiagonal<T: Scalar>(sys: &TridiagonalSystem<T>) -> Result<Vec<T>> {
    let n = sys.len();
    if sys.sub.len() + 1 != n.max(1) || sys.sup.len() + 1 != n.max(1) || sys.rhs.len() != n {
        return Err(Error::InvalidParameter(
            "tridiagonal bands have inconsistent lengths".into(),
        ));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut c = vec![T::zero(); n];
    let mut d = vec![T::zero(); n];
    let mut pivot = sys.diag[0];
    if pivot == T::zero() || !pivot.is_finite() {
        return Err(Error::ZeroPivot { row: 0 });
    }
    if n > 1 {
        c[0] = sys.sup[0] / pivot;
    }
    d[0] = sys.rhs[0] / pivot;
    for i in 1..n {
        pivot = sys.diag[i] - sys.sub[i - 1] * c[i - 1];
        if pivot == T::zero() || !pivot.is_finite() {
            return Err(Error::ZeroPivot { row: i });
        }
        if i + 1 < n {
            c[i] = sys.sup[i] / pivot;
        }
        d[i] = (sys.rhs[i] - sys.sub[i - 1] * d[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        let next = d[i + 1];
        d[i] -= c[i] * next;
    }
    Ok(d)
}

/// Sufficient M-matrix test: nonpositive off-diagonals, nonnegative row sums,
/// and at least one strictly positive row sum.
///
/// Entries that are zero in exact arithmetic (off-diagonals of strongly
/// advective SG rows, row sums without reaction) come out of the assembly
/// with rounding noise of either sign, so both tests allow a few ulps of the
/// row magnitude.
#[allow(clippy::needless_range_loop)]
pub fn is_m_matrix<T: Scalar>(sys: &TridiagonalSystem<T>) -> bool {
    let n = sys.len();
    let slack = T::lit(16.0) * T::epsilon();
    let sums = sys.row_sums();
    let mut any_positive = false;
    for i in 0..n {
        let d = sys.diag[i];
        let lo = if i > 0 { sys.sub[i - 1] } else { T::zero() };
        let hi = if i + 1 < n { sys.sup[i] } else { T::zero() };
        if !(d > T::zero()) {
            return false;
        }
        let mag = d + lo.abs() + hi.abs();
        let tol = slack * mag;
        if lo > tol || hi > tol || sums[i] < -tol {
            return false;
        }
        any_positive |= sums[i] > tol;
    }
    any_positive
}
