//! Betti and Hodge numbers of the Hilbert scheme of `n` points on a
//! supported surface `X` (`b_1 = b_3 = 0`), read off the generating function
//!
//! ```text
//! sum_n P(Hilb^n X, t) z^n
//!     = prod_{k>=1} (1 - z^k t^(2k-2))^(-b_0) (1 - z^k t^(2k))^(-b_2) (1 - z^k t^(2k+2))^(-b_4)
//! ```
//!
//! Expansion is exact over big integers with `z` truncated at `n` and `t` at
//! the top degree `4n`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::Surface;
use crate::series::BiSeries;

/// Default cap on the number of points.
pub const DEFAULT_MAX_POINTS: usize = 64;

/// Betti numbers `b_0..b_{2 dim}` of a smooth projective variety.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoincarePolynomial {
    coeffs: Vec<BigUint>,
    dim: usize,
}

impl PoincarePolynomial {
    pub fn new(coeffs: Vec<BigUint>, dim: usize) -> Result<Self> {
        if coeffs.len() != 2 * dim + 1 {
            return Err(Error::Invariant(format!(
                "{} coefficients for complex dimension {dim}",
                coeffs.len()
            )));
        }
        Ok(PoincarePolynomial { coeffs, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    /// `b_i`, zero outside `[0, 2 dim]`.
    pub fn betti(&self, i: i64) -> BigUint {
        usize::try_from(i)
            .ok()
            .and_then(|i| self.coeffs.get(i).cloned())
            .unwrap_or_default()
    }

    /// `sum (-1)^i b_i`
    pub fn euler(&self) -> BigInt {
        self.coeffs
            .iter()
            .enumerate()
            .fold(BigInt::zero(), |acc, (i, b)| {
                let b = BigInt::from(b.clone());
                if i % 2 == 0 {
                    acc + b
                } else {
                    acc - b
                }
            })
    }

    /// Value at `t = 1`.
    pub fn total(&self) -> BigUint {
        self.coeffs.iter().sum()
    }

    pub fn satisfies_duality(&self) -> bool {
        self.coeffs.iter().eq(self.coeffs.iter().rev())
    }

    pub fn odd_vanish(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(Zero::is_zero)
    }
}

/// Diagonal Hodge numbers; every off-diagonal `h^{p,q}` is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgeDiagonal {
    diag: Vec<BigUint>,
}

impl HodgeDiagonal {
    pub fn dim(&self) -> usize {
        self.diag.len() - 1
    }

    pub fn h(&self, p: usize, q: usize) -> BigUint {
        if p != q {
            return BigUint::zero();
        }
        self.diag.get(p).cloned().unwrap_or_default()
    }

    pub fn diagonal(&self) -> &[BigUint] {
        &self.diag
    }
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    Ok(())
}

pub fn hilb_poincare(s: &Surface, n: usize) -> Result<PoincarePolynomial> {
    hilb_poincare_capped(s, n, DEFAULT_MAX_POINTS)
}

pub fn hilb_poincare_capped(s: &Surface, n: usize, cap: usize) -> Result<PoincarePolynomial> {
    check_cap(n, cap)?;
    let top = 4 * n;
    let mut series = BiSeries::one(n, top);
    let betti = s.betti();
    for k in 1..=n {
        for (j, &b) in betti.iter().enumerate() {
            series.mul_geometric_factor(k, 2 * k - 2 + 2 * j, b)?;
        }
    }
    let coeffs = series
        .slice(n)?
        .into_iter()
        .map(|c| {
            c.to_biguint()
                .ok_or_else(|| Error::Invariant(format!("negative Betti number {c}")))
        })
        .collect::<Result<Vec<_>>>()?;
    PoincarePolynomial::new(coeffs, 2 * n)
}

/// Topological Euler characteristic of `Hilb^n X` from the one-variable
/// product `prod_k (1 - z^k)^(-e(X))`.
pub fn hilb_euler(s: &Surface, n: usize) -> Result<BigUint> {
    hilb_euler_capped(s, n, DEFAULT_MAX_POINTS)
}

pub fn hilb_euler_capped(s: &Surface, n: usize, cap: usize) -> Result<BigUint> {
    check_cap(n, cap)?;
    let mut a = vec![BigUint::zero(); n + 1];
    a[0] = BigUint::one();
    for k in 1..=n {
        for _ in 0..s.topological_euler() {
            for i in k..=n {
                let add = a[i - k].clone();
                a[i] += add;
            }
        }
    }
    Ok(a.swap_remove(n))
}

/// `h^{p,p} = b_{2p}`; the Hodge structure of `Hilb^n X` is of Tate type for
/// the supported surfaces.
pub fn hilb_hodge_diag(s: &Surface, n: usize) -> Result<HodgeDiagonal> {
    let p = hilb_poincare(s, n)?;
    Ok(HodgeDiagonal {
        diag: p.coeffs.iter().step_by(2).cloned().collect(),
    })
}

/// Convenience for tests and output: Betti numbers as `u64` when they fit.
pub fn to_u64_vec(p: &PoincarePolynomial) -> Option<Vec<u64>> {
    p.coeffs.iter().map(|c| c.to_u64()).collect()
}
