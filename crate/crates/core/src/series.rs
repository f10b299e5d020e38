//! Truncated power series in two variables `z` (counting) and `t`
//! (cohomological degree) with big-integer coefficients.
//!
//! Storage is dense: `(trunc_z + 1) * (trunc_t + 1)` coefficients, row-major
//! in `z`. Anything beyond the truncation orders is dropped, never wrapped.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Add;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiSeries {
    trunc_z: usize,
    trunc_t: usize,
    coeffs: Vec<BigInt>,
}

impl BiSeries {
    pub fn zero(trunc_z: usize, trunc_t: usize) -> Self {
        BiSeries {
            trunc_z,
            trunc_t,
            coeffs: vec![BigInt::zero(); (trunc_z + 1) * (trunc_t + 1)],
        }
    }

    pub fn one(trunc_z: usize, trunc_t: usize) -> Self {
        let mut s = Self::zero(trunc_z, trunc_t);
        s.coeffs[0] = BigInt::one();
        s
    }

    /// Sum of monomials `c z^i t^j`; terms beyond truncation are ignored.
    pub fn from_terms(trunc_z: usize, trunc_t: usize, terms: &[(usize, usize, i64)]) -> Self {
        let mut s = Self::zero(trunc_z, trunc_t);
        for &(i, j, c) in terms {
            if i <= trunc_z && j <= trunc_t {
                let idx = s.idx(i, j);
                s.coeffs[idx] += BigInt::from(c);
            }
        }
        s
    }

    pub fn trunc_z(&self) -> usize {
        self.trunc_z
    }

    pub fn trunc_t(&self) -> usize {
        self.trunc_t
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        i * (self.trunc_t + 1) + j
    }

    /// Coefficient of `z^i t^j`; zero outside the retained range.
    pub fn coeff(&self, i: usize, j: usize) -> BigInt {
        if i <= self.trunc_z && j <= self.trunc_t {
            self.coeffs[self.idx(i, j)].clone()
        } else {
            BigInt::zero()
        }
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if (self.trunc_z, self.trunc_t) != (other.trunc_z, other.trunc_t) {
            return Err(Error::TruncationMismatch(
                self.trunc_z,
                self.trunc_t,
                other.trunc_z,
                other.trunc_t,
            ));
        }
        Ok(())
    }

    /// Truncated convolution.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = Self::zero(self.trunc_z, self.trunc_t);
        for i1 in 0..=self.trunc_z {
            for j1 in 0..=self.trunc_t {
                let a = &self.coeffs[self.idx(i1, j1)];
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..=self.trunc_z - i1 {
                    for j2 in 0..=self.trunc_t - j1 {
                        let b = &other.coeffs[other.idx(i2, j2)];
                        if !b.is_zero() {
                            let k = out.idx(i1 + i2, j1 + j2);
                            out.coeffs[k] += a * b;
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Multiplies in place by `(1 - z^k t^u)^(-c)`.
    ///
    /// Each of the `c` geometric factors is one forward sweep
    /// `A[i][j] += A[i-k][j-u]`, which is exact division by `1 - z^k t^u`.
    pub fn mul_geometric_factor(&mut self, k: usize, u: usize, c: u32) -> Result<()> {
        if k == 0 {
            return Err(Error::Precondition("geometric factor needs k >= 1".into()));
        }
        if u > self.trunc_t {
            return Ok(());
        }
        for _ in 0..c {
            for i in k..=self.trunc_z {
                for j in u..=self.trunc_t {
                    let src = self.idx(i - k, j - u);
                    if self.coeffs[src].is_zero() {
                        continue;
                    }
                    let add = self.coeffs[src].clone();
                    let dst = self.idx(i, j);
                    self.coeffs[dst] += add;
                }
            }
        }
        Ok(())
    }

    /// The `z^i` slice as a polynomial in `t`, indexed by `t`-degree.
    pub fn slice(&self, i: usize) -> Result<Vec<BigInt>> {
        if i > self.trunc_z {
            return Err(Error::OutOfRange {
                index: i,
                order: self.trunc_z,
            });
        }
        let start = self.idx(i, 0);
        Ok(self.coeffs[start..start + self.trunc_t + 1].to_vec())
    }
}

impl Add for &BiSeries {
    type Output = Result<BiSeries>;

    fn add(self, rhs: &BiSeries) -> Result<BiSeries> {
        self.same_shape(rhs)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(BiSeries {
            trunc_z: self.trunc_z,
            trunc_t: self.trunc_t,
            coeffs,
        })
    }
}
