//! Virtual Betti and Hodge numbers of `M^ss(L, chi)` from the motivic
//! comparison with a Hilbert scheme of points:
//!
//! ```text
//! [M(L, chi)] = L^m [Hilb^dtilde X]   modulo classes of dimension <= L^2 + 1 - w
//! m      = -K.L + 1 + 2 chi0
//! dtilde = L.(L+K)/2 - chi0
//! w      = min{rho_L, -chi0, chi0 - K.L}
//! ```
//!
//! where `chi0` is a representative of `chi` in `[K.L, 0)` for the relation
//! `chi ~ chi'` iff `+-chi = chi'` modulo the pairings `L.M`. Multiplying by
//! `L^m` shifts Betti degrees by `2m`, and the truncation controls exactly the
//! degrees `i >= 1 + 2 (L^2 + 1 - w)`.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::hilb::{hilb_poincare_capped, PoincarePolynomial, DEFAULT_MAX_POINTS};
use crate::hypotheses::{HypothesisReport, Rationality};
use crate::lattice::{DivisorClass, Surface};

/// Choice of the representative `chi0` of `chi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChiNormalization {
    pub chi_in: i64,
    /// Positive generator of `{ L.M : M in Pic X }`.
    pub modulus: i64,
    /// `K.L`
    pub canonical_degree: i64,
    pub rho: i64,
    /// Every `chi'` in `[K.L, 0)` with `chi' = +-chi` modulo `modulus`, ascending.
    pub candidates: Vec<i64>,
    pub chi0: i64,
    /// `min{rho, -chi0, chi0 - K.L}`
    pub window_value: i64,
}

/// `min{rho, -c, c - K.L}`
pub fn window_value(rho: i64, canonical_degree: i64, c: i64) -> i64 {
    rho.min(-c).min(c - canonical_degree)
}

/// Picks the candidate maximising the controlled window, preferring the
/// largest `chi0` among ties.
pub fn normalize_chi(s: &Surface, l: &DivisorClass, chi: i64, rho: i64) -> Result<ChiNormalization> {
    let kl = s.canonical_degree(l)?;
    if kl >= 0 {
        return Err(Error::Precondition(format!("K.L = {kl} is not negative")));
    }
    if rho <= 0 {
        return Err(Error::Precondition(format!("rho = {rho} is not positive")));
    }
    let modulus = s.pairing_modulus(l)?;
    if modulus == 0 {
        return Err(Error::Precondition(format!("{l} pairs to zero with Pic X")));
    }
    let candidates: Vec<i64> = (kl..0)
        .filter(|c| (c - chi).rem_euclid(modulus) == 0 || (c + chi).rem_euclid(modulus) == 0)
        .collect();
    let chi0 = *candidates
        .iter()
        .max_by_key(|&&c| (window_value(rho, kl, c), c))
        .ok_or(Error::EmptyCandidates {
            chi,
            lower: kl,
            modulus,
        })?;
    Ok(ChiNormalization {
        chi_in: chi,
        modulus,
        canonical_degree: kl,
        rho,
        window_value: window_value(rho, kl, chi0),
        candidates,
        chi0,
    })
}

/// Degree bookkeeping of the comparison with `Hilb^dtilde X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MotivicShift {
    pub dtilde: i64,
    pub shift_m: i64,
    /// `2 (L^2 + 1)`, the top cohomological degree of `M^ss`.
    pub top_degree: i64,
    /// `L^2 + 1 - window_value`; classes of this dimension and below are not controlled.
    pub scheme_valid_codim: i64,
    /// `1 + 2 scheme_valid_codim`, the lowest controlled degree.
    pub valid_degree_min: i64,
}

pub fn shift(s: &Surface, l: &DivisorClass, norm: &ChiNormalization) -> Result<MotivicShift> {
    let sq = s.self_intersection(l)?;
    let kl = s.canonical_degree(l)?;
    let dtilde = (sq + kl) / 2 - norm.chi0;
    let shift_m = -kl + 1 + 2 * norm.chi0;
    let top_degree = 2 * (sq + 1);
    if 2 * shift_m + 4 * dtilde != top_degree {
        return Err(Error::Invariant(format!(
            "2m + 4 dtilde = {} but 2(L^2+1) = {top_degree}",
            2 * shift_m + 4 * dtilde
        )));
    }
    if dtilde < 0 {
        return Err(Error::Invariant(format!("dtilde = {dtilde} < 0")));
    }
    let scheme_valid_codim = sq + 1 - norm.window_value;
    Ok(MotivicShift {
        dtilde,
        shift_m,
        top_degree,
        scheme_valid_codim,
        valid_degree_min: 1 + 2 * scheme_valid_codim,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportFlags {
    /// `Some` only on the plane.
    pub fine_moduli: Option<bool>,
    /// The reflected table uses Poincare duality on `M^ss`, which is only
    /// known when `M^ss = M` (plane with `gcd(d, chi) = 1`); otherwise it is
    /// conditional on `M^ss` being smooth.
    pub smoothness_assumed: bool,
    pub strictly_semistable_note: bool,
    pub rationality: Rationality,
}

/// Controlled virtual Betti and Hodge numbers of `M^ss(L, chi)`.
///
/// Degrees below `valid_degree_min` are not controlled and are absent from
/// every table; they are never reported as zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VirtualBettiReport {
    pub surface: Surface,
    pub class: DivisorClass,
    pub chi: i64,
    pub normalization: ChiNormalization,
    pub shift: MotivicShift,
    pub hypotheses: HypothesisReport,
    /// `(i, b^v_i)` for `valid_degree_min <= i <= top_degree`.
    pub raw_high: Vec<(i64, BigUint)>,
    /// `(i, b_{top - i})` for `0 <= i <= top_degree - valid_degree_min`.
    pub reflected_low: Vec<(i64, BigUint)>,
    pub flags: ReportFlags,
}

impl VirtualBettiReport {
    pub fn top_degree(&self) -> i64 {
        self.shift.top_degree
    }

    pub fn valid_degree_min(&self) -> i64 {
        self.shift.valid_degree_min
    }

    /// Largest degree of the reflected table, or `None` when it is empty.
    pub fn reflected_max(&self) -> Option<i64> {
        self.reflected_low.last().map(|(i, _)| *i)
    }

    pub fn raw(&self, degree: i64) -> Option<&BigUint> {
        lookup(&self.raw_high, degree)
    }

    pub fn reflected(&self, degree: i64) -> Option<&BigUint> {
        lookup(&self.reflected_low, degree)
    }

    /// `h^{p,q}` where controlled (high range from the shift, low range by
    /// reflection); `None` when `p + q` lies in the uncontrolled middle.
    pub fn hodge(&self, p: i64, q: i64) -> Option<BigUint> {
        let deg = p + q;
        let value = if deg >= self.valid_degree_min() {
            self.raw(deg)
        } else {
            self.reflected(deg)
        }?;
        Some(if p == q { value.clone() } else { BigUint::zero() })
    }

    /// Diagonal Hodge numbers over the high controlled range, `(p, h^{p,p})`.
    pub fn hodge_high(&self) -> Vec<(i64, BigUint)> {
        diagonal(&self.raw_high)
    }

    /// Diagonal Hodge numbers over the reflected range, `(p, h^{p,p})`.
    pub fn hodge_low(&self) -> Vec<(i64, BigUint)> {
        diagonal(&self.reflected_low)
    }
}

fn lookup(table: &[(i64, BigUint)], degree: i64) -> Option<&BigUint> {
    table
        .binary_search_by_key(&degree, |(i, _)| *i)
        .ok()
        .map(|k| &table[k].1)
}

fn diagonal(table: &[(i64, BigUint)]) -> Vec<(i64, BigUint)> {
    table
        .iter()
        .filter(|(i, _)| i % 2 == 0)
        .map(|(i, b)| (i / 2, b.clone()))
        .collect()
}

pub fn virtual_betti(s: &Surface, l: &DivisorClass, chi: i64) -> Result<VirtualBettiReport> {
    virtual_betti_capped(s, l, chi, DEFAULT_MAX_POINTS)
}

/// [`virtual_betti`] with an explicit cap on the number of points of the
/// Hilbert scheme that may be expanded.
pub fn virtual_betti_capped(
    s: &Surface,
    l: &DivisorClass,
    chi: i64,
    max_points: usize,
) -> Result<VirtualBettiReport> {
    let hypotheses = HypothesisReport::evaluate(s, l, Some(chi))?;
    if let Some(why) = &hypotheses.refusal {
        return Err(Error::Inapplicable(why.clone()));
    }
    let rho = hypotheses
        .rho
        .ok_or_else(|| Error::Invariant("applicable report without rho".into()))?;
    let normalization = normalize_chi(s, l, chi, rho.value)?;
    let shift = shift(s, l, &normalization)?;
    let hilb = hilb_poincare_capped(s, shift.dtilde as usize, max_points)?;

    let raw_high = high_table(&hilb, &shift);
    let reflected_low: Vec<(i64, BigUint)> = raw_high
        .iter()
        .rev()
        .map(|(i, b)| (shift.top_degree - i, b.clone()))
        .collect();

    let flags = ReportFlags {
        fine_moduli: hypotheses.fine_moduli,
        smoothness_assumed: hypotheses.fine_moduli != Some(true),
        strictly_semistable_note: hypotheses.strictly_semistable_note,
        rationality: hypotheses.rationality.unwrap_or(Rationality::Unknown),
    };
    let report = VirtualBettiReport {
        surface: *s,
        class: *l,
        chi,
        normalization,
        shift,
        hypotheses,
        raw_high,
        reflected_low,
        flags,
    };
    check_report(&report)?;
    Ok(report)
}

/// `b^v_i = b_{i - 2m}(Hilb)` on the controlled degrees.
fn high_table(hilb: &PoincarePolynomial, shift: &MotivicShift) -> Vec<(i64, BigUint)> {
    (shift.valid_degree_min.max(0)..=shift.top_degree)
        .map(|i| {
            let b = if i % 2 == 0 {
                hilb.betti(i - 2 * shift.shift_m)
            } else {
                BigUint::zero()
            };
            (i, b)
        })
        .collect()
}

fn check_report(r: &VirtualBettiReport) -> Result<()> {
    if let Some(top) = r.raw(r.top_degree()) {
        if *top != BigUint::from(1u32) {
            return Err(Error::Invariant(format!("top-degree Betti number {top} != 1")));
        }
    }
    if r.raw_high.iter().any(|(i, b)| i % 2 == 1 && !b.is_zero()) {
        return Err(Error::Invariant("nonzero odd-degree Betti number".into()));
    }
    Ok(())
}

/// Outcome of comparing two `chi` values on their common controlled range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChiComparison {
    pub agree: bool,
    /// Lowest degree compared; degrees from here to the top are checked.
    pub common_degree_min: i64,
    pub first_divergence: Option<i64>,
}

pub fn chi_independence_check(
    s: &Surface,
    l: &DivisorClass,
    chi1: i64,
    chi2: i64,
) -> Result<ChiComparison> {
    let a = virtual_betti(s, l, chi1)?;
    let b = virtual_betti(s, l, chi2)?;
    Ok(compare_reports(&a, &b))
}

pub fn compare_reports(a: &VirtualBettiReport, b: &VirtualBettiReport) -> ChiComparison {
    let lo = a.valid_degree_min().max(b.valid_degree_min()).max(0);
    let first_divergence = (lo..=a.top_degree().min(b.top_degree())).find(|&i| a.raw(i) != b.raw(i));
    ChiComparison {
        agree: first_divergence.is_none() && a.top_degree() == b.top_degree(),
        common_degree_min: lo,
        first_divergence,
    }
}
