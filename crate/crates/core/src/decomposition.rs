//! Splittings `L = L_1 + ... + L_m` into effective proper parts and the
//! splitting invariant
//!
//! ```text
//! s_L = min sum_{i<j} L_i.L_j = (L^2 - max sum_k L_k^2) / 2
//! ```
//!
//! taken over all such splittings with `m >= 2`. When `L` admits no splitting
//! at all the minimum is over an empty set and is reported as
//! [`SParam::Infinite`].

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, Surface};

/// A multiset of at least two nonzero effective classes, stored in
/// non-increasing lexicographic order so equal multisets compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Decomposition {
    parts: Vec<DivisorClass>,
}

impl Decomposition {
    /// Canonicalises the order of `parts`.
    pub fn new(mut parts: Vec<DivisorClass>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Decomposition { parts }
    }

    pub fn parts(&self) -> &[DivisorClass] {
        &self.parts
    }

    pub fn total(&self) -> Option<DivisorClass> {
        let (first, rest) = self.parts.split_first()?;
        Some(rest.iter().fold(*first, |acc, p| acc + *p))
    }

    /// `sum_{i<j} L_i.L_j`
    pub fn pairwise_sum(&self, s: &Surface) -> i64 {
        let mut acc = 0;
        for (i, a) in self.parts.iter().enumerate() {
            for b in &self.parts[i + 1..] {
                acc += s.pair(a, b);
            }
        }
        acc
    }

    /// `sum_k L_k^2`
    pub fn square_sum(&self, s: &Surface) -> i64 {
        self.parts.iter().map(|p| s.pair(p, p)).sum()
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Value of `s_L` with a witnessing decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SParam {
    Finite { value: i64, witness: Decomposition },
    /// No decomposition exists; acts as `+infinity` in every comparison.
    Infinite,
}

impl SParam {
    pub fn value(&self) -> Option<i64> {
        match self {
            SParam::Finite { value, .. } => Some(*value),
            SParam::Infinite => None,
        }
    }

    pub fn witness(&self) -> Option<&Decomposition> {
        match self {
            SParam::Finite { witness, .. } => Some(witness),
            SParam::Infinite => None,
        }
    }

    pub fn at_least(&self, bound: i64) -> bool {
        self.value().is_none_or(|v| v >= bound)
    }

    /// `min(self, x)` with `Infinite` absorbing into `x`.
    pub fn min_with(&self, x: i64) -> i64 {
        self.value().map_or(x, |v| v.min(x))
    }
}

impl fmt::Display for SParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SParam::Finite { value, .. } => write!(f, "{value}"),
            SParam::Infinite => f.write_str("inf"),
        }
    }
}

struct Frame {
    rest: DivisorClass,
    next: usize,
}

/// Streaming enumeration of decompositions, depth first, parts taken in
/// non-increasing lexicographic order.
pub struct Decompositions {
    surface: Surface,
    candidates: Vec<DivisorClass>,
    frames: Vec<Frame>,
    chosen: Vec<usize>,
}

impl Iterator for Decompositions {
    type Item = Decomposition;

    fn next(&mut self) -> Option<Decomposition> {
        while let Some(frame) = self.frames.last_mut() {
            if frame.rest.is_zero() {
                let out = (self.chosen.len() >= 2).then(|| Decomposition {
                    parts: self.chosen.iter().map(|&i| self.candidates[i]).collect(),
                });
                self.frames.pop();
                self.chosen.pop();
                match out {
                    Some(d) => return Some(d),
                    None => continue,
                }
            }
            let mut found = None;
            while frame.next < self.candidates.len() {
                let i = frame.next;
                frame.next += 1;
                let rest = frame.rest - self.candidates[i];
                if rest.coords().iter().all(|&x| x >= 0) {
                    found = Some((i, rest));
                    break;
                }
            }
            match found {
                Some((i, rest)) => {
                    self.chosen.push(i);
                    self.frames.push(Frame { rest, next: i });
                }
                None => {
                    self.frames.pop();
                    self.chosen.pop();
                }
            }
        }
        None
    }
}

impl Decompositions {
    pub fn surface(&self) -> &Surface {
        &self.surface
    }
}

/// Every multiset of at least two effective proper parts summing to `l` whose
/// parts all satisfy `parts_filter`, each emitted once.
pub fn decompositions(
    s: &Surface,
    l: &DivisorClass,
    parts_filter: impl Fn(&DivisorClass) -> bool,
) -> Result<Decompositions> {
    let mut candidates: Vec<DivisorClass> = s
        .sub_effective_classes(l)?
        .into_iter()
        .filter(|c| c != l && parts_filter(c))
        .collect();
    candidates.reverse();
    Ok(Decompositions {
        surface: *s,
        candidates,
        frames: alloc::vec![Frame { rest: *l, next: 0 }],
        chosen: Vec::new(),
    })
}

fn minimise(s: &Surface, l: &DivisorClass, decomps: Decompositions) -> Result<SParam> {
    let sq = s.pair(l, l);
    let mut best: Option<(i64, Decomposition)> = None;
    for d in decomps {
        let value = d.pairwise_sum(s);
        let via_squares = sq - d.square_sum(s);
        if 2 * value != via_squares {
            return Err(Error::Invariant(format!(
                "pairwise sum {value} disagrees with (L^2 - sum L_k^2)/2 for {d}"
            )));
        }
        if best.as_ref().is_none_or(|(v, _)| value < *v) {
            best = Some((value, d));
        }
    }
    Ok(match best {
        Some((value, witness)) => SParam::Finite { value, witness },
        None => SParam::Infinite,
    })
}

fn require_effective_nonzero(s: &Surface, l: &DivisorClass) -> Result<()> {
    if !s.is_effective(l)? {
        return Err(Error::NotEffective(*l));
    }
    if l.is_zero() {
        return Err(Error::ZeroClass);
    }
    Ok(())
}

/// `s_L` over all decompositions. The witness is the first minimiser in
/// enumeration order.
pub fn s_param(s: &Surface, l: &DivisorClass) -> Result<SParam> {
    require_effective_nonzero(s, l)?;
    minimise(s, l, decompositions(s, l, |_| true)?)
}

/// `s_L` restricted to decompositions whose parts all carry integral curves.
///
/// On the supported surfaces `h^0 = chi` holds for every class with an
/// integral member, so the restricted minimum must coincide with the full
/// one; a disagreement is reported as an invariant violation.
pub fn s_param_restricted(s: &Surface, l: &DivisorClass) -> Result<SParam> {
    require_effective_nonzero(s, l)?;
    let integral = |c: &DivisorClass| s.has_integral_member(c).unwrap_or(false);
    let restricted = minimise(s, l, decompositions(s, l, integral)?)?;
    let full = s_param(s, l)?;
    if restricted.value() != full.value() {
        return Err(Error::Invariant(format!(
            "restricted s_L = {restricted} differs from s_L = {full} for {l}"
        )));
    }
    Ok(restricted)
}

/// `s_L > 0` for a class with an integral member.
pub fn positivity_check(s: &Surface, l: &DivisorClass) -> Result<bool> {
    if !s.has_integral_member(l)? {
        return Err(Error::Precondition(format!("|{l}| has no integral member")));
    }
    Ok(!s_param(s, l)?.value().is_some_and(|v| v <= 0))
}
