//! Applicability checks for the structural results on `M^ss(L, chi)`:
//! irreducibility, the codimension constant `rho_L` of the locus of sheaves
//! with non-integral support, the side condition on `L + K` needed by the
//! motivic formula, and the fine-moduli / rationality flags.
//!
//! Everything here is a pure function of `(X, L, chi)`.

use alloc::format;
use alloc::string::String;
use core::fmt;

use crate::arith::{gcd, is_prime, is_twice_prime};
use crate::decomposition::{s_param, SParam};
use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, Surface, SurfaceKind};

/// Which clause makes the non-integral-support locus of `L = n L'` small.
/// Clauses are tried in declaration order and the first match is reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CodimensionCondition {
    /// `n = 1` or `n = 2`.
    SmallMultiple,
    /// `n` prime, and `L'` has no integral member or is rational.
    PrimeMultiple,
    /// `n = 2p`, `p` prime, and both `L'` and `2L'` pass the prime clause test.
    TwicePrimeMultiple,
    /// Some ample `A` has `(A + K).L'' <= 0` for all `0 < L'' <= L` and
    /// `(A + K).L < 0`.
    AmpleTwist,
}

impl CodimensionCondition {
    pub fn label(&self) -> &'static str {
        match self {
            CodimensionCondition::SmallMultiple => "small-multiple",
            CodimensionCondition::PrimeMultiple => "prime-multiple",
            CodimensionCondition::TwicePrimeMultiple => "twice-prime-multiple",
            CodimensionCondition::AmpleTwist => "ample-twist",
        }
    }
}

impl fmt::Display for CodimensionCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Outcome of [`codimension_condition`]: the matching clause, or `None`
/// together with the name of the failed check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionEvidence {
    pub condition: Option<CodimensionCondition>,
    pub evidence: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RhoSource {
    /// Read off the surface-specific table.
    Table,
    /// Class outside the tabulated range; the weakest positive value is used.
    ConservativeMinimum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rho {
    pub value: i64,
    pub source: RhoSource,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Irreducibility {
    /// `L` primitive with an integral member.
    Primitive,
    /// `L = nL'` non-primitive and one of the multiple-support criteria holds.
    MultipleCriterion,
    Unknown,
}

impl Irreducibility {
    pub fn label(&self) -> &'static str {
        match self {
            Irreducibility::Primitive => "irreducible (primitive class)",
            Irreducibility::MultipleCriterion => "irreducible (multiple-support criterion)",
            Irreducibility::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rationality {
    Rational,
    StablyRational,
    Unknown,
}

impl Rationality {
    pub fn label(&self) -> &'static str {
        match self {
            Rationality::Rational => "rational",
            Rationality::StablyRational => "stably-rational",
            Rationality::Unknown => "unknown",
        }
    }
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

/// `|M|^int` empty, or `g_M = 0`.
fn rational_or_not_integral(s: &Surface, m: &DivisorClass) -> Result<bool> {
    Ok(!s.has_integral_member(m)? || s.arithmetic_genus(m)? == 0)
}

/// Smallest ample class; it serves as the witness for [`CodimensionCondition::AmpleTwist`].
pub fn ample_witness(s: &Surface) -> DivisorClass {
    match s.kind() {
        SurfaceKind::ProjectivePlane => DivisorClass::plane(1),
        SurfaceKind::Hirzebruch { e } => DivisorClass::hirzebruch(1, e as i64 + 1),
    }
}

/// Checks the ample-twist inequalities with [`ample_witness`].
///
/// On the supported surfaces the witness is optimal, so this decides the
/// clause exactly: always true on the plane and on `F_0`, and on `F_1` true
/// iff `b > 0`.
pub fn ample_twist_holds(s: &Surface, l: &DivisorClass) -> Result<bool> {
    require_effective_nonzero(s, l)?;
    let twist = ample_witness(s) + s.canonical_class();
    let subs_ok = s
        .sub_effective_classes(l)?
        .iter()
        .all(|sub| s.pair(&twist, sub) <= 0);
    Ok(subs_ok && s.pair(&twist, l) < 0)
}

/// The first matching codimension clause for `L`, after checking that `L` is
/// `K`-negative, has an integral member and satisfies `L^2 >= 0`.
pub fn codimension_condition(s: &Surface, l: &DivisorClass) -> Result<ConditionEvidence> {
    require_effective_nonzero(s, l)?;
    let fail = |why: String| {
        Ok(ConditionEvidence {
            condition: None,
            evidence: why,
        })
    };
    if !s.is_kx_negative(l)? {
        return fail(format!("{l} is not K-negative"));
    }
    if !s.has_integral_member(l)? {
        return fail(format!("|{l}| has no integral member"));
    }
    let sq = s.self_intersection(l)?;
    if sq < 0 {
        return fail(format!("L^2 = {sq} < 0"));
    }
    let (n, prim) = s.primitive_part(l)?;
    let found = |c: CodimensionCondition, why: String| {
        Ok(ConditionEvidence {
            condition: Some(c),
            evidence: why,
        })
    };
    if n <= 2 {
        return found(
            CodimensionCondition::SmallMultiple,
            format!("L = {n} * {prim}, n <= 2"),
        );
    }
    if is_prime(n) && rational_or_not_integral(s, &prim)? {
        return found(
            CodimensionCondition::PrimeMultiple,
            format!("L = {n} * {prim}, n prime, g_L' = 0 or |L'|^int empty"),
        );
    }
    let doubled = 2 * prim;
    if is_twice_prime(n)
        && rational_or_not_integral(s, &prim)?
        && rational_or_not_integral(s, &doubled)?
    {
        return found(
            CodimensionCondition::TwicePrimeMultiple,
            format!(
                "L = {n} * {prim}, n = 2 * {}, L' and 2L' rational or without integral member",
                n / 2
            ),
        );
    }
    if ample_twist_holds(s, l)? {
        return found(
            CodimensionCondition::AmpleTwist,
            format!("ample A = {} has (A+K).L'' <= 0 on 0 < L'' <= L and (A+K).L < 0", ample_witness(s)),
        );
    }
    fail(format!("L = {n} * {prim} matches no codimension clause"))
}

/// The tabulated codimension constant.
///
/// Plane, `L = dH`: `d - 1` when `d` is prime or twice a prime, else 7.
/// `F_e`, `L = a sigma + b f` with `a > 0`, `b > ae`: `min{b - (a-1)e, a}` when
/// `a` is prime or `gcd(a, b)` is 1 or 2, else `min{7, b - (a-1)e, a}`.
/// Classes outside the table but satisfying a codimension clause get `1`.
pub fn rho(s: &Surface, l: &DivisorClass) -> Result<Rho> {
    let ev = codimension_condition(s, l)?;
    if ev.condition.is_none() {
        return Err(Error::Inapplicable(ev.evidence));
    }
    Ok(rho_table(s, l).map_or(
        Rho {
            value: 1,
            source: RhoSource::ConservativeMinimum,
        },
        |value| Rho {
            value,
            source: RhoSource::Table,
        },
    ))
}

/// Table lookup only; `None` outside the tabulated range.
pub fn rho_table(s: &Surface, l: &DivisorClass) -> Option<i64> {
    match (s.kind(), l.coords()) {
        (SurfaceKind::ProjectivePlane, &[d]) if d > 0 => {
            Some(if is_prime(d) || is_twice_prime(d) { d - 1 } else { 7 })
        }
        (SurfaceKind::Hirzebruch { e }, &[a, b]) if a > 0 && b > a * e as i64 => {
            let e = e as i64;
            let base = (b - (a - 1) * e).min(a);
            let g = gcd(a, b);
            Some(if is_prime(a) || g == 1 || g == 2 { base } else { base.min(7) })
        }
        _ => None,
    }
}

/// Irreducibility of `M^ss(L, chi)` for every `chi`, when one of the
/// criteria applies. Requires `L` `K`-negative with an integral member.
pub fn irreducibility_guaranteed(s: &Surface, l: &DivisorClass) -> Result<Irreducibility> {
    require_effective_nonzero(s, l)?;
    if !s.is_kx_negative(l)? {
        return Err(Error::Precondition(format!("{l} is not K-negative")));
    }
    if !s.has_integral_member(l)? {
        return Err(Error::Precondition(format!("|{l}| has no integral member")));
    }
    let (n, prim) = s.primitive_part(l)?;
    if n == 1 {
        return Ok(Irreducibility::Primitive);
    }
    if s.self_intersection(l)? < 0 {
        return Err(Error::Precondition(format!("{l} is not primitive and L^2 < 0")));
    }
    let prime_clause = rational_or_not_integral(s, &prim)?;
    let holds = n == 2
        || (is_prime(n) && prime_clause)
        || (is_twice_prime(n) && prime_clause && rational_or_not_integral(s, &(2 * prim))?);
    Ok(if holds {
        Irreducibility::MultipleCriterion
    } else {
        Irreducibility::Unknown
    })
}

/// Fine moduli on the plane iff `gcd(d, chi) = 1`; `None` on `F_e`, where no
/// criterion is available.
pub fn fine_moduli_flag(s: &Surface, l: &DivisorClass, chi: i64) -> Option<bool> {
    match (s.kind(), l.coords()) {
        (SurfaceKind::ProjectivePlane, &[d]) => Some(gcd(d, chi) == 1),
        _ => None,
    }
}

pub fn rationality_flag(s: &Surface, l: &DivisorClass, chi: i64) -> Rationality {
    if let (SurfaceKind::ProjectivePlane, &[d]) = (s.kind(), l.coords()) {
        if d > 0 && ((chi - 1) % d == 0 || (chi + 1) % d == 0) {
            return Rationality::Rational;
        }
    }
    if fine_moduli_flag(s, l, chi) == Some(true) {
        Rationality::StablyRational
    } else {
        Rationality::Unknown
    }
}

/// Strictly semistable sheaves exist on the plane exactly when `gcd(d, chi) > 1`.
pub fn strictly_semistable_note(s: &Surface, l: &DivisorClass, chi: i64) -> bool {
    fine_moduli_flag(s, l, chi) == Some(false)
}

/// Aggregated outcome of every check for `(X, L, chi)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisReport {
    pub surface: Surface,
    pub class: DivisorClass,
    pub chi: Option<i64>,
    pub self_intersection: i64,
    pub canonical_degree: i64,
    pub genus: i64,
    pub kx_negative: bool,
    pub has_integral: bool,
    pub multiplicity: i64,
    pub primitive_class: DivisorClass,
    pub s_l: SParam,
    pub l_plus_k: DivisorClass,
    /// `None` when `L + K` is not a nonzero effective class.
    pub s_l_plus_k: Option<SParam>,
    pub l_plus_k_nonpositive: bool,
    pub condition: ConditionEvidence,
    pub rho: Option<Rho>,
    pub main_applicable: bool,
    /// Why the motivic formula does not apply, when it does not.
    pub refusal: Option<String>,
    pub irreducibility: Irreducibility,
    pub fine_moduli: Option<bool>,
    pub rationality: Option<Rationality>,
    pub strictly_semistable_note: bool,
    /// Non-primitive `K`-negative classes with `L^2 < 0` carry no stable sheaves.
    pub moduli_empty: bool,
}

impl HypothesisReport {
    pub fn evaluate(s: &Surface, l: &DivisorClass, chi: Option<i64>) -> Result<Self> {
        require_effective_nonzero(s, l)?;
        let sq = s.self_intersection(l)?;
        let kl = s.canonical_degree(l)?;
        let kx_negative = s.is_kx_negative(l)?;
        let has_integral = s.has_integral_member(l)?;
        let (multiplicity, primitive_class) = s.primitive_part(l)?;
        let s_l = s_param(s, l)?;

        let l_plus_k = *l + s.canonical_class();
        let l_plus_k_nonpositive = s.is_nonpositive(&l_plus_k)?;
        let s_l_plus_k = if s.is_effective(&l_plus_k)? && !l_plus_k.is_zero() {
            Some(s_param(s, &l_plus_k)?)
        } else {
            None
        };

        let condition = codimension_condition(s, l)?;
        let rho = match condition.condition {
            Some(_) => Some(rho(s, l)?),
            None => None,
        };

        let side_ok = l_plus_k_nonpositive || s_l_plus_k.as_ref().is_some_and(|sp| sp.at_least(0));
        let refusal = if condition.condition.is_none() {
            Some(format!("no codimension clause: {}", condition.evidence))
        } else if !side_ok {
            Some(match &s_l_plus_k {
                Some(sp) => format!("L + K = {l_plus_k} has s = {sp} < 0"),
                None => format!("L + K = {l_plus_k} is neither <= 0 nor effective"),
            })
        } else {
            None
        };

        let irreducibility = irreducibility_guaranteed(s, l).unwrap_or(Irreducibility::Unknown);

        Ok(HypothesisReport {
            surface: *s,
            class: *l,
            chi,
            self_intersection: sq,
            canonical_degree: kl,
            genus: s.arithmetic_genus(l)?,
            kx_negative,
            has_integral,
            multiplicity,
            primitive_class,
            s_l,
            l_plus_k,
            s_l_plus_k,
            l_plus_k_nonpositive,
            condition,
            rho,
            main_applicable: refusal.is_none(),
            refusal,
            irreducibility,
            fine_moduli: chi.and_then(|c| fine_moduli_flag(s, l, c)),
            rationality: chi.map(|c| rationality_flag(s, l, c)),
            strictly_semistable_note: chi.is_some_and(|c| strictly_semistable_note(s, l, c)),
            moduli_empty: kx_negative && multiplicity > 1 && sq < 0,
        })
    }
}

/// Whether the motivic formula applies to `L`, with the full report.
pub fn main_applicable(s: &Surface, l: &DivisorClass) -> Result<(bool, HypothesisReport)> {
    let report = HypothesisReport::evaluate(s, l, None)?;
    Ok((report.main_applicable, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2() -> Surface {
        Surface::projective_plane()
    }
    fn f(e: u32) -> Surface {
        Surface::hirzebruch(e).unwrap()
    }
    fn h(a: i64, b: i64) -> DivisorClass {
        DivisorClass::hirzebruch(a, b)
    }
    fn d(x: i64) -> DivisorClass {
        DivisorClass::plane(x)
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho(&p2(), &d(7)).unwrap().value, 6);
        assert_eq!(rho(&p2(), &d(9)).unwrap().value, 7);
        assert_eq!(rho(&f(1), &h(2, 5)).unwrap().value, 2);
        let off_table = rho(&f(1), &h(2, 2)).unwrap();
        assert_eq!(off_table.source, RhoSource::ConservativeMinimum);
        assert_eq!(off_table.value, 1);
        assert!(matches!(rho(&f(1), &h(0, 2)), Err(Error::Inapplicable(_))));
    }

    #[test]
    fn rho_plane_table() {
        for deg in 2..=14 {
            let want = if [8, 9, 12].contains(&deg) { 7 } else { deg - 1 };
            assert_eq!(rho(&p2(), &d(deg)).unwrap().value, want, "d = {deg}");
            assert!(rho(&p2(), &d(deg)).unwrap().value < deg);
        }
    }

    #[test]
    fn conditions() {
        let c = |s: Surface, l| codimension_condition(&s, &l).unwrap().condition;
        assert_eq!(c(p2(), d(6)), Some(CodimensionCondition::TwicePrimeMultiple));
        assert_eq!(c(p2(), d(9)), Some(CodimensionCondition::AmpleTwist));
        assert_eq!(c(p2(), d(7)), Some(CodimensionCondition::PrimeMultiple));
        assert_eq!(c(f(0), h(2, 2)), Some(CodimensionCondition::SmallMultiple));
        assert_eq!(c(p2(), d(1)), Some(CodimensionCondition::SmallMultiple));
        assert_eq!(c(f(0), h(4, 4)), Some(CodimensionCondition::AmpleTwist));
        // sigma on F_1 has negative square
        let ev = codimension_condition(&f(1), &h(1, 0)).unwrap();
        assert_eq!(ev.condition, None);
        assert!(ev.evidence.contains("L^2"));
        let ev = codimension_condition(&f(0), &h(2, 0)).unwrap();
        assert!(ev.evidence.contains("integral"));
    }

    #[test]
    fn ample_twist_matches_example_list() {
        for deg in 1..15 {
            assert!(ample_twist_holds(&p2(), &d(deg)).unwrap());
        }
        for e in 0..=1 {
            for a in 0..8 {
                for b in 0..8 {
                    if a + b == 0 {
                        continue;
                    }
                    assert_eq!(ample_twist_holds(&f(e), &h(a, b)).unwrap(), e == 0 || b > 0, "F_{e} ({a},{b})");
                }
            }
        }
    }

    #[test]
    fn small_multiples_always_match_first_clause() {
        for s in [f(0), f(1)] {
            for a in 0..9 {
                for b in 0..9 {
                    let l = h(a, b);
                    if l.is_zero() {
                        continue;
                    }
                    let ev = codimension_condition(&s, &l).unwrap();
                    if ev.condition.is_some() && s.primitive_part(&l).unwrap().0 <= 2 {
                        assert_eq!(ev.condition, Some(CodimensionCondition::SmallMultiple));
                    }
                }
            }
        }
    }

    #[test]
    fn irreducibility() {
        assert_eq!(irreducibility_guaranteed(&f(1), &h(2, 5)).unwrap(), Irreducibility::Primitive);
        assert_eq!(
            irreducibility_guaranteed(&p2(), &d(10)).unwrap(),
            Irreducibility::MultipleCriterion
        );
        assert_eq!(irreducibility_guaranteed(&p2(), &d(9)).unwrap(), Irreducibility::Unknown);
        assert_eq!(
            irreducibility_guaranteed(&p2(), &d(2)).unwrap(),
            Irreducibility::MultipleCriterion
        );
        assert_eq!(
            irreducibility_guaranteed(&p2(), &d(4)).unwrap(),
            Irreducibility::MultipleCriterion
        );
        // gcd 2 and p (sigma + c f), c > e
        assert_eq!(
            irreducibility_guaranteed(&f(1), &h(2, 4)).unwrap(),
            Irreducibility::MultipleCriterion
        );
        assert_eq!(
            irreducibility_guaranteed(&f(0), &h(3, 6)).unwrap(),
            Irreducibility::MultipleCriterion
        );
        assert!(matches!(
            irreducibility_guaranteed(&f(0), &h(2, 0)),
            Err(Error::Precondition(_))
        ));
        // sigma on F_1: primitive, a single point
        assert_eq!(irreducibility_guaranteed(&f(1), &h(1, 0)).unwrap(), Irreducibility::Primitive);
    }

    #[test]
    fn main_applicability() {
        let (ok, r) = main_applicable(&p2(), &d(8)).unwrap();
        assert!(ok);
        assert_eq!(r.l_plus_k, d(5));
        assert_eq!(r.s_l_plus_k.as_ref().unwrap().value(), Some(4));
        let (ok, r) = main_applicable(&p2(), &d(2)).unwrap();
        assert!(ok && r.l_plus_k_nonpositive && r.s_l_plus_k.is_none());
        let (ok, r) = main_applicable(&p2(), &d(3)).unwrap();
        assert!(ok && r.l_plus_k.is_zero() && r.l_plus_k_nonpositive);
        // L + K = (-1, 3) on F_0: mixed signs are refused
        let (ok, r) = main_applicable(&f(0), &h(1, 5)).unwrap();
        assert!(!ok);
        assert!(r.refusal.unwrap().contains("neither"));
        let (ok, _) = main_applicable(&f(1), &h(1, 0)).unwrap();
        assert!(!ok);
    }

    #[test]
    fn report_invariants_on_grid() {
        let mut cases = alloc::vec::Vec::new();
        for deg in 1..=12 {
            cases.push((p2(), d(deg)));
        }
        for s in [f(0), f(1)] {
            for a in 0..=7 {
                for b in 0..=(7 - a) {
                    if a + b > 0 {
                        cases.push((s, h(a, b)));
                    }
                }
            }
        }
        for (s, l) in cases {
            let r = HypothesisReport::evaluate(&s, &l, Some(1)).unwrap();
            assert_eq!(r.rho.is_some(), r.condition.condition.is_some(), "{s} {l}");
            if r.main_applicable {
                assert!(r.condition.condition.is_some());
                assert!(
                    r.l_plus_k_nonpositive || r.s_l_plus_k.as_ref().is_some_and(|x| x.at_least(0))
                );
            }
            if s.is_plane() || s.kind() == (SurfaceKind::Hirzebruch { e: 0 }) {
                assert!(r.kx_negative);
            }
            if let Some(rho) = r.rho {
                assert!(rho.value > 0);
            }
            assert_eq!(r, HypothesisReport::evaluate(&s, &l, Some(1)).unwrap());
        }
    }

    #[test]
    fn fine_moduli_and_rationality() {
        assert_eq!(fine_moduli_flag(&p2(), &d(8), -7), Some(true));
        assert_eq!(fine_moduli_flag(&p2(), &d(8), -4), Some(false));
        assert_eq!(fine_moduli_flag(&f(1), &h(2, 5), 1), None);
        assert_eq!(rationality_flag(&p2(), &d(5), 6), Rationality::Rational);
        assert_eq!(rationality_flag(&p2(), &d(8), -3), Rationality::StablyRational);
        assert_eq!(rationality_flag(&p2(), &d(6), -3), Rationality::Unknown);
        assert_eq!(rationality_flag(&p2(), &d(8), -7), Rationality::Rational);
        assert_eq!(rationality_flag(&f(1), &h(2, 5), 1), Rationality::Unknown);
        assert!(strictly_semistable_note(&p2(), &d(6), -3));
        assert!(!strictly_semistable_note(&f(0), &h(2, 2), 2));
    }
}
