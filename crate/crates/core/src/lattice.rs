//! Picard lattices of the supported surfaces.
//!
//! Two models are covered:
//!
//! - the projective plane, basis `H` with `H.H = 1`, canonical class `-3H`;
//! - the Hirzebruch surface `F_e = P(O + O(e))` for `e` in `{0, 1}`, basis
//!   `(sigma, f)` with `sigma^2 = -e`, `sigma.f = 1`, `f^2 = 0`, canonical
//!   class `-2 sigma - (e + 2) f`.
//!
//! A divisor class is stored in coordinates of that basis: `(d)` on the plane,
//! `(a, b)` meaning `a sigma + b f` on `F_e`. Effective classes are exactly
//! the non-negative coordinate vectors on both models.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};
use core::str::FromStr;

use crate::arith::gcd;
use crate::error::{Error, Result};

/// Coordinates of a line bundle in the Picard basis of a surface.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass {
    len: u8,
    c: [i64; 2],
}

impl DivisorClass {
    /// `d H` on the projective plane.
    pub const fn plane(d: i64) -> Self {
        DivisorClass { len: 1, c: [d, 0] }
    }

    /// `a sigma + b f` on a Hirzebruch surface.
    pub const fn hirzebruch(a: i64, b: i64) -> Self {
        DivisorClass { len: 2, c: [a, b] }
    }

    pub fn from_coords(coords: &[i64]) -> Result<Self> {
        match *coords {
            [d] => Ok(Self::plane(d)),
            [a, b] => Ok(Self::hirzebruch(a, b)),
            _ => Err(Error::Precondition(format!(
                "divisor classes have 1 or 2 coordinates, got {}",
                coords.len()
            ))),
        }
    }

    pub fn coords(&self) -> &[i64] {
        &self.c[..self.len as usize]
    }

    pub fn rank(&self) -> usize {
        self.len as usize
    }

    pub fn is_zero(&self) -> bool {
        self.coords().iter().all(|&x| x == 0)
    }

    pub fn zero_like(&self) -> Self {
        DivisorClass { len: self.len, c: [0, 0] }
    }

    /// Exact division by `k`, if every coordinate is divisible.
    pub fn div_exact(&self, k: i64) -> Option<Self> {
        if k == 0 || self.coords().iter().any(|x| x % k != 0) {
            return None;
        }
        Some(DivisorClass {
            len: self.len,
            c: [self.c[0] / k, self.c[1] / k],
        })
    }

    fn zip(self, rhs: Self, f: impl Fn(i64, i64) -> i64) -> Self {
        debug_assert_eq!(self.len, rhs.len, "mixing classes of different rank");
        DivisorClass {
            len: self.len,
            c: [f(self.c[0], rhs.c[0]), f(self.c[1], rhs.c[1])],
        }
    }
}

impl Add for DivisorClass {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.zip(rhs, |x, y| x + y)
    }
}

impl Sub for DivisorClass {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.zip(rhs, |x, y| x - y)
    }
}

impl Neg for DivisorClass {
    type Output = Self;
    fn neg(self) -> Self {
        self.zero_like() - self
    }
}

impl Mul<DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, rhs: DivisorClass) -> DivisorClass {
        DivisorClass {
            len: rhs.len,
            c: [self * rhs.c[0], self * rhs.c[1]],
        }
    }
}

impl fmt::Debug for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.coords() {
            [d] => write!(f, "({d})"),
            [a, b] => write!(f, "({a},{b})"),
            _ => unreachable!(),
        }
    }
}

/// Parses `"d"` or `"a,b"`.
impl FromStr for DivisorClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut coords = Vec::new();
        for part in s.split(',') {
            let part = part.trim();
            let x = part
                .parse::<i64>()
                .map_err(|_| Error::Precondition(format!("bad coordinate {part:?} in {s:?}")))?;
            coords.push(x);
        }
        Self::from_coords(&coords)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SurfaceKind {
    ProjectivePlane,
    Hirzebruch { e: u32 },
}

/// A supported rational surface together with its intersection form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Surface {
    kind: SurfaceKind,
}

impl Surface {
    pub const fn projective_plane() -> Self {
        Surface {
            kind: SurfaceKind::ProjectivePlane,
        }
    }

    /// `F_e`. Only `e = 0` and `e = 1` are modelled; everything else is
    /// refused rather than extrapolated.
    pub fn hirzebruch(e: u32) -> Result<Self> {
        if e > 1 {
            return Err(Error::UnsupportedSurface(e));
        }
        Ok(Surface {
            kind: SurfaceKind::Hirzebruch { e },
        })
    }

    pub fn kind(&self) -> SurfaceKind {
        self.kind
    }

    pub fn is_plane(&self) -> bool {
        self.kind == SurfaceKind::ProjectivePlane
    }

    /// Short identifier used on the command line: `p2`, `f0`, `f1`.
    pub fn id(&self) -> &'static str {
        match self.kind {
            SurfaceKind::ProjectivePlane => "p2",
            SurfaceKind::Hirzebruch { e: 0 } => "f0",
            SurfaceKind::Hirzebruch { .. } => "f1",
        }
    }

    pub fn picard_rank(&self) -> usize {
        match self.kind {
            SurfaceKind::ProjectivePlane => 1,
            SurfaceKind::Hirzebruch { .. } => 2,
        }
    }

    /// `(b_0, b_2, b_4)`; odd Betti numbers vanish.
    pub fn betti(&self) -> [u32; 3] {
        [1, self.picard_rank() as u32, 1]
    }

    /// Topological Euler characteristic `b_0 + b_2 + b_4`.
    pub fn topological_euler(&self) -> u32 {
        self.betti().iter().sum()
    }

    pub fn basis(&self) -> Vec<DivisorClass> {
        match self.kind {
            SurfaceKind::ProjectivePlane => alloc::vec![DivisorClass::plane(1)],
            SurfaceKind::Hirzebruch { .. } => alloc::vec![
                DivisorClass::hirzebruch(1, 0),
                DivisorClass::hirzebruch(0, 1)
            ],
        }
    }

    pub fn zero(&self) -> DivisorClass {
        match self.kind {
            SurfaceKind::ProjectivePlane => DivisorClass::plane(0),
            SurfaceKind::Hirzebruch { .. } => DivisorClass::hirzebruch(0, 0),
        }
    }

    pub fn check(&self, l: &DivisorClass) -> Result<()> {
        if l.rank() != self.picard_rank() {
            return Err(Error::DimensionMismatch {
                class: *l,
                expected: self.picard_rank(),
                found: l.rank(),
            });
        }
        Ok(())
    }

    pub fn parse_class(&self, s: &str) -> Result<DivisorClass> {
        let l: DivisorClass = s.parse()?;
        self.check(&l)?;
        Ok(l)
    }

    pub fn intersect(&self, l1: &DivisorClass, l2: &DivisorClass) -> Result<i64> {
        self.check(l1)?;
        self.check(l2)?;
        Ok(self.pair(l1, l2))
    }

    /// Intersection number without the rank check.
    pub(crate) fn pair(&self, l1: &DivisorClass, l2: &DivisorClass) -> i64 {
        match self.kind {
            SurfaceKind::ProjectivePlane => l1.c[0] * l2.c[0],
            SurfaceKind::Hirzebruch { e } => {
                let e = e as i64;
                let ([a1, b1], [a2, b2]) = (l1.c, l2.c);
                -e * a1 * a2 + a1 * b2 + a2 * b1
            }
        }
    }

    pub fn self_intersection(&self, l: &DivisorClass) -> Result<i64> {
        self.intersect(l, l)
    }

    pub fn canonical_class(&self) -> DivisorClass {
        match self.kind {
            SurfaceKind::ProjectivePlane => DivisorClass::plane(-3),
            SurfaceKind::Hirzebruch { e } => DivisorClass::hirzebruch(-2, -(e as i64 + 2)),
        }
    }

    /// `K.L`
    pub fn canonical_degree(&self, l: &DivisorClass) -> Result<i64> {
        self.intersect(&self.canonical_class(), l)
    }

    /// Riemann-Roch: `chi(L) = 1 + (L^2 - K.L) / 2`.
    pub fn euler_characteristic(&self, l: &DivisorClass) -> Result<i64> {
        let sq = self.self_intersection(l)?;
        let kl = self.pair(&self.canonical_class(), l);
        Ok(1 + (sq - kl) / 2)
    }

    /// Adjunction: `g_L = 1 + (L^2 + K.L) / 2`.
    pub fn arithmetic_genus(&self, l: &DivisorClass) -> Result<i64> {
        let sq = self.self_intersection(l)?;
        let kl = self.pair(&self.canonical_class(), l);
        Ok(1 + (sq + kl) / 2)
    }

    /// The effective cone is the non-negative orthant on both models.
    pub fn is_effective(&self, l: &DivisorClass) -> Result<bool> {
        self.check(l)?;
        Ok(l.coords().iter().all(|&x| x >= 0))
    }

    /// `L <= 0`, i.e. `-L` is effective (the trivial class included).
    pub fn is_nonpositive(&self, l: &DivisorClass) -> Result<bool> {
        self.is_effective(&-*l)
    }

    fn require_effective_nonzero(&self, l: &DivisorClass) -> Result<()> {
        if !self.is_effective(l)? {
            return Err(Error::NotEffective(*l));
        }
        if l.is_zero() {
            return Err(Error::ZeroClass);
        }
        Ok(())
    }

    /// `L = n L'` with `n` the gcd of the coordinates.
    pub fn primitive_part(&self, l: &DivisorClass) -> Result<(i64, DivisorClass)> {
        self.check(l)?;
        if l.is_zero() {
            return Err(Error::ZeroClass);
        }
        let n = l.coords().iter().fold(0, |g, &x| gcd(g, x));
        Ok((n, l.div_exact(n).expect("gcd divides every coordinate")))
    }

    pub fn is_primitive(&self, l: &DivisorClass) -> Result<bool> {
        Ok(self.primitive_part(l)?.0 == 1)
    }

    /// Whether `|L|` contains an integral curve.
    ///
    /// Plane: every `d >= 1`. `F_e`: the fiber `(0,1)`, every `(1,b)` with
    /// `b >= 0`, and `a >= 2` with `b >= max(ae, 1)`.
    pub fn has_integral_member(&self, l: &DivisorClass) -> Result<bool> {
        self.require_effective_nonzero(l)?;
        Ok(match self.kind {
            SurfaceKind::ProjectivePlane => true,
            SurfaceKind::Hirzebruch { e } => {
                let ([a, b], e) = (l.c, e as i64);
                match a {
                    0 => b == 1,
                    1 => true,
                    _ => b >= (a * e).max(1),
                }
            }
        })
    }

    /// All `L'` with `0 < L' <= L`, in increasing lexicographic order.
    pub fn sub_effective_classes(&self, l: &DivisorClass) -> Result<Vec<DivisorClass>> {
        if !self.is_effective(l)? {
            return Err(Error::NotEffective(*l));
        }
        let out = match self.kind {
            SurfaceKind::ProjectivePlane => (1..=l.c[0]).map(DivisorClass::plane).collect(),
            SurfaceKind::Hirzebruch { .. } => {
                let [a, b] = l.c;
                (0..=a)
                    .flat_map(|x| (0..=b).map(move |y| DivisorClass::hirzebruch(x, y)))
                    .filter(|c| !c.is_zero())
                    .collect()
            }
        };
        Ok(out)
    }

    /// `K.L' < 0` for every `0 < L' <= L`.
    pub fn is_kx_negative(&self, l: &DivisorClass) -> Result<bool> {
        self.require_effective_nonzero(l)?;
        let k = self.canonical_class();
        Ok(self
            .sub_effective_classes(l)?
            .iter()
            .all(|sub| self.pair(&k, sub) < 0))
    }

    /// Generator of the subgroup `{ L.M : M in Pic(X) }` of `Z`, i.e. the gcd
    /// of the pairings of `L` with a basis. Plane: `d`; `F_e`: `gcd(a, b - ae)`.
    pub fn pairing_modulus(&self, l: &DivisorClass) -> Result<i64> {
        self.check(l)?;
        Ok(self
            .basis()
            .iter()
            .fold(0, |g, b| gcd(g, self.pair(l, b))))
    }
}

impl FromStr for Surface {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "p2" => Ok(Surface::projective_plane()),
            other => match other.strip_prefix('f').map(str::parse::<u32>) {
                Some(Ok(e)) => Surface::hirzebruch(e),
                _ => Err(Error::Precondition(format!(
                    "unknown surface {s:?} (expected p2, f0 or f1)"
                ))),
            },
        }
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

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
    fn intersection_numbers() {
        assert_eq!(p2().intersect(&d(2), &d(3)).unwrap(), 6);
        assert_eq!(f(1).intersect(&h(1, 0), &h(1, 0)).unwrap(), -1);
        assert_eq!(f(0).intersect(&h(1, 2), &h(3, 1)).unwrap(), 7);
        assert_eq!(f(1).intersect(&h(1, 0), &h(0, 1)).unwrap(), 1);
        assert_eq!(f(1).intersect(&h(0, 1), &h(0, 1)).unwrap(), 0);
    }

    #[test]
    fn rank_mismatch_is_an_error() {
        let err = p2().intersect(&d(1), &h(1, 1)).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { expected: 1, found: 2, .. }));
        assert!(f(0).is_effective(&d(2)).is_err());
    }

    #[test]
    fn unsupported_hirzebruch() {
        assert_eq!(Surface::hirzebruch(2), Err(Error::UnsupportedSurface(2)));
        assert!("f3".parse::<Surface>().is_err());
        assert!("q".parse::<Surface>().is_err());
        assert_eq!("F1".parse::<Surface>().unwrap(), f(1));
    }

    #[test]
    fn canonical_classes() {
        assert_eq!(p2().canonical_class(), d(-3));
        assert_eq!(p2().canonical_degree(&d(7)).unwrap(), -21);
        assert_eq!(f(1).canonical_class(), h(-2, -3));
        assert_eq!(f(0).canonical_class(), h(-2, -2));
        for s in [f(0), f(1)] {
            assert_eq!(s.canonical_degree(&h(0, 1)).unwrap(), -2);
            // sigma and f are smooth rational curves
            assert_eq!(s.arithmetic_genus(&h(1, 0)).unwrap(), 0);
            assert_eq!(s.arithmetic_genus(&h(0, 1)).unwrap(), 0);
        }
        assert_eq!(f(1).canonical_degree(&h(1, 0)).unwrap(), -1);
        assert_eq!(p2().arithmetic_genus(&d(1)).unwrap(), 0);
    }

    #[test]
    fn riemann_roch_and_genus() {
        assert_eq!(p2().euler_characteristic(&d(0)).unwrap(), 1);
        // degree-2 monomials in three variables
        assert_eq!(p2().euler_characteristic(&d(2)).unwrap(), 6);
        assert_eq!(f(1).euler_characteristic(&h(1, 1)).unwrap(), 3);
        for deg in 1..15 {
            assert_eq!(
                p2().arithmetic_genus(&d(deg)).unwrap(),
                (deg - 1) * (deg - 2) / 2
            );
            assert_eq!(
                p2().euler_characteristic(&d(deg)).unwrap(),
                (deg + 1) * (deg + 2) / 2
            );
        }
        assert_eq!(p2().arithmetic_genus(&d(3)).unwrap(), 1);
        assert_eq!(f(0).arithmetic_genus(&h(0, 1)).unwrap(), 0);
    }

    #[test]
    fn effectivity() {
        assert!(!p2().is_effective(&d(-1)).unwrap());
        assert!(f(1).is_effective(&h(2, 0)).unwrap());
        assert!(f(0).is_effective(&h(0, 1)).unwrap());
        assert!(!f(0).is_effective(&h(1, -1)).unwrap());
        assert!(p2().is_nonpositive(&d(0)).unwrap());
        assert!(p2().is_nonpositive(&d(-1)).unwrap());
        assert!(!f(0).is_nonpositive(&h(-1, 3)).unwrap());
    }

    #[test]
    fn primitivity() {
        assert_eq!(p2().primitive_part(&d(6)).unwrap(), (6, d(1)));
        assert_eq!(f(0).primitive_part(&h(2, 4)).unwrap(), (2, h(1, 2)));
        assert!(f(1).is_primitive(&h(2, 5)).unwrap());
        assert_eq!(f(0).primitive_part(&h(0, 3)).unwrap(), (3, h(0, 1)));
        assert_eq!(p2().primitive_part(&d(0)), Err(Error::ZeroClass));
    }

    #[test]
    fn integral_members() {
        assert!(p2().has_integral_member(&d(5)).unwrap());
        assert!(f(1).has_integral_member(&h(2, 3)).unwrap());
        assert!(!f(1).has_integral_member(&h(0, 2)).unwrap());
        assert!(f(1).has_integral_member(&h(1, 0)).unwrap());
        assert!(f(0).has_integral_member(&h(0, 1)).unwrap());
        assert!(!f(0).has_integral_member(&h(2, 0)).unwrap());
        assert!(!f(1).has_integral_member(&h(2, 1)).unwrap());
        assert!(f(0).has_integral_member(&h(2, 1)).unwrap());
        // p (sigma + c f), c > e
        for p in [2, 3, 5, 7] {
            for e in 0..=1 {
                assert!(f(e as u32).has_integral_member(&h(p, p * (e + 1))).unwrap());
            }
        }
        assert_eq!(p2().has_integral_member(&d(-1)), Err(Error::NotEffective(d(-1))));
        assert_eq!(f(0).has_integral_member(&h(0, 0)), Err(Error::ZeroClass));
    }

    #[test]
    fn sub_effective_enumeration() {
        assert_eq!(p2().sub_effective_classes(&d(3)).unwrap(), vec![d(1), d(2), d(3)]);
        assert_eq!(
            f(0).sub_effective_classes(&h(1, 1)).unwrap(),
            vec![h(0, 1), h(1, 0), h(1, 1)]
        );
        assert_eq!(
            f(1).sub_effective_classes(&h(2, 1)).unwrap(),
            vec![h(0, 1), h(1, 0), h(1, 1), h(2, 0), h(2, 1)]
        );
        assert!(f(1).sub_effective_classes(&h(-1, 1)).is_err());
    }

    #[test]
    fn kx_negativity() {
        for deg in 1..10 {
            assert!(p2().is_kx_negative(&d(deg)).unwrap());
        }
        assert!(f(1).is_kx_negative(&h(1, 0)).unwrap());
        assert!(f(0).is_kx_negative(&h(3, 2)).unwrap());
    }

    #[test]
    fn pairing_modulus() {
        assert_eq!(p2().pairing_modulus(&d(8)).unwrap(), 8);
        assert_eq!(f(1).pairing_modulus(&h(2, 4)).unwrap(), 2);
        assert_eq!(f(1).pairing_modulus(&h(3, 6)).unwrap(), 3);
        assert_eq!(f(0).pairing_modulus(&h(2, 5)).unwrap(), 1);
    }

    #[test]
    fn parsing() {
        assert_eq!(f(1).parse_class("2, 3").unwrap(), h(2, 3));
        assert_eq!(p2().parse_class("-4").unwrap(), d(-4));
        assert!(p2().parse_class("1,2").is_err());
        assert!("1,2,3".parse::<DivisorClass>().is_err());
        assert!("x".parse::<DivisorClass>().is_err());
    }

    /// Brute-force integrality oracle on `F_e`: an effective class carries an
    /// integral curve iff it is one of the irreducible generators, or it is
    /// nef and either big or a primitive class of square zero.
    fn integral_oracle(e: i64, a: i64, b: i64) -> bool {
        let s = f(e as u32);
        let l = h(a, b);
        if l == h(1, 0) || l == h(0, 1) {
            return true;
        }
        let nef = s.pair(&l, &h(1, 0)) >= 0 && s.pair(&l, &h(0, 1)) >= 0;
        let sq = s.pair(&l, &l);
        nef && (sq > 0 || (sq == 0 && s.is_primitive(&l).unwrap()))
    }

    #[test]
    fn integral_criterion_matches_oracle() {
        for e in 0..=1 {
            for a in 0..12 {
                for b in 0..12 {
                    if a == 0 && b == 0 {
                        continue;
                    }
                    assert_eq!(
                        f(e as u32).has_integral_member(&h(a, b)).unwrap(),
                        integral_oracle(e, a, b),
                        "F_{e} ({a},{b})"
                    );
                }
            }
        }
    }

    fn any_surface() -> impl Strategy<Value = Surface> {
        prop_oneof![Just(p2()), Just(f(0)), Just(f(1))]
    }

    fn class_on(s: Surface, lo: i64, hi: i64) -> BoxedStrategy<DivisorClass> {
        if s.is_plane() {
            (lo..hi).prop_map(d).boxed()
        } else {
            (lo..hi, lo..hi).prop_map(|(a, b)| h(a, b)).boxed()
        }
    }

    proptest! {
        #[test]
        fn bilinear_and_symmetric(
            (s, l1, l2, l3) in any_surface().prop_flat_map(|s| {
                (Just(s), class_on(s, -20, 20), class_on(s, -20, 20), class_on(s, -20, 20))
            })
        ) {
            let lhs = s.intersect(&(l1 + l2), &l3).unwrap();
            let rhs = s.intersect(&l1, &l3).unwrap() + s.intersect(&l2, &l3).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(s.intersect(&l1, &l2).unwrap(), s.intersect(&l2, &l1).unwrap());
        }

        #[test]
        fn parity_and_serre_symmetry(
            (s, l) in any_surface().prop_flat_map(|s| (Just(s), class_on(s, -30, 30)))
        ) {
            let sq = s.self_intersection(&l).unwrap();
            let kl = s.canonical_degree(&l).unwrap();
            prop_assert_eq!((sq + kl).rem_euclid(2), 0);
            let k = s.canonical_class();
            prop_assert_eq!(
                s.euler_characteristic(&l).unwrap(),
                s.euler_characteristic(&(k - l)).unwrap()
            );
        }

        #[test]
        fn sub_classes_closed_under_complement(
            (s, l) in any_surface().prop_flat_map(|s| (Just(s), class_on(s, 0, 7)))
        ) {
            prop_assume!(!l.is_zero());
            let subs = s.sub_effective_classes(&l).unwrap();
            for sub in subs.iter().filter(|c| **c != l) {
                prop_assert!(subs.contains(&(l - *sub)));
            }
            prop_assert!(subs.windows(2).all(|w| w[0] < w[1]));
            // every supported surface is checked to be K-negative on effective classes
            prop_assert!(s.is_kx_negative(&l).unwrap());
        }
    }
}
