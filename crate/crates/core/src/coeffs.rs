//! Taylor coefficients of each function class in terms of the coefficients
//! `p_1..p_4` of the associated Carathéodory function.
//!
//! | class              | Carathéodory function                 |
//! |--------------------|---------------------------------------|
//! | starlike `S*(α)`   | `(zf'/f − α) / (1 − α)`               |
//! | convex `K(α)`      | `(1 + zh''/h' − α) / (1 − α)`         |
//! | bounded turning    | `(g' − α) / (1 − α)`                  |
//! | harmonic `M(α)`    | analytic part as in `K(α)`, `g' = zh'`|
//!
//! The series maps are generic over [`Ring`] so the identity ledger can run
//! them on polynomials; the typed wrappers below validate `α` and work on
//! complex numbers.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::caratheodory::CaratheodoryCoeffs;
use crate::error::{Error, Result};
use crate::ring::Ring;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassKind {
    Starlike,
    Convex,
    BoundedTurning,
    HarmonicM,
}

impl ClassKind {
    pub const ALL: [ClassKind; 4] = [
        ClassKind::Starlike,
        ClassKind::Convex,
        ClassKind::BoundedTurning,
        ClassKind::HarmonicM,
    ];

    /// Smallest admissible order.
    pub fn alpha_min(self) -> BigRational {
        match self {
            ClassKind::Starlike | ClassKind::BoundedTurning => BigRational::zero(),
            ClassKind::Convex | ClassKind::HarmonicM => {
                BigRational::new((-1).into(), 2.into())
            }
        }
    }

    pub fn alpha_range(self) -> &'static str {
        match self {
            ClassKind::Starlike | ClassKind::BoundedTurning => "[0, 1)",
            ClassKind::Convex | ClassKind::HarmonicM => "[-1/2, 1)",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ClassKind::Starlike => "starlike",
            ClassKind::Convex => "convex",
            ClassKind::BoundedTurning => "bounded-turning",
            ClassKind::HarmonicM => "harmonic-m",
        }
    }

    fn check_f64(self, alpha: f64) -> Result<()> {
        let lo = self.alpha_min().to_f64().expect("small rational");
        if alpha.is_finite() && alpha >= lo && alpha < 1.0 {
            Ok(())
        } else {
            Err(self.out_of_range(alpha))
        }
    }

    fn out_of_range(self, alpha: f64) -> Error {
        Error::AlphaOutOfRange {
            class: self.name(),
            alpha,
            range: self.alpha_range(),
        }
    }
}

impl fmt::Display for ClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "s" | "starlike" => Ok(ClassKind::Starlike),
            "k" | "convex" => Ok(ClassKind::Convex),
            "r" | "bounded-turning" => Ok(ClassKind::BoundedTurning),
            "m" | "harmonic-m" => Ok(ClassKind::HarmonicM),
            other => Err(Error::InvalidConfig(format!("unknown class `{other}`"))),
        }
    }
}

/// A function class together with its order `α`, held exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassSpec {
    kind: ClassKind,
    alpha: BigRational,
    alpha_f64: f64,
}

impl ClassSpec {
    pub fn new(kind: ClassKind, alpha: BigRational) -> Result<Self> {
        let alpha_f64 = alpha.to_f64().unwrap_or(f64::NAN);
        if alpha < kind.alpha_min() || alpha >= BigRational::one() {
            return Err(kind.out_of_range(alpha_f64));
        }
        Ok(Self {
            kind,
            alpha,
            alpha_f64,
        })
    }

    /// Uses the shortest decimal that round-trips to `alpha`, so `0.1`
    /// becomes exactly `1/10`.
    pub fn from_f64(kind: ClassKind, alpha: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(kind.out_of_range(alpha));
        }
        Self::new(kind, parse_rational(&alpha.to_string())?)
    }

    pub fn kind(&self) -> ClassKind {
        self.kind
    }

    pub fn alpha(&self) -> &BigRational {
        &self.alpha
    }

    pub fn alpha_f64(&self) -> f64 {
        self.alpha_f64
    }
}

impl fmt::Display for ClassSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(alpha={})", self.kind, self.alpha)
    }
}

impl Serialize for ClassSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ClassSpec", 3)?;
        st.serialize_field("kind", &self.kind)?;
        st.serialize_field("alpha", &self.alpha.to_string())?;
        st.serialize_field("alpha_f64", &self.alpha_f64)?;
        st.end()
    }
}

/// Parses `"3"`, `"-1/2"`, `"0.25"`, `"-.5"` or `"1e-3"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidConfig(format!("`{s}` is not a number"));
    let t = s.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n: num_bigint::BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: num_bigint::BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all: num_bigint::BigInt = format!("0{int_part}{frac_part}").parse().map_err(|_| bad())?;
    let scale = exp - frac_part.len() as i32;
    let ten = num_bigint::BigInt::from(10);
    let mut r = BigRational::from_integer(all);
    if scale >= 0 {
        r *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -r } else { r })
}

/// Formats a rational as `num/den` (or `num` when integral).
pub fn rational_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

// ---------------------------------------------------------------------------
// Generic series maps

/// `a_2..a_5` of `f ∈ S*(α)`.
pub fn starlike_series<T: Ring>(alpha: &T, p: &[T; 4]) -> [T; 4] {
    let [p1, p2, p3, p4] = p.clone();
    let b = alpha.one_like() - alpha.clone();
    let a2 = b.clone() * p1.clone();
    let a3 = (b.clone() * (b.clone() * p1.pow(2) + p2.clone())).scaled(1, 2);
    let a4 = (b.clone()
        * (b.pow(2) * p1.pow(3) + (b.clone() * p1.clone() * p2.clone()).scaled(3, 1) + p3.scaled(2, 1)))
    .scaled(1, 6);
    let a5 = (b.clone()
        * (b.pow(3) * p1.pow(4)
            + (b.pow(2) * p1.pow(2) * p2.clone()).scaled(6, 1)
            + (b.clone() * p1 * p3).scaled(8, 1)
            + (b * p2.pow(2)).scaled(3, 1)
            + p4.scaled(6, 1)))
    .scaled(1, 24);
    [a2, a3, a4, a5]
}

/// `a_2..a_5` of `h ∈ K(α)`: `zh'` is starlike of order `α`, so the
/// coefficients are the starlike ones divided by their index.
pub fn convex_series<T: Ring>(alpha: &T, p: &[T; 4]) -> [T; 4] {
    let [a2, a3, a4, a5] = starlike_series(alpha, p);
    [a2.scaled(1, 2), a3.scaled(1, 3), a4.scaled(1, 4), a5.scaled(1, 5)]
}

/// `c_2..c_{m+1}` of `g ∈ R(α)` from `p_1..p_m`: `(k+1) c_{k+1} = (1−α) p_k`.
pub fn bounded_turning_series<T: Ring>(alpha: &T, p: &[T]) -> Vec<T> {
    let b = alpha.one_like() - alpha.clone();
    p.iter()
        .enumerate()
        .map(|(i, pk)| (b.clone() * pk.clone()).scaled(1, i as i64 + 2))
        .collect()
}

/// `b_1..b_5` of the co-analytic part from `a_1..a_5` of the analytic part,
/// via `g' = z h'`: `b_1 = 0`, `(k+1) b_{k+1} = k a_k`.
pub fn harmonic_g_series<T: Ring>(h: &[T; 5]) -> [T; 5] {
    [
        h[0].zero_like(),
        h[0].scaled(1, 2),
        h[1].scaled(2, 3),
        h[2].scaled(3, 4),
        h[3].scaled(4, 5),
    ]
}

/// Prepends `a_1 = 1`.
pub fn with_leading_one<T: Ring>(tail: [T; 4]) -> [T; 5] {
    let [a2, a3, a4, a5] = tail;
    [a2.one_like(), a2, a3, a4, a5]
}

// ---------------------------------------------------------------------------
// Typed wrappers

/// `a_1 = 1, a_2, …`; index 0 holds `a_1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoeffVector {
    a: Vec<Complex64>,
}

impl CoeffVector {
    /// Builds from `a_2, a_3, …`; `a_1 = 1` is prepended.
    pub fn from_tail<I: IntoIterator<Item = Complex64>>(tail: I) -> Self {
        let a = std::iter::once(Complex64::new(1.0, 0.0)).chain(tail).collect();
        Self { a }
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.a
    }

    /// Highest order available.
    pub fn order(&self) -> usize {
        self.a.len()
    }

    /// `a_k`, one-based.
    pub fn get(&self, k: usize) -> Result<Complex64> {
        if k == 0 || k > self.a.len() {
            return Err(Error::InsufficientCoefficients {
                needed: k,
                available: self.a.len(),
            });
        }
        Ok(self.a[k - 1])
    }

    /// Coefficients of `e^{−iθ} f(e^{iθ} z)`: `a_k ↦ e^{i(k−1)θ} a_k`.
    pub fn rotated(&self, theta: f64) -> Self {
        Self {
            a: self
                .a
                .iter()
                .enumerate()
                .map(|(i, &ak)| ak * Complex64::from_polar(1.0, theta * i as f64))
                .collect(),
        }
    }
}

/// Coefficients of `f = h + conj(g)` in `M(α)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HarmonicCoeffVector {
    pub h: CoeffVector,
    /// `b_1..b_5`, index 0 holds `b_1 = 0`.
    pub g: Vec<Complex64>,
}

fn alpha_c(alpha: f64) -> Complex64 {
    Complex64::new(alpha, 0.0)
}

pub fn starlike_coeffs(alpha: f64, p: &CaratheodoryCoeffs) -> Result<CoeffVector> {
    ClassKind::Starlike.check_f64(alpha)?;
    Ok(CoeffVector::from_tail(starlike_series(&alpha_c(alpha), &p.first_four()?)))
}

pub fn convex_coeffs(alpha: f64, p: &CaratheodoryCoeffs) -> Result<CoeffVector> {
    ClassKind::Convex.check_f64(alpha)?;
    Ok(CoeffVector::from_tail(convex_series(&alpha_c(alpha), &p.first_four()?)))
}

pub fn bounded_turning_coeffs(alpha: f64, p: &CaratheodoryCoeffs) -> Result<CoeffVector> {
    bounded_turning_coeffs_to(alpha, p, 5)
}

/// `c_1..c_order`; needs `p_1..p_{order−1}`.
pub fn bounded_turning_coeffs_to(
    alpha: f64,
    p: &CaratheodoryCoeffs,
    order: usize,
) -> Result<CoeffVector> {
    ClassKind::BoundedTurning.check_f64(alpha)?;
    let needed = order.saturating_sub(1).max(1);
    if p.len() < needed {
        return Err(Error::InsufficientCoefficients {
            needed,
            available: p.len(),
        });
    }
    Ok(CoeffVector::from_tail(bounded_turning_series(
        &alpha_c(alpha),
        &p.as_slice()[..order.saturating_sub(1)],
    )))
}

pub fn harmonic_m_coeffs(alpha: f64, p: &CaratheodoryCoeffs) -> Result<HarmonicCoeffVector> {
    ClassKind::HarmonicM.check_f64(alpha)?;
    let h = with_leading_one(convex_series(&alpha_c(alpha), &p.first_four()?));
    let g = harmonic_g_series(&h);
    Ok(HarmonicCoeffVector {
        h: CoeffVector { a: h.to_vec() },
        g: g.to_vec(),
    })
}

/// Coefficients of a class member, whichever class it is.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ClassCoeffs {
    Analytic(CoeffVector),
    Harmonic(HarmonicCoeffVector),
}

impl ClassCoeffs {
    /// The analytic coefficients (`h`-part for harmonic maps).
    pub fn analytic(&self) -> &CoeffVector {
        match self {
            ClassCoeffs::Analytic(a) => a,
            ClassCoeffs::Harmonic(hg) => &hg.h,
        }
    }
}

pub fn class_coeffs(class: &ClassSpec, p: &CaratheodoryCoeffs) -> Result<ClassCoeffs> {
    let alpha = class.alpha_f64();
    Ok(match class.kind() {
        ClassKind::Starlike => ClassCoeffs::Analytic(starlike_coeffs(alpha, p)?),
        ClassKind::Convex => ClassCoeffs::Analytic(convex_coeffs(alpha, p)?),
        ClassKind::BoundedTurning => ClassCoeffs::Analytic(bounded_turning_coeffs(alpha, p)?),
        ClassKind::HarmonicM => ClassCoeffs::Harmonic(harmonic_m_coeffs(alpha, p)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caratheodory::sample_measure;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn assert_coeffs(v: &[Complex64], want: &[f64]) {
        assert_eq!(v.len(), want.len());
        for (a, w) in v.iter().zip(want) {
            assert!((a - c(*w)).norm() <= 1e-14, "{v:?} vs {want:?}");
        }
    }

    fn koebe_p() -> CaratheodoryCoeffs {
        CaratheodoryCoeffs::from_real(&[2.0, 2.0, 2.0, 2.0])
    }

    /// Taylor coefficients of `z (1 − z)^{−s}`: `a_{k+1} = (s)_k / k!`.
    fn binomial_series(s: f64) -> Vec<f64> {
        let mut out = vec![1.0];
        let mut term = 1.0;
        for k in 1..5 {
            term *= (s + k as f64 - 1.0) / k as f64;
            out.push(term);
        }
        out
    }

    #[test]
    fn starlike_koebe_and_half_plane() {
        // extremal starlike function of order α is z (1 − z)^{−2(1−α)}
        assert_coeffs(starlike_coeffs(0.0, &koebe_p()).unwrap().as_slice(), &[1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_coeffs(starlike_coeffs(0.5, &koebe_p()).unwrap().as_slice(), &[1.0; 5]);
        for alpha in [0.1, 0.3, 0.8] {
            let got = starlike_coeffs(alpha, &koebe_p()).unwrap();
            assert_coeffs(got.as_slice(), &binomial_series(2.0 * (1.0 - alpha)));
        }
    }

    #[test]
    fn identity_map_from_zero_sequence() {
        let p = CaratheodoryCoeffs::zeros(4);
        let id = [1.0, 0.0, 0.0, 0.0, 0.0];
        assert_coeffs(starlike_coeffs(0.3, &p).unwrap().as_slice(), &id);
        assert_coeffs(convex_coeffs(-0.5, &p).unwrap().as_slice(), &id);
        assert_coeffs(bounded_turning_coeffs(0.7, &p).unwrap().as_slice(), &id);
    }

    #[test]
    fn convex_examples() {
        assert_coeffs(convex_coeffs(0.0, &koebe_p()).unwrap().as_slice(), &[1.0; 5]);
        let alpha = 0.3;
        let p1 = 1.25;
        let v = convex_coeffs(alpha, &CaratheodoryCoeffs::from_real(&[p1, 0.0, 0.0, 0.0])).unwrap();
        let b2 = (1.0 - alpha) * p1 / 2.0;
        let b3 = (1.0 - alpha) * (1.0 - alpha) * p1 * p1 / 6.0;
        assert!((v.get(2).unwrap() - c(b2)).norm() < 1e-15);
        assert!((v.get(3).unwrap() - c(b3)).norm() < 1e-15);
    }

    #[test]
    fn bounded_turning_examples() {
        assert_coeffs(
            bounded_turning_coeffs(0.0, &koebe_p()).unwrap().as_slice(),
            &[1.0, 1.0, 2.0 / 3.0, 0.5, 0.4],
        );
        assert_coeffs(
            bounded_turning_coeffs(0.5, &CaratheodoryCoeffs::from_real(&[2.0, 0.0, 0.0, 0.0]))
                .unwrap()
                .as_slice(),
            &[1.0, 0.5, 0.0, 0.0, 0.0],
        );
        let long = CaratheodoryCoeffs::from_real(&[2.0; 8]);
        let v = bounded_turning_coeffs_to(0.0, &long, 9).unwrap();
        assert_eq!(v.order(), 9);
        assert!((v.get(9).unwrap() - c(2.0 / 9.0)).norm() < 1e-15);
        assert!(bounded_turning_coeffs_to(0.0, &koebe_p(), 9).is_err());
    }

    #[test]
    fn harmonic_examples() {
        let v = harmonic_m_coeffs(0.0, &koebe_p()).unwrap();
        assert_coeffs(v.h.as_slice(), &[1.0; 5]);
        assert_coeffs(&v.g, &[0.0, 0.5, 2.0 / 3.0, 0.75, 0.8]);
        for seed in 0..20 {
            let p = sample_measure(seed, 3).coeffs(4);
            let alpha = -0.5 + 0.07 * seed as f64;
            let v = harmonic_m_coeffs(alpha, &p).unwrap();
            assert!((v.g[1] - c(0.5)).norm() < 1e-15);
            let b3 = (1.0 - alpha) * p.get(1).unwrap() / 3.0;
            assert!((v.g[2] - b3).norm() < 1e-14);
            for k in 1..=4 {
                let lhs = (k as f64 + 1.0) * v.g[k];
                let rhs = k as f64 * v.h.get(k).unwrap();
                assert!((lhs - rhs).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn alexander_relation_exact() {
        use num_traits::FromPrimitive;
        let q = |x: f64| BigRational::from_f64(x).unwrap();
        let alpha = q(0.375);
        let p = [q(1.5), q(-0.25), q(0.75), q(1.125)];
        let s = starlike_series(&alpha, &p);
        let k = convex_series(&alpha, &p);
        for (i, (sa, ka)) in s.iter().zip(&k).enumerate() {
            assert_eq!(ka * BigRational::from_integer((i as i64 + 2).into()), *sa);
        }
    }

    #[test]
    fn alpha_range_checks() {
        let p = koebe_p();
        assert!(matches!(starlike_coeffs(-0.1, &p), Err(Error::AlphaOutOfRange { .. })));
        assert!(starlike_coeffs(1.0, &p).is_err());
        assert!(convex_coeffs(-0.5, &p).is_ok());
        assert!(convex_coeffs(-0.51, &p).is_err());
        assert!(bounded_turning_coeffs(-0.5, &p).is_err());
        assert!(harmonic_m_coeffs(-0.5, &p).is_ok());
        assert!(harmonic_m_coeffs(f64::NAN, &p).is_err());
        assert!(matches!(
            starlike_coeffs(0.0, &CaratheodoryCoeffs::zeros(3)),
            Err(Error::InsufficientCoefficients { needed: 4, available: 3 })
        ));
    }

    #[test]
    fn class_spec_is_exact() {
        let s = ClassSpec::from_f64(ClassKind::Convex, 0.1).unwrap();
        assert_eq!(rational_string(s.alpha()), "1/10");
        let s = ClassSpec::new(ClassKind::HarmonicM, parse_rational("-1/2").unwrap()).unwrap();
        assert_eq!(s.alpha_f64(), -0.5);
        assert!(ClassSpec::from_f64(ClassKind::Starlike, -0.5).is_err());
        assert!(ClassSpec::from_f64(ClassKind::BoundedTurning, 1.0).is_err());
    }

    #[test]
    fn rational_parsing() {
        let r = |s: &str| rational_string(&parse_rational(s).unwrap());
        assert_eq!(r("0.25"), "1/4");
        assert_eq!(r("-.5"), "-1/2");
        assert_eq!(r("-1/2"), "-1/2");
        assert_eq!(r("3"), "3");
        assert_eq!(r("1e-3"), "1/1000");
        assert_eq!(r("2.5E1"), "25");
        assert_eq!(r("0.05"), "1/20");
        for bad in ["", "abc", "1/0", ".", "1.2.3", "--1"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn class_names_parse() {
        for (s, k) in [
            ("s", ClassKind::Starlike),
            ("K", ClassKind::Convex),
            ("r", ClassKind::BoundedTurning),
            ("harmonic-m", ClassKind::HarmonicM),
        ] {
            assert_eq!(s.parse::<ClassKind>().unwrap(), k);
        }
        assert!("q".parse::<ClassKind>().is_err());
    }
}
