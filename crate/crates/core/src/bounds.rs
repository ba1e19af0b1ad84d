//! Closed-form upper bounds for `|H_{3,1}|` and `|J_n|` on each class,
//! literature constants for comparison, and the cubic maximisation behind
//! the co-analytic bound of `M(α)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::coeffs::{
    convex_series, parse_rational, rational_string, with_leading_one, ClassKind, ClassSpec,
};
use crate::error::{Error, Result};
use crate::functionals::zalcman_value;

/// Functionals with a closed-form bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Functional {
    /// `H_{3,1}` of the analytic function (the `h`-part for `M(α)`).
    H31,
    /// `H_{3,1}(h)` of a harmonic map `h + conj(g)`.
    H31HPart,
    /// `H_{3,1}(g)` of a harmonic map `h + conj(g)`.
    H31GPart,
    /// Zalcman functional `J_n = a_n² − a_{2n−1}`.
    Zalcman(usize),
}

impl Functional {
    pub const J2: Functional = Functional::Zalcman(2);
    pub const J3: Functional = Functional::Zalcman(3);

    /// Number of Carathéodory coefficients needed to evaluate it.
    pub fn required_p(self) -> usize {
        match self {
            Functional::Zalcman(n) if n > 3 => 2 * n - 2,
            _ => 4,
        }
    }
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Functional::H31 => f.write_str("h31"),
            Functional::H31HPart => f.write_str("h31-h"),
            Functional::H31GPart => f.write_str("h31-g"),
            Functional::Zalcman(2) => f.write_str("j2"),
            Functional::Zalcman(3) => f.write_str("j3"),
            Functional::Zalcman(n) => write!(f, "jn:{n}"),
        }
    }
}

impl FromStr for Functional {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidConfig(format!("unknown functional `{s}`"));
        match s.to_ascii_lowercase().as_str() {
            "h31" => Ok(Functional::H31),
            "h31-h" => Ok(Functional::H31HPart),
            "h31-g" => Ok(Functional::H31GPart),
            "j2" => Ok(Functional::J2),
            "j3" => Ok(Functional::J3),
            other => {
                let n: usize = other
                    .strip_prefix("jn:")
                    .ok_or_else(bad)?
                    .parse()
                    .map_err(|_| bad())?;
                if n < 2 {
                    return Err(bad());
                }
                Ok(Functional::Zalcman(n))
            }
        }
    }
}

impl Serialize for Functional {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A bound value, exact whenever the formula is rational in `α`.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundValue {
    Exact(BigRational),
    Real(f64),
}

impl BoundValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            BoundValue::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            BoundValue::Real(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            BoundValue::Exact(r) => Some(r),
            BoundValue::Real(_) => None,
        }
    }

    /// `"num/den"` for exact values, empty for irrational ones.
    pub fn exact_string(&self) -> String {
        self.exact().map(rational_string).unwrap_or_default()
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Exact(r) => f.write_str(&rational_string(r)),
            BoundValue::Real(x) => write!(f, "{x:.17e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundResult {
    pub class: ClassSpec,
    pub functional: Functional,
    #[serde(serialize_with = "serialize_value")]
    pub value: BoundValue,
    pub source: &'static str,
}

fn serialize_value<S: Serializer>(v: &BoundValue, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("BoundValue", 2)?;
    st.serialize_field("exact", &v.exact().map(rational_string))?;
    st.serialize_field("decimal", &v.to_f64())?;
    st.end()
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn int(n: i64) -> BigRational {
    q(n, 1)
}

const SRC_STARLIKE: &str = "starlike order-alpha bound";
const SRC_CONVEX: &str = "convex order-alpha bound";
const SRC_BOUNDED: &str = "bounded-turning order-alpha bound";
const SRC_HARMONIC_H: &str = "harmonic M(alpha) analytic-part bound";
const SRC_HARMONIC_G: &str = "harmonic M(alpha) co-analytic-part bound";
const SRC_ZALCMAN: &str = "Zalcman functional bound";

fn starlike_h31(a: &BigRational) -> BigRational {
    let b = BigRational::one() - a;
    &b * &b * (int(18) - a) / int(18)
}

fn convex_h31(a: &BigRational) -> BigRational {
    let b = BigRational::one() - a;
    &b * &b * (int(49) - int(16) * a) / int(540)
}

fn bounded_turning_h31(a: &BigRational) -> BigRational {
    let b = BigRational::one() - a;
    let kink = (BigRational::one() - int(4) * a).abs();
    &b * &b * (int(36) - int(20) * a + int(5) * kink) / int(60)
}

fn harmonic_h_h31(a: &BigRational) -> BigRational {
    let b = BigRational::one() - a;
    &b * &b * (int(15) * a * a - int(34) * a + int(52)) / int(540)
}

fn harmonic_g_h31(a: &BigRational) -> BigRational {
    (BigRational::one() - a) / int(30)
}

/// Weaker co-analytic bound `(1−α)(5−2α)/90` obtained from the
/// unsubstituted expansion; kept for comparison with [`bound_h31`].
pub fn harmonic_g_alternative_bound(alpha: &BigRational) -> BigRational {
    (BigRational::one() - alpha) * (int(5) - int(2) * alpha) / int(90)
}

fn result(class: &ClassSpec, functional: Functional, value: BigRational, source: &'static str) -> BoundResult {
    BoundResult {
        class: class.clone(),
        functional,
        value: BoundValue::Exact(value),
        source,
    }
}

/// Upper bound(s) for `|H_{3,1}|`. For `M(α)` both the analytic-part and
/// the co-analytic-part bound are returned, in that order.
///
/// For `K(α)` with `α < 0` the analytic-part bound of `M(α)` is used: the
/// analytic part of `M(α)` satisfies the same defining inequality, and the
/// dedicated convex bound is only established for `α ≥ 0`.
pub fn bound_h31(class: &ClassSpec) -> Vec<BoundResult> {
    let a = class.alpha();
    match class.kind() {
        ClassKind::Starlike => vec![result(class, Functional::H31, starlike_h31(a), SRC_STARLIKE)],
        ClassKind::Convex if a.is_negative() => {
            vec![result(class, Functional::H31, harmonic_h_h31(a), SRC_HARMONIC_H)]
        }
        ClassKind::Convex => vec![result(class, Functional::H31, convex_h31(a), SRC_CONVEX)],
        ClassKind::BoundedTurning => {
            vec![result(class, Functional::H31, bounded_turning_h31(a), SRC_BOUNDED)]
        }
        ClassKind::HarmonicM => vec![
            result(class, Functional::H31HPart, harmonic_h_h31(a), SRC_HARMONIC_H),
            result(class, Functional::H31GPart, harmonic_g_h31(a), SRC_HARMONIC_G),
        ],
    }
}

/// Upper bound for `|J_n|`.
///
/// The convex `n = 3` value is the published one. It is not a valid bound
/// near either end of the α range: the extremal function `p ≡ 2` exceeds it
/// for `α < −0.3934` and for `α > 0.5829` (see [`convex_j3_extremal`]), and
/// searches exceed it for `α ≤ −1/4`.
pub fn bound_zalcman(class: &ClassSpec, n: usize) -> Result<BoundResult> {
    let a = class.alpha();
    let b = BigRational::one() - a;
    let value = match (class.kind(), n) {
        (ClassKind::Starlike, 2) => b,
        (ClassKind::Starlike, 3) => b * (int(8) - int(7) * a) / int(2),
        (ClassKind::Convex, 2) => b / int(3),
        (ClassKind::Convex, 3) => b * (int(127) - int(109) * a) / int(360),
        (ClassKind::BoundedTurning, n) if n >= 2 => int(2) * b / int(2 * n as i64 - 1),
        _ => {
            return Err(Error::UnsupportedFunctional {
                class: class.to_string(),
                functional: Functional::Zalcman(n).to_string(),
            })
        }
    };
    Ok(result(class, Functional::Zalcman(n), value, SRC_ZALCMAN))
}

/// Bound for any supported `(class, functional)` pair.
pub fn bound(class: &ClassSpec, functional: Functional) -> Result<BoundResult> {
    let unsupported = || Error::UnsupportedFunctional {
        class: class.to_string(),
        functional: functional.to_string(),
    };
    match functional {
        Functional::Zalcman(n) => bound_zalcman(class, n),
        Functional::H31 => bound_h31(class).into_iter().next().ok_or_else(unsupported),
        Functional::H31HPart | Functional::H31GPart => bound_h31(class)
            .into_iter()
            .find(|b| b.functional == functional)
            .ok_or_else(unsupported),
    }
}

/// `|J_3|` of the convex extremal function (all `p_n = 2`), exactly.
pub fn convex_j3_extremal(alpha: &BigRational) -> BigRational {
    let two = int(2);
    let a = with_leading_one(convex_series(alpha, &[two.clone(), two.clone(), two.clone(), two]));
    zalcman_value(3, &a).expect("five coefficients").abs()
}

/// Earlier published bounds kept as comparison constants.
#[derive(Debug, Clone, PartialEq)]
pub enum Reference {
    /// Babalola (2010): `S*`, `K`, `R` at order zero.
    Babalola2010,
    /// Zaprawa (2017): `S*`, `K`, `R` at order zero.
    Zaprawa2017,
    /// Bansal, Maharana and Prajapat (2015): `K(−1/2)` and `R`.
    Bansal2015,
    /// Vamshee Krishna, Venkateswarlu and RamReddy (2015): `R(α)`, `0 ≤ α ≤ 1/4`.
    VamsheeKrishna2015(BigRational),
}

impl Reference {
    pub fn label(&self) -> &'static str {
        match self {
            Reference::Babalola2010 => "Babalola 2010",
            Reference::Zaprawa2017 => "Zaprawa 2017",
            Reference::Bansal2015 => "Bansal et al. 2015",
            Reference::VamsheeKrishna2015(_) => "Vamshee Krishna et al. 2015",
        }
    }
}

pub fn reference_bounds(reference: &Reference) -> Result<Vec<BoundResult>> {
    let label = reference.label();
    let spec = |kind, alpha: BigRational| ClassSpec::new(kind, alpha).expect("valid literature class");
    let zero = BigRational::zero;
    let real = |class: ClassSpec, v: f64| BoundResult {
        class,
        functional: Functional::H31,
        value: BoundValue::Real(v),
        source: label,
    };
    let exact = |class: ClassSpec, v: BigRational| BoundResult {
        class,
        functional: Functional::H31,
        value: BoundValue::Exact(v),
        source: label,
    };
    let s3 = 3f64.sqrt();
    Ok(match reference {
        Reference::Babalola2010 => vec![
            exact(spec(ClassKind::Starlike, zero()), int(16)),
            real(spec(ClassKind::Convex, zero()), (32.0 + 33.0 * s3) / (72.0 * s3)),
            real(
                spec(ClassKind::BoundedTurning, zero()),
                (2736.0 * s3 + 675.0 * 5f64.sqrt()) / (4860.0 * s3),
            ),
        ],
        Reference::Zaprawa2017 => vec![
            exact(spec(ClassKind::Starlike, zero()), int(1)),
            exact(spec(ClassKind::Convex, zero()), q(49, 540)),
            exact(spec(ClassKind::BoundedTurning, zero()), q(41, 60)),
        ],
        Reference::Bansal2015 => {
            let s15 = 15f64.sqrt();
            vec![
                real(spec(ClassKind::Convex, q(-1, 2)), (180.0 + 69.0 * s15) / (32.0 * s15)),
                exact(spec(ClassKind::BoundedTurning, zero()), q(439, 540)),
            ]
        }
        Reference::VamsheeKrishna2015(alpha) => {
            if alpha.is_negative() || *alpha > q(1, 4) {
                return Err(Error::AlphaOutOfRange {
                    class: ClassKind::BoundedTurning.name(),
                    alpha: alpha.to_f64().unwrap_or(f64::NAN),
                    range: "[0, 1/4]",
                });
            }
            let a = alpha.to_f64().expect("small rational");
            let b = 1.0 - a;
            let v = b * b / 3.0 * (8.0 * b / 9.0 + 0.25 * ((5.0 - 4.0 * a) / 3.0).powf(1.5) + 0.8);
            vec![real(spec(ClassKind::BoundedTurning, alpha.clone()), v)]
        }
    })
}

/// Maximiser of `χ(c) = |8α² − 16α − 1| c³ − 18 c² + 72` on `[0, 2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiMax {
    pub max_value: BigRational,
    pub argmax: BigRational,
}

pub fn chi(alpha: &BigRational, c: &BigRational) -> BigRational {
    let k = (int(8) * alpha * alpha - int(16) * alpha - int(1)).abs();
    k * c * c * c - int(18) * c * c + int(72)
}

/// Exact maximisation over the candidate set {0, 2, 12/k}, where `12/k`
/// is the positive root of `χ'` and only counts when it lies in `(0, 2)`.
/// Ties go to the smallest `c`.
pub fn chi_max_exact(alpha: &BigRational) -> Result<ChiMax> {
    if *alpha < q(-1, 2) || *alpha >= int(1) {
        return Err(Error::AlphaOutOfRange {
            class: ClassKind::HarmonicM.name(),
            alpha: alpha.to_f64().unwrap_or(f64::NAN),
            range: ClassKind::HarmonicM.alpha_range(),
        });
    }
    let k = (int(8) * alpha * alpha - int(16) * alpha - int(1)).abs();
    let mut candidates = vec![int(0), int(2)];
    if !k.is_zero() {
        let interior = int(12) / &k;
        if interior.is_positive() && interior < int(2) {
            candidates.push(interior);
        }
    }
    candidates.sort();
    let mut best = ChiMax {
        max_value: chi(alpha, &candidates[0]),
        argmax: candidates[0].clone(),
    };
    for c in &candidates[1..] {
        let v = chi(alpha, c);
        if v > best.max_value {
            best = ChiMax {
                max_value: v,
                argmax: c.clone(),
            };
        }
    }
    Ok(best)
}

/// [`chi_max_exact`] for a floating-point order, read as its shortest
/// decimal representation.
pub fn chi_max(alpha: f64) -> Result<(f64, f64)> {
    let a = parse_rational(&alpha.to_string()).map_err(|_| Error::AlphaOutOfRange {
        class: ClassKind::HarmonicM.name(),
        alpha,
        range: ClassKind::HarmonicM.alpha_range(),
    })?;
    let m = chi_max_exact(&a)?;
    Ok((
        m.max_value.to_f64().unwrap_or(f64::NAN),
        m.argmax.to_f64().unwrap_or(f64::NAN),
    ))
}
