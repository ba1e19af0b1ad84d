//! Hankel determinants, Zalcman functionals, and closed-form expansions of
//! `H_{3,1}` in terms of Carathéodory coefficients.

use num_complex::Complex64;
use serde::Serialize;

use crate::caratheodory::CaratheodoryCoeffs;
use crate::coeffs::{class_coeffs, harmonic_m_coeffs, ClassKind, ClassSpec};
use crate::error::{Error, Result};
use crate::ring::Ring;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FunctionalValue {
    pub value: Complex64,
    pub magnitude: f64,
}

impl FunctionalValue {
    pub fn new(value: Complex64) -> Self {
        Self {
            value,
            magnitude: value.norm(),
        }
    }
}

impl From<Complex64> for FunctionalValue {
    fn from(value: Complex64) -> Self {
        Self::new(value)
    }
}

/// Determinant by Laplace expansion along the first row.
pub fn determinant<T: Ring>(m: &[Vec<T>]) -> T {
    match m.len() {
        0 => panic!("determinant of an empty matrix"),
        1 => m[0][0].clone(),
        2 => m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone(),
        n => {
            let mut acc = m[0][0].zero_like();
            for col in 0..n {
                let minor: Vec<Vec<T>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(j, _)| j != col)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let term = m[0][col].clone() * determinant(&minor);
                acc = if col % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        }
    }
}

/// `H_{q,n}` of the sequence `a` (index 0 holds `a_1`).
pub fn hankel_det<T: Ring>(q: usize, n: usize, a: &[T]) -> Result<T> {
    if q == 0 || n == 0 {
        return Err(Error::InvalidConfig("q and n must be positive".into()));
    }
    let needed = n + 2 * (q - 1);
    if a.len() < needed {
        return Err(Error::InsufficientCoefficients {
            needed,
            available: a.len(),
        });
    }
    let m: Vec<Vec<T>> = (0..q)
        .map(|i| (0..q).map(|j| a[n - 1 + i + j].clone()).collect())
        .collect();
    Ok(determinant(&m))
}

pub fn hankel(q: usize, n: usize, a: &[Complex64]) -> Result<FunctionalValue> {
    hankel_det(q, n, a).map(FunctionalValue::new)
}

/// `J_n = a_n² − a_{2n−1}`.
pub fn zalcman_value<T: Ring>(n: usize, a: &[T]) -> Result<T> {
    if n < 2 {
        return Err(Error::InvalidConfig(format!("Zalcman index n = {n} must be at least 2")));
    }
    let needed = 2 * n - 1;
    if a.len() < needed {
        return Err(Error::InsufficientCoefficients {
            needed,
            available: a.len(),
        });
    }
    Ok(a[n - 1].clone() * a[n - 1].clone() - a[2 * n - 2].clone())
}

pub fn zalcman(n: usize, a: &[Complex64]) -> Result<FunctionalValue> {
    zalcman_value(n, a).map(FunctionalValue::new)
}

/// `H_{3,1}` with `a_1 = 1` multiplied out.
pub fn h31_expanded<T: Ring>(a: &[T; 5]) -> T {
    let [_, a2, a3, a4, a5] = a.clone();
    -(a2.pow(2) * a5.clone()) + (a2 * a3.clone() * a4.clone()).scaled(2, 1) - a3.pow(3) + a3 * a5
        - a4.pow(2)
}

// ---------------------------------------------------------------------------
// p-space expansions

/// `H_{3,1}(f)` for `f ∈ S*(α)`.
pub fn starlike_h31_expansion<T: Ring>(alpha: &T, p: &[T; 4]) -> T {
    let [p1, p2, p3, p4] = p.clone();
    let b = alpha.one_like() - alpha.clone();
    let inner = -(b.pow(4) * p1.pow(6))
        + (b.pow(3) * p1.pow(4) * p2.clone()).scaled(3, 1)
        + (b.pow(2) * p1.pow(3) * p3.clone()).scaled(8, 1)
        - (b.pow(2) * p1.pow(2) * p2.pow(2)).scaled(9, 1)
        - (b.clone() * p1.pow(2) * p4.clone()).scaled(18, 1)
        + (b.clone() * p1 * p2.clone() * p3.clone()).scaled(24, 1)
        - (b.clone() * p2.pow(3)).scaled(9, 1)
        + (p2 * p4).scaled(18, 1)
        - p3.pow(2).scaled(16, 1);
    (b.pow(2) * inner).scaled(1, 144)
}

/// `H_{3,1}(h)` for `h ∈ K(α)`, also the analytic part of `M(α)`.
pub fn convex_h31_expansion<T: Ring>(alpha: &T, p: &[T; 4]) -> T {
    let [p1, p2, p3, p4] = p.clone();
    let b = alpha.one_like() - alpha.clone();
    let inner = -(b.pow(4) * p1.pow(6))
        + (b.pow(3) * p1.pow(4) * p2.clone()).scaled(6, 1)
        + (b.pow(2) * p1.pow(3) * p3.clone()).scaled(12, 1)
        - (b.pow(2) * p1.pow(2) * p2.pow(2)).scaled(21, 1)
        - (b.clone() * p1.pow(2) * p4.clone()).scaled(36, 1)
        + (b.clone() * p1 * p2.clone() * p3.clone()).scaled(36, 1)
        - (b.clone() * p2.pow(3)).scaled(4, 1)
        + (p2 * p4).scaled(72, 1)
        - p3.pow(2).scaled(60, 1);
    (b.pow(2) * inner).scaled(1, 8640)
}

/// `H_{3,1}(g)` for `g ∈ R(α)`.
pub fn bounded_turning_h31_expansion<T: Ring>(alpha: &T, p: &[T; 4]) -> T {
    let [p1, p2, p3, p4] = p.clone();
    let b = alpha.one_like() - alpha.clone();
    let inner = b.clone()
        * (-(p1.pow(2) * p4.clone()).scaled(108, 1) + (p1 * p2.clone() * p3.clone()).scaled(180, 1)
            - p2.pow(3).scaled(80, 1))
        + (p2 * p4).scaled(144, 1)
        - p3.pow(2).scaled(135, 1);
    (b.pow(2) * inner).scaled(1, 2160)
}

/// `H_{3,1}` of the co-analytic part of `f ∈ M(α)`.
pub fn harmonic_g_h31_expansion<T: Ring>(alpha: &T, p: &[T; 4]) -> T {
    let [p1, p2, p3, _] = p.clone();
    let b = alpha.one_like() - alpha.clone();
    let inner = -(b.pow(2) * p1.pow(3)).scaled(2, 1) - (p3 - b.clone() * p1 * p2).scaled(9, 1);
    (b * inner).scaled(1, 540)
}

fn alpha_c(class: &ClassSpec) -> Complex64 {
    Complex64::new(class.alpha_f64(), 0.0)
}

/// Closed-form `H_{3,1}` of the analytic coefficients (the `h`-part for
/// `M(α)`), evaluated directly in p-space.
pub fn h31_expansion(class: &ClassSpec, p: &CaratheodoryCoeffs) -> Result<FunctionalValue> {
    let p4 = p.first_four()?;
    let alpha = alpha_c(class);
    let v = match class.kind() {
        ClassKind::Starlike => starlike_h31_expansion(&alpha, &p4),
        ClassKind::Convex | ClassKind::HarmonicM => convex_h31_expansion(&alpha, &p4),
        ClassKind::BoundedTurning => bounded_turning_h31_expansion(&alpha, &p4),
    };
    Ok(FunctionalValue::new(v))
}

/// Closed-form `H_{3,1}` of the co-analytic part of an `M(α)` member.
pub fn h31_g_expansion(class: &ClassSpec, p: &CaratheodoryCoeffs) -> Result<FunctionalValue> {
    if class.kind() != ClassKind::HarmonicM {
        return Err(Error::UnsupportedFunctional {
            class: class.to_string(),
            functional: "h31-g".into(),
        });
    }
    Ok(FunctionalValue::new(harmonic_g_h31_expansion(
        &alpha_c(class),
        &p.first_four()?,
    )))
}

/// `H_{3,1}` of the analytic coefficients computed from the determinant.
pub fn h31_from_definition(class: &ClassSpec, p: &CaratheodoryCoeffs) -> Result<FunctionalValue> {
    let coeffs = class_coeffs(class, p)?;
    hankel(3, 1, coeffs.analytic().as_slice())
}

/// `H_{3,1}` of the co-analytic part computed from the determinant.
pub fn h31_g_from_definition(class: &ClassSpec, p: &CaratheodoryCoeffs) -> Result<FunctionalValue> {
    if class.kind() != ClassKind::HarmonicM {
        return Err(Error::UnsupportedFunctional {
            class: class.to_string(),
            functional: "h31-g".into(),
        });
    }
    let hg = harmonic_m_coeffs(class.alpha_f64(), p)?;
    hankel(3, 1, &hg.g)
}
