//! Registry of algebraic identities relating the coefficient functionals to
//! their closed forms in Carathéodory coefficients.
//!
//! Every entry builds its left-hand side from the definitions (class
//! coefficient maps composed into the Hankel determinant or the Zalcman
//! functional, using the same generic code as the numeric path) and its
//! right-hand side from the closed form under test. An identity holds when
//! the difference is the zero polynomial.
//!
//! Entries come in two forms. `Stated` entries transcribe the closed forms
//! exactly as published, including the ones that turn out not to hold.
//! `Amended` entries are the corrected forms derived here for each stated
//! entry that fails.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::poly::{Poly, SymbolSet};
use crate::coeffs::{
    bounded_turning_series, convex_series, harmonic_g_series, starlike_series, with_leading_one,
};
use crate::error::{Error, Result};
use crate::functionals::{
    bounded_turning_h31_expansion, convex_h31_expansion, hankel_det, harmonic_g_h31_expansion,
    starlike_h31_expansion, zalcman_value,
};
use crate::ring::Ring;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    Stated,
    Amended,
}

macro_rules! identity_names {
    ($( $variant:ident => $slug:literal, $form:ident, $desc:literal; )*) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
        pub enum IdentityName {
            $( $variant, )*
        }

        impl IdentityName {
            pub const ALL: &'static [IdentityName] = &[ $( IdentityName::$variant, )* ];

            pub fn slug(self) -> &'static str {
                match self { $( IdentityName::$variant => $slug, )* }
            }

            pub fn form(self) -> Form {
                match self { $( IdentityName::$variant => Form::$form, )* }
            }

            pub fn description(self) -> &'static str {
                match self { $( IdentityName::$variant => $desc, )* }
            }
        }
    };
}

identity_names! {
    StarlikeH31Expansion => "starlike-h31-expansion", Stated,
        "H31 on S*(alpha) as a p-polynomial with prefactor (1-alpha)^2/144";
    StarlikeH31Decomposition => "starlike-h31-decomposition", Stated,
        "four-term grouping of the starlike H31 expansion";
    ConvexH31Expansion => "convex-h31-expansion", Stated,
        "H31 on K(alpha) with b_k = a_k/k, prefactor (1-alpha)^2/8640";
    ConvexH31Decomposition => "convex-h31-decomposition", Stated,
        "six-term grouping of the convex H31 expansion used for the K(alpha) bound";
    HarmonicHH31Decomposition => "harmonic-h-h31-decomposition", Stated,
        "five-term grouping of the convex H31 expansion used for the M(alpha) analytic-part bound";
    BoundedTurningH31Expansion => "bounded-turning-h31-expansion", Stated,
        "H31 on R(alpha), prefactor (1-alpha)^2/2160";
    BoundedTurningH31Decomposition => "bounded-turning-h31-decomposition", Stated,
        "five-term grouping of the bounded-turning H31 expansion";
    StarlikeJ3Expansion => "starlike-j3-expansion", Stated,
        "J3 on S*(alpha), prefactor (1-alpha)/24";
    StarlikeJ3Decomposition => "starlike-j3-decomposition", Stated,
        "four-term grouping of the starlike J3 expansion";
    ConvexJ3Expansion => "convex-j3-expansion", Stated,
        "J3 on K(alpha), prefactor (1-alpha)/360";
    ConvexJ3Decomposition => "convex-j3-decomposition", Stated,
        "five-term grouping of the convex J3 expansion";
    BoundedTurningJ2Form => "bounded-turning-j2-form", Stated,
        "J2 on R(alpha) as -(1-alpha)/3 [p2 - (3/4)(1-alpha) p1^2]";
    BoundedTurningJ3Form => "bounded-turning-j3-form", Stated,
        "J3 on R(alpha) as -(1-alpha)/5 [p4 - (5/9)(1-alpha) p2^2]";
    HarmonicGH31Expansion => "harmonic-g-h31-expansion", Stated,
        "H31 of the co-analytic part of M(alpha), prefactor (1-alpha)/540";
    HarmonicGH31Decomposition => "harmonic-g-h31-decomposition", Stated,
        "two-term grouping of the co-analytic H31 expansion";
    HarmonicGH31Substitution => "harmonic-g-h31-substitution", Stated,
        "co-analytic H31 after writing p2, p3 through (p1, x, z); |x|^2 = x*xbar";
    HarmonicGBoundGap => "harmonic-g-bound-gap", Stated,
        "(1-alpha)(5-2alpha)/90 - (1-alpha)/30 = (1-alpha)^2/45";
    H31ZalcmanJ2Form => "h31-zalcman-j2-form", Stated,
        "H31 = a3(a2 a4 - a3^2) + a4(a2 a3 - a4) - a5 J2";
    H31ZalcmanJ3Form => "h31-zalcman-j3-form", Stated,
        "H31 = a3 J3 + a4(2 a2 a3 - a4) - a5 a2^2";
    HarmonicHH31DecompositionAmended => "harmonic-h-h31-decomposition-amended", Amended,
        "five-term grouping without the -15(1-alpha)^2 p1^2 p2^2 term";
    H31ZalcmanJ3FormAmended => "h31-zalcman-j3-form-amended", Amended,
        "H31 = -a3 J3 + a4(2 a2 a3 - a4) - a5 a2^2";
    HarmonicGH31SubstitutionAmended => "harmonic-g-h31-substitution-amended", Amended,
        "(1-alpha)/2160 {(1-2alpha-8alpha^2) p1^3 - 18 alpha p1 (4-p1^2) x + 9(4-p1^2)[p1 x^2 - 2(1-|x|^2) z]}";
}

impl fmt::Display for IdentityName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for IdentityName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IdentityName::ALL
            .iter()
            .copied()
            .find(|n| n.slug() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown identity `{s}`")))
    }
}

impl Serialize for IdentityName {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.slug())
    }
}

/// Both sides of an identity over a common symbol set.
#[derive(Debug, Clone)]
pub struct Identity {
    pub name: IdentityName,
    pub lhs: Poly,
    pub rhs: Poly,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub name: IdentityName,
    pub form: Form,
    pub holds: bool,
    /// `lhs = −rhs`: the closed form is right up to an overall sign.
    pub holds_up_to_sign: bool,
    #[serde(skip)]
    pub residual: Poly,
}

impl IdentityReport {
    pub fn compare(identity: &Identity) -> Self {
        let residual = &identity.lhs - &identity.rhs;
        let holds = residual.is_zero();
        let holds_up_to_sign = !holds && (&identity.lhs + &identity.rhs).is_zero();
        Self {
            name: identity.name,
            form: identity.name.form(),
            holds,
            holds_up_to_sign,
            residual,
        }
    }

    pub fn residual_term_count(&self) -> usize {
        self.residual.term_count()
    }
}

/// Variables `p1..p4`, `alpha` over a symbol set containing them.
struct Vars {
    p: [Poly; 4],
    alpha: Poly,
}

impl Vars {
    fn over(symbols: &SymbolSet) -> Self {
        let v = |n: &str| Poly::var(symbols, n).expect("caratheodory symbols present");
        Self {
            p: [v("p1"), v("p2"), v("p3"), v("p4")],
            alpha: v("alpha"),
        }
    }

    /// `1 − α`.
    fn b(&self) -> Poly {
        self.alpha.one_like() - self.alpha.clone()
    }

    fn c(&self, num: i64, den: i64) -> Poly {
        self.alpha.ratio(num, den)
    }
}

fn h31_of(a: [Poly; 5]) -> Poly {
    hankel_det(3, 1, &a).expect("five coefficients")
}

fn starlike_h31(v: &Vars) -> Poly {
    h31_of(with_leading_one(starlike_series(&v.alpha, &v.p)))
}

fn convex_h31(v: &Vars) -> Poly {
    h31_of(with_leading_one(convex_series(&v.alpha, &v.p)))
}

fn bounded_turning_coeffs(v: &Vars) -> Vec<Poly> {
    let mut a = vec![v.c(1, 1)];
    a.extend(bounded_turning_series(&v.alpha, &v.p));
    a
}

fn harmonic_g_h31(v: &Vars) -> Poly {
    let h = with_leading_one(convex_series(&v.alpha, &v.p));
    h31_of(harmonic_g_series(&h))
}

fn starlike_j3(v: &Vars) -> Poly {
    zalcman_value(3, &with_leading_one(starlike_series(&v.alpha, &v.p))).expect("five coefficients")
}

fn convex_j3(v: &Vars) -> Poly {
    zalcman_value(3, &with_leading_one(convex_series(&v.alpha, &v.p))).expect("five coefficients")
}

/// Builds both sides of the named identity.
pub fn identity(name: IdentityName) -> Identity {
    use IdentityName::*;

    let s = SymbolSet::caratheodory();
    let v = Vars::over(&s);
    let [p1, p2, p3, p4] = v.p.clone();
    let b = v.b();
    let a = v.alpha.clone();
    let c = |n, d| v.c(n, d);

    let (lhs, rhs) = match name {
        StarlikeH31Expansion => (starlike_h31(&v), starlike_h31_expansion(&v.alpha, &v.p)),
        StarlikeH31Decomposition => {
            let u = p2.clone() - b.clone() * p1.pow(2);
            let inner = b.clone() * u.pow(3)
                - (p3.clone() - b.clone() * p1.clone() * p2.clone()).pow(2).scaled(16, 1)
                + (u.clone() * (p4.clone() - b.clone() * p1.clone() * p3.clone())).scaled(8, 1)
                + (u * (p4 - b.clone() * p2.pow(2))).scaled(10, 1);
            (starlike_h31(&v), (b.pow(2) * inner).scaled(1, 144))
        }
        ConvexH31Expansion => (convex_h31(&v), convex_h31_expansion(&v.alpha, &v.p)),
        ConvexH31Decomposition => {
            let half = p2.clone() - c(1, 2) * b.clone() * p1.pow(2);
            let full = p2.clone() - b.clone() * p1.pow(2);
            let inner = (b.clone() * half.pow(3)).scaled(8, 1)
                + (p4.clone() * full.clone()).scaled(24, 1)
                + (p2.clone() * (p4.clone() - b.clone() * p2.pow(2))).scaled(36, 1)
                + (full * (p4.clone() - b.clone() * p1.clone() * p3.clone())).scaled(12, 1)
                - (p3.clone() * (p3.clone() - c(4, 5) * b.clone() * p1.clone() * p2.clone()))
                    .scaled(60, 1)
                + (b.clone() * p2.pow(2) * (p2.clone() - c(3, 8) * b.clone() * p1.pow(2)))
                    .scaled(24, 1);
            (convex_h31(&v), (b.pow(2) * inner).scaled(1, 8640))
        }
        HarmonicHH31Decomposition | HarmonicHH31DecompositionAmended => {
            let h = c(1, 2) * b.clone();
            let u = p2.clone() - h.clone() * p1.pow(2);
            let mut inner = (b.clone() * u.pow(3)).scaled(8, 1)
                - (p3.clone() - h.clone() * p1.clone() * p2.clone()).pow(2).scaled(60, 1)
                + (u.clone() * (p4.clone() - h.clone() * p1.clone() * p3.clone())).scaled(48, 1)
                + (u * (p4.clone() - h * p2.pow(2))).scaled(24, 1);
            if name == HarmonicHH31Decomposition {
                inner = inner - (b.pow(2) * p1.pow(2) * p2.pow(2)).scaled(15, 1);
            }
            (convex_h31(&v), (b.pow(2) * inner).scaled(1, 8640))
        }
        BoundedTurningH31Expansion => (
            h31_of(bounded_turning_coeffs(&v).try_into().expect("five")),
            bounded_turning_h31_expansion(&v.alpha, &v.p),
        ),
        BoundedTurningH31Decomposition => {
            let inner = (b.clone() * p4.clone() * (p2.clone() - p1.pow(2))).scaled(108, 1)
                + (b.clone() * p2.clone() * (p4.clone() - p2.pow(2))).scaled(80, 1)
                - (p3.clone() * (p3.clone() - p1.clone() * p2.clone())).scaled(135, 1)
                - ((c(1, 1) - a.scaled(4, 1)) * p2.clone() * (p4.clone() - p1 * p3)).scaled(45, 1)
                + (c(1, 1) + a.scaled(8, 1)) * p2 * p4;
            (
                h31_of(bounded_turning_coeffs(&v).try_into().expect("five")),
                (b.pow(2) * inner).scaled(1, 2160),
            )
        }
        StarlikeJ3Expansion => {
            let inner = -(b.pow(3) * p1.pow(4)).scaled(5, 1)
                - (b.pow(2) * p1.pow(2) * p2.clone()).scaled(6, 1)
                - (b.clone() * p2.pow(2)).scaled(3, 1)
                + (b.clone() * p1 * p3).scaled(8, 1)
                + p4.scaled(6, 1);
            (starlike_j3(&v), (b * inner).scaled(1, 24))
        }
        StarlikeJ3Decomposition => {
            let u = p2.clone() - b.clone() * p1.pow(2);
            let inner = -(b.clone() * u.pow(2)).scaled(5, 1)
                + (b.clone() * p1.clone() * (p3 - b.clone() * p1 * p2.clone())).scaled(8, 1)
                + (b.clone() * p2.clone() * u).scaled(8, 1)
                + (p4 - b.clone() * p2.pow(2)).scaled(6, 1);
            (starlike_j3(&v), (b * inner).scaled(1, 24))
        }
        ConvexJ3Expansion => {
            let inner = -(b.pow(3) * p1.pow(4)).scaled(7, 1)
                - (b.pow(2) * p1.pow(2) * p2.clone()).scaled(2, 1)
                - b.clone() * p2.pow(2)
                + (b.clone() * p1 * p3).scaled(24, 1)
                + p4.scaled(18, 1);
            (convex_j3(&v), (b * inner).scaled(1, 360))
        }
        ConvexJ3Decomposition => {
            let t = c(2, 3) * b.clone();
            let u = p2.clone() - t.clone() * p1.pow(2);
            let inner = -(b.clone() * u.pow(2)).scaled(63, 4)
                + (b.clone() * p1.clone() * (p3 - t * p1 * p2.clone())).scaled(24, 1)
                + (b.clone() * p2.clone() * u).scaled(21, 2)
                + (b.clone() * p2.pow(2)).scaled(17, 4)
                + p4.scaled(18, 1);
            (convex_j3(&v), (b * inner).scaled(1, 360))
        }
        BoundedTurningJ2Form | BoundedTurningJ3Form => {
            let n: i64 = if name == BoundedTurningJ2Form { 2 } else { 3 };
            let coeffs = bounded_turning_coeffs(&v);
            let lhs = zalcman_value(n as usize, &coeffs).expect("enough coefficients");
            let (lower, upper) = (&v.p[n as usize - 2], &v.p[2 * n as usize - 3]);
            let rhs = -((b.clone()
                * (upper.clone() - c(2 * n - 1, n * n) * b.clone() * lower.pow(2)))
            .scaled(1, 2 * n - 1));
            (lhs, rhs)
        }
        HarmonicGH31Expansion => (harmonic_g_h31(&v), harmonic_g_h31_expansion(&v.alpha, &v.p)),
        HarmonicGH31Decomposition => {
            let t = c(2, 3) * b.clone();
            let inner = (b.clone() * p1.clone() * (p2.clone() - t.clone() * p1.pow(2))).scaled(3, 1)
                - (p3 - t * p1 * p2).scaled(9, 1);
            (harmonic_g_h31(&v), (b * inner).scaled(1, 540))
        }
        HarmonicGH31Substitution | HarmonicGH31SubstitutionAmended => {
            return substitution_identity(name);
        }
        HarmonicGBoundGap => {
            let lhs = (b.clone() * (c(5, 1) - a.scaled(2, 1))).scaled(1, 90) - b.scaled(1, 30);
            (lhs, b.pow(2).scaled(1, 45))
        }
        H31ZalcmanJ2Form | H31ZalcmanJ3Form | H31ZalcmanJ3FormAmended => return zalcman_form_identity(name),
    };
    Identity { name, lhs, rhs }
}

fn substitution_identity(name: IdentityName) -> Identity {
    let w = SymbolSet::with_witness();
    let v = Vars::over(&w);
    let var = |n: &str| Poly::var(&w, n).expect("witness symbol");
    let (x, xbar, z) = (var("x"), var("xbar"), var("z"));
    let p1 = v.p[0].clone();
    let b = v.b();
    let a = v.alpha.clone();
    let four_minus = v.c(4, 1) - p1.pow(2);
    let slack = v.c(1, 1) - x.clone() * xbar;

    let p2 = (p1.pow(2) + four_minus.clone() * x.clone()).scaled(1, 2);
    let p3 = (p1.pow(3) + (p1.clone() * four_minus.clone() * x.clone()).scaled(2, 1)
        - p1.clone() * four_minus.clone() * x.pow(2)
        + (four_minus.clone() * slack.clone() * z.clone()).scaled(2, 1))
    .scaled(1, 4);
    let lhs = harmonic_g_h31(&v)
        .substitute("p2", &p2)
        .and_then(|l| l.substitute("p3", &p3))
        .expect("same symbol set");

    let tail = (four_minus.clone() * (p1.clone() * x.pow(2) - (slack * z).scaled(2, 1))).scaled(9, 1);
    let inner = if name == IdentityName::HarmonicGH31Substitution {
        (-(a.pow(2).scaled(8, 1)) + a.scaled(16, 1) + v.c(1, 1)) * p1.pow(3) + tail
    } else {
        (v.c(1, 1) - a.scaled(2, 1) - a.pow(2).scaled(8, 1)) * p1.pow(3)
            - (a * p1 * four_minus * x).scaled(18, 1)
            + tail
    };
    Identity {
        name,
        lhs,
        rhs: (b * inner).scaled(1, 2160),
    }
}

fn zalcman_form_identity(name: IdentityName) -> Identity {
    let s = SymbolSet::new(["a2", "a3", "a4", "a5"]);
    let [a2, a3, a4, a5]: [Poly; 4] = Poly::vars(&s).try_into().expect("four symbols");
    let a = [a2.one_like(), a2.clone(), a3.clone(), a4.clone(), a5.clone()];
    let lhs = h31_of(a.clone());
    let rhs = if name == IdentityName::H31ZalcmanJ2Form {
        let j2 = zalcman_value(2, &a).expect("three coefficients");
        a3.clone() * (a2.clone() * a4.clone() - a3.pow(2)) + a4.clone() * (a2 * a3 - a4) - a5 * j2
    } else {
        let mut j3 = zalcman_value(3, &a).expect("five coefficients");
        if name == IdentityName::H31ZalcmanJ3FormAmended {
            j3 = -j3;
        }
        a3.clone() * j3 + a4.clone() * ((a2.clone() * a3).scaled(2, 1) - a4) - a5 * a2.pow(2)
    };
    Identity { name, lhs, rhs }
}

pub fn verify_identity(name: IdentityName) -> IdentityReport {
    IdentityReport::compare(&identity(name))
}

pub fn verify_all() -> Vec<IdentityReport> {
    IdentityName::ALL.iter().map(|&n| verify_identity(n)).collect()
}

/// Evaluates both sides at `points` random rational points. Returns how
/// many points agreed exactly.
pub fn random_point_agreement(identity: &Identity, points: usize, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = identity.lhs.symbols().len();
    (0..points)
        .filter(|_| {
            let pt: Vec<BigRational> = (0..dim)
                .map(|_| {
                    BigRational::new(
                        BigInt::from(rng.random_range(-40i64..=40)),
                        BigInt::from(rng.random_range(1i64..=12)),
                    )
                })
                .collect();
            identity.lhs.eval(&pt).expect("matching dimension")
                == identity.rhs.eval(&pt).expect("matching dimension")
        })
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use IdentityName::*;

    fn holds(name: IdentityName) -> bool {
        verify_identity(name).holds
    }

    #[test]
    fn expansions_hold() {
        for n in [
            StarlikeH31Expansion,
            StarlikeH31Decomposition,
            ConvexH31Expansion,
            ConvexH31Decomposition,
            BoundedTurningH31Expansion,
            BoundedTurningH31Decomposition,
            BoundedTurningJ2Form,
            BoundedTurningJ3Form,
            HarmonicGH31Expansion,
            HarmonicGH31Decomposition,
            HarmonicGBoundGap,
            H31ZalcmanJ2Form,
        ] {
            let r = verify_identity(n);
            assert!(r.holds, "{n}: residual {}", r.residual);
        }
    }

    #[test]
    fn amended_forms_hold() {
        for &n in IdentityName::ALL.iter().filter(|n| n.form() == Form::Amended) {
            assert!(holds(n), "{n}");
        }
    }

    #[test]
    fn stated_j3_forms_have_the_opposite_sign() {
        for n in [StarlikeJ3Expansion, StarlikeJ3Decomposition, ConvexJ3Expansion, ConvexJ3Decomposition] {
            let r = verify_identity(n);
            assert!(!r.holds && r.holds_up_to_sign, "{n}");
        }
    }

    #[test]
    fn stated_zalcman_j3_form_uses_the_opposite_j3() {
        let r = verify_identity(H31ZalcmanJ3Form);
        assert!(!r.holds && !r.holds_up_to_sign);
        let s = r.residual.symbols().clone();
        let [_, a3, _, a5]: [Poly; 4] = Poly::vars(&s).try_into().unwrap();
        // H31 − form = −2 a3 J3
        assert_eq!(r.residual, (a3.clone() * (a3.pow(2) - a5)).scaled(-2, 1));
    }

    #[test]
    fn stated_harmonic_h_decomposition_has_one_extra_term() {
        let r = verify_identity(HarmonicHH31Decomposition);
        assert!(!r.holds);
        // residual is exactly (1 − α)^4 p1² p2² / 576
        let v = Vars::over(&SymbolSet::caratheodory());
        let want = (v.b().pow(4) * v.p[0].pow(2) * v.p[1].pow(2)).scaled(1, 576);
        assert_eq!(r.residual, want);
    }

    #[test]
    fn stated_substitution_fails_only_away_from_alpha_zero() {
        let id = identity(HarmonicGH31Substitution);
        let r = IdentityReport::compare(&id);
        assert!(!r.holds);
        let zero = Poly::constant(id.lhs.symbols(), BigRational::from_integer(0.into()));
        let at0 = r.residual.substitute("alpha", &zero).unwrap();
        assert!(at0.is_zero());
    }

    #[test]
    fn convex_expansion_needs_division_by_index() {
        // b_k = k a_k instead of a_k / k does not reproduce the convex expansion
        let v = Vars::over(&SymbolSet::caratheodory());
        let [a2, a3, a4, a5] = starlike_series(&v.alpha, &v.p);
        let times_k = [v.c(1, 1), a2.scaled(2, 1), a3.scaled(3, 1), a4.scaled(4, 1), a5.scaled(5, 1)];
        let id = Identity {
            name: ConvexH31Expansion,
            lhs: h31_of(times_k),
            rhs: convex_h31_expansion(&v.alpha, &v.p),
        };
        let r = IdentityReport::compare(&id);
        assert!(!r.holds && !r.holds_up_to_sign);
        assert!(holds(ConvexH31Expansion));
    }

    #[test]
    fn random_points_agree_with_symbolic_verdict() {
        for &n in IdentityName::ALL {
            let id = identity(n);
            let holds = IdentityReport::compare(&id).holds;
            let agree = random_point_agreement(&id, 100, 17);
            if holds {
                assert_eq!(agree, 100, "{n}");
            } else {
                assert!(agree < 100, "{n}");
            }
        }
    }

    #[test]
    fn names_round_trip() {
        for &n in IdentityName::ALL {
            assert_eq!(n.slug().parse::<IdentityName>().unwrap(), n);
        }
        assert!("nope".parse::<IdentityName>().is_err());
    }
}
