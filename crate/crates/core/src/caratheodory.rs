//! Carathéodory-class coefficient sequences.
//!
//! Class members are generated from finite atomic probability measures on
//! the unit circle: a measure with atoms `(w_j, θ_j)` yields
//! `p(z) = Σ_j w_j (1 + e^{iθ_j} z) / (1 − e^{iθ_j} z)`, whose Taylor
//! coefficients are `p_n = 2 Σ_j w_j e^{i n θ_j}`. Feasibility of an
//! arbitrary truncated sequence is decided by positive semidefiniteness of
//! its Hermitian Toeplitz matrix.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest Toeplitz eigenvalue still accepted as positive semidefinite.
pub const FEASIBILITY_TOL: f64 = 1e-10;

/// Tolerance on the total mass of a measure.
pub const WEIGHT_SUM_TOL: f64 = 1e-14;

/// Below this value of `4 − |p₁|²` the witness is treated as degenerate.
const DEGENERATE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub weight: f64,
    /// Radians, reduced to `[0, 2π)`.
    pub angle: f64,
}

/// A finite atomic probability measure on the unit circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HerglotzMeasure {
    atoms: Vec<Atom>,
}

impl HerglotzMeasure {
    /// Builds a measure from `(weight, angle)` pairs. Weights must be
    /// non-negative and sum to one; angles are reduced modulo 2π.
    pub fn new<I>(atoms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let atoms: Vec<Atom> = atoms
            .into_iter()
            .map(|(weight, angle)| Atom {
                weight,
                angle: angle.rem_euclid(TAU),
            })
            .collect();
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure("a measure needs at least one atom".into()));
        }
        if let Some(a) = atoms.iter().find(|a| a.weight.is_nan() || a.weight < 0.0 || !a.angle.is_finite()) {
            return Err(Error::InvalidMeasure(format!(
                "bad atom (weight {}, angle {})",
                a.weight, a.angle
            )));
        }
        let total: f64 = atoms.iter().map(|a| a.weight).sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidMeasure(format!("weights sum to {total}, not 1")));
        }
        Ok(Self { atoms })
    }

    /// Point mass at `angle`.
    pub fn dirac(angle: f64) -> Self {
        Self {
            atoms: vec![Atom {
                weight: 1.0,
                angle: angle.rem_euclid(TAU),
            }],
        }
    }

    /// Equal weights at the `m`-th roots of unity rotated by `phase`.
    pub fn roots_of_unity(m: usize, phase: f64) -> Self {
        assert!(m >= 1, "need at least one atom");
        let w = 1.0 / m as f64;
        Self {
            atoms: (0..m)
                .map(|j| Atom {
                    weight: w,
                    angle: (phase + TAU * j as f64 / m as f64).rem_euclid(TAU),
                })
                .collect(),
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// First `n` moments `p_1..p_n`.
    pub fn coeffs(&self, n: usize) -> CaratheodoryCoeffs {
        coeffs_from_measure(self, n)
    }
}

/// `p_1..p_N` of a Carathéodory function; `p_0 = 2` is implicit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaratheodoryCoeffs {
    p: Vec<Complex64>,
}

impl CaratheodoryCoeffs {
    /// Wraps raw coefficients without checking feasibility.
    pub fn new(p: Vec<Complex64>) -> Self {
        Self { p }
    }

    pub fn from_real(p: &[f64]) -> Self {
        Self::new(p.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        Self::new(vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// `p_n`, one-based.
    pub fn get(&self, n: usize) -> Result<Complex64> {
        if n == 0 || n > self.p.len() {
            return Err(Error::IndexOutOfRange {
                n,
                len: self.p.len(),
            });
        }
        Ok(self.p[n - 1])
    }

    /// `p_1..p_4` as an array, the order every functional in this crate needs.
    pub fn first_four(&self) -> Result<[Complex64; 4]> {
        if self.p.len() < 4 {
            return Err(Error::InsufficientCoefficients {
                needed: 4,
                available: self.p.len(),
            });
        }
        Ok([self.p[0], self.p[1], self.p[2], self.p[3]])
    }

    /// Replaces `p_n` by `e^{inθ} p_n`, the coefficients of `p(e^{iθ}z)`.
    pub fn rotated(&self, theta: f64) -> Self {
        Self::new(
            self.p
                .iter()
                .enumerate()
                .map(|(i, &pn)| pn * Complex64::from_polar(1.0, theta * (i + 1) as f64))
                .collect(),
        )
    }

    /// Leading `n` coefficients.
    pub fn truncated(&self, n: usize) -> Self {
        Self::new(self.p.iter().take(n).copied().collect())
    }

    /// Hermitian Toeplitz matrix with first row `(2, p_1, …, p_N)`.
    pub fn toeplitz(&self) -> DMatrix<Complex64> {
        let n = self.p.len() + 1;
        let moment = |d: isize| -> Complex64 {
            match d {
                0 => Complex64::new(2.0, 0.0),
                d if d > 0 => self.p[d as usize - 1],
                d => self.p[(-d) as usize - 1].conj(),
            }
        };
        DMatrix::from_fn(n, n, |r, c| moment(c as isize - r as isize))
    }

    pub fn min_toeplitz_eigenvalue(&self) -> f64 {
        let eig = self.toeplitz().symmetric_eigen();
        eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn is_feasible(&self) -> bool {
        is_feasible(self)
    }
}

/// `p_n = 2 Σ_j w_j e^{i n θ_j}` for `n = 1..=n_max`.
pub fn coeffs_from_measure(measure: &HerglotzMeasure, n_max: usize) -> CaratheodoryCoeffs {
    let p = (1..=n_max)
        .map(|n| {
            measure
                .atoms
                .iter()
                .map(|a| Complex64::from_polar(2.0 * a.weight, n as f64 * a.angle))
                .sum()
        })
        .collect();
    CaratheodoryCoeffs::new(p)
}

/// Carathéodory–Toeplitz criterion with [`FEASIBILITY_TOL`] slack.
pub fn is_feasible(p: &CaratheodoryCoeffs) -> bool {
    if p.p.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return false;
    }
    p.min_toeplitz_eigenvalue() >= -FEASIBILITY_TOL
}

/// Parameters `(x, z)` expressing `p_2, p_3` through `p_1`.
///
/// The closed forms for `p_2` and `p_3` hold with `|x|, |z| ≤ 1` when `p_1`
/// is real and non-negative, so the witness is computed for the rotated
/// sequence `q_n = e^{−inφ} p_n` with `φ = arg p_1`. [`Self::reconstruct`]
/// undoes the rotation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PWitness {
    pub x: Complex64,
    pub z: Complex64,
    /// `arg p_1`, zero when `p_1 = 0`.
    pub rotation: f64,
    /// `|p_1| = 2`: the sequence comes from a point mass and `x = z = 0`.
    pub degenerate: bool,
}

impl PWitness {
    /// Rebuilds `(p_2, p_3)` from `p_1` and the witness.
    pub fn reconstruct(&self, p1: Complex64) -> (Complex64, Complex64) {
        let c = Complex64::new(p1.norm(), 0.0);
        let d = 4.0 - c * c;
        let x = self.x;
        let q2 = (c * c + d * x) / 2.0;
        let q3 = (c * c * c + 2.0 * c * d * x - c * d * x * x
            + 2.0 * d * (1.0 - x.norm_sqr()) * self.z)
            / 4.0;
        let r = |k: f64| Complex64::from_polar(1.0, k * self.rotation);
        (q2 * r(2.0), q3 * r(3.0))
    }
}

fn clamp_to_disk(mut v: Complex64) -> Complex64 {
    while v.norm() > 1.0 {
        v /= v.norm() * (1.0 + f64::EPSILON);
    }
    v
}

pub fn p_witness(p1: Complex64, p2: Complex64, p3: Complex64) -> Result<PWitness> {
    let coeffs = CaratheodoryCoeffs::new(vec![p1, p2, p3]);
    let min_eigenvalue = coeffs.min_toeplitz_eigenvalue();
    if min_eigenvalue.is_nan() || min_eigenvalue < -FEASIBILITY_TOL {
        return Err(Error::InfeasibleInput { min_eigenvalue });
    }

    let c = p1.norm();
    let rotation = if c > 0.0 { p1.arg() } else { 0.0 };
    let zero = Complex64::new(0.0, 0.0);
    let d = 4.0 - c * c;
    if d <= DEGENERATE_TOL {
        return Ok(PWitness {
            x: zero,
            z: zero,
            rotation,
            degenerate: true,
        });
    }

    let q2 = p2 * Complex64::from_polar(1.0, -2.0 * rotation);
    let q3 = p3 * Complex64::from_polar(1.0, -3.0 * rotation);
    let c = Complex64::new(c, 0.0);

    // Rounding can push a boundary witness just outside the closed disk.
    let x = clamp_to_disk((2.0 * q2 - c * c) / d);
    let slack = 1.0 - x.norm_sqr();
    let z = if slack <= 0.0 {
        zero
    } else {
        let num = 4.0 * q3 - c * c * c - 2.0 * c * d * x + c * d * x * x;
        clamp_to_disk(num / (2.0 * d * slack))
    };
    Ok(PWitness {
        x,
        z,
        rotation,
        degenerate: false,
    })
}

/// Excess over the bound 2 of `|p_n|`, `|p_n − p_k p_{n−k}|` and
/// `|p_n − μ p_k p_{n−k}|`. Each is `≤ 0` (up to rounding) for a member of
/// the class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LemmaResiduals {
    pub modulus: f64,
    pub product: f64,
    pub weighted_product: f64,
}

impl LemmaResiduals {
    pub fn max(&self) -> f64 {
        self.modulus.max(self.product).max(self.weighted_product)
    }
}

pub fn lemma_residuals(
    p: &CaratheodoryCoeffs,
    n: usize,
    k: usize,
    mu: f64,
) -> Result<LemmaResiduals> {
    if n > p.len() {
        return Err(Error::IndexOutOfRange { n, len: p.len() });
    }
    if k == 0 || k >= n {
        return Err(Error::IndexOutOfRange { n: k, len: n - 1 });
    }
    if !(0.0..=1.0).contains(&mu) {
        return Err(Error::InvalidConfig(format!("mu = {mu} is outside [0, 1]")));
    }
    let pn = p.get(n)?;
    let prod = p.get(k)? * p.get(n - k)?;
    Ok(LemmaResiduals {
        modulus: pn.norm() - 2.0,
        product: (pn - prod).norm() - 2.0,
        weighted_product: (pn - mu * prod).norm() - 2.0,
    })
}

/// Draws a measure with `n_atoms` atoms: weights uniform on the simplex
/// (sorted uniform spacings), angles uniform on `[0, 2π)`.
pub fn sample_measure(rng_seed: u64, n_atoms: usize) -> HerglotzMeasure {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    sample_measure_with(&mut rng, n_atoms)
}

pub fn sample_measure_with<R: Rng + ?Sized>(rng: &mut R, n_atoms: usize) -> HerglotzMeasure {
    assert!(n_atoms >= 1, "a measure needs at least one atom");
    let mut cuts: Vec<f64> = (1..n_atoms).map(|_| rng.random::<f64>()).collect();
    cuts.sort_by(f64::total_cmp);
    let mut prev = 0.0;
    let mut atoms = Vec::with_capacity(n_atoms);
    for cut in cuts.into_iter().chain(std::iter::once(1.0)) {
        atoms.push(Atom {
            weight: cut - prev,
            angle: rng.random::<f64>() * TAU,
        });
        prev = cut;
    }
    HerglotzMeasure { atoms }
}

/// Summary of a Monte-Carlo sweep over the coefficient lemmas.
#[derive(Debug, Clone, Serialize)]
pub struct LemmaSweep {
    pub samples: usize,
    pub max_modulus: f64,
    pub max_product: f64,
    pub max_weighted_product: f64,
    /// Largest `|p_2 − p̂_2|, |p_3 − p̂_3|` after rebuilding from the witness.
    pub max_roundtrip: f64,
    /// Largest `|x|` or `|z|` returned by the witness.
    pub max_witness_modulus: f64,
    /// First sample whose residual exceeded the tolerance, if any.
    pub violation: Option<LemmaViolation>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaViolation {
    pub lemma: &'static str,
    pub sample: usize,
    pub residual: f64,
    pub measure: HerglotzMeasure,
}

impl LemmaSweep {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Largest atom count drawn by [`lemma_sweep`].
pub const SWEEP_MAX_ATOMS: usize = 5;

const SWEEP_MUS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

/// Checks `|p_n| ≤ 2`, `|p_n − μ p_k p_{n−k}| ≤ 2` for all `1 ≤ k < n ≤ 4`
/// and the witness round trip on `samples` random measures with 1 to
/// [`SWEEP_MAX_ATOMS`] atoms. Deterministic in `seed`.
pub fn lemma_sweep(samples: usize, seed: u64, tol: f64) -> LemmaSweep {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = LemmaSweep {
        samples,
        max_modulus: f64::NEG_INFINITY,
        max_product: f64::NEG_INFINITY,
        max_weighted_product: f64::NEG_INFINITY,
        max_roundtrip: 0.0,
        max_witness_modulus: 0.0,
        violation: None,
    };
    for sample in 0..samples {
        let atoms = rng.random_range(1..=SWEEP_MAX_ATOMS);
        let measure = sample_measure_with(&mut rng, atoms);
        let extra_mu: f64 = rng.random();
        let p = measure.coeffs(4);

        let flag = |lemma: &'static str, residual: f64, out: &mut LemmaSweep| {
            if residual > tol && out.violation.is_none() {
                out.violation = Some(LemmaViolation {
                    lemma,
                    sample,
                    residual,
                    measure: measure.clone(),
                });
            }
        };

        for n in 1..=4 {
            let r = p.get(n).expect("n <= 4").norm() - 2.0;
            out.max_modulus = out.max_modulus.max(r);
            flag("modulus", r, &mut out);
            for k in 1..n {
                for mu in SWEEP_MUS.iter().copied().chain(std::iter::once(extra_mu)) {
                    let r = lemma_residuals(&p, n, k, mu).expect("indices in range");
                    out.max_product = out.max_product.max(r.product);
                    out.max_weighted_product = out.max_weighted_product.max(r.weighted_product);
                    flag("product", r.product, &mut out);
                    flag("weighted-product", r.weighted_product, &mut out);
                }
            }
        }

        let [p1, p2, p3, _] = p.first_four().expect("four coefficients");
        match p_witness(p1, p2, p3) {
            Ok(w) => {
                let (r2, r3) = w.reconstruct(p1);
                let err = (r2 - p2).norm().max((r3 - p3).norm());
                out.max_roundtrip = out.max_roundtrip.max(err);
                out.max_witness_modulus = out.max_witness_modulus.max(w.x.norm()).max(w.z.norm());
                flag("witness-roundtrip", err, &mut out);
            }
            Err(_) => flag("witness-feasibility", f64::INFINITY, &mut out),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_close(a: Complex64, b: Complex64, tol: f64) {
        assert!((a - b).norm() <= tol, "{a} vs {b}");
    }

    #[test]
    fn point_mass_gives_the_extremal_sequence() {
        let p = HerglotzMeasure::dirac(0.0).coeffs(4);
        for pn in p.as_slice() {
            assert_close(*pn, c(2.0, 0.0), 1e-15);
        }
    }

    #[test]
    fn antipodal_pair_cancels_odd_moments() {
        let m = HerglotzMeasure::new([(0.5, 0.0), (0.5, PI)]).unwrap();
        let p = m.coeffs(4);
        let want = [0.0, 2.0, 0.0, 2.0];
        for (pn, w) in p.as_slice().iter().zip(want) {
            assert_close(*pn, c(w, 0.0), 1e-15);
        }
    }

    #[test]
    fn random_three_atom_measure_matches_direct_sum() {
        let m = sample_measure(11, 3);
        let p = m.coeffs(4);
        for n in 1..=4 {
            // independent route: real and imaginary parts summed separately
            let (mut re, mut im) = (0.0, 0.0);
            for a in m.atoms() {
                re += 2.0 * a.weight * (n as f64 * a.angle).cos();
                im += 2.0 * a.weight * (n as f64 * a.angle).sin();
            }
            assert_close(p.get(n).unwrap(), c(re, im), 1e-14);
            assert!(p.get(n).unwrap().norm() <= 2.0 + 1e-12);
        }
    }

    #[test]
    fn measure_validation() {
        assert!(HerglotzMeasure::new(Vec::<(f64, f64)>::new()).is_err());
        assert!(HerglotzMeasure::new([(0.7, 0.0), (0.2, 1.0)]).is_err());
        assert!(HerglotzMeasure::new([(1.2, 0.0), (-0.2, 1.0)]).is_err());
        let m = HerglotzMeasure::new([(1.0, -PI / 2.0)]).unwrap();
        assert!((m.atoms()[0].angle - 1.5 * PI).abs() < 1e-15);
    }

    #[test]
    fn feasibility_examples() {
        assert!(CaratheodoryCoeffs::from_real(&[2.0, 2.0, 2.0, 2.0]).is_feasible());
        assert!(!CaratheodoryCoeffs::from_real(&[3.0, 0.0, 0.0, 0.0]).is_feasible());
        assert!(CaratheodoryCoeffs::zeros(4).is_feasible());
        // |p_1|, |p_2| <= 2 individually but jointly infeasible
        assert!(!CaratheodoryCoeffs::from_real(&[2.0, -2.0]).is_feasible());
        for seed in 0..50 {
            assert!(sample_measure(seed, 1 + (seed as usize % 6)).coeffs(5).is_feasible());
        }
    }

    #[test]
    fn toeplitz_is_hermitian() {
        let t = sample_measure(3, 4).coeffs(3).toeplitz();
        assert_eq!(t.nrows(), 4);
        for r in 0..4 {
            for k in 0..4 {
                assert_close(t[(r, k)], t[(k, r)].conj(), 0.0);
            }
        }
    }

    #[test]
    fn witness_degenerate_point_mass() {
        let w = p_witness(c(2.0, 0.0), c(2.0, 0.0), c(2.0, 0.0)).unwrap();
        assert!(w.degenerate);
        assert_eq!(w.x, c(0.0, 0.0));
        assert_eq!(w.z, c(0.0, 0.0));
    }

    #[test]
    fn witness_antipodal_pair() {
        let w = p_witness(c(0.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!(!w.degenerate);
        assert_close(w.x, c(1.0, 0.0), 1e-15);
        assert_eq!(w.z, c(0.0, 0.0));
    }

    #[test]
    fn witness_rejects_infeasible_input() {
        let err = p_witness(c(3.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)).unwrap_err();
        assert!(matches!(err, Error::InfeasibleInput { .. }));
    }

    #[test]
    fn witness_round_trip_random() {
        for seed in 0..500 {
            let m = sample_measure(seed, 1 + (seed as usize % 5));
            let p = m.coeffs(3);
            let [p1, p2, p3] = [p.as_slice()[0], p.as_slice()[1], p.as_slice()[2]];
            let w = p_witness(p1, p2, p3).unwrap();
            assert!(w.x.norm() <= 1.0 + 1e-12 && w.z.norm() <= 1.0 + 1e-12);
            let (r2, r3) = w.reconstruct(p1);
            assert_close(r2, p2, 1e-12);
            assert_close(r3, p3, 1e-12);
        }
    }

    #[test]
    fn residual_examples() {
        let p = CaratheodoryCoeffs::from_real(&[2.0, 2.0, 2.0, 2.0]);
        let r = lemma_residuals(&p, 2, 1, 1.0).unwrap();
        assert_eq!((r.modulus, r.product, r.weighted_product), (0.0, 0.0, 0.0));

        let p = CaratheodoryCoeffs::from_real(&[0.0, 2.0, 0.0, 2.0]);
        let r = lemma_residuals(&p, 2, 1, 0.5).unwrap();
        assert_eq!((r.modulus, r.product, r.weighted_product), (0.0, 0.0, 0.0));
    }

    #[test]
    fn residual_index_errors() {
        let p = CaratheodoryCoeffs::zeros(4);
        assert!(matches!(
            lemma_residuals(&p, 5, 1, 0.5),
            Err(Error::IndexOutOfRange { n: 5, len: 4 })
        ));
        assert!(lemma_residuals(&p, 3, 3, 0.5).is_err());
        assert!(lemma_residuals(&p, 3, 0, 0.5).is_err());
        assert!(lemma_residuals(&p, 3, 1, 1.5).is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        assert_eq!(sample_measure(5, 4), sample_measure(5, 4));
        assert_ne!(sample_measure(5, 4), sample_measure(6, 4));
        let single = sample_measure(9, 1);
        assert_eq!(single.len(), 1);
        assert_eq!(single.atoms()[0].weight, 1.0);
    }

    #[test]
    fn sampled_weights_lie_on_the_simplex() {
        for seed in 0..100 {
            let m = sample_measure(seed, 7);
            let total: f64 = m.atoms().iter().map(|a| a.weight).sum();
            assert!((total - 1.0).abs() <= WEIGHT_SUM_TOL);
            assert!(m.atoms().iter().all(|a| a.weight >= 0.0 && a.angle < TAU));
            HerglotzMeasure::new(m.atoms().iter().map(|a| (a.weight, a.angle))).unwrap();
        }
    }

    #[test]
    fn small_sweep_passes() {
        let s = lemma_sweep(2_000, 1, 1e-12);
        assert!(s.passed(), "{:?}", s.violation);
        assert!(s.max_witness_modulus <= 1.0);
    }
}
