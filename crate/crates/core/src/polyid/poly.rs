use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ring::Ring;

/// Ordered list of symbol names shared by a family of polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolSet(Arc<Vec<String>>);

impl SymbolSet {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            assert!(!names[..i].contains(n), "duplicate symbol `{n}`");
        }
        Self(Arc::new(names))
    }

    /// `p1, p2, p3, p4, alpha`.
    pub fn caratheodory() -> Self {
        Self::new(["p1", "p2", "p3", "p4", "alpha"])
    }

    /// [`Self::caratheodory`] extended by the witness symbols `x, xbar, z`;
    /// `xbar` stands for the conjugate of `x`, so `|x|² = x·xbar`.
    pub fn with_witness() -> Self {
        Self::new(["p1", "p2", "p3", "p4", "alpha", "x", "xbar", "z"])
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    fn same(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

/// Exponent vector, one entry per symbol.
pub type Monomial = Vec<u32>;

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are kept in a `BTreeMap` keyed by exponent vector, so the term
/// order is canonical and zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    symbols: SymbolSet,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero(symbols: &SymbolSet) -> Self {
        Self {
            symbols: symbols.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(symbols: &SymbolSet, c: BigRational) -> Self {
        let mut p = Self::zero(symbols);
        if !c.is_zero() {
            p.terms.insert(vec![0; symbols.len()], c);
        }
        p
    }

    pub fn var(symbols: &SymbolSet, name: &str) -> Result<Self> {
        let i = symbols
            .index(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        let mut m = vec![0; symbols.len()];
        m[i] = 1;
        let mut p = Self::zero(symbols);
        p.terms.insert(m, BigRational::one());
        Ok(p)
    }

    /// One polynomial per symbol, in symbol order.
    pub fn vars(symbols: &SymbolSet) -> Vec<Self> {
        symbols
            .names()
            .iter()
            .map(|n| Self::var(symbols, n).expect("symbol from its own set"))
            .collect()
    }

    pub fn symbols(&self) -> &SymbolSet {
        &self.symbols
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().sum()).max().unwrap_or(0)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.symbols.same(&other.symbols) {
            Ok(())
        } else {
            Err(Error::SymbolMismatch {
                left: self.symbols.names().to_vec(),
                right: other.symbols.names().to_vec(),
            })
        }
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(&self.symbols);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add_term(m, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.symbols);
        }
        Self {
            symbols: self.symbols.clone(),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    /// Replaces every occurrence of `name` by `value`.
    pub fn substitute(&self, name: &str, value: &Self) -> Result<Self> {
        self.check(value)?;
        let i = self
            .symbols
            .index(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        let mut powers = vec![Self::constant(&self.symbols, BigRational::one())];
        let mut out = Self::zero(&self.symbols);
        for (m, c) in &self.terms {
            let e = m[i] as usize;
            while powers.len() <= e {
                let next = powers.last().expect("non-empty").try_mul(value)?;
                powers.push(next);
            }
            let mut rest = m.clone();
            rest[i] = 0;
            let mut rest_poly = Self::zero(&self.symbols);
            rest_poly.terms.insert(rest, c.clone());
            let term = rest_poly.try_mul(&powers[e])?;
            for (tm, tc) in term.terms {
                out.add_term(tm, tc);
            }
        }
        Ok(out)
    }

    /// Re-expresses the polynomial over another symbol set containing every
    /// symbol it actually uses.
    pub fn embed(&self, target: &SymbolSet) -> Result<Self> {
        let map: Vec<Option<usize>> = self.symbols.names().iter().map(|n| target.index(n)).collect();
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut tm = vec![0; target.len()];
            for (j, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let k = map[j].ok_or_else(|| Error::UnknownSymbol(self.symbols.names()[j].clone()))?;
                tm[k] = e;
            }
            out.add_term(tm, c.clone());
        }
        Ok(out)
    }

    /// Exact value at `point` (one value per symbol).
    pub fn eval(&self, point: &[BigRational]) -> Result<BigRational> {
        if point.len() != self.symbols.len() {
            return Err(Error::InvalidConfig(format!(
                "point has {} coordinates, polynomial has {} symbols",
                point.len(),
                self.symbols.len()
            )));
        }
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }
}

impl Ring for Poly {
    fn ratio(&self, num: i64, den: i64) -> Self {
        Poly::constant(
            &self.symbols,
            BigRational::new(BigInt::from(num), BigInt::from(den)),
        )
    }

    fn scaled(&self, num: i64, den: i64) -> Self {
        self.scale(&BigRational::new(BigInt::from(num), BigInt::from(den)))
    }
}

// Operator sugar for building expressions over one symbol set. Mixing sets
// through an operator is a programming error and panics; use the `try_*`
// methods for fallible arithmetic.

fn expect<T>(r: Result<T>) -> T {
    r.unwrap_or_else(|e| panic!("{e}"))
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        expect(self.try_add(&rhs))
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        expect(self.try_add(rhs))
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        expect(self.try_sub(&rhs))
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        expect(self.try_sub(rhs))
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        expect(self.try_mul(&rhs))
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        expect(self.try_mul(rhs))
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(mut self) -> Poly {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // highest total degree first reads more naturally
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let mag = c.abs();
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(j, &e)| {
                    let n = &self.symbols.names()[j];
                    if e == 1 {
                        n.clone()
                    } else {
                        format!("{n}^{e}")
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn setup() -> (SymbolSet, Vec<Poly>) {
        let s = SymbolSet::with_witness();
        let v = Poly::vars(&s);
        (s, v)
    }

    #[test]
    fn difference_of_squares() {
        let (s, v) = setup();
        let (p1, p2) = (&v[0], &v[1]);
        let lhs = (p1 + p2) * (p1 - p2);
        let rhs = p1.pow(2) - p2.pow(2);
        assert_eq!(lhs, rhs);
        assert!((&lhs - &rhs).is_zero());
        assert_eq!(lhs.symbols(), &s);
    }

    #[test]
    fn scaling() {
        let (s, v) = setup();
        let p = v[0].pow(2).scale(&q(1, 144));
        let want = Poly::constant(&s, q(1, 144)) * v[0].pow(2);
        assert_eq!(p, want);
        assert_eq!(p.to_string(), "1/144*p1^2");
        assert!(p.scale(&q(0, 1)).is_zero());
    }

    #[test]
    fn substitution_against_hand_expansion() {
        let (s, v) = setup();
        let (p1, p2, x) = (&v[0], &v[1], &v[5]);
        let four = Poly::constant(&s, q(4, 1));
        let value = (p1.pow(2) + (&four - &p1.pow(2)) * x.clone()).scale(&q(1, 2));
        let got = p2.pow(2).substitute("p2", &value).unwrap();
        // (p1² + (4 − p1²)x)² / 4 expanded by hand
        let want = (p1.pow(4) + (p1.pow(2) * x.clone()).scaled(8, 1)
            - (p1.pow(4) * x.clone()).scaled(2, 1)
            + x.pow(2).scaled(16, 1)
            - (p1.pow(2) * x.pow(2)).scaled(8, 1)
            + (p1.pow(4) * x.pow(2)))
        .scaled(1, 4);
        assert_eq!(got, want);
        assert_eq!(got.total_degree(), 6);
    }

    #[test]
    fn symbol_mismatch_is_an_error() {
        let a = Poly::var(&SymbolSet::caratheodory(), "p1").unwrap();
        let b = Poly::var(&SymbolSet::with_witness(), "p1").unwrap();
        assert!(matches!(a.try_add(&b), Err(Error::SymbolMismatch { .. })));
        assert!(a.try_mul(&b).is_err());
        assert!(a.substitute("p1", &b).is_err());
        assert_eq!(a.embed(&SymbolSet::with_witness()).unwrap(), b);
        assert!(b.embed(&SymbolSet::caratheodory()).is_ok());
        let x = Poly::var(&SymbolSet::with_witness(), "x").unwrap();
        assert!(x.embed(&SymbolSet::caratheodory()).is_err());
        assert!(matches!(
            Poly::var(&SymbolSet::caratheodory(), "y"),
            Err(Error::UnknownSymbol(_))
        ));
    }

    #[test]
    #[should_panic(expected = "different symbol sets")]
    fn operator_mismatch_panics() {
        let a = Poly::var(&SymbolSet::caratheodory(), "p1").unwrap();
        let b = Poly::var(&SymbolSet::with_witness(), "p1").unwrap();
        let _ = a + b;
    }

    #[test]
    fn evaluation() {
        let (_, v) = setup();
        let p = (&v[0] * &v[4]).scaled(3, 2) - v[7].clone() + v[0].ratio(1, 3);
        let mut pt = vec![q(0, 1); 8];
        pt[0] = q(2, 3);
        pt[4] = q(-1, 2);
        pt[7] = q(5, 1);
        assert_eq!(p.eval(&pt).unwrap(), q(3, 2) * q(2, 3) * q(-1, 2) - q(5, 1) + q(1, 3));
        assert!(p.eval(&pt[..3]).is_err());
    }

    #[test]
    fn display_formats() {
        let (s, v) = setup();
        assert_eq!(Poly::zero(&s).to_string(), "0");
        let p = v[1].clone() - v[0].pow(2).scaled(2, 1) + v[0].ratio(-3, 4);
        assert_eq!(p.to_string(), "-2*p1^2 + p2 - 3/4");
    }

    #[test]
    fn no_zero_terms_survive() {
        let (_, v) = setup();
        let p = (&v[0] + &v[1]) - v[1].clone();
        assert_eq!(p.term_count(), 1);
        assert!(p.terms().all(|(_, c)| !c.is_zero()));
    }
}
