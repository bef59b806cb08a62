//! Homogeneous and graded bivariate polynomials over the rationals.
//!
//! A [`HomPoly`] of degree `n` stores `n + 1` coefficients; entry `j` is the
//! coefficient of `x^(n-j) y^j`. A [`GradedPoly`] is a finite sum of
//! homogeneous components keyed by degree, used for truncated Taylor jets.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::linalg::Matrix;
use crate::rational::{binomial, format_rational, int, to_f64, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
}

/// Homogeneous polynomial of fixed degree with exact coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HomPoly {
    coeffs: Vec<Rational>,
}

impl HomPoly {
    pub fn zero(degree: usize) -> Self {
        HomPoly {
            coeffs: vec![Rational::zero(); degree + 1],
        }
    }

    /// Builds from coefficients ordered by increasing y-exponent.
    ///
    /// # Panics
    ///
    /// Panics if `coeffs` is empty.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a homogeneous polynomial needs at least one coefficient"
        );
        HomPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| int(c)).collect())
    }

    /// `c · x^(degree-j) y^j`.
    pub fn monomial(degree: usize, j: usize, c: Rational) -> Self {
        assert!(j <= degree, "y-exponent {j} exceeds degree {degree}");
        let mut p = Self::zero(degree);
        p.coeffs[j] = c;
        p
    }

    pub fn constant(c: Rational) -> Self {
        HomPoly { coeffs: vec![c] }
    }

    pub fn x() -> Self {
        Self::from_ints(&[1, 0])
    }

    pub fn y() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn coeff(&self, j: usize) -> &Rational {
        &self.coeffs[j]
    }

    pub fn set_coeff(&mut self, j: usize, c: Rational) {
        self.coeffs[j] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        HomPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Nonzero terms as `(x-exponent, y-exponent, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        let n = self.degree();
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(j, c)| (n - j, j, c))
    }

    /// Exact partial derivative; the derivative of a constant is the degree-0 zero.
    pub fn derive(&self, var: Var) -> Self {
        let n = self.degree();
        if n == 0 {
            return Self::zero(0);
        }
        let coeffs = (0..n)
            .map(|j| match var {
                // x^(n-j) y^j -> (n-j) x^(n-1-j) y^j
                Var::X => &self.coeffs[j] * int((n - j) as i64),
                // x^(n-j-1) y^(j+1) -> (j+1) x^(n-1-j) y^j
                Var::Y => &self.coeffs[j + 1] * int((j + 1) as i64),
            })
            .collect();
        HomPoly { coeffs }
    }

    /// The flat Laplacian `p_xx + p_yy`.
    pub fn laplace_flat(&self) -> Result<Self> {
        if self.degree() < 2 {
            return Err(domain(format!(
                "flat Laplacian needs degree >= 2, got {}",
                self.degree()
            )));
        }
        Ok(&self.derive(Var::X).derive(Var::X) + &self.derive(Var::Y).derive(Var::Y))
    }

    /// Multiplication by `x` (`Var::X`) or `y` (`Var::Y`).
    pub fn shift(&self, var: Var) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        match var {
            Var::X => {
                coeffs.extend(self.coeffs.iter().cloned());
                coeffs.push(Rational::zero());
            }
            Var::Y => {
                coeffs.push(Rational::zero());
                coeffs.extend(self.coeffs.iter().cloned());
            }
        }
        HomPoly { coeffs }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        // Horner in t = y/x would break at x = 0; evaluate on the monomials directly.
        let n = self.degree();
        let mut acc = 0.0;
        let mut ypow = 1.0;
        let xpows: Vec<f64> = (0..=n)
            .scan(1.0, |s, _| {
                let v = *s;
                *s *= x;
                Some(v)
            })
            .collect();
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc += to_f64(c) * xpows[n - j] * ypow;
            }
            ypow *= y;
        }
        acc
    }

    pub fn eval_exact(&self, x: &Rational, y: &Rational) -> Rational {
        let n = self.degree();
        let mut acc = Rational::zero();
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc += c * pow(x, n - j) * pow(y, j);
            }
        }
        acc
    }

    /// `(x² + y²)^q`.
    pub fn r2_pow(q: usize) -> Self {
        let coeffs = (0..=2 * q)
            .map(|j| {
                if j % 2 == 0 {
                    Rational::from_integer(binomial(q, j / 2))
                } else {
                    Rational::zero()
                }
            })
            .collect();
        HomPoly { coeffs }
    }

    pub fn to_vector(&self) -> Vec<Rational> {
        self.coeffs.clone()
    }
}

fn pow(base: &Rational, exp: usize) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Product of homogeneous polynomials; degrees add.
pub fn hp_mul(p: &HomPoly, q: &HomPoly) -> HomPoly {
    let mut coeffs = vec![Rational::zero(); p.degree() + q.degree() + 1];
    for (i, a) in p.coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in q.coeffs.iter().enumerate() {
            if !b.is_zero() {
                coeffs[i + j] += a * b;
            }
        }
    }
    HomPoly { coeffs }
}

pub fn derive(p: &HomPoly, var: Var) -> HomPoly {
    p.derive(var)
}

pub fn laplace_flat(p: &HomPoly) -> Result<HomPoly> {
    p.laplace_flat()
}

/// `(Re (x+iy)^m, Im (x+iy)^m)` by binomial expansion.
pub fn expand_re_im_zm(m: usize) -> (HomPoly, HomPoly) {
    let mut re = HomPoly::zero(m);
    let mut im = HomPoly::zero(m);
    // (x + iy)^m = Σ C(m,j) x^(m-j) i^j y^j
    for j in 0..=m {
        let c = Rational::from_integer(binomial(m, j));
        match j % 4 {
            0 => re.coeffs[j] = c,
            1 => im.coeffs[j] = c,
            2 => re.coeffs[j] = -c,
            _ => im.coeffs[j] = -c,
        }
    }
    (re, im)
}

/// `((x²+y²)^q Re z^p, (x²+y²)^q Im z^p)` with `p = n - 2q`.
pub fn irr_basis(n: usize, q: usize) -> Result<(HomPoly, HomPoly)> {
    if 2 * q > n {
        return Err(domain(format!(
            "Irr summand q={q} does not exist in degree {n}"
        )));
    }
    let (re, im) = expand_re_im_zm(n - 2 * q);
    let r2q = HomPoly::r2_pow(q);
    Ok((hp_mul(&r2q, &re), hp_mul(&r2q, &im)))
}

/// Coefficients of one S¹-irreducible summand in a harmonic decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrrComponent {
    pub q: usize,
    pub p: usize,
    /// Coefficient of `(x²+y²)^q Re z^p`.
    pub a: Rational,
    /// Coefficient of `(x²+y²)^q Im z^p`; zero when `p = 0`.
    pub b: Rational,
}

/// Columns: `Re`/`Im` basis vectors of `Irr^q` in order of increasing `q`;
/// the `Im` column is omitted for `p = 0`. Square of size `n + 1`.
pub(crate) fn irr_change_of_basis(n: usize) -> (Matrix, Vec<(usize, bool)>) {
    let mut cols = Vec::with_capacity(n + 1);
    let mut labels = Vec::with_capacity(n + 1);
    for q in 0..=n / 2 {
        let (re, im) = irr_basis(n, q).expect("q within range");
        cols.push(re.into_coeffs());
        labels.push((q, false));
        if n - 2 * q > 0 {
            cols.push(im.into_coeffs());
            labels.push((q, true));
        }
    }
    (Matrix::from_columns(n + 1, &cols), labels)
}

/// Unique decomposition `p = Σ_q (x²+y²)^q (a_q Re z^(n-2q) + b_q Im z^(n-2q))`,
/// obtained by an exact solve against the Irr basis.
pub fn harmonic_decompose(p: &HomPoly) -> Vec<IrrComponent> {
    let n = p.degree();
    let (basis, labels) = irr_change_of_basis(n);
    let coords = basis
        .solve(&p.coeffs)
        .expect("the Irr summands span the homogeneous polynomials");
    let mut out: Vec<IrrComponent> = (0..=n / 2)
        .map(|q| IrrComponent {
            q,
            p: n - 2 * q,
            a: Rational::zero(),
            b: Rational::zero(),
        })
        .collect();
    for ((q, is_im), c) in labels.into_iter().zip(coords) {
        if is_im {
            out[q].b = c;
        } else {
            out[q].a = c;
        }
    }
    out.retain(|c| !(c.a.is_zero() && c.b.is_zero()));
    out
}

/// Inverse of [`harmonic_decompose`].
pub fn harmonic_reconstruct(degree: usize, parts: &[IrrComponent]) -> Result<HomPoly> {
    let mut acc = HomPoly::zero(degree);
    for part in parts {
        if part.p + 2 * part.q != degree {
            return Err(domain(format!(
                "component (q={}, p={}) does not live in degree {degree}",
                part.q, part.p
            )));
        }
        let (re, im) = irr_basis(degree, part.q)?;
        acc += &re.scale(&part.a);
        acc += &im.scale(&part.b);
    }
    Ok(acc)
}

impl Add for &HomPoly {
    type Output = HomPoly;

    fn add(self, rhs: &HomPoly) -> HomPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &HomPoly {
    type Output = HomPoly;

    fn sub(self, rhs: &HomPoly) -> HomPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl AddAssign<&HomPoly> for HomPoly {
    fn add_assign(&mut self, rhs: &HomPoly) {
        assert_eq!(
            self.degree(),
            rhs.degree(),
            "adding polynomials of different degree"
        );
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl SubAssign<&HomPoly> for HomPoly {
    fn sub_assign(&mut self, rhs: &HomPoly) {
        assert_eq!(
            self.degree(),
            rhs.degree(),
            "subtracting polynomials of different degree"
        );
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

impl Neg for &HomPoly {
    type Output = HomPoly;

    fn neg(self) -> HomPoly {
        HomPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for HomPoly {
    type Output = HomPoly;

    fn neg(self) -> HomPoly {
        -&self
    }
}

impl Mul for &HomPoly {
    type Output = HomPoly;

    fn mul(self, rhs: &HomPoly) -> HomPoly {
        hp_mul(self, rhs)
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, i: usize, j: usize) -> fmt::Result {
    let mut first = true;
    for (var, e) in [("x", i), ("y", j)] {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if e == 1 {
            write!(f, "{var}")?;
        } else {
            write!(f, "{var}^{e}")?;
        }
    }
    Ok(())
}

fn write_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (usize, usize, &'a Rational)>,
) -> fmt::Result {
    let mut any = false;
    for (i, j, c) in terms {
        let abs = c.abs();
        if any {
            write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
        } else if c.is_negative() {
            write!(f, "-")?;
        }
        any = true;
        if i + j == 0 {
            write!(f, "{abs}")?;
        } else {
            if !abs.is_one() {
                write!(f, "{abs}*")?;
            }
            write_monomial(f, i, j)?;
        }
    }
    if !any {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for HomPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms())
    }
}

impl fmt::Debug for HomPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HomPoly[deg {}]({self})", self.degree())
    }
}

/// A finite sum of homogeneous components. Absent degrees are zero and zero
/// components are never stored.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct GradedPoly {
    components: BTreeMap<usize, HomPoly>,
}

impl GradedPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_component(HomPoly::constant(c))
    }

    pub fn from_component(p: HomPoly) -> Self {
        let mut g = Self::zero();
        g.add_component(&p);
        g
    }

    pub fn from_components(parts: impl IntoIterator<Item = HomPoly>) -> Self {
        let mut g = Self::zero();
        for p in parts {
            g.add_component(&p);
        }
        g
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// The degree-`n` component `[self]_n`, zero when absent.
    pub fn component(&self, n: usize) -> HomPoly {
        self.components
            .get(&n)
            .cloned()
            .unwrap_or_else(|| HomPoly::zero(n))
    }

    pub fn get(&self, n: usize) -> Option<&HomPoly> {
        self.components.get(&n)
    }

    pub fn components(&self) -> impl Iterator<Item = (usize, &HomPoly)> + '_ {
        self.components.iter().map(|(&n, p)| (n, p))
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.components.keys().copied()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.components.keys().next_back().copied()
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.components.keys().next().copied()
    }

    pub fn add_component(&mut self, p: &HomPoly) {
        if p.is_zero() {
            return;
        }
        let n = p.degree();
        match self.components.get_mut(&n) {
            Some(existing) => {
                *existing += p;
                if existing.is_zero() {
                    self.components.remove(&n);
                }
            }
            None => {
                self.components.insert(n, p.clone());
            }
        }
    }

    pub fn set_component(&mut self, p: HomPoly) {
        let n = p.degree();
        if p.is_zero() {
            self.components.remove(&n);
        } else {
            self.components.insert(n, p);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for p in self.components.values() {
            out.add_component(&p.scale(c));
        }
        out
    }

    /// Components of degree `<= max_degree`.
    pub fn truncate(&self, max_degree: usize) -> Self {
        GradedPoly {
            components: self
                .components
                .range(..=max_degree)
                .map(|(&n, p)| (n, p.clone()))
                .collect(),
        }
    }

    /// Components with degree in `lo..=hi`.
    pub fn slice(&self, lo: usize, hi: usize) -> Self {
        if lo > hi {
            return Self::zero();
        }
        GradedPoly {
            components: self
                .components
                .range(lo..=hi)
                .map(|(&n, p)| (n, p.clone()))
                .collect(),
        }
    }

    /// Product with every component of degree above `max_degree` discarded.
    pub fn mul_truncated(&self, other: &GradedPoly, max_degree: usize) -> Self {
        let mut out = Self::zero();
        for (&a, p) in &self.components {
            for (&b, q) in other.components.range(..=max_degree.saturating_sub(a)) {
                if a + b <= max_degree {
                    out.add_component(&hp_mul(p, q));
                }
            }
        }
        out
    }

    /// Full product, no truncation.
    pub fn mul_full(&self, other: &GradedPoly) -> Self {
        self.mul_truncated(other, usize::MAX)
    }

    /// The single component `[self · other]_n`.
    pub fn product_component(&self, other: &GradedPoly, n: usize) -> HomPoly {
        let mut acc = HomPoly::zero(n);
        for (&a, p) in self.components.range(..=n) {
            if let Some(q) = other.components.get(&(n - a)) {
                acc += &hp_mul(p, q);
            }
        }
        acc
    }

    pub fn derive(&self, var: Var) -> Self {
        let mut out = Self::zero();
        for p in self.components.values() {
            if p.degree() > 0 {
                out.add_component(&p.derive(var));
            }
        }
        out
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.components.values().map(|p| p.eval(x, y)).sum()
    }
}

impl Add for &GradedPoly {
    type Output = GradedPoly;

    fn add(self, rhs: &GradedPoly) -> GradedPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &GradedPoly {
    type Output = GradedPoly;

    fn sub(self, rhs: &GradedPoly) -> GradedPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl AddAssign<&GradedPoly> for GradedPoly {
    fn add_assign(&mut self, rhs: &GradedPoly) {
        for p in rhs.components.values() {
            self.add_component(p);
        }
    }
}

impl SubAssign<&GradedPoly> for GradedPoly {
    fn sub_assign(&mut self, rhs: &GradedPoly) {
        for p in rhs.components.values() {
            self.add_component(&-p);
        }
    }
}

impl Neg for &GradedPoly {
    type Output = GradedPoly;

    fn neg(self) -> GradedPoly {
        GradedPoly {
            components: self.components.iter().map(|(&n, p)| (n, -p)).collect(),
        }
    }
}

impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.components.values().flat_map(|p| p.terms()))
    }
}

impl fmt::Debug for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedPoly({self})")
    }
}

/// `Q₁ + i Q₂` with homogeneous real and imaginary parts of equal degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CxHomPoly {
    pub re: HomPoly,
    pub im: HomPoly,
}

impl CxHomPoly {
    pub fn new(re: HomPoly, im: HomPoly) -> Result<Self> {
        if re.degree() != im.degree() {
            return Err(domain(format!(
                "real part has degree {}, imaginary part degree {}",
                re.degree(),
                im.degree()
            )));
        }
        Ok(CxHomPoly { re, im })
    }

    pub fn zero(degree: usize) -> Self {
        CxHomPoly {
            re: HomPoly::zero(degree),
            im: HomPoly::zero(degree),
        }
    }

    pub fn real(re: HomPoly) -> Self {
        let im = HomPoly::zero(re.degree());
        CxHomPoly { re, im }
    }

    /// `(x + iy)^m`.
    pub fn z_pow(m: usize) -> Self {
        let (re, im) = expand_re_im_zm(m);
        CxHomPoly { re, im }
    }

    /// `(x - iy)^m`.
    pub fn zbar_pow(m: usize) -> Self {
        let (re, im) = expand_re_im_zm(m);
        CxHomPoly { re, im: -im }
    }

    pub fn degree(&self) -> usize {
        self.re.degree()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn mul(&self, other: &CxHomPoly) -> CxHomPoly {
        CxHomPoly {
            re: &hp_mul(&self.re, &other.re) - &hp_mul(&self.im, &other.im),
            im: &hp_mul(&self.re, &other.im) + &hp_mul(&self.im, &other.re),
        }
    }

    /// Multiplication by `i`.
    pub fn times_i(&self) -> CxHomPoly {
        CxHomPoly {
            re: -&self.im,
            im: self.re.clone(),
        }
    }

    pub fn scale(&self, c: &Rational) -> CxHomPoly {
        CxHomPoly {
            re: self.re.scale(c),
            im: self.im.scale(c),
        }
    }

    /// Wirtinger derivative `∂_z = (∂_x - i ∂_y) / 2`.
    pub fn d_z(&self) -> CxHomPoly {
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        // (A + iB) -> ((A_x + B_y) + i (B_x - A_y)) / 2
        CxHomPoly {
            re: (&self.re.derive(Var::X) + &self.im.derive(Var::Y)).scale(&half),
            im: (&self.im.derive(Var::X) - &self.re.derive(Var::Y)).scale(&half),
        }
    }
}

/// `{i, j, c}` monomial record used in all structured output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub i: usize,
    pub j: usize,
    pub c: String,
}

impl HomPoly {
    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms()
            .map(|(i, j, c)| TermRecord {
                i,
                j,
                c: format_rational(c),
            })
            .collect()
    }
}

impl GradedPoly {
    pub fn to_records(&self) -> Vec<TermRecord> {
        self.components
            .values()
            .flat_map(|p| p.to_records())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use proptest::prelude::*;

    fn p(coeffs: &[i64]) -> HomPoly {
        HomPoly::from_ints(coeffs)
    }

    #[test]
    fn products() {
        assert_eq!(hp_mul(&HomPoly::x(), &HomPoly::y()), p(&[0, 1, 0]));
        assert_eq!(hp_mul(&p(&[1, 0, -1]), &p(&[1])), p(&[1, 0, -1]));
        // (x + y)(x - y) = x² - y², the coefficient convolution [1,1]*[1,-1].
        assert_eq!(hp_mul(&p(&[1, 1]), &p(&[1, -1])), p(&[1, 0, -1]));
    }

    #[test]
    fn derivatives() {
        // ∂x(x³ - 3xy²) = 3x² - 3y²
        assert_eq!(p(&[1, 0, -3, 0]).derive(Var::X), p(&[3, 0, -3]));
        assert_eq!(p(&[1, 0, 0, 0, 0]).derive(Var::Y), HomPoly::zero(3));
        assert_eq!(p(&[0, 1, 0]).derive(Var::X), HomPoly::y());
        assert_eq!(p(&[5]).derive(Var::X), HomPoly::zero(0));
    }

    #[test]
    fn flat_laplacian() {
        assert_eq!(
            HomPoly::r2_pow(3).laplace_flat().unwrap(),
            HomPoly::r2_pow(2).scale(&int(36))
        );
        for m in 2..12 {
            assert!(expand_re_im_zm(m).0.laplace_flat().unwrap().is_zero());
        }
        // x²y² -> 2y² + 2x²
        assert_eq!(p(&[0, 0, 1, 0, 0]).laplace_flat().unwrap(), p(&[2, 0, 2]));
        assert!(p(&[1, 1]).laplace_flat().is_err());
    }

    #[test]
    fn laplacian_of_radial_powers() {
        for n in 1..=10usize {
            let expected = HomPoly::r2_pow(n - 1).scale(&int(4 * (n * n) as i64));
            assert_eq!(HomPoly::r2_pow(n).laplace_flat().unwrap(), expected);
        }
    }

    #[test]
    fn re_im_powers() {
        assert_eq!(expand_re_im_zm(0), (p(&[1]), p(&[0])));
        assert_eq!(expand_re_im_zm(2), (p(&[1, 0, -1]), p(&[0, 2, 0])));
        assert_eq!(expand_re_im_zm(3), (p(&[1, 0, -3, 0]), p(&[0, 3, 0, -1])));
    }

    #[test]
    fn irr_basis_examples() {
        assert_eq!(
            irr_basis(4, 2).unwrap(),
            (HomPoly::r2_pow(2), HomPoly::zero(4))
        );
        assert_eq!(irr_basis(2, 0).unwrap(), (p(&[1, 0, -1]), p(&[0, 2, 0])));
        assert_eq!(
            irr_basis(3, 1).unwrap(),
            (p(&[1, 0, 1, 0]), p(&[0, 1, 0, 1]))
        );
        assert!(irr_basis(3, 2).is_err());
    }

    #[test]
    fn harmonic_decomposition_examples() {
        let parts = harmonic_decompose(&p(&[1, 0, 0]));
        assert_eq!(
            parts,
            vec![
                IrrComponent {
                    q: 0,
                    p: 2,
                    a: rat(1, 2),
                    b: rat(0, 1)
                },
                IrrComponent {
                    q: 1,
                    p: 0,
                    a: rat(1, 2),
                    b: rat(0, 1)
                },
            ]
        );
        for k in 0..6 {
            assert_eq!(
                harmonic_decompose(&HomPoly::r2_pow(k)),
                vec![IrrComponent {
                    q: k,
                    p: 0,
                    a: int(1),
                    b: int(0)
                }]
            );
        }
        assert_eq!(
            harmonic_decompose(&expand_re_im_zm(5).0),
            vec![IrrComponent {
                q: 0,
                p: 5,
                a: int(1),
                b: int(0)
            }]
        );
    }

    #[test]
    fn graded_truncation_and_extraction() {
        let x = GradedPoly::from_component(HomPoly::x());
        let y = GradedPoly::from_component(HomPoly::y());
        assert!(x.mul_truncated(&y, 1).is_zero());
        assert_eq!(x.mul_truncated(&y, 2).component(2), p(&[0, 1, 0]));
        assert_eq!(x.component(7), HomPoly::zero(7));
        let s = &x + &GradedPoly::from_component(-HomPoly::x());
        assert!(s.is_zero());
    }

    #[test]
    fn wirtinger_of_z_power() {
        // ∂_z z^4 = 4 z^3, ∂_z z̄ = 0
        assert_eq!(
            CxHomPoly::z_pow(4).d_z(),
            CxHomPoly::z_pow(3).scale(&int(4))
        );
        assert!(CxHomPoly::zbar_pow(3).d_z().is_zero());
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, 0, -3, 0]).to_string(), "x^3 - 3*x*y^2");
        assert_eq!(HomPoly::zero(2).to_string(), "0");
        assert_eq!(HomPoly::from_coeffs(vec![rat(-1, 2)]).to_string(), "-1/2");
    }

    fn small_poly(max_deg: usize) -> impl Strategy<Value = HomPoly> {
        (0..=max_deg).prop_flat_map(|n| {
            prop::collection::vec((-6i64..=6, 1i64..=4), n + 1).prop_map(|cs| {
                HomPoly::from_coeffs(cs.into_iter().map(|(a, b)| rat(a, b)).collect())
            })
        })
    }

    proptest! {
        #[test]
        fn leibniz_rule(a in small_poly(12), b in small_poly(12)) {
            for var in [Var::X, Var::Y] {
                let lhs = hp_mul(&a, &b).derive(var);
                let rhs_terms = [hp_mul(&a.derive(var), &b), hp_mul(&a, &b.derive(var))];
                let mut rhs = HomPoly::zero(lhs.degree());
                for t in &rhs_terms {
                    // derivative of a constant has degree 0, not -1; skip those terms
                    if t.degree() == lhs.degree() {
                        rhs += t;
                    } else {
                        prop_assert!(t.is_zero());
                    }
                }
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn euler_identity(a in small_poly(12)) {
            let n = a.degree();
            if n > 0 {
                let lhs = &a.derive(Var::X).shift(Var::X) + &a.derive(Var::Y).shift(Var::Y);
                prop_assert_eq!(lhs, a.scale(&int(n as i64)));
            }
        }

        #[test]
        fn harmonic_roundtrip(a in small_poly(20)) {
            let parts = harmonic_decompose(&a);
            for c in &parts {
                prop_assert_eq!(c.p + 2 * c.q, a.degree());
                if c.p == 0 {
                    prop_assert!(c.b.is_zero());
                }
            }
            prop_assert_eq!(harmonic_reconstruct(a.degree(), &parts).unwrap(), a);
        }

        #[test]
        fn laplacian_kills_irr_zero(n in 2usize..16) {
            let (re, im) = irr_basis(n, 0).unwrap();
            prop_assert!(re.laplace_flat().unwrap().is_zero());
            prop_assert!(im.laplace_flat().unwrap().is_zero());
        }
    }
}
