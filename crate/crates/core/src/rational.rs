//! Multivariate polynomials over `Q` and dense exact linear algebra.
//!
//! Polynomial degrees here are ordinary total degrees; the cohomological grading
//! (linear forms in degree 2) is twice that and is applied by callers.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exponent vector of a monomial.
pub type Monomial = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl RationalPoly {
    pub fn zero(nvars: usize) -> Self {
        RationalPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    /// The coordinate function `x_{i+1}`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = vec![0; nvars];
        m[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(m, BigRational::one());
        p
    }

    /// The linear form `Σ a_i x_i`.
    pub fn linear(coeffs: &[BigRational]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, a) in coeffs.iter().enumerate() {
            let mut m = vec![0; n];
            m[i] = 1;
            p.add_term(m, a.clone());
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &[u32]) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        debug_assert_eq!(m.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    /// Total degree of the highest term; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    /// Homogeneous of the given total degree (zero counts as homogeneous).
    pub fn is_homogeneous_of(&self, deg: u32) -> bool {
        self.terms.keys().all(|m| m.iter().sum::<u32>() == deg)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero(self.nvars);
        if c.is_zero() {
            return out;
        }
        for (m, a) in &self.terms {
            out.terms.insert(m.clone(), a * c);
        }
        out
    }

    /// Substitute `x_i -> sign_i * x_{img_i}`.
    pub fn substitute_signed(&self, img: &[(usize, i8)]) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut nm = vec![0; self.nvars];
            let mut neg = false;
            for (i, &e) in m.iter().enumerate() {
                let (a, s) = img[i];
                nm[a] += e;
                if s < 0 && e % 2 == 1 {
                    neg = !neg;
                }
            }
            out.add_term(nm, if neg { -c.clone() } else { c.clone() });
        }
        out
    }

    /// Coefficients of a linear form; `None` if the polynomial is not one.
    pub fn linear_coeffs(&self) -> Option<Vec<BigRational>> {
        let mut out = vec![BigRational::zero(); self.nvars];
        for (m, c) in &self.terms {
            if m.iter().sum::<u32>() != 1 {
                return None;
            }
            let i = m.iter().position(|&e| e == 1).expect("degree one");
            out[i] = c.clone();
        }
        Some(out)
    }

    /// Exact division by a nonzero linear form. Uses lex order with the first
    /// variable of `h` as the leading one, so the leading term of `h` is a
    /// single variable and the remainder is zero iff division is exact.
    pub fn div_linear(&self, h: &RationalPoly) -> Option<RationalPoly> {
        let a = h.linear_coeffs().expect("divisor must be a linear form");
        let p = a.iter().position(|c| !c.is_zero()).expect("divisor must be nonzero");
        let key = |m: &Monomial| {
            let mut k = Vec::with_capacity(m.len());
            k.push(m[p]);
            k.extend(m.iter().enumerate().filter(|&(i, _)| i != p).map(|(_, &e)| e));
            k
        };
        let mut rest = self.clone();
        let mut quot = RationalPoly::zero(self.nvars);
        while let Some((m, c)) = rest.terms.iter().max_by(|x, y| key(x.0).cmp(&key(y.0))).map(|(m, c)| (m.clone(), c.clone())) {
            if m[p] == 0 {
                return None;
            }
            let mut qm = m.clone();
            qm[p] -= 1;
            let qc = &c / &a[p];
            let step = RationalPoly { nvars: self.nvars, terms: BTreeMap::from([(qm, qc)]) };
            rest = &rest - &(&step * h);
            quot = &quot + &step;
        }
        Some(quot)
    }

    /// Canonical representative modulo a linear form `h`: eliminate the first
    /// variable of `h` by substituting its solution on `h = 0`.
    pub fn reduce_mod_linear(&self, h: &RationalPoly) -> RationalPoly {
        let a = h.linear_coeffs().expect("modulus must be a linear form");
        let p = a.iter().position(|c| !c.is_zero()).expect("modulus must be nonzero");
        let mut sub_coeffs: Vec<BigRational> = a.iter().map(|c| -(c / &a[p])).collect();
        sub_coeffs[p] = BigRational::zero();
        let replacement = RationalPoly::linear(&sub_coeffs);
        let mut out = RationalPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut base = m.clone();
            let e = base[p];
            base[p] = 0;
            let mut term = RationalPoly { nvars: self.nvars, terms: BTreeMap::from([(base, c.clone())]) };
            for _ in 0..e {
                term = &term * &replacement;
            }
            out = &out + &term;
        }
        out
    }

    /// Coordinates in a monomial basis (all monomials of one degree).
    pub fn coords(&self, basis: &[Monomial]) -> Vec<BigRational> {
        basis.iter().map(|m| self.coeff(m)).collect()
    }

    pub fn from_coords(nvars: usize, basis: &[Monomial], v: &[BigRational]) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in basis.iter().zip(v) {
            p.add_term(m.clone(), c.clone());
        }
        p
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.nvars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }
}

/// All monomials in `nvars` variables of total degree `deg`, in descending
/// lex order.
pub fn monomials(nvars: usize, deg: u32) -> Vec<Monomial> {
    fn rec(i: usize, left: u32, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    if nvars == 0 {
        return if deg == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    rec(0, deg, &mut vec![0; nvars], &mut out);
    out
}

impl Add for &RationalPoly {
    type Output = RationalPoly;
    fn add(self, rhs: &RationalPoly) -> RationalPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &RationalPoly {
    type Output = RationalPoly;
    fn sub(self, rhs: &RationalPoly) -> RationalPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &RationalPoly {
    type Output = RationalPoly;
    fn neg(self) -> RationalPoly {
        self.scale(&-BigRational::one())
    }
}

impl Mul for &RationalPoly {
    type Output = RationalPoly;
    fn mul(self, rhs: &RationalPoly) -> RationalPoly {
        let mut out = RationalPoly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let m: Monomial = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                out.add_term(m, c1 * c2);
            }
        }
        out
    }
}

/// Text such as `1/2*x1^2 - x1*x2`: terms by ascending total degree, and
/// within a degree in descending lex order.
impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Monomial, &BigRational)> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let (da, db) = (a.0.iter().sum::<u32>(), b.0.iter().sum::<u32>());
            da.cmp(&db).then_with(|| b.0.cmp(a.0))
        });
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let mag = c.abs();
            match (k, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, e) })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut Vec<Vec<BigRational>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(k) = (r..rows.len()).find(|&k| !rows[k][c].is_zero()) else { continue };
        rows.swap(r, k);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                    if !p.is_zero() {
                        *x -= &factor * p;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<BigRational>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// A basis of `{v : A v = 0}`.
pub fn nullspace(rows: &[Vec<BigRational>], ncols: usize) -> Vec<Vec<BigRational>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let mut is_pivot = vec![None; ncols];
    for (r, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(r);
    }
    (0..ncols)
        .filter(|&c| is_pivot[c].is_none())
        .map(|free| {
            let mut v = vec![BigRational::zero(); ncols];
            v[free] = BigRational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][free].clone();
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> RationalPoly {
        RationalPoly::var(3, i)
    }

    #[test]
    fn display_order() {
        let p = &(&x(0) * &x(0)).scale(&rat(1, 2)) - &(&x(0) * &x(1));
        assert_eq!(p.to_string(), "1/2*x1^2 - x1*x2");
        let q = &(&x(2) + &RationalPoly::constant(3, rat(-3, 1))) + &x(0);
        assert_eq!(q.to_string(), "-3 + x1 + x3");
        assert_eq!(RationalPoly::zero(2).to_string(), "0");
    }

    #[test]
    fn linear_division() {
        let h = &x(0) - &x(1);
        let f = &(&x(0) * &x(0)) - &(&x(1) * &x(1));
        assert_eq!(f.div_linear(&h), Some(&x(0) + &x(1)));
        assert_eq!(x(2).div_linear(&h), None);
        assert_eq!(f.reduce_mod_linear(&h), RationalPoly::zero(3));
        assert_eq!(x(0).reduce_mod_linear(&h), x(1));
    }

    #[test]
    fn signed_substitution() {
        let img = [(1, 1i8), (0, 1), (2, -1)];
        assert_eq!(x(0).substitute_signed(&img), x(1));
        let p = &x(2) * &x(2);
        assert_eq!(p.substitute_signed(&img), p);
        assert_eq!(x(2).substitute_signed(&img), -&x(2));
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(3, 2).len(), 6);
        assert_eq!(monomials(3, 0), vec![vec![0, 0, 0]]);
        assert_eq!(monomials(2, 3)[0], vec![3, 0]);
    }

    #[test]
    fn nullspace_small() {
        let rows = vec![vec![rat(1, 1), rat(-1, 1), rat(0, 1)]];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!((&v[0] - &v[1]).is_zero());
        }
        assert_eq!(rank(&rows, 3), 1);
    }
}
