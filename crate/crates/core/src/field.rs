//! Arithmetic in GF(2^m) for 2 <= m <= 16 and in GF(2^m)[x].
//!
//! Elements are `u16` values in polynomial basis: bit `i` is the coefficient
//! of `alpha^i`. Multiplication is carry-less shift-and-reduce against the
//! field modulus, so no lookup tables are involved.

use crate::error::{Error, Result};

/// A field element of GF(2^m), stored in polynomial basis.
pub type Elem = u16;

/// The binary extension field GF(2^m).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Field {
    m: u32,
    modulus: u32,
}

impl Field {
    /// Builds GF(2^m) with the lexicographically smallest irreducible modulus of degree `m`.
    pub fn new(m: u32) -> Result<Self> {
        if !(2..=16).contains(&m) {
            return Err(Error::Parameter(format!(
                "extension degree {m} outside 2..=16"
            )));
        }
        let modulus = (1u32 << m..1u32 << (m + 1))
            .find(|&p| is_irreducible_gf2(p))
            .expect("an irreducible polynomial exists for every degree");
        Ok(Field { m, modulus })
    }

    /// Builds GF(2^m) for an explicit modulus, checked for irreducibility.
    pub fn with_modulus(m: u32, modulus: u32) -> Result<Self> {
        if !(2..=16).contains(&m) || modulus >> m != 1 || !is_irreducible_gf2(modulus) {
            return Err(Error::Parameter(format!(
                "0x{modulus:x} is not an irreducible polynomial of degree {m}"
            )));
        }
        Ok(Field { m, modulus })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// The modulus as an (m+1)-bit value.
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Number of elements, 2^m.
    pub fn order(&self) -> u32 {
        1 << self.m
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        let mut prod = 0u32;
        let (a, mut b) = (a as u32, b as u32);
        let mut i = 0;
        while b != 0 {
            if b & 1 != 0 {
                prod ^= a << i;
            }
            b >>= 1;
            i += 1;
        }
        self.reduce(prod)
    }

    #[inline]
    fn reduce(&self, mut v: u32) -> Elem {
        let m = self.m;
        let mut top = 31 - v.leading_zeros().min(31);
        while v >> m != 0 {
            if v >> top & 1 != 0 {
                v ^= self.modulus << (top - m);
            }
            top -= 1;
        }
        v as Elem
    }

    #[inline]
    pub fn square(&self, a: Elem) -> Elem {
        self.mul(a, a)
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc: Elem = 1;
        while e != 0 {
            if e & 1 != 0 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, (1u64 << self.m) - 2))
    }

    /// Inverse of a value known to be nonzero.
    #[inline]
    pub(crate) fn inv_nz(&self, a: Elem) -> Elem {
        debug_assert!(a != 0);
        self.pow(a, (1u64 << self.m) - 2)
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// The unique square root, a^(2^(m-1)).
    pub fn sqrt(&self, a: Elem) -> Elem {
        let mut r = a;
        for _ in 1..self.m {
            r = self.square(r);
        }
        r
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..=(self.order() - 1) as Elem
    }
}

/// Trial division of a GF(2) polynomial by every polynomial of degree 1..=deg/2.
pub fn is_irreducible_gf2(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let deg = 31 - p.leading_zeros();
    if deg == 0 {
        return false;
    }
    (2u32..1 << (deg / 2 + 1)).all(|d| gf2_rem(p, d) != 0)
}

fn gf2_rem(mut a: u32, b: u32) -> u32 {
    let db = 31 - b.leading_zeros();
    while a != 0 && 31 - a.leading_zeros() >= db {
        let da = 31 - a.leading_zeros();
        a ^= b << (da - db);
    }
    a
}

/// A polynomial over GF(2^m), lowest degree first, with no trailing zeros.
///
/// The field is not stored; every operation takes it as an argument.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Elem>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![1] }
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Poly { coeffs: vec![0, 1] }
    }

    pub fn constant(c: Elem) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * x^d`.
    pub fn monomial(c: Elem, d: usize) -> Self {
        let mut v = vec![0; d + 1];
        v[d] = c;
        Self::from_coeffs(v)
    }

    pub fn from_coeffs(mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// `prod (x - r)` over the given roots.
    pub fn from_roots(f: &Field, roots: &[Elem]) -> Self {
        let mut p = Poly::one();
        for &r in roots {
            p = p.mul(f, &Poly::from_coeffs(vec![r, 1]));
        }
        p
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// Degree, with `None` standing for minus infinity (the zero polynomial).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn lead(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut c = long.coeffs.clone();
        for (a, b) in c.iter_mut().zip(&short.coeffs) {
            *a ^= b;
        }
        Poly::from_coeffs(c)
    }

    pub fn scale(&self, f: &Field, s: Elem) -> Poly {
        if s == 0 {
            return Poly::zero();
        }
        Poly::from_coeffs(self.coeffs.iter().map(|&c| f.mul(c, s)).collect())
    }

    /// Multiplication by `x^d`.
    pub fn shift(&self, d: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![0; d];
        c.extend_from_slice(&self.coeffs);
        Poly { coeffs: c }
    }

    pub fn mul(&self, f: &Field, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] ^= f.mul(a, b);
            }
        }
        Poly::from_coeffs(c)
    }

    /// Squaring maps `sum c_i x^i` to `sum c_i^2 x^(2i)`.
    pub fn square(&self, f: &Field) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![0; 2 * self.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            c[2 * i] = f.square(a);
        }
        Poly::from_coeffs(c)
    }

    /// Euclidean division; returns `(q, r)` with `self = q*d + r`, `deg r < deg d`.
    pub fn div_rem(&self, f: &Field, d: &Poly) -> Result<(Poly, Poly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let lead_inv = f.inv_nz(d.lead());
        let mut q = vec![0; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i];
            if c == 0 {
                continue;
            }
            let t = f.mul(c, lead_inv);
            q[i - dd] = t;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                rem[i - dd + j] ^= f.mul(t, dc);
            }
        }
        rem.truncate(dd);
        Ok((Poly::from_coeffs(q), Poly::from_coeffs(rem)))
    }

    pub fn rem(&self, f: &Field, d: &Poly) -> Result<Poly> {
        Ok(self.div_rem(f, d)?.1)
    }

    pub fn mul_mod(&self, f: &Field, other: &Poly, modulus: &Poly) -> Result<Poly> {
        self.mul(f, other).rem(f, modulus)
    }

    pub fn monic(&self, f: &Field) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(f, f.inv_nz(self.lead()))
    }

    /// Monic greatest common divisor (zero when both inputs are zero).
    pub fn gcd(&self, f: &Field, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(f, &b).expect("b is nonzero");
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// Horner evaluation at `x0`.
    pub fn eval(&self, f: &Field, x0: Elem) -> Elem {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| f.mul(acc, x0) ^ c)
    }

    /// Formal derivative; in characteristic 2 only odd-degree terms survive.
    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() < 2 {
            return Poly::zero();
        }
        let c = (1..self.coeffs.len())
            .map(|i| if i % 2 == 1 { self.coeffs[i] } else { 0 })
            .collect();
        Poly::from_coeffs(c)
    }

    /// True iff `gcd(f, f')` is a nonzero constant.
    pub fn is_squarefree(&self, f: &Field) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => {
                let d = self.derivative();
                !d.is_zero() && self.gcd(f, &d).degree() == Some(0)
            }
        }
    }

    /// Inverse modulo `modulus`; fails when the two are not coprime.
    pub fn inv_mod(&self, f: &Field, modulus: &Poly) -> Result<Poly> {
        let (mut r0, mut r1) = (modulus.clone(), self.rem(f, modulus)?);
        let (mut b0, mut b1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(f, &r1)?;
            let b = b0.add(&q.mul(f, &b1));
            r0 = r1;
            r1 = r;
            b0 = b1;
            b1 = b;
        }
        if r0.degree() != Some(0) {
            return Err(Error::NotInvertible);
        }
        Ok(b0.scale(f, f.inv_nz(r0.lead())).rem(f, modulus)?)
    }
}

/// Extended Euclid on `(g, t)` stopped at the first remainder of degree <= `dstop`.
///
/// Returns `(a, b)` with `a = b*t (mod g)`, `deg a <= dstop`.
pub fn eea_stop(f: &Field, g: &Poly, t: &Poly, dstop: usize) -> (Poly, Poly) {
    let (mut r0, mut r1) = (g.clone(), t.clone());
    let (mut b0, mut b1) = (Poly::zero(), Poly::one());
    while r1.degree().is_some_and(|d| d > dstop) {
        let (q, r) = r0.div_rem(f, &r1).expect("r1 is nonzero");
        let b = b0.add(&q.mul(f, &b1));
        r0 = r1;
        r1 = r;
        b0 = b1;
        b1 = b;
    }
    (r1, b1)
}

/// Square roots in GF(2^m)[x]/(G) for a square-free `G`.
///
/// Precomputes `sqrt(x) mod G` by solving the linear system
/// `sum s_i * (x^(2i) mod G) = x` over GF(2^m), then `sqrt(t)` splits `t`
/// into even and odd parts.
#[derive(Clone, Debug)]
pub struct SqrtMod {
    modulus: Poly,
    sqrt_x: Poly,
}

impl SqrtMod {
    pub fn new(f: &Field, g: &Poly) -> Result<Self> {
        let r = g
            .degree()
            .filter(|&d| d >= 1)
            .ok_or_else(|| Error::Parameter("modulus must have degree >= 1".into()))?;
        let x = Poly::x().rem(f, g)?;
        let sqrt_x = if r == 1 {
            // GF(2^m)[x]/(x - c) is GF(2^m) itself.
            Poly::constant(f.sqrt(x.coeff(0)))
        } else {
            // Column i holds x^(2i) mod G.
            let mut cols = Vec::with_capacity(r);
            let x2 = Poly::monomial(1, 2).rem(f, g)?;
            let mut cur = Poly::one();
            for _ in 0..r {
                cols.push(cur.clone());
                cur = cur.mul_mod(f, &x2, g)?;
            }
            let mut a: Vec<Vec<Elem>> = (0..r)
                .map(|row| {
                    let mut v: Vec<Elem> = cols.iter().map(|c| c.coeff(row)).collect();
                    v.push(x.coeff(row));
                    v
                })
                .collect();
            let sol = solve_square(f, &mut a, r).ok_or(Error::Internal(
                "squaring is not bijective modulo G (G not square-free?)".into(),
            ))?;
            Poly::from_coeffs(sol.into_iter().map(|s| f.sqrt(s)).collect())
        };
        let out = SqrtMod {
            modulus: g.clone(),
            sqrt_x,
        };
        if out.sqrt_x.square(f).rem(f, g)? != x {
            return Err(Error::Internal("sqrt(x) mod G failed verification".into()));
        }
        Ok(out)
    }

    pub fn sqrt_x(&self) -> &Poly {
        &self.sqrt_x
    }

    /// Returns `R` with `R^2 = t (mod G)` and `deg R < deg G`.
    pub fn sqrt(&self, f: &Field, t: &Poly) -> Result<Poly> {
        let g = &self.modulus;
        let t = t.rem(f, g)?;
        let c = t.coeffs();
        let even: Vec<Elem> = c.iter().step_by(2).map(|&v| f.sqrt(v)).collect();
        let odd: Vec<Elem> = c.iter().skip(1).step_by(2).map(|&v| f.sqrt(v)).collect();
        let r = Poly::from_coeffs(even)
            .add(&Poly::from_coeffs(odd).mul(f, &self.sqrt_x))
            .rem(f, g)?;
        if r.square(f).rem(f, g)? != t {
            return Err(Error::Internal("polynomial square root check failed".into()));
        }
        Ok(r)
    }
}

/// Gaussian elimination on an augmented `n x (n+1)` system over GF(2^m).
pub(crate) fn solve_square(f: &Field, a: &mut [Vec<Elem>], n: usize) -> Option<Vec<Elem>> {
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r][col] != 0)?;
        a.swap(col, piv);
        let inv = f.inv_nz(a[col][col]);
        for v in a[col].iter_mut() {
            *v = f.mul(*v, inv);
        }
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == col || row[col] == 0 {
                continue;
            }
            let factor = row[col];
            for (v, &p) in row.iter_mut().zip(&pivot_row) {
                *v ^= f.mul(factor, p);
            }
        }
    }
    Some(a.iter().map(|row| row[n]).collect())
}
