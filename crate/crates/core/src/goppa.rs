//! Binary Goppa codes `Γ(L, G)` in alternant form.

use std::collections::HashSet;

use crate::binmat::{BinMatrix, BitVector};
use crate::error::{Error, Result};
use crate::field::{Elem, Field, Poly, SqrtMod};

/// A binary Goppa code with its parity and systematic generator matrices.
///
/// The generator is stored in the code's own coordinates: its columns
/// `colperm[0..k]` form an identity block, so the message bits of a codeword
/// `c` are `c[colperm[i]]`.
#[derive(Clone, Debug)]
pub struct GoppaCode {
    field: Field,
    support: Vec<Elem>,
    gpoly: Poly,
    parity_ext: Vec<Vec<Elem>>,
    parity_bin: BinMatrix,
    gen: BinMatrix,
    colperm: Vec<usize>,
    sqrt: Option<SqrtMod>,
}

fn check_support(field: &Field, support: &[Elem], g: &Poly) -> Result<()> {
    if support.is_empty() {
        return Err(Error::Construction("empty support".into()));
    }
    if support.len() > field.order() as usize {
        return Err(Error::Construction(format!(
            "support of length {} exceeds field order {}",
            support.len(),
            field.order()
        )));
    }
    let mut seen = HashSet::with_capacity(support.len());
    for (j, &a) in support.iter().enumerate() {
        if u32::from(a) >= field.order() {
            return Err(Error::Construction(format!("support element {a:#x} outside field")));
        }
        if !seen.insert(a) {
            return Err(Error::Construction(format!("repeated support element {a:#x} at {j}")));
        }
        if g.eval(field, a) == 0 {
            return Err(Error::Construction(format!("support element {a:#x} is a root of G")));
        }
    }
    Ok(())
}

/// Expands an `r x n` matrix over GF(2^m) into `m*r` binary rows; row
/// `i*m + b` holds bit `b` (coefficient of α^b) of row `i`.
pub fn expand_binary(field: &Field, ext: &[Vec<Elem>], n: usize) -> BinMatrix {
    let m = field.m() as usize;
    let mut h = BinMatrix::zeros(ext.len() * m, n);
    for (i, row) in ext.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            for b in 0..m {
                if v >> b & 1 == 1 {
                    h.set(i * m + b, j, true);
                }
            }
        }
    }
    h
}

/// Systematic basis of the right null space of `h`, read straight off its
/// reduced echelon form: one row per free column, identity on the free
/// columns. Returns the basis and `colperm` (free columns, then pivots).
fn systematic_kernel(h: &BinMatrix) -> (BinMatrix, Vec<usize>) {
    let n = h.cols();
    let (r, rank, pivots) = h.rref();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
    // Transposing the pivot rows turns "which pivots does free column f hit"
    // into a single row read.
    let rt = r.transpose();
    let mut gen = BinMatrix::zeros(free.len(), n);
    for (bi, &fc) in free.iter().enumerate() {
        gen.set(bi, fc, true);
        for pi in rt.row(fc).ones().filter(|&pi| pi < rank) {
            gen.set(bi, pivots[pi], true);
        }
    }
    let mut colperm = free;
    colperm.extend(pivots);
    (gen, colperm)
}

impl GoppaCode {
    /// Builds `Γ(L, G)` for a square-free `G` with no roots in `L`.
    pub fn build(field: Field, support: Vec<Elem>, gpoly: Poly) -> Result<Self> {
        match gpoly.degree() {
            None | Some(0) => {
                return Err(Error::Construction("Goppa polynomial must have degree >= 1".into()))
            }
            _ => {}
        }
        if !gpoly.is_squarefree(&field) {
            return Err(Error::Construction("Goppa polynomial is not square-free".into()));
        }
        check_support(&field, &support, &gpoly)?;
        let sqrt = SqrtMod::new(&field, &gpoly.monic(&field))?;
        let mut code = Self::assemble(field, support, gpoly, None)?;
        code.sqrt = Some(sqrt);
        Ok(code)
    }

    /// Like [`GoppaCode::build`] but takes the systematic generator from the
    /// caller instead of computing one. The generator's shape, identity block
    /// and orthogonality to the parity matrix are checked; that its rows span
    /// the whole code is the caller's responsibility.
    pub fn build_with_generator(
        field: Field,
        support: Vec<Elem>,
        gpoly: Poly,
        gen: BinMatrix,
        colperm: Vec<usize>,
    ) -> Result<Self> {
        if gpoly.degree().unwrap_or(0) == 0 || !gpoly.is_squarefree(&field) {
            return Err(Error::Construction(
                "Goppa polynomial must be square-free of degree >= 1".into(),
            ));
        }
        check_support(&field, &support, &gpoly)?;
        let sqrt = SqrtMod::new(&field, &gpoly.monic(&field))?;
        let mut code = Self::assemble(field, support, gpoly, Some((gen, colperm)))?;
        code.sqrt = Some(sqrt);
        Ok(code)
    }

    /// Builds the alternant code for any `G` without roots in `L`, skipping
    /// the square-free requirement. Such codes cannot be Patterson-decoded.
    pub fn build_unchecked(field: Field, support: Vec<Elem>, gpoly: Poly) -> Result<Self> {
        if gpoly.degree().unwrap_or(0) == 0 {
            return Err(Error::Construction("Goppa polynomial must have degree >= 1".into()));
        }
        check_support(&field, &support, &gpoly)?;
        Self::assemble(field, support, gpoly, None)
    }

    fn assemble(
        field: Field,
        support: Vec<Elem>,
        gpoly: Poly,
        given: Option<(BinMatrix, Vec<usize>)>,
    ) -> Result<Self> {
        let n = support.len();
        let r = gpoly.degree().unwrap();
        let ginv: Vec<Elem> = support
            .iter()
            .map(|&a| field.inv_nz(gpoly.eval(&field, a)))
            .collect();
        let mut parity_ext = Vec::with_capacity(r);
        let mut row = ginv.clone();
        for _ in 0..r {
            let next: Vec<Elem> = row
                .iter()
                .zip(&support)
                .map(|(&v, &a)| field.mul(v, a))
                .collect();
            parity_ext.push(std::mem::replace(&mut row, next));
        }
        let parity_bin = expand_binary(&field, &parity_ext, n);
        if let Some((gen, colperm)) = given {
            let k = gen.rows();
            let code = GoppaCode {
                field,
                support,
                gpoly,
                parity_ext,
                parity_bin,
                gen: BinMatrix::zeros(k, n),
                colperm: Vec::new(),
                sqrt: None,
            };
            return code.with_generator(gen, colperm);
        }
        let (gen, colperm) = systematic_kernel(&parity_bin);
        if gen.rows() == 0 {
            return Err(Error::Construction("code has dimension 0".into()));
        }
        Ok(GoppaCode {
            field,
            support,
            gpoly,
            parity_ext,
            parity_bin,
            gen,
            colperm,
            sqrt: None,
        })
    }

    /// Replaces the generator by a caller-supplied systematic one.
    ///
    /// `gen` must have `k` rows, an identity on columns `colperm[0..k]`, and
    /// be orthogonal to the parity matrix.
    pub fn with_generator(mut self, gen: BinMatrix, colperm: Vec<usize>) -> Result<Self> {
        let (k, n) = (self.k(), self.n());
        if k == 0 {
            return Err(Error::Construction("code has dimension 0".into()));
        }
        if gen.rows() != k || gen.cols() != n || colperm.len() != n {
            return Err(Error::Structure("generator shape does not match the code".into()));
        }
        let mut seen = vec![false; n];
        for &c in &colperm {
            if c >= n || std::mem::replace(&mut seen[c], true) {
                return Err(Error::Structure("colperm is not a permutation".into()));
            }
        }
        for i in 0..k {
            for (j, &c) in colperm[..k].iter().enumerate() {
                if gen.get(i, c) != (i == j) {
                    return Err(Error::Structure("generator is not systematic on colperm".into()));
                }
            }
        }
        let ht = self.parity_bin.transpose();
        if (0..k).any(|i| !ht.vec_mul(&gen.row(i)).is_zero()) {
            return Err(Error::Structure("generator is not orthogonal to the parity".into()));
        }
        self.gen = gen;
        self.colperm = colperm;
        Ok(self)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn support(&self) -> &[Elem] {
        &self.support
    }

    pub fn gpoly(&self) -> &Poly {
        &self.gpoly
    }

    pub fn parity_ext(&self) -> &[Vec<Elem>] {
        &self.parity_ext
    }

    pub fn parity_bin(&self) -> &BinMatrix {
        &self.parity_bin
    }

    pub fn gen(&self) -> &BinMatrix {
        &self.gen
    }

    pub fn colperm(&self) -> &[usize] {
        &self.colperm
    }

    pub(crate) fn sqrt_mod(&self) -> Option<&SqrtMod> {
        self.sqrt.as_ref()
    }

    pub fn n(&self) -> usize {
        self.support.len()
    }

    pub fn k(&self) -> usize {
        self.gen.rows()
    }

    pub fn r(&self) -> usize {
        self.gpoly.degree().unwrap()
    }

    pub fn m(&self) -> u32 {
        self.field.m()
    }

    pub fn encode(&self, msg: &BitVector) -> Result<BitVector> {
        if msg.len() != self.k() {
            return Err(Error::Length {
                expected: self.k(),
                got: msg.len(),
            });
        }
        Ok(self.gen.vec_mul(msg))
    }

    /// Reads the message bits back out of a codeword.
    pub fn extract_message(&self, c: &BitVector) -> BitVector {
        BitVector::from_bits(self.colperm[..self.k()].iter().map(|&j| c.get(j)))
    }

    pub fn is_codeword(&self, y: &BitVector) -> bool {
        self.parity_bin.mul_vec(y).is_zero()
    }

    /// `s(x) = sum over y_j = 1 of 1/(x - L_j)`, reduced modulo `modulus`.
    pub fn syndrome_poly(&self, y: &BitVector, modulus: &Poly) -> Result<Poly> {
        if y.len() != self.n() {
            return Err(Error::Length {
                expected: self.n(),
                got: y.len(),
            });
        }
        let f = &self.field;
        let d = modulus.degree().ok_or(Error::DivisionByZero)?;
        if d == 0 {
            return Ok(Poly::zero());
        }
        let mc = modulus.coeffs();
        let mut acc = vec![0 as Elem; d];
        let mut q = vec![0 as Elem; d];
        for j in y.ones() {
            let a = self.support[j];
            // Synthetic division: M(x) = (x - a) q(x) + M(a), hence
            // 1/(x - a) = q(x) / M(a) modulo M.
            let mut carry = mc[d];
            q[d - 1] = carry;
            for i in (1..d).rev() {
                carry = f.add(mc[i], f.mul(carry, a));
                q[i - 1] = carry;
            }
            let rem = f.add(mc[0], f.mul(carry, a));
            let scale = f.inv(rem).map_err(|_| {
                Error::Construction(format!("support element {a:#x} is a root of the modulus"))
            })?;
            for (s, &qi) in acc.iter_mut().zip(&q) {
                *s ^= f.mul(qi, scale);
            }
        }
        Ok(Poly::from_coeffs(acc))
    }

    /// Exact minimum distance by enumerating all `2^k - 1` nonzero codewords.
    pub fn min_distance_exhaustive(&self) -> Result<usize> {
        let k = self.k();
        if k > 20 {
            return Err(Error::Capacity(format!("k = {k} exceeds the exhaustive limit of 20")));
        }
        let mut word = BitVector::zeros(self.n());
        let mut best = usize::MAX;
        // Gray-code walk: step i flips generator row trailing_zeros(i).
        for i in 1u32..1 << k {
            word.xor_assign(&self.gen.row(i.trailing_zeros() as usize));
            best = best.min(word.weight());
        }
        Ok(best)
    }
}

/// Convenience wrapper for [`GoppaCode::build`].
pub fn build_code(field: Field, support: Vec<Elem>, gpoly: Poly) -> Result<GoppaCode> {
    GoppaCode::build(field, support, gpoly)
}

/// Checks `Γ(L, G) = Γ(L, G²)`: equal dimensions and every generator row of
/// each code annihilated by the other code's binary parity matrix.
pub fn verify_prop1(field: Field, support: &[Elem], g: &Poly) -> Result<bool> {
    let c1 = GoppaCode::build(field, support.to_vec(), g.clone())?;
    let c2 = GoppaCode::build_unchecked(field, support.to_vec(), g.square(&field))?;
    if c1.k() != c2.k() {
        return Ok(false);
    }
    let orth = |a: &GoppaCode, b: &GoppaCode| {
        (0..a.k()).all(|i| b.parity_bin().mul_vec(&a.gen().row(i)).is_zero())
    };
    Ok(orth(&c1, &c2) && orth(&c2, &c1))
}
