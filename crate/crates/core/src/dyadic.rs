//! Quasi-dyadic Goppa codes and their compact public keys.
//!
//! A signature `h` of length `N = 2^ν` satisfies
//! `1/h[i ^ j] = 1/h[i] + 1/h[j] + 1/h[0]`. With an offset `ω` it yields the
//! Goppa roots `z_i = 1/h[i] + ω` and support points
//! `u_j = 1/h[j] + 1/h[0] + ω`, whose Cauchy matrix `1/(z_i + u_j)` is the
//! dyadic matrix `h[i ^ j]`.
//!
//! The two sets `{z_i}` and `{u_j}` are cosets of the same `ν`-dimensional
//! GF(2)-subspace. Besides the `N/r` blocks of `u` values, the `z` blocks other
//! than block 0 (which holds the roots of `G`) are also admissible support
//! blocks: `1/(z_i + z_j)` depends only on `i ^ j` as well.
//!
//! Binary dyadic `r x r` blocks form a commutative ring in which every block
//! squares to `(weight mod 2)·I`. Odd-weight blocks are therefore their own
//! inverses, which is what the block-wise systematization relies on.

use crate::binmat::{BinMatrix, BitVector};
use crate::error::{Error, Result};
use crate::field::{Elem, Field, Poly};
use crate::goppa::GoppaCode;
use crate::rng::{permutation, stream};
use rand::Rng;

const MAX_REJECTIONS: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyadicSignature {
    field: Field,
    h: Vec<Elem>,
    omega: Elem,
}

impl DyadicSignature {
    /// Wraps an explicit signature without checking the identity.
    pub fn from_parts(field: Field, h: Vec<Elem>, omega: Elem) -> Self {
        DyadicSignature { field, h, omega }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn h(&self) -> &[Elem] {
        &self.h
    }

    pub fn omega(&self) -> Elem {
        self.omega
    }

    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }

    fn inv_h(&self, i: usize) -> Elem {
        self.field.inv_nz(self.h[i])
    }

    /// Goppa root `z_i = 1/h_i + ω`.
    pub fn z(&self, i: usize) -> Elem {
        self.inv_h(i) ^ self.omega
    }

    /// Support point `u_j = 1/h_j + 1/h_0 + ω`.
    pub fn u(&self, j: usize) -> Elem {
        self.inv_h(j) ^ self.inv_h(0) ^ self.omega
    }

    /// Checks the identity for one pair.
    pub fn identity_holds(&self, i: usize, j: usize) -> bool {
        self.h[i] != 0
            && self.h[j] != 0
            && self.h[i ^ j] != 0
            && self.inv_h(i ^ j) == self.inv_h(i) ^ self.inv_h(j) ^ self.inv_h(0)
    }

    /// Checks the identity for every pair `(i, j)`.
    pub fn identity_holds_everywhere(&self) -> bool {
        let n = self.h.len();
        (0..n).all(|i| (0..n).all(|j| self.identity_holds(i, j)))
    }
}

/// Greedy GF(2) basis of `m`-bit values; `insert` fails on dependent input.
struct XorBasis {
    rows: Vec<Elem>,
}

impl XorBasis {
    fn reduce(&self, mut v: Elem) -> Elem {
        for &b in &self.rows {
            v = v.min(v ^ b);
        }
        v
    }

    fn insert(&mut self, v: Elem) -> bool {
        let v = self.reduce(v);
        if v == 0 {
            return false;
        }
        self.rows.push(v);
        self.rows.sort_unstable_by(|a, b| b.cmp(a));
        true
    }
}

/// Draws a signature of length `n_sig` from the seeded stream.
///
/// Stream label `"dyadic-signature"`. Draw order: `h_0`, then `h_1, h_2,
/// h_4, ...`, each uniform in `1..2^m` and redrawn until the identity can be
/// extended with distinct values, then `ω` uniform in `0..2^m`.
pub fn gen_signature(field: Field, n_sig: usize, seed: &[u8]) -> Result<DyadicSignature> {
    let q = field.order() as usize;
    if !n_sig.is_power_of_two() || 2 * n_sig > q {
        return Err(Error::Parameter(format!(
            "signature length {n_sig} must be a power of two at most 2^(m-1) = {}",
            q / 2
        )));
    }
    if seed.is_empty() {
        return Err(Error::Parameter("seed must be nonempty".into()));
    }
    let mut rng = stream("dyadic-signature", seed);
    let mut inv = vec![0 as Elem; n_sig];
    let mut rejections = 0;
    let h0: Elem = rng.gen_range(1..q) as Elem;
    inv[0] = field.inv_nz(h0);
    // 1/h_0 together with 1/h_{2^s} + 1/h_0 must stay linearly independent:
    // then all 1/h_i are distinct and nonzero and no u_j equals a z_i.
    let mut basis = XorBasis { rows: Vec::new() };
    basis.insert(inv[0]);
    let mut i = 1;
    while i < n_sig {
        let hi: Elem = rng.gen_range(1..q) as Elem;
        let cand = field.inv_nz(hi);
        if !basis.insert(cand ^ inv[0]) {
            rejections += 1;
            if rejections >= MAX_REJECTIONS {
                return Err(Error::Exhausted(rejections));
            }
            continue;
        }
        inv[i] = cand;
        for j in 1..i {
            inv[i + j] = inv[i] ^ inv[j] ^ inv[0];
        }
        i <<= 1;
    }
    let omega: Elem = rng.gen_range(0..q) as Elem;
    let h = inv.iter().map(|&v| field.inv_nz(v)).collect();
    Ok(DyadicSignature { field, h, omega })
}

/// First position `(i, j)` where `m[i][j] != m[0][i ^ j]`, if any.
pub fn dyadic_violation<T: PartialEq>(m: &[Vec<T>]) -> Option<(usize, usize)> {
    let r = m.len();
    if !r.is_power_of_two() {
        return Some((0, 0));
    }
    for (i, row) in m.iter().enumerate() {
        if row.len() != r {
            return Some((i, 0));
        }
        for (j, v) in row.iter().enumerate() {
            if *v != m[0][i ^ j] {
                return Some((i, j));
            }
        }
    }
    None
}

pub fn dyadic_check<T: PartialEq>(m: &[Vec<T>]) -> bool {
    dyadic_violation(m).is_none()
}

// ---------------------------------------------------------------------------
// Binary dyadic blocks, stored as the bits of their first row.

const SWAP_MASKS: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0f0f_0f0f_0f0f_0f0f,
    0x00ff_00ff_00ff_00ff,
    0x0000_ffff_0000_ffff,
    0x0000_0000_ffff_ffff,
];

/// Row `i` of the dyadic block with first row `sig`: bit `l` becomes `sig[l ^ i]`.
fn xor_permute(sig: &[u64], i: usize) -> Vec<u64> {
    let mut out = sig.to_vec();
    for t in 0..usize::BITS as usize {
        if i >> t & 1 == 0 {
            continue;
        }
        if t < 6 {
            let (mask, sh) = (SWAP_MASKS[t], 1 << t);
            for w in out.iter_mut() {
                *w = ((*w & mask) << sh) | ((*w >> sh) & mask);
            }
        } else {
            let stride = 1 << (t - 6);
            for w in 0..out.len() {
                if w & stride == 0 && w ^ stride < out.len() {
                    out.swap(w, w ^ stride);
                }
            }
        }
    }
    out
}

fn block_mul(a: &[u64], b: &[u64], r: usize) -> Vec<u64> {
    let mut out = vec![0u64; b.len()];
    for i in (0..r).filter(|&i| a[i / 64] >> (i % 64) & 1 == 1) {
        for (o, v) in out.iter_mut().zip(xor_permute(b, i)) {
            *o ^= v;
        }
    }
    out
}

fn block_is_zero(a: &[u64]) -> bool {
    a.iter().all(|&w| w == 0)
}

fn block_invertible(a: &[u64]) -> bool {
    a.iter().map(|w| w.count_ones()).sum::<u32>() % 2 == 1
}

fn sig_to_words(bits: &BitVector) -> Vec<u64> {
    bits.words().to_vec()
}

#[cfg(test)]
fn words_to_sig(words: &[u64], r: usize) -> BitVector {
    BitVector::from_bits((0..r).map(|i| words[i / 64] >> (i % 64) & 1 == 1))
}

/// Parameters of a quasi-dyadic code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DyadicParams {
    pub m: u32,
    pub n: usize,
    pub r: usize,
}

impl DyadicParams {
    /// Dimension under the full-rank model, `n - m*r`.
    pub fn k_model(&self) -> Option<usize> {
        self.n.checked_sub(self.m as usize * self.r).filter(|&k| k > 0)
    }

    /// Shape checks: `r` a power of two dividing `n`, `n <= 2^m - r`, `k > 0`.
    pub fn validate(&self) -> Result<usize> {
        let q = 1usize << self.m;
        if !(2..=16).contains(&self.m) {
            return Err(Error::Parameter(format!("m = {} outside 2..=16", self.m)));
        }
        if self.r == 0 || !self.r.is_power_of_two() {
            return Err(Error::Parameter(format!("r = {} is not a power of two", self.r)));
        }
        if self.n % self.r != 0 {
            return Err(Error::Parameter(format!("r = {} does not divide n = {}", self.r, self.n)));
        }
        if 2 * self.r > q || self.n + self.r > q {
            return Err(Error::Parameter(format!(
                "n = {} and r = {} need n + r <= 2^m = {q}",
                self.n, self.r
            )));
        }
        self.k_model()
            .ok_or_else(|| Error::Parameter(format!("k = n - m*r <= 0 for {self:?}")))
    }
}

/// A binary quasi-dyadic matrix: `rows x cols` blocks of size `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct BlockMatrix {
    r: usize,
    rows: usize,
    cols: usize,
    sigs: Vec<Vec<u64>>,
}

impl BlockMatrix {
    fn at(&self, i: usize, j: usize) -> &[u64] {
        &self.sigs[i * self.cols + j]
    }

    fn at_mut(&mut self, i: usize, j: usize) -> &mut Vec<u64> {
        &mut self.sigs[i * self.cols + j]
    }

    /// Gauss-Jordan over the dyadic ring, one pivot per block row, scanning
    /// block columns from the right. Returns the pivot column of each row.
    fn eliminate(&mut self) -> Option<Vec<usize>> {
        let mut used = vec![false; self.cols];
        let mut pivots = Vec::with_capacity(self.rows);
        for t in 0..self.rows {
            let c = (0..self.cols)
                .rev()
                .find(|&c| !used[c] && block_invertible(self.at(t, c)))?;
            used[c] = true;
            pivots.push(c);
            let inv = self.at(t, c).to_vec();
            for j in 0..self.cols {
                let v = block_mul(&inv, self.at(t, j), self.r);
                *self.at_mut(t, j) = v;
            }
            let prow: Vec<Vec<u64>> = (0..self.cols).map(|j| self.at(t, j).to_vec()).collect();
            for u in (0..self.rows).filter(|&u| u != t) {
                let factor = self.at(u, c).to_vec();
                if block_is_zero(&factor) {
                    continue;
                }
                for (j, pj) in prow.iter().enumerate() {
                    let prod = block_mul(&factor, pj, self.r);
                    for (a, b) in self.at_mut(u, j).iter_mut().zip(prod) {
                        *a ^= b;
                    }
                }
            }
        }
        Some(pivots)
    }
}

/// Builds the quasi-dyadic Goppa code for a signature.
///
/// Stream label `"dyadic-support"`: a full Fisher-Yates permutation of the
/// admissible blocks (coset-`u` blocks `0..N/r` first, then coset-`z`
/// blocks `1..N/r`), of which the first `n/r` are used in order, followed
/// by one intra-block offset `δ` uniform in `0..r` per selected block.
/// Position `s` of a block holds the element of index `s ^ δ`.
pub fn signature_to_code(
    sig: &DyadicSignature,
    params: &DyadicParams,
    seed: &[u8],
) -> Result<GoppaCode> {
    let f = *sig.field();
    let DyadicParams { m, n, r } = *params;
    if f.m() != m {
        return Err(Error::Parameter("signature field does not match m".into()));
    }
    params.validate()?;
    let n_sig = sig.len();
    if r > n_sig || n_sig % r != 0 {
        return Err(Error::Parameter(format!("r = {r} must divide N = {n_sig}")));
    }
    let per_coset = n_sig / r;
    let nb = n / r;
    let pool: Vec<(bool, usize)> = (0..per_coset)
        .map(|b| (false, b))
        .chain((1..per_coset).map(|b| (true, b)))
        .collect();
    if pool.len() < nb {
        return Err(Error::Construction(format!(
            "{nb} blocks requested but only {} admissible",
            pool.len()
        )));
    }
    let mut rng = stream("dyadic-support", seed);
    let order = permutation(&mut rng, pool.len());
    let deltas: Vec<usize> = (0..nb).map(|_| rng.gen_range(0..r)).collect();
    let roots: Vec<Elem> = (0..r).map(|i| sig.z(i)).collect();
    let g = Poly::from_roots(&f, &roots);

    let mut support = Vec::with_capacity(n);
    for (b, &pi) in order[..nb].iter().enumerate() {
        let (coset_z, blk) = pool[pi];
        for s in 0..r {
            let j = blk * r + (s ^ deltas[b]);
            support.push(if coset_z { sig.z(j) } else { sig.u(j) });
        }
    }

    // Binary Cauchy parity, bit plane b as block row b.
    let words = r.div_ceil(64);
    let mut bm = BlockMatrix {
        r,
        rows: m as usize,
        cols: nb,
        sigs: vec![vec![0u64; words]; m as usize * nb],
    };
    for c in 0..nb {
        for s in 0..r {
            let v = f.inv(roots[0] ^ support[c * r + s])?;
            for b in 0..m as usize {
                if v >> b & 1 == 1 {
                    bm.at_mut(b, c)[s / 64] |= 1 << (s % 64);
                }
            }
        }
    }
    let pivots = bm
        .eliminate()
        .ok_or_else(|| Error::Structure("no invertible dyadic pivot".into()))?;
    let mut is_pivot = vec![false; nb];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let info: Vec<usize> = (0..nb).filter(|&c| !is_pivot[c]).collect();
    let kb = info.len();
    let k = kb * r;
    let block_cols: Vec<usize> = info.iter().chain(&pivots).copied().collect();
    let colperm: Vec<usize> = block_cols
        .iter()
        .flat_map(|&c| (0..r).map(move |s| c * r + s))
        .collect();
    // Public generator [I | A] with A[a][t] = B'[t][info[a]].
    let mut gen = BinMatrix::zeros(k, n);
    for (a, &ic) in info.iter().enumerate() {
        for t in 0..m as usize {
            let sigw = bm.at(t, ic);
            for s in 0..r {
                let row = xor_permute(sigw, s);
                let i = a * r + s;
                for l in (0..r).filter(|&l| row[l / 64] >> (l % 64) & 1 == 1) {
                    gen.set(i, colperm[k + t * r + l], true);
                }
            }
        }
        for s in 0..r {
            gen.set(a * r + s, colperm[a * r + s], true);
        }
    }
    GoppaCode::build_with_generator(f, support, g, gen, colperm)
}

/// The signatures of the dyadic blocks of a systematic generator's
/// redundancy part: `m` blocks per block row, `k/r` block rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompactKey {
    pub m: u32,
    pub r: usize,
    pub k: usize,
    pub sigs: Vec<BitVector>,
}

const QDGK_MAGIC: &[u8; 4] = b"QDGK";

impl CompactKey {
    /// Compresses a `k x (m*r)` redundancy matrix; fails on non-dyadic blocks.
    pub fn from_redundancy(a: &BinMatrix, m: u32, r: usize) -> Result<Self> {
        let k = a.rows();
        if !r.is_power_of_two() || k % r != 0 || a.cols() != m as usize * r {
            return Err(Error::Structure(format!(
                "redundancy of shape {}x{} does not split into {r}x{r} blocks over m = {m}",
                a.rows(),
                a.cols()
            )));
        }
        let mut sigs = Vec::with_capacity(k / r * m as usize);
        for ba in 0..k / r {
            for bc in 0..m as usize {
                let first: Vec<bool> = (0..r).map(|l| a.get(ba * r, bc * r + l)).collect();
                for s in 1..r {
                    for l in 0..r {
                        if a.get(ba * r + s, bc * r + l) != first[l ^ s] {
                            return Err(Error::Structure(format!(
                                "block ({ba}, {bc}) is not dyadic at ({s}, {l})"
                            )));
                        }
                    }
                }
                sigs.push(BitVector::from_bits(first));
            }
        }
        Ok(CompactKey { m, r, k, sigs })
    }

    pub fn expand(&self) -> BinMatrix {
        let (m, r) = (self.m as usize, self.r);
        let mut a = BinMatrix::zeros(self.k, m * r);
        for (idx, sig) in self.sigs.iter().enumerate() {
            let (ba, bc) = (idx / m, idx % m);
            let w = sig_to_words(sig);
            for s in 0..r {
                let row = xor_permute(&w, s);
                for l in (0..r).filter(|&l| row[l / 64] >> (l % 64) & 1 == 1) {
                    a.set(ba * r + s, bc * r + l, true);
                }
            }
        }
        a
    }

    /// Payload size in bits, `m*k`.
    pub fn payload_bits(&self) -> usize {
        self.sigs.len() * self.r
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let kb = (self.k / self.r) as u16;
        let mut out = Vec::with_capacity(10 + self.sigs.len() * self.r.div_ceil(8));
        out.extend_from_slice(QDGK_MAGIC);
        out.push(0x01);
        out.push(self.m as u8);
        out.push(self.r.trailing_zeros() as u8);
        out.extend_from_slice(&kb.to_be_bytes());
        for s in &self.sigs {
            out.extend_from_slice(&s.to_bytes());
        }
        out
    }

    /// Parses a compact key, returning it and the number of bytes consumed.
    pub fn from_bytes(bytes: &[u8]) -> Result<(Self, usize)> {
        if bytes.len() < 9 || &bytes[..4] != QDGK_MAGIC {
            return Err(Error::Format("missing QDGK header".into()));
        }
        if bytes[4] != 0x01 {
            return Err(Error::Format(format!("unsupported QDGK version {}", bytes[4])));
        }
        let m = u32::from(bytes[5]);
        if bytes[6] >= 16 {
            return Err(Error::Format(format!("log2 r = {} out of range", bytes[6])));
        }
        let r = 1usize << bytes[6];
        let kb = u16::from_be_bytes([bytes[7], bytes[8]]) as usize;
        let count = kb * m as usize;
        let each = r.div_ceil(8);
        let end = 9 + count * each;
        if bytes.len() < end {
            return Err(Error::Format("truncated QDGK payload".into()));
        }
        let sigs = bytes[9..end]
            .chunks(each)
            .map(|c| BitVector::from_bytes(c, r))
            .collect::<Result<Vec<_>>>()?;
        Ok((
            CompactKey {
                m,
                r,
                k: kb * r,
                sigs,
            },
            end,
        ))
    }
}

/// Redundancy part of the code's generator in public coordinates.
pub fn public_redundancy(code: &GoppaCode) -> BinMatrix {
    let (k, n) = (code.k(), code.n());
    code.gen().permute_cols(code.colperm()).col_range(k, n)
}

/// Serialized compact key (header plus `m*k` payload bits).
pub fn compact_pubkey(code: &GoppaCode, r: usize) -> Result<Vec<u8>> {
    let a = public_redundancy(code);
    Ok(CompactKey::from_redundancy(&a, code.m(), r)?.to_bytes())
}

/// Inverse of [`compact_pubkey`]: the `k x m*r` redundancy matrix.
pub fn expand_pubkey(bytes: &[u8]) -> Result<BinMatrix> {
    Ok(CompactKey::from_bytes(bytes)?.0.expand())
}
