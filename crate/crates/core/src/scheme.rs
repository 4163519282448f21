//! McEliece key generation, encryption and decryption over binary Goppa
//! codes, with unique or list decryption and a checksum tag that picks the
//! plaintext out of a decoding list.
//!
//! The tag only disambiguates candidates. It is a CRC, not a MAC, and the
//! scheme is not CCA2-secure.
//!
//! # Plaintext blocks
//!
//! For `k >= 37` a block is `payload || pad || descriptor || crc`:
//! the payload region has `k - 36` bits, the 4-bit descriptor is `0` when the
//! payload fills it exactly and `1` when it is followed by a single `1` bit
//! and zeros, and the 32-bit CRC-32 covers the first `k - 32` bits packed
//! least-significant-bit first. Multi-bit fields are stored LSB first.
//!
//! Codes with `k < 37` use a short block: exactly `k - floor(k/2)` payload
//! bits followed by the low `floor(k/2)` bits of the CRC-32 of the payload.
//!
//! # Seed schedule
//!
//! All randomness comes from [`crate::rng::stream`]:
//!
//! * generic keys: `"keygen-support"` draws `n` distinct field elements by
//!   partial Fisher-Yates over `0..2^m`; `"keygen-goppa"` then draws the
//!   `r` low coefficients of a monic `G` (lowest first, each uniform in
//!   `0..2^m`), redrawing the whole polynomial until it is square-free and
//!   has no root in the support;
//! * dyadic keys: attempt `a` uses the seed itself for `a = 0` and
//!   `seed || a` (one byte) afterwards, feeding both the signature and the
//!   support streams of [`crate::dyadic`];
//! * encryption: `"encrypt"` draws the `w` error positions by partial
//!   Fisher-Yates over `0..n`.

use rand::Rng;

use crate::binmat::{BinMatrix, BitVector};
use crate::decode::{list_decode, patterson_decode};
use crate::dyadic::{gen_signature, public_redundancy, signature_to_code, CompactKey, DyadicParams};
use crate::error::{Error, Result};
use crate::field::{Elem, Field, Poly};
use crate::goppa::GoppaCode;
use crate::rng::{choose_positions, stream};
use crate::security::{check_countermeasures, radii, Variant};

const KEY_MAGIC: &[u8; 4] = b"GPPA";
const CT_MAGIC: &[u8; 4] = b"GCTX";
const VERSION: u8 = 0x01;
const GOPPA_DRAWS: usize = 10_000;
const DYADIC_ATTEMPTS: u8 = 64;
const FULL_TAG: usize = 36;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Decoder {
    Ud,
    Ld,
}

impl Decoder {
    pub fn as_str(&self) -> &'static str {
        match self {
            Decoder::Ud => "ud",
            Decoder::Ld => "ld",
        }
    }
}

impl std::fmt::Display for Decoder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Decoder {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ud" => Ok(Decoder::Ud),
            "ld" => Ok(Decoder::Ld),
            _ => Err(Error::Parameter(format!("unknown decoder {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KeyParams {
    pub variant: Variant,
    pub decoder: Decoder,
    pub m: u32,
    pub n: usize,
    pub k: usize,
    pub r: usize,
    /// Number of errors added by encryption.
    pub w: usize,
}

impl KeyParams {
    /// Public key size in bits as actually stored.
    pub fn keysize_bits(&self) -> usize {
        match self.variant {
            Variant::Generic => self.k * (self.n - self.k),
            Variant::Dyadic => self.m as usize * self.k,
        }
    }

    /// Largest payload accepted by [`encrypt`] (exact length for short blocks).
    pub fn payload_capacity(&self) -> usize {
        payload_capacity(self.k)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PublicKey {
    pub params: KeyParams,
    /// Redundancy part `A` of the public generator `[I | A]`.
    pub redundancy: BinMatrix,
}

#[derive(Clone, Debug)]
pub struct SecretKey {
    pub params: KeyParams,
    pub code: GoppaCode,
}

#[derive(Clone, Debug)]
pub struct KeyPair {
    pub public: PublicKey,
    pub secret: SecretKey,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cryptogram {
    pub vector: BitVector,
    pub declared_weight: usize,
}

/// Encryption weight for a decoder: `r`, or `ceil(tau2) - 1` for list decoding.
pub fn encryption_weight(decoder: Decoder, n: usize, r: usize) -> Result<usize> {
    match decoder {
        Decoder::Ud => Ok(r),
        Decoder::Ld => Ok(radii(n as u64, r as u64)?.ld_errors as usize),
    }
}

/// Rejects dyadic parameters that satisfy neither countermeasure and checks
/// the quasi-dyadic shape constraints.
pub fn check_dyadic_params(m: u32, n: usize, r: usize) -> Result<usize> {
    let cm = check_countermeasures(m as u64, n as u64, r as u64);
    if !cm.cm1 && !cm.cm2 {
        return Err(Error::Countermeasure(format!(
            "r(r+1) = {} <= n = {n} and m = {m} < 16",
            r * (r + 1)
        )));
    }
    DyadicParams { m, n, r }.validate()
}

pub fn keygen(
    variant: Variant,
    m: u32,
    n: usize,
    r: usize,
    decoder: Decoder,
    seed: &[u8],
) -> Result<KeyPair> {
    if seed.is_empty() {
        return Err(Error::Parameter("seed must be nonempty".into()));
    }
    let field = Field::new(m)?;
    if r == 0 || n > field.order() as usize || m as usize * r >= n {
        return Err(Error::Parameter(format!(
            "need 0 < m*r < n <= 2^m (m={m}, n={n}, r={r})"
        )));
    }
    let w = encryption_weight(decoder, n, r)?;
    let code = match variant {
        Variant::Generic => generic_code(field, n, r, seed)?,
        Variant::Dyadic => {
            check_dyadic_params(m, n, r)?;
            dyadic_code(field, n, r, seed)?
        }
    };
    let params = KeyParams {
        variant,
        decoder,
        m,
        n,
        k: code.k(),
        r,
        w,
    };
    Ok(KeyPair {
        public: PublicKey {
            params,
            redundancy: public_redundancy(&code),
        },
        secret: SecretKey { params, code },
    })
}

fn generic_code(field: Field, n: usize, r: usize, seed: &[u8]) -> Result<GoppaCode> {
    let q = field.order() as usize;
    let support: Vec<Elem> = choose_positions(&mut stream("keygen-support", seed), q, n)
        .into_iter()
        .map(|v| v as Elem)
        .collect();
    let mut rng = stream("keygen-goppa", seed);
    for _ in 0..GOPPA_DRAWS {
        let mut coeffs: Vec<Elem> = (0..r).map(|_| rng.gen_range(0..q) as Elem).collect();
        coeffs.push(1);
        let g = Poly::from_coeffs(coeffs);
        if g.is_squarefree(&field) && support.iter().all(|&a| g.eval(&field, a) != 0) {
            return GoppaCode::build(field, support, g);
        }
    }
    Err(Error::Exhausted(GOPPA_DRAWS))
}

fn dyadic_code(field: Field, n: usize, r: usize, seed: &[u8]) -> Result<GoppaCode> {
    let params = DyadicParams { m: field.m(), n, r };
    let n_sig = field.order() as usize / 2;
    for a in 0..DYADIC_ATTEMPTS {
        let mut s = seed.to_vec();
        if a > 0 {
            s.push(a);
        }
        let sig = gen_signature(field, n_sig, &s)?;
        match signature_to_code(&sig, &params, &s) {
            Ok(code) => return Ok(code),
            Err(Error::Structure(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Exhausted(DYADIC_ATTEMPTS as usize))
}

fn payload_capacity(k: usize) -> usize {
    if k > FULL_TAG {
        k - FULL_TAG
    } else {
        k - k / 2
    }
}

fn crc_of(bits: &BitVector) -> u32 {
    crc32fast::hash(&bits.to_bytes())
}

fn prefix(v: &BitVector, len: usize) -> BitVector {
    BitVector::from_bits(v.iter().take(len))
}

/// Builds the `k`-bit plaintext block for a payload.
pub fn make_block(k: usize, payload: &BitVector) -> Result<BitVector> {
    let cap = payload_capacity(k);
    let len = payload.len();
    if k <= FULL_TAG {
        if len != cap {
            return Err(Error::PayloadLength { len, expected: cap });
        }
        let crc = crc_of(payload);
        let bits = payload.iter().chain((0..k - cap).map(|i| crc >> i & 1 == 1));
        return Ok(BitVector::from_bits(bits));
    }
    if len > cap {
        return Err(Error::PayloadTooLong { len, capacity: cap });
    }
    let mut block = BitVector::zeros(k);
    for i in payload.ones() {
        block.set(i, true);
    }
    if len < cap {
        block.set(len, true);
        block.set(cap, true);
    }
    let crc = crc_of(&prefix(&block, k - 32));
    for i in 0..32 {
        block.set(k - 32 + i, crc >> i & 1 == 1);
    }
    Ok(block)
}

/// Inverse of [`make_block`]; `None` when the tag or padding is invalid.
pub fn open_block(block: &BitVector) -> Option<BitVector> {
    let k = block.len();
    let cap = payload_capacity(k);
    if k <= FULL_TAG {
        let payload = prefix(block, cap);
        let crc = crc_of(&payload);
        let ok = (0..k - cap).all(|i| block.get(cap + i) == (crc >> i & 1 == 1));
        return ok.then_some(payload);
    }
    let tag = (0..32).fold(0u32, |acc, i| acc | (block.get(k - 32 + i) as u32) << i);
    if crc_of(&prefix(block, k - 32)) != tag {
        return None;
    }
    let descriptor = (0..4).fold(0u8, |acc, i| acc | (block.get(cap + i) as u8) << i);
    match descriptor {
        0 => Some(prefix(block, cap)),
        1 => {
            let end = (0..cap).rev().find(|&i| block.get(i))?;
            Some(prefix(block, end))
        }
        _ => None,
    }
}

pub fn encrypt(pk: &PublicKey, payload: &BitVector, seed: &[u8]) -> Result<Cryptogram> {
    let KeyParams { n, k, w, .. } = pk.params;
    let block = make_block(k, payload)?;
    let parity = pk.redundancy.vec_mul(&block);
    let mut vector = BitVector::from_bits(block.iter().chain(parity.iter()));
    for p in choose_positions(&mut stream("encrypt", seed), n, w) {
        vector.flip(p);
    }
    Ok(Cryptogram {
        vector,
        declared_weight: w,
    })
}

pub fn decrypt(sk: &SecretKey, ct: &Cryptogram) -> Result<BitVector> {
    let code = &sk.code;
    let n = code.n();
    if ct.vector.len() != n {
        return Err(Error::Length {
            expected: n,
            got: ct.vector.len(),
        });
    }
    if ct.declared_weight > sk.params.w {
        return Err(Error::Parameter(format!(
            "declared weight {} exceeds the key's weight {}",
            ct.declared_weight, sk.params.w
        )));
    }
    let perm = code.colperm();
    let mut y = BitVector::zeros(n);
    for j in ct.vector.ones() {
        y.set(perm[j], true);
    }
    let result = match sk.params.decoder {
        Decoder::Ud => patterson_decode(code, &y)?,
        Decoder::Ld => list_decode(code, &y, sk.params.w)?,
    };
    let mut found: Vec<BitVector> = result
        .candidates
        .iter()
        .filter(|c| c.error_weight == ct.declared_weight)
        .filter_map(|c| open_block(&code.extract_message(&c.codeword)))
        .collect();
    found.dedup();
    match found.len() {
        0 => Err(Error::NoCandidate),
        1 => Ok(found.pop().unwrap()),
        count => Err(Error::Ambiguous(count)),
    }
}

// ---------------------------------------------------------------------------
// Serialization.

fn pack_values(values: impl IntoIterator<Item = u32>, width: u32) -> Vec<u8> {
    let bits: Vec<bool> = values
        .into_iter()
        .flat_map(|v| (0..width).map(move |b| v >> b & 1 == 1))
        .collect();
    BitVector::from_bits(bits).to_bytes()
}

fn unpack_values(bytes: &[u8], count: usize, width: u32) -> Result<Vec<u32>> {
    let v = BitVector::from_bytes(bytes, count * width as usize)?;
    Ok((0..count)
        .map(|i| {
            (0..width).fold(0u32, |acc, b| {
                acc | (v.get(i * width as usize + b as usize) as u32) << b
            })
        })
        .collect())
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(len).filter(|&e| e <= self.bytes.len());
        let end = end.ok_or_else(|| Error::Format("unexpected end of data".into()))?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_be_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn finish(&self) -> Result<()> {
        if self.pos != self.bytes.len() {
            return Err(Error::Format(format!(
                "{} trailing bytes",
                self.bytes.len() - self.pos
            )));
        }
        Ok(())
    }
}

impl KeyPair {
    /// Key file: `"GPPA"`, version, variant, `m`, decoder, then `n`, `k`,
    /// `r`, `w` and the field modulus as big-endian `u32`; the private
    /// section (support, `G` coefficients lowest first, column permutation,
    /// each as `m`-bit values packed LSB first); the public section.
    pub fn to_bytes(&self) -> Vec<u8> {
        let p = &self.secret.params;
        let code = &self.secret.code;
        let mut out = Vec::new();
        out.extend_from_slice(KEY_MAGIC);
        out.push(VERSION);
        out.push(match p.variant {
            Variant::Generic => 0,
            Variant::Dyadic => 1,
        });
        out.push(p.m as u8);
        out.push(match p.decoder {
            Decoder::Ud => 0,
            Decoder::Ld => 1,
        });
        for v in [p.n, p.k, p.r, p.w] {
            out.extend_from_slice(&(v as u32).to_be_bytes());
        }
        out.extend_from_slice(&code.field().modulus().to_be_bytes());
        out.extend(pack_values(code.support().iter().map(|&a| a as u32), p.m));
        let g = (0..=p.r).map(|i| code.gpoly().coeff(i) as u32);
        out.extend(pack_values(g, p.m));
        out.extend(pack_values(code.colperm().iter().map(|&c| c as u32), p.m));
        match p.variant {
            Variant::Generic => out.extend(self.public.redundancy.to_packed_bytes()),
            Variant::Dyadic => {
                let ck = CompactKey::from_redundancy(&self.public.redundancy, p.m, p.r)
                    .expect("dyadic keys have dyadic redundancy");
                out.extend(ck.to_bytes());
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut rd = Reader { bytes, pos: 0 };
        if rd.take(4)? != KEY_MAGIC {
            return Err(Error::Format("missing GPPA header".into()));
        }
        let version = rd.u8()?;
        if version != VERSION {
            return Err(Error::Format(format!("unsupported key version {version}")));
        }
        let variant = match rd.u8()? {
            0 => Variant::Generic,
            1 => Variant::Dyadic,
            v => return Err(Error::Format(format!("unknown variant byte {v}"))),
        };
        let m = u32::from(rd.u8()?);
        let decoder = match rd.u8()? {
            0 => Decoder::Ud,
            1 => Decoder::Ld,
            v => return Err(Error::Format(format!("unknown decoder byte {v}"))),
        };
        let [n, k, r, w] = [rd.u32()?, rd.u32()?, rd.u32()?, rd.u32()?].map(|v| v as usize);
        let field = Field::with_modulus(m, rd.u32()?).map_err(|e| Error::Format(e.to_string()))?;
        if n == 0 || k == 0 || k >= n || r == 0 || n > field.order() as usize {
            return Err(Error::Format(format!("inconsistent sizes n={n} k={k} r={r}")));
        }
        let packed = |count: usize| (count * m as usize).div_ceil(8);
        let support: Vec<Elem> = unpack_values(rd.take(packed(n))?, n, m)?
            .into_iter()
            .map(|v| v as Elem)
            .collect();
        let g = Poly::from_coeffs(
            unpack_values(rd.take(packed(r + 1))?, r + 1, m)?
                .into_iter()
                .map(|v| v as Elem)
                .collect(),
        );
        if g.degree() != Some(r) {
            return Err(Error::Format("Goppa polynomial degree does not match r".into()));
        }
        let colperm: Vec<usize> = unpack_values(rd.take(packed(n))?, n, m)?
            .into_iter()
            .map(|v| v as usize)
            .collect();
        let redundancy = match variant {
            Variant::Generic => {
                BinMatrix::from_packed_bytes(k, n - k, rd.take(packed_len(k * (n - k)))?)?
            }
            Variant::Dyadic => {
                let (ck, used) = CompactKey::from_bytes(&bytes[rd.pos..])?;
                rd.take(used)?;
                if ck.m != m || ck.r != r || ck.k != k {
                    return Err(Error::Format("compact key header disagrees with key".into()));
                }
                ck.expand()
            }
        };
        rd.finish()?;
        if colperm.iter().any(|&c| c >= n) {
            return Err(Error::Format("column permutation out of range".into()));
        }
        let mut gen = BinMatrix::zeros(k, n);
        for i in 0..k {
            gen.set(i, colperm[i], true);
            for j in redundancy.row(i).ones() {
                gen.set(i, colperm[k + j], true);
            }
        }
        let code = GoppaCode::build_with_generator(field, support, g, gen, colperm)?;
        if code.k() != k {
            return Err(Error::Format("stored k does not match the code".into()));
        }
        let params = KeyParams {
            variant,
            decoder,
            m,
            n,
            k,
            r,
            w,
        };
        Ok(KeyPair {
            public: PublicKey { params, redundancy },
            secret: SecretKey { params, code },
        })
    }
}

fn packed_len(bits: usize) -> usize {
    bits.div_ceil(8)
}

impl Cryptogram {
    /// `"GCTX"`, `n` and the declared weight as big-endian `u32`, then the
    /// vector packed LSB first.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(12 + self.vector.len().div_ceil(8));
        out.extend_from_slice(CT_MAGIC);
        out.extend_from_slice(&(self.vector.len() as u32).to_be_bytes());
        out.extend_from_slice(&(self.declared_weight as u32).to_be_bytes());
        out.extend(self.vector.to_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut rd = Reader { bytes, pos: 0 };
        if rd.take(4)? != CT_MAGIC {
            return Err(Error::Format("missing GCTX header".into()));
        }
        let n = rd.u32()? as usize;
        let declared_weight = rd.u32()? as usize;
        let vector = BitVector::from_bytes(rd.take(packed_len(n))?, n)?;
        rd.finish()?;
        Ok(Cryptogram {
            vector,
            declared_weight,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_bits(rng: &mut impl Rng, len: usize) -> BitVector {
        BitVector::from_bits((0..len).map(|_| rng.gen::<bool>()))
    }

    #[test]
    fn block_format() {
        let payload = BitVector::from_bits([true, false, true]);
        let b = make_block(64, &payload).unwrap();
        assert_eq!(b.len(), 64);
        // payload, then the "1" pad marker, zeros, descriptor 1 at bit 28.
        assert!(b.get(0) && !b.get(1) && b.get(2) && b.get(3));
        assert!((4..28).all(|i| !b.get(i)));
        assert!(b.get(28) && !b.get(29) && !b.get(30) && !b.get(31));
        let crc = crc32fast::hash(&prefix(&b, 32).to_bytes());
        assert!((0..32).all(|i| b.get(32 + i) == (crc >> i & 1 == 1)));
        assert_eq!(open_block(&b), Some(payload));

        let full = BitVector::from_bits((0..28).map(|i| i % 3 == 0));
        let b = make_block(64, &full).unwrap();
        assert!((28..32).all(|i| !b.get(i)));
        assert_eq!(open_block(&b), Some(full));
        assert_eq!(open_block(&make_block(64, &BitVector::zeros(0)).unwrap()), Some(BitVector::zeros(0)));
        assert_eq!(
            make_block(64, &BitVector::zeros(29)),
            Err(Error::PayloadTooLong { len: 29, capacity: 28 })
        );
    }

    #[test]
    fn short_block_format() {
        let payload = BitVector::from_bits([true, true, false, true, false, false]);
        let b = make_block(12, &payload).unwrap();
        let crc = crc32fast::hash(&[0b0000_1011]);
        assert!((0..6).all(|i| b.get(6 + i) == (crc >> i & 1 == 1)));
        assert_eq!(open_block(&b), Some(payload));
        assert!(make_block(12, &BitVector::zeros(5)).is_err());
    }

    #[test]
    fn tampered_blocks_are_rejected() {
        let mut rng = stream("tamper", b"");
        for _ in 0..200 {
            let len = rng.gen_range(0..=64);
            let payload = random_bits(&mut rng, len);
            let mut b = make_block(100, &payload).unwrap();
            let i = rng.gen_range(0..100);
            b.flip(i);
            assert_eq!(open_block(&b), None);
        }
    }

    #[test]
    fn generic_roundtrip_and_serialization() {
        let kp = keygen(Variant::Generic, 6, 64, 6, Decoder::Ud, b"key").unwrap();
        assert_eq!(kp.public.params.k, 28);
        assert_eq!(kp.public.params.w, 6);
        let bytes = kp.to_bytes();
        let back = KeyPair::from_bytes(&bytes).unwrap();
        assert_eq!(back.to_bytes(), bytes);
        let mut rng = stream("msgs", b"");
        for i in 0u32..50 {
            let msg = random_bits(&mut rng, kp.public.params.payload_capacity());
            let ct = encrypt(&kp.public, &msg, &i.to_be_bytes()).unwrap();
            assert_eq!(encrypt(&back.public, &msg, &i.to_be_bytes()).unwrap(), ct);
            assert_eq!(Cryptogram::from_bytes(&ct.to_bytes()).unwrap(), ct);
            assert_eq!(decrypt(&back.secret, &ct).unwrap(), msg);
        }
    }

    #[test]
    fn ld_weight_and_tamper() {
        let kp = keygen(Variant::Generic, 6, 64, 6, Decoder::Ld, b"ld").unwrap();
        assert_eq!(kp.public.params.w, radii(64, 6).unwrap().ld_errors as usize);
        let msg = BitVector::zeros(kp.public.params.payload_capacity());
        let mut ct = encrypt(&kp.public, &msg, b"e").unwrap();
        let w = kp.public.params.w;
        let errors = choose_positions(&mut stream("encrypt", b"e"), 64, w);
        let extra: Vec<usize> = (0..64).filter(|p| !errors.contains(p)).take(6 + 1).collect();
        for &p in &extra {
            ct.vector.flip(p);
        }
        assert_eq!(decrypt(&kp.secret, &ct), Err(Error::NoCandidate));
    }

    #[test]
    fn parse_errors() {
        assert!(KeyPair::from_bytes(b"GPPB").is_err());
        assert!(Cryptogram::from_bytes(b"GCTX\0\0\0\x08\0\0\0\x01").is_err());
        let ct = Cryptogram::from_bytes(b"GCTX\0\0\0\x08\0\0\0\x01\x81").unwrap();
        assert_eq!(ct.vector.ones().collect::<Vec<_>>(), vec![0, 7]);
    }
}
