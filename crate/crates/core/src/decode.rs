//! Unique and list decoding of binary Goppa codes.
//!
//! [`patterson_decode`] corrects up to `r` errors. [`list_decode`] returns
//! every codeword within a radius up to `ceil(tau2) - 1`, using one of three
//! complete engines:
//!
//! * **Interpolation**: Guruswami-Sudan on the generalized Reed-Solomon
//!   supercode of `Γ(L, G²)`, with separate multiplicities for the received
//!   symbol and its complement.
//! * **Key equation**: enumerates the solution space of
//!   `σ' = s·σ (mod G)`, `deg σ <= τ`, keeping the locators that split over
//!   the support.
//! * **Flip + Patterson**: flips every set of at most `τ - r` positions and
//!   runs Patterson on the result.
//!
//! [`sphere_oracle`] finds the same list by brute force for small codes.

use std::collections::BTreeSet;

use crate::binmat::{BinMatrix, BitVector};
use crate::error::{Error, Result};
use crate::field::{eea_stop, Elem, Field, Poly};
use crate::goppa::GoppaCode;
use crate::security::{log2_binomial, radii};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub codeword: BitVector,
    pub error_weight: usize,
}

/// Codewords near a received word, ordered by error weight and then
/// lexicographically by codeword.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DecodeResult {
    pub candidates: Vec<Candidate>,
}

impl DecodeResult {
    fn from_codewords<I: IntoIterator<Item = BitVector>>(y: &BitVector, words: I) -> Self {
        let set: BTreeSet<(usize, BitVector)> =
            words.into_iter().map(|c| (c.distance(y), c)).collect();
        DecodeResult {
            candidates: set
                .into_iter()
                .map(|(error_weight, codeword)| Candidate {
                    codeword,
                    error_weight,
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn codewords(&self) -> impl Iterator<Item = &BitVector> {
        self.candidates.iter().map(|c| &c.codeword)
    }
}

fn check_len(code: &GoppaCode, y: &BitVector) -> Result<()> {
    if y.len() != code.n() {
        return Err(Error::Length {
            expected: code.n(),
            got: y.len(),
        });
    }
    Ok(())
}

/// Support positions where `sigma` vanishes, if their number equals `deg sigma`.
fn split_roots(f: &Field, support: &[Elem], sigma: &Poly) -> Option<Vec<usize>> {
    let d = sigma.degree()?;
    if d == 0 || d > support.len() {
        return None;
    }
    let mut roots = Vec::with_capacity(d);
    for (j, &a) in support.iter().enumerate() {
        if sigma.eval(f, a) == 0 {
            roots.push(j);
            if roots.len() > d {
                return None;
            }
        } else if support.len() - j - 1 < d - roots.len() {
            return None;
        }
    }
    (roots.len() == d).then_some(roots)
}

/// Error locator from Patterson's algorithm, or from the equivalent
/// Euclidean decoder modulo `G²` when the syndrome is not invertible
/// modulo a reducible `G`.
pub fn patterson_locator(code: &GoppaCode, y: &BitVector) -> Result<Poly> {
    check_len(code, y)?;
    let f = code.field();
    let g = code.gpoly().monic(f);
    let r = code.r();
    let sqrt = code
        .sqrt_mod()
        .ok_or_else(|| Error::Parameter("code has no square-free Goppa polynomial".into()))?;
    let s = code.syndrome_poly(y, &g)?;
    if s.is_zero() {
        return Ok(Poly::one());
    }
    let t = match s.inv_mod(f, &g) {
        Ok(t) => t,
        Err(Error::NotInvertible) => return euclid_locator(code, y),
        Err(e) => return Err(e),
    };
    let x = Poly::x();
    if t == x.rem(f, &g)? {
        return Ok(x);
    }
    let root = sqrt.sqrt(f, &t.add(&x))?;
    let (a, b) = eea_stop(f, &g, &root, r / 2);
    Ok(a.square(f).add(&b.square(f).shift(1)))
}

/// Alternant key equation `σ·S ≡ σ' (mod G²)` solved by the stopped
/// Euclidean algorithm.
fn euclid_locator(code: &GoppaCode, y: &BitVector) -> Result<Poly> {
    let f = code.field();
    let g2 = code.gpoly().monic(f).square(f);
    let r = code.r();
    let s2 = code.syndrome_poly(y, &g2)?;
    let (_, b) = eea_stop(f, &g2, &s2, r - 1);
    Ok(b)
}

pub fn patterson_decode(code: &GoppaCode, y: &BitVector) -> Result<DecodeResult> {
    let sigma = patterson_locator(code, y)?;
    let f = code.field();
    if sigma.degree() == Some(0) {
        if code.is_codeword(y) {
            return Ok(DecodeResult::from_codewords(y, [y.clone()]));
        }
        return Err(Error::DecodingFailure("constant locator for a non-codeword".into()));
    }
    let deg = sigma.degree().unwrap_or(0);
    if deg > code.r() {
        return Err(Error::DecodingFailure(format!("locator degree {deg} exceeds r")));
    }
    let roots = split_roots(f, code.support(), &sigma).ok_or_else(|| {
        Error::DecodingFailure("locator does not split over the support".into())
    })?;
    let mut c = y.clone();
    for j in roots {
        c.flip(j);
    }
    if !code.is_codeword(&c) {
        return Err(Error::DecodingFailure("corrected word has nonzero syndrome".into()));
    }
    Ok(DecodeResult::from_codewords(y, [c]))
}

/// Largest radius [`list_decode`] accepts: `ceil(tau2(n, r)) - 1`, or `r`
/// when the code is too short for the binary Johnson radius to be defined.
pub fn radius_limit(code: &GoppaCode) -> usize {
    match radii(code.n() as u64, code.r() as u64) {
        Ok(rep) => (rep.ld_errors as usize).max(code.r()),
        Err(_) => code.r(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ListEngine {
    /// Patterson up to `r`, otherwise the engine with the smallest cost estimate.
    Auto,
    Interpolation,
    KeyEquation,
    FlipPatterson,
}

/// Multiplicities and degree bounds for the interpolation engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GsParams {
    /// Multiplicity at the received symbol.
    pub s: usize,
    /// Multiplicity at the other binary symbol.
    pub s_other: usize,
    /// Dimension of the Reed-Solomon supercode, `n - 2r`.
    pub dim: usize,
    /// Bound on the `(1, dim-1)`-weighted degree of the interpolant.
    pub wdeg: usize,
    /// Bound on the degree in `z`.
    pub list: usize,
    pub constraints: usize,
}

const GS_MAX_CONSTRAINTS: usize = 200_000;

fn monomials(d: usize, w: usize) -> usize {
    (0..=d / w).map(|j| d - j * w + 1).sum()
}

/// Smallest multiplicity pair (by constraint count) whose interpolant
/// provably vanishes on every codeword within `tau` of the received word.
pub fn gs_params(n: usize, r: usize, tau: usize) -> Option<GsParams> {
    if n < 2 * r + 2 || tau >= n {
        return None;
    }
    let dim = n - 2 * r;
    let w = dim - 1;
    let mut best: Option<GsParams> = None;
    for s in 1..=64usize {
        for s_other in 0..=s {
            let constraints = n * (s * (s + 1) + s_other * (s_other + 1)) / 2;
            if constraints > GS_MAX_CONSTRAINTS
                || best.is_some_and(|b| b.constraints <= constraints)
            {
                continue;
            }
            let score = (n - tau) * s + tau * s_other;
            if score == 0 {
                continue;
            }
            let wdeg = score - 1;
            if monomials(wdeg, w) > constraints {
                best = Some(GsParams {
                    s,
                    s_other,
                    dim,
                    wdeg,
                    list: wdeg / w,
                    constraints,
                });
            }
        }
    }
    best
}

fn key_equation_dim_bound(code: &GoppaCode, tau: usize) -> usize {
    (tau + 1).saturating_sub(code.r())
}

/// Rough operation counts used by [`ListEngine::Auto`], in log2 units.
fn engine_costs(code: &GoppaCode, tau: usize) -> [(ListEngine, f64); 3] {
    let (n, r) = (code.n() as f64, code.r() as f64);
    let q = f64::from(code.field().order());
    let d = key_equation_dim_bound(code, tau) as f64;
    let ke = (d - 1.0).max(0.0) * q.log2() + (n * tau as f64).log2();
    let fp = (0..=tau.saturating_sub(code.r()))
        .map(|i| 2f64.powf(log2_binomial(n, i as f64)))
        .sum::<f64>()
        .log2()
        + (2.0 * n * r).log2();
    let gs = match gs_params(code.n(), code.r(), tau) {
        Some(p) => {
            let mono = monomials(p.wdeg, p.dim - 1) as f64;
            (p.constraints as f64 * mono).log2() + 1.0
        }
        None => f64::INFINITY,
    };
    [
        (ListEngine::KeyEquation, ke),
        (ListEngine::FlipPatterson, fp),
        (ListEngine::Interpolation, gs),
    ]
}

/// The engine [`ListEngine::Auto`] resolves to for this code and radius;
/// `None` means plain Patterson.
pub fn auto_engine(code: &GoppaCode, tau: usize) -> Option<ListEngine> {
    if tau <= code.r() {
        return None;
    }
    engine_costs(code, tau)
        .into_iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(e, _)| e)
}

pub fn list_decode(code: &GoppaCode, y: &BitVector, tau: usize) -> Result<DecodeResult> {
    list_decode_with(code, y, tau, ListEngine::Auto)
}

pub fn list_decode_with(
    code: &GoppaCode,
    y: &BitVector,
    tau: usize,
    engine: ListEngine,
) -> Result<DecodeResult> {
    check_len(code, y)?;
    let limit = radius_limit(code);
    if tau > limit {
        return Err(Error::RadiusTooLarge { tau, limit });
    }
    let engine = match engine {
        ListEngine::Auto => match auto_engine(code, tau) {
            None => return unique_within(code, y, tau),
            Some(e) => e,
        },
        e => e,
    };
    let out = match engine {
        ListEngine::KeyEquation => key_equation_decode(code, y, tau)?,
        ListEngine::FlipPatterson => flip_patterson_decode(code, y, tau)?,
        ListEngine::Interpolation => interpolation_decode(code, y, tau)?,
        ListEngine::Auto => unreachable!(),
    };
    Ok(out)
}

fn unique_within(code: &GoppaCode, y: &BitVector, tau: usize) -> Result<DecodeResult> {
    match patterson_decode(code, y) {
        Ok(res) => Ok(DecodeResult {
            candidates: res
                .candidates
                .into_iter()
                .filter(|c| c.error_weight <= tau)
                .collect(),
        }),
        Err(Error::DecodingFailure(_)) => Ok(DecodeResult::default()),
        Err(e) => Err(e),
    }
}

// ---------------------------------------------------------------------------
// Key equation engine

/// Basis of `{v : A v = 0}` over GF(2^m) for a dense `rows x ncols` matrix.
fn gf_null_space(f: &Field, mut a: Vec<Vec<Elem>>, ncols: usize) -> Vec<Vec<Elem>> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..a.len()).find(|&i| a[i][col] != 0) else {
            continue;
        };
        a.swap(row, p);
        let inv = f.inv_nz(a[row][col]);
        for v in a[row].iter_mut() {
            *v = f.mul(*v, inv);
        }
        let prow = a[row].clone();
        for (i, r) in a.iter_mut().enumerate() {
            if i != row && r[col] != 0 {
                let c = r[col];
                for (v, &p) in r.iter_mut().zip(&prow) {
                    *v ^= f.mul(c, p);
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == a.len() {
            break;
        }
    }
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|fc| {
            let mut v = vec![0; ncols];
            v[fc] = 1;
            for (pi, &pc) in pivots.iter().enumerate() {
                v[pc] = a[pi][fc];
            }
            v
        })
        .collect()
}

const KE_MAX_POINTS: u128 = 50_000_000;

fn key_equation_decode(code: &GoppaCode, y: &BitVector, tau: usize) -> Result<DecodeResult> {
    let f = code.field();
    let g = code.gpoly().monic(f);
    let r = code.r();
    let s = code.syndrome_poly(y, &g)?;
    if s.is_zero() {
        // Any other codeword is at distance >= 2r + 1 > tau.
        debug_assert!(tau < 2 * r + 1);
        return Ok(DecodeResult::from_codewords(y, [y.clone()]));
    }
    // Column i of the system is (σ -> σ' - sσ mod G) applied to x^i.
    let mut cols: Vec<Poly> = Vec::with_capacity(tau + 1);
    let mut s_xi = s.clone();
    for i in 0..=tau {
        let mut col = s_xi.clone();
        if i % 2 == 1 {
            col = col.add(&Poly::monomial(1, i - 1).rem(f, &g)?);
        }
        cols.push(col);
        s_xi = s_xi.shift(1).rem(f, &g)?;
    }
    let a: Vec<Vec<Elem>> = (0..r)
        .map(|row| cols.iter().map(|c| c.coeff(row)).collect())
        .collect();
    let basis = gf_null_space(f, a, tau + 1);
    let d = basis.len();
    let q = u128::from(f.order());
    let points = (q.pow(d as u32) - 1) / (q - 1);
    if points > KE_MAX_POINTS {
        return Err(Error::Capacity(format!(
            "key-equation solution space has {points} projective points"
        )));
    }
    let mut words = Vec::new();
    // Projective enumeration: the first nonzero coordinate is 1.
    for lead in 0..d {
        let free = d - lead - 1;
        let count = q.pow(free as u32);
        for idx in 0..count {
            let mut sigma = basis[lead].clone();
            let mut rest = idx;
            for b in &basis[lead + 1..] {
                let c = (rest % q) as Elem;
                rest /= q;
                if c != 0 {
                    for (v, &bv) in sigma.iter_mut().zip(b) {
                        *v ^= f.mul(c, bv);
                    }
                }
            }
            let sigma = Poly::from_coeffs(sigma);
            if let Some(roots) = split_roots(f, code.support(), &sigma) {
                let mut c = y.clone();
                for j in roots {
                    c.flip(j);
                }
                if code.is_codeword(&c) {
                    words.push(c);
                }
            }
        }
    }
    Ok(DecodeResult::from_codewords(y, words))
}

// ---------------------------------------------------------------------------
// Flip + Patterson engine

fn for_each_subset<F: FnMut(&[usize]) -> Result<()>>(
    n: usize,
    size: usize,
    f: &mut F,
) -> Result<()> {
    let mut idx: Vec<usize> = (0..size).collect();
    if size > n {
        return Ok(());
    }
    loop {
        f(&idx)?;
        let mut i = size;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            if idx[i] < n - size + i {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn flip_patterson_decode(code: &GoppaCode, y: &BitVector, tau: usize) -> Result<DecodeResult> {
    let mut words = Vec::new();
    let extra = tau.saturating_sub(code.r());
    for size in 0..=extra {
        for_each_subset(code.n(), size, &mut |set| {
            let mut z = y.clone();
            for &j in set {
                z.flip(j);
            }
            match patterson_decode(code, &z) {
                Ok(res) => {
                    for c in res.candidates {
                        if c.codeword.distance(y) <= tau {
                            words.push(c.codeword);
                        }
                    }
                    Ok(())
                }
                Err(Error::DecodingFailure(_)) => Ok(()),
                Err(e) => Err(e),
            }
        })?;
    }
    Ok(DecodeResult::from_codewords(y, words))
}

// ---------------------------------------------------------------------------
// Interpolation engine

/// Bivariate polynomial stored as `coeffs[z_degree][x_degree]`.
type Bivar = Vec<Vec<Elem>>;

#[inline]
fn binom_odd(n: usize, k: usize) -> bool {
    n & k == k
}

/// Hasse derivative `D_{a,b} Q` evaluated at `(x0, z0)`.
fn hasse_eval(f: &Field, q: &Bivar, a: usize, b: usize, xpow: &[Elem], zpow: &[Elem]) -> Elem {
    let mut acc = 0;
    for (j, qj) in q.iter().enumerate().skip(b) {
        if !binom_odd(j, b) || zpow[j - b] == 0 {
            continue;
        }
        let mut inner = 0;
        for (i, &c) in qj.iter().enumerate().skip(a) {
            if c != 0 && binom_odd(i, a) {
                inner ^= f.mul(c, xpow[i - a]);
            }
        }
        acc ^= f.mul(inner, zpow[j - b]);
    }
    acc
}

fn powers(f: &Field, x: Elem, count: usize) -> Vec<Elem> {
    let mut v = Vec::with_capacity(count);
    let mut p = 1;
    for _ in 0..count {
        v.push(p);
        p = f.mul(p, x);
    }
    v
}

/// Koetter's iterative interpolation. Each point carries a multiplicity;
/// the result vanishes to that order at every point and has minimal
/// `(1, w)`-weighted degree.
fn interpolate(f: &Field, points: &[(Elem, Elem, usize)], w: usize, list: usize, wdeg: usize) -> Bivar {
    let mut polys: Vec<Bivar> = (0..=list)
        .map(|i| {
            let mut q: Bivar = vec![Vec::new(); i + 1];
            q[i] = vec![1];
            q
        })
        .collect();
    // Leading monomial of polys[i] is x^lead_x[i] z^i.
    let mut lead_x = vec![0usize; list + 1];
    for &(x0, z0, mult) in points {
        let xlen = polys.iter().flatten().map(Vec::len).max().unwrap_or(0);
        let xpow = powers(f, x0, xlen.max(wdeg) + mult + 1);
        let zpow = powers(f, z0, list + 1);
        for b in 0..mult {
            for a in 0..mult - b {
                let deltas: Vec<Elem> = polys
                    .iter()
                    .map(|q| hasse_eval(f, q, a, b, &xpow, &zpow))
                    .collect();
                let Some(star) = (0..=list)
                    .filter(|&i| deltas[i] != 0)
                    .min_by_key(|&i| (lead_x[i] + i * w, i))
                else {
                    continue;
                };
                let ds = deltas[star];
                let pstar = polys[star].clone();
                for i in 0..=list {
                    if i == star || deltas[i] == 0 {
                        continue;
                    }
                    let di = deltas[i];
                    let q = &mut polys[i];
                    if q.len() < pstar.len() {
                        q.resize(pstar.len(), Vec::new());
                    }
                    for (qj, pj) in q.iter_mut().zip(&pstar) {
                        for c in qj.iter_mut() {
                            *c = f.mul(*c, ds);
                        }
                        if qj.len() < pj.len() {
                            qj.resize(pj.len(), 0);
                        }
                        for (c, &p) in qj.iter_mut().zip(pj) {
                            *c ^= f.mul(di, p);
                        }
                    }
                    for qj in q.iter_mut().skip(pstar.len()) {
                        for c in qj.iter_mut() {
                            *c = f.mul(*c, ds);
                        }
                    }
                }
                // polys[star] *= (x - x0)
                for qj in polys[star].iter_mut() {
                    if qj.is_empty() {
                        continue;
                    }
                    let mut next = vec![0; qj.len() + 1];
                    for (i, &c) in qj.iter().enumerate() {
                        next[i + 1] ^= c;
                        next[i] ^= f.mul(c, x0);
                    }
                    *qj = next;
                }
                lead_x[star] += 1;
            }
        }
    }
    let best = (0..=list).min_by_key(|&i| (lead_x[i] + i * w, i)).unwrap();
    let mut q = std::mem::take(&mut polys[best]);
    for qj in q.iter_mut() {
        while qj.last() == Some(&0) {
            qj.pop();
        }
    }
    while q.last().is_some_and(|v| v.is_empty()) {
        q.pop();
    }
    q
}

/// Divides every coefficient by the largest common power of `x`.
fn strip_x(q: &mut Bivar) {
    let v = q
        .iter()
        .filter_map(|qj| qj.iter().position(|&c| c != 0))
        .min()
        .unwrap_or(0);
    if v > 0 {
        for qj in q.iter_mut() {
            if qj.len() > v {
                qj.drain(..v);
            } else {
                qj.clear();
            }
        }
    }
}

/// Roth-Ruckenstein: all `p` with `deg p < dim` and `Q(x, p(x)) = 0`
/// (plus possibly spurious prefixes, filtered by the caller).
fn rr_roots(f: &Field, q: &Bivar, dim: usize) -> Vec<Vec<Elem>> {
    let mut out = Vec::new();
    let mut q0 = q.clone();
    strip_x(&mut q0);
    let mut prefix = Vec::with_capacity(dim);
    rr_rec(f, &q0, dim, &mut prefix, &mut out);
    out
}

fn rr_rec(f: &Field, q: &Bivar, dim: usize, prefix: &mut Vec<Elem>, out: &mut Vec<Vec<Elem>>) {
    if prefix.len() == dim {
        out.push(prefix.clone());
        return;
    }
    // If Q(x, 0) = 0 then z divides Q and p = prefix (padded with zeros) is a root.
    let univ: Vec<Elem> = q.iter().map(|qj| qj.first().copied().unwrap_or(0)).collect();
    let univ = Poly::from_coeffs(univ);
    if univ.is_zero() {
        return;
    }
    for gamma in f.elements() {
        if univ.eval(f, gamma) != 0 {
            continue;
        }
        // Q(x, x z + gamma): coefficient of z^t is x^t sum_j C(j,t) gamma^(j-t) Q_j(x).
        let gp = powers(f, gamma, q.len() + 1);
        let mut next: Bivar = vec![Vec::new(); q.len()];
        for (t, nt) in next.iter_mut().enumerate() {
            let mut acc: Vec<Elem> = Vec::new();
            for (j, qj) in q.iter().enumerate().skip(t) {
                if !binom_odd(j, t) || gp[j - t] == 0 || qj.is_empty() {
                    continue;
                }
                if acc.len() < qj.len() {
                    acc.resize(qj.len(), 0);
                }
                for (a, &c) in acc.iter_mut().zip(qj) {
                    *a ^= f.mul(c, gp[j - t]);
                }
            }
            while acc.last() == Some(&0) {
                acc.pop();
            }
            if !acc.is_empty() {
                let mut shifted = vec![0; t];
                shifted.extend(acc);
                *nt = shifted;
            }
        }
        strip_x(&mut next);
        prefix.push(gamma);
        rr_rec(f, &next, dim, prefix, out);
        prefix.pop();
    }
}

fn interpolation_decode(code: &GoppaCode, y: &BitVector, tau: usize) -> Result<DecodeResult> {
    let f = code.field();
    let (n, r) = (code.n(), code.r());
    let p = gs_params(n, r, tau).ok_or_else(|| {
        Error::Capacity(format!("no feasible interpolation parameters for n={n}, r={r}, tau={tau}"))
    })?;
    let support = code.support();
    // Column multipliers of the Reed-Solomon supercode of Γ(L, G²):
    // c_j = mult_j * p(L_j) with deg p < n - 2r.
    let g2 = code.gpoly().square(f);
    let loc = Poly::from_roots(f, support).derivative();
    let mult: Vec<Elem> = support
        .iter()
        .map(|&a| f.div(g2.eval(f, a), loc.eval(f, a)))
        .collect::<Result<_>>()?;
    let mut points = Vec::with_capacity(2 * n);
    for (j, &a) in support.iter().enumerate() {
        let one = f.inv(mult[j])?;
        let (rx, other) = if y.get(j) { (one, 0) } else { (0, one) };
        points.push((a, rx, p.s));
        if p.s_other > 0 {
            points.push((a, other, p.s_other));
        }
    }
    let q = interpolate(f, &points, p.dim - 1, p.list, p.wdeg);
    let mut words = Vec::new();
    for coeffs in rr_roots(f, &q, p.dim) {
        let poly = Poly::from_coeffs(coeffs);
        let mut c = BitVector::zeros(n);
        let mut binary = true;
        for (j, &a) in support.iter().enumerate() {
            match f.mul(mult[j], poly.eval(f, a)) {
                0 => {}
                1 => c.set(j, true),
                _ => {
                    binary = false;
                    break;
                }
            }
        }
        if binary && c.distance(y) <= tau && code.is_codeword(&c) {
            words.push(c);
        }
    }
    Ok(DecodeResult::from_codewords(y, words))
}

// ---------------------------------------------------------------------------
// Brute-force oracle

const SPHERE_LIMIT: f64 = 1e7;

/// All codewords within `tau` of `y`, by enumerating either the error
/// patterns of weight `<= tau` or the `2^k` codewords, whichever is cheaper.
pub fn sphere_oracle(code: &GoppaCode, y: &BitVector, tau: usize) -> Result<DecodeResult> {
    check_len(code, y)?;
    let (n, k) = (code.n(), code.k());
    let tau = tau.min(n);
    let ball: f64 = (0..=tau)
        .map(|i| 2f64.powf(log2_binomial(n as f64, i as f64)))
        .sum();
    let words_cost = if k <= 20 { 2f64.powi(k as i32) } else { f64::INFINITY };
    if ball > SPHERE_LIMIT && words_cost > SPHERE_LIMIT {
        return Err(Error::Capacity(format!(
            "sphere of radius {tau} in length {n} and 2^{k} codewords both exceed the limit"
        )));
    }
    let mut words = Vec::new();
    if words_cost <= ball {
        let mut c = BitVector::zeros(n);
        if c.distance(y) <= tau {
            words.push(c.clone());
        }
        for i in 1u64..1 << k {
            c.xor_assign(&code.gen().row(i.trailing_zeros() as usize));
            if c.distance(y) <= tau {
                words.push(c.clone());
            }
        }
    } else {
        let h: &BinMatrix = code.parity_bin();
        let ht = h.transpose();
        let s0 = h.mul_vec(y);
        let mut stack: Vec<(usize, BitVector, Vec<usize>)> = vec![(0, s0, Vec::new())];
        while let Some((start, syn, set)) = stack.pop() {
            if syn.is_zero() {
                let mut c = y.clone();
                for &j in &set {
                    c.flip(j);
                }
                words.push(c);
            }
            if set.len() == tau {
                continue;
            }
            for j in start..n {
                let mut next = set.clone();
                next.push(j);
                stack.push((j + 1, syn.xor(&ht.row(j)), next));
            }
        }
    }
    Ok(DecodeResult::from_codewords(y, words))
}
